"""Truncated Fock-space numerics: states, Gaussian unitaries, and the
brute-force discrimination/estimation oracles that back every closed form
in the package.

Conventions
===========
* Single-mode basis {|0⟩, …, |cutoff⟩}; multi-mode arrays use Kronecker
  ordering with the first mode slowest: index = Σ_m n_m · dim^(modes−1−m).
* Annihilator â: ⟨n−1|â|n⟩ = √n.
* Beamsplitter of transmissivity t on modes (i, j):
  B = exp[θ(â_i†â_j − â_iâ_j†)] with θ = arccos√t, so that
  B |α⟩_i ⊗ |0⟩_j = |√t α⟩_i ⊗ |−√(1−t) α⟩_j.
* Squeezer: S(r) = exp[r(â² − â†²)/2], giving S†âS = cosh(r)â − sinh(r)â†.
* Phase shift: P(θ) = exp(−iθ n̂), giving P†âP = e^{−iθ}â.
* Qubit ⊗ mode operators (`qubit_fock_operator`): qubit index 0 = |g⟩,
  1 = |e⟩, σ_z = |e⟩⟨e| − |g⟩⟨g| = diag(−1, +1), σ⁻ = |g⟩⟨e|.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.linalg import expm
from scipy.special import gammainc

__all__ = [
    "TAIL_TOL",
    "CUTOFF_CAP",
    "TruncationOverflowError",
    "FockSpace",
    "PureState",
    "DensityOperator",
    "cutoff_for_thermal",
    "cutoff_for_coherent",
    "coherent_state",
    "thermal_state",
    "tensor_states",
    "apply_gaussian_unitary",
    "partial_trace",
    "chernoff_exponent",
    "helstrom_error",
    "qfi_numeric",
    "quantum_relative_entropy",
    "qubit_fock_operator",
    "annihilation_matrix",
    "displacement_matrix",
    "squeeze_matrix",
    "coherent_amplitudes",
    "thermal_weights",
    "attenuated_coherent_dyadic",
    "coherent_through_loss",
    "tmsv_through_loss",
    "tmsv_through_loss_compact",
    "ChernoffResult",
    "QFIResult",
]

#: Maximum basis-truncation tail mass silently tolerated by state builders.
TAIL_TOL = 1e-10

#: Hard ceiling for automatic cutoff selection (keeps N ≲ 30 Fock-exact;
#: larger occupations belong to the covariance-matrix engine).
CUTOFF_CAP = 256


class TruncationOverflowError(ValueError):
    """Raised when a requested state cannot fit in the truncated basis
    without exceeding the tail-mass tolerance."""


# ======================================================================
# spaces and states
# ======================================================================

@dataclass(frozen=True)
class FockSpace:
    """Truncated bosonic Hilbert space: `modes` modes, each with basis
    {|0⟩, …, |cutoff⟩} (dimension cutoff+1 per mode)."""

    cutoff: int
    modes: int = 1

    def __post_init__(self):
        if int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise ValueError(f"cutoff must be an integer >= 1, got {self.cutoff}")
        if int(self.modes) != self.modes or self.modes < 1:
            raise ValueError(f"modes must be an integer >= 1, got {self.modes}")

    @property
    def dim(self) -> int:
        """Single-mode dimension, cutoff + 1."""
        return self.cutoff + 1

    @property
    def total_dim(self) -> int:
        """Dimension of the full tensor-product space, (cutoff+1)^modes."""
        return self.dim ** self.modes

    def basis_index(self, *occupations: int) -> int:
        """Flat index of the basis vector |n_0, n_1, …⟩."""
        if len(occupations) != self.modes:
            raise ValueError("need one occupation number per mode")
        idx = 0
        for n in occupations:
            if not 0 <= n <= self.cutoff:
                raise ValueError(f"occupation {n} outside [0, {self.cutoff}]")
            idx = idx * self.dim + n
        return idx

    def annihilator(self, mode: int = 0) -> np.ndarray:
        """Full-space matrix of â acting on `mode`."""
        self._check_mode(mode)
        op = annihilation_matrix(self.cutoff)
        return self._embed_single(op, mode)

    def number_operator(self, mode: int = 0) -> np.ndarray:
        """Full-space matrix of n̂ = â†â acting on `mode`."""
        self._check_mode(mode)
        op = np.diag(np.arange(self.dim, dtype=float))
        return self._embed_single(op, mode)

    def _check_mode(self, mode: int) -> None:
        if not 0 <= mode < self.modes:
            raise ValueError(f"mode index {mode} out of range for {self.modes} modes")

    def _embed_single(self, op: np.ndarray, mode: int) -> np.ndarray:
        out = np.array([[1.0]], dtype=op.dtype)
        for m in range(self.modes):
            out = np.kron(out, op if m == mode else np.eye(self.dim))
        return out


class PureState:
    """Normalized state vector |ψ⟩ over a :class:`FockSpace`.

    The amplitude vector is renormalized at construction; a pre-normalization
    defect larger than `norm_tol` (default 1e-6) is rejected as a sign of a
    construction bug rather than round-off.
    """

    __slots__ = ("space", "amplitudes")

    def __init__(self, space: FockSpace, amplitudes, norm_tol: float = 1e-6):
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape != (space.total_dim,):
            raise ValueError(
                f"amplitude vector has length {amplitudes.size}, "
                f"space needs {space.total_dim}"
            )
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > norm_tol:
            raise ValueError(f"state norm {norm} deviates from 1 beyond {norm_tol}")
        self.space = space
        self.amplitudes = amplitudes / norm

    def density(self) -> "DensityOperator":
        """Rank-1 density operator |ψ⟩⟨ψ|."""
        return DensityOperator(self.space, np.outer(self.amplitudes, self.amplitudes.conj()))

    def overlap(self, other: "PureState") -> complex:
        """⟨other|self⟩."""
        return complex(np.vdot(other.amplitudes, self.amplitudes))

    def mean_photons(self, mode: int = 0) -> float:
        """⟨n̂⟩ on `mode`."""
        n_op = self.space.number_operator(mode)
        return float(np.real(np.vdot(self.amplitudes, n_op @ self.amplitudes)))


class DensityOperator:
    """Hermitian, unit-trace operator over a :class:`FockSpace`.

    Hermiticity is enforced at construction (defect tolerance 1e-12 relative
    to the largest entry); the trace is renormalized to exactly 1, rejecting
    pre-normalization defects above `trace_tol` (default 1e-6).  Positivity
    is exposed via :meth:`min_eigenvalue` rather than being recomputed on
    every intermediate construction.
    """

    __slots__ = ("space", "matrix")

    def __init__(self, space: FockSpace, matrix, trace_tol: float = 1e-6):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (space.total_dim, space.total_dim):
            raise ValueError(
                f"matrix shape {matrix.shape} does not match space dimension "
                f"{space.total_dim}"
            )
        scale = max(1.0, float(np.abs(matrix).max()))
        herm_defect = float(np.abs(matrix - matrix.conj().T).max())
        if herm_defect > 1e-12 * scale:
            raise ValueError(f"matrix is non-Hermitian (defect {herm_defect:.3e})")
        tr = float(np.trace(matrix).real)
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"trace {tr} deviates from 1 beyond {trace_tol}")
        self.space = space
        self.matrix = 0.5 * (matrix + matrix.conj().T) / tr

    @classmethod
    def from_pure(cls, state: PureState) -> "DensityOperator":
        return state.density()

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def purity(self) -> float:
        """Tr ρ²."""
        return float(np.real(np.einsum("ij,ji->", self.matrix, self.matrix)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def mean_photons(self, mode: int = 0) -> float:
        n_op = self.space.number_operator(mode)
        return float(np.real(np.einsum("ij,ji->", n_op, self.matrix)))

    def expectation(self, operator: np.ndarray) -> float:
        """Re Tr(Ô ρ) for a Hermitian observable Ô."""
        return float(np.real(np.einsum("ij,ji->", np.asarray(operator), self.matrix)))


def _matrix_of(state) -> np.ndarray:
    """Accept DensityOperator, PureState, or a raw matrix."""
    if isinstance(state, DensityOperator):
        return state.matrix
    if isinstance(state, PureState):
        return np.outer(state.amplitudes, state.amplitudes.conj())
    return np.asarray(state, dtype=complex)


# ======================================================================
# elementary matrices and auto-cutoff policy
# ======================================================================

def annihilation_matrix(cutoff: int) -> np.ndarray:
    """Single-mode â on basis {|0⟩,…,|cutoff⟩}: ⟨n−1|â|n⟩ = √n."""
    return np.diag(np.sqrt(np.arange(1.0, cutoff + 1)), 1)


def displacement_matrix(beta: complex, cutoff: int) -> np.ndarray:
    """D(β) = exp(βâ† − β*â) on the truncated basis (exactly unitary there)."""
    a = annihilation_matrix(cutoff)
    return expm(beta * a.conj().T - np.conj(beta) * a)


def squeeze_matrix(r: float, cutoff: int) -> np.ndarray:
    """S(r) = exp[r(â² − â†²)/2] on the truncated basis."""
    a = annihilation_matrix(cutoff)
    return expm(0.5 * r * (a @ a - a.conj().T @ a.conj().T))


def coherent_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    """Unnormalized truncation of e^{−|α|²/2} α^n/√(n!)."""
    if alpha == 0:
        v = np.zeros(cutoff + 1, dtype=complex)
        v[0] = 1.0
        return v
    n = np.arange(cutoff + 1)
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1.0, cutoff + 1)))))
    return np.exp(-0.5 * abs(alpha) ** 2 + n * np.log(complex(alpha)) - 0.5 * log_fact)


def thermal_weights(n_mean: float, cutoff: int) -> np.ndarray:
    """Geometric occupation weights c^n/(1+N), c = N/(1+N), NOT renormalized."""
    if n_mean <= 0:
        w = np.zeros(cutoff + 1)
        w[0] = 1.0
        return w
    c = n_mean / (1.0 + n_mean)
    return np.exp(np.arange(cutoff + 1) * np.log(c) - np.log1p(n_mean))


def cutoff_for_thermal(n_mean: float, tail_tol: float = TAIL_TOL,
                       cap: int = CUTOFF_CAP) -> int:
    """Smallest cutoff whose discarded thermal tail mass is below tail_tol."""
    if n_mean <= 0:
        return 1
    c = n_mean / (1.0 + n_mean)
    needed = int(np.ceil(np.log(tail_tol) / np.log(c))) - 1
    needed = max(needed, 1)
    if needed > cap:
        raise TruncationOverflowError(
            f"thermal occupation {n_mean} needs cutoff {needed} > cap {cap}; "
            "use the covariance-matrix engine for occupations this large"
        )
    return needed


def cutoff_for_coherent(alpha: complex, tail_tol: float = TAIL_TOL,
                        cap: int = CUTOFF_CAP) -> int:
    """Smallest cutoff whose discarded Poissonian tail mass is below tail_tol."""
    lam = abs(alpha) ** 2
    if lam == 0:
        return 1
    for c in range(max(1, int(lam)), cap + 1):
        if gammainc(c + 1, lam) <= tail_tol:
            return c
    raise TruncationOverflowError(
        f"coherent amplitude |α|²={lam} needs cutoff > cap {cap}"
    )


# ======================================================================
# state builders
# ======================================================================

def coherent_state(alpha: complex, space: FockSpace) -> PureState:
    """Coherent state |α⟩ on a single-mode space.

    Requires |α|² ≤ cutoff/4 (truncation safety margin); raises
    :class:`TruncationOverflowError` if the discarded Poisson tail would
    still exceed TAIL_TOL.
    """
    if space.modes != 1:
        raise ValueError("coherent_state builds single-mode states; use tensor_states")
    if abs(alpha) ** 2 > space.cutoff / 4:
        raise ValueError(
            f"|alpha|^2 = {abs(alpha)**2:.4g} exceeds cutoff/4 = {space.cutoff / 4}"
        )
    tail = float(gammainc(space.cutoff + 1, abs(alpha) ** 2)) if alpha != 0 else 0.0
    if tail > TAIL_TOL:
        raise TruncationOverflowError(
            f"coherent tail mass {tail:.3e} exceeds {TAIL_TOL} at cutoff {space.cutoff}"
        )
    return PureState(space, coherent_amplitudes(alpha, space.cutoff))


def thermal_state(n_mean: float, space: FockSpace) -> DensityOperator:
    """Thermal state with mean occupation `n_mean` on a single-mode space."""
    if space.modes != 1:
        raise ValueError("thermal_state builds single-mode states; use tensor_states")
    if n_mean < 0:
        raise ValueError("mean occupation must be >= 0")
    w = thermal_weights(n_mean, space.cutoff)
    tail = 1.0 - float(w.sum())
    if tail > TAIL_TOL:
        raise TruncationOverflowError(
            f"thermal tail mass {tail:.3e} exceeds {TAIL_TOL} at cutoff {space.cutoff}"
        )
    return DensityOperator(space, np.diag(w.astype(complex)))


def tensor_states(*states):
    """Tensor product of PureStates (→ PureState) or DensityOperators
    (→ DensityOperator); all factors must share the same cutoff."""
    if not states:
        raise ValueError("need at least one state")
    cutoffs = {s.space.cutoff for s in states}
    if len(cutoffs) != 1:
        raise ValueError("tensor factors must share a cutoff")
    modes = sum(s.space.modes for s in states)
    space = FockSpace(cutoffs.pop(), modes)
    if all(isinstance(s, PureState) for s in states):
        vec = states[0].amplitudes
        for s in states[1:]:
            vec = np.kron(vec, s.amplitudes)
        return PureState(space, vec)
    if all(isinstance(s, DensityOperator) for s in states):
        mat = states[0].matrix
        for s in states[1:]:
            mat = np.kron(mat, s.matrix)
        return DensityOperator(space, mat)
    raise TypeError("mix of pure and mixed factors; promote with .density() first")


# ======================================================================
# Gaussian unitaries
# ======================================================================

def _bs_block(total_n: int, theta: float) -> np.ndarray:
    """exp[θ(â_1†â_2 − â_1â_2†)] restricted to the total-photon-number block
    with basis |j, N−j⟩, j = 0..N (j = photons in mode 1)."""
    k = np.zeros((total_n + 1, total_n + 1))
    for j in range(total_n):
        k[j + 1, j] = np.sqrt((j + 1) * (total_n - j))
        k[j, j + 1] = -np.sqrt((j + 1) * (total_n - j))
    return expm(theta * k)


def _beamsplitter_pair_unitary(transmissivity: float, dim: int) -> np.ndarray:
    """Two-mode beamsplitter on the truncated (dim × dim) pair basis,
    assembled blockwise over total photon number.  Exact (unitary) on blocks
    with N ≤ cutoff; blocks above lose the amplitude that would scatter past
    the cutoff."""
    theta = np.arccos(np.sqrt(transmissivity))
    cut = dim - 1
    u = np.zeros((dim * dim, dim * dim))
    for total_n in range(2 * cut + 1):
        lo, hi = max(0, total_n - cut), min(total_n, cut)
        js = np.arange(lo, hi + 1)
        blk = _bs_block(total_n, theta)
        idx = js * dim + (total_n - js)
        u[np.ix_(idx, idx)] = blk[np.ix_(js, js)]
    return u


def _apply_on_axes(tensor: np.ndarray, op: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Left-multiply `op` onto the flattened group of `axes` of `tensor`."""
    axes = list(axes)
    moved = np.moveaxis(tensor, axes, range(len(axes)))
    shape = moved.shape
    lead = int(np.prod(shape[: len(axes)]))
    out = (op @ moved.reshape(lead, -1)).reshape(shape)
    return np.moveaxis(out, range(len(axes)), axes)


def apply_gaussian_unitary(state, kind: str, *, beta: complex | None = None,
                           r: float | None = None, theta: float | None = None,
                           transmissivity: float | None = None,
                           mode: int = 0, modes: Sequence[int] = (0, 1)):
    """Apply one elementary Gaussian unitary and return a state of the same type.

    kind ∈ {"displacement" (β, mode), "squeeze" (r, mode), "phase" (θ, mode),
    "beamsplitter" (transmissivity, modes=(i, j))}.  See the module docstring
    for the generator conventions.  Trace is preserved to truncation accuracy
    (exactly, except for beamsplitter blocks that scatter past the cutoff).
    """
    space = state.space
    d = space.dim
    k = space.modes
    if kind == "beamsplitter":
        if transmissivity is None or not 0.0 <= transmissivity <= 1.0:
            raise ValueError("beamsplitter needs transmissivity in [0, 1]")
        i, j = modes
        space._check_mode(i)
        space._check_mode(j)
        if i == j:
            raise ValueError("beamsplitter needs two distinct modes")
        op = _beamsplitter_pair_unitary(transmissivity, d)
        act_on = [i, j]
    elif kind == "displacement":
        if beta is None:
            raise ValueError("displacement needs beta")
        space._check_mode(mode)
        op = displacement_matrix(beta, space.cutoff)
        act_on = [mode]
    elif kind == "squeeze":
        if r is None:
            raise ValueError("squeeze needs r")
        space._check_mode(mode)
        op = squeeze_matrix(r, space.cutoff)
        act_on = [mode]
    elif kind == "phase":
        if theta is None:
            raise ValueError("phase needs theta")
        space._check_mode(mode)
        op = np.diag(np.exp(-1j * theta * np.arange(d)))
        act_on = [mode]
    else:
        raise ValueError(f"unknown Gaussian unitary kind {kind!r}")

    if isinstance(state, PureState):
        tensor = state.amplitudes.reshape((d,) * k)
        tensor = _apply_on_axes(tensor.astype(complex), op.astype(complex), act_on)
        return PureState(space, tensor.reshape(-1), norm_tol=1e-6)
    mat = _matrix_of(state)
    tensor = mat.reshape((d,) * (2 * k))
    tensor = _apply_on_axes(tensor, op.astype(complex), act_on)
    tensor = _apply_on_axes(tensor, op.conj().astype(complex),
                            [k + ax for ax in act_on])
    return DensityOperator(space, tensor.reshape(space.total_dim, space.total_dim),
                           trace_tol=1e-6)


def partial_trace(state, keep: Sequence[int]) -> DensityOperator:
    """Trace out all modes not listed in `keep` (order preserved, ascending)."""
    space = state.space
    keep = sorted(set(int(m) for m in keep))
    if not keep:
        raise ValueError("keep must name at least one mode")
    for m in keep:
        space._check_mode(m)
    k = space.modes
    d = space.dim
    mat = _matrix_of(state)
    if len(keep) == k:
        return DensityOperator(space, mat)
    letters = string.ascii_lowercase
    if 2 * k > len(letters):
        raise ValueError("too many modes for partial trace")
    row = list(letters[:k])
    col = list(letters[k:2 * k])
    for m in range(k):
        if m not in keep:
            col[m] = row[m]
    out = "".join(row[m] for m in keep) + "".join(letters[k + m] for m in keep)
    spec_str = "".join(row) + "".join(col) + "->" + out
    reduced = np.einsum(spec_str, mat.reshape((d,) * (2 * k)))
    new_space = FockSpace(space.cutoff, len(keep))
    return DensityOperator(
        new_space, reduced.reshape(new_space.total_dim, new_space.total_dim)
    )


# ======================================================================
# discrimination and estimation oracles
# ======================================================================

class ChernoffResult(NamedTuple):
    """Result of the quantum Chernoff optimization: the optimizing power
    s* and the exponent C = −ln min_s Tr ρ0^s ρ1^{1−s}."""

    s_star: float
    exponent: float


def _clean_eigh(matrix: np.ndarray, floor: float = 1e-14):
    vals, vecs = np.linalg.eigh(matrix)
    return np.clip(vals, floor, None), vecs


def chernoff_exponent(rho0, rho1, tol: float = 1e-10) -> ChernoffResult:
    """Quantum Chernoff exponent between two states.

    Minimizes Q(s) = Tr ρ0^s ρ1^{1−s} by golden-section search on
    s ∈ [1e-4, 1−1e-4] (Q is convex in s), with eigenvalues clamped at
    1e-14 so truncation round-off cannot flip signs.  The n-copy optimal
    error probability obeys ½ e^{−nC} asymptotically and ½ e^{−C} upper
    bounds the single-copy Helstrom error.
    """
    m0 = _matrix_of(rho0)
    m1 = _matrix_of(rho1)
    for name, m in (("rho0", m0), ("rho1", m1)):
        if np.abs(m - m.conj().T).max() > 1e-9 * max(1.0, np.abs(m).max()):
            raise ValueError(f"{name} is not Hermitian")
    l0, u0 = _clean_eigh(m0)
    l1, u1 = _clean_eigh(m1)
    w = np.abs(u0.conj().T @ u1) ** 2
    log0, log1 = np.log(l0), np.log(l1)

    def q_of(s: float) -> float:
        return float(np.exp(s * log0) @ w @ np.exp((1.0 - s) * log1))

    golden = (np.sqrt(5.0) - 1.0) / 2.0
    lo, hi = 1e-4, 1.0 - 1e-4
    x1 = hi - golden * (hi - lo)
    x2 = lo + golden * (hi - lo)
    f1, f2 = q_of(x1), q_of(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - golden * (hi - lo)
            f1 = q_of(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + golden * (hi - lo)
            f2 = q_of(x2)
    s_star = 0.5 * (lo + hi)
    q_min = min(f1, f2, q_of(s_star))
    return ChernoffResult(s_star=s_star, exponent=float(-np.log(q_min)))


def helstrom_error(rho0, rho1) -> float:
    """Minimum equal-prior discrimination error ½(1 − ½‖ρ1 − ρ0‖₁)."""
    diff = _matrix_of(rho1) - _matrix_of(rho0)
    trace_norm = float(np.abs(np.linalg.eigvalsh(diff)).sum())
    return 0.5 * (1.0 - 0.5 * trace_norm)


class QFIResult(NamedTuple):
    """Quantum Fisher information at κ = 0, with the symmetric logarithmic
    derivative L solving ∂ρ = (Lρ + ρL)/2 in the original basis."""

    value: float
    sld: np.ndarray


def qfi_numeric(family: Callable[[float], "DensityOperator | np.ndarray"],
                step: float = 1e-4,
                eigenvalue_floor: float = 1e-12) -> QFIResult:
    """Quantum Fisher information of the family κ ↦ ρ(κ) at κ = 0.

    Uses the Hermitian-symmetrized central difference
    ∂ρ ≈ [ρ(h) − ρ(−h)]/(2h) and the eigenbasis of ρ(0):
    F = 2 Σ_{m,n} |⟨m|∂ρ|n⟩|² / (λ_m + λ_n), with eigenvalue pairs whose sum
    falls below `eigenvalue_floor` excluded (they carry no information at
    this truncation).
    """
    rho0 = _matrix_of(family(0.0))
    drho = (_matrix_of(family(step)) - _matrix_of(family(-step))) / (2.0 * step)
    defect = float(np.abs(drho - drho.conj().T).max())
    scale = max(1.0, float(np.abs(drho).max()))
    if defect > 1e-8 * scale:
        raise ValueError(
            f"finite difference of the family is non-Hermitian (defect {defect:.3e})"
        )
    drho = 0.5 * (drho + drho.conj().T)
    vals, vecs = np.linalg.eigh(rho0)
    vals = np.clip(vals, 0.0, None)
    d_eig = vecs.conj().T @ drho @ vecs
    denom = vals[:, None] + vals[None, :]
    mask = denom > eigenvalue_floor
    ratio = np.zeros_like(d_eig)
    ratio[mask] = d_eig[mask] / denom[mask]
    value = float(2.0 * np.sum(np.abs(d_eig[mask]) ** 2 / denom[mask]))
    sld = vecs @ (2.0 * ratio) @ vecs.conj().T
    return QFIResult(value=value, sld=sld)


def quantum_relative_entropy(rho, sigma, support_floor: float = 1e-14) -> float:
    """D(ρ‖σ) = Tr ρ(ln ρ − ln σ) in nats, by eigendecomposition.

    Eigenvalues are clamped at `support_floor`; a ρ-eigenvector carrying
    mass outside the numerical support of σ therefore shows up as a large
    (but finite) value rather than +∞.
    """
    m_rho = _matrix_of(rho)
    m_sig = _matrix_of(sigma)
    vr, ur = _clean_eigh(m_rho, support_floor)
    vs, us = _clean_eigh(m_sig, support_floor)
    log_rho = ur @ np.diag(np.log(vr)) @ ur.conj().T
    log_sig = us @ np.diag(np.log(vs)) @ us.conj().T
    val = np.einsum("ij,ji->", m_rho, log_rho - log_sig)
    return float(np.real(val))


# ======================================================================
# qubit ⊗ mode operator assembly
# ======================================================================

_QUBIT_ATOMS = {
    "identity": np.eye(2, dtype=complex),
    "sigma_x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "sigma_y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "sigma_z": np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex),
    "sigma_minus": np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex),
    "sigma_plus": np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex),
    "project_g": np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex),
    "project_e": np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex),
}


def _mode_atom(name_or_matrix, cutoff: int) -> np.ndarray:
    if isinstance(name_or_matrix, str):
        dim = cutoff + 1
        if name_or_matrix == "identity":
            return np.eye(dim, dtype=complex)
        if name_or_matrix == "lower":
            return annihilation_matrix(cutoff).astype(complex)
        if name_or_matrix == "raise":
            return annihilation_matrix(cutoff).conj().T.astype(complex)
        if name_or_matrix == "number":
            return np.diag(np.arange(dim, dtype=complex))
        raise ValueError(f"unknown mode atom {name_or_matrix!r}")
    m = np.asarray(name_or_matrix, dtype=complex)
    if m.shape != (cutoff + 1, cutoff + 1):
        raise ValueError(f"mode matrix shape {m.shape} != {(cutoff + 1,) * 2}")
    return m


def _qubit_atom(name_or_matrix) -> np.ndarray:
    if isinstance(name_or_matrix, str):
        try:
            return _QUBIT_ATOMS[name_or_matrix]
        except KeyError:
            raise ValueError(f"unknown qubit atom {name_or_matrix!r}") from None
    m = np.asarray(name_or_matrix, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"qubit matrix shape {m.shape} != (2, 2)")
    return m


def qubit_fock_operator(terms, cutoff: int, add_adjoint: bool = False) -> np.ndarray:
    """Assemble Σ_i c_i (Q_i ⊗ M_i) from symbolic (coeff, qubit, mode) terms.

    Each term is (coefficient, qubit_factor, mode_factor); factors are atom
    names ("sigma_z", "sigma_minus", …; "lower", "raise", "number",
    "identity"), explicit matrices, or None.  Terms with every qubit factor
    None produce a mode-only operator of dimension cutoff+1 (and vice versa
    for mode factors).  `add_adjoint=True` adds the Hermitian conjugate of
    the whole sum.  Ordering of the joint space is kron(qubit, mode) with
    qubit index 0 = |g⟩.
    """
    terms = list(terms)
    if terms and not isinstance(terms[0], (tuple, list)):
        terms = [tuple(terms)]
    if not terms:
        raise ValueError("need at least one term")
    qubit_none = [t[1] is None for t in terms]
    mode_none = [t[2] is None for t in terms]
    if any(qubit_none) and not all(qubit_none):
        raise ValueError("qubit factors must be all None or all present")
    if any(mode_none) and not all(mode_none):
        raise ValueError("mode factors must be all None or all present")
    if all(qubit_none) and all(mode_none):
        raise ValueError("terms carry neither qubit nor mode factors")
    use_qubit = not all(qubit_none)
    use_mode = not all(mode_none)
    dim = (2 if use_qubit else 1) * ((cutoff + 1) if use_mode else 1)
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, q_fac, m_fac in terms:
        factor = np.array([[1.0 + 0.0j]])
        if use_qubit:
            factor = np.kron(factor, _qubit_atom(q_fac))
        if use_mode:
            factor = np.kron(factor, _mode_atom(m_fac, cutoff))
        out += complex(coeff) * factor
    if add_adjoint:
        out = out + out.conj().T
    return out


# ======================================================================
# thermal-loss channel builders
# ======================================================================

def attenuated_coherent_dyadic(beta: complex, beta_prime: complex,
                               amplitude: complex, n_env: float,
                               cutoff: int) -> np.ndarray:
    """Image of the coherent dyadic |β⟩⟨β′| under a thermal attenuator.

    The channel mixes the mode with a thermal environment of occupation
    `n_env` at amplitude transmissivity κ (`amplitude`); the closed form is
    ⟨β′|β⟩ · e^{|κ|²|β−β′|²/(2(2N+1))} · e^{(vū−v̄u)/2} · D(u) ρ_N D(v)†
    with N = (1−|κ|²)·n_env and
    u = κ[(β+β′) + (β−β′)/(2N+1)]/2, v = κ[(β+β′) − (β−β′)/(2N+1)]/2.
    Returns a raw (cutoff+1)² matrix (a dyadic image, not a state).
    """
    kappa = complex(amplitude)
    t = abs(kappa) ** 2
    if not 0.0 <= t <= 1.0:
        raise ValueError("amplitude transmissivity magnitude must lie in [0, 1]")
    n_out = (1.0 - t) * n_env
    sigma = 2.0 * n_out + 1.0
    u = 0.5 * kappa * ((beta + beta_prime) + (beta - beta_prime) / sigma)
    v = 0.5 * kappa * ((beta + beta_prime) - (beta - beta_prime) / sigma)
    overlap = np.exp(-0.5 * abs(beta) ** 2 - 0.5 * abs(beta_prime) ** 2
                     + np.conj(beta_prime) * beta)
    gauss = np.exp(t * abs(beta - beta_prime) ** 2 / (2.0 * sigma))
    phase = np.exp(0.5 * (v * np.conj(u) - np.conj(v) * u))
    rho_env = np.diag(thermal_weights(n_out, cutoff).astype(complex))
    du = displacement_matrix(u, cutoff)
    dv = displacement_matrix(v, cutoff)
    return overlap * gauss * phase * (du @ rho_env @ dv.conj().T)


def coherent_through_loss(alpha: complex, amplitude: complex, n_env: float,
                          space: FockSpace) -> DensityOperator:
    """Coherent state |α⟩ through the thermal attenuator of amplitude
    transmissivity `amplitude` and environment occupation `n_env`:
    a displaced thermal state D(κα) ρ_N D†(κα), N = (1−|κ|²)n_env."""
    if space.modes != 1:
        raise ValueError("coherent_through_loss returns a single-mode state")
    mat = attenuated_coherent_dyadic(alpha, alpha, amplitude, n_env, space.cutoff)
    return DensityOperator(space, mat, trace_tol=1e-4)


def tmsv_through_loss_compact(n_signal: float, n_env: float, amplitude: float,
                              signal_cutoff: int, idler_rank: int | None = None,
                              env_cutoff: int | None = None):
    """Memory-lean core of :func:`tmsv_through_loss`.

    Returns (matrix, idler_dim, return_dim): a renormalized density matrix on
    the compact (idler_rank+1) × (signal_cutoff+1) product lattice, with the
    idler index slowest.  See :func:`tmsv_through_loss` for the physics.
    """
    if n_signal < 0 or n_env < 0:
        raise ValueError("occupations must be >= 0")
    kappa = float(amplitude)
    if abs(kappa) > 1.0:
        raise ValueError("amplitude transmissivity magnitude must lie in [0, 1]")
    scut = int(signal_cutoff)
    rdim = scut + 1
    if idler_rank is None:
        idler_rank = min(scut, cutoff_for_thermal(n_signal) if n_signal > 0 else 0)
    if env_cutoff is None:
        env_cutoff = cutoff_for_thermal(n_env) if n_env > 0 else 0
    idler_rank = int(min(idler_rank, scut))

    if n_signal > 0:
        c_s = n_signal / (1.0 + n_signal)
        p = (1.0 - c_s) * c_s ** np.arange(idler_rank + 1)
    else:
        p = np.array([1.0])
    p = p / p.sum()
    n_keep = p.size

    if kappa == 0.0:
        w_env = thermal_weights(n_env, scut)
        w_env = w_env / w_env.sum()
        joint = np.kron(np.diag(p), np.diag(w_env)).astype(complex)
        return joint, n_keep, rdim

    theta = np.arccos(np.sqrt(kappa ** 2))
    env_w = thermal_weights(n_env, env_cutoff)
    env_w = env_w / env_w.sum()
    max_total = (n_keep - 1) + env_cutoff
    blocks = [_bs_block(n, theta) for n in range(max_total + 1)]
    sqrt_p = np.sqrt(p)

    # Stinespring sum over the environment: for each thermal input |b⟩ the
    # joint amplitude on (idler k, return s, env-out j) is √p_k · B[s, k]
    # restricted to j = k + b − s; tracing the environment contracts j.
    out = np.zeros((n_keep * rdim,) * 2)
    for b in range(env_cutoff + 1):
        if env_w[b] <= 0.0:
            continue
        amp = np.zeros((n_keep, rdim, max_total + 1))
        for k in range(n_keep):
            total_n = k + b
            blk = blocks[total_n]
            s_hi = min(scut, total_n)
            s_idx = np.arange(s_hi + 1)
            amp[k, s_idx, total_n - s_idx] = blk[s_idx, k] * sqrt_p[k]
        flat = amp.reshape(n_keep * rdim, max_total + 1)
        out += env_w[b] * (flat @ flat.T)

    if kappa < 0.0:  # binary-phase π flip acts as parity on the return mode
        par = np.kron(np.ones(n_keep), (-1.0) ** np.arange(rdim))
        out = out * np.outer(par, par)

    out = out.astype(complex)
    return out / np.trace(out).real, n_keep, rdim


def tmsv_through_loss(n_signal: float, n_env: float, amplitude: float,
                      space: FockSpace, idler_rank: int | None = None,
                      env_cutoff: int | None = None) -> DensityOperator:
    """Joint (idler, return) state of a two-mode squeezed vacuum whose signal
    arm passed through a thermal attenuator.

    The signal arm (mean occupation `n_signal`) is mixed on a beamsplitter of
    amplitude transmissivity `amplitude` with a thermal environment of
    occupation `n_env`; the idler is kept ideally.  A negative `amplitude`
    is folded into a parity conjugation (−1)^n on the return mode, which is
    how the π phase of a binary-phase alphabet acts on this state.

    The state is assembled exactly on the photon-number lattice: the Schmidt
    superposition Σ_k √p_k |k⟩_I |k⟩_S, a thermal mixture over environment
    inputs, blockwise beamsplitter scattering per total photon number, and a
    trace over the environment output.  `idler_rank` and `env_cutoff` bound
    the retained Schmidt rank and environment basis (auto-selected from
    TAIL_TOL when omitted); the result is renormalized on `space`
    (a two-mode space: mode 0 = idler, mode 1 = return).
    """
    if space.modes != 2:
        raise ValueError("tmsv_through_loss needs a two-mode space (idler, return)")
    compact, n_keep, rdim = tmsv_through_loss_compact(
        n_signal, n_env, amplitude, space.cutoff, idler_rank, env_cutoff
    )
    dim = space.dim
    if n_keep == dim:
        return DensityOperator(space, compact)
    embedded = np.zeros((dim * dim, dim * dim), dtype=complex)
    rows = (np.arange(n_keep)[:, None] * dim + np.arange(rdim)[None, :]).reshape(-1)
    embedded[np.ix_(rows, rows)] = compact
    return DensityOperator(space, embedded)
