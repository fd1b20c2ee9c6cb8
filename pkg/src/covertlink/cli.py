"""Command-line surface for the covert-link toolkit.

Subcommands
  metrics     receiver exponents, ceilings, gains for one transmitter instance
  bounds      sweep of closed-form exponents and ultimate bounds vs N_S
  figure3     gain-decay sweep plus the max-gain-vs-background sibling curve
  covert      covert photon budget, square-root-law bit yield, key costs
  simulate    Monte Carlo: homodyne | tmsv | eve | coding
  screceiver  cat-receiver SNR-ratio diagnostics
  linkbudget  geometry and temperature -> eta, N_B, slots per bit
  selftest    fast internal cross-check suite (exit 1 on failure)

Outputs are deterministic for a fixed configuration: CSV files carry
'#'-prefixed metadata (tool version, config hash, seed, per-column
definitions) and JSON mirrors the same under a top-level "provenance"
object; neither embeds timestamps.  Grids use the syntax
start:stop:{lin|log}[:points] with 50 points by default.  When --out is
omitted, JSON goes to stdout and CSV lands in $COVERTLINK_OUTDIR (or the
working directory) under a canonical name.

Exit codes: 0 success, 1 failed selftest, 2 configuration error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import covertness, gaussian, metrics, montecarlo, screceiver, transmitters

DEFAULT_GRID_POINTS = 50

try:
    from importlib.metadata import PackageNotFoundError, version

    try:
        _VERSION = version("covertlink")
    except PackageNotFoundError:
        _VERSION = "0.0.0+uninstalled"
except ImportError:  # pragma: no cover - importlib.metadata is stdlib >=3.8
    _VERSION = "0.0.0+unknown"


# ======================================================================
# plumbing: grids, hashing, deterministic writers
# ======================================================================

def parse_grid(text: str) -> np.ndarray:
    """Parse 'start:stop:{lin|log}[:points]' into a 1-D parameter grid."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ValueError(
            f"grid must look like start:stop:lin|log[:points], got {text!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ValueError(f"bad grid endpoints in {text!r}") from exc
    kind = parts[2]
    points = DEFAULT_GRID_POINTS
    if len(parts) == 4:
        points = int(parts[3])
        if points < 2:
            raise ValueError(f"grid needs at least 2 points, got {points}")
    if kind == "lin":
        return np.linspace(start, stop, points)
    if kind == "log":
        if start <= 0 or stop <= 0:
            raise ValueError("log grids need positive endpoints")
        return np.geomspace(start, stop, points)
    raise ValueError(f"grid kind must be lin or log, got {kind!r}")


def _config_hash(args: argparse.Namespace) -> str:
    """Stable digest of the effective configuration (output path excluded)."""
    payload = {k: v for k, v in sorted(vars(args).items())
               if k not in ("out", "func")}
    canon = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _csv_text(args: argparse.Namespace, columns: list[tuple[str, str]],
              rows, seed=None) -> str:
    lines = [
        "# tool: covertlink",
        f"# version: {_VERSION}",
        f"# config_sha256: {_config_hash(args)}",
    ]
    if seed is not None:
        lines.append(f"# seed: {seed}")
    for name, definition in columns:
        lines.append(f"# column {name}: {definition}")
    lines.append(",".join(name for name, _ in columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_text(args: argparse.Namespace, payload: dict, seed=None) -> str:
    provenance = {"tool": "covertlink", "version": _VERSION,
                  "config_sha256": _config_hash(args)}
    if seed is not None:
        provenance["seed"] = seed
    doc = {"provenance": provenance}
    doc.update(payload)
    return json.dumps(doc, sort_keys=True, indent=2, default=float) + "\n"


def _out_dir() -> Path:
    return Path(os.environ.get("COVERTLINK_OUTDIR", "."))


def _emit_json(args: argparse.Namespace, payload: dict, seed=None) -> None:
    text = _json_text(args, payload, seed=seed)
    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)


def _emit_csv(args: argparse.Namespace, default_name: str,
              columns: list[tuple[str, str]], rows, seed=None) -> Path:
    path = Path(args.out) if args.out else _out_dir() / default_name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(_csv_text(args, columns, rows, seed=seed), encoding="utf-8")
    print(f"wrote {path}")
    return path


def _schmidt_for(name: str, n_s: float):
    if name == "coherent":
        return transmitters.coherent_schmidt(n_s)
    if name == "tmsv":
        return transmitters.tmsv_schmidt(n_s)
    if name == "sc":
        return transmitters.sc_schmidt(n_s)
    raise ValueError(f"unknown transmitter {name!r}")


# ======================================================================
# subcommands
# ======================================================================

def cmd_metrics(args: argparse.Namespace) -> int:
    schmidt = _schmidt_for(args.transmitter, args.NS)
    report = metrics.receiver_report(schmidt, args.NB)
    payload = {
        "transmitter": args.transmitter,
        "n_s": args.NS,
        "n_b": args.NB,
        "beta_col": report.beta_col,
        "beta_loc": report.beta_loc,
        "bound_col": report.bound_col,
        "bound_loc": report.bound_loc,
        "gain_col_db": report.gain_col_db,
        "gain_loc_db": report.gain_loc_db,
    }
    if args.eta is not None and args.M is not None:
        p_col = metrics.error_probability(report.beta_col, args.eta, args.M)
        p_loc = metrics.error_probability(report.beta_loc, args.eta, args.M)
        payload["p_err"] = {
            "eta": args.eta,
            "m_slots": args.M,
            "collective_exponential": p_col.exponential_bound,
            "local_exponential": p_loc.exponential_bound,
            "local_gaussian": p_loc.gaussian_threshold,
        }
    _emit_json(args, payload)
    return 0


_BOUNDS_COLUMNS = [
    ("NS", "signal mean photon number per use (dimensionless)"),
    ("beta_cl_col", "coherent-baseline collective exponent (per eta^2 M)"),
    ("beta_cl_loc", "coherent-baseline local exponent (per eta^2 M)"),
    ("beta_tmsv_col", "two-mode-squeezed collective exponent (per eta^2 M)"),
    ("beta_tmsv_loc", "two-mode-squeezed local exponent (per eta^2 M)"),
    ("beta_sc_col", "cat-state collective exponent (per eta^2 M)"),
    ("beta_sc_loc", "cat-state local exponent (per eta^2 M)"),
    ("bound_col", "transmitter-independent collective ceiling (per eta^2 M)"),
    ("bound_loc", "transmitter-independent local ceiling (per eta^2 M)"),
]


def cmd_bounds(args: argparse.Namespace) -> int:
    grid = parse_grid(args.NS_grid)
    rows = []
    for n_s in grid:
        cl = metrics.coherent_closed_forms(n_s, args.NB)
        tm = metrics.tmsv_closed_forms(n_s, args.NB)
        sc = metrics.sc_closed_forms(n_s, args.NB)
        ub = metrics.ultimate_bounds(n_s, args.NB)
        rows.append((n_s, cl[0], cl[1], tm[0], tm[1], sc[0], sc[1],
                     ub.bound_col, ub.bound_loc))
    _emit_csv(args, f"bounds_nb{args.NB:g}.csv", _BOUNDS_COLUMNS, rows)
    return 0


_FIG3_COLUMNS = [
    ("NS", "signal mean photon number per use (dimensionless)"),
    ("g_col_tmsv", "TMSV/coherent collective exponent ratio (linear)"),
    ("g_loc_tmsv", "TMSV/coherent local exponent ratio (linear)"),
    ("g_col_sc", "cat/coherent collective exponent ratio (linear)"),
    ("g_loc_sc", "cat/coherent local exponent ratio (linear)"),
]

_FIG3_MAX_COLUMNS = [
    ("NB", "background mean photon number per mode (dimensionless)"),
    ("max_gain_col", "N_S->0 limit of the collective gain (linear)"),
    ("max_gain_col_db", "N_S->0 limit of the collective gain (dB)"),
    ("max_gain_loc", "N_S->0 limit of the local gain (linear)"),
    ("max_gain_loc_db", "N_S->0 limit of the local gain (dB)"),
]


def cmd_figure3(args: argparse.Namespace) -> int:
    ns_grid = parse_grid(args.NS_grid)
    rows = []
    for n_s in ns_grid:
        cl_col, cl_loc = metrics.coherent_closed_forms(n_s, args.NB)
        tm_col, tm_loc = metrics.tmsv_closed_forms(n_s, args.NB)
        sc_col, sc_loc = metrics.sc_closed_forms(n_s, args.NB)
        rows.append((n_s, tm_col / cl_col, tm_loc / cl_loc,
                     sc_col / cl_col, sc_loc / cl_loc))
    main_path = _emit_csv(args, f"figure3_nb{args.NB:g}.csv",
                          _FIG3_COLUMNS, rows)

    nb_grid = parse_grid(args.NB_grid)
    max_rows = []
    for n_b in nb_grid:
        c_b = n_b / (1.0 + n_b)
        g_col = (1.0 + math.sqrt(c_b)) ** 2
        g_loc = 1.0 + c_b
        max_rows.append((n_b, g_col, 10.0 * math.log10(g_col),
                         g_loc, 10.0 * math.log10(g_loc)))
    sibling = main_path.with_name(main_path.stem + "_maxgain" + main_path.suffix)
    sibling.write_text(_csv_text(args, _FIG3_MAX_COLUMNS, max_rows),
                       encoding="utf-8")
    print(f"wrote {sibling}")
    return 0


def cmd_covert(args: argparse.Namespace) -> int:
    n = int(args.n)
    if n != args.n:
        raise ValueError(f"n must be an integer number of slots, got {args.n}")
    budget = covertness.covert_photon_budget(args.eta, args.NB, args.delta, n)
    payload = {
        "eta": args.eta,
        "n_b": args.NB,
        "delta": args.delta,
        "epsilon": args.epsilon,
        "n": n,
        "a_const": budget.a_const,
        "n_s_max": budget.n_s_max,
        "relent_total": budget.relent_total,
        "relent_budget": budget.relent_budget,
        "within_budget": budget.within_budget,
        "eve_error_lower_bound": covertness.eve_error_lower_bound(
            budget.relent_total),
        "beta_cov": covertness.beta_cov_const(args.eta, args.NB),
        "m_bar": {
            str(b): covertness.sqrt_law_bits(args.eta, args.NB, args.delta,
                                             args.epsilon, n, beta_det=b)
            for b in (1, 2, 4)
        },
        "key_cost": covertness.key_cost(
            n, probabilistic=args.probabilistic)._asdict(),
        "tau_fraction": (covertness.covert_fraction(args.eta, args.NB,
                                                    args.delta, n, args.NS)
                         if args.NS is not None else 1.0),
    }
    if args.M is not None:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            plan = covertness.plan_protocol(
                args.eta, args.NB, args.delta, args.epsilon, n, args.M,
                n_s=args.NS, beta_det=args.beta_det,
                probabilistic=args.probabilistic)
        payload["plan"] = {
            "m": plan.m, "big_m": plan.big_m, "m_bar": plan.m_bar,
            "n_s": plan.n_s, "beta_det": plan.beta_det,
            "tau_fraction": plan.tau_fraction,
            "warnings": [str(w.message) for w in caught],
        }
    _emit_json(args, payload)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.which in ("homodyne", "tmsv"):
        for name in ("eta", "NS", "NB", "M"):
            if getattr(args, name) is None:
                raise ValueError(f"simulate {args.which} requires --{name}")
        cfg = montecarlo.SlotConfig(eta=args.eta, n_s=args.NS, n_b=args.NB,
                                    m=args.M, seed=args.seed)
        if args.which == "homodyne":
            result = montecarlo.simulate_coherent_homodyne(
                cfg, args.trials, method=args.method,
                one_time_pad=not args.no_pad)
        else:
            result = montecarlo.simulate_tmsv_local(cfg, args.trials)
        payload = {"which": args.which, "config": {
            "eta": cfg.eta, "n_s": cfg.n_s, "n_b": cfg.n_b, "m": cfg.m,
            "trials": args.trials}, "result": result._asdict()}
    elif args.which == "eve":
        for name in ("eta", "NS", "NB"):
            if getattr(args, name) is None:
                raise ValueError(f"simulate eve requires --{name}")
        result = montecarlo.simulate_eve_helstrom(
            args.eta, args.NB, args.NS, modes_n=args.modes)
        payload = {"which": "eve", "config": {
            "eta": args.eta, "n_s": args.NS, "n_b": args.NB,
            "modes_n": args.modes}, "result": result._asdict()}
    elif args.which == "coding":
        if args.m is None or args.mbar is None:
            raise ValueError("simulate coding requires --m and --mbar")
        awgn = montecarlo.AwgnReduction(sigma_beta_sq=args.sigma2,
                                        beta_det=args.beta_det,
                                        symbol_mean=args.mean)
        result = montecarlo.random_coding_experiment(
            args.m, args.mbar, awgn, args.trials, seed=args.seed)
        payload = {"which": "coding", "config": {
            "m": args.m, "m_bar": args.mbar, "sigma_beta_sq": args.sigma2,
            "symbol_mean": args.mean, "trials": args.trials},
            "threshold_bits": montecarlo.random_coding_threshold_bits(
                args.m, awgn),
            "result": result._asdict()}
    else:  # pragma: no cover - argparse chokes first
        raise ValueError(f"unknown simulation {args.which!r}")
    _emit_json(args, payload, seed=args.seed)
    return 0


def cmd_screceiver(args: argparse.Namespace) -> int:
    lam_p, lam_m = transmitters.sc_schmidt_probabilities(args.NS)
    beta_col, beta_loc = metrics.sc_closed_forms(args.NS, args.NB)
    tau = math.sqrt(args.tau2_frac * args.NS / math.sqrt(args.NB))
    payload = {
        "n_s": args.NS,
        "n_b": args.NB,
        "lambda_plus": lam_p,
        "lambda_minus": lam_m,
        "beta_col_sc": beta_col,
        "beta_loc_sc": beta_loc,
        "tau_jc": tau,
        "tau2_frac": args.tau2_frac,
        "snr_ratio_formula": screceiver.snr_ratio_formula(args.NS, args.NB,
                                                          tau),
        "optimal_snr": screceiver.optimal_snr(args.NS, args.NB, args.eta),
    }
    if args.fock:
        payload["snr_ratio_fock"] = screceiver.snr_ratio_fock(
            args.NS, args.NB, tau, eta=args.eta, cutoff=args.cutoff)
    _emit_json(args, payload)
    return 0


def cmd_linkbudget(args: argparse.Namespace) -> int:
    eta = metrics.link_budget(args.range_km, args.loss_db_per_km,
                              args.antenna_area_m2)
    payload = {
        "range_km": args.range_km,
        "loss_db_per_km": args.loss_db_per_km,
        "antenna_area_m2": args.antenna_area_m2,
        "eta": eta,
    }
    if args.freq_ghz is not None and args.temp_k is not None:
        payload["n_b"] = metrics.thermal_occupation(args.freq_ghz, args.temp_k)
    if args.p_err is not None and args.NS is not None and "n_b" in payload:
        payload["m_slots"] = metrics.time_bandwidth(
            args.p_err, eta, args.NS, payload["n_b"], args.beta_ratio)
    _emit_json(args, payload)
    return 0


def _selftest_checks():
    """Yield (name, passed, detail) for the fast cross-check suite."""
    # closed forms vs Schmidt-decomposition numerics
    sch = transmitters.tmsv_schmidt(0.2)
    num = metrics.beta_col(sch, 0.5), metrics.beta_loc(sch, 0.5)
    ref = metrics.tmsv_closed_forms(0.2, 0.5)
    dev = max(abs(num[0] - ref[0]), abs(num[1] - ref[1]))
    yield "tmsv closed forms vs numerics", dev < 1e-8, f"max dev {dev:.2e}"

    sch = transmitters.sc_schmidt(0.01)
    num = metrics.beta_col(sch, 9.0)
    ref = metrics.sc_closed_forms(0.01, 9.0)[0]
    yield ("cat closed form vs numerics", abs(num - ref) < 1e-9,
           f"dev {abs(num - ref):.2e}")

    ub = metrics.ultimate_bounds(1e-4, 1e4)
    cl = metrics.coherent_closed_forms(1e-4, 1e4)
    g_col, g_loc = ub.bound_col / cl[0], ub.bound_loc / cl[1]
    yield ("ultimate gain limits 4 and 2",
           abs(g_col - 4) < 0.04 and abs(g_loc - 2) < 0.02,
           f"col {g_col:.6f} loc {g_loc:.6f}")

    g_db = 10 * math.log10((1 + math.sqrt(0.5)) ** 2)
    yield ("max collective gain at N_B=1", abs(g_db - 4.6451) < 5e-3,
           f"{g_db:.4f} dB")

    d_mat = gaussian.gaussian_relative_entropy(
        gaussian.eve_covariance(gaussian.EveChannelInputs(0.3, 1.0, 1e-2)),
        gaussian.eve_covariance(gaussian.EveChannelInputs(0.3, 1.0)))
    d_cf = gaussian.closed_form_eve_relent(0.3, 1.0, 1e-2)
    yield ("relative entropy matrix vs closed form",
           abs(d_mat - d_cf) < 1e-8, f"dev {abs(d_mat - d_cf):.2e}")

    budget = covertness.covert_photon_budget(0.1, 1000.0, 0.05, 10 ** 6)
    yield ("covert budget audit", budget.within_budget,
           f"n*D = {budget.relent_total:.6f} <= {budget.relent_budget:.6f}"
           " (+5%)")

    ratio = screceiver.snr_ratio_formula(1e-3, 1e4, math.sqrt(1e-3 / 1e2))
    yield ("cat receiver SNR ratio example", abs(ratio - 0.994029) < 1e-5,
           f"{ratio:.6f}")

    eve = montecarlo.simulate_eve_helstrom(0.5, 1.0, 0.0)
    yield ("silent transmitter is invisible", eve.error_probability == 0.5,
           f"helstrom {eve.error_probability}")

    from .fock import annihilation_matrix, attenuated_coherent_dyadic
    rho = attenuated_coherent_dyadic(math.sqrt(0.5), math.sqrt(0.5), 0.3,
                                     2.0, 60)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    a = annihilation_matrix(60)
    x = (a + a.conj().T) / math.sqrt(2)
    mx = float(np.real(np.trace(rho @ x)))
    vx = float(np.real(np.trace(rho @ x @ x))) - mx ** 2
    cfg = montecarlo.SlotConfig(eta=0.3, n_s=0.5, n_b=2.0, m=1)
    mean, var = montecarlo.homodyne_moments(cfg)
    dev = max(abs(mx - mean), abs(vx - var))
    yield ("homodyne moments vs Fock numerics", dev < 1e-8,
           f"max dev {dev:.2e}")


def cmd_selftest(args: argparse.Namespace) -> int:
    failures = 0
    for name, passed, detail in _selftest_checks():
        tag = "ok  " if passed else "FAIL"
        print(f"{tag} {name}: {detail}")
        failures += 0 if passed else 1
    print(f"selftest: {failures} failure(s)")
    return 1 if failures else 0


# ======================================================================
# parser
# ======================================================================

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="covertlink",
        description="Covert microwave link: exponents, budgets, simulations.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metrics", help="receiver exponents for one instance")
    p.add_argument("--NS", type=float, required=True,
                   help="signal photons per use")
    p.add_argument("--NB", type=float, required=True,
                   help="background photons per mode")
    p.add_argument("--transmitter", choices=("coherent", "tmsv", "sc"),
                   default="tmsv")
    p.add_argument("--eta", type=float, help="round-trip amplitude"
                   " transmissivity (enables error probabilities)")
    p.add_argument("--M", type=float, help="slots per symbol")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("bounds", help="exponent sweep vs signal level")
    p.add_argument("--NB", type=float, required=True)
    p.add_argument("--NS-grid", dest="NS_grid", required=True,
                   help="start:stop:{lin|log}[:points]")
    p.add_argument("--out", help="CSV path")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("figure3", help="gain decay and max-gain curves")
    p.add_argument("--NB", type=float, default=1e4)
    p.add_argument("--NS-grid", dest="NS_grid", default="1e-4:1:log")
    p.add_argument("--NB-grid", dest="NB_grid", default="0.05:100:log:60")
    p.add_argument("--out", help="main CSV path (sibling *_maxgain.csv"
                   " is written next to it)")
    p.set_defaults(func=cmd_figure3)

    p = sub.add_parser("covert", help="photon budget and bit yield")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--NB", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--n", type=float, required=True, help="total slots")
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--NS", type=float, help="operate below the budget max")
    p.add_argument("--M", type=int, help="slots per symbol (adds a plan)")
    p.add_argument("--beta-det", dest="beta_det", type=int, default=1,
                   choices=(1, 2, 4))
    p.add_argument("--probabilistic", action="store_true",
                   help="account key for probabilistic slot selection")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_covert)

    p = sub.add_parser("simulate", help="Monte Carlo experiments")
    p.add_argument("--which", required=True,
                   choices=("homodyne", "tmsv", "eve", "coding"))
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=2026)
    p.add_argument("--eta", type=float)
    p.add_argument("--NS", type=float)
    p.add_argument("--NB", type=float)
    p.add_argument("--M", type=int, help="uses per symbol")
    p.add_argument("--method", choices=("auto", "literal", "reduced"),
                   default="auto")
    p.add_argument("--no-pad", dest="no_pad", action="store_true",
                   help="disable the one-time phase pad (diagnostic)")
    p.add_argument("--modes", type=int, default=1,
                   help="eve: number of slot mode pairs")
    p.add_argument("--m", type=int, help="coding: block length")
    p.add_argument("--mbar", type=int, help="coding: payload bits")
    p.add_argument("--mean", type=float, default=0.1,
                   help="coding: symbol amplitude")
    p.add_argument("--sigma2", type=float, default=1.0,
                   help="coding: AWGN variance")
    p.add_argument("--beta-det", dest="beta_det", type=int, default=1,
                   choices=(1, 2, 4))
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("screceiver", help="cat receiver diagnostics")
    p.add_argument("--NS", type=float, required=True)
    p.add_argument("--NB", type=float, required=True)
    p.add_argument("--tau2-frac", dest="tau2_frac", type=float, default=1.0,
                   help="tau^2 as a fraction of N_S/sqrt(N_B)")
    p.add_argument("--eta", type=float, default=0.02)
    p.add_argument("--fock", action="store_true",
                   help="add the dense Fock-space SNR ratio (slow)")
    p.add_argument("--cutoff", type=int, default=160)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_screceiver)

    p = sub.add_parser("linkbudget", help="geometry to channel parameters")
    p.add_argument("--range-km", dest="range_km", type=float, required=True)
    p.add_argument("--loss-db-per-km", dest="loss_db_per_km", type=float,
                   required=True)
    p.add_argument("--antenna-area-m2", dest="antenna_area_m2", type=float,
                   required=True)
    p.add_argument("--freq-ghz", dest="freq_ghz", type=float)
    p.add_argument("--temp-k", dest="temp_k", type=float)
    p.add_argument("--p-err", dest="p_err", type=float,
                   help="target error probability (enables slot count)")
    p.add_argument("--NS", type=float, help="signal photons per use")
    p.add_argument("--beta-ratio", dest="beta_ratio", type=float, default=1.0,
                   help="receiver exponent prefactor relative to 2 N_S/N_B")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_linkbudget)

    p = sub.add_parser("selftest", help="fast internal cross-checks")
    p.set_defaults(func=cmd_selftest)

    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> int:
    return run()


if __name__ == "__main__":
    raise SystemExit(main())
