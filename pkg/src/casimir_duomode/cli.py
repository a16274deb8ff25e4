"""Command-line front end.

Subcommands: eigen, evolve, pdf, map, validate, figure {1..5}. All model
inputs come from defaults, an optional flat key-value config file, and
command-line flags, in increasing precedence. Times are accepted as slow
time τ and converted internally (t = 2τ/ε). Detuning flags are the
normalized δ̃ = δ/ε and Δ̃ = Δ/ε; the config file stores raw delta and
big_delta instead.

Outputs are deterministic CSV (schema is part of the contract) plus
self-contained SVG renderings. Exit codes: 0 ok, 1 validation failure,
2 bad input. CASIMIR_DUOMODE_THREADS caps the worker count of grid
sweeps.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import acceptance, figures, gaussian, resmap, slowamp, svgplot
from .cavity import (
    NU_CUBICAL,
    ModelParams,
    mu_from_resonant_pair,
    nu_from_mu,
    theta_pair_from_beta,
)
from .oracle import (
    OracleOptions,
    oracle_fundamental_matrices,
    propagate_covariance,
    thermal_covariance,
)

_CONFIG_KEYS = {
    "epsilon",
    "delta",
    "big_delta",
    "nu",
    "mu",
    "mode_pair",
    "theta1",
    "theta3",
    "beta",
    "epsilon_tilde",
    "dt",
}

EVOLVE_COLUMNS = ["tau", "E1", "E3", "D1", "D3", "purity1", "purity3", "s1", "s3"]
EVOLVE_DIFF_COLUMNS = ["rel_dE1", "rel_dE3", "rel_dD1", "rel_dD3"]
MAP_COLUMNS = ["delta_t", "big_delta_t", "kind", "increment", "a", "b", "c"]
PDF_COLUMNS = ["n", "p_exact", "p_asymptotic"]


@dataclass(frozen=True)
class RunConfig:
    model: ModelParams
    oracle: OracleOptions
    output_dir: Path
    format: str  # csv | svg | both
    seed: int
    workers: int


def worker_count() -> int:
    raw = os.environ.get("CASIMIR_DUOMODE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"CASIMIR_DUOMODE_THREADS must be an integer, got {raw!r}")


def config_text(model: ModelParams, oracle: OracleOptions | None = None) -> str:
    """Serialize a parameter set to the flat key-value config format."""
    lines = [
        f"epsilon = {model.epsilon:.17g}",
        f"delta = {model.delta:.17g}",
        f"big_delta = {model.big_delta:.17g}",
        f"nu = {model.nu:.17g}",
        f"theta1 = {model.theta1:.17g}",
        f"theta3 = {model.theta3:.17g}",
    ]
    if oracle is not None:
        if oracle.epsilon_tilde is not None:
            lines.append(f"epsilon_tilde = {oracle.epsilon_tilde:.17g}")
        if oracle.dt is not None:
            lines.append(f"dt = {oracle.dt:.17g}")
    return "\n".join(lines) + "\n"


def load_config(path: str | Path) -> dict[str, str]:
    """Flat `key = value` file; '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        out[key] = value
    return out


def _build_run_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else {}

    def merged(key: str, flag_value):
        return flag_value if flag_value is not None else cfg.get(key)

    epsilon = float(merged("epsilon", args.epsilon) or 1e-3)

    coupling = {
        k: v
        for k, v in {
            "nu": merged("nu", args.nu),
            "mu": merged("mu", args.mu),
            "mode_pair": merged("mode_pair", args.mode_pair),
        }.items()
        if v is not None
    }
    if len(coupling) > 1:
        raise ValueError(f"specify only one of nu/mu/mode_pair, got {sorted(coupling)}")
    if "nu" in coupling:
        nu = float(coupling["nu"])
    elif "mu" in coupling:
        nu = nu_from_mu(float(coupling["mu"]))
    elif "mode_pair" in coupling:
        kx, jx = (int(x) for x in str(coupling["mode_pair"]).split(","))
        nu = nu_from_mu(mu_from_resonant_pair(kx, jx))
    else:
        nu = NU_CUBICAL

    beta = merged("beta", args.beta)
    th1 = merged("theta1", args.theta1)
    th3 = merged("theta3", args.theta3)
    if beta is not None and (th1 is not None or th3 is not None):
        raise ValueError("specify either beta or theta1/theta3, not both")
    if beta is not None:
        theta1, theta3 = theta_pair_from_beta(float(beta))
    else:
        theta1 = float(th1) if th1 is not None else 1.0
        theta3 = float(th3) if th3 is not None else 1.0

    # flags give normalized detunings; the config file stores raw ones
    if args.delta_t is not None:
        delta = epsilon * float(args.delta_t)
    else:
        delta = float(cfg.get("delta", 0.0))
    if args.big_delta_t is not None:
        big_delta = epsilon * float(args.big_delta_t)
    else:
        big_delta = float(cfg.get("big_delta", 0.0))

    model = ModelParams(
        epsilon=epsilon,
        delta=delta,
        big_delta=big_delta,
        nu=nu,
        theta1=theta1,
        theta3=theta3,
    )
    eps_tilde = merged("epsilon_tilde", args.epsilon_tilde)
    dt = merged("dt", args.dt)
    oracle = OracleOptions(
        dt=float(dt) if dt is not None else None,
        epsilon_tilde=float(eps_tilde) if eps_tilde is not None else None,
    )
    return RunConfig(
        model=model,
        oracle=oracle,
        output_dir=Path(args.out),
        format=args.format,
        seed=args.seed,
        workers=worker_count(),
    )


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------


def csv_text(meta: list[str], cols: list[str], rows) -> str:
    lines = [f"# {m}" for m in meta]
    lines.append(",".join(cols))
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, str):
                cells.append(v)
            elif isinstance(v, float) and math.isnan(v):
                cells.append("")
            else:
                cells.append(f"{v:.12g}")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _write(config: RunConfig, name: str, content: str) -> Path:
    config.output_dir.mkdir(parents=True, exist_ok=True)
    path = config.output_dir / name
    path.write_text(content)
    print(f"wrote {path}")
    return path


# ---------------------------------------------------------------------------
# observable evaluation layers
# ---------------------------------------------------------------------------


def _is_exact_resonance(p: ModelParams) -> bool:
    return abs(p.delta) <= 1e-12 and abs(p.big_delta) <= 1e-12 and p.nu > 0.5


def _is_asymmetric(p: ModelParams) -> bool:
    return (
        abs(p.delta_t - 1.0) <= 1e-9
        and abs(p.gamma_t + 0.5 * p.nu) <= 1e-9 * max(1.0, 0.5 * p.nu)
        and p.nu > 2.0
    )


def analytic_observables(
    tau: float, p: ModelParams
) -> tuple[gaussian.ModeObservables, gaussian.ModeObservables, str]:
    """Per-mode (Ẽ, 𝒟) at slow time τ from the best available analytic path."""
    if _is_exact_resonance(p):
        return (
            gaussian.observables_exact_resonance(tau, p, 1),
            gaussian.observables_exact_resonance(tau, p, 3),
            "closed-form (exact resonance)",
        )
    if _is_asymmetric(p):
        return (
            gaussian.observables_asymmetric(tau, p, 1),
            gaussian.observables_asymmetric(tau, p, 3),
            "closed-form (asymmetric)",
        )
    M = slowamp.fundamental_matrix_generic(p.time_from_tau(tau), p)
    sig = propagate_covariance(M, thermal_covariance(p.theta1, p.theta3))
    return (
        gaussian.observables_from_covariance(sig, 1),
        gaussian.observables_from_covariance(sig, 3),
        "generic slow-amplitude propagation",
    )


def _observable_row(tau, o1, o3) -> list[float]:
    return [
        tau,
        o1.e_tilde,
        3.0 * o3.e_tilde,
        o1.iup,
        o3.iup,
        gaussian.purity(o1.iup),
        gaussian.purity(o3.iup),
        gaussian.squeezing(o1),
        gaussian.squeezing(o3),
    ]


def _stroboscopic_grid(p: ModelParams, taus: np.ndarray) -> list[float]:
    """Snap slow times to the stroboscopic grid t = m pi/omega_bar."""
    period = math.pi / p.omega_bar
    ms = sorted({int(round(p.time_from_tau(float(tau)) / period)) for tau in taus})
    return [m * period for m in ms]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_eigen(config: RunConfig) -> int:
    p = config.model
    es = slowamp.eigenvalues(p)
    a, b, c = es.abc
    e2, e4 = p.epsilon**2, p.epsilon**4
    print(f"epsilon    = {p.epsilon:.6g}")
    print(f"delta      = {p.delta:.6g}  (delta_t = {p.delta_t:.6g})")
    print(f"big_delta  = {p.big_delta:.6g}  (big_delta_t = {p.big_delta_t:.6g})")
    print(f"nu         = {p.nu:.6g}  (mu = {p.mu:.6g})")
    print(f"lambda_plus  = {es.lambda_plus:.6g}  (/eps: {es.lambda_plus / p.epsilon:.6g})")
    print(f"lambda_minus = {es.lambda_minus:.6g}  (/eps: {es.lambda_minus / p.epsilon:.6g})")
    print(f"a, b, c (eps units) = {a / e2:.6g}, {b / e4:.6g}, {c / e4:.6g}")
    if p.nu > 1.0:
        verdict = resmap.classify(
            resmap.DetuningPoint(p.delta_t, p.big_delta_t), p.nu, p.epsilon
        )
        print(f"regime     = {verdict.kind.value}")
        print(f"increment  = {verdict.increment:.6g}  (Re lambda_+ in eps units)")
    else:
        print("regime     = n/a (classifier needs nu > 1)")
        print(f"increment  = {es.lambda_plus.real / p.epsilon:.6g}  (Re lambda_+ in eps units)")
    return 0


def cmd_evolve(config: RunConfig, tau_max: float, steps: int, layer: str) -> int:
    if tau_max <= 0.0:
        raise ValueError(f"tau-max must be > 0, got {tau_max}")
    p = config.model
    taus = np.linspace(0.0, tau_max, steps)
    meta = [
        f"evolve: layer = {layer}, epsilon = {p.epsilon:.12g}, nu = {p.nu:.12g}",
        f"delta_t = {p.delta_t:.12g}, big_delta_t = {p.big_delta_t:.12g}, "
        f"theta1 = {p.theta1:.12g}, theta3 = {p.theta3:.12g}",
    ]
    cols = list(EVOLVE_COLUMNS)
    rows: list[list[float]] = []

    if layer == "analytic":
        _, _, path_used = analytic_observables(0.0, p)
        meta.append(f"analytic path: {path_used}")
        if path_used.startswith("generic"):
            meta.append("warning: parameters outside closed-form regimes; generic propagation used")
        for tau in taus:
            o1, o3, _ = analytic_observables(float(tau), p)
            rows.append(_observable_row(float(tau), o1, o3))
    else:
        ts = _stroboscopic_grid(p, taus)
        meta.append("oracle sampling on the stroboscopic grid t = m*pi/omega_bar")
        mats = oracle_fundamental_matrices(ts, p, config.oracle)
        sig0 = thermal_covariance(p.theta1, p.theta3)
        if layer == "both":
            cols += EVOLVE_DIFF_COLUMNS
        for M in mats:
            tau = p.tau(M.t)
            sig = propagate_covariance(M, sig0)
            o1 = gaussian.observables_from_covariance(sig, 1)
            o3 = gaussian.observables_from_covariance(sig, 3)
            row = _observable_row(tau, o1, o3)
            if layer == "both":
                a1, a3, _ = analytic_observables(tau, p)
                row += [
                    o1.e_tilde / a1.e_tilde - 1.0,
                    o3.e_tilde / a3.e_tilde - 1.0,
                    o1.iup / a1.iup - 1.0,
                    o3.iup / a3.iup - 1.0,
                ]
            rows.append(row)

    out = csv_text(meta, cols, rows)
    if config.format in ("csv", "both"):
        _write(config, "evolve.csv", out)
    if config.format in ("svg", "both"):
        series = [
            svgplot.Series("E1", [r[0] for r in rows], [r[1] for r in rows]),
            svgplot.Series("E3", [r[0] for r in rows], [r[2] for r in rows]),
        ]
        _write(
            config,
            "evolve.svg",
            svgplot.line_plot(series, title="mode energies", xlabel="tau", ylabel="E_k", log_y=True),
        )
    return 0


def cmd_pdf(config: RunConfig, tau: float, mode: int, n_max: int | None) -> int:
    p = config.model
    o1, o3, path_used = analytic_observables(tau, p)
    obs = o1 if mode == 1 else o3
    pd = gaussian.pdf_exact(obs, n_max)
    in_regime = obs.e_tilde**2 >= 20.0 * obs.iup
    rows = []
    for n in range(pd.n_max + 1):
        asym = gaussian.pdf_asymptotic(obs, n) if in_regime and n >= 10 else math.nan
        rows.append([float(n), float(pd.probs[n]), asym])
    total = float(pd.probs.sum())
    meta = [
        f"photon distribution, mode {mode}, tau = {tau:.12g} ({path_used})",
        f"e_tilde = {obs.e_tilde:.12g}, iup = {obs.iup:.12g}",
        f"normalization: |1 - sum p| = {abs(1.0 - total):.3g} (tail bound {pd.tail_mass_bound:.3g})",
    ]
    out = csv_text(meta, PDF_COLUMNS, rows)
    if config.format in ("csv", "both"):
        _write(config, "pdf.csv", out)
    if config.format in ("svg", "both"):
        _write(config, "pdf.svg", figures.pdf_svg(meta, PDF_COLUMNS, rows, f"P(n), mode {mode}"))
    return 0


def cmd_map(
    config: RunConfig,
    delta_t_range: tuple[float, float],
    big_delta_t_range: tuple[float, float],
    resolution: int,
) -> int:
    p = config.model
    sweep = resmap.sweep_grid(
        delta_t_range, big_delta_t_range, resolution, p.nu, p.epsilon, workers=config.workers
    )
    rows = []
    for i, dt in enumerate(sweep.delta_ts):
        for j, bdt in enumerate(sweep.big_delta_ts):
            rows.append(
                [
                    float(dt),
                    float(bdt),
                    sweep.kinds[i, j].value,
                    float(sweep.increments[i, j]),
                    float(sweep.a[i, j]),
                    float(sweep.b[i, j]),
                    float(sweep.c[i, j]),
                ]
            )
    meta = [
        f"resonance map, nu = {p.nu:.12g}",
        "a, b, c in units of eps^2, eps^4, eps^4; increment = Re lambda_+ / eps",
    ]
    if config.format in ("csv", "both"):
        _write(config, "map.csv", csv_text(meta, MAP_COLUMNS, rows))
    if config.format in ("svg", "both"):
        span = max(abs(x) for x in (*delta_t_range, *big_delta_t_range))
        _write(config, "map.svg", figures.fig4_svg(sweep, p.nu, span))
    return 0


def cmd_validate(config: RunConfig) -> int:
    results = acceptance.run_all(seed=config.seed)
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.number:2d} {r.name:<{width}}  {r.detail}")
        failures += 0 if r.passed else 1
    print(f"{len(results) - failures}/{len(results)} acceptance criteria passed")
    return 0 if failures == 0 else 1


def render_figure(which: int, fmt: str = "both", workers: int = 1) -> dict[str, str]:
    """Figure outputs as {filename: content}; separated for testability."""
    out: dict[str, str] = {}
    if which == 1:
        meta, cols, rows = figures.fig1_data()
        out["figure1.csv"] = csv_text(meta, cols, rows)
        if fmt != "csv":
            out["figure1.svg"] = figures.fig1_svg(meta, cols, rows)
    elif which in (2, 3):
        meta, cols, rows = figures.fig2_data() if which == 2 else figures.fig3_data()
        out[f"figure{which}.csv"] = csv_text(meta, cols, rows)
        if fmt != "csv":
            out[f"figure{which}.svg"] = figures.pdf_svg(
                meta, cols, rows, f"photon distribution (figure {which})"
            )
    elif which == 4:
        meta, cols, rows, sweep = figures.fig4_data(workers=workers)
        out["figure4.csv"] = csv_text(meta, cols, rows)
        if fmt != "csv":
            out["figure4.svg"] = figures.fig4_svg(sweep, NU_CUBICAL, 6.0)
    elif which == 5:
        meta, cols, rows, asymptotes = figures.fig5_data()
        out["figure5.csv"] = csv_text(meta, cols, rows)
        if fmt != "csv":
            out["figure5.svg"] = figures.fig5_svg(meta, cols, rows, asymptotes)
    else:
        raise ValueError(f"figure must be 1..5, got {which}")
    return out


def cmd_figure(config: RunConfig, which: int) -> int:
    for name, content in render_figure(which, config.format, config.workers).items():
        _write(config, name, content)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--epsilon", type=float, help="wall amplitude eps (default 1e-3)")
    common.add_argument("--delta-t", type=float, dest="delta_t", help="drive detuning delta/eps")
    common.add_argument(
        "--big-delta-t", type=float, dest="big_delta_t", help="mode detuning Delta/eps"
    )
    coupling = common.add_mutually_exclusive_group()
    coupling.add_argument("--nu", type=float, help="coupling nu = 96 mu^2 (default 50/3)")
    coupling.add_argument("--mu", type=float, help="coupling mu")
    coupling.add_argument("--mode-pair", dest="mode_pair", help="resonant pair KX,JX")
    common.add_argument("--theta1", type=float, help="thermal parameter of mode 1")
    common.add_argument("--theta3", type=float, help="thermal parameter of mode 3")
    common.add_argument("--beta", type=float, help="inverse temperature (sets both thetas)")
    common.add_argument("--epsilon-tilde", type=float, dest="epsilon_tilde", help="mode-3 drive amplitude")
    common.add_argument("--dt", type=float, help="oracle integrator step")
    common.add_argument("--out", default="out", help="output directory (default ./out)")
    common.add_argument("--format", choices=("csv", "svg", "both"), default="both")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")

    ap = argparse.ArgumentParser(
        prog="casimir-duomode",
        description="two-mode vibrating-cavity photon generation simulator",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("eigen", parents=[common], help="eigenvalues and regime report")
    pe = sub.add_parser("evolve", parents=[common], help="observables versus slow time")
    pe.add_argument("--tau-max", type=float, default=2.0, dest="tau_max")
    pe.add_argument("--steps", type=int, default=201)
    pe.add_argument("--layer", choices=("analytic", "oracle", "both"), default="analytic")
    pp = sub.add_parser("pdf", parents=[common], help="photon distribution at one time")
    pp.add_argument("--tau", type=float, required=True)
    pp.add_argument("--mode", type=int, choices=(1, 3), default=1)
    pp.add_argument("--n-max", type=int, default=None, dest="n_max")
    pm = sub.add_parser("map", parents=[common], help="resonance map of the detuning plane")
    pm.add_argument("--delta-t-range", default="-6:6", dest="delta_t_range")
    pm.add_argument("--big-delta-t-range", default="-6:6", dest="big_delta_t_range")
    pm.add_argument("--resolution", type=int, default=121)
    sub.add_parser("validate", parents=[common], help="run the acceptance suite")
    pf = sub.add_parser("figure", parents=[common], help="regenerate a bundled figure")
    pf.add_argument("which", type=int, choices=(1, 2, 3, 4, 5))
    return ap


def _parse_range(text: str) -> tuple[float, float]:
    lo, hi = (float(x) for x in text.split(":"))
    if hi <= lo:
        raise ValueError(f"empty range {text!r}")
    return (lo, hi)


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        config = _build_run_config(args)
        if args.command == "eigen":
            return cmd_eigen(config)
        if args.command == "evolve":
            return cmd_evolve(config, args.tau_max, args.steps, args.layer)
        if args.command == "pdf":
            return cmd_pdf(config, args.tau, args.mode, args.n_max)
        if args.command == "map":
            return cmd_map(
                config,
                _parse_range(args.delta_t_range),
                _parse_range(args.big_delta_t_range),
                args.resolution,
            )
        if args.command == "validate":
            return cmd_validate(config)
        if args.command == "figure":
            return cmd_figure(config, args.which)
        raise AssertionError(f"unhandled command {args.command}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
