"""Canned datasets behind the five bundled figures.

Each generator returns (metadata lines, column names, rows) so the CLI
can serialize deterministically; figure semantics:

1. normalized mode energies E_k(τ)/E_k(0) at exact resonance, ν = 50/3,
   for the vacuum and the high-temperature (θ₃₁ = 1/3) initial states
2. photon distribution of mode 1 at τ = 5π/(2ρ), vacuum start
3. same at θ₁ = 5 (θ₃ from the common-temperature identity)
4. generation-region map of the (δ̃, Δ̃) plane with the approximate
   boundary curves overlaid
5. squeezing s₁(τ) in the asymmetric regime for θ₁ = 1 and θ₁ = 5,
   approaching the asymptote 2θ₃/ν
"""

from __future__ import annotations

import math

import numpy as np

from . import gaussian, resmap, svgplot
from .cavity import NU_CUBICAL, ModelParams
from .resmap import RegionKind

FIGURE_EPSILON = 1e-3

Rows = list[list[float]]


def _theta3_consistent(theta1: float) -> float:
    """Partner θ₃ of θ₁ at a common temperature."""
    return theta1 * (theta1**2 + 3.0) / (3.0 * theta1**2 + 1.0)


def fig1_data(nu: float = NU_CUBICAL, tau_max: float = 2.0, steps: int = 401):
    """Normalized energies; high-T curves use θ₃₁ = 1/3 via (θ₁, θ₃) = (3, 1)."""
    vac = ModelParams(epsilon=FIGURE_EPSILON, nu=nu)
    hot = ModelParams(epsilon=FIGURE_EPSILON, nu=nu, theta1=3.0, theta3=1.0)
    cols = ["tau", "E1_ratio_theta31_1_3", "E1_ratio_vacuum", "E3_ratio_vacuum", "E3_ratio_theta13_3"]
    rows: Rows = []
    for tau in np.linspace(0.0, tau_max, steps):
        rows.append(
            [
                float(tau),
                gaussian.energy_exact_resonance(tau, hot, 1) / (0.5 * hot.theta1),
                gaussian.energy_exact_resonance(tau, vac, 1) / 0.5,
                gaussian.energy_exact_resonance(tau, vac, 3) / 1.5,
                gaussian.energy_exact_resonance(tau, hot, 3) / (1.5 * hot.theta3),
            ]
        )
    meta = [
        f"figure 1: normalized mean energies E_k(tau)/E_k(0), exact resonance, nu = {nu:.12g}",
        "high-temperature curves evaluated at theta1 = 3, theta3 = 1 (theta31 = 1/3 exactly)",
    ]
    return meta, cols, rows


def _pdf_figure(theta1: float, theta3: float, nu: float):
    params = ModelParams(epsilon=FIGURE_EPSILON, nu=nu, theta1=theta1, theta3=theta3)
    rho = params.rho
    tau = 5.0 * math.pi / (2.0 * rho)
    obs = gaussian.observables_exact_resonance(tau, params, 1)
    pd = gaussian.pdf_exact(obs)
    in_regime = obs.e_tilde**2 >= 20.0 * obs.iup
    cols = ["n", "p_exact", "p_asymptotic"]
    rows: Rows = []
    for n in range(pd.n_max + 1):
        asym = (
            gaussian.pdf_asymptotic(obs, n)
            if in_regime and n >= 10
            else math.nan
        )
        rows.append([float(n), float(pd.probs[n]), asym])
    meta = [
        f"photon distribution, mode 1, exact resonance, nu = {nu:.12g}",
        f"tau = 5*pi/(2*rho) = {tau:.12g}",
        f"theta1 = {theta1:.12g}, theta3 = {theta3:.12g}",
        f"e_tilde = {obs.e_tilde:.12g}, iup = {obs.iup:.12g}",
        f"normalization: sum p = {float(pd.probs.sum()):.12g}",
    ]
    return meta, cols, rows


def fig2_data(nu: float = NU_CUBICAL):
    """Vacuum-start PDF at τ = 5π/(2ρ): strong even-odd oscillation."""
    return _pdf_figure(1.0, 1.0, nu)


def fig3_data(nu: float = NU_CUBICAL):
    """Thermal-start PDF, θ₁ = 5 (mean 2 photons initially)."""
    return _pdf_figure(5.0, _theta3_consistent(5.0), nu)


def fig4_data(
    nu: float = NU_CUBICAL,
    span: float = 6.0,
    resolution: int = 121,
    epsilon: float = FIGURE_EPSILON,
    workers: int = 1,
):
    """Region sweep of [-span, span]^2 plus approximate boundary overlays."""
    sweep = resmap.sweep_grid(
        (-span, span), (-span, span), resolution, nu, epsilon, workers=workers
    )
    cols = ["delta_t", "big_delta_t", "kind", "increment", "a", "b", "c"]
    rows: list[list] = []
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
        f"figure 4: photon-generation regions in the detuning plane, nu = {nu:.12g}",
        "kind: symmetric (c < 0), asymmetric (b < 0 <= c), none",
        "a, b, c in units of eps^2, eps^4, eps^4; increment = Re lambda_+ / eps",
    ]
    return meta, cols, rows, sweep


def fig4_overlays(nu: float = NU_CUBICAL, span: float = 6.0) -> list[svgplot.Series]:
    """Approximate boundaries: band edges and hyperbola branches."""
    dts = np.linspace(-span, span, 481)
    band_hi = svgplot.Series("band+", [], [])
    band_lo = svgplot.Series("band-", [], [])
    for dt in dts:
        eta_c = math.sqrt(nu / (nu + 2.0 * dt * dt))
        band_hi.xs.append(float(dt))
        band_hi.ys.append(4.0 * dt + eta_c)
        band_lo.xs.append(float(dt))
        band_lo.ys.append(4.0 * dt - eta_c)
    hyp1 = svgplot.Series("hyp1", [], [])
    hyp2 = svgplot.Series("hyp2", [], [])
    for dt in dts:
        if abs(dt - 1.0) > 0.05:
            hyp1.xs.append(float(dt))
            hyp1.ys.append(3.0 * dt + nu / (2.0 * (1.0 - dt)))
        if abs(dt + 1.0) > 0.05:
            hyp2.xs.append(float(dt))
            hyp2.ys.append(3.0 * dt - nu / (2.0 * (1.0 + dt)))
    return [band_hi, band_lo, hyp1, hyp2]


def fig5_data(nu: float = NU_CUBICAL, tau_max: float = 3.0, steps: int = 301):
    """Squeezing s₁(τ) in the asymmetric regime for θ₁ ∈ {1, 5}."""
    cols = ["tau", "s1_theta1_1", "s1_theta1_5"]
    taus = np.linspace(0.0, tau_max, steps)
    curves = []
    asymptotes = []
    for th1 in (1.0, 5.0):
        th3 = _theta3_consistent(th1)
        p = ModelParams.from_normalized(
            FIGURE_EPSILON, 1.0, 3.0 - nu / 2.0, nu=nu, theta1=th1, theta3=th3
        )
        curves.append(
            [gaussian.squeezing(gaussian.observables_asymmetric(t, p, 1)) for t in taus]
        )
        asymptotes.append(2.0 * th3 / nu)
    rows: Rows = [
        [float(t), curves[0][i], curves[1][i]] for i, t in enumerate(taus)
    ]
    meta = [
        f"figure 5: squeezing s1(tau), asymmetric regime (delta_t = 1, gamma_t = -nu/2), nu = {nu:.12g}",
        f"asymptote 2*theta3/nu: theta1=1 -> {asymptotes[0]:.12g}; theta1=5 -> {asymptotes[1]:.12g}",
    ]
    return meta, cols, rows, asymptotes


def fig1_svg(meta, cols, rows) -> str:
    taus = [r[0] for r in rows]
    series = [
        svgplot.Series(c, taus, [r[k + 1] for r in rows]) for k, c in enumerate(cols[1:])
    ]
    return svgplot.line_plot(
        series, title="normalized mode energies", xlabel="tau", ylabel="E_k(tau)/E_k(0)"
    )


def pdf_svg(meta, cols, rows, title: str) -> str:
    ns = [r[0] for r in rows]
    ps = [r[1] for r in rows]
    keep = [(n, p) for n, p in zip(ns, ps) if p > 0]
    series = [svgplot.Series("exact", [n for n, _ in keep], [p for _, p in keep])]
    return svgplot.line_plot(series, title=title, xlabel="n", ylabel="P(n)", log_y=True)


def fig4_svg(sweep, nu: float, span: float) -> str:
    kinds = [
        [sweep.kinds[i, j].value for j in range(len(sweep.big_delta_ts))]
        for i in range(len(sweep.delta_ts))
    ]
    return svgplot.region_plot(
        [float(x) for x in sweep.delta_ts],
        [float(y) for y in sweep.big_delta_ts],
        kinds,
        fig4_overlays(nu, span),
        title="photon-generation regions",
        xlabel="delta/eps",
        ylabel="Delta/eps",
    )


def fig5_svg(meta, cols, rows, asymptotes) -> str:
    taus = [r[0] for r in rows]
    series = [
        svgplot.Series("theta1 = 1", taus, [r[1] for r in rows]),
        svgplot.Series("theta1 = 5", taus, [r[2] for r in rows]),
        svgplot.Series("asymptote (theta1=1)", [taus[0], taus[-1]], [asymptotes[0]] * 2),
        svgplot.Series("asymptote (theta1=5)", [taus[0], taus[-1]], [asymptotes[1]] * 2),
    ]
    return svgplot.line_plot(series, title="squeezing of mode 1", xlabel="tau", ylabel="s1")


def region_components(kinds: np.ndarray, kind: RegionKind) -> int:
    """Number of 4-connected components of one region kind in a sweep grid."""
    from scipy.ndimage import label

    mask = np.zeros(kinds.shape, dtype=int)
    for i in range(kinds.shape[0]):
        for j in range(kinds.shape[1]):
            mask[i, j] = 1 if kinds[i, j] is kind else 0
    _, count = label(mask)
    return int(count)
