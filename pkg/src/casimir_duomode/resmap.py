"""Resonance chart of the normalized detuning plane (δ̃, Δ̃) = (δ/ε, Δ/ε).

For ν > 1 the coefficient a is negative everywhere, so photon generation
(Re λ₊ > 0) happens in exactly two ways:

* c < 0 - "symmetric" generation: both modes grow comparably, inside the
  band |Δ̃ - 4δ̃| < η_c(δ̃, ν) around the compensation line,
* c >= 0 and b < 0 - "asymmetric" generation: mode 1 dominates, inside
  two lobes bounded by the hyperbolas 2(δ̃ ∓ 1)γ̃ + ν = 0, γ̃ = Δ̃ - 3δ̃.

The exact sign classifier below is authoritative; the closed-form band
half-width sqrt(ν/(ν + 2δ̃²)) and the hyperbola formulas are the ν >> 1
approximations it is validated against. Since (a, b, c) are homogeneous
in (ε, δ, Δ), all diagnostics and increments are stored in units of ε
(a/ε², b/ε⁴, c/ε⁴ and Re λ₊/ε), so one sweep serves every ε.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .slowamp import lambda_pair

# |b| or |c| at or below this (in ε-normalized units) counts as a boundary
# tie and classifies as NoGeneration: the increment is zero there.
_TIE_TOL = 1e-12


class RegionKind(enum.Enum):
    SYMMETRIC_RESONANCE = "symmetric"
    ASYMMETRIC_RESONANCE = "asymmetric"
    NO_GENERATION = "none"


@dataclass(frozen=True)
class DetuningPoint:
    """Point of the normalized detuning plane."""

    delta_t: float
    big_delta_t: float

    @property
    def eta(self) -> float:
        """Distance from the compensation line, η = Δ̃ - 4δ̃."""
        return self.big_delta_t - 4.0 * self.delta_t

    @property
    def gamma(self) -> float:
        """Slow-matrix detuning combination γ̃ = Δ̃ - 3δ̃."""
        return self.big_delta_t - 3.0 * self.delta_t


@dataclass(frozen=True)
class RegionVerdict:
    """Classification of one detuning point.

    increment is Re λ₊ in units of ε (zero iff NoGeneration);
    diagnostics holds (a/ε², b/ε⁴, c/ε⁴).
    """

    kind: RegionKind
    increment: float
    diagnostics: tuple[float, float, float]


def abc_normalized(point: DetuningPoint, nu: float) -> tuple[float, float, float]:
    """(a/ε², b/ε⁴, c/ε⁴) at a detuning point."""
    dt = point.delta_t
    g = point.gamma
    a = (1.0 - nu) - dt * dt - g * g
    b = (2.0 * (dt - 1.0) * g + nu) * (2.0 * (dt + 1.0) * g + nu)
    eta = point.eta
    c = 2.0 * nu * (eta * eta - 1.0) + (1.0 + (point.big_delta_t - 2.0 * dt) * eta) ** 2
    return (a, b, c)


def classify(point: DetuningPoint, nu: float, epsilon: float = 1e-3) -> RegionVerdict:
    """Classify a detuning point by the exact sign logic on (a, b, c).

    Boundary ties (|b| or |c| within 1e-12) classify as NoGeneration.
    The increment comes from the closed-form eigenvalues and is checked
    against the verdict. `epsilon` only fixes the physical scale the
    normalized coefficients refer to; the verdict is independent of it.
    """
    if nu <= 1.0:
        raise ValueError(f"classifier requires nu > 1 (a < 0 everywhere), got {nu}")
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    a, b, c = abc_normalized(point, nu)
    if c < -_TIE_TOL:
        kind = RegionKind.SYMMETRIC_RESONANCE
    elif b < -_TIE_TOL and c > _TIE_TOL:
        kind = RegionKind.ASYMMETRIC_RESONANCE
    else:
        kind = RegionKind.NO_GENERATION
    if kind is RegionKind.NO_GENERATION:
        increment = 0.0
    else:
        increment = lambda_pair(a, b)[0].real
        if not increment > _TIE_TOL:
            raise AssertionError(
                f"sign logic says generation at {point} but Re lambda_+ = {increment}"
            )
    return RegionVerdict(kind=kind, increment=increment, diagnostics=(a, b, c))


@dataclass(frozen=True)
class EtaCritical:
    """Half-width of the symmetric band at fixed δ̃: ν>>1 formula vs exact root."""

    approx: float
    exact: float | None


def _c_of_eta(eta: float, delta_t: float, nu: float) -> float:
    return 2.0 * nu * (eta * eta - 1.0) + (1.0 + (2.0 * delta_t + eta) * eta) ** 2


def eta_critical(delta_t: float, nu: float) -> EtaCritical:
    """Critical η where c changes sign on the positive side of the band.

    approx = sqrt(ν/(ν + 2δ̃²)); exact is the smallest positive root of
    c(η) = 0, found by scan-and-bisect on (0, 1]. c(0) = 1 - 2ν < 0 for
    ν > 1, so the root exists unless the corner is degenerate, in which
    case exact is None.
    """
    if nu <= 1.0:
        raise ValueError(f"eta_critical requires nu > 1, got {nu}")
    approx = math.sqrt(nu / (nu + 2.0 * delta_t * delta_t))
    lo, hi = 0.0, None
    f_lo = _c_of_eta(0.0, delta_t, nu)
    n_scan = 1000
    for i in range(1, n_scan + 1):
        eta = i / n_scan
        f = _c_of_eta(eta, delta_t, nu)
        if f == 0.0:
            return EtaCritical(approx=approx, exact=eta)
        if f_lo < 0.0 < f:
            lo, hi = (i - 1) / n_scan, eta
            break
        lo, f_lo = eta, f
    if hi is None:
        return EtaCritical(approx=approx, exact=None)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-12:
            break
        if _c_of_eta(mid, delta_t, nu) < 0.0:
            lo = mid
        else:
            hi = mid
    return EtaCritical(approx=approx, exact=0.5 * (lo + hi))


@dataclass(frozen=True)
class GammaBounds:
    """Where b < 0 at fixed δ̃, as open intervals in γ̃ (inf endpoints allowed).

    |δ̃| > 1 gives one finite interval between the hyperbola branches;
    |δ̃| < 1 gives two rays; |δ̃| = 1 is a pole of one branch (flagged),
    leaving a single ray.
    """

    intervals: tuple[tuple[float, float], ...]
    pole: bool = False

    def contains(self, gamma: float) -> bool:
        return any(lo < gamma < hi for lo, hi in self.intervals)


def hyperbola_bounds(delta_t: float, nu: float) -> GammaBounds:
    """Asymmetric-region bounds in γ̃ from the factored form of b."""
    if nu <= 1.0:
        raise ValueError(f"hyperbola bounds require nu > 1, got {nu}")
    if delta_t == 1.0:
        return GammaBounds(intervals=((-math.inf, -0.25 * nu),), pole=True)
    if delta_t == -1.0:
        return GammaBounds(intervals=((0.25 * nu, math.inf),), pole=True)
    g1 = nu / (2.0 * (1.0 - delta_t))
    g2 = -nu / (2.0 * (1.0 + delta_t))
    if abs(delta_t) > 1.0:
        return GammaBounds(intervals=((min(g1, g2), max(g1, g2)),))
    return GammaBounds(intervals=((-math.inf, g2), (g1, math.inf)))


@dataclass(frozen=True)
class ResonanceWidths:
    """Extents of the asymmetric lobes along the Δ̃ and δ̃ axes.

    gamma_big_delta: vertical width Γ_Δ = ν/(δ̃² - 1), defined only for
    |δ̃| > 1 (None otherwise). width_left/right: horizontal widths
    Γ_δ^(l,r) = 1 ± σ of the two lobes at fixed Δ̃; their sum is exactly 2.
    """

    gamma_big_delta: float | None = None
    width_left: float | None = None
    width_right: float | None = None
    sigma: float | None = None


def resonance_widths(
    nu: float, delta_t: float | None = None, big_delta_t: float | None = None
) -> ResonanceWidths:
    """Widths of the asymmetric resonance regions along either axis."""
    if nu <= 1.0:
        raise ValueError(f"resonance widths require nu > 1, got {nu}")
    gd: float | None = None
    wl = wr = sg = None
    if delta_t is not None:
        if abs(delta_t) <= 1.0:
            gd = None  # vertical line crosses a single hyperbola: unbounded
        else:
            gd = nu / (delta_t * delta_t - 1.0)
    if big_delta_t is not None:
        sg = (
            math.sqrt((big_delta_t + 3.0) ** 2 + 6.0 * nu)
            - math.sqrt((big_delta_t - 3.0) ** 2 + 6.0 * nu)
        ) / 6.0
        wl, wr = 1.0 + sg, 1.0 - sg
    return ResonanceWidths(gamma_big_delta=gd, width_left=wl, width_right=wr, sigma=sg)


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Row-major classification grid: index [i, j] is (delta_ts[i], big_delta_ts[j])."""

    delta_ts: np.ndarray
    big_delta_ts: np.ndarray
    kinds: np.ndarray  # dtype object of RegionKind
    increments: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    nu: float
    epsilon: float


def sweep_grid(
    delta_t_range: tuple[float, float],
    big_delta_t_range: tuple[float, float],
    resolution: int | tuple[int, int],
    nu: float,
    epsilon: float = 1e-3,
    workers: int = 1,
) -> SweepResult:
    """Classify a rectangular grid of detuning points.

    Cells are independent; with workers > 1 rows are classified in a
    thread pool and assembled by index, so the result is deterministic
    either way.
    """
    if isinstance(resolution, int):
        res_d = res_bd = resolution
    else:
        res_d, res_bd = resolution
    if res_d < 2 or res_bd < 2:
        raise ValueError(f"resolution must be >= 2 per axis, got {resolution}")
    dts = np.linspace(delta_t_range[0], delta_t_range[1], res_d)
    bdts = np.linspace(big_delta_t_range[0], big_delta_t_range[1], res_bd)

    kinds = np.empty((res_d, res_bd), dtype=object)
    incs = np.empty((res_d, res_bd))
    aa = np.empty((res_d, res_bd))
    bb = np.empty((res_d, res_bd))
    cc = np.empty((res_d, res_bd))

    def classify_row(i: int) -> None:
        for j, bdt in enumerate(bdts):
            v = classify(DetuningPoint(float(dts[i]), float(bdt)), nu, epsilon)
            kinds[i, j] = v.kind
            incs[i, j] = v.increment
            aa[i, j], bb[i, j], cc[i, j] = v.diagnostics

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(classify_row, range(res_d)))
    else:
        for i in range(res_d):
            classify_row(i)
    return SweepResult(
        delta_ts=dts,
        big_delta_ts=bdts,
        kinds=kinds,
        increments=incs,
        a=aa,
        b=bb,
        c=cc,
        nu=nu,
        epsilon=epsilon,
    )
