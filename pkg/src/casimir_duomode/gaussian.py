"""Per-mode observables and photon statistics of zero-mean Gaussian states.

A single mode of a zero-mean Gaussian state is fully characterized by two
invariants: the dimensionless mean energy Ẽ = E/ω_k⁽⁰⁾ and the invariant
uncertainty product 𝒟 = ⟨x²⟩⟨p²⟩ - ⟨(xp+px)/2⟩². Everything else follows:

    purity         Tr ρ² = (4𝒟)^{-1/2}
    squeezing      s = 2𝒟/(Ẽ + sqrt(Ẽ² - 𝒟))      (s < 1: below vacuum)
    photon count   ⟨n⟩ = Ẽ - 1/2,  σ_n = 2Ẽ² - 𝒟 - 1/4
    photon PDF     𝒫_n = (2/sqrt(A)) (B/A)^{n/2} P_n((4𝒟-1)/sqrt(AB)),
                   A = 1 + 4𝒟 + 4Ẽ,  B = 1 + 4𝒟 - 4Ẽ

with P_n a Legendre polynomial whose argument lies outside (-1, 1) (real
for B > 0, purely imaginary for B < 0). The exponentially small prefactor
and the exponentially large Legendre value are never formed separately:
the PDF is generated by a jointly rescaled three-term recurrence on
T_n = (B/A)^{n/2} P_n, whose coefficients (4𝒟-1)/A and B/A are finite in
every regime, including the B -> 0 boundary. On the thermal line 𝒟 = Ẽ²
(where the Legendre argument is indeterminate) the closed geometric law
is used instead.

Closed-form time dependences of (Ẽ, 𝒟) are provided for the two regimes
with analytic solutions: exact resonance (δ = Δ = 0) and the asymmetric
special case (δ̃ = 1, γ̃ = -ν/2). Asymptotic large-n PDF formulas and the
long-time vacuum formula complete the set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cavity import ModelParams
from .oracle import CovarianceState
from .slowamp import asymmetric_rj

_FEASIBILITY_RTOL = 1e-9


@dataclass(frozen=True)
class ModeObservables:
    """(Ẽ, 𝒟) summary of one mode; mode_index is 1 or 3."""

    e_tilde: float
    iup: float
    mode_index: int = 1

    def __post_init__(self) -> None:
        if self.mode_index not in (1, 3):
            raise ValueError(f"mode_index must be 1 or 3, got {self.mode_index}")
        if self.e_tilde < 0.5 * (1.0 - _FEASIBILITY_RTOL):
            raise ValueError(f"mean energy E_tilde must be >= 1/2, got {self.e_tilde}")
        if self.iup < 0.25 * (1.0 - _FEASIBILITY_RTOL):
            raise ValueError(f"IUP must be >= 1/4 (Heisenberg), got {self.iup}")
        slack = _FEASIBILITY_RTOL * self.e_tilde**2
        if self.e_tilde**2 < self.iup - slack:
            raise ValueError(
                f"infeasible Gaussian observables: E_tilde^2 = {self.e_tilde**2} "
                f"< IUP = {self.iup}"
            )

    @property
    def mean_photons(self) -> float:
        return self.e_tilde - 0.5


@dataclass(frozen=True, eq=False)
class PhotonDistribution:
    """Photon-number probabilities for n = 0..n_max plus a tail-mass bound."""

    probs: np.ndarray
    n_max: int
    tail_mass_bound: float

    def __post_init__(self) -> None:
        p = self.probs
        if p.shape != (self.n_max + 1,):
            raise ValueError(f"probs must have length n_max+1 = {self.n_max + 1}")
        if float(p.min()) < 0.0 or float(p.max()) > 1.0 + 1e-9:
            raise ValueError("probabilities must lie in [0, 1]")
        if float(p.sum()) > 1.0 + 1e-9:
            raise ValueError("probabilities sum above 1")

    def mean(self) -> float:
        return float(np.arange(self.n_max + 1) @ self.probs)

    def variance(self) -> float:
        n = np.arange(self.n_max + 1)
        m = self.mean()
        return float(((n - m) ** 2) @ self.probs)


def observables_from_covariance(sigma: CovarianceState, mode: int) -> ModeObservables:
    """Extract (Ẽ, 𝒟) of mode 1 or 3 from a covariance matrix."""
    xx, pp, xp = sigma.mode_moments(mode)
    k = float(mode)
    return ModeObservables(
        e_tilde=(pp + k * k * xx) / (2.0 * k),
        iup=xx * pp - xp * xp,
        mode_index=mode,
    )


# ---------------------------------------------------------------------------
# Closed-form time dependences
# ---------------------------------------------------------------------------


def _require_exact_resonance(params: ModelParams) -> None:
    if abs(params.delta) > 1e-12 or abs(params.big_delta) > 1e-12:
        raise ValueError("closed form requires exact resonance delta = big_delta = 0")
    if params.nu <= 0.5:
        raise ValueError(f"closed form requires nu > 1/2, got {params.nu}")


def energy_exact_resonance(tau: float, params: ModelParams, mode: int) -> float:
    """Mean energy E_k(τ) at exact resonance (E₁(0) = θ₁/2, E₃(0) = 3θ₃/2)."""
    _require_exact_resonance(params)
    rho = params.rho
    s2 = math.sin(rho * tau) ** 2
    c2 = math.cos(rho * tau) ** 2
    osc = math.sinh(2.0 * tau) * math.sin(2.0 * rho * tau) / rho
    ch = math.cosh(2.0 * tau)
    nu = params.nu
    if mode == 1:
        ratio = params.theta3 / params.theta1
        return 0.5 * params.theta1 * (
            ch * (s2 / rho**2 * (1.0 + 2.0 * nu * ratio) + c2) + osc
        )
    if mode == 3:
        ratio = params.theta1 / params.theta3
        return 1.5 * params.theta3 * (
            ch * (s2 / rho**2 * (1.0 + 2.0 * nu * ratio) + c2) - osc
        )
    raise ValueError(f"mode must be 1 or 3, got {mode}")


def iup_exact_resonance(tau: float, params: ModelParams, mode: int) -> float:
    """Invariant uncertainty product 𝒟_k(τ) at exact resonance.

    Periodic in τ with rate ρ; for vacuum it reduces to
    (1/4)[1 + 8ν sin⁴(ρτ)/(2ν-1)²], so the modes stay nearly pure when
    ν >> 1, while for θ₁ ≠ θ₃ the modes trade purities at sin(ρτ) = ±1.
    """
    _require_exact_resonance(params)
    if mode == 1:
        th, ratio = params.theta1, params.theta3 / params.theta1
    elif mode == 3:
        th, ratio = params.theta3, params.theta1 / params.theta3
    else:
        raise ValueError(f"mode must be 1 or 3, got {mode}")
    nu = params.nu
    rho = params.rho
    s, c = math.sin(rho * tau), math.cos(rho * tau)
    s2d = math.sin(2.0 * rho * tau) ** 2
    return 0.25 * th * th * (
        c**4
        + s2d * (2.0 * nu * ratio - 1.0) / (2.0 * (2.0 * nu - 1.0))
        + s**4 * ((2.0 * nu * ratio + 1.0) / (2.0 * nu - 1.0)) ** 2
    )


def _psi(tau: float, R: float, J: float) -> float:
    return math.cosh(2.0 * R * tau) * math.cos(2.0 * J * tau)


def _require_asymmetric(params: ModelParams) -> None:
    if abs(params.delta_t - 1.0) > 1e-9:
        raise ValueError(f"asymmetric regime requires delta_t = 1, got {params.delta_t}")
    target = -0.5 * params.nu
    if abs(params.gamma_t - target) > 1e-9 * max(1.0, abs(target)):
        raise ValueError(
            f"asymmetric regime requires gamma_t = -nu/2 = {target}, "
            f"got {params.gamma_t}"
        )
    if params.nu <= 2.0:
        raise ValueError(f"asymmetric closed form assumes nu >> 1, got nu={params.nu}")


def energy_asymmetric(tau: float, params: ModelParams, mode: int) -> float:
    """Mean energy E_k(τ) in the asymmetric regime (δ̃ = 1, γ̃ = -ν/2).

    Mode 1 grows at almost twice the exact-resonance rate while mode 3
    saturates near E₃/E₁ ~ 6/ν for τ > 1.
    """
    _require_asymmetric(params)
    nu = params.nu
    R, J = asymmetric_rj(nu)
    ch = math.cosh(4.0 * R * tau)
    ps = _psi(tau, R, J)
    th1, th3 = params.theta1, params.theta3
    if mode == 1:
        return 0.5 * th1 * ((1.0 - 4.0 / nu) * ch + 4.0 / nu * ps) + (
            th3 / nu
        ) * (ch + 1.0 - 2.0 * ps)
    if mode == 3:
        return 1.5 * th3 * (1.0 - 4.0 / nu + 4.0 / nu * ps) + (
            3.0 * th1 / nu
        ) * (ch + 1.0 - 2.0 * ps)
    raise ValueError(f"mode must be 1 or 3, got {mode}")


def iup_asymmetric(tau: float, params: ModelParams, mode: int) -> float:
    """𝒟_k(τ) in the asymmetric regime; grows like θ₁θ₃ e^{4Rτ}/(2ν)."""
    _require_asymmetric(params)
    nu = params.nu
    R, J = asymmetric_rj(nu)
    ch = math.cosh(4.0 * R * tau)
    ps = _psi(tau, R, J)
    th = params.theta1 if mode == 1 else params.theta3
    if mode not in (1, 3):
        raise ValueError(f"mode must be 1 or 3, got {mode}")
    return 0.25 * th * th * (1.0 - 8.0 / nu + 8.0 / nu * ps) + (
        params.theta1 * params.theta3 / nu
    ) * (ch + 1.0 - 2.0 * ps)


def observables_exact_resonance(tau: float, params: ModelParams, mode: int) -> ModeObservables:
    """(Ẽ, 𝒟) of one mode at exact resonance (Ẽ = E/ω_k⁽⁰⁾)."""
    e = energy_exact_resonance(tau, params, mode) / float(mode)
    return ModeObservables(e_tilde=e, iup=iup_exact_resonance(tau, params, mode), mode_index=mode)


def observables_asymmetric(tau: float, params: ModelParams, mode: int) -> ModeObservables:
    """(Ẽ, 𝒟) of one mode in the asymmetric regime.

    The O(ν⁻²) truncation of the closed forms can leave Ẽ² - 𝒟 slightly
    negative at small τ; 𝒟 is capped at Ẽ² (relative excess up to 1e-4 is
    treated as truncation noise, larger violations raise).
    """
    e = energy_asymmetric(tau, params, mode) / float(mode)
    d = iup_asymmetric(tau, params, mode)
    if d > e * e:
        if d > e * e * (1.0 + 1e-4):
            raise ValueError(
                f"asymmetric closed forms infeasible at tau={tau}: "
                f"IUP={d} > E_tilde^2={e * e}"
            )
        d = e * e
    return ModeObservables(e_tilde=e, iup=d, mode_index=mode)


# ---------------------------------------------------------------------------
# Scalar observables
# ---------------------------------------------------------------------------


def purity(iup: float) -> float:
    """Tr ρ² = (4𝒟)^{-1/2}; 1 for pure states, 1/θ for thermal ones."""
    if iup < 0.25 * (1.0 - _FEASIBILITY_RTOL):
        raise ValueError(f"IUP below the Heisenberg floor 1/4: {iup}")
    return 1.0 / math.sqrt(4.0 * max(iup, 0.25))


def squeezing(obs: ModeObservables) -> float:
    """Squeezing coefficient s = 2𝒟/(Ẽ + sqrt(Ẽ² - 𝒟)).

    Equals the minimal quadrature variance over one fast period divided
    by its vacuum value; s(thermal) = θ, s < 1 signals squeezing.
    """
    e, d = obs.e_tilde, obs.iup
    rad = e * e - d
    if rad < 0.0:
        # feasibility was already checked to _FEASIBILITY_RTOL at construction
        rad = 0.0
    return 2.0 * d / (e + math.sqrt(rad))


def photon_variance(obs: ModeObservables) -> float:
    """Variance of the photon number, σ_n = 2Ẽ² - 𝒟 - 1/4."""
    return max(0.0, 2.0 * obs.e_tilde**2 - obs.iup - 0.25)


# ---------------------------------------------------------------------------
# Legendre polynomials
# ---------------------------------------------------------------------------


def legendre_scaled(n: int, z: complex) -> tuple[float, complex]:
    """P_n(z) as (log_magnitude, phase) with |phase| = 1 (or 0 if P_n = 0).

    Upward three-term recurrence with periodic rescaling, safe for any n
    and |z|; P_n(z) = exp(log_magnitude) * phase.
    """
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    zl = np.clongdouble(z)
    p_prev = np.clongdouble(1.0)
    if n == 0:
        return (0.0, 1.0 + 0.0j)
    p = zl
    log_scale = 0.0
    for m in range(1, n):
        p, p_prev = ((2 * m + 1) * zl * p - m * p_prev) / (m + 1), p
        mag = abs(complex(p))
        if mag > 1e150:
            p /= np.clongdouble(1e150)
            p_prev /= np.clongdouble(1e150)
            log_scale += math.log(1e150)
        elif 0.0 < mag < 1e-150:
            p *= np.clongdouble(1e150)
            p_prev *= np.clongdouble(1e150)
            log_scale -= math.log(1e150)
    val = complex(p)
    if val == 0.0:
        return (-math.inf, 0.0 + 0.0j)
    return (log_scale + math.log(abs(val)), val / abs(val))


def legendre(n: int, z: complex) -> complex:
    """Legendre polynomial P_n(z) for real or complex argument.

    For purely imaginary z the exact result is real (even n) or purely
    imaginary (odd n); parity residue beyond 1e-10 relative raises. When
    |P_n| overflows double precision an OverflowError points to
    `legendre_scaled`.
    """
    log_mag, phase = legendre_scaled(n, z)
    if log_mag == -math.inf:
        return 0.0 + 0.0j
    if log_mag > 709.0:
        raise OverflowError(
            f"|P_{n}({z})| = exp({log_mag:.1f}) exceeds double range; "
            f"use legendre_scaled for (log-magnitude, phase)"
        )
    val = math.exp(log_mag) * phase
    if complex(z).real == 0.0 and complex(z).imag != 0.0:
        keep, drop = (val.real, val.imag) if n % 2 == 0 else (val.imag, val.real)
        if abs(drop) > 1e-10 * max(abs(keep), 1e-300):
            raise ArithmeticError(
                f"parity violated for imaginary argument: P_{n}({z}) = {val}"
            )
        val = complex(keep, 0.0) if n % 2 == 0 else complex(0.0, keep)
    return val


# ---------------------------------------------------------------------------
# Photon distribution: exact and asymptotic
# ---------------------------------------------------------------------------


def _geometric_pdf(e_tilde: float, n_max: int) -> PhotonDistribution:
    """Thermal-line closed form: 𝒫_n = 2(θ-1)ⁿ/(θ+1)ⁿ⁺¹ with θ = 2Ẽ."""
    theta = 2.0 * e_tilde
    ratio = (theta - 1.0) / (theta + 1.0)
    n = np.arange(n_max + 1)
    if ratio == 0.0:
        probs = np.zeros(n_max + 1)
        probs[0] = 1.0
        tail = 0.0
    else:
        probs = 2.0 / (theta + 1.0) * ratio**n
        tail = ratio ** (n_max + 1)
    return PhotonDistribution(probs=probs, n_max=n_max, tail_mass_bound=float(tail))


def default_n_max(e_tilde: float) -> int:
    """Cutoff guaranteeing < 1e-6 tail mass: n_max = ceil(40 Ẽ)."""
    return int(math.ceil(40.0 * e_tilde))


def pdf_exact(obs: ModeObservables, n_max: int | None = None) -> PhotonDistribution:
    """Exact photon distribution of a zero-mean Gaussian mode.

    Evaluates 𝒫_n = (2/sqrt(A)) T_n through the prefactor-absorbed
    Legendre recurrence

        (m+1) T_{m+1} = (2m+1) ((4𝒟-1)/A) T_m - m (B/A) T_{m-1},

    which keeps every intermediate on the probability scale; round-off
    can leave odd terms infinitesimally negative, and anything in
    [-1e-12, 0) is clipped to zero.
    """
    e, d = obs.e_tilde, obs.iup
    if n_max is None:
        n_max = default_n_max(e)
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    if d >= e * e * (1.0 - 1e-12):
        # thermal line (includes vacuum); the Legendre argument is 0/0 here
        return _geometric_pdf(e, n_max)

    A = 1.0 + 4.0 * d + 4.0 * e
    B = 1.0 + 4.0 * d - 4.0 * e
    w = (4.0 * d - 1.0) / A
    r = B / A
    T = np.empty(n_max + 1)
    T[0] = 1.0
    if n_max >= 1:
        T[1] = w
    for m in range(1, n_max):
        T[m + 1] = ((2 * m + 1) * w * T[m] - m * r * T[m - 1]) / (m + 1)
    probs = (2.0 / math.sqrt(A)) * T
    bad = probs < -1e-12
    if bool(bad.any()):
        raise ArithmeticError(
            f"photon probabilities went negative beyond round-off at "
            f"n = {int(np.argmax(bad))}"
        )
    probs = np.clip(probs, 0.0, None)

    # tail bound from the exp(-n/(2E)) envelope of the distribution tail,
    # with the envelope constant read off the last computed terms
    decay = math.exp(-0.5 / e)
    lookback = min(10, n_max)
    ns = np.arange(n_max - lookback, n_max + 1)
    K = float(np.max(probs[ns] * np.exp(ns / (2.0 * e)))) if lookback > 0 else 1.0
    tail = K * decay ** (n_max + 1) / (1.0 - decay)
    return PhotonDistribution(probs=probs, n_max=n_max, tail_mass_bound=tail)


def _log_cosh(x: float) -> float:
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)


def _log_sinh(x: float) -> float:
    # x >= 0; -inf at 0
    if x == 0.0:
        return -math.inf
    return x + math.log1p(-math.exp(-2.0 * x)) - math.log(2.0)


def _require_asymptotic_regime(obs: ModeObservables, n: int) -> None:
    if obs.e_tilde**2 < 20.0 * obs.iup:
        raise ValueError(
            f"asymptotic PDF requires E_tilde^2 >= 20*IUP, got "
            f"{obs.e_tilde**2:.4g} < {20.0 * obs.iup:.4g}"
        )
    if n < 10:
        raise ValueError(f"asymptotic PDF requires n >= 10, got {n}")


def pdf_asymptotic(obs: ModeObservables, n: int, variant: str = "full") -> float:
    """Large-n asymptotic photon probability (regime: Ẽ² >= 20𝒟, n >= 10).

    Variants:
      "full"           parity-split cosh/sinh form, valid for real and
                       imaginary Legendre argument
      "quasigeometric" nonoscillating geometric-with-n^{-1/2} shortcut
      "oscillating"    strongly oscillating squeezed-regime shortcut
      "tail"           deep-tail form, independent of 𝒟
    """
    _require_asymptotic_regime(obs, n)
    e, d = obs.e_tilde, obs.iup
    q = 4.0 * d - 1.0
    A = 1.0 + 4.0 * d + 4.0 * e
    B = 1.0 + 4.0 * d - 4.0 * e
    if variant == "full":
        if B == 0.0:
            raise ValueError("degenerate boundary 1 + 4*IUP = 4*E_tilde")
        rad = max(e * e - d, 0.0)
        m4 = 4.0 * math.sqrt(rad)
        log_chi = math.log(q + m4) - 0.5 * math.log(A * abs(B))
        arg = (n + 0.5) * log_chi
        # prefactor normalized to reduce exactly to the quasigeometric,
        # oscillating and tail limits (the n >> 1 Legendre asymptotic gives
        # sqrt(2/(pi n)) (E^2 - D)^{-1/4} (|B|/A)^{(2n+1)/4})
        log_pre = (
            0.5 * math.log(2.0 / (math.pi * n))
            - 0.25 * math.log(rad)
            + 0.25 * (2 * n + 1) * (math.log(abs(B)) - math.log(A))
        )
        log_hyp = _log_cosh(arg) if n % 2 == 0 else _log_sinh(arg)
        return math.exp(log_pre + log_hyp)
    if variant == "quasigeometric":
        m4 = 4.0 * math.sqrt(max(e * e - d, 0.0))
        return math.exp(
            -0.5 * math.log(2.0 * math.pi * n * e)
            + (n + 0.5) * (math.log(q + m4) - math.log(A))
        )
    if variant == "oscillating":
        base = 1.0 - (4.0 * d + 1.0) / (2.0 * e)
        if base <= 0.0:
            raise ValueError("oscillating shortcut needs 2*E_tilde > 4*IUP + 1")
        arg = n * q / (4.0 * e)
        log_hyp = _log_cosh(arg) if n % 2 == 0 else _log_sinh(arg)
        return math.exp(
            0.5 * math.log(2.0 / (math.pi * n * e))
            + 0.5 * n * math.log(base)
            + log_hyp
        )
    if variant == "tail":
        return math.exp(-n / (2.0 * e)) / math.sqrt(2.0 * math.pi * n * e)
    raise ValueError(f"unknown variant {variant!r}")


def pdf_vacuum_longtime(tau: float, nu: float, n: int) -> float:
    """Long-time vacuum-start photon probability at exact resonance.

    𝒫_n ≈ e^{-τ} sqrt(8/(πn)) (1 - 4e^{-2τ})^{n/2} x cosh/sinh of
    (2n/ν) sin⁴(ρτ) e^{-2τ}; odd-n probabilities vanish whenever
    sin(ρτ) = 0. Regime: τ >= 2, ν >= 10, n >= 10.
    """
    if tau < 2.0:
        raise ValueError(f"long-time vacuum formula requires tau >= 2, got {tau}")
    if nu < 10.0:
        raise ValueError(f"long-time vacuum formula requires nu >= 10, got {nu}")
    if n < 10:
        raise ValueError(f"long-time vacuum formula requires n >= 10, got {n}")
    rho = math.sqrt(2.0 * nu - 1.0)
    damp = math.exp(-2.0 * tau)
    arg = (2.0 * n / nu) * math.sin(rho * tau) ** 4 * damp
    hyp = math.cosh(arg) if n % 2 == 0 else math.sinh(arg)
    return (
        math.exp(-tau)
        * math.sqrt(8.0 / (math.pi * n))
        * (1.0 - 4.0 * damp) ** (0.5 * n)
        * hyp
    )
