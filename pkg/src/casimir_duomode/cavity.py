"""Physical parameterization of the two-mode vibrating-cavity problem.

A cavity wall oscillates at frequency 2(1+δ) (all frequencies normalized
by the fundamental mode, ω₁⁽⁰⁾ = 1), pumping two field modes at
frequencies 1 and 3+Δ. The intermode coupling strength is ν = 96μ², with
μ set by the cavity geometry; for the {111}/{511} pair of a cubical
cavity, μ = 5/12 and ν = 50/3. Initial thermal occupations enter through
θ_k = coth(kβ/2), k ∈ {1, 3}.

This module owns the parameter container (`ModelParams`) plus the small
geometric/thermal helper functions everything else builds on.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

# Above this, |epsilon|, |delta|, |big_delta| violate the small-parameter
# assumption badly enough that results are meaningless: hard reject.
HARD_SMALLNESS_LIMIT = 0.5

# Canonical coupling for the cubical-cavity {111}/{511} mode pair.
NU_CUBICAL = 50.0 / 3.0


@dataclass(frozen=True)
class ModeIndex3D:
    """Rectangular-cavity eigenmode label (kx, ky, kz), all components >= 1."""

    kx: int
    ky: int
    kz: int

    def __post_init__(self) -> None:
        for name in ("kx", "ky", "kz"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.kx, self.ky, self.kz)


@dataclass(frozen=True)
class ModelParams:
    """Single source of truth for one run of the two-mode model.

    Attributes
    ----------
    epsilon : wall-modulation amplitude ε > 0
    delta : drive detuning δ (drive frequency is 2(1+δ))
    big_delta : second-mode detuning Δ (mode frequency is 3+Δ)
    nu : intermode coupling ν = 96μ² >= 0
    theta1, theta3 : thermal parameters θ_k = coth(kβ/2) >= 1 (vacuum: 1)
    smallness_warn : soft threshold above which |ε|, |δ|, |Δ| draw a
        warning; the theory assumes they are all << 1. Hard rejection
        happens at HARD_SMALLNESS_LIMIT regardless.
    """

    epsilon: float
    delta: float = 0.0
    big_delta: float = 0.0
    nu: float = NU_CUBICAL
    theta1: float = 1.0
    theta3: float = 1.0
    smallness_warn: float = field(default=0.1, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.nu < 0.0:
            raise ValueError(f"nu must be >= 0, got {self.nu}")
        if self.theta1 < 1.0 or self.theta3 < 1.0:
            raise ValueError(
                f"thermal parameters must be >= 1 (vacuum), got "
                f"theta1={self.theta1}, theta3={self.theta3}"
            )
        for name in ("epsilon", "delta", "big_delta"):
            v = abs(getattr(self, name))
            if v > HARD_SMALLNESS_LIMIT:
                raise ValueError(
                    f"|{name}| = {v} exceeds the hard limit "
                    f"{HARD_SMALLNESS_LIMIT}; the model assumes small parameters"
                )
            if v > self.smallness_warn:
                warnings.warn(
                    f"|{name}| = {v} exceeds {self.smallness_warn}; "
                    f"the small-parameter theory degrades here",
                    stacklevel=2,
                )

    # -- derived quantities -------------------------------------------------

    @property
    def mu(self) -> float:
        """Geometric coupling μ = sqrt(ν/96)."""
        return math.sqrt(self.nu / 96.0)

    @property
    def omega_bar(self) -> float:
        """Half the drive frequency, ω̄ = 1 + δ."""
        return 1.0 + self.delta

    @property
    def delta_t(self) -> float:
        """Normalized drive detuning δ̃ = δ/ε."""
        return self.delta / self.epsilon

    @property
    def big_delta_t(self) -> float:
        """Normalized mode detuning Δ̃ = Δ/ε."""
        return self.big_delta / self.epsilon

    @property
    def gamma_t(self) -> float:
        """Normalized combination γ̃ = Δ̃ - 3δ̃."""
        return self.big_delta_t - 3.0 * self.delta_t

    @property
    def rho(self) -> float:
        """Oscillation rate ρ = sqrt(2ν - 1) of the exact-resonance solution."""
        if self.nu <= 0.5:
            raise ValueError(f"rho is real only for nu > 1/2, got nu={self.nu}")
        return math.sqrt(2.0 * self.nu - 1.0)

    @property
    def theta31(self) -> float:
        """Thermal ratio θ₃₁ = θ₃/θ₁."""
        return self.theta3 / self.theta1

    def tau(self, t: float) -> float:
        """Slow time τ = εt/2 for fast time t."""
        return 0.5 * self.epsilon * t

    def time_from_tau(self, tau: float) -> float:
        """Fast time t = 2τ/ε for slow time τ."""
        return 2.0 * tau / self.epsilon

    # -- alternative constructors -------------------------------------------

    @classmethod
    def from_mu(cls, epsilon: float, mu: float, **kwargs) -> "ModelParams":
        return cls(epsilon=epsilon, nu=nu_from_mu(mu), **kwargs)

    @classmethod
    def from_normalized(
        cls,
        epsilon: float,
        delta_t: float = 0.0,
        big_delta_t: float = 0.0,
        **kwargs,
    ) -> "ModelParams":
        """Build from normalized detunings δ̃ = δ/ε, Δ̃ = Δ/ε."""
        return cls(
            epsilon=epsilon,
            delta=epsilon * delta_t,
            big_delta=epsilon * big_delta_t,
            **kwargs,
        )


def coth(x: float) -> float:
    """coth(x) for x > 0, stable at large argument.

    Uses coth(x) = 1 + 2/(e^{2x} - 1); returns exactly 1.0 once the
    correction underflows (naive cosh/sinh overflows near x ~ 355).
    """
    if x <= 0.0:
        raise ValueError(f"coth helper requires x > 0, got {x}")
    if x > 360.0:
        return 1.0
    return 1.0 + 2.0 / math.expm1(2.0 * x)


def mode_coupling_coefficient(k: ModeIndex3D, j: ModeIndex3D) -> float:
    """Geometric coupling m_kj of two rectangular-cavity modes.

    For a wall moving along x, m_kj = (-1)^{kx+jx} 2 kx jx / (jx² - kx²)
    when the transverse indices match, else 0. Antisymmetric in (k, j);
    undefined for k = j.
    """
    if k.as_tuple() == j.as_tuple():
        raise ValueError(f"coupling coefficient undefined for identical modes {k}")
    if k.ky != j.ky or k.kz != j.kz:
        return 0.0
    # transverse indices match and k != j, so kx != jx and the denominator
    # is nonzero
    sign = -1.0 if (k.kx + j.kx) % 2 else 1.0
    return sign * 2.0 * k.kx * j.kx / (j.kx**2 - k.kx**2)


def mu_from_resonant_pair(kx: int, jx: int) -> float:
    """μ = jx/(12 kx) for a resonant mode pair {kx,m,n}, {jx,m,n}.

    The resonance condition behind the two-mode model is jx ≈ 3 kx; the
    map itself is defined for any positive pair, but a warning is issued
    when the pair is not actually 1:3.
    """
    if not (isinstance(kx, int) and isinstance(jx, int)) or kx < 1 or jx < 1:
        raise ValueError(f"mode indices must be positive integers, got {kx!r}, {jx!r}")
    if jx != 3 * kx:
        warnings.warn(
            f"mode pair ({kx}, {jx}) is not in 1:3 resonance; "
            f"mu is computed anyway",
            stacklevel=2,
        )
    return jx / (12.0 * kx)


def nu_from_mu(mu: float) -> float:
    """Coupling constant ν = 96μ²."""
    return 96.0 * mu * mu


def theta_pair_from_beta(beta: float) -> tuple[float, float]:
    """Thermal parameters (θ₁, θ₃) = (coth(β/2), coth(3β/2)) for β > 0.

    β = +inf is accepted and yields the vacuum pair (1, 1). The result
    always satisfies θ₃/θ₁ = (θ₁² + 3)/(3θ₁² + 1).
    """
    if math.isinf(beta) and beta > 0:
        return (1.0, 1.0)
    if not beta > 0.0:
        raise ValueError(f"inverse temperature beta must be > 0, got {beta}")
    return (coth(0.5 * beta), coth(1.5 * beta))
