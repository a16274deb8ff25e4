"""Ground-truth integration of the exact two-mode equations of motion.

The slow-amplitude theory is an approximation; this module integrates the
full time-dependent equations

    ẍ₁ = -[1 + 4ε cos(2ω̄t)] x₁ + 24με [cos(2ω̄t) x₃ + sin(2ω̄t) ẋ₃]
    ẍ₃ = -[9 + 6Δ + ε̃ cos(2ω̄t)] x₃ - 24με [cos(2ω̄t) x₁ + sin(2ω̄t) ẋ₁]

with fixed-step classical RK4 and assembles the exact fundamental matrix
from the four canonical basis columns (p ≡ ẋ throughout, matching the
analytic layer's convention). Covariance matrices of zero-mean Gaussian
states propagate by congruence, Σ(t) = M Σ(0) Mᵀ.

The ε̃ knob multiplies the drive term of mode 3; the slow theory predicts
it is irrelevant at leading order, and the tests exercise that claim.

Comparisons against the analytic layer are made at stroboscopic times
t = mπ/ω̄ (integer m), where the discarded fast ripple of the
slow-amplitude ansatz vanishes; the default step divides π/ω̄ exactly so
stroboscopic times are landed on without interpolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .cavity import ModelParams
from .slowamp import FundamentalMatrix

# At least 100 integrator steps per period of the fastest oscillation (3ω̄).
MIN_STEPS_PER_FAST_PERIOD = 100
DEFAULT_STEPS_PER_FAST_PERIOD = 200


@dataclass(frozen=True)
class OracleOptions:
    """Integrator options.

    dt : step in fast time; None picks the default 2π/(3ω̄·200). Any
        explicit value must satisfy dt <= 2π/(3ω̄·100).
    epsilon_tilde : drive amplitude ε̃ of mode 3; None means ε̃ = ε.
    method : only "RK4" is supported (fixed step, reproducible).
    """

    dt: float | None = None
    epsilon_tilde: float | None = None
    method: str = "RK4"

    def __post_init__(self) -> None:
        if self.method != "RK4":
            raise ValueError(f"unsupported integrator {self.method!r}; only RK4")
        if self.dt is not None and self.dt <= 0.0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.epsilon_tilde is not None and self.epsilon_tilde < 0.0:
            raise ValueError(f"epsilon_tilde must be >= 0, got {self.epsilon_tilde}")

    def resolve_dt(self, params: ModelParams) -> float:
        limit = 2.0 * math.pi / (3.0 * params.omega_bar * MIN_STEPS_PER_FAST_PERIOD)
        if self.dt is None:
            return 2.0 * math.pi / (3.0 * params.omega_bar * DEFAULT_STEPS_PER_FAST_PERIOD)
        if self.dt > limit:
            raise ValueError(
                f"dt = {self.dt} too coarse; needs dt <= 2*pi/(3*omega_bar*100) "
                f"= {limit:.6g} for {MIN_STEPS_PER_FAST_PERIOD} steps per fast period"
            )
        return self.dt

    def resolve_epsilon_tilde(self, params: ModelParams) -> float:
        return params.epsilon if self.epsilon_tilde is None else self.epsilon_tilde


@dataclass(frozen=True, eq=False)
class CovarianceState:
    """Symmetric 4x4 second-moment matrix of (x₁, p₁, x₃, p₃), zero means."""

    sigma: np.ndarray

    def __post_init__(self) -> None:
        s = np.asarray(self.sigma, dtype=float)
        if s.shape != (4, 4):
            raise ValueError(f"covariance must be 4x4, got shape {s.shape}")
        scale = max(1.0, float(np.abs(s).max()))
        if not np.allclose(s, s.T, atol=1e-12 * scale):
            raise ValueError("covariance matrix must be symmetric")
        if float(np.linalg.eigvalsh(s).min()) < -1e-12 * scale:
            raise ValueError("covariance matrix must be positive semidefinite")

    def mode_moments(self, mode: int) -> tuple[float, float, float]:
        """(⟨x²⟩, ⟨p²⟩, ⟨(xp+px)/2⟩) of mode 1 or 3."""
        i = _mode_offset(mode)
        s = self.sigma
        return (float(s[i, i]), float(s[i + 1, i + 1]), float(s[i, i + 1]))

    def mode_iup(self, mode: int) -> float:
        """Invariant uncertainty product ⟨x²⟩⟨p²⟩ - ⟨(xp+px)/2⟩² of one mode."""
        xx, pp, xp = self.mode_moments(mode)
        return xx * pp - xp * xp


def _mode_offset(mode: int) -> int:
    if mode == 1:
        return 0
    if mode == 3:
        return 2
    raise ValueError(f"mode must be 1 or 3, got {mode}")


def rhs(
    t: float,
    state: np.ndarray,
    params: ModelParams,
    opts: OracleOptions | None = None,
) -> np.ndarray:
    """Time derivative of (x₁, ẋ₁, x₃, ẋ₃) under the exact equations."""
    opts = opts or OracleOptions()
    eps = params.epsilon
    eps_t = opts.resolve_epsilon_tilde(params)
    c = math.cos(2.0 * params.omega_bar * t)
    s = math.sin(2.0 * params.omega_bar * t)
    k = 24.0 * params.mu * eps
    x1, v1, x3, v3 = np.asarray(state, dtype=float)
    a1 = -(1.0 + 4.0 * eps * c) * x1 + k * (c * x3 + s * v3)
    a3 = -(9.0 + 6.0 * params.big_delta + eps_t * c) * x3 - k * (c * x1 + s * v1)
    return np.array([v1, a1, v3, a3])


@njit(cache=True)
def _rk4_steps(U, t0, h, nsteps, eps, k24, om2, w3, eps_t):  # pragma: no cover
    """Advance the 4x4 fundamental matrix by nsteps RK4 steps of size h.

    Exploits the linear structure: dU/dt = F(t) U with F sparse, so each
    stage is a handful of scalar row operations instead of a dense matmul.
    """
    k = np.empty((4, 4))
    src = np.empty((4, 4))
    acc = np.empty((4, 4))
    for n in range(nsteps):
        t = t0 + n * h
        for stage in range(4):
            if stage == 0:
                ts = t
                for i in range(4):
                    for j in range(4):
                        src[i, j] = U[i, j]
                w = 1.0
            elif stage == 3:
                ts = t + h
                for i in range(4):
                    for j in range(4):
                        src[i, j] = U[i, j] + h * k[i, j]
                w = 1.0
            else:
                ts = t + 0.5 * h
                for i in range(4):
                    for j in range(4):
                        src[i, j] = U[i, j] + 0.5 * h * k[i, j]
                w = 2.0
            c = math.cos(om2 * ts)
            s = math.sin(om2 * ts)
            a21 = -(1.0 + 4.0 * eps * c)
            a23 = k24 * c
            a24 = k24 * s
            a43 = -(w3 + eps_t * c)
            for j in range(4):
                k0 = src[1, j]
                k1 = a21 * src[0, j] + a23 * src[2, j] + a24 * src[3, j]
                k2 = src[3, j]
                k3 = -a23 * src[0, j] - a24 * src[1, j] + a43 * src[2, j]
                if stage == 0:
                    acc[0, j] = k0
                    acc[1, j] = k1
                    acc[2, j] = k2
                    acc[3, j] = k3
                else:
                    acc[0, j] += w * k0
                    acc[1, j] += w * k1
                    acc[2, j] += w * k2
                    acc[3, j] += w * k3
                k[0, j] = k0
                k[1, j] = k1
                k[2, j] = k2
                k[3, j] = k3
        for i in range(4):
            for j in range(4):
                U[i, j] += (h / 6.0) * acc[i, j]


def _advance(
    U: np.ndarray, t0: float, t1: float, dt: float, params: ModelParams, eps_t: float
) -> None:
    """Integrate U in place from t0 to t1 with steps of size <= dt."""
    span = t1 - t0
    if span <= 0.0:
        return
    nsteps = max(1, math.ceil(span / dt - 1e-12))
    h = span / nsteps
    _rk4_steps(
        U,
        t0,
        h,
        nsteps,
        params.epsilon,
        24.0 * params.mu * params.epsilon,
        2.0 * params.omega_bar,
        9.0 + 6.0 * params.big_delta,
        eps_t,
    )


def oracle_fundamental_matrix(
    t_end: float, params: ModelParams, opts: OracleOptions | None = None
) -> FundamentalMatrix:
    """Exact fundamental matrix at t_end from RK4 basis-column integration."""
    return oracle_fundamental_matrices([t_end], params, opts)[0]


def oracle_fundamental_matrices(
    t_grid: list[float] | np.ndarray,
    params: ModelParams,
    opts: OracleOptions | None = None,
) -> list[FundamentalMatrix]:
    """Fundamental matrices at an increasing grid of times, one integration.

    The grid must be sorted and nonnegative; each requested time is landed
    on exactly (the final step of a segment is shortened as needed).
    """
    opts = opts or OracleOptions()
    dt = opts.resolve_dt(params)
    eps_t = opts.resolve_epsilon_tilde(params)
    times = [float(t) for t in t_grid]
    if any(t < 0.0 for t in times):
        raise ValueError("oracle times must be >= 0")
    if any(b < a for a, b in zip(times, times[1:])):
        raise ValueError("oracle time grid must be sorted increasingly")
    out: list[FundamentalMatrix] = []
    U = np.eye(4)
    t_prev = 0.0
    for t in times:
        _advance(U, t_prev, t, dt, params, eps_t)
        t_prev = t
        out.append(FundamentalMatrix(entries=U.copy(), t=t))
    return out


def stroboscopic_times(params: ModelParams, tau_max: float, n_samples: int) -> np.ndarray:
    """About n_samples times t = mπ/ω̄ covering slow times (0, tau_max].

    The analytic and oracle layers agree up to O(ε) only on this grid;
    off it, the discarded fast ripple of the slow ansatz shows up.
    """
    period = math.pi / params.omega_bar
    m_max = int(params.time_from_tau(tau_max) / period)
    if m_max < 1:
        raise ValueError(f"tau_max = {tau_max} too small for one fast half-period")
    step = max(1, m_max // max(1, n_samples))
    ms = np.arange(step, m_max + 1, step)
    return ms * period


def thermal_covariance(theta1: float, theta3: float) -> CovarianceState:
    """Thermal (or vacuum) initial covariance diag(θ₁/2, θ₁/2, θ₃/6, 3θ₃/2).

    Mode k has ⟨x²⟩ = θ_k/(2k) and ⟨p²⟩ = kθ_k/2, so the initial energies
    are E₁ = θ₁/2 and E₃ = 3θ₃/2.
    """
    if theta1 < 1.0 or theta3 < 1.0:
        raise ValueError(
            f"thermal parameters must be >= 1, got ({theta1}, {theta3})"
        )
    return CovarianceState(
        sigma=np.diag([0.5 * theta1, 0.5 * theta1, theta3 / 6.0, 1.5 * theta3])
    )


def propagate_covariance(M: FundamentalMatrix, sigma0: CovarianceState) -> CovarianceState:
    """Heisenberg evolution of second moments: Σ(t) = M Σ(0) Mᵀ."""
    s = M.entries @ sigma0.sigma @ M.entries.T
    return CovarianceState(sigma=0.5 * (s + s.T))
