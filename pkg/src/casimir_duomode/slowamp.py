"""Slow-amplitude theory of the two driven modes.

Substituting x_k(t) = ξ_k⁺ e^{ikω̄t} + ξ_k⁻ e^{-ikω̄t} (k = 1, 3) into the
equations of motion and keeping leading order in the small parameters
turns the oscillatory problem into a constant-coefficient linear system
dv/dt = A v for v = (ξ₁⁺, ξ₁⁻, ξ₃⁺, ξ₃⁻). This module builds A, computes
its eigenvalues ±λ± in closed form, evaluates the regime-specific
increment formulas, and assembles real 4x4 fundamental matrices mapping
(x₁, p₁, x₃, p₃)(0) to time t:

* `fundamental_matrix_exact_resonance` - closed form at δ = Δ = 0,
* `fundamental_matrix_asymmetric` - closed form at δ̃ = 1, γ̃ = -ν/2,
* `fundamental_matrix_generic` - matrix exponential of A plus fast-phase
  reconstruction, valid for any parameters.

The momentum rows use p_k = ∂x_k/∂t taken at fixed slow time, i.e. the
same leading-order identification of momenta with velocities that the
closed-form energies assume; energies inherit an O(ε) error from it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .cavity import ModelParams

# Eigendecomposition is preferred for exp(At); degenerate eigenvalues occur
# exactly on resonance boundaries (c = 0), where we fall back to Pade
# scaling-and-squaring.
_EIGENVECTOR_COND_LIMIT = 1e8


@dataclass(frozen=True, eq=False)
class SlowMatrix:
    """The 4x4 complex slow-amplitude matrix in the (ξ₁⁺, ξ₁⁻, ξ₃⁺, ξ₃⁻) basis."""

    entries: np.ndarray


@dataclass(frozen=True)
class EigenSet:
    """Eigenvalue pair of the slow matrix; the spectrum is {±λ₊, ±λ₋}.

    `abc` carries the (a, b, c) coefficients of the closed-form solution,
    satisfying c = a² - b. Branches are fixed by the sum/difference form
    λ± = (1/2)(sqrt(a + sqrt(b)) ± sqrt(a - sqrt(b))), which guarantees
    Re λ₊ >= Re λ₋ >= 0.
    """

    lambda_plus: complex
    lambda_minus: complex
    abc: tuple[float, float, float]


@dataclass(frozen=True, eq=False)
class FundamentalMatrix:
    """Real 4x4 map of (x₁, p₁, x₃, p₃) from time 0 to fast time t >= 0."""

    entries: np.ndarray
    t: float


def build_matrix(params: ModelParams) -> SlowMatrix:
    """Slow-amplitude matrix A; purely imaginary entries, zero trace."""
    e = params.epsilon
    d = params.delta
    g = params.big_delta - 3.0 * params.delta
    mu = params.mu
    A = np.array(
        [
            [-1j * d, 1j * e, 12j * mu * e, 0.0],
            [-1j * e, 1j * d, 0.0, -12j * mu * e],
            [4j * mu * e, 0.0, 1j * g, 0.0],
            [0.0, -4j * mu * e, 0.0, -1j * g],
        ],
        dtype=complex,
    )
    return SlowMatrix(entries=A)


def abc_coefficients(
    epsilon: float, delta: float, big_delta: float, nu: float
) -> tuple[float, float, float]:
    """Characteristic coefficients (a, b, c) of the slow matrix.

    λ± = (1/sqrt(2)) sqrt(a ± sqrt(c)) with c = a² - b; all three are
    returned with c evaluated from its own closed form, which agrees with
    a² - b to round-off.
    """
    g = big_delta - 3.0 * delta
    e2 = epsilon * epsilon
    a = e2 * (1.0 - nu) - delta * delta - g * g
    b = (2.0 * (delta - epsilon) * g + nu * e2) * (
        2.0 * (delta + epsilon) * g + nu * e2
    )
    eta = big_delta - 4.0 * delta
    c = 2.0 * e2 * nu * (eta * eta - e2) + (
        e2 + (big_delta - 2.0 * delta) * eta
    ) ** 2
    return (a, b, c)


def lambda_pair(a: float, b: float) -> tuple[complex, complex]:
    """Eigenvalues (λ₊, λ₋) from (a, b) via the branch-fixing form.

    Principal square roots make Re λ₊ >= Re λ₋ >= 0 automatically.
    """
    sb = cmath.sqrt(complex(b))
    up = cmath.sqrt(a + sb)
    um = cmath.sqrt(a - sb)
    return (0.5 * (up + um), 0.5 * (up - um))


def eigenvalues(params: ModelParams) -> EigenSet:
    """Closed-form eigenvalues of build_matrix(params)."""
    a, b, c = abc_coefficients(
        params.epsilon, params.delta, params.big_delta, params.nu
    )
    lp, lm = lambda_pair(a, b)
    return EigenSet(lambda_plus=lp, lambda_minus=lm, abc=(a, b, c))


# ---------------------------------------------------------------------------
# Increment formulas for the resonance regimes (all in units of ε)
# ---------------------------------------------------------------------------


def increment_symmetric_line(delta_t: float, nu: float) -> complex:
    """λ₊/ε on the compensation line Δ̃ = 4δ̃ (ν >> 1).

    Returns (1/2)[sqrt(ν/(ν + 2δ̃²)) + i sqrt(2(ν + 2δ̃²))]; multiply by ε
    for the dimensional eigenvalue. λ₋/ε differs by the sign of the
    imaginary part. At δ̃ = 0 the real part is 1/2, the exact-resonance
    increment.
    """
    if nu <= 0.0:
        raise ValueError(f"symmetric-line increment requires nu > 0, got {nu}")
    w = nu + 2.0 * delta_t * delta_t
    return 0.5 * (math.sqrt(nu / w) + 1j * math.sqrt(2.0 * w))


def increment_asymmetric_inner(delta_t: float, xi: float) -> float:
    """λ₊²/ε² in the asymmetric region for |δ̃| <= 1, with γ̃ = -νξ/4.

    May be negative, meaning no generation. The maximum λ₊ = ε sits at
    ξ = 2/δ̃. For |ξ| -> inf this reduces to the single-mode 1 - δ̃².
    """
    if abs(delta_t) > 1.0:
        raise ValueError(f"inner parametrization needs |delta_t| <= 1, got {delta_t}")
    if abs(xi) < 1.0:
        raise ValueError(f"inner parametrization needs |xi| >= 1, got {xi}")
    return 1.0 - delta_t * delta_t + 4.0 * (delta_t * xi - 1.0) / (xi * xi)


def increment_asymmetric_outer(delta_t: float, chi: float, nu: float) -> float:
    """λ₊/ε in the asymmetric region for |δ̃| > 1, with γ̃ = -ν/(2(δ̃ + χ)).

    Valid for |χ| < 1 (inside the resonance lobe); returns
    ν sqrt(1 - χ²)/(ν + 2δ̃²).
    """
    if abs(chi) >= 1.0:
        raise ValueError(f"outside resonance: |chi| must be < 1, got {chi}")
    return nu * math.sqrt(1.0 - chi * chi) / (nu + 2.0 * delta_t * delta_t)


def asymmetric_rj(nu: float) -> tuple[float, float]:
    """Truncated eigenvalue pair (R, J) of the δ̃ = 1, γ̃ = -ν/2 case.

    λ₊ = εR with R = 1 - 2/ν and λ₋ = iεJ with J = ν/2 + 1, both up to
    O(ν⁻²); these are the values the closed-form solution is built with.
    """
    return (1.0 - 2.0 / nu, 0.5 * nu + 1.0)


# ---------------------------------------------------------------------------
# Fundamental matrices
# ---------------------------------------------------------------------------


def _kernels(tau_like: float, phase: float) -> tuple[float, float, float, float]:
    """(C⁺, C⁻, S⁺, S⁻) hyperbolic/trigonometric kernels at given arguments."""
    ch, sh = math.cosh(tau_like), math.sinh(tau_like)
    co, si = math.cos(phase), math.sin(phase)
    return (
        ch * co + sh * si,  # C+
        ch * co - sh * si,  # C-
        sh * co + ch * si,  # S+
        sh * co - ch * si,  # S-
    )


def fundamental_matrix_exact_resonance(t: float, params: ModelParams) -> FundamentalMatrix:
    """Closed-form fundamental matrix at exact resonance (δ = Δ = 0).

    Requires ν > 1/2 so that ρ = sqrt(2ν - 1) is real; for ν <= 1/2 use
    the generic constructor. Momentum rows are fast-time derivatives of
    the coordinate rows at fixed slow time.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    if abs(params.delta) > 1e-12 or abs(params.big_delta) > 1e-12:
        raise ValueError(
            "exact-resonance matrix requires delta = big_delta = 0; "
            "use fundamental_matrix_generic for detuned parameters"
        )
    if params.nu <= 0.5:
        raise ValueError(
            f"exact-resonance closed form needs nu > 1/2 (got {params.nu}); "
            f"use fundamental_matrix_generic"
        )
    eps, mu, rho = params.epsilon, params.mu, params.rho
    tau = 0.5 * eps * t
    ct = math.cos(rho * tau)
    st = math.sin(rho * tau) / rho

    c1p, c1m, s1p, s1m = _kernels(tau, t)
    c3p, c3m, s3p, s3m = _kernels(tau, 3.0 * t)

    M = np.empty((4, 4))
    # x1 row
    M[0, 0] = c1m * ct + s1m * st
    M[0, 1] = -(s1m * ct + c1m * st)
    M[0, 2] = 24.0 * mu * st * s1m
    M[0, 3] = 8.0 * mu * st * c1m
    # p1 row: dC1-/dt = -S1+, dS1-/dt = -C1+
    M[1, 0] = -(s1p * ct + c1p * st)
    M[1, 1] = c1p * ct + s1p * st
    M[1, 2] = -24.0 * mu * st * c1p
    M[1, 3] = -8.0 * mu * st * s1p
    # x3 row
    M[2, 0] = -8.0 * mu * st * s3p
    M[2, 1] = 8.0 * mu * st * c3p
    M[2, 2] = c3p * ct - s3p * st
    M[2, 3] = (s3p * ct - c3p * st) / 3.0
    # p3 row: dC3+/dt = 3S3-, dS3+/dt = 3C3-
    M[3, 0] = -24.0 * mu * st * c3m
    M[3, 1] = 24.0 * mu * st * s3m
    M[3, 2] = 3.0 * (s3m * ct - c3m * st)
    M[3, 3] = c3m * ct - s3m * st
    return FundamentalMatrix(entries=M, t=float(t))


def _check_asymmetric_regime(params: ModelParams) -> None:
    dt = params.delta_t
    gt = params.gamma_t
    if abs(dt - 1.0) > 1e-9:
        raise ValueError(f"asymmetric closed form requires delta/epsilon = 1, got {dt}")
    target = -0.5 * params.nu
    if abs(gt - target) > 1e-9 * max(1.0, abs(target)):
        raise ValueError(
            f"asymmetric closed form requires gamma_t = -nu/2 = {target}, got {gt}"
        )
    if params.nu <= 2.0:
        raise ValueError(
            f"asymmetric closed form assumes nu >> 1 (needs nu > 2), got {params.nu}"
        )


def fundamental_matrix_asymmetric(t: float, params: ModelParams) -> FundamentalMatrix:
    """Closed-form fundamental matrix of the δ̃ = 1, γ̃ = -ν/2 special case.

    Built with the truncated eigenvalues R = 1 - 2/ν, J = ν/2 + 1 and
    amplitude coefficients accurate to O(ν⁻¹); entries deviate from the
    true propagator at O(ν⁻²). Exact identity at t = 0.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    _check_asymmetric_regime(params)
    eps, mu, nu = params.epsilon, params.mu, params.nu
    wb = params.omega_bar
    R, J = asymmetric_rj(nu)
    tau = 0.5 * eps * t
    u = 1.0 - 2.0 / nu
    v = 2.0 / nu

    c1p, c1m, s1p, s1m = _kernels(2.0 * R * tau, wb * t)
    c3p, c3m, s3p, s3m = _kernels(2.0 * R * tau, 3.0 * wb * t)
    ph1 = wb * t - 2.0 * J * tau
    ph3 = 3.0 * wb * t - 2.0 * J * tau
    cf1, sf1 = math.cos(ph1), math.sin(ph1)
    cf3, sf3 = math.cos(ph3), math.sin(ph3)

    M = np.empty((4, 4))
    # x1 row
    M[0, 0] = u * c1m + v * cf1
    M[0, 1] = -(u * s1m - v * sf1)
    M[0, 2] = (c1m - cf1) / (4.0 * mu)
    M[0, 3] = -(s1m + sf1) / (12.0 * mu)
    # p1 row (d/dt at fixed tau, amplitude-level omega_bar -> 1)
    M[1, 0] = -u * s1p - v * sf1
    M[1, 1] = u * c1p + v * cf1
    M[1, 2] = (sf1 - s1p) / (4.0 * mu)
    M[1, 3] = (c1p - cf1) / (12.0 * mu)
    # x3 row
    M[2, 0] = (c3m - cf3) / (12.0 * mu)
    M[2, 1] = -(s3m + sf3) / (12.0 * mu)
    M[2, 2] = u * cf3 + v * c3m
    M[2, 3] = (u * sf3 - v * s3m) / 3.0
    # p3 row (factor 3 from the fast phase of mode 3)
    M[3, 0] = (sf3 - s3p) / (4.0 * mu)
    M[3, 1] = (c3p - cf3) / (4.0 * mu)
    M[3, 2] = -3.0 * (u * sf3 + v * s3p)
    M[3, 3] = u * cf3 + v * c3p
    return FundamentalMatrix(entries=M, t=float(t))


def _expm(A: np.ndarray) -> np.ndarray:
    """exp(A) by eigendecomposition, Pade fallback near degeneracy."""
    w, V = np.linalg.eig(A)
    if np.linalg.cond(V) > _EIGENVECTOR_COND_LIMIT:
        from scipy.linalg import expm

        return expm(A)
    return V @ (np.exp(w)[:, None] * np.linalg.inv(V))


def fundamental_matrix_generic(t: float, params: ModelParams) -> FundamentalMatrix:
    """Fundamental matrix for arbitrary parameters via exp(At).

    Slow amplitudes start from ξ_k^±(0) = (x_k(0) ∓ i p_k(0)/(kω̄))/2,
    evolve under the slow matrix, and are folded back with the fast
    phases e^{±ikω̄t}; momenta use p_k = ikω̄(ξ_k⁺e^{ikω̄t} - ξ_k⁻e^{-ikω̄t}).
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    wb = params.omega_bar
    A = build_matrix(params).entries
    P = _expm(A * t)

    # encode (x1,p1,x3,p3) -> (xi1+, xi1-, xi3+, xi3-)
    E = np.array(
        [
            [0.5, -0.5j / wb, 0.0, 0.0],
            [0.5, 0.5j / wb, 0.0, 0.0],
            [0.0, 0.0, 0.5, -0.5j / (3.0 * wb)],
            [0.0, 0.0, 0.5, 0.5j / (3.0 * wb)],
        ],
        dtype=complex,
    )
    # decode slow amplitudes at time t back to (x, p)
    e1 = cmath.exp(1j * wb * t)
    e3 = cmath.exp(3j * wb * t)
    D = np.array(
        [
            [e1, e1.conjugate(), 0.0, 0.0],
            [1j * wb * e1, -1j * wb * e1.conjugate(), 0.0, 0.0],
            [0.0, 0.0, e3, e3.conjugate()],
            [0.0, 0.0, 3j * wb * e3, -3j * wb * e3.conjugate()],
        ],
        dtype=complex,
    )
    Z = D @ P @ E
    scale = max(1.0, float(np.max(np.abs(Z.real))))
    resid = float(np.max(np.abs(Z.imag)))
    if resid > 1e-9 * scale:
        raise RuntimeError(
            f"reconstruction lost conjugation symmetry (imag residue {resid:g})"
        )
    return FundamentalMatrix(entries=np.ascontiguousarray(Z.real), t=float(t))
