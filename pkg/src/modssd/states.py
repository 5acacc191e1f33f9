"""Squeezed vacuum and approximate GKP states with their analytic
reduced logical qubits.

The analytic formulas here are cross-checked against `gauge_trace_numeric`
of the corresponding wavefunctions in the test suite; in particular the
envelope theta parameter of the squeezed-vacuum state is tau_factor(1/zeta,
alpha) / 2, the value singled out by that oracle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quadrature import integrate_adaptive
from .special import DEFAULT_TRUNCATION, tau_factor, theta_eval
from .theta_logical import (
    _spike_mesh,
    finalize_logical,
    theta_product_logical,
)
from .wavefunctions import ApproxGkp, SqueezedVacuum

# Ideal (delta = kappa = 0) codewords exist only as limits; theta parameters
# are regularized at this floor where a literal zero breaks convergence.
IDEAL_REGULARIZATION = 1e-6


@dataclass(frozen=True)
class ApproxGkpParams:
    """Superposition amplitudes and quality parameters of an approximate
    GKP state: spike std delta, envelope std 1/kappa."""

    c0: complex
    c1: complex
    delta: float
    kappa: float

    def __post_init__(self) -> None:
        if abs(abs(self.c0) ** 2 + abs(self.c1) ** 2 - 1.0) > 1e-12:
            raise DomainError("|c0|^2 + |c1|^2 must equal 1")
        if self.delta < 0 or self.kappa < 0:
            raise DomainError("delta and kappa must be non-negative")


def bloch_angles_to_amplitudes(theta: float, phi: float) -> tuple[complex, complex]:
    """(c0, c1) = (cos(theta/2), sin(theta/2) e^{i phi})."""
    return complex(math.cos(theta / 2.0)), cmath.exp(1j * phi) * math.sin(theta / 2.0)


def squeezed_vacuum_wf(zeta: float) -> SqueezedVacuum:
    """Normalized squeezed vacuum, psi(x) = (zeta^2/pi)^(1/4) e^(-zeta^2 x^2/2)."""
    return SqueezedVacuum(zeta)


def squeezed_vacuum_logical(
    zeta: float,
    alpha: float,
    rel_tol: float = 1e-10,
    with_info: bool = False,
):
    """Reduced logical qubit of a squeezed vacuum state (d = 2).

    rho[l, l'] is proportional to
    exp(-alpha^2 zeta^2 (l-l')^2 / 4) * Integral du
    theta(u/2a + (l+l')/4, tau_factor(1/zeta, alpha)/2); every entry is
    real, confining the state to the xz Bloch plane.
    """
    if zeta <= 0:
        raise DomainError("squeezing factor must be positive")
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    tau_env = tau_factor(1.0 / zeta, alpha) / 2.0
    bps = _spike_mesh(alpha, (tau_env,), (0.0,), ((0.0, 0.25, 0.5),))

    def integrand(u: np.ndarray) -> np.ndarray:
        z0 = u.astype(complex) / (2.0 * alpha)
        return np.stack(
            [theta_eval(z0 + h, tau_env, DEFAULT_TRUNCATION) for h in (0.0, 0.25, 0.5)]
        )

    vals, info = integrate_adaptive(
        integrand, -alpha / 2.0, alpha / 2.0, breakpoints=bps, rel_tol=rel_tol
    )
    damp = math.exp(-0.25 * alpha**2 * zeta**2)
    raw = np.array(
        [[vals[0], damp * vals[1]], [damp * vals[1], vals[2]]], dtype=complex
    )
    rho, _ = finalize_logical(raw)
    rho = rho.real.astype(complex)
    return (rho, info) if with_info else rho


def approx_gkp_wf(params: ApproxGkpParams, alpha: float) -> ApproxGkp:
    """Pointwise-evaluable approximate GKP wavefunction (requires delta > 0)."""
    return ApproxGkp(params.c0, params.c1, params.delta, params.kappa, alpha)


def approx_gkp_logical(
    params: ApproxGkpParams,
    alpha: float,
    rel_tol: float = 1e-10,
    with_info: bool = False,
):
    """Reduced logical qubit of an approximate GKP state (d = 2).

    Evaluates the triple-theta overlap integrals

        rho[l, l'] ~ e^{-kappa^2 a^2 (l-l')^2/4} sum_{jj'} c_j conj(c_j')
                     Int du  theta(u/2a + (l+l')/4, tau_{1/kappa}/2)
                             theta(u/2a + (l-j)/2,  tau_delta)
                             theta(u/2a + (l'-j')/2, tau_delta),

    normalized to unit trace. delta = kappa = 0 is evaluated at the
    regularized floor, reproducing the ideal-codeword limit where the state
    equals the intended qubit.
    """
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    delta = max(params.delta, IDEAL_REGULARIZATION)
    kappa = max(params.kappa, IDEAL_REGULARIZATION)
    tau_env = tau_factor(1.0 / kappa, alpha) / 2.0
    tau_spike = tau_factor(delta, alpha)
    raw, info = theta_product_logical(
        params.c0,
        params.c1,
        alpha,
        damping_k=kappa,
        taus=(tau_env, tau_spike, tau_spike),
        rel_tol=rel_tol,
    )
    rho, _ = finalize_logical(raw)
    return (rho, info) if with_info else rho
