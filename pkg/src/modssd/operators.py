"""Subsystem decomposition of position shifts, momentum shifts, and the
Gaussian envelope operator.

Position shifts act on labels like addition with carries between the
(logical, gauge-bin, modular-position) registers; momentum shifts are
diagonal in position and factor into a logical rotation times gauge
phases. The envelope exp(-zeta^2 q^2 / 2) factors exactly into logical,
gauge, and interaction pieces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AliasingError, BudgetError, DegenerateStateError, DomainError
from .modular import SsdLabels, SsdParams, decompose_real, split_integer
from .wavefunctions import GridWavefunction, sample_to_grid


@dataclass(frozen=True)
class ShiftDecomposition:
    """Split of a shift t = alpha (d n + k) + v into register increments."""

    n: int
    k: int
    v: float


def split_shift(t: float, params: SsdParams) -> ShiftDecomposition:
    """Decompose a position shift into logical, gauge-bin, and sub-bin parts."""
    m, v = decompose_real(t, params.alpha)
    k, n = split_integer(m, params.d)
    return ShiftDecomposition(n, k, v)


def gauge_shift_mu(t: float, m: int, u: float, alpha: float) -> tuple[int, float]:
    """Gauge-mode displacement on a partitioned-position label:
    (m, u) -> (m + carry, remainder) for u + t."""
    carry, u_new = decompose_real(u + t, alpha)
    return m + carry, u_new


def apply_x_shift_labels(
    t: float, labels: SsdLabels, params: SsdParams
) -> SsdLabels:
    """Exact action of the position shift X(t) on a subsystem basis label.

    Equals ssd_labels(recompose(labels) + t): the sub-bin parts add with a
    carry into the logical register, which itself carries into the gauge
    bin when it wraps past d.
    """
    labels.validate(params)
    shift = split_shift(t, params)
    carry, u_new = decompose_real(labels.u_g + shift.v, params.alpha)
    ell_total = labels.ell + shift.k + carry
    ell_new, gauge_carry = split_integer(ell_total, params.d)
    return SsdLabels(ell_new, shift.n + labels.m_g + gauge_carry, u_new)


def z_shift_logical_part(t: float, alpha: float) -> tuple[float, np.ndarray]:
    """Logical factor of the momentum shift Z(t) for d = 2.

    Returns (theta, diag(1, e^{i theta})) with theta = alpha * t; up to a
    global phase this is a Bloch rotation by theta about the z axis.
    """
    theta = alpha * t
    return theta, np.diag([1.0, np.exp(1j * theta)]).astype(complex)


def apply_z_shift_wf(t: float, psi, step: float | None = None) -> GridWavefunction:
    """Momentum shift Z(t) = e^{i t q} as pointwise phase multiplication.

    Grid inputs are phased in place (their step must satisfy |t| step <=
    pi/4 or an AliasingError is raised); analytic families are sampled at a
    step fine enough for both the state and the requested phase.
    """
    if isinstance(psi, GridWavefunction):
        grid = psi
        if abs(t) * grid.step > math.pi / 4.0:
            raise AliasingError(
                f"grid step {grid.step:g} too coarse for phase rate |t| = {abs(t):g}"
            )
    else:
        grid = _default_grid(psi, t if step is None else 0.0, step)
    xs = grid.x_values()
    return GridWavefunction(grid.x_min, grid.step, grid.samples * np.exp(1j * t * xs))


def _default_grid(psi, phase_rate: float = 0.0, step: float | None = None):
    half = psi.support_half_width()
    if step is None:
        step = psi.feature_scale() / 16.0
        if phase_rate != 0.0:
            step = min(step, math.pi / (8.0 * abs(phase_rate)))
    n = int(2.0 * half / step) + 1
    if n > 2**21:
        raise BudgetError(f"sampling would need {n} grid points")
    return sample_to_grid(psi, -half, half, step)


@dataclass(frozen=True)
class EnvelopeParts:
    """Logical, gauge, and interaction factors of exp(-zeta^2 q^2 / 2), d = 2.

    eps_l = diag(1, eta) with eta = exp(-zeta^2 alpha^2 / 2); the gauge and
    interaction factors are diagonal in the (m, u) basis with weights
    eps_g(m, u) and eta_g(m, u)^ell.
    """

    eta: float
    eps_l: np.ndarray
    eps_g: Callable[[np.ndarray, np.ndarray], np.ndarray]
    eta_g: Callable[[np.ndarray, np.ndarray], np.ndarray]


def envelope_parts(zeta: float, params: SsdParams) -> EnvelopeParts:
    """Subsystem factorization of the envelope operator for d = 2.

    The product eps_l[ell, ell] * eps_g(m, u) * eta_g(m, u)^ell equals
    exp(-zeta^2 x^2 / 2) at x = alpha*ell + 2*alpha*m + u exactly.
    """
    if zeta <= 0:
        raise DomainError("squeezing factor must be positive")
    if params.d != 2:
        raise DomainError("envelope factorization is defined for d = 2")
    alpha = params.alpha
    eta = math.exp(-0.5 * zeta**2 * alpha**2)

    def eps_g(m, u):
        y = 2.0 * alpha * np.asarray(m, dtype=float) + np.asarray(u, dtype=float)
        return np.exp(-0.5 * zeta**2 * y**2)

    def eta_g(m, u):
        y = 2.0 * alpha * np.asarray(m, dtype=float) + np.asarray(u, dtype=float)
        return np.exp(-(zeta**2) * alpha * y)

    return EnvelopeParts(eta, np.diag([1.0, eta]), eps_g, eta_g)


def apply_envelope_wf(zeta: float, psi, step: float | None = None) -> GridWavefunction:
    """Apply exp(-zeta^2 x^2 / 2) pointwise and renormalize."""
    if zeta < 0:
        raise DomainError("squeezing factor must be non-negative")
    grid = psi if isinstance(psi, GridWavefunction) else _default_grid(psi, 0.0, step)
    xs = grid.x_values()
    damped = grid.samples * np.exp(-0.5 * zeta**2 * xs**2)
    out = GridWavefunction(grid.x_min, grid.step, damped)
    if out.norm_squared() < 1e-300:
        raise DegenerateStateError("envelope drove the state norm to zero")
    return out.normalized()
