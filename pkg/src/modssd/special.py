"""Gaussians, Jacobi and Siegel theta functions, and squeezing-unit helpers.

The Jacobi theta function used throughout is the third-kind sum

    theta(z, tau) = sum_m exp(i pi m^2 tau + 2 pi i m z),      Im tau > 0,

and its multivariate (Siegel) generalization over an integer lattice

    Theta(z, T) = sum_m exp(2 pi i (m.T m / 2 + m.z)),

with T complex symmetric and Im T positive definite. Sums are truncated to
a box whose half-width guarantees the dropped tail is below ``rel_tol``
relative to the largest retained term; there is no modular transformation,
so callers must keep Im tau above ``min_im_tau``. Gaussian pulse trains
(`gaussian_comb`) provide the numerically robust route to theta values in
the narrow-spike regime where the direct sum is impractical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, ConvergenceError, DomainError

SQRT_PI = math.sqrt(math.pi)

_MAX_EXPONENT = 700.0  # beyond this exp() overflows in float64


@dataclass(frozen=True)
class ThetaTruncation:
    """Series truncation policy shared by the theta evaluators."""

    rel_tol: float = 1e-15
    max_terms_per_axis: int = 4096
    min_im_tau: float = 1e-6

    def __post_init__(self) -> None:
        if self.rel_tol <= 0:
            raise DomainError("rel_tol must be positive")
        if self.max_terms_per_axis < 8:
            raise DomainError("max_terms_per_axis must be at least 8")


DEFAULT_TRUNCATION = ThetaTruncation()


def gaussian(x, sigma2: float):
    """Normalized Gaussian of variance sigma2 evaluated at x (real or complex).

    G(x) = (2 pi sigma2)^(-1/2) exp(-x^2 / (2 sigma2))
    """
    if sigma2 <= 0:
        raise DomainError(f"variance must be positive, got {sigma2}")
    x = np.asarray(x)
    return np.exp(-(x**2) / (2.0 * sigma2)) / math.sqrt(2.0 * math.pi * sigma2)


def tau_factor(sigma: float, alpha: float) -> complex:
    """Theta parameter i pi sigma^2 / (2 alpha^2) of a Gaussian pulse train.

    A train of Gaussians of standard deviation sigma with period 2 alpha
    equals theta(x / 2 alpha, tau_factor(sigma, alpha)) / (2 alpha).
    """
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if sigma < 0:
        raise DomainError(f"sigma must be non-negative, got {sigma}")
    return 1j * math.pi * sigma**2 / (2.0 * alpha**2)


def zeta_to_db(zeta: float) -> float:
    """Squeezing factor to decibels: -10 log10(zeta^2)."""
    if zeta <= 0:
        raise DomainError(f"squeezing factor must be positive, got {zeta}")
    return -10.0 * math.log10(zeta**2)


def db_to_zeta(db: float) -> float:
    """Inverse of `zeta_to_db`."""
    return 10.0 ** (-db / 20.0)


def _theta_half_width(im_tau: float, im_z_max: float, trunc: ThetaTruncation) -> int:
    half = math.ceil(
        math.sqrt(math.log(1.0 / trunc.rel_tol) / (math.pi * im_tau))
        + im_z_max / im_tau
    ) + 2
    if half > trunc.max_terms_per_axis:
        raise BudgetError(
            f"theta truncation needs half-width {half} terms, "
            f"budget is {trunc.max_terms_per_axis}"
        )
    return half


def jacobi_theta(z, tau: complex, trunc: ThetaTruncation = DEFAULT_TRUNCATION):
    """Jacobi theta of the third kind, sum_m exp(i pi m^2 tau + 2 pi i m z).

    Accepts scalar or array z (complex allowed). Raises ConvergenceError for
    Im tau below the truncation policy's floor and BudgetError when the
    required half-width exceeds the per-axis budget.
    """
    tau = complex(tau)
    if tau.imag < trunc.min_im_tau:
        raise ConvergenceError(
            f"Im tau = {tau.imag:g} below convergence floor {trunc.min_im_tau:g}"
        )
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    im_z_max = float(np.max(np.abs(z_arr.imag)))
    if math.pi * im_z_max**2 / tau.imag > _MAX_EXPONENT:
        raise BudgetError("imaginary offset of z too large for direct summation")
    half = _theta_half_width(tau.imag, im_z_max, trunc)
    m = np.arange(-half, half + 1)
    exponent = 1j * math.pi * np.multiply.outer(np.ones_like(z_arr), m**2) * tau
    exponent += 2j * math.pi * np.multiply.outer(z_arr, m)
    out = np.exp(exponent).sum(axis=-1)
    if np.ndim(z) == 0:
        return complex(out[0])
    return out.reshape(np.shape(z))


def gaussian_comb(x, period: float, sigma: float, rel_tol: float = 1e-15):
    """Sum of unit-area Gaussians of std sigma centered at integer multiples
    of ``period``, evaluated at x (complex allowed).

    Identical to theta(x/period, 2 pi i sigma^2 / period^2) / period but
    converges in O(sigma/period) terms around the nearest comb point, so it
    is the evaluation of choice for narrow spikes.
    """
    if period <= 0:
        raise DomainError("period must be positive")
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    arr = np.atleast_1d(np.asarray(x))
    is_complex = np.iscomplexobj(arr) and float(np.max(np.abs(arr.imag))) > 0.0
    if is_complex:
        im_max = float(np.max(np.abs(arr.imag)))
        if im_max**2 / (2.0 * sigma**2) > _MAX_EXPONENT:
            raise BudgetError("imaginary offset too large for Gaussian comb")
        arr = arr.astype(complex)
    else:
        arr = arr.real.astype(float)
    reach = sigma * math.sqrt(2.0 * math.log(1.0 / rel_tol))
    k = int(math.ceil(reach / period + 0.5))
    n0 = np.round(arr.real / period)
    offsets = np.arange(-k, k + 1)
    centers = period * (n0[..., None] + offsets)
    diffs = arr[..., None] - centers
    out = (
        np.exp(-(diffs**2) / (2.0 * sigma**2)).sum(axis=-1)
        / math.sqrt(2.0 * math.pi * sigma**2)
    )
    out = out.astype(complex)
    if np.ndim(x) == 0:
        return complex(out[0])
    return out.reshape(np.shape(x))


# Crossover between the direct theta series and the Gaussian-comb form.
_COMB_IM_TAU = 0.05


def theta_eval(z, tau: complex, trunc: ThetaTruncation = DEFAULT_TRUNCATION):
    """Evaluate the Jacobi theta sum by series or, for purely imaginary tau
    with small imaginary part, by the equivalent Gaussian pulse train."""
    tau = complex(tau)
    if tau.imag >= _COMB_IM_TAU or abs(tau.real) > 1e-12:
        return jacobi_theta(z, tau, trunc)
    if tau.imag <= 0:
        raise ConvergenceError("Im tau must be positive")
    sigma = math.sqrt(tau.imag / (2.0 * math.pi))
    return gaussian_comb(z, 1.0, sigma, trunc.rel_tol)


def theta_spike_sigma(tau: complex) -> float:
    """Std (in z units) of the Gaussian spikes of theta(z, tau) for small Im tau."""
    return math.sqrt(complex(tau).imag / (2.0 * math.pi))


def validate_tau_matrix(tau: np.ndarray, sym_tol: float = 1e-12) -> np.ndarray:
    """Check that tau is complex symmetric with positive-definite imaginary part."""
    tau = np.asarray(tau, dtype=complex)
    if tau.ndim != 2 or tau.shape[0] != tau.shape[1]:
        raise DomainError("tau must be a square matrix")
    scale = max(float(np.max(np.abs(tau))), 1.0)
    if float(np.max(np.abs(tau - tau.T))) > sym_tol * scale:
        raise DomainError("tau must be symmetric")
    im_eigs = np.linalg.eigvalsh(tau.imag)
    if np.min(im_eigs) <= 0:
        raise DomainError(
            f"Im(tau) must be positive definite (min eigenvalue {np.min(im_eigs):g})"
        )
    return tau


def siegel_lattice(
    tau: np.ndarray,
    im_z: np.ndarray,
    trunc: ThetaTruncation = DEFAULT_TRUNCATION,
) -> np.ndarray:
    """Integer lattice points for a truncated Siegel theta sum.

    The box half-width per axis comes from the smallest eigenvalue of
    Im(tau) together with |Im z|, as in the univariate case; points whose
    Gaussian weight cannot reach ``rel_tol`` relative to the peak are then
    masked out, which keeps strongly correlated tau matrices affordable.
    """
    tau = validate_tau_matrix(tau)
    n = tau.shape[0]
    im = tau.imag
    lam_min = float(np.min(np.linalg.eigvalsh(im)))
    if lam_min < trunc.min_im_tau:
        raise ConvergenceError(
            f"smallest eigenvalue of Im(tau) = {lam_min:g} below "
            f"convergence floor {trunc.min_im_tau:g}"
        )
    im_z = np.asarray(im_z, dtype=float)
    axes = []
    for i in range(n):
        half = _theta_half_width(lam_min, float(np.abs(im_z[i])), trunc)
        axes.append(np.arange(-half, half + 1))
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=-1).astype(float)
    # magnitude exponent: -pi m.Im(tau).m - 2 pi m.Im(z)
    quad = np.einsum("pi,ij,pj->p", points, im, points)
    lin = points @ im_z
    log_mag = -math.pi * quad - 2.0 * math.pi * lin
    keep = log_mag >= (log_mag.max() + math.log(trunc.rel_tol) - 8.0)
    return points[keep]


def siegel_theta(
    z: np.ndarray,
    tau: np.ndarray,
    trunc: ThetaTruncation = DEFAULT_TRUNCATION,
) -> complex:
    """Multivariate Siegel theta function Theta(z, tau) for an N-vector z."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    tau = validate_tau_matrix(tau)
    if tau.shape[0] != z.size:
        raise DomainError("z length must match tau dimension")
    points = siegel_lattice(tau, z.imag, trunc)
    exponent = 2j * math.pi * (
        0.5 * np.einsum("pi,ij,pj->p", points, tau, points) + points @ z
    )
    return complex(np.exp(exponent).sum())


def siegel_theta_batch(
    z_batch: np.ndarray,
    tau: np.ndarray,
    trunc: ThetaTruncation = DEFAULT_TRUNCATION,
    chunk: int = 512,
) -> np.ndarray:
    """Siegel theta for a batch of argument vectors sharing one tau.

    ``z_batch`` has shape (B, N); the lattice and the quadratic phase are
    computed once and reused across the batch.
    """
    z_batch = np.asarray(z_batch, dtype=complex)
    if z_batch.ndim != 2:
        raise DomainError("z_batch must have shape (B, N)")
    tau = validate_tau_matrix(tau)
    im_z_max = np.max(np.abs(z_batch.imag), axis=0)
    points = siegel_lattice(tau, im_z_max, trunc)
    quad_phase = np.exp(
        1j * math.pi * np.einsum("pi,ij,pj->p", points, tau, points)
    )
    out = np.empty(z_batch.shape[0], dtype=complex)
    for start in range(0, z_batch.shape[0], chunk):
        zc = z_batch[start : start + chunk]
        lin = np.exp(2j * math.pi * (points @ zc.T))
        out[start : start + chunk] = quad_phase @ lin
    return out
