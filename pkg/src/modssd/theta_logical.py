"""Reduced logical states from theta-function integrals.

Every closed-form qubit state in this package is (up to normalization) of
the form

    rho[l, l'] = exp(-K^2 a^2 (l - l')^2 / 4) * sum_{j, j'} c_j conj(c_j')
                 * Integral_{-a/2}^{a/2} du
                   Theta(z(u; l, l', j, j') - shifts / (2 a), T),

with argument vector

    z = (u/2a + (l + l')/4,  u/2a + (l - j)/2,  u/2a + (l' - j')/2).

The first axis carries the envelope overlap, the other two the ket- and
bra-side spike combs. For diagonal T the Siegel function factors into three
Jacobi thetas, which are evaluated by series or Gaussian-comb form as
appropriate and integrated on a spike-aware panel mesh; general T goes
through a truncated lattice sum shared across the integrand evaluations.

The shift convention is fixed by requiring the result to equal the gauge
trace of psi(x) psi*(x'): the bra-side (third) component of any complex
shift vector enters conjugated, and the coefficient pairing is
c_j conj(c_j'). Quadrature oracles in the test suite pin this down.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import FormulaInconsistencyError
from .quadrature import QuadInfo, integrate_adaptive, spike_breakpoints
from .special import (
    DEFAULT_TRUNCATION,
    ThetaTruncation,
    _COMB_IM_TAU,
    siegel_lattice,
    theta_eval,
    theta_spike_sigma,
    validate_tau_matrix,
)

_ENV_OFFSETS = (0.0, 0.25, 0.5)
_SPIKE_OFFSETS = (0.0, 0.5)


def _spike_mesh(
    alpha: float, taus, shifts, offset_sets
) -> list[float]:
    """Panel breakpoints around comb spikes of the theta factors."""
    a, b = -alpha / 2.0, alpha / 2.0
    pts: list[float] = []
    for tau, shift, offsets in zip(taus, shifts, offset_sets):
        tau = complex(tau)
        if tau.imag >= _COMB_IM_TAU:
            continue
        sigma_u = 2.0 * alpha * theta_spike_sigma(tau)
        if sigma_u > (b - a) / 16.0:
            continue
        for h in offsets:
            base = complex(shift).real - 2.0 * alpha * h
            n_lo = math.floor((a - 12.0 * sigma_u - base) / (2.0 * alpha))
            n_hi = math.ceil((b + 12.0 * sigma_u - base) / (2.0 * alpha))
            centers = [base + 2.0 * alpha * n for n in range(n_lo, n_hi + 1)]
            pts.extend(spike_breakpoints(centers, sigma_u, a, b))
    return pts


def _damping_matrix(k: float, alpha: float) -> np.ndarray:
    off = math.exp(-0.25 * k**2 * alpha**2)
    return np.array([[1.0, off], [off, 1.0]])


def theta_product_logical(
    c0: complex,
    c1: complex,
    alpha: float,
    damping_k: float,
    taus,
    shifts=(0.0, 0.0, 0.0),
    extra_off_phase: complex = 1.0,
    rel_tol: float = 1e-10,
    trunc: ThetaTruncation = DEFAULT_TRUNCATION,
) -> tuple[np.ndarray, QuadInfo]:
    """Unnormalized logical state for diagonal T = diag(taus).

    ``shifts`` are the complex displacements of (envelope, ket, bra)
    arguments; ``extra_off_phase`` multiplies the (0,1) entry (and conjugate
    the (1,0) entry) for formulas carrying an outcome-dependent phase.
    """
    tau1, tau2, tau3 = (complex(t) for t in taus)
    sh1, sh2, sh3 = (complex(s) for s in shifts)
    coeff = (complex(c0), complex(c1))
    bps = _spike_mesh(
        alpha, (tau1, tau2, tau3), (sh1, sh2, sh3),
        (_ENV_OFFSETS, _SPIKE_OFFSETS, _SPIKE_OFFSETS),
    )

    def integrand(u: np.ndarray) -> np.ndarray:
        z0 = u.astype(complex) / (2.0 * alpha)
        env = {
            h: theta_eval(z0 + h - sh1 / (2.0 * alpha), tau1, trunc)
            for h in _ENV_OFFSETS
        }
        ket = {
            h: theta_eval(z0 + h - sh2 / (2.0 * alpha), tau2, trunc)
            for h in _SPIKE_OFFSETS
        }
        bra = {
            h: theta_eval(z0 + h - sh3 / (2.0 * alpha), tau3, trunc)
            for h in _SPIKE_OFFSETS
        }
        out = np.zeros((2, 2, u.size), dtype=complex)
        for l in (0, 1):
            for lp in (0, 1):
                acc = np.zeros(u.size, dtype=complex)
                for j in (0, 1):
                    if coeff[j] == 0:
                        continue
                    kf = ket[0.0 if l == j else 0.5]
                    for jp in (0, 1):
                        if coeff[jp] == 0:
                            continue
                        bf = bra[0.0 if lp == jp else 0.5]
                        acc += coeff[j] * coeff[jp].conjugate() * kf * bf
                out[l, lp] = env[(l + lp) / 4.0] * acc
        return out

    integral, info = integrate_adaptive(
        integrand, -alpha / 2.0, alpha / 2.0, breakpoints=bps, rel_tol=rel_tol
    )
    raw = integral * _damping_matrix(damping_k, alpha)
    phase = complex(extra_off_phase)
    raw[0, 1] *= phase
    raw[1, 0] *= phase.conjugate()
    return raw, info


class SiegelEvaluator:
    """Truncated-lattice Siegel theta evaluator reused across a u-quadrature."""

    def __init__(self, tau: np.ndarray, im_z: np.ndarray,
                 trunc: ThetaTruncation = DEFAULT_TRUNCATION):
        self.tau = validate_tau_matrix(tau)
        self.points = siegel_lattice(self.tau, np.abs(np.asarray(im_z, float)), trunc)
        self.quad_phase = np.exp(
            1j * math.pi * np.einsum("pi,ij,pj->p", self.points, self.tau, self.points)
        )

    def theta(self, z_batch: np.ndarray, chunk: int = 2048) -> np.ndarray:
        z_batch = np.asarray(z_batch, dtype=complex)
        out = np.empty(z_batch.shape[0], dtype=complex)
        for start in range(0, z_batch.shape[0], chunk):
            zc = z_batch[start : start + chunk]
            out[start : start + chunk] = self.quad_phase @ np.exp(
                2j * math.pi * (self.points @ zc.T)
            )
        return out


def siegel_logical(
    c0: complex,
    c1: complex,
    alpha: float,
    damping_k: float,
    tau: np.ndarray,
    shifts=(0.0, 0.0, 0.0),
    rel_tol: float = 1e-9,
    trunc: ThetaTruncation = DEFAULT_TRUNCATION,
) -> tuple[np.ndarray, QuadInfo]:
    """Unnormalized logical state for a general Siegel matrix T."""
    sh = np.asarray(shifts, dtype=complex) / (2.0 * alpha)
    coeff = (complex(c0), complex(c1))
    evaluator = SiegelEvaluator(tau, -sh.imag, trunc)

    def integrand(u: np.ndarray) -> np.ndarray:
        zu = u / (2.0 * alpha)
        out = np.zeros((2, 2, u.size), dtype=complex)
        for l in (0, 1):
            for lp in (0, 1):
                acc = np.zeros(u.size, dtype=complex)
                for j in (0, 1):
                    if coeff[j] == 0:
                        continue
                    for jp in (0, 1):
                        if coeff[jp] == 0:
                            continue
                        z = np.empty((u.size, 3), dtype=complex)
                        z[:, 0] = zu + (l + lp) / 4.0 - sh[0]
                        z[:, 1] = zu + (l - j) / 2.0 - sh[1]
                        z[:, 2] = zu + (lp - jp) / 2.0 - sh[2]
                        acc += coeff[j] * coeff[jp].conjugate() * evaluator.theta(z)
                out[l, lp] = acc
        return out

    integral, info = integrate_adaptive(
        integrand, -alpha / 2.0, alpha / 2.0, rel_tol=rel_tol, max_doublings=6
    )
    return integral * _damping_matrix(damping_k, alpha), info


def finalize_logical(
    raw: np.ndarray, asym_error: float = 1e-6
) -> tuple[np.ndarray, float]:
    """Hermitize (after checking asymmetry) and normalize to unit trace.

    Returns the state and the relative asymmetry that was averaged away. A
    violation above ``asym_error`` means the closed form itself is wrong for
    the supplied parameters and raises FormulaInconsistencyError.
    """
    scale = max(float(np.max(np.abs(raw))), 1e-300)
    asym = float(np.max(np.abs(raw - raw.conj().T))) / scale
    if asym > asym_error:
        raise FormulaInconsistencyError(
            f"reduced-state formula produced relative Hermiticity violation {asym:g}"
        )
    rho = 0.5 * (raw + raw.conj().T)
    trace = float(np.real(np.trace(rho)))
    if trace <= 0:
        raise FormulaInconsistencyError("reduced-state formula produced trace <= 0")
    return rho / trace, asym
