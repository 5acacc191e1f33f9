"""Noisy CV cluster-state teleportation and teleported GKP logical states.

The teleportation channel with cluster squeezing factor zeta and momentum
homodyne outcomes (s, t) acts on a position wavefunction as the Kraus map

    psi_tel(x) = C * G_env(x - t) * Integral dy e^{i s y} G_zeta(y) psi(y - x),

with G_env of std 1/zeta, G_zeta of std zeta, and C = sqrt(2) fixed by
completeness of the outcome family (the joint outcome density
Pr(s, t) = |psi_tel|^2 then integrates to one).

All reduced logical states are instances of one parameterized form
rho_{K, T}(w) (see `general_logical_state`); the closed-form instances are
validated against gauge traces of numerically teleported wavefunctions.
Conventions follow the psi(x) psi*(x') pairing: coefficients enter as
c_j conj(c_j') and bra-side complex shifts enter conjugated.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, BudgetError, DomainError
from .modular import GaugeTraceGrid, SsdParams, gauge_trace_numeric
from .quadrature import QuadInfo, integrate_adaptive, panel_nodes_weights
from .special import (
    DEFAULT_TRUNCATION,
    ThetaTruncation,
    gaussian,
    tau_factor,
    theta_eval,
    validate_tau_matrix,
)
from .states import IDEAL_REGULARIZATION, ApproxGkpParams, approx_gkp_wf
from .theta_logical import (
    SiegelEvaluator,
    _damping_matrix,
    _spike_mesh,
    finalize_logical,
    siegel_logical,
    theta_product_logical,
)
from .wavefunctions import GridWavefunction, TeleportedGkp

HIGH_SQUEEZING_LIMIT = 0.4  # roughly 8 dB; beyond this the hq formula degrades


@dataclass(frozen=True)
class TeleportOutcome:
    """Homodyne outcome pair (s, t) and cluster squeezing factor zeta."""

    s: float
    t: float
    zeta: float

    def __post_init__(self) -> None:
        if self.zeta <= 0:
            raise DomainError("cluster squeezing factor must be positive")


def kraus_normalization(zeta: float) -> float:
    """Prefactor making the teleportation outcome density integrate to 1.

    The operator normalization of the Kraus family is 2 sqrt(pi) / zeta;
    reducing the operator to the position-space convolution form absorbs a
    further zeta / sqrt(2 pi), leaving a constant sqrt(2) on the integral
    expression evaluated here.
    """
    return math.sqrt(2.0)


def teleport_wf(
    psi,
    out: TeleportOutcome,
    x_step: float | None = None,
    x_min: float | None = None,
    x_max: float | None = None,
    rel_tol: float = 1e-8,
    max_doublings: int = 5,
    with_info: bool = False,
):
    """Teleported (unnormalized) wavefunction on a grid, plus Pr(s, t).

    The y integral is evaluated by composite Gauss-Legendre panels sized to
    resolve the input's features, doubling until the output grid is stable;
    AccuracyError is raised if it never is. Explicit x bounds restrict the
    output window (useful for narrow comparisons); Pr(s, t) then covers
    only that window.
    """
    zeta, s, t = out.zeta, out.s, out.t
    feature = psi.feature_scale()
    support = psi.support_half_width()
    y_half = 10.0 * zeta
    x_lo = max(t - 10.0 / zeta, -(support + y_half)) if x_min is None else x_min
    x_hi = min(t + 10.0 / zeta, support + y_half) if x_max is None else x_max
    if x_hi <= x_lo:
        raise DomainError("empty output window")
    if x_step is None:
        x_step = math.sqrt(feature**2 + zeta**2) / 12.0
    n_x = int((x_hi - x_lo) / x_step) + 1
    if n_x > 2**20:
        raise BudgetError(f"output grid would need {n_x} points")
    xs = x_lo + x_step * np.arange(n_x)

    h = min(2.0 * feature, zeta) / 1.5
    if s != 0.0:
        h = min(h, math.pi / (2.0 * abs(s)))
    segments = int(math.ceil(2.0 * y_half / h))
    edges = np.linspace(-y_half, y_half, segments + 1)

    prev = None
    residual = math.inf
    conv = None
    for doubling in range(max_doublings + 1):
        y, wy = panel_nodes_weights(edges, 2**doubling, 16)
        if y.size * 32 > 2**25:
            raise BudgetError("y quadrature grew past the node budget")
        wvec = wy * np.exp(1j * s * y) * gaussian(y, zeta**2)
        conv = np.empty(n_x, dtype=complex)
        chunk = max(1, 2**22 // y.size)
        for start in range(0, n_x, chunk):
            xc = xs[start : start + chunk]
            vals = np.asarray(
                psi.evaluate((y[None, :] - xc[:, None]).ravel()), dtype=complex
            ).reshape(xc.size, y.size)
            conv[start : start + chunk] = vals @ wvec
        if prev is not None:
            scale = max(float(np.max(np.abs(conv))), 1e-300)
            residual = float(np.max(np.abs(conv - prev))) / scale
            if residual < rel_tol:
                break
        prev = conv
    else:
        raise AccuracyError(
            f"teleportation quadrature did not stabilize (residual {residual:g})"
        )

    amplitude = (
        kraus_normalization(zeta) * gaussian(xs - t, 1.0 / zeta**2) * conv
    )
    grid = GridWavefunction(x_lo, x_step, amplitude)
    prob = grid.norm_squared()
    if with_info:
        return grid, prob, QuadInfo(doubling, residual, True)
    return grid, prob


def teleported_ideal_gkp_wf(
    c0: complex, c1: complex, out: TeleportOutcome, alpha: float
) -> TeleportedGkp:
    """Closed-form (unnormalized) wavefunction of a teleported ideal codeword."""
    return TeleportedGkp(out.zeta, out.s, out.t, c0, c1, 0.0, 0.0, alpha)


@dataclass(frozen=True)
class GeneralLogicalParams:
    """Parameters (K, T, w, c0, c1, alpha) of the universal reduced state."""

    k: float
    tau: np.ndarray
    w: np.ndarray
    c0: complex
    c1: complex
    alpha: float

    def __post_init__(self) -> None:
        if self.k < 0:
            raise DomainError("damping parameter K must be non-negative")
        if self.alpha <= 0:
            raise DomainError("alpha must be positive")
        if abs(abs(self.c0) ** 2 + abs(self.c1) ** 2 - 1.0) > 1e-12:
            raise DomainError("|c0|^2 + |c1|^2 must equal 1")
        tau = validate_tau_matrix(np.asarray(self.tau, dtype=complex))
        if tau.shape != (3, 3):
            raise DomainError("tau must be 3x3")
        object.__setattr__(self, "tau", tau)
        w = np.asarray(self.w, dtype=complex).reshape(-1)
        if w.size != 3:
            raise DomainError("w must be a 3-vector")
        object.__setattr__(self, "w", w)


def _is_diagonal(tau: np.ndarray) -> bool:
    off = tau - np.diag(np.diag(tau))
    return float(np.max(np.abs(off))) <= 1e-14 * max(float(np.max(np.abs(tau))), 1e-30)


def general_logical_state(
    p: GeneralLogicalParams,
    rel_tol: float = 1e-10,
    trunc: ThetaTruncation = DEFAULT_TRUNCATION,
    with_info: bool = False,
):
    """Reduced logical state rho_{K, T}(w), normalized to unit trace.

    rho[l, l'] is proportional to

        e^{-K^2 a^2 (l-l')^2 / 4} * Int du sum_{jj'} c_j conj(c_j')
        Theta((u/2a + (l+l')/4, u/2a + (l-j)/2, u/2a + (l'-j')/2)
              - (w1, w2, conj(w3)) / 2a, T).

    Diagonal T factors into Jacobi thetas and is integrated on a
    spike-aware mesh; general T goes through the truncated lattice sum.
    """
    shifts = (p.w[0], p.w[1], np.conj(p.w[2]))
    if _is_diagonal(p.tau):
        raw, info = theta_product_logical(
            p.c0, p.c1, p.alpha, p.k,
            taus=tuple(np.diag(p.tau)), shifts=shifts,
            rel_tol=rel_tol, trunc=trunc,
        )
    else:
        raw, info = siegel_logical(
            p.c0, p.c1, p.alpha, p.k, p.tau, shifts=shifts,
            rel_tol=max(rel_tol, 1e-9), trunc=trunc,
        )
    rho, _ = finalize_logical(raw)
    return (rho, info) if with_info else rho


def teleported_ideal_gkp_logical(
    c0: complex,
    c1: complex,
    out: TeleportOutcome,
    alpha: float,
    rel_tol: float = 1e-10,
    with_info: bool = False,
):
    """Logical state of an ideal GKP codeword damaged by noisy teleportation.

    Instance of the general form with K = zeta,
    T = diag(tau_{1/zeta}/2, tau_zeta, tau_zeta), w = (t, i s zeta^2,
    i s zeta^2); at s = t = 0 it coincides with the approximate-GKP state
    of quality delta = kappa = zeta.
    """
    zeta = out.zeta
    shift = 1j * out.s * zeta**2
    p = GeneralLogicalParams(
        k=zeta,
        tau=np.diag(
            [tau_factor(1.0 / zeta, alpha) / 2.0,
             tau_factor(zeta, alpha),
             tau_factor(zeta, alpha)]
        ),
        w=np.array([out.t, shift, shift]),
        c0=c0,
        c1=c1,
        alpha=alpha,
    )
    return general_logical_state(p, rel_tol=rel_tol, with_info=with_info)


@dataclass(frozen=True)
class AppendixAux:
    """Auxiliary parameters of the exact teleported-approximate-GKP state."""

    k1_sq: float
    k2_sq: float

    @classmethod
    def from_params(cls, zeta: float, kappa: float) -> "AppendixAux":
        return cls(
            k1_sq=zeta**2 + kappa**2 + zeta**4 * kappa**2,
            k2_sq=1.0 + zeta**2 * kappa**2,
        )


def teleported_approx_gkp_logical_full(
    delta: float,
    kappa: float,
    zeta: float,
    s: float,
    t: float,
    c0: complex,
    c1: complex,
    alpha: float,
    rel_tol: float = 1e-9,
    trunc: ThetaTruncation = DEFAULT_TRUNCATION,
    with_info: bool = False,
):
    """Exact logical state of an approximate GKP state after noisy
    teleportation (no high-squeezing approximation).

    Evaluates the 3x3 Siegel-theta expression with auxiliary parameters
    K1^2 = zeta^2 + kappa^2 + zeta^4 kappa^2 and K2^2 = 1 + zeta^2 kappa^2,
    damping prefactor

        exp(-a^2 (kappa^2 + zeta^2 K2^2) (l'-l)^2 / (4 K2^2)
            - i s a kappa^2 zeta^2 (l'-l) / K2^2),

    and argument vector (per j', j)

        z1 = u/2a + (l'+l)/4 - t K2^2 zeta^2 / (2 a K1^2)
        z2 = t zeta^2/(2 a K1^2) + i s zeta^2/(2 a K2^2) + (l'-l)/(4 K2^2) - j'/2
        z3 = t zeta^2/(2 a K1^2) - i s zeta^2/(2 a K2^2) - (l'-l)/(4 K2^2) - j/2.

    The imaginary parts carry the opposite sign to the source expression
    because that expression describes the conjugate pairing; the
    orientation used here is the one matching the end-to-end quadrature
    oracle for complex amplitudes.
    """
    if min(delta, kappa, zeta) <= 0:
        raise DomainError("all quality parameters must be positive")
    aux = AppendixAux.from_params(zeta, kappa)
    k1_sq, k2_sq = aux.k1_sq, aux.k2_sq
    tau = (1j * math.pi / (4.0 * alpha**2 * k1_sq * k2_sq)) * np.array(
        [
            [k2_sq**2, -k2_sq, -k2_sq],
            [-k2_sq, 1.0 + 2.0 * k1_sq * (k2_sq * delta**2 + zeta**2), 1.0],
            [-k2_sq, 1.0, 1.0 + 2.0 * k1_sq * (k2_sq * delta**2 + zeta**2)],
        ]
    )
    coeff = (complex(c0), complex(c1))
    t_env = t * k2_sq * zeta**2 / (2.0 * alpha * k1_sq)
    t_spk = t * zeta**2 / (2.0 * alpha * k1_sq)
    s_spk = s * zeta**2 / (2.0 * alpha * k2_sq)
    im_z = np.array([0.0, s_spk, s_spk])
    evaluator = SiegelEvaluator(tau, im_z, trunc)

    def integrand(u: np.ndarray) -> np.ndarray:
        zu = u / (2.0 * alpha)
        out = np.zeros((2, 2, u.size), dtype=complex)
        for l in (0, 1):
            for lp in (0, 1):
                dl = lp - l
                acc = np.zeros(u.size, dtype=complex)
                for j in (0, 1):
                    if coeff[j] == 0:
                        continue
                    for jp in (0, 1):
                        if coeff[jp] == 0:
                            continue
                        z = np.empty((u.size, 3), dtype=complex)
                        z[:, 0] = zu + (l + lp) / 4.0 - t_env
                        z[:, 1] = t_spk + 1j * s_spk + dl / (4.0 * k2_sq) - jp / 2.0
                        z[:, 2] = t_spk - 1j * s_spk - dl / (4.0 * k2_sq) - j / 2.0
                        acc += coeff[j] * coeff[jp].conjugate() * evaluator.theta(z)
                out[l, lp] = acc
        return out

    integral, info = integrate_adaptive(
        integrand, -alpha / 2.0, alpha / 2.0, rel_tol=rel_tol, max_doublings=6
    )
    damp = np.exp(
        -(alpha**2) * (kappa**2 + zeta**2 * k2_sq) / (4.0 * k2_sq)
    )
    phase = np.exp(-1j * s * alpha * kappa**2 * zeta**2 / k2_sq)
    pref = np.array(
        [[1.0, damp * phase], [damp * np.conj(phase), 1.0]], dtype=complex
    )
    rho, _ = finalize_logical(integral * pref)
    return (rho, info) if with_info else rho


def teleported_approx_gkp_logical_hq(
    delta: float,
    kappa: float,
    zeta: float,
    s: float,
    t: float,
    c0: complex,
    c1: complex,
    alpha: float,
    rel_tol: float = 1e-10,
    with_info: bool = False,
):
    """High-squeezing approximation to the teleported approximate GKP state.

    General form with K = sqrt(kappa^2 + zeta^2),
    T = diag(tau_{1/K}/2, tau_delta + tau_zeta, tau_delta + tau_zeta) and
    w = (zeta^2 t / (kappa^2 + zeta^2), i s zeta^2, i s zeta^2); accurate
    to fourth order in the quality parameters, so each should stay below
    roughly 0.4 (about 8 dB), and a warning is emitted otherwise.
    """
    if delta < 0 or kappa < 0 or zeta <= 0:
        raise DomainError("quality parameters must be non-negative, zeta positive")
    if max(delta, kappa, zeta) > HIGH_SQUEEZING_LIMIT:
        warnings.warn(
            "quality parameters exceed the high-squeezing regime; the "
            "approximate formula degrades as their fourth power",
            stacklevel=2,
        )
    k_sq = kappa**2 + zeta**2
    spike_sigma = max(math.sqrt(delta**2 + zeta**2), IDEAL_REGULARIZATION)
    tau_spike = tau_factor(spike_sigma, alpha)
    shift = 1j * s * zeta**2
    p = GeneralLogicalParams(
        k=math.sqrt(k_sq),
        tau=np.diag(
            [tau_factor(1.0 / math.sqrt(k_sq), alpha) / 2.0, tau_spike, tau_spike]
        ),
        w=np.array([zeta**2 * t / k_sq, shift, shift]),
        c0=c0,
        c1=c1,
        alpha=alpha,
    )
    return general_logical_state(p, rel_tol=rel_tol, with_info=with_info)


class AveragedPositionMatrix:
    """Position kernel of a teleported approximate GKP state averaged over
    homodyne outcomes (symmetric quality kappa = delta).

    rho(x, x') = G_{sqrt(2)/zeta}(x - x') G_{1/delta}(x) G_{1/delta}(x')
                 * sum_{jj'} c_j conj(c_j')
                   Theta_2((x/2a - j/2, x'/2a - j'/2), T2) / N

    with T2 = tau_delta * I + (tau_zeta / 2) * ones and N fixed by the
    diagonal integral.
    """

    def __init__(
        self,
        delta: float,
        zeta: float,
        c0: complex,
        c1: complex,
        alpha: float,
        trunc: ThetaTruncation = DEFAULT_TRUNCATION,
    ):
        if delta <= 0 or zeta <= 0:
            raise DomainError("delta and zeta must be positive")
        self.delta = delta
        self.zeta = zeta
        self.c = (complex(c0), complex(c1))
        self.alpha = alpha
        t_d = tau_factor(delta, alpha)
        t_z = tau_factor(zeta, alpha)
        self.tau2 = np.array(
            [[t_d + t_z / 2.0, t_z / 2.0], [t_z / 2.0, t_d + t_z / 2.0]]
        )
        self._evaluator = SiegelEvaluator(self.tau2, np.zeros(2), trunc)
        self._norm = 1.0
        self._norm = self._diagonal_integral()

    def _unnormalized(self, x: np.ndarray, xp: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        xp = np.asarray(xp, dtype=float)
        env = (
            gaussian(x - xp, 2.0 / self.zeta**2)
            * gaussian(x, 1.0 / self.delta**2)
            * gaussian(xp, 1.0 / self.delta**2)
        ).astype(complex)
        acc = np.zeros(x.shape, dtype=complex)
        for j, cj in enumerate(self.c):
            if cj == 0:
                continue
            for jp, cjp in enumerate(self.c):
                if cjp == 0:
                    continue
                z = np.stack(
                    [
                        x.ravel() / (2.0 * self.alpha) - j / 2.0,
                        xp.ravel() / (2.0 * self.alpha) - jp / 2.0,
                    ],
                    axis=-1,
                ).astype(complex)
                acc += (cj * cjp.conjugate() * self._evaluator.theta(z)).reshape(
                    x.shape
                )
        return env * acc

    def _diagonal_integral(self) -> float:
        half = 10.0 / self.delta
        n = int(min(2**18, 40.0 * half / self.delta)) | 1
        xs = np.linspace(-half, half, n)
        diag = np.real(self._unnormalized(xs, xs))
        return float(np.trapezoid(diag, xs))

    def evaluate(self, x, xp):
        out = self._unnormalized(np.atleast_1d(x), np.atleast_1d(xp)) / self._norm
        if np.ndim(x) == 0 and np.ndim(xp) == 0:
            return complex(out[0])
        return out


def averaged_teleported_gkp_position_matrix(
    delta: float, zeta: float, c0: complex, c1: complex, alpha: float
) -> AveragedPositionMatrix:
    """Averaged-over-outcomes teleported GKP position kernel (kappa = delta)."""
    return AveragedPositionMatrix(delta, zeta, c0, c1, alpha)


def averaged_tau_matrix(delta: float, zeta: float, alpha: float) -> np.ndarray:
    """Siegel matrix of the outcome-averaged logical state: envelope axis
    tau_{1/delta}/2 plus a coupled spike block with tau_delta + tau_zeta/2
    on the diagonal and tau_zeta/2 off it."""
    t_d = tau_factor(delta, alpha)
    t_z = tau_factor(zeta, alpha)
    return np.array(
        [
            [tau_factor(1.0 / delta, alpha) / 2.0, 0.0, 0.0],
            [0.0, t_d + t_z / 2.0, t_z / 2.0],
            [0.0, t_z / 2.0, t_d + t_z / 2.0],
        ]
    )


def averaged_teleported_gkp_logical(
    delta: float,
    zeta: float,
    c0: complex,
    c1: complex,
    alpha: float,
    rel_tol: float = 1e-10,
    trunc: ThetaTruncation = DEFAULT_TRUNCATION,
    with_info: bool = False,
):
    """Logical state of the outcome-averaged teleported GKP state.

    General form rho_{K, T}(0) with K = sqrt(zeta^2 + delta^2) and the
    non-diagonal T of `averaged_tau_matrix`; valid to second order in the
    quality parameters. The coupled spike block is summed exactly over the
    checkerboard sublattices (m2, m3) = ((a+b)/2, (a-b)/2), which turns the
    2-D theta into

        (1/2) [ theta(u+, (p+q)/2) theta(u-, (p-q)/2)
                + theta(u+ + 1/2, (p+q)/2) theta(u- + 1/2, (p-q)/2) ],

    u+- = (z2 +- z3)/2, so the evaluation remains robust for arbitrarily
    narrow spikes (it agrees with the direct lattice sum where both apply).
    """
    if delta <= 0 or zeta <= 0:
        raise DomainError("delta and zeta must be positive")
    t_d = tau_factor(delta, alpha)
    t_z = tau_factor(zeta, alpha)
    tau_env = tau_factor(1.0 / delta, alpha) / 2.0
    tau_plus = (t_d + t_z) / 2.0
    tau_minus = t_d / 2.0
    coeff = (complex(c0), complex(c1))
    if abs(abs(coeff[0]) ** 2 + abs(coeff[1]) ** 2 - 1.0) > 1e-12:
        raise DomainError("|c0|^2 + |c1|^2 must equal 1")

    offsets_plus = (0.0, 0.25, 0.5, 0.75)
    bps = _spike_mesh(
        alpha,
        (tau_env, tau_plus, tau_plus),
        (0.0, 0.0, 0.0),
        ((0.0, 0.25, 0.5), offsets_plus, tuple(h + 0.5 for h in offsets_plus)),
    )

    def theta1(z, tau):
        return theta_eval(z, tau, trunc)

    def integrand(u: np.ndarray) -> np.ndarray:
        zu = u.astype(complex) / (2.0 * alpha)
        env = {h: theta1(zu + h, tau_env) for h in (0.0, 0.25, 0.5)}
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
                        h_plus = (l + lp - j - jp) / 4.0
                        h_minus = (l - lp - j + jp) / 4.0
                        block = 0.5 * (
                            theta1(zu + h_plus, tau_plus)
                            * theta1(complex(h_minus), tau_minus)
                            + theta1(zu + h_plus + 0.5, tau_plus)
                            * theta1(complex(h_minus) + 0.5, tau_minus)
                        )
                        acc += coeff[j] * coeff[jp].conjugate() * block
                out[l, lp] = env[(l + lp) / 4.0] * acc
        return out

    integral, info = integrate_adaptive(
        integrand, -alpha / 2.0, alpha / 2.0, breakpoints=bps, rel_tol=rel_tol
    )
    raw = integral * _damping_matrix(math.sqrt(zeta**2 + delta**2), alpha)
    rho, _ = finalize_logical(raw)
    return (rho, info) if with_info else rho


def end_to_end_numeric_logical(
    delta: float,
    kappa: float,
    zeta: float,
    s: float,
    t: float,
    c0: complex,
    c1: complex,
    alpha: float,
    params: SsdParams | None = None,
    grid: GaugeTraceGrid | None = None,
) -> np.ndarray:
    """Quadrature oracle: gauge trace of the numerically teleported state.

    Builds the (regularized, if delta or kappa vanish) approximate GKP
    wavefunction, teleports it by quadrature, and gauge-traces the result.
    Independent of every closed-form reduced-state expression.
    """
    delta_eff = max(delta, 1e-3)
    kappa_eff = max(kappa, 1e-3)
    psi = approx_gkp_wf(ApproxGkpParams(c0, c1, delta_eff, kappa_eff), alpha)
    grid_wf, _ = teleport_wf(psi, TeleportOutcome(s, t, zeta))
    if params is None:
        params = SsdParams(alpha=alpha, d=2)
    if grid is None:
        grid = GaugeTraceGrid(m_max=16, points_per_bin=129, rel_tol=1e-8)
    return gauge_trace_numeric(grid_wf, params, grid)
