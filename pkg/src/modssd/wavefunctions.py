"""Position-space wavefunction families.

Each family is a frozen dataclass evaluable at real positions (vectorized,
returning complex amplitudes). Analytic families know their own support and
feature scale so quadrature policies can be derived from them; sampled
grids evaluate by cubic-spline interpolation and are zero outside their
sampled range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DegenerateStateError, DomainError
from .quadrature import simpson_nodes_weights
from .special import gaussian, gaussian_comb


def _as_complex_array(x):
    return np.atleast_1d(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class SqueezedVacuum:
    """Momentum-squeezed vacuum, psi(x) = (zeta^2/pi)^(1/4) exp(-zeta^2 x^2 / 2)."""

    zeta: float

    def __post_init__(self) -> None:
        if self.zeta <= 0:
            raise DomainError("squeezing factor must be positive")

    def evaluate(self, x):
        xs = _as_complex_array(x)
        out = (self.zeta**2 / math.pi) ** 0.25 * np.exp(
            -0.5 * self.zeta**2 * xs**2
        )
        out = out.astype(complex)
        return complex(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))

    def support_half_width(self) -> float:
        return 14.0 / self.zeta

    def feature_scale(self) -> float:
        return 1.0 / (math.sqrt(2.0) * self.zeta)


@dataclass(frozen=True)
class ApproxGkp:
    """Approximate GKP state: Gaussian spikes of std delta with period
    2*alpha under a Gaussian envelope of std 1/kappa, normalized numerically.

        psi(x) = N^(-1/2) * G_env(x) * sum_j c_j * comb(x - j*alpha)

    where comb is a unit-area Gaussian pulse train with period 2*alpha.
    Requires delta > 0; the ideal comb exists only as the analytic limit of
    the reduced-state formulas.
    """

    c0: complex
    c1: complex
    delta: float
    kappa: float
    alpha: float
    _norm: float = field(init=False, repr=False, compare=False, default=0.0)

    def __post_init__(self) -> None:
        if self.delta <= 0:
            raise DomainError(
                "delta must be positive for pointwise evaluation; the ideal "
                "comb is available only through the analytic reduced-state "
                "operations"
            )
        if self.kappa < 0:
            raise DomainError("kappa must be non-negative")
        if self.alpha <= 0:
            raise DomainError("alpha must be positive")
        if abs(abs(self.c0) ** 2 + abs(self.c1) ** 2 - 1.0) > 1e-12:
            raise DomainError("|c0|^2 + |c1|^2 must equal 1")
        object.__setattr__(self, "_norm", self._normalization())

    def _unnormalized(self, xs: np.ndarray) -> np.ndarray:
        if self.kappa > 0:
            env = gaussian(xs, 1.0 / self.kappa**2).astype(complex)
        else:
            env = np.ones_like(xs, dtype=complex)
        out = np.zeros_like(xs, dtype=complex)
        for j, c in ((0, self.c0), (1, self.c1)):
            if c == 0:
                continue
            out += c * gaussian_comb(xs - j * self.alpha, 2.0 * self.alpha, self.delta)
        return env * out

    def _normalization(self) -> float:
        half = self.support_half_width()
        if self.delta < self.alpha / 8.0:
            # integrate spike by spike; tails between spikes are negligible
            k_max = int(math.ceil(half / self.alpha)) + 1
            centers = self.alpha * np.arange(-k_max, k_max + 1)
            window = min(10.0 * self.delta, self.alpha / 2.0)
            local, w = simpson_nodes_weights(-window, window, 321)
            nodes = centers[:, None] + local[None, :]
            vals = np.abs(self._unnormalized(nodes.ravel())) ** 2
            total = float(vals.reshape(nodes.shape) @ w @ np.ones(centers.size))
        else:
            n = int(min(2**20, 40 * math.ceil(2 * half / self.delta))) | 1
            x, w = simpson_nodes_weights(-half, half, max(n, 4001))
            total = float(np.real(w @ np.abs(self._unnormalized(x)) ** 2))
        if total < 1e-300:
            raise DegenerateStateError("GKP wavefunction has vanishing norm")
        return math.sqrt(total)

    def evaluate(self, x):
        xs = _as_complex_array(x)
        out = self._unnormalized(xs) / self._norm
        return complex(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))

    def support_half_width(self) -> float:
        return 10.0 / max(self.kappa, 1e-3)

    def feature_scale(self) -> float:
        return self.delta


@dataclass(frozen=True)
class TeleportedGkp:
    """Closed-form (unnormalized) teleported approximate GKP wavefunction.

    For a GKP state of quality (delta, kappa) sent through the noisy
    teleportation channel with cluster squeezing zeta and homodyne outcomes
    (s, t):

        psi(x) = G_env(x - t) * E(x - i s zeta^2)
                 * sum_j c_j * comb_j((x - i s zeta^2) / K2^2)

    where K2^2 = 1 + zeta^2 kappa^2, G_env has std 1/zeta, E has std
    K2/kappa (a constant exp(-s^2 zeta^2 / 2) in the ideal kappa = 0 limit),
    and the spike train has period 2 alpha K2^2 and spike variance
    (zeta^2 + delta^2 K2^2) / K2^2. Setting delta = kappa = 0 gives the
    teleported ideal codeword.
    """

    zeta: float
    s: float
    t: float
    c0: complex
    c1: complex
    delta: float
    kappa: float
    alpha: float

    def __post_init__(self) -> None:
        if self.zeta <= 0:
            raise DomainError("cluster squeezing factor must be positive")
        if self.delta < 0 or self.kappa < 0:
            raise DomainError("delta and kappa must be non-negative")
        if self.alpha <= 0:
            raise DomainError("alpha must be positive")

    def evaluate(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=complex))
        k2_sq = 1.0 + self.zeta**2 * self.kappa**2
        shifted = xs - 1j * self.s * self.zeta**2
        env = gaussian(xs - self.t, 1.0 / self.zeta**2).astype(complex)
        if self.kappa > 0:
            env = env * gaussian(shifted, k2_sq / self.kappa**2)
        else:
            env = env * math.exp(-0.5 * self.s**2 * self.zeta**2)
        period = 2.0 * self.alpha * k2_sq
        spike_sigma = math.sqrt(self.zeta**2 + self.delta**2 * k2_sq) * math.sqrt(
            k2_sq
        )
        out = np.zeros_like(xs, dtype=complex)
        for j, c in ((0, self.c0), (1, self.c1)):
            if c == 0:
                continue
            out += c * gaussian_comb(
                shifted - j * self.alpha * k2_sq, period, spike_sigma
            )
        out = env * out * period
        return complex(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))

    def support_half_width(self) -> float:
        return abs(self.t) + 12.0 / self.zeta

    def feature_scale(self) -> float:
        return math.sqrt(self.zeta**2 + self.delta**2)


@dataclass(frozen=True)
class GridWavefunction:
    """Complex samples on a uniform grid; zero outside the sampled range."""

    x_min: float
    step: float
    samples: np.ndarray
    _spline_re: CubicSpline = field(init=False, repr=False, compare=False, default=None)
    _spline_im: CubicSpline = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self) -> None:
        if self.step <= 0:
            raise DomainError("grid step must be positive")
        samples = np.asarray(self.samples, dtype=complex)
        if samples.ndim != 1 or samples.size < 2:
            raise DomainError("grid needs at least 2 samples")
        object.__setattr__(self, "samples", samples)
        if samples.size >= 4:
            xs = self.x_values()
            object.__setattr__(self, "_spline_re", CubicSpline(xs, samples.real))
            object.__setattr__(self, "_spline_im", CubicSpline(xs, samples.imag))

    def x_values(self) -> np.ndarray:
        return self.x_min + self.step * np.arange(self.samples.size)

    @property
    def x_max(self) -> float:
        return self.x_min + self.step * (self.samples.size - 1)

    def evaluate(self, x):
        xs = _as_complex_array(x)
        out = np.zeros(xs.shape, dtype=complex)
        inside = (xs >= self.x_min) & (xs <= self.x_max)
        if np.any(inside):
            xi = xs[inside]
            if self._spline_re is not None:
                out[inside] = self._spline_re(xi) + 1j * self._spline_im(xi)
            else:
                grid_x = self.x_values()
                out[inside] = np.interp(xi, grid_x, self.samples.real) + 1j * np.interp(
                    xi, grid_x, self.samples.imag
                )
        return complex(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))

    def support_half_width(self) -> float:
        return max(abs(self.x_min), abs(self.x_max))

    def feature_scale(self) -> float:
        return 4.0 * self.step

    def norm_squared(self) -> float:
        return float(np.trapezoid(np.abs(self.samples) ** 2, dx=self.step))

    def edge_fraction(self) -> float:
        """Boundary amplitude relative to the peak (truncated-tail proxy)."""
        peak = float(np.max(np.abs(self.samples)))
        if peak == 0.0:
            return 0.0
        return float(max(abs(self.samples[0]), abs(self.samples[-1]))) / peak

    def normalized(self) -> "GridWavefunction":
        n2 = self.norm_squared()
        if n2 < 1e-300:
            raise DegenerateStateError("grid wavefunction has vanishing norm")
        return GridWavefunction(self.x_min, self.step, self.samples / math.sqrt(n2))


Wavefunction = SqueezedVacuum | ApproxGkp | TeleportedGkp | GridWavefunction


def sample_to_grid(
    psi, x_min: float, x_max: float, step: float
) -> GridWavefunction:
    """Sample any wavefunction family onto a uniform grid."""
    n = int(math.floor((x_max - x_min) / step)) + 1
    xs = x_min + step * np.arange(n)
    return GridWavefunction(x_min, step, np.asarray(psi.evaluate(xs), dtype=complex))
