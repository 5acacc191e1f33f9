"""Modular label arithmetic, gauge traces, and logical-qubit metrics.

A position eigenvalue x splits into three registers with respect to a bin
half-period alpha and a logical dimension d:

    x = alpha * ell + d * alpha * m_g + u_g,

where ell in {0, .., d-1} is the logical label, m_g the gauge bin number,
and u_g in [-alpha/2, alpha/2) the gauge modular position. The real ->
(bin, remainder) split uses the centered round floor(x/alpha + 1/2); the
integer -> (logical, gauge-bin) split uses floor division, which is what
maps the position comb point (2m + j) alpha to logical j with gauge bin m.

Tracing a pure state over (m_g, u_g) gives its d x d reduced logical state;
`gauge_trace_numeric` performs that trace by composite Simpson quadrature
per bin with doubling of both the bin truncation and the per-bin node count
until the normalized entries are stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AccuracyError,
    BudgetError,
    DegenerateStateError,
    DomainError,
)
from .quadrature import QuadInfo, simpson_nodes_weights


@dataclass(frozen=True)
class SsdParams:
    """Bin half-period alpha and logical dimension d of the decomposition."""

    alpha: float = math.sqrt(math.pi)
    d: int = 2

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise DomainError("alpha must be positive")
        if self.d < 2:
            raise DomainError("logical dimension must be at least 2")


@dataclass(frozen=True)
class SsdLabels:
    """Subsystem labels (ell, m_g, u_g) of a position eigenvalue."""

    ell: int
    m_g: int
    u_g: float

    def validate(self, params: SsdParams) -> None:
        if not 0 <= self.ell < params.d:
            raise DomainError(f"ell must lie in [0, {params.d})")
        if not -params.alpha / 2 <= self.u_g < params.alpha / 2:
            raise DomainError("u_g must lie in [-alpha/2, alpha/2)")


def decompose_real(x: float, alpha: float) -> tuple[int, float]:
    """Split x into its centered bin number and remainder: x = alpha*m + u.

    m = floor(x/alpha + 1/2), so a value exactly on a bin edge
    x = alpha*(k + 1/2) belongs to the upper bin with u = -alpha/2.
    """
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    m = math.floor(x / alpha + 0.5)
    u = x - alpha * m
    # guard against ties resolved differently by the floating division
    if u < -alpha / 2:
        m -= 1
        u = x - alpha * m
    elif u >= alpha / 2:
        m += 1
        u = x - alpha * m
    return m, u


def split_integer(m: int, d: int) -> tuple[int, int]:
    """Split an integer into (logical residue, gauge quotient) with floor
    semantics: m = d * m_g + ell with ell in [0, d)."""
    if d < 2:
        raise DomainError("logical dimension must be at least 2")
    return m % d, m // d


def ssd_labels(x: float, params: SsdParams) -> SsdLabels:
    """Subsystem labels of the position eigenvalue x."""
    m, u = decompose_real(x, params.alpha)
    ell, m_g = split_integer(m, params.d)
    return SsdLabels(ell, m_g, u)


def recompose(labels: SsdLabels, params: SsdParams) -> float:
    """Position eigenvalue alpha*ell + d*alpha*m_g + u_g."""
    return params.alpha * labels.ell + params.d * params.alpha * labels.m_g + labels.u_g


def eval_subsystem(psi, labels: SsdLabels, params: SsdParams) -> complex:
    """Wavefunction amplitude at the position addressed by subsystem labels."""
    labels.validate(params)
    return complex(psi.evaluate(recompose(labels, params)))


@dataclass(frozen=True)
class GaugeTraceGrid:
    """Quadrature policy for numeric gauge traces."""

    m_max: int = 32
    points_per_bin: int = 257
    rel_tol: float = 1e-9
    max_doublings: int = 6

    def __post_init__(self) -> None:
        if self.m_max < 1:
            raise DomainError("m_max must be at least 1")
        if self.points_per_bin < 9 or self.points_per_bin % 2 == 0:
            raise DomainError("points_per_bin must be odd and at least 9")
        if self.rel_tol <= 0:
            raise DomainError("rel_tol must be positive")


def _gauge_trace_once(psi, params: SsdParams, m_max: int, points: int) -> np.ndarray:
    alpha, d = params.alpha, params.d
    u, w = simpson_nodes_weights(-alpha / 2, alpha / 2, points)
    m = np.arange(-m_max, m_max + 1)
    # x[ell, m, u] = alpha*ell + d*alpha*m + u
    x = (
        alpha * np.arange(d)[:, None, None]
        + d * alpha * m[None, :, None]
        + u[None, None, :]
    )
    vals = np.asarray(psi.evaluate(x.ravel()), dtype=complex).reshape(x.shape)
    return np.einsum("amu,bmu,u->ab", vals, vals.conj(), w)


def gauge_trace_numeric(
    psi,
    params: SsdParams,
    grid: GaugeTraceGrid = GaugeTraceGrid(),
    with_info: bool = False,
):
    """Reduced logical state of a pure wavefunction by numeric gauge trace.

    Doubles both the gauge-bin truncation and the Simpson node count until
    the normalized entries move by less than ``grid.rel_tol``; raises
    AccuracyError if that never happens within ``grid.max_doublings``.
    Sampled-grid inputs are zero outside their range, so their boundary
    amplitude must be negligible (the truncated tail mass is checked).
    """
    edge_fraction = getattr(psi, "edge_fraction", None)
    if edge_fraction is not None and edge_fraction() ** 2 > grid.rel_tol:
        raise AccuracyError(
            "grid wavefunction carries non-negligible amplitude at its "
            "boundary; the zero-padded gauge trace would drop that tail"
        )
    m_max, points = grid.m_max, grid.points_per_bin
    prev = None
    residual = math.inf
    for doubling in range(grid.max_doublings + 1):
        raw = _gauge_trace_once(psi, params, m_max, points)
        norm = float(np.real(np.trace(raw)))
        if norm < 1e-300:
            raise DegenerateStateError("wavefunction norm underflow in gauge trace")
        rho = raw / norm
        if prev is not None:
            residual = float(np.max(np.abs(rho - prev)))
            if residual < grid.rel_tol:
                rho = 0.5 * (rho + rho.conj().T)
                info = QuadInfo(doubling, residual, True)
                return (rho, info) if with_info else rho
        prev = rho
        m_max *= 2
        points = 2 * points - 1
    raise AccuracyError(
        f"gauge trace did not stabilize to {grid.rel_tol:g} after "
        f"{grid.max_doublings} doublings (residual {residual:g})"
    )


def gauge_trace_kernel_numeric(
    kernel,
    params: SsdParams,
    grid: GaugeTraceGrid = GaugeTraceGrid(),
    with_info: bool = False,
):
    """Gauge trace of a mixed state given its position kernel rho(x, x').

    ``kernel`` must accept two equal-shape position arrays and return the
    matrix elements; it is sampled at (x_ell(m,u), x_ell'(m,u)) pairs.
    """
    m_max, points = grid.m_max, grid.points_per_bin
    d, alpha = params.d, params.alpha
    prev = None
    residual = math.inf
    for doubling in range(grid.max_doublings + 1):
        u, w = simpson_nodes_weights(-alpha / 2, alpha / 2, points)
        m = np.arange(-m_max, m_max + 1)
        base = d * alpha * m[:, None] + u[None, :]
        raw = np.empty((d, d), dtype=complex)
        for ell in range(d):
            for ellp in range(d):
                vals = np.asarray(
                    kernel((alpha * ell + base).ravel(), (alpha * ellp + base).ravel()),
                    dtype=complex,
                ).reshape(base.shape)
                raw[ell, ellp] = np.sum(vals @ w)
        norm = float(np.real(np.trace(raw)))
        if norm < 1e-300:
            raise DegenerateStateError("kernel trace underflow in gauge trace")
        rho = raw / norm
        if prev is not None:
            residual = float(np.max(np.abs(rho - prev)))
            if residual < grid.rel_tol:
                rho = 0.5 * (rho + rho.conj().T)
                info = QuadInfo(doubling, residual, True)
                return (rho, info) if with_info else rho
        prev = rho
        m_max *= 2
        points = 2 * points - 1
    raise AccuracyError(
        f"kernel gauge trace did not stabilize to {grid.rel_tol:g} "
        f"(residual {residual:g})"
    )


def reduced_gauge_numeric(
    psi,
    params: SsdParams,
    grid: GaugeTraceGrid = GaugeTraceGrid(m_max=8, points_per_bin=65),
    max_grid_points: int = 4096,
) -> np.ndarray:
    """Reduced gauge-mode density matrix on the flattened (m, u) grid.

    Quadrature weights are embedded symmetrically (sqrt(w) on each side) so
    that matrix trace and purity approximate their continuum counterparts.
    """
    alpha, d = params.alpha, params.d
    n_points = (2 * grid.m_max + 1) * grid.points_per_bin
    if n_points > max_grid_points:
        raise BudgetError(
            f"gauge grid would need {n_points} points, budget is {max_grid_points}"
        )
    u, w = simpson_nodes_weights(-alpha / 2, alpha / 2, grid.points_per_bin)
    m = np.arange(-grid.m_max, grid.m_max + 1)
    base = (d * alpha * m[:, None] + u[None, :]).ravel()
    sqrt_w = np.sqrt(np.tile(w, 2 * grid.m_max + 1))
    vals = np.stack(
        [
            np.asarray(psi.evaluate(alpha * ell + base), dtype=complex) * sqrt_w
            for ell in range(d)
        ]
    )
    sigma = np.einsum("la,lb->ab", vals, vals.conj())
    norm = float(np.real(np.trace(sigma)))
    if norm < 1e-300:
        raise DegenerateStateError("wavefunction norm underflow in gauge reduction")
    return sigma / norm


def _hermitian_sqrt(mat: np.ndarray) -> np.ndarray:
    eigvals, eigvecs = np.linalg.eigh(mat)
    eigvals = np.clip(eigvals, 0.0, None)
    return (eigvecs * np.sqrt(eigvals)) @ eigvecs.conj().T


def logical_fidelity(rho: np.ndarray, sigma: np.ndarray, psd_tol: float = 1e-8) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    for mat in (rho, sigma):
        if float(np.min(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T)))) < -psd_tol:
            raise DomainError("fidelity input is not positive semi-definite")
    s = _hermitian_sqrt(0.5 * (sigma + sigma.conj().T))
    inner = s @ (0.5 * (rho + rho.conj().T)) @ s
    eigvals = np.clip(np.linalg.eigvalsh(0.5 * (inner + inner.conj().T)), 0.0, None)
    return float(np.sum(np.sqrt(eigvals)) ** 2)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the trace norm of rho - sigma."""
    diff = np.asarray(rho, dtype=complex) - np.asarray(sigma, dtype=complex)
    diff = 0.5 * (diff + diff.conj().T)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def bloch_vector(rho: np.ndarray) -> tuple[float, float, float]:
    """Bloch components (x, y, z) of a qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DomainError("Bloch vector is defined for 2x2 states only")
    return (
        2.0 * float(np.real(rho[0, 1])),
        2.0 * float(np.imag(rho[1, 0])),
        float(np.real(rho[0, 0] - rho[1, 1])),
    )


def logical_pauli(which: str, d: int = 2) -> np.ndarray:
    """Logical Pauli Z (clock) or X (cyclic shift) for dimension d."""
    if d < 2:
        raise DomainError("logical dimension must be at least 2")
    if which == "Z":
        return np.diag(np.exp(2j * math.pi * np.arange(d) / d))
    if which == "X":
        mat = np.zeros((d, d), dtype=complex)
        for ell in range(d):
            mat[(ell + 1) % d, ell] = 1.0
        return mat
    raise DomainError(f"unknown Pauli label {which!r}, expected 'X' or 'Z'")


def qubit_state(c0: complex, c1: complex) -> np.ndarray:
    """Density matrix of the pure qubit c0|0> + c1|1>."""
    vec = np.array([c0, c1], dtype=complex)
    norm = np.linalg.norm(vec)
    if norm < 1e-300:
        raise DegenerateStateError("qubit amplitudes are both zero")
    vec = vec / norm
    return np.outer(vec, vec.conj())


KET_0 = qubit_state(1.0, 0.0)
KET_1 = qubit_state(0.0, 1.0)
KET_PLUS = qubit_state(1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0))


def assert_logical_state(
    rho: np.ndarray,
    trace_tol: float = 1e-10,
    herm_tol: float = 1e-12,
    eig_floor: float = -1e-10,
) -> None:
    """Raise DomainError unless rho is a valid normalized density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if abs(np.trace(rho) - 1.0) > trace_tol:
        raise DomainError(f"trace deviates from 1 by {abs(np.trace(rho) - 1.0):g}")
    if float(np.max(np.abs(rho - rho.conj().T))) > herm_tol:
        raise DomainError("state is not Hermitian within tolerance")
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))
    if min_eig < eig_floor:
        raise DomainError(f"state has negative eigenvalue {min_eig:g}")
