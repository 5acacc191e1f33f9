import math

import numpy as np
import pytest

from modssd import (
    ApproxGkpParams,
    DomainError,
    SsdParams,
    approx_gkp_logical,
    approx_gkp_wf,
    bloch_angles_to_amplitudes,
    bloch_vector,
    db_to_zeta,
    gauge_trace_numeric,
    logical_fidelity,
    qubit_state,
    squeezed_vacuum_logical,
    squeezed_vacuum_wf,
    trace_distance,
)
from modssd.modular import KET_0, KET_PLUS

from conftest import SQRT_PI, INV_SQRT2, simpson_integral

PARAMS = SsdParams()


class TestSqueezedVacuumWf:
    def test_position_variance(self):
        zeta = 0.5
        psi = squeezed_vacuum_wf(zeta)
        half = 14.0 / zeta
        var = simpson_integral(
            lambda x: x**2 * np.abs(psi.evaluate(x)) ** 2, -half, half, 16001
        )
        assert var == pytest.approx(1.0 / (2 * zeta**2), abs=1e-8)

    def test_vacuum_variance(self):
        psi = squeezed_vacuum_wf(1.0)
        var = simpson_integral(
            lambda x: x**2 * np.abs(psi.evaluate(x)) ** 2, -14, 14, 16001
        )
        assert var == pytest.approx(0.5, abs=1e-10)

    def test_normalized(self):
        psi = squeezed_vacuum_wf(0.7)
        norm = simpson_integral(lambda x: np.abs(psi.evaluate(x)) ** 2, -25, 25, 16001)
        assert norm == pytest.approx(1.0, abs=1e-10)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            squeezed_vacuum_wf(0.0)


class TestSqueezedVacuumLogical:
    def test_high_squeezing_approaches_plus(self):
        rho = squeezed_vacuum_logical(1e-3, SQRT_PI)
        assert trace_distance(rho, KET_PLUS) < 1e-4

    @pytest.mark.parametrize("zeta", [0.3, 1.0, 3.0])
    def test_matches_numeric_gauge_trace(self, zeta):
        analytic = squeezed_vacuum_logical(zeta, SQRT_PI)
        numeric = gauge_trace_numeric(squeezed_vacuum_wf(zeta), PARAMS)
        assert np.max(np.abs(analytic - numeric)) < 1e-7

    def test_vacuum_prefers_zero(self):
        rho = squeezed_vacuum_logical(1.0, SQRT_PI)
        assert logical_fidelity(rho, KET_0) > logical_fidelity(rho, KET_PLUS)

    def test_entries_real_xz_plane(self):
        for db in range(-18, 20, 2):
            rho = squeezed_vacuum_logical(db_to_zeta(db), SQRT_PI)
            assert np.max(np.abs(rho.imag)) < 1e-12
            assert abs(bloch_vector(rho)[1]) < 1e-12

    def test_plus_fidelity_monotone_in_zeta(self):
        zetas = [db_to_zeta(db) for db in range(18, -2, -2)]
        fids = [
            logical_fidelity(squeezed_vacuum_logical(z, SQRT_PI), KET_PLUS)
            for z in zetas
        ]
        assert all(fids[i] >= fids[i + 1] - 1e-12 for i in range(len(fids) - 1))


class TestApproxGkpWf:
    def test_comb_peak_suppression(self):
        psi = approx_gkp_wf(ApproxGkpParams(1.0, 0.0, 0.1, 0.1), SQRT_PI)
        on = abs(psi.evaluate(0.0))
        off = abs(psi.evaluate(SQRT_PI))
        assert off / on < 1e-10

    def test_normalized(self):
        psi = approx_gkp_wf(ApproxGkpParams(INV_SQRT2, INV_SQRT2, 0.1, 0.1), SQRT_PI)
        norm = simpson_integral(
            lambda x: np.abs(psi.evaluate(x)) ** 2, -105, 105, 400001
        )
        assert norm == pytest.approx(1.0, abs=1e-9)

    def test_superposition_has_all_spikes(self):
        psi = approx_gkp_wf(ApproxGkpParams(INV_SQRT2, INV_SQRT2, 0.1, 0.1), SQRT_PI)
        values = np.abs(psi.evaluate(SQRT_PI * np.arange(-2, 3)))
        assert np.all(values > 0.1 * values.max())

    def test_ideal_not_pointwise(self):
        with pytest.raises(DomainError):
            approx_gkp_wf(ApproxGkpParams(1.0, 0.0, 0.0, 0.1), SQRT_PI)


class TestApproxGkpLogical:
    def test_ideal_limit_is_intended_qubit(self):
        c0, c1 = bloch_angles_to_amplitudes(1.1, 0.7)
        rho = approx_gkp_logical(ApproxGkpParams(c0, c1, 0.0, 0.0), SQRT_PI)
        assert np.max(np.abs(rho - qubit_state(c0, c1))) < 1e-6

    @pytest.mark.parametrize("quality", [0.15, 0.3])
    def test_matches_numeric_gauge_trace(self, quality):
        params = ApproxGkpParams(INV_SQRT2, INV_SQRT2, quality, quality)
        analytic = approx_gkp_logical(params, SQRT_PI)
        numeric = gauge_trace_numeric(approx_gkp_wf(params, SQRT_PI), PARAMS)
        assert trace_distance(analytic, numeric) < 1e-6

    def test_matches_numeric_complex_amplitudes(self):
        params = ApproxGkpParams(INV_SQRT2, 1j * INV_SQRT2, 0.2, 0.2)
        analytic = approx_gkp_logical(params, SQRT_PI)
        numeric = gauge_trace_numeric(approx_gkp_wf(params, SQRT_PI), PARAMS)
        assert trace_distance(analytic, numeric) < 1e-6

    def test_pole_beats_equator_at_10db(self):
        q = db_to_zeta(10.0)
        pole = approx_gkp_logical(ApproxGkpParams(1.0, 0.0, q, q), SQRT_PI)
        equator = approx_gkp_logical(ApproxGkpParams(INV_SQRT2, INV_SQRT2, q, q), SQRT_PI)
        assert logical_fidelity(pole, KET_0) > logical_fidelity(equator, KET_PLUS)

    def test_global_phase_invariance(self):
        base = approx_gkp_logical(ApproxGkpParams(INV_SQRT2, INV_SQRT2, 0.25, 0.25),
                                  SQRT_PI)
        phase = np.exp(0.77j)
        rotated = approx_gkp_logical(
            ApproxGkpParams(phase * INV_SQRT2, phase * INV_SQRT2, 0.25, 0.25), SQRT_PI
        )
        assert np.max(np.abs(base - rotated)) < 1e-13

    def test_conjugation_transposes(self):
        c0, c1 = bloch_angles_to_amplitudes(0.9, 1.3)
        rho = approx_gkp_logical(ApproxGkpParams(c0, c1, 0.25, 0.25), SQRT_PI)
        rho_conj = approx_gkp_logical(
            ApproxGkpParams(np.conj(c0), np.conj(c1), 0.25, 0.25), SQRT_PI
        )
        assert np.max(np.abs(rho_conj - rho.T)) < 1e-12


class TestFigureGridOracle:
    """Analytic reduced states against the numeric gauge trace across the
    figure parameter grids (sampled)."""

    @pytest.mark.parametrize("db", [-12.0, -6.0, 0.0, 6.0, 12.0])
    def test_squeezed_grid(self, db):
        zeta = db_to_zeta(db)
        analytic = squeezed_vacuum_logical(zeta, SQRT_PI)
        numeric = gauge_trace_numeric(squeezed_vacuum_wf(zeta), PARAMS)
        assert trace_distance(analytic, numeric) < 1e-6

    @pytest.mark.parametrize(
        "theta,phi", [(math.pi / 4, math.pi / 3), (2 * math.pi / 3, 5 * math.pi / 4)]
    )
    def test_gkp_grid(self, theta, phi):
        q = db_to_zeta(10.0)
        c0, c1 = bloch_angles_to_amplitudes(theta, phi)
        params = ApproxGkpParams(c0, c1, q, q)
        analytic = approx_gkp_logical(params, SQRT_PI)
        numeric = gauge_trace_numeric(approx_gkp_wf(params, SQRT_PI), PARAMS)
        assert trace_distance(analytic, numeric) < 1e-6


class TestFigureThreeClaims:
    def test_phi_independence_at_12db(self):
        q = db_to_zeta(12.0)
        fids = []
        for phi in np.linspace(0, 2 * math.pi, 12, endpoint=False):
            c0, c1 = bloch_angles_to_amplitudes(math.pi / 2, phi)
            rho = approx_gkp_logical(ApproxGkpParams(c0, c1, q, q), SQRT_PI)
            fids.append(logical_fidelity(rho, qubit_state(c0, c1)))
        assert max(fids) - min(fids) < 1e-2

    @pytest.mark.parametrize("db", [8.0, 10.0, 12.0])
    def test_pole_fidelity_dominates(self, db):
        q = db_to_zeta(db)
        pole = logical_fidelity(
            approx_gkp_logical(ApproxGkpParams(1.0, 0.0, q, q), SQRT_PI),
            KET_0,
        )
        for phi in np.linspace(0, 2 * math.pi, 8, endpoint=False):
            c0, c1 = bloch_angles_to_amplitudes(math.pi / 2, phi)
            rho = approx_gkp_logical(ApproxGkpParams(c0, c1, q, q), SQRT_PI)
            assert pole >= logical_fidelity(rho, qubit_state(c0, c1)) - 1e-12
