"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every tolerance is fixed here and matches the package contracts.
"""

import math
import time

import numpy as np
import pytest

from modssd import (
    ApproxGkpParams,
    SsdParams,
    ThetaTruncation,
    approx_gkp_logical,
    approx_gkp_wf,
    bloch_angles_to_amplitudes,
    bloch_vector,
    db_to_zeta,
    decompose_real,
    gauge_trace_numeric,
    gaussian,
    jacobi_theta,
    logical_fidelity,
    qubit_state,
    recompose,
    split_integer,
    squeezed_vacuum_logical,
    squeezed_vacuum_wf,
    ssd_labels,
    trace_distance,
)
from modssd.modular import KET_0, KET_PLUS, assert_logical_state
from modssd.operators import apply_x_shift_labels
from modssd.teleport import (
    TeleportOutcome,
    averaged_teleported_gkp_logical,
    end_to_end_numeric_logical,
    teleported_approx_gkp_logical_full,
    teleported_approx_gkp_logical_hq,
    teleported_ideal_gkp_logical,
)

from conftest import SQRT_PI, INV_SQRT2

P2 = SsdParams()


def report(number: int, label: str, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {number:2d} [{status}] {label}{suffix}")
    assert passed, f"criterion {number}: {label}{suffix}"


def test_criterion_01_squeezed_vacuum_oracle():
    start = time.time()
    worst = 0.0
    for zeta in (0.3, 1.0, 3.0):
        analytic = squeezed_vacuum_logical(zeta, SQRT_PI)
        numeric = gauge_trace_numeric(squeezed_vacuum_wf(zeta), P2)
        worst = max(worst, trace_distance(analytic, numeric))
    elapsed = time.time() - start
    report(
        1,
        "squeezed-vacuum analytic state matches numeric gauge trace",
        worst < 1e-6 and elapsed < 10.0,
        f"worst {worst:.2e}, {elapsed:.1f}s",
    )


def test_criterion_02_approx_gkp_oracle():
    start = time.time()
    amplitudes = [
        (1.0, 0.0),
        (INV_SQRT2, INV_SQRT2),
        (INV_SQRT2, 1j * INV_SQRT2),
    ]
    worst = 0.0
    for quality in (0.15, 0.3):
        for c0, c1 in amplitudes:
            params = ApproxGkpParams(c0, c1, quality, quality)
            analytic = approx_gkp_logical(params, SQRT_PI)
            numeric = gauge_trace_numeric(approx_gkp_wf(params, SQRT_PI), P2)
            worst = max(worst, trace_distance(analytic, numeric))
    elapsed = time.time() - start
    report(
        2,
        "approximate-GKP analytic state matches numeric gauge trace",
        worst < 1e-6 and elapsed < 30.0,
        f"worst {worst:.2e}, {elapsed:.1f}s",
    )


def test_criterion_03_teleportation_identity():
    worst = 0.0
    for zeta in (0.1, 0.2, 0.3):
        teleported = teleported_ideal_gkp_logical(
            INV_SQRT2, INV_SQRT2, TeleportOutcome(0.0, 0.0, zeta), SQRT_PI
        )
        encoded = approx_gkp_logical(
            ApproxGkpParams(INV_SQRT2, INV_SQRT2, zeta, zeta), SQRT_PI
        )
        worst = max(worst, float(np.max(np.abs(teleported - encoded))))
    report(
        3,
        "zero-outcome teleportation equals symmetric approximate encoding",
        worst < 1e-9,
        f"worst {worst:.2e}",
    )


def test_criterion_04_limit_web():
    checks = []
    for db, tol in ((12.0, 2e-3), (16.0, 5e-4)):
        q = db_to_zeta(db)
        full = teleported_approx_gkp_logical_full(
            q, q, q, 0.2, 0.2, INV_SQRT2, INV_SQRT2, SQRT_PI
        )
        hq = teleported_approx_gkp_logical_hq(
            q, q, q, 0.2, 0.2, INV_SQRT2, INV_SQRT2, SQRT_PI
        )
        checks.append((f"full-hq@{db:g}dB", trace_distance(full, hq), tol))
    c0, c1 = INV_SQRT2, 1j * INV_SQRT2
    full_enc = teleported_approx_gkp_logical_full(
        0.2, 0.2, 1e-6, 0.1, 0.2, c0, c1, SQRT_PI
    )
    encoded = approx_gkp_logical(ApproxGkpParams(c0, c1, 0.2, 0.2), SQRT_PI)
    checks.append(("full->encoding", trace_distance(full_enc, encoded), 1e-5))
    full_ideal = teleported_approx_gkp_logical_full(
        1e-6, 1e-6, 0.2, 0.1, 0.1, c0, c1, SQRT_PI
    )
    ideal = teleported_ideal_gkp_logical(
        c0, c1, TeleportOutcome(0.1, 0.1, 0.2), SQRT_PI
    )
    checks.append(("full->ideal", trace_distance(full_ideal, ideal), 1e-5))
    ok = all(value < tol for _, value, tol in checks)
    detail = ", ".join(f"{name} {value:.2e}" for name, value, _ in checks)
    report(4, "full/high-squeezing/encoding/ideal limit web", ok, detail)


def test_criterion_05_end_to_end_oracle():
    c0, c1 = INV_SQRT2, 1j * INV_SQRT2
    numeric = end_to_end_numeric_logical(0.2, 0.2, 0.2, 0.3, -0.4, c0, c1, SQRT_PI)
    analytic = teleported_approx_gkp_logical_full(
        0.2, 0.2, 0.2, 0.3, -0.4, c0, c1, SQRT_PI
    )
    dist = trace_distance(numeric, analytic)
    report(
        5,
        "teleported analytic state matches end-to-end quadrature oracle",
        dist < 1e-4,
        f"distance {dist:.2e}",
    )


def test_criterion_06_squeezed_figure_claims():
    rho_vacuum = squeezed_vacuum_logical(1.0, SQRT_PI)
    vacuum_ok = logical_fidelity(rho_vacuum, KET_0) > logical_fidelity(
        rho_vacuum, KET_PLUS
    )
    plus_18db = logical_fidelity(
        squeezed_vacuum_logical(db_to_zeta(18.0), SQRT_PI), KET_PLUS
    )
    max_y = max(
        abs(bloch_vector(squeezed_vacuum_logical(db_to_zeta(db), SQRT_PI))[1])
        for db in range(-18, 20, 2)
    )
    ok = vacuum_ok and plus_18db > 0.99 and max_y <= 1e-12
    report(
        6,
        "squeezed-vacuum sweep claims (vacuum bias, 18 dB fidelity, xz plane)",
        ok,
        f"F+@18dB {plus_18db:.4f}, max|y| {max_y:.1e}",
    )


def test_criterion_07_gkp_figure_claims():
    q12 = db_to_zeta(12.0)
    equator = []
    for phi in np.linspace(0.0, 2.0 * math.pi, 12, endpoint=False):
        c0, c1 = bloch_angles_to_amplitudes(math.pi / 2, phi)
        rho = approx_gkp_logical(ApproxGkpParams(c0, c1, q12, q12), SQRT_PI)
        equator.append(logical_fidelity(rho, qubit_state(c0, c1)))
    phi_variation = max(equator) - min(equator)
    poles_ok = True
    for db in (8.0, 10.0, 12.0):
        q = db_to_zeta(db)
        pole = logical_fidelity(
            approx_gkp_logical(ApproxGkpParams(1.0, 0.0, q, q), SQRT_PI), KET_0
        )
        for phi in np.linspace(0.0, 2.0 * math.pi, 8, endpoint=False):
            c0, c1 = bloch_angles_to_amplitudes(math.pi / 2, phi)
            rho = approx_gkp_logical(ApproxGkpParams(c0, c1, q, q), SQRT_PI)
            if pole < logical_fidelity(rho, qubit_state(c0, c1)) - 1e-12:
                poles_ok = False
    ok = phi_variation < 1e-2 and poles_ok
    report(
        7,
        "GKP fidelity grid claims (azimuthal independence, pole dominance)",
        ok,
        f"phi variation {phi_variation:.2e}",
    )


def test_criterion_08_averaged_teleportation_ordering():
    violations = 0
    margin = math.inf
    for db_delta in range(8, 20, 2):
        for db_zeta in range(8, 20, 2):
            delta = db_to_zeta(db_delta)
            zeta = db_to_zeta(db_zeta)
            rho_plus = averaged_teleported_gkp_logical(
                delta, zeta, INV_SQRT2, INV_SQRT2, SQRT_PI
            )
            rho_zero = averaged_teleported_gkp_logical(delta, zeta, 1.0, 0.0, SQRT_PI)
            inf_plus = 1.0 - logical_fidelity(rho_plus, KET_PLUS)
            inf_zero = 1.0 - logical_fidelity(rho_zero, KET_0)
            if not inf_plus > inf_zero:
                violations += 1
            margin = min(margin, inf_plus - inf_zero)
    report(
        8,
        "averaged teleportation: |+> infidelity exceeds |0> on the 8-18 dB grid",
        violations == 0,
        f"min margin {margin:.2e}",
    )


def test_criterion_09_shift_exactness():
    rng = np.random.default_rng(1234)
    carries_alpha: set[int] = set()
    carries_d: set[int] = set()
    mismatches = 0
    worst_u = 0.0
    for params in (P2, SsdParams(1.0, 3)):
        for _ in range(50_000):
            labels = ssd_labels(float(rng.uniform(-60, 60)), params)
            t = float(rng.uniform(-25, 25))
            moved = apply_x_shift_labels(t, labels, params)
            ref = ssd_labels(recompose(labels, params) + t, params)
            if moved.ell != ref.ell or moved.m_g != ref.m_g:
                mismatches += 1
            worst_u = max(worst_u, abs(moved.u_g - ref.u_g))
            v = decompose_real(t, params.alpha)[1]
            carries_alpha.add(decompose_real(labels.u_g + v, params.alpha)[0])
        carries_d.update(
            split_integer(ell + k, params.d)[1]
            for ell in range(params.d)
            for k in range(params.d)
        )
    ok = (
        mismatches == 0
        and worst_u < 1e-10
        and carries_alpha <= {-1, 0, 1}
        and carries_d <= {0, 1}
    )
    report(
        9,
        "position-shift label action is exact on 1e5 random cases",
        ok,
        f"mismatches {mismatches}, worst |du| {worst_u:.1e}",
    )


def test_criterion_10_property_suite():
    failures = []

    # every reduced state produced by the package is a density matrix
    states = [
        squeezed_vacuum_logical(0.4, SQRT_PI),
        approx_gkp_logical(ApproxGkpParams(0.6, 0.8j, 0.25, 0.25), SQRT_PI),
        teleported_ideal_gkp_logical(
            INV_SQRT2, 1j * INV_SQRT2, TeleportOutcome(0.3, -0.2, 0.25), SQRT_PI
        ),
        teleported_approx_gkp_logical_full(
            0.2, 0.2, 0.25, 0.1, 0.3, 0.6, 0.8j, SQRT_PI
        ),
        averaged_teleported_gkp_logical(0.2, 0.25, INV_SQRT2, INV_SQRT2, SQRT_PI),
        gauge_trace_numeric(squeezed_vacuum_wf(0.8), P2),
    ]
    for idx, rho in enumerate(states):
        try:
            assert_logical_state(rho, trace_tol=1e-10, herm_tol=1e-12,
                                 eig_floor=-1e-10)
        except Exception as exc:  # noqa: BLE001 - collect for the report
            failures.append(f"state {idx}: {exc}")

    # theta truncation stability under budget doubling
    trunc = ThetaTruncation()
    doubled = ThetaTruncation(max_terms_per_axis=2 * trunc.max_terms_per_axis)
    for z, tau in ((0.2, 0.3j), (0.4 + 0.01j, 1.2j)):
        a = jacobi_theta(z, tau, trunc)
        b = jacobi_theta(z, tau, doubled)
        if abs(a - b) > trunc.rel_tol * max(1.0, abs(a)):
            failures.append("theta truncation instability")

    # pulse-train identity on a 100-point grid
    period = 2 * SQRT_PI
    for sigma in (0.1, 0.5):
        xs = np.linspace(-2 * period, 2 * period, 100)
        tau = 2j * math.pi * sigma**2 / period**2
        lhs = np.asarray(jacobi_theta(xs / period, tau)) / period
        rhs = sum(gaussian(xs - n * period, sigma**2) for n in range(-60, 61))
        if np.max(np.abs(lhs - rhs)) > 1e-10:
            failures.append(f"pulse train violation at sigma={sigma}")

    # label round trip
    rng = np.random.default_rng(99)
    for params in (P2, SsdParams(1.0, 3), SsdParams(0.7, 5)):
        for x in rng.uniform(-1e3, 1e3, size=2000):
            if abs(recompose(ssd_labels(float(x), params), params) - x) > 1e-10:
                failures.append(f"round trip failure at {x}")
                break

    report(
        10,
        "property suite (density matrices, truncation, pulse train, round trip)",
        not failures,
        "; ".join(failures) if failures else "all properties hold",
    )
