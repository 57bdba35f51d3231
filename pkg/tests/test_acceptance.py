"""End-to-end acceptance checks, one test per criterion.

Run with ``pytest -v tests/test_acceptance.py`` to get a single pass/fail
line per criterion.
"""

import numpy as np
import pytest

from compulse import profiles, su2
from compulse.catalog import find_entry, load_catalog
from compulse.conditions import SequenceSpec, residuals, wrap_angle
from compulse.solver import SolveOptions, refine, solve

import _fd

PI = np.pi


def drift_to(a, b):
    return np.max(np.abs(wrap_angle(np.asarray(a) - np.asarray(b)))) if len(a) else 0.0


def test_criterion_1_table_fidelity():
    # every entry: residual norm <= 0.05 at the printed phases, refinement
    # converges to <= 1e-8 moving no phase by more than 2e-3 pi
    for entry in load_catalog():
        seed = entry.phases_rad
        norm = np.linalg.norm(residuals(entry.spec, seed))
        assert norm <= 0.05, f"{entry.name}: residual norm {norm:.3g}"
        sol = refine(entry.spec, seed)
        assert sol is not None, f"{entry.name}: refinement did not converge"
        assert sol.residual_norm <= 1e-8, f"{entry.name}: refined norm {sol.residual_norm:.3g}"
        d = drift_to(sol.phases, seed)
        assert d <= 2e-3 * PI, f"{entry.name}: refinement drift {d / PI:.3g} pi"


def test_criterion_2_crosstalk_radii():
    cases = [("N5(pi)", 0.83, 0.15), ("P17(pi)", 0.70, 0.27), ("N21(pi)", 0.51, 0.48)]
    for name, radius, fraction in cases:
        entry = find_entry(name)
        measured = profiles.crosstalk_radius(entry.spec, entry.phases_rad)
        assert abs(measured - radius) <= 0.02, f"{name}: {measured:.3f} xi"
        # equivalently: suppression sets in at the quoted Rabi fraction
        assert abs(profiles.beam_scaling(measured) - fraction) <= 0.02


def test_criterion_3_robustness_radii():
    single = SequenceSpec(pulse_count=1, nominal_area=PI, target_area=PI)
    assert abs(profiles.robustness_radius(single, []) - 0.05) <= 0.005
    for name, radius in [("P7(pi)", 0.18), ("P17(pi)", 0.21)]:
        entry = find_entry(name)
        measured = profiles.robustness_radius(entry.spec, entry.phases_rad)
        assert abs(measured - radius) <= 0.01, f"{name}: {measured:.3f} xi"


def below_threshold_halfwidth(curve, threshold):
    # largest w such that the deviation stays below threshold on |x| <= w
    x, y = curve.abscissa, curve.ordinate
    bad = np.nonzero(y > threshold)[0]
    if not bad.size:
        return float(np.max(np.abs(x)))
    centre = np.argmin(np.abs(x))
    lo = bad[bad < centre]
    hi = bad[bad > centre]
    w = np.inf
    if hi.size:
        w = min(w, x[hi[0] - 1])
    if lo.size:
        w = min(w, -x[lo[-1] + 1])
    return float(w)


def test_criterion_4_phase_robustness():
    threshold = profiles.infidelity_threshold_phase()
    p11 = find_entry("P11(pi,3pi/2)")
    n7 = find_entry("N7(pi,3pi/2)")
    scales = np.linspace(0.8, 1.2, 2001)

    curve_p11 = profiles.phase_deviation_scan(p11.spec, p11.phases_rad, scales)
    assert np.nanmax(curve_p11.ordinate) < threshold  # flat through +-20%

    curve_n7 = profiles.phase_deviation_scan(n7.spec, n7.phases_rad, scales)
    w_n7 = below_threshold_halfwidth(curve_n7, threshold)
    assert w_n7 < 0.2 - 1e-9  # strictly narrower than the P11 window

    for entry in (p11, n7):
        resonant = profiles.phase_deviation_scan(entry.spec, entry.phases_rad, np.array([1.0]))
        detuned = profiles.phase_deviation_scan(
            entry.spec, entry.phases_rad, np.array([1.0]), detuning_area=0.001
        )
        shift = abs(detuned.ordinate[0] - resonant.ordinate[0])
        assert shift < threshold, f"{entry.name}: detuned shift {shift:.3g} rad"


def test_criterion_5_noise_rms():
    for name in ("P11(pi,3pi/2)", "N7(pi,3pi/2)"):
        entry = find_entry(name)
        stats = profiles.noise_phase_error(entry.spec, entry.phases_rad, 0.05, 10_000, rng_seed=0)
        assert 2.5e-3 * PI / 3 <= stats.rms <= 2.5e-3 * PI * 3, f"{name}: rms {stats.rms / PI:.3g} pi"


def test_criterion_6_oracle_equivalence():
    # single-pulse pipeline == closed form at every default grid point
    single = SequenceSpec(pulse_count=1, nominal_area=PI, target_area=PI)
    curve = profiles.excitation_profile(single, [])
    exact = np.sin(PI * profiles.beam_scaling(curve.abscissa) / 2.0) ** 2
    assert np.max(np.abs(curve.ordinate - exact)) < 1e-12

    # jets vs central finite differences on 100 random specs
    rng = np.random.default_rng(606)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        spec = SequenceSpec(pulse_count=2 * n + 1, nominal_area=PI, target_area=PI)
        phases = rng.uniform(0, 2 * PI, n)
        s0 = float(rng.uniform(0.2, 2 * PI))
        jet = su2.sequence_jet(spec, phases, s0, 4)
        err = _fd.fd_derivatives_max_error(spec, phases, s0, jet)
        assert err < 1e-5, f"N={2 * n + 1}, s0={s0:.3f}: fd mismatch {err:.2e}"


def test_criterion_7_invariant_suite():
    rng = np.random.default_rng(707)
    # unitarity of random compositions
    for _ in range(25):
        pulses = [
            su2.resonant_pulse(a, p)
            for a, p in zip(rng.uniform(0, 3 * PI, 6), rng.uniform(0, 2 * PI, 6))
        ]
        U = su2.compose(pulses)
        assert np.max(np.abs(U @ U.conj().T - np.eye(2))) < 1e-12
    # anagram reality of U11
    for _ in range(25):
        n = int(rng.integers(1, 8))
        spec = SequenceSpec(pulse_count=2 * n + 1, nominal_area=PI, target_area=PI)
        U = su2.sequence_propagator(spec, rng.uniform(0, 2 * PI, n), float(rng.uniform(0, 2 * PI)))
        assert abs(U[0, 0].imag) < 1e-10
    # mirror closure and determinism of solve
    spec = SequenceSpec(pulse_count=5, nominal_area=PI, target_area=PI, n1=2)
    opts = SolveOptions(max_starts=50, rng_seed=77)
    first = solve(spec, opts)
    second = solve(spec, opts)
    assert len(first) == len(second)
    for a, b in zip(first, second):
        assert np.array_equal(a.phases, b.phases)
    for sol in first:
        mirrored = (-sol.phases) % (2 * PI)
        assert np.linalg.norm(residuals(spec, mirrored)) <= 1e-8


@pytest.mark.parametrize(
    "name,starts",
    [("N5(pi)", 200), ("N7(pi/2)", 200), ("P7(pi)", 200)],
)
def test_criterion_8_solver_discovery(name, starts):
    # the contract allows up to 500 starts; 200 already recover the table
    # entries (the 200-start sample stream is a prefix of the 500-start one)
    entry = find_entry(name)
    table = entry.phases_rad
    solutions = solve(entry.spec, SolveOptions(max_starts=starts, rng_seed=0))
    best = min(
        min(drift_to(s.phases, table), drift_to((-s.phases) % (2 * PI), table))
        for s in solutions
    )
    assert best <= 2e-3 * PI, f"{name}: nearest discovered root at {best / PI:.2e} pi"
