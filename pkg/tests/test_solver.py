"""Refinement and multistart behaviour on published and synthetic systems."""

import numpy as np
import pytest

from compulse.conditions import SequenceSpec, residuals, wrap_angle
from compulse.solver import SolveOptions, canonical_phases, refine, solve

PI = np.pi


def make_spec(N, nominal, target, phase=None, n1=0, n2=0, n3=0):
    return SequenceSpec(
        pulse_count=N,
        nominal_area=nominal,
        target_area=target,
        target_phase=phase,
        n1=n1,
        n2=n2,
        n3=n3,
    )


def drift(a, b):
    return np.max(np.abs(wrap_angle(np.asarray(a) - np.asarray(b))))


def test_options_validation():
    with pytest.raises(ValueError):
        SolveOptions(max_starts=0)
    with pytest.raises(ValueError):
        SolveOptions(residual_tolerance=0.0)
    assert SolveOptions().residual_tolerance == 1e-10


def test_refine_from_published_n5():
    spec = make_spec(5, PI, PI, n1=2)
    seed = np.array([0.839, 1.420]) * PI
    sol = refine(spec, seed)
    assert sol is not None
    assert sol.residual_norm <= 1e-10
    assert drift(sol.phases, seed) <= 2e-3 * PI
    # soundness: independent recomputation
    assert np.linalg.norm(residuals(spec, sol.phases)) <= 1e-10
    assert sol.jacobian_rank == 2


def test_refine_from_published_n9():
    spec = make_spec(9, PI, PI, n1=4)
    seed = np.array([0.426, 1.490, 0.858, 1.300]) * PI
    sol = refine(spec, seed)
    assert sol is not None
    assert sol.residual_norm <= 1e-10
    assert drift(sol.phases, seed) <= 2e-3 * PI


def test_refine_trivial_spec():
    spec = make_spec(1, PI, PI)
    sol = refine(spec, [])
    assert sol is not None
    assert sol.residual_norm == 0.0
    assert sol.phases.size == 0


def test_refine_reports_nonconvergence():
    # flat bottom of order 8 with only two free phases: unsatisfiable
    spec = make_spec(5, PI, PI, n1=4)
    sol = refine(spec, np.array([0.839, 1.420]) * PI)
    assert sol is None


def test_refine_phases_reduced():
    spec = make_spec(5, PI, PI, n1=2)
    sol = refine(spec, np.array([0.839, 1.420]) * PI + 4 * PI)
    assert sol is not None
    assert np.all(sol.phases >= 0) and np.all(sol.phases < 2 * PI)


def test_solve_finds_published_n5():
    spec = make_spec(5, PI, PI, n1=2)
    table = np.array([0.839, 1.420]) * PI
    solutions = solve(spec, SolveOptions(max_starts=200, rng_seed=0))
    assert solutions
    best = min(
        min(drift(s.phases, table), drift((-s.phases) % (2 * PI), table)) for s in solutions
    )
    assert best <= 2e-3 * PI


def test_solve_deterministic_and_sorted():
    spec = make_spec(5, PI, PI, n1=2)
    opts = SolveOptions(max_starts=60, rng_seed=42)
    a = solve(spec, opts)
    b = solve(spec, opts)
    assert len(a) == len(b)
    for x, y in zip(a, b):
        assert np.array_equal(x.phases, y.phases)
        assert x.residual_norm == y.residual_norm
    norms = [s.residual_norm for s in a]
    assert norms == sorted(norms) or all(n <= 1e-10 for n in norms)


def test_solve_threaded_matches_serial():
    spec = make_spec(5, PI, PI, n1=2)
    opts = SolveOptions(max_starts=40, rng_seed=7)
    serial = solve(spec, opts, threads=1)
    threaded = solve(spec, opts, threads=4)
    assert len(serial) == len(threaded)
    for x, y in zip(serial, threaded):
        assert np.array_equal(x.phases, y.phases)


def test_solve_dedup_no_near_duplicates():
    spec = make_spec(5, PI, PI, n1=2)
    solutions = solve(spec, SolveOptions(max_starts=120, rng_seed=3))
    reps = [canonical_phases(s.phases) for s in solutions]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            d = np.abs(np.mod(reps[i] - reps[j] + PI, 2 * PI) - PI)
            assert np.max(d) > 1e-6


def test_solve_mirror_closure():
    spec = make_spec(5, PI, PI, n1=2)
    for sol in solve(spec, SolveOptions(max_starts=40, rng_seed=1)):
        mirrored = (-sol.phases) % (2 * PI)
        assert np.linalg.norm(residuals(spec, mirrored)) <= 1e-8


def test_solve_trivial_spec():
    spec = make_spec(1, PI, PI)
    solutions = solve(spec, SolveOptions(max_starts=5))
    assert len(solutions) == 1
    assert solutions[0].phases.size == 0


def test_canonical_phases_mirror_pair():
    x = np.array([0.3, 5.0])
    assert np.array_equal(canonical_phases(x), canonical_phases(-x))
