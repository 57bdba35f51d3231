"""Root finding for condition systems: damped least squares + multistart.

The systems are small (at most 10 unknowns) and smooth, so a hand-rolled
Levenberg-Marquardt iteration with a finite-difference Jacobian is
plenty; no line searches or trust-region machinery.  Overdetermined
systems (they occur: parity can leave more non-trivial equations than
free phases) are handled by the same normal-equations step and accepted
on the residual norm.

Solutions of unphased systems come in mirror pairs (negating all free
phases is a symmetry), so the multistart driver deduplicates up to that
mirror and reports a canonical representative per solution.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .conditions import SequenceSpec, build_conditions, jacobian, residuals

__all__ = ["SolveOptions", "Solution", "refine", "solve", "canonical_phases"]

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class SolveOptions:
    """Numerical knobs; defaults are used throughout the tests and CLI.

    max_starts
        Random seeds tried by :func:`solve`.
    max_iterations
        Levenberg-Marquardt iterations allowed per start.
    residual_tolerance
        Acceptance bound on the residual two-norm.
    dedup_tolerance
        Component-wise circular distance below which two phase vectors
        (after mirror canonicalization) count as the same solution.
    rng_seed
        Seed for the uniform multistart sampler; fixed seed => fixed output.
    """

    max_starts: int = 200
    max_iterations: int = 100
    residual_tolerance: float = 1e-10
    dedup_tolerance: float = 1e-6
    rng_seed: int = 0

    def __post_init__(self):
        if min(self.max_starts, self.max_iterations) < 1:
            raise ValueError("max_starts and max_iterations must be positive")
        if min(self.residual_tolerance, self.dedup_tolerance) <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class Solution:
    """A converged phase set for one condition system."""

    phases: np.ndarray       # refined free phases, reduced to [0, 2pi)
    residual_norm: float     # independently recomputed two-norm
    jacobian_rank: int       # rank of the residual Jacobian at the root
    symmetry_class: np.ndarray  # canonical representative of {phi, -phi}


def canonical_phases(phases: np.ndarray) -> np.ndarray:
    """Canonical representative of the mirror pair {phi, -phi} mod 2pi."""
    a = np.mod(phases, TWO_PI)
    b = np.mod(-phases, TWO_PI)
    return a if tuple(a) <= tuple(b) else b


def _circular_close(x: np.ndarray, y: np.ndarray, tol: float) -> bool:
    d = np.abs(np.mod(x - y + np.pi, TWO_PI) - np.pi)
    return bool(np.all(d < tol))


def _mirror_duplicate(x: np.ndarray, y: np.ndarray, tol: float) -> bool:
    return _circular_close(x, y, tol) or _circular_close(x, np.mod(-y, TWO_PI), tol)


def refine(spec: SequenceSpec, initial, options: SolveOptions | None = None,
           phase_variant: str = "arg-derivative") -> Solution | None:
    """Levenberg-Marquardt refinement from one starting phase vector.

    Returns a :class:`Solution` when the residual two-norm reaches
    ``options.residual_tolerance`` within ``options.max_iterations``,
    else None.  Damping: multiplicative lambda, x10 on a rejected step,
    /10 on an accepted one, starting at 1e-3.
    """
    options = options or SolveOptions()
    x = np.asarray(initial, dtype=float).copy()
    if x.shape != (spec.n,):
        raise ValueError(f"expected {spec.n} free phases, got shape {x.shape}")

    def rfun(p):
        return residuals(spec, p, phase_variant)

    r = rfun(x)
    if r.size == 0:
        return Solution(np.mod(x, TWO_PI), 0.0, 0, canonical_phases(x))
    cost = float(r @ r)
    lam = 1e-3
    for _ in range(options.max_iterations):
        if np.sqrt(cost) <= options.residual_tolerance:
            break
        J = jacobian(spec, x, phase_variant)
        g = J.T @ r
        JtJ = J.T @ J
        damping = np.diag(np.diag(JtJ) + 1e-12)
        accepted = False
        for _ in range(40):
            try:
                step = np.linalg.solve(JtJ + lam * damping, -g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            x_new = x + step
            r_new = rfun(x_new)
            cost_new = float(r_new @ r_new)
            if cost_new < cost:
                x, r, cost = x_new, r_new, cost_new
                lam = max(lam / 10, 1e-15)
                accepted = True
                break
            lam *= 10
        if not accepted:
            break  # stagnated: no downhill step at any damping

    norm = float(np.linalg.norm(rfun(x)))  # independent of loop bookkeeping
    if norm > options.residual_tolerance:
        return None
    rank = 0
    if spec.n and len(build_conditions(spec)):
        sv = np.linalg.svd(jacobian(spec, x, phase_variant), compute_uv=False)
        rank = int(np.sum(sv > 1e-6))
    x = np.mod(x, TWO_PI)
    return Solution(x, norm, rank, canonical_phases(x))


def solve(spec: SequenceSpec, options: SolveOptions | None = None,
          phase_variant: str = "arg-derivative", threads: int = 1) -> list[Solution]:
    """Multistart search over uniform random phase vectors in [0, 2pi)^n.

    Starts are drawn once from ``numpy.random.default_rng(rng_seed)``,
    refined independently (optionally on a thread pool), then sorted by
    (residual norm, lexicographic phases) and deduplicated up to the
    phi -> -phi mirror.  Output is deterministic for a fixed seed
    regardless of thread count.
    """
    options = options or SolveOptions()
    if spec.n == 0:
        return [refine(spec, np.empty(0), options, phase_variant)]
    rng = np.random.default_rng(options.rng_seed)
    starts = rng.uniform(0.0, TWO_PI, size=(options.max_starts, spec.n))

    def task(x0):
        return refine(spec, x0, options, phase_variant)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            found = list(pool.map(task, starts))
    else:
        found = [task(x0) for x0 in starts]

    found = [s for s in found if s is not None]
    found.sort(key=lambda s: (s.residual_norm, tuple(s.phases)))
    unique: list[Solution] = []
    for sol in found:
        if not any(
            _mirror_duplicate(sol.phases, kept.phases, options.dedup_tolerance)
            for kept in unique
        ):
            unique.append(sol)
    return unique
