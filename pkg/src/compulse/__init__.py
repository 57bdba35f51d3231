"""Composite-pulse sequence design and analysis for selective qubit addressing.

Subpackages
-----------
su2
    Exact two-level propagator algebra and jet (high-order derivative)
    evaluation in the per-pulse area.
conditions
    Narrowband/passband/phase-stabilization condition systems and their
    residuals/Jacobians in the free phases.
solver
    Damped least-squares refinement and multistart search for phase sets.
profiles
    Excitation and phase profiles, Gaussian-beam crosstalk and robustness
    radii, detuned and noisy-area scans.
catalog
    Published reference sequences with verification against their
    defining conditions and documented profile claims.
cli
    Command-line front end (``compulse``).
"""

from .conditions import SequenceSpec, build_conditions, residuals, jacobian
from .solver import SolveOptions, Solution, refine, solve
from .catalog import load_catalog, verify_entry

__version__ = "0.1.0"

__all__ = [
    "SequenceSpec",
    "build_conditions",
    "residuals",
    "jacobian",
    "SolveOptions",
    "Solution",
    "refine",
    "solve",
    "load_catalog",
    "verify_entry",
    "__version__",
]
