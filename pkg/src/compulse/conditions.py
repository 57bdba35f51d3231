"""Condition systems defining narrowband/passband/phase-stabilized sequences.

A symmetric sequence of N = 2n+1 pulses with free phases phi_2..phi_{n+1}
is designed by zeroing a system of real residuals built from the sequence
propagator U(s) as a function of the common per-pulse area s:

- target amplitude:   U11(s*) - cos(target_area/2) = 0 at the nominal
  per-pulse area s* (present only when it is not identically satisfied
  by parity, see below);
- bottom derivatives: d^k U11/ds^k = 0 at s = 0 for k = 2, 4, ..., 2*n1
  (flat excitation bottom -- narrowband behaviour);
- top derivatives:    d^k U11/ds^k = 0 at s* for k = 1..n2 (flat plateau
  -- passband behaviour);
- target phase:       arg U21(s*) = target_phase;
- phase derivatives:  arg(d^k U21/ds^k) = 0 (mod pi) at s* for k = 1..n3
  (phase stabilization).

At target_area = pi with nominal_area = pi the sequence propagator obeys
U(pi - e) = -sigma_z U(pi + e) sigma_z, which makes U11 odd and U21 even
in e.  Consequently the target-amplitude equation, the even-k top
derivatives and the odd-k phase derivatives hold identically and are
excluded from the system.

Derivative residuals are normalized: the k-th derivative is taken with
respect to u = N*s/2 (half the total nominal sequence area), i.e. the
raw s-derivative is scaled by (2/N)^k.  In this variable the equal-phase
reference sequence U11 = cos(u) has unit-magnitude derivatives at every
order, so residuals of all orders (up to 20 here) share a common scale
and a single norm over the residual vector is meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import su2

__all__ = [
    "SequenceSpec",
    "Condition",
    "ConditionSet",
    "build_conditions",
    "residuals",
    "jacobian",
    "wrap_angle",
    "PHASE_VARIANTS",
]

# The phase-stabilization condition admits two readings; "arg-derivative" (the
# k-th area-derivative of U21 must be real) reproduces the published
# phase-stabilized sequences and is the default everywhere.
PHASE_VARIANTS = ("arg-derivative", "phase-derivative")

TARGET_AMPLITUDE = "target_amplitude"
BOTTOM_DERIVATIVE = "bottom_derivative"
TOP_DERIVATIVE = "top_derivative"
TARGET_PHASE = "target_phase"
PHASE_DERIVATIVE = "phase_derivative"

_PI_TOL = 1e-12


def wrap_angle(x):
    """Wrap an angle (or array of angles) to (-pi, pi]."""
    return -((np.pi - x) % (2 * np.pi) - np.pi)


@dataclass(frozen=True)
class SequenceSpec:
    """Design problem for one symmetric composite sequence.

    Parameters
    ----------
    pulse_count : int
        N = 2n+1, odd.
    nominal_area : float
        Per-pulse area A at the nominal operating point, radians.
    target_area : float
        Effective rotation angle the sequence produces there, radians.
    target_phase : float or None
        Phase of the rotation, arg U21 at the operating point; None for
        sequences with no phase requirement.
    n1, n2, n3 : int
        Flat-bottom, flat-top and phase-stabilization orders.
    """

    pulse_count: int
    nominal_area: float
    target_area: float
    target_phase: float | None = None
    n1: int = 0
    n2: int = 0
    n3: int = 0

    def __post_init__(self):
        if self.pulse_count < 1 or self.pulse_count % 2 == 0:
            raise ValueError("pulse_count must be odd and >= 1")
        if min(self.n1, self.n2, self.n3) < 0:
            raise ValueError("condition orders must be non-negative")
        if self.n3 > 0 and self.target_phase is None:
            raise ValueError("phase stabilization (n3 > 0) requires a target_phase")

    @property
    def n(self) -> int:
        """Number of free phases."""
        return (self.pulse_count - 1) // 2

    @property
    def kind(self) -> str:
        base = "PB" if self.n2 > 0 else "NB"
        return f"Phased{base}" if self.target_phase is not None else base

    @property
    def at_pi(self) -> bool:
        """True when the pi-point parity trivializations apply."""
        return (
            abs(self.target_area - np.pi) < _PI_TOL
            and abs(self.nominal_area - np.pi) < _PI_TOL
        )


@dataclass(frozen=True)
class Condition:
    """One tagged residual equation."""

    kind: str
    derivative_order: int
    evaluation_point: float

    def describe(self) -> str:
        if self.kind == TARGET_AMPLITUDE:
            return "U11(s*) = cos(target/2)"
        if self.kind == BOTTOM_DERIVATIVE:
            return f"d^{self.derivative_order} U11 = 0 at s=0"
        if self.kind == TOP_DERIVATIVE:
            return f"d^{self.derivative_order} U11 = 0 at s*"
        if self.kind == TARGET_PHASE:
            return "arg U21(s*) = target_phase"
        return f"arg d^{self.derivative_order} U21 = 0 at s*"


@dataclass(frozen=True)
class ConditionSet:
    """Ordered system of residual equations for one SequenceSpec."""

    spec: SequenceSpec
    equations: tuple[Condition, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.equations)

    def __iter__(self):
        return iter(self.equations)

    @property
    def balance(self) -> str:
        """'square', 'overdetermined' or 'underdetermined' vs free phases."""
        m, n = len(self.equations), self.spec.n
        if m == n:
            return "square"
        return "overdetermined" if m > n else "underdetermined"


def build_conditions(spec: SequenceSpec) -> ConditionSet:
    """Emit the ordered, non-trivial condition list for a spec.

    Order: target amplitude; bottom derivatives (k = 2,4,...,2*n1); top
    derivatives (k = 1..n2, even k dropped at the pi point); target
    phase; phase derivatives (k = 1..n3, odd k dropped at the pi point).
    Identically-satisfied equations are excluded, so the emitted count
    can differ from n; ``ConditionSet.balance`` records the mismatch.
    """
    s_star = spec.nominal_area
    at_pi = spec.at_pi
    eqs: list[Condition] = []
    if not at_pi:
        eqs.append(Condition(TARGET_AMPLITUDE, 0, s_star))
    eqs.extend(
        Condition(BOTTOM_DERIVATIVE, k, 0.0) for k in range(2, 2 * spec.n1 + 1, 2)
    )
    eqs.extend(
        Condition(TOP_DERIVATIVE, k, s_star)
        for k in range(1, spec.n2 + 1)
        if not (at_pi and k % 2 == 0)
    )
    if spec.target_phase is not None:
        eqs.append(Condition(TARGET_PHASE, 0, s_star))
        eqs.extend(
            Condition(PHASE_DERIVATIVE, k, s_star)
            for k in range(1, spec.n3 + 1)
            if not (at_pi and k % 2 == 1)
        )
    return ConditionSet(spec, tuple(eqs))


def _real(z: complex, tol: float = 1e-9) -> float:
    # U11 of a symmetric phase list is real up to rounding; a large
    # imaginary part means a broken phase list rather than physics.
    if abs(z.imag) > tol:
        raise ValueError(f"expected a real value, got imaginary part {z.imag:.3e}")
    return z.real


def _phase_derivatives(w: np.ndarray, kmax: int) -> np.ndarray:
    """Derivatives (orders 1..kmax) of arg w(s) from Taylor coefficients of w.

    Series arithmetic: arg' = Im(w' conj(w)) / |w|^2; the quotient series
    is integrated termwise back to arg.
    """
    num = np.zeros(kmax, dtype=float)  # coefficients of Im(w' conj(w))
    den = np.zeros(kmax, dtype=float)  # coefficients of |w|^2
    for m in range(kmax):
        num[m] = sum(
            ((j + 1) * w[j + 1] * np.conj(w[m - j])).imag for j in range(m + 1)
        )
        den[m] = sum((w[j] * np.conj(w[m - j])).real for j in range(m + 1))
    if abs(den[0]) < 1e-24:
        raise ZeroDivisionError("arg U21 derivative undefined where U21 vanishes")
    # termwise series division q = num/den
    q = np.empty(kmax, dtype=float)
    for m in range(kmax):
        q[m] = (num[m] - sum(q[j] * den[m - j] for j in range(m))) / den[0]
    # arg coefficient k is q[k-1]/k; derivative k is k! times that
    fac = np.cumprod(np.concatenate(([1.0], np.arange(1.0, kmax + 1))))
    return np.array([fac[k] * q[k - 1] / k for k in range(1, kmax + 1)])


def residuals(spec: SequenceSpec, phases, phase_variant: str = "arg-derivative") -> np.ndarray:
    """Evaluate the condition residuals at the given free phases.

    Returns one real number per equation of :func:`build_conditions`, in
    order.  Derivative residuals are (2/N)^k * k! * (jet coefficient k),
    i.e. k-th derivatives in u = N*s/2 (see module docstring); angle
    residuals are wrapped to (-pi, pi].

    ``phase_variant`` selects the phase-stabilization reading:
    "arg-derivative" (default) demands Im d^k U21 = 0 (the k-th
    derivative is real, i.e. its argument vanishes mod pi), which is the
    reading the published phase-stabilized sequences satisfy;
    "phase-derivative" demands d^k (arg U21) / ds^k = 0.
    """
    if phase_variant not in PHASE_VARIANTS:
        raise ValueError(f"unknown phase_variant {phase_variant!r}; options: {PHASE_VARIANTS}")
    conditions = build_conditions(spec)
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (spec.n,):
        raise ValueError(f"expected {spec.n} free phases, got shape {phases.shape}")

    N = spec.pulse_count
    s_star = spec.nominal_area
    k_bottom = max((c.derivative_order for c in conditions.equations
                    if c.kind == BOTTOM_DERIVATIVE), default=-1)
    k_top = max((c.derivative_order for c in conditions.equations
                 if c.kind in (TOP_DERIVATIVE, PHASE_DERIVATIVE)), default=-1)
    jet0 = su2.sequence_jet(spec, phases, 0.0, k_bottom) if k_bottom >= 0 else None
    jet_star = su2.sequence_jet(spec, phases, s_star, k_top) if k_top >= 0 else None
    need_value = any(c.kind in (TARGET_AMPLITUDE, TARGET_PHASE) for c in conditions.equations)
    U_star = su2.sequence_propagator(spec, phases, s_star) if need_value else None

    scale = (2.0 / N) ** np.arange(max(k_bottom, k_top, 0) + 1)
    arg_derivs = None

    out = np.empty(len(conditions), dtype=float)
    for i, c in enumerate(conditions.equations):
        k = c.derivative_order
        if c.kind == TARGET_AMPLITUDE:
            out[i] = _real(U_star[0, 0]) - np.cos(spec.target_area / 2)
        elif c.kind == BOTTOM_DERIVATIVE:
            # discard Im only after normalization: raw high-order
            # derivatives are huge and their rounding noise with them
            out[i] = _real(scale[k] * jet0.derivative(k, 0, 0))
        elif c.kind == TOP_DERIVATIVE:
            out[i] = _real(scale[k] * jet_star.derivative(k, 0, 0))
        elif c.kind == TARGET_PHASE:
            out[i] = wrap_angle(np.angle(U_star[1, 0]) - spec.target_phase)
        else:  # PHASE_DERIVATIVE
            if phase_variant == "arg-derivative":
                out[i] = scale[k] * jet_star.derivative(k, 1, 0).imag
            else:
                if arg_derivs is None:
                    arg_derivs = _phase_derivatives(jet_star.coefficients[:, 1, 0], k_top)
                out[i] = scale[k] * arg_derivs[k - 1]
    return out


def jacobian(spec: SequenceSpec, phases, phase_variant: str = "arg-derivative",
             step: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of :func:`residuals` in the free phases.

    Shape (equations, n).  The angle residuals are smooth near any root,
    so plain differencing of the wrapped values is safe there; the step
    is small enough that a wrap seam (residual near +-pi) would be the
    caller's real problem, not the differencing's.
    """
    phases = np.asarray(phases, dtype=float)
    m = len(build_conditions(spec))
    J = np.empty((m, spec.n), dtype=float)
    for j in range(spec.n):
        e = np.zeros(spec.n)
        e[j] = step
        hi = residuals(spec, phases + e, phase_variant)
        lo = residuals(spec, phases - e, phase_variant)
        J[:, j] = wrap_angle(hi - lo) / (2 * step)
    return J
