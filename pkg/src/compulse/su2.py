"""Two-level (SU(2)) propagator algebra for composite pulse sequences.

A propagator is a 2x2 complex unitary in Cayley-Klein form::

    U = [[a, b], [-conj(b), conj(a)]],   |a|^2 + |b|^2 = 1.

A resonant pulse of area ``A`` driven with field phase ``phi`` has
``a = cos(A/2)`` and ``b = -i sin(A/2) exp(-i phi)``; the ``exp(-i phi)``
sits on the ``b`` entry by convention and every routine in this package
uses that convention uniformly.  Sequences compose right-to-left: the
first pulse applied is the rightmost matrix factor.

High-order derivatives of a sequence propagator with respect to the
common per-pulse area are computed with jet (truncated Taylor)
arithmetic.  Every entry of a single-pulse propagator is a shifted
cosine/sine in ``s/2``, so per-pulse Taylor coefficients are available
in closed form at any order; the coefficients of the full product are
truncated convolutions of the per-pulse ones.  This is exact up to
float rounding, unlike finite differences, which are hopeless at the
orders needed here (up to 20).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "resonant_pulse",
    "detuned_pulse",
    "compose",
    "symmetric_phase_list",
    "sequence_propagator",
    "Jet",
    "pulse_jet",
    "sequence_jet",
    "cayley_klein",
]

_IDENTITY = np.eye(2, dtype=complex)


def resonant_pulse(area: float, phase: float = 0.0) -> np.ndarray:
    """Propagator of a single resonant pulse.

    Parameters
    ----------
    area : float
        Pulse area A (time integral of the Rabi frequency), radians.
        Negative values are accepted (inverse rotations).
    phase : float
        Constant phase of the driving field, radians.

    Returns
    -------
    ndarray
        2x2 complex unitary with a = cos(A/2), b = -i sin(A/2) e^{-i phase}.
    """
    a = np.cos(area / 2)
    b = -1j * np.sin(area / 2) * np.exp(-1j * phase)
    return np.array([[a, b], [-np.conj(b), np.conj(a)]])


def detuned_pulse(area: float, phase: float = 0.0, detuning_area: float = 0.0) -> np.ndarray:
    """Propagator of a rectangular pulse with constant detuning.

    The pulse has constant Rabi frequency Omega over duration T with
    Omega*T = ``area``, and detuning Delta = (Bohr frequency - carrier)
    with Delta*T = ``detuning_area``.  Closed form, with
    theta = sqrt(area^2 + detuning_area^2)::

        a = cos(theta/2) + i (detuning_area/theta) sin(theta/2)
        b = -i (area/theta) sin(theta/2) e^{-i phase}

    which reduces exactly to :func:`resonant_pulse` as detuning_area -> 0
    and to the identity as both areas -> 0.
    """
    if detuning_area == 0.0:
        return resonant_pulse(area, phase)
    theta = np.hypot(area, detuning_area)
    half = theta / 2
    a = np.cos(half) + 1j * (detuning_area / theta) * np.sin(half)
    b = -1j * (area / theta) * np.sin(half) * np.exp(-1j * phase)
    return np.array([[a, b], [-np.conj(b), np.conj(a)]])


def compose(pulses) -> np.ndarray:
    """Multiply propagators of a pulse sequence, first pulse rightmost.

    Parameters
    ----------
    pulses : sequence of ndarray
        Propagators in the order the pulses are applied.

    Returns
    -------
    ndarray
        The total propagator U = U_N ... U_2 U_1.
    """
    pulses = list(pulses)
    if not pulses:
        raise ValueError("cannot compose an empty pulse sequence")
    total = pulses[0]
    for U in pulses[1:]:
        total = U @ total
    return total


def symmetric_phase_list(spec, phases) -> np.ndarray:
    """Expand free phases into the full palindromic phase list.

    The sequences considered here are symmetric under pulse reversal
    (phi_k = phi_{N+1-k}) with phi_1 = phi_N = 0 fixed, leaving
    n = (N-1)/2 free phases phi_2 ... phi_{n+1}.

    Parameters
    ----------
    spec : SequenceSpec
        Only ``spec.pulse_count`` is consulted.
    phases : array_like
        The n free phases, radians.

    Returns
    -------
    ndarray
        Length-N list [0, phi_2, ..., phi_{n+1}, ..., phi_2, 0].
    """
    N = spec.pulse_count
    phases = np.atleast_1d(np.asarray(phases, dtype=float))
    n = (N - 1) // 2
    if phases.shape != (n,):
        raise ValueError(f"expected {n} free phases for N={N}, got {phases.shape}")
    return np.concatenate(([0.0], phases, phases[:-1][::-1], [0.0])) if n else np.zeros(1)


def sequence_propagator(spec, phases, pulse_area: float, detuning_area: float = 0.0) -> np.ndarray:
    """Total propagator of a symmetric sequence at a common per-pulse area."""
    full = symmetric_phase_list(spec, phases)
    return compose([detuned_pulse(pulse_area, p, detuning_area) for p in full])


def cayley_klein(U: np.ndarray) -> tuple[complex, complex]:
    """Extract the (a, b) pair from a propagator in standard layout."""
    return complex(U[0, 0]), complex(U[0, 1])


@dataclass(frozen=True)
class Jet:
    """Truncated Taylor expansion of a 2x2 propagator in the per-pulse area.

    ``coefficients[k]`` is the 2x2 matrix of k-th Taylor coefficients
    around ``expansion_point``; the k-th derivative of an entry is
    ``k! * coefficients[k]``.
    """

    expansion_point: float
    order: int
    coefficients: np.ndarray  # shape (order+1, 2, 2), complex

    def value(self) -> np.ndarray:
        """The plain propagator at the expansion point."""
        return self.coefficients[0].copy()

    def derivative(self, k: int, row: int, col: int) -> complex:
        """k-th derivative of entry (row, col) at the expansion point."""
        if not 0 <= k <= self.order:
            raise ValueError(f"order {k} outside jet range 0..{self.order}")
        return complex(self.coefficients[k, row, col]) * _factorial(k)

    def __matmul__(self, other: "Jet") -> "Jet":
        if self.order != other.order or self.expansion_point != other.expansion_point:
            raise ValueError("jet product requires matching order and expansion point")
        K = self.order
        out = np.zeros_like(self.coefficients)
        for m in range(K + 1):
            for j in range(m + 1):
                out[m] += self.coefficients[j] @ other.coefficients[m - j]
        return Jet(self.expansion_point, K, out)


_FACTORIALS = np.cumprod(np.concatenate(([1.0], np.arange(1.0, 41.0))))


def _factorial(k: int) -> float:
    return _FACTORIALS[k]


def pulse_jet(phase: float, s0: float, order: int) -> Jet:
    """Jet of a single resonant pulse's propagator in its area s at s0.

    Uses d^k/ds^k cos(s/2) = (1/2)^k cos(s/2 + k pi/2) (same shift for
    the sine), so coefficients are exact at any order.
    """
    k = np.arange(order + 1)
    scale = 0.5**k / _FACTORIALS[: order + 1]
    ck_cos = scale * np.cos(s0 / 2 + k * np.pi / 2)
    ck_sin = scale * np.sin(s0 / 2 + k * np.pi / 2)
    coeffs = np.zeros((order + 1, 2, 2), dtype=complex)
    phase_factor = np.exp(-1j * phase)
    coeffs[:, 0, 0] = ck_cos
    coeffs[:, 0, 1] = -1j * ck_sin * phase_factor
    coeffs[:, 1, 0] = -1j * ck_sin * np.conj(phase_factor)
    coeffs[:, 1, 1] = ck_cos
    return Jet(s0, order, coeffs)


def sequence_jet(spec, phases, s0: float, order: int) -> Jet:
    """Jet of the full symmetric-sequence propagator around per-pulse area s0.

    Parameters
    ----------
    spec : SequenceSpec
    phases : array_like
        Free phases (length n).
    s0 : float
        Expansion point in the common per-pulse area s, radians.
    order : int
        Truncation order; derivative conditions need up to 2n.
    """
    full = symmetric_phase_list(spec, phases)
    jet = pulse_jet(full[0], s0, order)
    for p in full[1:]:
        jet = pulse_jet(p, s0, order) @ jet
    return jet
