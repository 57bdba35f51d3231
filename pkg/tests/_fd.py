"""High-precision finite-difference oracle shared by the test modules.

Propagator derivatives up to fourth order are checked against central
finite differences with step 1e-3.  In double precision the k = 4 stencil
loses ~12 digits to cancellation, which would drown the 1e-5 comparison,
so the stencil is evaluated with mpmath at 30 significant digits and only
the final difference quotient is rounded back to a float.
"""

import mpmath as mp
import numpy as np

mp.mp.dps = 30

# O(h^4) central coefficients, offsets symmetric about zero.
_STENCILS = {
    1: ([-2, -1, 1, 2], [mp.mpf(1) / 12, mp.mpf(-2) / 3, mp.mpf(2) / 3, mp.mpf(-1) / 12]),
    2: (
        [-2, -1, 0, 1, 2],
        [mp.mpf(-1) / 12, mp.mpf(4) / 3, mp.mpf(-5) / 2, mp.mpf(4) / 3, mp.mpf(-1) / 12],
    ),
    3: (
        [-3, -2, -1, 1, 2, 3],
        [
            mp.mpf(1) / 8,
            mp.mpf(-1),
            mp.mpf(13) / 8,
            mp.mpf(-13) / 8,
            mp.mpf(1),
            mp.mpf(-1) / 8,
        ],
    ),
    4: (
        [-3, -2, -1, 0, 1, 2, 3],
        [
            mp.mpf(-1) / 6,
            mp.mpf(2),
            mp.mpf(-13) / 2,
            mp.mpf(28) / 3,
            mp.mpf(-13) / 2,
            mp.mpf(2),
            mp.mpf(-1) / 6,
        ],
    ),
}


def _pulse_mp(area, phase):
    half = mp.mpf(area) / 2
    c, s = mp.cos(half), mp.sin(half)
    ph = mp.mpc(mp.cos(phase), -mp.sin(phase))
    b = -1j * s * ph
    return [[c, b], [-mp.conj(b), c]]


def _matmul_mp(x, y):
    return [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]


def propagator_mp(phase_list, pulse_area):
    u = [[mp.mpf(1), mp.mpf(0)], [mp.mpf(0), mp.mpf(1)]]
    for phase in phase_list:
        u = _matmul_mp(_pulse_mp(pulse_area, phase), u)
    return u


def fd_derivative(phase_list, s0, order, entry, step=1e-3):
    """k-th s-derivative of a propagator entry by central differences."""
    offsets, coeffs = _STENCILS[order]
    h = mp.mpf(step)
    acc = mp.mpc(0)
    for off, c in zip(offsets, coeffs):
        u = propagator_mp(phase_list, mp.mpf(s0) + off * h)
        acc += c * u[entry[0]][entry[1]]
    return complex(acc / h**order)


def fd_derivatives_max_error(spec, phases, s0, jet, step=1e-3):
    """Worst relative jet-vs-FD mismatch over orders 1..4 and both columns.

    The seven stencil samples are shared across all orders, which keeps the
    mpmath cost at seven propagator evaluations per (spec, phases, s0).
    """
    from compulse.su2 import symmetric_phase_list

    full = [float(p) for p in symmetric_phase_list(spec, phases)]
    h = mp.mpf(step)
    samples = {off: propagator_mp(full, mp.mpf(s0) + off * h) for off in range(-3, 4)}
    worst = 0.0
    for order in range(1, 5):
        offsets, coeffs = _STENCILS[order]
        for entry in ((0, 0), (1, 0)):
            acc = mp.mpc(0)
            for off, c in zip(offsets, coeffs):
                acc += c * samples[off][entry[0]][entry[1]]
            approx = complex(acc / h**order)
            exact = jet.derivative(order, *entry)
            scale = max(1.0, abs(exact))
            worst = max(worst, abs(exact - approx) / scale)
    return worst
