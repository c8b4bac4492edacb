"""Bessel functions J_m of integer order for complex argument.

Closed-form oracle for constant refraction indices.  Two regimes:

* |x| <= SERIES_SPLIT: Maclaurin series with compensated (Kahan) summation.
* |x| >  SERIES_SPLIT: Miller backward recurrence.  The chain is normalized
  against exp(-i*s*x) = J_0 + 2 sum_k (-i*s)^k J_k with s = sign(Im x), which
  keeps every term of the normalization sum the same magnitude as the values
  themselves (on the imaginary axis it is a sum of positive terms), so no
  accuracy is lost to cancellation for strongly complex arguments.  The
  classical even-order identity J_0 + 2*sum J_2k = 1 cancels down from
  e^{|Im x|} to 1 and is kept here only as a test-side property on arguments
  where it is well conditioned.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

MAX_ORDER = 200
MAX_ABS_X = 500.0
# Split chosen so that the series' cancellation (peak term over |J_m|, worst
# near zeros of J_m) stays below ~1e3, keeping the relative error near 1e-13;
# the backward recurrence is machine-accurate on the other side.
SERIES_SPLIT = 8.0

# Backward-recurrence start order: m + PAD + ceil(|x| + MARGIN*(|x|/2)^(1/3)).
# The seed transient at the top of the chain carries O(1) relative error; its
# terms enter the normalization sum with absolute size ~|J_k(x)|, so the chain
# must start far enough past the turning point k ~ |x| that |J_mstart(x)| is
# negligible against |exp(-i*s*x)|.  In the Airy regime J_{|x|+t*(|x|/2)^(1/3)}
# decays like exp(-(2/3) t^(3/2)); MARGIN = 15 puts the transient near 1e-17.
START_PAD = 12
START_MARGIN = 15.0


class DomainError(ValueError):
    """Argument outside the supported (m, x) envelope."""


@dataclass(frozen=True)
class BesselPair:
    value: complex
    derivative: complex


def bessel_j_pair(m: int, x: complex) -> BesselPair:
    """J_m(x) and J_m'(x) = (J_{m-1}(x) - J_{m+1}(x))/2, with J_{-1} = -J_1."""
    if not isinstance(m, int) or m < 0 or m > MAX_ORDER:
        raise DomainError(f"order m = {m} outside [0, {MAX_ORDER}]")
    x = complex(x)
    if abs(x) > MAX_ABS_X:
        raise DomainError(f"|x| = {abs(x):.3g} outside envelope {MAX_ABS_X}")
    if abs(x) <= SERIES_SPLIT:
        jm = _series_j(m, x)
        jp = _series_j(m + 1, x)
        if m == 0:
            return BesselPair(jm, -jp)
        return BesselPair(jm, (_series_j(m - 1, x) - jp) / 2.0)
    vm1, vm, vp1 = _miller_chain(m, x)
    return BesselPair(vm, (vm1 - vp1) / 2.0)


def _series_j(m: int, x: complex) -> complex:
    """Maclaurin series sum_t (-1)^t (x/2)^(m+2t) / (t! (m+t)!), Kahan-summed."""
    half = x / 2.0
    term = complex(1.0)
    for k in range(1, m + 1):          # (x/2)^m / m! without overflow
        term *= half / k
    q = half * half
    total = term
    comp = complex(0.0)
    peak = abs(term)
    t = 0
    while t < 400:
        t += 1
        term *= -q / (t * (m + t))
        y = term - comp
        s = total + y
        comp = (s - total) - y
        total = s
        mag = abs(term)
        if mag > peak:
            peak = mag
        elif mag <= 1e-18 * peak:
            break
    return total


def _miller_chain(m: int, x: complex) -> tuple[complex, complex, complex]:
    """Normalized (J_{m-1}, J_m, J_{m+1}) by backward recurrence."""
    sgn = 1.0 if x.imag >= 0.0 else -1.0
    ax = abs(x)
    mstart = m + START_PAD + math.ceil(ax + START_MARGIN * (0.5 * ax) ** (1.0 / 3.0))
    two_over_x = 2.0 / x
    vk1 = complex(0.0)        # v_{k+1}
    vk = complex(1.0)         # v_k, unnormalized trial value
    sm1 = complex(0.0)        # saved v_{m-1}
    sm = complex(0.0)
    sp1 = complex(0.0)
    # coefficient (-i*sgn)^k cycles with period 4
    cyc = (complex(1.0), -1j * sgn, complex(-1.0), 1j * sgn)
    acc = cyc[mstart % 4] * 2.0 * vk
    for k in range(mstart, 0, -1):
        vm1 = two_over_x * k * vk - vk1
        if k - 1 == 0:
            acc += vm1
        else:
            acc += cyc[(k - 1) % 4] * 2.0 * vm1
        if k - 1 == m + 1:
            sp1 = vm1
        elif k - 1 == m:
            sm = vm1
        elif k - 1 == m - 1:
            sm1 = vm1
        vk1 = vk
        vk = vm1
        if abs(vk.real) > 1e250 or abs(vk.imag) > 1e250:
            vk1 *= 1e-250
            vk *= 1e-250
            acc *= 1e-250
            sm1 *= 1e-250
            sm *= 1e-250
            sp1 *= 1e-250
    if m == mstart:            # cannot happen (mstart > m), defensive
        sm = complex(1.0)
    norm = cmath.exp(-1j * sgn * x) / acc
    if m == 0:
        sm1 = -sp1             # J_{-1} = -J_1
    return sm1 * norm, sm * norm, sp1 * norm
