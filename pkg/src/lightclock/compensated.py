"""Error-free transformations and double-double phase bookkeeping.

Accrued phases reach 1e9-1e17 rad, so ``exp(i theta)`` must be formed from
a phase reduced modulo 2 pi with far better than double precision.
"""

from __future__ import annotations

import math

import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1

TWO_PI_HI = 2.0 * math.pi
TWO_PI_LO = 2.4492935982947064e-16
PI_HI = math.pi
PI_LO = 1.2246467991473532e-16


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    e = e + (al + bl)
    return quick_two_sum(s, e)


def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return quick_two_sum(p, e)


def dd_mul_d(ah, al, b):
    p, e = two_prod(ah, b)
    e = e + al * b
    return quick_two_sum(p, e)


def dd_div_d(ah, al, b):
    q1 = ah / b
    p, e = two_prod(q1, b)
    r = ((ah - p) - e + al) / b
    return quick_two_sum(q1, r)


def reduce_two_pi(hi, lo):
    """Split a double-double phase into (whole turns, residual in [0, 2 pi))."""
    hi = np.asarray(hi, dtype=float)
    lo = np.asarray(lo, dtype=float)
    k = np.floor(hi / TWO_PI_HI)
    # hi - k*2pi carried out in double-double
    ph, pl = two_prod(k, TWO_PI_HI)
    pl = pl + k * TWO_PI_LO
    rh, rl = dd_add(hi, lo, -ph, -pl)
    r = rh + rl
    # the floor estimate can be off by one turn
    adj = np.floor(r / TWO_PI_HI)
    k = k + adj
    r = np.where(adj != 0, (rh - adj * TWO_PI_HI) + (rl - adj * TWO_PI_LO), r)
    return k, r


def neumaier_sum(values) -> float:
    """Compensated sum of a 1-D sequence."""
    s = 0.0
    c = 0.0
    for v in np.asarray(values, dtype=float).ravel():
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c
