"""Certified enclosures of pi and circular functions over rational intervals.

Angles are handled in *turns* (multiples of a full revolution) so that
period reduction is exact rational arithmetic; only the final Taylor
evaluation multiplies by an enclosure of 2*pi.  Series remainders are
bounded by the alternating-series criterion after argument reduction.

`RotScan` iterates the exact rotation by a rational point (p, q) on the
unit circle as a dyadic point plus an error ball.  Rotations are
isometries, so the Euclidean error grows only additively with the number
of steps (naive interval iteration would blow up exponentially).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .qmath import Q, ZERO, ONE, exact_sqrt, is_perfect_square, sqrt_down, sqrt_up
from .interval import Ival, Box

_PI_CACHE: dict[int, Ival] = {}


def _atan_inv_int(m: int, bits: int) -> Ival:
    """Enclosure of atan(1/m) for integer m >= 2, by alternating series."""
    # terms 1/((2k+1) m^(2k+1)) are strictly decreasing, so consecutive
    # partial sums bracket the limit
    acc_lo = acc_hi = Q(0)
    k = 0
    mpow = m
    threshold = Q(1, 1 << (bits + 8))
    while True:
        term = Q(1, (2 * k + 1) * mpow)
        if k % 2 == 0:
            acc_hi = acc_lo + term
        else:
            acc_lo = acc_hi - term
        if term < threshold:
            break
        k += 1
        mpow *= m * m
    if acc_lo > acc_hi:
        acc_lo, acc_hi = acc_hi, acc_lo
    return Ival(acc_lo, acc_hi).round_out(bits + 4)


def pi_ival(bits: int = 128) -> Ival:
    """Rational enclosure of pi with width below 2^-bits (Machin's formula)."""
    if bits not in _PI_CACHE:
        a = _atan_inv_int(5, bits + 8)
        b = _atan_inv_int(239, bits + 8)
        _PI_CACHE[bits] = (a * 16 - b * 4).round_out(bits + 2)
    return _PI_CACHE[bits]


def _cos_series(x: Ival, bits: int) -> Ival:
    """cos on 0 <= x <= 1 (radians), alternating Taylor series."""
    term = Ival.point(1)
    acc = Ival.point(1)
    x2 = (x * x).round_out(bits + 8)
    k = 0
    threshold = Q(1, 1 << (bits + 4))
    while True:
        k += 1
        term = (term * x2 * Q(1, (2 * k - 1) * (2 * k))).round_out(bits + 8)
        if term.hi < threshold:
            # remainder bounded by the first omitted term (terms decreasing)
            acc = acc + Ival(-term.hi, term.hi)
            break
        acc = acc + (term if k % 2 == 0 else -term)
    return acc.round_out(bits + 2).intersect(Ival(Q(-1), Q(1)))


def _sin_series(x: Ival, bits: int) -> Ival:
    """sin on 0 <= x <= 1 (radians), alternating Taylor series."""
    term = x
    acc = x
    x2 = (x * x).round_out(bits + 8)
    k = 0
    threshold = Q(1, 1 << (bits + 4))
    while True:
        k += 1
        term = (term * x2 * Q(1, (2 * k) * (2 * k + 1))).round_out(bits + 8)
        if term.hi < threshold:
            acc = acc + Ival(-term.hi, term.hi)
            break
        acc = acc + (term if k % 2 == 0 else -term)
    return acc.round_out(bits + 2).intersect(Ival(Q(-1), Q(1)))


def _cos2pi_quarter(r: Fraction, bits: int) -> Ival:
    """cos(2 pi r) for 0 <= r <= 1/4."""
    if r <= Q(1, 8):
        return _cos_series(pi_ival(bits + 8) * (2 * r), bits)
    return _sin_series(pi_ival(bits + 8) * (2 * (Q(1, 4) - r)), bits)


def _sin2pi_quarter(r: Fraction, bits: int) -> Ival:
    """sin(2 pi r) for 0 <= r <= 1/4."""
    if r <= Q(1, 8):
        return _sin_series(pi_ival(bits + 8) * (2 * r), bits)
    return _cos_series(pi_ival(bits + 8) * (2 * (Q(1, 4) - r)), bits)


def cos_turn_point(r: Fraction, bits: int = 64) -> Ival:
    """Enclosure of cos(2 pi r) for rational r (r in turns)."""
    r = r - (r.numerator // r.denominator)  # reduce mod 1 into [0, 1)
    if r > Q(1, 2):
        r = 1 - r
    if r <= Q(1, 4):
        return _cos2pi_quarter(r, bits)
    return -_cos2pi_quarter(Q(1, 2) - r, bits)


def sin_turn_point(r: Fraction, bits: int = 64) -> Ival:
    """Enclosure of sin(2 pi r) for rational r (r in turns)."""
    r = r - (r.numerator // r.denominator)
    sign = 1
    if r > Q(1, 2):
        r = 1 - r
        sign = -1
    if r > Q(1, 4):
        r = Q(1, 2) - r
    v = _sin2pi_quarter(r, bits)
    return v if sign == 1 else -v


def _has_point_mod1(lo: Fraction, hi: Fraction, frac: Fraction) -> bool:
    """Is there an x in [lo, hi] with x = frac (mod 1)?"""
    k = (lo - frac).numerator // (lo - frac).denominator  # floor(lo - frac)
    candidate = frac + k
    if candidate < lo:
        candidate += 1
    return candidate <= hi


def cos_turn(t: Ival, bits: int = 64) -> Ival:
    """Enclosure of cos(2 pi x) for x in t (turns)."""
    if t.width >= 1:
        return Ival(Q(-1), Q(1))
    vals = [cos_turn_point(t.lo, bits), cos_turn_point(t.hi, bits)]
    out = Ival.hull(vals)
    if _has_point_mod1(t.lo, t.hi, ZERO):
        out = Ival(out.lo, ONE)
    if _has_point_mod1(t.lo, t.hi, Q(1, 2)):
        out = Ival(Q(-1), out.hi)
    return out


def sin_turn(t: Ival, bits: int = 64) -> Ival:
    """Enclosure of sin(2 pi x) for x in t (turns)."""
    if t.width >= 1:
        return Ival(Q(-1), Q(1))
    vals = [sin_turn_point(t.lo, bits), sin_turn_point(t.hi, bits)]
    out = Ival.hull(vals)
    if _has_point_mod1(t.lo, t.hi, Q(1, 4)):
        out = Ival(out.lo, ONE)
    if _has_point_mod1(t.lo, t.hi, Q(3, 4)):
        out = Ival(Q(-1), out.hi)
    return out


def unit_box(t: Ival | Fraction, bits: int = 64) -> Box:
    """Box enclosing e^(2 pi i x) for x in t (turns)."""
    if isinstance(t, Fraction):
        return Box(cos_turn_point(t, bits), sin_turn_point(t, bits))
    return Box(cos_turn(t, bits), sin_turn(t, bits))


def _atan_nonneg(x: Ival, bits: int) -> Ival:
    """atan on an interval with x.lo >= 0."""
    if x.hi > 1:
        # atan(x) = pi/2 - atan(1/x); split at 1 if needed
        if x.lo < 1:
            lo_part = _atan_nonneg(Ival(x.lo, ONE), bits)
            hi_part = _atan_nonneg(Ival(ONE, x.hi), bits)
            return Ival.hull([lo_part, hi_part])
        half_pi = pi_ival(bits + 4) * Q(1, 2)
        return half_pi - _atan_nonneg(x.inverse(), bits)
    # halve the argument until it is at most 1/4
    doublings = 0
    while x.hi > Q(1, 4):
        s = (1 + (1 + x * x).sqrt(bits + 16)).round_out(bits + 16)
        x = (x / s).round_out(bits + 16)
        doublings += 1
    # alternating series on [0, 1/4]
    term = x
    acc = x
    x2 = (x * x).round_out(bits + 16)
    k = 0
    threshold = Q(1, 1 << (bits + 8))
    while True:
        k += 1
        term = (term * x2 * Q(2 * k - 1, 2 * k + 1)).round_out(bits + 16)
        if term.hi < threshold:
            acc = acc + Ival(-term.hi, term.hi)
            break
        acc = acc + (term if k % 2 == 0 else -term)
    return (acc * (1 << doublings)).round_out(bits + 2)


def atan_ival(x: Ival, bits: int = 64) -> Ival:
    if x.lo >= 0:
        return _atan_nonneg(x, bits)
    if x.hi <= 0:
        return -_atan_nonneg(-x, bits)
    return Ival.hull([-_atan_nonneg(Ival(ZERO, -x.lo), bits),
                      _atan_nonneg(Ival(ZERO, x.hi), bits)])


def angle_from_cos(c: Ival, bits: int = 64, crude: bool = False) -> Ival:
    """Enclosure of arccos restricted to [0, pi]: the angle distance [x].

    With `crude=True` only the square-root bounds
    sqrt(2(1-c)) <= arccos(c) <= pi*sqrt((1-c)/2) are used (cheap; tight
    within a factor pi/2).
    """
    c = c.intersect(Ival(Q(-1), Q(1)))
    pi_hi = pi_ival(bits).hi
    lo = sqrt_down(2 * (1 - c.hi), bits) if c.hi < 1 else ZERO
    hi = min(pi_hi, pi_hi * sqrt_up((1 - c.lo) / 2, bits))
    crude_ival = Ival(lo, hi)
    if crude:
        return crude_ival
    if c.lo > Q(-1, 2):
        one_plus = Ival(1 + c.lo, 1 + c.hi)
        s2 = (1 - c.sq()).intersect(Ival(ZERO, ONE))
        s = s2.sqrt(bits + 8)
        precise = atan_ival((s / one_plus).round_out(bits + 8), bits) * 2
        return precise.intersect(crude_ival)
    if c.hi < Q(1, 2):
        reflected = angle_from_cos(-c, bits)
        return (pi_ival(bits) - reflected).intersect(crude_ival)
    # wide interval straddling both reflections: fall back to the hull
    left = angle_from_cos(Ival(c.lo, Q(0)), bits)
    right = angle_from_cos(Ival(Q(0), c.hi), bits)
    return Ival.hull([left, right]).intersect(crude_ival)


# Rational points on the unit circle that are roots of unity (Niven).
_NIVEN_COS = {Q(1): 0, Q(1, 2): 1, Q(0): 2, Q(-1, 2): 3, Q(-1): 4}
# corresponding angles in turns: 0, 1/6, 1/4, 1/3, 1/2


def rotation_order(p: Fraction, q_sign: int = 1) -> int | None:
    """Order of the rotation e^(2 pi i theta) with cos = p, when finite.

    Returns None when theta is irrational (equivalently p not in Niven's
    list), which is the case for every p + qi with p, q rational nonzero
    on the unit circle.
    """
    table = {Q(1): 1, Q(-1): 2, Q(0): 4, Q(1, 2): 6, Q(-1, 2): 3}
    if p in table:
        n = table[p]
        return n if (q_sign >= 0 or n <= 2) else n  # order ignores direction
    return None


class RotScan:
    """Iterates (cos, sin) of n * theta for e^(i theta) = p + qi exactly on
    the unit circle, as a dyadic point with a certified error ball.

    Per step the rounding adds at most one unit in the last place to the
    Euclidean error; the rotation itself is an isometry and adds nothing.
    """

    def __init__(self, p: Fraction, q: Fraction, bits: int = 128):
        if p * p + q * q != 1:
            raise ValueError("(p, q) must lie exactly on the unit circle")
        den = p.denominator * q.denominator // math.gcd(p.denominator, q.denominator)
        self.pn = int(p * den)
        self.qn = int(q * den)
        self.den = den
        self.bits = bits
        self.scale = 1 << bits
        self.c = self.scale
        self.s = 0
        self.err = 0  # euclidean error in ulps (2^-bits)
        self.n = 0

    def step(self):
        c, s, pn, qn, d = self.c, self.s, self.pn, self.qn, self.den
        tc = pn * c - qn * s
        ts = qn * c + pn * s
        self.c = (2 * tc + d) // (2 * d)
        self.s = (2 * ts + d) // (2 * d)
        self.err += 1
        self.n += 1

    def cos_ival(self) -> Ival:
        e = Q(self.err + 1, self.scale)
        v = Q(self.c, self.scale)
        return Ival(max(v - e, Q(-1)), min(v + e, Q(1)))

    def sin_ival(self) -> Ival:
        e = Q(self.err + 1, self.scale)
        v = Q(self.s, self.scale)
        return Ival(max(v - e, Q(-1)), min(v + e, Q(1)))


class ExactRotScan:
    """Rotation scan for root-of-unity angles (rational p per Niven).

    cos values are exact rationals; sin values are exact or tight
    square-root enclosures.
    """

    def __init__(self, p: Fraction, q_sign: int = 1, bits: int = 128):
        order = rotation_order(p)
        if order is None:
            raise ValueError(f"cos = {p} is not a root-of-unity angle")
        self.order = order
        self.bits = bits
        q2 = 1 - p * p
        cos_vals = []
        sin_vals = []
        # walk k / order turns
        for k in range(order):
            t = Q(k, order)
            c = _exact_cos_turn(t)
            s2 = 1 - c * c
            s_sign = 1 if (t != 0 and t < Q(1, 2)) else (-1 if t > Q(1, 2) else 0)
            if q_sign < 0:
                s_sign = -s_sign
            cos_vals.append(c)
            sin_vals.append((s2, s_sign))
        self.cos_vals = cos_vals
        self.sin_vals = sin_vals
        self.n = 0

    def step(self):
        self.n += 1

    def cos_ival(self) -> Ival:
        return Ival.point(self.cos_vals[self.n % self.order])

    def sin_ival(self) -> Ival:
        s2, sign = self.sin_vals[self.n % self.order]
        if sign == 0:
            return Ival.point(0)
        if is_perfect_square(s2):
            return Ival.point(sign * exact_sqrt(s2))
        mag = Ival(sqrt_down(s2, self.bits), sqrt_up(s2, self.bits))
        return mag if sign > 0 else -mag


def _exact_cos_turn(t: Fraction) -> Fraction:
    """Exact cos(2 pi t); defined for the Niven turns (denominator | 6 or 4)."""
    t = t - (t.numerator // t.denominator)
    table = {Q(0): Q(1), Q(1, 6): Q(1, 2), Q(1, 4): Q(0), Q(1, 3): Q(-1, 2),
             Q(1, 2): Q(-1), Q(2, 3): Q(-1, 2), Q(3, 4): Q(0), Q(5, 6): Q(1, 2)}
    if t in table:
        return table[t]
    raise ValueError(f"no exact rational cos for turn {t}")


def make_rot_scan(p: Fraction, q: Fraction | None, bits: int = 128):
    """Best scanner for the angle with cos = p: exact table when the point
    is a root of unity, ball-error dyadic iteration otherwise (q required).
    """
    if rotation_order(p) is not None:
        return ExactRotScan(p, 1 if (q is None or q >= 0) else -1, bits)
    if q is None:
        raise ValueError("irrational-angle scan needs the exact sine value q")
    return RotScan(p, q, bits)
