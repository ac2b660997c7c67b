"""Order-6 construction lab: cone geometry, the tangent ball/point gadget,
certified closed-form ball minima, and binary-search estimation of the
Diophantine type of the rotation angle.

The rotation point is p + qi on the unit circle.  Everything rational
stays rational: the gadget parameter ell is stored as the rational q'
with ell = q'/pi, so the recurring quantity 2*pi*ell equals 2 q' exactly.
The square-root term in the ball minimum is handled through the algebraic
bounds 1/(2n+1) < sqrt(n^2+1) - n < 1/(2n), so long scans need no
square-root extraction at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .qmath import (Q, ZERO, ONE, sqrt_down, sqrt_up, is_perfect_square,
                    exact_sqrt, floor_frac, ceil_frac)
from .interval import Ival
from .trig import pi_ival, make_rot_scan, rotation_order, angle_from_cos
from .poly import pmul
from .lrs import Lrr, InitialConfig
from .algebraic import NumberField, FieldElement

COEFF_AXES = ("z_dom", "x_dom", "y_dom", "z_res", "x_res", "y_res")


@dataclass(frozen=True)
class CoefficientBasisPoint:
    z_dom: Fraction
    x_dom: Fraction
    y_dom: Fraction
    z_res: Fraction
    x_res: Fraction
    y_res: Fraction

    def as_tuple(self):
        return (self.z_dom, self.x_dom, self.y_dom,
                self.z_res, self.x_res, self.y_res)


def _check_circle(p: Fraction, q: Fraction):
    if p * p + q * q != 1:
        raise ValueError("(p, q) must lie exactly on the unit circle")


def build_hardness_lrr(p, q=None) -> Lrr:
    """Order-6 relation with characteristic polynomial
    (x-1)^2 (x^2 - 2px + 1)^2, roots 1 and e^{+-i 2 pi theta} (cos = p),
    each of multiplicity 2 and modulus 1."""
    p = Q(p)
    if q is not None:
        _check_circle(p, Q(q))
    if not (-1 < p < 1):
        raise ValueError("p must satisfy -1 < p < 1 (three distinct roots)")
    char = pmul((ONE, Q(-2), ONE), pmul((ONE, -2 * p, ONE), (ONE, -2 * p, ONE)))
    return Lrr(tuple(-c for c in char[:6]))


def _rotation_powers(p: Fraction, q: Fraction, count: int):
    """Exact (cos, sin) of n*theta for n < count; q rational."""
    out = [(ONE, ZERO)]
    c, s = ONE, ZERO
    for _ in range(count - 1):
        c, s = p * c - q * s, q * c + p * s
        out.append((c, s))
    return out


def _mat_inv_rat(m):
    """Exact inverse of a square Fraction matrix by Gaussian elimination."""
    n = len(m)
    a = [list(row) + [ONE if i == j else ZERO for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]


def basis_change(p, q):
    """(C, C_inv) with C @ c = (z_dom, x_dom, y_dom, z_res, x_res, y_res).

    Sign convention: u_n = z n - x n cos(2 pi n theta) - y n sin(..)
    + z' - x' cos(..) - y' sin(..).  Exact for rational q."""
    p, q = Q(p), Q(q)
    _check_circle(p, q)
    if q == 0:
        raise ValueError("degenerate rotation: q must be nonzero")
    powers = _rotation_powers(p, q, 6)
    c_inv = []
    for j in range(6):
        cos_j, sin_j = powers[j]
        c_inv.append([Q(j), -j * cos_j, -j * sin_j, ONE, -cos_j, -sin_j])
    c_mat = _mat_inv_rat(c_inv)
    return c_mat, c_inv


def config_from_coeffs(p, q, pt: CoefficientBasisPoint) -> InitialConfig:
    _, c_inv = basis_change(p, q)
    vec = pt.as_tuple()
    return InitialConfig(tuple(sum((row[i] * vec[i] for i in range(6)), ZERO)
                               for row in c_inv))


def coeffs_from_config(p, q, c: InitialConfig) -> CoefficientBasisPoint:
    c_mat, _ = basis_change(p, q)
    vals = tuple(sum((row[i] * c.entries[i] for i in range(6)), ZERO)
                 for row in c_mat)
    return CoefficientBasisPoint(*vals)


def cone_contains(z, x, y) -> tuple[bool, Ival]:
    """Exact membership in {z >= sqrt(x^2 + y^2)} plus a margin enclosure."""
    z, x, y = Q(z), Q(x), Q(y)
    rad_sq = x * x + y * y
    inside = z >= 0 and z * z >= rad_sq
    if is_perfect_square(rad_sq):
        margin = Ival.point(z - exact_sqrt(rad_sq))
    else:
        margin = Ival(z - sqrt_up(rad_sq, 128), z - sqrt_down(rad_sq, 128))
    return inside, margin


@dataclass
class RotationReport:
    is_rotation: bool
    orthogonal: bool
    determinant_one: bool
    order: Optional[int]            # finite order of the composition, if any


def rotation_check(p, q) -> RotationReport:
    """Exact verification that the dominant-block action is the rotation
    (z, x, y) -> (z, x p + y q, y p - x q) around the z axis."""
    p = Q(p)
    if q is not None:
        q = Q(q)
    if q is not None and p * p + q * q == 1:
        # rational case: plain Fraction matrix
        rows = [[ONE, ZERO, ZERO], [ZERO, p, q], [ZERO, -q, p]]
        mt_m = [[sum(rows[k][i] * rows[k][j] for k in range(3))
                 for j in range(3)] for i in range(3)]
        orth = mt_m == [[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]]
        det = p * p + q * q
        order = rotation_order(p)
        return RotationReport(is_rotation=orth and det == 1, orthogonal=orth,
                              determinant_one=det == 1, order=order)
    # algebraic sine: q^2 = 1 - p^2, work in Q[x]/(x^2 - (1 - p^2))
    q2 = 1 - p * p
    if q2 < 0:
        raise ValueError("p out of range")
    if is_perfect_square(q2):
        return rotation_check(p, exact_sqrt(q2))
    from .poly import int_normalize
    mp = int_normalize((-q2, ZERO, ONE))
    # pick the positive real root
    f0, f1 = NumberField.get(mp, 0), NumberField.get(mp, 1)
    fld = f1 if f1.root_box(64).re.lo > 0 else f0
    qe = FieldElement.generator(fld)
    pe = FieldElement.const(fld, p)
    one = FieldElement.const(fld, ONE)
    zero = FieldElement.const(fld, ZERO)
    rows = [[one, zero, zero], [zero, pe, qe], [zero, -qe, pe]]
    mt_m = [[sum((rows[k][i] * rows[k][j] for k in range(3)),
                 zero) for j in range(3)] for i in range(3)]
    ident = [[one, zero, zero], [zero, one, zero], [zero, zero, one]]
    orth = mt_m == ident
    det = pe * pe + qe * qe
    order = rotation_order(p)
    if order is not None:
        # compose order times exactly and check identity
        acc = ident
        for _ in range(order):
            acc = [[sum((acc[i][k] * rows[k][j] for k in range(3)), zero)
                    for j in range(3)] for i in range(3)]
        if acc != ident:
            order = None
    return RotationReport(is_rotation=orth and det == one, orthogonal=orth,
                          determinant_one=det == one, order=order)


# ---------------------------------------------------------------------------
# gadget parameters (tangent-ball constants, all exact rationals)


@dataclass(frozen=True)
class HardnessParams:
    """Gadget constants.  ell = ell_qprime / pi, so 2*pi*ell = 2*ell_qprime
    is exactly rational; eps compares against n*[2 pi n theta]."""

    p: Optional[Fraction]
    q: Optional[Fraction]
    ell_qprime: Fraction
    eps: Fraction
    psi: Fraction
    alpha0: Fraction
    n1: int
    tau1: Fraction
    n2: int

    @property
    def two_pi_ell(self) -> Fraction:
        return 2 * self.ell_qprime

    def validate(self):
        lam = self.two_pi_ell
        checks = [
            ("psi < 1/3", self.psi < Q(1, 3)),
            ("psi < pi*ell", self.psi < self.ell_qprime),
            ("tau1 = 2pi ell/(2pi ell + eps/3)",
             self.tau1 == lam / (lam + self.eps / 3)),
            ("psi <= 2 - 2 tau1", self.psi <= 2 - 2 * self.tau1),
            ("psi < 2 tau1 pi ell eps / 3",
             self.psi < self.tau1 * lam * self.eps / 3),
            ("psi <= 1", self.psi <= 1),
            ("n2 > n1", self.n2 > self.n1),
            ("(36 pi / n2)^3 n2 <= 4 eps",
             (36 * pi_ival(96).hi) ** 3 / Q(self.n2) ** 2 <= 4 * self.eps),
        ]
        for name, ok in checks:
            if not ok:
                raise ValueError(f"gadget constraint violated: {name}")


def compute_params(ell, eps, p=None, q=None) -> HardnessParams:
    """Derive (alpha0, n1, tau1, psi, n2) from ell = ell/pi (given as the
    rational q') and eps, per the tangent-ball construction.

    alpha0 instantiates the Taylor bookkeeping: with f(a) = 2(1-cos a)-a^2
    one has, for 0 < a <= alpha0 <= 1, both 2(1-cos a) <= a^2 and
    sin a >= a(1 - a^2/6), whence a nonneg gadget term forces
    n a > 2 pi ell (1 - a^2/6) > 2 pi ell - eps once a^2 <= 3 eps/(pi ell).
    """
    qprime = Q(ell)
    eps = Q(eps)
    if qprime <= 0 or eps <= 0:
        raise ValueError("ell and eps must be positive")
    lam = 2 * qprime                       # 2 pi ell, exactly
    alpha0 = min(ONE, sqrt_down(3 * eps / qprime, 64))
    n1 = max(1, floor_frac((lam - eps) / alpha0) + 1) if lam > eps else 1
    tau1 = lam / (lam + eps / 3)
    psi = min(Q(1, 3), qprime, 2 - 2 * tau1, tau1 * lam * eps / 3, ONE) / 2
    pi_hi = pi_ival(96).hi
    n2_bound = sqrt_up((36 * pi_hi) ** 3 / (4 * eps), 32)
    n2 = max(n1 + 1, ceil_frac(n2_bound))
    while (36 * pi_hi) ** 3 / Q(n2) ** 2 > 4 * eps:
        n2 += 1
    params = HardnessParams(p=Q(p) if p is not None else None,
                            q=Q(q) if q is not None else None,
                            ell_qprime=qprime, eps=eps, psi=psi,
                            alpha0=alpha0, n1=n1, tau1=tau1, n2=n2)
    params.validate()
    return params


# ---------------------------------------------------------------------------
# tangent ball gadget (exact coefficient-space checks)


@dataclass
class GadgetReport:
    center: tuple[Fraction, ...]
    point_d: tuple[Fraction, ...]
    radius_sq: Fraction             # = 2 psi^2, exact
    d_on_sphere: bool
    d_margin_zero: bool
    samples_checked: int
    all_samples_interior: bool
    first_bad_sample: Optional[tuple[Fraction, ...]] = None


def ball_gadget(params: HardnessParams, samples: int = 1000,
                seed: int = 0) -> GadgetReport:
    """Exact verification of the tangent-ball construction: the ball of
    radius sqrt(2) psi centred at (2+psi, 2-psi, 0, 0, 0, 2 pi ell) touches
    the dominant cone boundary exactly at d = (2, 2, 0, 0, 0, 2 pi ell);
    sampled ball points other than d are strictly interior."""
    params.validate()
    psi, lam = params.psi, params.two_pi_ell
    center = (2 + psi, 2 - psi, ZERO, ZERO, ZERO, lam)
    d = (Q(2), Q(2), ZERO, ZERO, ZERO, lam)
    dist_sq = sum((a - b) ** 2 for a, b in zip(center, d))
    on_sphere = dist_sq == 2 * psi * psi
    inside_d, margin_d = cone_contains(d[0], d[1], d[2])
    margin_zero = inside_d and margin_d.lo == margin_d.hi == 0

    import random
    rng = random.Random(seed)
    all_ok = True
    bad = None
    r_sq = 2 * psi * psi
    checked = 0
    D = 1 << 10
    while checked < samples:
        v = [rng.randint(-D, D) for _ in range(6)]
        nv2 = sum(x * x for x in v)
        if nv2 == 0 or nv2 > D * D:
            continue
        # scale so the point is strictly inside radius sqrt(2) psi
        lam_scale = sqrt_down(r_sq * Q(2**20 - 1, 2**20) / nv2, 48)
        pt = tuple(cj + lam_scale * vj for cj, vj in zip(center, v))
        assert sum((a - b) ** 2 for a, b in zip(pt, center)) <= r_sq
        checked += 1
        z, x, y = pt[0], pt[1], pt[2]
        strict = (x < z) and (x * x + y * y < z * z)
        if not strict:
            all_ok = False
            bad = pt
            break
    return GadgetReport(center=center, point_d=d, radius_sq=dist_sq,
                        d_on_sphere=on_sphere, d_margin_zero=margin_zero,
                        samples_checked=checked, all_samples_interior=all_ok,
                        first_bad_sample=bad)


# ---------------------------------------------------------------------------
# the closed-form ball minimum and long certified scans


def min_ball_term(n: int, params: HardnessParams, bits: int = 160) -> Ival:
    """Enclosure of the exact ball minimum at step n:
    n (2-psi)(1 - cos(2 pi n theta)) - 2 pi ell |sin(2 pi n theta)|
    - 2 psi (sqrt(n^2+1) - n)."""
    if n < 1:
        raise ValueError("n >= 1 required")
    p, q = params.p, params.q
    if p is None:
        raise ValueError("params carry no rotation point")
    psi, lam = params.psi, params.two_pi_ell
    if q is not None and rotation_order(p) is None and n <= 4000:
        # exact rational rotation powers
        c, s = ONE, ZERO
        for _ in range(n):
            c, s = p * c - q * s, q * c + p * s
        cos_iv, sin_iv = Ival.point(c), Ival.point(abs(s))
    else:
        sc = make_rot_scan(p, q, bits)
        for _ in range(n):
            sc.step()
        cos_iv = sc.cos_ival()
        sin_iv = sc.sin_ival().abs()
    tail = Ival(Q(2 * psi, 2 * n + 1), Q(2 * psi, 2 * n))  # 2 psi (sqrt(n^2+1)-n)
    return (Ival.point(n * (2 - psi)) * (1 - cos_iv)
            - Ival.point(lam) * sin_iv - tail)


def scan_ball_terms(params: HardnessParams, n_from: int, n_to: int,
                    bits: int = 160):
    """Certified signs of min_ball_term over (n_from, n_to]: returns
    ('clean',) when every term is certified >= 0, else
    ('violation', n, enclosure) at the first certified-negative term.
    Ambiguous steps are resolved exactly via rational rotation powers.

    The hot loop runs on scaled integers: with cos/sin tracked as a dyadic
    point + error ball, the inequality n(2-psi)(1-cos) - 2pi ell |sin|
    - 2 psi (sqrt(n^2+1)-n) >= 0 is decided after clearing denominators
    (the root term is bracketed by 1/(2n+1) < sqrt(n^2+1)-n < 1/(2n))."""
    p, q = params.p, params.q
    psi, lam = params.psi, params.two_pi_ell
    if rotation_order(p) is not None or q is None:
        return _scan_ball_terms_slow(params, n_from, n_to, bits)
    # integer state (dyadic rotation with error ball)
    scale = 1 << bits
    den = p.denominator * q.denominator // math.gcd(p.denominator,
                                                    q.denominator)
    pn, qn = int(p * den), int(q * den)
    C, S, E = scale, 0, 0
    a = 2 - psi                      # Fractions
    L = math.lcm(a.denominator, lam.denominator, psi.denominator)
    aL, lamL, psiL = int(a * L), int(lam * L), int(psi * L)
    for _ in range(n_from):
        C, S = (2 * (pn * C - qn * S) + den) // (2 * den), \
               (2 * (qn * C + pn * S) + den) // (2 * den)
        E += 1
    ambiguous = []
    for n in range(n_from + 1, n_to + 1):
        C, S = (2 * (pn * C - qn * S) + den) // (2 * den), \
               (2 * (qn * C + pn * S) + den) // (2 * den)
        E += 1
        Sa = abs(S)
        # term_lo * (2 n^2 scale L) >= T_lo with the worst-case rounding
        T_lo = (2 * n * n * aL * (scale - C - E - 1)
                - 2 * n * lamL * (Sa + E + 1) - 2 * psiL * scale)
        if T_lo >= 0:
            continue
        T_hi = (2 * n * n * aL * (scale - C + E + 1)
                - 2 * n * lamL * max(Sa - E - 1, 0)
                - 4 * n * psiL * scale // (2 * n + 1))
        if T_hi < 0:
            f = 2 * n * scale * L
            lo, hi = Q(T_lo, f), Q(T_hi, f)
            return ("violation", n, Ival(min(lo, hi), max(lo, hi)))
        ambiguous.append(n)
    for n in ambiguous:
        iv = _exact_ball_term(n, params)
        if iv.hi < 0:
            return ("violation", n, iv)
        if iv.lo < 0:
            raise RuntimeError(f"ball term sign unresolved at n={n}")
    return ("clean",)


def _scan_ball_terms_slow(params: HardnessParams, n_from: int, n_to: int,
                          bits: int):
    psi, lam = params.psi, params.two_pi_ell
    sc = make_rot_scan(params.p, params.q, bits)
    for _ in range(n_from):
        sc.step()
    ambiguous = []
    for n in range(n_from + 1, n_to + 1):
        sc.step()
        cos_iv = sc.cos_ival()
        sin_iv = sc.sin_ival().abs()
        lo = (n * (2 - psi) * (1 - cos_iv.hi) - lam * sin_iv.hi
              - Q(2 * psi, 2 * n))
        if lo >= 0:
            continue
        hi = (n * (2 - psi) * (1 - cos_iv.lo) - lam * sin_iv.lo
              - Q(2 * psi, 2 * n + 1))
        if hi < 0:
            return ("violation", n, Ival(lo, hi))
        ambiguous.append(n)
    for n in ambiguous:
        iv = _exact_ball_term(n, params)
        if iv.hi < 0:
            return ("violation", n, iv)
        if iv.lo < 0:
            raise RuntimeError(f"ball term sign unresolved at n={n}")
    return ("clean",)


def _exact_ball_term(n: int, params: HardnessParams, bits: int = 512) -> Ival:
    """High-precision resolution of one ball term.  The value can only be
    zero if sqrt(n^2+1) were rational, which it never is for n >= 1, so a
    finite precision always decides the sign."""
    p, q = params.p, params.q
    psi, lam = params.psi, params.two_pi_ell
    if rotation_order(p) is None and q is not None:
        zc, zs = ONE, ZERO
        base_c, base_s = p, q
        m = n
        # binary powering of the exact rotation
        while m:
            if m & 1:
                zc, zs = zc * base_c - zs * base_s, zc * base_s + zs * base_c
            m >>= 1
            if m:
                base_c, base_s = (base_c * base_c - base_s * base_s,
                                  2 * base_c * base_s)
        cos_iv, sin_iv = Ival.point(zc), Ival.point(abs(zs))
    else:
        sc = make_rot_scan(p, q, bits)
        for _ in range(n):
            sc.step()
        cos_iv, sin_iv = sc.cos_ival(), sc.sin_ival().abs()
    root = Ival.point(Q(n * n + 1)).sqrt(bits)
    tail = (root - n) * (2 * psi)
    return (Ival.point(n * (2 - psi)) * (1 - cos_iv)
            - Ival.point(lam) * sin_iv - tail)


# ---------------------------------------------------------------------------
# Diophantine-type estimation


def lagrange_prefix(p, q, N: int, precision: Fraction = Q(1, 10**6),
                    bits: int = 192) -> Ival:
    """Enclosure of (1/2pi) min_{0 < n <= N} n [2 pi n theta].

    One certified scan proposes candidates via the square-root bounds
    sqrt(2(1-c)) <= [x] <= pi sqrt((1-c)/2); candidates are then resolved
    with certified arccos enclosures.  The scan compares the *squares*
    n^2 * 2(1-cos) so the hot loop is integer-only."""
    p = Q(p)
    q = Q(q) if q is not None else None
    if N < 1:
        raise ValueError("N >= 1 required")
    precision = Q(precision)
    pi_iv = pi_ival(bits)
    if rotation_order(p) is not None or q is None:
        return _lagrange_prefix_slow(p, q, N, bits)
    scale = 1 << bits
    den = p.denominator * q.denominator // math.gcd(p.denominator,
                                                    q.denominator)
    pn, qn = int(p * den), int(q * den)
    # pi^2/2 upper bound as an integer ratio (for the crude upper values)
    pi_sq_hi = (pi_iv.hi * pi_iv.hi / 2).limit_denominator(1 << 48)
    if pi_sq_hi < pi_iv.hi * pi_iv.hi / 2:
        pi_sq_hi += Q(1, 1 << 40)
    ka, kb = pi_sq_hi.numerator, pi_sq_hi.denominator
    C, S, E = scale, 0, 0
    upper_sq: Fraction | None = None   # upper bound for (min n [..])^2
    candidates: list[tuple[int, int, int]] = []
    for n in range(1, N + 1):
        C, S = (2 * (pn * C - qn * S) + den) // (2 * den), \
               (2 * (qn * C + pn * S) + den) // (2 * den)
        E += 1
        one_minus_hi = scale - C + E + 1      # scale*(1-cos) upper
        one_minus_lo = max(scale - C - E - 1, 0)
        # crude: 2(1-c) <= alpha^2 <= pi^2 (1-c)/2
        hi_sq = Q(n * n * ka * one_minus_hi, kb * scale)
        lo_sq = Q(2 * n * n * one_minus_lo, scale)
        if upper_sq is None or hi_sq < upper_sq:
            upper_sq = hi_sq
        if lo_sq <= upper_sq:
            candidates.append((n, C, E))
    final = [(n, C_, E_) for n, C_, E_ in candidates
             if Q(2 * n * n * max(scale - C_ - E_ - 1, 0), scale) <= upper_sq]
    best: Ival | None = None
    for n, C_, E_ in final:
        e = Q(E_ + 1, scale)
        v = Q(C_, scale)
        cos_iv = Ival(max(v - e, Q(-1)), min(v + e, Q(1)))
        precise = angle_from_cos(cos_iv, bits) * n
        best = precise if best is None else Ival(min(best.lo, precise.lo),
                                                 min(best.hi, precise.hi))
    out = best / (pi_iv * 2)
    if out.lo < 0:
        out = Ival(ZERO, max(out.hi, ZERO))
    return out


def _lagrange_prefix_slow(p, q, N: int, bits: int) -> Ival:
    pi_iv = pi_ival(bits)
    sc = make_rot_scan(p, q, bits)
    upper = None
    candidates: list[tuple[int, Ival]] = []
    for n in range(1, N + 1):
        sc.step()
        cos_iv = sc.cos_ival()
        if cos_iv.lo == 1 and cos_iv.hi == 1:
            return Ival.point(0)    # exact hit: the angle distance is zero
        alpha_crude = angle_from_cos(cos_iv, 64, crude=True)
        lo_val = alpha_crude.lo * n
        hi_val = alpha_crude.hi * n
        if upper is None or hi_val < upper:
            upper = hi_val
        if lo_val <= upper:
            candidates.append((n, cos_iv))
    final = [(n, civ) for n, civ in candidates
             if angle_from_cos(civ, 64, crude=True).lo * n <= upper]
    best: Ival | None = None
    for n, civ in final:
        precise = angle_from_cos(civ, bits) * n
        best = precise if best is None else Ival(min(best.lo, precise.lo),
                                                 min(best.hi, precise.hi))
    out = best / (pi_iv * 2)
    if out.lo < 0:
        out = Ival(ZERO, max(out.hi, ZERO))
    return out


@dataclass
class LEstimate:
    interval: Ival
    horizon: int
    probes: int
    horizon_exhausted: bool
    note: str = ("upper-bounds the true Diophantine type: the scan covers "
                 "only indices up to the horizon")


def approximate_L(p, q, eps, horizon_cap: int = 10**6) -> LEstimate:
    """Binary search bracketing L_{<= horizon}(theta) within width 2*eps.

    Each probe ell (handled as the rational q' = pi*ell) is resolved by the
    tangent-ball machinery: a clean certified-nonnegative tail of ball
    minima forces n [2 pi n theta] > 2 pi ell - eps_a beyond the cutoff
    (and the prefix is scanned directly); a certified-negative ball term
    witnesses n [2 pi n theta] < 2 pi ell + eps_a."""
    p, eps = Q(p), Q(eps)
    q = Q(q) if q is not None else None
    if eps <= 0:
        raise ValueError("eps must be positive")
    pi_iv = pi_ival(96)
    # Lagrange-type values live in [0, 1/sqrt(5)]
    lo = ZERO
    hi = sqrt_up(Q(1, 5), 48)
    eps_a = pi_iv.lo * eps / 2      # angle-scale slack: eps_a/(2 pi) <= eps/4
    probes = 0
    exhausted = False
    # aim for half the permitted width so the midpoint sits comfortably
    # within eps of anything the interval contains
    while hi - lo > eps and probes < 60:
        probes += 1
        before = (lo, hi)
        mid = (lo + hi) / 2
        qprime = _round_to(pi_iv.hi * mid, 1 << 24)
        if qprime <= 0:
            qprime = Q(1, 1 << 24)
        params = compute_params(qprime, eps_a, p, q)
        if params.n2 >= horizon_cap:
            exhausted = True
            break
        prefix = lagrange_prefix(p, q, params.n2, precision=eps / 4)
        hi = min(hi, max(prefix.hi, ZERO))
        tail = scan_ball_terms(params, params.n2, horizon_cap)
        if tail[0] == "clean":
            # min over the tail of n[2 pi n theta] > 2 q' - eps_a
            tail_lo = (2 * qprime - eps_a) / (2 * pi_iv.hi)
            lo = max(lo, min(prefix.lo, max(tail_lo, ZERO)))
            if prefix.hi <= lo + eps:
                break
        else:
            bound = (2 * qprime + eps_a) / (2 * pi_iv.lo)
            hi = min(hi, bound)
        if hi < lo:
            lo, hi = min(lo, hi), max(lo, hi)
        if (lo, hi) == before:
            break  # slack floor reached: more probes cannot tighten
    return LEstimate(interval=Ival(lo, max(hi, lo)), horizon=horizon_cap,
                     probes=probes, horizon_exhausted=exhausted)


def _round_to(x: Fraction, denom: int) -> Fraction:
    return Q(round(x * denom), denom)
