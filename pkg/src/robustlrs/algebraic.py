"""Exact algebraic numbers: isolation, refinement, and field arithmetic.

An algebraic number is represented as an element of Q[x]/(M) for an
irreducible integer polynomial M together with an isolating box for the
distinguished root of M.  Certified refinement of the root delegates to
sympy's `CRootOf.eval_rational` (exact interval Newton/bisection under
the hood); everything layered on top -- arithmetic, conjugation, zero
tests, unit-modulus and root-of-unity decisions -- is exact rational
computation here.

Predicates are never decided by approximation alone: enclosures may
*separate* two numbers, while equalities are certified through unique
representations (field elements), separation bounds, or membership in an
explicitly isolated root set.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import sympy

from .qmath import Q, ZERO, ONE
from .interval import Ival, Box
from . import poly as P
from .poly import (pnorm, pdeg, padd, psub, pmul, pmod, pdivmod, pscale,
                   peval, peval_box, pderiv, int_normalize, preverse,
                   separation_bound, cyclotomic_index, PolyRat)

_x = sympy.Symbol("x")

_MAX_BITS = 1 << 16


def _rootof(intpoly: tuple[int, ...], index: int):
    expr = sum(int(c) * _x**i for i, c in enumerate(intpoly))
    return sympy.rootof(expr, _x, index, radicals=False)


def _sympy_expr_box(expr, bits: int) -> Box:
    """Certified box for the affine CRootOf expressions sympy's root
    preprocessing can produce (rational multiples/shifts of a CRootOf)."""
    if expr.is_Rational:
        return Box.point(Q(expr.p, expr.q))
    if isinstance(expr, sympy.polys.rootoftools.ComplexRootOf):
        dx = sympy.Rational(1, 1 << (bits + 1))
        val = expr.eval_rational(dx=dx, dy=dx)
        re_s, im_s = val.as_real_imag()
        eps = Q(1, 1 << (bits + 1))
        return Box(Ival(Q(re_s.p, re_s.q) - eps, Q(re_s.p, re_s.q) + eps),
                   Ival(Q(im_s.p, im_s.q) - eps, Q(im_s.p, im_s.q) + eps))
    if expr.is_Add:
        acc = Box.point(0)
        for arg in expr.args:
            acc = acc + _sympy_expr_box(arg, bits + 4)
        return acc
    if expr.is_Mul:
        acc = Box.point(1)
        for arg in expr.args:
            acc = acc * _sympy_expr_box(arg, bits + 4)
        return acc
    raise TypeError(f"unsupported root expression {expr!r}")


@lru_cache(maxsize=None)
def _field_cache(minpoly: tuple[int, ...], index: int) -> "NumberField":
    return NumberField(minpoly, index)


class NumberField:
    """Q[x]/(minpoly) with a distinguished root (a specific embedding).

    Deep refinement runs a certified complex interval Newton iteration
    (sound over convex boxes; the minimal polynomial is irreducible, so
    the root is simple and p' eventually excludes zero); sympy's isolation
    only provides the initial certified seed box.
    """

    def __init__(self, minpoly: tuple[int, ...], root_index: int):
        self.minpoly = tuple(int(c) for c in minpoly)
        self.root_index = root_index
        self.minpoly_q = pnorm([Q(c, self.minpoly[-1]) for c in self.minpoly])  # monic
        self.degree = len(self.minpoly) - 1
        self._rootof = _rootof(self.minpoly, root_index)
        self._box_bits = 0
        self._box: Box | None = None
        self._deriv = pderiv(self.minpoly_q)
        self._power_sums: list[Fraction] | None = None

    @staticmethod
    def get(minpoly: tuple[int, ...], root_index: int) -> "NumberField":
        return _field_cache(tuple(int(c) for c in minpoly), root_index)

    def __repr__(self):
        return f"NumberField({self.minpoly}, root {self.root_index})"

    @property
    def is_real_root(self) -> bool:
        return bool(self._rootof.is_real)

    def _seed_box(self, bits: int) -> Box:
        box = _sympy_expr_box(self._rootof, bits)
        if self._rootof.is_real:
            box = Box(box.re, Ival.point(0))
        return box

    def root_box(self, bits: int) -> Box:
        if self._box is not None and self._box_bits >= bits:
            return self._box
        if self._box is None:
            self._box = self._seed_box(64)
            self._box_bits = 64
            if bits <= 64:
                return self._box
        box = self._box
        work = bits + 16
        seed_bits = 64
        while box.width > Q(1, 1 << bits):
            nxt = self._newton_step(box, work)
            if nxt is None or nxt.width > box.width * Q(3, 4):
                # derivative box straddles zero or convergence stalled:
                # take a sharper certified seed and retry
                seed_bits = max(seed_bits * 2, bits)
                box = self._seed_box(seed_bits)
                if seed_bits >= bits:
                    break
                continue
            box = nxt
        if self._rootof.is_real:
            box = Box(box.re, Ival.point(0))
        self._box = box
        self._box_bits = bits
        return box

    def _newton_step(self, box: Box, work: int) -> Box | None:
        dval = peval_box(self._deriv, box, work)
        if dval.re.contains(ZERO) and dval.im.contains(ZERO):
            return None
        try:
            dinv = dval.inverse()
        except ZeroDivisionError:
            return None
        mid = Box.point(box.re.mid, box.im.mid)
        pmid = peval_box(self.minpoly_q, mid, work)
        cand = (mid - pmid * dinv).round_out(work)
        re = cand.re.intersect(box.re) if cand.re.overlaps(box.re) else None
        im = cand.im.intersect(box.im) if cand.im.overlaps(box.im) else None
        if re is None or im is None:
            return None
        return Box(re, im)

    def conjugate_field(self) -> "NumberField":
        """The field embedding at the complex-conjugate root."""
        if self.is_real_root:
            return self
        # conjugate root is the unique root of minpoly in the mirrored box
        bits = 32
        while True:
            target = self.root_box(bits).conj()
            hits = []
            for idx in range(self.degree):
                other = _field_cache(self.minpoly, idx)
                if not other.root_box(bits).disjoint(target):
                    hits.append(idx)
            if len(hits) == 1:
                return _field_cache(self.minpoly, hits[0])
            bits *= 2
            if bits > _MAX_BITS:
                raise RuntimeError("conjugate root identification failed")

    def power_sums(self, count: int) -> list[Fraction]:
        """Newton power sums p_k = sum of k-th powers of all roots."""
        d = self.degree
        c = self.minpoly_q  # monic: x^d + c[d-1] x^(d-1) + ... + c[0]
        ps = [Q(d)]
        for k in range(1, count):
            if k <= d:
                acc = -k * c[d - k]
                for i in range(1, k):
                    acc -= c[d - i] * ps[k - i]
            else:
                acc = ZERO
                for i in range(1, d + 1):
                    acc -= c[d - i] * ps[k - i]
            ps.append(acc)
        return ps


class FieldElement:
    """Element of a number field, as a polynomial in the root (deg < d)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs):
        self.field = field
        c = pnorm(coeffs)
        if pdeg(c) >= field.degree:
            c = pmod(c, field.minpoly_q)
        self.coeffs = c

    @staticmethod
    def generator(field: NumberField) -> "FieldElement":
        return FieldElement(field, (ZERO, ONE))

    @staticmethod
    def const(field: NumberField, q: Fraction) -> "FieldElement":
        return FieldElement(field, (Q(q),))

    def __repr__(self):
        return f"FieldElement({self.coeffs} @ {self.field.minpoly})"

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return pdeg(self.coeffs) <= 0

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coeffs[0] if self.coeffs else ZERO

    def _same(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("field mismatch")
            return other
        return FieldElement.const(self.field, Q(other))

    def __add__(self, other):
        other = self._same(other)
        return FieldElement(self.field, padd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._same(other)
        return FieldElement(self.field, pmul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            other = self._same(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.minpoly, self.field.root_index, self.coeffs))

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        # extended euclid: u * self + v * minpoly = 1
        a, b = self.coeffs, self.field.minpoly_q
        u0, u1 = (ONE,), ()
        while b:
            q, r = pdivmod(a, b)
            a, b = b, r
            u0, u1 = u1, psub(u0, pmul(q, u1))
        # a is the gcd (a nonzero constant since minpoly is irreducible)
        return FieldElement(self.field, pscale(u0, 1 / a[0]))

    def __truediv__(self, other):
        return self * self._same(other).inverse()

    def pow(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inverse().pow(-n)
        result = FieldElement.const(self.field, ONE)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def trace(self) -> Fraction:
        ps = self.field.power_sums(self.field.degree)
        return sum((c * ps[i] for i, c in enumerate(self.coeffs)), ZERO)

    def box(self, bits: int = 64) -> Box:
        if self.is_rational():
            return Box.point(self.as_rational())
        return peval_box(self.coeffs, self.field.root_box(bits), bits + 32)

    def box_width(self, width: Fraction) -> Box:
        """Enclosure of guaranteed width at most `width`."""
        if self.is_rational():
            return Box.point(self.as_rational())
        bits = 64
        while True:
            b = self.box(bits)
            if b.width <= width:
                return b
            bits *= 2
            if bits > _MAX_BITS:
                raise RuntimeError("refinement budget exhausted")

    def conj_in_field(self) -> "FieldElement | None":
        """Complex conjugate as an element of the same field, when expressible:
        real embeddings (identity), quadratic fields (root exchange), and
        unit-modulus generators (conjugate = inverse)."""
        f = self.field
        if f.is_real_root:
            return self
        if f.degree == 2:
            # conjugate root = s - root with s the rational root sum
            s = -f.minpoly_q[1]
            return FieldElement(f, P.pcompose(self.coeffs, (s, Q(-1))))
        gen = FieldElement.generator(f)
        if _unit_modulus_primitive(f):
            inv = gen.inverse()
            acc = FieldElement.const(f, ZERO)
            for i, c in enumerate(self.coeffs):
                acc = acc + inv.pow(i) * c
            return acc
        return None

    def conj_embedding(self) -> "FieldElement":
        """Complex conjugate as an element of the conjugate embedding field."""
        return FieldElement(self.field.conjugate_field(), self.coeffs)


@lru_cache(maxsize=None)
def _unit_modulus_minpoly(minpoly: tuple[int, ...], index: int) -> bool:
    field = _field_cache(minpoly, index)
    return _unit_modulus_primitive(field)


def _unit_modulus_primitive(field: NumberField) -> bool:
    """Exact |root| == 1 test for the distinguished root of the field."""
    mp = field.minpoly
    if len(mp) == 2:  # rational root -q0/q1
        val = Q(-mp[0], mp[1])
        return abs(val) == 1
    rev = int_normalize(preverse([Q(c) for c in mp]))
    if rev != mp:
        return False  # 1/root is not a root of minpoly, so |root| != 1
    if field.is_real_root:
        return False  # real root of degree >= 2 cannot be +-1
    # both conj(root) and 1/root are roots of minpoly; |root|=1 iff equal
    def conj_refiner(bits):
        return field.root_box(bits).conj()

    def inv_refiner(bits):
        return field.root_box(bits).inverse()

    return _same_root_of(mp, conj_refiner, inv_refiner)


def _root_fields(intpoly: tuple[int, ...]) -> list[NumberField]:
    """One NumberField per distinct root of the (squarefree part of the)
    integer polynomial, boxes refined to pairwise disjoint."""
    fields = []
    for fac, _ in P.factor_int([Q(c) for c in intpoly]):
        if len(fac) == 1:
            continue
        for idx in range(len(fac) - 1):
            fields.append(_field_cache(fac, idx))
    bits = 32
    while True:
        boxes = [f.root_box(bits) for f in fields]
        ok = all(boxes[i].disjoint(boxes[j])
                 for i in range(len(boxes)) for j in range(i + 1, len(boxes)))
        if ok:
            return fields
        bits *= 2
        if bits > _MAX_BITS:
            raise RuntimeError("could not separate roots")


def _same_root_of(intpoly, refine_a, refine_b) -> bool:
    """Decide equality of two numbers known to both be roots of intpoly.

    `refine_a`/`refine_b` map a bit count to enclosing boxes.  Terminates:
    either the boxes separate, or each eventually fits inside the unique
    isolating box of its root, and equality reduces to identity of that
    root."""
    fields = _root_fields(intpoly)
    bits = 64
    while True:
        ba, bb = refine_a(bits), refine_b(bits)
        if ba.disjoint(bb):
            return False
        root_boxes = [f.root_box(bits) for f in fields]
        ia = [i for i, rb in enumerate(root_boxes) if not rb.disjoint(ba)]
        ib = [i for i, rb in enumerate(root_boxes) if not rb.disjoint(bb)]
        if len(ia) == 1 and len(ib) == 1:
            return ia == ib
        bits *= 2
        if bits > _MAX_BITS:
            raise RuntimeError("root identification budget exhausted")


class AlgebraicNumber:
    """Exact complex algebraic number.

    Value is either a plain rational or a field element; the public view
    (defining polynomial plus isolating disk, unique root within the
    radius) is derived lazily and certified via the separation bound.
    """

    __slots__ = ("_rat", "_elem", "_defpoly")

    def __init__(self, rat: Fraction | None = None, elem: FieldElement | None = None):
        if (rat is None) == (elem is None):
            raise ValueError("exactly one of rat/elem required")
        if elem is not None and elem.is_rational():
            rat, elem = elem.as_rational() if elem.coeffs else ZERO, None
        self._rat = rat
        self._elem = elem
        self._defpoly: tuple[int, ...] | None = None

    @staticmethod
    def from_rational(q) -> "AlgebraicNumber":
        return AlgebraicNumber(rat=Q(q))

    @staticmethod
    def from_root(field: NumberField) -> "AlgebraicNumber":
        return AlgebraicNumber(elem=FieldElement.generator(field))

    @staticmethod
    def from_element(elem: FieldElement) -> "AlgebraicNumber":
        return AlgebraicNumber(elem=elem)

    def __repr__(self):
        if self._rat is not None:
            return f"AlgebraicNumber({self._rat})"
        b = self.box(32)
        return f"AlgebraicNumber(~{float(b.re.mid):.6g}{float(b.im.mid):+.6g}i)"

    @property
    def is_rational(self) -> bool:
        return self._rat is not None

    def as_rational(self) -> Fraction:
        if self._rat is None:
            raise ValueError("not rational")
        return self._rat

    @property
    def elem(self) -> FieldElement:
        if self._elem is None:
            raise ValueError("rational value has no field element")
        return self._elem

    def box(self, bits: int = 64) -> Box:
        if self._rat is not None:
            return Box.point(self._rat)
        return self._elem.box(bits)

    def refine(self, width: Fraction) -> Box:
        """Enclosure of width at most `width` (idempotent under shrinking)."""
        width = Q(width)
        if width <= 0:
            raise ValueError("width must be positive")
        if self._rat is not None:
            return Box.point(self._rat)
        return self._elem.box_width(width)

    @property
    def defining_poly(self) -> PolyRat:
        return PolyRat(tuple(Q(c) for c in self._defining_ints()))

    def _defining_ints(self) -> tuple[int, ...]:
        if self._defpoly is not None:
            return self._defpoly
        if self._rat is not None:
            self._defpoly = int_normalize((-self._rat, ONE))
            return self._defpoly
        e = self._elem
        if e.coeffs == (ZERO, ONE):
            self._defpoly = e.field.minpoly
            return self._defpoly
        # minimal polynomial divides Res_y(M(y), x - A(y))
        y = sympy.Symbol("y")
        My = P.to_sympy([Q(c) for c in e.field.minpoly]).as_expr().subs(_x, y)
        Ay = P.to_sympy(e.coeffs).as_expr().subs(_x, y)
        res = sympy.Poly(sympy.resultant(My, _x - Ay, y), _x)
        cands = [fac for fac, _ in P.factor_int(P.from_sympy(res)) if len(fac) > 1]
        bits = 64
        while True:
            b = self.box(bits)
            alive = []
            for fac in cands:
                v = peval_box([Q(c) for c in fac], b)
                if v.re.contains(ZERO) and v.im.contains(ZERO):
                    alive.append(fac)
            if len(alive) == 1:
                self._defpoly = alive[0]
                return self._defpoly
            bits *= 2
            if bits > _MAX_BITS:
                raise RuntimeError("defining polynomial identification failed")

    def isolating_disk(self) -> tuple[Fraction, Fraction, Fraction]:
        """(center_re, center_im, radius) containing exactly one root of the
        defining polynomial: radius is pushed below half the separation
        bound."""
        sep = separation_bound(self._defining_ints())
        b = self.refine(sep / 8)
        center_re, center_im = b.re.mid, b.im.mid
        # half-diagonal upper bound
        from .qmath import sqrt_up
        radius = sqrt_up((b.re.width / 2) ** 2 + (b.im.width / 2) ** 2, 64)
        return center_re, center_im, max(radius, Q(1, 1 << 200))

    def conjugate(self) -> "AlgebraicNumber":
        if self._rat is not None:
            return self
        inf = self._elem.conj_in_field()
        if inf is not None:
            return AlgebraicNumber.from_element(inf)
        return AlgebraicNumber.from_element(self._elem.conj_embedding())

    def is_unit_modulus(self) -> bool:
        """Exact test |value| == 1."""
        if self._rat is not None:
            return abs(self._rat) == 1
        e = self._elem
        if e.coeffs == (ZERO, ONE):
            return _unit_modulus_minpoly(e.field.minpoly, e.field.root_index)
        cj = e.conj_in_field()
        if cj is not None:
            return (e * cj).coeffs == (ONE,)
        mp = self._defining_ints()
        rev = int_normalize(preverse([Q(c) for c in mp]))
        if rev != mp:
            return False
        return _same_root_of(mp, lambda b: self.box(b).conj(),
                             lambda b: self.box(b).inverse())

    def equals(self, other: "AlgebraicNumber") -> bool:
        if self._rat is not None and other._rat is not None:
            return self._rat == other._rat
        if (self._rat is None) != (other._rat is None):
            rat, alg = (other._rat, self) if other._rat is not None else (self._rat, other)
            e = alg._elem
            return e.is_rational() and e.as_rational() == rat
        a, b = self._elem, other._elem
        if a.field is b.field:
            return a == b
        if a.field.minpoly != b.field.minpoly:
            # different minimal polynomials -> can only agree if both rational
            pa = self._defining_ints()
            pb = other._defining_ints()
            if pa != pb:
                return False
        return _same_root_of(self._defining_ints(), self.box, other.box)


def isolate_roots(p) -> list[tuple[AlgebraicNumber, int]]:
    """Isolate all complex roots of a rational polynomial.

    Returns (root, multiplicity) pairs; multiplicities sum to deg(p) and
    the isolating disks are pairwise disjoint.
    """
    coeffs = p.coefficients if isinstance(p, PolyRat) else pnorm(p)
    if not coeffs:
        raise ValueError("cannot isolate roots of the zero polynomial")
    out = []
    for fac, mult in P.factor_int(coeffs):
        if len(fac) == 1:
            continue
        if len(fac) == 2:
            val = Q(-fac[0], fac[1])
            out.append((AlgebraicNumber.from_rational(val), mult))
            continue
        for idx in range(len(fac) - 1):
            out.append((AlgebraicNumber.from_root(_field_cache(fac, idx)), mult))
    # touch disjointness once so returned disks are isolated
    fields = []
    for a, _ in out:
        if not a.is_rational:
            fields.append(a.elem.field)
    if fields:
        _separate(fields, [a for a, _ in out])
    return out


def _separate(fields, numbers, bits: int = 64):
    while True:
        boxes = [a.box(bits) for a in numbers]
        ok = all(boxes[i].disjoint(boxes[j])
                 for i in range(len(boxes)) for j in range(i + 1, len(boxes)))
        if ok:
            return
        bits *= 2
        if bits > _MAX_BITS:
            raise RuntimeError("separation failed")


def refine(a: AlgebraicNumber, width) -> Box:
    return a.refine(Q(width))


def identify_root_of_unity(a: AlgebraicNumber) -> tuple[int, int] | None:
    """(k, n) with value = e^(2 pi i k/n), gcd(k, n) = 1, when the number is
    a root of unity; None otherwise."""
    if a.is_rational:
        if a.as_rational() == 1:
            return (0, 1)
        if a.as_rational() == -1:
            return (1, 2)
        return None
    mp = a._defining_ints()
    n = cyclotomic_index(mp)
    if n is None:
        return None
    from .trig import unit_box
    cands = [k for k in range(n) if math.gcd(k, n) == 1]
    bits = 64
    while True:
        b = a.box(bits)
        alive = [k for k in cands if not b.disjoint(unit_box(Q(k, n), bits))]
        if len(alive) == 1:
            return (alive[0], n)
        bits *= 2
        if bits > _MAX_BITS:
            raise RuntimeError("root-of-unity identification failed")


def _as_common_field(gammas: list[AlgebraicNumber]):
    """Try to express all non-root-of-unity gammas in one field.

    Returns (field, elems, rou_parts) where elems[i] is the field element
    for gamma i (None when gamma is a root of unity handled separately).
    """
    field = None
    elems: list[FieldElement | None] = []
    rous: list[tuple[int, int] | None] = []
    for g in gammas:
        rou = identify_root_of_unity(g)
        rous.append(rou)
        if rou is not None:
            elems.append(None)
            continue
        e = g.elem
        if field is None:
            field = e.field
        if e.field is field:
            elems.append(e)
            continue
        if e.field.minpoly == field.minpoly:
            # same minimal polynomial: usable when it is the conjugate
            # embedding of a unit-modulus root (conjugate = inverse)
            conj = field.conjugate_field()
            if e.field is conj or e.field.root_index == conj.root_index:
                inv_gen = FieldElement.generator(field).inverse()
                acc = FieldElement.const(field, ZERO)
                for i, c in enumerate(e.coeffs):
                    acc = acc + inv_gen.pow(i) * c
                elems.append(acc)
                continue
        return None
    return field, elems, rous


def power_product_is_one(gammas: list[AlgebraicNumber],
                         exponents: list[int]) -> bool:
    """Exact decision of prod gamma_j^(lambda_j) == 1 for unit-modulus inputs."""
    if len(gammas) != len(exponents):
        raise ValueError("gammas and exponents must have equal length")
    for g in gammas:
        if not g.is_unit_modulus():
            raise ValueError("power_product_is_one requires unit-modulus inputs")
    common = _as_common_field(gammas)
    if common is not None:
        field, elems, rous = common
        # root-of-unity contribution as an exact angle in turns
        turn = Q(0)
        for rou, lam in zip(rous, exponents):
            if rou is not None:
                k, n = rou
                turn += Q(k * lam, n)
        turn -= turn.numerator // turn.denominator
        if field is None:
            return turn == 0
        prod = FieldElement.const(field, ONE)
        for e, lam in zip(elems, exponents):
            if e is not None and lam != 0:
                prod = prod * e.pow(lam)
        if turn == 0:
            return prod.coeffs == (ONE,)
        n = turn.denominator
        # product == zeta^(-turn) requires product^n == 1 in the field
        if prod.pow(n).coeffs != (ONE,):
            return False
        from .trig import unit_box
        target = -turn
        bits = 64
        while True:
            b = prod.box(bits)
            tb = unit_box(target, bits)
            if b.disjoint(tb):
                return False
            if max(b.width, tb.width) < Q(1, 4 * n):
                # distinct n-th roots of unity are at least 2 sin(pi/n) > 4/n apart
                return True
            bits *= 2
            if bits > _MAX_BITS:
                raise RuntimeError("root-of-unity comparison failed")
    return _power_product_general(gammas, exponents)


def _power_product_general(gammas, exponents) -> bool:
    """Composed-product fallback: build an integer polynomial vanishing on
    the product, then decide equality with 1 via separation."""
    def prod_box(bits):
        acc = Box.point(1)
        for g, lam in zip(gammas, exponents):
            if lam:
                acc = acc * g.box(bits).pow(lam, bits + 32)
        return acc

    # quick rejection by refinement
    for bits in (64, 128, 256):
        b = prod_box(bits)
        if not b.contains(ONE):
            return False
    # polynomial with the product among its roots
    polys = []
    for g, lam in zip(gammas, exponents):
        if lam == 0:
            continue
        if g.is_rational:
            polys.append(int_normalize((-(g.as_rational() ** lam), ONE)))
            continue
        e = g.elem.pow(lam)
        polys.append(AlgebraicNumber.from_element(e)._defining_ints())
    if not polys:
        return True
    acc = [Q(c) for c in polys[0]]
    for nxt in polys[1:]:
        acc = P.composed_product(acc, [Q(c) for c in nxt])
    acc_int = int_normalize(acc)
    if peval([Q(c) for c in acc_int], ONE) != 0:
        return False
    sep = separation_bound(acc_int)
    bits = 64
    while True:
        b = prod_box(bits)
        if not b.contains(ONE):
            return False
        if b.width < sep / 4:
            return True  # a root of acc_int within sep/2 of the root 1 is 1
        bits *= 2
        if bits > _MAX_BITS:
            raise RuntimeError("power product decision failed")


class RealRootSlots:
    """Isolated real roots of an integer polynomial, for exact comparisons
    of real algebraic quantities that are known roots of it."""

    def __init__(self, intpoly: tuple[int, ...]):
        self.poly = tuple(int(c) for c in intpoly)
        sqf = (ONE,)
        for fac, _ in P.factor_int([Q(c) for c in self.poly]):
            sqf = pmul(sqf, tuple(Q(v) for v in fac))
        sp = P.to_sympy(sqf)
        self._roots = sympy.Poly(sp, _x).real_roots(radicals=False)
        self._bits = 32
        self._refresh()

    def _refresh(self):
        ivals = []
        for r in self._roots:
            if r.is_rational:
                v = Q(sympy.Rational(r).p, sympy.Rational(r).q)
                ivals.append(Ival.point(v))
                continue
            ivals.append(_sympy_expr_box(r, self._bits).re)
        self.ivals = ivals

    def locate(self, refiner) -> int:
        """Index of the root equal to the refinable real value (which must
        be a root of the polynomial)."""
        bits = 64
        while True:
            if self._bits < bits:
                self._bits = bits
                self._refresh()
            v = refiner(bits)
            hits = [i for i, iv in enumerate(self.ivals) if iv.overlaps(v)]
            disjoint = all(not self.ivals[i].overlaps(self.ivals[j])
                           for i in range(len(self.ivals))
                           for j in range(i + 1, len(self.ivals)))
            if len(hits) == 1 and disjoint:
                return hits[0]
            bits *= 2
            if bits > _MAX_BITS:
                raise RuntimeError("real root location failed")
