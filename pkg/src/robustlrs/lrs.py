"""Recurrence engine: exact evaluation, spectral data, exponential
polynomial solutions, normalization into dominant + residual parts.

The exponential polynomial coefficients are computed by partial fraction
decomposition of the generating function, carried out inside each root's
own number field Q[x]/(M).  Conjugate roots share one coefficient
polynomial, so the whole-sequence reconstruction
    u_n = sum over factors of Trace( A_f(n) * root^n )
is an exact rational identity used both for validation and as a second
exact evaluator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .qmath import Q, ZERO, ONE
from .interval import Ival, Box
from . import poly as P
from .poly import pnorm, PolyRat
from .algebraic import (AlgebraicNumber, FieldElement, NumberField,
                        isolate_roots)

_MAX_BITS = 1 << 16


@dataclass(frozen=True)
class Lrr:
    """Linear recurrence relation u_{n+k} = sum a_j u_{n+j}."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Q(c) for c in self.coeffs))
        if len(self.coeffs) == 0:
            raise ValueError("order must be at least 1")
        if self.coeffs[0] == 0:
            raise ValueError("a_0 must be nonzero (standing assumption)")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def char_poly(self) -> tuple[Fraction, ...]:
        """x^k - sum a_j x^j, lowest degree first."""
        return pnorm([-c for c in self.coeffs] + [ONE])

    def companion_matrix(self) -> list[list[Fraction]]:
        k = self.order
        m = [[ZERO] * k for _ in range(k)]
        for i in range(k - 1):
            m[i][i + 1] = ONE
        m[k - 1] = list(self.coeffs)
        return m


@dataclass(frozen=True)
class InitialConfig:
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(Q(c) for c in self.entries))

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class Ball:
    center: InitialConfig
    radius: Fraction
    topology: str = "open"

    def __post_init__(self):
        object.__setattr__(self, "radius", Q(self.radius))
        if self.radius <= 0:
            raise ValueError("radius > 0 required")
        if self.topology not in ("open", "closed"):
            raise ValueError("topology must be 'open' or 'closed'")


def _check_config(lrr: Lrr, c: InitialConfig):
    if len(c) != lrr.order:
        raise ValueError(f"initial configuration length {len(c)} != order {lrr.order}")


def eval_terms(lrr: Lrr, c: InitialConfig, n_max: int) -> list[Fraction]:
    """Exact terms u_0 .. u_{n_max} by direct recursion."""
    _check_config(lrr, c)
    k = lrr.order
    terms = list(c.entries)
    for n in range(len(terms), n_max + 1):
        terms.append(sum((a * terms[n - k + j] for j, a in enumerate(lrr.coeffs)),
                         ZERO))
    return terms[:n_max + 1]


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [[sum((a[i][t] * b[t][j] for t in range(m)), ZERO)
             for j in range(p)] for i in range(n)]


def mat_pow(m, n: int):
    k = len(m)
    result = [[ONE if i == j else ZERO for j in range(k)] for i in range(k)]
    base = m
    while n:
        if n & 1:
            result = mat_mul(result, base)
        n >>= 1
        if n:
            base = mat_mul(base, base)
    return result


# ---------------------------------------------------------------------------
# spectral data


@dataclass
class SpectralData:
    roots: list[tuple[AlgebraicNumber, int]]
    rho: AlgebraicNumber
    dominant_indices: list[int]
    m: int

    def __post_init__(self):
        assert self.dominant_indices, "dominant root set cannot be empty"
        assert max(self.roots[i][1] for i in self.dominant_indices) == self.m + 1
        if self.rho.is_rational:
            assert self.rho.as_rational() > 0
        else:
            assert self.rho.box(64).re.lo >= 0

    @property
    def order(self) -> int:
        return sum(mult for _, mult in self.roots)


def _abs_sq_refiner(a: AlgebraicNumber):
    return lambda bits: a.box(bits).abs_sq()


def _alg_sqrt(t: AlgebraicNumber, box_hint) -> AlgebraicNumber:
    """Positive square root of a positive real algebraic number."""
    if t.is_rational:
        v = t.as_rational()
        from .qmath import is_perfect_square, exact_sqrt
        if is_perfect_square(v):
            return AlgebraicNumber.from_rational(exact_sqrt(v))
        cands = isolate_roots(PolyRat((-v, ZERO, ONE)))
    else:
        ints = t._defining_ints()
        doubled = [ZERO] * (2 * len(ints) - 1)
        for i, co in enumerate(ints):
            doubled[2 * i] = Q(co)
        cands = isolate_roots(PolyRat(tuple(doubled)))
    bits = 64
    while True:
        hint = box_hint(bits)
        alive = [a for a, _ in cands
                 if not a.box(bits).disjoint(Box(hint, Ival.point(0)))]
        if len(alive) == 1:
            return alive[0]
        bits *= 2
        if bits > _MAX_BITS:
            raise RuntimeError("square root identification failed")


def _conjugate_partners(roots) -> list[int]:
    """partner[i] = j with root_j the complex conjugate of root_i (i when
    real/rational); conjugates share a minimal polynomial and equal modulus
    for free."""
    partner = list(range(len(roots)))
    for i, (a, _) in enumerate(roots):
        if a.is_rational or a.elem.field.is_real_root:
            continue
        fa = a.elem.field
        cf = fa.conjugate_field()
        for j, (b, _) in enumerate(roots):
            if j != i and not b.is_rational and b.elem.field is cf:
                partner[i] = j
                break
    return partner


def _abs_sq_alg(a: AlgebraicNumber) -> AlgebraicNumber:
    """|a|^2 as an exact algebraic number."""
    if a.is_rational:
        return AlgebraicNumber.from_rational(a.as_rational() ** 2)
    cj = a.elem.conj_in_field()
    if cj is not None:
        return AlgebraicNumber.from_element(a.elem * cj)
    mp = [Q(c) for c in a.elem.field.minpoly]
    return _locate_as_root(P.composed_product(mp, mp), _abs_sq_refiner(a))


def _same_modulus_exact(a: AlgebraicNumber, b: AlgebraicNumber) -> bool:
    ua, ub = a.is_unit_modulus(), b.is_unit_modulus()
    if ua or ub:
        return ua and ub
    if a.is_rational and b.is_rational:
        return abs(a.as_rational()) == abs(b.as_rational())
    return _abs_sq_alg(a).equals(_abs_sq_alg(b))


def spectral(lrr: Lrr) -> SpectralData:
    """Exact characteristic roots, dominant modulus and m.

    Dominance classes are built by refining |root|^2 enclosures; pairs
    that refuse to separate are resolved by an exact equal-modulus test
    (conjugates and unit-modulus roots are cheap; the general case goes
    through a composed-product polynomial)."""
    char = lrr.char_poly()
    roots = isolate_roots(PolyRat(char))
    r = len(roots)
    parent = list(range(r))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    for i, j in enumerate(_conjugate_partners(roots)):
        union(i, j)
    tested: set[tuple[int, int]] = set()
    bits = 96
    while True:
        sqs = [a.box(bits).abs_sq() for a, _ in roots]
        pending = [(i, j) for i in range(r) for j in range(i + 1, r)
                   if find(i) != find(j) and sqs[i].overlaps(sqs[j])]
        for i, j in pending:
            if (i, j) in tested:
                continue
            tested.add((i, j))
            if _same_modulus_exact(roots[i][0], roots[j][0]):
                union(i, j)
        if all(find(i) == find(j) for i, j in pending):
            break
        bits *= 2
        if bits > 1 << 14:
            raise RuntimeError("modulus separation failed")
    top = max(range(r), key=lambda i: (sqs[i].lo, i))
    dominant = sorted(i for i in range(r) if find(i) == find(top))
    m = max(roots[i][1] for i in dominant) - 1
    rho = _rho_of(roots[dominant[0]][0])
    return SpectralData(roots=roots, rho=rho, dominant_indices=dominant, m=m)


def _rho_of(rep: AlgebraicNumber) -> AlgebraicNumber:
    if rep.is_rational:
        return AlgebraicNumber.from_rational(abs(rep.as_rational()))
    if rep.is_unit_modulus():
        return AlgebraicNumber.from_rational(ONE)
    if rep.elem.field.is_real_root:
        # |real root|: flip the sign when the embedding is negative
        bits = 64
        while True:
            s = rep.box(bits).re.sign()
            if s is not None:
                break
            bits *= 2  # roots are nonzero (a_0 != 0), so this terminates
        return rep if s > 0 else AlgebraicNumber.from_element(rep.elem * Q(-1))

    def rho_hint(bits):
        return rep.box(bits).abs_sq().sqrt(bits)

    return _alg_sqrt(_abs_sq_alg(rep), rho_hint)


def _locate_as_root(coeffs, refiner) -> AlgebraicNumber:
    cands = isolate_roots(PolyRat(pnorm(coeffs)))
    bits = 64
    while True:
        b = Box(refiner(bits), Ival.point(0))
        alive = [a for a, _ in cands if not a.box(bits).disjoint(b)]
        if len(alive) == 1:
            return alive[0]
        bits *= 2
        if bits > _MAX_BITS:
            raise RuntimeError("root location failed")


# ---------------------------------------------------------------------------
# exponential polynomial solution (partial fractions per irreducible factor)


class _Scalar:
    """Generic helpers treating Fraction and FieldElement uniformly."""

    @staticmethod
    def inv(v):
        return 1 / v if isinstance(v, Fraction) else v.inverse()

    @staticmethod
    def is_zero(v):
        return v == 0 if isinstance(v, Fraction) else v.is_zero()


def _rp_mul(p, q, zero):
    if not p or not q:
        return []
    out = [zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return _rp_norm(out)


def _rp_norm(p):
    while p and _Scalar.is_zero(p[-1]):
        p.pop()
    return p


def _rp_divmod(p, q, zero):
    rem = list(p)
    qd = len(q) - 1
    quot = [zero] * max(len(p) - qd, 0)
    inv_lead = _Scalar.inv(q[-1])
    for top in range(len(rem) - 1, qd - 1, -1):
        c = rem[top] * inv_lead
        if _Scalar.is_zero(c):
            continue
        shift = top - qd
        quot[shift] = c
        for j, b in enumerate(q):
            rem[shift + j] = rem[shift + j] - c * b
    return _rp_norm(quot), _rp_norm(rem)


def _series_div(num, den, order, zero):
    """Power series num/den mod W^order (den[0] invertible)."""
    inv0 = _Scalar.inv(den[0])
    out = []
    for k in range(order):
        acc = num[k] if k < len(num) else zero
        for j in range(1, min(k, len(den) - 1) + 1):
            acc = acc - den[j] * out[k - j]
        out.append(acc * inv0)
    return out


def _falling_binom_coeffs(l: int) -> list[Fraction]:
    """Coefficients of binom(n+l-1, l-1) as a polynomial in n."""
    # product (n+1)(n+2)...(n+l-1) / (l-1)!
    coeffs = [ONE]
    for t in range(1, l):
        nxt = [ZERO] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] += c * t
            nxt[i + 1] += c
        coeffs = nxt
    fact = math.factorial(l - 1)
    return [c / fact for c in coeffs]


@dataclass
class _FactorSolution:
    """Per irreducible factor: shared coefficient polynomials A_j in K_f."""

    minpoly: tuple[int, ...]
    mult: int
    alphas: list  # alphas[j] is Fraction (degree-1 factor) or FieldElement


@dataclass
class ExpPolySolution:
    """alpha table: per root embedding i and power j, the coefficient of
    n^j gamma_i^n in u_n."""

    factors: list[_FactorSolution]
    roots: list[tuple[AlgebraicNumber, int]]
    alpha: dict  # (root_index, j) -> AlgebraicNumber

    def term_box(self, root_index: int, j: int, bits: int = 128) -> Box:
        return self.alpha[(root_index, j)].box(bits)


def exp_poly_solution(lrr: Lrr, c: InitialConfig,
                      spec: SpectralData | None = None) -> ExpPolySolution:
    _check_config(lrr, c)
    roots = spec.roots if spec is not None else isolate_roots(
        PolyRat(lrr.char_poly()))
    k = lrr.order
    u = eval_terms(lrr, c, k - 1)
    char = lrr.char_poly()
    # D(X) = X^k char(1/X) (constant term 1); N = (u * D) mod X^k
    D = P.preverse(char)
    N = [sum((u[i] * (D[j - i] if 0 <= j - i < len(D) else ZERO)
              for i in range(j + 1)), ZERO) for j in range(k)]
    N = pnorm(N)

    factor_solutions = []
    for fac, mult in P.factor_int(char):
        minpoly = fac
        d = len(fac) - 1
        if d == 1:
            root_val = Q(-fac[0], fac[1])
            one, zero = ONE, ZERO
            ring_of = lambda q: q
            xi = root_val
        else:
            fld = NumberField.get(fac, 0)
            one = FieldElement.const(fld, ONE)
            zero = FieldElement.const(fld, ZERO)
            ring_of = lambda q, fld=fld: FieldElement.const(fld, q)
            xi = FieldElement.generator(fld)
        xi_inv = _Scalar.inv(xi)
        # O(X) = D(X) / (1 - xi X)^mult over the field
        DX = [ring_of(cf) for cf in D]
        lin = [one, -xi]  # wait: (1 - xi X) has coeffs [1, -xi]
        denom = [one]
        for _ in range(mult):
            denom = _rp_mul(denom, lin, zero)
        OX, rem = _rp_divmod(DX, denom, zero)
        if rem:
            raise AssertionError("inexact division in partial fractions")
        # substitute X = (1 - W)/xi
        sub = [xi_inv, -xi_inv]  # X = xi_inv - xi_inv W

        def compose(pcoeffs):
            acc = []
            for co in reversed(pcoeffs):
                acc = _rp_mul(acc, sub, zero)
                if acc:
                    acc[0] = acc[0] + co
                else:
                    acc = [co] if not _Scalar.is_zero(co) else []
            return acc

        N_t = compose([ring_of(cf) for cf in N])
        O_t = compose(OX)
        series = _series_div(N_t if N_t else [zero], O_t, mult, zero)
        # c_l = [W^(mult-l)] series, l = 1..mult
        alphas = [zero] * mult
        for l in range(1, mult + 1):
            idx = mult - l
            c_l = series[idx] if idx < len(series) else zero
            if _Scalar.is_zero(c_l):
                continue
            for j, bc in enumerate(_falling_binom_coeffs(l)):
                alphas[j] = alphas[j] + c_l * bc
        factor_solutions.append(_FactorSolution(minpoly=minpoly, mult=mult,
                                                alphas=alphas))

    # exact validation: u_n == sum of traces for n = 0..k-1
    for n in range(k):
        if _reconstruct_exact(factor_solutions, n) != u[n]:
            raise AssertionError("exponential polynomial reconstruction failed")

    alpha_table = _alpha_per_embedding(factor_solutions, roots)
    return ExpPolySolution(factors=factor_solutions, roots=roots,
                           alpha=alpha_table)


def _reconstruct_exact(factor_solutions, n: int) -> Fraction:
    """u_n as sum over factors of Trace(A_f(n) * xi^n): exact rational."""
    total = ZERO
    for fs in factor_solutions:
        d = len(fs.minpoly) - 1
        if d == 1:
            root_val = Q(-fs.minpoly[0], fs.minpoly[1])
            a_of_n = sum((a * n**j for j, a in enumerate(fs.alphas)), ZERO)
            total += a_of_n * root_val**n
        else:
            if all(_Scalar.is_zero(a) for a in fs.alphas):
                continue
            fld = fs.alphas[0].field if isinstance(fs.alphas[0], FieldElement) \
                else NumberField.get(fs.minpoly, 0)
            a_of_n = FieldElement.const(fld, ZERO)
            for j, a in enumerate(fs.alphas):
                if not _Scalar.is_zero(a):
                    a_of_n = a_of_n + a * Q(n**j)
            xi_n = FieldElement.generator(fld).pow(n)
            total += (a_of_n * xi_n).trace()
    return total


def _alpha_per_embedding(factor_solutions, roots) -> dict:
    """Map (root_index, power) to the embedded coefficient value."""
    table = {}
    for i, (root, mult) in enumerate(roots):
        fs = next(f for f in factor_solutions
                  if _root_matches_factor(root, f.minpoly))
        for j in range(mult):
            a = fs.alphas[j]
            if isinstance(a, Fraction):
                table[(i, j)] = AlgebraicNumber.from_rational(a)
            elif root.is_rational:
                table[(i, j)] = AlgebraicNumber.from_rational(a.as_rational())
            else:
                emb_field = root.elem.field
                table[(i, j)] = AlgebraicNumber.from_element(
                    FieldElement(emb_field, a.coeffs))
    return table


def _root_matches_factor(root: AlgebraicNumber, minpoly: tuple[int, ...]) -> bool:
    if root.is_rational:
        return len(minpoly) == 2 and Q(-minpoly[0], minpoly[1]) == root.as_rational()
    return root.elem.field.minpoly == tuple(minpoly)


# ---------------------------------------------------------------------------
# normalization: dominant form + residual evaluator


@dataclass
class DominantForm:
    """v_n^dom = sum alpha_j * s_j^n with s_j the dominant unit roots."""

    terms: list[tuple[AlgebraicNumber, AlgebraicNumber]]  # (alpha_j, s_j)
    conjugate_closed: bool = True
    rho: AlgebraicNumber | None = None  # dominant modulus (exactness helper)

    def value_box(self, point_boxes: list[Box], bits: int = 128) -> Box:
        acc = Box.point(0)
        for (a, _), tb in zip(self.terms, point_boxes):
            acc = (acc + a.box(bits) * tb).round_out(bits + 16)
        return acc


@dataclass
class _ResidualTerm:
    alpha: AlgebraicNumber
    npow: int                      # exponent of n (negative or zero here)
    base: AlgebraicNumber          # (gamma/rho), modulus <= 1
    base_is_unit: bool


class ResidualEvaluator:
    """Certified enclosures of v_n^res and per-term decay bookkeeping."""

    def __init__(self, terms: list[_ResidualTerm]):
        self.terms = terms

    def __call__(self, n: int, bits: int = 128) -> Ival:
        return self.box(n, bits).re

    def box(self, n: int, bits: int = 128) -> Box:
        if n < 1:
            raise ValueError("residual evaluation starts at n = 1")
        acc = Box.point(0)
        for t in self.terms:
            npow = Q(n) ** t.npow
            term = t.alpha.box(bits) * t.base.box(bits).pow(n, bits + 32) * npow
            acc = (acc + term).round_out(bits + 16)
        return acc

    def is_zero(self) -> bool:
        return not self.terms

    def term_bounds(self, bits: int = 96) -> list[tuple[Fraction, int, Fraction]]:
        """Per term (A, t, beta): |term(n)| <= A * n^t * beta^n with A, beta
        rational upper bounds and beta < 1 unless the base is unit modulus."""
        out = []
        for t in self.terms:
            a_hi = t.alpha.box(bits).abs(bits).hi
            if t.base_is_unit:
                beta = ONE
            else:
                b = bits
                while True:
                    beta = t.base.box(b).abs(b).hi
                    if beta < 1:
                        break
                    b *= 2
                    if b > _MAX_BITS:
                        raise RuntimeError("failed to certify |base| < 1")
            out.append((a_hi, t.npow, beta))
        return out


def normalize(lrr: Lrr, c: InitialConfig,
              spec: SpectralData | None = None,
              sol: ExpPolySolution | None = None
              ) -> tuple[DominantForm, ResidualEvaluator]:
    """Split v_n = u_n/(n^m rho^n) into dominant and residual parts."""
    if spec is None:
        spec = spectral(lrr)
    if sol is None:
        sol = exp_poly_solution(lrr, c, spec)
    m = spec.m
    rho = spec.rho
    dom_terms = []
    res_terms = []
    for i, (root, mult) in enumerate(spec.roots):
        is_dom = i in spec.dominant_indices
        unit = _unit_ratio(root, rho) if is_dom else None
        for j in range(mult):
            alpha = sol.alpha[(i, j)]
            if is_dom and j == m:
                dom_terms.append((alpha, unit))
                continue
            if alpha.is_rational and alpha.as_rational() == 0:
                continue
            base = unit if is_dom else _ratio_to_rho(root, rho)
            res_terms.append(_ResidualTerm(alpha=alpha, npow=j - m, base=base,
                                           base_is_unit=is_dom))
    form = DominantForm(terms=dom_terms, rho=rho)
    return form, ResidualEvaluator(res_terms)


def _unit_ratio(root: AlgebraicNumber, rho: AlgebraicNumber) -> AlgebraicNumber:
    s = _ratio_to_rho(root, rho)
    if not s.is_unit_modulus():
        raise AssertionError("dominant ratio is not unit modulus")
    return s


def _ratio_to_rho(root: AlgebraicNumber, rho: AlgebraicNumber) -> AlgebraicNumber:
    if rho.is_rational:
        r = rho.as_rational()
        if root.is_rational:
            return AlgebraicNumber.from_rational(root.as_rational() / r)
        return AlgebraicNumber.from_element(root.elem * (1 / r))
    if root.is_rational and not rho.is_rational:
        # root/rho: root of P_rho scaled -- construct via resultant poly below
        pass
    # resultant: roots of Res_y(P_rho(y), M(x*y)) include root/rho
    import sympy
    from .poly import to_sympy, from_sympy, int_normalize as pint
    _xs = sympy.Symbol("x")
    ys = sympy.Symbol("y")
    prho = to_sympy([Q(v) for v in rho._defining_ints()]).as_expr().subs(_xs, ys)
    mroot = to_sympy([Q(v) for v in root._defining_ints()]).as_expr().subs(
        _xs, _xs * ys)
    res = sympy.Poly(sympy.expand(sympy.resultant(prho, mroot, ys)), _xs)
    coeffs = from_sympy(res)

    def refiner(bits):
        rb = rho.box(bits).re
        return root.box(bits) * rb.inverse()

    cands = isolate_roots(PolyRat(pnorm(coeffs)))
    bits = 64
    while True:
        b = refiner(bits)
        alive = [a for a, _ in cands if not a.box(bits).disjoint(b)]
        if len(alive) == 1:
            return alive[0]
        bits *= 2
        if bits > _MAX_BITS:
            raise RuntimeError("unit ratio identification failed")


def residual_threshold(res: ResidualEvaluator, eps: Fraction,
                       bits: int = 96) -> int:
    """Certified N with |v_n^res| < eps for all n > N."""
    eps = Q(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if res.is_zero():
        return 0
    bounds = res.term_bounds(bits)
    per_term = eps / len(bounds)
    worst = 0
    for a_hi, t, beta in bounds:
        if a_hi == 0:
            continue
        if beta == 1:
            # a * n^t with t <= -1: need n^|t| > a/per_term
            if t >= 0:
                raise AssertionError("unit-modulus residual term must decay")
            target = a_hi / per_term
            n = 1
            while Q(n) ** (-t) <= target:
                n *= 2
            lo, hi = n // 2, n
            while lo + 1 < hi:
                mid = (lo + hi) // 2
                if Q(mid) ** (-t) <= target:
                    lo = mid
                else:
                    hi = mid
            worst = max(worst, lo)
            continue
        # geometric decay: find n0 from which the term decreases, i.e.
        # beta * ((n+1)/n)^t < 1 for n >= n0, then push below per_term
        n0 = 1
        if t > 0:
            while beta * Q(n0 + 1, n0) ** t >= 1:
                n0 *= 2

        def term_at(n):
            return a_hi * Q(n) ** t * beta ** n

        if term_at(n0) < per_term:
            worst = max(worst, n0 - 1)
            continue
        n = n0
        while term_at(n) >= per_term:
            n *= 2
        lo, hi = n // 2, n  # term(lo) >= per_term > term(hi), lo >= n0
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if term_at(mid) >= per_term:
                lo = mid
            else:
                hi = mid
        worst = max(worst, lo)
    return worst


# ---------------------------------------------------------------------------
# hyperplane distance (Claim: distance(c, H_n) <= C |v_n(c)|)


def hyperplane_distance(lrr: Lrr, c: InitialConfig, n: int,
                        bits: int = 128) -> Ival:
    """Enclosure of distance(c, H_n) = |u_n(c)| / ||first row of M^n||."""
    _check_config(lrr, c)
    mp = mat_pow(lrr.companion_matrix(), n)
    row = mp[0]
    norm_sq = sum((v * v for v in row), ZERO)
    u_n = sum((row[j] * c.entries[j] for j in range(lrr.order)), ZERO)
    if norm_sq == 0:
        raise ArithmeticError("zero row in companion power")
    return (Ival.point(abs(u_n)) / Ival.point(norm_sq).sqrt(bits))


def hyperplane_constant(lrr: Lrr, spec: SpectralData | None = None,
                        bits: int = 128) -> Fraction:
    """Upper bound C with distance(c, H_n) <= C * |v_n(c)| for n >= 1:
    C = Frobenius norm of the generalized Vandermonde V[n,(i,j)] = n^j g_i^n."""
    if spec is None:
        spec = spectral(lrr)
    k = spec.order
    total = Ival.point(0)
    for n in range(k):
        for i, (root, mult) in enumerate(spec.roots):
            gb = root.box(bits).pow(n, bits + 16)
            for j in range(mult):
                entry = gb * Q(n**j)
                total = total + entry.abs_sq()
    return total.sqrt(bits).hi


# ---------------------------------------------------------------------------
# certified orbit scanning and exact sign / zero tests


class OrbitScanner:
    """Sequential certified enclosures of v_n = v_n^dom + v_n^res.

    Unit-root powers are tracked as dyadic points with additive error
    (multiplication by a unit-modulus number is an isometry up to the
    approximation of the base itself), so enclosure widths grow only
    linearly in n.
    """

    def __init__(self, lrr: Lrr, c: InitialConfig, bits: int = 160,
                 spec: SpectralData | None = None,
                 sol: ExpPolySolution | None = None):
        self.lrr, self.c = lrr, c
        self.bits = bits
        spec = spec or spectral(lrr)
        sol = sol or exp_poly_solution(lrr, c, spec)
        self.spec, self.sol = spec, sol
        form, res = normalize(lrr, c, spec, sol)
        self.form, self.res = form, res
        triples = [(a, b, 0) for a, b in form.terms] + \
                  [(t.alpha, t.base, t.npow) for t in res.terms]
        self._track = [_PowerTrack(a, b, npow, bits) for a, b, npow in triples]
        self.n = 0

    def step(self):
        for t in self._track:
            t.step()
        self.n += 1

    def v_box(self) -> Box:
        if self.n < 1:
            raise ValueError("scan value defined for n >= 1")
        acc = Box.point(0)
        for t in self._track:
            acc = acc + t.value_box(self.n)
        return acc

    def v_dom_box(self) -> Box:
        acc = Box.point(0)
        for t in self._track[:len(self.form.terms)]:
            acc = acc + t.value_box(max(self.n, 1))
        return acc


class _PowerTrack:
    """base^n as a dyadic point with certified error, times alpha * n^npow."""

    __slots__ = ("alpha_box", "npow", "bits", "scale", "br", "bi", "berr",
                 "vr", "vi", "err")

    def __init__(self, alpha: AlgebraicNumber, base: AlgebraicNumber,
                 npow: int, bits: int):
        self.bits = bits
        self.scale = 1 << bits
        self.npow = npow
        self.alpha_box = alpha.refine(Q(1, self.scale))
        bb = base.refine(Q(1, self.scale * 4))
        self.br = int(bb.re.mid * self.scale)
        self.bi = int(bb.im.mid * self.scale)
        self.berr = 3  # ulps: box mid to true value
        self.vr, self.vi = self.scale, 0
        self.err = 0  # ulps of euclidean error on base^n

    def step(self):
        s = self.bits
        vr, vi, br, bi = self.vr, self.vi, self.br, self.bi
        self.vr = (vr * br - vi * bi) >> s
        self.vi = (vr * bi + vi * br) >> s
        # |v| <= 1 + err; multiplying by the approximate base adds its own
        # error plus truncation; keep an integral, safely-rounded-up bound
        self.err = self.err + self.berr + 4 + (self.err >> (s - 8))

    def value_box(self, n: int) -> Box:
        e = Q(self.err + 2, self.scale)
        pr = Q(self.vr, self.scale)
        pi = Q(self.vi, self.scale)
        pw = Box(Ival(pr - e, pr + e), Ival(pi - e, pi + e))
        return self.alpha_box * pw * (Q(n) ** self.npow)


def _scaled_integer_recurrence(lrr: Lrr, c: InitialConfig):
    """Integer sequence w_n = E * D^n * u_n with sign(w_n) = sign(u_n)."""
    D = math.lcm(*[a.denominator for a in lrr.coeffs])
    E = math.lcm(*[v.denominator for v in c.entries]) if len(c) else 1
    k = lrr.order
    coeffs = [int(lrr.coeffs[j] * D ** (k - j)) for j in range(k)]
    init = [int(v * E * D**n) for n, v in enumerate(c.entries)]
    return coeffs, init


def exact_zeros_up_to(lrr: Lrr, c: InitialConfig, n_max: int) -> list[int]:
    """All n <= n_max with u_n = 0 exactly, via deterministic CRT over
    enough 62-bit primes to cover the certified magnitude bound."""
    coeffs, init = _scaled_integer_recurrence(lrr, c)
    k = lrr.order
    growth = max(2, sum(abs(x) for x in coeffs))
    base_bits = max((abs(v).bit_length() for v in init), default=1) + 1
    need_bits = base_bits + (n_max + k) * (growth.bit_length() + 1)
    primes = _primes_62bit(need_bits // 61 + 2)
    candidate: set[int] | None = None
    for p in primes:
        seq = [v % p for v in init]
        for n in range(k, n_max + 1):
            seq.append(sum(coeffs[j] * seq[n - k + j] for j in range(k)) % p)
        zeros = {n for n in range(min(n_max + 1, len(seq))) if seq[n] == 0}
        candidate = zeros if candidate is None else (candidate & zeros)
        if not candidate:
            return []
    return sorted(candidate)


def _primes_62bit(count: int) -> list[int]:
    import sympy
    primes = []
    p = (1 << 62) - 57
    while len(primes) < count:
        p = sympy.prevprime(p)
        primes.append(int(p))
    return primes


def term_sign(lrr: Lrr, c: InitialConfig, n: int,
              scanner: OrbitScanner | None = None) -> int:
    """Exact sign of u_n(c): -1, 0, or +1."""
    if n < lrr.order:
        v = c.entries[n]
        return (v > 0) - (v < 0)
    if n <= 4096:
        v = eval_terms(lrr, c, n)[n]
        return (v > 0) - (v < 0)
    bits = 192
    while bits <= _MAX_BITS:
        sc = OrbitScanner(lrr, c, bits)
        for _ in range(n):
            sc.step()
        s = sc.v_box().re.sign()
        if s is not None:
            return s
        if n in exact_zeros_up_to(lrr, c, n):
            return 0
        bits *= 4
    raise RuntimeError("sign determination failed")
