"""The four robustness decision procedures, with machine-checkable
certificates, plus a sampling oracle for cross-validation.

Verdict logic: the minimum of the dominant form over the closure torus
classifies the start relative to the positivity set (negative / surface /
interior); positive minima yield a certified tail bound via the residual
threshold, after which only a finite exact prefix scan remains.  When the
relation lattice is incomplete the torus is a superset, minima are lower
bounds, and only YES-type verdicts survive; everything else degrades to
UNKNOWN rather than risk an unsound certificate.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .qmath import Q, ZERO, ONE
from .lrs import (Lrr, InitialConfig, Ball, eval_terms, spectral,
                  exp_poly_solution, normalize, residual_threshold,
                  term_sign, exact_zeros_up_to, OrbitScanner, DominantForm,
                  ResidualEvaluator)
from .torus import relation_lattice, parametrize, TorusParam
from .optimize import (mu, nu, min_over_ball, DominantFamily, SignOutcome,
                       DEFAULT_TOL)

DEFAULT_PREFIX_CAP = 10**6


@dataclass
class Certificate:
    kind: str                       # violation | tail | optimum | cap | lattice
    violating_index: Optional[int] = None
    violating_value: Optional[Fraction] = None
    optimum: Optional[SignOutcome] = None
    threshold: Optional[int] = None
    prefix_margin: Optional[Fraction] = None
    witness_radius: Optional[Fraction] = None
    reason: Optional[str] = None


@dataclass
class Decision:
    verdict: str                    # YES | NO | UNKNOWN
    certificate: Certificate

    def __post_init__(self):
        if self.verdict in ("YES", "NO"):
            assert self.certificate.kind in ("violation", "tail", "optimum")
        else:
            assert self.certificate.kind in ("cap", "lattice", "optimum")


@dataclass
class Analysis:
    """Shared pipeline data for one (lrr, c)."""

    lrr: Lrr
    c: InitialConfig
    spec: object
    form: DominantForm
    res: ResidualEvaluator
    torus: TorusParam

    @staticmethod
    def build(lrr: Lrr, c: InitialConfig, height_bound: int = 64) -> "Analysis":
        spec = spectral(lrr)
        sol = exp_poly_solution(lrr, c, spec)
        form, res = normalize(lrr, c, spec, sol)
        lat = relation_lattice([s for _, s in form.terms], height_bound)
        return Analysis(lrr=lrr, c=c, spec=spec, form=form, res=res,
                        torus=parametrize(lat))


def _downgrade_no(out: SignOutcome) -> Decision | None:
    """NO is only sound on a complete lattice (an incomplete lattice gives
    a torus superset, so the computed minimum is merely a lower bound)."""
    if not out.lattice_complete:
        return Decision("UNKNOWN", Certificate(
            kind="lattice", optimum=None,
            reason="relation lattice incomplete: minimum is a lower bound"))
    return None


def exists_robust_ultimate_positivity(lrr: Lrr, c: InitialConfig,
                                      tol: Fraction = DEFAULT_TOL,
                                      analysis: Analysis | None = None) -> Decision:
    """YES iff the dominant minimum is strictly positive."""
    a = analysis or Analysis.build(lrr, c)
    out = mu(a.form, a.torus, tol)
    if out.verdict == "POSITIVE":
        return Decision("YES", Certificate(kind="optimum", optimum=out))
    if out.verdict in ("NEGATIVE", "ZERO"):
        down = _downgrade_no(out)
        if down:
            return down
        return Decision("NO", Certificate(kind="optimum", optimum=out))
    return Decision("UNKNOWN", Certificate(
        kind="optimum", optimum=out,
        reason="optimizer tolerance exhausted without a sign"))


def robust_nonuniform_ultpos_open_ball(lrr: Lrr, ball: Ball,
                                       tol: Fraction = DEFAULT_TOL) -> Decision:
    """Open-ball non-uniform ultimate positivity: ball inside the dominant
    nonnegativity set iff the closed-ball minimum is >= 0."""
    if ball.topology == "closed":
        raise ValueError("closed given balls are out of scope "
                         "(Diophantine-hard); only open balls are decided")
    c = ball.center
    spec = spectral(lrr)
    sol = exp_poly_solution(lrr, c, spec)
    center_form, _ = normalize(lrr, c, spec, sol)
    k = lrr.order
    basis = []
    for i in range(k):
        e_i = InitialConfig(tuple(ONE if j == i else ZERO for j in range(k)))
        basis.append(normalize(lrr, e_i, spec)[0])
    lat = relation_lattice([s for _, s in center_form.terms])
    torus = parametrize(lat)
    fam = DominantFamily(center=center_form, basis=basis)
    out = min_over_ball(fam, ball.radius, torus, tol)
    if out.verdict in ("POSITIVE", "ZERO"):
        # closed-ball min >= 0 certifies the open ball is inside P_dom
        return Decision("YES", Certificate(kind="optimum", optimum=out,
                                           witness_radius=ball.radius))
    if out.verdict == "NEGATIVE":
        down = _downgrade_no(out)
        if down:
            return down
        return Decision("NO", Certificate(kind="optimum", optimum=out))
    return Decision("UNKNOWN", Certificate(
        kind="optimum", optimum=out,
        reason="ball minimum straddles zero at tolerance"))


def _prefix_scan(lrr: Lrr, c: InitialConfig, n_thr: int, want_zero: bool):
    """Scan u_0..u_{n_thr}: returns (violation_n, value, margin) where the
    violation is u_n <= 0 (positivity) or u_n = 0 (Skolem)."""
    if n_thr <= 4096:
        terms = eval_terms(lrr, c, n_thr)
        margin = None
        for n, v in enumerate(terms):
            if (v == 0) if want_zero else (v <= 0):
                return n, v, None
            if not want_zero:
                margin = v if margin is None else min(margin, v)
        return None, None, margin
    if want_zero:
        zeros = exact_zeros_up_to(lrr, c, n_thr)
        if zeros:
            return zeros[0], ZERO, None
        return None, None, None
    # long positivity prefix: certified scan with exact confirmation
    margin = None
    sc = OrbitScanner(lrr, c, bits=192)
    v0 = c.entries[0]
    if v0 <= 0:
        return 0, v0, None
    for n in range(1, n_thr + 1):
        sc.step()
        iv = sc.v_box().re
        if iv.lo > 0:
            margin = iv.lo if margin is None else min(margin, iv.lo)
            continue
        s = term_sign(lrr, c, n)
        if s <= 0:
            val = eval_terms(lrr, c, n)[n] if n <= 4096 else None
            return n, val, None
        margin = ZERO if margin is None else margin
    return None, None, margin


def exists_robust_positivity(lrr: Lrr, c: InitialConfig,
                             prefix_cap: int = DEFAULT_PREFIX_CAP,
                             tol: Fraction = DEFAULT_TOL,
                             analysis: Analysis | None = None) -> Decision:
    """Dominant minimum positive + exact strictly-positive prefix."""
    a = analysis or Analysis.build(lrr, c)
    out = mu(a.form, a.torus, tol)
    if out.verdict in ("NEGATIVE", "ZERO"):
        down = _downgrade_no(out)
        if down:
            return down
        return Decision("NO", Certificate(kind="optimum", optimum=out))
    if out.verdict != "POSITIVE":
        return Decision("UNKNOWN", Certificate(
            kind="optimum", optimum=out,
            reason="dominant minimum sign unresolved"))
    mu_lo = out.enclosure.lo
    n_thr = residual_threshold(a.res, mu_lo / 2)
    if n_thr > prefix_cap:
        return Decision("UNKNOWN", Certificate(
            kind="cap", threshold=n_thr, optimum=out,
            reason=f"residual threshold {n_thr} exceeds prefix cap {prefix_cap}"))
    viol, value, margin = _prefix_scan(lrr, c, n_thr, want_zero=False)
    if viol is not None:
        return Decision("NO", Certificate(kind="violation",
                                          violating_index=viol,
                                          violating_value=value))
    return Decision("YES", Certificate(kind="tail", optimum=out,
                                       threshold=n_thr,
                                       prefix_margin=margin))


def exists_robust_skolem(lrr: Lrr, c: InitialConfig,
                         prefix_cap: int = DEFAULT_PREFIX_CAP,
                         tol: Fraction = DEFAULT_TOL,
                         analysis: Analysis | None = None) -> Decision:
    """Nonzero dominant minimum in absolute value + zero-free exact prefix."""
    a = analysis or Analysis.build(lrr, c)
    out = nu(a.form, a.torus, tol)
    if out.verdict == "ZERO":
        down = _downgrade_no(out)
        if down:
            return down
        return Decision("NO", Certificate(kind="optimum", optimum=out))
    if out.verdict != "POSITIVE":
        return Decision("UNKNOWN", Certificate(
            kind="optimum", optimum=out,
            reason="absolute dominant minimum unresolved"))
    nu_lo = out.enclosure.lo
    n_thr = residual_threshold(a.res, nu_lo / 2)
    if n_thr > prefix_cap:
        return Decision("UNKNOWN", Certificate(
            kind="cap", threshold=n_thr, optimum=out,
            reason=f"residual threshold {n_thr} exceeds prefix cap {prefix_cap}"))
    viol, value, _ = _prefix_scan(lrr, c, n_thr, want_zero=True)
    if viol is not None:
        return Decision("NO", Certificate(kind="violation",
                                          violating_index=viol,
                                          violating_value=ZERO))
    return Decision("YES", Certificate(kind="tail", optimum=out,
                                       threshold=n_thr))


# ---------------------------------------------------------------------------
# sampling oracle


@dataclass
class BruteForceReport:
    mode: str
    horizon: int
    samples: int
    violation: Optional[tuple[int, tuple[Fraction, ...]]]
    violation_sign: Optional[int] = None
    min_scaled_value: float = float("inf")
    notes: str = ""


def _ball_samples(ball: Ball, count: int, seed: int) -> list[tuple[Fraction, ...]]:
    """Deterministic rational sample points: center, boundary-biased, and
    uniform-ish interior; all strictly inside for open balls."""
    rng = random.Random(seed)
    k = len(ball.center.entries)
    pts = [ball.center.entries]
    D = 1 << 12
    shrink = Q(4095, 4096)
    while len(pts) < count:
        v = [rng.randint(-D, D) for _ in range(k)]
        nv2 = sum(x * x for x in v)
        if nv2 == 0 or nv2 > D * D:
            continue
        boundary = len(pts) % 2 == 0
        # lambda <= radius * shrink / sqrt(nv2), rounded down
        inv = Q(1 << 20, math.isqrt(nv2 << 40) + 1)
        lam = ball.radius * shrink * inv
        if not boundary:
            lam = lam * Q(rng.randint(1, 1 << 12), 1 << 12)
        pts.append(tuple(cj + lam * vj
                         for cj, vj in zip(ball.center.entries, v)))
    return pts[:count]


def brute_force_check(lrr: Lrr, region, horizon: int = 10**4,
                      samples: int = 10**3, mode: str = "positivity",
                      seed: int = 0) -> BruteForceReport:
    """Sampling oracle: exact-confirmed first violation or none found.

    A float screen (renormalized power iteration over all samples at once)
    proposes candidate violations; every reported violation is confirmed
    with exact arithmetic.  'none found' means the screen saw margins above
    the float noise floor and the worst margin was exactly confirmed
    positive (or nonzero, for Skolem mode).
    """
    if mode not in ("positivity", "skolem", "ultpos"):
        raise ValueError(f"unknown mode {mode!r}")
    if isinstance(region, Ball):
        pts = _ball_samples(region, samples, seed)
    else:
        pts = [region.entries]
    k = lrr.order
    M = np.array([[float(x) for x in row]
                  for row in lrr.companion_matrix()], dtype=float)
    W = np.array([[float(p[j]) for p in pts] for j in range(k)], dtype=float)
    candidates: list[tuple[int, int]] = []   # (n, sample index)
    min_scaled = float("inf")
    threshold = 1e-7
    for n in range(horizon + 1):
        vals = W[0]
        scale = np.max(np.abs(W), axis=0)
        scale[scale == 0] = 1.0
        scaled = vals / scale
        if mode == "skolem":
            hits = np.nonzero(np.abs(scaled) < threshold)[0]
        else:
            hits = np.nonzero(scaled < threshold)[0]
        min_scaled = min(min_scaled, float(np.min(np.abs(scaled))
                                           if mode == "skolem"
                                           else np.min(scaled)))
        candidates.extend((n, int(i)) for i in hits)
        if len(candidates) > 50_000:
            break
        W = np.vstack([W[1:], (M[-1] @ W)[None, :]])
        W = W / np.max(np.abs(W), axis=0, keepdims=True).clip(min=1e-300)
    candidates.sort(key=lambda t: (t[0], pts[t[1]]))
    for n, i in candidates:
        cfg = InitialConfig(pts[i])
        s = term_sign(lrr, cfg, n)
        bad = (s == 0) if mode == "skolem" else (s <= 0)
        if bad:
            return BruteForceReport(mode=mode, horizon=horizon,
                                    samples=len(pts),
                                    violation=(n, pts[i]), violation_sign=s,
                                    min_scaled_value=min_scaled,
                                    notes="violation exactly confirmed")
    return BruteForceReport(mode=mode, horizon=horizon, samples=len(pts),
                            violation=None, min_scaled_value=min_scaled,
                            notes="none found (screened; candidates exactly "
                                  "refuted)" if candidates else "none found")
