"""Hyperexponential terms presented by rational log-derivative vectors.

A term stands for a nonzero function h with d_v(h)/h rational for every
derivation; it is identified purely by that vector of rational functions.
Elements of the module generated by several terms are finite sums of
coefficient*term parts over pairwise non-similar terms.

Distinct term objects are independent basis elements even when their
log-derivative vectors coincide: similarity of terms determines their ratio
only up to a constant, so merging parts across distinct-but-similar terms is
never done implicitly.  Constructing an element with two similar distinct
terms is rejected; pipelines that need to combine such inputs re-present them
over one representative first (see ``parallel``).
"""

from __future__ import annotations

import itertools
import threading
from typing import Optional

from .errors import MultiPartElementError, ZeroPolynomialError
from .ore import OreOp, twist
from .ratfun import MPoly, RatFun, gcd as mpoly_gcd, split_k_factors, squarefree
from .upoly import UPoly, residue_split, unit_normal_factor

_uid_counter = itertools.count(1)
_sim_cache: dict = {}
_sim_lock = threading.Lock()


class HTerm:
    """A hyperexponential term given by its log-derivative vector.

    logd[v] is the logarithmic derivative with respect to variable v; the
    vector must satisfy the integrability conditions d_b(logd[a]) =
    d_a(logd[b]), which are checked exactly on construction.
    """

    __slots__ = ("logd", "label", "uid")

    def __init__(self, logd, label: Optional[str] = None):
        logd = tuple(logd)
        if not logd:
            raise ValueError("empty log-derivative vector")
        nv = logd[0].nvars
        if len(logd) != nv:
            raise ValueError("log-derivative vector length must equal the variable count")
        for a in range(nv):
            for b in range(a + 1, nv):
                if logd[a].derive(b) != logd[b].derive(a):
                    raise ValueError(
                        f"log-derivative vector is not integrable (variables {a}, {b})"
                    )
        self.logd = logd
        self.uid = next(_uid_counter)
        self.label = label if label is not None else f"h{self.uid}"

    @staticmethod
    def trivial(nvars: int, label: str = "1") -> "HTerm":
        return HTerm([RatFun.zero(nvars)] * nvars, label=label)

    @property
    def nvars(self) -> int:
        return len(self.logd)

    @property
    def is_trivial(self) -> bool:
        return all(r.is_zero for r in self.logd)

    def __repr__(self) -> str:
        return f"HTerm({self.label})"


class HElement:
    """A finite sum of coeff*term parts over pairwise non-similar terms."""

    __slots__ = ("parts", "nvars")

    def __init__(self, parts, nvars: Optional[int] = None):
        merged: dict = {}
        terms: dict = {}
        for coeff, term in parts:
            if coeff.is_zero:
                continue
            if term.uid in merged:
                merged[term.uid] = merged[term.uid] + coeff
            else:
                merged[term.uid] = coeff
            terms[term.uid] = term
            if nvars is None:
                nvars = coeff.nvars
        if nvars is None:
            raise ValueError("cannot infer the variable count of an empty element")
        out = [(c, terms[uid]) for uid, c in sorted(merged.items()) if not c.is_zero]
        for i in range(len(out)):
            for j in range(i + 1, len(out)):
                if is_similar(out[i][1], out[j][1]) is not None:
                    raise ValueError(
                        f"element mixes similar terms {out[i][1].label!r} and "
                        f"{out[j][1].label!r}; re-present them over one term first"
                    )
        self.parts = tuple(out)
        self.nvars = nvars

    @staticmethod
    def zero(nvars: int) -> "HElement":
        return HElement((), nvars)

    @staticmethod
    def single(coeff: RatFun, term: HTerm) -> "HElement":
        return HElement(((coeff, term),), coeff.nvars)

    @property
    def is_zero(self) -> bool:
        return not self.parts

    def __eq__(self, other) -> bool:
        if not isinstance(other, HElement):
            return NotImplemented
        return (self - other).is_zero

    def __hash__(self):
        return hash(tuple((c, t.uid) for c, t in self.parts))

    def __add__(self, other: "HElement") -> "HElement":
        return HElement(self.parts + other.parts, self.nvars)

    def __neg__(self) -> "HElement":
        return HElement(tuple((-c, t) for c, t in self.parts), self.nvars)

    def __sub__(self, other: "HElement") -> "HElement":
        return self + (-other)

    def scale(self, f: RatFun) -> "HElement":
        if f.is_zero:
            return HElement.zero(self.nvars)
        return HElement(tuple((c * f, t) for c, t in self.parts), self.nvars)

    def terms(self) -> list:
        return [t for _, t in self.parts]

    def coeff_of(self, term: HTerm) -> RatFun:
        for c, t in self.parts:
            if t is term:
                return c
        return RatFun.zero(self.nvars)

    def sole_part(self) -> tuple:
        """The (coeff, term) of a single-part element."""
        if len(self.parts) != 1:
            raise MultiPartElementError(
                f"expected a single-part element, got {len(self.parts)} parts"
            )
        return self.parts[0]

    def __repr__(self) -> str:
        from .expr import render_helement

        return f"HElement({render_helement(self)})"


# -- module action -------------------------------------------------------------


def d_apply(e: HElement, v: int) -> HElement:
    """Derivative D_v in the module: D_v(c*h) = (d_v(c) + c*logd_v)*h."""
    out = []
    for c, t in e.parts:
        nc = c.derive(v) + c * t.logd[v]
        if not nc.is_zero:
            out.append((nc, t))
    return HElement(out, e.nvars)


def t_map(c: RatFun, term: HTerm) -> RatFun:
    """Coefficient image of Dt on coeff*term: d_t(c) + c*logd_t."""
    return c.derive(0) + c * term.logd[0]


def op_apply(op: OreOp, e: HElement) -> HElement:
    """Apply an operator in Dt part-wise: Dt^j(c*h) = T^j(c)*h."""
    out = []
    for c, t in e.parts:
        acc = RatFun.zero(e.nvars)
        cur = c
        for i, a in enumerate(op.coeffs):
            if not a.is_zero:
                acc = acc + a * cur
            if i < len(op.coeffs) - 1:
                cur = t_map(cur, t)
        if not acc.is_zero:
            out.append((acc, t))
    return HElement(out, e.nvars)


# -- similarity ---------------------------------------------------------------------


def _merge_factor(acc: list, fac: MPoly, m: int) -> bool:
    """Fold a factor with multiplicity into a coprime-ish accumulator.

    Returns False on a multiplicity conflict, which certifies that no
    consistent rational ratio exists.
    """
    work = fac
    for g, mg in acc:
        d = mpoly_gcd(work, g)
        if not d.is_const:
            if mg != m:
                return False
            work = work.exact_div(d)
            if work.is_const:
                return True
    if not work.is_const:
        acc.append((work, m))
    return True


def _similarity_ratio(h1: HTerm, h2: HTerm) -> Optional[RatFun]:
    nv = h1.nvars
    diffs = [h1.logd[v] - h2.logd[v] for v in range(nv)]
    if all(s.is_zero for s in diffs):
        return RatFun.one(nv)
    acc: list = []
    for v in range(nv):
        s = diffs[v]
        if s.is_zero or not s.den.involves(v):
            continue
        v_factors = squarefree(s.den, v)
        if any(mult >= 2 for _, mult in v_factors):
            return None
        prod = MPoly.const(1, nv)
        for fac, _ in v_factors:
            prod = prod * fac
        s_up = UPoly.from_mpoly(prod, v).monic()
        num_up, den_up = UPoly.from_ratfun(s, v)
        num_up = num_up.scale(den_up.lc.inv())
        den_up = den_up.monic()
        cof = den_up.exact_div(s_up)
        splits, rest = residue_split(num_up, cof, s_up)
        if rest.degree > 0:
            return None
        for g_up, m in splits:
            mp, _ = unit_normal_factor(g_up)
            if not _merge_factor(acc, mp, m):
                return None
    q = RatFun.one(nv)
    for fac, m in acc:
        q = q * RatFun.from_poly(fac) ** m
    for v in range(nv):
        if q.derive(v) != diffs[v] * q:
            return None
    return q


def is_similar(h1: HTerm, h2: HTerm) -> Optional[RatFun]:
    """The rational ratio witness q with d_v(q)/q = logd_v(h1) - logd_v(h2)
    for every v, or None when the terms are not similar.

    The witness is determined up to a nonzero rational constant; a fixed
    representative is returned.  Results are cached per term pair.
    """
    if h1 is h2:
        return RatFun.one(h1.nvars)
    key = (h1.uid, h2.uid)
    with _sim_lock:
        if key in _sim_cache:
            return _sim_cache[key]
    q = _similarity_ratio(h1, h2)
    with _sim_lock:
        _sim_cache[key] = q
        _sim_cache[(h2.uid, h1.uid)] = q.inv() if q is not None else None
    return q


def similarity_classes(elements: list) -> list:
    """Partition the terms referenced by the elements into similarity classes.

    Classes are ordered by first appearance, as is each class's member list.
    """
    seen: list = []
    for e in elements:
        for t in e.terms():
            if all(t is not s for s in seen):
                seen.append(t)
    classes: list = []
    for t in seen:
        for cls in classes:
            if is_similar(cls[0], t) is not None:
                cls.append(t)
                break
        else:
            classes.append([t])
    return classes


# -- annihilators in k(t)<Dt> ----------------------------------------------------------


def split_log_derivative(r_t: RatFun):
    """Decompose r_t = d_t(p)/p + r with p in k(x)[t] and r in k(t).

    Returns (p, r) with p a unit-normal MPoly, or None when no such
    decomposition exists.  Candidate factors of p are the simple, genuinely
    x-dependent denominator factors of r_t whose residues are positive
    integers; the remainder must then have all coefficients rational.
    """
    nv = r_t.nvars
    one = MPoly.const(1, nv)
    if r_t.is_zero:
        return one, r_t
    p_acc = one
    if r_t.den.involves(0):
        num_up, den_up = UPoly.from_ratfun(r_t, 0)
        num_up = num_up.scale(den_up.lc.inv())
        den_up = den_up.monic()
        for fac, mult in squarefree(r_t.den, 0):
            _, fx = split_k_factors(fac, 0)
            if fx.degree(0) <= 0:
                continue
            if mult >= 2:
                return None
            fx_up = UPoly.from_mpoly(fx, 0).monic()
            cof = den_up.exact_div(fx_up)
            splits, rest = residue_split(num_up, cof, fx_up, wanted=lambda m: m > 0)
            if rest.degree > 0:
                return None
            for g_up, m in splits:
                mp, _ = unit_normal_factor(g_up)
                p_acc = p_acc * mp**m
    r = r_t - RatFun(p_acc.derive(0), p_acc)
    if any(v != 0 for v in r.variables()):
        return None
    return p_acc.normal(), r


def kt_annihilator(e: HElement) -> Optional[OreOp]:
    """A nonzero operator in k(t)<Dt> annihilating the single-part element e.

    Exists iff the t-log-derivative of the part admits the polynomial/rational
    split; the operator is Dt^(deg_t(p)+1) twisted by r and is not claimed
    minimal.  The zero element returns the unit operator.
    """
    if e.is_zero:
        return OreOp.one(e.nvars)
    c, term = e.sole_part()
    nu = c.derive(0) / c + term.logd[0]
    res = split_log_derivative(nu)
    if res is None:
        return None
    p, r = res
    base = OreOp.dt(e.nvars, p.degree(0) + 1)
    return twist(base, r)
