"""Exact multivariate polynomials and rational functions over the rationals.

Variables are indexed 0..nvars-1; index 0 plays the role of the main
continuous parameter (conventionally printed ``t``) and indices 1..n are the
integration variables (printed ``x1``..``xn``).  The number of variables is
fixed when a problem is loaded and shared by every value taking part in a
computation.

All values are immutable after construction and all operations are pure, so
values may be shared freely between threads.

Coefficients are arbitrary-precision rationals: ``gmpy2.mpq`` when available,
``fractions.Fraction`` otherwise.  Both expose ``numerator``/``denominator``
and hash/compare identically.
"""

from __future__ import annotations

import heapq
import math
from typing import Iterable, Optional

from .errors import InexactDivisionError, ZeroPolynomialError

try:
    from gmpy2 import mpq as Rat, mpz as _mpz  # type: ignore

    def _int_gcd(a, b):
        import gmpy2

        return int(gmpy2.gcd(_mpz(a), _mpz(b)))

except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Rat

    def _int_gcd(a, b):
        return math.gcd(int(a), int(b))


RAT_ZERO = Rat(0)
RAT_ONE = Rat(1)


def _rat_content(coeffs: Iterable) -> Rat:
    """gcd of a nonempty family of rationals: gcd(numerators)/lcm(denominators)."""
    num_gcd = 0
    den_lcm = 1
    for c in coeffs:
        num_gcd = _int_gcd(num_gcd, c.numerator)
        d = int(c.denominator)
        den_lcm = den_lcm // _int_gcd(den_lcm, d) * d
    return Rat(num_gcd, den_lcm)


def _grlex_key(expts: tuple) -> tuple:
    return (sum(expts), expts)


class MPoly:
    """A multivariate polynomial: a map from exponent vectors to nonzero rationals.

    The zero polynomial is the empty map.  The fixed total monomial order is
    graded lexicographic with variable 0 > variable 1 > ... .
    """

    __slots__ = ("terms", "nvars", "_hash")

    def __init__(self, terms: dict, nvars: int):
        self.terms = {e: c for e, c in terms.items() if c != 0}
        self.nvars = nvars
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "MPoly":
        return MPoly({}, nvars)

    @staticmethod
    def const(c, nvars: int) -> "MPoly":
        c = Rat(c)
        if c == 0:
            return MPoly({}, nvars)
        return MPoly({(0,) * nvars: c}, nvars)

    @staticmethod
    def var(v: int, nvars: int) -> "MPoly":
        e = [0] * nvars
        e[v] = 1
        return MPoly({tuple(e): RAT_ONE}, nvars)

    @staticmethod
    def monomial(c, expts: tuple) -> "MPoly":
        c = Rat(c)
        if c == 0:
            return MPoly({}, len(expts))
        return MPoly({tuple(expts): c}, len(expts))

    # -- predicates and views ----------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def const_value(self) -> Rat:
        if not self.terms:
            return RAT_ZERO
        ((e, c),) = self.terms.items()
        if any(e):
            raise ValueError("not a constant polynomial")
        return c

    def degree(self, v: int) -> int:
        """Degree in variable v; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(e[v] for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def involves(self, v: int) -> bool:
        return any(e[v] for e in self.terms)

    def variables(self) -> list:
        """Indices of variables that actually occur."""
        out = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    out.add(i)
        return sorted(out)

    def lead(self) -> tuple:
        """(exponent vector, coefficient) of the grlex-leading term."""
        if not self.terms:
            raise ZeroPolynomialError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def sorted_terms(self) -> list:
        """Terms sorted grlex-descending (for deterministic rendering)."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        from .expr import render_mpoly

        return f"MPoly({render_mpoly(self)})"

    # -- ring arithmetic -----------------------------------------------------

    def _check(self, other: "MPoly"):
        if self.nvars != other.nvars:
            raise ValueError("mixing polynomials over different variable sets")

    def __add__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MPoly(out, self.nvars)

    def __neg__(self) -> "MPoly":
        return MPoly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = -c
            else:
                s = s - c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MPoly(out, self.nvars)

    def __mul__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        if not self.terms or not other.terms:
            return MPoly.zero(self.nvars)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(map(sum, zip(ea, eb)))
                s = out.get(e)
                if s is None:
                    out[e] = ca * cb
                else:
                    s = s + ca * cb
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        return MPoly(out, self.nvars)

    def __pow__(self, k: int) -> "MPoly":
        if k < 0:
            raise ValueError("negative polynomial power")
        out = MPoly.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def mul_scalar(self, c) -> "MPoly":
        c = Rat(c)
        if c == 0:
            return MPoly.zero(self.nvars)
        return MPoly({e: co * c for e, co in self.terms.items()}, self.nvars)

    def mul_monomial(self, c, expts: tuple) -> "MPoly":
        c = Rat(c)
        if c == 0:
            return MPoly.zero(self.nvars)
        return MPoly(
            {tuple(map(sum, zip(e, expts))): co * c for e, co in self.terms.items()},
            self.nvars,
        )

    # -- calculus and substitution -------------------------------------------

    def derive(self, v: int) -> "MPoly":
        out = {}
        for e, c in self.terms.items():
            k = e[v]
            if k:
                e2 = e[:v] + (k - 1,) + e[v + 1 :]
                s = out.get(e2)
                out[e2] = (s + c * k) if s is not None else c * k
        return MPoly(out, self.nvars)

    def eval_vars(self, values: dict) -> "MPoly":
        """Substitute rationals for the variables in ``values`` (index -> Rat)."""
        out: dict = {}
        for e, c in self.terms.items():
            for v, val in values.items():
                k = e[v]
                if k:
                    c = c * val**k
            e2 = tuple(0 if v in values else k for v, k in enumerate(e))
            if c:
                s = out.get(e2)
                if s is None:
                    out[e2] = c
                else:
                    s = s + c
                    if s:
                        out[e2] = s
                    else:
                        del out[e2]
        return MPoly(out, self.nvars)

    # -- normal forms ----------------------------------------------------------

    def rat_content(self) -> Rat:
        """Positive rational c with self/c integer-coefficient and content-free."""
        if not self.terms:
            return RAT_ONE
        return _rat_content(self.terms.values())

    def unit_normal(self) -> tuple:
        """Decompose self = unit * normal.

        ``normal`` has coprime integer coefficients and a positive
        grlex-leading coefficient; ``unit`` is a rational.  The zero
        polynomial returns (1, 0).
        """
        if not self.terms:
            return RAT_ONE, self
        c = self.rat_content()
        if self.lead()[1] < 0:
            c = -c
        return c, self.mul_scalar(1 / c)

    def normal(self) -> "MPoly":
        return self.unit_normal()[1]

    def max_norm(self) -> int:
        """Largest absolute coefficient numerator (integer-coefficient input)."""
        return max(abs(int(c.numerator)) for c in self.terms.values()) if self.terms else 0

    # -- division ---------------------------------------------------------------

    def exact_div(self, d: "MPoly") -> "MPoly":
        """Exact quotient self/d; raises InexactDivisionError when not divisible."""
        self._check(d)
        if d.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if d.is_const:
            return self.mul_scalar(1 / d.const_value())
        if self.is_zero:
            return self
        de, dc = d.lead()
        dtail = [(e, c) for e, c in d.terms.items() if e != de]
        rem = dict(self.terms)
        # lazy max-heap over the remainder's exponents; stale entries are
        # skipped when their coefficient is gone
        heap = [(-sum(e), tuple(-k for k in e)) for e in rem]
        heapq.heapify(heap)
        seen = set(rem)
        out: dict = {}
        while heap:
            td, ne = heapq.heappop(heap)
            e = tuple(-k for k in ne)
            c = rem.get(e)
            if c is None:
                continue
            del rem[e]
            q = tuple(a - b for a, b in zip(e, de))
            if any(k < 0 for k in q):
                raise InexactDivisionError("polynomial division is not exact")
            qc = c / dc
            out[q] = qc
            for e2, c2 in dtail:
                e3 = tuple(map(sum, zip(q, e2)))
                s = rem.get(e3)
                if s is None:
                    rem[e3] = -qc * c2
                    if e3 not in seen:
                        seen.add(e3)
                        heapq.heappush(heap, (-sum(e3), tuple(-k for k in e3)))
                else:
                    s = s - qc * c2
                    if s:
                        rem[e3] = s
                    else:
                        del rem[e3]
        if rem:
            raise InexactDivisionError("polynomial division is not exact")
        return MPoly(out, self.nvars)

    def try_div(self, d: "MPoly") -> Optional["MPoly"]:
        try:
            return self.exact_div(d)
        except InexactDivisionError:
            return None

    # -- univariate-style views --------------------------------------------------

    def coeffs_in(self, v: int) -> dict:
        """Map exponent-of-v -> coefficient polynomial (free of v)."""
        out: dict = {}
        for e, c in self.terms.items():
            k = e[v]
            e2 = e[:v] + (0,) + e[v + 1 :]
            bucket = out.setdefault(k, {})
            bucket[e2] = bucket.get(e2, RAT_ZERO) + c
        return {k: MPoly(b, self.nvars) for k, b in out.items()}

    @staticmethod
    def from_coeffs_in(v: int, coeffs: dict, nvars: int) -> "MPoly":
        out: dict = {}
        for k, p in coeffs.items():
            for e, c in p.terms.items():
                e2 = e[:v] + (e[v] + k,) + e[v + 1 :]
                out[e2] = out.get(e2, RAT_ZERO) + c
        return MPoly(out, nvars)

    def content_in(self, v: int) -> "MPoly":
        """gcd of the coefficients of self as a polynomial in v (free of v)."""
        cs = list(self.coeffs_in(v).values())
        return gcd_many(cs)

    def lead_coeff_in(self, v: int) -> "MPoly":
        cs = self.coeffs_in(v)
        return cs[max(cs)]


# -- gcd --------------------------------------------------------------------


def derive(f, v: int):
    """Partial derivative with respect to variable index v (MPoly or RatFun)."""
    return f.derive(v)


def _monomial_gcd(p: MPoly) -> tuple:
    """Componentwise minimum exponent vector over all terms of p (p != 0)."""
    it = iter(p.terms)
    m = list(next(it))
    for e in it:
        for i, k in enumerate(e):
            if k < m[i]:
                m[i] = k
    return tuple(m)


def _divide_monomial(p: MPoly, mono: tuple) -> MPoly:
    if not any(mono):
        return p
    return MPoly(
        {tuple(a - b for a, b in zip(e, mono)): c for e, c in p.terms.items()}, p.nvars
    )


class _HeuristicFailed(Exception):
    pass


_HEU_TRIES = 6


def _int_eval(p: MPoly, v: int, x: int) -> MPoly:
    """Evaluate integer-coefficient p at variable v = integer x."""
    out: dict = {}
    for e, c in p.terms.items():
        k = e[v]
        if k:
            c = c * x**k
        e2 = e[:v] + (0,) + e[v + 1 :]
        s = out.get(e2)
        if s is None:
            out[e2] = c
        else:
            s = s + c
            if s:
                out[e2] = s
            else:
                del out[e2]
    return MPoly(out, p.nvars)


def _interpolate(h: MPoly, v: int, x: int) -> MPoly:
    """Recover a polynomial in v from its value at the large integer x (x-adic)."""
    digits = []
    half = x // 2
    while not h.is_zero:
        digit: dict = {}
        rest: dict = {}
        for e, c in h.terms.items():
            g = int(c) % x
            if g > half:
                g -= x
            if g:
                digit[e] = Rat(g)
            r = (c - g) / x
            if r:
                rest[e] = r
        digits.append(MPoly(digit, h.nvars))
        h = MPoly(rest, h.nvars)
    out: dict = {}
    for k, d in enumerate(digits):
        for e, c in d.terms.items():
            out[e[:v] + (k,) + e[v + 1 :]] = c
    p = MPoly(out, h.nvars)
    if not p.is_zero and p.lead()[1] < 0:
        p = -p
    return p


def _heu_gcd(f: MPoly, g: MPoly, vs: list) -> MPoly:
    """Heuristic gcd of integer-primitive f, g by evaluation/interpolation.

    Evaluates at a large integer, takes the gcd of the images, and lifts it
    back; a division check certifies the candidate.  Raises _HeuristicFailed
    after a few unlucky evaluation points.
    """
    if not vs:
        return MPoly.const(_int_gcd(f.const_value().numerator, g.const_value().numerator), f.nvars)
    v = vs[0]
    f_norm, g_norm = f.max_norm(), g.max_norm()
    b = 2 * min(f_norm, g_norm) + 29
    flc = abs(int(f.lead_coeff_in(v).lead()[1].numerator)) if f.involves(v) else 1
    glc = abs(int(g.lead_coeff_in(v).lead()[1].numerator)) if g.involves(v) else 1
    x = max(min(b, 99 * math.isqrt(b)), 2 * min(f_norm // flc, g_norm // glc) + 4)
    for _ in range(_HEU_TRIES):
        ff = _int_eval(f, v, x)
        gg = _int_eval(g, v, x)
        if not ff.is_zero and not gg.is_zero:
            h = _heu_gcd(ff, gg, [w for w in vs[1:] if ff.involves(w) or gg.involves(w)])
            h = _interpolate(h, v, x).normal()
            if not h.is_zero and f.try_div(h) is not None and g.try_div(h) is not None:
                return h
        x = 73794 * x * math.isqrt(math.isqrt(x)) // 27011
    raise _HeuristicFailed


def _prem(f: dict, g: dict, nvars: int) -> dict:
    """Pseudo-remainder of f by g, both as {deg: MPoly coeff} maps in one variable."""
    if not g:
        raise ZeroDivisionError
    dg = max(g)
    lg = g[dg]
    f = dict(f)
    while f and max(f) >= dg:
        df = max(f)
        lf = f.pop(df)
        k = df - dg
        # f := lg*f - lf*g*X^k  (top term cancels by construction)
        f = {e: lg * c for e, c in f.items()}
        for e, c in g.items():
            if e == dg:
                continue
            e2 = e + k
            s = f.get(e2, None)
            p = lf * c
            if s is None:
                f[e2] = -p
            else:
                s = s - p
                if not s.is_zero:
                    f[e2] = s
                else:
                    del f[e2]
    return f


def _prs_gcd(f: MPoly, g: MPoly) -> MPoly:
    """Primitive polynomial remainder sequence gcd (fallback path)."""
    fv, gv = set(f.variables()), set(g.variables())
    common = sorted(fv & gv)
    if not common:
        return MPoly.const(1, f.nvars)
    v = min(common, key=lambda w: max(f.degree(w), g.degree(w)))
    fc = f.content_in(v)
    gc = g.content_in(v)
    c = gcd(fc, gc)
    a = f.exact_div(fc)
    b = g.exact_div(gc)
    if a.degree(v) < b.degree(v):
        a, b = b, a
    while not b.is_zero:
        r = _prem(a.coeffs_in(v), b.coeffs_in(v), f.nvars)
        a, b = b, MPoly.from_coeffs_in(v, r, f.nvars)
        if not b.is_zero:
            b = b.exact_div(b.content_in(v)).normal()
    return (c * a.exact_div(a.content_in(v))).normal()


def gcd(p: MPoly, q: MPoly) -> MPoly:
    """Greatest common divisor, unit-normal; gcd(0, q) is the normal form of q."""
    if p.nvars != q.nvars:
        raise ValueError("mixing polynomials over different variable sets")
    if p.is_zero:
        return q.normal()
    if q.is_zero:
        return p.normal()
    if p.is_const or q.is_const:
        return MPoly.const(1, p.nvars)
    mp = _monomial_gcd(p)
    mq = _monomial_gcd(q)
    mono = tuple(min(a, b) for a, b in zip(mp, mq))
    a = _divide_monomial(p, mp).normal()
    b = _divide_monomial(q, mq).normal()
    if a.terms == b.terms:
        h = a
    elif a.is_const or b.is_const:
        h = MPoly.const(1, p.nvars)
    else:
        vs = sorted(set(a.variables()) | set(b.variables()))
        try:
            h = _heu_gcd(a, b, vs)
        except _HeuristicFailed:
            h = _prs_gcd(a, b)
    if any(mono):
        h = h.mul_monomial(RAT_ONE, mono)
    return h


def gcd_many(ps: list) -> MPoly:
    if not ps:
        raise ValueError("gcd of an empty family")
    h = ps[0].normal()
    for p in ps[1:]:
        if h.is_const and not h.is_zero:
            break
        h = gcd(h, p)
    return h


def lcm(p: MPoly, q: MPoly) -> MPoly:
    if p.is_zero or q.is_zero:
        return MPoly.zero(p.nvars)
    return (p * q).exact_div(gcd(p, q)).normal()


# -- rational functions -------------------------------------------------------


class RatFun:
    """A rational function num/den in canonical form.

    Canonical means gcd(num, den) = 1 and den unit-normal (coprime integer
    coefficients, positive grlex-leading coefficient); zero is 0/1.  The
    rational scale lives in the numerator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: Optional[MPoly] = None, _canonical: bool = False):
        if den is None:
            den = MPoly.const(1, num.nvars)
        if _canonical:
            self.num = num
            self.den = den
            return
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            self.num = num
            self.den = MPoly.const(1, num.nvars)
            return
        g = gcd(num, den)
        if not g.is_const:
            num = num.exact_div(g)
            den = den.exact_div(g)
        u, den = den.unit_normal()
        if u != 1:
            num = num.mul_scalar(1 / u)
        self.num = num
        self.den = den

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "RatFun":
        z = MPoly.zero(nvars)
        return RatFun(z, MPoly.const(1, nvars), _canonical=True)

    @staticmethod
    def const(c, nvars: int) -> "RatFun":
        return RatFun(MPoly.const(c, nvars), MPoly.const(1, nvars), _canonical=True)

    @staticmethod
    def one(nvars: int) -> "RatFun":
        return RatFun.const(1, nvars)

    @staticmethod
    def var(v: int, nvars: int) -> "RatFun":
        return RatFun(MPoly.var(v, nvars), MPoly.const(1, nvars), _canonical=True)

    @staticmethod
    def from_poly(p: MPoly) -> "RatFun":
        return RatFun(p, MPoly.const(1, p.nvars), _canonical=True)

    # -- predicates -------------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_poly(self) -> bool:
        return self.den.is_const

    @property
    def is_const(self) -> bool:
        return self.num.is_const and self.den.is_const

    def const_value(self) -> Rat:
        return self.num.const_value() / self.den.const_value()

    def involves(self, v: int) -> bool:
        return self.num.involves(v) or self.den.involves(v)

    def variables(self) -> list:
        return sorted(set(self.num.variables()) | set(self.den.variables()))

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = RatFun.const(other, self.nvars)
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        from .expr import render_ratfun

        return f"RatFun({render_ratfun(self)})"

    # -- field arithmetic ---------------------------------------------------------

    def __add__(self, other: "RatFun") -> "RatFun":
        if isinstance(other, int):
            other = RatFun.const(other, self.nvars)
        a, b, c, d = self.num, self.den, other.num, other.den
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if b.terms == d.terms:
            return RatFun(a + c, b)
        g = gcd(b, d)
        if g.is_const:
            num = a * d + c * b
            if num.is_zero:
                return RatFun.zero(self.nvars)
            u, den = (b * d).unit_normal()
            return RatFun(num.mul_scalar(1 / u), den, _canonical=True)
        b1 = b.exact_div(g)
        d1 = d.exact_div(g)
        t = a * d1 + c * b1
        if t.is_zero:
            return RatFun.zero(self.nvars)
        h = gcd(t, g)
        if not h.is_const:
            t = t.exact_div(h)
            g = g.exact_div(h)
        u, den = (g * b1 * d1).unit_normal()
        return RatFun(t.mul_scalar(1 / u), den, _canonical=True)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "RatFun":
        return RatFun(-self.num, self.den, _canonical=True)

    def __sub__(self, other: "RatFun") -> "RatFun":
        if isinstance(other, int):
            other = RatFun.const(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other: "RatFun") -> "RatFun":
        if isinstance(other, int):
            other = RatFun.const(other, self.nvars)
        if self.is_zero or other.is_zero:
            return RatFun.zero(self.nvars)
        a, b, c, d = self.num, self.den, other.num, other.den
        g1 = gcd(a, d)
        if not g1.is_const:
            a = a.exact_div(g1)
            d = d.exact_div(g1)
        g2 = gcd(c, b)
        if not g2.is_const:
            c = c.exact_div(g2)
            b = b.exact_div(g2)
        u, den = (b * d).unit_normal()
        return RatFun((a * c).mul_scalar(1 / u), den, _canonical=True)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other: "RatFun") -> "RatFun":
        if isinstance(other, int):
            other = RatFun.const(other, self.nvars)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return self * RatFun(other.den, other.num)

    def __rtruediv__(self, other):
        if self.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        inv = RatFun(self.den, self.num)
        return inv * other

    def __pow__(self, k: int) -> "RatFun":
        if k < 0:
            return (1 / self) ** (-k)
        return RatFun(self.num**k, self.den**k)

    def inv(self) -> "RatFun":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        return RatFun(self.den, self.num)

    # -- calculus -------------------------------------------------------------------

    def derive(self, v: int) -> "RatFun":
        dn = self.num.derive(v)
        dd = self.den.derive(v)
        if dd.is_zero:
            return RatFun(dn, self.den)
        e = gcd(self.den, dd)
        d1 = self.den.exact_div(e)
        # f' = (num'*d1 - num*(den'/e)) / (den*d1)
        return RatFun(dn * d1 - self.num * dd.exact_div(e), self.den * d1)

    def eval_vars(self, values: dict) -> "RatFun":
        den = self.den.eval_vars(values)
        if den.is_zero:
            raise ZeroDivisionError("substitution hits a pole")
        return RatFun(self.num.eval_vars(values), den)


def rf_arith(a: RatFun, b: RatFun, kind: str) -> RatFun:
    """Field arithmetic dispatch: kind in {"add", "sub", "mul", "div"}."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown arithmetic kind: {kind!r}")


# -- squarefree decomposition ----------------------------------------------------


def squarefree(p: MPoly, v: int) -> list:
    """Squarefree decomposition of p with respect to variable v.

    Returns [(factor, multiplicity), ...] with the factors pairwise coprime,
    squarefree in v and unit-normal; p equals a v-free unit times the product
    of factor**multiplicity.
    """
    if p.is_zero:
        raise ZeroPolynomialError("squarefree decomposition of zero")
    if p.degree(v) <= 0:
        return []
    cont = p.content_in(v)
    p = p.exact_div(cont).normal()
    out = []
    g = gcd(p, p.derive(v))
    c = p.exact_div(g)
    i = 1
    while g.degree(v) > 0:
        d = gcd(g, c)
        f = c.exact_div(d)
        if f.degree(v) > 0:
            out.append((f.normal(), i))
        c = d
        g = g.exact_div(d)
        i += 1
    if c.degree(v) > 0:
        out.append((c.normal(), i))
    return out


# -- separating constant-coefficient factors -------------------------------------


def _spec_points(nvars: int, skip: int, attempt: int) -> dict:
    """Deterministic pseudo-random rational points for the x-variables."""
    primes = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
    out = {}
    for v in range(nvars):
        if v == skip:
            continue
        q = primes[(v + 3 * attempt) % len(primes)]
        out[v] = Rat(2 * q + 7 * attempt + v, q + attempt + 1)
    return out


def _upoly_int_gcd(p: MPoly, q: MPoly, v: int) -> MPoly:
    """gcd of two univariate (in v) rational-coefficient polynomials, unit-normal."""
    return gcd(p.normal(), q.normal())


def split_k_factors(p: MPoly, v: int = 0) -> tuple:
    """Split p = p_k * p_x (up to a unit) viewed as a polynomial in v.

    p_k collects the content-free part with all coefficients rational (no
    other variable occurs); no nonconstant factor of p_x lies in Q[v].  Uses
    gcds of random specializations of the other variables, verified by exact
    division; retries with fresh points on coincidences.
    """
    if p.is_zero:
        raise ZeroPolynomialError("cannot split the zero polynomial")
    others = [w for w in p.variables() if w != v]
    if not others:
        return p.normal(), MPoly.const(1, p.nvars)
    if p.degree(v) <= 0:
        return MPoly.const(1, p.nvars), p.normal()
    for attempt in range(24):
        try:
            s1 = p.eval_vars(_spec_points(p.nvars, v, 2 * attempt))
            s2 = p.eval_vars(_spec_points(p.nvars, v, 2 * attempt + 1))
        except ZeroDivisionError:  # pragma: no cover - points are poles only by fluke
            continue
        if s1.is_zero or s2.is_zero:
            continue
        cand = _upoly_int_gcd(s1, s2, v)
        if cand.is_const:
            p_k = MPoly.const(1, p.nvars)
            p_x = p.normal()
            return p_k, p_x
        cof = p.try_div(cand)
        if cof is None:
            continue
        # strip any x-dependence the candidate may not have (cand is in Q[v] by
        # construction since both specializations are), then certify the cofactor
        # carries no further Q[v] factor via two fresh specializations.
        try:
            t1 = cof.eval_vars(_spec_points(p.nvars, v, 2 * attempt + 5))
            t2 = cof.eval_vars(_spec_points(p.nvars, v, 2 * attempt + 11))
        except ZeroDivisionError:  # pragma: no cover
            continue
        if t1.is_zero or t2.is_zero:
            continue
        check = _upoly_int_gcd(t1, t2, v)
        if check.is_const:
            return cand.normal(), cof.normal()
    raise RuntimeError("could not separate constant-coefficient factors (unlucky points)")


def partial_fractions(f: RatFun, v: int):
    """Squarefree partial fraction decomposition with respect to variable v.

    Returns (polynomial_part, [(factor, power, numerator), ...]) where the
    polynomial part and the numerators are RatFun values whose denominators
    are free of v, each factor is a unit-normal squarefree MPoly, and the sum
    of all parts reconstructs f exactly.  Numerators have v-degree below the
    v-degree of their factor.
    """
    from . import upoly

    return upoly.partial_fractions(f, v)
