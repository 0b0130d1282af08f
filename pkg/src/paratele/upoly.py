"""Dense univariate polynomials over the rational-function field.

A UPoly is a polynomial in one distinguished variable whose coefficients are
RatFun values free of that variable.  This is the workhorse view for the
algorithms that need field-coefficient univariate arithmetic: partial
fractions, residue computations and the parametrized first-order ODE solver.

``var = -1`` denotes a detached indeterminate that is not one of the session
variables (used for resultants in an auxiliary unknown); such polynomials
support ring arithmetic and evaluation at rationals but not expansion back
into a RatFun.
"""

from __future__ import annotations

from .errors import ZeroPolynomialError
from .ratfun import MPoly, Rat, RatFun, gcd as mpoly_gcd, lcm as mpoly_lcm


class UPoly:
    """coeffs[k] is the coefficient of var**k; no trailing zeros; () is zero."""

    __slots__ = ("coeffs", "var", "nvars")

    def __init__(self, coeffs, var: int, nvars: int):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero:
            coeffs.pop()
        self.coeffs = tuple(coeffs)
        self.var = var
        self.nvars = nvars

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(var: int, nvars: int) -> "UPoly":
        return UPoly((), var, nvars)

    @staticmethod
    def one(var: int, nvars: int) -> "UPoly":
        return UPoly((RatFun.one(nvars),), var, nvars)

    @staticmethod
    def const(c: RatFun, var: int) -> "UPoly":
        return UPoly((c,), var, c.nvars)

    @staticmethod
    def gen(var: int, nvars: int) -> "UPoly":
        return UPoly((RatFun.zero(nvars), RatFun.one(nvars)), var, nvars)

    @staticmethod
    def from_mpoly(p: MPoly, var: int) -> "UPoly":
        cs = p.coeffs_in(var)
        if not cs:
            return UPoly.zero(var, p.nvars)
        out = [RatFun.zero(p.nvars)] * (max(cs) + 1)
        for k, c in cs.items():
            out[k] = RatFun.from_poly(c)
        return UPoly(out, var, p.nvars)

    @staticmethod
    def from_ratfun(f: RatFun, var: int) -> tuple:
        """View f as num/den in k(others)[var]; returns (num, den) UPolys."""
        return UPoly.from_mpoly(f.num, var), UPoly.from_mpoly(f.den, var)

    # -- views ------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> RatFun:
        if not self.coeffs:
            raise ZeroPolynomialError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> RatFun:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return RatFun.zero(self.nvars)

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, UPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UPoly(var={self.var}, coeffs={list(self.coeffs)!r})"

    # -- arithmetic -----------------------------------------------------------------

    def __add__(self, other: "UPoly") -> "UPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        z = RatFun.zero(self.nvars)
        out = [
            (self.coeffs[k] if k < len(self.coeffs) else z)
            + (other.coeffs[k] if k < len(other.coeffs) else z)
            for k in range(n)
        ]
        return UPoly(out, self.var, self.nvars)

    def __neg__(self) -> "UPoly":
        return UPoly([-c for c in self.coeffs], self.var, self.nvars)

    def __sub__(self, other: "UPoly") -> "UPoly":
        return self + (-other)

    def __mul__(self, other: "UPoly") -> "UPoly":
        if self.is_zero or other.is_zero:
            return UPoly.zero(self.var, self.nvars)
        z = RatFun.zero(self.nvars)
        out = [z] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero:
                    out[i + j] = out[i + j] + a * b
        return UPoly(out, self.var, self.nvars)

    def scale(self, c: RatFun) -> "UPoly":
        if c.is_zero:
            return UPoly.zero(self.var, self.nvars)
        return UPoly([a * c for a in self.coeffs], self.var, self.nvars)

    def shift_pow(self, k: int) -> "UPoly":
        """Multiply by var**k."""
        if self.is_zero:
            return self
        z = RatFun.zero(self.nvars)
        return UPoly([z] * k + list(self.coeffs), self.var, self.nvars)

    def __pow__(self, k: int) -> "UPoly":
        out = UPoly.one(self.var, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def divmod(self, other: "UPoly") -> tuple:
        if other.is_zero:
            raise ZeroDivisionError("univariate division by zero")
        q = UPoly.zero(self.var, self.nvars)
        r = self
        d = other.degree
        lc_inv = other.lc.inv()
        while not r.is_zero and r.degree >= d:
            k = r.degree - d
            c = r.lc * lc_inv
            q = q + UPoly.const(c, self.var).shift_pow(k)
            r = r - other.scale(c).shift_pow(k)
        return q, r

    def __mod__(self, other: "UPoly") -> "UPoly":
        return self.divmod(other)[1]

    def exact_div(self, other: "UPoly") -> "UPoly":
        q, r = self.divmod(other)
        if not r.is_zero:
            raise ZeroPolynomialError("univariate division is not exact")
        return q

    def monic(self) -> "UPoly":
        if self.is_zero:
            return self
        return self.scale(self.lc.inv())

    # -- calculus and evaluation --------------------------------------------------

    def diff(self) -> "UPoly":
        """Derivative in the main variable (the coefficients are constants)."""
        out = [self.coeffs[k + 1] * (k + 1) for k in range(len(self.coeffs) - 1)]
        return UPoly(out, self.var, self.nvars)

    def eval(self, x: RatFun) -> RatFun:
        acc = RatFun.zero(self.nvars)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_rat(self, x) -> RatFun:
        return self.eval(RatFun.const(Rat(x), self.nvars))

    def to_ratfun(self) -> RatFun:
        """Expand back to a RatFun (requires a genuine session variable)."""
        if self.var < 0:
            raise ValueError("detached indeterminate cannot be expanded")
        v = RatFun.var(self.var, self.nvars)
        return self.eval(v)


# -- field gcd machinery ------------------------------------------------------------


def clear_to_mpoly(a: UPoly) -> MPoly:
    """A nonzero v-free multiple of a, as a polynomial in all variables."""
    den_all = MPoly.const(1, a.nvars)
    for c in a.coeffs:
        if not c.is_zero:
            den_all = mpoly_lcm(den_all, c.den)
    coeffs = {}
    for k, c in enumerate(a.coeffs):
        if not c.is_zero:
            coeffs[k] = c.num * den_all.exact_div(c.den)
    return MPoly.from_coeffs_in(a.var, coeffs, a.nvars)


def ugcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd over the coefficient field.

    Computed at the multivariate level (clear denominators, polynomial gcd,
    drop the content free of the main variable); the Euclidean remainder
    sequence over the function field would blow up.
    """
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    if a.degree == 0 or b.degree == 0:
        return UPoly.one(a.var, a.nvars)
    g = mpoly_gcd(clear_to_mpoly(a), clear_to_mpoly(b))
    if g.degree(a.var) <= 0:
        return UPoly.one(a.var, a.nvars)
    cont = g.content_in(a.var)
    if not cont.is_const:
        g = g.exact_div(cont)
    return UPoly.from_mpoly(g, a.var).monic()


def ugcdex(a: UPoly, b: UPoly) -> tuple:
    """Extended Euclid: (g, s, t) with s*a + t*b = g, g monic."""
    var, nv = a.var, a.nvars
    r0, r1 = a, b
    s0, s1 = UPoly.one(var, nv), UPoly.zero(var, nv)
    t0, t1 = UPoly.zero(var, nv), UPoly.one(var, nv)
    while not r1.is_zero:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero:
        return r0, s0, t0
    c = r0.lc.inv()
    return r0.scale(c), s0.scale(c), t0.scale(c)


def ulcm(a: UPoly, b: UPoly) -> UPoly:
    if a.is_zero or b.is_zero:
        return UPoly.zero(a.var, a.nvars)
    return (a * b).exact_div(ugcd(a, b)).monic()


def resultant(a: UPoly, b: UPoly) -> RatFun:
    """Resultant of a and b over the coefficient field."""
    nv = a.nvars
    if a.is_zero or b.is_zero:
        return RatFun.zero(nv)
    m, n = a.degree, b.degree
    if n == 0:
        return b.lc**m
    if m == 0:
        return a.lc**n
    neg = (m * n) % 2 == 1
    if m < n:
        r = resultant(b, a)
        return -r if neg else r
    r = a % b
    if r.is_zero:
        return RatFun.zero(nv)
    out = b.lc ** (m - r.degree) * resultant(b, r)
    return -out if neg else out


def squarefree_monic(d: UPoly) -> list:
    """Squarefree decomposition over the field: [(monic factor, multiplicity), ...].

    Delegates to the multivariate decomposition after clearing denominators;
    the factors agree up to units free of the main variable.
    """
    if d.is_zero:
        raise ZeroPolynomialError("squarefree decomposition of zero")
    if d.degree <= 0:
        return []
    from .ratfun import squarefree as mpoly_squarefree

    cleared = clear_to_mpoly(d)
    return [
        (UPoly.from_mpoly(f, d.var).monic(), m)
        for f, m in mpoly_squarefree(cleared, d.var)
    ]


def refine_coprime(factors: list) -> list:
    """A pairwise-coprime monic basis; every input factor is a product of
    powers of basis elements."""
    basis: list = []
    queue = [f.monic() for f in factors if f.degree > 0]
    while queue:
        f = queue.pop()
        if f.degree <= 0:
            continue
        split = False
        for i, g in enumerate(basis):
            h = ugcd(f, g)
            if h.degree > 0:
                if h.degree < g.degree:
                    basis[i] = h
                    queue.append(g.exact_div(h))
                rest = f.exact_div(h)
                while True:
                    h2 = ugcd(rest, h)
                    if h2.degree <= 0:
                        break
                    rest = rest.exact_div(h2)
                if rest.degree > 0:
                    queue.append(rest)
                split = True
                break
        if not split:
            basis.append(f)
    return basis


def multiplicity(d: UPoly, q: UPoly) -> int:
    """Largest k with q**k dividing d (q nonconstant)."""
    k = 0
    while True:
        quo, rem = d.divmod(q)
        if not rem.is_zero:
            return k
        d = quo
        k += 1


# -- interpolation and integer residues ------------------------------------------------


def lagrange(points: list, var: int, nvars: int) -> UPoly:
    """Interpolating polynomial through [(Rat abscissa, RatFun value), ...]."""
    out = UPoly.zero(var, nvars)
    for j, (xj, yj) in enumerate(points):
        if yj.is_zero:
            continue
        num = UPoly.const(yj, var)
        den = Rat(1)
        for k, (xk, _) in enumerate(points):
            if k == j:
                continue
            num = num * UPoly((RatFun.const(-xk, nvars), RatFun.one(nvars)), var, nvars)
            den = den * (xj - xk)
        out = out + num.scale(RatFun.const(1 / den, nvars))
    return out


def _integer_divisors(n: int) -> list:
    n = abs(int(n))
    if n == 0:
        return []
    if n > 1 << 52:
        raise RuntimeError("integer-root candidate bound is implausibly large")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def integer_roots(r: UPoly) -> list:
    """All nonzero integer roots of a nonzero polynomial over the field."""
    if r.is_zero:
        raise ZeroPolynomialError("integer roots of the zero polynomial")
    coeffs = list(r.coeffs)
    while coeffs and coeffs[0].is_zero:
        coeffs.pop(0)  # nonzero roots only, so the power of var can go
    if len(coeffs) <= 1:
        return []
    den_all = MPoly.const(1, r.nvars)
    for c in coeffs:
        if not c.is_zero:
            den_all = mpoly_lcm(den_all, c.den)
    cleared = [c.num * den_all.exact_div(c.den) for c in coeffs]
    content = None
    for p in cleared:
        if not p.is_zero:
            c = p.rat_content()
            content = c if content is None else _rat_gcd(content, c)
    c0 = cleared[0].rat_content() / content
    if c0.denominator != 1:
        raise RuntimeError("trailing coefficient content is not integral")
    out = []
    for d in _integer_divisors(int(c0.numerator)):
        for m in (d, -d):
            if r.eval_rat(m).is_zero:
                out.append(m)
    return sorted(out)


def _rat_gcd(a: Rat, b: Rat) -> Rat:
    import math as _m

    num = _m.gcd(int(a.numerator), int(b.numerator))
    da, db = int(a.denominator), int(b.denominator)
    den = da // _m.gcd(da, db) * db
    return Rat(num, den)


def residue_candidates(num: UPoly, cof: UPoly, s: UPoly) -> list:
    """Integer values taken by the residue function of num/(s*cof) on roots of s.

    s monic, squarefree, coprime to cof and to num's poles; the residue at a
    root a of s is num(a)/(s'(a)*cof(a)).  Candidates come from the integer
    roots of resultant_v(s, num - z*s'*cof) in the auxiliary unknown z,
    recovered by interpolation.
    """
    d = s.degree
    w = (s.diff() * cof) % s
    a = num % s
    pts = []
    for j in range(d + 1):
        val = resultant(s, a - w.scale(RatFun.const(j, s.nvars)))
        pts.append((Rat(j), val))
    r = lagrange(pts, -1, s.nvars)
    if r.is_zero:
        raise ZeroPolynomialError("degenerate residue resultant")
    return integer_roots(r)


def residue_split(num: UPoly, cof: UPoly, s: UPoly, wanted=None) -> tuple:
    """Split s by the integer residues of num/(s*cof).

    Returns ([(monic factor, residue m)], leftover): each factor collects the
    roots of s whose residue is the integer m; leftover carries roots with
    non-integer or filtered-out residues.  ``wanted`` restricts the residues
    kept (e.g. positive integers only).
    """
    out = []
    rest = s.monic()
    base = s.diff() * cof
    for m in residue_candidates(num, cof, s):
        if m == 0 or (wanted is not None and not wanted(m)):
            continue
        g = ugcd(rest, num - base.scale(RatFun.const(m, s.nvars)))
        if g.degree > 0:
            out.append((g, m))
            rest = rest.exact_div(g)
            if rest.degree == 0:
                break
    return out, rest


# -- partial fractions -------------------------------------------------------------


def unit_normal_factor(factor: UPoly) -> tuple:
    """Clear a monic field-coefficient factor to a unit-normal MPoly.

    Returns (mpoly, unit) with mpoly = unit * factor and unit a RatFun free of
    the main variable.
    """
    nv = factor.nvars
    den_all = MPoly.const(1, nv)
    for c in factor.coeffs:
        if not c.is_zero:
            den_all = mpoly_lcm(den_all, c.den)
    mp = MPoly.zero(nv)
    for k, c in enumerate(factor.coeffs):
        if c.is_zero:
            continue
        cleared = c.num * den_all.exact_div(c.den)
        e = [0] * nv
        e[factor.var] = k
        mp = mp + cleared.mul_monomial(1, tuple(e))
    u, mp_n = mp.unit_normal()
    unit = RatFun(den_all.mul_scalar(1 / u))
    return mp_n, unit


def partial_fractions(f: RatFun, v: int):
    """Squarefree partial fraction decomposition of f with respect to v.

    Returns (polynomial_part, [(factor, power, numerator), ...]): the
    polynomial part and numerators are RatFun values with v-free
    denominators, factors are unit-normal squarefree MPolys, numerators have
    v-degree below their factor's, and the parts sum to f exactly.
    """
    num, den = UPoly.from_ratfun(f, v)
    num = num.scale(den.lc.inv())
    den = den.monic()
    polypart, rem = num.divmod(den)
    parts = []
    if not rem.is_zero and den.degree > 0:
        for factor, mult in squarefree_monic(den):
            power = factor**mult
            other = den.exact_div(power)
            if other.degree > 0:
                _, _, t = ugcdex(power, other)
                local = (rem * t) % power
            else:
                local = rem
            mp, unit = unit_normal_factor(factor)
            x = local
            digits = []
            while not x.is_zero:
                x, digit = x.divmod(factor)
                digits.append(digit)
            for j, digit in enumerate(digits):
                if digit.is_zero:
                    continue
                p = mult - j
                parts.append((mp, p, digit.to_ratfun() * unit**p))
    return polypart.to_ratfun(), parts
