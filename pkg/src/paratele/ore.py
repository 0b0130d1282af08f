"""The operator algebra in Dt over the rational-function field.

Elements are linear differential operators sum a_i * Dt**i with RatFun
coefficients a_i and the commutation rule Dt*a = a*Dt + d/dt(a).  Internal
computations freely use rational-function coefficients; the normalized
presentation clears denominators and content so the coefficients become
collectively primitive polynomials with a positive leading value.
"""

from __future__ import annotations

from .errors import OperandZeroError
from .linalg import nullspace
from .ratfun import MPoly, Rat, RatFun, gcd_many, lcm as mpoly_lcm


class OreOp:
    """coeffs[i] multiplies Dt**i; no trailing zero coefficients; () is zero."""

    __slots__ = ("coeffs", "nvars")

    def __init__(self, coeffs, nvars: int):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero:
            coeffs.pop()
        self.coeffs = tuple(coeffs)
        self.nvars = nvars

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "OreOp":
        return OreOp((), nvars)

    @staticmethod
    def one(nvars: int) -> "OreOp":
        return OreOp((RatFun.one(nvars),), nvars)

    @staticmethod
    def const(c: RatFun) -> "OreOp":
        return OreOp((c,), c.nvars)

    @staticmethod
    def dt(nvars: int, power: int = 1) -> "OreOp":
        z = RatFun.zero(nvars)
        return OreOp([z] * power + [RatFun.one(nvars)], nvars)

    # -- views ----------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> RatFun:
        return self.coeffs[-1]

    def coeff(self, i: int) -> RatFun:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return RatFun.zero(self.nvars)

    def is_free_of(self, v: int) -> bool:
        return all(not c.involves(v) for c in self.coeffs)

    def x_free(self) -> bool:
        """True when every coefficient involves only the main variable t."""
        return all(
            all(w == 0 for w in c.variables()) or c.variables() == [0] or not c.variables()
            for c in self.coeffs
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, OreOp):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        from .expr import render_oreop

        return f"OreOp({render_oreop(self)})"

    def __str__(self) -> str:
        from .expr import render_oreop

        return render_oreop(self)

    # -- module arithmetic --------------------------------------------------------

    def __add__(self, other: "OreOp") -> "OreOp":
        n = max(len(self.coeffs), len(other.coeffs))
        out = [self.coeff(i) + other.coeff(i) for i in range(n)]
        return OreOp(out, self.nvars)

    def __neg__(self) -> "OreOp":
        return OreOp([-c for c in self.coeffs], self.nvars)

    def __sub__(self, other: "OreOp") -> "OreOp":
        return self + (-other)

    def scale(self, f: RatFun) -> "OreOp":
        """Left multiplication by a function."""
        if f.is_zero:
            return OreOp.zero(self.nvars)
        return OreOp([c * f for c in self.coeffs], self.nvars)

    def dt_shift(self) -> "OreOp":
        """Left multiplication by Dt: Dt * self."""
        z = RatFun.zero(self.nvars)
        out = [z] * (len(self.coeffs) + 1)
        for j, c in enumerate(self.coeffs):
            out[j] = out[j] + c.derive(0)
            out[j + 1] = out[j + 1] + c
        return OreOp(out, self.nvars)

    def __mul__(self, other: "OreOp") -> "OreOp":
        """Ring product using Dt*a = a*Dt + d/dt(a)."""
        if self.is_zero or other.is_zero:
            return OreOp.zero(self.nvars)
        acc = OreOp.zero(self.nvars)
        power = other
        for i, a in enumerate(self.coeffs):
            if not a.is_zero:
                acc = acc + power.scale(a)
            if i < len(self.coeffs) - 1:
                power = power.dt_shift()
        return acc

    def __pow__(self, k: int) -> "OreOp":
        if k < 0:
            raise ValueError("negative operator power")
        out = OreOp.one(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    # -- evaluation on plain rational functions ------------------------------------

    def apply_ratfun(self, f: RatFun) -> RatFun:
        acc = RatFun.zero(self.nvars)
        d = f
        for i, c in enumerate(self.coeffs):
            if not c.is_zero:
                acc = acc + c * d
            if i < len(self.coeffs) - 1:
                d = d.derive(0)
        return acc

    # -- Euclidean structure ----------------------------------------------------------

    def right_divmod(self, other: "OreOp") -> tuple:
        """Quotient and remainder of right division: self = Q*other + R."""
        if other.is_zero:
            raise OperandZeroError("right division by the zero operator")
        q = OreOp.zero(self.nvars)
        r = self
        d = other.order
        while not r.is_zero and r.order >= d:
            k = r.order - d
            c = r.lead / other.lead
            mono = OreOp([RatFun.zero(self.nvars)] * k + [c], self.nvars)
            q = q + mono
            r = r - mono * other
        return q, r

    def right_divides(self, other: "OreOp") -> bool:
        """True when other = Q*self for some Q."""
        return other.right_divmod(self)[1].is_zero

    # -- normalization -------------------------------------------------------------------

    def normalized_with_unit(self) -> tuple:
        """Returns (N, u) with N = u*self, coefficients of N collectively
        primitive polynomials and the leading value positive."""
        if self.is_zero:
            return self, RatFun.one(self.nvars)
        den_all = MPoly.const(1, self.nvars)
        for c in self.coeffs:
            if not c.is_zero:
                den_all = mpoly_lcm(den_all, c.den)
        nums = []
        for c in self.coeffs:
            if c.is_zero:
                nums.append(MPoly.zero(self.nvars))
            else:
                nums.append(c.num * den_all.exact_div(c.den))
        g = gcd_many([p for p in nums if not p.is_zero])
        nums = [p.exact_div(g) for p in nums]
        content = None
        for p in nums:
            if not p.is_zero:
                c = p.rat_content()
                content = c if content is None else _rat_gcd2(content, c)
        if nums[-1].lead()[1] < 0:
            content = -content
        coeffs = [RatFun.from_poly(p.mul_scalar(1 / content)) for p in nums]
        unit = RatFun(den_all) / (RatFun(g.mul_scalar(content)))
        return OreOp(coeffs, self.nvars), unit

    def normalized(self) -> "OreOp":
        return self.normalized_with_unit()[0]

    def monic(self) -> "OreOp":
        """Divide by the leading coefficient (for display)."""
        if self.is_zero:
            return self
        inv = self.lead.inv()
        return OreOp([c * inv for c in self.coeffs], self.nvars)


def _rat_gcd2(a: Rat, b: Rat) -> Rat:
    import math

    num = math.gcd(int(a.numerator), int(b.numerator))
    da, db = int(a.denominator), int(b.denominator)
    return Rat(num, da // math.gcd(da, db) * db)


def twist(a: OreOp, r: RatFun) -> OreOp:
    """Substitute Dt -> Dt - r and expand; normalized.

    If a annihilates a function p, the twist annihilates p*w for any w whose
    t-log-derivative is r.
    """
    nv = a.nvars
    base = OreOp((-r, RatFun.one(nv)), nv)
    acc = OreOp.zero(nv)
    power = OreOp.one(nv)
    for i, c in enumerate(a.coeffs):
        if not c.is_zero:
            acc = acc + power.scale(c)
        if i < len(a.coeffs) - 1:
            power = base * power
    return acc.normalized()


def lclm_cofactors(a: OreOp, b: OreOp) -> tuple:
    """Least common left multiple with cofactors: (L, U, V), L = U*a = V*b.

    L is the normalized minimal-order operator right-divisible by both a and
    b, found order by order with an undetermined-coefficient linear system.
    """
    if a.is_zero or b.is_zero:
        raise OperandZeroError("lclm of a zero operator")
    nv = a.nvars
    if a.order == 0:
        n, u = b.normalized_with_unit()
        return n, n * OreOp.const(a.coeffs[0].inv()), OreOp.const(u)
    if b.order == 0:
        n, u = a.normalized_with_unit()
        return n, OreOp.const(u), n * OreOp.const(b.coeffs[0].inv())
    na = a.normalized()
    nb = b.normalized()
    if na == nb:
        u = na.right_divmod(a)[0]
        v = na.right_divmod(b)[0]
        return na, u, v
    for d in range(max(a.order, b.order), a.order + b.order + 1):
        p = d - a.order
        q = d - b.order
        # columns: u_0..u_p, v_0..v_q; rows: coefficient of Dt^m in U*a - V*b
        da = [a]
        for _ in range(p):
            da.append(da[-1].dt_shift())
        db = [b]
        for _ in range(q):
            db.append(db[-1].dt_shift())
        rows = []
        for m in range(d + 1):
            row = [da[i].coeff(m) for i in range(p + 1)]
            row += [-db[j].coeff(m) for j in range(q + 1)]
            rows.append(row)
        basis = nullspace(rows, p + 1 + q + 1, nv)
        if not basis:
            continue
        vec = basis[0]
        u_op = OreOp(vec[: p + 1], nv)
        v_op = OreOp(vec[p + 1 :], nv)
        l_raw = u_op * a
        l, unit = l_raw.normalized_with_unit()
        return l, u_op.scale(unit), v_op.scale(unit)
    raise AssertionError("lclm search failed below the order bound")  # pragma: no cover


def lclm(a: OreOp, b: OreOp) -> OreOp:
    """Normalized least common left multiple."""
    return lclm_cofactors(a, b)[0]
