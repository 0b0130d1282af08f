"""Parametrized first-order linear ODE solver over the rational functions.

Solves d_z(u) + w*u = e_0*phi_0 + ... + e_rho*phi_rho for rational u and
unknown parameters e_i free of z, returning a basis of the full solution
space.  Completeness is the contract: no solution exists outside the span of
the returned basis.

The method is the standard one for first-order parametrized equations: a
denominator bound for u from local analysis at each squarefree denominator
factor, a numerator degree bound from the analysis at infinity, then exact
linear algebra over the z-constant subfield.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .linalg import nullspace
from .ratfun import RatFun
from .upoly import (
    UPoly,
    multiplicity,
    refine_coprime,
    residue_candidates,
    squarefree_monic,
    ulcm,
)


@dataclass(frozen=True)
class ParamRdeProblem:
    """d_z(u) + w*u = sum e_i * rhs[i], with z one of the x-variables."""

    var: int
    w: RatFun
    rhs: tuple

    def __post_init__(self):
        object.__setattr__(self, "rhs", tuple(self.rhs))
        if self.var < 1:
            raise ValueError("the ODE variable must be one of the x-variables")


@dataclass(frozen=True)
class ParamRdeSolutionSpace:
    """Reduced-echelon basis of all solutions (e_0..e_rho, u).

    Each basis entry is (e: tuple of RatFun free of z, u: RatFun); the tuples
    are linearly independent over the z-constant subfield.  ``notes`` records
    analysis fallbacks (diagnostic only).
    """

    basis: tuple
    notes: tuple = field(default_factory=tuple)


def _monic_pair(f: RatFun, z: int) -> tuple:
    """f as num/den with den a monic UPoly in z and num scaled to match."""
    num, den = UPoly.from_ratfun(f, z)
    if den.degree >= 0 and not (den.lc - RatFun.one(f.nvars)).is_zero:
        num = num.scale(den.lc.inv())
        den = den.monic()
    return num, den


def _denominator_bound(w: RatFun, rhs: tuple, z: int, nvars: int) -> UPoly:
    """Monic V in z with den(u) | V for every solution u."""
    num_w, den_w = _monic_pair(w, z)
    den_rhs = [_monic_pair(phi, z)[1] for phi in rhs if not phi.is_zero]
    factors = []
    for d in [den_w] + den_rhs:
        for q, _ in squarefree_monic(d):
            factors.append(q)
    v = UPoly.one(z, nvars)
    if not factors:
        return v
    for q in refine_coprime(factors):
        a = multiplicity(den_w, q)
        b = 0
        for d in den_rhs:
            b = max(b, multiplicity(d, q))
        if a >= 2:
            nu = max(0, b - a)
        else:
            nu = max(0, b - 1)
            if a == 1:
                cof = den_w.exact_div(q)
                for m in residue_candidates(num_w, cof, q):
                    if m > nu:
                        nu = m
        if nu > 0:
            v = v * q**nu
    return v


def _deg_inf(f: RatFun, z: int) -> Optional[int]:
    """Degree at infinity in z (deg num - deg den); None for the zero function."""
    if f.is_zero:
        return None
    return f.num.degree(z) - f.den.degree(z)


def _lead_at_inf(f: RatFun, z: int) -> RatFun:
    """Ratio of the leading z-coefficients of num and den."""
    num, den = UPoly.from_ratfun(f, z)
    return num.lc / den.lc


def _degree_bound(wt: RatFun, psis: list, z: int, notes: list) -> int:
    """Upper bound for deg_z of polynomial solutions U of d(U) + wt*U = sum e_i psi_i."""
    d = None
    for psi in psis:
        k = _deg_inf(psi, z)
        if k is not None and (d is None or k > d):
            d = k
    m = _deg_inf(wt, z)
    if m is None:
        n = -1 if d is None else d + 1
    elif m > 0:
        n = -1 if d is None else d - m
    elif m == 0:
        n = -1 if d is None else d
    elif m == -1:
        n = -1 if d is None else d + 1
        alpha = _lead_at_inf(wt, z)
        if alpha.is_const:
            a = alpha.const_value()
            if a.denominator == 1 and a <= 0:
                n = max(n, -int(a.numerator))
        else:
            notes.append(
                "indicial root at infinity is not constant; degree bound from "
                "degree comparison only"
            )
    else:
        n = -1 if d is None else d + 1
    return max(n, -1)


def param_rde(problem: ParamRdeProblem) -> ParamRdeSolutionSpace:
    """All rational solutions (e_0..e_rho, u), as a reduced echelon basis.

    Unknowns are ordered e-part first, so any basis entry with a nonzero
    e-vector has its pivot there; homogeneous entries (e = 0) follow.
    """
    z = problem.var
    w = problem.w
    rhs = problem.rhs
    nv = w.nvars
    notes: list = []

    v_up = _denominator_bound(w, rhs, z, nv)
    v_rf = v_up.to_ratfun()
    wt = w if v_up.degree <= 0 else w - v_rf.derive(z) / v_rf
    psis = [phi * v_rf for phi in rhs]
    n = _degree_bound(wt, psis, z, notes)

    num_wt, den_wt = _monic_pair(wt, z)
    psi_pairs = [_monic_pair(psi, z) for psi in psis]
    h = den_wt
    for _, dp in psi_pairs:
        h = ulcm(h, dp)
    h_wt = h.exact_div(den_wt) * num_wt
    cols = []
    for np_, dp in psi_pairs:
        cols.append(-(h.exact_div(dp) * np_))
    for j in range(n + 1):
        col = h_wt.shift_pow(j)
        if j >= 1:
            col = col + h.shift_pow(j - 1).scale(RatFun.const(j, nv))
        cols.append(col)

    nrows = max((c.degree for c in cols if not c.is_zero), default=-1) + 1
    rows = [[c.coeff(m) for c in cols] for m in range(nrows)]
    ncols = len(rhs) + n + 1
    basis = nullspace(rows, ncols, nv)

    out = []
    rho1 = len(rhs)
    for vec in basis:
        es = tuple(vec[:rho1])
        u_up = UPoly(vec[rho1:], z, nv)
        u = u_up.to_ratfun() / v_rf
        out.append((es, u))
    return ParamRdeSolutionSpace(basis=tuple(out), notes=tuple(notes))


def verify_solution(problem: ParamRdeProblem, es: tuple, u: RatFun) -> bool:
    """Exact check of d_z(u) + w*u = sum e_i*rhs_i."""
    lhs = u.derive(problem.var) + problem.w * u
    for e, phi in zip(es, problem.rhs):
        lhs = lhs - e * phi
    return lhs.is_zero
