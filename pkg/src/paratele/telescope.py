"""Minimal creative telescoping for one hyperexponential element.

Given f = c*h and a variable z, finds the operator L of least order in Dt
with coefficients free of z such that L(f) = D_z(g) for some certificate g in
the module generated by h.  The search iterates the order from zero upward,
reducing each order to a parametrized first-order ODE; termination is
guaranteed by the existence theory for D-finite elements.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MaxOrderExceededError
from .hyperexp import HElement, t_map
from .ore import OreOp
from .ratfun import RatFun
from .rde import ParamRdeProblem, param_rde

DEFAULT_MAX_ORDER = 12


@dataclass(frozen=True)
class TelescopeResult:
    """Minimal telescoper with certificate: op_apply(L, f) = d_apply(g, z)."""

    L: OreOp
    g: HElement
    order: int


def min_telescoper(f: HElement, z: int, max_order: int = DEFAULT_MAX_ORDER) -> TelescopeResult:
    """Minimal-order telescoper for a nonzero single-part element f in D_z.

    The coefficients of L are free of z (they may involve t and the other
    x-variables); among the solutions at the minimal order the reduced-echelon
    representative with the smallest parameter support is returned, which
    zeroes the homogeneous components of the certificate.
    """
    if f.is_zero:
        raise ValueError("telescoping requires a nonzero element")
    c, term = f.sole_part()
    nv = f.nvars
    w = c.derive(z) / c + term.logd[z]
    phis = [RatFun.one(nv)]
    cur = c
    for rho in range(max_order + 1):
        space = param_rde(ParamRdeProblem(z, w, tuple(phis)))
        best = None
        for es, u in space.basis:
            support = sum(1 for e in es if not e.is_zero)
            if support == 0:
                continue
            if best is None or support < best[0]:
                best = (support, es, u)
        if best is not None:
            _, es, u = best
            raw = OreOp(es, nv)
            L, unit = raw.normalized_with_unit()
            g_coeff = c * u * unit
            g = HElement([(g_coeff, term)], nv) if not g_coeff.is_zero else HElement.zero(nv)
            return TelescopeResult(L=L, g=g, order=L.order)
        cur = t_map(cur, term)
        phis.append(cur / c)
    raise MaxOrderExceededError(
        f"no telescoper up to order {max_order}; raise the cap if the input is genuine"
    )
