"""Defining operators of PPV groups of first-order systems D_i(Y) = f_i.

For compatible rational right-hand sides the group of the system is a
subgroup of the additive group cut out by one linear differential operator
in t; that operator is exactly the minimal parallel telescoper of the
right-hand sides, so the computation wraps the inputs as coefficients over
the trivial hyperexponential term and delegates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import IncompatibleSystemError
from .expr import render_oreop
from .hyperexp import HElement, HTerm
from .ore import OreOp
from .parallel import paratele_compatible
from .ratfun import RatFun
from .telescope import DEFAULT_MAX_ORDER


@dataclass(frozen=True)
class PpvResult:
    """Defining operator L over k(t), certificate g with L(f_i) = d_i(g),
    and the rendered group description."""

    L: OreOp
    g: RatFun
    group_description: str

    @property
    def order(self) -> int:
        return self.L.order


def group_text(l_op: OreOp, names: Optional[list] = None) -> str:
    """Set-builder rendering of { a in F : L(a) = 0 }, displayed monic."""
    monic = l_op.monic()
    return f"{{ a in F : {render_oreop(monic, names)}(a) = 0 }}"


def ppv_defining_operator(
    fs: list, max_order: int = DEFAULT_MAX_ORDER, names: Optional[list] = None
) -> PpvResult:
    """Defining operator of the PPV group of D_1(Y) = f_1, ..., D_n(Y) = f_n.

    The f_i must be rational and compatible (d_i(f_j) = d_j(f_i)); the
    operator is the minimal parallel telescoper of the f_i and the
    certificate is a plain rational function.
    """
    if not fs:
        raise ValueError("no right-hand sides")
    nv = fs[0].nvars
    if len(fs) != nv - 1:
        raise ValueError(f"expected {nv - 1} right-hand sides, got {len(fs)}")
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            if fs[i].derive(j + 1) != fs[j].derive(i + 1):
                raise IncompatibleSystemError(
                    f"d_{j + 1}(f_{i + 1}) != d_{i + 1}(f_{j + 1})"
                )
    trivial = HTerm.trivial(nv)
    elements = [HElement([(f, trivial)], nv) for f in fs]
    res = paratele_compatible(elements, max_order=max_order)
    if res.g.is_zero:
        g = RatFun.zero(nv)
    else:
        g = res.g.coeff_of(trivial)
    return PpvResult(L=res.L, g=g, group_description=group_text(res.L, names))
