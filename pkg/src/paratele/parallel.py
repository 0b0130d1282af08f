"""Parallel telescoping: one operator L in k(t)<Dt> with L(f_i) = D_i(g).

The compatible path is recursive: telescope the first input in its variable,
form the reduced remainders for the other variables, and recurse; the product
of the stage telescopers is the minimal parallel telescoper.  Inputs spread
over several similarity classes are handled per class and merged with least
common left multiples.  Non-compatible inputs go through the existence
operator first and lose the minimality guarantee.

Every returned result is re-verified against its defining identities by
direct arithmetic before being handed back; a failure raises, it never
returns silently wrong output.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CrossClassNonzeroError,
    NoParallelTelescoperError,
    NotCompatibleError,
    XFreenessViolatedError,
)
from .hyperexp import (
    HElement,
    HTerm,
    d_apply,
    is_similar,
    kt_annihilator,
    op_apply,
    similarity_classes,
    t_map,
)
from .ore import OreOp, lclm, lclm_cofactors
from .ratfun import RatFun
from .telescope import DEFAULT_MAX_ORDER, min_telescoper


@dataclass(frozen=True)
class ParallelTelescoperResult:
    """Parallel telescoper L (coefficients in k(t) only) with certificate g.

    ``minimal`` is True exactly on the compatible path, where the recursion
    guarantees least order.
    """

    L: OreOp
    g: HElement
    minimal: bool

    @property
    def order(self) -> int:
        return self.L.order


def _rebase(elements: list) -> list:
    """Re-present all parts over one representative term per similarity class.

    Distinct-but-similar terms are identified via their ratio witness q (the
    constant ambiguity of q is a choice of model for the abstract terms).
    """
    classes = similarity_classes(elements)
    repmap = {}
    for cls in classes:
        rep = cls[0]
        for t in cls[1:]:
            repmap[t.uid] = (is_similar(t, rep), rep)
    out = []
    for e in elements:
        parts = []
        for c, t in e.parts:
            if t.uid in repmap:
                q, rep = repmap[t.uid]
                parts.append((c * q, rep))
            else:
                parts.append((c, t))
        out.append(HElement(parts, e.nvars))
    return out


def _check_compatible(fs: list):
    n = len(fs)
    for i in range(n):
        for j in range(i + 1, n):
            if d_apply(fs[j], i + 1) != d_apply(fs[i], j + 1):
                raise NotCompatibleError(
                    f"D_{i + 1}(f_{j + 1}) != D_{j + 1}(f_{i + 1})"
                )


def _verify_identities(l_op: OreOp, g: HElement, fs: list):
    for i, f in enumerate(fs):
        if op_apply(l_op, f) != d_apply(g, i + 1):
            raise XFreenessViolatedError(
                f"certificate identity failed for variable x{i + 1}; this is a bug"
            )


def _assert_x_free(l_op: OreOp):
    if not l_op.x_free():
        raise XFreenessViolatedError(
            "telescoper coefficients involve an x-variable where theory forbids it"
        )


def _similar_worker(pairs: list, term: HTerm, max_order: int) -> tuple:
    """Joint minimal telescoper for coefficient*term inputs.

    pairs is a list of (variable index, coefficient); returns (L, u) with
    op_apply(L, c_i*term) = D_i(u*term) for every pair.  All data must be
    free of the variables outside the pair set (the callers arrange this by
    re-presenting the inputs), which makes every stage telescoper land in
    k(t) as the theory predicts.
    """
    nv = term.nvars
    live = [(z, c) for z, c in pairs if not c.is_zero]
    if not live:
        return OreOp.one(nv), RatFun.zero(nv)
    z1, c1 = live[0]
    tr = min_telescoper(HElement.single(c1, term), z1, max_order=max_order)
    l1 = tr.L
    _assert_x_free(l1)
    u1 = tr.g.coeff_of(term)
    rest = [(z, c) for z, c in pairs if z != z1]
    if not rest:
        return l1, u1
    # reduced remainders for the remaining variables: D_i(g1) - L1(c_i*term)
    tilde = []
    for z, c in rest:
        g1_d = u1.derive(z) + u1 * term.logd[z]
        img = RatFun.zero(nv)
        cur = c
        for k, a in enumerate(l1.coeffs):
            if not a.is_zero:
                img = img + a * cur
            if k < len(l1.coeffs) - 1:
                cur = t_map(cur, term)
        tilde.append((z, g1_d - img))
    if all(c.is_zero for _, c in tilde):
        return l1, u1
    pivot = next(c for _, c in tilde if not c.is_zero)
    shifted = [pivot.derive(v) / pivot + term.logd[v] for v in range(nv)]
    if not shifted[z1].is_zero:
        raise XFreenessViolatedError(
            "reduced remainders are not constant in the telescoped variable"
        )
    sub_term = HTerm(shifted, label=f"{term.label}~")
    sub_pairs = []
    for z, c in tilde:
        q = c / pivot
        if q.involves(z1):
            raise XFreenessViolatedError(
                "reduced remainder ratio involves the telescoped variable"
            )
        sub_pairs.append((z, q))
    l_t, u_t = _similar_worker(sub_pairs, sub_term, max_order)
    # L = Lt*L1, g = Lt(u1*term) - (u_t*pivot)*term
    u_img = RatFun.zero(nv)
    cur = u1
    for k, a in enumerate(l_t.coeffs):
        if not a.is_zero:
            u_img = u_img + a * cur
        if k < len(l_t.coeffs) - 1:
            cur = t_map(cur, term)
    return l_t * l1, u_img - u_t * pivot


def paratele_similar(
    coeffs: list, h: HTerm, max_order: int = DEFAULT_MAX_ORDER
) -> ParallelTelescoperResult:
    """Minimal parallel telescoper for the inputs coeffs[i]*h w.r.t. x_{i+1}.

    Zero coefficients are allowed (not all of them); the inputs must be
    compatible, which is checked up front.
    """
    nv = h.nvars
    if len(coeffs) != nv - 1:
        raise ValueError(f"expected {nv - 1} coefficients, got {len(coeffs)}")
    if all(c.is_zero for c in coeffs):
        raise ValueError("all inputs are zero")
    fs = [HElement([(c, h)], nv) for c in coeffs]
    _check_compatible(fs)
    pairs = [(i + 1, c) for i, c in enumerate(coeffs)]
    l_op, u = _similar_worker(pairs, h, max_order)
    l_norm, unit = l_op.normalized_with_unit()
    _assert_x_free(l_norm)
    g = HElement([(u * unit, h)], nv)
    _verify_identities(l_norm, g, fs)
    return ParallelTelescoperResult(L=l_norm, g=g, minimal=True)


def _class_contributions(fs: list, max_order: int) -> list:
    """Per-similarity-class telescopers [(P, g)], inputs already rebased."""
    nv = fs[0].nvars
    classes = similarity_classes(fs)
    contributions = []
    for cls in classes:
        rep = cls[0]
        carriers = [i for i, f in enumerate(fs) if not f.coeff_of(rep).is_zero]
        if not carriers:
            continue
        coeffs = {i: fs[i].coeff_of(rep) for i in carriers}
        cp = coeffs[carriers[0]]
        shifted = [cp.derive(v) / cp + rep.logd[v] for v in range(nv)]
        sub_pairs = []
        for i in carriers:
            q = coeffs[i] / cp
            sub_pairs.append((i + 1, q))
        # cross-class vanishing: the class data must not involve the
        # non-carrying variables once re-presented
        for v in range(1, nv):
            if (v - 1) in carriers:
                continue
            if not shifted[v].is_zero or any(q.involves(v) for _, q in sub_pairs):
                raise CrossClassNonzeroError(
                    f"class {rep.label!r} data involves non-carrying variable x{v}"
                )
        sub_term = HTerm(shifted, label=f"{rep.label}*")
        p_op, u = _similar_worker(sub_pairs, sub_term, max_order)
        _assert_x_free(p_op)
        g = HElement([(u * cp, rep)], nv)
        contributions.append((p_op, g))
    return contributions


def paratele_compatible(
    fs: list, max_order: int = DEFAULT_MAX_ORDER
) -> ParallelTelescoperResult:
    """Minimal parallel telescoper for compatible elements f_1..f_n.

    The inputs are partitioned by similarity class; each class is telescoped
    over the variables that carry it and the class operators are merged with
    least common left multiples, combining the certificates through the lclm
    cofactors.
    """
    if not fs:
        raise ValueError("no inputs")
    nv = fs[0].nvars
    if len(fs) != nv - 1:
        raise ValueError(f"expected {nv - 1} inputs, got {len(fs)}")
    fs = _rebase(fs)
    _check_compatible(fs)
    contributions = _class_contributions(fs, max_order)
    if not contributions:
        res = ParallelTelescoperResult(
            L=OreOp.one(nv), g=HElement.zero(nv), minimal=True
        )
        _verify_identities(res.L, res.g, fs)
        return res
    l_acc, g_acc = contributions[0]
    for p_op, g in contributions[1:]:
        l_acc, u_cof, v_cof = lclm_cofactors(l_acc, p_op)
        g_acc = op_apply(u_cof, g_acc) + op_apply(v_cof, g)
    l_norm, unit = l_acc.normalized_with_unit()
    _assert_x_free(l_norm)
    g_acc = g_acc.scale(unit)
    _verify_identities(l_norm, g_acc, fs)
    return ParallelTelescoperResult(L=l_norm, g=g_acc, minimal=True)


def existence_check(fs: list, max_order: int = DEFAULT_MAX_ORDER):
    """The existence operator P, or None when no parallel telescoper exists.

    P in k(t)<Dt> annihilates every cross-derivative defect
    D_i(f_j) - D_j(f_i); it is the least common left multiple of per-pair,
    per-term annihilators.  Compatible inputs yield P = 1.
    """
    if not fs:
        raise ValueError("no inputs")
    nv = fs[0].nvars
    fs = _rebase(fs)
    p_acc = OreOp.one(nv)
    n = len(fs)
    for i in range(n):
        for j in range(i + 1, n):
            defect = d_apply(fs[j], i + 1) - d_apply(fs[i], j + 1)
            if defect.is_zero:
                continue
            for c, t in defect.parts:
                ann = kt_annihilator(HElement.single(c, t))
                if ann is None:
                    return None
                p_acc = lclm(p_acc, ann)
    return p_acc.normalized()


def paratele_general(
    fs: list, max_order: int = DEFAULT_MAX_ORDER
) -> ParallelTelescoperResult:
    """Parallel telescoper for arbitrary hyperexponential inputs.

    Compatible inputs take the minimal path; otherwise the inputs are mapped
    through the existence operator P and the result L*P carries no minimality
    claim.  Raises NoParallelTelescoperError when none exists.
    """
    if not fs:
        raise ValueError("no inputs")
    nv = fs[0].nvars
    if len(fs) != nv - 1:
        raise ValueError(f"expected {nv - 1} inputs, got {len(fs)}")
    fs = _rebase(fs)
    try:
        _check_compatible(fs)
        compatible = True
    except NotCompatibleError:
        compatible = False
    if compatible:
        return paratele_compatible(fs, max_order=max_order)
    p_op = existence_check(fs, max_order=max_order)
    if p_op is None:
        raise NoParallelTelescoperError("no parallel telescoper exists")
    imgs = [op_apply(p_op, f) for f in fs]
    inner = paratele_compatible(imgs, max_order=max_order)
    l_total, unit = (inner.L * p_op).normalized_with_unit()
    g = inner.g.scale(unit)
    _verify_identities(l_total, g, fs)
    return ParallelTelescoperResult(L=l_total, g=g, minimal=False)
