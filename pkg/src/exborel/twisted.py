"""Twisted objects over the bar algebra and the dictionary into the
ditalgebra module category.

ad-elements pair linear maps between right S-modules with bar basis
labels; twisted objects carry a Maurer-Cartan element supported in
degree 0; Psi reads an ad-element against dual labels, and the functor
into the module category sends (X, delta_X) to (X, Psi(delta_X)) and a
degree -1 morphism t to (Psi(t)(e*), Psi(t)(radical duals)).
"""

from __future__ import annotations

import itertools

from exborel.linalg import Matrix
from exborel.modules import AlgebraError
from exborel.bocs import BarAlgebra, dual_coefficients, lambda_sign
from exborel.ditmod import DitModule, DitMorphism, DitPresentation


class AdElement:
    """Homogeneous element of ad(B)(X, Y): {bar label: Matrix}.

    source/target are dim dicts of right S-modules; the matrix attached
    to label x maps X e_{s(x)} -> Y e_{t(x)}.
    """

    def __init__(self, bar: BarAlgebra, source_dims, target_dims, degree,
                 terms=None):
        self.bar = bar
        self.source_dims = dict(source_dims)
        self.target_dims = dict(target_dims)
        self.degree = degree
        self.terms = {}
        for lab, m in (terms or {}).items():
            if bar.degree[lab] != degree:
                raise AlgebraError("ad-element label of wrong degree")
            self._check_shape(lab, m)
            if not m.is_zero():
                self.terms[lab] = m

    def _check_shape(self, lab, m):
        r = self.target_dims.get(self.bar.tgt[lab], 0)
        c = self.source_dims.get(self.bar.src[lab], 0)
        if (m.rows, m.cols) != (r, c):
            raise AlgebraError(
                f"ad matrix for {lab} has shape {m.rows}x{m.cols}, "
                f"expected {r}x{c}")

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        f = self.bar.field
        out = dict(self.terms)
        for lab, m in other.terms.items():
            out[lab] = out[lab] + m if lab in out else m
        out = {k: v for k, v in out.items() if not v.is_zero()}
        return AdElement(self.bar, self.source_dims, self.target_dims,
                         self.degree, out)

    def scale(self, c):
        return AdElement(self.bar, self.source_dims, self.target_dims,
                         self.degree,
                         {k: v.scale(c) for k, v in self.terms.items()})


def b_ad(bar: BarAlgebra, elems):
    """b^ad_n on a tuple of ad-elements (leftmost applied last)."""
    n = len(elems)
    f = bar.field
    src_dims = elems[-1].source_dims
    tgt_dims = elems[0].target_dims
    out_deg = sum(e.degree for e in elems) + 1
    acc = {}
    for combo in itertools.product(*[list(e.terms.items()) for e in elems]):
        labs = tuple(lab for lab, _ in combo)
        val = bar.apply(n, labs)
        if not val:
            continue
        m = None
        for _, mat in combo:
            m = mat if m is None else m * mat
        for out_lab, c in val.items():
            part = m.scale(c)
            acc[out_lab] = acc[out_lab] + part if out_lab in acc else part
    acc = {k: v for k, v in acc.items() if not v.is_zero()}
    return AdElement(bar, src_dims, tgt_dims, out_deg, acc)


class TwObject:
    """(X, delta_X) with delta_X of degree 0 and nilpotent coefficients."""

    def __init__(self, bar: BarAlgebra, dims, delta: AdElement,
                 filtration=None):
        self.bar = bar
        self.dims = dict(dims)
        self.delta = delta
        self.filtration = filtration

    def total_dim(self):
        return sum(self.dims.values())


def check_tw_object(x: TwObject):
    """Nilpotence of the coefficient family plus Maurer-Cartan."""
    bar = x.bar
    f = bar.field
    report = {"nilpotent": True, "maurer_cartan": True, "defect": None}
    # nilpotence: products of the coefficient maps must die out
    blocks = {}
    for lab, m in x.delta.terms.items():
        blocks.setdefault((bar.src[lab], bar.tgt[lab]), []).append(m)
    products = [(key, m) for key, ms in blocks.items() for m in ms]
    bound = x.total_dim() + 1
    cur = products
    for _ in range(bound):
        if not cur:
            break
        nxt = []
        for (s1, t1), m1 in products:
            for (s2, t2), m2 in cur:
                if t2 == s1:
                    m = m1 * m2
                    if not m.is_zero():
                        nxt.append(((s2, t1), m))
        cur = nxt
    if cur:
        report["nilpotent"] = False
    # Maurer-Cartan
    total = None
    for s in range(2, bar.max_arity() + 1):
        term = b_ad(bar, [x.delta] * s)
        total = term if total is None else total + term
    if total is not None and not total.is_zero():
        report["maurer_cartan"] = False
        report["defect"] = {str(k): repr(v) for k, v in total.terms.items()}
    report["ok"] = report["nilpotent"] and report["maurer_cartan"]
    return report


def b_tw(objects, morphisms):
    """b^tw_n: sum over delta insertions of b^ad on the padded tuple.

    objects = (X_0, ..., X_n), morphisms = (t_n, ..., t_1) in the
    leftmost-last storage order.
    """
    n = len(morphisms)
    bar = objects[0].bar
    deltas = [obj.delta for obj in objects]  # X_0 ... X_n
    max_extra = max(0, bar.max_arity() - n)
    total = None
    for extra in range(0, max_extra + 1):
        for counts in _compositions(extra, n + 1):
            # counts[k] = insertions of delta_{X_k}; slots run X_n .. X_0
            padded = []
            for k in range(n, 0, -1):
                padded.extend([deltas[k]] * counts[k])
                padded.append(morphisms[n - k])
            padded.extend([deltas[0]] * counts[0])
            term = b_ad(bar, padded)
            total = term if total is None else total + term
    return total


def _compositions(total, slots):
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


def identity_candidate(bar: BarAlgebra, x: TwObject) -> AdElement:
    """tau_X = sum of identity (x) e_j, the unit of Z_{-1}(tw)."""
    f = bar.field
    terms = {}
    for j, d in x.dims.items():
        if d:
            terms[bar.carrier.unit_label(j)] = Matrix.identity(f, d)
    return AdElement(bar, x.dims, x.dims, -1, terms)


def psi_eval(elem: AdElement, lab) -> Matrix:
    """Psi(f)(x*) = f_x, extended by zero off the support."""
    bar = elem.bar
    m = elem.terms.get(lab)
    if m is not None:
        return m
    r = elem.target_dims.get(bar.tgt[lab], 0)
    c = elem.source_dims.get(bar.src[lab], 0)
    return Matrix.zeros(bar.field, r, c)


def b_cv(bar: BarAlgebra, F_elems, zeta_label):
    """b^cv_n evaluated at a dual label.

    The declared (-1)^{lambda_n} prefactor cancels against the Koszul
    sign of evaluating the operator tensor on the dual expansion (the
    surviving terms force matching degrees), so the net evaluation is
    the plain composition along the dual coefficients of b_n.
    """
    n = len(F_elems)
    f = bar.field
    coeffs = dual_coefficients(bar, zeta_label, n, bar.labels)
    rows = F_elems[0].target_dims.get(bar.tgt[zeta_label], 0)
    cols = F_elems[-1].source_dims.get(bar.src[zeta_label], 0)
    out = Matrix.zeros(f, rows, cols)
    for tup, c in coeffs.items():
        m = None
        for k in range(n):
            mk = psi_eval(F_elems[k], tup[k])
            m = mk if m is None else m * mk
        out = out + m.scale(c)
    return out


# ---------------------------------------------------------------------------
# the dictionary with the module category


def functor_m_object(pres: DitPresentation, x: TwObject) -> DitModule:
    bar = x.bar
    f = bar.field
    rho = {}
    for name, lab in pres.solid_label.items():
        rho[name] = psi_eval(x.delta, lab)
    return DitModule(pres, f, x.dims, rho)


def functor_m_morphism(pres: DitPresentation, source: TwObject,
                       target: TwObject, t: AdElement) -> DitMorphism:
    bar = source.bar
    f0 = {}
    for p in pres.points:
        e = bar.carrier.unit_label(p)
        m = t.terms.get(e)
        if m is None:
            m = Matrix.zeros(bar.field, target.dims.get(p, 0),
                             source.dims.get(p, 0))
        f0[p] = m
    f1 = {}
    for name, lab in pres.dashed_label.items():
        f1[name] = psi_eval(t, lab)
    return DitMorphism(functor_m_object(pres, source),
                       functor_m_object(pres, target), f0, f1)


def tw_from_dit_module(bar: BarAlgebra, pres: DitPresentation,
                       m: DitModule) -> TwObject:
    terms = {}
    for name, lab in pres.solid_label.items():
        mat = m.rho[name]
        if not mat.is_zero():
            terms[lab] = mat
    delta = AdElement(bar, m.dims, m.dims, 0, terms)
    return TwObject(bar, m.dims, delta)


def tw_from_dit_morphism(bar: BarAlgebra, pres: DitPresentation,
                         fm: DitMorphism) -> AdElement:
    terms = {}
    for p in pres.points:
        mat = fm.f0[p]
        if not mat.is_zero():
            terms[bar.carrier.unit_label(p)] = mat
    for name, lab in pres.dashed_label.items():
        mat = fm.f1[name]
        if not mat.is_zero():
            terms[lab] = mat
    return AdElement(bar, fm.source.dims, fm.target.dims, -1, terms)


def tw_cocycle_defect(x: TwObject, y: TwObject, t: AdElement):
    """b1^tw(t) for a degree -1 morphism candidate."""
    return b_tw((x, y), (t,))


def tw_compose(x0: TwObject, x1: TwObject, x2: TwObject,
               t2: AdElement, t1: AdElement) -> AdElement:
    """Composition in Z_{-1}(tw): b2^tw(t2 (x) t1)."""
    return b_tw((x0, x1, x2), (t2, t1))
