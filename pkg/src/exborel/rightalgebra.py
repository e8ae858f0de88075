"""The right algebra of an interlaced presentation, induced modules,
and the exact-Borel report.

Gamma is the opposite endomorphism algebra of the regular module inside
the two-component morphism category.  It is materialized as a table
algebra on a directed basis (split along the idempotent sandwich
blocks), with the quotient algebra embedded by right multiplications.
"""

from __future__ import annotations

from fractions import Fraction

from exborel.linalg import Matrix, Subspace, solve
from exborel.modules import (
    AlgebraError, ModuleMap, TableAlgebra, TableModule, hom_space,
    normal_basis, projective_module, quotient_module, radical_top,
    simple_module, submodule,
)
from exborel.resolutions import ext_space, min_resolution
from exborel.homological import HomSystem, check_system, end_is_local_table
from exborel.decompose import indecomposable_projectives
from exborel.ditmod import (
    DitModule, DitMorphism, DitPresentation, dit_compose, dit_hom_space,
)


def regular_dit_module(pres: DitPresentation, abar, field) -> DitModule:
    """The quotient algebra as a left module over itself."""
    f = field
    cols = {p: [x for x in abar.basis if abar.tgt[x] == p]
            for p in abar.points}
    dims = {p: len(cols[p]) for p in abar.points}
    pos = {}
    for p in abar.points:
        for k, x in enumerate(cols[p]):
            pos[x] = k
    rho = {}
    for a in pres.solid:
        m = Matrix.zeros(f, dims[a.tgt], dims[a.src])
        for y in cols[a.src]:
            for z, c in abar.reduce_path((a.name,) + _as_path(y)).items():
                m.data[pos[z]][pos[y]] = f.add(m.data[pos[z]][pos[y]], c)
        rho[a.name] = m
    mod = DitModule(pres, f, dims, rho)
    mod.basis_labels = cols
    return mod


def _as_path(label):
    return () if label[0] == "e" and len(label) == 2 else label


def right_mult_morphism(reg: DitModule, abar, label) -> DitMorphism:
    """Right multiplication by a quotient-algebra basis element, with
    zero dashed component."""
    f = reg.field
    out = DitMorphism.zero(reg, reg)
    i = abar.src[label]
    ipt = abar.tgt[label]
    for p in abar.points:
        cols = reg.basis_labels[p]
        m = Matrix.zeros(f, len(cols), len(cols))
        for y in cols:
            if abar.src[y] != ipt:
                continue
            prod = abar.product(y, label)
            for z, c in prod.items():
                m.data[cols.index(z)][cols.index(y)] = c
        out.f0[p] = m
    return out


class RightAlgebra:
    """Gamma = End(regular)^op as a TableAlgebra, plus the embedding."""

    def __init__(self, pres: DitPresentation, field):
        self.pres = pres
        self.field = field
        self.abar = normal_basis(pres.solid_presentation(), field)
        self.regular = regular_dit_module(pres, self.abar, field)
        self._build()

    def _build(self):
        f = self.field
        pres = self.pres
        homs = dit_hom_space(self.regular, self.regular)
        units = {p: right_mult_morphism(self.regular, self.abar,
                                        self.abar.unit_label[p])
                 for p in pres.points}
        # sandwich blocks: gamma in e_j Gamma e_i <=> r_i o gamma o r_j
        blocks = {}
        seen = Subspace(f, len(homs[0].flatten()) if homs else 0, [])
        for i in pres.points:
            for j in pres.points:
                vecs = []
                for h in homs:
                    proj = dit_compose(units[i], dit_compose(h, units[j]))
                    v = proj.flatten()
                    if any(not f.eq(c, f.zero) for c in v):
                        vecs.append(v)
                space = Subspace(f, len(vecs[0]) if vecs else 0, vecs)
                if space.dim:
                    blocks[(i, j)] = space
        labels = []
        morphs = {}
        src = {}
        tgt = {}
        for (i, j) in sorted(blocks, key=str):
            for k, v in enumerate(blocks[(i, j)].basis):
                lab = ("g", i, j, k)
                labels.append(lab)
                morphs[lab] = DitMorphism.from_flat(self.regular,
                                                    self.regular, v)
                src[lab] = i
                tgt[lab] = j
        flat = [morphs[lab].flatten() for lab in labels]
        mm = Matrix.from_rows(f, flat).transpose()
        unit_label = {}
        unit_coords = {}
        for p in pres.points:
            x = solve(mm, Matrix.column(f, units[p].flatten()))
            if x is None:
                raise AlgebraError("unit missing from Gamma span")
            unit_coords[p] = {labels[k]: x.data[k][0]
                              for k in range(len(labels))
                              if not f.eq(x.data[k][0], f.zero)}
        # rebase so each unit is itself a basis element of its block
        labels, morphs, src, tgt, unit_label = self._rebase_units(
            labels, morphs, src, tgt, unit_coords, units)
        flat = [morphs[lab].flatten() for lab in labels]
        mm = Matrix.from_rows(f, flat).transpose()
        mult = {}
        for a in labels:
            for b in labels:
                if src[a] != tgt[b]:
                    continue
                # Gamma product a . b = (composition) morph_b o morph_a
                comp = dit_compose(morphs[b], morphs[a])
                x = solve(mm, Matrix.column(f, comp.flatten()))
                if x is None:
                    raise AlgebraError("Gamma not closed under products")
                entry = {}
                for k, lab in enumerate(labels):
                    c = x.data[k][0]
                    if not f.eq(c, f.zero):
                        entry[lab] = c
                if entry:
                    mult[(a, b)] = entry
        self.table = TableAlgebra(f, pres.points, labels, src, tgt,
                                  unit_label, mult)
        self.morphisms = morphs
        self.table.check_associative()
        # embedding of the quotient algebra
        self.embedding = {}
        for x in self.abar.basis:
            rm = right_mult_morphism(self.regular, self.abar, x)
            cx = solve(mm, Matrix.column(f, rm.flatten()))
            if cx is None:
                raise AlgebraError("embedding escapes Gamma")
            self.embedding[x] = {labels[k]: cx.data[k][0]
                                 for k in range(len(labels))
                                 if not f.eq(cx.data[k][0], f.zero)}
        self._check_embedding()

    def _rebase_units(self, labels, morphs, src, tgt, unit_coords, units):
        """Make r_{e_p} literally a basis label of block (p, p)."""
        f = self.field
        new_labels = []
        new_morphs = {}
        new_src = {}
        new_tgt = {}
        unit_label = {}
        for (i, j) in sorted({(src[l], tgt[l]) for l in labels}, key=str):
            block = [l for l in labels if src[l] == i and tgt[l] == j]
            base = []
            if i == j:
                base.append(units[i])
            chosen = []
            space = Subspace(f, len(units[i].flatten()) if block else 0, [])
            for m in base + [morphs[l] for l in block]:
                v = m.flatten()
                if not space.contains(v):
                    chosen.append(m)
                    space = Subspace(f, len(v), space.basis + [v])
            for k, m in enumerate(chosen):
                lab = ("g", i, j, k)
                new_labels.append(lab)
                new_morphs[lab] = m
                new_src[lab] = i
                new_tgt[lab] = j
                if i == j and k == 0:
                    unit_label[i] = lab
        return new_labels, new_morphs, new_src, new_tgt, unit_label

    def _check_embedding(self):
        f = self.field
        for x in self.abar.basis:
            for y in self.abar.basis:
                if self.abar.src[x] != self.abar.tgt[y]:
                    continue
                # emb(x . y) = emb(x) . emb(y) in Gamma
                lhs = {}
                for z, c in self.abar.product(x, y).items():
                    for lab, c2 in self.embedding[z].items():
                        lhs[lab] = f.add(lhs.get(lab, f.zero), f.mul(c, c2))
                lhs = {k: v for k, v in lhs.items() if not f.eq(v, f.zero)}
                rhs = self.table.product_elements(self.embedding[x],
                                                  self.embedding[y])
                if lhs != rhs:
                    raise AlgebraError("embedding is not multiplicative")

    @property
    def dim(self):
        return self.table.dim

    def hom_v_dim(self, dit_module: DitModule):
        """dim Hom(V-bar, M) = sum over dashed xi of
        dim(e_{t(xi)} M) * dim(e_{s(xi)} A-bar)."""
        abar_dims = {p: sum(1 for x in self.abar.basis
                            if self.abar.tgt[x] == p)
                     for p in self.abar.points}
        return sum(dit_module.dims[a.tgt] * abar_dims[a.src]
                   for a in self.pres.dashed)


def induce_module(ra: RightAlgebra, m: DitModule):
    """Hom((regular), (M)) as a left module over the Gamma table.

    Also returns the hom basis and the inclusion alpha_M: M -> induced
    (as a plain linear map in the induced coordinates).
    """
    f = ra.field
    homs = dit_hom_space(ra.regular, m)
    if not homs:
        return _zero_gamma_module(ra), [], None
    flat = [h.flatten() for h in homs]
    mm = Matrix.from_rows(f, flat).transpose()

    def coords_of(h):
        x = solve(mm, Matrix.column(f, h.flatten()))
        if x is None:
            raise AlgebraError("induced action escapes the hom space")
        return [x.data[k][0] for k in range(len(homs))]

    # point grading by the unit projectors h -> h o r_{e_p}
    unit_mats = {}
    for p in ra.pres.points:
        unit = ra.morphisms[ra.table.unit_label[p]]
        cols = [coords_of(dit_compose(h, unit)) for h in homs]
        unit_mats[p] = Matrix.from_rows(f, cols).transpose()
    # adapted basis: images of the projectors in order
    adapted = []
    grading = []
    span = Subspace(f, len(homs), [])
    for p in ra.pres.points:
        mat = unit_mats[p]
        for c in range(mat.cols):
            v = mat.col(c)
            if any(not f.eq(a, f.zero) for a in v) and not span.contains(v):
                adapted.append(v)
                grading.append(p)
                span = Subspace(f, len(v), span.basis + [v])
    if span.dim != len(homs):
        raise AlgebraError("unit projectors do not exhaust the induced "
                           "module")
    basis_mat = Matrix.from_rows(f, adapted).transpose()
    from exborel.linalg import invert
    basis_inv = invert(basis_mat)
    dims = {p: grading.count(p) for p in ra.pres.points}
    offsets = {}
    off = {p: 0 for p in ra.pres.points}
    order = []
    for k, p in enumerate(grading):
        offsets[k] = (p, off[p])
        off[p] += 1
    action = {}
    for lab in ra.table.basis:
        gmorph = ra.morphisms[lab]
        i, j = ra.table.src[lab], ra.table.tgt[lab]
        m_out = Matrix.zeros(f, dims[j], dims[i])
        # action: gamma . h = h o gamma  (left module over the opposite)
        for k, v in enumerate(adapted):
            p, kk = offsets[k]
            if p != i:
                continue
            h = _combine_homs(homs, v, f, ra.regular, m)
            img = dit_compose(h, gmorph)
            icoords = coords_of(img)
            # express in adapted coordinates
            ac = basis_inv * Matrix.column(f, icoords)
            for k2 in range(len(adapted)):
                c = ac.data[k2][0]
                if f.eq(c, f.zero):
                    continue
                p2, kk2 = offsets[k2]
                if p2 != j:
                    raise AlgebraError("induced action breaks the grading")
                m_out.data[kk2][kk] = c
        action[lab] = m_out
    gamma_mod = TableModule(ra.table, dims, action)
    # alpha_M: M -> induced, m |-> (a |-> a m)
    alpha = _alpha_map(ra, m, homs, basis_inv, offsets, dims, coords_of)
    gamma_mod.hom_basis = homs
    gamma_mod.adapted = (adapted, offsets)
    return gamma_mod, homs, alpha


def _zero_gamma_module(ra):
    f = ra.field
    dims = {p: 0 for p in ra.pres.points}
    action = {lab: Matrix.zeros(f, 0, 0) for lab in ra.table.basis}
    return TableModule(ra.table, dims, action)


def _combine_homs(homs, coords, f, reg, m):
    out = None
    for c, h in zip(coords, homs):
        if f.eq(c, f.zero):
            continue
        part = h.scale(c)
        out = part if out is None else out + part
    if out is None:
        out = DitMorphism.zero(reg, m)
    return out


def _alpha_map(ra, m, homs, basis_inv, offsets, dims, coords_of):
    """Matrix blocks of alpha_M (per point) in induced coordinates."""
    f = ra.field
    out = {p: Matrix.zeros(f, dims[p], m.dims[p]) for p in ra.pres.points}
    for p in ra.pres.points:
        for v_idx in range(m.dims[p]):
            h = _hom_from_vector(ra, m, p, v_idx)
            coords = coords_of(h)
            ac = basis_inv * Matrix.column(f, coords)
            for k in range(len(homs)):
                c = ac.data[k][0]
                if f.eq(c, f.zero):
                    continue
                p2, kk2 = offsets[k]
                if p2 != p:
                    raise AlgebraError("alpha breaks the point grading")
                out[p2].data[kk2][v_idx] = c
    return out


def _hom_from_vector(ra, m, point, v_idx):
    """The morphism a |-> a.(basis vector) with zero dashed part."""
    f = ra.field
    reg = ra.regular
    out = DitMorphism.zero(reg, m)
    for p in ra.pres.points:
        cols = reg.basis_labels[p]
        mat = Matrix.zeros(f, m.dims[p], len(cols))
        for ci, x in enumerate(cols):
            if ra.abar.src[x] != point:
                continue
            path = _as_path(x)
            if not path:
                # unit: e_point . v = v when p == point
                if p == point:
                    mat.data[v_idx][ci] = f.one
                continue
            act = m.path_action(path)
            for r in range(m.dims[p]):
                mat.data[r][ci] = act.data[r][v_idx]
        out.f0[p] = mat
    return out
