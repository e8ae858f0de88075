"""Exact Borel subalgebra verification and the final report.

Checks, for the right algebra Gamma of a built presentation with its
embedded directed subalgebra B: directedness of B, projectivity of
Gamma as a right B-module, the induced-simple identification
Gamma (x)_B S_i = Delta'_i, the regularity dimension tables, the
homological (Burt-Butler) comparison, and the Cartan-matrix agreement
with the input algebra.
"""

from __future__ import annotations

from exborel.linalg import Matrix, Subspace, invert, solve
from exborel.modules import (
    AlgebraError, ModuleMap, TableAlgebra, TableModule, hom_space,
    projective_module, quotient_module, radical_top, simple_module,
    submodule,
)
from exborel.resolutions import ext_space, min_resolution
from exborel.homological import (
    HomSystem, check_system, end_is_local_table, modules_isomorphic,
)
from exborel.decompose import indecomposable_projectives
from exborel.ditmod import DitModule, simple_dit_module
from exborel.rightalgebra import RightAlgebra, induce_module


def gamma_block_dims(table: TableAlgebra):
    """D[i][j] = dim Hom(Ge_i, Ge_j) = #basis with src j, tgt i."""
    pts = table.points
    out = {}
    for i in pts:
        for j in pts:
            out[(i, j)] = len(table.block_basis(j, i))
    return out


def simple_tops_of(ra: RightAlgebra, deltas_prime):
    """S'_i = top of Delta'_i over Gamma; verified simple and split."""
    tops = {}
    for i, mod in deltas_prime.items():
        rad, inc, top, proj = radical_top(mod)
        if top.total_dim == 0:
            raise AlgebraError(f"Delta'_{i} has zero top")
        rad2, _, _, _ = radical_top(top)
        if rad2.total_dim != 0:
            raise AlgebraError(f"top of Delta'_{i} is not semisimple")
        ok, _ = end_is_local_table(top)
        if not ok:
            raise AlgebraError(f"top of Delta'_{i} is not simple split")
        tops[i] = top
    for a in ra.pres.points:
        for b in ra.pres.points:
            if a < b and modules_isomorphic(tops[a], tops[b]):
                raise AlgebraError(f"S'_{a} and S'_{b} are isomorphic")
    return tops


def multiplicity_matrix(ra: RightAlgebra, tops):
    """m[i][u] = multiplicity of S'_u in top(Gamma e_i)."""
    table = ra.table
    out = {}
    for i in table.points:
        Pfull = projective_module(table, i)
        _, _, top, _ = radical_top(Pfull)
        for u in table.points:
            out[(i, u)] = len(hom_space(tops[u], top))
    return out


def cartan_from_blocks(ra: RightAlgebra, tops):
    """Deconvolve dim Hom(Ge_i, Ge_j) through the multiplicity matrix to
    get the Cartan data dim Hom(P'_u, P'_v)."""
    f = ra.field
    pts = list(ra.table.points)
    n = len(pts)
    mult = multiplicity_matrix(ra, tops)
    D = gamma_block_dims(ra.table)
    Mm = Matrix(f, n, n, [[f.of(mult[(pts[a], pts[b])]) for b in range(n)]
                          for a in range(n)])
    Dm = Matrix(f, n, n, [[f.of(D[(pts[a], pts[b])]) for b in range(n)]
                          for a in range(n)])
    Minv = invert(Mm)
    if Minv is None:
        raise AlgebraError("multiplicity matrix singular")
    C = Minv * Dm * Minv.transpose()
    out = {}
    for a in range(n):
        for b in range(n):
            c = C.data[a][b]
            from fractions import Fraction
            cf = Fraction(c) if not isinstance(c, int) else Fraction(c)
            if cf.denominator != 1 or cf < 0:
                raise AlgebraError("Cartan deconvolution not integral")
            out[(pts[a], pts[b])] = int(cf)
    return out, {k: int(v) for k, v in mult.items()}


def base_cartan(algebra: TableAlgebra):
    """dim Hom(P_i, P_j) = dim e_i A e_j for the basic input algebra."""
    out = {}
    for i in algebra.points:
        for j in algebra.points:
            out[(i, j)] = len(algebra.block_basis(j, i))
    return out


# ---------------------------------------------------------------------------
# the embedded subalgebra B


class EmbeddedBorel:
    """The image of the quotient algebra inside Gamma, as abstract table
    algebra + coordinate data."""

    def __init__(self, ra: RightAlgebra, basis_elements=None):
        f = ra.field
        self.ra = ra
        table = ra.table
        if basis_elements is None:
            basis_elements = {x: ra.embedding[x] for x in ra.abar.basis}
        # verify: the idempotents are present and the span is closed
        self.elements = dict(basis_elements)
        coords = []
        for x, elem in self.elements.items():
            v = [f.zero] * table.dim
            for lab, c in elem.items():
                v[table.index[lab]] = c
            coords.append((x, v))
        span = Subspace(f, table.dim, [v for _, v in coords])
        if span.dim != len(coords):
            raise AlgebraError("Borel basis not linearly independent")
        for p in table.points:
            v = [f.zero] * table.dim
            v[table.index[table.unit_label[p]]] = f.one
            if not span.contains(v):
                raise AlgebraError(
                    f"Borel subalgebra misses the idempotent of {p}")
        labels = sorted(self.elements, key=str)
        mult = {}
        mm = Matrix.from_rows(
            f, [self._coords(self.elements[x])
                for x in labels]).transpose()
        for a in labels:
            for b in labels:
                prod = table.product_elements(self.elements[a],
                                              self.elements[b])
                v = self._coords(prod)
                x = solve(mm, Matrix.column(f, v))
                if x is None:
                    raise AlgebraError(
                        "Borel basis not multiplicatively closed")
                entry = {}
                for k, lab in enumerate(labels):
                    c = x.data[k][0]
                    if not f.eq(c, f.zero):
                        entry[lab] = c
                if entry:
                    mult[(a, b)] = entry
        src = {}
        tgt = {}
        unit_label = {}
        for x in labels:
            elem = self.elements[x]
            srcs = {table.src[lab] for lab in elem}
            tgts = {table.tgt[lab] for lab in elem}
            if len(srcs) != 1 or len(tgts) != 1:
                raise AlgebraError("Borel basis element not directed")
            src[x] = srcs.pop()
            tgt[x] = tgts.pop()
        for p in table.points:
            cands = [x for x in labels
                     if self.elements[x] == {table.unit_label[p]: f.one}]
            if not cands:
                raise AlgebraError(f"Borel idempotent of {p} not a basis "
                                   "element")
            unit_label[p] = cands[0]
        self.btable = TableAlgebra(f, table.points, labels, src, tgt,
                                   unit_label, mult)
        self.btable.check_associative()

    def _coords(self, elem):
        f = self.ra.field
        table = self.ra.table
        v = [f.zero] * table.dim
        for lab, c in elem.items():
            v[table.index[lab]] = c
        return v

    def is_directed(self):
        """No oriented cycles among non-idempotent basis elements, and
        the diagonal blocks are spanned by the idempotents."""
        t = self.btable
        for p in t.points:
            blk = t.block_basis(p, p)
            if len(blk) != 1:
                return False
        adj = {p: set() for p in t.points}
        for x in t.basis:
            if t.src[x] != t.tgt[x]:
                adj[t.src[x]].add(t.tgt[x])
        state = {p: 0 for p in t.points}

        def visit(v):
            state[v] = 1
            for w in adj[v]:
                if state[w] == 1:
                    return False
                if state[w] == 0 and not visit(w):
                    return False
            state[v] = 2
            return True

        return all(state[p] == 2 or visit(p) for p in t.points)

    def gamma_as_right_module(self) -> TableModule:
        """Gamma as a left module over B^op (i.e. as right B-module)."""
        f = self.ra.field
        table = self.ra.table
        bop = self.btable.opposite()
        cols = {p: [x for x in table.basis if table.src[x] == p]
                for p in table.points}
        dims = {p: len(cols[p]) for p in table.points}
        pos = {}
        for p in table.points:
            for k, x in enumerate(cols[p]):
                pos[x] = k
        action = {}
        for b in bop.basis:
            # b^op acts: gamma -> gamma . emb(b) (Gamma product)
            i, j = bop.src[b], bop.tgt[b]
            m = Matrix.zeros(f, dims[j], dims[i])
            belem = self.elements[b]
            for y in cols[i]:
                prod = table.product_elements({y: f.one}, belem)
                for z, c in prod.items():
                    m.data[pos[z]][pos[y]] = f.add(m.data[pos[z]][pos[y]], c)
            action[b] = m
        mod = TableModule(bop, dims, action)
        mod.verify()
        return mod

    def right_projective(self):
        """Is Gamma projective as a right B-module?  Compared through
        the dimension of its projective cover over B^op."""
        mod = self.gamma_as_right_module()
        cover, epi = projective_covers_over(self.btable.opposite(), mod)
        return cover.total_dim == mod.total_dim, cover.total_dim, \
            mod.total_dim

    def tensor_simple(self, i) -> TableModule:
        """Gamma (x)_B S_i = Gamma e_i / Gamma rad(B) e_i as a left
        Gamma-table-module."""
        f = self.ra.field
        table = self.ra.table
        P = projective_module(table, i)
        # radical of B inside Gamma coordinates
        radvecs = self.btable.radical_vectors()
        rad_elems = []
        for v in radvecs:
            elem = {}
            for k, x in enumerate(self.btable.basis):
                if not f.eq(v[k], f.zero):
                    for lab, c in self.elements[x].items():
                        elem[lab] = f.add(elem.get(lab, f.zero),
                                          f.mul(v[k], c))
            if elem:
                rad_elems.append(elem)
        # vectors of Gamma rad(B) e_i inside P = Gamma e_i
        cols = [x for x in table.basis if table.src[x] == i]
        posP = {}
        for p in table.points:
            blocked = [x for x in cols if table.tgt[x] == p]
            for k, x in enumerate(blocked):
                posP[x] = (p, k)
        vecs = []
        n = P.total_dim
        for g in table.basis:
            for r in rad_elems:
                prod = table.product_elements(
                    {g: f.one}, table.product_elements(
                        r, {table.unit_label[i]: f.one}))
                if not prod:
                    continue
                vec = [f.zero] * n
                for z, c in prod.items():
                    p, k = posP[z]
                    vec[P.offset(p) + k] = c
                vecs.append(vec)
        if not vecs:
            return P
        sub, inc = submodule(P, vecs)
        quot, proj = quotient_module(P, inc)
        return quot


def projective_covers_over(algebra: TableAlgebra, module: TableModule):
    """Projective cover over a basic table algebra (Ae_i family)."""
    from exborel.modules import projective_cover
    return projective_cover(module)


# ---------------------------------------------------------------------------
# the full report


def borel_report(ra: RightAlgebra, base_algebra: TableAlgebra, preorder,
                 ext_bound=None, seed=7):
    """Assemble the right-algebra / Borel verification record."""
    f = ra.field
    pres = ra.pres
    report = {"gamma_dim": ra.dim, "abar_dim": ra.abar.dim,
              "checks": {}, "failures": []}

    deltas_prime = {}
    alphas = {}
    for i in pres.points:
        s = simple_dit_module(pres, f, i)
        ind, homs, alpha = induce_module(ra, s)
        deltas_prime[i] = ind
        expd = s.total_dim() + ra.hom_v_dim(s)
        if ind.total_dim != expd:
            report["failures"].append(f"induced dim of Delta'_{i}")
    report["delta_prime_dims"] = {i: deltas_prime[i].total_dim
                                  for i in pres.points}

    tops = simple_tops_of(ra, deltas_prime)
    cartan_gamma, mult = cartan_from_blocks(ra, tops)
    cartan_base = base_cartan(base_algebra)
    pts_g = list(ra.table.points)
    pts_b = list(base_algebra.points)
    cartan_equal = all(
        cartan_gamma[(pts_g[a], pts_g[b])] == cartan_base[(pts_b[a],
                                                           pts_b[b])]
        for a in range(len(pts_g)) for b in range(len(pts_g)))
    report["cartan_gamma"] = [[cartan_gamma[(i, j)] for j in pts_g]
                              for i in pts_g]
    report["cartan_lambda"] = [[cartan_base[(i, j)] for j in pts_b]
                               for i in pts_b]
    report["checks"]["cartan_equal"] = cartan_equal
    report["checks"]["simple_count_equal"] = len(pts_g) == len(pts_b)

    # indecomposable projectives over Gamma and the strict system
    projs = indecomposable_projectives(ra.table, tops)
    hs_prime = HomSystem(ra.table, preorder, deltas_prime)
    verdict = check_system(hs_prime, ext_bound=ext_bound,
                           indec_projectives=projs, seed=seed)
    report["system_prime"] = verdict.as_dict()
    ext_bound_used = verdict.ext_bound

    borel = EmbeddedBorel(ra)
    bt = borel.btable
    report["checks"]["borel_directed"] = borel.is_directed()
    rp, cover_dim, gdim = borel.right_projective()
    report["checks"]["borel_right_projective"] = rp
    iso_ok = True
    for i in pres.points:
        tens = borel.tensor_simple(i)
        if not modules_isomorphic(tens, deltas_prime[i]):
            iso_ok = False
            report["failures"].append(f"Gamma (x)_B S_{i} != Delta'_{i}")
    report["checks"]["delta_prime_iso"] = iso_ok

    # regularity: dim Ext^n_B(S_i, S_j) = dim Ext^n_Gamma(D'_i, D'_j)
    regular_table = {}
    regular_ok = True
    b_res = {}
    for i in bt.points:
        b_res[i] = min_resolution(simple_module(bt, i))
    g_res = {i: min_resolution(deltas_prime[i], indec_projectives=projs)
             for i in pres.points}
    bound = ext_bound_used if ext_bound is None else ext_bound
    bound = max(bound, max((b_res[i].length for i in bt.points),
                           default=0))
    for n in range(1, bound + 1):
        for i in pres.points:
            for j in pres.points:
                db = ext_space(b_res[i], n, simple_module(bt, j)).dim
                dg = ext_space(g_res[i], n, deltas_prime[j]).dim
                if db or dg:
                    regular_table[f"{i},{j},{n}"] = [db, dg]
                if db != dg:
                    regular_ok = False
    report["regular_table"] = regular_table
    report["checks"]["regular"] = regular_ok
    report["ext_bound"] = bound

    # homological comparison on simples and extension middles
    homological_ok, homological_table = _homological_comparison(
        ra, borel, projs, bound)
    report["homological_table"] = homological_table
    report["checks"]["homological"] = homological_ok

    report["ok"] = (cartan_equal and verdict.homological and
                    verdict.admissible and verdict.strict and
                    report["checks"]["borel_directed"] and rp and iso_ok and
                    regular_ok and homological_ok and
                    not report["failures"])
    return report


def _homological_comparison(ra, borel, projs, bound):
    """dim Ext^n_B(M, N) >= dim Ext^n_Gamma(GM, GN) for n = 1, equality
    for n >= 2; sampled over simples and extension middles."""
    f = ra.field
    bt = borel.btable
    pres = ra.pres
    samples = {}
    for i in bt.points:
        samples[f"S{i}"] = simple_module(bt, i)
    # extension middles from nonzero Ext^1(S_i, S_j)
    for i in bt.points:
        for j in bt.points:
            res = min_resolution(samples[f"S{i}"])
            es = ext_space(res, 1, samples[f"S{j}"])
            if es.dim:
                mid = _extension_middle(bt, i, j, f)
                if mid is not None:
                    samples[f"E{i}{j}"] = mid
    resb_cache = {}
    resg_cache = {}
    induced = {}
    for name, M in samples.items():
        resb_cache[name] = min_resolution(M)
        GM, _, _ = induce_module(ra, _dit_from_table(pres, bt, M, f))
        induced[name] = GM
        resg_cache[name] = min_resolution(GM, indec_projectives=projs)
    table = {}
    ok = True
    for namem in samples:
        for namen, N in samples.items():
            for n in range(1, bound + 1):
                db = ext_space(resb_cache[namem], n, N).dim
                dg = ext_space(resg_cache[namem], n, induced[namen]).dim
                if db or dg:
                    table[f"{namem},{namen},{n}"] = [db, dg]
                if n == 1 and db < dg:
                    ok = False
                if n >= 2 and db != dg:
                    ok = False
    return ok, table


def _extension_middle(bt, i, j, f):
    """A non-split extension of S_i by S_j read off a connecting arrow."""
    arrows = [x for x in bt.basis
              if bt.src[x] == i and bt.tgt[x] == j and
              not bt.is_idempotent_label(x)]
    if not arrows:
        return None
    x0 = arrows[0]
    dims = {p: (1 if p == i else 0) + (1 if p == j else 0)
            for p in bt.points}
    # basis ordering inside a point block: [i-part, j-part] when i == j
    action = {}
    for x in bt.basis:
        s, t = bt.src[x], bt.tgt[x]
        m = Matrix.zeros(f, dims[t], dims[s])
        if bt.is_idempotent_label(x):
            if dims[s]:
                m = Matrix.identity(f, dims[s])
        elif x == x0:
            row = 0 if i != j else 1
            m.data[row][0] = f.one
        action[x] = m
    mod = TableModule(bt, dims, action)
    try:
        mod.verify()
    except AlgebraError:
        return None
    return mod


def _dit_from_table(pres, bt, M, f):
    """View a module over the embedded (directed) algebra as a module of
    the presentation (the solid arrows act through the B-labels)."""
    rho = {}
    for a in pres.solid:
        lab = (a.name,)
        if lab in bt.index:
            rho[a.name] = M.action[lab]
        else:
            rho[a.name] = Matrix.zeros(f, M.dims[a.tgt], M.dims[a.src])
    return DitModule(pres, f, {p: M.dims[p] for p in pres.points}, rho)
