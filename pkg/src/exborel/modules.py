"""Finite-dimensional basic-ish algebras by structure constants, and
their finite module categories.

The central type is TableAlgebra: a finite directed basis (each basis
element lives in some e_j A e_i), a multiplication table, and a chosen
family of orthogonal idempotents summing to 1.  Path algebras modulo
admissible ideals produce one; so does the right algebra of a
ditalgebra, which has no quiver presentation a priori.  All module
machinery (hom spaces, radicals, covers, minimal resolutions, Ext,
Yoneda products, indecomposable splitting) is written at this level so
both kinds of algebra share it.
"""

from __future__ import annotations

from fractions import Fraction

from exborel.linalg import (
    Matrix, Subspace, complement_basis, hstack, invert, kernel_basis, rank,
    rref, solve, vstack,
)
from exborel.quivers import AlgebraPresentation, ParseError


class AlgebraError(ValueError):
    pass


class TableAlgebra:
    """Algebra with a directed basis and a multiplication table.

    basis: list of hashable labels.
    src/tgt: label -> point (the e_i grading).
    unit_label: point -> label of e_i.
    mult: dict[(x, y)] -> {label: coeff}, the product x*y (y applied
    first); absent keys mean zero or non-composable.
    """

    def __init__(self, field, points, basis, src, tgt, unit_label, mult):
        self.field = field
        self.points = list(points)
        self.basis = list(basis)
        self.src = dict(src)
        self.tgt = dict(tgt)
        self.unit_label = dict(unit_label)
        self.mult = {k: dict(v) for k, v in mult.items() if v}
        self.index = {x: n for n, x in enumerate(self.basis)}
        self._radical = None
        self._by_block = None

    @property
    def dim(self):
        return len(self.basis)

    def is_idempotent_label(self, x):
        return self.unit_label.get(self.src[x]) == x

    def block_basis(self, i, j):
        """Labels spanning e_j A e_i (paths i -> j)."""
        if self._by_block is None:
            self._by_block = {}
            for x in self.basis:
                self._by_block.setdefault((self.src[x], self.tgt[x]),
                                          []).append(x)
        return self._by_block.get((i, j), [])

    def product(self, x, y):
        """Product of basis labels as a coefficient dict."""
        if self.src[x] != self.tgt[y]:
            return {}
        return self.mult.get((x, y), {})

    def product_elements(self, u, v):
        """Product of coefficient dicts."""
        f = self.field
        out = {}
        for x, cx in u.items():
            if f.eq(cx, f.zero):
                continue
            for y, cy in v.items():
                c = f.mul(cx, cy)
                if f.eq(c, f.zero):
                    continue
                for z, cz in self.product(x, y).items():
                    acc = f.add(out.get(z, f.zero), f.mul(c, cz))
                    out[z] = acc
        return {z: c for z, c in out.items() if not f.eq(c, f.zero)}

    def check_associative(self):
        for x in self.basis:
            for y in self.basis:
                if self.src[x] != self.tgt[y]:
                    continue
                xy = self.product(x, y)
                for z in self.basis:
                    if self.src[y] != self.tgt[z]:
                        continue
                    lhs = self.product_elements(xy, {z: self.field.one})
                    rhs = self.product_elements({x: self.field.one},
                                                self.product(y, z))
                    if lhs != rhs:
                        raise AlgebraError(
                            f"multiplication not associative at "
                            f"({x},{y},{z})")
        return True

    def left_mult_matrix(self, elem):
        """Matrix of left multiplication by a coefficient dict."""
        f = self.field
        n = self.dim
        m = Matrix.zeros(f, n, n)
        for j, y in enumerate(self.basis):
            out = self.product_elements(elem, {y: f.one})
            for z, c in out.items():
                m.data[self.index[z]][j] = c
        return m

    def radical_vectors(self):
        """Basis of the Jacobson radical as coordinate vectors.

        Trace-form criterion (exact over Q; over F_p requires p larger
        than the dimension, which the CLI warns about), then verified:
        the candidate is a nilpotent ideal and the quotient has zero
        candidate radical.
        """
        if self._radical is not None:
            return self._radical
        f = self.field
        n = self.dim
        trace_l = {}
        for z in self.basis:
            m = self.left_mult_matrix({z: f.one})
            t = f.zero
            for d in range(n):
                t = f.add(t, m.data[d][d])
            trace_l[z] = t
        gram = Matrix.zeros(f, n, n)
        for i, x in enumerate(self.basis):
            for j, y in enumerate(self.basis):
                tr = f.zero
                for z, c in self.product(x, y).items():
                    tr = f.add(tr, f.mul(c, trace_l[z]))
                gram.data[i][j] = tr
        ker = kernel_basis(gram)
        rad = [{self.basis[k]: v[k] for k in range(n)
                if not f.eq(v[k], f.zero)} for v in ker.basis]
        self._radical = ker.basis
        self._verify_radical(rad)
        return self._radical

    def _verify_radical(self, rad_elems):
        f = self.field
        n = self.dim
        span = Subspace(f, n, self._radical)

        def coords(elem):
            v = [f.zero] * n
            for x, c in elem.items():
                v[self.index[x]] = c
            return v

        for r in rad_elems:
            for x in self.basis:
                left = self.product_elements({x: f.one}, r)
                right = self.product_elements(r, {x: f.one})
                if not span.contains(coords(left)) or \
                        not span.contains(coords(right)):
                    raise AlgebraError("radical candidate is not an ideal")
        # nilpotency: power spans must strictly shrink until zero
        cur = rad_elems
        prev_dim = len(rad_elems)
        for _ in range(n + 1):
            if not cur:
                return
            nxt_vecs = []
            for a in cur:
                for b in rad_elems:
                    p = self.product_elements(a, b)
                    if p:
                        nxt_vecs.append(coords(p))
            nxt_space = Subspace(f, n, nxt_vecs)
            if nxt_space.dim == 0:
                return
            if nxt_space.dim >= prev_dim:
                raise AlgebraError("radical candidate is not nilpotent")
            prev_dim = nxt_space.dim
            cur = [{self.basis[k]: v[k] for k in range(n)
                    if not f.eq(v[k], f.zero)} for v in nxt_space.basis]
        raise AlgebraError("radical candidate is not nilpotent")

    def radical_elements(self):
        f = self.field
        out = []
        for v in self.radical_vectors():
            out.append({self.basis[k]: v[k] for k in range(self.dim)
                        if not f.eq(v[k], f.zero)})
        return out

    def opposite(self):
        """Opposite algebra (right modules become left ones)."""
        mult = {}
        for (x, y), val in self.mult.items():
            mult[(y, x)] = val
        return TableAlgebra(self.field, self.points, self.basis,
                            self.tgt, self.src, self.unit_label, mult)


# ---------------------------------------------------------------------------
# path algebras modulo admissible ideals


class PathAlgebra(TableAlgebra):
    """k(Q)/I with a normal-form basis of paths.

    Extra structure on top of TableAlgebra: the presentation, the set of
    normal paths (basis labels are path tuples, () labels split per
    vertex as ('e', v)), and a reduction map from arbitrary paths to
    normal form.
    """

    def __init__(self, field, presentation, normal_paths, reducer):
        self.presentation = presentation
        q = presentation.quiver
        basis = []
        src = {}
        tgt = {}
        unit_label = {}
        for v in q.vertices:
            lab = ("e", v)
            basis.append(lab)
            src[lab] = tgt[lab] = v
            unit_label[v] = lab
        for p in normal_paths:
            basis.append(p)
            src[p] = q.path_src(p)
            tgt[p] = q.path_tgt(p)
        self._reduce_path = reducer
        mult = {}
        f = field
        labels = basis
        for x in labels:
            for y in labels:
                sx = src[x]
                if sx != tgt[y]:
                    continue
                if x == ("e", sx):
                    mult[(x, y)] = {y: f.one}
                    continue
                if y == ("e", src[y]):
                    mult[(x, y)] = {x: f.one}
                    continue
                comb = reducer(x + y)
                entry = {}
                for p, c in comb.items():
                    lab = p if p else ("e", src[y])
                    entry[lab] = c
                if entry:
                    mult[(x, y)] = entry
        super().__init__(field, q.vertices, basis, src, tgt, unit_label, mult)
        self.normal_paths = list(normal_paths)

    def reduce_path(self, path):
        """Normal form of an arbitrary composable path, as a label dict."""
        f = self.field
        comb = self._reduce_path(path)
        out = {}
        for p, c in comb.items():
            lab = p if p else ("e", self.presentation.quiver.path_src(path)
                               if path else None)
            out[lab] = c
        return out

    def arrow_labels(self):
        return [p for p in self.normal_paths if len(p) == 1]

    def radical_vectors(self):
        # arrow ideal = radical for admissible presentations
        if self._radical is None:
            f = self.field
            vecs = []
            for p in self.normal_paths:
                if len(p) >= 1:
                    v = [f.zero] * self.dim
                    v[self.index[p]] = f.one
                    vecs.append(v)
            self._radical = Subspace(f, self.dim, vecs).basis
        return self._radical


def normal_basis(presentation: AlgebraPresentation, field) -> PathAlgebra:
    """Normal-form path basis of k(Q)/I by layered linear reduction.

    Enumerates paths by increasing length; within each (length,
    endpoints) layer, quotients by the span of relations multiplied by
    paths on both sides, choosing normal paths through deterministic
    complements.  For cyclic quivers the declared (or default)
    nilpotency bound must kill the top layer, otherwise the quotient is
    reported as not visibly finite-dimensional.
    """
    q = presentation.quiver
    acyclic = q.is_acyclic()
    if acyclic:
        cutoff = q.longest_path_bound()
    else:
        cutoff = presentation.nilpotency_bound
        if cutoff is None:
            cutoff = len(q.arrows) + sum(
                len(p) for rel in presentation.relations for _, p in rel.terms)
    paths_by_len = q.paths_from_lengths(max(cutoff, 1))
    all_paths = [p for ln in sorted(paths_by_len) for p in paths_by_len[ln]]
    pindex = {p: n for n, p in enumerate(all_paths)}
    f = field

    def path_ok(p):
        return p in pindex

    # ideal span: u * rel * v for all paths u, v, truncated at cutoff.
    # Truncation is sound here: for acyclic quivers nothing is truncated,
    # and for bounded cyclic ones the top layer is verified to die below.
    ideal_vecs = []
    n_all = len(all_paths)
    for rel in presentation.relations:
        rsrc, rtgt = rel.endpoints(q)
        min_rel = min(len(p) for _, p in rel.terms)
        for lu in range(0, cutoff - min_rel + 1):
            for u in paths_by_len.get(lu, []):
                if u and q.path_src(u) != rtgt:
                    continue
                for lv in range(0, cutoff - min_rel - lu + 1):
                    for v in paths_by_len.get(lv, []):
                        if v and q.path_tgt(v) != rsrc:
                            continue
                        vec = [f.zero] * n_all
                        for coeff, p in rel.terms:
                            w = u + p + v
                            # terms beyond the cutoff lie in the declared
                            # nilpotent tail, so dropping them is sound
                            if len(w) > cutoff:
                                continue
                            vec[pindex[w]] = f.add(vec[pindex[w]],
                                                   f.of(coeff))
                        if any(not f.eq(c, f.zero) for c in vec):
                            ideal_vecs.append(vec)
    # order basis: paths sorted by (length, enumeration index) is already
    # the order of all_paths; echelonize the ideal in those coordinates
    ideal = Subspace(f, n_all, ideal_vecs)
    # normal paths: greedy complement layer-compatible (lowest index first)
    normal = []
    span = Subspace(f, n_all, list(ideal.basis))
    full_dim = n_all
    for p in all_paths:
        if span.dim == full_dim:
            break
        v = [f.zero] * n_all
        v[pindex[p]] = f.one
        if not span.contains(v):
            normal.append(p)
            span = Subspace(f, n_all, span.basis + [v])
    if not acyclic:
        top = [p for p in normal if len(p) == cutoff]
        if top:
            raise AlgebraError(
                "quotient not finite-dimensional within nilpotency bound "
                f"{cutoff}: normal form survives at length {cutoff} "
                f"(e.g. {'*'.join(top[0])}); raise nilpotency_bound if the "
                "algebra is finite-dimensional")

    # reduction of a path to a combination of normal paths: solve against
    # the column matrix [normal path vectors | ideal basis]
    normal_set = set(normal)
    reduce_cache = {}
    normal_idx = {p: n for n, p in enumerate(normal)}
    col_mat = None
    if normal or ideal.basis:
        cols = []
        for p in normal:
            v = [f.zero] * n_all
            v[pindex[p]] = f.one
            cols.append(v)
        cols.extend(ideal.basis)
        col_mat = Matrix.from_rows(f, cols).transpose()

    def reducer(path):
        """Arbitrary composable path -> {normal path: coeff}."""
        if path in reduce_cache:
            return reduce_cache[path]
        if path in normal_set:
            out = {path: f.one}
        elif len(path) <= cutoff and path in pindex:
            v = Matrix.column(f, [f.one if all_paths[k] == path else f.zero
                                  for k in range(n_all)])
            x = solve(col_mat, v)
            if x is None:
                raise AlgebraError("internal reduction failure")
            out = {}
            for np_, k in normal_idx.items():
                c = x.data[k][0]
                if not f.eq(c, f.zero):
                    out[np_] = c
        else:
            # peel the last-applied arrow and recurse; terminates because
            # normal paths are strictly shorter than the cutoff here
            head, rest = path[:1], path[1:]
            inner = reducer(rest)
            out = {}
            for np_, c in inner.items():
                for np2, c2 in reducer(head + np_).items():
                    acc = f.add(out.get(np2, f.zero), f.mul(c, c2))
                    out[np2] = acc
            out = {p: c for p, c in out.items() if not f.eq(c, f.zero)}
        reduce_cache[path] = out
        return out

    nontrivial = [p for p in normal if len(p) >= 1]
    return PathAlgebra(field, presentation, nontrivial, reducer)


# ---------------------------------------------------------------------------
# modules over a TableAlgebra


class TableModule:
    """Finite-dimensional left module: dims per point, one matrix per
    basis label of the algebra."""

    def __init__(self, algebra: TableAlgebra, dims, action):
        self.algebra = algebra
        self.dims = {p: int(dims.get(p, 0)) for p in algebra.points}
        self.action = action  # label -> Matrix (dims[tgt] x dims[src])
        self.total_dim = sum(self.dims.values())
        self._offsets = {}
        off = 0
        for p in algebra.points:
            self._offsets[p] = off
            off += self.dims[p]

    def offset(self, p):
        return self._offsets[p]

    def act(self, label) -> Matrix:
        return self.action[label]

    def act_elem_block(self, elem, i, j) -> Matrix:
        """Action e_j . elem . e_i as a dims[j] x dims[i] matrix."""
        f = self.algebra.field
        out = Matrix.zeros(f, self.dims[j], self.dims[i])
        for x, c in elem.items():
            if self.algebra.src[x] == i and self.algebra.tgt[x] == j:
                out = out + self.action[x].scale(c)
        return out

    def full_action_matrix(self, elem) -> Matrix:
        """Action of a coefficient dict on the total space."""
        f = self.algebra.field
        n = self.total_dim
        out = Matrix.zeros(f, n, n)
        for x, c in elem.items():
            i, j = self.algebra.src[x], self.algebra.tgt[x]
            m = self.action[x]
            oi, oj = self._offsets[i], self._offsets[j]
            for r in range(m.rows):
                for s in range(m.cols):
                    out.data[oj + r][oi + s] = f.add(
                        out.data[oj + r][oi + s], f.mul(c, m.data[r][s]))
        return out

    def verify(self):
        """Check the action respects the multiplication table."""
        alg = self.algebra
        f = alg.field
        for x in alg.basis:
            for y in alg.basis:
                if alg.src[x] != alg.tgt[y]:
                    continue
                lhs = self.action[x] * self.action[y]
                rhs = Matrix.zeros(f, self.dims[alg.tgt[x]],
                                   self.dims[alg.src[y]])
                for z, c in alg.product(x, y).items():
                    rhs = rhs + self.action[z].scale(c)
                if lhs != rhs:
                    raise AlgebraError(
                        f"module action violates table at ({x},{y})")
        for p in alg.points:
            e = self.action[alg.unit_label[p]]
            ident = Matrix.identity(f, self.dims[p])
            if e != ident:
                raise AlgebraError(f"idempotent {p} does not act as identity")
        return True


class ModuleMap:
    """Morphism of TableModules: one matrix per point."""

    def __init__(self, source: TableModule, target: TableModule, blocks):
        self.source = source
        self.target = target
        self.blocks = blocks  # point -> Matrix (target.dims[p] x source.dims[p])

    @classmethod
    def zero(cls, source, target):
        f = source.algebra.field
        return cls(source, target,
                   {p: Matrix.zeros(f, target.dims[p], source.dims[p])
                    for p in source.algebra.points})

    @classmethod
    def identity(cls, m):
        f = m.algebra.field
        return cls(m, m, {p: Matrix.identity(f, m.dims[p])
                          for p in m.algebra.points})

    def is_morphism(self) -> bool:
        alg = self.source.algebra
        for x in alg.basis:
            i, j = alg.src[x], alg.tgt[x]
            lhs = self.blocks[j] * self.source.action[x]
            rhs = self.target.action[x] * self.blocks[i]
            if lhs != rhs:
                return False
        return True

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self o other."""
        return ModuleMap(other.source, self.target,
                         {p: self.blocks[p] * other.blocks[p]
                          for p in self.source.algebra.points})

    def __add__(self, other):
        return ModuleMap(self.source, self.target,
                         {p: self.blocks[p] + other.blocks[p]
                          for p in self.blocks})

    def __sub__(self, other):
        return ModuleMap(self.source, self.target,
                         {p: self.blocks[p] - other.blocks[p]
                          for p in self.blocks})

    def scale(self, c):
        return ModuleMap(self.source, self.target,
                         {p: self.blocks[p].scale(c) for p in self.blocks})

    def is_zero(self):
        return all(m.is_zero() for m in self.blocks.values())

    def is_injective(self):
        return all(rank(m) == m.cols for m in self.blocks.values())

    def is_surjective(self):
        return all(rank(m) == m.rows for m in self.blocks.values())

    def is_iso(self):
        return all(m.rows == m.cols and rank(m) == m.rows
                   for m in self.blocks.values())

    def flatten(self):
        out = []
        for p in self.source.algebra.points:
            out.extend(self.blocks[p].flatten())
        return out

    @classmethod
    def from_flat(cls, source, target, vec):
        f = source.algebra.field
        blocks = {}
        k = 0
        for p in source.algebra.points:
            r, c = target.dims[p], source.dims[p]
            m = Matrix.zeros(f, r, c)
            for a in range(r):
                for b in range(c):
                    m.data[a][b] = vec[k]
                    k += 1
            blocks[p] = m
        return cls(source, target, blocks)


def zero_module(algebra: TableAlgebra) -> TableModule:
    f = algebra.field
    dims = {p: 0 for p in algebra.points}
    action = {x: Matrix.zeros(f, 0, 0) for x in algebra.basis}
    return TableModule(algebra, dims, action)


def simple_module(algebra: TableAlgebra, point) -> TableModule:
    f = algebra.field
    dims = {p: (1 if p == point else 0) for p in algebra.points}
    action = {}
    for x in algebra.basis:
        i, j = algebra.src[x], algebra.tgt[x]
        m = Matrix.zeros(f, dims[j], dims[i])
        if x == algebra.unit_label.get(point) and i == j == point:
            m.data[0][0] = f.one
        action[x] = m
    return TableModule(algebra, dims, action)


def projective_module(algebra: TableAlgebra, point) -> TableModule:
    """P_i = A e_i with basis the labels of source i."""
    f = algebra.field
    cols = [x for x in algebra.basis if algebra.src[x] == point]
    by_pt = {p: [x for x in cols if algebra.tgt[x] == p]
             for p in algebra.points}
    dims = {p: len(by_pt[p]) for p in algebra.points}
    pos = {}
    for p in algebra.points:
        for n, x in enumerate(by_pt[p]):
            pos[x] = n
    action = {}
    for a in algebra.basis:
        i, j = algebra.src[a], algebra.tgt[a]
        m = Matrix.zeros(f, dims[j], dims[i])
        for y in by_pt[i]:
            for z, c in algebra.product(a, y).items():
                m.data[pos[z]][pos[y]] = f.add(m.data[pos[z]][pos[y]], c)
        action[a] = m
    mod = TableModule(algebra, dims, action)
    mod.projective_point = point
    mod.projective_basis = by_pt
    return mod


def direct_sum(mods):
    """Direct sum of TableModules; also returns inclusion/projection maps."""
    mods = list(mods)
    alg = mods[0].algebra
    f = alg.field
    dims = {p: sum(m.dims[p] for m in mods) for p in alg.points}
    action = {}
    for x in alg.basis:
        i, j = alg.src[x], alg.tgt[x]
        blocks = [m.action[x] for m in mods]
        big = Matrix.zeros(f, dims[j], dims[i])
        ro = co = 0
        for b in blocks:
            for r in range(b.rows):
                for c in range(b.cols):
                    big.data[ro + r][co + c] = b.data[r][c]
            ro += b.rows
            co += b.cols
        action[x] = big
    total = TableModule(alg, dims, action)
    incs = []
    projs = []
    ro = {p: 0 for p in alg.points}
    for m in mods:
        inc = {}
        prj = {}
        for p in alg.points:
            mi = Matrix.zeros(f, dims[p], m.dims[p])
            mp = Matrix.zeros(f, m.dims[p], dims[p])
            for r in range(m.dims[p]):
                mi.data[ro[p] + r][r] = f.one
                mp.data[r][ro[p] + r] = f.one
            inc[p] = mi
            prj[p] = mp
        incs.append(ModuleMap(m, total, inc))
        projs.append(ModuleMap(total, m, prj))
        for p in alg.points:
            ro[p] += m.dims[p]
    return total, incs, projs


def submodule(module: TableModule, vectors):
    """Smallest submodule containing the given total-space vectors.

    Returns (sub as TableModule, inclusion ModuleMap).
    """
    alg = module.algebra
    f = alg.field
    n = module.total_dim
    span = Subspace(f, n, vectors)
    changed = True
    gens = list(span.basis)
    while changed:
        changed = False
        new_vecs = []
        for x in alg.basis:
            m = module.full_action_matrix({x: f.one})
            for v in gens:
                w = (m * Matrix.column(f, v)).col(0)
                if not span.contains(w):
                    new_vecs.append(w)
        if new_vecs:
            span = Subspace(f, n, span.basis + new_vecs)
            gens = list(span.basis)
            changed = True
    # the span is stable under every idempotent action, so it decomposes
    # pointwise: project the echelon basis onto each point block
    basis_by_point = {}
    for p in alg.points:
        off, d = module.offset(p), module.dims[p]
        proj_vecs = [v[off:off + d] for v in span.basis]
        basis_by_point[p] = Subspace(f, d, proj_vecs).basis
    dims = {p: len(basis_by_point[p]) for p in alg.points}
    inc_blocks = {}
    for p in alg.points:
        d = module.dims[p]
        m = Matrix.zeros(f, d, dims[p])
        for c, v in enumerate(basis_by_point[p]):
            for r in range(d):
                m.data[r][c] = v[r]
        inc_blocks[p] = m
    action = {}
    for x in alg.basis:
        i, j = alg.src[x], alg.tgt[x]
        # solve inc_j * A_x^sub = A_x * inc_i
        rhs = module.action[x] * inc_blocks[i]
        sol = solve(inc_blocks[j], rhs)
        if sol is None:
            raise AlgebraError("submodule: span not action-stable")
        action[x] = sol
    sub = TableModule(alg, dims, action)
    return sub, ModuleMap(sub, module, inc_blocks)


def quotient_module(module: TableModule, sub_inclusion: ModuleMap):
    """Quotient by the image of an inclusion: (quotient, projection)."""
    alg = module.algebra
    f = alg.field
    proj_blocks = {}
    comp_bases = {}
    for p in alg.points:
        d = module.dims[p]
        img = Subspace(f, d, [sub_inclusion.blocks[p].col(c)
                              for c in range(sub_inclusion.blocks[p].cols)])
        full = Subspace(f, d, [[f.one if k == r else f.zero
                                for k in range(d)] for r in range(d)])
        comp = complement_basis(img, full)
        comp_bases[p] = comp
        # projection: coordinates along comp modulo img
        cols = [list(v) for v in img.basis] + [list(v) for v in comp.basis]
        if cols:
            m = Matrix.from_rows(f, cols).transpose()
            minv = invert(m)
        else:
            minv = Matrix.zeros(f, 0, 0)
        q = Matrix.zeros(f, comp.dim, d)
        for c in range(d):
            if d == 0:
                continue
            col = [minv.data[r][c] for r in range(d)]
            for r in range(comp.dim):
                q.data[r][c] = col[img.dim + r]
        proj_blocks[p] = q
    dims = {p: comp_bases[p].dim for p in alg.points}
    action = {}
    for x in alg.basis:
        i, j = alg.src[x], alg.tgt[x]
        # action on quotient: q_j * A_x * section_i, where section lifts
        # quotient basis via comp vectors
        sec = Matrix.zeros(f, module.dims[i], dims[i])
        for c, v in enumerate(comp_bases[i].basis):
            for r in range(module.dims[i]):
                sec.data[r][c] = v[r]
        action[x] = proj_blocks[j] * (module.action[x] * sec)
    quot = TableModule(alg, dims, action)
    return quot, ModuleMap(module, quot, proj_blocks)


def kernel_of(map_: ModuleMap):
    """Kernel submodule with inclusion."""
    alg = map_.source.algebra
    f = alg.field
    vecs = []
    n = map_.source.total_dim
    for p in alg.points:
        ker = kernel_basis(map_.blocks[p])
        off = map_.source.offset(p)
        for v in ker.basis:
            w = [f.zero] * n
            for k, c in enumerate(v):
                w[off + k] = c
            vecs.append(w)
    return submodule(map_.source, vecs)


def image_vectors(map_: ModuleMap):
    """Total-space vectors spanning the image."""
    f = map_.source.algebra.field
    n = map_.target.total_dim
    out = []
    for p in map_.source.algebra.points:
        off = map_.target.offset(p)
        m = map_.blocks[p]
        for c in range(m.cols):
            col = m.col(c)
            w = [f.zero] * n
            for k, v in enumerate(col):
                w[off + k] = v
            out.append(w)
    return out


def hom_space(m: TableModule, n: TableModule):
    """Basis of Hom(m, n) as a list of ModuleMaps.

    Solves the intertwining constraints f_tgt(x) A^m_x = A^n_x f_src(x)
    over all basis labels.
    """
    alg = m.algebra
    f = alg.field
    sizes = [(p, n.dims[p], m.dims[p]) for p in alg.points]
    total_unknowns = sum(r * c for _, r, c in sizes)
    if total_unknowns == 0:
        return []
    offsets = {}
    off = 0
    for p, r, c in sizes:
        offsets[p] = off
        off += r * c

    rows = []
    for x in alg.basis:
        if alg.is_idempotent_label(x):
            continue
        i, j = alg.src[x], alg.tgt[x]
        a_m = m.action[x]
        a_n = n.action[x]
        # constraint: F_j * a_m - a_n * F_i = 0, entries (r, c):
        for r in range(n.dims[j]):
            for c in range(m.dims[i]):
                row = [f.zero] * total_unknowns
                # (F_j * a_m)[r][c] = sum_s F_j[r][s] a_m[s][c]
                for s in range(m.dims[j]):
                    row[offsets[j] + r * m.dims[j] + s] = f.add(
                        row[offsets[j] + r * m.dims[j] + s], a_m.data[s][c])
                # (a_n * F_i)[r][c] = sum_s a_n[r][s] F_i[s][c]
                for s in range(n.dims[i]):
                    idx = offsets[i] + s * m.dims[i] + c
                    row[idx] = f.sub(row[idx], a_n.data[r][s])
                rows.append(row)
    if rows:
        ker = kernel_basis(Matrix.from_rows(f, rows))
        vecs = ker.basis
    else:
        vecs = [[f.one if k == t else f.zero for k in range(total_unknowns)]
                for t in range(total_unknowns)]
    out = []
    for v in vecs:
        blocks = {}
        for p, r, c in sizes:
            mtx = Matrix.zeros(f, r, c)
            for a in range(r):
                for b in range(c):
                    mtx.data[a][b] = v[offsets[p] + a * c + b]
            blocks[p] = mtx
        out.append(ModuleMap(m, n, blocks))
    return out


def radical_submodule(module: TableModule):
    """rad(A).M with inclusion (and nothing else)."""
    alg = module.algebra
    f = alg.field
    vecs = []
    n = module.total_dim
    for relem in alg.radical_elements():
        mat = module.full_action_matrix(relem)
        for c in range(n):
            col = mat.col(c)
            if any(not f.eq(v, f.zero) for v in col):
                vecs.append(col)
    return submodule(module, vecs)


def radical_top(module: TableModule):
    """(radical inclusion, top quotient, projection)."""
    rad, inc = radical_submodule(module)
    top, proj = quotient_module(module, inc)
    return rad, inc, top, proj


def projective_cover(module: TableModule, indec_projectives=None):
    """Projective cover (P, epi).

    indec_projectives: optional list of (label, P, simple_top) for
    algebras whose Ae_i are not indecomposable (e.g. right algebras);
    defaults to the P_i = Ae_i family, valid for basic algebras.
    """
    alg = module.algebra
    f = alg.field
    if module.total_dim == 0:
        raise AlgebraError("projective cover of the zero module")
    rad, inc, top, proj = radical_top(module)
    if indec_projectives is None:
        indec_projectives = [(p, projective_module(alg, p),
                              simple_module(alg, p)) for p in alg.points]
    summands = []
    lift_maps = []
    for label, P, S in indec_projectives:
        homs = hom_space(P, module)
        if not homs:
            continue
        # images in Hom(P, top): pick a maximal independent family
        coords = []
        for h in homs:
            coords.append(proj.compose(h).flatten())
        if not coords or all(all(f.eq(c, f.zero) for c in v) for v in coords):
            continue
        # Hom(P, module) -> Hom(P, top) is onto (P projective), so greedy
        # independent picks among basis homs realize the multiplicity
        space = Subspace(f, len(coords[0]), [])
        chosen = []
        want = _top_multiplicity(top, S)
        for h, v in zip(homs, coords):
            if len(chosen) == want:
                break
            if any(not f.eq(c, f.zero) for c in v) and not space.contains(v):
                chosen.append(h)
                space = Subspace(f, len(v), space.basis + [v])
        if len(chosen) != want:
            raise AlgebraError("projective cover: lift selection failed")
        for h in chosen:
            summands.append(P)
            lift_maps.append(h)
    if not summands:
        raise AlgebraError("projective cover: no covering summand found")
    total, incs, projs = direct_sum(summands)
    total.summand_labels = [lab for lab, _P in
                            zip(_labels_of(summands, indec_projectives),
                                summands)]
    blocks = {}
    for p in alg.points:
        mats = [h.blocks[p] for h in lift_maps]
        blocks[p] = hstack(mats) if mats else Matrix.zeros(
            f, module.dims[p], 0)
    epi = ModuleMap(total, module, blocks)
    if not epi.is_surjective():
        raise AlgebraError("projective cover construction not surjective")
    return total, epi


def _labels_of(summands, indec_projectives):
    by_id = {id(P): lab for lab, P, _S in indec_projectives}
    return [by_id[id(P)] for P in summands]


def _top_multiplicity(top, S):
    """Multiplicity of the simple S in the semisimple module top."""
    # End(S) = k for split simples, so the hom dimension is the count
    return len(hom_space(S, top))
