"""End-to-end construction from an algebra presentation to the
differential tensor-algebra presentation and its right algebra.

The chain is: normal basis -> homological system -> minimal resolutions
-> dg endomorphism algebra -> homotopy splitting (with harmonic bases
adapted to the radical filtrations, so depth labels can be read off)
-> transferred A-infinity structure with strict units -> bar shift ->
bigraph presentation with differential and ideal.
"""

from __future__ import annotations

from exborel.linalg import Subspace, complement_basis
from exborel.modules import AlgebraError, hom_space, simple_module
from exborel.homological import (
    HomSystem, Preorder, check_system, standard_modules,
)
from exborel.resolutions import ext_space, min_resolution
from exborel.dgend import DGEnd, HomotopyData
from exborel.ainfinity import (
    AinfAlgebra, TransferChoice, check_stasheff, check_strict_unit,
    extend_strict_unit, transfer,
)
from exborel.bocs import bar_of, build_presentation


class YonedaPipeline:
    """Holds every intermediate object of the construction."""

    def __init__(self, algebra, preorder: Preorder, deltas, field,
                 arity_cap=None, ext_bound=None, max_len=32):
        self.algebra = algebra
        self.preorder = preorder
        self.field = field
        self.deltas = dict(deltas)
        self.hs = HomSystem(algebra, preorder, self.deltas)
        ell = preorder.num_classes()
        self.arity_cap = arity_cap if arity_cap is not None else ell + 2
        self.ext_bound = ext_bound
        self.max_len = max_len
        self._built = False

    def build(self):
        if self._built:
            return self
        self.resolutions = {
            i: self.hs.resolution(i, max_len=self.max_len)
            for i in self.preorder.elements}
        self.dg = DGEnd(self.resolutions, self.preorder, self.field)
        base_hd = HomotopyData(self.dg)
        prov = transfer(TransferChoice(base_hd, None, None), 2)
        preferred, nu0, nu1 = _depth_adapted_harmonics(base_hd, prov)
        self.hd = HomotopyData(self.dg, preferred) if preferred else base_hd
        self.transferred = transfer(TransferChoice(self.hd, None, None),
                                    self.arity_cap)
        self.transferred.check_degrees()
        self.yoneda = extend_strict_unit(self.transferred)
        ok, witness = check_stasheff(self.yoneda)
        if not ok:
            raise AlgebraError(f"transferred structure fails Stasheff: "
                               f"{witness}")
        oku, msg = check_strict_unit(self.yoneda)
        if not oku:
            raise AlgebraError(f"strict unit check failed: {msg}")
        self._assert_cap_sufficient()
        self.nu0 = nu0
        self.nu1 = nu1
        self.bar = bar_of(self.yoneda)
        self.presentation = build_presentation(self.bar, self.preorder,
                                               nu0, nu1)
        self._built = True
        return self

    def _assert_cap_sufficient(self):
        """The operations consumed downstream involve arities at most
        |quotient poset| + 1; the structure must vanish there on tuples
        drawn from the degree <= 1 part."""
        ell = self.preorder.num_classes()
        probe = ell + 2
        table = self.transferred.ops.get(probe, {})
        low = {l for l in self.transferred.labels
               if self.transferred.degree[l] <= 1}
        for tup, val in table.items():
            if val and all(l in low for l in tup):
                raise AlgebraError(
                    "transferred operation outlives the directedness bound"
                    f" at arity {probe}")

    def system_verdict(self):
        return check_system(self.hs, ext_bound=self.ext_bound)

    def ext_dims_table(self, bound):
        out = {}
        for i in self.preorder.elements:
            for j in self.preorder.elements:
                for n in range(0, bound + 1):
                    d = self.hs.ext_dim(i, j, n)
                    if d:
                        out[(i, j, n)] = d
        return out


def _depth_adapted_harmonics(hd: HomotopyData, prov: AinfAlgebra):
    """Preferred harmonic bases adapted to the radical filtrations.

    The degree-0 part (radical of End(Delta)) is rebased along its own
    power filtration, the degree-1 part (ext^1) along the two-sided
    radical-action filtration; the attached depths are the nu labels the
    triangularity construction reads.
    """
    f = prov.field
    deg0 = [l for l in prov.labels if prov.degree[l] == 0]
    deg1 = [l for l in prov.labels if prov.degree[l] == 1]
    if not deg0:
        return None, {l: 0 for l in deg1}, {}

    def blocks_of(labels):
        out = {}
        for l in labels:
            out.setdefault((prov.src[l], prov.tgt[l]), []).append(l)
        return out

    def as_vec(elem, labs):
        idx = {l: k for k, l in enumerate(labs)}
        v = [f.zero] * len(labs)
        for l, c in elem.items():
            if l not in idx:
                raise AlgebraError("element leaves its degree block")
            v[idx[l]] = c
        return v

    def m2(x_elem, y_elem):
        return prov.apply_elem(2, (x_elem, y_elem))

    b0 = blocks_of(deg0)
    b1 = blocks_of(deg1)
    # radical power filtration J^u per degree-0 block
    j_layers = [{key: Subspace(f, len(labs),
                               [[f.one if a == c else f.zero
                                 for a in range(len(labs))]
                                for c in range(len(labs))])
                 for key, labs in b0.items()}]
    while True:
        prev = j_layers[-1]
        nxt = {}
        for (i, m), labs_im in b0.items():
            for (m2_, j), labs_mj in b0.items():
                if m2_ != m:
                    continue
                tgt_key = (i, j)
                if tgt_key not in b0:
                    continue
                space_im = prev.get((i, m))
                if space_im is None:
                    continue
                for uvec in _unit_elems(labs_mj, f):
                    for vvec_coords in space_im.basis:
                        velem = {l: c for l, c in zip(labs_im, vvec_coords)
                                 if not f.eq(c, f.zero)}
                        pr = m2(uvec, velem)
                        if pr:
                            v = as_vec(pr, b0[tgt_key])
                            nxt.setdefault(tgt_key, []).append(v)
        nxt_spaces = {key: Subspace(f, len(b0[key]), vecs)
                      for key, vecs in nxt.items()}
        nxt_spaces = {k: s for k, s in nxt_spaces.items() if s.dim}
        if not nxt_spaces:
            j_layers.append({})
            break
        if _same_layers(nxt_spaces, prev):
            raise AlgebraError("radical filtration does not terminate")
        j_layers.append(nxt_spaces)
        if len(j_layers) > 64:
            raise AlgebraError("radical filtration too deep")

    # two-sided action filtration on the degree-1 part:
    # U_0 = all, U_t = J.U_{t-1} + U_{t-1}.J
    u_layers = [{key: Subspace(f, len(labs),
                               [[f.one if a == c else f.zero
                                 for a in range(len(labs))]
                                for c in range(len(labs))])
                 for key, labs in b1.items()}]
    while True:
        prev = u_layers[-1]
        nxt_vecs = {}
        for (i, j), space in prev.items():
            labs_ij = b1[(i, j)]
            for vec in space.basis:
                elem = {l: c for l, c in zip(labs_ij, vec)
                        if not f.eq(c, f.zero)}
                # left action by J-basis
                for (m, j2), labs_l in b0.items():
                    if m != j:
                        continue
                    for uelem in _unit_elems(labs_l, f):
                        pr = m2(uelem, elem)
                        if pr:
                            key2 = (i, j2)
                            nxt_vecs.setdefault(key2, []).append(
                                as_vec(pr, b1[key2]))
                # right action
                for (i2, m), labs_r in b0.items():
                    if m != i:
                        continue
                    for uelem in _unit_elems(labs_r, f):
                        pr = m2(elem, uelem)
                        if pr:
                            key2 = (i2, j)
                            nxt_vecs.setdefault(key2, []).append(
                                as_vec(pr, b1[key2]))
        nxt_spaces = {key: Subspace(f, len(b1[key]), vecs)
                      for key, vecs in nxt_vecs.items()}
        nxt_spaces = {k: s for k, s in nxt_spaces.items() if s.dim}
        if not nxt_spaces:
            u_layers.append({})
            break
        if _same_layers(nxt_spaces, prev):
            raise AlgebraError("action filtration does not terminate")
        u_layers.append(nxt_spaces)
        if len(u_layers) > 64:
            raise AlgebraError("action filtration too deep")

    # adapted bases and depths; labels are ("h", n, i, j, k)
    preferred = {}
    nu1 = {}
    for (i, j), labs in sorted(b0.items(), key=str):
        dim = len(labs)
        chain = [j_layers[u].get((i, j), Subspace(f, dim))
                 for u in range(len(j_layers))]
        chain[0] = Subspace(f, dim, [[f.one if a == c else f.zero
                                      for a in range(dim)]
                                     for c in range(dim)])
        vecs, depths = _adapt_chain(chain, f, base_depth=1)
        preferred[(0, i, j)] = _to_group_coords(hd, (0, i, j), labs, vecs, f)
        for k, dep in enumerate(depths):
            nu1[("h", 0, i, j, k)] = dep
    nu0 = {}
    for (i, j), labs in sorted(b1.items(), key=str):
        dim = len(labs)
        chain = [u_layers[t].get((i, j), Subspace(f, dim))
                 for t in range(len(u_layers))]
        chain[0] = Subspace(f, dim, [[f.one if a == c else f.zero
                                      for a in range(dim)]
                                     for c in range(dim)])
        vecs, depths = _adapt_chain(chain, f, base_depth=0)
        preferred[(1, i, j)] = _to_group_coords(hd, (1, i, j), labs, vecs, f)
        for k, dep in enumerate(depths):
            nu0[("h", 1, i, j, k)] = dep
    # untouched blocks keep their default bases
    return preferred, nu0, nu1


def _unit_elems(labels, f):
    for l in labels:
        yield {l: f.one}


def _same_layers(a, b):
    if set(a) != set(b):
        return False
    return all(a[k].dim == b[k].dim and b[k].contains_space(a[k])
               for k in a)


def _adapt_chain(chain, f, base_depth):
    """Basis adapted to a descending chain; returns (vectors, depths)
    with depth = base + largest u with vector in chain[u]."""
    dim = chain[0].ambient if chain else 0
    vecs = []
    depths = []
    for u in range(len(chain) - 1, -1, -1):
        cur = chain[u]
        if cur.dim == 0:
            continue
        below = chain[u + 1] if u + 1 < len(chain) else Subspace(f, dim)
        span_so_far = Subspace(f, dim, below.basis + [list(v) for v in vecs])
        comp = complement_basis(span_so_far, cur)
        for v in comp.basis:
            vecs.append(list(v))
            depths.append(base_depth + u)
    # report in ascending-depth order for readability
    order = sorted(range(len(vecs)), key=lambda k: depths[k])
    return [vecs[k] for k in order], [depths[k] for k in order]


def _to_group_coords(hd: HomotopyData, key, labs, vecs, f):
    """Convert harmonic-label coordinate vectors into the raw group
    coordinates the splitting works with."""
    data = hd.block_data.get(key)
    if data is None:
        if vecs:
            raise AlgebraError("adapted block missing from the splitting")
        return []
    harm = data["data"]["harm"]
    out = []
    for v in vecs:
        acc = [f.zero] * len(data["data"]["labels"])
        for c, hvec in zip(v, harm):
            if f.eq(c, f.zero):
                continue
            acc = [f.add(a, f.mul(c, b)) for a, b in zip(acc, hvec)]
        out.append(acc)
    return out


def make_pipeline_from_job(job, field, arity_cap=None, ext_bound=None):
    """Build algebra, preorder and deltas from a parsed job input."""
    from exborel.modules import normal_basis
    algebra = normal_basis(job.presentation, field)
    verts = job.presentation.quiver.vertices
    if job.preorder_mode == "linear":
        preorder = Preorder.linear(verts)
    else:
        preorder = Preorder(verts, job.preorder_pairs)
    if job.deltas_mode == "standard":
        std = standard_modules(algebra, preorder)
        deltas = {i: d for i, (d, _) in std.items()}
    elif job.deltas_mode == "simples":
        deltas = {i: simple_module(algebra, i) for i in verts}
    else:
        from exborel.modules import TableModule
        from exborel.linalg import Matrix
        deltas = {}
        for name, mod in job.modules.items():
            if name not in verts:
                raise AlgebraError(
                    f"[module.{name}] does not match a vertex index")
            deltas[name] = _explicit_module(algebra, job, mod, field)
        missing = [v for v in verts if v not in deltas]
        if missing:
            raise AlgebraError(f"missing delta modules for {missing}")
    return YonedaPipeline(algebra, preorder, deltas, field,
                          arity_cap=arity_cap, ext_bound=ext_bound)


def _explicit_module(algebra, job, mod, field):
    from exborel.linalg import Matrix
    q = job.presentation.quiver
    f = field
    dims = {v: mod.dims.get(v, 0) for v in q.vertices}
    arrow_mats = {}
    for a in q.arrows:
        raw = mod.matrices.get(a.name)
        if raw is None:
            arrow_mats[a.name] = Matrix.zeros(f, dims[a.tgt], dims[a.src])
        else:
            arrow_mats[a.name] = Matrix(
                f, dims[a.tgt], dims[a.src],
                [[f.of(c) for c in row] for row in raw])
    # table action: path label -> product of arrow matrices
    action = {}
    unit_set = set(algebra.unit_label.values())
    for lab in algebra.basis:
        if lab in unit_set:
            action[lab] = Matrix.identity(f, dims[lab[1]])
        else:
            m = None
            for name in lab:
                cur = arrow_mats[name]
                m = cur if m is None else m * cur
            action[lab] = m
    from exborel.modules import TableModule
    tm = TableModule(algebra, dims, action)
    tm.verify()
    return tm
