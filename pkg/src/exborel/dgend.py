"""The dg endomorphism algebra of a family of projective resolutions.

Basis elements are elementary maps between single spots of the chosen
resolutions; products and the differential d(f) = d o f - (-1)^|f| f o d
are tabulated once.  The block decomposition (compatible pairs vs
incompatible pairs of indices), the splitting off of the spot-diagonal
identities, and the boundary/harmonic/lift decomposition used for
homotopy transfer all live here.
"""

from __future__ import annotations

from exborel.linalg import Matrix, Subspace, complement_basis, solve
from exborel.modules import (
    AlgebraError, ModuleMap, hom_space,
)
from exborel.resolutions import endomorphism_table


class DGEnd:
    """Differential graded endomorphism algebra of chosen resolutions.

    Labels: ("el", i, j, s, t, k) = k-th basis map P^{-s}_{Delta_i} ->
    P^{-t}_{Delta_j}; degree s - t.  For the (i, i, 0, 0) blocks the
    basis is adapted so that k = 0 is the identity and k >= 1 spans the
    radical of End(P^0_i).
    """

    def __init__(self, resolutions, preorder, field):
        self.resolutions = dict(resolutions)
        self.preorder = preorder
        self.field = field
        self.points = list(resolutions)
        self.basis = []
        self.maps = {}
        self.block_of = {}
        self._block_members = {}
        self._build_basis()
        self._prod_cache = {}
        self._diff_cache = {}

    # -- construction -----------------------------------------------------

    def _build_basis(self):
        f = self.field
        for i in self.points:
            res_i = self.resolutions[i]
            for j in self.points:
                res_j = self.resolutions[j]
                for s in range(res_i.length + 1):
                    for t in range(res_j.length + 1):
                        src_mod = res_i.module_at(s)
                        tgt_mod = res_j.module_at(t)
                        if src_mod.total_dim == 0 or tgt_mod.total_dim == 0:
                            continue
                        homs = hom_space(src_mod, tgt_mod)
                        if not homs:
                            continue
                        if i == j and s == 0 and t == 0:
                            homs = self._adapt_identity_first(homs, src_mod)
                        for k, h in enumerate(homs):
                            lab = ("el", i, j, s, t, k)
                            self.basis.append(lab)
                            self.maps[lab] = h
                            self.block_of[lab] = (i, j, s, t)
                            self._block_members.setdefault(
                                (i, j, s, t), []).append(lab)

    def _adapt_identity_first(self, homs, mod):
        """Reorder the (i,i,0,0) hom basis to [identity, radical...]."""
        f = self.field
        ident = ModuleMap.identity(mod)
        flat = [h.flatten() for h in homs]
        m = Matrix.from_rows(f, flat).transpose()
        x = solve(m, Matrix.column(f, ident.flatten()))
        if x is None:
            raise AlgebraError("identity missing from End(P^0)")
        # radical of the local endomorphism algebra: non-isomorphisms.
        # P^0 is an indecomposable projective, so End is local; the
        # radical is the kernel of the (split) quotient to k.  Build it
        # as the span of basis combinations with zero identity-component
        # after rebasing with the identity first.
        out = [ident]
        space = Subspace(f, len(ident.flatten()), [ident.flatten()])
        for h in homs:
            v = h.flatten()
            if not space.contains(v):
                # subtract the identity component so the tail is radical
                out.append(h)
                space = Subspace(f, len(v), space.basis + [v])
        # normalize tails into the radical: h -> h - c*id with c the
        # identity coordinate (computed against the adapted basis)
        adapted = [ident]
        mm = Matrix.from_rows(f, [h.flatten() for h in out]).transpose()
        for h in out[1:]:
            coords = solve(mm, Matrix.column(f, h.flatten()))
            c = coords.data[0][0]
            if f.eq(c, f.zero):
                adapted.append(h)
            else:
                adapted.append(h - ident.scale(c))
        # verify radical part consists of non-isomorphisms
        for h in adapted[1:]:
            if h.is_iso():
                raise AlgebraError(
                    "End(P^0) does not split over its radical (field too "
                    "small?)")
        return adapted

    # -- degree and block helpers ------------------------------------------

    def degree(self, lab):
        _, i, j, s, t, _ = lab
        return s - t

    def block_members(self, i, j, s, t):
        return self._block_members.get((i, j, s, t), [])

    def labels_in_prime(self):
        """Labels of the compatible-pair part (class(i) <= class(j))."""
        return [lab for lab in self.basis
                if self.preorder.leq_bar(lab[1], lab[2])]

    def labels_in_double_prime(self):
        return [lab for lab in self.basis
                if not self.preorder.leq_bar(lab[1], lab[2])]

    def labels_in_r_prime(self):
        """Basis of the non-unital subalgebra complementing the e*_i."""
        out = []
        for lab in self.labels_in_prime():
            _, i, j, s, t, k = lab
            if (s, t) == (0, 0) and i == j and k == 0:
                continue  # the identity of P^0_i belongs to e*_i
            out.append(lab)
        return out

    def e_star(self, i):
        """e*_i = sum of spot identities of the i-th resolution."""
        f = self.field
        out = {}
        res = self.resolutions[i]
        for s in range(res.length + 1):
            mod = res.module_at(s)
            ident = ModuleMap.identity(mod)
            coords = self._express_in_block(ident, i, i, s, s)
            for lab, c in coords.items():
                out[lab] = f.add(out.get(lab, f.zero), c)
        return {k: v for k, v in out.items() if not f.eq(v, f.zero)}

    def _express_in_block(self, map_, i, j, s, t):
        f = self.field
        labs = self.block_members(i, j, s, t)
        if not labs:
            if not map_.is_zero():
                raise AlgebraError("element escapes the tabulated blocks")
            return {}
        cols = [self.maps[lab].flatten() for lab in labs]
        m = Matrix.from_rows(f, cols).transpose()
        x = solve(m, Matrix.column(f, map_.flatten()))
        if x is None:
            raise AlgebraError("element not in the hom-space span")
        out = {}
        for k, lab in enumerate(labs):
            c = x.data[k][0]
            if not f.eq(c, f.zero):
                out[lab] = c
        return out

    # -- algebra structure ---------------------------------------------------

    def product_labels(self, g, x):
        """g * x (composition: x first), as coefficients on the basis."""
        key = (g, x)
        if key in self._prod_cache:
            return self._prod_cache[key]
        _, ix, jx, sx, tx, _ = x
        _, ig, jg, sg, tg, _ = g
        if (ig, sg) != (jx, tx):
            self._prod_cache[key] = {}
            return {}
        comp = self.maps[g].compose(self.maps[x])
        out = self._express_in_block(comp, ix, jg, sx, tg)
        self._prod_cache[key] = out
        return out

    def product(self, u, v):
        """Product of coefficient dicts (v applied first)."""
        f = self.field
        out = {}
        for g, cg in u.items():
            for x, cx in v.items():
                c = f.mul(cg, cx)
                if f.eq(c, f.zero):
                    continue
                for lab, cl in self.product_labels(g, x).items():
                    out[lab] = f.add(out.get(lab, f.zero), f.mul(c, cl))
        return {k: v2 for k, v2 in out.items() if not f.eq(v2, f.zero)}

    def diff_label(self, x):
        """d(x) = d_P o x - (-1)^{|x|} x o d_P on a basis label."""
        key = x
        if key in self._diff_cache:
            return self._diff_cache[key]
        f = self.field
        _, i, j, s, t, k = x
        n = s - t
        out = {}
        res_j = self.resolutions[j]
        res_i = self.resolutions[i]
        # left part: d^{-t}: P^{-t} -> P^{-(t-1)}, defined for t >= 1
        if t >= 1:
            d_tgt = res_j.diffs[t]
            comp = d_tgt.compose(self.maps[x])
            for lab, c in self._express_in_block(comp, i, j, s, t - 1).items():
                out[lab] = f.add(out.get(lab, f.zero), c)
        # right part: x o d^{-(s+1)}: P^{-(s+1)} -> P^{-t}
        if s + 1 <= res_i.length:
            d_src = res_i.diffs[s + 1]
            comp = self.maps[x].compose(d_src)
            sign = f.one if n % 2 == 0 else f.neg(f.one)
            for lab, c in self._express_in_block(comp, i, j, s + 1, t).items():
                out[lab] = f.sub(out.get(lab, f.zero), f.mul(sign, c))
        out = {k2: v for k2, v in out.items() if not f.eq(v, f.zero)}
        self._diff_cache[x] = out
        return out

    def diff(self, u):
        f = self.field
        out = {}
        for x, c in u.items():
            for lab, cl in self.diff_label(x).items():
                out[lab] = f.add(out.get(lab, f.zero), f.mul(c, cl))
        return {k: v for k, v in out.items() if not f.eq(v, f.zero)}

    def check_d_squared(self):
        for x in self.basis:
            if self.diff(self.diff_label(x)):
                raise AlgebraError(f"d^2 != 0 at {x}")
        return True

    def check_leibniz(self):
        f = self.field
        for x in self.basis:
            for y in self.basis:
                p = self.product_labels(x, y)
                lhs = self.diff(p)
                rhs = self.product(self.diff_label(x), {y: f.one})
                sign = f.one if self.degree(x) % 2 == 0 else f.neg(f.one)
                for lab, c in self.product({x: f.one},
                                           self.diff_label(y)).items():
                    rhs[lab] = f.add(rhs.get(lab, f.zero), f.mul(sign, c))
                rhs = {k: v for k, v in rhs.items() if not f.eq(v, f.zero)}
                if lhs != rhs:
                    raise AlgebraError(f"Leibniz fails at ({x},{y})")
        return True

    def homology_dims(self, restrict_to_r_prime=False):
        """Homology dimensions per (degree, i, j) block."""
        groups = self._graded_blocks(restrict_to_r_prime)
        out = {}
        for (n, i, j), labs in groups.items():
            z, b, _ = self._zbh(groups, n, i, j)
            out[(n, i, j)] = z.dim - b.dim
        return {k: v for k, v in out.items() if v}

    def _graded_blocks(self, restrict_to_r_prime):
        labs = (self.labels_in_r_prime() if restrict_to_r_prime
                else list(self.basis))
        groups = {}
        for lab in labs:
            _, i, j, s, t, _ = lab
            groups.setdefault((s - t, i, j), []).append(lab)
        return groups

    def _diff_matrix(self, groups, n, i, j):
        """Matrix of d from block (n,i,j) to block (n+1,i,j)."""
        f = self.field
        src = groups.get((n, i, j), [])
        tgt = groups.get((n + 1, i, j), [])
        tgt_idx = {lab: k for k, lab in enumerate(tgt)}
        m = Matrix.zeros(f, len(tgt), len(src))
        for c, lab in enumerate(src):
            for out_lab, coeff in self.diff_label(lab).items():
                if out_lab in tgt_idx:
                    m.data[tgt_idx[out_lab]][c] = coeff
                elif self._in_groups(groups, out_lab):
                    raise AlgebraError(
                        "differential leaves its graded block")
                else:
                    # component escapes the restricted subspace: the
                    # subspace is not d-invariant
                    raise AlgebraError(
                        "restricted subspace is not d-invariant "
                        f"(at {lab} -> {out_lab})")
        return m, src, tgt

    @staticmethod
    def _in_groups(groups, lab):
        _, i, j, s, t, _ = lab
        return lab in groups.get((s - t, i, j), [])

    def _zbh(self, groups, n, i, j):
        from exborel.linalg import kernel_basis
        f = self.field
        src = groups.get((n, i, j), [])
        m_out, _, _ = self._diff_matrix(groups, n, i, j)
        z = kernel_basis(m_out) if src else Subspace(f, 0)
        m_in, prev, _ = self._diff_matrix(groups, n - 1, i, j)
        b_vecs = []
        for c in range(m_in.cols):
            col = m_in.col(c)
            if any(not f.eq(v, f.zero) for v in col):
                b_vecs.append(col)
        b = Subspace(f, len(src), b_vecs)
        return z, b, src


class HomotopyData:
    """Boundary/harmonic/lift splitting of the d-invariant subalgebra.

    Exposes p (projection to harmonics), iota (inclusion), and Q (the
    degree -1 homotopy: inverse of d on boundaries, zero elsewhere),
    satisfying dQ + Qd = id - iota p together with the side conditions
    Q^2 = 0, pQ = 0, Q iota = 0.
    """

    def __init__(self, dg: DGEnd, preferred_harmonics=None):
        self.dg = dg
        self.groups = dg._graded_blocks(restrict_to_r_prime=True)
        # verify the subalgebra is closed under d
        self._verify_closure()
        self.block_data = {}
        for key in sorted(self.groups, key=str):
            n, i, j = key
            self.block_data[key] = self._split(n, i, j, preferred_harmonics)
        self.harmonic_labels = []
        self._harm_reps = {}
        for key in sorted(self.block_data, key=str):
            n, i, j = key
            data = self.block_data[key]["data"]
            for idx in range(len(data["harm"])):
                lab = ("h", n, i, j, idx)
                self.harmonic_labels.append(lab)
                self._harm_reps[lab] = self.block_data[key]["harm_elems"][idx]

    def _verify_closure(self):
        f = self.dg.field
        rset = set(self.dg.labels_in_r_prime())
        for lab in rset:
            for out_lab in self.dg.diff_label(lab):
                if out_lab not in rset:
                    raise AlgebraError(
                        "subalgebra not d-invariant; resolutions are not "
                        "index-bounded for this preorder")
        # product closure is implied by boundedness; verified on demand

    def _split(self, n, i, j, preferred):
        from exborel.linalg import kernel_basis
        f = self.dg.field
        src = self.groups.get((n, i, j), [])
        dim = len(src)
        m_out, _, tgt = self.dg._diff_matrix(self.groups, n, i, j)
        m_in, prev, _ = self.dg._diff_matrix(self.groups, n - 1, i, j)
        z = kernel_basis(m_out) if dim else Subspace(f, 0)
        b_vecs = []
        for c in range(m_in.cols):
            col = m_in.col(c)
            if any(not f.eq(v, f.zero) for v in col):
                b_vecs.append(col)
        b = Subspace(f, dim, b_vecs)
        if preferred and (n, i, j) in preferred:
            harm_vecs = preferred[(n, i, j)]
            harm = Subspace(f, dim, harm_vecs)
            if harm.dim != z.dim - b.dim:
                raise AlgebraError("preferred harmonic basis has wrong size")
            # keep the given order, not the echelon
            harm_list = [list(v) for v in harm_vecs]
            chk = b
            for v in harm_list:
                if chk.contains(v):
                    raise AlgebraError("preferred harmonics meet boundaries")
                if not z.contains(v):
                    raise AlgebraError("preferred harmonics not cocycles")
                chk = Subspace(f, dim, chk.basis + [v])
        else:
            harm = complement_basis(b, z)
            harm_list = [list(v) for v in harm.basis]
        full = Subspace(f, dim, [[f.one if a == c else f.zero
                                  for a in range(dim)] for c in range(dim)])
        lift = complement_basis(z, full)
        data = {
            "labels": src,
            "z": z, "b": b,
            "harm": harm_list,
            "lift": [list(v) for v in lift.basis],
        }
        return {"harm_elems": [self._vec_to_elem(src, v) for v in harm_list],
                "data": data}

    def _vec_to_elem(self, labs, vec):
        f = self.dg.field
        return {lab: c for lab, c in zip(labs, vec) if not f.eq(c, f.zero)}

    # -- operators ---------------------------------------------------------

    def _elem_to_vec(self, elem, key):
        f = self.dg.field
        labs = self.groups.get(key, [])
        idx = {lab: k for k, lab in enumerate(labs)}
        v = [f.zero] * len(labs)
        for lab, c in elem.items():
            if lab not in idx:
                raise AlgebraError("element not supported on the subalgebra")
            v[idx[lab]] = c
        return v

    def _group_by_block(self, elem):
        out = {}
        for lab, c in elem.items():
            _, i, j, s, t, _ = lab
            out.setdefault((s - t, i, j), {})[lab] = c
        return out

    def project(self, elem):
        """p: coefficients on the harmonic labels."""
        f = self.dg.field
        out = {}
        for key, part in self._group_by_block(elem).items():
            if key not in self.block_data:
                raise AlgebraError("projection outside tabulated blocks")
            data = self.block_data[key]["data"]
            labs = data["labels"]
            v = self._elem_to_vec(part, key)
            coords = self._coords(key, v)
            nharm = len(data["harm"])
            for idx in range(nharm):
                c = coords[idx]
                if not f.eq(c, f.zero):
                    lab = ("h", key[0], key[1], key[2], idx)
                    out[lab] = f.add(out.get(lab, f.zero), c)
        return out

    def _coords(self, key, vec):
        """Coordinates of vec in the ordered basis harm + boundary + lift."""
        f = self.dg.field
        data = self.block_data[key]["data"]
        cols = [list(v) for v in data["harm"]] + \
               [list(v) for v in data["b"].basis] + \
               [list(v) for v in data["lift"]]
        if not cols:
            return []
        m = Matrix.from_rows(f, cols).transpose()
        x = solve(m, Matrix.column(f, vec))
        if x is None:
            raise AlgebraError("block coordinates failed")
        return [x.data[k][0] for k in range(len(cols))]

    def include(self, harm_elem):
        """iota: harmonic coefficients -> subalgebra element."""
        f = self.dg.field
        out = {}
        for lab, c in harm_elem.items():
            rep = self._harm_reps[lab]
            for l2, c2 in rep.items():
                out[l2] = f.add(out.get(l2, f.zero), f.mul(c, c2))
        return {k: v for k, v in out.items() if not f.eq(v, f.zero)}

    def homotopy(self, elem):
        """Q: inverse of d on boundaries, zero on harmonics and lifts."""
        f = self.dg.field
        out = {}
        for key, part in self._group_by_block(elem).items():
            n, i, j = key
            data = self.block_data[key]["data"]
            v = self._elem_to_vec(part, key)
            coords = self._coords(key, v)
            nh = len(data["harm"])
            nb = data["b"].dim
            bpart = coords[nh:nh + nb]
            if all(f.eq(c, f.zero) for c in bpart):
                continue
            # solve d(lift of previous block) = boundary part
            prev_key = (n - 1, i, j)
            prev_data = self.block_data.get(prev_key)
            if prev_data is None:
                raise AlgebraError("boundary with no previous block")
            prev_labels = prev_data["data"]["labels"]
            lifts = prev_data["data"]["lift"]
            # image vectors d(lift_k) in this block's coordinates
            cols = []
            for lv in lifts:
                elem_prev = self._vec_to_elem(prev_labels, lv)
                dv = self.dg.diff(elem_prev)
                cols.append(self._elem_to_vec(dv, key))
            bvec = [f.zero] * len(data["labels"])
            for c, bv in zip(bpart, data["b"].basis):
                if f.eq(c, f.zero):
                    continue
                bvec = [f.add(a, f.mul(c, x)) for a, x in zip(bvec, bv)]
            m = Matrix.from_rows(f, cols).transpose()
            x = solve(m, Matrix.column(f, bvec))
            if x is None:
                raise AlgebraError("homotopy solve failed")
            for k, lv in enumerate(lifts):
                c = x.data[k][0]
                if f.eq(c, f.zero):
                    continue
                for lab, c2 in self._vec_to_elem(prev_labels, lv).items():
                    out[lab] = f.add(out.get(lab, f.zero), f.mul(c, c2))
        return {k: v for k, v in out.items() if not f.eq(v, f.zero)}

    def check_homotopy_identities(self):
        """dQ + Qd = id - iota p and the side conditions, on the basis."""
        dg = self.dg
        f = dg.field
        for lab in dg.labels_in_r_prime():
            e = {lab: f.one}
            lhs = _add(dg.diff(self.homotopy(e)),
                       self.homotopy(dg.diff(e)), f)
            rhs = _sub(e, self.include(self.project(e)), f)
            if lhs != rhs:
                raise AlgebraError(f"dQ + Qd != id - iota p at {lab}")
            if self.homotopy(self.homotopy(e)):
                raise AlgebraError(f"Q^2 != 0 at {lab}")
            if self.project(self.homotopy(e)):
                raise AlgebraError(f"pQ != 0 at {lab}")
        for lab in self.harmonic_labels:
            if self.homotopy(self.include({lab: f.one})):
                raise AlgebraError(f"Q iota != 0 at {lab}")
        return True

    def harmonic_degree(self, lab):
        return lab[1]

    def harmonic_block(self, lab):
        return lab[2], lab[3]


def harmonic_to_ext(hd: HomotopyData, harm_elem, ext):
    """Coordinates of a harmonic element in an ext-space basis.

    The classical identification: take the (n, 0) spot components of the
    representing chain, compose with the augmentation of the target
    resolution, reduce in the ext space.  harm_elem is a coefficient
    dict over harmonic labels of one (degree, i, j) block.
    """
    dg = hd.dg
    f = dg.field
    some = next(iter(harm_elem))
    n, i, j = some[1], some[2], some[3]
    rep = hd.include(harm_elem)
    aug = dg.resolutions[j].augmentation
    total = None
    for lab, c in rep.items():
        _, li, lj, s, t, k = lab
        if (li, lj, s, t) != (i, j, n, 0):
            continue
        part = aug.compose(dg.maps[lab]).scale(c)
        total = part if total is None else total + part
    if total is None:
        from exborel.modules import ModuleMap
        total = ModuleMap.zero(dg.resolutions[i].module_at(n), ext.target)
    return ext.reduce(total)


def _add(u, v, f):
    out = dict(u)
    for k, c in v.items():
        out[k] = f.add(out.get(k, f.zero), c)
    return {k: c for k, c in out.items() if not f.eq(c, f.zero)}


def _sub(u, v, f):
    out = dict(u)
    for k, c in v.items():
        out[k] = f.sub(out.get(k, f.zero), c)
    return {k: c for k, c in out.items() if not f.eq(c, f.zero)}
