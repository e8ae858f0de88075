"""Splitting table modules into indecomposable pieces.

Only central splitting is ever needed here: the isotypic components of
a module are separated by the primitive central idempotents of the
semisimple quotient of its endomorphism algebra, and those have
eigenvalues in the ground field whenever the simples are split.  Lifted
idempotents then cut the module.
"""

from __future__ import annotations

from exborel.linalg import Matrix, Subspace, solve
from exborel.modules import (
    AlgebraError, ModuleMap, TableAlgebra, TableModule, hom_space,
    submodule,
)
from exborel.resolutions import _min_poly, _rational_roots


def endo_table_algebra(module: TableModule):
    """(labels, basis maps, TableAlgebra) for End(M), identity first."""
    homs = hom_space(module, module)
    if not homs:
        raise AlgebraError("zero module has no endomorphism algebra")
    f = module.algebra.field
    ident = ModuleMap.identity(module)
    vecs = [ident.flatten()] + [h.flatten() for h in homs]
    maps = [ident] + list(homs)
    space = Subspace(f, len(vecs[0]), [])
    basis_maps = []
    for v, h in zip(vecs, maps):
        if not space.contains(v):
            basis_maps.append(h)
            space = Subspace(f, len(v), space.basis + [v])
    labels = list(range(len(basis_maps)))
    mm = Matrix.from_rows(f, [h.flatten() for h in basis_maps]).transpose()
    table = {}
    for a in labels:
        for b in labels:
            comp = basis_maps[a].compose(basis_maps[b])
            x = solve(mm, Matrix.column(f, comp.flatten()))
            if x is None:
                raise AlgebraError("End(M) not closed under composition")
            entry = {}
            for k in labels:
                c = x.data[k][0]
                if not f.eq(c, f.zero):
                    entry[k] = c
            table[(a, b)] = entry
    alg = TableAlgebra(f, ["*"], labels, {k: "*" for k in labels},
                       {k: "*" for k in labels}, {"*": 0}, table)
    return labels, basis_maps, alg


def _quotient_algebra_by_radical(alg: TableAlgebra):
    """(quotient labels as vectors, table) of A/rad(A) in adapted
    coordinates; returns (proj, lift, table algebra)."""
    f = alg.field
    n = alg.dim
    radv = alg.radical_vectors()
    rad = Subspace(f, n, radv)
    full = Subspace(f, n, [[f.one if a == c else f.zero for a in range(n)]
                           for c in range(n)])
    from exborel.linalg import complement_basis
    comp = complement_basis(rad, full)
    lift_vecs = [list(v) for v in comp.basis]
    m = Matrix.from_rows(f, [list(v) for v in rad.basis] + lift_vecs)
    minv = None
    from exborel.linalg import invert
    minv = invert(m.transpose())

    def project(vec):
        coords = minv * Matrix.column(f, vec)
        return [coords.data[rad.dim + k][0] for k in range(comp.dim)]

    labels = list(range(comp.dim))
    table = {}
    for a in labels:
        for b in labels:
            ea = {alg.basis[k]: lift_vecs[a][k] for k in range(n)
                  if not f.eq(lift_vecs[a][k], f.zero)}
            eb = {alg.basis[k]: lift_vecs[b][k] for k in range(n)
                  if not f.eq(lift_vecs[b][k], f.zero)}
            prod = alg.product_elements(ea, eb)
            vec = [f.zero] * n
            for lab, c in prod.items():
                vec[alg.index[lab]] = c
            coords = project(vec)
            entry = {k: c for k, c in enumerate(coords)
                     if not f.eq(c, f.zero)}
            table[(a, b)] = entry
    return lift_vecs, project, table


def _center_of_quotient(lift_vecs, table, field, dim):
    """Basis of the center of the quotient algebra (coordinates in the
    quotient basis)."""
    f = field
    nq = len(lift_vecs)
    rows = []
    for b in range(nq):
        # constraint: z*b - b*z = 0 for all b; unknowns z coords
        cols = []
        for a in range(nq):
            vec = [f.zero] * nq
            for k, c in table.get((a, b), {}).items():
                vec[k] = f.add(vec[k], c)
            for k, c in table.get((b, a), {}).items():
                vec[k] = f.sub(vec[k], c)
            cols.append(vec)
        for r in range(nq):
            rows.append([cols[a][r] for a in range(nq)])
    from exborel.linalg import kernel_basis
    if rows:
        ker = kernel_basis(Matrix.from_rows(f, rows))
        return ker.basis
    return [[f.one if k == t else f.zero for k in range(nq)]
            for t in range(nq)]


def _find_splitting_idempotent(module: TableModule):
    """A nontrivial idempotent endomorphism separating isotypic parts,
    or None if End/rad has trivial center (isotypic module)."""
    f = module.algebra.field
    labels, basis_maps, end_alg = endo_table_algebra(module)
    lift_vecs, project, qtable = _quotient_algebra_by_radical(end_alg)
    nq = len(lift_vecs)
    if nq <= 1:
        return None
    center = _center_of_quotient(lift_vecs, qtable, f, end_alg.dim)
    if len(center) <= 1:
        return None
    # find a central element with a nonlinear split minimal polynomial
    for zvec in center:
        mult = Matrix.zeros(f, nq, nq)
        for b in range(nq):
            for a in range(nq):
                c = zvec[a]
                if f.eq(c, f.zero):
                    continue
                for k, cv in qtable.get((a, b), {}).items():
                    mult.data[k][b] = f.add(mult.data[k][b], f.mul(c, cv))
        poly = _min_poly(mult, f)
        if len(poly) - 1 <= 1:
            continue
        roots = _rational_roots(poly, f)
        lam = roots[0]
        # spectral idempotent for lam: product of (z - mu)/(lam - mu)
        idem_q = None
        for mu in roots[1:]:
            factor_vec = list(zvec)
            # (z - mu) as quotient element: subtract mu * identity coords
            ident_q = project([f.one if k == 0 else f.zero
                               for k in range(end_alg.dim)])
            scal = f.inv(f.sub(f.of(lam), f.of(mu)))
            factor = [f.mul(scal, f.sub(a, f.mul(f.of(mu), b)))
                      for a, b in zip(zvec, ident_q)]
            idem_q = factor if idem_q is None else _qmul(
                idem_q, factor, qtable, f, nq)
        # lift to End(M): take any preimage and Newton-iterate
        e = _lift_quotient_elem(idem_q, lift_vecs, basis_maps, f)
        e = _newton_idempotent(e, module, f)
        if e is None:
            continue
        if _is_scalar_like(e, module, f):
            continue
        return e
    return None


def _qmul(a, b, qtable, f, nq):
    out = [f.zero] * nq
    for i, ca in enumerate(a):
        if f.eq(ca, f.zero):
            continue
        for j, cb in enumerate(b):
            c = f.mul(ca, cb)
            if f.eq(c, f.zero):
                continue
            for k, cv in qtable.get((i, j), {}).items():
                out[k] = f.add(out[k], f.mul(c, cv))
    return out


def _lift_quotient_elem(coords, lift_vecs, basis_maps, f):
    # quotient basis vectors live in End coordinates over basis_maps
    n = len(basis_maps)
    acc = None
    for c, vec in zip(coords, lift_vecs):
        if f.eq(c, f.zero):
            continue
        for k, cv in enumerate(vec):
            if f.eq(cv, f.zero):
                continue
            part = basis_maps[k].scale(f.mul(c, cv))
            acc = part if acc is None else acc + part
    if acc is None:
        acc = basis_maps[0].scale(f.zero)
    return acc


def _newton_idempotent(e: ModuleMap, module, f, max_iter=40):
    for _ in range(max_iter):
        e2 = e.compose(e)
        defect = e2 - e
        if all(m.is_zero() for m in defect.blocks.values()):
            return e
        # e <- 3e^2 - 2e^3
        e3 = e2.compose(e)
        e = e2.scale(f.of(3)) - e3.scale(f.of(2))
    return None


def _is_scalar_like(e, module, f):
    ident = ModuleMap.identity(module)
    return all(m.is_zero() for m in e.blocks.values()) or \
        all(m.is_zero() for m in (e - ident).blocks.values())


def split_isotypic(module: TableModule):
    """List of isotypic direct summands (as (module, inclusion))."""
    if module.total_dim == 0:
        return []
    e = _find_splitting_idempotent(module)
    if e is None:
        return [(module, ModuleMap.identity(module))]
    from exborel.modules import image_vectors
    img_e, inc_e = submodule(module, image_vectors(e))
    ident = ModuleMap.identity(module)
    img_c, inc_c = submodule(module, image_vectors(ident - e))
    if img_e.total_dim + img_c.total_dim != module.total_dim:
        raise AlgebraError("idempotent did not split the module")
    out = []
    for piece, inc in split_isotypic(img_e):
        out.append((piece, inc_e.compose(inc)))
    for piece, inc in split_isotypic(img_c):
        out.append((piece, inc_c.compose(inc)))
    return out


def indecomposable_projectives(algebra: TableAlgebra, simple_tops):
    """[(point, P'_point, S'_point)] for a possibly non-basic algebra.

    simple_tops: {point: simple module S'_point} (the top of the
    would-be projective); the projective at `point` is cut out of
    A e_point as the isotypic piece whose top contains S'_point, which
    occurs with multiplicity one.
    """
    from exborel.modules import projective_module, radical_top
    out = []
    for p in algebra.points:
        Pfull = projective_module(algebra, p)
        pieces = split_isotypic(Pfull)
        hit = []
        for piece, inc in pieces:
            _, _, top, _ = radical_top(piece)
            if hom_space(simple_tops[p], top):
                hit.append(piece)
        if len(hit) != 1:
            raise AlgebraError(
                f"projective extraction at {p}: expected a unique piece, "
                f"got {len(hit)}")
        out.append((p, hit[0], simple_tops[p]))
    return out
