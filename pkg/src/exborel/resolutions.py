"""Minimal projective resolutions, Ext spaces and Yoneda products.

Resolutions are chains P^0 <- P^-1 <- ... of explicit direct sums of
indecomposable projectives, built by iterated projective covers of
kernels.  Ext classes are held as cocycles in Hom(P^-n, N) together
with a fixed "harmonic" complement of the coboundaries, so chosen
representatives are reproducible.
"""

from __future__ import annotations

from exborel.linalg import Matrix, Subspace, complement_basis, rank, solve
from exborel.modules import (
    AlgebraError, ModuleMap, TableModule, direct_sum, hom_space, kernel_of,
    projective_cover, projective_module, radical_submodule, simple_module,
    zero_module,
)


class Resolution:
    """Minimal projective resolution of a module.

    modules[t] is the projective in homological degree -t; diffs[t] maps
    modules[t] -> modules[t-1] for t >= 1; augmentation maps modules[0]
    onto the resolved module.  summands[t] records the multiset of
    indecomposable projectives as (label, lift index) pairs.
    """

    def __init__(self, target, modules, diffs, augmentation, summands):
        self.target = target
        self.modules = modules
        self.diffs = diffs
        self.augmentation = augmentation
        self.summands = summands

    @property
    def length(self):
        return len(self.modules) - 1

    def module_at(self, t):
        """Projective at homological degree -t (None beyond length)."""
        if 0 <= t < len(self.modules):
            return self.modules[t]
        return None

    def check_exactness(self):
        """d^2 = 0, exactness in the middle, minimality of images."""
        aug = self.augmentation
        if not aug.is_surjective():
            raise AlgebraError("resolution: augmentation not surjective")
        prev = aug
        for t in range(1, len(self.modules)):
            d = self.diffs[t]
            comp = prev.compose(d)
            if not comp.is_zero():
                raise AlgebraError(f"resolution: d^2 != 0 at degree {-t}")
            # exactness: ker(prev) = im(d)
            ker_sub, ker_inc = kernel_of(prev)
            img_rank = sum(rank(d.blocks[p]) for p in d.source.algebra.points)
            if ker_sub.total_dim != img_rank:
                raise AlgebraError(f"resolution: not exact at degree {-t + 1}")
            prev = d
        # tail: last kernel must vanish for a complete resolution
        ker_sub, _ = kernel_of(prev)
        if ker_sub.total_dim != 0:
            raise AlgebraError("resolution: truncated (nonzero last kernel)")
        return True

    def check_minimal(self):
        """Every differential image lies in the radical of its codomain."""
        for t in range(1, len(self.modules)):
            d = self.diffs[t]
            rad, inc = radical_submodule(d.target)
            radspaces = {}
            f = d.source.algebra.field
            for p in d.source.algebra.points:
                cols = [inc.blocks[p].col(c)
                        for c in range(inc.blocks[p].cols)]
                radspaces[p] = Subspace(f, d.target.dims[p], cols)
            for p in d.source.algebra.points:
                m = d.blocks[p]
                for c in range(m.cols):
                    if not radspaces[p].contains(m.col(c)):
                        raise AlgebraError(
                            f"resolution not minimal at degree {-t}")
        return True


def min_resolution(module: TableModule, max_len: int = 32,
                   indec_projectives=None) -> Resolution:
    """Iterated projective covers of successive kernels."""
    if module.total_dim == 0:
        raise AlgebraError("cannot resolve the zero module")
    p0, eps = projective_cover(module, indec_projectives)
    modules = [p0]
    diffs = {}
    summands = [getattr(p0, "summand_labels", None)]
    cur_epi = eps
    for t in range(1, max_len + 2):
        ker, inc = kernel_of(cur_epi)
        if ker.total_dim == 0:
            break
        if t > max_len:
            raise AlgebraError(
                f"minimal resolution exceeds max length {max_len}")
        pt, epi = projective_cover(ker, indec_projectives)
        modules.append(pt)
        diffs[t] = inc.compose(epi)
        summands.append(getattr(pt, "summand_labels", None))
        cur_epi = epi
    return Resolution(module, modules, diffs, eps, summands)


def resolution_summand_points(res: Resolution, algebra, t):
    """Points i with P_i a summand of the degree -t term, with counts.

    Only valid when the resolution was built from the default
    projectives Ae_i of a basic algebra: multiplicities are read off the
    top of the projective term.
    """
    mod = res.module_at(t)
    if mod is None:
        return {}
    from exborel.modules import radical_top
    _, _, top, _ = radical_top(mod)
    return {p: top.dims[p] for p in algebra.points if top.dims[p]}


class ExtClass:
    """An Ext^n class: harmonic cocycle representative in Hom(P^-n, N)."""

    def __init__(self, resolution, n, cocycle: ModuleMap):
        self.resolution = resolution
        self.n = n
        self.cocycle = cocycle


class ExtSpace:
    """Ext^n(M, N) for a fixed resolution of M.

    Holds the full cocycle space, the coboundaries, and the harmonic
    complement (deterministic choice) used for representatives.
    """

    def __init__(self, resolution, n, target, cocycle_maps, coboundary_maps,
                 harmonic_maps):
        self.resolution = resolution
        self.n = n
        self.target = target
        self.cocycles = cocycle_maps
        self.coboundaries = coboundary_maps
        self.harmonics = harmonic_maps

    @property
    def dim(self):
        return len(self.harmonics)

    def classes(self):
        return [ExtClass(self.resolution, self.n, h) for h in self.harmonics]

    def reduce(self, cocycle: ModuleMap):
        """Coordinates of a cocycle in the harmonic basis (mod boundaries)."""
        f = cocycle.source.algebra.field
        vec = cocycle.flatten()
        if not vec:
            return []
        cols = [h.flatten() for h in self.harmonics] + \
               [b.flatten() for b in self.coboundaries]
        if not cols:
            if any(not f.eq(v, f.zero) for v in vec):
                raise AlgebraError("nonzero cocycle in zero Ext space")
            return []
        m = Matrix.from_rows(f, cols).transpose()
        x = solve(m, Matrix.column(f, vec))
        if x is None:
            raise AlgebraError("cocycle does not lie in the cocycle space")
        return [x.data[k][0] for k in range(len(self.harmonics))]


def ext_space(resolution: Resolution, n: int, target: TableModule) -> ExtSpace:
    """Ext^n via the Hom complex of the resolution.

    Representatives are the deterministic complement of coboundaries
    inside cocycles.
    """
    if n < 0:
        raise ValueError("ext degree must be >= 0")
    alg = target.algebra
    f = alg.field
    pn = resolution.module_at(n)
    if pn is None or pn.total_dim == 0:
        return ExtSpace(resolution, n, target, [], [], [])
    homs_n = hom_space(pn, target)
    if not homs_n:
        return ExtSpace(resolution, n, target, [], [], [])
    amb = len(homs_n[0].flatten())
    # cocycles: h with h o d^{-(n+1)} = 0
    d_next = resolution.diffs.get(n + 1)
    if d_next is None:
        cocycle_vecs = [h.flatten() for h in homs_n]
        cocycle_maps = list(homs_n)
    else:
        # kernel of precomposition hom(P^-n, N) -> hom(P^-(n+1), N)
        from exborel.linalg import kernel_basis
        coeff_rows = [h.compose(d_next).flatten() for h in homs_n]
        mat = Matrix.from_rows(f, coeff_rows)
        ker = kernel_basis(mat.transpose())
        cocycle_maps = []
        cocycle_vecs = []
        for v in ker.basis:
            comb = None
            for c, h in zip(v, homs_n):
                if f.eq(c, f.zero):
                    continue
                part = h.scale(c)
                comb = part if comb is None else comb + part
            if comb is None:
                comb = ModuleMap.zero(pn, target)
            cocycle_maps.append(comb)
            cocycle_vecs.append(comb.flatten())
    # coboundaries: g o d^{-n} for g in Hom(P^{-(n-1)}, N)
    cob_maps = []
    if n >= 1:
        d_here = resolution.diffs.get(n)
        prev = resolution.module_at(n - 1)
        if d_here is not None and prev is not None and prev.total_dim:
            for g in hom_space(prev, target):
                cob = g.compose(d_here)
                if not cob.is_zero():
                    cob_maps.append(cob)
    cob_space = Subspace(f, amb, [b.flatten() for b in cob_maps])
    coc_space = Subspace(f, amb, cocycle_vecs)
    harm = complement_basis(cob_space, coc_space)
    harmonic_maps = [ModuleMap.from_flat(pn, target, v) for v in harm.basis]
    cob_basis_maps = [ModuleMap.from_flat(pn, target, v)
                      for v in cob_space.basis]
    return ExtSpace(resolution, n, target, cocycle_maps, cob_basis_maps,
                    harmonic_maps)


def check_i_bounded(resolution: Resolution, i, preorder, algebra) -> bool:
    """Degree-0 summands satisfy j>=i, negative degrees j>i (quotient
    poset)."""
    for t in range(len(resolution.modules)):
        pts = resolution_summand_points(resolution, algebra, t)
        for j, mult in pts.items():
            if not mult:
                continue
            if t == 0:
                if not preorder.leq_bar(i, j):
                    return False
            else:
                if not (preorder.leq_bar(i, j) and not preorder.sim(i, j)):
                    return False
    return True


def lift_chain_map(res_source: Resolution, res_target: Resolution,
                   cocycle: ModuleMap, n: int):
    """Lift an Ext^n cocycle to a degree -n chain map between resolutions.

    Returns {t: ModuleMap P_source^{-t} -> P_target^{-(t-n)}} for t >= n.
    The lift solves one linear system per degree, and the free-variable
    convention of solve() makes it deterministic.
    """
    alg = cocycle.source.algebra
    f = alg.field
    lifts = {}
    # degree n component: lift cocycle through the augmentation of target
    aug = res_target.augmentation
    comp0 = _lift_through(cocycle, aug)
    if comp0 is None:
        raise AlgebraError("chain lift failed: input is not a cocycle")
    lifts[n] = comp0
    t = n + 1
    while res_source.module_at(t) is not None:
        tgt_deg = t - n
        d_src = res_source.diffs[t]
        prev = lifts[t - 1]
        rhs = prev.compose(d_src)  # P^{-t}_src -> P^{-(t-1-n)}_tgt
        d_tgt = res_target.diffs.get(tgt_deg)
        if d_tgt is None:
            tgt_mod = res_target.module_at(tgt_deg)
            if tgt_mod is None or tgt_mod.total_dim == 0:
                if not rhs.is_zero():
                    raise AlgebraError("chain lift failed beyond target end")
                lifts[t] = ModuleMap.zero(
                    d_src.source,
                    tgt_mod if tgt_mod is not None
                    else zero_module(alg))
                t += 1
                continue
            raise AlgebraError("chain lift: missing target differential")
        comp = _lift_through(rhs, d_tgt)
        if comp is None:
            raise AlgebraError("chain lift failed: obstruction met")
        lifts[t] = comp
        t += 1
    return lifts


def _lift_through(map_: ModuleMap, epi: ModuleMap):
    """Solve epi o h = map_ for h using projectivity of map_.source.

    map_: P -> N, epi: Q -> N with P projective; returns h: P -> Q.
    Solved columnwise per point on generators: since all our modules are
    table modules, solving the matrix equation per point and then
    verifying morphism-ness suffices (the solution space is nonempty by
    projectivity; morphism-ness is enforced by restricting to the
    hom-space basis).
    """
    alg = map_.source.algebra
    f = alg.field
    homs = hom_space(map_.source, epi.source)
    if not homs:
        return None if not map_.is_zero() else ModuleMap.zero(
            map_.source, epi.source)
    cols = [epi.compose(h).flatten() for h in homs]
    m = Matrix.from_rows(f, cols).transpose()
    b = Matrix.column(f, map_.flatten())
    x = solve(m, b)
    if x is None:
        return None
    out = None
    for k, h in enumerate(homs):
        c = x.data[k][0]
        if f.eq(c, f.zero):
            continue
        part = h.scale(c)
        out = part if out is None else out + part
    if out is None:
        out = ModuleMap.zero(map_.source, epi.source)
    return out


def yoneda_product(ext_g: ExtSpace, g_coords, ext_f: ExtSpace, f_coords,
                   ext_target: ExtSpace):
    """Product on the ext algebra: g o (chain lift of f), in the graded
    endomorphism convention.

    g in Ext^m(Y, Z) given by coordinates in ext_g's harmonic basis,
    f in Ext^n(X, Y) likewise; result coordinates in
    ext_target = Ext^{m+n}(X, Z).  A commuting chain lift differs from
    the degree-n endomorphism cocycle by (-1)^{n(s-n)} per spot, so the
    graded composition equals the naive splice times (-1)^{mn}; the
    graded convention is used so the product agrees on the nose with the
    homotopy-transferred binary operation.
    """
    f_field = ext_f.target.algebra.field
    fmap = _combine(ext_f.harmonics, f_coords, f_field)
    gmap = _combine(ext_g.harmonics, g_coords, f_field)
    if fmap is None or gmap is None:
        return [f_field.zero] * ext_target.dim
    n = ext_f.n
    m = ext_g.n
    lifts = lift_chain_map(ext_f.resolution, ext_g.resolution, fmap, n)
    lift_at = lifts.get(n + m)
    if lift_at is None:
        return [f_field.zero] * ext_target.dim
    spliced = gmap.compose(lift_at)
    if (m * n) % 2:
        spliced = spliced.scale(f_field.neg(f_field.one))
    return ext_target.reduce(spliced)


def _combine(maps, coords, field):
    out = None
    for c, h in zip(coords, maps):
        if field.eq(c, field.zero):
            continue
        part = h.scale(c)
        out = part if out is None else out + part
    if out is None and maps:
        out = ModuleMap.zero(maps[0].source, maps[0].target)
    return out


# ---------------------------------------------------------------------------
# indecomposable decomposition via central idempotent splitting


def _element_coords(alg, elem):
    f = alg.field
    v = [f.zero] * alg.dim
    for x, c in elem.items():
        v[alg.index[x]] = c
    return v


def endomorphism_table(homs, module):
    """Multiplication table of End(M) on a hom basis: returns (labels,
    table dict) with product = composition."""
    f = module.algebra.field
    labels = list(range(len(homs)))
    flat = [h.flatten() for h in homs]
    m = Matrix.from_rows(f, flat).transpose() if flat else None
    table = {}
    for a in labels:
        for b in labels:
            comp = homs[a].compose(homs[b])
            x = solve(m, Matrix.column(f, comp.flatten()))
            if x is None:
                raise AlgebraError("End(M) not closed under composition")
            entry = {}
            for k in labels:
                c = x.data[k][0]
                if not f.eq(c, f.zero):
                    entry[k] = c
            table[(a, b)] = entry
    return labels, table


def _min_poly(mult_matrix, field):
    """Minimal polynomial coefficients (monic, low degree first)."""
    n = mult_matrix.rows
    # iterate powers of the matrix acting on itself starting from identity
    powers = [Matrix.identity(field, n)]
    while True:
        powers.append(mult_matrix * powers[-1])
        rows = [p.flatten() for p in powers]
        m = Matrix.from_rows(field, rows)
        from exborel.linalg import kernel_basis
        ker = kernel_basis(m.transpose())
        if ker.dim > 0:
            # lowest-degree relation: echelon basis vector with the
            # highest pivot gives minimal degree; select the relation
            # with the smallest top nonzero index
            best = None
            for v in ker.basis:
                deg = max(k for k, c in enumerate(v)
                          if not field.eq(c, field.zero))
                if best is None or deg < best[0]:
                    best = (deg, v)
            deg, v = best
            lead = v[deg]
            inv = field.inv(lead)
            return [field.mul(inv, v[k]) for k in range(deg + 1)]


def _rational_roots(coeffs, field):
    """Roots in the field of a polynomial known to split with distinct
    roots (central elements of split semisimple algebras)."""
    from fractions import Fraction
    from exborel.linalg import PrimeField, Rationals
    deg = len(coeffs) - 1
    if deg == 1:
        return [field.neg(coeffs[0])]
    if isinstance(field, Rationals):
        # clear denominators, rational-root search
        den = 1
        for c in coeffs:
            den = den * Fraction(c).denominator // _gcd(
                den, Fraction(c).denominator)
        ints = [int(Fraction(c) * den) for c in coeffs]
        lead = ints[-1]
        const = ints[0]
        roots = []
        if const == 0:
            roots.append(Fraction(0))
            while ints[0] == 0:
                ints = ints[1:]
            const = ints[0]
        for p in _divisors(abs(const)):
            for q in _divisors(abs(lead)):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if cand in roots:
                        continue
                    if _poly_eval(coeffs, cand, field) == 0:
                        roots.append(cand)
        if len(roots) != deg:
            raise AlgebraError(
                "central splitting: minimal polynomial did not split "
                "over the rationals")
        return roots
    if isinstance(field, PrimeField):
        return _gf_roots(coeffs, field)
    raise AlgebraError("unsupported field for root finding")


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _poly_eval(coeffs, x, field):
    # coeffs are c_0..c_d (monic, c_d = 1); Horner evaluation
    acc = field.zero
    xv = field.of(x)
    for c in reversed(coeffs):
        acc = field.add(field.mul(acc, xv), c)
    return acc


def _gf_roots(coeffs, field):
    """Roots over F_p of a squarefree polynomial that splits."""
    p = field.p
    # polynomial arithmetic with lists (low degree first)

    def pmod(a, b):
        a = a[:]
        db, lb = len(b) - 1, b[-1]
        invlb = field.inv(lb)
        while len(a) - 1 >= db and any(a):
            while a and a[-1] % p == 0:
                a.pop()
            if len(a) - 1 < db:
                break
            c = field.mul(a[-1], invlb)
            shift = len(a) - 1 - db
            for k in range(len(b)):
                a[shift + k] = field.sub(a[shift + k], field.mul(c, b[k]))
            while a and a[-1] % p == 0:
                a.pop()
        return a if a else [0]

    def pgcd(a, b):
        a, b = a[:], b[:]
        while any(c % p for c in b):
            a, b = b, pmod(a, b)
        # normalize monic
        while a and a[-1] % p == 0:
            a.pop()
        if not a:
            return [0]
        inv = field.inv(a[-1])
        return [field.mul(inv, c) for c in a]

    def pmul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca % p == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] = field.add(out[i + j], field.mul(ca, cb))
        return out

    def xpow_mod(e, mod):
        # x^e mod `mod` by square and multiply
        result = [1]
        base = pmod([0, 1], mod)
        while e:
            if e & 1:
                result = pmod(pmul(result, base), mod)
            base = pmod(pmul(base, base), mod)
            e >>= 1
        return result

    f_poly = list(coeffs)
    # keep only the part splitting into linear factors: gcd(x^p - x, f)
    xp = xpow_mod(p, f_poly)
    xp_minus_x = list(xp)
    while len(xp_minus_x) < 2:
        xp_minus_x.append(0)
    xp_minus_x[1] = field.sub(xp_minus_x[1], 1)
    g = pgcd(f_poly, xp_minus_x)
    roots = []

    import random as _random
    rng = _random.Random(20240901)

    def split(poly):
        deg = len(poly) - 1
        if deg == 0:
            return
        if deg == 1:
            roots.append(field.mul(field.neg(poly[0]), field.inv(poly[1])))
            return
        while True:
            a = rng.randrange(p)
            # gcd((x+a)^((p-1)/2) - 1, poly)
            h = xpow_like(a, poly)
            d = pgcd(poly, h)
            if 0 < len(d) - 1 < deg:
                q, r = pdivmod(poly, d)
                split(d)
                split(q)
                return

    def xpow_like(a, mod):
        # (x+a)^((p-1)/2) - 1 mod `mod`
        e = (p - 1) // 2
        result = [1]
        base = pmod([a, 1], mod)
        ee = e
        while ee:
            if ee & 1:
                result = pmod(pmul(result, base), mod)
            base = pmod(pmul(base, base), mod)
            ee >>= 1
        result = list(result)
        if not result:
            result = [0]
        result[0] = field.sub(result[0], 1)
        return result

    def pdivmod(a, b):
        a = a[:]
        out = [0] * max(1, len(a) - len(b) + 1)
        db, lb = len(b) - 1, b[-1]
        invlb = field.inv(lb)
        while len(a) - 1 >= db and any(c % p for c in a):
            c = field.mul(a[-1], invlb)
            shift = len(a) - 1 - db
            out[shift] = c
            for k in range(len(b)):
                a[shift + k] = field.sub(a[shift + k], field.mul(c, b[k]))
            while a and a[-1] % p == 0:
                a.pop()
        return out, (a if a else [0])

    split(g)
    return sorted(set(r % p for r in roots))
