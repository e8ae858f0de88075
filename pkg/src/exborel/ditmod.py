"""Interlaced weak ditalgebra presentations and their module category.

A presentation is a bigraph (solid arrows of degree 0, dashed of degree
1) over a preordered point set, a differential given on generators, and
a list of ideal generators inside the solid path algebra.  Modules are
representations of the solid part killing the ideal; morphisms are
pairs (f0, f1) with the differential-corrected intertwining law.
"""

from __future__ import annotations

import json
from fractions import Fraction

from exborel.linalg import Matrix, Subspace, rank, solve
from exborel.modules import AlgebraError
from exborel.homological import Preorder
from exborel.quivers import Arrow, AlgebraPresentation, Quiver, Relation


class DitPresentation:
    """Bigraph + differential on generators + ideal generators.

    delta maps generator name -> list of (coeff, path) with path a tuple
    of arrow names (leftmost applied last); every path of delta(solid)
    contains exactly one dashed arrow, of delta(dashed) exactly two.
    ideal is a list of generators, each a list of (coeff, solid path).
    nu0/nu1 are depth labels used by the triangularity construction.
    """

    def __init__(self, points, solid, dashed, delta, ideal, preorder,
                 nu0=None, nu1=None, delta_known=True):
        self.points = list(points)
        self.solid = list(solid)    # Arrow records
        self.dashed = list(dashed)
        self.delta = {g: list(v) for g, v in (delta or {}).items()}
        self.ideal = [list(gen) for gen in (ideal or [])]
        self.preorder = preorder
        self.nu0 = dict(nu0 or {})
        self.nu1 = dict(nu1 or {})
        self.delta_known = delta_known
        self.solid_by_name = {a.name: a for a in self.solid}
        self.dashed_by_name = {a.name: a for a in self.dashed}
        names = [a.name for a in self.solid] + [a.name for a in self.dashed]
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate arrow names in presentation")

    # -- structural helpers -------------------------------------------------

    def is_dashed(self, name):
        return name in self.dashed_by_name

    def arrow(self, name):
        return self.solid_by_name.get(name) or self.dashed_by_name[name]

    def path_src(self, path):
        return self.arrow(path[-1]).src

    def path_tgt(self, path):
        return self.arrow(path[0]).tgt

    def path_degree(self, path):
        return sum(1 for n in path if self.is_dashed(n))

    def path_composable(self, path):
        return all(self.arrow(path[k]).src == self.arrow(path[k + 1]).tgt
                   for k in range(len(path) - 1))

    def validate(self):
        for a in self.solid + self.dashed:
            if a.src not in self.points or a.tgt not in self.points:
                raise AlgebraError(f"arrow {a.name} has dangling endpoints")
        for a in self.solid:
            if not self.preorder.lt_bar(a.src, a.tgt):
                raise AlgebraError(
                    f"solid arrow {a.name} does not strictly increase the "
                    "quotient class")
        for a in self.dashed:
            if not self.preorder.leq(a.src, a.tgt):
                raise AlgebraError(
                    f"dashed arrow {a.name} violates src <= tgt")
        for g, terms in self.delta.items():
            gdeg = 1 if self.is_dashed(g) else 0
            ga = self.arrow(g)
            for coeff, path in terms:
                if not self.path_composable(path):
                    raise AlgebraError(f"delta({g}) has a non-composable path")
                if self.path_degree(path) != gdeg + 1:
                    raise AlgebraError(
                        f"delta({g}) term has degree != |{g}|+1")
                if self.path_src(path) != ga.src or \
                        self.path_tgt(path) != ga.tgt:
                    raise AlgebraError(f"delta({g}) term endpoints mismatch")
        for gen in self.ideal:
            for coeff, path in gen:
                if any(self.is_dashed(n) for n in path):
                    raise AlgebraError("ideal generator contains dashed arrow")
                if not self.path_composable(path):
                    raise AlgebraError("ideal generator path not composable")
        return self

    def solid_quiver(self) -> Quiver:
        return Quiver(self.points, self.solid)

    def solid_presentation(self) -> AlgebraPresentation:
        rels = []
        for gen in self.ideal:
            rels.append(Relation([(Fraction(c) if not isinstance(c, Fraction)
                                   else c, tuple(p)) for c, p in gen]))
        return AlgebraPresentation(self.solid_quiver(), rels)

    def delta_on_path(self, path, field):
        """Leibniz extension of delta to a path: {path: coeff}."""
        out = {}
        prefix_deg = 0
        f = field
        for k, name in enumerate(path):
            terms = self.delta.get(name, [])
            sign = f.one if prefix_deg % 2 == 0 else f.neg(f.one)
            for coeff, mid in terms:
                new = path[:k] + tuple(mid) + path[k + 1:]
                c = f.mul(sign, f.of(coeff))
                out[new] = f.add(out.get(new, f.zero), c)
            prefix_deg += 1 if self.is_dashed(name) else 0
        return {p: c for p, c in out.items() if not f.eq(c, f.zero)}

    def delta_on_combo(self, combo, field):
        f = field
        out = {}
        for path, c in combo.items():
            for p2, c2 in self.delta_on_path(path, f).items():
                out[p2] = f.add(out.get(p2, f.zero), f.mul(c, c2))
        return {p: c for p, c in out.items() if not f.eq(c, f.zero)}

    # -- serialization -------------------------------------------------------

    def to_json_dict(self):
        def terms(ts):
            return [[str(Fraction(c)), list(p)] for c, p in ts]

        pairs = []
        for a in self.points:
            for b in self.points:
                if a != b and self.preorder.leq(a, b):
                    pairs.append([a, b])
        return {
            "points": list(self.points),
            "solid": [{"name": a.name, "src": a.src, "tgt": a.tgt}
                      for a in self.solid],
            "dashed": [{"name": a.name, "src": a.src, "tgt": a.tgt}
                       for a in self.dashed],
            "delta": ({g: terms(ts) for g, ts in sorted(self.delta.items())}
                      if self.delta_known else None),
            "ideal": [terms(gen) for gen in self.ideal],
            "preorder": pairs,
            "nu0": {k: v for k, v in sorted(self.nu0.items())},
            "nu1": {k: v for k, v in sorted(self.nu1.items())},
        }

    @classmethod
    def from_json_dict(cls, d):
        points = list(d["points"])
        solid = [Arrow(a["name"], a["src"], a["tgt"]) for a in d["solid"]]
        dashed = [Arrow(a["name"], a["src"], a["tgt"]) for a in d["dashed"]]
        pre = Preorder(points, [tuple(p) for p in d.get("preorder", [])])

        def unterms(ts):
            return [(Fraction(c), tuple(p)) for c, p in ts]

        delta_raw = d.get("delta")
        delta = ({g: unterms(ts) for g, ts in delta_raw.items()}
                 if delta_raw is not None else {})
        ideal = [unterms(gen) for gen in d.get("ideal", [])]
        return cls(points, solid, dashed, delta, ideal, pre,
                   d.get("nu0"), d.get("nu1"),
                   delta_known=delta_raw is not None)


# ---------------------------------------------------------------------------
# module category


class DitModule:
    """Left module: dims per point, matrix per solid arrow, ideal killed."""

    def __init__(self, pres: DitPresentation, field, dims, rho):
        self.pres = pres
        self.field = field
        self.dims = {p: int(dims.get(p, 0)) for p in pres.points}
        self.rho = dict(rho)

    def path_action(self, path) -> Matrix:
        if not path:
            raise AlgebraError("path action needs a nonempty path")
        m = None
        for name in path:
            m = self.rho[name] if m is None else m * self.rho[name]
        return m

    def combo_action(self, combo, src, tgt) -> Matrix:
        f = self.field
        out = Matrix.zeros(f, self.dims[tgt], self.dims[src])
        for path, c in combo.items():
            out = out + self.path_action(path).scale(c)
        return out

    def check(self):
        f = self.field
        for a in self.pres.solid:
            m = self.rho[a.name]
            if (m.rows, m.cols) != (self.dims[a.tgt], self.dims[a.src]):
                raise AlgebraError(f"rho({a.name}) has wrong shape")
        for k, gen in enumerate(self.pres.ideal):
            combo = {tuple(p): f.of(c) for c, p in gen}
            if not combo:
                continue
            some = next(iter(combo))
            src = self.pres.path_src(some)
            tgt = self.pres.path_tgt(some)
            if not self.combo_action(combo, src, tgt).is_zero():
                return False, k
        return True, None

    def total_dim(self):
        return sum(self.dims.values())


class DitMorphism:
    """(f0, f1): per-point blocks and one matrix per dashed arrow."""

    def __init__(self, source: DitModule, target: DitModule, f0, f1):
        self.source = source
        self.target = target
        self.f0 = dict(f0)
        self.f1 = dict(f1)

    @classmethod
    def zero(cls, source, target):
        f = source.field
        f0 = {p: Matrix.zeros(f, target.dims[p], source.dims[p])
              for p in source.pres.points}
        f1 = {a.name: Matrix.zeros(f, target.dims[a.tgt], source.dims[a.src])
              for a in source.pres.dashed}
        return cls(source, target, f0, f1)

    @classmethod
    def identity(cls, m):
        out = cls.zero(m, m)
        for p in m.pres.points:
            out.f0[p] = Matrix.identity(m.field, m.dims[p])
        return out

    def flatten(self):
        out = []
        for p in self.source.pres.points:
            out.extend(self.f0[p].flatten())
        for a in self.source.pres.dashed:
            out.extend(self.f1[a.name].flatten())
        return out

    @classmethod
    def from_flat(cls, source, target, vec):
        f = source.field
        out = cls.zero(source, target)
        k = 0
        for p in source.pres.points:
            r, c = target.dims[p], source.dims[p]
            m = Matrix.zeros(f, r, c)
            for i in range(r):
                for j in range(c):
                    m.data[i][j] = vec[k]
                    k += 1
            out.f0[p] = m
        for a in source.pres.dashed:
            r, c = target.dims[a.tgt], source.dims[a.src]
            m = Matrix.zeros(f, r, c)
            for i in range(r):
                for j in range(c):
                    m.data[i][j] = vec[k]
                    k += 1
            out.f1[a.name] = m
        return out

    def scale(self, c):
        return DitMorphism(
            self.source, self.target,
            {p: m.scale(c) for p, m in self.f0.items()},
            {n: m.scale(c) for n, m in self.f1.items()})

    def __add__(self, other):
        return DitMorphism(
            self.source, self.target,
            {p: self.f0[p] + other.f0[p] for p in self.f0},
            {n: self.f1[n] + other.f1[n] for n in self.f1})

    def __sub__(self, other):
        return DitMorphism(
            self.source, self.target,
            {p: self.f0[p] - other.f0[p] for p in self.f0},
            {n: self.f1[n] - other.f1[n] for n in self.f1})

    def is_zero(self):
        return all(m.is_zero() for m in self.f0.values()) and \
            all(m.is_zero() for m in self.f1.values())


def _delta_term_action_one(pres, path, coeff, rho_n, rho_m, f1, field):
    """nu(rho_N ... f1(xi) ... rho_M) for a degree-1 path."""
    pos = [k for k, n in enumerate(path) if pres.is_dashed(n)]
    if len(pos) != 1:
        raise AlgebraError("degree-1 path expected")
    k = pos[0]
    left, xi, right = path[:k], path[k], path[k + 1:]
    m = f1[xi]
    if left:
        ml = None
        for name in left:
            ml = rho_n[name] if ml is None else ml * rho_n[name]
        m = ml * m
    if right:
        mr = None
        for name in right:
            mr = rho_m[name] if mr is None else mr * rho_m[name]
        m = m * mr
    return m.scale(coeff)


def dit_morphism_check(f: DitMorphism):
    """The intertwining law rho_N(a) f0 = f0 rho_M(a) + f1(delta(a))."""
    pres = f.source.pres
    fld = f.source.field
    M, N = f.source, f.target
    for a in pres.solid:
        lhs = N.rho[a.name] * f.f0[a.src]
        rhs = f.f0[a.tgt] * M.rho[a.name]
        for coeff, path in pres.delta.get(a.name, []):
            rhs = rhs + _delta_term_action_one(
                pres, tuple(path), fld.of(coeff), N.rho, M.rho, f.f1, fld)
        if lhs != rhs:
            return False, a.name
    return True, None


def dit_compose(g: DitMorphism, f: DitMorphism) -> DitMorphism:
    """(g f)0 = g0 f0; (g f)1 = g0 f1 + g1 f0 - correction via delta."""
    pres = f.source.pres
    fld = f.source.field
    L, N, M = g.target, g.source, f.source
    out = DitMorphism.zero(M, L)
    for p in pres.points:
        out.f0[p] = g.f0[p] * f.f0[p]
    for a in pres.dashed:
        m = g.f0[a.tgt] * f.f1[a.name] + g.f1[a.name] * f.f0[a.src]
        for coeff, path in pres.delta.get(a.name, []):
            m = m - _delta_term_action_two(
                pres, tuple(path), fld.of(coeff), L.rho, N.rho, M.rho,
                g.f1, f.f1, fld)
        out.f1[a.name] = m
    return out


def _delta_term_action_two(pres, path, coeff, rho_l, rho_n, rho_m,
                           g1, f1, field):
    """nu(rho_L ... g1(xi2) ... rho_N ... f1(xi1) ... rho_M) for degree 2."""
    pos = [k for k, n in enumerate(path) if pres.is_dashed(n)]
    if len(pos) != 2:
        raise AlgebraError("degree-2 path expected")
    k2, k1 = pos[0], pos[1]
    seg_l, xi2, seg_mid, xi1, seg_r = (path[:k2], path[k2],
                                       path[k2 + 1:k1], path[k1],
                                       path[k1 + 1:])
    m = g1[xi2]
    if seg_l:
        ml = None
        for name in seg_l:
            ml = rho_l[name] if ml is None else ml * rho_l[name]
        m = ml * m
    if seg_mid:
        mm = None
        for name in seg_mid:
            mm = rho_n[name] if mm is None else mm * rho_n[name]
        m = m * mm
    m = m * f1[xi1]
    if seg_r:
        mr = None
        for name in seg_r:
            mr = rho_m[name] if mr is None else mr * rho_m[name]
        m = m * mr
    return m.scale(coeff)


def dit_hom_space(M: DitModule, N: DitModule):
    """Basis of Hom((M), (N)) by solving the intertwining constraints."""
    pres = M.pres
    f = M.field
    probe = DitMorphism.zero(M, N)
    nvars = len(probe.flatten())
    if nvars == 0:
        return []
    rows = []
    for a in pres.solid:
        rcount = N.dims[a.tgt] * M.dims[a.src]
        if rcount == 0:
            continue
        cols = []
        for k in range(nvars):
            vec = [f.zero] * nvars
            vec[k] = f.one
            h = DitMorphism.from_flat(M, N, vec)
            lhs = N.rho[a.name] * h.f0[a.src]
            rhs = h.f0[a.tgt] * M.rho[a.name]
            for coeff, path in pres.delta.get(a.name, []):
                rhs = rhs + _delta_term_action_one(
                    pres, tuple(path), f.of(coeff), N.rho, M.rho, h.f1, f)
            cols.append((lhs - rhs).flatten())
        for r in range(rcount):
            rows.append([cols[k][r] for k in range(nvars)])
    if not rows:
        vecs = [[f.one if k == t else f.zero for k in range(nvars)]
                for t in range(nvars)]
    else:
        from exborel.linalg import kernel_basis
        vecs = kernel_basis(Matrix.from_rows(f, rows)).basis
    return [DitMorphism.from_flat(M, N, v) for v in vecs]


def classify_morphism(fm: DitMorphism):
    """'iso' | 'deflation' | 'inflation' | 'none' by ranks of f0."""
    inj = all(rank(m) == m.cols for m in fm.f0.values())
    sur = all(rank(m) == m.rows for m in fm.f0.values())
    if inj and sur:
        return "iso"
    if sur:
        return "deflation"
    if inj:
        return "inflation"
    return "none"


def simple_dit_module(pres: DitPresentation, field, point) -> DitModule:
    dims = {p: (1 if p == point else 0) for p in pres.points}
    rho = {a.name: Matrix.zeros(field, dims[a.tgt], dims[a.src])
           for a in pres.solid}
    return DitModule(pres, field, dims, rho)


# ---------------------------------------------------------------------------
# P-strictness


def check_pstrict(pres: DitPresentation):
    """Items: dashed src<=tgt; solid class-strict; ideal in rad^2."""
    verdict = {"dashed_leq": True, "solid_strict": True, "ideal_rad2": True,
               "witness": None}
    for a in pres.dashed:
        if not pres.preorder.leq(a.src, a.tgt):
            verdict["dashed_leq"] = False
            verdict["witness"] = a.name
    for a in pres.solid:
        if not pres.preorder.lt_bar(a.src, a.tgt):
            verdict["solid_strict"] = False
            verdict["witness"] = a.name
    for gen in pres.ideal:
        for coeff, path in gen:
            if len(path) < 2:
                verdict["ideal_rad2"] = False
                verdict["witness"] = "*".join(path)
    verdict["ok"] = all((verdict["dashed_leq"], verdict["solid_strict"],
                         verdict["ideal_rad2"]))
    return verdict


# ---------------------------------------------------------------------------
# the Drozd-style bigraph of a basic algebra


def drozd_bigraph(algebra) -> DitPresentation:
    """One solid i'->j'' and two dashed arrows per radical basis element.

    The differential is external data and is reported as unknown; the
    preorder makes all primed points equivalent, all double-primed
    points equivalent, and primed < double-primed when the radical is
    nonzero.
    """
    rad = algebra.radical_elements()
    # require a directed radical basis (true for path algebras)
    rad_labels = []
    for elem in rad:
        if len(elem) != 1:
            raise AlgebraError("radical basis is not directed")
        (lab, c), = elem.items()
        rad_labels.append(lab)
    points = [f"{p}'" for p in algebra.points] + \
             [f"{p}''" for p in algebra.points]
    solid = []
    dashed = []
    pairs = []
    for a in algebra.points:
        for b in algebra.points:
            pairs.append((f"{a}'", f"{b}'"))
            pairs.append((f"{a}''", f"{b}''"))
    for k, lab in enumerate(sorted(rad_labels, key=str)):
        i, j = algebra.src[lab], algebra.tgt[lab]
        solid.append(Arrow(f"r{k}", f"{i}'", f"{j}''"))
        dashed.append(Arrow(f"r{k}'", f"{i}'", f"{j}'"))
        dashed.append(Arrow(f"r{k}''", f"{i}''", f"{j}''"))
        pairs.append((f"{i}'", f"{j}''"))
    pre = Preorder(points, pairs)
    return DitPresentation(points, solid, dashed, {}, [], pre,
                           delta_known=False).validate()


# ---------------------------------------------------------------------------
# triangularity with constructed witness filtrations


_PATH_CACHE = {}


def _solid_path_space(pres: DitPresentation, field):
    """All solid paths grouped by endpoints (the solid algebra is
    directed, so this is finite), including trivial paths."""
    key = (id(pres), "solid")
    if key in _PATH_CACHE:
        return _PATH_CACHE[key]
    paths = {(p, p): [()] for p in pres.points}
    frontier = [((a.name,), a.src, a.tgt) for a in pres.solid]
    allp = {}
    for path, s, t in frontier:
        allp.setdefault((s, t), []).append(path)
    cur = frontier
    while cur:
        nxt = []
        for path, s, t in cur:
            for a in pres.solid:
                if a.src == t:
                    newp = (a.name,) + path
                    allp.setdefault((s, a.tgt), []).append(newp)
                    nxt.append((newp, s, a.tgt))
        cur = nxt
        if len(nxt) > 100000:
            raise AlgebraError("solid path explosion (cycle?)")
    for bkey, v in allp.items():
        paths.setdefault(bkey, [])
        paths[bkey].extend(v)
    _PATH_CACHE[key] = paths
    return paths


def height_of_pairs(pairs):
    """Height map of a set of tuples under the lexicographic order."""
    distinct = sorted(set(pairs))
    h = {}
    for pr in distinct:
        below = [h[q] for q in distinct if q < pr]
        h[pr] = (max(below) + 1) if below else 0
    return h


def check_layer_triangular(pres: DitPresentation, field):
    """Construct the height filtrations of the layer and the ideal, then
    verify the triangularity inclusions on every generator.

    Solid heights come from (class-height jump, depth nu0), dashed from
    (jump, nu1); the ideal filtration uses (class pair height, minimal
    solid length, summed solid heights).
    """
    if not pres.delta_known:
        return {"ok": None, "reason": "differential not supplied"}
    f = field
    pre = pres.preorder
    hmap = pre.height_map()

    def cls_h(p):
        return hmap[pre.class_of[p]]

    def d_of(name):
        a = pres.arrow(name)
        return cls_h(a.tgt) - cls_h(a.src)

    for a in pres.solid:
        if a.name not in pres.nu0:
            raise AlgebraError(f"solid arrow {a.name} lacks a depth label")
    for a in pres.dashed:
        if a.name not in pres.nu1:
            raise AlgebraError(f"dashed arrow {a.name} lacks a depth label")

    h0_pairs = {a.name: (d_of(a.name), pres.nu0[a.name]) for a in pres.solid}
    h1_pairs = {a.name: (d_of(a.name), pres.nu1[a.name]) for a in pres.dashed}
    h0_height = height_of_pairs(h0_pairs.values())
    h1_height = height_of_pairs(h1_pairs.values())
    h0 = {n: h0_height[pr] for n, pr in h0_pairs.items()}
    h1 = {n: h1_height[pr] for n, pr in h1_pairs.items()}

    report = {"ok": True, "h0": h0, "h1": h1, "violations": []}

    # solid filtration: delta(alpha)'s solid arrows strictly lower, the
    # one dashed arrow arbitrary
    for a in pres.solid:
        for coeff, path in pres.delta.get(a.name, []):
            for n in path:
                if not pres.is_dashed(n) and h0[n] >= h0[a.name]:
                    report["ok"] = False
                    report["violations"].append(("W0", a.name, n))
    # dashed filtration: both dashed arrows of delta(xi) strictly lower
    for a in pres.dashed:
        for coeff, path in pres.delta.get(a.name, []):
            for n in path:
                if pres.is_dashed(n) and h1[n] >= h1[a.name]:
                    report["ok"] = False
                    report["violations"].append(("W1", a.name, n))

    # ideal filtration
    ideal_layers = _ideal_filtration(pres, f, h0, cls_h)
    report["ideal_levels"] = len(ideal_layers)
    viol = _check_ideal_triangular(pres, f, ideal_layers)
    if viol:
        report["ok"] = False
        report["violations"].extend(viol)
    return report


def _ideal_basis_by_block(pres, field):
    """Ideal as subspaces of the solid path space, per endpoint block."""
    f = field
    paths = _solid_path_space(pres, f)
    index = {}
    for key, plist in paths.items():
        index[key] = {p: n for n, p in enumerate(plist)}
    gens = []
    for gen in pres.ideal:
        combo = {}
        for c, p in gen:
            combo[tuple(p)] = f.add(combo.get(tuple(p), f.zero), f.of(c))
        if combo:
            some = next(iter(combo))
            gens.append((pres.path_src(some), pres.path_tgt(some), combo))
    blocks = {}
    for (s0, t0), plist in paths.items():
        vecs = []
        for (gs, gt, combo) in gens:
            for (us, ut), uplist in paths.items():
                if us != gt:
                    continue
                for (vs, vt), vplist in paths.items():
                    if vt != gs or vs != s0 or ut != t0:
                        continue
                    for u in uplist:
                        for v in vplist:
                            vec = [f.zero] * len(plist)
                            ok = True
                            for p, c in combo.items():
                                w = u + p + v
                                if w not in index[(s0, t0)]:
                                    ok = False
                                    break
                                vec[index[(s0, t0)][w]] = f.add(
                                    vec[index[(s0, t0)][w]], c)
                            if ok and any(not f.eq(c, f.zero) for c in vec):
                                vecs.append(vec)
        if vecs:
            blocks[(s0, t0)] = Subspace(f, len(plist), vecs)
    return paths, blocks


def _ideal_filtration(pres, field, h0, cls_h):
    """Filtration H_1 c ... c H_t = I per the height/length/weight triple.

    Returns an ordered list of {block: Subspace} dicts, one per level.
    """
    f = field
    paths, blocks = _ideal_basis_by_block(pres, f)
    if not blocks:
        return []
    # triples (hhat, phi, p) realized by elements: enumerate candidate
    # triples from path data
    levels = {}
    for (s0, t0), space in blocks.items():
        hhat = _shat_height(pres, s0, t0, cls_h)
        plist = paths[(s0, t0)]
        # subspaces V_{n,t} = span(paths of length n with weight <= t) +
        # span(longer paths)
        weights = {p: sum(h0[n] for n in p) for p in plist}
        lengths = sorted({len(p) for p in plist})
        for n in lengths:
            wvals = sorted({weights[p] for p in plist if len(p) == n})
            for t in wvals:
                vecs = []
                for k, p in enumerate(plist):
                    if len(p) > n or (len(p) == n and weights[p] <= t):
                        vec = [f.zero] * len(plist)
                        vec[k] = f.one
                        vecs.append(vec)
                vnt = Subspace(f, len(plist), vecs)
                inter = space.intersect(vnt)
                if inter.dim:
                    levels.setdefault((hhat, n, t), {})[(s0, t0)] = inter
    # order triples by the prescribed partial order, linearized by height
    keys = list(levels)
    hkeys = _triple_heights(keys)
    out = []
    maxh = max(hkeys.values()) if hkeys else -1
    for u in range(maxh + 1):
        layer = {}
        for key in keys:
            if hkeys[key] <= u:
                for blk, space in levels[key].items():
                    layer[blk] = (layer[blk].sum(space)
                                  if blk in layer else space)
        out.append(layer)
    return out


def _shat_height(pres, s0, t0, cls_h):
    """Height of (class(s0), class(t0)): first component reversed, then
    the second ascending (the ideal layering order)."""
    pairs = {(cls_h(i), cls_h(j))
             for i in pres.points for j in pres.points}

    def less(a, b):
        return (b[0] < a[0]) or (a[0] == b[0] and a[1] < b[1])

    hh = {q: 0 for q in pairs}
    for _ in range(len(pairs)):
        for q in pairs:
            below = [hh[r] for r in pairs if less(r, q)]
            hh[q] = (max(below) + 1) if below else 0
    return hh[(cls_h(s0), cls_h(t0))]


def _triple_heights(keys):
    def less(a, b):
        if a[0] != b[0]:
            return a[0] < b[0]
        if a[1] != b[1]:
            return a[1] > b[1]
        return a[2] < b[2]

    hh = {k: 0 for k in keys}
    for _ in range(len(keys)):
        for q in keys:
            below = [hh[r] for r in keys if less(r, q)]
            hh[q] = (max(below) + 1) if below else 0
    return hh


def _check_ideal_triangular(pres, field, ideal_layers):
    """delta(H_u) c A H_{u-1} V + V H_{u-1} A, checked per level."""
    f = field
    violations = []
    paths = _solid_path_space(pres, f)
    for u in range(len(ideal_layers)):
        layer = ideal_layers[u]
        prev = ideal_layers[u - 1] if u >= 1 else {}
        target_spans = _h_sandwich_span(pres, f, prev)
        for (s0, t0), space in layer.items():
            plist = paths[(s0, t0)]
            for vec in space.basis:
                combo = {plist[k]: c for k, c in enumerate(vec)
                         if not f.eq(c, f.zero)}
                dres = pres.delta_on_combo(combo, f)
                if not _combo_in_span(pres, f, dres, target_spans):
                    violations.append(("ideal", u, (s0, t0)))
                    break
    return violations


def _h_sandwich_span(pres, field, prev_layer):
    """Span of A H V + V H A in the one-dashed component, per block and
    dashed-position signature; returned as a dict of Subspaces keyed by
    (src, tgt) with coordinates over the enumerated one-dashed paths."""
    f = field
    paths = _solid_path_space(pres, f)
    one_dashed = _one_dashed_paths(pres)
    index = {key: {p: n for n, p in enumerate(plist)}
             for key, plist in one_dashed.items()}
    # elements: u * h * (w1 xi w2) and (w1 xi w2) * h * u
    vec_store = {}
    for (hs, ht), space in prev_layer.items():
        hplist = paths[(hs, ht)]
        for vvec in space.basis:
            hcombo = {hplist[k]: c for k, c in enumerate(vvec)
                      if not f.eq(c, f.zero)}
            for vpath, key in _v_paths(pres):
                vs, vt = key
                # h after v: paths (u)(h)(v with dash)
                if vt == hs:
                    for (us, ut), uplist in paths.items():
                        if us != ht:
                            continue
                        for u in uplist:
                            newc = {}
                            for hp, c in hcombo.items():
                                w = u + hp + vpath
                                newc[w] = f.add(newc.get(w, f.zero), c)
                            _store_combo(pres, f, newc, vec_store, index,
                                         one_dashed)
                # v after h: paths (v with dash)(h)(u)
                if vs == ht:
                    for (us, ut), uplist in paths.items():
                        if ut != hs:
                            continue
                        for u in uplist:
                            newc = {}
                            for hp, c in hcombo.items():
                                w = vpath + hp + u
                                newc[w] = f.add(newc.get(w, f.zero), c)
                            _store_combo(pres, f, newc, vec_store, index,
                                         one_dashed)
    return {key: Subspace(f, len(one_dashed[key]), vecs)
            for key, vecs in vec_store.items()}


def _store_combo(pres, f, combo, vec_store, index, one_dashed):
    combo = {p: c for p, c in combo.items() if not f.eq(c, f.zero)}
    if not combo:
        return
    some = next(iter(combo))
    key = (pres.path_src(some), pres.path_tgt(some))
    vec = [f.zero] * len(one_dashed[key])
    for p, c in combo.items():
        vec[index[key][p]] = c
    vec_store.setdefault(key, []).append(vec)


def _one_dashed_paths(pres):
    """All paths with exactly one dashed arrow, grouped by endpoints."""
    key = (id(pres), "one_dashed")
    if key in _PATH_CACHE:
        return _PATH_CACHE[key]
    f_paths = _solid_path_space(pres, None)
    out = {}
    for xi in pres.dashed:
        for (us, ut), uplist in f_paths.items():
            if us != xi.tgt:
                continue
            for (ws, wt), wplist in f_paths.items():
                if wt != xi.src:
                    continue
                for u in uplist:
                    for w in wplist:
                        p = u + (xi.name,) + w
                        out.setdefault((ws, ut), []).append(p)
    _PATH_CACHE[key] = out
    return out


def _v_paths(pres):
    """Paths of V = A W1 A: (path, (src, tgt))."""
    paths = _solid_path_space(pres, None)
    out = []
    for xi in pres.dashed:
        for (us, ut), uplist in paths.items():
            if us != xi.tgt:
                continue
            for (ws, wt), wplist in paths.items():
                if wt != xi.src:
                    continue
                for u in uplist:
                    for w in wplist:
                        out.append((u + (xi.name,) + w, (ws, ut)))
    return out


def _combo_in_span(pres, f, combo, spans):
    combo = {p: c for p, c in combo.items() if not f.eq(c, f.zero)}
    if not combo:
        return True
    some = next(iter(combo))
    key = (pres.path_src(some), pres.path_tgt(some))
    one_dashed = _one_dashed_paths(pres)
    if key not in one_dashed:
        return False
    index = {p: n for n, p in enumerate(one_dashed[key])}
    vec = [f.zero] * len(one_dashed[key])
    for p, c in combo.items():
        if p not in index:
            return False
        vec[index[p]] = c
    span = spans.get(key)
    if span is None:
        return all(f.eq(c, f.zero) for c in vec)
    return span.contains(vec)
