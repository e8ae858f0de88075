"""A-infinity structures on directed graded bimodules.

Carriers have a labeled directed basis per (degree, source, target);
operations are stored as sparse coefficient tables keyed by composable
label tuples (leftmost factor applied last, matching path notation).
Tensor operators are evaluated with Koszul signs, and correctness of
every produced structure is decided by the Stasheff identities rather
than by any particular sign-convention authority.
"""

from __future__ import annotations

import itertools

from exborel.linalg import Matrix, Subspace, solve
from exborel.modules import AlgebraError


class AinfAlgebra:
    """Carrier basis plus sparse m_n tables up to an arity cap.

    labels: list of basis labels.
    degree/src/tgt: per label.
    ops[n]: dict mapping composable label tuples to {label: coeff}.
    idempotent labels (for strict-unit carriers) are ("e", i) with
    degree 0 and src == tgt == i.
    """

    def __init__(self, field, labels, degree, src, tgt, ops, arity_cap,
                 points):
        self.field = field
        self.labels = list(labels)
        self.degree = dict(degree)
        self.src = dict(src)
        self.tgt = dict(tgt)
        self.ops = {n: {k: dict(v) for k, v in table.items() if v}
                    for n, table in ops.items()}
        self.arity_cap = arity_cap
        self.points = list(points)

    def is_idempotent(self, lab):
        return isinstance(lab, tuple) and len(lab) == 2 and lab[0] == "e"

    def unit_label(self, i):
        return ("e", i)

    def composable(self, tup):
        return all(self.src[tup[k]] == self.tgt[tup[k + 1]]
                   for k in range(len(tup) - 1))

    def apply(self, n, tup):
        """m_n on a basis tuple, as {label: coeff}."""
        table = self.ops.get(n)
        if not table:
            return {}
        return dict(table.get(tuple(tup), {}))

    def apply_elem(self, n, elem_tuple):
        """m_n on a tuple of coefficient dicts."""
        f = self.field
        out = {}
        for combo in itertools.product(*[list(e.items())
                                         for e in elem_tuple]):
            labs = tuple(lab for lab, _ in combo)
            c = f.one
            for _, cc in combo:
                c = f.mul(c, cc)
            if f.eq(c, f.zero):
                continue
            for lab, cv in self.apply(n, labs).items():
                out[lab] = f.add(out.get(lab, f.zero), f.mul(c, cv))
        return {k: v for k, v in out.items() if not f.eq(v, f.zero)}

    def tuples(self, n, restrict=None):
        """All composable basis tuples of length n."""
        labs = [l for l in self.labels if restrict is None or restrict(l)]
        by_tgt = {}
        for l in labs:
            by_tgt.setdefault(self.tgt[l], []).append(l)
        if n == 1:
            for l in labs:
                yield (l,)
            return
        out = [(l,) for l in labs]
        for _ in range(n - 1):
            nxt = []
            for t in out:
                for l in by_tgt.get(self.src[t[-1]], []):
                    nxt.append(t + (l,))
            out = nxt
        yield from out

    def check_degrees(self):
        """|m_n| = 2 - n on every stored coefficient; S-balance."""
        for n, table in self.ops.items():
            for tup, val in table.items():
                if not self.composable(tup):
                    raise AlgebraError(f"m_{n} stored on non-composable {tup}")
                din = sum(self.degree[l] for l in tup)
                for lab, c in val.items():
                    if self.degree[lab] != din + 2 - n:
                        raise AlgebraError(
                            f"m_{n}{tup} breaks |m_n| = 2-n at {lab}")
                    if self.src[lab] != self.src[tup[-1]] or \
                            self.tgt[lab] != self.tgt[tup[0]]:
                        raise AlgebraError(f"m_{n}{tup} breaks S-balance")
        return True


def stasheff_defect(a: AinfAlgebra, n: int, tup):
    """S_n evaluated on a basis tuple, with Koszul signs.

    S_n = sum over r+s+t=n of (-1)^{r+st} m_{r+1+t}(1^r (x) m_s (x) 1^t);
    evaluating the operator tensor on elements inserts the Koszul sign
    (-1)^{|m_s| * (sum of the r leftmost degrees)}.
    """
    if n > a.arity_cap:
        raise AlgebraError(f"arity {n} beyond cap {a.arity_cap}")
    f = a.field
    if not a.composable(tup):
        raise AlgebraError("stasheff_defect on a non-composable tuple")
    out = {}
    for s in range(1, n + 1):
        for r in range(0, n - s + 1):
            t = n - s - r
            coeff_sign = (-1) ** (r + s * t)
            koszul = sum(a.degree[tup[k]] for k in range(r)) * (2 - s)
            sign = f.of(coeff_sign * (-1) ** (koszul % 2))
            inner = a.apply(s, tup[r:r + s])
            if not inner:
                continue
            for lab, c in inner.items():
                newtup = tup[:r] + (lab,) + tup[r + s:]
                outer = a.apply(r + 1 + t, newtup)
                for lab2, c2 in outer.items():
                    val = f.mul(sign, f.mul(c, c2))
                    out[lab2] = f.add(out.get(lab2, f.zero), val)
    return {k: v for k, v in out.items() if not f.eq(v, f.zero)}


def check_stasheff(a: AinfAlgebra, max_arity=None, restrict=None):
    """S_n = 0 for all composable tuples up to the arity cap."""
    cap = max_arity if max_arity is not None else a.arity_cap
    for n in range(1, cap + 1):
        for tup in a.tuples(n, restrict):
            d = stasheff_defect(a, n, tup)
            if d:
                return False, (n, tup, d)
    return True, None


# ---------------------------------------------------------------------------
# homotopy transfer (Merkulov trees)


class TransferChoice:
    """The (p, iota, Q) data produced by the homotopy splitting."""

    def __init__(self, homotopy_data, dg_product, degree_of):
        self.h = homotopy_data
        self.mu = dg_product          # product on the dg subalgebra
        self.degree_of = degree_of    # label -> degree in the dg algebra


def transfer(choice: TransferChoice, arity_cap: int) -> AinfAlgebra:
    """Merkulov's recursion on the boundary/harmonic/lift splitting.

    lambda_2 = product; lambda_n = sum_{s+u=n} (-1)^{s+1}
    mu(Q lambda_s (x) Q lambda_u) with Q lambda_1 = -id, evaluated with
    Koszul signs (|Q lambda_s| = 1 - s); m_n = p lambda_n iota^{(x)n}.
    The produced tables are validated by Stasheff identities downstream.
    """
    h = choice.h
    dg = h.dg
    f = dg.field
    labels = list(h.harmonic_labels)
    degree = {lab: lab[1] for lab in labels}
    src = {lab: lab[2] for lab in labels}
    tgt = {lab: lab[3] for lab in labels}
    points = dg.points

    lam_cache = {}

    def q_lambda(tup):
        """Q(lambda_k(included tuple)) for k = len(tup); k = 1 is -id."""
        if len(tup) == 1:
            rep = h.include({tup[0]: f.one})
            return {k: f.neg(v) for k, v in rep.items()}
        return h.homotopy(lam(tup))

    def lam(tup):
        k = len(tup)
        if tup in lam_cache:
            return lam_cache[tup]
        if k == 2:
            left = h.include({tup[0]: f.one})
            right = h.include({tup[1]: f.one})
            out = dg.product(left, right)
        else:
            out = {}
            for s in range(1, k):
                u = k - s
                left = q_lambda(tup[:s])
                right = q_lambda(tup[s:])
                # Koszul: right operator (degree 1-u) passes the left
                # s arguments (their carrier degrees)
                kos = (1 - u) * sum(degree[l] for l in tup[:s])
                sgn = (-1) ** ((s + 1 + kos) % 2)
                prod = dg.product(left, right)
                for lab, c in prod.items():
                    c2 = f.mul(f.of(sgn), c)
                    out[lab] = f.add(out.get(lab, f.zero), c2)
            out = {k2: v for k2, v in out.items() if not f.eq(v, f.zero)}
        lam_cache[tup] = out
        return out

    ops = {2: {}}
    for n in range(2, arity_cap + 1):
        table = {}
        for tup in _composable_tuples(labels, src, tgt, n):
            total_deg = sum(degree[l] for l in tup)
            if total_deg + 2 - n < 0:
                continue
            val = h.project(lam(tup))
            if val:
                table[tup] = val
        if table:
            ops[n] = table
    return AinfAlgebra(f, labels, degree, src, tgt, ops, arity_cap, points)


def _composable_tuples(labels, src, tgt, n):
    by_tgt = {}
    for l in labels:
        by_tgt.setdefault(tgt[l], []).append(l)
    out = [(l,) for l in labels]
    for _ in range(n - 1):
        nxt = []
        for t in out:
            for l in by_tgt.get(src[t[-1]], []):
                nxt.append(t + (l,))
        out = nxt
    return out


# ---------------------------------------------------------------------------
# strict units


def extend_strict_unit(a: AinfAlgebra) -> AinfAlgebra:
    """Adjoin idempotents: m2 extends by unit laws, higher m_n kill any
    tensor with an idempotent factor."""
    if a.ops.get(1):
        raise AlgebraError("strict unit extension requires m_1 = 0")
    f = a.field
    labels = [("e", i) for i in a.points] + list(a.labels)
    degree = dict(a.degree)
    src = dict(a.src)
    tgt = dict(a.tgt)
    for i in a.points:
        degree[("e", i)] = 0
        src[("e", i)] = i
        tgt[("e", i)] = i
    ops = {n: {k: dict(v) for k, v in t.items()} for n, t in a.ops.items()}
    m2 = ops.setdefault(2, {})
    for i in a.points:
        e = ("e", i)
        m2[(e, e)] = {e: f.one}
    for lab in a.labels:
        et = ("e", a.tgt[lab])
        es = ("e", a.src[lab])
        m2[(et, lab)] = {lab: f.one}
        m2[(lab, es)] = {lab: f.one}
    return AinfAlgebra(f, labels, degree, src, tgt, ops, a.arity_cap,
                       a.points)


def check_strict_unit(a: AinfAlgebra):
    """m_1 = 0, m_2 unital and associative, higher ops kill idempotents."""
    f = a.field
    if a.ops.get(1):
        return False, "m_1 != 0"
    for i in a.points:
        e = a.unit_label(i)
        if e not in a.labels:
            return False, f"missing unit label for {i}"
        if a.apply(2, (e, e)) != {e: f.one}:
            return False, f"e_{i} not idempotent under m_2"
    for lab in a.labels:
        e_t = a.unit_label(a.tgt[lab])
        e_s = a.unit_label(a.src[lab])
        if a.apply(2, (e_t, lab)) != {lab: f.one}:
            return False, f"left unit law fails at {lab}"
        if a.apply(2, (lab, e_s)) != {lab: f.one}:
            return False, f"right unit law fails at {lab}"
    # associativity of m_2 (with m_1 = 0 this is S_3 restricted)
    for tup in a.tuples(3):
        lhs = a.apply_elem(2, ({tup[0]: f.one}, a.apply(2, tup[1:])))
        rhs = a.apply_elem(2, (a.apply(2, tup[:2]), {tup[2]: f.one}))
        if lhs != rhs:
            return False, f"m_2 not associative at {tup}"
    for n, table in a.ops.items():
        if n < 3:
            continue
        for tup, val in table.items():
            if val and any(a.is_idempotent(l) for l in tup):
                return False, f"m_{n}{tup} does not kill idempotents"
    return True, None


def change_basis(a: AinfAlgebra, block_transitions) -> AinfAlgebra:
    """Rewrite all tables in a new basis per (degree, src, tgt) block.

    block_transitions: {(n, i, j): T} with T an invertible Matrix whose
    columns express the new basis in the old one.  Blocks not mentioned
    keep their basis.  Labels are renumbered within each block.
    """
    f = a.field
    blocks = {}
    for lab in a.labels:
        blocks.setdefault((a.degree[lab], a.src[lab], a.tgt[lab]),
                          []).append(lab)
    old_to_new = {}
    new_labels = []
    degree = {}
    src = {}
    tgt = {}
    expand = {}   # old label -> {new label: coeff} (inverse transition)
    build = {}    # new label -> {old label: coeff}
    for key in sorted(blocks, key=str):
        labs = blocks[key]
        T = block_transitions.get(key)
        if T is None:
            for lab in labs:
                nl = lab
                new_labels.append(nl)
                degree[nl] = a.degree[lab]
                src[nl] = a.src[lab]
                tgt[nl] = a.tgt[lab]
                expand[lab] = {nl: f.one}
                build[nl] = {lab: f.one}
            continue
        if T.rows != len(labs) or T.cols != len(labs):
            raise AlgebraError(f"transition shape mismatch on block {key}")
        from exborel.linalg import invert
        Tinv = invert(T)
        if Tinv is None:
            raise AlgebraError(f"transition not invertible on block {key}")
        nls = []
        for c in range(T.cols):
            nl = ("b", key[0], key[1], key[2], c)
            nls.append(nl)
            new_labels.append(nl)
            degree[nl] = key[0]
            src[nl] = key[1]
            tgt[nl] = key[2]
            build[nl] = {labs[r]: T.data[r][c] for r in range(T.rows)
                         if not f.eq(T.data[r][c], f.zero)}
        for r, lab in enumerate(labs):
            expand[lab] = {nls[c]: Tinv.data[c][r] for c in range(T.cols)
                           if not f.eq(Tinv.data[c][r], f.zero)}
    ops = {}
    for n, table in a.ops.items():
        newtable = {}
        for tup_new in _composable_tuples(new_labels, src, tgt, n):
            elem_tuple = tuple(build[l] for l in tup_new)
            raw = a.apply_elem(n, elem_tuple)
            if not raw:
                continue
            conv = {}
            for lab, c in raw.items():
                for nl, c2 in expand[lab].items():
                    conv[nl] = f.add(conv.get(nl, f.zero), f.mul(c, c2))
            conv = {k: v for k, v in conv.items() if not f.eq(v, f.zero)}
            if conv:
                newtable[tup_new] = conv
        if newtable:
            ops[n] = newtable
    return AinfAlgebra(f, new_labels, degree, src, tgt, ops, a.arity_cap,
                       a.points)
