"""Quivers, path-algebra presentations and the input text format.

Paths are tuples of arrow names in composition order: ("b", "a") is the
path b*a, i.e. a first, then b.  Relations are k-linear combinations of
parallel paths of length >= 2 (admissible ideal).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class ParseError(ValueError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(message + where)


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    tgt: str


class Quiver:
    def __init__(self, vertices, arrows):
        self.vertices = list(vertices)
        self.arrows = list(arrows)
        if len(set(self.vertices)) != len(self.vertices):
            raise ParseError("duplicate vertex names")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ParseError("duplicate arrow names")
        if set(names) & set(self.vertices):
            raise ParseError("arrow name collides with a vertex name")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.src not in vs or a.tgt not in vs:
                raise ParseError(f"arrow {a.name} has a dangling endpoint")
        self.arrow_by_name = {a.name: a for a in self.arrows}

    def path_src(self, path):
        return self.arrow_by_name[path[-1]].src if path else None

    def path_tgt(self, path):
        return self.arrow_by_name[path[0]].tgt if path else None

    def is_acyclic(self) -> bool:
        # DFS cycle detection on arrow graph
        adj = {v: [] for v in self.vertices}
        for a in self.arrows:
            adj[a.src].append(a.tgt)
        state = {v: 0 for v in self.vertices}

        def visit(v):
            state[v] = 1
            for w in adj[v]:
                if state[w] == 1:
                    return False
                if state[w] == 0 and not visit(w):
                    return False
            state[v] = 2
            return True

        return all(state[v] == 2 or visit(v) for v in self.vertices)

    def longest_path_bound(self) -> int:
        """Length of the longest path for acyclic quivers."""
        order = self.vertices
        best = {v: 0 for v in order}
        # iterate |V| times (DAG longest path by relaxation)
        for _ in range(len(order)):
            for a in self.arrows:
                if best[a.src] + 1 > best[a.tgt]:
                    best[a.tgt] = best[a.src] + 1
        return max(best.values()) if best else 0

    def paths_from_lengths(self, max_len):
        """All paths grouped by length: {length: [path tuples]}."""
        by_src = {v: [] for v in self.vertices}
        for a in self.arrows:
            by_src[a.src].append(a)
        out = {0: [()], 1: [(a.name,) for a in self.arrows]}
        cur = out[1]
        for ln in range(2, max_len + 1):
            nxt = []
            for p in cur:
                t = self.path_tgt(p)
                for a in self.arrows:
                    if a.src == t:
                        nxt.append((a.name,) + p)
            out[ln] = nxt
            cur = nxt
            if not cur:
                break
        return out


@dataclass
class Relation:
    """Linear combination of parallel paths: list of (coeff, path)."""
    terms: list
    line: int = 0

    def endpoints(self, quiver):
        srcs = {quiver.path_src(p) for _, p in self.terms}
        tgts = {quiver.path_tgt(p) for _, p in self.terms}
        if len(srcs) != 1 or len(tgts) != 1:
            raise ParseError("relation terms are not parallel", self.line)
        return srcs.pop(), tgts.pop()


@dataclass
class AlgebraPresentation:
    quiver: Quiver
    relations: list
    nilpotency_bound: int | None = None

    def validate(self):
        for rel in self.relations:
            for coeff, p in rel.terms:
                if len(p) < 2:
                    raise ParseError(
                        "relation contains a path of length < 2 "
                        "(ideal must be admissible)", rel.line)
                for name in p:
                    if name not in self.quiver.arrow_by_name:
                        raise ParseError(f"unknown arrow {name!r} in relation",
                                         rel.line)
                src = None
                for name in reversed(p):
                    a = self.quiver.arrow_by_name[name]
                    if src is not None and a.src != src:
                        raise ParseError(
                            f"path {'*'.join(p)} is not composable", rel.line)
                    src = a.tgt
            rel.endpoints(self.quiver)
        return self


@dataclass
class ExplicitModule:
    """Raw per-vertex dims and per-arrow integer/rational matrices."""
    name: str
    dims: dict
    matrices: dict  # arrow name -> list of rows of Fraction


@dataclass
class JobInput:
    presentation: AlgebraPresentation
    preorder_pairs: list      # list of (i, j) meaning i <= j
    preorder_mode: str        # "linear" | "pairs"
    deltas_mode: str          # "standard" | "simples" | "explicit"
    modules: dict = field(default_factory=dict)  # name -> ExplicitModule


def _parse_coeff(tok, line):
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad coefficient {tok!r}", line)


def _parse_term(text, line):
    """Parse `2/3 b*a` or `b*a` into (coeff, path tuple)."""
    parts = text.split()
    if not parts:
        raise ParseError("empty relation term", line)
    if len(parts) == 2:
        coeff = _parse_coeff(parts[0], line)
        word = parts[1]
    elif len(parts) == 1:
        coeff = Fraction(1)
        word = parts[0]
    else:
        raise ParseError(f"cannot parse term {text!r}", line)
    path = tuple(w.strip() for w in word.split("*"))
    if any(not w for w in path):
        raise ParseError(f"malformed path word {word!r}", line)
    return coeff, path


def parse_linear_combination(text, line):
    """Split `b*a - 2 c*d + 1/2 e*f` into signed terms."""
    terms = []
    # normalize: ensure leading sign
    s = text.strip()
    if not s:
        raise ParseError("empty relation", line)
    if s[0] not in "+-":
        s = "+" + s
    chunks = []
    cur = ""
    for ch in s:
        if ch in "+-" and cur.strip():
            chunks.append(cur)
            cur = ch
        elif ch in "+-" and not cur.strip():
            cur += ch
        else:
            cur += ch
    chunks.append(cur)
    for chunk in chunks:
        chunk = chunk.strip()
        sign = Fraction(1)
        while chunk and chunk[0] in "+-":
            if chunk[0] == "-":
                sign = -sign
            chunk = chunk[1:].strip()
        coeff, path = _parse_term(chunk, line)
        terms.append((sign * coeff, path))
    return terms


def _parse_matrix(text, rows, cols, line):
    """`1 0; 0 1` -> list of row lists of Fraction; `zero` allowed."""
    text = text.strip()
    if text == "zero":
        return [[Fraction(0)] * cols for _ in range(rows)]
    out = []
    for rtxt in text.split(";"):
        row = [_parse_coeff(t, line) for t in rtxt.split()]
        out.append(row)
    if len(out) != rows or any(len(r) != cols for r in out):
        raise ParseError(
            f"matrix shape {len(out)}x{len(out[0]) if out else 0}, "
            f"expected {rows}x{cols}", line)
    return out


def parse_input(text: str) -> JobInput:
    """Parse the sectioned plain-text input format.

    Sections: [quiver] (vertices:, arrow: name src tgt), [relations]
    (one signed path word per line), [preorder] (`linear` or `i <= j`
    pairs), [deltas] (`standard` | `simples` | `explicit`), and
    [module.NAME] blocks with `dims:` and `arrow NAME: rows` lines.
    """
    vertices = []
    arrows = []
    relations = []
    preorder_pairs = []
    preorder_mode = None
    deltas_mode = None
    modules = {}
    nilpotency_bound = None

    section = None
    current_module = None
    pending_dims = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section.startswith("module."):
                current_module = section.split(".", 1)[1]
                if not current_module:
                    raise ParseError("empty module name", lineno)
                modules[current_module] = ExplicitModule(current_module, {}, {})
                pending_dims = None
            elif section not in ("quiver", "relations", "preorder", "deltas"):
                raise ParseError(f"unknown section [{section}]", lineno)
            continue
        if section is None:
            raise ParseError("content before first section", lineno)

        if section == "quiver":
            if line.lower().startswith("vertices:"):
                vertices.extend(line.split(":", 1)[1].split())
            elif line.lower().startswith("arrow:"):
                parts = line.split(":", 1)[1].split()
                if len(parts) != 3:
                    raise ParseError("arrow line needs `name src tgt`", lineno)
                arrows.append(Arrow(*parts))
            elif line.lower().startswith("nilpotency_bound:"):
                nilpotency_bound = int(line.split(":", 1)[1])
            else:
                raise ParseError(f"unrecognized quiver line {line!r}", lineno)
        elif section == "relations":
            relations.append(Relation(parse_linear_combination(line, lineno),
                                      lineno))
        elif section == "preorder":
            if line.lower() == "linear":
                preorder_mode = "linear"
            else:
                parts = line.replace("<=", " ").replace("<", " ").split()
                if len(parts) != 2:
                    raise ParseError("preorder line needs `i <= j`", lineno)
                preorder_pairs.append((parts[0], parts[1]))
                preorder_mode = preorder_mode or "pairs"
        elif section == "deltas":
            mode = line.lower()
            if mode not in ("standard", "simples", "explicit"):
                raise ParseError(f"unknown deltas mode {mode!r}", lineno)
            deltas_mode = mode
        elif section.startswith("module."):
            mod = modules[current_module]
            if line.lower().startswith("dims:"):
                dims = line.split(":", 1)[1].split()
                if len(dims) != len(vertices):
                    raise ParseError(
                        f"dims count {len(dims)} != vertex count "
                        f"{len(vertices)}", lineno)
                mod.dims = {v: int(d) for v, d in zip(vertices, dims)}
                pending_dims = mod.dims
            elif line.lower().startswith("arrow "):
                head, _, body = line.partition(":")
                aname = head.split(None, 1)[1].strip()
                if pending_dims is None:
                    raise ParseError("module dims must precede arrows", lineno)
                arrow = next((a for a in arrows if a.name == aname), None)
                if arrow is None:
                    raise ParseError(f"unknown arrow {aname!r}", lineno)
                mod.matrices[aname] = _parse_matrix(
                    body, pending_dims[arrow.tgt], pending_dims[arrow.src],
                    lineno)
            else:
                raise ParseError(f"unrecognized module line {line!r}", lineno)

    if not vertices:
        raise ParseError("no vertices declared")
    quiver = Quiver(vertices, arrows)
    pres = AlgebraPresentation(quiver, relations, nilpotency_bound).validate()
    if preorder_mode is None:
        preorder_mode = "linear"
    if deltas_mode is None:
        deltas_mode = "standard"
    if deltas_mode == "explicit" and not modules:
        raise ParseError("deltas mode `explicit` but no [module.*] blocks")
    return JobInput(pres, preorder_pairs, preorder_mode, deltas_mode, modules)
