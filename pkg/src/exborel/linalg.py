"""Exact linear algebra over the rationals or a prime field.

Everything downstream (resolutions, homology, transfer coefficients)
assumes arithmetic without rounding, so field elements are Fractions or
residues mod p and all eliminations use exact pivoting.  Pivoting is
deterministic (first nonzero entry) so every chosen basis is
reproducible run to run.
"""

from __future__ import annotations

from fractions import Fraction


def _is_probable_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 3.3e24
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Rationals:
    """Field of arbitrary-precision rationals."""

    name = "Q"

    def of(self, v):
        return Fraction(v)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in exact field")
        return a / b

    def inv(self, a):
        return self.div(self.one, a)

    def eq(self, a, b):
        return a == b

    def to_str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Rationals()"


class PrimeField:
    """Prime field Z/p for a configurable prime p.

    Elements are ints in [0, p).  Intended as a faster drop-in for the
    rationals; callers should pick p larger than every dimension that
    occurs (the CLI warns otherwise).
    """

    def __init__(self, p: int):
        if not _is_probable_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"Fp:{p}"

    def of(self, v):
        if isinstance(v, Fraction):
            return self.div(v.numerator % self.p, v.denominator % self.p)
        return int(v) % self.p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def div(self, a, b):
        if b % self.p == 0:
            raise ZeroDivisionError("division by zero in exact field")
        return a * pow(b, self.p - 2, self.p) % self.p

    def inv(self, a):
        return self.div(1, a)

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def to_str(self, a):
        return str(a % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


QQ = Rationals()


class Matrix:
    """Dense matrix with entries in an exact field, row-major."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, rows: int, cols: int, data=None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if data is None:
            z = field.zero
            self.data = [[z] * cols for _ in range(rows)]
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError("matrix data shape mismatch")
            self.data = [list(r) for r in data]

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        m = cls(field, n, n)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    @classmethod
    def zeros(cls, field, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols)

    @classmethod
    def from_rows(cls, field, rows_list) -> "Matrix":
        rows_list = [list(r) for r in rows_list]
        nc = len(rows_list[0]) if rows_list else 0
        return cls(field, len(rows_list), nc, rows_list)

    @classmethod
    def column(cls, field, vec) -> "Matrix":
        return cls(field, len(vec), 1, [[v] for v in vec])

    def copy(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, self.data)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        eq = self.field.eq
        return all(
            eq(self.data[i][j], other.data[i][j])
            for i in range(self.rows)
            for j in range(self.cols)
        )

    def __hash__(self):
        raise TypeError("Matrix is unhashable")

    def __add__(self, other):
        f = self.field
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix add")
        return Matrix(f, self.rows, self.cols,
                      [[f.add(a, b) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.data, other.data)])

    def __sub__(self, other):
        f = self.field
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix sub")
        return Matrix(f, self.rows, self.cols,
                      [[f.sub(a, b) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.data, other.data)])

    def __neg__(self):
        f = self.field
        return Matrix(f, self.rows, self.cols,
                      [[f.neg(a) for a in r] for r in self.data])

    def scale(self, c) -> "Matrix":
        f = self.field
        return Matrix(f, self.rows, self.cols,
                      [[f.mul(c, a) for a in r] for r in self.data])

    def __mul__(self, other):
        f = self.field
        if self.cols != other.rows:
            raise ValueError(
                f"shape mismatch in matrix mul: {self.rows}x{self.cols} * "
                f"{other.rows}x{other.cols}")
        zero = f.zero
        out = [[zero] * other.cols for _ in range(self.rows)]
        bd = other.data
        for i, row in enumerate(self.data):
            oro = out[i]
            for k, a in enumerate(row):
                if f.eq(a, zero):
                    continue
                brow = bd[k]
                for j in range(other.cols):
                    b = brow[j]
                    if not f.eq(b, zero):
                        oro[j] = f.add(oro[j], f.mul(a, b))
        return Matrix(f, self.rows, other.cols, out)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      [[self.data[i][j] for i in range(self.rows)]
                       for j in range(self.cols)])

    def is_zero(self) -> bool:
        z, eq = self.field.zero, self.field.eq
        return all(eq(a, z) for r in self.data for a in r)

    def flatten(self):
        return [a for r in self.data for a in r]

    def col(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def __repr__(self):
        body = "; ".join(" ".join(self.field.to_str(a) for a in r)
                         for r in self.data)
        return f"Matrix({self.rows}x{self.cols}: {body})"


def hstack(mats):
    mats = list(mats)
    f = mats[0].field
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ValueError("hstack row mismatch")
    data = [sum((m.data[i] for m in mats), []) for i in range(rows)]
    return Matrix(f, rows, sum(m.cols for m in mats), data)


def vstack(mats):
    mats = list(mats)
    f = mats[0].field
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ValueError("vstack col mismatch")
    data = [r for m in mats for r in m.data]
    return Matrix(f, len(data), cols, data)


def block_diag(field, mats):
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = Matrix.zeros(field, rows, cols)
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            out.data[r0 + i][c0:c0 + m.cols] = list(m.data[i])
        r0 += m.rows
        c0 += m.cols
    return out


def rref(m: Matrix):
    """Reduced row echelon form: returns (R, pivot_columns, rank).

    First-nonzero pivoting; deterministic over any exact field.
    """
    f = m.field
    R = [list(r) for r in m.data]
    nr, nc = m.rows, m.cols
    pivots = []
    pr = 0
    for pc in range(nc):
        sel = None
        for i in range(pr, nr):
            if not f.eq(R[i][pc], f.zero):
                sel = i
                break
        if sel is None:
            continue
        R[pr], R[sel] = R[sel], R[pr]
        inv = f.inv(R[pr][pc])
        R[pr] = [f.mul(inv, a) for a in R[pr]]
        for i in range(nr):
            if i != pr and not f.eq(R[i][pc], f.zero):
                c = R[i][pc]
                R[i] = [f.sub(a, f.mul(c, b)) for a, b in zip(R[i], R[pr])]
        pivots.append(pc)
        pr += 1
        if pr == nr:
            break
    return Matrix(f, nr, nc, R), pivots, len(pivots)


def solve(a: Matrix, b: Matrix):
    """Solve a*x = b exactly; None if inconsistent.

    Underdetermined systems return the particular solution with all
    free variables set to zero, which downstream lifting relies on for
    reproducibility.
    """
    if a.rows != b.rows:
        raise ValueError("solve: row count mismatch")
    f = a.field
    aug = hstack([a, b])
    R, pivots, rank = rref(aug)
    for piv in pivots:
        if piv >= a.cols:
            return None
    x = Matrix.zeros(f, a.cols, b.cols)
    for i, pc in enumerate(pivots):
        for j in range(b.cols):
            x.data[pc][j] = R.data[i][a.cols + j]
    return x


class Subspace:
    """Subspace of k^n held as a reduced-echelon basis.

    Basis rows have strictly increasing pivot columns and cleared pivot
    columns, so membership and comparisons are canonical.
    """

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field, ambient: int, vectors=()):
        self.field = field
        self.ambient = ambient
        if vectors:
            m = Matrix.from_rows(field, vectors)
            if m.cols != ambient:
                raise ValueError("subspace vector length mismatch")
            R, pivots, rank = rref(m)
            self.basis = [R.data[i] for i in range(rank)]
            self.pivots = pivots
        else:
            self.basis = []
            self.pivots = []

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, vec):
        """Residue of vec modulo this subspace (echelon reduction)."""
        f = self.field
        v = list(vec)
        for row, piv in zip(self.basis, self.pivots):
            c = v[piv]
            if not f.eq(c, f.zero):
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        return v

    def contains(self, vec) -> bool:
        f = self.field
        return all(f.eq(a, f.zero) for a in self.reduce(vec))

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        return Subspace(self.field, self.ambient, self.basis + other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        # kernel of [B1; B2]-coefficient pairing, via the standard
        # stacked-coordinates trick
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        f = self.field
        if not self.basis or not other.basis:
            return Subspace(f, self.ambient)
        a = Matrix.from_rows(f, self.basis).transpose()
        b = Matrix.from_rows(f, other.basis).transpose()
        stacked = hstack([a, -b])
        ker = kernel_basis(stacked)
        vecs = []
        for kv in ker.basis:
            coeffs = kv[: len(self.basis)]
            vec = [f.zero] * self.ambient
            for c, row in zip(coeffs, self.basis):
                if not f.eq(c, f.zero):
                    vec = [f.add(x, f.mul(c, y)) for x, y in zip(vec, row)]
            vecs.append(vec)
        return Subspace(f, self.ambient, vecs)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.ambient != other.ambient or self.dim != other.dim:
            return False
        f = self.field
        return all(
            f.eq(a, b)
            for ra, rb in zip(self.basis, other.basis)
            for a, b in zip(ra, rb))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of k^{self.ambient})"


def kernel_basis(a: Matrix) -> Subspace:
    """Basis of the right kernel {x : a*x = 0}."""
    f = a.field
    R, pivots, rank = rref(a)
    free = [j for j in range(a.cols) if j not in pivots]
    vecs = []
    for fc in free:
        v = [f.zero] * a.cols
        v[fc] = f.one
        for i, pc in enumerate(pivots):
            v[pc] = f.neg(R.data[i][fc])
        vecs.append(v)
    return Subspace(f, a.cols, vecs)


def complement_basis(sub: Subspace, inside: Subspace) -> Subspace:
    """Deterministic complement C with inside = sub + C, sub ∩ C = 0.

    Greedy over the reduced-echelon basis of `inside` (the canonical
    pivot-vector basis), lowest pivot first.
    """
    if sub.ambient != inside.ambient:
        raise ValueError("ambient mismatch")
    if not inside.contains_space(sub):
        raise ValueError("complement_basis: sub not contained in inside")
    f = sub.field
    chosen = []
    span = Subspace(f, sub.ambient, list(sub.basis))
    for vec in inside.basis:
        if span.dim == inside.dim:
            break
        if not span.contains(vec):
            chosen.append(vec)
            span = Subspace(f, sub.ambient, span.basis + [vec])
    return Subspace(f, sub.ambient, chosen)


def span_of_columns(m: Matrix) -> Subspace:
    return Subspace(m.field, m.rows, [m.col(j) for j in range(m.cols)])


def rank(m: Matrix) -> int:
    return rref(m)[2]


def invert(m: Matrix):
    """Inverse matrix, or None if singular."""
    if m.rows != m.cols:
        return None
    x = solve(m, Matrix.identity(m.field, m.rows))
    if x is None:
        return None
    if m * x == Matrix.identity(m.field, m.rows):
        return x
    return None
