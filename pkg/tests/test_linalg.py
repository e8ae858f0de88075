import random

import pytest

from exborel.linalg import (
    Matrix, PrimeField, QQ, Subspace, complement_basis, kernel_basis, rank,
    rref, solve,
)


def mat(rows):
    return Matrix.from_rows(QQ, [[QQ.of(c) for c in r] for r in rows])


def test_rref_identity():
    m = Matrix.identity(QQ, 2)
    r, piv, rk = rref(m)
    assert r == m and rk == 2


def test_rref_zero():
    m = Matrix.zeros(QQ, 3, 3)
    r, piv, rk = rref(m)
    assert r.is_zero() and rk == 0


def test_rref_rank_one():
    r, piv, rk = rref(mat([[1, 2], [2, 4]]))
    assert rk == 1
    assert r == mat([[1, 2], [0, 0]])


def test_solve_identity():
    b = mat([[3], [5]])
    assert solve(Matrix.identity(QQ, 2), b) == b


def test_solve_free_variable_convention():
    x = solve(mat([[1, 1]]), mat([[2]]))
    assert x == mat([[2], [0]])


def test_solve_inconsistent():
    assert solve(mat([[0]]), mat([[1]])) is None


def test_kernel_identity_and_zero():
    assert kernel_basis(Matrix.identity(QQ, 3)).dim == 0
    assert kernel_basis(Matrix.zeros(QQ, 2, 3)).dim == 3


def test_kernel_line():
    ker = kernel_basis(mat([[1, 1]]))
    assert ker.dim == 1
    assert ker.basis[0] == [QQ.of(1), QQ.of(-1)]


def test_complement_trivial_cases():
    full = Subspace(QQ, 2, [[QQ.of(1), QQ.of(0)], [QQ.of(0), QQ.of(1)]])
    zero = Subspace(QQ, 2, [])
    assert complement_basis(zero, full).dim == 2
    assert complement_basis(full, full).dim == 0


def test_complement_greedy_rule():
    sub = Subspace(QQ, 2, [[QQ.of(1), QQ.of(1)]])
    full = Subspace(QQ, 2, [[QQ.of(1), QQ.of(0)], [QQ.of(0), QQ.of(1)]])
    comp = complement_basis(sub, full)
    assert comp.basis == [[QQ.of(1), QQ.of(0)]]


def test_complement_containment_error():
    sub = Subspace(QQ, 2, [[QQ.of(1), QQ.of(0)]])
    inside = Subspace(QQ, 2, [[QQ.of(0), QQ.of(1)]])
    with pytest.raises(ValueError):
        complement_basis(sub, inside)


def _random_matrix(rng, rows, cols, field):
    return Matrix(field, rows, cols,
                  [[field.of(rng.randint(-4, 4)) for _ in range(cols)]
                   for _ in range(rows)])


@pytest.mark.parametrize("fieldcase", [QQ, PrimeField(1000003)])
def test_random_properties(fieldcase):
    rng = random.Random(11)
    for _ in range(60):
        r = rng.randint(1, 4)
        c = rng.randint(1, 4)
        m = _random_matrix(rng, r, c, fieldcase)
        rr, piv, rk = rref(m)
        rr2, _, rk2 = rref(rr)
        assert rr2 == rr and rk2 == rk
        assert rank(m) == rank(m.transpose())
        ker = kernel_basis(m)
        assert rk + ker.dim == c
        for v in ker.basis:
            prod = m * Matrix.column(fieldcase, v)
            assert prod.is_zero()


def test_complement_properties_random():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(1, 5)
        big = Subspace(QQ, n, [[QQ.of(rng.randint(-2, 2)) for _ in range(n)]
                               for _ in range(rng.randint(0, n))])
        sub_vecs = []
        for v in big.basis[: rng.randint(0, big.dim)]:
            sub_vecs.append(v)
        sub = Subspace(QQ, n, sub_vecs)
        comp = complement_basis(sub, big)
        assert sub.dim + comp.dim == big.dim
        assert sub.intersect(comp).dim == 0


def test_prime_field_rejects_composite():
    with pytest.raises(ValueError):
        PrimeField(1000000)


def test_division_by_zero_rejected():
    with pytest.raises(ZeroDivisionError):
        QQ.div(QQ.one, QQ.zero)
    with pytest.raises(ZeroDivisionError):
        PrimeField(101).div(1, 0)
