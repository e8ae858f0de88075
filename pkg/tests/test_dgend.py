import pytest

from exborel.linalg import QQ
from exborel.modules import hom_space
from exborel.resolutions import ext_space
from exborel.dgend import DGEnd, HomotopyData, harmonic_to_ext


def _homology_by_degree(dg):
    out = {}
    for (n, i, j), d in dg.homology_dims().items():
        out[n] = out.get(n, 0) + d
    return out


def test_dg_structure(e1, e2, e3, e5, e6):
    for pl in (e1, e2, e3, e5, e6):
        dg = pl.dg
        dg.check_d_squared()
        dg.check_leibniz()


def test_homology_matches_ext_tables(e1, e3, e5):
    assert _homology_by_degree(e1.dg) == {0: 2, 1: 1}
    assert _homology_by_degree(e3.dg) == {0: 2}
    assert _homology_by_degree(e5.dg) == {0: 4, 1: 3, 2: 1}


def test_phi_consistency_blockwise(e2, e6):
    for pl in (e2, e6):
        hd = pl.dg.homology_dims()
        for i in pl.preorder.elements:
            res = pl.hs.resolution(i)
            for j in pl.preorder.elements:
                for n in range(0, 4):
                    if n == 0:
                        expected = len(hom_space(pl.deltas[i],
                                                 pl.deltas[j]))
                    else:
                        expected = ext_space(res, n, pl.deltas[j]).dim
                    assert hd.get((n, i, j), 0) == expected


def test_double_prime_part_acyclic(e2, e6):
    # H(E'') = 0: total homology equals the homology of the prime part
    for pl in (e2, e6):
        dg = pl.dg
        total = sum(dg.homology_dims().values())
        prime_expected = 0
        for i in pl.preorder.elements:
            for j in pl.preorder.elements:
                if not pl.preorder.leq_bar(i, j):
                    continue
                res = pl.hs.resolution(i)
                prime_expected += len(hom_space(pl.deltas[i], pl.deltas[j]))
                for n in range(1, 4):
                    prime_expected += ext_space(res, n, pl.deltas[j]).dim
        assert total == prime_expected


def test_homotopy_identities(e1, e2, e3, e5, e6):
    for pl in (e1, e2, e3, e5, e6):
        pl.hd.check_homotopy_identities()


def test_r_prime_homology(e1, e3):
    hr1 = {}
    for lab in e1.hd.harmonic_labels:
        hr1[lab[1]] = hr1.get(lab[1], 0) + 1
    assert hr1 == {1: 1}
    hr3 = {}
    for lab in e3.hd.harmonic_labels:
        hr3[lab[1]] = hr3.get(lab[1], 0) + 1
    assert hr3 == {0: 1}


def test_harmonic_to_ext_identification(e2):
    # degree-1 harmonic classes land on the ext^1 basis
    hd = e2.hd
    for lab in hd.harmonic_labels:
        n, i, j = lab[1], lab[2], lab[3]
        if n < 1:
            continue
        res = e2.hs.resolution(i)
        ext = ext_space(res, n, e2.deltas[j])
        coords = harmonic_to_ext(hd, {lab: QQ.one}, ext)
        assert any(not QQ.eq(c, QQ.zero) for c in coords)
