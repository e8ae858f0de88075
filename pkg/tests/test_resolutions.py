import itertools
import random

import pytest

from exborel.linalg import QQ
from exborel.modules import (
    ModuleMap, hom_space, normal_basis, projective_module, simple_module,
)
from exborel.homological import Preorder
from exborel.resolutions import (
    check_i_bounded, ext_space, lift_chain_map, min_resolution,
    resolution_summand_points, yoneda_product,
)
from exborel.quivers import parse_input


def test_resolution_shapes(e2, e5):
    res1 = e2.hs.resolution("1")
    assert res1.length == 2
    assert resolution_summand_points(res1, e2.algebra, 0) == {"1": 1}
    assert resolution_summand_points(res1, e2.algebra, 1) == {"2": 1}
    assert resolution_summand_points(res1, e2.algebra, 2) == {"3": 1}
    res3 = e2.hs.resolution("3")
    assert res3.length == 0
    r5 = e5.hs.resolution("1")
    assert r5.length == 2
    assert resolution_summand_points(r5, e5.algebra, 2) == {"4": 1}


def test_resolution_validity(e2, e5, e6):
    for pl in (e2, e5, e6):
        for i in pl.preorder.elements:
            res = pl.hs.resolution(i)
            res.check_exactness()
            res.check_minimal()


def test_i_bounded(e2, e5):
    for pl in (e2, e5):
        for i in pl.preorder.elements:
            res = pl.hs.resolution(i)
            assert check_i_bounded(res, i, pl.preorder, pl.algebra)


def test_i_bounded_rejects_bad_padding(e2):
    # an artificial resolution with P_1 in degree -1 is not 1-bounded
    alg = e2.algebra
    from exborel.resolutions import Resolution
    p1 = projective_module(alg, "1")
    fake = Resolution(p1, [p1, p1], {1: ModuleMap.zero(p1, p1)},
                      ModuleMap.identity(p1), [None, None])
    assert not check_i_bounded(fake, "1", e2.preorder, alg)


def test_ext_dims(e2, e5):
    s = {i: simple_module(e2.algebra, i) for i in "123"}
    assert ext_space(e2.hs.resolution("1"), 1, s["2"]).dim == 1
    assert ext_space(e2.hs.resolution("1"), 2, s["3"]).dim == 1
    assert ext_space(e2.hs.resolution("1"), 1, s["3"]).dim == 0
    s5 = {i: simple_module(e5.algebra, i) for i in "1234"}
    assert ext_space(e5.hs.resolution("1"), 2, s5["4"]).dim == 1
    assert ext_space(e5.hs.resolution("1"), 2, s5["3"]).dim == 0
    # ext^0 contains the identity class
    d0 = ext_space(e2.hs.resolution("1"), 0, e2.deltas["1"]).dim
    assert d0 >= 1


def test_lift_chain_map_identity_and_zero(e2):
    res = e2.hs.resolution("1")
    aug = res.augmentation
    lifts = lift_chain_map(res, res, aug, 0)
    assert lifts[0].blocks["1"].data[0][0] == QQ.one
    zero = ModuleMap.zero(res.module_at(1), e2.deltas["2"])
    lifts0 = lift_chain_map(res, e2.hs.resolution("2"), zero, 1)
    assert all(m.is_zero() for m in lifts0.values())


def test_yoneda_identities_and_splice(e2, e5):
    s = {i: simple_module(e2.algebra, i) for i in "123"}
    r1 = e2.hs.resolution("1")
    r2 = e2.hs.resolution("2")
    ef = ext_space(r1, 1, s["2"])
    eg = ext_space(r2, 1, s["3"])
    et = ext_space(r1, 2, s["3"])
    out = yoneda_product(eg, [QQ.one], ef, [QQ.one], et)
    assert out == [QQ.one] or out == [QQ.of(-1)]
    assert any(not QQ.eq(c, QQ.zero) for c in out)
    # identity (ext^0 class of the identity) acts as a unit
    e0 = ext_space(r1, 0, e2.deltas["1"])
    ident_coords = e0.reduce(_identity_cocycle(r1, e2.deltas["1"]))
    prod = yoneda_product(ef, [QQ.one], e0, ident_coords, ef)
    assert prod == [QQ.one]
    # E5: adjacent ext^1 classes splice to zero
    s5 = {i: simple_module(e5.algebra, i) for i in "1234"}
    q1 = e5.hs.resolution("1")
    q2 = e5.hs.resolution("2")
    pf = ext_space(q1, 1, s5["2"])
    pg = ext_space(q2, 1, s5["3"])
    pt = ext_space(q1, 2, s5["3"])
    assert pt.dim == 0
    assert yoneda_product(pg, [QQ.one], pf, [QQ.one], pt) == []


def _identity_cocycle(res, target):
    return res.augmentation


def test_yoneda_bilinear_associative(e5):
    s5 = {i: simple_module(e5.algebra, i) for i in "1234"}
    res = {i: e5.hs.resolution(i) for i in "1234"}
    e12 = ext_space(res["1"], 1, s5["2"])
    e23 = ext_space(res["2"], 1, s5["3"])
    e34 = ext_space(res["3"], 1, s5["4"])
    e13 = ext_space(res["1"], 2, s5["3"])
    e24 = ext_space(res["2"], 2, s5["4"])
    e14 = ext_space(res["1"], 3, s5["4"])
    assert e14.dim == 0
    # (e34 . e23) . e12 == e34 . (e23 . e12): both vanish through the
    # zero middle spaces
    left_mid = yoneda_product(e34, [QQ.one], e23, [QQ.one], e24)
    right_mid = yoneda_product(e23, [QQ.one], e12, [QQ.one], e13)
    assert left_mid == [] and right_mid == []
    # bilinearity on the E2-style splice
    # 2g . f = 2 (g . f)
    out1 = yoneda_product(e23, [QQ.of(2)], e12, [QQ.one], e13)
    assert out1 == []


def test_yoneda_associativity_e2(e2):
    # over E2 all triple products land in Ext^3 = 0; check bilinearity on
    # the quadratic splice instead
    s = {i: simple_module(e2.algebra, i) for i in "123"}
    r1 = e2.hs.resolution("1")
    r2 = e2.hs.resolution("2")
    ef = ext_space(r1, 1, s["2"])
    eg = ext_space(r2, 1, s["3"])
    et = ext_space(r1, 2, s["3"])
    base = yoneda_product(eg, [QQ.one], ef, [QQ.one], et)
    twice = yoneda_product(eg, [QQ.of(2)], ef, [QQ.one], et)
    assert twice == [QQ.mul(QQ.of(2), base[0])]
    other = yoneda_product(eg, [QQ.one], ef, [QQ.of(3)], et)
    assert other == [QQ.mul(QQ.of(3), base[0])]
