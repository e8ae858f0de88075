"""Gabriel quiver of a basic table algebra: arrow multiplicities from
the radical-square layers, the precedence preorder, and directedness."""

from __future__ import annotations

from exborel.linalg import Subspace
from exborel.modules import TableAlgebra
from exborel.homological import Preorder
from exborel.quivers import Arrow, Quiver


def gabriel_data(algebra: TableAlgebra):
    """(quiver, precedence preorder, is_directed).

    Arrow count i -> j equals dim of e_j (rad/rad^2) e_i; the precedence
    preorder is the reflexive-transitive closure of the arrows.
    """
    f = algebra.field
    n = algebra.dim
    radv = algebra.radical_vectors()
    rad_elems = [{algebra.basis[k]: v[k] for k in range(n)
                  if not f.eq(v[k], f.zero)} for v in radv]
    rad2_vecs = []
    for a in rad_elems:
        for b in rad_elems:
            p = algebra.product_elements(a, b)
            if p:
                vec = [f.zero] * n
                for lab, c in p.items():
                    vec[algebra.index[lab]] = c
                rad2_vecs.append(vec)
    rad2 = Subspace(f, n, rad2_vecs)
    arrows = []
    pairs = []
    for i in algebra.points:
        for j in algebra.points:
            # block component of rad / rad^2 at (i, j)
            block_vecs = []
            for elem in rad_elems:
                vec = [f.zero] * n
                for lab, c in elem.items():
                    if algebra.src[lab] == i and algebra.tgt[lab] == j:
                        vec[algebra.index[lab]] = c
                block_vecs.append(vec)
            blk = Subspace(f, n, block_vecs)
            inter = blk.intersect(rad2)
            count = blk.dim - inter.dim
            for k in range(count):
                arrows.append(Arrow(f"g{i}_{j}_{k}", i, j))
            if count:
                pairs.append((i, j))
    quiver = Quiver(list(algebra.points), arrows)
    preorder = Preorder(list(algebra.points), pairs)
    return quiver, preorder, quiver.is_acyclic()
