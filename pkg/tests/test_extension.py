from __future__ import annotations

import itertools

import numpy as np
import pytest

from invshapiro.errors import BadSubgroupOrder, CapacityExceeded
from invshapiro.extension import (ExtElement, alpha_values, beta_z4, certify_cover,
                                  enumerate_involutions, ext_identity, ext_inverse,
                                  ext_multiply, ext_order, ext_square, involutions_outside_T)
from invshapiro.f2 import F2Vector
from invshapiro.groups import Subgroup, close_generators, named_group
from invshapiro.shapiro import theta_inverse

from conftest import subgroup_setup

u = F2Vector(1, 1)


def _elements(alpha):
    W = alpha.module
    return [ExtElement(g, F2Vector(W.dim, b)) for g in range(W.parent.order)
            for b in range(1 << W.dim)]


def test_beta_z4_values(s3_setup):
    G, h, H, T = s3_setup
    beta = beta_z4(H)
    assert beta(h, h) == u
    assert not beta(0, h) and not beta(h, 0)
    with pytest.raises(BadSubgroupOrder):
        beta_z4(Subgroup(G, tuple(range(G.order))))


def test_beta_defines_cyclic_group_of_order_4(s3_setup):
    G, h, H, T = s3_setup
    beta = beta_z4(H)
    # the extension of U by H: pairs (x, c) with (x1,c1)(x2,c2) = (x1 x2, c1 + c2 + beta)
    elems = [(x, c) for x in H.members for c in (0, 1)]

    def mul(p, q):
        return G.mul(p[0], q[0]), p[1] ^ q[1] ^ beta(p[0], q[0]).bits

    orders = []
    for e in elems:
        x, k = e, 1
        while x != (0, 0):
            x, k = mul(x, e), k + 1
        orders.append(k)
    assert sorted(orders) == [1, 2, 4, 4]


def test_identity_and_kernel(s3_setup):
    G, h, H, T = s3_setup
    alpha = theta_inverse(beta_z4(H), T)
    one = ext_identity(alpha)
    for x in _elements(alpha):
        assert ext_multiply(one, x, alpha) == x == ext_multiply(x, one, alpha)
        assert ext_multiply(x, ext_inverse(x, alpha), alpha) == one
    f1, f2 = F2Vector(3, 0b011), F2Vector(3, 0b110)
    assert ext_multiply(ExtElement(0, f1), ExtElement(0, f2), alpha) == ExtElement(0, f1 + f2)


def test_associativity_exhaustive_s3(s3_setup):
    G, h, H, T = s3_setup
    alpha = theta_inverse(beta_z4(H), T)
    E = _elements(alpha)
    assert len(E) == 48
    # 48^3 triples; vectorised over the f-components per (g1, g2, g3)
    W = alpha.module
    fs = ((np.arange(8)[:, None] >> np.arange(3)) & 1).astype(np.uint8)
    vals = alpha.values
    for g1, g2, g3 in itertools.product(range(6), repeat=3):
        g12, g23 = G.mul(g1, g2), G.mul(g2, g3)
        # ((g1,f1)(g2,f2))(g3,f3): (f1 g2 + f2 + a(g1,g2)) g3 + f3 + a(g12, g3)
        F1 = fs[:, None, None, :]
        F2 = fs[None, :, None, :]
        F3 = fs[None, None, :, :]
        left = W.act_array(W.act_array(F1, g2) ^ F2 ^ vals[g1, g2], g3) ^ F3 ^ vals[g12, g3]
        right = W.act_array(F1, g23) ^ (W.act_array(F2, g3) ^ F3 ^ vals[g2, g3]) ^ vals[g1, g23]
        assert np.array_equal(left, right)


def test_associativity_sampled_a4(a4):
    h, H, T = subgroup_setup(a4)
    alpha = theta_inverse(beta_z4(H), T)
    rng = np.random.default_rng(0)
    for _ in range(2000):
        x, y, z = (ExtElement(int(rng.integers(12)), F2Vector(6, int(rng.integers(64))))
                   for _ in range(3))
        lhs = ext_multiply(ext_multiply(x, y, alpha), z, alpha)
        rhs = ext_multiply(x, ext_multiply(y, z, alpha), alpha)
        assert lhs == rhs


def test_squares(s3_setup):
    G, h, H, T = s3_setup
    alpha = theta_inverse(beta_z4(H), T)
    W = alpha.module
    for b in range(1, 8):
        assert ext_square(ExtElement(0, F2Vector(3, b)), alpha) == ext_identity(alpha)
    sq = ext_square(ExtElement(h, F2Vector.zero(3)), alpha)
    assert sq.g == 0 and W.evaluate(sq.f, 0) == u
    assert ext_order(ExtElement(h, F2Vector.zero(3)), alpha) == 4
    # every lift of every involution of S3 has square != 1
    count = 0
    for g in G.involutions:
        for b in range(8):
            count += 1
            assert ext_square(ExtElement(int(g), F2Vector(3, b)), alpha) != ext_identity(alpha)
    assert count == 24


def test_involution_conjugation_closure(a4):
    """Conjugating an involution of E by (a, 0) gives an involution."""
    h, H, T = subgroup_setup(a4)
    alpha = theta_inverse(beta_z4(H), T)
    one = ext_identity(alpha)
    invols = [x for x in _elements(alpha) if x != one and ext_square(x, alpha) == one]
    for x in invols[:20]:
        for a in range(12):
            c = ExtElement(a, F2Vector.zero(6))
            y = ext_multiply(ext_multiply(ext_inverse(c, alpha), x, alpha), c, alpha)
            assert ext_square(y, alpha) == one and y.g == 0


@pytest.mark.parametrize("name,count", [("s3", 7), ("a4", 63)])
def test_full_enumeration(name, count):
    G = named_group(name)
    h, H, T = subgroup_setup(G)
    e = enumerate_involutions(theta_inverse(beta_z4(H), T))
    assert e["inside_t"] == count and e["outside_t"] == 0


def test_certificate_s3_blocker(s3_setup):
    G, h, H, T = s3_setup
    certs = involutions_outside_T(G, H, T, method="orbit")
    assert len(certs) == 1
    c = certs[0]
    assert c.rep == h and not c.solvable
    assert c.blocker == {"kind": "fixed_coset", "coset": int(T.coset_of[0]), "value": 1}


@pytest.mark.parametrize("name", ["s3", "a4"])
def test_three_methods_agree(name):
    G = named_group(name)
    for mode in ("identity-first", "nontrivial-y0"):
        h, H, T = subgroup_setup(G, mode)
        results = {m: involutions_outside_T(G, H, T, method=m) for m in
                   ("enumerate", "solver", "orbit")}
        sig = {m: [(c.solvable, c.log2_solutions) for c in r] for m, r in results.items()}
        assert sig["enumerate"] == sig["solver"] == sig["orbit"]


def test_mutation_changes_certificate(s3_setup):
    G, h, H, T = s3_setup
    alpha = theta_inverse(beta_z4(H), T)
    before = involutions_outside_T(G, H, T, method="solver", alpha=alpha)
    v = alpha(h, h)
    bad = alpha.with_value((h, h), v + F2Vector.unit(v.dim, int(T.coset_of[0])))
    after = involutions_outside_T(G, H, T, method="solver", alpha=bad)
    assert (before[0].solvable, before[0].blocker) != (after[0].solvable, after[0].blocker)
    for m in ("orbit", "enumerate"):
        other = involutions_outside_T(G, H, T, method=m, alpha=bad)
        assert other[0].solvable == after[0].solvable


def test_solvable_case_counts():
    """A zero cocycle splits: every involution lifts, 2^orbits ways each."""
    G = named_group("a4")
    h, H, T = subgroup_setup(G)
    alpha = theta_inverse(beta_z4(H), T)
    zero = alpha + alpha
    certs = involutions_outside_T(G, H, T, method="orbit", alpha=zero,
                                  cross_check=("solver", "enumerate"))
    assert all(c.solvable for c in certs)
    assert all(v["agrees"] for c in certs for v in c.cross_checks.values())
    e = enumerate_involutions(zero)
    assert e["outside_t"] == sum(c.class_size << c.log2_solutions for c in certs)


def test_enumerate_capacity(a5):
    h, H, T = subgroup_setup(a5)
    with pytest.raises(CapacityExceeded):
        involutions_outside_T(a5, H, T, method="enumerate")


def test_alpha_values_matches_cochain(a4):
    h, H, T = subgroup_setup(a4, "nontrivial-y0")
    beta = beta_z4(H)
    alpha = theta_inverse(beta, T)
    for g1 in range(12):
        for g2 in range(12):
            assert np.array_equal(alpha_values(beta, T, g1, g2).ravel(),
                                  alpha.value_array((g1, g2)))


@pytest.mark.parametrize("name,order,count", [("s3", 48, 7), ("a4", 768, 63)])
def test_certify_cover_small(name, order, count):
    rep = certify_cover(named_group(name))
    assert rep.e_order == order and rep.involutions_in_t == count
    assert rep.involutions_outside_t == 0 and rep.nonsplit is True
    assert rep.enumeration == {"order": order, "inside_t": count, "outside_t": 0}
    assert rep.ok and rep.hypothesis == "unique involution class"


def test_certify_cover_multiclass():
    G = close_generators(["(1 2)", "(1 2 3 4)"], name="s4")
    rep = certify_cover(G)
    assert rep.hypothesis.startswith("outside hypothesis")
    assert len(rep.classes) == 2
    assert rep.checks_passed


def test_certify_cover_large_index_strings():
    rep = certify_cover(named_group("psl27"), samples=2000)
    assert rep.e_order == "168*2^84" and rep.involutions_in_t == "2^84 - 1"
    assert rep.nonsplit is True and rep.nonsplit_basis.startswith("implied")
