import numpy as np
import pytest

from conftest import SMALL, corpus, entry_id, group, model_group
from pgwb import oracle
from pgwb import structure as st
from pgwb.derivations import derivation_family, module
from pgwb.errors import LimitExceeded, TooLarge
from pgwb.search import find_noninner_order_p


def test_aut_examples(D8, Q8):
    A = oracle.brute_force_automorphisms(D8)
    assert len(A) == 8 and A.inner_count == 4
    assert len(oracle.brute_force_automorphisms(Q8)) == 24
    assert len(oracle.brute_force_automorphisms(group("elementary_abelian", 2, 2))) == 6


@pytest.mark.parametrize("e", [e for e in SMALL if group(*e).order <= 32], ids=entry_id)
def test_aut_matches_table_scan(e):
    G = group(*e)
    A = oracle.brute_force_automorphisms(G)
    mine = {tuple(f.table.tolist()) for f in A.automorphisms}
    gens = [G.gen(u) for u in G.user_gens]
    theirs = {tuple(f.tolist()) for f in model_group(*e).automorphisms(gens)}
    assert mine == theirs
    assert A.inner_count == len(model_group(*e).inner_automorphisms())


def test_closed_under_composition(H5):
    from pgwb.morphisms import compose
    A = oracle.brute_force_automorphisms(group("dihedral", 16))
    keys = {f.images for f in A.automorphisms}
    fs = A.automorphisms
    for f in fs[::3]:
        for g in fs[::5]:
            assert compose(f, g).images in keys


def test_counts_by_order_d8(D8):
    A = oracle.brute_force_automorphisms(D8)
    assert A.counts_by_order() == {1: 1, 2: 5, 4: 2}
    assert len(A.inner()) == 4


def test_limit_exceeded(H5):
    with pytest.raises(LimitExceeded):
        oracle.brute_force_automorphisms(H5, limit=1000)


@pytest.mark.parametrize("e", SMALL, ids=entry_id)
def test_inner_count(e):
    G = group(*e)
    if oracle.feasible(G):
        assert oracle.brute_force_automorphisms(G).inner_count == G.order // st.center(G).size


# -- pointwise derivation check ------------------------------------------------------------

def test_zero_map_passes(D8):
    assert oracle.pointwise_derivation_check(D8, np.zeros(8, dtype=np.int64))


def test_constructed_derivations_pass(E5):
    Fam = derivation_family(E5, None, module(E5, [E5.gen(1), E5.gen(2)]))
    for d in list(Fam)[::37]:
        assert oracle.pointwise_derivation_check(E5, d.table)


def test_corruption_fails_with_witness(D8):
    # delta(g) = [g, g2] is a derivation into <g3>; flip its value at one element
    vals = np.array([D8.comm(g, D8.gen(1)) for g in range(8)], dtype=np.int64)
    assert oracle.pointwise_derivation_check(D8, vals)
    vals[5] = D8.mul(int(vals[5]), D8.gen(2))
    res = oracle.pointwise_derivation_check(D8, vals)
    assert not res and res.witness is not None
    g, h = res.witness
    lhs = vals[D8.mul(g, h)]
    rhs = D8.mul(D8.conj(int(vals[g]), h), int(vals[h]))
    assert lhs != rhs


def test_pair_scan_too_large(monkeypatch):
    G = corpus()["marco2_128"]
    Q = st.quotient(G, st.trivial(G))
    assert oracle.pointwise_derivation_check(G, np.zeros(G.order, dtype=np.int64), quotient=Q)
    monkeypatch.setattr(oracle, "PAIR_LIMIT", 100)
    with pytest.raises(TooLarge):
        oracle.pointwise_derivation_check(group("dihedral", 64), np.zeros(64, dtype=np.int64))


# -- non-inner of order p ---------------------------------------------------------------

def test_noninner_examples(D8, H5):
    r = oracle.noninner_bruteforce(D8)
    assert r.exists and r.example.order == 2 and not r.example.inner.inner
    # the family member g1 -> g1 g2, g2 -> g2^3 is one of them
    from pgwb.morphisms import map_from_user_images
    f = map_from_user_images(D8, [D8.code((1, 1, 0)), D8.code((0, 1, 1))])
    assert f.order == 2 and not f.inner.inner
    assert oracle.noninner_bruteforce(H5).exists
    C4 = group("cyclic", 4)
    r = oracle.noninner_bruteforce(C4)
    assert r.exists and r.inner_order == 1
    x = C4.gen(0)
    assert r.count == 1 and r.example(x) == C4.pow(x, 3)


def test_example_is_lexicographically_first(D8):
    A = oracle.brute_force_automorphisms(D8)
    first = next(u for u, o in zip(A.user_images, A.orders) if o == 2 and u not in A.inner_keys)
    r = oracle.noninner_bruteforce(D8)
    assert r.example == A.automorphisms[A.user_images.index(first)]


def test_certificates_appear_in_enumeration():
    for name, G in corpus().items():
        if G.order > 2 ** 8 or not oracle.feasible(G):
            continue
        cert = find_noninner_order_p(G, with_report=False)
        A = oracle.brute_force_automorphisms(G)
        keys = {f.images for f in A.automorphisms}
        f = cert.automorphism_dict()
        imgs = tuple(G.code(tuple(x)) for x in f["images"])
        assert imgs in keys, name
