import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as hs

from conftest import SMALL, entry_id, group, model_group
from pgwb import oracle
from pgwb import structure as st
from pgwb.errors import ContextMismatch, RelationViolated
from pgwb.morphisms import (apply, center_transversal, compose, conjugation_map,
                            identity_map, inner_lookup, is_inner, map_from_images,
                            map_from_user_images, map_order, map_power)
from pgwb.pc import Element


def gamma(D8):
    return map_from_images(D8, [(1, 1, 0), (0, 1, 1), (0, 0, 1)])


def test_d8_gamma_is_automorphism(D8):
    f = gamma(D8)
    assert f.kind == "automorphism"
    # image table is a homomorphism of the independent model
    M = model_group("dihedral", 8)
    t = f.table
    assert all(t[M.mul(a, b)] == M.mul(t[a], t[b]) for a in range(8) for b in range(8))
    assert len(set(t.tolist())) == 8


def test_identity_images(D8):
    f = map_from_images(D8, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert f == identity_map(D8)
    assert map_order(f) == 1


def test_relation_violated_names_relator(D8):
    with pytest.raises(RelationViolated, match="power 1"):
        map_from_images(D8, [(0, 1, 0), (0, 1, 0), (0, 0, 1)])


def test_endomorphism_kind(D8):
    f = map_from_images(D8, [(1, 0, 0), (0, 0, 0), (0, 0, 0)])
    assert f.kind == "endomorphism" and not f.is_automorphism


def test_orders(D8, H5):
    assert map_order(gamma(D8)) == 2
    f = map_from_images(H5, [(1, 0, 1, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    assert map_order(f) == 5
    assert map_power(f, 5) == identity_map(H5)
    assert map_power(f, 1) != identity_map(H5)


def test_apply_and_context(D8, Q8):
    f = gamma(D8)
    e = Element(D8, D8.code((0, 1, 0)))
    assert apply(f, e).exps == (0, 1, 1)
    assert f((1, 0, 0)) == D8.code((1, 1, 0))
    with pytest.raises(ContextMismatch):
        apply(f, Element(Q8, 1))
    with pytest.raises(ContextMismatch):
        compose(f, identity_map(Q8))


def test_is_inner_examples(D8, H5):
    c = conjugation_map(D8, (0, 1, 0))
    assert c.image_exps() == [[1, 0, 1], [0, 1, 0], [0, 0, 1]]
    v = is_inner(c)
    assert v.inner and D8.exps(v.witness) == (0, 1, 0)
    v = is_inner(gamma(D8))
    assert not v.inner and v.scanned == 4
    f = map_from_images(H5, [(1, 0, 1, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    v = is_inner(f)
    assert v.inner and H5.exps(v.witness) == (0, 4, 0, 0)


def test_noninner_gamma_by_listing_inn(D8):
    M = model_group("dihedral", 8)
    inn = M.inner_automorphisms()
    assert len(inn) == 4
    assert tuple(gamma(D8).table.tolist()) not in inn


def test_witness_is_lowest_conjugator(H5):
    f = conjugation_map(H5, H5.code((2, 3, 1, 4)))
    v = is_inner(f)
    t = f.table
    conj = [g for g in range(H5.order)
            if all(H5.conj(x, g) == t[x] for x in H5.gens)]
    assert v.witness == min(conj)


def test_as_dict(D8):
    d = gamma(D8).as_dict()
    assert d["order"] == 2 and d["inner"] == {"inner": False, "witness": None, "scanned": 4}


@pytest.mark.parametrize("e", SMALL, ids=entry_id)
def test_inner_count_is_index_of_center(e):
    G = group(*e)
    assert len(center_transversal(G)) == G.order // st.center(G).size
    assert len(inner_lookup(G)) == G.order // st.center(G).size
    assert len(model_group(*e).inner_automorphisms()) == G.order // st.center(G).size


def test_car_property_huppert(H5):
    gamma2 = st.derived_subgroup(st.whole(H5)).codes
    x, y = H5.gen(0), H5.gen(1)
    ok = 0
    for a in gamma2:
        for b in gamma2:
            f = map_from_user_images(H5, [H5.mul(x, int(a)), H5.mul(y, int(b))])
            ok += f.is_automorphism
    assert ok == len(gamma2) ** 2 == 625


@pytest.mark.parametrize("e", [e for e in SMALL if group(*e).order <= 2 ** 6], ids=entry_id)
def test_map_order_divides_aut_order(e):
    G = group(*e)
    A = oracle.brute_force_automorphisms(G)
    for f in A.automorphisms:
        assert len(A) % map_order(f) == 0


# -- properties ------------------------------------------------------------------------

def random_inner(G, data):
    return conjugation_map(G, data.draw(hs.integers(0, G.order - 1)))


@given(hs.sampled_from(SMALL), hs.data())
def test_composition_of_inner_is_inner(e, data):
    G = group(*e)
    s = data.draw(hs.integers(0, G.order - 1))
    t = data.draw(hs.integers(0, G.order - 1))
    f, g = conjugation_map(G, s), conjugation_map(G, t)
    h = compose(f, g)          # x -> (x^t)^s = x^(ts)
    v = is_inner(h)
    assert v.inner
    assert h == conjugation_map(G, G.mul(t, s))
    assert h == conjugation_map(G, v.witness)


@given(hs.sampled_from(SMALL), hs.data())
def test_apply_is_multiplicative(e, data):
    G = group(*e)
    f = random_inner(G, data)
    a = data.draw(hs.integers(0, G.order - 1))
    b = data.draw(hs.integers(0, G.order - 1))
    assert apply(f, G.mul(a, b)) == G.mul(apply(f, a), apply(f, b))
