import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as hs

from conftest import SMALL, entry_id, group, model_group
from pgwb.catalog import presentation
from pgwb.errors import BadPrime, ContextMismatch, MalformedInput, WeightViolation
from pgwb.pc import (Element, GroupContext, Word, associativity_triples, commutator,
                     conjugate, consistency_check, element_order, inverse, multiply,
                     normalize, parse_pcp, parse_word, power)

D8_TEXT = """# dihedral group of order 8
prime 2
gens 3
power 2 = 3
comm 2 1 = 3
"""

HUPPERT_TEXT = """prime 5
gens 4
comm 2 1 = 3
comm 3 1 = 4
"""


def el(G, *e):
    return Element(G, G.code(e))


# -- parsing --------------------------------------------------------------------

def test_parse_d8_matches_dihedral_table():
    G = GroupContext(parse_pcp(D8_TEXT))
    assert G.order == 8
    assert np.array_equal(G.table, model_group("dihedral", 8).T)


def test_parse_huppert_order_625():
    P = parse_pcp(HUPPERT_TEXT)
    G = GroupContext(P)
    assert G.order == 625
    assert P == presentation("huppert_p4", 5)
    # g2 = d, g1 = a: [d, a, d] = [d, a, a, d] = [d, a, a, a] = 1
    a, d = el(G, 1, 0, 0, 0), el(G, 0, 1, 0, 0)
    c1 = commutator(d, a)
    c2 = commutator(c1, a)
    assert commutator(c1, d).exps == (0,) * 4
    assert commutator(c2, d).exps == (0,) * 4
    assert commutator(c2, a).exps == (0,) * 4
    assert all(element_order(Element(G, x)) <= 5 for x in range(G.order))


def test_parse_rejects_wrong_weight_order():
    with pytest.raises(WeightViolation):
        parse_pcp("prime 2\ngens 3\ncomm 1 2 = 3\n")


def test_parse_rejects_rhs_below_head():
    with pytest.raises(WeightViolation):
        parse_pcp("prime 3\ngens 3\ncomm 3 1 = 2\n")
    with pytest.raises(WeightViolation):
        parse_pcp("prime 3\ngens 3\npower 2 = 1^1\n")


def test_parse_rejects_composite_prime():
    with pytest.raises(BadPrime):
        parse_pcp("prime 6\ngens 2\n")


@pytest.mark.parametrize("text", [
    "gens 2\nprime 2\n",
    "prime 2\n",
    "prime 2\ngens 2\npower 1 = x\n",
    "prime 2\ngens 2\npower 3 = 1\n",
    "prime 2\ngens 2\npower 1 = 2\npower 1 = 2\n",
    "prime 2\ngens 2\nfrobnicate 1 = 2\n",
    "prime 2\ngens 2\npower 1 2\n",
])
def test_parse_malformed(text):
    with pytest.raises(MalformedInput):
        parse_pcp(text)


def test_omitted_relations_default_trivial():
    G = GroupContext(parse_pcp("prime 3\ngens 2\n"))
    assert G.pow(G.gen(0), 3) == 0
    assert G.comm(G.gen(1), G.gen(0)) == 0


def test_text_round_trip():
    for e in SMALL:
        P = presentation(*e)
        assert parse_pcp(P.to_text()) == P


def test_identity_literal_and_lone_generator():
    assert parse_word("1", 3) == Word()
    assert parse_word("1^1", 3) == Word(((0, 1),))


# -- consistency -------------------------------------------------------------------

def test_consistency_d8_exhaustive():
    G = GroupContext(parse_pcp(D8_TEXT))
    assert consistency_check(G).ok
    assert associativity_triples(G) is None


def test_consistency_huppert():
    res = consistency_check(presentation("huppert_p4", 5))
    assert res.ok and res.method == "light"


def test_consistency_large_group_is_sampled():
    res = consistency_check(presentation("huppert_p4", 5), exhaustive_limit=100, samples=2000)
    assert res.ok and res.method == "sampled"


def test_corrupted_conjugation_is_violation():
    P = presentation("dihedral", 8)
    G = GroupContext(P, conj_override={(1, 0): 4})     # g2^g1 := g1
    res = consistency_check(G)
    assert not res.ok
    assert res.witness is not None and len(res.witness) == 3


def test_inconsistent_presentation_is_violation():
    # g1^2 = g2 with [g2, g1] = g3 cannot hold: g1 commutes with its own square
    P = parse_pcp("prime 2\ngens 3\npower 1 = 2\ncomm 2 1 = 3\n")
    assert not consistency_check(P).ok


# -- normal forms and arithmetic ------------------------------------------------------

def test_normalize_examples(D8):
    assert normalize(D8, Word(((1, 1), (1, 1)))).exps == (0, 0, 1)
    assert normalize(D8, Word(((1, 1), (0, 1)))).exps == (1, 1, 1)
    assert normalize(D8, Word()).exps == (0, 0, 0)


def test_d8_word_g2g1_matches_model(D8):
    M = model_group("dihedral", 8)
    r, s = D8.gen(1), D8.gen(0)
    assert normalize(D8, Word(((1, 1), (0, 1)))).code == M.mul(r, s)


def test_arithmetic_examples(D8):
    a, b = el(D8, 1, 0, 0), el(D8, 0, 1, 0)
    assert multiply(a, b).exps == (1, 1, 0)
    assert inverse(b).exps == (0, 1, 1)
    assert commutator(b, a).exps == (0, 0, 1)
    assert conjugate(b, a).exps == (0, 1, 1)


def test_arithmetic_examples_against_model(D8):
    M = model_group("dihedral", 8)
    r, s = D8.gen(1), D8.gen(0)
    assert D8.inv(r) == int(M.inv[r])
    assert D8.conj(r, s) == M.mul(M.mul(int(M.inv[s]), r), s)


def test_negative_powers(D8):
    r = el(D8, 0, 1, 0)
    assert power(r, -1) == inverse(r)
    assert power(r, -3) == r
    assert power(r, 0).exps == (0, 0, 0)


def test_negative_exponent_in_word_is_true_inverse(D8):
    # g2^-1 is r^3, not r: exponents are not reduced mod p
    assert D8.exps(D8.normalize(parse_word("2^-1", 3))) == (0, 1, 1)
    assert D8.exps(D8.normalize(parse_word("2^3", 3))) == (0, 1, 1)


def test_element_order_examples(D8, Q8):
    assert element_order(el(D8, 0, 1, 0)) == 4
    assert element_order(el(D8, 0, 0, 0)) == 1
    assert element_order(el(Q8, 1, 0, 0)) == 4


def test_orders_match_model():
    for e in SMALL:
        G, M = group(*e), model_group(*e)
        assert [M.order(x) for x in range(G.order)] == G.orders.tolist(), entry_id(e)


def test_context_mismatch(D8, Q8):
    with pytest.raises(ContextMismatch):
        multiply(el(D8, 1, 0, 0), el(Q8, 1, 0, 0))
    with pytest.raises(ContextMismatch):
        commutator(el(D8, 1, 0, 0), el(Q8, 1, 0, 0))


def test_element_operators(D8):
    a, b = el(D8, 1, 0, 0), el(D8, 0, 1, 0)
    assert a * b == (1, 1, 0)
    assert ~b == (0, 1, 1)
    assert b ** 2 == (0, 0, 1)


@pytest.mark.parametrize("e", SMALL, ids=entry_id)
def test_table_matches_independent_model(e):
    assert np.array_equal(group(*e).table, model_group(*e).T)


def test_order_is_p_to_n_and_codes_biject():
    for e in SMALL:
        G = group(*e)
        assert G.order == G.p ** G.n
        assert len({G.exps(c) for c in range(G.order)}) == G.order
        assert all(G.code(G.exps(c)) == c for c in range(G.order))


def test_tables_are_read_only(D8):
    with pytest.raises(ValueError):
        D8.table[0, 0] = 1
    with pytest.raises(ValueError):
        D8.inverses[0] = 1


def test_user_generators_and_definitions(H5):
    assert H5.user_gens == (0, 1)
    for i in range(H5.n):
        w = H5.def_words[i]
        assert H5.eval_word(w, [H5.gen(0), H5.gen(1)]) == H5.gen(i)


# -- properties -------------------------------------------------------------------------

group_and_codes = hs.sampled_from(SMALL).flatmap(
    lambda e: hs.tuples(hs.just(e), *[hs.integers(0, group(*e).order - 1)] * 3))


@given(group_and_codes)
def test_associativity(t):
    e, a, b, c = t
    G = group(*e)
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))


@given(group_and_codes)
def test_inverse_of_product(t):
    e, a, b, _ = t
    G = group(*e)
    assert G.inv(G.mul(a, b)) == G.mul(G.inv(b), G.inv(a))


@given(group_and_codes)
def test_commutator_inverse(t):
    e, a, b, _ = t
    G = group(*e)
    assert G.inv(G.comm(a, b)) == G.comm(b, a)


@given(group_and_codes)
def test_order_conjugation_invariant(t):
    e, a, g, _ = t
    G = group(*e)
    o = G.order_of(a)
    assert G.order_of(G.conj(a, g)) == o
    assert G.order % o == 0


@given(group_and_codes)
def test_collection_agrees_with_table(t):
    e, a, b, _ = t
    G = group(*e)
    assert G._mul_fold(a, b) == G.mul(a, b)


@given(group_and_codes, hs.integers(-20, 20))
def test_power_laws(t, k):
    e, a, _, _ = t
    G = group(*e)
    assert G.mul(G.pow(a, k), G.pow(a, -k)) == 0
    assert G.pow(a, k + 1) == G.mul(G.pow(a, k), a)
