import pytest

from conftest import SMALL, corpus, entry_id, group, model_group
from pgwb import oracle
from pgwb import structure as st
from pgwb.hypotheses import (FAILS, HOLDS, UNDECIDED, CLAUSE_TEXT, ReductionReport,
                             centralizer_of_z_phi_differs, hypothesis_a, hypothesis_c,
                             reduction_report)



# -- Hypothesis A ---------------------------------------------------------------------

def test_hypothesis_a_examples(D8, Q8):
    assert hypothesis_a(D8)
    assert hypothesis_a(Q8)
    assert not hypothesis_a(group("cyclic", 8))
    assert not hypothesis_a(group("elementary_abelian", 5, 2))


def test_hypothesis_a_d8_by_scan(D8):
    M = model_group("dihedral", 8)
    Z2, Z = M.upper_series()[2], M.upper_series()[1]
    assert len(Z2) // len(Z) == 4            # G/Z is C2 x C2, so d(Z2/Z) = 2
    assert len(M.frattini(2)) == 2 and len(Z) == 2
    assert 2 == st.dgen(D8) * 1


def test_hypothesis_a_false_on_direct_product_with_cyclic():
    assert not hypothesis_a(corpus()["direct_product_dihedral32_cyclic4"])


# -- reduction report ------------------------------------------------------------------

def test_reduction_q8(Q8):
    r = reduction_report(Q8)
    assert r.condition_v == HOLDS
    assert not r.hypothesis_b
    assert "v" in r.applicable


def test_reduction_q8_derived_cyclic_by_scan():
    M = model_group("quaternion", 8)
    D = M.lower_series()[1]
    assert any(M.closure([g]) == D for g in D)


def test_reduction_huppert(H5):
    r = reduction_report(H5)
    assert r.condition_iii == HOLDS
    assert not r.hypothesis_b


def test_reduction_extraspecial(E5):
    r = reduction_report(E5)
    assert r.condition_v == HOLDS
    assert st.derived_subgroup(st.whole(E5)).size == 5


def test_reduction_marco2_group_satisfies_b():
    r = reduction_report(corpus()["marco2_128"])
    assert r.conditions == [FAILS] * 5
    assert r.hypothesis_a and r.hypothesis_b


@pytest.mark.parametrize("e", SMALL, ids=entry_id)
def test_hypothesis_b_iff_all_fail(e):
    r = reduction_report(group(*e))
    assert r.hypothesis_b == all(c == FAILS for c in r.conditions)
    assert r.hypothesis_c <= r.hypothesis_b
    if UNDECIDED in r.conditions:
        assert not r.hypothesis_b


def test_undecided_regularity_blocks_b(monkeypatch):
    G = corpus()["marco2_128"]
    from pgwb.errors import RegularityUndecided

    def undecided(*a, **k):
        raise RegularityUndecided("forced")
    monkeypatch.setattr(st, "is_regular", undecided)
    r = reduction_report(G)
    assert r.condition_iii == UNDECIDED
    assert not r.hypothesis_b


def test_report_round_trip(H5):
    r = reduction_report(H5)
    assert ReductionReport.from_dict(r.as_dict()) == r


def test_both_frattinian_formulations_are_reported(D8):
    r = reduction_report(D8)
    d = r.as_dict()
    assert "strongly_frattinian" in d and "centralizer_of_z_phi_differs" in d
    # D8: Phi = Z = <g3>, C(Z(Phi)) = G differs from Phi
    assert centralizer_of_z_phi_differs(D8)
    assert not r.strongly_frattinian


# -- Hypothesis C ----------------------------------------------------------------------

def test_hypothesis_c_d8(D8):
    c = hypothesis_c(D8)
    assert not c.holds and c.first_failure == "hypothesis_b"


def test_hypothesis_c_huppert(H5):
    c = hypothesis_c(H5)
    assert c.clauses["2"]
    assert not c.holds and c.first_failure == "hypothesis_b"
    M = model_group("huppert_p4", 5)
    F = M.frattini(5)
    assert F == M.closure([H5.gen(2), H5.gen(3)])
    assert M.commutator_subgroup(M.all, F) == M.closure([H5.gen(3)])


def test_hypothesis_c_abelian_clause_1_fails():
    for G in (group("elementary_abelian", 2, 3), group("cyclic", 25)):
        c = hypothesis_c(G)
        assert not c.clauses["1"]
        assert not c.holds


def test_clause_text_covers_clauses():
    assert set(CLAUSE_TEXT) == set(hypothesis_c(group("dihedral", 8)).clauses)


# -- invariants over the corpus ------------------------------------------------------------

def test_not_a_implies_oracle_finds_noninner():
    checked = 0
    for name, G in corpus().items():
        if not hypothesis_a(G) and oracle.feasible(G):
            assert oracle.noninner_bruteforce(G).exists, name
            checked += 1
    assert checked >= 3


def test_c_implies_a_and_two_generated_on_coclass3():
    for name, G in corpus().items():
        c = st.nilpotency_class(G)
        if hypothesis_c(G).holds:
            assert hypothesis_a(G), name
        if G.n - c == 3 and c > 3 and hypothesis_a(G):
            assert st.dgen(G) == 2, name
