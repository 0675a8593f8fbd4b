"""Reduction predicates: Hypothesis A, the five-condition reduction report
(Hypothesis B) and Hypothesis C."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import structure as st
from .errors import RegularityUndecided
from .pc import GroupContext

HOLDS, FAILS, UNDECIDED = "holds", "fails", "undecided"


def _tri(flag) -> str:
    if flag is None:
        return UNDECIDED
    return HOLDS if flag else FAILS


def hypothesis_a(G: GroupContext) -> bool:
    """d(Z2/Z) = d(G) d(Z)."""
    up = st.upper_central_series(G)
    Z = up[1] if len(up) > 1 else st.trivial(G)
    Z2 = up[2] if len(up) > 2 else up[-1]
    return st.rank_of_quotient(Z2, Z) == st.dgen(G) * st.rank_of_quotient(Z)


def quotient_by_center_is_powerful(G: GroupContext) -> bool:
    Z = st.center(G)
    if Z.size == G.order:
        return True
    return st.is_powerful(st.quotient(G, Z).Q)


def centralizer_of_z_phi_differs(G: GroupContext) -> bool:
    """C_G(Z(Phi(G))) != Phi(G)."""
    F = st.frattini(G)
    return st.centralizer(G, st.center_of(F)) != F


@dataclass(frozen=True)
class ReductionReport:
    condition_i: str
    condition_ii: str
    condition_iii: str
    condition_iv: str
    condition_v: str
    hypothesis_a: bool
    hypothesis_b: bool
    strongly_frattinian: bool
    centralizer_of_z_phi_differs: bool
    hypothesis_c: bool = False
    hypothesis_c_clauses: dict = field(default_factory=dict)

    @property
    def conditions(self):
        return [self.condition_i, self.condition_ii, self.condition_iii,
                self.condition_iv, self.condition_v]

    @property
    def applicable(self) -> list:
        """Names of the conditions that hold."""
        names = ["i", "ii", "iii", "iv", "v"]
        return [n for n, c in zip(names, self.conditions) if c == HOLDS]

    def as_dict(self):
        return {
            "i": self.condition_i, "ii": self.condition_ii, "iii": self.condition_iii,
            "iv": self.condition_iv, "v": self.condition_v,
            "hypothesis_a": self.hypothesis_a, "hypothesis_b": self.hypothesis_b,
            "hypothesis_c": self.hypothesis_c,
            "hypothesis_c_clauses": dict(self.hypothesis_c_clauses),
            "strongly_frattinian": self.strongly_frattinian,
            "centralizer_of_z_phi_differs": self.centralizer_of_z_phi_differs,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["i"], d["ii"], d["iii"], d["iv"], d["v"], d["hypothesis_a"],
                   d["hypothesis_b"], d["strongly_frattinian"],
                   d["centralizer_of_z_phi_differs"], d["hypothesis_c"],
                   dict(d.get("hypothesis_c_clauses", {})))


def _reduction_core(G: GroupContext) -> dict:
    ha = hypothesis_a(G)
    try:
        reg = st.is_regular(G)
    except RegularityUndecided:
        reg = None
    sf = st.is_strongly_frattinian(G)
    gamma2 = st.derived_subgroup(st.whole(G))
    conds = {
        "condition_i": _tri(not ha),
        "condition_ii": _tri(quotient_by_center_is_powerful(G)),
        "condition_iii": _tri(reg),
        "condition_iv": _tri(not sf),
        "condition_v": _tri(gamma2.is_cyclic),
    }
    hb = all(c == FAILS for c in conds.values())
    return dict(conds, hypothesis_a=ha, hypothesis_b=hb, strongly_frattinian=sf,
                centralizer_of_z_phi_differs=centralizer_of_z_phi_differs(G))


def reduction_report(G: GroupContext) -> ReductionReport:
    core = _reduction_core(G)
    hc = _hypothesis_c(G, core["hypothesis_b"])
    return ReductionReport(**core, hypothesis_c=hc.holds, hypothesis_c_clauses=hc.clauses)


@dataclass(frozen=True)
class HypothesisC:
    hypothesis_b: bool
    clauses: dict          # clause number (as string) -> bool
    first_failure: str | None

    @property
    def holds(self) -> bool:
        return self.first_failure is None


CLAUSE_TEXT = {
    "1": "|Z(G)| = p",
    "2": "[Z3(G), Phi(G)] != 1",
    "3": "Z3(G)/Z(G) elementary abelian",
    "4": "Z2(G) not elementary abelian",
}


def _hypothesis_c(G: GroupContext, hb: bool) -> HypothesisC:
    up = st.upper_central_series(G)
    term = lambda k: up[min(k, len(up) - 1)]
    Z, Z2, Z3 = term(1), term(2), term(3)
    F = st.frattini(G)
    z3_mod_z = st.commutator_subgroup(Z3, Z3) <= Z and bool(
        np.all(Z.mask[G.pow_arr(Z3.codes, G.p)]))
    clauses = {
        "1": Z.size == G.p,
        "2": st.commutator_subgroup(Z3, F).size > 1,
        "3": bool(z3_mod_z),
        "4": not Z2.is_elementary_abelian,
    }
    first = None
    if not hb:
        first = "hypothesis_b"
    else:
        first = next((k for k in sorted(clauses) if not clauses[k]), None)
    return HypothesisC(hb, clauses, first)


def hypothesis_c(G: GroupContext) -> HypothesisC:
    return _hypothesis_c(G, _reduction_core(G)["hypothesis_b"])
