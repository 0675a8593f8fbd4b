"""Per-group JSON reports and corpus verification runs."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import oracle
from . import search
from . import structure as st
from .errors import CounterexampleAlarm, InputError, OracleInfeasible, PreconditionError
from .hypotheses import reduction_report
from .pc import GroupContext, consistency_check, parse_pcp

SCHEMA_VERSION = 1

NONINNER_FOUND = "noninner_found"
COUNTEREXAMPLE = "counterexample"
INFEASIBLE = "oracle_infeasible"
PRECONDITION = "precondition_unmet"


def _reductions(G):
    r = reduction_report(G).as_dict()
    return {k: r[k] for k in ("i", "ii", "iii", "iv", "v", "hypothesis_a",
                              "hypothesis_b", "hypothesis_c")}


def analyze_group(G: GroupContext, file: str | None = None, *, strategy: str = "auto",
                  oracle_limit: int = oracle.DEFAULT_LIMIT, cross_check: bool = True) -> dict:
    """Full report for one group; the driver's outcome goes into ``result``."""
    cons = consistency_check(G)
    out = {
        "schema_version": SCHEMA_VERSION,
        "group": {"file": file, "prime": G.p, "ngens": G.n, "order_log": G.n},
        "consistency": {"ok": cons.ok, "method": cons.method},
        "series": st.series_report(G).as_dict(),
        "reductions": _reductions(G),
    }
    result = {"status": None, "strategy": None, "automorphism": None, "oracle_agreement": None}
    found = None
    try:
        cert = search.find_noninner_order_p(G, strategy=strategy, oracle_limit=oracle_limit,
                                            with_report=False)
        found = not cert.inner
        result.update(status=NONINNER_FOUND if found else PRECONDITION,
                      strategy=cert.strategy, automorphism=cert.automorphism_dict())
    except CounterexampleAlarm as e:
        found = False
        result.update(status=COUNTEREXAMPLE, detail=str(e))
    except OracleInfeasible as e:
        result.update(status=INFEASIBLE, detail=str(e))
    except PreconditionError as e:
        result.update(status=PRECONDITION, detail=f"{type(e).__name__}: {e}")
    if cross_check and found is not None and oracle.feasible(G, oracle_limit):
        truth = oracle.noninner_bruteforce(G, oracle_limit).exists
        result["oracle_agreement"] = truth == found
    out["result"] = result
    return out


def _analyze_path(args):
    path, limit = args
    try:
        text = Path(path).read_text()
        G = GroupContext(parse_pcp(text), name=Path(path).name)
    except (InputError, OSError, UnicodeDecodeError) as e:
        return {"file": Path(path).name, "error": type(e).__name__, "message": str(e)}
    return analyze_group(G, Path(path).name, oracle_limit=limit)


@dataclass
class VerificationReport:
    groups: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    @property
    def summary(self) -> dict:
        status = [g["result"]["status"] for g in self.groups]
        agree = [g["result"]["oracle_agreement"] for g in self.groups]
        n_found = status.count(NONINNER_FOUND)
        return {
            "groups": len(self.groups),
            "noninner_found": n_found,
            "counterexamples": status.count(COUNTEREXAMPLE),
            "oracle_disagreements": sum(a is False for a in agree),
            "errors": len(self.errors),
            "all_pass": n_found == len(self.groups) and not any(a is False for a in agree),
        }

    @property
    def alarm(self) -> bool:
        return self.summary["counterexamples"] > 0

    def to_dict(self) -> dict:
        return {"schema_version": self.schema_version, "groups": self.groups,
                "errors": self.errors, "summary": self.summary}

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, d) -> "VerificationReport":
        return cls(list(d["groups"]), list(d["errors"]), d["schema_version"])

    @classmethod
    def from_json(cls, text) -> "VerificationReport":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        return isinstance(other, VerificationReport) and self.to_dict() == other.to_dict()


def run_verification(directory, *, jobs: int = 1,
                     oracle_limit: int = oracle.DEFAULT_LIMIT) -> VerificationReport:
    """Analyze every *.pcp file in a directory; ordering is by filename."""
    files = sorted(Path(directory).glob("*.pcp"), key=lambda f: f.name)
    tasks = [(str(f), oracle_limit) for f in files]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_analyze_path, tasks))
    else:
        results = [_analyze_path(t) for t in tasks]
    rep = VerificationReport()
    for r in results:
        (rep.errors if "error" in r else rep.groups).append(r)
    return rep
