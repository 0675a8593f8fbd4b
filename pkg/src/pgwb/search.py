"""Constructions of non-inner automorphisms of order p, and the driver.

Every construction returns a ``Certificate`` whose claims (relations,
bijectivity, order, inner-ness verdict) are recomputed from scratch by
``verify_certificate``. No construction is trusted because of the theory
behind it.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from . import derivations as dv
from . import oracle
from . import structure as st
from .errors import (BadParams, CentralizerNotMaximal, CounterexampleAlarm, ModuleNotElementary,
                     ModuleNotInZN, NoD8Quotient, NoSuitableU, NotTwoGenerated,
                     OracleInfeasible, PreconditionError, PreconditionMZN, RelationViolated,
                     TooSmall, UCentral, UOrderWrong, UOutsideZ2)
from .hypotheses import reduction_report
from .morphisms import GroupMap, inner_lookup, is_inner
from .pc import GroupContext

CERT_VERSION = 1
STRATEGIES = ("auto", "phi-u", "family", "marco2", "oracle")


# -- certificates --------------------------------------------------------------

@dataclass
class Certificate:
    strategy: str
    images: list                 # exponent vectors of the pc-generator images
    order: int
    inner: bool
    witness: list | None         # exponent vector of the lowest conjugating element
    scanned: int                 # transversal elements examined by the inner scan
    hypotheses: dict | None = None
    provenance: dict | None = None
    notes: dict = field(default_factory=dict)

    @property
    def noninner_order_p(self) -> bool:
        return not self.inner and self.order > 1

    @property
    def witness_or_scan(self) -> dict:
        if self.inner:
            return {"witness": self.witness}
        return {"scan": self.scanned}

    def automorphism_dict(self) -> dict:
        return {"images": self.images, "order": self.order, "inner": self.inner,
                "witness_or_scan": self.witness_or_scan}

    def to_dict(self) -> dict:
        return {"version": CERT_VERSION, "strategy": self.strategy,
                "automorphism": self.automorphism_dict(), "scanned": self.scanned,
                "hypotheses": self.hypotheses, "provenance": self.provenance,
                "notes": self.notes}

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        a = d["automorphism"]
        return cls(d["strategy"], [list(v) for v in a["images"]], a["order"], a["inner"],
                   a["witness_or_scan"].get("witness"), d["scanned"], d.get("hypotheses"),
                   d.get("provenance"), dict(d.get("notes") or {}))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))


def certify(f: GroupMap, strategy: str, *, hypotheses=None, provenance=None,
            notes=None) -> Certificate:
    G = f.ctx
    if not f.is_automorphism:
        raise AssertionError("constructed map is not bijective")
    v = is_inner(f)
    return Certificate(strategy, f.image_exps(), f.order, v.inner,
                       list(G.exps(v.witness)) if v.inner else None, v.scanned,
                       hypotheses, provenance, dict(notes or {}))


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    mismatches: tuple = ()

    def __bool__(self):
        return self.ok


def verify_certificate(cert: Certificate, G: GroupContext) -> CertificateCheck:
    """Replay a certificate against G; every stored claim is recomputed."""
    bad = []
    try:
        f = GroupMap(G, [G.code(v) for v in cert.images])
    except RelationViolated as e:
        return CertificateCheck(False, (f"relation {e.relator} violated",))
    if not f.is_automorphism:
        bad.append("map is not bijective")
    again = certify(f, cert.strategy, hypotheses=cert.hypotheses,
                    provenance=cert.provenance, notes=cert.notes) if not bad else None
    if again is not None and again.to_dict() != cert.to_dict():
        for key in ("order", "inner", "witness", "scanned"):
            if getattr(again, key) != getattr(cert, key):
                bad.append(f"{key}: stored {getattr(cert, key)!r}, recomputed {getattr(again, key)!r}")
    if cert.provenance and cert.provenance.get("kind") == "derivation":
        bad.extend(_replay_derivation(cert, G, f))
    return CertificateCheck(not bad, tuple(bad))


def _replay_derivation(cert, G, f):
    prov = cert.provenance
    M = dv.module(G, [G.code(v) for v in prov["module"]["gens"]])
    Nd = prov["source"]["normal_subgroup"]
    Q = None
    if Nd is not None:
        Q = st.quotient(G, st.closure(G, [G.code(v) for v in Nd["gens"]]))
    gens = [G.code(v) for v in prov["source"]["generators"]]
    src = dv.Source(G, Q, gens)
    d = dv.derivation_from_images(src, M, [G.code(v) for v in prov["images"]])
    d = dv.lift_from_quotient(d, M)
    phi = dv.to_endomorphism(d)
    return [] if phi.images == f.images else ["derivation does not reproduce the images"]


# -- phi_u -----------------------------------------------------------------------

@dataclass
class SearchState:
    group: GroupContext
    u: int
    z: int
    M: st.Subgroup        # C_G(u)
    x: int                # lowest element outside M
    y: int                # lowest element of M outside Phi(G)
    t: int | None = None
    k: int | None = None
    modules: list = field(default_factory=list)


def _series(G):
    return st.upper_central_series(G)


def _term(up, k):
    return up[min(k, len(up) - 1)]


def u_candidates(G: GroupContext) -> list:
    """Elements of order p in Z2(G) - Z(G) whose centralizer is maximal."""
    up = _series(G)
    Z, Z2 = _term(up, 1), _term(up, 2)
    out = []
    for u in st.omega1(Z2).codes:
        u = int(u)
        if Z.mask[u] or G.order_of(u) != G.p or not Z2.mask[u]:
            continue
        if st.centralizer(G, [u]).size * G.p == G.order:
            out.append(u)
    return out


def search_state(G: GroupContext, u) -> SearchState:
    u = st.as_code(G, u)
    up = _series(G)
    Z, Z2 = _term(up, 1), _term(up, 2)
    if Z.mask[u]:
        raise UCentral("u is central")
    if G.order_of(u) != G.p:
        raise UOrderWrong(f"u has order {G.order_of(u)}, not {G.p}")
    if not Z2.mask[u]:
        raise UOutsideZ2("u is not in Z2(G)")
    M = st.centralizer(G, [u])
    if M.size * G.p != G.order:
        raise CentralizerNotMaximal("C_G(u) is not of index p")
    x = int(np.argmin(M.mask))
    F = G.frattini_mask
    y = int(np.nonzero(M.mask & ~F)[0][0]) if (M.mask & ~F).any() else None
    return SearchState(G, u, G.comm(x, u), M, x, y)


def phi_u(G: GroupContext, u) -> GroupMap:
    """The automorphism fixing C_G(u) pointwise and sending x to xu.

    On the coset x^i C_G(u) (0 <= i < p) it acts as x^i m -> (xu)^i m.
    """
    s = search_state(G, u)
    x, xu = s.x, G.mul(s.x, s.u)
    p = G.p
    xpow = [G.pow(x, i) for i in range(p)]
    xupow = [G.pow(xu, i) for i in range(p)]
    images = []
    for g in G.gens:
        i = next(i for i in range(p) if s.M.mask[G.mul(G.inv(xpow[i]), g)])
        m = G.mul(G.inv(xpow[i]), g)
        images.append(G.mul(xupow[i], m))
    f = GroupMap(G, images)
    if f.order != p:
        raise AssertionError(f"phi_u has order {f.order}")
    return f


# -- quotient-module search ----------------------------------------------------------

@dataclass
class CountingVerdict:
    kind: str             # 'GuaranteedNonInner', 'Boundary', 'NoConclusion'
    t: int
    i: int
    boundary_holds: bool | None = None

    def as_dict(self):
        return dict(self.__dict__)


def counting_check(i: int, G: GroupContext, k: int, H: st.Subgroup | None = None) -> CountingVerdict:
    """Pigeonhole bound for a family of p^i distinct order-p automorphisms
    with values in H <= Z_k(G): with t = log_p |Z_{k+1}/Z|, t < i forces a
    non-inner member; at t = i all-inner implies [Z_{k+1}, G] <= H."""
    up = _series(G)
    Z, Zk1 = _term(up, 1), _term(up, k + 1)
    t = st.log_p(G, Zk1.size // Z.size)
    if t < i:
        return CountingVerdict("GuaranteedNonInner", t, i)
    if t == i:
        holds = None
        if H is not None:
            holds = st.commutator_subgroup(Zk1, st.whole(G)) <= H
        return CountingVerdict("Boundary", t, i, holds)
    return CountingVerdict("NoConclusion", t, i)


@dataclass
class Exhausted:
    count: int                 # derivations in the family
    automorphisms: int         # distinct order-p automorphisms among them
    inner: int
    witnesses: list            # conjugating elements seen (codes)
    counting: CountingVerdict | None
    boundary_subgroup_ok: bool | None

    def as_dict(self):
        return {"count": self.count, "automorphisms": self.automorphisms,
                "inner": self.inner,
                "counting": self.counting.as_dict() if self.counting else None,
                "boundary_subgroup_ok": self.boundary_subgroup_ok}


def quotient_spec(G: GroupContext, name: str) -> st.Subgroup:
    """N for the named quotient: 'gamma3Gp', 'Zc-3' or 'trivial'."""
    if name == "trivial":
        return st.trivial(G)
    if name == "gamma3Gp":
        low = st.lower_central_series(G)
        g3 = low[min(2, len(low) - 1)]
        return st.product(g3, st.agemo(G))
    if name == "Zc-3":
        up = _series(G)
        c = len(up) - 1
        if c - 3 < 0:
            raise PreconditionError("class below 3")
        return up[c - 3]
    raise BadParams(f"unknown quotient {name!r}")


def quotient_module_search(G: GroupContext, N: st.Subgroup, M, *, first_only: bool = True,
                           inner_index: dict | None = None):
    """Derivations G/N -> M, lifted and extended; first non-inner member wins.

    Returns a Certificate, or Exhausted when every member is inner.
    """
    if st.dgen(G) != 2:
        raise NotTwoGenerated(f"d(G) = {st.dgen(G)}")
    if not isinstance(M, dv.Module):
        M = dv.Module(M)
    if not M.is_elementary:
        raise ModuleNotElementary(f"module has exponent {M.exponent}")
    if N.size > 1 and not M.subgroup <= st.center_of(N):
        raise PreconditionMZN("module is not contained in Z(N)")
    Q = None if N.size == 1 else st.quotient(G, N)
    fam = dv.derivation_family(G, Q, M)
    inner_index = inner_lookup(G) if inner_index is None else inner_index
    n_aut = n_inner = 0
    witnesses = []
    p = G.p
    for delta in fam:
        if delta.is_zero:
            continue
        f = dv.to_endomorphism(delta)
        if not f.is_automorphism or f.order != p:
            continue
        n_aut += 1
        key = tuple(f.images[u] for u in G.user_gens)
        w = inner_index.get(key)
        if w is None:
            return certify(f, "family", provenance=dict(kind="derivation", **delta.as_dict()),
                           notes={"family_size": len(fam), "quotient_order": G.order // N.size})
        n_inner += 1
        witnesses.append(w)
    # every member inner: record the counting argument on this instance
    up = _series(G)
    k = next(j for j in range(len(up)) if M.subgroup <= up[j])
    i = st.log_p(G, len(fam)) if len(fam) else 0
    cv = counting_check(i, G, k, M.subgroup) if _term(up, k).is_abelian else None
    ok = cv.boundary_holds if cv is not None and cv.kind == "Boundary" else None
    return Exhausted(len(fam), n_aut, n_inner, witnesses, cv, ok)


# -- the p = 2 construction -------------------------------------------------------

def d8_kernels(G: GroupContext) -> list:
    """Normal subgroups N with G/N dihedral of order 8 (kernels of surjections)."""
    from .catalog import build
    from .homsearch import pc_images, search_images
    D8 = build("dihedral(8)")
    if G.p != 2 or len(G.user_gens) != 2:
        return []
    cands = [np.arange(1, D8.order, dtype=np.int64)] * 2
    seen, out = set(), []
    for hit in search_images(G, D8, cands):
        ims = pc_images(G, D8, hit)
        img = np.zeros(G.order, dtype=np.int64)
        digits = G.digits(np.arange(G.order))
        for kk in range(G.n):
            pw = np.array([D8.pow(ims[kk], e) for e in range(2)], dtype=np.int64)
            img = D8.mul_arr(img, pw[digits[:, kk]])
        mask = img == 0
        key = mask.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(st.Subgroup(G, mask))
    return out


def _admissible_first(G, kernels):
    up = _series(G)
    c = len(up) - 1
    Zc2 = up[max(c - 2, 0)]
    G2 = st.agemo(G)
    good = lambda N: Zc2 <= N and N < G2
    return sorted(kernels, key=lambda N: (not good(N), tuple(N.codes)))


def marco2_construct(G: GroupContext) -> Certificate:
    """Order-2 automorphism from a dihedral quotient G/N of order 8.

    For u in Omega1(Z2) - Z with Omega1(Z2) <= Z(N), generators x, y with
    [u, y] = 1 and z = [x, u] != 1, the map x^i y^j w^k N -> u^j z^k
    (w = [x, y]) is checked on all 64 coset pairs. Pairs whose cosets have
    orders {2, 4} are tried first, then pairs of involutions; only pairs that
    pass the check are used. The derivation is lifted to G
    and extended by g -> g delta(g), it gives the certified automorphism. The
    first non-inner outcome is returned; otherwise the first inner one.
    """
    if G.p != 2:
        raise BadParams("construction is for p = 2")
    if st.dgen(G) != 2:
        raise NotTwoGenerated(f"d(G) = {st.dgen(G)}")
    kernels = d8_kernels(G)
    if not kernels:
        raise NoD8Quotient("no quotient isomorphic to the dihedral group of order 8")
    up = _series(G)
    Z, Z2 = _term(up, 1), _term(up, 2)
    O = st.omega1(Z2)
    us = [int(u) for u in O.codes if not Z.mask[u] and G.order_of(int(u)) == 2]
    failures = []
    first = None
    tally = {}
    for N in _admissible_first(G, kernels):
        ZN = st.center_of(N)
        u_ok = [u for u in us if ZN.mask[u]]
        if not u_ok:
            failures.append(NoSuitableU("no non-central involution of Omega1(Z2) lies in Z(N)"))
            continue
        if not O <= ZN:
            failures.append(ModuleNotInZN("Omega1(Z2) is not contained in Z(N)"))
            continue
        M = dv.Module(O)
        Qc = st.quotient(G, N)
        for u in u_ok:
            for cert in _marco2_attempts(G, N, Qc, M, u, tally):
                if first is None:
                    first = cert
                if not cert.inner:
                    return cert
    if first is not None:
        return first
    if failures:
        # prefer the most specific reason seen
        for cls in (ModuleNotInZN, NoSuitableU):
            for e in failures:
                if isinstance(e, cls):
                    raise e
    raise NoSuitableU("no generator choice satisfies the requirements")


def marco2_delta_table(G, Qc, x, y, u):
    """The coset map x^i y^j w^k -> u^j z^k, as values indexed by Q codes."""
    z = G.comm(x, u)
    w = G.comm(x, y)
    vals = np.full(Qc.Q.order, -1, dtype=np.int64)
    for i, j, k in itertools.product(range(2), repeat=3):
        g = G.mul(G.mul(G.pow(x, i), G.pow(y, j)), G.pow(w, k))
        q = int(Qc.proj[g])
        v = G.mul(G.pow(u, j), G.pow(z, k))
        if vals[q] not in (-1, v):
            raise ValueError("coset formula is not well defined")
        vals[q] = v
    if (vals < 0).any():
        raise ValueError("x^i y^j w^k does not cover G/N")
    return vals


def coset_law_failures(G, Qc, vals) -> list:
    """Pairs (q, r) of cosets violating delta(qr) = delta(q)^r delta(r)."""
    Q, lift = Qc.Q, Qc.lift
    bad = []
    for q in range(Q.order):
        for r in range(Q.order):
            lhs = int(vals[Q.mul(q, r)])
            rhs = G.mul(G.conj(int(vals[q]), int(lift[r])), int(vals[r]))
            if lhs != rhs:
                bad.append((q, r))
    return bad


def _marco2_attempts(G, N, Qc, M, u, tally):
    Cu = st.centralizer(G, [u])
    F = st.product(st.frattini(G), N).mask
    Q = Qc.Q
    reps = Qc.coset_reps          # lowest code of each coset
    xs = [g for g in reps if not Cu.mask[g]]
    ys = [g for g in reps if Cu.mask[g] and not F[g]]
    pairs = list(itertools.product(xs, ys))
    orders = {(x, y): (Qc.order_of(x), Qc.order_of(y)) for x, y in pairs}
    # orders {2, 4} first; with y of order 4, y^2 = w and the law fails at
    # (y, y), so two involutions are the arrangement that can succeed
    for arrangement in ("mixed", "involutions"):
        for x, y in pairs:
            o = orders[(x, y)]
            if (sorted(o) == [2, 4]) != (arrangement == "mixed") or \
                    (arrangement == "involutions" and o != (2, 2)):
                continue
            try:
                vals = marco2_delta_table(G, Qc, x, y, u)
            except ValueError:
                tally[arrangement + "_ill_defined"] = tally.get(arrangement + "_ill_defined", 0) + 1
                continue
            bad = coset_law_failures(G, Qc, vals)
            if bad:
                tally[arrangement + "_law_failures"] = tally.get(arrangement + "_law_failures", 0) + 1
                continue
            src = dv.Source(G, Qc, (x, y))
            d = dv.derivation_from_images(src, M, [int(vals[Qc.proj[x]]), int(vals[Qc.proj[y]])])
            if not np.array_equal(d.values, vals):
                raise AssertionError("generic derivation engine disagrees with the coset formula")
            d = dv.lift_from_quotient(d, M)
            f = dv.to_endomorphism(d)
            if f.order != 2 or not f.is_automorphism:
                raise AssertionError("extension is not an automorphism of order 2")
            Fc = st.frattini(G).codes
            moves_phi = bool((f.table[Fc] != Fc).any())
            yield certify(f, "marco2", provenance=dict(kind="derivation", **d.as_dict()),
                          notes={"u": list(G.exps(u)), "z": list(G.exps(G.comm(x, u))),
                                 "x": list(G.exps(x)), "y": list(G.exps(y)),
                                 "coset_orders": list(o), "N_order": N.size,
                                 "N": [list(G.exps(g)) for g in N.gens],
                                 "centralizes_phi": not moves_phi,
                                 "pairs_checked": Q.order ** 2, "skipped": dict(tally)})


def commutator_square_identities(G: GroupContext, k, x, y) -> dict:
    """[k, x^2] against [k, x]^2 [[k, x], x], and likewise for y.

    For an inner witness k of the dihedral-quotient map, [x, k] = 1 and
    [y, k] = u force both right-hand sides to be trivial, so a nontrivial
    left-hand side is a contradiction.
    """
    k, x, y = (st.as_code(G, a) for a in (k, x, y))
    out = {}
    for name, g in (("x", x), ("y", y)):
        lhs = G.comm(k, G.mul(g, g))
        c = G.comm(k, g)
        rhs = G.mul(G.mul(c, c), G.comm(c, g))
        out[name] = {"lhs": lhs, "rhs": rhs, "identity": lhs == rhs,
                     "contradiction": lhs != 0 and rhs == 0}
    return out


# -- abelian groups ------------------------------------------------------------------

def abelian_order_p(G: GroupContext) -> Certificate:
    """g -> g h(g), where h(g) = w^{f(g)}, f a coordinate of G/Phi and w of order p in ker f."""
    coords = G.frattini_coords
    d = len(G.user_gens)
    f = (coords // G.p ** (d - 1)) % G.p            # first coordinate
    O = st.omega1(st.whole(G))
    w = next(int(x) for x in O.codes if x and f[x] == 0)
    M = dv.module(G, [w])
    images = [G.pow(w, int(f[G.gen(u)])) for u in G.user_gens]
    delta = dv.derivation_from_images(G, M, images)
    phi = dv.to_endomorphism(delta)
    return certify(phi, "abelian", provenance=dict(kind="derivation", **delta.as_dict()))


# -- driver --------------------------------------------------------------------------

@dataclass
class DriverLog:
    steps: list = field(default_factory=list)

    def add(self, step, outcome):
        self.steps.append({"step": step, "outcome": outcome})


def _phi_u_step(G, log, harvest):
    for u in u_candidates(G):
        try:
            f = phi_u(G, u)
        except (PreconditionError, RelationViolated) as e:
            log.add("phi-u", f"u={G.exps(u)}: {type(e).__name__}")
            continue
        cert = certify(f, "phi-u", provenance={"kind": "phi_u", "u": list(G.exps(u))})
        if not cert.inner:
            return cert
        harvest.append(G.code(cert.witness))
        log.add("phi-u", f"u={G.exps(u)}: inner")
    return None


def _family_modules(G, harvest):
    up = _series(G)
    Z2 = _term(up, 2)
    mods = [("Omega1(Z2)", st.omega1(Z2))]
    Z3 = _term(up, 3)
    for label, ws in (("Omega1(<Z2,t>)", harvest),):
        for w in ws:
            if Z3.mask[w] and not Z2.mask[w]:
                H = st.omega1(st.closure(G, list(Z2.gens) + [w]))
                if all(H != m for _, m in mods):
                    mods.append((label, H))
    return mods


def _family_step(G, log, harvest, inner_index):
    if st.dgen(G) != 2:
        log.add("family", "skipped: not two-generated")
        return None
    tried = set()
    rounds = 0
    while rounds < 3:
        rounds += 1
        grew = False
        for qname in ("gamma3Gp", "Zc-3", "trivial"):
            try:
                N = quotient_spec(G, qname)
            except PreconditionError:
                continue
            for label, H in _family_modules(G, harvest):
                key = (N.mask.tobytes(), H.mask.tobytes())
                if key in tried:
                    continue
                tried.add(key)
                try:
                    res = quotient_module_search(G, N, H, inner_index=inner_index)
                except (PreconditionError, ValueError) as e:
                    log.add("family", f"N={qname} M={label}: {type(e).__name__}")
                    continue
                except dv.TargetNotAbelian:
                    continue
                if isinstance(res, Certificate):
                    res.notes.update({"quotient": qname, "module": label})
                    return res
                log.add("family", f"N={qname} M={label}: exhausted ({res.count} derivations)")
                before = len(harvest)
                harvest.extend(w for w in res.witnesses if w not in harvest)
                grew = grew or len(harvest) > before
        if not grew:
            break
    return None


def find_noninner_order_p(G: GroupContext, *, strategy: str = "auto",
                          oracle_limit: int = oracle.DEFAULT_LIMIT,
                          with_report: bool = True) -> Certificate:
    """Strategy ladder; the first non-inner certificate wins."""
    if strategy not in STRATEGIES:
        raise BadParams(f"unknown strategy {strategy!r}")
    if G.order < G.p ** 2:
        raise TooSmall("|G| < p^2")
    log = DriverLog()
    report = reduction_report(G).as_dict() if with_report else None

    def done(cert):
        cert.hypotheses = report
        cert.notes.setdefault("log", log.steps)
        return cert

    if strategy == "auto" and st.whole(G).is_abelian:
        return done(abelian_order_p(G))
    if report is not None and strategy == "auto":
        applicable = [k for k in ("i", "ii", "iii", "iv", "v") if report[k] == "holds"]
        log.add("reductions", applicable or "none")
    harvest = []
    if strategy in ("auto", "phi-u"):
        cert = _phi_u_step(G, log, harvest)
        if cert:
            return done(cert)
    if strategy in ("auto", "family"):
        index = inner_lookup(G) if G.has_table else None
        cert = _family_step(G, log, harvest, index)
        if cert:
            return done(cert)
    if strategy in ("auto", "marco2") and G.p == 2:
        try:
            cert = marco2_construct(G)
            if not cert.inner:
                return done(cert)
            log.add("marco2", "inner")
        except PreconditionError as e:
            log.add("marco2", type(e).__name__)
    if strategy in ("auto", "oracle"):
        if not oracle.feasible(G, oracle_limit):
            raise OracleInfeasible("constructions exhausted and the oracle is above its limit")
        res = oracle.noninner_bruteforce(G, oracle_limit)
        if not res.exists:
            raise CounterexampleAlarm("exhaustive search found no non-inner automorphism of order p")
        return done(certify(res.example, "oracle", notes={"aut_order": res.aut_order}))
    raise PreconditionError(f"strategy {strategy!r} produced no non-inner certificate")
