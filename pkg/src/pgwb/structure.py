"""Subgroups, quotients, central series and structural predicates.

Subgroups are explicit boolean masks over the element codes of a context;
every predicate below is a scan. That is affordable for the desk-scale groups
this package targets and keeps each answer easy to audit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NotMaximalClass, NotNormal, RegularityUndecided
from .pc import Element, GroupContext, make_presentation

REGULARITY_LIMIT = 5 ** 4


def as_code(ctx: GroupContext, x) -> int:
    if isinstance(x, Element):
        if x.ctx is not ctx:
            from .errors import ContextMismatch
            raise ContextMismatch("element belongs to a different group")
        return x.code
    if isinstance(x, (tuple, list)):
        return ctx.code(x)
    return int(x)


def as_codes(ctx: GroupContext, xs) -> list:
    if isinstance(xs, Subgroup):
        return list(xs.gens)
    return [as_code(ctx, x) for x in xs]


class Subgroup:
    """An explicit subgroup of a context, stored as a membership mask."""

    def __init__(self, ctx: GroupContext, mask, gens=None):
        mask = np.asarray(mask, dtype=bool)
        mask.setflags(write=False)
        self.ctx = ctx
        self.mask = mask
        self._gens = None if gens is None else [int(g) for g in gens]

    # -- basic protocol -----------------------------------------------------
    @cached_property
    def codes(self):
        c = np.nonzero(self.mask)[0].astype(np.int64)
        c.setflags(write=False)
        return c

    @property
    def size(self) -> int:
        return int(self.codes.size)

    def __len__(self):
        return self.size

    @property
    def order_log(self) -> int:
        k, s = 0, self.size
        while s > 1:
            s //= self.ctx.p
            k += 1
        return k

    def __contains__(self, x):
        return bool(self.mask[as_code(self.ctx, x)])

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.ctx is other.ctx and bool(np.array_equal(self.mask, other.mask))

    def __hash__(self):
        return hash((id(self.ctx), self.mask.tobytes()))

    def __le__(self, other: "Subgroup"):
        return bool(np.all(other.mask[self.codes]))

    def __lt__(self, other: "Subgroup"):
        return self <= other and self.size < other.size

    def __repr__(self):
        return f"<Subgroup of order {self.size} in {self.ctx!r}>"

    def elements(self) -> list:
        return [Element(self.ctx, c) for c in self.codes]

    @property
    def gens(self) -> list:
        if self._gens is None:
            # greedy: repeatedly adjoin the lowest element not yet generated
            ctx, chosen = self.ctx, []
            cur = np.zeros(ctx.order, dtype=bool)
            cur[0] = True
            while not np.array_equal(cur, self.mask):
                x = int(self.codes[np.argmax(~cur[self.codes])])
                chosen.append(x)
                cur = ctx.closure_mask(chosen)
            self._gens = chosen
        return list(self._gens)

    # -- lazily computed flags -----------------------------------------------
    @cached_property
    def is_normal(self) -> bool:
        ctx = self.ctx
        g = np.array(self.gens, dtype=np.int64)
        if g.size == 0:
            return True
        return all(self.mask[ctx.conj_arr(g, x)].all() for x in ctx.gens)

    @cached_property
    def is_abelian(self) -> bool:
        g = np.array(self.gens, dtype=np.int64)
        if g.size == 0:
            return True
        c = self.ctx.comm_arr(g[:, None], g[None, :])
        return bool(np.all(c == 0))

    @cached_property
    def exponent(self) -> int:
        return int(self.ctx.orders[self.codes].max())

    @cached_property
    def is_elementary_abelian(self) -> bool:
        return self.is_abelian and self.exponent <= self.ctx.p

    @cached_property
    def is_cyclic(self) -> bool:
        return self.exponent == self.size

    def as_dict(self):
        return {"order": self.size, "gens": [list(self.ctx.exps(g)) for g in self.gens]}


def whole(G: GroupContext) -> Subgroup:
    return Subgroup(G, np.ones(G.order, dtype=bool), [G.gen(i) for i in range(G.n)])


def trivial(G: GroupContext) -> Subgroup:
    m = np.zeros(G.order, dtype=bool)
    m[0] = True
    return Subgroup(G, m, [])


def closure(G: GroupContext, gens) -> Subgroup:
    """The subgroup generated by ``gens`` (breadth-first closure)."""
    codes = [c for c in as_codes(G, gens) if c != 0]
    return Subgroup(G, G.closure_mask(codes), codes)


def normal_closure(G: GroupContext, gens) -> Subgroup:
    codes = [c for c in as_codes(G, gens) if c != 0]
    return Subgroup(G, G.normal_closure_mask(codes))


def subgroup_from_mask(G: GroupContext, mask) -> Subgroup:
    return Subgroup(G, mask)


def product(A: Subgroup, B: Subgroup) -> Subgroup:
    """The subgroup generated by A and B."""
    return closure(A.ctx, list(A.gens) + list(B.gens))


def intersection(A: Subgroup, B: Subgroup) -> Subgroup:
    return Subgroup(A.ctx, A.mask & B.mask)


def _closure_under(G, seeds, over):
    """Normal closure of ``seeds`` inside the subgroup generated by ``over``."""
    seeds = [int(s) for s in seeds if int(s) != 0]
    mask = G.closure_mask(seeds)
    over = np.array([int(x) for x in over], dtype=np.int64)
    while True:
        elems = np.nonzero(mask)[0]
        if over.size == 0:
            return mask
        conj = G.conj_arr(elems[:, None], over[None, :]).ravel()
        if mask[conj].all():
            return mask
        mask = G.closure_mask(np.concatenate([elems, conj[~mask[conj]]]))


def commutator_subgroup(A: Subgroup, B: Subgroup) -> Subgroup:
    """[A, B], the normal closure in <A, B> of commutators of generators."""
    G = A.ctx
    ga = np.array(A.gens, dtype=np.int64)
    gb = np.array(B.gens, dtype=np.int64)
    if ga.size == 0 or gb.size == 0:
        return trivial(G)
    seeds = np.unique(G.comm_arr(ga[:, None], gb[None, :]))
    return Subgroup(G, _closure_under(G, seeds, list(ga) + list(gb)))


def derived_subgroup(H: Subgroup) -> Subgroup:
    return commutator_subgroup(H, H)


def centralizer(G: GroupContext, S, within: Subgroup | None = None) -> Subgroup:
    """{g : [g, s] = 1 for all s in S}, optionally intersected with ``within``."""
    codes = as_codes(G, S)
    allx = np.arange(G.order, dtype=np.int64)
    mask = np.ones(G.order, dtype=bool) if within is None else within.mask.copy()
    for s in codes:
        mask &= G.comm_arr(allx, s) == 0
    return Subgroup(G, mask)


def center(G: GroupContext) -> Subgroup:
    return centralizer(G, G.gens)


def center_of(H: Subgroup) -> Subgroup:
    return centralizer(H.ctx, H.gens, within=H)


def upper_central_series(G: GroupContext) -> list:
    """[Z_0, Z_1, ..., Z_c = G]."""
    allx = np.arange(G.order, dtype=np.int64)
    series = [trivial(G)]
    while series[-1].size < G.order:
        prev = series[-1].mask
        mask = np.ones(G.order, dtype=bool)
        for g in G.gens:
            mask &= prev[G.comm_arr(allx, g)]
        if mask.sum() == prev.sum():
            raise RuntimeError("upper central series stalled; group is not nilpotent")
        series.append(Subgroup(G, mask))
    return series


def lower_central_series(G: GroupContext) -> list:
    """[gamma_1 = G, gamma_2, ..., 1]."""
    W = whole(G)
    series = [W]
    while series[-1].size > 1:
        nxt = commutator_subgroup(series[-1], W)
        if nxt.size == series[-1].size:
            raise RuntimeError("lower central series stalled; group is not nilpotent")
        series.append(nxt)
    return series


def frattini(G: GroupContext) -> Subgroup:
    return Subgroup(G, G.frattini_mask)


def agemo(H, k: int = 1) -> Subgroup:
    """The subgroup generated by all p^k-th powers of elements of H."""
    if isinstance(H, GroupContext):
        H = whole(H)
    G = H.ctx
    pw = np.unique(G.pow_arr(H.codes, G.p ** k))
    return closure(G, [int(x) for x in pw if x])


def omega1(H) -> Subgroup:
    """Closure of the elements of order dividing p in H."""
    if isinstance(H, GroupContext):
        H = whole(H)
    G = H.ctx
    small = H.codes[G.orders[H.codes] <= G.p]
    return closure(G, [int(x) for x in small if x])


def frattini_of(H: Subgroup) -> Subgroup:
    """Phi(H) = H^p [H, H]."""
    G = H.ctx
    seeds = list(agemo(H).gens) + list(derived_subgroup(H).gens)
    return Subgroup(G, _closure_under(G, seeds, H.gens))


def log_p(G: GroupContext, size: int) -> int:
    k = 0
    while size > 1:
        size //= G.p
        k += 1
    return k


def rank_of_quotient(A: Subgroup, B: Subgroup | None = None) -> int:
    """d(A/B) = log_p [A : Phi(A) B] for B normal in A."""
    G = A.ctx
    F = frattini_of(A)
    if B is not None:
        F = product(F, B)
    return log_p(G, A.size // F.size)


def dgen(G: GroupContext) -> int:
    return G.n - log_p(G, int(G.frattini_mask.sum()))


# -- quotients ---------------------------------------------------------------

class QuotientContext:
    """G/N with an induced pc presentation.

    ``proj[x]`` is the code in ``Q`` of the coset of x, ``lift[q]`` the
    normal-form product representing q, and ``canonical(x)`` the smallest code
    in the coset of x.
    """

    def __init__(self, G: GroupContext, N: Subgroup):
        if not N.is_normal:
            raise NotNormal("subgroup is not normal")
        self.parent = G
        self.normal_subgroup = N
        p, n = G.p, G.n
        ngens = [int(g) for g in N.gens]
        # induced pc sequence: g_i with G_i N != G_{i+1} N
        sizes = []
        for i in range(n + 1):
            tail = [G.gen(k) for k in range(i, n)]
            sizes.append(int(G.closure_mask(tail + ngens).sum()))
        chosen = [i for i in range(n) if sizes[i] != sizes[i + 1]]
        self.chosen = tuple(chosen)
        m = len(chosen)
        Qn = p ** m
        lift = np.zeros(Qn, dtype=np.int64)
        for q in range(1, Qn):
            # q = q' * h_k with k the last nonzero digit
            k = m - 1
            while (q // p ** (m - 1 - k)) % p == 0:
                k -= 1
            lift[q] = G.mul(int(lift[q - p ** (m - 1 - k)]), G.gen(chosen[k]))
        proj = np.full(G.order, -1, dtype=np.int64)
        Ncodes = N.codes
        for q in range(Qn):
            proj[G.mul_arr(lift[q], Ncodes)] = q
        assert (proj >= 0).all()
        canon = np.full(Qn, G.order, dtype=np.int64)
        np.minimum.at(canon, proj, np.arange(G.order, dtype=np.int64))
        self.proj, self.lift, self._canon = proj, lift, canon
        for a in (proj, lift, canon):
            a.setflags(write=False)
        exps = lambda x: [(int(proj[x]) // p ** (m - 1 - k)) % p for k in range(m)]
        powers = {k: exps(G.pow(G.gen(chosen[k]), p)) for k in range(m)}
        comms = {(j, k): exps(G.comm(G.gen(chosen[j]), G.gen(chosen[k])))
                 for j in range(m) for k in range(j)}
        self.presentation = make_presentation(p, m, powers, comms) if m else None
        self.Q = GroupContext(self.presentation) if m else _trivial_context(p)
        self._check_homomorphism()

    def _check_homomorphism(self):
        G, Q = self.parent, self.Q
        allx = np.arange(G.order, dtype=np.int64)
        for g in G.gens:
            lhs = self.proj[G.mul_arr(allx, g)]
            rhs = Q.mul_arr(self.proj, int(self.proj[g]))
            if not np.array_equal(lhs, rhs):
                raise AssertionError("induced presentation does not match coset arithmetic")

    @property
    def order(self) -> int:
        return self.parent.order // self.normal_subgroup.size

    def canonical(self, x) -> int:
        return int(self._canon[self.proj[as_code(self.parent, x)]])

    @property
    def coset_reps(self) -> list:
        return sorted(int(c) for c in self._canon)

    def multiply(self, a, b) -> int:
        G = self.parent
        return self.canonical(G.mul(as_code(G, a), as_code(G, b)))

    def commutator(self, a, b) -> int:
        G = self.parent
        return self.canonical(G.comm(as_code(G, a), as_code(G, b)))

    def order_of(self, a) -> int:
        return self.Q.order_of(int(self.proj[as_code(self.parent, a)]))

    def preimage(self, S: Subgroup) -> Subgroup:
        """Full preimage in G of a subgroup of Q."""
        return Subgroup(self.parent, S.mask[self.proj])

    def image(self, H: Subgroup) -> Subgroup:
        mask = np.zeros(self.Q.order, dtype=bool)
        mask[self.proj[H.codes]] = True
        return Subgroup(self.Q, mask)

    def isomorphism_to(self, target: GroupContext):
        """User-generator images in Q of a surjective map target -> Q, or None."""
        return find_isomorphism(target, self.Q)


def _trivial_context(p):
    return GroupContext(make_presentation(p, 1, {}, {}), name="trivial-placeholder")


def quotient(G: GroupContext, N: Subgroup) -> QuotientContext:
    return QuotientContext(G, N)


def find_isomorphism(source: GroupContext, target: GroupContext):
    """Images in ``target`` of the user generators of ``source`` defining an
    isomorphism, found by generator-image backtracking, or None."""
    from .homsearch import search_images
    if source.order != target.order or source.p != target.p:
        return None
    if len(source.user_gens) != len(target.user_gens):
        return None
    so, to = source.orders, target.orders
    cands = [np.nonzero(to == so[source.gen(u)])[0] for u in source.user_gens]
    hits = search_images(source, target, cands)
    return hits[0] if hits else None


def is_isomorphic(A: GroupContext, B: GroupContext) -> bool:
    return find_isomorphism(A, B) is not None


# -- predicates ----------------------------------------------------------------

def nilpotency_class(G: GroupContext) -> int:
    return len(upper_central_series(G)) - 1


def is_maximal_class(G: GroupContext) -> bool:
    return G.n >= 2 and nilpotency_class(G) == G.n - 1


def is_powerful(G: GroupContext) -> bool:
    gamma2 = derived_subgroup(whole(G))
    k = 2 if G.p == 2 else 1
    return gamma2 <= agemo(G, k)


def is_extraspecial(G: GroupContext) -> bool:
    Z = center(G)
    return Z.size == G.p and Z == derived_subgroup(whole(G)) and Z == frattini(G)


def is_strongly_frattinian(G: GroupContext) -> bool:
    """C_G(Phi(G)) = Z(Phi(G))."""
    F = frattini(G)
    return centralizer(G, F) == center_of(F)


def regularity_shortcut(G: GroupContext):
    """(verdict, reason) when a cheap sufficient criterion applies, else None."""
    W = whole(G)
    if G.p == 2:
        return W.is_abelian, "p = 2: regular iff abelian"
    if W.exponent <= G.p:
        return True, "exponent p"
    if nilpotency_class(G) < G.p:
        return True, "class < p"
    return None


def regularity_pairwise(G: GroupContext):
    """Check (ab)^p in a^p b^p agemo(<a,b>') for all pairs a, b.

    Returns (True, None) or (False, (a, b)). Pairs whose defect is trivial
    need no subgroup computation; the rest are tested against the agemo of
    the derived subgroup of <a, b>, with a cache keyed by that subgroup.
    """
    p = G.p
    allx = np.arange(G.order, dtype=np.int64)
    P = G.pow_arr(allx, p)
    inv = G.inverses
    gamma_agemo = agemo(derived_subgroup(whole(G)))
    cache = {}
    for a in range(G.order):
        ab_p = G.pow_arr(G.mul_arr(a, allx), p)
        defect = G.mul_arr(G.mul_arr(inv[P], inv[P[a]]), ab_p)   # (a^p b^p)^-1 (ab)^p
        bad = np.nonzero(defect != 0)[0]
        if bad.size and not gamma_agemo.mask[defect[bad]].all():
            b = int(bad[np.argmin(gamma_agemo.mask[defect[bad]])])
            return False, (a, b)
        for b in bad:
            H = G.closure_mask([a, int(b)])
            key = H.tobytes()
            if key not in cache:
                S = Subgroup(G, H)
                cache[key] = agemo(derived_subgroup(S)).mask
            if not cache[key][defect[b]]:
                return False, (a, int(b))
    return True, None


def is_regular(G: GroupContext, limit: int = REGULARITY_LIMIT) -> bool:
    sc = regularity_shortcut(G)
    if sc is not None:
        return sc[0]
    if G.order > limit:
        raise RegularityUndecided(f"no shortcut applies and |G| = {G.order} > {limit}")
    return regularity_pairwise(G)[0]


def maximal_class_2_type(G: GroupContext) -> str:
    """'dihedral', 'quaternion', 'semidihedral' or 'none'."""
    if G.p != 2 or G.n < 3 or not is_maximal_class(G):
        return "none"
    orders = G.orders
    if int(orders.max()) != G.order // 2:
        return "none"
    inv_count = int((orders == 2).sum())
    if inv_count == 1:
        return "quaternion"
    if inv_count == G.order // 2 + 1:
        return "dihedral"
    if inv_count == G.order // 4 + 1:
        return "semidihedral"
    return "none"


@dataclass(frozen=True)
class StructureFlags:
    is_abelian: bool
    is_elementary_abelian: bool
    is_cyclic: bool
    exponent: int
    is_powerful: bool
    is_extraspecial: bool
    is_strongly_frattinian: bool
    is_regular: bool | None        # None: undecided
    maximal_class_2_type: str

    def as_dict(self):
        return dict(self.__dict__)


def classify(G: GroupContext) -> StructureFlags:
    W = whole(G)
    try:
        reg = is_regular(G)
    except RegularityUndecided:
        reg = None
    return StructureFlags(
        is_abelian=W.is_abelian,
        is_elementary_abelian=W.is_elementary_abelian,
        is_cyclic=W.is_cyclic,
        exponent=W.exponent,
        is_powerful=is_powerful(G),
        is_extraspecial=is_extraspecial(G),
        is_strongly_frattinian=is_strongly_frattinian(G),
        is_regular=reg,
        maximal_class_2_type=maximal_class_2_type(G),
    )


@dataclass(frozen=True)
class SeriesReport:
    upper: list
    lower: list
    cls: int
    coclass: int
    dG: int
    exponent: int
    order_log: int

    @property
    def upper_sizes(self):
        return [s.size for s in self.upper]

    @property
    def lower_sizes(self):
        return [s.size for s in self.lower]

    def as_dict(self):
        return {"upper_sizes": self.upper_sizes, "lower_sizes": self.lower_sizes,
                "class": self.cls, "coclass": self.coclass, "d": self.dG,
                "exponent": self.exponent}


def series_report(G: GroupContext) -> SeriesReport:
    up = upper_central_series(G)
    low = lower_central_series(G)
    c = len(up) - 1
    if len(low) - 1 != c:
        raise AssertionError("upper and lower central series disagree on the class")
    return SeriesReport(up, low, c, G.n - c, dgen(G), whole(G).exponent, G.n)


# -- maximal class: two-step centralizers ---------------------------------------

def two_step_centralizers(G: GroupContext) -> list:
    """C_G(G_i/G_{i+2}) for 2 <= i <= n-2, with G_i the lower central series."""
    if not is_maximal_class(G):
        raise NotMaximalClass("group is not of maximal class")
    low = lower_central_series(G)      # low[i-1] = G_i
    n = G.n
    allx = np.arange(G.order, dtype=np.int64)
    out = []
    for i in range(2, n - 1):
        Gi, Gi2 = low[i - 1], low[i + 1]
        mask = np.ones(G.order, dtype=bool)
        for a in Gi.codes:
            mask &= Gi2.mask[G.comm_arr(allx, int(a))]
        out.append(Subgroup(G, mask))
    return out


def find_uniform(G: GroupContext):
    """Lowest element outside every two-step centralizer, or None.

    With an empty index range every non-central element counts as uniform.
    """
    cents = two_step_centralizers(G)
    bad = center(G).mask.copy() if not cents else np.zeros(G.order, dtype=bool)
    for C in cents:
        bad |= C.mask
    free = np.nonzero(~bad)[0]
    return Element(G, int(free[0])) if free.size else None
