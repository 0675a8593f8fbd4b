"""Brute-force ground truth: automorphism enumeration and pointwise cocycle checks.

Nothing here calls the derivation engine, so agreement with it is a genuine
cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from . import structure as st
from .errors import LimitExceeded, TooLarge
from .homsearch import pc_images, search_images
from .morphisms import GroupMap
from .pc import GroupContext

DEFAULT_LIMIT = 2 ** 24
PAIR_LIMIT = 2 ** 20


def feasible(G: GroupContext, limit: int = DEFAULT_LIMIT) -> bool:
    return G.has_table and G.order ** st.dgen(G) <= limit


@dataclass
class AutEnumeration:
    group: GroupContext
    user_images: list                   # one tuple per automorphism, lexicographic
    inner_keys: frozenset = field(default_factory=frozenset)

    def __len__(self):
        return len(self.user_images)

    @cached_property
    def automorphisms(self) -> list:
        G = self.group
        return [GroupMap(G, pc_images(G, G, u), check=False) for u in self.user_images]

    @cached_property
    def pc_image_array(self):
        """(|Aut|, n) array of pc-generator images."""
        return _pc_images_arr(self.group, np.array(self.user_images, dtype=np.int64)
                              .reshape(len(self.user_images), len(self.group.user_gens)))

    @cached_property
    def orders(self) -> list:
        return [int(o) for o in _orders_arr(self.group, self.pc_image_array)]

    def counts_by_order(self) -> dict:
        out = {}
        for o in self.orders:
            out[o] = out.get(o, 0) + 1
        return dict(sorted(out.items()))

    def is_inner(self, user_images) -> bool:
        return tuple(int(x) for x in user_images) in self.inner_keys

    @property
    def inner_count(self) -> int:
        return len(self.inner_keys)

    def inner(self) -> list:
        return [f for f, u in zip(self.automorphisms, self.user_images) if u in self.inner_keys]


def _pc_images_arr(G: GroupContext, U):
    """Vectorized pc_images: U is (m, d) user images, result (m, n)."""
    m = U.shape[0]
    slots = np.zeros((m, G.n), dtype=np.int64)
    for k, u in enumerate(G.user_gens):
        slots[:, u] = U[:, k]
    out = np.zeros((m, G.n), dtype=np.int64)
    inv = G.inverses
    for i in range(G.n):
        acc = np.zeros(m, dtype=np.int64)
        for j, e in G.def_words[i].factors:
            g = slots[:, j] if e > 0 else inv[slots[:, j]]
            for _ in range(abs(e)):
                acc = G.mul_arr(acc, g)
        out[:, i] = acc
    return out


def _apply_arr(G: GroupContext, P, A):
    """Row-wise image of the codes A under the maps with pc images P."""
    digits = G.digits(A)
    acc = np.zeros(A.shape[0], dtype=np.int64)
    for k in range(G.n):
        d = digits[:, k]
        for e in range(G.p - 1):
            acc = np.where(d > e, G.mul_arr(acc, P[:, k]), acc)
    return acc


def _orders_arr(G: GroupContext, P):
    m = P.shape[0]
    user = [G.gen(u) for u in G.user_gens]
    cur = [np.full(m, x, dtype=np.int64) for x in user]
    order = np.zeros(m, dtype=np.int64)
    k = 0
    while (order == 0).any():
        k += 1
        cur = [_apply_arr(G, P, c) for c in cur]
        back = np.all([c == x for c, x in zip(cur, user)], axis=0)
        order[(order == 0) & back] = k
    return order


def inner_user_images(G: GroupContext) -> frozenset:
    """User-generator image tuples of all inner automorphisms."""
    allx = np.arange(G.order, dtype=np.int64)
    cols = [G.conj_arr(G.gen(u), allx) for u in G.user_gens]
    return frozenset(tuple(int(c[t]) for c in cols) for t in range(G.order))


def brute_force_automorphisms(G: GroupContext, limit: int = DEFAULT_LIMIT) -> AutEnumeration:
    """Every automorphism, from images of the user generators.

    Candidates are filtered by element order; tuples dependent modulo Phi(G)
    are pruned inside the search. Each hit is then confirmed to be a bijection.
    """
    if not feasible(G, limit):
        raise LimitExceeded(f"|G|^d = {G.order}^{st.dgen(G)} exceeds {limit}")
    orders = G.orders
    cands = [np.nonzero(orders == orders[G.gen(u)])[0] for u in G.user_gens]
    hits = search_images(G, G, cands)
    if hits and not _span_full(G, np.array(hits, dtype=np.int64)).all():
        raise AssertionError("search returned a non-surjective map")
    return AutEnumeration(G, [tuple(h) for h in hits], inner_user_images(G))


def _span_full(G: GroupContext, U):
    """Whether each row of images spans G/Phi(G); by the basis theorem this
    is equivalent to generating G, hence to bijectivity."""
    p, d = G.p, U.shape[1]
    coords = G.frattini_coords[U]                        # (m, d) base-p vectors
    place = np.array([p ** (d - 1 - k) for k in range(d)], dtype=np.int64)
    digits = (coords[:, :, None] // place[None, None, :]) % p    # (m, d, d)
    seen = np.zeros((U.shape[0], p ** d), dtype=bool)
    for combo in np.ndindex(*([p] * d)):
        c = np.array(combo, dtype=np.int64)
        v = (np.einsum("k,mkj->mj", c, digits) % p) @ place
        seen[np.arange(U.shape[0]), v] = True
    return seen.all(axis=1)


@dataclass(frozen=True)
class NonInnerResult:
    exists: bool
    example: GroupMap | None
    count: int            # non-inner automorphisms of order p
    aut_order: int
    inner_order: int


def noninner_bruteforce(G: GroupContext, limit: int = DEFAULT_LIMIT) -> NonInnerResult:
    A = brute_force_automorphisms(G, limit)
    keep = [k for k, u in enumerate(A.user_images) if u not in A.inner_keys]
    U = np.array([A.user_images[k] for k in keep], dtype=np.int64).reshape(
        len(keep), len(G.user_gens))
    P = _pc_images_arr(G, U)
    user = [G.gen(u) for u in G.user_gens]
    cur = [np.full(len(keep), x, dtype=np.int64) for x in user]
    for _ in range(G.p):
        cur = [_apply_arr(G, P, c) for c in cur]
    order_p = np.all([c == x for c, x in zip(cur, user)], axis=0)   # phi^p = 1, phi != 1
    idx = np.nonzero(order_p)[0]
    example = GroupMap(G, P[idx[0]], check=False) if idx.size else None
    return NonInnerResult(bool(idx.size), example, int(idx.size), len(A), A.inner_count)


@dataclass(frozen=True)
class CocycleCheck:
    ok: bool
    witness: tuple | None = None      # failing pair (codes in the source)

    def __bool__(self):
        return self.ok


def pointwise_derivation_check(G: GroupContext, values, quotient=None) -> CocycleCheck:
    """Check delta(gh) = delta(g)^h delta(h) on every pair of the source.

    ``values`` is indexed by codes of G, or of ``quotient.Q`` when given, in
    which case the action is through the coset representatives.
    """
    if quotient is None:
        S, lift = G, np.arange(G.order, dtype=np.int64)
    else:
        S, lift = quotient.Q, np.asarray(quotient.lift, dtype=np.int64)
    if S.order ** 2 > PAIR_LIMIT or not G.has_table:
        raise TooLarge(f"{S.order}^2 pairs exceed {PAIR_LIMIT}")
    values = np.ascontiguousarray(values, dtype=np.int64)
    bad = kernels.cocycle_check(np.ascontiguousarray(S.table), np.ascontiguousarray(G.table),
                                np.ascontiguousarray(G.inverses), values,
                                np.ascontiguousarray(lift))
    if bad is None:
        return CocycleCheck(True)
    return CocycleCheck(False, (int(bad[0]), int(bad[1])))
