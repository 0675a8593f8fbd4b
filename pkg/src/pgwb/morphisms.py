"""Endomorphisms and automorphisms given by images of the pc generators."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import structure as st
from .errors import ContextMismatch, RelationViolated
from .pc import Element, GroupContext


@dataclass(frozen=True)
class InnerVerdict:
    inner: bool
    witness: int | None      # code of the lowest conjugating element, if inner
    scanned: int             # transversal elements examined

    def as_dict(self, ctx: GroupContext):
        if self.inner:
            return {"inner": True, "witness": list(ctx.exps(self.witness)),
                    "scanned": self.scanned}
        return {"inner": False, "witness": None, "scanned": self.scanned}


def relation_defects(G: GroupContext, images) -> list:
    """Relators (as text) not preserved by the assignment gen i -> images[i]."""
    pres = G.presentation
    out = []
    for i in range(G.n):
        if G.pow(images[i], G.p) != G.eval_word(pres.power_rhs[i], images):
            out.append(f"power {i + 1}")
    for i in range(G.n):
        for j in range(i + 1, G.n):
            w = pres.comm_rhs.get((j, i))
            rhs = G.eval_word(w, images) if w is not None else 0
            if G.comm(images[j], images[i]) != rhs:
                out.append(f"comm {j + 1} {i + 1}")
    return out


class GroupMap:
    """A relation-respecting map G -> G determined by pc-generator images."""

    def __init__(self, ctx: GroupContext, images, *, check: bool = True):
        self.ctx = ctx
        self.images = tuple(int(x) for x in images)
        if len(self.images) != ctx.n:
            raise ValueError(f"need {ctx.n} images, got {len(self.images)}")
        if check:
            bad = relation_defects(ctx, self.images)
            if bad:
                raise RelationViolated(bad[0])

    def __repr__(self):
        ims = ", ".join(str(self.ctx.exps(x)) for x in self.images)
        return f"<GroupMap {self.kind}: {ims}>"

    def __eq__(self, other):
        return isinstance(other, GroupMap) and other.ctx is self.ctx \
            and other.images == self.images

    def __hash__(self):
        return hash((id(self.ctx), self.images))

    @cached_property
    def table(self):
        """Image of every element code."""
        G = self.ctx
        img = np.zeros(G.order, dtype=np.int64)
        allx = np.arange(G.order, dtype=np.int64)
        digits = G.digits(allx)
        for k in range(G.n):
            pw = np.array([G.pow(self.images[k], e) for e in range(G.p)], dtype=np.int64)
            img = G.mul_arr(img, pw[digits[:, k]])
        img.setflags(write=False)
        return img

    @cached_property
    def kind(self) -> str:
        bij = bool(self.ctx.closure_mask(self.images).all())
        return "automorphism" if bij else "endomorphism"

    @property
    def is_automorphism(self) -> bool:
        return self.kind == "automorphism"

    @cached_property
    def order(self) -> int:
        return map_order(self)

    @cached_property
    def inner(self) -> InnerVerdict:
        return is_inner(self)

    def __call__(self, a):
        return apply(self, a)

    def image_exps(self):
        return [list(self.ctx.exps(x)) for x in self.images]

    def as_dict(self):
        return {"images": self.image_exps(), "order": self.order,
                "kind": self.kind, "inner": self.inner.as_dict(self.ctx)}


def map_from_images(G: GroupContext, images) -> GroupMap:
    return GroupMap(G, [st.as_code(G, x) for x in images])


def map_from_user_images(G: GroupContext, user_images) -> GroupMap:
    """Map given on the user generators; pc tail follows from definition words."""
    return GroupMap(G, G.images_from_user([st.as_code(G, x) for x in user_images]))


def identity_map(G: GroupContext) -> GroupMap:
    return GroupMap(G, G.gens, check=False)


def conjugation_map(G: GroupContext, t) -> GroupMap:
    """x -> x^t."""
    t = st.as_code(G, t)
    return GroupMap(G, [G.conj(g, t) for g in G.gens], check=False)


def apply(f: GroupMap, a):
    if isinstance(a, Element):
        if a.ctx is not f.ctx:
            raise ContextMismatch("element and map belong to different groups")
        return Element(f.ctx, int(f.table[a.code]))
    return int(f.table[st.as_code(f.ctx, a)])


def compose(f: GroupMap, g: GroupMap) -> GroupMap:
    """f o g: apply g first, then f."""
    if f.ctx is not g.ctx:
        raise ContextMismatch("maps belong to different groups")
    return GroupMap(f.ctx, [int(f.table[x]) for x in g.images], check=False)


def map_power(f: GroupMap, k: int) -> GroupMap:
    out = identity_map(f.ctx)
    for _ in range(k):
        out = compose(f, out)
    return out


def map_order(f: GroupMap) -> int:
    ident = tuple(f.ctx.gens)
    cur = f.images
    k = 1
    while cur != ident:
        cur = tuple(int(f.table[x]) for x in cur)
        k += 1
        if k > f.ctx.order ** 2:
            raise ValueError("map is not invertible")
    return k


def center_transversal(G: GroupContext):
    """Smallest code of each coset of Z(G), in increasing order."""
    Z = st.center(G)
    allx = np.arange(G.order, dtype=np.int64)
    rep = allx.copy()
    for z in Z.codes:
        rep = np.minimum(rep, G.mul_arr(allx, int(z)))
    return np.unique(rep)


def is_inner(f: GroupMap) -> InnerVerdict:
    """Scan conjugating elements over a transversal of Z(G), lowest first."""
    G = f.ctx
    T = center_transversal(G)
    ok = np.ones(T.size, dtype=bool)
    for g, img in zip(G.gens, f.images):
        ok &= G.conj_arr(g, T) == img
    hit = np.nonzero(ok)[0]
    if hit.size:
        return InnerVerdict(True, int(T[hit[0]]), int(hit[0]) + 1)
    return InnerVerdict(False, None, int(T.size))


def inner_lookup(G: GroupContext) -> dict:
    """Map from user-generator image tuples of inner automorphisms to the
    lowest conjugating element producing them."""
    allx = np.arange(G.order, dtype=np.int64)
    cols = np.stack([G.conj_arr(G.gen(u), allx) for u in G.user_gens], axis=1)
    out = {}
    for t in range(G.order):
        key = tuple(int(c) for c in cols[t])
        if key not in out:
            out[key] = t
    return out
