"""Derivations (1-cocycles) into normal abelian subgroups.

Multiplicative convention: delta(gh) = delta(g)^h delta(h). A derivation is
fixed by its values on a distinguished generating set of its source (the
group itself or a quotient G/N). It is accepted only after every defining
relator of the source, written over those generators, is checked to map to
1. Its value table is then filled by folding the cocycle law along normal
forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from . import structure as st
from .errors import (IterationEscapesModule, PreconditionMZN, RelatorNotKilled,
                     TargetNotAbelian, TargetNotNormal)
from .morphisms import GroupMap
from .pc import GroupContext, Word, _compress

LINEAR_THRESHOLD = 2 ** 12


class Module:
    """A normal abelian subgroup acted on by conjugation."""

    def __init__(self, subgroup: st.Subgroup):
        if not subgroup.is_abelian:
            raise TargetNotAbelian("module must be abelian")
        if not subgroup.is_normal:
            raise TargetNotNormal("module must be normal")
        self.subgroup = subgroup
        self.ctx = subgroup.ctx

    @property
    def exponent(self) -> int:
        return self.subgroup.exponent

    @property
    def is_elementary(self) -> bool:
        return self.exponent <= self.ctx.p

    @property
    def size(self) -> int:
        return self.subgroup.size

    def __contains__(self, x):
        return x in self.subgroup

    def __repr__(self):
        return f"<Module of order {self.size}, exponent {self.exponent}>"

    @cached_property
    def basis(self) -> list:
        """Independent generators (only meaningful when elementary abelian)."""
        return self.subgroup.gens

    @cached_property
    def _coords(self):
        p, B = self.ctx.p, self.basis
        out = {}
        for vec in itertools.product(range(p), repeat=len(B)):
            x = 0
            for b, e in zip(B, vec):
                x = self.ctx.mul(x, self.ctx.pow(b, e))
            out[x] = vec
        return out

    def coords(self, m: int) -> tuple:
        return self._coords[int(m)]

    def as_dict(self):
        return self.subgroup.as_dict()


def module(G: GroupContext, gens) -> Module:
    return Module(st.closure(G, gens))


class Source:
    """The domain of a derivation: G itself or a quotient G/N.

    ``gens`` are codes in G whose images form the distinguished generating
    set (default: the user generators of G). ``pc_words[j]`` writes the j-th
    pc generator of the source as a word in the distinguished generators, and
    ``relators`` lists the defining relators of the source in those letters.
    """

    def __init__(self, G: GroupContext, quotient: st.QuotientContext | None = None,
                 gens=None):
        self.G = G
        self.quotient = quotient
        if quotient is None:
            self.S = G
            self.proj = self.lift = np.arange(G.order, dtype=np.int64)
        else:
            self.S = quotient.Q
            self.proj, self.lift = quotient.proj, quotient.lift
        if gens is None:
            gens = [G.gen(u) for u in G.user_gens]
        self.gens = tuple(int(g) for g in gens)
        self.sgens = tuple(int(self.proj[g]) for g in self.gens)
        S = self.S
        if not S.closure_mask(list(self.sgens)).all():
            raise ValueError("distinguished generators do not generate the source")
        self.pc_words = self._pc_words()
        self.relators = self._relators()

    @property
    def is_group_itself(self) -> bool:
        return self.quotient is None

    @property
    def normal_subgroup(self):
        return None if self.quotient is None else self.quotient.normal_subgroup

    def _pc_words(self):
        S = self.S
        if self.quotient is None and self.gens == tuple(S.gen(u) for u in S.user_gens):
            pos = {u: k for k, u in enumerate(S.user_gens)}
            return [Word(tuple((pos[i], e) for i, e in S.def_words[j].factors))
                    for j in range(S.n)]
        words = S._bfs_words(list(self.sgens))
        return [_compress(words[S.gen(j)]) for j in range(S.n)]

    def _relators(self):
        S, V = self.S, self.pc_words
        pres = S.presentation
        rels = []
        if pres is not None:
            for i in range(S.n):
                rels.append((f"power {i + 1}", (V[i] ** S.p) * pres.power_rhs[i].substitute(V).inverse()))
            for i in range(S.n):
                for j in range(i + 1, S.n):
                    rhs = pres.comm_rhs.get((j, i), Word())
                    lhs = V[j].inverse() * V[i].inverse() * V[j] * V[i]
                    rels.append((f"comm {j + 1} {i + 1}", lhs * rhs.substitute(V).inverse()))
        for k, x in enumerate(self.sgens):
            W = S.word_of(x).substitute(V) if x else Word()
            rels.append((f"gen {k + 1}", Word(((k, -1),)) * W))
        return rels

    def describe(self):
        N = self.normal_subgroup
        return {"normal_subgroup": None if N is None else N.as_dict(),
                "generators": [list(self.G.exps(g)) for g in self.gens]}


class Derivation:
    """A verified derivation source -> module, with its full value table."""

    def __init__(self, source: Source, target: Module, gen_images, values):
        self.source = source
        self.module = target
        self.gen_images = tuple(int(m) for m in gen_images)
        values = np.asarray(values, dtype=np.int64)
        values.setflags(write=False)
        self.values = values            # indexed by source codes, valued in G

    @property
    def G(self) -> GroupContext:
        return self.source.G

    @cached_property
    def table(self):
        """delta as a function on the codes of G."""
        t = self.values[self.source.proj]
        t.setflags(write=False)
        return t

    def __call__(self, g):
        return evaluate(self, g)

    def __eq__(self, other):
        return isinstance(other, Derivation) and other.G is self.G \
            and np.array_equal(other.table, self.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    @property
    def is_zero(self) -> bool:
        return not self.table.any()

    def vanishes_on(self, H: st.Subgroup) -> bool:
        return not self.table[H.codes].any()

    def as_dict(self):
        G = self.G
        return {"module": self.module.as_dict(), "source": self.source.describe(),
                "images": [list(G.exps(m)) for m in self.gen_images]}


def _fold(src: Source, images, word: Word):
    """(delta(w), w) for a word over the distinguished generators."""
    G, S, lift = src.G, src.S, src.lift
    d, s = 0, 0
    for k, e in word.letters():
        a = src.sgens[k]
        if e > 0:
            da = images[k]
        else:
            a = S.inv(a)
            # delta(a^-1) = (delta(a)^-1)^(a^-1)
            da = G.conj(G.inv(images[k]), int(lift[a]))
        d = G.mul(G.conj(d, int(lift[a])), da)
        s = S.mul(s, a)
    return d, s


def relator_values(src: Source, images) -> list:
    """[(label, delta(relator))] for the source's defining relators."""
    return [(lab, _fold(src, images, w)[0]) for lab, w in src.relators]


def _check_lift_condition(src: Source, M: Module):
    N = src.normal_subgroup
    if N is not None and not M.subgroup <= st.center_of(N):
        raise PreconditionMZN("module is not contained in Z(N)")


def _value_table(src: Source, images):
    G, S, lift = src.G, src.S, src.lift
    p = S.p
    dh = [_fold(src, images, w)[0] for w in src.pc_words]
    digits = S.digits(np.arange(S.order, dtype=np.int64))
    D = np.zeros(S.order, dtype=np.int64)
    for k in range(S.n):
        h = S.gen(k)
        pw = [0]
        dpw = [0]
        for _ in range(p - 1):
            dpw.append(G.mul(G.conj(dpw[-1], int(lift[h])), dh[k]))
            pw.append(S.mul(pw[-1], h))
        pw = np.array(pw, dtype=np.int64)
        dpw = np.array(dpw, dtype=np.int64)
        e = digits[:, k]
        D = G.mul_arr(G.conj_arr(D, lift[pw[e]]), dpw[e])
    return D


def derivation_from_images(src, target: Module, gen_images, *, check_lift=True) -> Derivation:
    """Build the derivation with delta(x_k) = gen_images[k], verifying relators."""
    if isinstance(src, GroupContext):
        src = Source(src)
    if not isinstance(target, Module):
        target = Module(target)
    if check_lift:
        _check_lift_condition(src, target)
    G = src.G
    images = [st.as_code(G, m) for m in gen_images]
    if len(images) != len(src.sgens):
        raise ValueError(f"need {len(src.sgens)} generator images")
    for m in images:
        if m not in target:
            raise ValueError(f"image {G.exps(m)} is not in the module")
    for lab, val in relator_values(src, images):
        if val != 0:
            raise RelatorNotKilled(lab, G.exps(val))
    values = _value_table(src, images)
    for x, m in zip(src.sgens, images):
        assert values[x] == m, "value table disagrees with generator images"
    return Derivation(src, target, images, values)


def zero_derivation(src, target: Module) -> Derivation:
    if isinstance(src, GroupContext):
        src = Source(src)
    return Derivation(src, target, [0] * len(src.sgens), np.zeros(src.S.order, dtype=np.int64))


def evaluate(delta: Derivation, g) -> int:
    """delta(g) for g in G (via the projection when the source is a quotient)."""
    return int(delta.table[st.as_code(delta.G, g)])


def evaluate_word(delta: Derivation, word: Word) -> int:
    """delta of a word over the distinguished generators, by folding the law."""
    return _fold(delta.source, delta.gen_images, word)[0]


def lift_from_quotient(d: Derivation, M: Module | None = None) -> Derivation:
    """delta(g) = d(gN), re-verified on the relators of G."""
    M = M or d.module
    src = d.source
    if src.is_group_itself:
        return d
    _check_lift_condition(src, M)
    G = src.G
    gsrc = Source(G, None, src.gens)
    images = [int(d.values[src.proj[g]]) for g in src.gens]
    out = derivation_from_images(gsrc, M, images)
    if not np.array_equal(out.values, d.table):
        raise AssertionError("lifted derivation disagrees with d(gN)")
    return out


def to_endomorphism(delta: Derivation) -> GroupMap:
    """phi(g) = g delta(g)."""
    if not delta.source.is_group_itself:
        raise ValueError("lift the derivation to G first")
    G = delta.G
    images = [G.mul(g, int(delta.values[g])) for g in G.gens]
    return GroupMap(G, images)


def power_via_binomials(delta: Derivation, i: int, g) -> int:
    """prod_{j=0}^{i} delta^j(g)^C(i, j), with delta^0(g) = g.

    ``g`` may also be an array of codes, evaluated elementwise.
    """
    if not delta.source.is_group_itself:
        raise IterationEscapesModule("derivation is defined on a quotient; lift it first")
    G = delta.G
    if isinstance(g, np.ndarray):
        # all elements at once; membership of the iterates is checked columnwise
        out = cur = g.astype(np.int64)
        for j in range(1, i + 1):
            cur = delta.values[cur]
            if not delta.module.subgroup.mask[cur].all():
                raise IterationEscapesModule("iterate left the module")
            out = G.mul_arr(out, G.pow_arr(cur, comb(i, j)))
        return out
    x = st.as_code(G, g)
    out = x
    cur = x
    for j in range(1, i + 1):
        cur = int(delta.values[cur])
        if cur not in delta.module:
            raise IterationEscapesModule("iterate left the module")
        out = G.mul(out, G.pow(cur, comb(i, j)))
    return out


# -- families ------------------------------------------------------------------

@dataclass
class Family:
    derivations: list
    assignments_tried: int
    collisions: int          # pairs of assignments giving the same map on G

    def __len__(self):
        return len(self.derivations)

    def __iter__(self):
        return iter(self.derivations)

    def __getitem__(self, k):
        return self.derivations[k]


def _valid_assignments_brute(src: Source, M: Module):
    d = len(src.sgens)
    out = []
    for combo in itertools.product([int(m) for m in M.subgroup.codes], repeat=d):
        if all(v == 0 for _, v in relator_values(src, combo)):
            out.append(combo)
    return out


def _valid_assignments_linear(src: Source, M: Module):
    """Kernel of the (linear) map assignments -> relator values, over F_p."""
    G, p = src.G, src.G.p
    B = M.basis
    d, r = len(src.sgens), len(B)
    cols = []
    for k in range(d):
        for b in B:
            imgs = [0] * d
            imgs[k] = b
            vals = relator_values(src, imgs)
            cols.append([c for _, v in vals for c in M.coords(v)])
    A = np.array(cols, dtype=np.int64).T % p          # rows: relator coords
    kernel = _nullspace_mod_p(A, p)
    out = []
    for coeffs in itertools.product(range(p), repeat=len(kernel)):
        vec = np.zeros(d * r, dtype=np.int64)
        for c, v in zip(coeffs, kernel):
            vec = (vec + c * v) % p
        combo = []
        for k in range(d):
            m = 0
            for b, e in zip(B, vec[k * r:(k + 1) * r]):
                m = G.mul(m, G.pow(b, int(e)))
            combo.append(m)
        out.append(tuple(combo))
    out.sort()
    return out


def _nullspace_mod_p(A, p):
    A = A.copy() % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-A[i, f]) % p
        basis.append(v)
    return basis


def derivation_family(G: GroupContext, quotient: st.QuotientContext | None, M: Module,
                      gens=None, *, method: str = "auto") -> Family:
    """All derivations source -> M fixed by generator images, lifted to G.

    Assignments are returned in lexicographic order of the image codes.
    Distinctness as maps on G is checked, and collisions are counted.
    """
    if not isinstance(M, Module):
        M = Module(M)
    src = Source(G, quotient, gens)
    _check_lift_condition(src, M)
    d = len(src.sgens)
    total = M.size ** d
    if method == "auto":
        method = "linear" if (M.is_elementary and total > LINEAR_THRESHOLD) else "brute"
    combos = (_valid_assignments_linear if method == "linear" else _valid_assignments_brute)(src, M)
    out, seen, collisions = [], set(), 0
    for combo in combos:
        delta = derivation_from_images(src, M, combo, check_lift=False)
        if not src.is_group_itself:
            delta = lift_from_quotient(delta, M)
        key = delta.table.tobytes()
        if key in seen:
            collisions += 1
            continue
        seen.add(key)
        out.append(delta)
    return Family(out, total, collisions)
