"""Generator-image backtracking shared by isomorphism recognition and the oracle.

A presentation is compiled into flat integer programs: one per defined pc
generator (its definition word over the user generators) and one per defining
relation. The kernel then walks candidate images of the user generators,
pruning tuples that are dependent modulo the Frattini subgroup of the target.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import TooLarge
from .pc import GroupContext, Word


@dataclass(frozen=True)
class Programs:
    user: tuple
    def_gen: np.ndarray
    def_prog_gen: np.ndarray
    def_prog_exp: np.ndarray
    def_off: np.ndarray
    rel_kind: np.ndarray
    rel_a: np.ndarray
    rel_b: np.ndarray
    rel_prog_gen: np.ndarray
    rel_prog_exp: np.ndarray
    rel_off: np.ndarray


def _flatten(words):
    gens, exps, off = [], [], [0]
    for w in words:
        for i, e in w.factors:
            gens.append(i)
            exps.append(e)
        off.append(len(gens))
    as_arr = lambda xs: np.asarray(xs, dtype=np.int64)
    return as_arr(gens), as_arr(exps), as_arr(off)


def compile_presentation(ctx: GroupContext) -> Programs:
    pres = ctx.presentation
    user = tuple(ctx.user_gens)
    defined = [i for i in range(ctx.n) if i not in user]
    dpg, dpe, doff = _flatten([ctx.def_words[i] for i in defined])
    kinds, ra, rb, rhs = [], [], [], []
    for i in range(ctx.n):
        kinds.append(0)
        ra.append(i)
        rb.append(0)
        rhs.append(pres.power_rhs[i])
    for i in range(ctx.n):
        for j in range(i + 1, ctx.n):
            kinds.append(1)
            ra.append(j)
            rb.append(i)
            rhs.append(pres.comm_rhs.get((j, i), Word()))
    rpg, rpe, roff = _flatten(rhs)
    arr = lambda xs: np.asarray(xs, dtype=np.int64)
    return Programs(user, arr(defined), dpg, dpe, doff, arr(kinds), arr(ra), arr(rb),
                    rpg, rpe, roff)


def vector_tables(p: int, d: int):
    """Addition and scalar tables for F_p^d, vectors encoded base p."""
    N = p ** d
    digits = np.array([[(v // p ** (d - 1 - k)) % p for k in range(d)] for v in range(N)],
                      dtype=np.int64).reshape(N, d)
    place = np.array([p ** (d - 1 - k) for k in range(d)], dtype=np.int64)
    vadd = (((digits[:, None, :] + digits[None, :, :]) % p) * place).sum(axis=2)
    vmul = (((np.arange(p)[:, None, None] * digits[None, :, :]) % p) * place).sum(axis=2)
    return vadd.astype(np.int64), vmul.astype(np.int64)


def search_images(source: GroupContext, target: GroupContext, cands) -> list:
    """All user-image tuples of ``source`` in ``target`` that respect every
    defining relation of ``source`` and are independent modulo Phi(target).

    When d(source) = d(target) every hit is a surjective homomorphism.
    """
    if not target.has_table:
        raise TooLarge(f"target of order {target.order} exceeds the table limit")
    prog = compile_presentation(source)
    d = len(prog.user)
    if len(cands) != d:
        raise ValueError("one candidate list per user generator expected")
    dt = len(target.user_gens)
    if d > dt:
        return []
    vadd, vmul = vector_tables(target.p, dt)
    return kernels.hom_search(
        np.ascontiguousarray(target.table), np.ascontiguousarray(target.inverses),
        source.p, source.n, np.asarray(prog.user, dtype=np.int64),
        [np.asarray(c, dtype=np.int64) for c in cands],
        prog.def_gen, prog.def_prog_gen, prog.def_prog_exp, prog.def_off,
        prog.rel_kind, prog.rel_a, prog.rel_b, prog.rel_prog_gen, prog.rel_prog_exp,
        prog.rel_off, np.ascontiguousarray(target.frattini_coords), vadd, vmul)


def pc_images(source: GroupContext, target: GroupContext, user_images) -> tuple:
    """Images in ``target`` of every pc generator of ``source``."""
    slots = [0] * source.n
    for u, c in zip(source.user_gens, user_images):
        slots[u] = int(c)
    return tuple(target.eval_word(source.def_words[i], slots) for i in range(source.n))
