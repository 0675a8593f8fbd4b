# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see ``_pykernels`` for the contracts."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

ctypedef cnp.int64_t i64

BACKEND = "cython"


def fill_right_row(cnp.ndarray R, Py_ssize_t i, Py_ssize_t p, Py_ssize_t n,
                   power_code, conj_codes):
    cdef i64[:, :] Rv = R
    cdef i64[:] place = np.array([int(p) ** (n - 1 - k) for k in range(n)], dtype=np.int64)
    cdef Py_ssize_t N = place[0] * p
    cdef Py_ssize_t w = place[i]
    cdef Py_ssize_t suffix = w * p
    cdef const i64[:] conj = np.ascontiguousarray(conj_codes, dtype=np.int64)
    cdef i64[:] row = np.empty(suffix, dtype=np.int64)
    cdef i64 pw = power_code
    cdef Py_ssize_t x, e, rest, j, u, k, d, t, q, pre
    cdef i64 s, c
    for x in range(suffix):
        e = x // w
        rest = x % w
        s = (e + 1) * w if e + 1 < p else pw
        if rest:
            for j in range(i + 1, n):
                u = (rest // place[j]) % p
                c = conj[j]
                for q in range(u):
                    for k in range(j, n):
                        d = (c // place[k]) % p
                        for t in range(d):
                            s = Rv[k, s]
        row[x] = s
    for pre in range(0, N, suffix):
        for x in range(suffix):
            Rv[i, pre + x] = pre + row[x]


def cayley(cnp.ndarray R, Py_ssize_t p, Py_ssize_t n):
    cdef const i64[:, :] Rv = R
    cdef i64[:] place = np.array([int(p) ** (n - 1 - k) for k in range(n)], dtype=np.int64)
    cdef Py_ssize_t N = place[0] * p
    T = np.empty((N, N), dtype=np.int64)
    cdef i64[:, :] Tv = T
    cdef Py_ssize_t x, y, k, yp
    for x in range(N):
        Tv[x, 0] = x
    for y in range(1, N):
        k = n - 1
        while (y // place[k]) % p == 0:
            k -= 1
        yp = y - place[k]
        for x in range(N):
            Tv[x, y] = Rv[k, Tv[x, yp]]
    return T


def assoc_triples(cnp.ndarray T):
    cdef const i64[:, :] Tv = T
    cdef Py_ssize_t N = Tv.shape[0]
    cdef Py_ssize_t a, b, c
    cdef i64 ab
    for a in range(N):
        for b in range(N):
            ab = Tv[a, b]
            for c in range(N):
                if Tv[ab, c] != Tv[a, Tv[b, c]]:
                    return a, b, c
    return None


def cocycle_check(cnp.ndarray TQ, cnp.ndarray TG, cnp.ndarray invG,
                  cnp.ndarray values, cnp.ndarray lift):
    cdef const i64[:, :] tq = TQ
    cdef const i64[:, :] tg = TG
    cdef const i64[:] inv = invG
    cdef const i64[:] val = values
    cdef const i64[:] li = lift
    cdef Py_ssize_t NQ = tq.shape[0]
    cdef Py_ssize_t q, r
    cdef i64 lhs, rhs, h
    for q in range(NQ):
        for r in range(NQ):
            lhs = val[tq[q, r]]
            h = li[r]
            rhs = tg[tg[tg[inv[h], val[q]], h], val[r]]
            if lhs != rhs:
                return q, r
    return None


cdef inline i64 _eval(const i64[:, :] T, const i64[:] inv, i64* slots, const i64[:] pg, const i64[:] pe,
                      Py_ssize_t lo, Py_ssize_t hi) nogil:
    cdef i64 acc = 0, g, e
    cdef Py_ssize_t t, q
    for t in range(lo, hi):
        g = slots[pg[t]]
        e = pe[t]
        if e < 0:
            g = inv[g]
            e = -e
        for q in range(e):
            acc = T[acc, g]
    return acc


def hom_search(cnp.ndarray T, cnp.ndarray inv, Py_ssize_t p, Py_ssize_t n, user, cands,
               def_gen, def_prog_gen, def_prog_exp, def_off, rel_kind, rel_a, rel_b,
               rel_prog_gen, rel_prog_exp, rel_off, phi_vec, vadd, vmul):
    cdef const i64[:, :] Tv = T
    cdef const i64[:] iv = inv
    cdef Py_ssize_t d = len(user)
    cdef const i64[:] us = np.asarray(user, dtype=np.int64)
    cdef const i64[:] dg = np.asarray(def_gen, dtype=np.int64)
    cdef const i64[:] dpg = np.asarray(def_prog_gen, dtype=np.int64)
    cdef const i64[:] dpe = np.asarray(def_prog_exp, dtype=np.int64)
    cdef const i64[:] doff = np.asarray(def_off, dtype=np.int64)
    cdef const i64[:] rk = np.asarray(rel_kind, dtype=np.int64)
    cdef const i64[:] ra = np.asarray(rel_a, dtype=np.int64)
    cdef const i64[:] rb = np.asarray(rel_b, dtype=np.int64)
    cdef const i64[:] rpg = np.asarray(rel_prog_gen, dtype=np.int64)
    cdef const i64[:] rpe = np.asarray(rel_prog_exp, dtype=np.int64)
    cdef const i64[:] roff = np.asarray(rel_off, dtype=np.int64)
    cdef const i64[:] phi = np.asarray(phi_vec, dtype=np.int64)
    cdef const i64[:, :] va = np.asarray(vadd, dtype=np.int64)
    cdef const i64[:, :] vm = np.asarray(vmul, dtype=np.int64)
    cdef Py_ssize_t pd = va.shape[0]
    cdef Py_ssize_t ndef = dg.shape[0], nrel = rk.shape[0]

    # flatten candidate lists
    lens = np.array([len(cl) for cl in cands], dtype=np.int64)
    offs_np = np.zeros(d + 1, dtype=np.int64)
    offs_np[1:] = np.cumsum(lens)
    flat_np = np.concatenate([np.asarray(cl, dtype=np.int64) for cl in cands]) if d else np.zeros(0, dtype=np.int64)
    cdef i64[:] coff = offs_np
    cdef i64[:] flat = flat_np

    cdef i64* slots = <i64*> malloc(n * sizeof(i64))
    cdef i64* pos = <i64*> malloc((d + 1) * sizeof(i64))
    cdef char* spans = <char*> malloc((d + 1) * pd * sizeof(char))
    cdef Py_ssize_t level, t, r, s, m, q
    cdef i64 c, v, a, b, lhs, rhs
    cdef bint ok
    found = []
    try:
        for t in range(n):
            slots[t] = 0
        for s in range(pd):
            spans[s] = 0
        spans[0] = 1
        if d == 0:
            return found
        level = 0
        pos[0] = coff[0]
        while level >= 0:
            if pos[level] >= coff[level + 1]:
                level -= 1
                if level >= 0:
                    pos[level] += 1
                continue
            c = flat[pos[level]]
            v = phi[c]
            if spans[level * pd + v]:
                pos[level] += 1
                continue
            for s in range(pd):
                spans[(level + 1) * pd + s] = 0
            for s in range(pd):
                if spans[level * pd + s]:
                    for m in range(p):
                        spans[(level + 1) * pd + va[s, vm[m, v]]] = 1
            slots[us[level]] = c
            if level + 1 < d:
                level += 1
                pos[level] = coff[level]
                continue
            # full tuple: evaluate definitions, then relations
            for t in range(ndef):
                slots[dg[t]] = _eval(Tv, iv, slots, dpg, dpe, doff[t], doff[t + 1])
            ok = True
            for r in range(nrel):
                a = slots[ra[r]]
                if rk[r] == 0:
                    lhs = 0
                    for q in range(p):
                        lhs = Tv[lhs, a]
                else:
                    b = slots[rb[r]]
                    lhs = Tv[Tv[iv[a], iv[b]], Tv[a, b]]
                rhs = _eval(Tv, iv, slots, rpg, rpe, roff[r], roff[r + 1])
                if lhs != rhs:
                    ok = False
                    break
            if ok:
                found.append(tuple(int(slots[us[q]]) for q in range(d)))
            pos[level] += 1
    finally:
        free(slots)
        free(pos)
        free(spans)
    return found
