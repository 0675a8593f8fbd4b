"""Pure-Python/numpy versions of the hot kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
Arrays are int64 numpy arrays; element codes index exponent vectors in
lexicographic order (first generator most significant).
"""

import numpy as np

BACKEND = "python"


def fill_right_row(R, i, p, n, power_code, conj_codes):
    """Fill ``R[i]``: right multiplication by generator ``i``.

    ``power_code`` is the normal form of g_i^p and ``conj_codes[j]`` the normal
    form of g_j^{g_i} for j > i. Rows ``R[k]`` for k > i must already be filled.
    """
    N = p ** n
    w = p ** (n - 1 - i)          # place value of digit i
    suffix = w * p                # number of codes supported on digits >= i
    row = np.empty(suffix, dtype=np.int64)
    Rl = [R[k].tolist() for k in range(n)]
    place = [p ** (n - 1 - k) for k in range(n)]
    conj = [int(c) for c in conj_codes]
    for x in range(suffix):
        e = x // w
        rest = x % w
        s = (e + 1) * w if e + 1 < p else int(power_code)
        if rest:
            for j in range(i + 1, n):
                u = (rest // place[j]) % p
                c = conj[j]
                for _ in range(u):
                    # s *= c, folding the digits of c through R
                    for k in range(j, n):
                        d = (c // place[k]) % p
                        rk = Rl[k]
                        for _ in range(d):
                            s = rk[s]
        row[x] = s
    prefixes = np.arange(0, N, suffix, dtype=np.int64)
    R[i] = (prefixes[:, None] + row[None, :]).reshape(N)


def cayley(R, p, n):
    """Full multiplication table T[x, y] = x * y from the right tables."""
    N = p ** n
    T = np.empty((N, N), dtype=np.int64)
    T[:, 0] = np.arange(N)
    for y in range(1, N):
        # y = y' * g_k with k the last nonzero digit of y
        k = n - 1
        while (y // p ** (n - 1 - k)) % p == 0:
            k -= 1
        yp = y - p ** (n - 1 - k)
        T[:, y] = R[k][T[:, yp]]
    return T


def assoc_triples(T):
    """Return the first (a, b, c) with (ab)c != a(bc), or None."""
    N = T.shape[0]
    for a in range(N):
        left = T[T[a, :], :]          # (ab)c over all b, c
        right = T[a, T]               # a(bc) over all b, c
        bad = np.nonzero(left != right)
        if len(bad[0]):
            return a, int(bad[0][0]), int(bad[1][0])
    return None


def cocycle_check(TQ, TG, invG, values, lift):
    """First pair (q, r) violating delta(qr) = delta(q)^{lift r} delta(r)."""
    NQ = TQ.shape[0]
    li = lift
    conj_r = invG[li]                 # lift(r)^{-1}
    for q in range(NQ):
        dq = values[q]
        lhs = values[TQ[q, :]]
        # delta(q)^{lift r} = lift(r)^{-1} delta(q) lift(r)
        rhs = TG[TG[TG[conj_r, dq], li], values]
        bad = np.nonzero(lhs != rhs)[0]
        if len(bad):
            return q, int(bad[0])
    return None


def hom_search(T, inv, p, n, user, cands, def_gen, def_prog_gen, def_prog_exp,
               def_off, rel_kind, rel_a, rel_b, rel_prog_gen, rel_prog_exp,
               rel_off, phi_vec, vadd, vmul):
    """Enumerate user-generator image tuples that extend to automorphisms.

    ``user`` lists the pc indices of the user generators; ``cands[k]`` the
    candidate images of ``user[k]``. Tuples whose images are dependent modulo
    the Frattini subgroup are pruned before any relation is evaluated. Each
    defined pc generator ``def_gen[t]`` is the word ``def_prog[def_off[t]:
    def_off[t+1]]`` over pc slots. Relations: kind 0 is g_a^p = rhs, kind 1 is
    [g_a, g_b] = rhs. Returns a list of image tuples (user generators only).
    """
    T = T.tolist() if not isinstance(T, list) else T
    inv = list(map(int, inv))
    d = len(user)
    cands = [list(map(int, c)) for c in cands]
    def_gen = list(map(int, def_gen))
    dpg = list(map(int, def_prog_gen))
    dpe = list(map(int, def_prog_exp))
    doff = list(map(int, def_off))
    rk = list(map(int, rel_kind))
    ra = list(map(int, rel_a))
    rb = list(map(int, rel_b))
    rpg = list(map(int, rel_prog_gen))
    rpe = list(map(int, rel_prog_exp))
    roff = list(map(int, rel_off))
    phi = list(map(int, phi_vec))
    vadd = [list(map(int, r)) for r in vadd]
    vmul = [list(map(int, r)) for r in vmul]
    pd = len(vadd)

    def tmul(a, b):
        return T[a][b]

    found = []
    slots = [0] * n
    spans = [[False] * pd for _ in range(d + 1)]
    spans[0][0] = True

    def rec(level):
        if level == d:
            for t in range(len(def_gen)):
                slots[def_gen[t]] = _eval_list(T, inv, slots, dpg, dpe, doff[t], doff[t + 1])
            for r in range(len(rk)):
                a = slots[ra[r]]
                if rk[r] == 0:
                    lhs = 0
                    for _ in range(p):
                        lhs = T[lhs][a]
                else:
                    b = slots[rb[r]]
                    lhs = tmul(tmul(inv[a], inv[b]), tmul(a, b))
                rhs = _eval_list(T, inv, slots, rpg, rpe, roff[r], roff[r + 1])
                if lhs != rhs:
                    return
            found.append(tuple(slots[u] for u in user))
            return
        span = spans[level]
        for c in cands[level]:
            v = phi[c]
            if span[v]:
                continue
            nxt = spans[level + 1]
            for s in range(pd):
                nxt[s] = False
            for s in range(pd):
                if span[s]:
                    for m in range(p):
                        nxt[vadd[s][vmul[m][v]]] = True
            slots[user[level]] = c
            rec(level + 1)

    rec(0)
    return found


def _eval_list(T, inv, slots, pg, pe, lo, hi):
    acc = 0
    for t in range(lo, hi):
        g = slots[pg[t]]
        e = pe[t]
        if e < 0:
            g = inv[g]
            e = -e
        for _ in range(e):
            acc = T[acc][g]
    return acc
