"""Template search for a 2-generated 2-group of order 2^7, class 4, coclass 3,
on which the dihedral-quotient construction yields a non-inner automorphism.

Presentations are grown from C2 x C2 one central generator of order 2 at a
time. For a central extension the associativity defect on the standard test
words is linear in the tail vector over F_2, so consistent tails are drawn
from a nullspace instead of by rejection. Every candidate is still re-checked
with the full consistency test.

    python tools/find_marco2_group.py --out src/pgwb/corpus/marco2_128.pcp
"""

from __future__ import annotations

import argparse
import random
import sys

import numpy as np

from pgwb import search, structure as st
from pgwb.derivations import _nullspace_mod_p
from pgwb.errors import PgwbError
from pgwb.hypotheses import reduction_report
from pgwb.pc import (GroupContext, Word, _test_triples, consistency_check,
                     make_presentation)


def relation_slots(n):
    slots = [("power", i) for i in range(n)]
    slots += [("comm", j, i) for i in range(n) for j in range(i + 1, n)]
    return slots


def extend(P, tails):
    """Add generator n (0-based) and append it to the relations selected by tails."""
    n = P.ngens
    powers = {i: P.power_rhs[i] for i in range(n)}
    comms = dict(P.comm_rhs)
    for s, t in zip(relation_slots(n), tails):
        if not t:
            continue
        if s[0] == "power":
            powers[s[1]] = powers[s[1]] * Word(((n, 1),))
        else:
            key = (s[1], s[2])
            comms[key] = comms.get(key, Word()) * Word(((n, 1),))
    return make_presentation(P.prime, n + 1, powers, comms)


def defect_vector(P, tails):
    ctx = GroupContext(extend(P, tails))
    base = GroupContext(P)
    out = []
    for a, b, c in _test_triples(base):
        a, b, c = (ctx.code(tuple(base.exps(x)) + (0,)) for x in (a, b, c))
        f = ctx._mul_fold
        left, right = f(f(a, b), c), f(a, f(b, c))
        out.append((ctx.exps(left)[-1] - ctx.exps(right)[-1]) % 2)
    return np.array(out, dtype=np.int64)


def consistent_tails(P):
    m = len(relation_slots(P.ngens))
    cols = [defect_vector(P, [int(r == k) for r in range(m)]) for k in range(m)]
    A = np.stack(cols, axis=1)
    return _nullspace_mod_p(A, 2)


def grow(rng, P, target_n):
    while P.ngens < target_n:
        basis = consistent_tails(P)
        if not basis:
            return None
        for _ in range(20):
            coeff = [rng.randrange(2) for _ in basis]
            if not any(coeff):
                continue
            t = sum(c * b for c, b in zip(coeff, basis)) % 2
            Q = extend(P, list(t))
            G = GroupContext(Q)
            if st.dgen(G) == 2 and consistency_check(Q).ok:
                P = Q
                break
        else:
            return None
    return P


def suitable(P, require_b=False):
    G = GroupContext(P)
    if st.dgen(G) != 2 or st.nilpotency_class(G) != 4:
        return None
    if require_b and not reduction_report(G).hypothesis_b:
        return None
    try:
        cert = search.marco2_construct(G)
    except PgwbError:
        return None
    if cert.inner or cert.notes.get("centralizes_phi"):
        return None
    return G, cert


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--tries", type=int, default=2000)
    ap.add_argument("--out")
    ap.add_argument("--require-b", action="store_true",
                    help="also require that none of the five reductions applies")
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    start = make_presentation(2, 2)
    for k in range(args.tries):
        P = grow(rng, start, 7)
        if P is None:
            continue
        hit = suitable(P, args.require_b)
        if hit:
            b = " (hypothesis B)" if args.require_b else ""
            text = f"# order 2^7, class 4, coclass 3{b}; template search seed {args.seed}, try {k}\n"
            text += P.to_text()
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(text)
            print(text, end="")
            return 0
    print("no group found", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
