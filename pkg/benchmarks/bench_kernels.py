"""Compiled vs pure-Python kernels on the same workloads.

    python benchmarks/bench_kernels.py [--repeat 3]

Each workload is run with the kernel functions of one backend swapped into
``pgwb.kernels``; results of both backends are compared for equality.
"""

from __future__ import annotations

import argparse
import time
from contextlib import contextmanager

import numpy as np

from pgwb import _pykernels, kernels, oracle
from pgwb.catalog import build, load_corpus
from pgwb.pc import GroupContext, associativity_triples

try:
    from pgwb import _ckernels
except ImportError:
    _ckernels = None

NAMES = ("fill_right_row", "cayley", "assoc_triples", "cocycle_check", "hom_search")


@contextmanager
def backend(mod):
    saved = {k: getattr(kernels, k) for k in NAMES}
    for k in NAMES:
        setattr(kernels, k, getattr(mod, k))
    try:
        yield
    finally:
        for k, v in saved.items():
            setattr(kernels, k, v)


def w_tables():
    G = GroupContext(build("huppert_p4(7)").presentation)
    return int(G.table.sum())


def w_assoc():
    return associativity_triples(GroupContext(build("dihedral(256)").presentation))


def w_cocycle():
    G = build("huppert_p4(5)")
    vals = np.zeros(G.order, dtype=np.int64)
    return oracle.pointwise_derivation_check(G, vals).ok


def w_aut():
    G = load_corpus()["marco2_128"]
    return len(oracle.brute_force_automorphisms(G))


def w_aut_huppert():
    return len(oracle.brute_force_automorphisms(build("huppert_p4(5)")))


WORKLOADS = [
    ("right tables + Cayley table, |G| = 7^4", w_tables),
    ("associativity over all triples, |G| = 256", w_assoc),
    ("pointwise cocycle check, 625^2 pairs", w_cocycle),
    ("automorphism enumeration, |G| = 2^7", w_aut),
    ("automorphism enumeration, |G| = 5^4", w_aut_huppert),
]


def timed(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description="kernel benchmark")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'workload':45s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}")
    for label, fn in WORKLOADS:
        with backend(_pykernels):
            tp, rp = timed(fn, 1)
        if _ckernels is None:
            print(f"{label:45s} {'-':>10s} {tp:10.3f}")
            continue
        with backend(_ckernels):
            tc, rc = timed(fn, args.repeat)
        assert rp == rc, f"backends disagree on {label}"
        print(f"{label:45s} {tc:10.3f} {tp:10.3f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
