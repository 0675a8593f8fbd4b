"""Built-in families of p-groups as refined pc presentations.

Entries are addressed as ``name(arg, ...)`` strings, e.g. ``dihedral(16)`` or
``direct_product(dihedral(32), cyclic(4))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .errors import BadParams, UnknownEntry
from .pc import GroupContext, PcPresentation, Word, is_prime, make_presentation, parse_pcp

CORPUS_DIR = Path(__file__).with_name("corpus")


def _prime_power(q: int):
    """(p, k) with q = p^k, or BadParams."""
    if q < 2:
        raise BadParams(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    if q != 1:
        raise BadParams("order must be a prime power")
    return p, k


def _two_power(q: int, least: int):
    p, k = _prime_power(q)
    if p != 2 or k < least:
        raise BadParams(f"order must be 2^k with k >= {least}")
    return k


def cyclic(order: int) -> PcPresentation:
    p, k = _prime_power(order)
    return make_presentation(p, k, {j: Word(((j + 1, 1),)) for j in range(k - 1)})


def elementary_abelian(p: int, k: int) -> PcPresentation:
    if not is_prime(p) or k < 1:
        raise BadParams("need a prime p and k >= 1")
    return make_presentation(p, k)


def _r_power(e: int, k: int) -> Word:
    """r^e as a word in g_2..g_k, where g_j = r^(2^(j-2)) and |r| = 2^(k-1)."""
    e %= 2 ** (k - 1)
    return Word(tuple((t + 1, 1) for t in range(k - 1) if (e >> t) & 1))


def _two_maximal(kind: str, order: int) -> PcPresentation:
    least = {"dihedral": 2, "quaternion": 3, "semidihedral": 4}[kind]
    k = _two_power(order, least)
    t = 2 ** (k - 2) - 1 if kind == "semidihedral" else -1
    powers = {j: Word(((j + 1, 1),)) for j in range(1, k - 1)}
    if kind == "quaternion":
        powers[0] = Word(((k - 1, 1),))
    comms = {}
    for j in range(1, k):
        m = 2 ** (j - 1)
        w = _r_power(m * (t - 1), k)
        if w.factors:
            comms[(j, 0)] = w
    return make_presentation(2, k, powers, comms)


def dihedral(order: int) -> PcPresentation:
    return _two_maximal("dihedral", order)


def quaternion(order: int) -> PcPresentation:
    return _two_maximal("quaternion", order)


def semidihedral(order: int) -> PcPresentation:
    return _two_maximal("semidihedral", order)


def _odd(p):
    if not is_prime(p) or p == 2:
        raise BadParams("need an odd prime")


def extraspecial_exp_p(p: int) -> PcPresentation:
    _odd(p)
    return make_presentation(p, 3, {}, {(1, 0): [0, 0, 1]})


def extraspecial_exp_p2(p: int) -> PcPresentation:
    _odd(p)
    return make_presentation(p, 3, {0: [0, 0, 1]}, {(1, 0): [0, 0, 1]})


def huppert_p4(p: int) -> PcPresentation:
    """Maximal class group of order p^4 and exponent p; g1 = a, g2 = d, g3 = c, g4 = b."""
    if not is_prime(p) or p < 5:
        raise BadParams("need a prime p >= 5")
    return make_presentation(p, 4, {}, {(1, 0): [0, 0, 1, 0], (2, 0): [0, 0, 0, 1]})


def direct_product(A: PcPresentation, B: PcPresentation) -> PcPresentation:
    if A.prime != B.prime:
        raise BadParams("factors must share the prime")
    a = A.ngens
    shift = lambda w: Word(tuple((i + a, e) for i, e in w.factors))
    powers = {i: w for i, w in enumerate(A.power_rhs)}
    powers.update({i + a: shift(w) for i, w in enumerate(B.power_rhs)})
    comms = dict(A.comm_rhs)
    comms.update({(j + a, i + a): shift(w) for (j, i), w in B.comm_rhs.items()})
    return make_presentation(A.prime, a + B.ngens, powers, comms)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    arity: str        # 'order', 'p', 'p,k', 'entry,entry'
    build: object
    note: str


ENTRIES = {
    "cyclic": CatalogEntry("cyclic", "order", cyclic, "g_j^p = g_{j+1}"),
    "elementary_abelian": CatalogEntry("elementary_abelian", "p,k", elementary_abelian,
                                       "no relations"),
    "dihedral": CatalogEntry("dihedral", "order", dihedral, "g1 = s, g_j = r^(2^(j-2))"),
    "quaternion": CatalogEntry("quaternion", "order", quaternion, "as dihedral, s^2 central"),
    "semidihedral": CatalogEntry("semidihedral", "order", semidihedral,
                                 "r^s = r^(2^(k-2)-1)"),
    "extraspecial_exp_p": CatalogEntry("extraspecial_exp_p", "p", extraspecial_exp_p,
                                       "[g2, g1] = g3"),
    "extraspecial_exp_p2": CatalogEntry("extraspecial_exp_p2", "p", extraspecial_exp_p2,
                                        "g1^p = g3, [g2, g1] = g3"),
    "huppert_p4": CatalogEntry("huppert_p4", "p", huppert_p4,
                               "order p^4, maximal class, exponent p"),
    "direct_product": CatalogEntry("direct_product", "entry,entry", direct_product,
                                   "factors stacked, no cross relations"),
}


def _split_args(s: str) -> list:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
            continue
        depth += (ch == "(") - (ch == ")")
        cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def parse_entry(spec: str):
    """'name(a, b)' -> (name, [args]); nested entries stay as strings."""
    m = re.fullmatch(r"\s*(\w+)\s*(?:\((.*)\))?\s*", spec)
    if not m:
        raise BadParams(f"cannot parse catalog entry {spec!r}")
    name, inner = m.group(1), m.group(2)
    return name, _split_args(inner) if inner else []


def presentation(name: str, *params) -> PcPresentation:
    if name not in ENTRIES:
        raise UnknownEntry(f"unknown catalog entry {name!r}")
    entry = ENTRIES[name]
    want = entry.arity.split(",")
    if len(params) != len(want):
        raise BadParams(f"{name} takes {len(want)} parameter(s): {entry.arity}")
    if entry.arity == "entry,entry":
        args = [_as_presentation(x) for x in params]
    else:
        try:
            args = [int(x) for x in params]
        except (TypeError, ValueError):
            raise BadParams(f"{name} expects integer parameters") from None
    return entry.build(*args)


def _as_presentation(x) -> PcPresentation:
    if isinstance(x, PcPresentation):
        return x
    if isinstance(x, GroupContext):
        return x.presentation
    if isinstance(x, (tuple, list)):
        return presentation(x[0], *x[1:])
    name, args = parse_entry(str(x))
    return presentation(name, *args)


def label(name: str, *params) -> str:
    return f"{name}({', '.join(str(p) for p in params)})"


def catalog_build(name: str, *params) -> GroupContext:
    if "(" in name and not params:
        name, params = parse_entry(name)
    return GroupContext(presentation(name, *params), name=label(name, *params))


def build(spec: str) -> GroupContext:
    return catalog_build(spec)


def documented_invariants(name: str, *params):
    """(order, class, coclass) stated for an entry; None where not documented."""
    if name == "cyclic" or name == "elementary_abelian":
        if name == "cyclic":
            p, k = _prime_power(int(params[0]))
        else:
            p, k = int(params[0]), int(params[1])
        return p ** k, 1, k - 1
    if name in ("dihedral", "quaternion", "semidihedral"):
        k = _two_power(int(params[0]), 2)
        return 2 ** k, max(1, k - 1), k - max(1, k - 1)
    if name.startswith("extraspecial"):
        return int(params[0]) ** 3, 2, 1
    if name == "huppert_p4":
        return int(params[0]) ** 4, 3, 1
    return None


def corpus_files(directory=None) -> list:
    d = Path(directory) if directory else CORPUS_DIR
    return sorted(d.glob("*.pcp"))


def load_corpus(directory=None) -> dict:
    out = {}
    for f in corpus_files(directory):
        out[f.stem] = GroupContext(parse_pcp(f.read_text()), name=f.stem)
    return out


# small parameters used for the bundled corpus and the test suites
SMALL_ENTRIES = [
    ("cyclic", 4), ("cyclic", 8), ("cyclic", 25),
    ("elementary_abelian", 2, 2), ("elementary_abelian", 2, 3), ("elementary_abelian", 5, 2),
    ("dihedral", 8), ("dihedral", 16), ("dihedral", 32), ("dihedral", 64),
    ("quaternion", 8), ("quaternion", 16), ("quaternion", 32), ("quaternion", 64),
    ("semidihedral", 16), ("semidihedral", 32), ("semidihedral", 64),
    ("extraspecial_exp_p", 5), ("extraspecial_exp_p2", 5), ("extraspecial_exp_p", 3),
    ("huppert_p4", 5),
]
