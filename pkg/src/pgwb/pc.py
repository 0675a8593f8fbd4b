"""Power-commutator presentations and collection arithmetic.

Generators are 0-based internally and 1-based in presentation files. An
element is stored as an integer *code*: the index of its exponent vector in
lexicographic order, the first generator being the most significant digit.
Conventions: [a, b] = a^-1 b^-1 a b and a^b = b^-1 a b.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import BadPrime, ContextMismatch, MalformedInput, WeightViolation

TABLE_LIMIT = 2 ** 12
EXHAUSTIVE_LIMIT = 2 ** 12


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class Word:
    """A word in the generators: a sequence of (0-based index, nonzero exponent)."""

    factors: tuple = ()

    def __str__(self):
        if not self.factors:
            return "1"
        return " ".join(f"{i + 1}" if e == 1 else f"{i + 1}^{e}" for i, e in self.factors)

    def __len__(self):
        return len(self.factors)

    def inverse(self) -> "Word":
        return Word(tuple((i, -e) for i, e in reversed(self.factors)))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.factors + other.factors)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        return Word(self.factors * k)

    def indices(self):
        return {i for i, _ in self.factors}

    def letters(self):
        """Expand to single letters (index, +1 or -1)."""
        out = []
        for i, e in self.factors:
            s = 1 if e > 0 else -1
            out.extend([(i, s)] * abs(e))
        return out

    def substitute(self, table) -> "Word":
        """Replace each generator i by the word ``table[i]``."""
        out = Word()
        for i, e in self.factors:
            out = out * (table[i] ** e)
        return out


def comm_word(a: Word, b: Word) -> Word:
    return a.inverse() * b.inverse() * a * b


_TOKEN = re.compile(r"^(\d+)(?:\^(-?\d+))?$")


def parse_word(text: str, ngens: int) -> Word:
    text = text.strip()
    if text in ("", "1"):
        return Word()
    factors = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise MalformedInput(f"bad word factor {tok!r}")
        idx = int(m.group(1))
        e = int(m.group(2)) if m.group(2) is not None else 1
        if not 1 <= idx <= ngens:
            raise MalformedInput(f"generator index {idx} out of range 1..{ngens}")
        if e == 0:
            continue
        factors.append((idx - 1, e))
    return Word(tuple(factors))


@dataclass(frozen=True)
class PcPresentation:
    prime: int
    ngens: int
    power_rhs: tuple                      # Word per generator
    comm_rhs: dict = field(default_factory=dict)   # (j, i) -> Word, j > i
    definitions: dict = field(default_factory=dict)  # i -> Word over user generators

    def __hash__(self):
        return hash((self.prime, self.ngens, self.power_rhs,
                     tuple(sorted(self.comm_rhs.items()))))

    def to_text(self) -> str:
        lines = [f"prime {self.prime}", f"gens {self.ngens}"]
        for i, w in enumerate(self.power_rhs):
            if w.factors:
                lines.append(f"power {i + 1} = {w}")
        for (j, i), w in sorted(self.comm_rhs.items(), key=lambda t: (t[0][1], t[0][0])):
            if w.factors:
                lines.append(f"comm {j + 1} {i + 1} = {w}")
        for i, w in sorted(self.definitions.items()):
            lines.append(f"def {i + 1} = {_word_text(w)}")
        return "\n".join(lines) + "\n"


def _word_text(w: Word) -> str:
    # a lone generator 1 must not read as the identity literal
    if len(w.factors) == 1 and w.factors[0] == (0, 1):
        return "1^1"
    return str(w)


def make_presentation(p, n, powers=None, comms=None, definitions=None) -> PcPresentation:
    """Build a presentation from 0-based dicts of exponent lists or Words."""
    def as_word(w):
        if isinstance(w, Word):
            return w
        return Word(tuple((k, e) for k, e in enumerate(w) if e % p))

    pw = [Word()] * n
    for i, w in (powers or {}).items():
        pw[i] = as_word(w)
    cm = {}
    for (j, i), w in (comms or {}).items():
        w = as_word(w)
        if w.factors:
            cm[(j, i)] = w
    pres = PcPresentation(p, n, tuple(pw), cm, dict(definitions or {}))
    _check_weights(pres)
    return pres


def _check_weights(pres: PcPresentation):
    n = pres.ngens
    for i, w in enumerate(pres.power_rhs):
        for k in w.indices():
            if k <= i:
                raise WeightViolation(f"power {i + 1}: generator {k + 1} not above {i + 1}")
    for (j, i), w in pres.comm_rhs.items():
        if not (0 <= i < j < n):
            raise WeightViolation(f"comm {j + 1} {i + 1}: need j > i")
        for k in w.indices():
            if k <= j:
                raise WeightViolation(f"comm {j + 1} {i + 1}: generator {k + 1} not above {j + 1}")


def parse_pcp(text: str) -> PcPresentation:
    """Parse the line-oriented presentation format."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if len(lines) < 2:
        raise MalformedInput("expected 'prime <p>' and 'gens <n>' lines")
    m = re.fullmatch(r"prime\s+(\d+)", lines[0])
    if not m:
        raise MalformedInput("first line must be 'prime <p>'")
    p = int(m.group(1))
    if not is_prime(p):
        raise BadPrime(f"{p} is not prime")
    m = re.fullmatch(r"gens\s+(\d+)", lines[1])
    if not m or int(m.group(1)) < 1:
        raise MalformedInput("second line must be 'gens <n>' with n >= 1")
    n = int(m.group(1))
    powers, comms, defs = {}, {}, {}
    for line in lines[2:]:
        if "=" not in line:
            raise MalformedInput(f"missing '=' in {line!r}")
        head, rhs = (s.strip() for s in line.split("=", 1))
        parts = head.split()
        try:
            nums = [int(x) for x in parts[1:]]
        except ValueError:
            raise MalformedInput(f"bad relation head {head!r}") from None
        if any(not 1 <= x <= n for x in nums):
            raise MalformedInput(f"generator index out of range in {head!r}")
        word = parse_word(rhs, n)
        if parts[0] == "power" and len(nums) == 1:
            i = nums[0] - 1
            if i in powers:
                raise MalformedInput(f"duplicate power relation for {i + 1}")
            powers[i] = word
        elif parts[0] == "comm" and len(nums) == 2:
            j, i = nums[0] - 1, nums[1] - 1
            if j <= i:
                raise WeightViolation(f"comm {j + 1} {i + 1}: need j > i")
            if (j, i) in comms:
                raise MalformedInput(f"duplicate comm relation {j + 1} {i + 1}")
            comms[(j, i)] = word
        elif parts[0] == "def" and len(nums) == 1:
            i = nums[0] - 1
            if i in defs:
                raise MalformedInput(f"duplicate def for {i + 1}")
            defs[i] = word
        elif parts[0] in ("prime", "gens"):
            raise MalformedInput(f"{parts[0]!r} may appear only once, at the top")
        else:
            raise MalformedInput(f"unrecognised line {line!r}")
    pw = tuple(powers.get(i, Word()) for i in range(n))
    pres = PcPresentation(p, n, pw, {k: w for k, w in comms.items() if w.factors}, defs)
    _check_weights(pres)
    return pres


class GroupContext:
    """Arithmetic over a (weighted, all relative orders p) pc presentation.

    Right multiplication by each generator is tabulated by collection from the
    left; a full Cayley table is built on demand for groups up to
    ``TABLE_LIMIT`` elements.
    """

    def __init__(self, presentation: PcPresentation, *, name=None, conj_override=None):
        self.presentation = presentation
        self.name = name
        self.p = p = presentation.prime
        self.n = n = presentation.ngens
        self.order = p ** n
        self.place = [p ** (n - 1 - k) for k in range(n)]
        self._table = None
        R = np.zeros((n, self.order), dtype=np.int64)
        self.power_codes = [0] * n
        self.conj_codes = [[0] * n for _ in range(n)]
        self._R = R
        for i in range(n - 1, -1, -1):
            self.power_codes[i] = self._normalize_with(presentation.power_rhs[i])
            for j in range(i + 1, n):
                w = presentation.comm_rhs.get((j, i), Word())
                self.conj_codes[j][i] = self.place[j] + self._normalize_with(w)
            if conj_override:
                for (j, ii), code in conj_override.items():
                    if ii == i:
                        self.conj_codes[j][i] = code
            kernels.fill_right_row(R, i, p, n, self.power_codes[i], self.conj_codes_for(i))
        R.setflags(write=False)
        self._user = None

    def conj_codes_for(self, i):
        return np.array([self.conj_codes[j][i] if j > i else 0 for j in range(self.n)],
                        dtype=np.int64)

    def __repr__(self):
        label = self.name or "group"
        return f"<GroupContext {label}: p={self.p}, n={self.n}>"

    # -- codes and exponent vectors ------------------------------------------------
    def exps(self, code: int) -> tuple:
        p = self.p
        return tuple((int(code) // w) % p for w in self.place)

    def code(self, exps) -> int:
        if len(exps) != self.n:
            raise ValueError(f"expected {self.n} exponents, got {len(exps)}")
        return sum((int(e) % self.p) * w for e, w in zip(exps, self.place))

    def gen(self, i: int) -> int:
        return self.place[i]

    @property
    def gens(self):
        return list(self.place)

    def digits(self, codes):
        """Exponent matrix (len(codes) x n) of an array of codes."""
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[:, None] // np.array(self.place, dtype=np.int64)[None, :]) % self.p

    def element(self, exps) -> "Element":
        return Element(self, self.code(exps))

    def identity(self) -> "Element":
        return Element(self, 0)

    # -- arithmetic by collection ----------------------------------------------
    def _mul_fold(self, a: int, b: int) -> int:
        R = self._R
        p = self.p
        for k, w in enumerate(self.place):
            d = (b // w) % p
            for _ in range(d):
                a = int(R[k, a])
        return a

    def _normalize_with(self, word: Word) -> int:
        # used while R is still being filled; only rows above the word's indices are read
        acc = 0
        for i, e in word.factors:
            g = self.place[i]
            if e < 0:
                g = self._inverse_fold(g)
                e = -e
            for _ in range(e):
                acc = self._mul_fold(acc, g)
        return acc

    def _inverse_fold(self, a: int) -> int:
        # a^-1 = a^(o-1) where o = order(a)
        prev, x = 0, a
        while x != 0:
            prev = x
            x = self._mul_fold(x, a)
        return prev

    @property
    def right_tables(self):
        return self._R

    @property
    def has_table(self) -> bool:
        return self.order <= TABLE_LIMIT

    @property
    def table(self):
        if self._table is None:
            if not self.has_table:
                return None
            T = kernels.cayley(self._R, self.p, self.n)
            T.setflags(write=False)
            self._table = T
        return self._table

    def mul(self, a: int, b: int) -> int:
        T = self.table
        if T is not None:
            return int(T[a, b])
        return self._mul_fold(int(a), int(b))

    def mul_arr(self, A, B):
        """Elementwise product of code arrays (broadcasting)."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        T = self.table
        if T is not None:
            return T[A, B]
        A, B = np.broadcast_arrays(A, B)
        out = A.copy()
        for k, w in enumerate(self.place):
            d = (B // w) % self.p
            for s in range(self.p - 1):
                sel = d > s
                out = np.where(sel, self._R[k][out], out)
        return out

    @cached_property
    def inverses(self):
        inv = self.pow_arr(np.arange(self.order), self.order - 1)
        inv.setflags(write=False)
        return inv

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def pow_arr(self, A, k: int):
        A = np.asarray(A, dtype=np.int64)
        k %= self.order
        out = np.zeros_like(A)
        base = A
        while k:
            if k & 1:
                out = self.mul_arr(out, base)
            base = self.mul_arr(base, base)
            k >>= 1
        return out

    def pow(self, a: int, k: int) -> int:
        return int(self.pow_arr(np.array([a]), k)[0])

    def comm(self, a: int, b: int) -> int:
        i = self.inverses
        return self.mul(self.mul(int(i[a]), int(i[b])), self.mul(a, b))

    def comm_arr(self, A, B):
        i = self.inverses
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        return self.mul_arr(self.mul_arr(i[A], i[B]), self.mul_arr(A, B))

    def conj(self, a: int, b: int) -> int:
        """a^b = b^-1 a b."""
        return self.mul(self.mul(self.inv(b), a), b)

    def conj_arr(self, A, B):
        B = np.asarray(B, dtype=np.int64)
        return self.mul_arr(self.mul_arr(self.inverses[B], A), B)

    @cached_property
    def orders(self):
        """Order of every element."""
        o = np.ones(self.order, dtype=np.int64)
        x = np.arange(self.order, dtype=np.int64)
        while True:
            live = x != 0
            if not live.any():
                break
            o[live] *= self.p
            x = self.pow_arr(x, self.p)
        o.setflags(write=False)
        return o

    def order_of(self, a: int) -> int:
        return int(self.orders[a])

    def normalize(self, word: Word) -> int:
        acc = 0
        for i, e in word.factors:
            g = self.place[i]
            if e < 0:
                g = self.inv(g)
                e = -e
            for _ in range(e):
                acc = self.mul(acc, g)
        return acc

    def eval_word(self, word: Word, images) -> int:
        """Evaluate a word with generator i replaced by the code ``images[i]``."""
        acc = 0
        for i, e in word.factors:
            g = images[i]
            if e < 0:
                g = self.inv(g)
                e = -e
            for _ in range(e):
                acc = self.mul(acc, g)
        return acc

    def word_of(self, code: int) -> Word:
        """The normal-form word of a code."""
        return Word(tuple((k, e) for k, e in enumerate(self.exps(code)) if e))

    # -- basic subgroup scans used by the user-generator bookkeeping ------------
    def closure_mask(self, gens):
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = np.array([0], dtype=np.int64)
        gens = [int(g) for g in gens]
        while frontier.size:
            new = np.unique(np.concatenate([self.mul_arr(frontier, g) for g in gens])) \
                if gens else np.zeros(0, dtype=np.int64)
            new = new[~mask[new]]
            mask[new] = True
            frontier = new
        return mask

    def normal_closure_mask(self, gens):
        gens = [int(g) for g in gens]
        mask = self.closure_mask(gens)
        while True:
            elems = np.nonzero(mask)[0]
            conj = np.concatenate([self.conj_arr(elems, g) for g in self.gens])
            if mask[conj].all():
                return mask
            mask = self.closure_mask(np.concatenate([elems, conj[~mask[conj]]]))

    @cached_property
    def frattini_mask(self):
        p, n = self.p, self.n
        seeds = [self.pow(g, p) for g in self.gens]
        seeds += [self.comm(self.gen(j), self.gen(i)) for j in range(n) for i in range(j)]
        return self.normal_closure_mask(seeds)

    @cached_property
    def frattini_cosets(self):
        """Canonical (minimal) code of the coset x*Phi(G) for every x."""
        F = np.nonzero(self.frattini_mask)[0]
        ids = np.full(self.order, self.order, dtype=np.int64)
        for f in F:
            ids = np.minimum(ids, self.mul_arr(np.arange(self.order), f))
        ids.setflags(write=False)
        return ids

    def _span_cosets(self, gens):
        cos = self.frattini_cosets
        span = {0}
        for g in gens:
            new = set()
            for s in span:
                x = s
                for _ in range(self.p):
                    new.add(int(cos[x]))
                    x = self.mul(x, g)
            span = new
        return span

    @cached_property
    def frattini_coords(self):
        """Coordinates of x*Phi(G) in the basis of user generators, as a base-p integer."""
        cos = self.frattini_cosets
        user = [self.gen(u) for u in self.user_gens]
        p, d = self.p, len(user)
        coord_of = {}
        for v in range(p ** d):
            x = 0
            for k in range(d):
                e = (v // p ** (d - 1 - k)) % p
                for _ in range(e):
                    x = self.mul(x, user[k])
            coord_of[int(cos[x])] = v
        out = np.array([coord_of[int(c)] for c in cos], dtype=np.int64)
        out.setflags(write=False)
        return out

    # -- user generators and definition words -----------------------------------
    @property
    def user_gens(self) -> tuple:
        """pc indices of the user generators (those without a definition)."""
        if self._user is None:
            self._user = self._setup_user()
        return self._user[0]

    @property
    def def_words(self) -> dict:
        """Definition word (over user generators) for every pc generator."""
        if self._user is None:
            self._user = self._setup_user()
        return self._user[1]

    def _setup_user(self):
        pres = self.presentation
        n = self.n
        if pres.definitions:
            user = tuple(i for i in range(n) if i not in pres.definitions)
            defs = {}
            for i, w in pres.definitions.items():
                if not w.indices() <= set(user):
                    raise MalformedInput(f"def {i + 1} uses a defined generator")
                if self.normalize(w) != self.gen(i):
                    raise MalformedInput(f"def {i + 1} = {w} does not evaluate to generator {i + 1}")
                defs[i] = w
            if not self.closure_mask([self.gen(u) for u in user]).all():
                raise MalformedInput("user generators do not generate the group")
        else:
            cos = self.frattini_cosets
            user = []
            span = {0}
            for i in range(n):
                c = int(cos[self.gen(i)])
                if c in span:
                    continue
                user.append(i)
                span = self._span_cosets([self.gen(u) for u in user])
            user = tuple(user)
            words = self._bfs_words([self.gen(u) for u in user])
            defs = {}
            for i in range(n):
                if i in user:
                    continue
                defs[i] = _compress([user[k] for k in words[self.gen(i)]])
        for u in user:
            defs[u] = Word(((u, 1),))
        return user, defs

    def _bfs_words(self, gens):
        """Shortest positive words (as letter lists) for every element."""
        words = {0: []}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for k, g in enumerate(gens):
                    y = self.mul(x, g)
                    if y not in words:
                        words[y] = words[x] + [k]
                        nxt.append(y)
            frontier = nxt
        return words

    def images_from_user(self, user_images) -> tuple:
        """pc-generator images of the map determined by images of the user generators."""
        slots = [0] * self.n
        for u, c in zip(self.user_gens, user_images):
            slots[u] = int(c)
        return tuple(self.eval_word(self.def_words[i], slots) for i in range(self.n))


def _compress(letters) -> Word:
    factors = []
    for k in letters:
        if factors and factors[-1][0] == k:
            factors[-1] = (k, factors[-1][1] + 1)
        else:
            factors.append((k, 1))
    return Word(tuple(factors))


class Element:
    """An element of a GroupContext, in exponent-vector normal form."""

    __slots__ = ("ctx", "code")

    def __init__(self, ctx: GroupContext, code: int):
        self.ctx = ctx
        self.code = int(code)

    @property
    def exps(self) -> tuple:
        return self.ctx.exps(self.code)

    def _same(self, other):
        if not isinstance(other, Element) or other.ctx is not self.ctx:
            raise ContextMismatch("elements belong to different groups")

    def __mul__(self, other):
        return multiply(self, other)

    def __pow__(self, k):
        return power(self, k)

    def __invert__(self):
        return inverse(self)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.ctx is other.ctx and self.code == other.code
        if isinstance(other, tuple):
            return self.exps == other
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ctx), self.code))

    def __repr__(self):
        return f"Element{self.exps}"


def _check(*els):
    ctx = els[0].ctx
    for e in els[1:]:
        if e.ctx is not ctx:
            raise ContextMismatch("elements belong to different groups")
    return ctx


def normalize(ctx: GroupContext, word: Word) -> Element:
    return Element(ctx, ctx.normalize(word))


def multiply(a: Element, b: Element) -> Element:
    ctx = _check(a, b)
    return Element(ctx, ctx.mul(a.code, b.code))


def inverse(a: Element) -> Element:
    return Element(a.ctx, a.ctx.inv(a.code))


def power(a: Element, k: int) -> Element:
    return Element(a.ctx, a.ctx.pow(a.code, k))


def commutator(a: Element, b: Element) -> Element:
    ctx = _check(a, b)
    return Element(ctx, ctx.comm(a.code, b.code))


def conjugate(a: Element, b: Element) -> Element:
    """a^b = b^-1 a b."""
    ctx = _check(a, b)
    return Element(ctx, ctx.conj(a.code, b.code))


def element_order(a: Element) -> int:
    return a.ctx.order_of(a.code)


@dataclass(frozen=True)
class Consistency:
    ok: bool
    witness: tuple = None    # failing triple of exponent vectors
    method: str = ""

    def __bool__(self):
        return self.ok


def _test_triples(ctx: GroupContext):
    p, n, g = ctx.p, ctx.n, ctx.gen
    for k in range(n):
        for j in range(k):
            for i in range(j):
                yield g(k), g(j), g(i)
    for j in range(n):
        for i in range(j):
            yield ctx._pow_fold(g(j), p - 1), g(j), g(i)
            yield g(j), ctx._pow_fold(g(i), p - 1), g(i)
    for i in range(n):
        yield ctx._pow_fold(g(i), p - 1), g(i), g(i)


def _pow_fold(self, a, k):
    acc = 0
    for _ in range(k):
        acc = self._mul_fold(acc, a)
    return acc


GroupContext._pow_fold = _pow_fold


def consistency_check(P, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                      samples: int = 10 ** 5, seed: int = 0) -> Consistency:
    """Check that collection defines an associative product.

    The standard test words for weighted presentations are always run. Up to
    ``exhaustive_limit`` elements the Cayley table is then checked with Light's
    test, (xy)g = x(yg) for all x, y and every generator g, which holds iff the
    product is associative on all triples. Larger groups get ``samples``
    random triples instead.
    """
    ctx = P if isinstance(P, GroupContext) else GroupContext(P)
    fold = ctx._mul_fold
    for a, b, c in _test_triples(ctx):
        if fold(fold(a, b), c) != fold(a, fold(b, c)):
            return Consistency(False, (ctx.exps(a), ctx.exps(b), ctx.exps(c)), "test-words")
    if ctx.order <= min(exhaustive_limit, TABLE_LIMIT):
        T = ctx.table
        N = ctx.order
        step = max(1, 2 ** 22 // N)
        for k in range(ctx.n):
            Rk = ctx.right_tables[k]
            g = ctx.gen(k)
            for lo in range(0, N, step):
                left = Rk[T[lo:lo + step]]            # (xy)g
                right = T[lo:lo + step][:, Rk]        # x(yg)
                bad = np.nonzero(left != right)
                if len(bad[0]):
                    x, y = lo + int(bad[0][0]), int(bad[1][0])
                    return Consistency(False, (ctx.exps(x), ctx.exps(y), ctx.exps(g)), "light")
        return Consistency(True, None, "light")
    rng = random.Random(seed)
    N = ctx.order
    for _ in range(samples):
        a, b, c = rng.randrange(N), rng.randrange(N), rng.randrange(N)
        if fold(fold(a, b), c) != fold(a, fold(b, c)):
            return Consistency(False, (ctx.exps(a), ctx.exps(b), ctx.exps(c)), "sampled")
    return Consistency(True, None, "sampled")


def associativity_triples(ctx: GroupContext):
    """Literal scan of all |G|^3 triples; returns the first failure or None."""
    bad = kernels.assoc_triples(np.ascontiguousarray(ctx.table))
    if bad is None:
        return None
    return tuple(ctx.exps(x) for x in bad)


def load_group(path, name=None) -> GroupContext:
    with open(path) as fh:
        return GroupContext(parse_pcp(fh.read()), name=name or str(path))
