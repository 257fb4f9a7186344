"""Straight-line programs: acyclic grammars that generate exactly one word.

An :class:`Slp` stores an ordered mapping from nonterminal names to
right-hand sides of arbitrary arity (the empty right-hand side is allowed).
A right-hand-side symbol that is a single character of the alphabet is a
terminal; any other symbol must have its own production.  All word algebra
(concatenation, slicing, powers, cyclic shifts, homomorphic images,
single-symbol trims) works on the grammars directly, without expanding the
generated words, so words of astronomical length stay cheap to manipulate.

Word positions and lengths are plain Python ints throughout; they routinely
exceed machine-word range.
"""

from __future__ import annotations

import random
from typing import Iterable, Mapping

from .errors import (
    AlphabetMismatch,
    BadRange,
    BadShift,
    CapExceeded,
    EmptyBase,
    EmptyWord,
    FormatError,
    IndexOutOfRange,
    NonIntegralResult,
    SymbolMismatch,
)


class Slp:
    """A straight-line program: alphabet, productions and an axiom.

    Instances are treated as immutable; every operation in this module
    returns a new program.  Construction performs no validation -- run
    :func:`validate` to check the invariants.
    """

    __slots__ = ("alphabet", "productions", "axiom", "_topo_cache", "_len_cache")

    def __init__(self, alphabet: Iterable[str], productions, axiom: str):
        self.alphabet = frozenset(alphabet)
        items = productions.items() if isinstance(productions, dict) else productions
        self.productions = {name: tuple(rhs) for name, rhs in items}
        self.axiom = axiom
        self._topo_cache = None
        self._len_cache = None

    def __eq__(self, other):
        return (
            isinstance(other, Slp)
            and self.alphabet == other.alphabet
            and self.productions == other.productions
            and self.axiom == other.axiom
        )

    def __hash__(self):
        return hash((self.alphabet, tuple(self.productions.items()), self.axiom))

    def __repr__(self):
        return f"Slp(axiom={self.axiom!r}, productions={len(self.productions)})"


def validate(p: Slp) -> str | None:
    """Check the Slp invariants; return None if fine, else a diagnostic.

    The diagnostic names the first violated invariant and the offending
    symbol: alphabet symbols must be single characters, nonterminal names
    must not collide with the alphabet, every mentioned nonterminal needs a
    production (including the axiom), and the mention relation must be
    acyclic.
    """
    for sym in sorted(p.alphabet):
        if len(sym) != 1:
            return f"alphabet symbol {sym!r} is not a single character"
    for name in p.productions:
        if name in p.alphabet:
            return f"nonterminal {name} collides with the alphabet"
    if p.axiom not in p.productions:
        return f"missing production {p.axiom}"
    for name, rhs in p.productions.items():
        for sym in rhs:
            if sym not in p.alphabet and sym not in p.productions:
                return f"missing production {sym}"
    # Acyclicity by iterative depth-first search.
    state: dict[str, int] = {}  # 1 = on stack, 2 = done
    for root in p.productions:
        if state.get(root):
            continue
        stack = [(root, 0)]
        state[root] = 1
        while stack:
            name, i = stack[-1]
            rhs = p.productions[name]
            advanced = False
            while i < len(rhs):
                child = rhs[i]
                i += 1
                if child in p.alphabet or state.get(child) == 2:
                    continue
                if state.get(child) == 1:
                    return f"cycle at {child}"
                stack[-1] = (name, i)
                stack.append((child, 0))
                state[child] = 1
                advanced = True
                break
            if not advanced:
                state[name] = 2
                stack.pop()
    return None


def _toposort(p: Slp, roots) -> list[str]:
    """Children-first order of the productions reachable from roots."""
    done: set[str] = set()
    order: list[str] = []
    for root in roots:
        if root in p.alphabet or root in done:
            continue
        stack = [(root, 0)]
        on_stack = {root}
        while stack:
            name, i = stack[-1]
            rhs = p.productions[name]
            advanced = False
            while i < len(rhs):
                child = rhs[i]
                i += 1
                if child in p.alphabet or child in done:
                    continue
                if child in on_stack:
                    raise ValueError(f"cyclic program (at {child})")
                stack[-1] = (name, i)
                stack.append((child, 0))
                on_stack.add(child)
                advanced = True
                break
            if not advanced:
                stack.pop()
                on_stack.discard(name)
                done.add(name)
                order.append(name)
    return order


def _all_lengths(p: Slp) -> dict[str, int]:
    if p._len_cache is None:
        lens: dict[str, int] = {}
        for name in _toposort(p, p.productions.keys()):
            lens[name] = sum(
                1 if s in p.alphabet else lens[s] for s in p.productions[name]
            )
        p._len_cache = lens
    return p._len_cache


def length(p: Slp) -> int:
    """Length of the generated word, computed bottom-up without expansion."""
    return _all_lengths(p)[p.axiom]


def expand(p: Slp, cap: int) -> str:
    """The generated word itself, provided it is no longer than cap."""
    n = length(p)
    if n > cap:
        raise CapExceeded(n)
    words: dict[str, str] = {}
    for name in _toposort(p, [p.axiom]):
        words[name] = "".join(
            s if s in p.alphabet else words[s] for s in p.productions[name]
        )
    return words[p.axiom]


def query(p: Slp, n: int) -> str:
    """The n-th symbol (0-indexed) of the generated word, by length-guided descent."""
    if not 0 <= n < length(p):
        raise IndexOutOfRange(f"position {n} outside word of length {length(p)}")
    lens = _all_lengths(p)
    sym = p.axiom
    while sym not in p.alphabet:
        for child in p.productions[sym]:
            k = 1 if child in p.alphabet else lens[child]
            if n < k:
                sym = child
                break
            n -= k
    return sym


def first_symbol(p: Slp) -> str:
    return query(p, 0)


def last_symbol(p: Slp) -> str:
    return query(p, length(p) - 1)


def count(p: Slp, symbol: str) -> int:
    """Number of occurrences of a terminal in the generated word."""
    counts: dict[str, int] = {}
    for name in _toposort(p, [p.axiom]):
        counts[name] = sum(
            (1 if s == symbol else 0) if s in p.alphabet else counts[s]
            for s in p.productions[name]
        )
    return counts[p.axiom]


def literal(word: str, alphabet: Iterable[str] | None = None) -> Slp:
    """A one-production program generating exactly the given word."""
    return Slp(set(word) if alphabet is None else alphabet, {"S": tuple(word)}, "S")


class _Store:
    """Mutable production store used to assemble derived programs.

    Names are generated fresh; identical right-hand sides are merged, and a
    right-hand side consisting of a single nonterminal collapses to that
    nonterminal, so chain productions never materialize.  Importing the same
    Slp object twice shares one copy of its productions, which keeps
    repeated self-composition (as in the hardness-instance generators)
    polynomial in size.
    """

    def __init__(self, alphabet: Iterable[str]):
        self.alphabet = frozenset(alphabet)
        self.prods: dict[str, tuple[str, ...]] = {}
        self.lengths: dict[str, int] = {}
        self._memo: dict[tuple[str, ...], str] = {}
        self._imports: dict[int, str] = {}
        self._refs: list[Slp] = []
        self._next = 0

    def sym_length(self, sym: str) -> int:
        return 1 if sym in self.alphabet else self.lengths[sym]

    def add(self, rhs) -> str:
        rhs = tuple(rhs)
        if len(rhs) == 1 and rhs[0] not in self.alphabet:
            return rhs[0]
        name = self._memo.get(rhs)
        if name is None:
            self._next += 1
            name = f"n{self._next}"
            self.prods[name] = rhs
            self.lengths[name] = sum(self.sym_length(s) for s in rhs)
            self._memo[rhs] = name
        return name

    def imp(self, p: Slp, termmap: Mapping[str, str] | None = None) -> str:
        """Copy p's reachable productions in; return the local name for its word.

        With termmap, every terminal is replaced by its image word on the
        way in (the image must use this store's alphabet).
        """
        if termmap is None and id(p) in self._imports:
            return self._imports[id(p)]
        mapping: dict[str, str] = {}
        for name in _toposort(p, [p.axiom]):
            parts: list[str] = []
            for s in p.productions[name]:
                if s in p.alphabet:
                    if termmap is None:
                        parts.append(s)
                    else:
                        parts.extend(termmap[s])
                else:
                    parts.append(mapping[s])
            mapping[name] = self.add(parts)
        local = mapping[p.axiom]
        if termmap is None:
            self._imports[id(p)] = local
            self._refs.append(p)  # keep alive: the memo is keyed by id
        return local

    def expand_sym(self, sym: str, cap: int) -> str:
        if self.sym_length(sym) > cap:
            raise CapExceeded(self.sym_length(sym))
        if sym in self.alphabet:
            return sym
        out: list[str] = []
        stack = [sym]
        while stack:
            s = stack.pop()
            if s in self.alphabet:
                out.append(s)
            else:
                stack.extend(reversed(self.prods[s]))
        return "".join(out)

    def build(self, axiom_sym: str, alphabet: Iterable[str] | None = None) -> Slp:
        """Extract the grammar reachable from axiom_sym as a canonical Slp.

        Productions are renamed N0, N1, ... in first-visit order with the
        axiom first, so equal builds give byte-identical programs.
        """
        if axiom_sym in self.alphabet:
            axiom_sym = self.add((axiom_sym,))
        names = {axiom_sym: "N0"}
        order = [axiom_sym]
        queue = [axiom_sym]
        while queue:
            cur = queue.pop()
            for s in self.prods[cur]:
                if s not in self.alphabet and s not in names:
                    names[s] = f"N{len(names)}"
                    order.append(s)
                    queue.append(s)
        prods = {
            names[n]: tuple(s if s in self.alphabet else names[s] for s in self.prods[n])
            for n in order
        }
        return Slp(self.alphabet if alphabet is None else alphabet, prods, "N0")


def _take_sym(st: _Store, sym: str, k: int) -> str:
    """Name for the first k symbols of sym's word.

    Iterative along the grammar spine: grammars can be deeper than the
    interpreter's recursion budget.
    """
    spine: list[list[str]] = []  # fully kept prefix children, outermost first
    while 0 < k < st.sym_length(sym):
        kept: list[str] = []
        child = sym
        for child in st.prods[sym]:
            n = st.sym_length(child)
            if n > k:
                break
            kept.append(child)
            k -= n
        spine.append(kept)
        sym = child
    cur = st.add(()) if k == 0 else sym
    for kept in reversed(spine):
        cur = st.add((*kept, cur))
    return cur


def _drop_sym(st: _Store, sym: str, k: int) -> str:
    """Name for sym's word with the first k symbols removed (iterative)."""
    spine: list[tuple[str, ...]] = []  # fully kept suffix children per level
    while 0 < k < st.sym_length(sym):
        rhs = st.prods[sym]
        i = 0
        for i, child in enumerate(rhs):
            n = st.sym_length(child)
            if k < n:
                break
            k -= n
        spine.append(rhs[i + 1:])
        sym = rhs[i]
    cur = st.add(()) if k else sym
    for rest in reversed(spine):
        cur = st.add((cur, *rest))
    return cur


def _pow_sym(st: _Store, sym: str, k: int) -> str:
    """Name for the k-th power of sym's word, by binary doubling."""
    if k == 0:
        return st.add(())
    acc = None
    cur = sym
    while k:
        if k & 1:
            acc = cur if acc is None else st.add((acc, cur))
        k >>= 1
        if k:
            cur = st.add((cur, cur))
    return st.add((acc,)) if acc in st.alphabet else acc


def concat(p1: Slp, p2: Slp) -> Slp:
    """Program generating str(p1) followed by str(p2)."""
    if p1.alphabet != p2.alphabet:
        raise AlphabetMismatch(f"{sorted(p1.alphabet)} vs {sorted(p2.alphabet)}")
    st = _Store(p1.alphabet)
    return st.build(st.add((st.imp(p1), st.imp(p2))))


def slice(p: Slp, a: int, b: int) -> Slp:  # noqa: A001 - deliberate, matches the operation
    """Program generating the subword at positions [a, b)."""
    n = length(p)
    if not 0 <= a <= b <= n:
        raise BadRange(f"[{a}, {b}) not within [0, {n})")
    st = _Store(p.alphabet)
    return st.build(_take_sym(st, _drop_sym(st, st.imp(p), a), b - a))


def power(p: Slp, num: int, den: int = 1) -> Slp:
    """Program for str(p) raised to num/den, which must yield a whole word.

    Fractional exponents follow w**(k + r/|w|) = w**k . w[0, r): built with
    logarithmically many doublings plus one slice.
    """
    if den < 1 or num < 0:
        raise BadRange(f"exponent {num}/{den} out of range")
    n = length(p)
    if n == 0:
        raise EmptyBase("cannot raise the empty word to a power")
    total = num * n
    if total % den:
        raise NonIntegralResult(f"({num}/{den}) * {n} is not an integer")
    whole, rest = divmod(total // den, n)
    st = _Store(p.alphabet)
    ax = st.imp(p)
    parts = []
    if whole:
        parts.append(_pow_sym(st, ax, whole))
    if rest:
        parts.append(_take_sym(st, ax, rest))
    return st.build(st.add(parts))


def cyclic_shift(p: Slp, s: int) -> Slp:
    """Program for w[s, |w|) . w[0, s)."""
    n = length(p)
    if n < 1 or not 0 <= s < n:
        raise BadShift(f"shift {s} invalid for word of length {n}")
    st = _Store(p.alphabet)
    ax = st.imp(p)
    return st.build(st.add((_drop_sym(st, ax, s), _take_sym(st, ax, s))))


def substitute(p: Slp, images: Mapping[str, str], alphabet: Iterable[str] | None = None) -> Slp:
    """Homomorphic image: every terminal is replaced by its image word.

    The target alphabet defaults to the union of the image words' symbols.
    """
    missing = p.alphabet - images.keys()
    if missing:
        raise KeyError(f"no image for terminal(s) {sorted(missing)}")
    if alphabet is None:
        alphabet = {ch for sym in p.alphabet for ch in images[sym]}
    st = _Store(alphabet)
    return st.build(st.imp(p, termmap=images))


def trim(p: Slp, end: str, symbol: str) -> Slp:
    """Remove one symbol from the chosen end ("front" or "back").

    The symbol actually there must equal the expected one.
    """
    if end not in ("front", "back"):
        raise ValueError(f"end must be 'front' or 'back', not {end!r}")
    n = length(p)
    if n == 0:
        raise EmptyWord("cannot trim the empty word")
    found = query(p, 0 if end == "front" else n - 1)
    if found != symbol:
        raise SymbolMismatch(f"{end} symbol is {found!r}, expected {symbol!r}")
    return slice(p, 1, n) if end == "front" else slice(p, 0, n - 1)


def to_cnf(p: Slp) -> Slp:
    """Equivalent program in Chomsky normal form.

    Empty and chain productions are eliminated, longer right-hand sides are
    binarized by a left fold, and terminal wrappers are shared, so the result
    is deterministic.
    """
    if length(p) == 0:
        raise EmptyWord("the empty word has no Chomsky normal form")
    lens = _all_lengths(p)
    st = _Store(p.alphabet)
    mapping: dict[str, str] = {}
    for name in _toposort(p, [p.axiom]):
        if lens[name] == 0:
            continue
        parts: list[str] = []
        for s in p.productions[name]:
            if s in p.alphabet:
                parts.append(st.add((s,)))
            elif lens[s] > 0:
                parts.append(mapping[s])
        cur = parts[0]
        for nxt in parts[1:]:
            cur = st.add((cur, nxt))
        mapping[name] = cur
    return st.build(mapping[p.axiom])


def size(p: Slp) -> int:
    """Number of nonterminals in the Chomsky normal form; 0 for the empty word."""
    if length(p) == 0:
        return 0
    return len(to_cnf(p).productions)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    # Deterministic Miller-Rabin, valid far beyond the 60-bit range used here.
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _random_prime(rng: random.Random) -> int:
    n = rng.randrange(1 << 59, 1 << 60) | 1
    while not _is_prime(n):
        n += 2
    return n


def _fingerprint(p: Slp, digits: Mapping[str, int], base: int, mod: int) -> int:
    """Generated word read as a base-|alphabet| number, modulo a prime."""
    lens = _all_lengths(p)
    vals: dict[str, int] = {}
    for name in _toposort(p, [p.axiom]):
        v = 0
        for s in p.productions[name]:
            if s in p.alphabet:
                v = (v * base + digits[s]) % mod
            else:
                v = (v * pow(base, lens[s], mod) + vals[s]) % mod
        vals[name] = v
    return vals[p.axiom]


def equal(
    p1: Slp,
    p2: Slp,
    *,
    exact_threshold: int = 4096,
    fingerprints: int = 3,
    seed: int = 0,
) -> bool:
    """Whether both programs generate the same word.

    Lengths are compared first; words up to exact_threshold are expanded and
    compared exactly.  Longer words are compared through modular
    fingerprints for `fingerprints` independently drawn word-size primes.
    The error is one-sided: False is always correct, True is wrong with
    probability at most (|word| / 2**60) ** fingerprints.
    """
    if p1.alphabet != p2.alphabet:
        raise AlphabetMismatch(f"{sorted(p1.alphabet)} vs {sorted(p2.alphabet)}")
    n = length(p1)
    if n != length(p2):
        return False
    if n <= exact_threshold:
        return expand(p1, n) == expand(p2, n)
    digits = {sym: i for i, sym in enumerate(sorted(p1.alphabet))}
    base = max(2, len(digits))
    rng = random.Random(seed)
    for _ in range(fingerprints):
        mod = _random_prime(rng)
        if _fingerprint(p1, digits, base, mod) != _fingerprint(p2, digits, base, mod):
            return False
    return True


def parse_slp(text: str) -> Slp:
    """Parse the .slp text format.

    First content line is `alphabet: <chars>`; each further line is
    `N -> tok tok ...` with `eps` denoting the empty right-hand side.
    `#` starts a comment.  The first production's left-hand side is the axiom.
    """
    alphabet: frozenset[str] | None = None
    productions: list[tuple[str, tuple[str, ...]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if alphabet is None:
            if not line.startswith("alphabet:"):
                raise FormatError(f"line {lineno}: expected 'alphabet:' header")
            chars = line[len("alphabet:"):].strip()
            if any(ch.isspace() for ch in chars):
                raise FormatError(f"line {lineno}: alphabet must be concatenated characters")
            alphabet = frozenset(chars)
            continue
        parts = line.split()
        if len(parts) < 3 or parts[1] != "->":
            raise FormatError(f"line {lineno}: expected 'N -> tok ...'")
        name = parts[0]
        rhs = () if parts[2:] == ["eps"] else tuple(parts[2:])
        productions.append((name, rhs))
    if alphabet is None:
        raise FormatError("missing 'alphabet:' header")
    if not productions:
        raise FormatError("no productions")
    return Slp(alphabet, productions, productions[0][0])


def format_slp(p: Slp) -> str:
    """Render in the .slp text format (axiom production first)."""
    lines = ["alphabet: " + "".join(sorted(p.alphabet))]
    names = [p.axiom] + [n for n in p.productions if n != p.axiom]
    for name in names:
        rhs = p.productions[name]
        lines.append(f"{name} -> " + (" ".join(rhs) if rhs else "eps"))
    return "\n".join(lines) + "\n"
