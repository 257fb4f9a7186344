"""Unary pushdown automata: raw form, the normal form, and a step simulator.

A :class:`RawUnpda` is the textbook machine: transitions rewrite the top of
the stack by a word of length at most two, with the bottom symbol kept at
the bottom.  A :class:`NormalUdpda` is the restricted shape the translation
algorithm works on: every control state performs exactly one of {internal,
push-one, pop-one}, pops are total over the stack alphabet, and reads are a
property of the state.  The simulator (:func:`run_prefix`,
:func:`membership_sim`) is the ground-truth oracle for everything else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import FormatError, FuelExhausted, NotDeterministic

DEFAULT_BOTTOM = "_"
DEFAULT_FUEL = 1_000_000


@dataclass(frozen=True)
class RawUnpda:
    """Unary pushdown automaton over input alphabet {a}.

    Transitions are tuples (q, sigma, gamma, q2, s): in state q with gamma on
    top of the stack, read sigma ('a' or '' for an epsilon move), replace
    gamma by the symbol sequence s (top first) and go to q2.  Bottom
    discipline: when gamma is not the bottom symbol, s avoids it; when gamma
    is the bottom, s is empty or ends with it.  len(s) <= 2 throughout (the
    size convention).
    """

    states: frozenset[str]
    stack_alphabet: frozenset[str]
    bottom: str
    initial: str
    finals: frozenset[str]
    transitions: frozenset[tuple[str, str, str, str, tuple[str, ...]]]

    def __post_init__(self):
        if self.bottom not in self.stack_alphabet:
            raise ValueError("bottom symbol missing from the stack alphabet")
        if self.initial not in self.states:
            raise ValueError(f"initial state {self.initial} not a state")
        if not self.finals <= self.states:
            raise ValueError("final states must be states")
        for t in self.transitions:
            q1, sigma, gamma, q2, s = t
            if q1 not in self.states or q2 not in self.states:
                raise ValueError(f"transition {t} uses unknown states")
            if sigma not in ("a", ""):
                raise ValueError(f"transition {t}: input must be 'a' or ''")
            if gamma not in self.stack_alphabet:
                raise ValueError(f"transition {t}: unknown stack symbol {gamma}")
            if not isinstance(s, tuple):
                raise ValueError(f"transition {t}: push word must be a tuple of symbols")
            if len(s) > 2:
                raise ValueError(f"transition {t}: pushes more than two symbols")
            if any(c not in self.stack_alphabet for c in s):
                raise ValueError(f"transition {t}: push word uses unknown symbols")
            if gamma != self.bottom:
                if self.bottom in s:
                    raise ValueError(f"transition {t}: bottom symbol re-pushed")
            elif s and (s[-1] != self.bottom or self.bottom in s[:-1]):
                raise ValueError(f"transition {t}: bottom symbol must stay at the bottom")

    @property
    def size(self) -> int:
        return len(self.states) * len(self.stack_alphabet)


def check_deterministic(a: RawUnpda) -> str | None:
    """None if at most one move is available at every configuration.

    Otherwise a description of the first (state, top symbol) pair offering
    two moves or mixing a reading move with an epsilon move.
    """
    by_key: dict[tuple[str, str], list[tuple]] = {}
    for t in sorted(a.transitions):
        by_key.setdefault((t[0], t[2]), []).append(t)
    for (q, gamma), ts in sorted(by_key.items()):
        if len(ts) > 1:
            sigmas = {t[1] for t in ts}
            if len(sigmas) > 1:
                return f"state {q} on top {gamma} mixes a reading move with an epsilon move"
            return f"state {q} on top {gamma} offers {len(ts)} moves"
    return None


@dataclass(frozen=True)
class NormalUdpda:
    """Udpda in the shape assumed by the translation algorithm.

    internal, push and pop are total maps whose domains partition the state
    set; pop is keyed by (state, stack symbol) and is total over the stack
    alphabet for every pop state.  Popping the bottom symbol leaves the
    stack unchanged.  States in `reading` consume one input letter on every
    outgoing move.
    """

    internal: dict[str, str]
    push: dict[str, tuple[str, str]]
    pop: dict[tuple[str, str], str]
    reading: frozenset[str]
    initial: str
    finals: frozenset[str]
    stack_alphabet: frozenset[str]
    bottom: str
    states: frozenset[str] = field(init=False)

    def __post_init__(self):
        pop_states = {q for q, _ in self.pop}
        states = frozenset(self.internal) | frozenset(self.push) | pop_states
        object.__setattr__(self, "states", states)
        if len(self.internal) + len(self.push) + len(pop_states) != len(states):
            raise ValueError("internal/push/pop domains must be disjoint")
        if self.bottom not in self.stack_alphabet:
            raise ValueError("bottom symbol missing from the stack alphabet")
        for q in pop_states:
            for gamma in self.stack_alphabet:
                if (q, gamma) not in self.pop:
                    raise ValueError(f"pop state {q} lacks a move for {gamma}")
        targets = list(self.internal.values())
        targets += [q for q, _ in self.push.values()]
        targets += list(self.pop.values())
        if any(t not in states for t in targets):
            raise ValueError("transition target is not a state")
        for q, (_, gamma) in self.push.items():
            if gamma == self.bottom:
                raise ValueError(f"push state {q} pushes the bottom symbol")
            if gamma not in self.stack_alphabet:
                raise ValueError(f"push state {q} pushes unknown symbol {gamma}")
        if self.initial not in states:
            raise ValueError(f"initial state {self.initial} not a state")
        if not self.finals <= states:
            raise ValueError("final states must be states")
        if not self.reading <= states:
            raise ValueError("reading states must be states")

    @property
    def size(self) -> int:
        return len(self.states) * len(self.stack_alphabet)


@dataclass(frozen=True)
class Configuration:
    """Control state plus stack, top first; the last symbol is the bottom."""

    state: str
    stack: tuple[str, ...]


def _uniquify(name: str, taken: set[str]) -> str:
    candidate = name
    while candidate in taken:
        candidate += "'"
    taken.add(candidate)
    return candidate


def normalize(a: RawUnpda) -> NormalUdpda:
    """Language-equivalent machine in the normal shape.

    Every raw state becomes a pop state dispatching on the top symbol; each
    raw transition unfolds into a short chain (an isolated reading state if
    it consumes input, then one push state per pushed symbol).  Missing
    moves lead to a non-final reading dead state that loops on itself.  The
    result has at most 6 * |Q| * |Gamma| states.
    """
    problem = check_deterministic(a)
    if problem is not None:
        raise NotDeterministic(problem)
    taken: set[str] = set()
    base = {q: _uniquify(q, taken) for q in sorted(a.states)}
    dead = _uniquify("dead", taken)

    internal: dict[str, str] = {dead: dead}
    push: dict[str, tuple[str, str]] = {}
    pop: dict[tuple[str, str], str] = {}
    reading = {dead}
    finals = {base[q] for q in sorted(a.finals)}

    moves = {(t[0], t[2]): t for t in a.transitions}
    for q in sorted(a.states):
        for gamma in sorted(a.stack_alphabet):
            t = moves.get((q, gamma))
            if t is None:
                pop[(base[q], gamma)] = dead
                continue
            _, sigma, _, q2, s = t
            if gamma == a.bottom:
                pushes = [] if s in ((), (a.bottom,)) else [s[0]]
            else:
                pushes = list(s)
            # Chain: [read] then pushes applied bottom-up, landing at q2.
            target = base[q2]
            for i, sym in enumerate(pushes):
                node = _uniquify(f"{q}.{gamma}.push{i}", taken)
                push[node] = (target, sym)
                target = node
            if sigma == "a":
                node = _uniquify(f"{q}.{gamma}.read", taken)
                internal[node] = target
                reading.add(node)
                target = node
            pop[(base[q], gamma)] = target
    return NormalUdpda(
        internal=internal,
        push=push,
        pop=pop,
        reading=frozenset(reading),
        initial=base[a.initial],
        finals=frozenset(finals),
        stack_alphabet=a.stack_alphabet,
        bottom=a.bottom,
    )


def to_raw(a: NormalUdpda) -> RawUnpda:
    """The same machine as a RawUnpda (one transition per state and top symbol)."""
    transitions = set()
    for q in sorted(a.states):
        sigma = "a" if q in a.reading else ""
        for gamma in sorted(a.stack_alphabet):
            if q in a.internal:
                q2, s = a.internal[q], (gamma,)
            elif q in a.push:
                q2, top = a.push[q]
                s = (top, gamma)
            else:
                q2 = a.pop[(q, gamma)]
                s = (gamma,) if gamma == a.bottom else ()
            transitions.add((q, sigma, gamma, q2, s))
    return RawUnpda(
        states=a.states,
        stack_alphabet=a.stack_alphabet,
        bottom=a.bottom,
        initial=a.initial,
        finals=a.finals,
        transitions=frozenset(transitions),
    )


def _trace(a: NormalUdpda, max_reads: int, fuel: int):
    """Yield (state, letters consumed) for every configuration visited.

    Stops after max_reads letters have been consumed, or as soon as the
    machine is certified to never read again: a state revisited without an
    intervening read, with the stack never dipping below its height at the
    first visit, replays the same input-free segment forever.  Raises
    FuelExhausted if `fuel` epsilon moves pass without a read or a
    certificate (a backstop; the certificate fires on every genuine loop).
    """
    internal, push, pop = a.internal, a.push, a.pop
    reading = a.reading
    bottom = a.bottom
    warmup = 4 * len(a.states) + 16

    q = a.initial
    stack = [bottom]  # top at the end
    consumed = 0
    eps_run = 0
    tracker: dict[str, list[int]] | None = None
    while True:
        yield q, consumed
        reads = q in reading
        nxt = internal.get(q)
        if nxt is not None:
            q = nxt
        elif q in push:
            q, sym = push[q]
            stack.append(sym)
        else:
            top = stack[-1]
            q2 = pop[(q, top)]
            if top != bottom:
                stack.pop()
            q = q2
        if reads:
            consumed += 1
            if consumed >= max_reads:
                return
            eps_run = 0
            tracker = None
        else:
            eps_run += 1
            if eps_run == warmup:
                tracker = {}
            if tracker is not None:
                h = len(stack)
                for entry in tracker.values():
                    if h < entry[1]:
                        entry[1] = h
                entry = tracker.get(q)
                if entry is not None:
                    if entry[1] >= entry[0]:
                        return  # certified: no further input is ever read
                    entry[0] = entry[1] = h
                else:
                    tracker[q] = [h, h]
            if eps_run > fuel:
                raise FuelExhausted(
                    f"{fuel} epsilon moves without a read or a loop certificate"
                )


def run_prefix(a: NormalUdpda, n: int, fuel: int = DEFAULT_FUEL) -> str:
    """First n characteristic bits: bit i is 1 iff a final state is visited
    at some configuration reached after consuming exactly i letters.

    Total: when the fuel backstop trips, the machine is declared
    non-consuming from that point; the bit for the last consumed count keeps
    the finals seen inside the input-free stretch, the rest stay 0.
    """
    bits = bytearray(n)
    if n == 0:
        return ""
    finals = a.finals
    try:
        for q, consumed in _trace(a, n, fuel):
            if q in finals:
                bits[consumed] = 1
    except FuelExhausted:
        pass
    return "".join("1" if b else "0" for b in bits)


def membership_sim(a: NormalUdpda, n: int, fuel: int = DEFAULT_FUEL) -> bool:
    """Whether a**n is accepted, by direct stepping of the unique computation."""
    finals = a.finals
    for q, consumed in _trace(a, n + 1, fuel):
        if consumed == n and q in finals:
            return True
    return False


def parse_udpda(text: str) -> RawUnpda:
    """Parse the .updpa text format.

    Header lines `states:`, `stack:` (bottom spelled `_`, listed first),
    `initial:`, `final:`; then transition lines `q <a|-> gamma -> q' <s|->`
    where `-` stands for an epsilon read / an empty push word and a push
    word of two symbols is written comma-joined.  `#` starts a comment.
    """
    states: list[str] | None = None
    stack: list[str] | None = None
    initial: str | None = None
    finals: list[str] = []
    transitions: set[tuple] = set()
    saw_final = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("states:"):
            states = line[len("states:"):].split()
        elif line.startswith("stack:"):
            stack = line[len("stack:"):].split()
        elif line.startswith("initial:"):
            initial = line[len("initial:"):].strip()
        elif line.startswith("final:"):
            finals = line[len("final:"):].split()
            saw_final = True
        else:
            parts = line.split()
            if len(parts) != 6 or parts[3] != "->":
                raise FormatError(f"line {lineno}: expected 'q <a|-> g -> q2 <s|->'")
            q1, sigma, gamma, _, q2, s = parts
            if sigma not in ("a", "-"):
                raise FormatError(f"line {lineno}: input field must be 'a' or '-'")
            pushed = () if s == "-" else tuple(s.split(","))
            transitions.add((q1, "" if sigma == "-" else "a", gamma, q2, pushed))
    if states is None or stack is None or initial is None or not saw_final:
        raise FormatError("missing states:/stack:/initial:/final: header")
    if not stack:
        raise FormatError("stack alphabet must at least contain the bottom symbol")
    try:
        return RawUnpda(
            states=frozenset(states),
            stack_alphabet=frozenset(stack),
            bottom=stack[0],
            initial=initial,
            finals=frozenset(finals),
            transitions=frozenset(transitions),
        )
    except ValueError as e:
        raise FormatError(str(e)) from e


def format_udpda(a: RawUnpda) -> str:
    """Render in the .updpa text format (bottom symbol listed first)."""
    stack = [a.bottom] + sorted(a.stack_alphabet - {a.bottom})
    lines = [
        "states: " + " ".join(sorted(a.states)),
        "stack: " + " ".join(stack),
        "initial: " + a.initial,
        "final: " + " ".join(sorted(a.finals)),
    ]
    for q1, sigma, gamma, q2, s in sorted(a.transitions):
        lines.append(f"{q1} {sigma or '-'} {gamma} -> {q2} {','.join(s) or '-'}")
    return "\n".join(lines) + "\n"
