"""Translation between udpda and pairs of straight-line programs.

One direction builds machines: a program over {0,1} becomes a gadget-per-
nonterminal udpda whose characteristic sequence is 0.word.0^omega, and an
indicator pair (prefix, loop) becomes a machine for the language whose
characteristic sequence is prefix.loop^omega.

The other direction is the dynamic program over the machine's states: it
writes straight-line productions for the transcripts of return segments,
horizontal segments and input-free loops, chains them across bottom-symbol
moves, and finally turns the transcript pair over {a, f} into an indicator
pair over {0, 1}.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import slp
from .errors import EmptyWord, FormatError, MalformedPair
from .slp import Slp
from .udpda import DEFAULT_BOTTOM, NormalUdpda, RawUnpda, normalize

BIT_ALPHABET = frozenset("01")
EVENT_ALPHABET = frozenset("af")


def _widen(p: Slp, alphabet: frozenset[str]) -> Slp:
    """The same word over a possibly larger alphabet (names are refreshed)."""
    if p.alphabet == alphabet:
        return p
    if not p.alphabet <= alphabet:
        raise MalformedPair(
            f"alphabet {sorted(p.alphabet)} not within {sorted(alphabet)}"
        )
    st = slp._Store(alphabet)
    return st.build(st.imp(p))


def _sequence(prefix: Slp, loop: Slp, n: int) -> str:
    """First n characters of prefix.loop^omega, expanding only what is needed."""
    plen = slp.length(prefix)
    if n <= plen:
        return slp.expand(slp.slice(prefix, 0, n), n) if n else ""
    pre = slp.expand(prefix, plen) if plen else ""
    llen = slp.length(loop)
    need = n - plen
    if llen > need:
        return pre + slp.expand(slp.slice(loop, 0, need), need)
    body = slp.expand(loop, llen)
    return pre + body * (need // llen) + body[: need % llen]


@dataclass(frozen=True)
class IndicatorPair:
    """Programs for the prefix and the loop of a characteristic sequence."""

    prefix: Slp
    loop: Slp

    def __post_init__(self):
        object.__setattr__(self, "prefix", _widen(self.prefix, BIT_ALPHABET))
        object.__setattr__(self, "loop", _widen(self.loop, BIT_ALPHABET))
        if slp.length(self.loop) == 0:
            raise MalformedPair("indicator pair needs a nonempty loop")

    def sequence(self, n: int) -> str:
        """First n characters of prefix.loop^omega (the oracle view)."""
        return _sequence(self.prefix, self.loop, n)

    @property
    def size(self) -> int:
        return slp.size(self.prefix) + slp.size(self.loop)


@dataclass(frozen=True)
class TranscriptPair:
    """Programs for the prefix and the loop of a computation's event stream."""

    prefix: Slp
    loop: Slp

    def __post_init__(self):
        object.__setattr__(self, "prefix", _widen(self.prefix, EVENT_ALPHABET))
        object.__setattr__(self, "loop", _widen(self.loop, EVENT_ALPHABET))
        if slp.length(self.loop) == 0:
            raise MalformedPair("transcript pair needs a nonempty loop")

    def sequence(self, n: int) -> str:
        return _sequence(self.prefix, self.loop, n)

    @property
    def size(self) -> int:
        return slp.size(self.prefix) + slp.size(self.loop)


# ---------------------------------------------------------------------------
# Programs to machines


def _reduce_fanout(prods: dict[str, tuple[str, ...]], alphabet) -> dict[str, tuple[str, ...]]:
    """Copy-tree pass: afterwards every nonterminal occurs at most twice
    on right-hand sides, at the cost of identity productions."""
    out = dict(prods)
    fresh = 0
    while True:
        occ: dict[str, list[tuple[str, int]]] = {}
        for parent in sorted(out):
            for pos, sym in enumerate(out[parent]):
                if sym not in alphabet:
                    occ.setdefault(sym, []).append((parent, pos))
        busy = sorted(n for n, slots in occ.items() if len(slots) > 2)
        if not busy:
            return out
        for child in busy:
            slots = occ[child]
            for i in range(0, len(slots), 2):
                fresh += 1
                copy = f"{child}~{fresh}"
                out[copy] = (child,)
                for parent, pos in slots[i : i + 2]:
                    rhs = list(out[parent])
                    rhs[pos] = copy
                    out[parent] = tuple(rhs)


class _Gadgets:
    """Partially built machine for one program; pops are not yet total."""

    def __init__(self):
        self.internal: dict[str, str] = {}
        self.push: dict[str, tuple[str, str]] = {}
        self.pop: dict[tuple[str, str], str] = {}
        self.pop_states: set[str] = set()
        self.reading: set[str] = set()
        self.finals: set[str] = set()
        self.stack: set[str] = set()
        self.initial = ""
        self.sink = ""


def _slp_machine(p: Slp, tight_stack: bool, ns: str) -> _Gadgets:
    """Gadget-per-nonterminal machine for a program over {0, 1}.

    Each nonterminal N gets an entry state and an exit state; the exit state
    only has outgoing pop moves.  A terminal production becomes a reading
    internal edge whose exit is final iff the symbol is 1; a binary
    production pushes a return marker per child.  With tight_stack, a
    fan-out reduction pass caps the markers at two per machine.
    """
    if not p.alphabet <= BIT_ALPHABET:
        raise ValueError("machine construction expects a program over {0, 1}")
    if slp.length(p) == 0:
        raise EmptyWord("cannot build a machine for the empty word")
    prods = slp.to_cnf(p).productions
    if tight_stack:
        prods = _reduce_fanout(prods, BIT_ALPHABET)
        slot_index: dict[tuple[str, int], int] = {}
        seen: dict[str, int] = {}
        for parent in sorted(prods):
            for pos, sym in enumerate(prods[parent]):
                if sym in prods:
                    slot_index[(parent, pos)] = seen.get(sym, 0)
                    seen[sym] = seen.get(sym, 0) + 1

        def slot_symbol(parent: str, pos: int) -> str:
            return f"{ns}.g{slot_index[(parent, pos)] + 1}"

    else:

        def slot_symbol(parent: str, pos: int) -> str:
            return f"{ns}.{parent}.{pos}"

    g = _Gadgets()
    entry = {n: f"{ns}.i.{n}" for n in prods}
    exit_ = {n: f"{ns}.o.{n}" for n in prods}
    g.pop_states = set(exit_.values())
    axiom = next(iter(prods))  # to_cnf puts the axiom first
    for name in sorted(prods):
        rhs = prods[name]
        if len(rhs) == 1 and rhs[0] in BIT_ALPHABET:
            g.internal[entry[name]] = exit_[name]
            g.reading.add(entry[name])
            if rhs[0] == "1":
                g.finals.add(exit_[name])
            continue
        prev = entry[name]
        for pos, child in enumerate(rhs):
            sym = slot_symbol(name, pos)
            g.stack.add(sym)
            g.push[prev] = (entry[child], sym)
            landing = exit_[name] if pos == len(rhs) - 1 else f"{ns}.m.{name}.{pos}"
            g.pop[(exit_[child], sym)] = landing
            prev = landing
    g.initial = entry[axiom]
    g.sink = exit_[axiom]
    return g


def _assemble(g: _Gadgets, bottom: str = DEFAULT_BOTTOM) -> NormalUdpda:
    """Close a gadget bundle into a machine: add the dead state and make
    every pop state total over the stack alphabet."""
    stack_alphabet = frozenset(g.stack) | {bottom}
    g.internal["dead"] = "dead"
    g.reading.add("dead")
    for q in sorted(g.pop_states):
        for gamma in sorted(stack_alphabet):
            g.pop.setdefault((q, gamma), "dead")
    return NormalUdpda(
        internal=g.internal,
        push=g.push,
        pop=g.pop,
        reading=frozenset(g.reading),
        initial=g.initial,
        finals=frozenset(g.finals),
        stack_alphabet=stack_alphabet,
        bottom=bottom,
    )


HALT_STATE = "halt"


def slp_to_udpda(p: Slp, tight_stack: bool = False) -> NormalUdpda:
    """Machine whose characteristic sequence is 0.str(p).0^omega.

    Past the axiom's exit sits a non-accepting sink (HALT_STATE) that reads
    input and pops the bottom symbol forever, so the machine reaches it with
    an empty stack after exactly |str p| reads and accepts nothing beyond.
    """
    g = _slp_machine(_widen(p, BIT_ALPHABET), tight_stack, "s")
    g.pop[(g.sink, DEFAULT_BOTTOM)] = HALT_STATE
    g.pop_states.add(HALT_STATE)
    g.reading.add(HALT_STATE)
    g.pop[(HALT_STATE, DEFAULT_BOTTOM)] = HALT_STATE
    return _assemble(g)


def indicator_to_udpda(ip: IndicatorPair, tight_stack: bool = False) -> NormalUdpda:
    """Machine for the language whose characteristic sequence the pair generates.

    The first bit is split off and carried by a fresh initial state; the
    machines for the rest of the prefix and for the loop are chained with
    input-free edges, with the loop machine's exit wired back to its entry.
    """
    plen = slp.length(ip.prefix)
    if plen:
        b = slp.query(ip.prefix, 0) == "1"
        tail = slp.slice(ip.prefix, 1, plen)
    else:
        b = slp.query(ip.loop, 0) == "1"
        tail = slp.slice(ip.loop, 1, slp.length(ip.loop))

    gl = _slp_machine(ip.loop, tight_stack, "l")
    parts = [gl]
    if slp.length(tail):
        parts.append(_slp_machine(tail, tight_stack, "p"))
    g = _Gadgets()
    for part in parts:
        g.internal.update(part.internal)
        g.push.update(part.push)
        g.pop.update(part.pop)
        g.pop_states |= part.pop_states
        g.reading |= part.reading
        g.finals |= part.finals
        g.stack |= part.stack
    for part in parts:
        # "last" states stop being sinks: an input-free edge re-enters the loop
        g.pop_states.discard(part.sink)
        g.internal[part.sink] = gl.initial
    g.initial = "start"
    g.internal["start"] = parts[-1].initial
    if b:
        g.finals.add("start")
    return _assemble(g)


# ---------------------------------------------------------------------------
# Machines to transcripts


class TranscriptWorkspace:
    """State of the transcript dynamic program.

    Partial maps from states to states: exit points of returning states
    (with a nonterminal for the return segment's events), horizontal
    successors (with the segment's events), pending push targets, and the
    set of states certified to never return, each with prefix/loop
    nonterminals for its infinite event stream.  The maps' domains,
    together with the non-returning set, partition the state set at all
    times, and every vertex keeps out-degree at most one.
    """

    def __init__(self, machine: NormalUdpda, check_invariants: bool = False):
        self.machine = machine
        self.check_invariants = check_invariants
        self.store = slp._Store(EVENT_ALPHABET)
        st = self.store
        self.v: dict[str, str] = {}
        for q in sorted(machine.states):
            rhs = []
            if q in machine.finals:
                rhs.append("f")
            if q in machine.reading:
                rhs.append("a")
            self.v[q] = st.add(tuple(rhs))
        self.exit_point: dict[str, str] = {}
        self.exit_nt: dict[str, str] = {}
        self.horiz: dict[str, str] = {}
        self.horiz_nt: dict[str, str] = {}
        self.push_succ: dict[str, str] = {}
        self.nonret: set[str] = set()
        self.nonret_pre: dict[str, str] = {}
        self.nonret_loop: dict[str, str] = {}
        for q, _gamma in sorted(machine.pop):
            if q not in self.exit_point:
                self.exit_point[q] = q
                self.exit_nt[q] = st.add(())
        for q in sorted(machine.internal):
            self.horiz[q] = machine.internal[q]
            self.horiz_nt[q] = self.v[q]
        for q in sorted(machine.push):
            self.push_succ[q] = machine.push[q][0]
        self._preds: dict[str, set[str]] = {}
        for q, t in self.horiz.items():
            self._preds.setdefault(t, set()).add(q)
        for q, t in self.push_succ.items():
            self._preds.setdefault(t, set()).add(q)
        self._watch = None

    # -- bookkeeping -------------------------------------------------------

    def _g_edge(self, q: str) -> tuple[str, str] | None:
        """Target and event nonterminal of q's pending edge, if any."""
        if q in self.horiz:
            return self.horiz[q], self.horiz_nt[q]
        if q in self.push_succ:
            return self.push_succ[q], self.v[q]
        return None

    def _drop_edge(self, q: str) -> str:
        """Remove q's pending edge; returns its event nonterminal."""
        if q in self.horiz:
            t = self.horiz.pop(q)
            nt = self.horiz_nt.pop(q)
        else:
            t = self.push_succ.pop(q)
            nt = self.v[q]
        self._preds[t].discard(q)
        return nt

    def _checked(self, rule: str):
        if self.check_invariants:
            check_workspace_invariants(self, rule)

    # -- the four rules ----------------------------------------------------

    def apply_r1(self, q: str):
        """Edge into a non-returning state: q is non-returning as well."""
        target = self.horiz.get(q) or self.push_succ.get(q)
        nt = self._drop_edge(q)
        self.nonret.add(q)
        self.nonret_pre[q] = self.store.add((nt, self.nonret_pre[target]))
        self.nonret_loop[q] = self.nonret_loop[target]
        self._checked("R1")

    def apply_r2(self, q: str):
        """Horizontal edge into a returning state: q returns through it."""
        target = self.horiz[q]
        nt = self._drop_edge(q)
        self.exit_point[q] = self.exit_point[target]
        self.exit_nt[q] = self.store.add((nt, self.exit_nt[target]))
        self._checked("R2")

    def apply_r3(self, q: str):
        """Push edge into a returning state: q gets a horizontal successor,
        reached by pushing, returning, and popping the pushed symbol."""
        target = self.push_succ[q]
        self._drop_edge(q)
        gamma = self.machine.push[q][1]
        q2 = self.exit_point[target]
        landing = self.machine.pop[(q2, gamma)]
        self.horiz[q] = landing
        self.horiz_nt[q] = self.store.add((self.v[q], self.exit_nt[target], self.v[q2]))
        self._preds.setdefault(landing, set()).add(q)
        self._checked("R3")

    def apply_r4(self, cycle: list[str]):
        """A simple cycle of pending edges: everything on it loops forever."""
        nts = {q: self._g_edge(q)[1] for q in cycle}
        loop_nt = self.store.add(tuple(nts[q] for q in cycle))
        for q in cycle:
            self._drop_edge(q)
            self.nonret.add(q)
            self.nonret_loop[q] = loop_nt
        self.nonret_pre[cycle[-1]] = nts[cycle[-1]]
        for i in range(len(cycle) - 2, -1, -1):
            self.nonret_pre[cycle[i]] = self.store.add(
                (nts[cycle[i]], self.nonret_pre[cycle[i + 1]])
            )
        self._checked("R4")

    # -- scheduling --------------------------------------------------------

    def _settle(self, q: str, queue: list[str]):
        """Eagerly apply R1/R2/R3 to q while its pending target is resolved."""
        while True:
            edge = self._g_edge(q)
            if edge is None:
                return
            target = edge[0]
            if target in self.nonret:
                self.apply_r1(q)
                queue.append(q)
                return
            if target in self.exit_point:
                if q in self.horiz:
                    self.apply_r2(q)
                    queue.append(q)
                    return
                self.apply_r3(q)  # q is now horizontal; re-examine its new target
            else:
                return

    def run_main_stage(self):
        """Apply the rules to exhaustion with a deterministic worklist."""
        queue = sorted(self.exit_point)
        while True:
            while queue:
                q = queue.pop(0)
                for p in sorted(self._preds.get(q, set())):
                    self._settle(p, queue)
            pending = sorted(set(self.horiz) | set(self.push_succ))
            if not pending:
                break
            queue.extend(self._find_cycle(pending))
        # Termination claim: once no rule applies, no pending edges remain.
        assert not self.horiz and not self.push_succ

    def _find_cycle(self, pending: list[str]) -> list[str]:
        """Locate one simple cycle among pending edges and apply R4 to it."""
        start = pending[0]
        seen: dict[str, int] = {}
        path: list[str] = []
        q = start
        while q not in seen:
            seen[q] = len(path)
            path.append(q)
            edge = self._g_edge(q)
            assert edge is not None, "pending edge leads outside the pending set"
            q = edge[0]
        cycle = path[seen[q]:]
        pivot = min(range(len(cycle)), key=lambda i: cycle[i])
        cycle = cycle[pivot:] + cycle[:pivot]
        self.apply_r4(cycle)
        return cycle

    def bottom_stage(self) -> tuple[str, str]:
        """Chain return segments across bottom-symbol moves from the initial
        state; returns store names for the transcript's prefix and loop."""
        machine, st = self.machine, self.store
        q0 = machine.initial
        if q0 in self.nonret:
            return self.nonret_pre[q0], self.nonret_loop[q0]
        ebot_succ: dict[str, str] = {}
        ebot_nt: dict[str, str] = {}
        for q in sorted(self.exit_point):
            q2 = self.exit_point[q]
            ebot_succ[q] = machine.pop[(q2, machine.bottom)]
            ebot_nt[q] = st.add((self.exit_nt[q], self.v[q2]))
        seq = [q0]
        index = {q0: 0}
        while True:
            nxt = ebot_succ[seq[-1]]
            if nxt in self.nonret:
                pre = st.add(tuple(ebot_nt[q] for q in seq) + (self.nonret_pre[nxt],))
                return pre, self.nonret_loop[nxt]
            if nxt in index:
                i = index[nxt]
                pre = st.add(tuple(ebot_nt[q] for q in seq[:i]))
                loop = st.add(tuple(ebot_nt[q] for q in seq[i:]))
                return pre, loop
            index[nxt] = len(seq)
            seq.append(nxt)


def udpda_to_transcript(a: NormalUdpda, check_invariants: bool = False) -> TranscriptPair:
    """Pair of programs generating the event stream of the machine's unique
    infinite computation ('a' per consumed letter, 'f' per final-state visit).

    If the computation eventually stops producing events (an input-free loop
    through non-final states), the stream is padded with 'a's; this leaves
    the induced characteristic sequence unchanged.
    """
    ws = TranscriptWorkspace(a, check_invariants)
    ws.run_main_stage()
    pre_name, loop_name = ws.bottom_stage()
    prefix = ws.store.build(pre_name)
    loop = ws.store.build(loop_name)
    if slp.length(loop) == 0:
        loop = slp.literal("a", EVENT_ALPHABET)
    return TranscriptPair(prefix, loop)


# ---------------------------------------------------------------------------
# Transcripts to characteristic sequences


class _FusedImage:
    """Bottom-up image of a program under the substitution af -> 1.

    Works on the Chomsky normal form; a production N -> A B fuses when A's
    word ends with a and B's starts with f.  Variants that drop a leading f
    or a trailing a are produced on demand, the way the trimmed nonterminals
    N a^-1 and f^-1 N are defined alongside the originals.
    """

    def __init__(self, store: slp._Store, cnf: Slp):
        self.st = store
        self.prods = cnf.productions
        self.axiom = cnf.axiom
        self.first: dict[str, str] = {}
        self.last: dict[str, str] = {}
        for name in slp._toposort(cnf, [cnf.axiom]):
            rhs = self.prods[name]
            if len(rhs) == 1:
                self.first[name] = self.last[name] = rhs[0]
            else:
                self.first[name] = self.first[rhs[0]]
                self.last[name] = self.last[rhs[1]]
        self.memo: dict[tuple[str, bool, bool], str] = {}

    def _children(self, key: tuple[str, bool, bool]):
        name, drop_f, drop_a = key
        rhs = self.prods[name]
        if self.last[rhs[0]] == "a" and self.first[rhs[1]] == "f":
            return True, ((rhs[0], drop_f, True), (rhs[1], True, drop_a))
        return False, ((rhs[0], drop_f, False), (rhs[1], False, drop_a))

    def image(self, name: str | None = None, drop_f: bool = False, drop_a: bool = False) -> str:
        # explicit work stack: grammars may be deeper than the recursion budget
        goal = (self.axiom if name is None else name, drop_f, drop_a)
        memo = self.memo
        stack = [goal]
        while stack:
            key = stack[-1]
            if key in memo:
                stack.pop()
                continue
            rhs = self.prods[key[0]]
            if len(rhs) == 1:
                sym = rhs[0]
                assert not (key[1] and sym != "f") and not (key[2] and sym != "a")
                memo[key] = self.st.add(() if (key[1] or key[2]) else (sym,))
                stack.pop()
                continue
            fused, children = self._children(key)
            pending = [c for c in children if c not in memo]
            if pending:
                stack.extend(pending)
                continue
            if fused:
                memo[key] = self.st.add((memo[children[0]], "1", memo[children[1]]))
            else:
                memo[key] = self.st.add((memo[children[0]], memo[children[1]]))
            stack.pop()
        return memo[goal]


def transcript_to_characteristic(tp: TranscriptPair) -> IndicatorPair:
    """Indicator pair for the characteristic sequence the transcript defines.

    The bit for length i is 1 iff an f occurs between the i-th and the
    (i+1)-th a of the stream.  The first bit is computed separately; the
    rest is the image of the stream under af -> 1, then a -> 0, f -> empty,
    with the fusion applied across the prefix/loop junctions.  A loop
    without any a (the machine stops reading) is first replaced by a plain
    'a' loop, moving its single meaningful f, if any, into the prefix.
    """
    prefix, loop = tp.prefix, tp.loop
    if slp.count(loop, "a") == 0:
        prefix = slp.concat(prefix, slp.literal("f", EVENT_ALPHABET))
        loop = slp.literal("a", EVENT_ALPHABET)

    plen = slp.length(prefix)
    first_bit = slp.first_symbol(prefix if plen else loop) == "f"

    st = slp._Store({"a", "f", "1"})
    eps = st.add(())
    img_pre = _FusedImage(st, slp.to_cnf(prefix)) if plen else None
    img_loop = _FusedImage(st, slp.to_cnf(loop))
    loop_first = slp.first_symbol(loop)
    loop_last = slp.last_symbol(loop)
    pre_last = slp.last_symbol(prefix) if plen else None

    if loop_first != "f":
        u = img_pre.image() if img_pre else eps
        w = img_loop.image()
    elif loop_last == "a":
        # every junction fuses: the loop loses its leading f and trailing a
        w = st.add((img_loop.image(drop_f=True, drop_a=True), "1"))
        if pre_last == "a":
            u = st.add((img_pre.image(drop_a=True), "1"))
        else:
            u = st.add(((img_pre.image() if img_pre else eps), "f"))
    else:
        # only the first junction can fuse
        w = img_loop.image()
        if pre_last == "a":
            u = st.add((img_pre.image(drop_a=True), "1", img_loop.image(drop_f=True)))
        else:
            u = img_pre.image() if img_pre else eps

    to_bits = {"a": "0", "f": "", "1": "1"}
    tail = slp.substitute(st.build(u), to_bits, BIT_ALPHABET)
    head = slp.literal("1" if first_bit else "0", BIT_ALPHABET)
    return IndicatorPair(
        slp.concat(head, tail),
        slp.substitute(st.build(w), to_bits, BIT_ALPHABET),
    )


def udpda_to_indicator(a: RawUnpda | NormalUdpda, check_invariants: bool = False) -> IndicatorPair:
    """Indicator pair for the machine's language (the full pipeline)."""
    if isinstance(a, RawUnpda):
        a = normalize(a)  # raises NotDeterministic on bad input
    return transcript_to_characteristic(udpda_to_transcript(a, check_invariants))


# ---------------------------------------------------------------------------
# Debug checks for the workspace invariants (used on small machines)


def _segment_events(machine: NormalUdpda, q: str, stop: str, cap: int = 20000):
    """Events of the computation from (q, bottom) until a stop condition.

    stop "return": until the first pop state with the stack at the bottom;
    stop "height": until the first return to the starting height after at
    least one move.  Returns (end state, events) or None if cap is reached.
    """
    stack = [machine.bottom]
    events: list[str] = []
    state = q
    for step in range(cap):
        at_floor = len(stack) == 1
        is_pop = state not in machine.internal and state not in machine.push
        if stop == "return" and at_floor and is_pop:
            return state, "".join(events)
        if stop == "height" and step > 0 and at_floor:
            return state, "".join(events)
        if state in machine.finals:
            events.append("f")
        if state in machine.reading:
            events.append("a")
        if state in machine.internal:
            state = machine.internal[state]
        elif state in machine.push:
            state, sym = machine.push[state]
            stack.append(sym)
        else:
            top = stack[-1]
            nxt = machine.pop[(state, top)]
            if top != machine.bottom:
                stack.pop()
            state = nxt
    return None


def _stream_events(machine: NormalUdpda, q: str, limit: int, cap: int = 20000):
    """First `limit` events of the infinite computation from (q, bottom),
    plus whether a pop state was ever seen at the bottom (i.e. q returns)."""
    stack = [machine.bottom]
    events: list[str] = []
    state = q
    returned = False
    for _ in range(cap):
        if len(events) >= limit:
            break
        is_pop = state not in machine.internal and state not in machine.push
        if len(stack) == 1 and is_pop:
            returned = True
        if state in machine.finals:
            events.append("f")
        if state in machine.reading:
            events.append("a")
        if state in machine.internal:
            state = machine.internal[state]
        elif state in machine.push:
            state, sym = machine.push[state]
            stack.append(sym)
        else:
            top = stack[-1]
            nxt = machine.pop[(state, top)]
            if top != machine.bottom:
                stack.pop()
            state = nxt
    return "".join(events[:limit]), returned


def check_workspace_invariants(ws: TranscriptWorkspace, rule: str):
    """Assert the documented invariants of the dynamic program.

    Verified by bounded simulation, so this is only run on small machines;
    segment checks that exceed the simulation cap are skipped.
    """
    machine = ws.machine
    st = ws.store
    dom_e, dom_h, dom_w = set(ws.exit_point), set(ws.horiz), set(ws.push_succ)
    # I1: the four domains partition the state set
    assert dom_e | dom_h | dom_w | ws.nonret == machine.states, rule
    assert len(dom_e) + len(dom_h) + len(dom_w) + len(ws.nonret) == len(machine.states), rule
    # Monotonicity: exits only grow, pending pushes only shrink
    if ws._watch is not None:
        old_e, old_w = ws._watch
        assert len(dom_e) >= old_e and len(dom_w) <= old_w, rule
    ws._watch = (len(dom_e), len(dom_w))
    # I2: exit points and return-segment transcripts
    for q in sorted(dom_e):
        got = _segment_events(machine, q, "return")
        if got is None:
            continue
        end, events = got
        assert end == ws.exit_point[q], (rule, q)
        assert events == st.expand_sym(ws.exit_nt[q], len(events) + 1), (rule, q)
    # I3: horizontal successors and segment transcripts
    for q in sorted(dom_h):
        got = _segment_events(machine, q, "height")
        if got is None:
            continue
        end, events = got
        assert end == ws.horiz[q], (rule, q)
        assert events == st.expand_sym(ws.horiz_nt[q], len(events) + 1), (rule, q)
    # I4: pending pushes point at the pushed-to state
    for q in sorted(dom_w):
        assert machine.push[q][0] == ws.push_succ[q], (rule, q)
    # I5: non-returning states and their infinite transcripts
    for q in sorted(ws.nonret):
        pre = st.expand_sym(ws.nonret_pre[q], 10**6)
        loop = st.expand_sym(ws.nonret_loop[q], 10**6)
        limit = min(len(pre) + 3 * max(len(loop), 1), 200)
        events, returned = _stream_events(machine, q, limit)
        assert not returned, (rule, q)
        want = pre + loop * ((limit - len(pre)) // max(len(loop), 1) + 1) if loop else pre
        assert events == want[: len(events)], (rule, q)


# ---------------------------------------------------------------------------
# Pair file format


def parse_pair(text: str) -> IndicatorPair | TranscriptPair:
    """Parse a pair file: a `kind: indicator|transcript` header, the prefix
    program, a `---` separator line, and the loop program."""
    kind = None
    blocks: list[list[str]] = [[]]
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if kind is None:
            if not stripped:
                continue
            if not stripped.startswith("kind:"):
                raise FormatError(f"line {lineno}: expected 'kind:' header")
            kind = stripped[len("kind:"):].strip()
            if kind not in ("indicator", "transcript"):
                raise FormatError(f"line {lineno}: unknown kind {kind!r}")
            continue
        if stripped == "---":
            blocks.append([])
        else:
            blocks[-1].append(raw)
    if kind is None:
        raise FormatError("missing 'kind:' header")
    if len(blocks) != 2:
        raise FormatError("expected exactly one '---' separator")
    prefix = slp.parse_slp("\n".join(blocks[0]))
    loop = slp.parse_slp("\n".join(blocks[1]))
    cls = IndicatorPair if kind == "indicator" else TranscriptPair
    return cls(prefix, loop)


def format_pair(pair: IndicatorPair | TranscriptPair) -> str:
    kind = "indicator" if isinstance(pair, IndicatorPair) else "transcript"
    return (
        f"kind: {kind}\n"
        + slp.format_slp(pair.prefix)
        + "---\n"
        + slp.format_slp(pair.loop)
    )
