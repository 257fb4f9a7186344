"""Shared generators and independent oracles for the test suite.

Oracles here deliberately avoid the library's compressed-word paths: words
are expanded and checked symbol by symbol, machines are stepped directly
from the textbook semantics.
"""

from __future__ import annotations

import random

from pdapress import slp
from pdapress.slp import Slp
from pdapress.udpda import NormalUdpda, RawUnpda

BOTTOM = "_"


# ---------------------------------------------------------------------------
# Random inputs


def random_slp(rng: random.Random, alphabet="01", max_prods=8, max_arity=4,
               min_len=0, max_len=10_000) -> Slp:
    """A random valid program; regenerates until the word length fits."""
    alphabet = "".join(alphabet)
    while True:
        count = rng.randint(1, max_prods)
        names = [f"X{i}" for i in range(count)]
        prods = {}
        for i, name in enumerate(names):
            pool = list(alphabet) + names[i + 1:]
            arity = rng.randint(0 if i else 1, max_arity)
            prods[name] = tuple(rng.choice(pool) for _ in range(arity))
        p = Slp(alphabet, prods, names[0])
        if min_len <= slp.length(p) <= max_len:
            return p


def random_normal_udpda(rng: random.Random, max_states=12, max_stack=4) -> NormalUdpda:
    """A random machine already in the normal shape (always deterministic)."""
    nq = rng.randint(1, max_states)
    ngam = rng.randint(1, max_stack)
    states = [f"q{i}" for i in range(nq)]
    gammas = [BOTTOM] + [f"g{i}" for i in range(ngam - 1)]
    internal, push, pop = {}, {}, {}
    for q in states:
        kind = rng.choice(["int", "push", "pop"]) if ngam > 1 else rng.choice(["int", "pop"])
        if kind == "int":
            internal[q] = rng.choice(states)
        elif kind == "push":
            push[q] = (rng.choice(states), rng.choice(gammas[1:]))
        else:
            for g in gammas:
                pop[(q, g)] = rng.choice(states)
    return NormalUdpda(
        internal=internal,
        push=push,
        pop=pop,
        reading=frozenset(q for q in states if rng.random() < 0.6),
        initial="q0",
        finals=frozenset(q for q in states if rng.random() < 0.4),
        stack_alphabet=frozenset(gammas),
        bottom=BOTTOM,
    )


def random_raw_udpda(rng: random.Random, max_states=8, max_stack=3) -> RawUnpda:
    """A random deterministic raw machine with possibly missing moves."""
    nq = rng.randint(1, max_states)
    ngam = rng.randint(1, max_stack)
    states = [f"q{i}" for i in range(nq)]
    gammas = [BOTTOM] + [f"g{i}" for i in range(ngam - 1)]
    nonbottom = gammas[1:]
    transitions = set()
    for q in states:
        for gamma in gammas:
            if rng.random() < 0.15:
                continue  # missing move: the machine halts here
            sigma = "a" if rng.random() < 0.6 else ""
            q2 = rng.choice(states)
            if gamma == BOTTOM:
                choices = [(), (BOTTOM,)]
                if nonbottom:
                    choices.append((rng.choice(nonbottom), BOTTOM))
            else:
                choices = [(), (rng.choice(nonbottom),),
                           (rng.choice(nonbottom), rng.choice(nonbottom))]
            transitions.add((q, sigma, gamma, q2, rng.choice(choices)))
    return RawUnpda(
        states=frozenset(states),
        stack_alphabet=frozenset(gammas),
        bottom=BOTTOM,
        initial="q0",
        finals=frozenset(q for q in states if rng.random() < 0.4),
        transitions=frozenset(transitions),
    )


# ---------------------------------------------------------------------------
# Independent machine oracle (textbook semantics, raw machines)


def raw_run_prefix(a: RawUnpda, n: int, fuel: int = 4000) -> str:
    """Characteristic bits of a raw machine by direct stepping.

    Moves follow the raw semantics: the unique applicable transition
    rewrites the top of the stack; no applicable transition halts the
    machine.  `fuel` bounds input-free stretches (generous for tiny
    machines).
    """
    moves = {(t[0], t[2]): t for t in a.transitions}
    bits = bytearray(n)
    q = a.initial
    stack = [a.bottom]  # top at the end
    consumed = 0
    eps = 0
    while consumed < n:
        if q in a.finals:
            bits[consumed] = 1
        t = moves.get((q, stack[-1]))
        if t is None:
            break
        _, sigma, gamma, q2, s = t
        if gamma == a.bottom and s == ():
            pass  # bottom "pop": the stack stays at the bottom symbol
        else:
            stack.pop()
            stack.extend(reversed(s))
        q = q2
        if sigma == "a":
            consumed += 1
            eps = 0
        else:
            eps += 1
            if eps > fuel:
                break
    if consumed < n and q in a.finals and (eps <= fuel):
        bits[consumed] = 1
    return "".join("1" if b else "0" for b in bits)


def step_normal(a: NormalUdpda, q: str, stack: list[str]) -> tuple[str, bool]:
    """One move of a normal machine in place; returns (state, consumed?)."""
    reads = q in a.reading
    if q in a.internal:
        return a.internal[q], reads
    if q in a.push:
        q2, sym = a.push[q]
        stack.append(sym)
        return q2, reads
    top = stack[-1]
    q2 = a.pop[(q, top)]
    if top != a.bottom:
        stack.pop()
    return q2, reads


def collect_events(a: NormalUdpda, max_events: int, max_steps: int = 100_000) -> str:
    """Event log ('f' per final visit, 'a' per consumed letter) of the
    computation's first steps; for machines that keep consuming this is a
    true prefix of the transcript."""
    events = []
    q = a.initial
    stack = [a.bottom]
    for _ in range(max_steps):
        if len(events) >= max_events:
            break
        if q in a.finals:
            events.append("f")
        if q in a.reading:
            events.append("a")
        q, _ = step_normal(a, q, stack)
    return "".join(events[:max_events])


# ---------------------------------------------------------------------------
# Handcrafted machines


def machine_loop(final=True) -> NormalUdpda:
    """One reading state looping on itself (universal language if final)."""
    return NormalUdpda(
        internal={"q0": "q0"}, push={}, pop={},
        reading=frozenset({"q0"}), initial="q0",
        finals=frozenset({"q0"} if final else set()),
        stack_alphabet=frozenset({BOTTOM}), bottom=BOTTOM,
    )


def machine_even() -> NormalUdpda:
    """Accepts words of even length."""
    return NormalUdpda(
        internal={"q0": "q1", "q1": "q0"}, push={}, pop={},
        reading=frozenset({"q0", "q1"}), initial="q0",
        finals=frozenset({"q0"}),
        stack_alphabet=frozenset({BOTTOM}), bottom=BOTTOM,
    )


def machine_mod(k: int, residues) -> NormalUdpda:
    """Accepts a^n with n mod k in residues."""
    states = [f"q{i}" for i in range(k)]
    return NormalUdpda(
        internal={states[i]: states[(i + 1) % k] for i in range(k)},
        push={}, pop={},
        reading=frozenset(states), initial="q0",
        finals=frozenset(states[r] for r in residues),
        stack_alphabet=frozenset({BOTTOM}), bottom=BOTTOM,
    )


def machine_eps_loop(reads: int, loop_final: bool) -> NormalUdpda:
    """Consumes `reads` letters, then loops forever on silent moves."""
    internal = {f"q{i}": f"q{i+1}" for i in range(reads)}
    internal[f"q{reads}"] = f"q{reads}"
    return NormalUdpda(
        internal=internal, push={}, pop={},
        reading=frozenset(f"q{i}" for i in range(reads)),
        initial="q0",
        finals=frozenset({f"q{reads}"} if loop_final else set()),
        stack_alphabet=frozenset({BOTTOM}), bottom=BOTTOM,
    )


def machine_push_loop(reading=False, final=False) -> NormalUdpda:
    """Pushes forever; optionally reads or visits a final state meanwhile."""
    return NormalUdpda(
        internal={}, push={"q0": ("q0", "x")}, pop={},
        reading=frozenset({"q0"} if reading else set()),
        initial="q0",
        finals=frozenset({"q0"} if final else set()),
        stack_alphabet=frozenset({BOTTOM, "x"}), bottom=BOTTOM,
    )


def machine_dead() -> NormalUdpda:
    """No final states at all."""
    return NormalUdpda(
        internal={"q0": "q0"}, push={}, pop={},
        reading=frozenset({"q0"}), initial="q0", finals=frozenset(),
        stack_alphabet=frozenset({BOTTOM}), bottom=BOTTOM,
    )


def machine_bottom_cycle(k: int, finals) -> NormalUdpda:
    """k pop states chained through bottom moves (a pure bottom cycle)."""
    states = [f"q{i}" for i in range(k)]
    pop = {}
    for i, q in enumerate(states):
        pop[(q, BOTTOM)] = states[(i + 1) % k]
    return NormalUdpda(
        internal={}, push={}, pop=pop,
        reading=frozenset(states[::2]), initial="q0",
        finals=frozenset(states[r] for r in finals),
        stack_alphabet=frozenset({BOTTOM}), bottom=BOTTOM,
    )


def machine_updown(k: int) -> NormalUdpda:
    """Pushes k symbols while reading, pops them back, accepts at the bottom,
    and repeats: accepts multiples of k (k reads per excursion)."""
    internal = {}
    push = {}
    pop = {}
    reading = set()
    up = [f"u{i}" for i in range(k)]
    down = [f"d{i}" for i in range(k)]
    for i in range(k):
        push[up[i]] = (up[i + 1] if i + 1 < k else down[0], "x")
        reading.add(up[i])
    for i in range(k):
        pop[(down[i], "x")] = down[i + 1] if i + 1 < k else "acc"
        pop[(down[i], BOTTOM)] = "acc"
    internal["acc"] = up[0]
    return NormalUdpda(
        internal=internal, push=push, pop=pop,
        reading=frozenset(reading), initial="acc",
        finals=frozenset({"acc"}),
        stack_alphabet=frozenset({BOTTOM, "x"}), bottom=BOTTOM,
    )


def handcrafted_machines() -> list[tuple[str, NormalUdpda]]:
    machines = [
        ("loop", machine_loop()),
        ("loop-nonfinal", machine_loop(final=False)),
        ("even", machine_even()),
        ("dead", machine_dead()),
        ("push-loop", machine_push_loop()),
        ("push-loop-reading", machine_push_loop(reading=True)),
        ("push-loop-final", machine_push_loop(final=True)),
        ("push-loop-reading-final", machine_push_loop(reading=True, final=True)),
    ]
    for reads in (0, 1, 2, 5):
        for fin in (False, True):
            machines.append((f"eps-loop-{reads}-{fin}", machine_eps_loop(reads, fin)))
    for k, res in [(3, (0,)), (3, (1, 2)), (5, (0, 2, 4)), (7, (1,)), (4, ())]:
        machines.append((f"mod-{k}-{res}", machine_mod(k, res)))
    for k in (1, 2, 3, 4):
        machines.append((f"updown-{k}", machine_updown(k)))
    for k, res in [(1, (0,)), (2, (1,)), (3, (0, 2)), (4, ())]:
        machines.append((f"bottom-cycle-{k}-{res}", machine_bottom_cycle(k, res)))
    return machines
