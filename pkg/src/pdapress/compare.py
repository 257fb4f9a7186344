"""Componentwise comparison of equal-length compressed words.

The engine streams both expansions in lockstep and reports the least
position where the symbol relation fails.  The problem is coNP-complete for
any relation beyond equality, so the number of visited positions is bounded
by an explicit budget and running out of it is an ordinary, reportable
outcome rather than nontermination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from . import slp
from .errors import LengthMismatch
from .slp import Slp

DEFAULT_BUDGET = 1 << 22

HOLDS = "holds"
FAILS = "fails"
BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a positionwise check: holds, fails(witness) or budget out."""

    verdict: str
    witness: int | None = None

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS


class SymbolRelation:
    """A reflexive binary relation on a finite symbol set."""

    def __init__(self, alphabet: Iterable[str], pairs: Iterable[tuple[str, str]]):
        self.alphabet = frozenset(alphabet)
        self.pairs = frozenset(pairs) | {(x, x) for x in self.alphabet}
        for x, y in self.pairs:
            if x not in self.alphabet or y not in self.alphabet:
                raise ValueError(f"pair ({x!r}, {y!r}) uses symbols outside the alphabet")

    def holds(self, x: str, y: str) -> bool:
        return (x, y) in self.pairs


class PartialOrderSpec(SymbolRelation):
    """A validated partial order: reflexive, antisymmetric and transitive."""

    def __init__(self, alphabet: Iterable[str], pairs: Iterable[tuple[str, str]]):
        super().__init__(alphabet, pairs)
        for x, y in sorted(self.pairs):
            if x != y and (y, x) in self.pairs:
                raise ValueError(f"not antisymmetric: both ({x},{y}) and ({y},{x})")
        for x, y in sorted(self.pairs):
            for z in sorted(self.alphabet):
                if (y, z) in self.pairs and (x, z) not in self.pairs:
                    raise ValueError(f"not transitive: ({x},{y}), ({y},{z}) but not ({x},{z})")


ZERO_LEQ_ONE = PartialOrderSpec("01", [("0", "1")])

# hole compatibility: equal, or at least one side is the wildcard '?'
WILDCARD = SymbolRelation(
    "ab?", [(x, y) for x in "ab?" for y in "ab?" if x == y or "?" in (x, y)]
)


def _symbols(p: Slp) -> Iterator[str]:
    """The generated word, one symbol at a time, without materializing it."""
    alphabet = p.alphabet
    prods = p.productions
    stack = [iter(prods[p.axiom])]
    while stack:
        for sym in stack[-1]:
            if sym in alphabet:
                yield sym
                break
            stack.append(iter(prods[sym]))
            break
        else:
            stack.pop()


def comp_slp(
    p1: Slp,
    p2: Slp,
    relation: SymbolRelation,
    budget: int = DEFAULT_BUDGET,
) -> CheckResult:
    """Check relation(p1[i], p2[i]) at every position of two equal-length words.

    Returns holds, or fails with the least violating position, or
    budget_exceeded once more than `budget` positions would need visiting.
    """
    n = slp.length(p1)
    if n != slp.length(p2):
        raise LengthMismatch(f"lengths {n} and {slp.length(p2)} differ")
    if not p1.alphabet <= relation.alphabet or not p2.alphabet <= relation.alphabet:
        raise ValueError("word alphabets must be contained in the relation's alphabet")
    gen1, gen2 = _symbols(p1), _symbols(p2)
    for i in range(min(n, budget)):
        if not relation.holds(next(gen1), next(gen2)):
            return CheckResult(FAILS, i)
    if n > budget:
        return CheckResult(BUDGET_EXCEEDED)
    return CheckResult(HOLDS)


def partial_word_match(p1: Slp, p2: Slp, budget: int = DEFAULT_BUDGET) -> CheckResult:
    """Positionwise matching of two partial words over {a, b, ?}.

    Positions match when the symbols are equal or either one is the hole.
    The compatibility relation is reflexive but not an order, which is why
    the engine accepts arbitrary reflexive relations.
    """
    for p in (p1, p2):
        if not p.alphabet <= WILDCARD.alphabet:
            raise ValueError("partial words live over the alphabet {a, b, ?}")
    return comp_slp(p1, p2, WILDCARD, budget)


def order_from_literal(text: str) -> PartialOrderSpec:
    """Parse an order literal like "0<=1" (single-character sides)."""
    lhs, sep, rhs = text.partition("<=")
    lhs, rhs = lhs.strip(), rhs.strip()
    if not sep or len(lhs) != 1 or len(rhs) != 1:
        raise ValueError(f"cannot parse order literal {text!r}; expected like '0<=1'")
    return PartialOrderSpec({lhs, rhs}, [(lhs, rhs)])
