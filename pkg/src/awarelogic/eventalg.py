"""Set-level knowledge algebra on truth/falsity pairs.

A formula's extension in a multi-space structure is the pair of state
sets where it comes out true and false; everything in between is
undefined.  The operators here act on such pairs directly, without
looking at formulas, and the test suite checks that they commute with
the formula-level connectives.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .semantics import extension
from .structures import HmsStructure, ModelError, space_label, up_closure
from .syntax import Formula


@dataclass(frozen=True)
class EventPair:
    """Truths and falsities of some (possibly hypothetical) formula.

    The base structure rides along for the operators that need the
    possibility correspondences; it does not take part in equality.
    """

    structure: HmsStructure = field(compare=False, repr=False)
    truths: frozenset = frozenset()
    falsities: frozenset = frozenset()

    def __post_init__(self):
        known = set(self.structure.states)
        if not (self.truths <= known and self.falsities <= known):
            raise ModelError("event components mention unknown states")
        if self.truths & self.falsities:
            raise ModelError("truth and falsity sets must be disjoint")

    @property
    def defined(self) -> frozenset:
        return self.truths | self.falsities


def event_of(M: HmsStructure, f: Formula) -> EventPair:
    ext = extension(M, f)
    return EventPair(M, ext.truths, ext.falsities)


def vacuous_event(M: HmsStructure, alpha) -> EventPair:
    """The empty event expressible at S_alpha: false nowhere, true
    nowhere, defined exactly where alpha is."""
    alpha = frozenset(alpha)
    if alpha not in M.spaces:
        raise ModelError(f"unknown space {space_label(alpha)!r}")
    everything = up_closure(M, M.spaces[alpha], alpha)
    return EventPair(M, frozenset(), everything)


def neg_event(e: EventPair) -> EventPair:
    return EventPair(e.structure, e.falsities, e.truths)


def conj_event(e: EventPair, f: EventPair) -> EventPair:
    if e.structure is not f.structure:
        raise ModelError("events live on different structures")
    E, En = e.truths, e.falsities
    F, Fn = f.truths, f.falsities
    return EventPair(
        e.structure,
        E & F,
        (E & Fn) | (En & F) | (En & Fn),
    )


def disj_event(e: EventPair, f: EventPair) -> EventPair:
    return neg_event(conj_event(neg_event(e), neg_event(f)))


def know_event(i: int, e: EventPair) -> EventPair:
    M = e.structure
    if not 1 <= i <= M.agents:
        raise ModelError(f"unknown agent {i}")
    E = e.truths
    defined = e.defined
    holds = frozenset(s for s in M.states if M.poss[(i, s)] <= E)
    return EventPair(M, holds & defined, defined - holds)


@dataclass(frozen=True)
class UnionReport:
    """Outcome of checking the displayed union identity on one (B, C)."""

    holds: bool
    union: frozenset
    expected: frozenset
    gamma: frozenset
    intersection_empty: bool


def verify_union_lemma(M: HmsStructure, B, C, alpha=None, beta=None) -> UnionReport:
    """Check that the three cross terms of a conjunction pair cover
    exactly the complement of the joint truth set, relative to the
    space where both operands are expressible."""
    B, alpha = _anchored(M, B, alpha, "B")
    C, beta = _anchored(M, C, beta, "C")
    E = up_closure(M, B, alpha)
    En = up_closure(M, frozenset(M.spaces[alpha]) - B, alpha)
    F = up_closure(M, C, beta)
    Fn = up_closure(M, frozenset(M.spaces[beta]) - C, beta)

    gamma = alpha | beta
    everything = up_closure(M, M.spaces[gamma], gamma)
    union = (E & Fn) | (En & F) | (En & Fn)
    expected = everything - (E & F)
    return UnionReport(
        holds=union == expected,
        union=union,
        expected=expected,
        gamma=gamma,
        intersection_empty=not (E & F),
    )


def _anchored(M, B, space, label):
    """Pin a state set to the single space it lives in."""
    B = frozenset(B)
    found = {M.space_of[s] for s in B if s in M.space_of}
    if len(found) > 1:
        raise ModelError(f"{label} spans multiple spaces")
    if space is None:
        if not found:
            raise ModelError(f"cannot infer the space of empty {label}")
        space = next(iter(found))
    space = frozenset(space)
    if space not in M.spaces:
        raise ModelError(f"unknown space {space_label(space)!r}")
    if found and found != {space}:
        raise ModelError(f"{label} does not sit inside {space_label(space)!r}")
    if not B <= set(M.spaces[space]):
        raise ModelError(f"{label} mentions unknown states")
    return B, space
