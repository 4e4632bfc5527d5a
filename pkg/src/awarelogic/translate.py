"""Conversions between the multi-space and awareness model families.

Each direction builds a structure in the other family over a matching
state set, such that implicit knowledge on the multi-space side lines
up with explicit knowledge on the awareness side wherever the formula's
vocabulary is available.  `check_agreement` replays that biconditional
point by point and reports the outcome.
"""

from __future__ import annotations

from dataclasses import dataclass

from .semantics import eval_hms, eval_structure
from .structures import (
    FALSE,
    TRUE,
    AwarenessStructure,
    ClassSpec,
    Generated,
    HmsStructure,
    ModelError,
    pg_test_language,
    space_label,
    subsets,
    validate_awareness,
    validate_hms,
)
from .syntax import Formula, Prop, primitives, render, to_explicit


def _aware_atoms(M: AwarenessStructure, i: int, s) -> frozenset:
    """The primitive propositions agent i is aware of at s; defined for
    generated sets and for explicit sets that behave like one."""
    aset = M.awareness[(i, s)]
    if isinstance(aset, Generated):
        return aset.atoms & M.atoms
    listed = frozenset(p for p in M.atoms if aset.contains(Prop(p)))
    for f in pg_test_language(M.atoms, M.agents):
        if aset.contains(f) != (primitives(f) <= listed):
            raise ModelError(
                f"awareness[{i},{s}] is not generated by primitive "
                "propositions; its atom component is undefined"
            )
    return listed


def hms_to_awareness(M: HmsStructure, C: ClassSpec = ClassSpec()) -> AwarenessStructure:
    """Flatten a multi-space structure onto its own state set, reading
    awareness off the vocabulary of the states an agent considers
    possible."""
    rep = validate_hms(M, C)
    if not rep.flags["in_class"]:
        detail = rep.errors[0] if rep.errors else "class conditions fail"
        raise ModelError(
            f"structure not admissible for class {str(C) or 'base'}: {detail}"
        )

    gen_refl = {
        i: all(M.in_up(s, M.poss[(i, s)]) for s in M.states)
        for i in range(1, M.agents + 1)
    }
    poss = {}
    awareness = {}
    for i in range(1, M.agents + 1):
        for s in M.states:
            targets = M.poss[(i, s)]
            poss[(i, s)] = targets | {s} if gen_refl[i] else targets
            if targets:
                psi = M.space_of[next(iter(targets))]
            else:
                psi = M.space_of[s]
            awareness[(i, s)] = Generated(psi)
    val = {
        (s, p): 1 if M.val[(s, p)] is TRUE else 0
        for s in M.states
        for p in M.atoms
    }
    return AwarenessStructure(M.agents, M.atoms, M.states, poss, val, awareness)


def product_state(s, psi) -> str:
    """Name of the copy of s restricted to the vocabulary psi."""
    return f"{s}@{space_label(psi)}"


def awareness_to_hms(M: AwarenessStructure, atoms=None, C: ClassSpec = ClassSpec()) -> HmsStructure:
    """Unfold an awareness structure into one copy of its state set per
    vocabulary, wiring the possibility correspondences through each
    agent's awareness."""
    atoms = frozenset(M.atoms if atoms is None else atoms)
    if not atoms <= M.atoms:
        raise ModelError("target vocabulary mentions unknown atoms")
    rep = validate_awareness(M)
    needs_pd = C.t or C.e
    if needs_pd and not rep.flags["pd"]:
        raise ModelError("class with stationarity needs a pd structure")
    if not rep.flags["pg"]:
        raise ModelError("awareness must be propositionally generated")
    for prop, flag in (("reflexive", C.r), ("transitive", C.t), ("euclidean", C.e)):
        if flag and not rep.flags[prop]:
            raise ModelError(f"structure is not {prop}")

    aware = {
        (i, s): _aware_atoms(M, i, s)
        for i in range(1, M.agents + 1)
        for s in M.states
    }
    spaces = {}
    val = {}
    poss = {}
    proj = []
    for psi in subsets(atoms):
        spaces[psi] = tuple(product_state(s, psi) for s in M.states)
        for s in M.states:
            sid = product_state(s, psi)
            for p in psi:
                val[(sid, p)] = TRUE if M.val[(s, p)] == 1 else FALSE
            for i in range(1, M.agents + 1):
                poss[(i, sid)] = tuple(
                    product_state(t, psi & aware[(i, s)])
                    for t in sorted(M.poss[(i, s)], key=str)
                )
        for drop in sorted(psi):
            lower = psi - {drop}
            proj.append((psi, drop, {
                product_state(s, psi): product_state(s, lower)
                for s in M.states
            }))
    return HmsStructure(M.agents, atoms, spaces, val, poss, proj)


@dataclass(frozen=True)
class TranslationReport:
    """Per-point record of the implicit/explicit agreement check."""

    target: object
    results: tuple  # (point, target point, formula, value, target value)
    skipped: tuple  # (point, target point, formula, reason)
    all_agree: bool

    def witnesses(self):
        return tuple(r for r in self.results if not _match(r[3], r[4]))


def _match(a, b) -> bool:
    ta = a is TRUE if not isinstance(a, bool) else a
    tb = b is TRUE if not isinstance(b, bool) else b
    return ta == tb


def check_agreement(M, M2, correspondence, formulas) -> TranslationReport:
    """Evaluate each formula at each corresponded point pair and record
    whether truth matches; on an awareness-side structure the formula's
    knowledge operators are read as explicit knowledge.

    Points whose vocabulary cannot express the formula are skipped and
    listed, not failed."""
    results = []
    skipped = []
    for f in formulas:
        for x, y in correspondence.items():
            vx, sx = _eval_point(M, x, f)
            if sx is not None:
                skipped.append((x, y, f, sx))
                continue
            vy, sy = _eval_point(M2, y, f)
            if sy is not None:
                skipped.append((x, y, f, sy))
                continue
            results.append((x, y, f, vx, vy))
    all_agree = all(_match(r[3], r[4]) for r in results)
    return TranslationReport(
        target=M2,
        results=tuple(results),
        skipped=tuple(skipped),
        all_agree=all_agree,
    )


def _eval_point(M, s, f: Formula):
    """Value at one point, or a reason the point cannot express f."""
    if isinstance(M, HmsStructure):
        psi = M.space_of[s]
        if not primitives(f) <= psi:
            return None, f"{render(f)} not expressible in {space_label(psi)!r}"
        return eval_hms(M, s, f), None
    if isinstance(M, AwarenessStructure):
        return eval_structure(M, s, to_explicit(f)), None
    return eval_structure(M, s, f), None
