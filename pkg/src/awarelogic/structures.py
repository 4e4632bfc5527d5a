"""Model classes for the four structure kinds, their validators, and
the JSON interchange format.

Construction enforces only what later code cannot work without (total
maps, disjoint spaces, a complete projection family).  Everything the
theory cares about beyond that - relational properties, value
discipline, surjectivity and path independence of projections, the
awareness restrictions - is reported by the validate_* functions, so
that deliberately broken models can be loaded and diagnosed.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from typing import Optional

from .syntax import Formula, parse, primitives, render


class ModelError(ValueError):
    """Malformed model data (missing fields, non-total maps)."""


class UnknownState(ModelError):
    """A state id that the structure does not contain."""


class TruthValue(enum.Enum):
    FALSE = 0
    UNDEF = 1
    TRUE = 2

    @property
    def text(self) -> str:
        return {0: "0", 1: "1/2", 2: "1"}[self.value]

    @classmethod
    def from_text(cls, text) -> "TruthValue":
        table = {"0": cls.FALSE, "1/2": cls.UNDEF, "1": cls.TRUE,
                 0: cls.FALSE, 1: cls.TRUE}
        try:
            return table[text]
        except KeyError:
            raise ModelError(f"bad truth value {text!r}") from None

    def __repr__(self):
        return f"TruthValue({self.text!r})"


FALSE = TruthValue.FALSE
UNDEF = TruthValue.UNDEF
TRUE = TruthValue.TRUE


@dataclass(frozen=True)
class ClassSpec:
    """Which of the reflexive/transitive/Euclidean conditions (or their
    multi-space analogues) a structure class imposes."""

    r: bool = False
    t: bool = False
    e: bool = False

    @classmethod
    def from_text(cls, text: str) -> "ClassSpec":
        letters = set(text.replace(",", "").strip())
        if not letters <= {"r", "t", "e"}:
            raise ValueError(f"class letters must come from r,t,e: {text!r}")
        return cls(r="r" in letters, t="t" in letters, e="e" in letters)

    @property
    def partitional(self) -> bool:
        return self.r and self.t and self.e

    def __str__(self):
        return "".join(c for c, on in (("r", self.r), ("t", self.t), ("e", self.e)) if on)


@dataclass
class PropertyReport:
    kind: str
    flags: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def subsets(atoms):
    """All subsets of an atom set, smallest first, lexicographic within a size."""
    items = sorted(atoms)
    out = []
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            out.append(frozenset(combo))
    return out


def space_label(psi) -> str:
    return ",".join(sorted(psi))


def label_space(label: str) -> frozenset:
    if label == "":
        return frozenset()
    return frozenset(label.split(","))


def _space_key(psi):
    return (len(psi), tuple(sorted(psi)))


# ---------------------------------------------------------------------------
# Kripke and awareness structures

class KripkeStructure:
    kind = "kripke"

    def __init__(self, agents: int, atoms, states, poss, val):
        if agents < 1:
            raise ModelError("need at least one agent")
        self.agents = agents
        self.atoms = frozenset(atoms)
        self.states = tuple(states)
        if not self.states:
            raise ModelError("state set is empty")
        if len(set(self.states)) != len(self.states):
            raise ModelError("duplicate state ids")
        self.poss = {}
        for i in range(1, agents + 1):
            for s in self.states:
                try:
                    self.poss[(i, s)] = frozenset(poss[(i, s)])
                except KeyError:
                    raise ModelError(f"poss missing for agent {i}, state {s!r}") from None
        self.val = {}
        for s in self.states:
            for p in sorted(self.atoms):
                try:
                    v = val[(s, p)]
                except KeyError:
                    raise ModelError(f"val missing for ({s!r}, {p!r})") from None
                if v not in (0, 1):
                    raise ModelError(f"val({s!r},{p!r}) must be 0 or 1")
                self.val[(s, p)] = v
        self._cache = {}

    def check_state(self, s):
        if s not in set(self.states):
            raise UnknownState(f"unknown state {s!r}")


@dataclass(frozen=True)
class Generated:
    """Awareness set holding every formula whose primitives lie in `atoms`."""

    atoms: frozenset

    def contains(self, f: Formula) -> bool:
        return primitives(f) <= self.atoms


@dataclass(frozen=True)
class Explicit:
    """Awareness set holding exactly the listed formulas."""

    formulas: frozenset

    def contains(self, f: Formula) -> bool:
        return f in self.formulas


class AwarenessStructure(KripkeStructure):
    kind = "awareness"

    def __init__(self, agents, atoms, states, poss, val, awareness):
        super().__init__(agents, atoms, states, poss, val)
        self.awareness = {}
        for i in range(1, agents + 1):
            for s in self.states:
                try:
                    aset = awareness[(i, s)]
                except KeyError:
                    raise ModelError(
                        f"awareness missing for agent {i}, state {s!r}"
                    ) from None
                if not isinstance(aset, (Generated, Explicit)):
                    raise ModelError(f"bad awareness set for agent {i}, state {s!r}")
                self.awareness[(i, s)] = aset


def validate_kripke(M: KripkeStructure) -> PropertyReport:
    """Reflexivity, transitivity, Euclideanness of every agent's
    possibility correspondence; partitional means all three."""
    report = PropertyReport(kind="kripke")
    known = set(M.states)
    for (i, s), targets in sorted(M.poss.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))):
        for t in sorted(targets, key=str):
            if t not in known:
                report.errors.append(f"poss[{i},{s}] mentions unknown state {t!r}")
    refl = trans = eucl = True
    for i in range(1, M.agents + 1):
        for s in M.states:
            ks = M.poss[(i, s)] & known
            if s not in ks:
                refl = False
            for t in ks:
                kt = M.poss[(i, t)] & known
                if not kt <= ks:
                    trans = False
                if not kt >= ks:
                    eucl = False
    report.flags = {
        "reflexive": refl,
        "transitive": trans,
        "euclidean": eucl,
        "partitional": refl and trans and eucl,
    }
    return report


def pg_test_language(atoms, agents: int, max_size: int = 5):
    """The finite language over which Explicit awareness sets are tested
    for closure under the generated-by-primitives biconditional."""
    from .syntax import iter_formulas

    return list(iter_formulas(sorted(atoms), max_size, lang="kxa",
                              agents=agents, max_depth=1))


def validate_awareness(M: AwarenessStructure, max_formula_size: int = 5) -> PropertyReport:
    base = validate_kripke(M)
    report = PropertyReport(kind="awareness", flags=dict(base.flags),
                            errors=list(base.errors))
    known = set(M.states)

    pg = True
    test_lang = None
    for (i, s), aset in M.awareness.items():
        if isinstance(aset, Generated):
            if not aset.atoms <= M.atoms:
                report.errors.append(
                    f"awareness[{i},{s}] generated by unknown atoms "
                    f"{sorted(aset.atoms - M.atoms)}"
                )
            continue
        # an explicit listing is pg only if it behaves like a generated
        # set on every formula of the declared test language
        if test_lang is None:
            test_lang = pg_test_language(M.atoms, M.agents, max_formula_size)
        listed_atoms = frozenset(
            p for p in M.atoms if aset.contains(parse(p, "kxa"))
        )
        for f in test_lang:
            if aset.contains(f) != (primitives(f) <= listed_atoms):
                pg = False
                break

    ka = True
    for i in range(1, M.agents + 1):
        for s in M.states:
            for t in M.poss[(i, s)] & known:
                if M.awareness[(i, s)] != M.awareness[(i, t)]:
                    ka = False
    report.flags["pg"] = pg
    report.flags["ka"] = ka
    report.flags["pd"] = pg and ka
    return report


# ---------------------------------------------------------------------------
# generalized standard models (single agent)

class Gsm:
    kind = "gsm"

    def __init__(self, atoms, objective, spaces, val, poss, proj):
        self.atoms = frozenset(atoms)
        self.objective = tuple(objective)
        if not self.objective:
            raise ModelError("no objective states")
        self.spaces = {}
        for psi in subsets(self.atoms):
            states = spaces.get(psi, ())
            self.spaces[psi] = tuple(states)
        extra = set(spaces) - set(self.spaces)
        if extra:
            raise ModelError(f"spaces outside the atom powerset: {sorted(map(space_label, extra))}")
        self.subjective = tuple(
            s for psi in sorted(self.spaces, key=_space_key) for s in self.spaces[psi]
        )
        all_states = list(self.objective) + list(self.subjective)
        if len(set(all_states)) != len(all_states):
            raise ModelError("state ids must be globally unique")
        self.space_of = {}
        for psi, states in self.spaces.items():
            for s in states:
                self.space_of[s] = psi
        self.val = {}
        for s in self.objective:
            for p in sorted(self.atoms):
                try:
                    v = val[(s, p)]
                except KeyError:
                    raise ModelError(f"val missing for ({s!r}, {p!r})") from None
                if v not in (0, 1):
                    raise ModelError(f"val({s!r},{p!r}) must be 0 or 1")
                self.val[(s, p)] = v
        self.poss = {}
        self.proj = {}
        for s in self.objective:
            try:
                self.poss[s] = frozenset(poss[s])
            except KeyError:
                raise ModelError(f"poss missing for objective state {s!r}") from None
            try:
                self.proj[s] = proj[s]
            except KeyError:
                raise ModelError(f"proj missing for objective state {s!r}") from None
        self._cache = {}

    def check_state(self, s):
        if s not in self.space_of and s not in set(self.objective):
            raise UnknownState(f"unknown state {s!r}")

    def extension(self):
        """Extend poss and val from objective states to their
        projections; conflicts are resolved first-wins and reported by
        the validator, not here."""
        ext_poss = {}
        ext_val = {}
        for s in self.objective:
            target = self.proj[s]
            if target not in ext_poss:
                ext_poss[target] = self.poss[s]
                psi = self.space_of.get(target)
                if psi is not None:
                    for p in psi:
                        ext_val[(target, p)] = self.val[(s, p)]
        return ext_poss, ext_val


def validate_gsm(M: Gsm) -> PropertyReport:
    report = PropertyReport(kind="gsm")
    subjective = set(M.subjective)
    for s in M.objective:
        if M.proj[s] not in subjective:
            report.errors.append(f"proj[{s}] = {M.proj[s]!r} is not a subjective state")
        for t in sorted(M.poss[s], key=str):
            if t not in subjective:
                report.errors.append(f"poss[{s}] mentions non-subjective state {t!r}")

    cond_1a = cond_1b = cond_2 = True
    for s, t in itertools.combinations(M.objective, 2):
        if M.proj[s] != M.proj[t]:
            continue
        if M.poss[s] != M.poss[t]:
            cond_1b = False
        psi = M.space_of.get(M.proj[s], frozenset())
        for p in psi:
            if M.val[(s, p)] != M.val[(t, p)]:
                cond_1a = False
    for s in M.objective:
        psi = M.space_of.get(M.proj[s])
        if psi is None:
            continue
        space = set(M.spaces[psi])
        if not M.poss[s] <= space:
            cond_2 = False

    ext_poss, _ = M.extension()
    # every subjective state the correspondences can reach must itself
    # carry an extension, i.e. lie in the image of proj
    reachable = set()
    frontier = set().union(*(M.poss[s] for s in M.objective)) if M.objective else set()
    while frontier:
        u = frontier.pop()
        if u in reachable or u not in subjective:
            continue
        reachable.add(u)
        if u in ext_poss:
            frontier |= set(ext_poss[u]) - reachable
    for u in sorted(reachable, key=str):
        if u not in ext_poss:
            report.errors.append(
                f"subjective state {u!r} is reachable but outside the image of proj; "
                "the extended correspondence is undefined there"
            )

    refl = trans = eucl = True
    for u, ku in ext_poss.items():
        ku = ku & subjective
        if u not in ku:
            refl = False
        for t in ku:
            kt = ext_poss.get(t)
            if kt is None:
                continue
            if not kt <= ku:
                trans = False
            if not kt >= ku:
                eucl = False
    report.flags = {
        "condition_1a": cond_1a,
        "condition_1b": cond_1b,
        "condition_2": cond_2,
        "reflexive": refl,
        "transitive": trans,
        "euclidean": eucl,
        "partitional": refl and trans and eucl,
    }
    return report


# ---------------------------------------------------------------------------
# multi-space structures with three-valued valuation

class HmsStructure:
    kind = "hms"

    def __init__(self, agents: int, atoms, spaces, val, poss, proj):
        """proj is the covering family: an entry per (space, dropped atom)
        pair, as (from_space, drop, map) triples; longer descents are
        composed on demand along the sorted-drop path."""
        if agents < 1:
            raise ModelError("need at least one agent")
        self.agents = agents
        self.atoms = frozenset(atoms)
        self.spaces = {}
        for psi in subsets(self.atoms):
            if psi not in spaces:
                raise ModelError(f"space {space_label(psi)!r} missing")
            self.spaces[psi] = tuple(spaces[psi])
        extra = set(spaces) - set(self.spaces)
        if extra:
            raise ModelError(
                f"spaces outside the atom powerset: {sorted(map(space_label, extra))}"
            )
        self.states = tuple(
            s for psi in sorted(self.spaces, key=_space_key) for s in self.spaces[psi]
        )
        if not self.states:
            raise ModelError("structure has no states at all")
        if len(set(self.states)) != len(self.states):
            raise ModelError("state ids must be globally unique across spaces")
        self.space_of = {s: psi for psi, sts in self.spaces.items() for s in sts}

        for psi in self.spaces:
            if self.spaces[psi]:
                continue
            above = [q for q in self.spaces if psi < q and self.spaces[q]]
            if above:
                raise ModelError(
                    f"space {space_label(psi)!r} is empty below nonempty "
                    f"space {space_label(min(above, key=_space_key))!r}"
                )

        self.val = {}
        for s in self.states:
            for p in sorted(self.atoms):
                v = val.get((s, p), UNDEF)
                if not isinstance(v, TruthValue):
                    raise ModelError(f"val({s!r},{p!r}) must be a TruthValue")
                self.val[(s, p)] = v
        self.poss = {}
        for i in range(1, agents + 1):
            for s in self.states:
                try:
                    self.poss[(i, s)] = frozenset(poss[(i, s)])
                except KeyError:
                    raise ModelError(f"poss missing for agent {i}, state {s!r}") from None

        # covering maps, keyed by (source space, dropped atom)
        self._cover = {}
        for from_space, drop, mapping in proj:
            from_space = frozenset(from_space)
            key = (from_space, drop)
            if from_space not in self.spaces or drop not in from_space:
                raise ModelError(f"bad projection source ({space_label(from_space)!r}, {drop!r})")
            if key in self._cover:
                raise ModelError(f"duplicate projection for ({space_label(from_space)!r}, {drop!r})")
            target = from_space - {drop}
            target_states = set(self.spaces[target])
            entry = {}
            for s in self.spaces[from_space]:
                if s not in mapping:
                    raise ModelError(
                        f"projection ({space_label(from_space)!r}, {drop!r}) "
                        f"undefined at {s!r}"
                    )
                if mapping[s] not in target_states:
                    raise ModelError(
                        f"projection ({space_label(from_space)!r}, {drop!r}) sends "
                        f"{s!r} outside {space_label(target)!r}"
                    )
                entry[s] = mapping[s]
            self._cover[key] = entry
        for psi in self.spaces:
            for p in psi:
                if (psi, p) not in self._cover:
                    raise ModelError(
                        f"projection missing for ({space_label(psi)!r}, {p!r})"
                    )
        self._ptable: Optional[dict] = None
        self._cache = {}

    def check_state(self, s):
        if s not in self.space_of:
            raise UnknownState(f"unknown state {s!r}")

    def proj_to(self, s, target):
        """Project a state down to a weakly smaller space, dropping the
        extra atoms in sorted order (the validator certifies that every
        drop order agrees)."""
        src = self.space_of[s]
        target = frozenset(target)
        if not target <= src:
            raise ModelError(
                f"cannot project {space_label(src)!r} state to {space_label(target)!r}"
            )
        cur, cur_space = s, src
        for a in sorted(src - target):
            cur = self._cover[(cur_space, a)][cur]
            cur_space = cur_space - {a}
        return cur

    def proj_table(self):
        """state -> {smaller space -> projected state}, cached."""
        if self._ptable is None:
            table = {}
            for s in self.states:
                src = self.space_of[s]
                row = {}
                for psi in subsets(src):
                    row[psi] = self.proj_to(s, psi)
                table[s] = row
            self._ptable = table
        return self._ptable

    def in_up(self, u, B) -> bool:
        """Whether u lies in the upward closure of B (B need not sit in
        a single space: u counts when it projects into B)."""
        row = self.proj_table()[u]
        space_u = self.space_of[u]
        for t in B:
            psi = self.space_of.get(t)
            if psi is not None and psi <= space_u and row[psi] == t:
                return True
        return False


def up_closure(M: HmsStructure, B, psi) -> frozenset:
    """All states of weakly larger spaces projecting into B <= S_psi."""
    psi = frozenset(psi)
    if psi not in M.spaces:
        raise ModelError(f"unknown space {space_label(psi)!r}")
    B = frozenset(B)
    if not B <= set(M.spaces[psi]):
        raise ModelError("up_closure argument must sit inside the named space")
    table = M.proj_table()
    out = []
    for s in M.states:
        if psi <= M.space_of[s] and table[s][psi] in B:
            out.append(s)
    return frozenset(out)


def validate_hms(M: HmsStructure, C: ClassSpec = ClassSpec()) -> PropertyReport:
    report = PropertyReport(kind="hms")

    value_ok = True
    for s in M.states:
        psi = M.space_of[s]
        for p in sorted(M.atoms):
            defined = M.val[(s, p)] != UNDEF
            if defined != (p in psi):
                value_ok = False
                report.errors.append(
                    f"val({s},{p}) must be {'defined' if p in psi else '1/2'} "
                    f"in space {space_label(psi)!r}"
                )

    proj_ok = True
    for (src, drop), mapping in sorted(M._cover.items(), key=lambda kv: (_space_key(kv[0][0]), kv[0][1])):
        target = src - {drop}
        if set(mapping.values()) != set(M.spaces[target]):
            proj_ok = False
            report.errors.append(
                f"projection ({space_label(src)!r}, {drop!r}) is not onto "
                f"{space_label(target)!r}"
            )
        # a projected state is the same state described in fewer atoms,
        # so the two must agree wherever both are defined; checking one
        # drop at a time covers every longer descent by composition
        for s in M.spaces[src]:
            u = mapping[s]
            for p in sorted(target):
                if M.val[(s, p)] != M.val[(u, p)]:
                    proj_ok = False
                    report.errors.append(
                        f"projection ({space_label(src)!r}, {drop!r}) changes "
                        f"val({p}) at {s!r}: {M.val[(s, p)].text} -> "
                        f"{M.val[(u, p)].text}"
                    )
    # path independence: adjacent drop orders must commute; that pins
    # down every longer descent as well
    for psi in M.spaces:
        for a, b in itertools.combinations(sorted(psi), 2):
            for s in M.spaces[psi]:
                via_a = M._cover[(psi - {a}, b)][M._cover[(psi, a)][s]]
                via_b = M._cover[(psi - {b}, a)][M._cover[(psi, b)][s]]
                if via_a != via_b:
                    proj_ok = False
                    report.errors.append(
                        f"projections from {space_label(psi)!r} disagree at {s!r}: "
                        f"dropping {a},{b} gives {via_a!r}, dropping {b},{a} gives {via_b!r}"
                    )

    known = set(M.states)
    dangling = False
    for (i, s), targets in M.poss.items():
        for t in targets:
            if t not in known:
                dangling = True
                report.errors.append(f"poss[{i},{s}] mentions unknown state {t!r}")

    def ks(i, s):
        out = M.poss[(i, s)]
        return out & known if dangling else out

    confined = True
    gen_refl = True
    stat_a = True
    stat_b = True
    for i in range(1, M.agents + 1):
        for s in M.states:
            targets = ks(i, s)
            target_spaces = {M.space_of[t] for t in targets}
            if len(target_spaces) > 1 or any(
                not q <= M.space_of[s] for q in target_spaces
            ):
                confined = False
            if not M.in_up(s, targets):
                gen_refl = False
            for t in targets:
                if not ks(i, t) <= targets:
                    stat_a = False
                if not ks(i, t) >= targets:
                    stat_b = False

    all_spaces = subsets(M.atoms)

    pk = True
    for i in range(1, M.agents + 1):
        for psi3 in all_spaces:
            smaller2 = [q for q in all_spaces if q <= psi3]
            for s in M.spaces[psi3]:
                targets = ks(i, s)
                for psi2 in smaller2:
                    if not all(M.space_of[t] == psi2 for t in targets):
                        continue
                    for psi1 in all_spaces:
                        if not psi1 <= psi2:
                            continue
                        image = {M.proj_to(t, psi1) for t in targets}
                        if image != ks(i, M.proj_to(s, psi1)):
                            pk = False

    pi = True
    for i in range(1, M.agents + 1):
        for s in M.states:
            src = M.space_of[s]
            targets = ks(i, s)
            ups = [u for u in M.states if M.in_up(u, targets)]
            for psi in all_spaces:
                if not psi <= src:
                    continue
                below = ks(i, M.proj_to(s, psi))
                for u in ups:
                    if not M.in_up(u, below):
                        pi = False

    in_class = confined and pk and pi and value_ok and proj_ok
    if C.r:
        in_class = in_class and gen_refl
    if C.t:
        in_class = in_class and stat_a
    if C.e:
        in_class = in_class and stat_b

    report.flags = {
        "value_discipline": value_ok,
        "projections_well_formed": proj_ok,
        "confinedness": confined,
        "gen_reflexivity": gen_refl,
        "stationarity_a": stat_a,
        "stationarity_b": stat_b,
        "proj_knowledge": pk,
        "proj_ignorance": pi,
        "in_class": in_class,
    }
    return report


# ---------------------------------------------------------------------------
# JSON interchange

def _tv_out(v) -> str:
    if isinstance(v, TruthValue):
        return v.text
    return {0: "0", 1: "1"}[v]


def structure_to_dict(M) -> dict:
    if isinstance(M, AwarenessStructure):
        d = _kripke_dict(M)
        d["kind"] = "awareness"
        aw = {}
        for i in range(1, M.agents + 1):
            row = {}
            for s in M.states:
                aset = M.awareness[(i, s)]
                if isinstance(aset, Generated):
                    row[s] = {"generated": sorted(aset.atoms)}
                else:
                    row[s] = {"formulas": sorted(render(f) for f in aset.formulas)}
            aw[str(i)] = row
        d["awareness"] = aw
        return d
    if isinstance(M, KripkeStructure):
        return _kripke_dict(M)
    if isinstance(M, Gsm):
        return {
            "kind": "gsm",
            "atoms": sorted(M.atoms),
            "objective": list(M.objective),
            "spaces": {space_label(psi): list(sts) for psi, sts in M.spaces.items()},
            "val": {
                s: {p: _tv_out(M.val[(s, p)]) for p in sorted(M.atoms)}
                for s in M.objective
            },
            "poss": {s: sorted(M.poss[s], key=str) for s in M.objective},
            "proj": {s: M.proj[s] for s in M.objective},
        }
    if isinstance(M, HmsStructure):
        proj_entries = []
        for (src, drop), mapping in sorted(
            M._cover.items(), key=lambda kv: (_space_key(kv[0][0]), kv[0][1])
        ):
            proj_entries.append({
                "from_space": sorted(src),
                "drop": drop,
                "map": dict(mapping),
            })
        return {
            "kind": "hms",
            "agents": M.agents,
            "atoms": sorted(M.atoms),
            "spaces": {space_label(psi): list(sts) for psi, sts in M.spaces.items()},
            "val": {
                s: {p: M.val[(s, p)].text for p in sorted(M.atoms)}
                for s in M.states
            },
            "poss": {
                str(i): {s: sorted(M.poss[(i, s)], key=str) for s in M.states}
                for i in range(1, M.agents + 1)
            },
            "proj": proj_entries,
        }
    raise ModelError(f"cannot serialize {type(M).__name__}")


def _kripke_dict(M: KripkeStructure) -> dict:
    return {
        "kind": "kripke",
        "agents": M.agents,
        "atoms": sorted(M.atoms),
        "states": list(M.states),
        "poss": {
            str(i): {s: sorted(M.poss[(i, s)], key=str) for s in M.states}
            for i in range(1, M.agents + 1)
        },
        "val": {
            s: {p: _tv_out(M.val[(s, p)]) for p in sorted(M.atoms)}
            for s in M.states
        },
    }


def _need(d, key):
    if key not in d:
        raise ModelError(f"model file missing {key!r}")
    return d[key]


def _bit(v) -> int:
    if v in (0, 1):
        return int(v)
    if v in ("0", "1"):
        return int(v)
    raise ModelError(f"two-valued valuation entry must be 0 or 1, got {v!r}")


def _read_poss(d, agents, states):
    poss = {}
    raw = _need(d, "poss")
    for i in range(1, agents + 1):
        agent_row = raw.get(str(i), {})
        for s in states:
            if s in agent_row:
                poss[(i, s)] = frozenset(agent_row[s])
    return poss


def structure_from_dict(d: dict):
    kind = _need(d, "kind")
    if kind in ("kripke", "awareness"):
        agents = int(_need(d, "agents"))
        atoms = _need(d, "atoms")
        states = list(_need(d, "states"))
        poss = _read_poss(d, agents, states)
        raw_val = _need(d, "val")
        val = {
            (s, p): _bit(raw_val.get(s, {}).get(p))
            for s in states
            for p in atoms
            if raw_val.get(s, {}).get(p) is not None
        }
        if kind == "kripke":
            return KripkeStructure(agents, atoms, states, poss, val)
        awareness = {}
        raw_aw = _need(d, "awareness")
        for i in range(1, agents + 1):
            row = raw_aw.get(str(i), {})
            for s in states:
                if s not in row:
                    continue
                entry = row[s]
                if "generated" in entry:
                    awareness[(i, s)] = Generated(frozenset(entry["generated"]))
                elif "formulas" in entry:
                    awareness[(i, s)] = Explicit(
                        frozenset(parse(t, "kxa") for t in entry["formulas"])
                    )
                else:
                    raise ModelError(
                        f"awareness entry for agent {i}, state {s!r} needs "
                        "'generated' or 'formulas'"
                    )
        return AwarenessStructure(agents, atoms, states, poss, val, awareness)
    if kind == "gsm":
        atoms = _need(d, "atoms")
        spaces = {
            label_space(label): list(sts)
            for label, sts in _need(d, "spaces").items()
        }
        raw_val = _need(d, "val")
        objective = list(_need(d, "objective"))
        val = {
            (s, p): _bit(raw_val.get(s, {}).get(p))
            for s in objective
            for p in atoms
            if raw_val.get(s, {}).get(p) is not None
        }
        poss = {s: frozenset(v) for s, v in _need(d, "poss").items()}
        return Gsm(atoms, objective, spaces, val, poss, _need(d, "proj"))
    if kind == "hms":
        agents = int(_need(d, "agents"))
        atoms = _need(d, "atoms")
        spaces = {
            label_space(label): list(sts)
            for label, sts in _need(d, "spaces").items()
        }
        states = [s for sts in spaces.values() for s in sts]
        raw_val = _need(d, "val")
        val = {}
        for s in states:
            for p in atoms:
                raw = raw_val.get(s, {}).get(p)
                if raw is not None:
                    val[(s, p)] = TruthValue.from_text(raw)
        poss = _read_poss(d, agents, states)
        proj = [
            (frozenset(e["from_space"]), e["drop"], e["map"])
            for e in _need(d, "proj")
        ]
        return HmsStructure(agents, atoms, spaces, val, poss, proj)
    raise ModelError(f"unknown model kind {kind!r}")


def save_model(M, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(structure_to_dict(M), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        return structure_from_dict(json.load(fh))


def validate_structure(M, C: ClassSpec = ClassSpec()) -> PropertyReport:
    """Dispatch to the kind-specific validator."""
    if isinstance(M, AwarenessStructure):
        return validate_awareness(M)
    if isinstance(M, KripkeStructure):
        return validate_kripke(M)
    if isinstance(M, Gsm):
        return validate_gsm(M)
    if isinstance(M, HmsStructure):
        return validate_hms(M, C)
    raise ModelError(f"cannot validate {type(M).__name__}")
