"""Validity notions, the propositional three-valued decision table,
desk-scale structure enumeration, and bounded countermodel search.

Enumeration is exhaustive up to documented caps, deduplicated by state
relabeling within each space, and streamed in a fixed canonical order so
searches are reproducible.  Absence of a countermodel within bounds is a
normal result and never a validity proof.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .semantics import eval_gsm, eval_hms, eval_prop3, eval_structure
from .structures import (
    FALSE,
    TRUE,
    UNDEF,
    AwarenessStructure,
    ClassSpec,
    Generated,
    Gsm,
    HmsStructure,
    KripkeStructure,
    ModelError,
    space_label,
    subsets,
    validate_gsm,
    validate_hms,
    validate_kripke,
)
from .syntax import (
    And,
    Formula,
    NImp,
    Not,
    Prop,
    Top,
    modal_depth,
    primitives,
    render,
)
from .translate import awareness_to_hms

ATOM_POOL = ("p", "q")
KINDS = ("kripke", "awareness", "gsm", "hms")

# kind -> (atoms, states) ceiling for exhaustive streams; states count
# per space for hms, total otherwise; agents capped at 2 throughout
EXHAUSTIVE_CAPS = {
    "kripke": (2, 3),
    "awareness": (2, 3),
    "gsm": (2, 3),
    "hms": (2, 2),
}
AGENT_CAP = 2


class ValidityMode(Enum):
    WEAK = "weak"
    STRONG = "strong"
    OBJECTIVE = "objective"
    CLASSICAL = "classical"

    @classmethod
    def from_text(cls, text: str) -> "ValidityMode":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(
                f"mode must be one of weak/strong/objective/classical, got {text!r}"
            ) from None


# which structure kinds each mode quantifies over
_MODE_KINDS = {
    ValidityMode.WEAK: ("hms", "gsm"),
    ValidityMode.STRONG: ("hms", "gsm"),
    ValidityMode.OBJECTIVE: ("gsm",),
    ValidityMode.CLASSICAL: ("kripke", "awareness"),
}


@dataclass(frozen=True)
class SearchBounds:
    """Limits for enumeration and search.  max_states counts states per
    space for hms and total states otherwise; gsm ignores max_agents.
    Randomized mode needs an explicit seed and a sample count."""

    max_atoms: int = 1
    max_agents: int = 1
    max_states: int = 2
    mode: str = "exhaustive"
    seed: Optional[int] = None
    samples: int = 0

    def __post_init__(self):
        if min(self.max_atoms, self.max_agents, self.max_states) < 1:
            raise ValueError("all bounds must be at least 1")
        if self.mode not in ("exhaustive", "randomized"):
            raise ValueError(f"mode must be exhaustive or randomized, not {self.mode!r}")
        if self.mode == "randomized":
            if self.seed is None:
                raise ValueError("randomized mode requires an explicit seed")
            if self.samples < 1:
                raise ValueError("randomized mode requires samples >= 1")


def _coerce_mode(mode) -> ValidityMode:
    if isinstance(mode, ValidityMode):
        return mode
    return ValidityMode.from_text(str(mode))


def _check_mode_kind(kind: str, mode: ValidityMode):
    if kind not in _MODE_KINDS[mode]:
        allowed = "/".join(_MODE_KINDS[mode])
        raise ModelError(f"{mode.value} validity applies to {allowed} structures, not {kind}")


def _gsm_states(M: Gsm):
    return tuple(M.objective) + tuple(M.subjective)


def valid_in(M, f: Formula, mode) -> bool:
    """Whether f holds in M under the given validity notion: weak means
    never value 0, strong means value 1 everywhere, objective quantifies
    over the objective states only, classical over a two-valued
    structure's states."""
    mode = _coerce_mode(mode)
    kind = getattr(M, "kind", type(M).__name__)
    _check_mode_kind(kind, mode)
    if mode is ValidityMode.CLASSICAL:
        return all(eval_structure(M, s, f) for s in M.states)
    if mode is ValidityMode.OBJECTIVE:
        return all(eval_gsm(M, s, f) is TRUE for s in M.objective)
    states = M.states if kind == "hms" else _gsm_states(M)
    evalf = eval_hms if kind == "hms" else eval_gsm
    if mode is ValidityMode.WEAK:
        return all(evalf(M, s, f) is not FALSE for s in states)
    return all(evalf(M, s, f) is TRUE for s in states)


# ---------------------------------------------------------------------------
# propositional decision by exhaustive assignment

STRONGLY_VALID = "strongly_valid"
WEAKLY_VALID_ONLY = "weakly_valid_only"
FALSIFIABLE = "falsifiable"


@dataclass(frozen=True)
class Prop3Report:
    """Full value table of a propositional formula over {0, 1/2, 1}
    assignments, with the resulting verdict."""

    formula: Formula
    atoms: tuple
    rows: tuple  # ((value per atom, in atoms order), formula value)
    verdict: str

    def value_at(self, assignment: dict):
        combo = tuple(assignment[a] for a in self.atoms)
        for row, v in self.rows:
            if row == combo:
                return v
        raise KeyError(f"no row for {combo}")


def prop3_status(f: Formula) -> Prop3Report:
    """Evaluate f under every three-valued assignment to its atoms.
    strongly_valid: always 1; weakly_valid_only: never 0 but sometimes
    1/2; falsifiable: 0 somewhere."""
    if modal_depth(f) > 0:
        raise ModelError("propositional decision needs a modality-free formula")
    atoms = tuple(sorted(primitives(f)))
    rows = []
    for combo in itertools.product((FALSE, UNDEF, TRUE), repeat=len(atoms)):
        rows.append((combo, eval_prop3(f, dict(zip(atoms, combo)))))
    values = [v for _, v in rows]
    if all(v is TRUE for v in values):
        verdict = STRONGLY_VALID
    elif all(v is not FALSE for v in values):
        verdict = WEAKLY_VALID_ONLY
    else:
        verdict = FALSIFIABLE
    return Prop3Report(f, atoms, tuple(rows), verdict)


def _bool_eval(f: Formula, row: dict) -> bool:
    if isinstance(f, Top):
        return True
    if isinstance(f, Prop):
        return row[f.name]
    if isinstance(f, Not):
        return not _bool_eval(f.body, row)
    if isinstance(f, And):
        return _bool_eval(f.left, row) and _bool_eval(f.right, row)
    raise ModelError(f"two-valued tables cover Boolean skeletons only, got {render(f)}")


def prop2_tautology(f: Formula) -> bool:
    """Two-valued truth-table validity of a Boolean skeleton."""
    atoms = tuple(sorted(primitives(f)))
    return all(
        _bool_eval(f, dict(zip(atoms, combo)))
        for combo in itertools.product((False, True), repeat=len(atoms))
    )


def _fresh_names():
    k = 0
    while True:
        k += 1
        n, out = k, ""
        while n:
            n, r = divmod(n - 1, 26)
            out = chr(97 + r) + out
        yield out


def skeletonize(f: Formula, keep_nimp: bool = False):
    """Abstract every maximal subformula that is not Boolean (nor an
    implication node, when keep_nimp is set) into a fresh atom; equal
    subformulas share an atom.  Returns the skeleton and the atom-to-
    subformula map."""
    names = {}
    gen = _fresh_names()

    def walk(g):
        if isinstance(g, Top):
            return g
        if isinstance(g, Not):
            return Not(walk(g.body))
        if isinstance(g, And):
            return And(walk(g.left), walk(g.right))
        if keep_nimp and isinstance(g, NImp):
            return NImp(walk(g.left), walk(g.right))
        if g not in names:
            names[g] = next(gen)
        return Prop(names[g])

    sk = walk(f)
    return sk, {name: g for g, name in names.items()}


# ---------------------------------------------------------------------------
# exhaustive enumeration

def _space_key(psi):
    return (len(psi), tuple(sorted(psi)))


def _state_subsets(states):
    out = []
    for r in range(len(states) + 1):
        for combo in itertools.combinations(states, r):
            out.append(frozenset(combo))
    return out


def _relations(states, C: ClassSpec):
    """All possibility assignments for one agent over the given states,
    filtered by the class letters."""
    choices = _state_subsets(states)
    out = []
    for combo in itertools.product(choices, repeat=len(states)):
        rel = dict(zip(states, combo))
        if C.r and any(s not in rel[s] for s in states):
            continue
        ok = True
        for s in states:
            for t in rel[s]:
                if C.t and not rel[t] <= rel[s]:
                    ok = False
                if C.e and not rel[t] >= rel[s]:
                    ok = False
        if ok:
            out.append(rel)
    return out


def _flat_key(M, sigma):
    """Serialized form of M relabeled by sigma, read in canonical state
    order; used to keep one representative per relabeling orbit."""
    inv = {v: k for k, v in sigma.items()}
    atoms = sorted(M.atoms)
    idx = {s: k for k, s in enumerate(M.states)}
    val_part = tuple(M.val[(inv[s], p)] for s in M.states for p in atoms)
    poss_part = tuple(
        tuple(sorted(idx[sigma[t]] for t in M.poss[(i, inv[s])]))
        for i in range(1, M.agents + 1)
        for s in M.states
    )
    aw_part = ()
    if isinstance(M, AwarenessStructure):
        aw_part = tuple(
            tuple(sorted(M.awareness[(i, inv[s])].atoms))
            for i in range(1, M.agents + 1)
            for s in M.states
        )
    return (val_part, poss_part, aw_part)


def _flat_canonical(M) -> bool:
    states = M.states
    if len(states) == 1:
        return True
    base = _flat_key(M, {s: s for s in states})
    for perm in itertools.permutations(states):
        sigma = dict(zip(states, perm))
        if _flat_key(M, sigma) < base:
            return False
    return True


def _enum_flat(bounds: SearchBounds, C: ClassSpec, with_awareness: bool):
    for n_atoms in range(1, bounds.max_atoms + 1):
        atoms = ATOM_POOL[:n_atoms]
        for n_agents in range(1, bounds.max_agents + 1):
            for m in range(1, bounds.max_states + 1):
                states = tuple(f"s{k}" for k in range(1, m + 1))
                rels = _relations(states, C)
                slots = [(s, p) for s in states for p in atoms]
                aw_choices = subsets(atoms)
                for bits in itertools.product((0, 1), repeat=len(slots)):
                    val = dict(zip(slots, bits))
                    for combo in itertools.product(rels, repeat=n_agents):
                        poss = {
                            (i + 1, s): combo[i][s]
                            for i in range(n_agents)
                            for s in states
                        }
                        if not with_awareness:
                            M = KripkeStructure(n_agents, atoms, states, poss, val)
                            if _flat_canonical(M):
                                yield M
                            continue
                        aw_slots = [(i, s) for i in range(1, n_agents + 1) for s in states]
                        for aw_combo in itertools.product(aw_choices, repeat=len(aw_slots)):
                            awareness = {
                                slot: Generated(psi)
                                for slot, psi in zip(aw_slots, aw_combo)
                            }
                            M = AwarenessStructure(
                                n_agents, atoms, states, poss, val, awareness
                            )
                            if _flat_canonical(M):
                                yield M


def _hms_profiles(space_list, cap):
    """State counts per space, weakly increasing along inclusion so that
    onto projections can exist."""
    for combo in itertools.product(range(1, cap + 1), repeat=len(space_list)):
        prof = dict(zip(space_list, combo))
        if all(
            prof[a] <= prof[b]
            for a in space_list
            for b in space_list
            if a < b
        ):
            yield prof


def _onto_maps(src_states, dst_states):
    out = []
    for images in itertools.product(dst_states, repeat=len(src_states)):
        if set(images) == set(dst_states):
            out.append(dict(zip(src_states, images)))
    return out


def _hms_key(M, sigma):
    inv = {v: k for k, v in sigma.items()}
    atoms = sorted(M.atoms)
    idx = {s: k for k, s in enumerate(M.states)}
    val_part = tuple(
        M.val[(inv[s], p)].text for s in M.states for p in atoms
    )
    poss_part = tuple(
        tuple(sorted(idx[sigma[t]] for t in M.poss[(i, inv[s])]))
        for i in range(1, M.agents + 1)
        for s in M.states
    )
    covers = sorted(M._cover, key=lambda kv: (_space_key(kv[0]), kv[1]))
    proj_part = tuple(
        idx[sigma[M._cover[key][inv[s]]]]
        for key in covers
        for s in M.spaces[key[0]]
    )
    return (val_part, poss_part, proj_part)


def _hms_canonical(M) -> bool:
    groups = [
        M.spaces[psi]
        for psi in sorted(M.spaces, key=_space_key)
        if len(M.spaces[psi]) > 1
    ]
    if not groups:
        return True
    base = _hms_key(M, {s: s for s in M.states})
    for perms in itertools.product(*(itertools.permutations(g) for g in groups)):
        sigma = {s: s for s in M.states}
        for g, perm in zip(groups, perms):
            sigma.update(dict(zip(g, perm)))
        if _hms_key(M, sigma) < base:
            return False
    return True


def _enum_hms(bounds: SearchBounds, C: ClassSpec):
    for n_atoms in range(1, bounds.max_atoms + 1):
        atoms = ATOM_POOL[:n_atoms]
        space_list = subsets(atoms)
        for n_agents in range(1, bounds.max_agents + 1):
            for prof in _hms_profiles(space_list, bounds.max_states):
                yield from _enum_hms_frames(atoms, space_list, prof, n_agents, C)


def _enum_hms_frames(atoms, space_list, prof, n_agents, C):
    spaces = {
        psi: tuple(f"{space_label(psi)}|{j}" for j in range(1, prof[psi] + 1))
        for psi in space_list
    }
    all_states = [s for psi in space_list for s in spaces[psi]]
    covering = [(psi, drop) for psi in space_list for drop in sorted(psi)]
    val_slots = [(s, p) for psi in space_list for s in spaces[psi] for p in sorted(psi)]

    # possibility candidates per state: empty, or a nonempty subset of
    # the states of one weakly smaller space (confinedness by shape)
    poss_opts = {}
    for psi in space_list:
        opts = [frozenset()]
        for lower in subsets(psi):
            opts.extend(
                c for c in _state_subsets(spaces[lower]) if c
            )
        for s in spaces[psi]:
            poss_opts[s] = opts

    for bits in itertools.product((FALSE, TRUE), repeat=len(val_slots)):
        val = dict(zip(val_slots, bits))
        cand = {}
        dead = False
        for psi, drop in covering:
            lower = psi - {drop}
            maps = [
                mp
                for mp in _onto_maps(spaces[psi], spaces[lower])
                if all(
                    val[(s, p)] == val[(mp[s], p)]
                    for s in spaces[psi]
                    for p in sorted(lower)
                )
            ]
            if not maps:
                dead = True
                break
            cand[(psi, drop)] = maps
        if dead:
            continue
        for choice in itertools.product(*(cand[cv] for cv in covering)):
            proj = [
                (psi, drop, mapping)
                for (psi, drop), mapping in zip(covering, choice)
            ]
            if not _squares_commute(space_list, spaces, dict(zip(covering, choice))):
                continue
            slots = [(i, s) for i in range(1, n_agents + 1) for s in all_states]
            for poss_combo in itertools.product(*(poss_opts[s] for _, s in slots)):
                poss = dict(zip(slots, poss_combo))
                M = HmsStructure(n_agents, atoms, spaces, val, poss, proj)
                if validate_hms(M, C).flags["in_class"] and _hms_canonical(M):
                    yield M


def _squares_commute(space_list, spaces, cover) -> bool:
    for psi in space_list:
        for a, b in itertools.combinations(sorted(psi), 2):
            for s in spaces[psi]:
                via_a = cover[(psi - {a}, b)][cover[(psi, a)][s]]
                via_b = cover[(psi - {b}, a)][cover[(psi, b)][s]]
                if via_a != via_b:
                    return False
    return True


def _gsm_val_groups(objective, val, psi):
    """Group objective states by their valuation restricted to psi."""
    groups = {}
    for s in objective:
        key = tuple(val[(s, p)] for p in sorted(psi))
        groups.setdefault(key, []).append(s)
    return groups


def _rgs_partitions(items):
    """All set partitions, each as a tuple of blocks in first-occurrence
    order (restricted growth form keeps the stream canonical)."""
    items = list(items)
    if not items:
        yield ()
        return

    def rec(k, blocks):
        if k == len(items):
            yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            b.append(items[k])
            yield from rec(k + 1, blocks)
            b.pop()
        blocks.append([items[k]])
        yield from rec(k + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


def _enum_gsm(bounds: SearchBounds, C: ClassSpec):
    for n_atoms in range(1, bounds.max_atoms + 1):
        atoms = ATOM_POOL[:n_atoms]
        space_list = subsets(atoms)
        for m in range(1, bounds.max_states + 1):
            objective = tuple(f"w{k}" for k in range(1, m + 1))
            slots = [(s, p) for s in objective for p in atoms]
            for bits in itertools.product((0, 1), repeat=len(slots)):
                val = dict(zip(slots, bits))
                for psi_combo in itertools.product(space_list, repeat=m):
                    psi_of = dict(zip(objective, psi_combo))
                    yield from _enum_gsm_frames(
                        atoms, objective, val, psi_of, C
                    )


def _enum_gsm_frames(atoms, objective, val, psi_of, C):
    # identify objective states into shared subjective images; only
    # states with the same target space and matching values there may
    # share one
    by_space = {}
    for s in objective:
        by_space.setdefault(psi_of[s], []).append(s)
    per_space = []
    for psi in sorted(by_space, key=_space_key):
        members = by_space[psi]
        groups = _gsm_val_groups(members, val, psi)
        group_partitions = []
        for gkey in sorted(groups):
            group_partitions.append(list(_rgs_partitions(groups[gkey])))
        merged = [
            tuple(b for part in combo for b in part)
            for combo in itertools.product(*group_partitions)
        ]
        per_space.append((psi, merged))
    for combo in itertools.product(*(parts for _, parts in per_space)):
        spaces = {}
        proj = {}
        for (psi, _), blocks in zip(per_space, combo):
            names = []
            for j, block in enumerate(blocks, start=1):
                name = f"{space_label(psi)}|{j}"
                names.append(name)
                for s in block:
                    proj[s] = name
            spaces[psi] = tuple(names)
        # possibility sets per block, shared by the block's members so
        # that identified states agree
        block_items = [
            (psi, name)
            for (psi, _), blocks in zip(per_space, combo)
            for name, _b in zip(spaces[psi], blocks)
        ]
        owners = {}
        for s in objective:
            owners.setdefault(proj[s], []).append(s)
        opt_lists = [_state_subsets(spaces[psi]) for psi, _name in block_items]
        for picks in itertools.product(*opt_lists):
            poss = {}
            for (psi, name), pick in zip(block_items, picks):
                for s in owners[name]:
                    poss[s] = pick
            M = Gsm(atoms, objective, spaces, val, poss, proj)
            rep = validate_gsm(M)
            if rep.errors:
                continue
            if not (
                rep.flags["condition_1a"]
                and rep.flags["condition_1b"]
                and rep.flags["condition_2"]
            ):
                continue
            if C.r and not rep.flags["reflexive"]:
                continue
            if C.t and not rep.flags["transitive"]:
                continue
            if C.e and not rep.flags["euclidean"]:
                continue
            if _gsm_canonical(M):
                yield M


def _gsm_key(M, order):
    atoms = sorted(M.atoms)
    rename = {}
    counters = {}
    for s in order:
        t = M.proj[s]
        if t not in rename:
            psi = M.space_of[t]
            counters[psi] = counters.get(psi, 0) + 1
            rename[t] = (_space_key(psi), counters[psi])
    val_part = tuple(M.val[(s, p)] for s in order for p in atoms)
    proj_part = tuple(rename[M.proj[s]] for s in order)
    poss_part = tuple(
        tuple(sorted(rename[t] for t in M.poss[s])) for s in order
    )
    return (val_part, proj_part, poss_part)


def _gsm_canonical(M) -> bool:
    if len(M.objective) == 1:
        return True
    base = _gsm_key(M, M.objective)
    return all(
        base <= _gsm_key(M, order)
        for order in itertools.permutations(M.objective)
    )


# ---------------------------------------------------------------------------
# randomized generation: constructive first, validation as the gate

def _closure(rel, states, C: ClassSpec):
    if C.r:
        for s in states:
            rel[s] = rel[s] | {s}
    changed = True
    while changed:
        changed = False
        for s in states:
            for t in sorted(rel[s], key=str):
                if C.t and not rel[t] <= rel[s]:
                    rel[s] = rel[s] | rel[t]
                    changed = True
                if C.e and not rel[s] <= rel[t]:
                    rel[t] = rel[t] | rel[s]
                    changed = True
    return rel


def _random_relation(rng, states, C: ClassSpec):
    rel = {
        s: frozenset(t for t in states if rng.random() < 0.4) for s in states
    }
    return _closure(rel, states, C)


def _random_flat(rng, bounds, C, with_awareness):
    n_atoms = rng.randint(1, bounds.max_atoms)
    atoms = ATOM_POOL[:n_atoms]
    n_agents = rng.randint(1, bounds.max_agents)
    m = rng.randint(1, bounds.max_states)
    states = tuple(f"s{k}" for k in range(1, m + 1))
    val = {(s, p): rng.randint(0, 1) for s in states for p in atoms}
    poss = {}
    for i in range(1, n_agents + 1):
        rel = _random_relation(rng, states, C)
        for s in states:
            poss[(i, s)] = rel[s]
    if not with_awareness:
        return KripkeStructure(n_agents, atoms, states, poss, val)
    awareness = {}
    for i in range(1, n_agents + 1):
        # one awareness set per connected component keeps agents knowing
        # what they are aware of
        seen = {}
        for s in states:
            if s in seen:
                continue
            comp, frontier = {s}, [s]
            while frontier:
                u = frontier.pop()
                for t in sorted(poss[(i, u)], key=str):
                    if t not in comp:
                        comp.add(t)
                        frontier.append(t)
            psi = frozenset(p for p in atoms if rng.random() < 0.6)
            for u in comp:
                seen[u] = psi
        for s in states:
            awareness[(i, s)] = Generated(seen[s])
    return AwarenessStructure(n_agents, atoms, states, poss, val, awareness)


def _random_gsm(rng, bounds, C):
    n_atoms = rng.randint(1, bounds.max_atoms)
    atoms = ATOM_POOL[:n_atoms]
    m = rng.randint(1, bounds.max_states)
    objective = tuple(f"w{k}" for k in range(1, m + 1))
    val = {(s, p): rng.randint(0, 1) for s in objective for p in atoms}
    space_list = subsets(atoms)
    psi_of = {s: space_list[rng.randrange(len(space_list))] for s in objective}
    spaces = {}
    proj = {}
    for psi in space_list:
        members = [s for s in objective if psi_of[s] == psi]
        names = []
        for j, s in enumerate(members, start=1):
            name = f"{space_label(psi)}|{j}"
            names.append(name)
            proj[s] = name
        spaces[psi] = tuple(names)
    owner = {proj[s]: s for s in objective}
    poss = {}
    for s in objective:
        pool = spaces[psi_of[s]]
        poss[s] = frozenset(t for t in pool if rng.random() < 0.5)
        if C.r:
            poss[s] = poss[s] | {proj[s]}
    # stationarity-style closure through the owners of reachable states
    changed = True
    rounds = 0
    while changed and rounds < 8:
        changed = False
        rounds += 1
        for s in objective:
            for t in sorted(poss[s], key=str):
                o = owner[t]
                if C.t and not poss[o] <= poss[s]:
                    poss[s] = poss[s] | poss[o]
                    changed = True
                if C.e and not poss[s] <= poss[o]:
                    poss[o] = poss[o] | poss[s]
                    changed = True
    return Gsm(atoms, objective, spaces, val, poss, proj)


def _random_hms(rng, bounds, C):
    """Unfold a randomly drawn awareness structure whose relational
    properties already match C; the result lands in the right class by
    construction and is validated before being emitted."""
    flat_bounds = SearchBounds(
        max_atoms=bounds.max_atoms,
        max_agents=bounds.max_agents,
        max_states=bounds.max_states,
        mode="exhaustive",
    )
    A = _random_flat(rng, flat_bounds, C, with_awareness=True)
    return awareness_to_hms(A, C=C)


def _random_stream(kind, bounds: SearchBounds, C: ClassSpec):
    rng = random.Random(bounds.seed)
    produced = 0
    attempts = 0
    budget = max(200, bounds.samples * 200)
    while produced < bounds.samples and attempts < budget:
        attempts += 1
        try:
            if kind == "kripke":
                M = _random_flat(rng, bounds, C, with_awareness=False)
                rep = validate_kripke(M)
            elif kind == "awareness":
                M = _random_flat(rng, bounds, C, with_awareness=True)
                rep = validate_kripke(M)
            elif kind == "gsm":
                M = _random_gsm(rng, bounds, C)
                rep = validate_gsm(M)
                if rep.errors or not (
                    rep.flags["condition_1a"]
                    and rep.flags["condition_1b"]
                    and rep.flags["condition_2"]
                ):
                    continue
            else:
                M = _random_hms(rng, bounds, C)
                if not validate_hms(M, C).flags["in_class"]:
                    continue
                produced += 1
                yield M
                continue
        except ModelError:
            continue
        for letter, flag in (("r", "reflexive"), ("t", "transitive"), ("e", "euclidean")):
            if getattr(C, letter) and not rep.flags[flag]:
                break
        else:
            produced += 1
            yield M


def enumerate_structures(kind: str, bounds: SearchBounds = SearchBounds(), C: ClassSpec = ClassSpec()):
    """Stream validated structures of the given kind: every relabeling
    representative within bounds (exhaustive) or seeded samples
    (randomized), in a deterministic order either way."""
    kind = kind.strip().lower()
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {'/'.join(KINDS)}, got {kind!r}")
    if bounds.mode == "randomized":
        return _random_stream(kind, bounds, C)
    cap_atoms, cap_states = EXHAUSTIVE_CAPS[kind]
    if bounds.max_atoms > cap_atoms or bounds.max_states > cap_states or (
        kind != "gsm" and bounds.max_agents > AGENT_CAP
    ):
        raise ValueError(
            f"exhaustive {kind} enumeration is capped at {cap_atoms} atoms, "
            f"{AGENT_CAP} agents, {cap_states} states"
        )
    if kind == "kripke":
        return _enum_flat(bounds, C, with_awareness=False)
    if kind == "awareness":
        return _enum_flat(bounds, C, with_awareness=True)
    if kind == "gsm":
        return _enum_gsm(bounds, C)
    return _enum_hms(bounds, C)


# ---------------------------------------------------------------------------
# countermodel search

def _fails(M, s, f, mode: ValidityMode) -> bool:
    if mode is ValidityMode.CLASSICAL:
        return not eval_structure(M, s, f)
    v = eval_hms(M, s, f) if M.kind == "hms" else eval_gsm(M, s, f)
    if mode is ValidityMode.WEAK:
        return v is FALSE
    return v is not TRUE


def search_countermodel(
    f: Formula,
    kind: str,
    C: ClassSpec = ClassSpec(),
    mode=ValidityMode.WEAK,
    bounds: SearchBounds = SearchBounds(),
):
    """First enumerated (structure, state) where f fails for the mode,
    or None.  None means no countermodel within these bounds, not
    validity."""
    mode = _coerce_mode(mode)
    kind = kind.strip().lower()
    _check_mode_kind(kind, mode)
    for M in enumerate_structures(kind, bounds, C):
        if mode is ValidityMode.OBJECTIVE:
            states = M.objective
        elif kind == "gsm":
            states = _gsm_states(M)
        else:
            states = M.states
        for s in states:
            if _fails(M, s, f, mode):
                return M, s
    return None
