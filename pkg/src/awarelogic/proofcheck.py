"""Axiom schemas, Hilbert-style proof checking, and soundness sweeps.

A schema is a template over formula and agent metavariables plus an
optional side condition.  Matching is structural unification against
the desugared core tree, so proof lines are written in plain concrete
syntax and axioms whose textbook form uses derived connectives match
exactly the trees the parser produces.
"""

import itertools
from dataclasses import dataclass
from typing import Optional

from .semantics import eval_gsm, eval_hms, eval_kripke
from .structures import FALSE, TRUE, ClassSpec, ModelError
from .syntax import (
    TOP,
    And,
    Formula,
    Know,
    NImp,
    Not,
    Prop,
    agents_of,
    aware_abbrev,
    disj,
    fits_language,
    iff,
    impl,
    is_definitely_two_valued,
    is_implication_free,
    iter_formulas,
    niff,
    parse,
    primitives,
    render,
    size,
    value_is,
)
from .validity import (
    ATOM_POOL,
    STRONGLY_VALID,
    SearchBounds,
    ValidityMode,
    enumerate_structures,
    prop2_tautology,
    prop3_status,
    skeletonize,
)

__all__ = [
    "AxiomSchema",
    "InferenceRule",
    "AxiomSystem",
    "MatchResult",
    "ProofLine",
    "ProofScript",
    "Verdict",
    "SweepReport",
    "Var",
    "match_axiom",
    "match_rule",
    "system_named",
    "system_names",
    "script_from_json",
    "check_proof",
    "soundness_sweep",
]


# ---------------------------------------------------------------------------
# templates and unification

@dataclass(frozen=True, slots=True)
class Var:
    """Formula metavariable; agent slots use bare strings instead."""

    name: str


def _match(t, f, env) -> bool:
    # one-sided unification: t may contain metavariables, f may not
    if isinstance(t, Var):
        bound = env.get(t.name)
        if bound is None:
            env[t.name] = f
            return True
        return bound == f
    if type(t) is not type(f):
        return False
    if isinstance(t, Not):
        return _match(t.body, f.body, env)
    if isinstance(t, (And, NImp)):
        return _match(t.left, f.left, env) and _match(t.right, f.right, env)
    if isinstance(t, Know):
        if isinstance(t.agent, str):
            bound = env.get(t.agent)
            if bound is None:
                env[t.agent] = f.agent
            elif bound != f.agent:
                return False
        elif t.agent != f.agent:
            return False
        return _match(t.body, f.body, env)
    return t == f


def _subst(t, env) -> Formula:
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Not):
        return Not(_subst(t.body, env))
    if isinstance(t, And):
        return And(_subst(t.left, env), _subst(t.right, env))
    if isinstance(t, NImp):
        return NImp(_subst(t.left, env), _subst(t.right, env))
    if isinstance(t, Know):
        agent = env[t.agent] if isinstance(t.agent, str) else t.agent
        return Know(agent, _subst(t.body, env))
    return t


def _template_vars(t):
    """Formula metavariable names and agent slot names, in walk order."""
    fvars, avars = [], []
    stack = [t]
    while stack:
        g = stack.pop(0)
        if isinstance(g, Var):
            if g.name not in fvars:
                fvars.append(g.name)
        elif isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, (And, NImp)):
            stack.append(g.left)
            stack.append(g.right)
        elif isinstance(g, Know):
            if isinstance(g.agent, str) and g.agent not in avars:
                avars.append(g.agent)
            stack.append(g.body)
    return fvars, avars


# ---------------------------------------------------------------------------
# schemas

@dataclass(frozen=True)
class AxiomSchema:
    """Alternatives share one name; empty templates mean table-driven
    matching (the propositional-validity schemas)."""

    name: str
    templates: tuple = ()
    side: tuple = ("none",)


@dataclass(frozen=True)
class InferenceRule:
    name: str
    premises: tuple
    conclusion: Formula
    side: tuple = ("none",)


@dataclass(frozen=True)
class MatchResult:
    ok: bool
    reason: Optional[str] = None
    binding: Optional[dict] = None

    def __bool__(self):
        return self.ok


def _tprime_rhs(i: int, body: Formula) -> Formula:
    """phi or K_i(p = 1/2) for each atom of phi, folded left in sorted
    order; no disjuncts at all when phi mentions no atoms."""
    out = body
    for p in sorted(primitives(body)):
        out = disj(out, Know(i, value_is(Prop(p), "1/2")))
    return out


def _side_fails(side, env) -> Optional[str]:
    kind = side[0]
    if kind == "none":
        return None
    if kind == "d2":
        for v in side[1:]:
            if not is_definitely_two_valued(env[v]):
                return f"bound formula {render(env[v])} is not definitely two-valued"
        return None
    if kind == "in_LK":
        if is_implication_free(env[side[1]]):
            return None
        return f"bound formula {render(env[side[1]])} contains ~>"
    if kind == "same_primitives":
        if primitives(env[side[1]]) == primitives(env[side[2]]):
            return None
        return "the biconditional sides must mention exactly the same atoms"
    if kind == "big_disjunction":
        body, rhs, agent = env[side[1]], env[side[2]], env[side[3]]
        if rhs == _tprime_rhs(agent, body):
            return None
        return (
            "consequent must disjoin knowledge-of-undefinedness for exactly "
            "the antecedent's atoms, sorted"
        )
    raise AssertionError(f"unknown side condition {kind!r}")


def match_axiom(schema: AxiomSchema, f: Formula) -> MatchResult:
    """Whether f instantiates the schema; carries the substitution on
    success and a reason on failure."""
    if schema.side[0] == "prop_tautology":
        sk, sub = skeletonize(f)
        if prop2_tautology(sk):
            return MatchResult(True, None, {"skeleton": sk, **sub})
        return MatchResult(False, f"Boolean skeleton {render(sk)} is not a tautology")
    if schema.side[0] == "prop3_valid":
        sk, sub = skeletonize(f, keep_nimp=True)
        if prop3_status(sk).verdict == STRONGLY_VALID:
            return MatchResult(True, None, {"skeleton": sk, **sub})
        return MatchResult(
            False, f"three-valued skeleton {render(sk)} is not strongly valid"
        )
    side_why = None
    for t in schema.templates:
        env = {}
        if _match(t, f, env):
            why = _side_fails(schema.side, env)
            if why is None:
                return MatchResult(True, None, env)
            side_why = why
    return MatchResult(False, side_why or f"not an instance of {schema.name}")


def match_rule(rule: InferenceRule, premises, conclusion: Formula) -> MatchResult:
    if len(premises) != len(rule.premises):
        return MatchResult(
            False, f"{rule.name} takes {len(rule.premises)} premise(s)"
        )
    env = {}
    for t, p in zip(rule.premises, premises):
        if not _match(t, p, env):
            return MatchResult(False, f"premise {render(p)} does not fit {rule.name}")
    if not _match(rule.conclusion, conclusion, env):
        return MatchResult(False, f"conclusion does not follow by {rule.name}")
    why = _side_fails(rule.side, env)
    if why is not None:
        return MatchResult(False, why)
    return MatchResult(True, None, env)


# ---------------------------------------------------------------------------
# the axiom inventory

_A, _B, _C = Var("a"), Var("b"), Var("c")

PROP = AxiomSchema("Prop", (), ("prop_tautology",))
K_AX = AxiomSchema(
    "K", (impl(And(Know("i", _A), Know("i", impl(_A, _B))), Know("i", _B)),)
)
T_AX = AxiomSchema("T", (impl(Know("i", _A), _A),))
FOUR = AxiomSchema("4", (impl(Know("i", _A), Know("i", Know("i", _A))),))
FIVE = AxiomSchema(
    "5", (impl(Not(Know("i", _A)), Know("i", Not(Know("i", _A)))),)
)

M_AX = AxiomSchema(
    "M", (impl(Know("i", And(_A, _B)), And(Know("i", _A), Know("i", _B))),)
)
C_AX = AxiomSchema(
    "C", (impl(And(Know("i", _A), Know("i", _B)), Know("i", And(_A, _B))),)
)
A_AX = AxiomSchema(
    "A", (iff(aware_abbrev("i", _A), aware_abbrev("i", Not(_A))),)
)
AM_AX = AxiomSchema(
    "AM",
    (
        impl(
            aware_abbrev("i", And(_A, _B)),
            And(aware_abbrev("i", _A), aware_abbrev("i", _B)),
        ),
    ),
)
N_AX = AxiomSchema("N", (Know("i", TOP),))
AK_AX = AxiomSchema(
    "AK", (iff(aware_abbrev("i", Know("j", _A)), aware_abbrev("i", _A)),)
)

PROP_P = AxiomSchema("Prop'", (), ("prop3_valid",))
K_P = AxiomSchema(
    "K'", (NImp(And(Know("i", _A), Know("i", NImp(_A, _B))), Know("i", _B)),)
)
T_P = AxiomSchema(
    "T'", (NImp(Know("i", _A), Var("r")),), ("big_disjunction", "a", "r", "i")
)
FOUR_P = AxiomSchema("4'", (NImp(Know("i", _A), Know("i", Know("i", _A))),))
FIVE_P = AxiomSchema(
    "5'",
    (
        NImp(
            Not(Know("i", Not(Know("i", _A)))),
            disj(Know("i", _A), Know("i", value_is(_A, "1/2"))),
        ),
    ),
)
CONF1 = AxiomSchema(
    "Conf1",
    (NImp(value_is(_A, "1/2"), Know("i", value_is(_A, "1/2"))),),
    ("in_LK", "a"),
)
CONF2 = AxiomSchema(
    "Conf2",
    (
        NImp(
            Not(Know("i", value_is(_A, "1/2"))),
            Know("i", value_is(disj(_A, Not(_A)), "1")),
        ),
    ),
)
B1_AX = AxiomSchema(
    "B1", (niff(value_is(Know("i", _A), "1/2"), value_is(_A, "1/2")),)
)
B2_AX = AxiomSchema(
    "B2",
    (
        NImp(
            And(
                disj(value_is(_A, "0"), value_is(_A, "1")),
                Know("i", value_is(_A, "1")),
            ),
            value_is(Know("i", _A), "1"),
        ),
    ),
)

_TRI = disj(disj(value_is(_A, "0"), value_is(_A, "1/2")), value_is(_A, "1"))
P_AXIOMS = (
    AxiomSchema("P0", (TOP,)),
    AxiomSchema("P1", (niff(And(_A, _B), Not(NImp(_A, Not(_B)))),), ("d2", "a", "b")),
    AxiomSchema("P2", (NImp(_A, NImp(_B, _A)),), ("d2", "a", "b")),
    AxiomSchema(
        "P3",
        (NImp(NImp(_A, NImp(_B, _C)), NImp(NImp(_A, _B), NImp(_A, _C))),),
        ("d2", "a", "b", "c"),
    ),
    AxiomSchema(
        "P4",
        (NImp(NImp(_A, _B), NImp(NImp(_A, Not(_B)), Not(_A))),),
        ("d2", "a", "b"),
    ),
    AxiomSchema(
        "P5",
        (niff(value_is(And(_A, _B), "1"), And(value_is(_A, "1"), value_is(_B, "1"))),),
    ),
    AxiomSchema(
        "P6",
        (
            niff(
                value_is(And(_A, _B), "0"),
                disj(
                    And(value_is(_A, "0"), Not(value_is(_B, "1/2"))),
                    And(Not(value_is(_A, "1/2")), value_is(_B, "0")),
                ),
            ),
        ),
    ),
    AxiomSchema("P7", (niff(value_is(_A, "1"), value_is(Not(_A), "0")),)),
    AxiomSchema("P8", (niff(value_is(_A, "0"), value_is(Not(_A), "1")),)),
    AxiomSchema(
        "P9",
        (
            niff(
                value_is(NImp(_A, _B), "1"),
                disj(
                    disj(
                        And(value_is(_A, "0"), Not(value_is(_B, "1/2"))),
                        value_is(_A, "1/2"),
                    ),
                    And(value_is(_A, "1"), value_is(_B, "1")),
                ),
            ),
        ),
    ),
    AxiomSchema(
        "P10",
        (niff(value_is(NImp(_A, _B), "0"), And(value_is(_A, "1"), value_is(_B, "0"))),),
    ),
    AxiomSchema(
        "P11",
        tuple(
            And(_TRI, Not(And(value_is(_A, ki), value_is(_A, kj))))
            for ki, kj in itertools.permutations(("0", "1/2", "1"), 2)
        ),
    ),
)

MP = InferenceRule("MP", (_A, impl(_A, _B)), _B)
MP_P = InferenceRule("MP'", (_A, NImp(_A, _B)), _B)
GEN = InferenceRule("Gen", (_A,), Know("i", _A))
RE_SA = InferenceRule(
    "RE_sa",
    (iff(_A, _B),),
    iff(Know("i", _A), Know("i", _B)),
    ("same_primitives", "a", "b"),
)
R1 = InferenceRule("R1", (value_is(_A, "1"),), _A)


# ---------------------------------------------------------------------------
# systems

@dataclass(frozen=True)
class AxiomSystem:
    name: str
    axioms: tuple
    rules: tuple
    lang: str
    max_agents: Optional[int] = None  # None unbounded, 0 propositional

    def axiom(self, name: str) -> Optional[AxiomSchema]:
        for a in self.axioms:
            if a.name == name:
                return a
        return None

    def rule(self, name: str) -> Optional[InferenceRule]:
        for r in self.rules:
            if r.name == name:
                return r
        return None

    def admits(self, f: Formula) -> Optional[str]:
        if not fits_language(f, self.lang):
            return f"formula is outside the {self.lang} language"
        used = agents_of(f)
        if self.max_agents == 0 and used:
            return "the system is propositional"
        if self.max_agents and used and max(used) > self.max_agents:
            return f"the system allows agents 1..{self.max_agents}"
        return None


def _subset_names(letters):
    # "", "T", "4", "5", "T4", "T5", "45", "T45"
    for n in range(len(letters) + 1):
        for combo in itertools.combinations(letters, n):
            yield "".join(combo)


_SYSTEMS = {}
_CLASS_AX = {"T": T_AX, "4": FOUR, "5": FIVE}
_CLASS_AX_P = {"T": T_P, "4": FOUR_P, "5": FIVE_P}
_CLASS_LETTER = {"T": "r", "4": "t", "5": "e"}

for _extra in _subset_names("T45"):
    _name = "K" + ("+" + _extra if _extra else "")
    _SYSTEMS[_name] = AxiomSystem(
        _name,
        (PROP, K_AX) + tuple(_CLASS_AX[x] for x in _extra),
        (MP, GEN),
        "k",
    )
    _name = "AXK" + ("+" + _extra if _extra else "")
    _SYSTEMS[_name] = AxiomSystem(
        _name,
        (PROP_P, K_P, B1_AX, B2_AX, CONF1, CONF2)
        + tuple(_CLASS_AX_P[x] for x in _extra),
        (MP_P, GEN),
        "knimp",
    )

_SYSTEMS["S5"] = AxiomSystem(
    "S5", (PROP, K_AX, T_AX, FOUR, FIVE), (MP, GEN), "k"
)
_SYSTEMS["U"] = AxiomSystem(
    "U",
    (PROP, T_AX, FOUR, M_AX, C_AX, A_AX, AM_AX, N_AX),
    (MP, RE_SA),
    "k",
    max_agents=1,
)
_SYSTEMS["Un"] = AxiomSystem(
    "Un",
    (PROP, T_AX, FOUR, M_AX, C_AX, A_AX, AM_AX, N_AX, AK_AX),
    (MP, RE_SA),
    "k",
)
_SYSTEMS["AX3"] = AxiomSystem("AX3", P_AXIOMS, (R1, MP_P), "knimp", max_agents=0)

# sweep-registry aliases; both resolve to the n-agent U system
_ALIASES = {"S5NK": "UN", "S5NX": "UN"}


def system_names():
    return tuple(sorted(_SYSTEMS))


def system_named(name: str) -> AxiomSystem:
    token = (
        name.strip()
        .replace(" ", "")
        .replace("_", "")
        .replace("-", "")
        .replace("^", "")
        .replace("'", "")
        .upper()
    )
    token = _ALIASES.get(token, token)
    for key, sys_ in _SYSTEMS.items():
        if key.replace("+", "").upper() == token.replace("+", ""):
            return sys_
    raise ValueError(f"unknown axiom system {name!r}")


# ---------------------------------------------------------------------------
# proof scripts

@dataclass(frozen=True)
class ProofLine:
    n: int
    formula: Formula
    by: str
    refs: tuple = ()


@dataclass(frozen=True)
class ProofScript:
    system: str
    lines: tuple


@dataclass(frozen=True)
class Verdict:
    ok: bool
    bad_line: Optional[int] = None
    reason: Optional[str] = None

    def __bool__(self):
        return self.ok


def script_from_json(data: dict) -> ProofScript:
    """Build a script from the on-disk shape: {system, lines:[{n,
    formula, by, refs}]}; formulas are concrete syntax in the system's
    language."""
    if not isinstance(data, dict) or "system" not in data or "lines" not in data:
        raise ValueError("proof files need 'system' and 'lines' fields")
    sys_ = system_named(data["system"])
    lines = []
    for raw in data["lines"]:
        try:
            n, text, by = raw["n"], raw["formula"], raw["by"]
        except (TypeError, KeyError) as exc:
            raise ValueError(f"malformed proof line {raw!r}") from exc
        refs = tuple(raw.get("refs", ()))
        if not isinstance(n, int) or not all(isinstance(r, int) for r in refs):
            raise ValueError(f"line numbers must be integers in {raw!r}")
        lines.append(ProofLine(n, parse(text, sys_.lang), by, refs))
    return ProofScript(data["system"], tuple(lines))


def check_proof(script: ProofScript) -> Verdict:
    """First-bad-line verification.

    Unknown systems, unknown justification names, and malformed
    references are structural faults and raise; a well-formed line
    that simply fails its justification yields a False verdict.
    """
    sys_ = system_named(script.system)
    seen = {}
    last_n = 0
    for line in script.lines:
        if line.n <= last_n:
            raise ValueError(f"line numbers must increase (line {line.n})")
        last_n = line.n
        axiom, rule = sys_.axiom(line.by), sys_.rule(line.by)
        if axiom is None and rule is None:
            raise ValueError(f"unknown axiom or rule {line.by!r} in {sys_.name}")
        if axiom is not None and line.refs:
            raise ValueError(f"axiom line {line.n} takes no premise refs")
        if rule is not None:
            if len(line.refs) != len(rule.premises):
                raise ValueError(
                    f"line {line.n}: {rule.name} takes {len(rule.premises)} ref(s)"
                )
            if any(r not in seen for r in line.refs):
                raise ValueError(f"line {line.n} references a non-earlier line")
        why = sys_.admits(line.formula)
        if why is not None:
            return Verdict(False, line.n, why)
        if axiom is not None:
            m = match_axiom(axiom, line.formula)
        else:
            m = match_rule(rule, tuple(seen[r] for r in line.refs), line.formula)
        if not m.ok:
            return Verdict(False, line.n, m.reason)
        seen[line.n] = line.formula
    return Verdict(True)


# ---------------------------------------------------------------------------
# soundness sweeps

@dataclass(frozen=True)
class SweepTriple:
    kind: str
    mode: ValidityMode
    default_class: ClassSpec


_SWEEP_REGISTRY = {}
for _extra in _subset_names("T45"):
    _letters = "".join(sorted(_CLASS_LETTER[x] for x in _extra))
    _SWEEP_REGISTRY["K" + ("+" + _extra if _extra else "")] = SweepTriple(
        "kripke", ValidityMode.CLASSICAL, ClassSpec.from_text(_letters)
    )
    _SWEEP_REGISTRY["AXK" + ("+" + _extra if _extra else "")] = SweepTriple(
        "hms", ValidityMode.STRONG, ClassSpec.from_text(_letters)
    )
_SWEEP_REGISTRY["S5"] = SweepTriple(
    "kripke", ValidityMode.CLASSICAL, ClassSpec.from_text("rte")
)
_SWEEP_REGISTRY["U"] = SweepTriple(
    "gsm", ValidityMode.OBJECTIVE, ClassSpec.from_text("rte")
)
_SWEEP_REGISTRY["Un"] = SweepTriple(
    "hms", ValidityMode.WEAK, ClassSpec.from_text("rte")
)


@dataclass(frozen=True)
class SweepReport:
    system: str
    kind: str
    cspec: ClassSpec
    mode: ValidityMode
    instances: int
    structures: int
    checks: int
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def _instances(schema, atoms, n_agents, lang, cap):
    agents = range(1, n_agents + 1)
    if schema.side[0] in ("prop_tautology", "prop3_valid"):
        for f in iter_formulas(atoms, cap, lang=lang, agents=n_agents):
            if match_axiom(schema, f).ok:
                yield f
        return
    if schema.side[0] == "big_disjunction":
        for i in agents:
            for f in iter_formulas(atoms, cap, lang=lang, agents=n_agents):
                yield NImp(Know(i, f), _tprime_rhs(i, f))
        return
    cands = list(iter_formulas(atoms, cap, lang=lang, agents=n_agents))
    for t in schema.templates:
        fvars, avars = _template_vars(t)
        # joint budget: cap for one metavariable, one extra node per
        # additional one, so pair totals stay comparable to singles
        budget = cap + len(fvars) - 1 if fvars else 0
        for agent_combo in itertools.product(agents, repeat=len(avars)):
            env_agents = dict(zip(avars, agent_combo))
            if not fvars:
                yield _subst(t, env_agents)
                continue
            for payload in itertools.product(cands, repeat=len(fvars)):
                if sum(size(f) for f in payload) > budget:
                    continue
                env = {**env_agents, **dict(zip(fvars, payload))}
                if _side_fails(schema.side, env) is not None:
                    continue
                yield _subst(t, env)


def _sweep_fails(M, kind, f, mode):
    """First state breaking the mode's validity notion, or None."""
    if kind == "kripke":
        for s in M.states:
            if not eval_kripke(M, s, f):
                return s
        return None
    if kind == "gsm":
        for s in M.objective:
            if eval_gsm(M, s, f) is not TRUE:
                return s
        return None
    for s in M.states:
        v = eval_hms(M, s, f)
        bad = (v is FALSE) if mode is ValidityMode.WEAK else (v is not TRUE)
        if bad:
            return s
    return None


def soundness_sweep(
    system: str,
    C: Optional[ClassSpec] = None,
    mode=None,
    bounds: SearchBounds = SearchBounds(),
    inst_cap: int = 5,
    max_violations: int = 10,
) -> SweepReport:
    """Instantiate every schema of the system over formulas of size <=
    inst_cap and check the registered validity notion on the enumerated
    corpus.  C defaults to the system's own class; passing a different
    one deliberately sweeps off-class (how T fails without r, say).
    Collection stops at max_violations.
    """
    sys_ = system_named(system)
    trip = _SWEEP_REGISTRY.get(sys_.name)
    if trip is None:
        raise ModelError(f"no soundness sweep is registered for {sys_.name}")
    if mode is not None:
        got = ValidityMode.from_text(mode) if isinstance(mode, str) else mode
        if got is not trip.mode:
            raise ModelError(
                f"{sys_.name} sweeps use {trip.mode.value} validity, not {got.value}"
            )
    cspec = trip.default_class if C is None else C
    n_agents = sys_.max_agents or bounds.max_agents
    atoms = ATOM_POOL[: bounds.max_atoms]

    payload = []
    for schema in sys_.axioms:
        for inst in _instances(schema, atoms, n_agents, sys_.lang, inst_cap):
            payload.append((schema.name, inst, max(agents_of(inst), default=0)))

    violations = []
    checks = 0
    structures = 0
    for M in enumerate_structures(trip.kind, bounds, cspec):
        structures += 1
        agents_here = getattr(M, "agents", 1)
        for name, inst, need in payload:
            if need > agents_here:
                continue
            checks += 1
            bad = _sweep_fails(M, trip.kind, inst, trip.mode)
            if bad is not None:
                violations.append((name, inst, M, bad))
                if len(violations) >= max_violations:
                    break
        if trip.kind == "hms":
            M._cache.clear()
        if len(violations) >= max_violations:
            break
    return SweepReport(
        sys_.name,
        trip.kind,
        cspec,
        trip.mode,
        len(payload),
        structures,
        checks,
        tuple(violations),
    )
