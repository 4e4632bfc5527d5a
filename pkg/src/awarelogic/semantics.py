"""Truth evaluation for all four structure kinds.

Two independent evaluators exist for the three-valued language: a
table-driven one (`eval_hms`, `eval_prop3`) computing one value per
subformula, and a clause evaluator (`eval_hms_clauses`,
`eval_prop3_clauses`) that follows the separate truth and falsity
conditions literally, including the three-disjunct falsity clause for
conjunction.  They must agree everywhere; the test suite holds them to
that.
"""

from __future__ import annotations

from dataclasses import dataclass

from .structures import (
    AwarenessStructure,
    FALSE,
    Gsm,
    HmsStructure,
    KripkeStructure,
    ModelError,
    TRUE,
    TruthValue,
    UNDEF,
)
from .syntax import (
    And,
    Aware,
    Formula,
    Know,
    NImp,
    Not,
    Prop,
    Top,
    XKnow,
    agents_of,
    primitives,
    render,
)


def _check_agents(M, f: Formula):
    used = agents_of(f)
    if used and max(used) > M.agents:
        raise ModelError(
            f"formula mentions agent {max(used)} but the model has {M.agents}"
        )


def _reject(f: Formula, *kinds) -> None:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, kinds):
            raise ModelError(
                f"operator {type(g).__name__} is not interpreted on this structure kind"
            )
        if isinstance(g, (Not, Know, Aware, XKnow)):
            stack.append(g.body)
        elif isinstance(g, (And, NImp)):
            stack.append(g.left)
            stack.append(g.right)


# ---------------------------------------------------------------------------
# Kripke and awareness structures (two-valued)

def kripke_values(M: KripkeStructure, f: Formula) -> dict:
    """state -> bool for every state at once, cached per structure."""
    key = ("kv", f)
    hit = M._cache.get(key)
    if hit is not None:
        return hit
    if isinstance(f, Top):
        out = {s: True for s in M.states}
    elif isinstance(f, Prop):
        if f.name not in M.atoms:
            raise ModelError(f"unknown atom {f.name!r}")
        out = {s: M.val[(s, f.name)] == 1 for s in M.states}
    elif isinstance(f, Not):
        vb = kripke_values(M, f.body)
        out = {s: not vb[s] for s in M.states}
    elif isinstance(f, And):
        va, vb = kripke_values(M, f.left), kripke_values(M, f.right)
        out = {s: va[s] and vb[s] for s in M.states}
    elif isinstance(f, Know):
        vb = kripke_values(M, f.body)
        out = {s: all(vb[t] for t in M.poss[(f.agent, s)]) for s in M.states}
    elif isinstance(f, Aware):
        if not isinstance(M, AwarenessStructure):
            raise ModelError("awareness operator needs an awareness structure")
        aset = {s: M.awareness[(f.agent, s)] for s in M.states}
        out = {s: aset[s].contains(f.body) for s in M.states}
    elif isinstance(f, XKnow):
        va = kripke_values(M, Aware(f.agent, f.body))
        vk = kripke_values(M, Know(f.agent, f.body))
        out = {s: va[s] and vk[s] for s in M.states}
    else:
        raise ModelError(f"cannot evaluate {type(f).__name__} here")
    M._cache[key] = out
    return out


def eval_kripke(M: KripkeStructure, s, f: Formula) -> bool:
    M.check_state(s)
    _check_agents(M, f)
    _reject(f, NImp, Aware, XKnow)
    return kripke_values(M, f)[s]


def eval_awareness(M: AwarenessStructure, s, f: Formula) -> bool:
    M.check_state(s)
    _check_agents(M, f)
    _reject(f, NImp)
    return kripke_values(M, f)[s]


# ---------------------------------------------------------------------------
# generalized standard models

def _gsm_extension(M: Gsm):
    key = "extension"
    hit = M._cache.get(key)
    if hit is None:
        hit = M.extension()
        M._cache[key] = hit
    return hit


def _gsm_subjective(M: Gsm, u, f: Formula) -> TruthValue:
    psi = M.space_of[u]
    if not primitives(f) <= psi:
        return UNDEF
    ext_poss, ext_val = _gsm_extension(M)
    if u not in ext_poss:
        raise ModelError(
            f"no objective state projects to {u!r}; the extended "
            "correspondence is undefined there"
        )
    if isinstance(f, Top):
        return TRUE
    if isinstance(f, Prop):
        return TRUE if ext_val[(u, f.name)] == 1 else FALSE
    if isinstance(f, Not):
        v = _gsm_subjective(M, u, f.body)
        if v is UNDEF:
            return UNDEF
        return FALSE if v is TRUE else TRUE
    if isinstance(f, And):
        va = _gsm_subjective(M, u, f.left)
        vb = _gsm_subjective(M, u, f.right)
        if UNDEF in (va, vb):
            return UNDEF
        return TRUE if (va, vb) == (TRUE, TRUE) else FALSE
    if isinstance(f, Know):
        ok = all(_gsm_subjective(M, t, f.body) is TRUE for t in ext_poss[u])
        return TRUE if ok else FALSE
    raise ModelError(f"cannot evaluate {type(f).__name__} on a GSM")


def eval_gsm(M: Gsm, s, f: Formula) -> TruthValue:
    """Two-valued at objective states; at a subjective state the value
    is 1/2 unless the formula's primitives all lie in the state's
    space, in which case the extended valuation and correspondence
    make it two-valued again."""
    M.check_state(s)
    _reject(f, NImp, Aware, XKnow)
    used = agents_of(f)
    if used and max(used) > 1:
        raise ModelError("generalized standard models are single-agent")
    if s in M.space_of:
        return _gsm_subjective(M, s, f)
    return TRUE if _gsm_objective(M, s, f) else FALSE


def _gsm_objective(M: Gsm, s, f: Formula) -> bool:
    if isinstance(f, Top):
        return True
    if isinstance(f, Prop):
        if f.name not in M.atoms:
            raise ModelError(f"unknown atom {f.name!r}")
        return M.val[(s, f.name)] == 1
    if isinstance(f, Not):
        return not _gsm_objective(M, s, f.body)
    if isinstance(f, And):
        return _gsm_objective(M, s, f.left) and _gsm_objective(M, s, f.right)
    if isinstance(f, Know):
        return all(_gsm_subjective(M, t, f.body) is TRUE for t in M.poss[s])
    raise ModelError(f"cannot evaluate {type(f).__name__} on a GSM")


# ---------------------------------------------------------------------------
# multi-space structures, table-driven

def hms_values(M: HmsStructure, f: Formula) -> dict:
    """state -> TruthValue over all states at once, cached per structure."""
    key = ("hv", f)
    hit = M._cache.get(key)
    if hit is not None:
        return hit
    if isinstance(f, Top):
        out = {s: TRUE for s in M.states}
    elif isinstance(f, Prop):
        if f.name not in M.atoms:
            raise ModelError(f"unknown atom {f.name!r}")
        out = {s: M.val[(s, f.name)] for s in M.states}
    elif isinstance(f, Not):
        vb = hms_values(M, f.body)
        flip = {TRUE: FALSE, FALSE: TRUE, UNDEF: UNDEF}
        out = {s: flip[vb[s]] for s in M.states}
    elif isinstance(f, And):
        va, vb = hms_values(M, f.left), hms_values(M, f.right)
        out = {}
        for s in M.states:
            a, b = va[s], vb[s]
            if UNDEF in (a, b):
                out[s] = UNDEF
            else:
                out[s] = TRUE if (a, b) == (TRUE, TRUE) else FALSE
    elif isinstance(f, NImp):
        va, vb = hms_values(M, f.left), hms_values(M, f.right)
        out = {s: _nimp_table(va[s], vb[s]) for s in M.states}
    elif isinstance(f, Know):
        vb = hms_values(M, f.body)
        out = {}
        for s in M.states:
            if vb[s] is UNDEF:
                out[s] = UNDEF
            elif all(vb[t] is TRUE for t in M.poss[(f.agent, s)]):
                out[s] = TRUE
            else:
                out[s] = FALSE
    else:
        raise ModelError(f"cannot evaluate {type(f).__name__} on this structure")
    M._cache[key] = out
    return out


def _nimp_table(a: TruthValue, b: TruthValue) -> TruthValue:
    if a is UNDEF:
        return TRUE
    if a is TRUE:
        return b
    return UNDEF if b is UNDEF else TRUE


def eval_hms(M: HmsStructure, s, f: Formula) -> TruthValue:
    M.check_state(s)
    _check_agents(M, f)
    _reject(f, Aware, XKnow)
    return hms_values(M, f)[s]


# the clause twin: truth and falsity defined separately, following the
# displayed conditions for models with partially defined valuations

def _hms_sat(M, s, f) -> bool:
    if isinstance(f, Top):
        return True
    if isinstance(f, Prop):
        return M.val[(s, f.name)] is TRUE
    if isinstance(f, Not):
        return _hms_nsat(M, s, f.body)
    if isinstance(f, And):
        return _hms_sat(M, s, f.left) and _hms_sat(M, s, f.right)
    if isinstance(f, NImp):
        # same clause order as the propositional twin, antecedent
        # conditions computed once
        a, b = f.left, f.right
        sa = _hms_sat(M, s, a)
        if sa and _hms_sat(M, s, b):
            return True
        na = _hms_nsat(M, s, a)
        if not sa and not na:
            return True
        return na and (_hms_sat(M, s, b) or _hms_nsat(M, s, b))
    if isinstance(f, Know):
        body = f.body
        if not (_hms_sat(M, s, body) or _hms_nsat(M, s, body)):
            return False
        return all(_hms_sat(M, t, body) for t in M.poss[(f.agent, s)])
    raise ModelError(f"cannot evaluate {type(f).__name__} on this structure")


def _hms_nsat(M, s, f) -> bool:
    """The truth of the negation, by the clause for each shape."""
    if isinstance(f, Top):
        return False
    if isinstance(f, Prop):
        return M.val[(s, f.name)] is FALSE
    if isinstance(f, Not):
        return _hms_sat(M, s, f.body)
    if isinstance(f, And):
        a, b = f.left, f.right
        na, nb = _hms_nsat(M, s, a), _hms_nsat(M, s, b)
        sa, sb = _hms_sat(M, s, a), _hms_sat(M, s, b)
        return (na and sb) or (sa and nb) or (na and nb)
    if isinstance(f, NImp):
        return _hms_sat(M, s, f.left) and _hms_nsat(M, s, f.right)
    if isinstance(f, Know):
        body = f.body
        if _hms_sat(M, s, f):
            return False
        return _hms_sat(M, s, body) or _hms_nsat(M, s, body)
    raise ModelError(f"cannot evaluate {type(f).__name__} on this structure")


def eval_hms_clauses(M: HmsStructure, s, f: Formula) -> TruthValue:
    M.check_state(s)
    _check_agents(M, f)
    _reject(f, Aware, XKnow)
    if _hms_sat(M, s, f):
        return TRUE
    if _hms_nsat(M, s, f):
        return FALSE
    return UNDEF


def eval_mr_on_hms(M: HmsStructure, s, f: Formula) -> TruthValue:
    """The single-negation style of evaluation: a formula is undefined
    at a state unless all its primitives live in the state's space, and
    two-valued there.  Only the implication-free K language fits."""
    M.check_state(s)
    _check_agents(M, f)
    _reject(f, NImp, Aware, XKnow)
    return _mr_value(M, s, f)


def _mr_value(M, s, f) -> TruthValue:
    if not primitives(f) <= M.space_of[s]:
        return UNDEF
    if isinstance(f, Top):
        return TRUE
    if isinstance(f, Prop):
        return M.val[(s, f.name)]
    if isinstance(f, Not):
        v = _mr_value(M, s, f.body)
        if v is UNDEF:
            return UNDEF
        return FALSE if v is TRUE else TRUE
    if isinstance(f, And):
        va, vb = _mr_value(M, s, f.left), _mr_value(M, s, f.right)
        if UNDEF in (va, vb):
            return UNDEF
        return TRUE if (va, vb) == (TRUE, TRUE) else FALSE
    if isinstance(f, Know):
        ok = all(_mr_value(M, t, f.body) is TRUE for t in M.poss[(f.agent, s)])
        return TRUE if ok else FALSE
    raise ModelError(f"cannot evaluate {type(f).__name__} here")


# ---------------------------------------------------------------------------
# extensions as truth/falsity set pairs

@dataclass(frozen=True)
class Extension:
    truths: frozenset
    falsities: frozenset


def extension(M: HmsStructure, f: Formula) -> Extension:
    """The pair (states where f is true, states where f is false)."""
    _check_agents(M, f)
    _reject(f, Aware, XKnow)
    values = hms_values(M, f)
    return Extension(
        truths=frozenset(s for s, v in values.items() if v is TRUE),
        falsities=frozenset(s for s, v in values.items() if v is FALSE),
    )


# ---------------------------------------------------------------------------
# pure three-valued propositional evaluation (no model, just an assignment)

def eval_prop3(f: Formula, assignment: dict) -> TruthValue:
    """Table-driven value of a propositional formula under an
    assignment of TruthValues to its atoms."""
    if isinstance(f, Top):
        return TRUE
    if isinstance(f, Prop):
        try:
            return assignment[f.name]
        except KeyError:
            raise ModelError(f"assignment misses atom {f.name!r}") from None
    if isinstance(f, Not):
        v = eval_prop3(f.body, assignment)
        if v is UNDEF:
            return UNDEF
        return FALSE if v is TRUE else TRUE
    if isinstance(f, And):
        a = eval_prop3(f.left, assignment)
        b = eval_prop3(f.right, assignment)
        if a is UNDEF or b is UNDEF:
            return UNDEF
        return TRUE if (a is TRUE and b is TRUE) else FALSE
    if isinstance(f, NImp):
        return _nimp_table(
            eval_prop3(f.left, assignment), eval_prop3(f.right, assignment)
        )
    raise ModelError(
        f"propositional evaluation cannot handle {type(f).__name__} ({render(f)!r})"
    )


def eval_prop3_clauses(f: Formula, assignment: dict) -> TruthValue:
    """Clause twin of eval_prop3, via the separate truth/falsity conditions."""
    if _p3_sat(f, assignment):
        return TRUE
    if _p3_nsat(f, assignment):
        return FALSE
    return UNDEF


def _p3_sat(f, sigma) -> bool:
    if isinstance(f, Top):
        return True
    if isinstance(f, Prop):
        return sigma[f.name] is TRUE
    if isinstance(f, Not):
        return _p3_nsat(f.body, sigma)
    if isinstance(f, And):
        return _p3_sat(f.left, sigma) and _p3_sat(f.right, sigma)
    if isinstance(f, NImp):
        # three disjuncts in clause order; each antecedent condition is
        # computed once (nested implications blow up otherwise)
        a, b = f.left, f.right
        sa = _p3_sat(a, sigma)
        if sa and _p3_sat(b, sigma):
            return True
        na = _p3_nsat(a, sigma)
        if not sa and not na:
            return True
        return na and (_p3_sat(b, sigma) or _p3_nsat(b, sigma))
    raise ModelError(f"cannot evaluate {type(f).__name__} propositionally")


def _p3_nsat(f, sigma) -> bool:
    if isinstance(f, Top):
        return False
    if isinstance(f, Prop):
        return sigma[f.name] is FALSE
    if isinstance(f, Not):
        return _p3_sat(f.body, sigma)
    if isinstance(f, And):
        a, b = f.left, f.right
        na, nb = _p3_nsat(a, sigma), _p3_nsat(b, sigma)
        sa, sb = _p3_sat(a, sigma), _p3_sat(b, sigma)
        return (na and sb) or (sa and nb) or (na and nb)
    if isinstance(f, NImp):
        return _p3_sat(f.left, sigma) and _p3_nsat(f.right, sigma)
    raise ModelError(f"cannot evaluate {type(f).__name__} propositionally")


def eval_structure(M, s, f: Formula):
    """Dispatch on the structure kind; the return type follows the kind
    (bool for the two-valued kinds, TruthValue otherwise)."""
    if isinstance(M, AwarenessStructure):
        return eval_awareness(M, s, f)
    if isinstance(M, KripkeStructure):
        return eval_kripke(M, s, f)
    if isinstance(M, Gsm):
        return eval_gsm(M, s, f)
    if isinstance(M, HmsStructure):
        return eval_hms(M, s, f)
    raise ModelError(f"cannot evaluate on {type(M).__name__}")
