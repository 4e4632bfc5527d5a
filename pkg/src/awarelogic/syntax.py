"""Formula ASTs, the concrete grammar, and syntactic predicates.

The core AST keeps only Top, Prop, Not, And, Know, plus NImp for the
three-valued implication language and Aware/XKnow for the awareness
language.  Everything else the grammar accepts (`|`, `->`, `<->`,
`<~>`, `=k`, and `A<i>` outside the awareness language) is rewritten
at parse time, so structural equality of core trees is the only
formula equality used anywhere in the package.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union


@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Prop:
    name: str


@dataclass(frozen=True, slots=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Know:
    agent: int
    body: "Formula"


@dataclass(frozen=True, slots=True)
class NImp:
    """Nonstandard implication: true when the antecedent is undefined."""

    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Aware:
    agent: int
    body: "Formula"


@dataclass(frozen=True, slots=True)
class XKnow:
    """Explicit knowledge: implicit knowledge plus awareness."""

    agent: int
    body: "Formula"


Formula = Union[Top, Prop, Not, And, Know, NImp, Aware, XKnow]

TOP = Top()
NOT_TOP = Not(TOP)

LANG_K = "k"
LANG_KXA = "kxa"
LANG_KNIMP = "knimp"
LANGUAGES = (LANG_K, LANG_KXA, LANG_KNIMP)


@dataclass(frozen=True)
class LanguageTag:
    """Which node kinds are admissible, and an optional agent bound."""

    kind: str = LANG_KNIMP
    n: Optional[int] = None

    def __post_init__(self):
        if self.kind not in LANGUAGES:
            raise ValueError(f"unknown language {self.kind!r}")
        if self.n is not None and self.n < 1:
            raise ValueError("agent count must be positive")


def _as_tag(lang) -> LanguageTag:
    if isinstance(lang, LanguageTag):
        return lang
    return LanguageTag(kind=lang)


# ---------------------------------------------------------------------------
# abbreviation expanders; these fix the exact core trees the sugar becomes

def disj(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def impl(a: Formula, b: Formula) -> Formula:
    return disj(Not(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return And(impl(a, b), impl(b, a))


def niff(a: Formula, b: Formula) -> Formula:
    return And(NImp(a, b), NImp(b, a))


def aware_abbrev(i: int, a: Formula) -> Formula:
    # A_i phi as K_i phi or K_i not K_i phi
    return disj(Know(i, a), Know(i, Not(Know(i, a))))


def value_is(a: Formula, k: str) -> Formula:
    """The `phi = k` abbreviations, k one of "0", "1/2", "1"."""
    if k == "1":
        return Not(NImp(a, NOT_TOP))
    if k == "0":
        return Not(NImp(Not(a), NOT_TOP))
    if k == "1/2":
        return And(NImp(a, NOT_TOP), NImp(Not(a), NOT_TOP))
    raise ValueError(f"bad truth value literal {k!r}")


# ---------------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op><~>|<->|~>|->|[()|&!=])"
    r"|(?P<word>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<val>1/2|[01]))"
)

_MODAL_RE = re.compile(r"[KAX][0-9]+")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ParseError(f"unexpected character {stripped[0]!r}", at)
        pos = m.end()
        if m.lastgroup == "op":
            toks.append(("op", m.group("op"), m.start("op")))
        elif m.lastgroup == "val":
            toks.append(("val", m.group("val"), m.start("val")))
        else:
            word = m.group("word")
            at = m.start("word")
            if word == "top":
                toks.append(("top", word, at))
            elif _MODAL_RE.fullmatch(word):
                toks.append(("modal", word, at))
            else:
                toks.append(("ident", word, at))
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, lang: LanguageTag):
        self.toks = _tokenize(text)
        self.i = 0
        self.lang = lang

    def peek(self):
        return self.toks[self.i]

    def advance(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, text, at = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"expected {op!r}", at)
        self.advance()

    def need_nimp(self, what: str, at: int):
        if self.lang.kind != LANG_KNIMP:
            raise ParseError(
                f"{what} is not in language {self.lang.kind!r}", at
            )

    def formula(self) -> Formula:
        left = self.or_level()
        kind, text, at = self.peek()
        if kind == "op" and text in ("->", "~>", "<->", "<~>"):
            self.advance()
            right = self.formula()
            if text == "->":
                return impl(left, right)
            if text == "<->":
                return iff(left, right)
            self.need_nimp(f"{text!r}", at)
            if text == "~>":
                return NImp(left, right)
            return niff(left, right)
        return left

    def or_level(self) -> Formula:
        f = self.and_level()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text == "|":
                self.advance()
                f = disj(f, self.and_level())
            else:
                return f

    def and_level(self) -> Formula:
        f = self.eq_level()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text == "&":
                self.advance()
                f = And(f, self.eq_level())
            else:
                return f

    def eq_level(self) -> Formula:
        f = self.unary()
        kind, text, at = self.peek()
        if kind == "op" and text == "=":
            self.need_nimp("'='", at)
            self.advance()
            vkind, vtext, vat = self.peek()
            if vkind != "val":
                raise ParseError("expected 0, 1, or 1/2 after '='", vat)
            self.advance()
            return value_is(f, vtext)
        return f

    def unary(self) -> Formula:
        kind, text, at = self.peek()
        if kind == "op" and text == "!":
            self.advance()
            return Not(self.unary())
        if kind == "modal":
            self.advance()
            letter, agent = text[0], int(text[1:])
            if agent < 1:
                raise ParseError("agent indices start at 1", at)
            if self.lang.n is not None and agent > self.lang.n:
                raise ParseError(
                    f"agent {agent} out of range (n={self.lang.n})", at
                )
            body = self.unary()
            if letter == "K":
                return Know(agent, body)
            if letter == "A":
                if self.lang.kind == LANG_KXA:
                    return Aware(agent, body)
                return aware_abbrev(agent, body)
            if self.lang.kind != LANG_KXA:
                raise ParseError(
                    f"X{agent} is not in language {self.lang.kind!r}", at
                )
            return XKnow(agent, body)
        return self.atom()

    def atom(self) -> Formula:
        kind, text, at = self.advance()
        if kind == "top":
            return TOP
        if kind == "ident":
            return Prop(text)
        if kind == "op" and text == "(":
            f = self.formula()
            self.expect_op(")")
            return f
        raise ParseError(f"unexpected {text!r}" if text else "unexpected end of input", at)


def parse(text: str, lang="knimp") -> Formula:
    """Parse concrete syntax into the desugared core AST."""
    tag = _as_tag(lang)
    p = _Parser(text, tag)
    f = p.formula()
    kind, text_, at = p.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {text_!r}", at)
    return f


# ---------------------------------------------------------------------------
# printing

# precedence levels, mirroring the grammar: implication 0, or 1, and 2,
# eq 3, unary 4, atoms 5; the core AST only ever prints at 0/2/4/5
_LEVEL = {NImp: 0, And: 2, Not: 4, Know: 4, Aware: 4, XKnow: 4, Top: 5, Prop: 5}


def render(f: Formula) -> str:
    """Concrete syntax that reparses to the same core tree."""
    return _render(f, 0)


def _render(f: Formula, floor: int) -> str:
    level = _LEVEL[type(f)]
    if isinstance(f, Top):
        body = "top"
    elif isinstance(f, Prop):
        body = f.name
    elif isinstance(f, Not):
        body = "!" + _render(f.body, 4)
    elif isinstance(f, Know):
        body = f"K{f.agent} " + _render(f.body, 4)
    elif isinstance(f, Aware):
        body = f"A{f.agent} " + _render(f.body, 4)
    elif isinstance(f, XKnow):
        body = f"X{f.agent} " + _render(f.body, 4)
    elif isinstance(f, And):
        # left-associative: a nested And on the left needs no parens
        body = _render(f.left, 2) + " & " + _render(f.right, 3)
    else:
        # right-associative
        body = _render(f.left, 1) + " ~> " + _render(f.right, 0)
    if level < floor:
        return "(" + body + ")"
    return body


# ---------------------------------------------------------------------------
# predicates and measures

def primitives(f: Formula) -> frozenset:
    """The set of atom names occurring in the formula."""
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Prop):
            out.add(g.name)
        elif isinstance(g, (Not, Know, Aware, XKnow)):
            stack.append(g.body)
        elif isinstance(g, (And, NImp)):
            stack.append(g.left)
            stack.append(g.right)
    return frozenset(out)


def size(f: Formula) -> int:
    """Node count of the core tree."""
    total = 0
    stack = [f]
    while stack:
        g = stack.pop()
        total += 1
        if isinstance(g, (Not, Know, Aware, XKnow)):
            stack.append(g.body)
        elif isinstance(g, (And, NImp)):
            stack.append(g.left)
            stack.append(g.right)
    return total


def modal_depth(f: Formula) -> int:
    """Maximum nesting of Know/Aware/XKnow nodes."""
    if isinstance(f, (Top, Prop)):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.body)
    if isinstance(f, (And, NImp)):
        return max(modal_depth(f.left), modal_depth(f.right))
    return 1 + modal_depth(f.body)


def agents_of(f: Formula) -> frozenset:
    """All agent indices mentioned by modal operators."""
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Know, Aware, XKnow)):
            out.add(g.agent)
            stack.append(g.body)
        elif isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, (And, NImp)):
            stack.append(g.left)
            stack.append(g.right)
    return frozenset(out)


def in_language(f: Formula, atoms) -> bool:
    """Whether every primitive of the formula lies in the given atom set."""
    return primitives(f) <= frozenset(atoms)


def fits_language(f: Formula, lang) -> bool:
    """Whether the core tree uses only node kinds the language admits."""
    kind = _as_tag(lang).kind
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, NImp):
            if kind != LANG_KNIMP:
                return False
            stack.append(g.left)
            stack.append(g.right)
        elif isinstance(g, (Aware, XKnow)):
            if kind != LANG_KXA:
                return False
            stack.append(g.body)
        elif isinstance(g, (Not, Know)):
            stack.append(g.body)
        elif isinstance(g, And):
            stack.append(g.left)
            stack.append(g.right)
    return True


def to_explicit(f: Formula) -> Formula:
    """Replace every K operator by X; input must be in the plain K language."""
    if isinstance(f, (Top, Prop)):
        return f
    if isinstance(f, Not):
        return Not(to_explicit(f.body))
    if isinstance(f, And):
        return And(to_explicit(f.left), to_explicit(f.right))
    if isinstance(f, Know):
        return XKnow(f.agent, to_explicit(f.body))
    raise ValueError(f"to_explicit input must be K-language, got {type(f).__name__}")


def is_implication_free(f: Formula) -> bool:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, NImp):
            return False
        if isinstance(g, (Not, Know, Aware, XKnow)):
            stack.append(g.body)
        elif isinstance(g, And):
            stack.append(g.left)
            stack.append(g.right)
    return True


def is_definitely_two_valued(f: Formula) -> bool:
    """Membership in the smallest set containing top and all phi=k trees,
    closed under negation, conjunction, right-hand implication, and K.

    The desugared phi=k trees all bottom out in !top, so the closure
    rules alone decide membership; no separate base-case match needed.
    """
    if isinstance(f, Top):
        return True
    if isinstance(f, Not):
        return is_definitely_two_valued(f.body)
    if isinstance(f, And):
        return is_definitely_two_valued(f.left) and is_definitely_two_valued(f.right)
    if isinstance(f, NImp):
        return is_definitely_two_valued(f.right)
    if isinstance(f, Know):
        return is_definitely_two_valued(f.body)
    return False


def eq_shape(f: Formula):
    """Recover (body, k) when f is structurally a desugared `body = k`.

    A tree !(!(a) ~> !top) reads both as a=0 and as (!a)=1; the =1
    reading is returned.  Every predicate downstream agrees on the two
    readings, so the choice is immaterial.
    """
    if isinstance(f, Not) and isinstance(f.body, NImp) and f.body.right == NOT_TOP:
        return f.body.left, "1"
    if (
        isinstance(f, And)
        and isinstance(f.left, NImp)
        and isinstance(f.right, NImp)
        and f.left.right == NOT_TOP
        and f.right.right == NOT_TOP
        and f.right.left == Not(f.left.left)
    ):
        return f.left.left, "1/2"
    return None


def is_simple(f: Formula) -> bool:
    """Boolean combination of `psi = k` leaves with psi implication-free.

    The leaf match runs before decomposition: the =1/2 tree is itself a
    conjunction, and must be recognized as a leaf rather than split.
    """
    shape = eq_shape(f)
    if shape is not None:
        return is_implication_free(shape[0])
    if isinstance(f, Not):
        return is_simple(f.body)
    if isinstance(f, And):
        return is_simple(f.left) and is_simple(f.right)
    return False


# ---------------------------------------------------------------------------
# formula enumeration, used by sweeps and default agreement corpora

def iter_formulas(
    atoms,
    max_size: int,
    lang="k",
    agents: int = 1,
    max_depth: Optional[int] = None,
) -> Iterator[Formula]:
    """All core formulas over the atoms, by ascending size, deterministic.

    Subtrees are shared between yielded formulas, which keeps bulk
    evaluation over the whole stream cheap.
    """
    kind = _as_tag(lang).kind
    by_size: list[list[Formula]] = [[] for _ in range(max_size + 1)]
    depth: dict[int, int] = {}

    def add(s, f, d):
        # anything past max_depth is dropped here, which also prunes
        # every superformula (depth is monotone under all constructors)
        if max_depth is not None and d > max_depth:
            return
        by_size[s].append(f)
        depth[id(f)] = d

    if max_size >= 1:
        add(1, TOP, 0)
        for a in sorted(atoms):
            add(1, Prop(a), 0)
        yield from by_size[1]
    for s in range(2, max_size + 1):
        for g in by_size[s - 1]:
            add(s, Not(g), depth[id(g)])
        for i in range(1, agents + 1):
            for g in by_size[s - 1]:
                add(s, Know(i, g), depth[id(g)] + 1)
            if kind == LANG_KXA:
                for g in by_size[s - 1]:
                    add(s, Aware(i, g), depth[id(g)] + 1)
                for g in by_size[s - 1]:
                    add(s, XKnow(i, g), depth[id(g)] + 1)
        for ls in range(1, s - 1):
            rs = s - 1 - ls
            for a in by_size[ls]:
                for b in by_size[rs]:
                    add(s, And(a, b), max(depth[id(a)], depth[id(b)]))
        if kind == LANG_KNIMP:
            for ls in range(1, s - 1):
                rs = s - 1 - ls
                for a in by_size[ls]:
                    for b in by_size[rs]:
                        add(s, NImp(a, b), max(depth[id(a)], depth[id(b)]))
        yield from by_size[s]
