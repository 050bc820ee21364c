"""Concrete syntax for terms, types, contexts and formulas.

Grammar (ASCII)::

    type    := prod ("->" type)?
    prod    := modal ("*" modal)*
    modal   := "O" modal | IDENT | "(" type ")"

    term    := "\\" IDENT (":" type)? "." term
             | "let" "o" binders "=" args "in" term
             | atomt+
    atomt   := IDENT | "pure" atomt | "p1" atomt | "p2" atomt
             | "<" term "," term ">" | "(" term ")"
    binders := "_" | IDENT ("," IDENT)*
    args    := "_" | term ("," term)*

    formula := ("forall" | "exists") IDENT "." formula | disj ("->" formula)?
    disj    := conj ("|" conj)*
    conj    := unary ("&" unary)*
    unary   := "~" unary | "O" unary | atomf
    atomf   := "false" | IDENT ("(" IDENT ("," IDENT)* ")")? | "(" formula ")"

``#`` starts a comment running to the end of the line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import formula as fm
from .syntax import (
    App, Arrow, Atom, Circle, Context, Lam, LetCirc, Nabla, Pair, Product, Proj, Pure,
    Term, Type, Var,
)

TERM_KEYWORDS = frozenset({"let", "o", "in", "pure", "p1", "p2"})
FORMULA_KEYWORDS = frozenset({"false", "forall", "exists", "O"})


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    column: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("span start after end")

    def __str__(self):
        return f"{self.line}:{self.column}"


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan, expected=()):
        self.message = message
        self.span = span
        self.expected = frozenset(expected)
        detail = f" (expected {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{span}: {message}{detail}")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", a punctuation string, or "eof"
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
  | (?P<punct>->|[\\.,=()<>:*&|~_])
    """,
    re.VERBOSE,
)


def _span(text: str, start: int, end: int) -> SourceSpan:
    line = text.count("\n", 0, start) + 1
    col = start - (text.rfind("\n", 0, start) + 1) + 1
    return SourceSpan(start, end, line, col)


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             _span(text, pos, pos + 1))
        if m.lastgroup == "ident":
            out.append(Token("ident", m.group(), _span(text, pos, m.end())))
        elif m.lastgroup == "punct":
            out.append(Token(m.group(), m.group(), _span(text, pos, m.end())))
        pos = m.end()
    out.append(Token("eof", "", _span(text, len(text), len(text))))
    return out


@dataclass
class _Stream:
    tokens: list[Token]
    pos: int = 0
    spans: dict = field(default_factory=dict)
    # expected-token names collected at the current position, for diagnostics
    expected: set = field(default_factory=set)

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        self.expected = set()
        return t

    def mark(self, node, start: Token):
        """Record the source extent of ``node``: from ``start`` to the last consumed token."""
        last = self.tokens[self.pos - 1].span
        sp = start.span
        self.spans[id(node)] = SourceSpan(sp.start, max(sp.start, last.end), sp.line, sp.column)
        return node

    def is_word(self, word: str) -> bool:
        self.expected.add(repr(word))
        return self.tok.kind == "ident" and self.tok.text == word

    def is_punct(self, p: str) -> bool:
        self.expected.add(repr(p))
        return self.tok.kind == p

    def fail(self, message: str | None = None):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        if message:
            raise ParseError(message, t.span)
        raise ParseError(f"unexpected {found}", t.span, self.expected)

    def expect_punct(self, p: str) -> Token:
        if not self.is_punct(p):
            self.fail()
        return self.advance()

    def expect_word(self, word: str) -> Token:
        if not self.is_word(word):
            self.fail()
        return self.advance()

    def ident(self, reserved=frozenset()) -> str:
        self.expected.add("identifier")
        t = self.tok
        if t.kind != "ident" or t.text in reserved:
            self.fail()
        self.advance()
        return t.text

    def end(self):
        self.expected.add("end of input")
        if self.tok.kind != "eof":
            self.fail()


# -- types -----------------------------------------------------------------

def _type(s: _Stream, modality: str = "O", atom=Atom, arrow=Arrow, prod=Product, circ=Circle):
    def ty():
        left = product()
        if s.is_punct("->"):
            s.advance()
            return arrow(left, ty())
        return left

    def product():
        left = modal()
        while s.is_punct("*"):
            s.advance()
            left = prod(left, modal())
        return left

    def modal():
        if s.is_word(modality):
            s.advance()
            return circ(modal())
        if s.is_punct("("):
            s.advance()
            inner = ty()
            s.expect_punct(")")
            return inner
        return atom(s.ident(reserved={modality}))

    return ty()


def parse_type(text: str) -> Type:
    s = _Stream(tokenize(text))
    out = _type(s)
    s.end()
    return out


# -- terms -----------------------------------------------------------------

def _term(s: _Stream) -> Term:
    start = s.tok
    if s.is_punct("\\"):
        s.advance()
        x = s.ident(TERM_KEYWORDS)
        ty = None
        if s.is_punct(":"):
            s.advance()
            ty = _type(s)
        s.expect_punct(".")
        return s.mark(Lam(x, _term(s), ty), start)
    if s.is_word("let"):
        s.advance()
        s.expect_word("o")
        if s.is_punct("_"):
            s.advance()
            binders: list[str] = []
        else:
            binders = [s.ident(TERM_KEYWORDS)]
            while s.is_punct(","):
                s.advance()
                binders.append(s.ident(TERM_KEYWORDS))
        s.expect_punct("=")
        if s.is_punct("_"):
            s.advance()
            args: list[Term] = []
        else:
            args = [_term(s)]
            while s.is_punct(","):
                s.advance()
                args.append(_term(s))
        if len(args) != len(binders):
            s.fail(f"let binds {len(binders)} names to {len(args)} terms")
        if len(set(binders)) != len(binders):
            s.fail("let binders must be distinct")
        s.expect_word("in")
        return s.mark(LetCirc(tuple(binders), tuple(args), _term(s)), start)
    head = _atomt(s)
    while _starts_atomt(s):
        head = s.mark(App(head, _atomt(s)), start)
    return head


def _starts_atomt(s: _Stream) -> bool:
    t = s.tok
    if t.kind == "ident":
        s.expected.add("identifier")
        return t.text not in TERM_KEYWORDS or t.text in ("pure", "p1", "p2")
    return s.is_punct("<") or s.is_punct("(")


def _atomt(s: _Stream) -> Term:
    start = s.tok
    if s.is_word("pure"):
        s.advance()
        return s.mark(Pure(_atomt(s)), start)
    if s.is_word("p1") or s.is_word("p2"):
        idx = int(s.advance().text[1])
        return s.mark(Proj(idx, _atomt(s)), start)
    if s.is_punct("<"):
        s.advance()
        left = _term(s)
        s.expect_punct(",")
        right = _term(s)
        s.expect_punct(">")
        return s.mark(Pair(left, right), start)
    if s.is_punct("("):
        s.advance()
        inner = _term(s)
        s.expect_punct(")")
        return inner
    return s.mark(Var(s.ident(TERM_KEYWORDS)), start)


def parse_term(text: str) -> Term:
    return parse_term_spans(text)[0]


def parse_term_spans(text: str) -> tuple[Term, dict[int, SourceSpan]]:
    """Parse a term and also return source spans keyed by ``id()`` of each node."""
    s = _Stream(tokenize(text))
    out = _term(s)
    s.end()
    return out, s.spans


def parse_context(text: str) -> Context:
    """Lines of ``name : type``; blank lines and ``#`` comments ignored."""
    decls = []
    offset = 0
    for raw in text.splitlines(keepends=True):
        line = raw.split("#", 1)[0]
        if line.strip():
            s = _Stream(tokenize(line))
            name = s.ident(TERM_KEYWORDS)
            s.expect_punct(":")
            ty = _type(s)
            try:
                s.end()
            except ParseError as e:
                raise _shift(e, text, offset) from None
            if name in (n for n, _ in decls):
                raise ParseError(f"duplicate declaration of {name!r}", _span(text, offset, offset + len(line)))
            decls.append((name, ty))
        offset += len(raw)
    return Context(decls)


def _shift(e: ParseError, text: str, offset: int) -> ParseError:
    sp = e.span
    return ParseError(e.message, _span(text, offset + sp.start, offset + sp.end), e.expected)


# -- formulas --------------------------------------------------------------

def _formula(s: _Stream) -> fm.Formula:
    for word, ctor in (("forall", fm.Forall), ("exists", fm.Exists)):
        if s.is_word(word):
            s.advance()
            x = s.ident(FORMULA_KEYWORDS)
            s.expect_punct(".")
            return ctor(x, _formula(s))
    left = _disj(s)
    if s.is_punct("->"):
        s.advance()
        return fm.Implies(left, _formula(s))
    return left


def _disj(s):
    left = _conj(s)
    while s.is_punct("|"):
        s.advance()
        left = fm.Or(left, _conj(s))
    return left


def _conj(s):
    left = _unary(s)
    while s.is_punct("&"):
        s.advance()
        left = fm.And(left, _unary(s))
    return left


def _unary(s):
    if s.is_punct("~"):
        s.advance()
        return fm.neg(_unary(s))
    if s.is_word("O"):
        s.advance()
        return fm.Circ(_unary(s))
    if s.is_word("false"):
        s.advance()
        return fm.BOT
    if s.is_punct("("):
        s.advance()
        inner = _formula(s)
        s.expect_punct(")")
        return inner
    if s.is_word("forall") or s.is_word("exists"):
        return _formula(s)
    name = s.ident(FORMULA_KEYWORDS)
    if s.is_punct("("):
        s.advance()
        args = [s.ident(FORMULA_KEYWORDS)]
        while s.is_punct(","):
            s.advance()
            args.append(s.ident(FORMULA_KEYWORDS))
        s.expect_punct(")")
        return fm.Pred(name, tuple(args))
    return fm.Letter(name)


def parse_formula(text: str) -> fm.Formula:
    s = _Stream(tokenize(text))
    out = _formula(s)
    s.end()
    return out


# -- printing --------------------------------------------------------------

def print_type(ty: Type, modality: str = "O") -> str:
    def go(t, level):
        # level 0: anywhere, 1: product operand, 2: modal operand
        if isinstance(t, Atom):
            return t.name
        if isinstance(t, Circle):
            return f"{modality} {go(t.body, 2)}"
        if isinstance(t, Nabla):
            return f"V {go(t.body, 2)}"
        if isinstance(t, Product):
            out = f"{go(t.left, 1)} * {go(t.right, 2)}"
            return f"({out})" if level >= 2 else out
        if isinstance(t, Arrow):
            out = f"{go(t.domain, 1)} -> {go(t.codomain, 0)}"
            return f"({out})" if level >= 1 else out
        raise TypeError(f"not a type: {t!r}")

    return go(ty, 0)


def print_term(t: Term) -> str:
    def go(t, ctx):
        # ctx: "top" (lambda/let allowed), "fun" (head of application), "arg" (atom only)
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Lam):
            ann = f":{print_type(t.ty)}" if t.ty is not None else ""
            out = f"\\{t.binder}{ann}. {go(t.body, 'top')}"
            return out if ctx == "top" else f"({out})"
        if isinstance(t, LetCirc):
            if t.binders:
                lhs = ", ".join(t.binders)
                rhs = ", ".join(go(m, "top") for m in t.args)
            else:
                lhs = rhs = "_"
            out = f"let o {lhs} = {rhs} in {go(t.body, 'top')}"
            return out if ctx == "top" else f"({out})"
        if isinstance(t, App):
            out = f"{go(t.fun, 'fun')} {go(t.arg, 'arg')}"
            return f"({out})" if ctx == "arg" else out
        if isinstance(t, Pair):
            return f"<{go(t.left, 'top')}, {go(t.right, 'top')}>"
        if isinstance(t, Proj):
            return f"p{t.index} {go(t.body, 'arg')}"
        if isinstance(t, Pure):
            return f"pure {go(t.body, 'arg')}"
        raise TypeError(f"not a term: {t!r}")

    return go(t, "top")


def print_context(ctx: Context) -> str:
    return "".join(f"{n} : {print_type(t)}\n" for n, t in ctx)


def print_formula(f: fm.Formula) -> str:
    def go(f, level):
        # level 0: anywhere, 1: disjunct, 2: conjunct, 3: unary operand
        if isinstance(f, fm.Letter):
            return f.name
        if isinstance(f, fm.Bottom):
            return "false"
        if isinstance(f, fm.Pred):
            return f"{f.name}({', '.join(f.args)})"
        if isinstance(f, fm.Circ):
            return f"O {go(f.body, 3)}"
        if isinstance(f, fm.Implies) and f.right == fm.BOT:
            return f"~{go(f.left, 3)}"
        if isinstance(f, (fm.Forall, fm.Exists)):
            q = "forall" if isinstance(f, fm.Forall) else "exists"
            out = f"{q} {f.var}. {go(f.body, 0)}"
            return out if level == 0 else f"({out})"
        if isinstance(f, fm.Implies):
            out = f"{go(f.left, 1)} -> {go(f.right, 0)}"
            return out if level == 0 else f"({out})"
        if isinstance(f, fm.Or):
            out = f"{go(f.left, 1)} | {go(f.right, 2)}"
            return out if level <= 1 else f"({out})"
        if isinstance(f, fm.And):
            out = f"{go(f.left, 2)} & {go(f.right, 3)}"
            return out if level <= 2 else f"({out})"
        raise TypeError(f"not a formula: {f!r}")

    return go(f, 0)
