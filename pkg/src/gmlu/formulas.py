"""Formula ASTs for graded universal modal logic, in negation normal form.

Negation exists only at the literal level.  The four graded modalities
are global: ``<>=k F`` holds when at least k points satisfy F, ``<>==k F``
when exactly k do, and ``[]<k F`` / ``[]!=k F`` are their duals (all
points satisfy F except fewer than k / except exactly k).

Concrete syntax accepted by :func:`parse_formula`::

    literal    p   !p
    boolean    F & G   F | G   ( F )        & binds tighter than |
    modality   <>=k F   []<k F   <>==k F   []!=k F

Modalities bind tighter than the boolean connectives and apply to the
formula immediately following them.  Whitespace is ignored.  A literal
is only legal somewhere inside a modality; a formula with a bare
top-level literal is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

from .vocab import Vocabulary

DEFAULT_MAX_GRADE = 1 << 16


class FormulaError(ValueError):
    """Problem with a formula; ``position`` is an offset into the source text."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message if position is None else f"{message} (at {position})")
        self.position = position


class FormulaSyntaxError(FormulaError):
    pass


class UnknownSymbolError(FormulaError):
    pass


class BareLiteralError(FormulaError):
    pass


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Lit(Formula):
    symbol: str
    positive: bool = True


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class DiamondGeq(Formula):
    """At least ``grade`` points satisfy ``sub``."""

    grade: int
    sub: Formula


@dataclass(frozen=True)
class BoxLt(Formula):
    """All points satisfy ``sub``, except fewer than ``grade`` of them."""

    grade: int
    sub: Formula


@dataclass(frozen=True)
class DiamondEq(Formula):
    """Exactly ``grade`` points satisfy ``sub``."""

    grade: int
    sub: Formula


@dataclass(frozen=True)
class BoxNeq(Formula):
    """All points satisfy ``sub``, except some number != ``grade`` of them."""

    grade: int
    sub: Formula


MODAL_TYPES = (DiamondGeq, BoxLt, DiamondEq, BoxNeq)


def negate(f: Formula) -> Formula:
    """Semantic complement with negation pushed to the literals."""
    if isinstance(f, Lit):
        return Lit(f.symbol, not f.positive)
    if isinstance(f, And):
        return Or(negate(f.left), negate(f.right))
    if isinstance(f, Or):
        return And(negate(f.left), negate(f.right))
    if isinstance(f, DiamondGeq):
        return BoxLt(f.grade, negate(f.sub))
    if isinstance(f, BoxLt):
        return DiamondGeq(f.grade, negate(f.sub))
    if isinstance(f, DiamondEq):
        return BoxNeq(f.grade, negate(f.sub))
    if isinstance(f, BoxNeq):
        return DiamondEq(f.grade, negate(f.sub))
    raise TypeError(f"not a formula: {f!r}")


def size(f: Formula) -> int:
    """Formula size: literals cost 1, connectives 1, modalities their grade
    (exact-count modalities one more)."""
    if isinstance(f, Lit):
        return 1
    if isinstance(f, (And, Or)):
        return size(f.left) + size(f.right) + 1
    if isinstance(f, (DiamondGeq, BoxLt)):
        return size(f.sub) + f.grade
    if isinstance(f, (DiamondEq, BoxNeq)):
        return size(f.sub) + f.grade + 1
    raise TypeError(f"not a formula: {f!r}")


def counting_depth(f: Formula) -> int:
    """Maximum counting threshold used anywhere in the formula.

    Threshold modalities contribute their grade, exact-count modalities
    grade + 1, and nested modalities are taken into account.  This is
    the notion the depth-d fragment restricts.
    """
    if isinstance(f, Lit):
        return 0
    if isinstance(f, (And, Or)):
        return max(counting_depth(f.left), counting_depth(f.right))
    if isinstance(f, (DiamondGeq, BoxLt)):
        return max(f.grade, counting_depth(f.sub))
    if isinstance(f, (DiamondEq, BoxNeq)):
        return max(f.grade + 1, counting_depth(f.sub))
    raise TypeError(f"not a formula: {f!r}")


def counting_depth_shallow(f: Formula) -> int:
    """Counting depth with the clauses read verbatim: a modality's depth is
    determined by its own grade only, discarding the subformula's depth.
    Kept for debug output; :func:`counting_depth` is authoritative."""
    if isinstance(f, Lit):
        return 0
    if isinstance(f, (And, Or)):
        return max(counting_depth_shallow(f.left), counting_depth_shallow(f.right))
    if isinstance(f, (DiamondGeq, BoxLt)):
        return f.grade
    if isinstance(f, (DiamondEq, BoxNeq)):
        return f.grade + 1
    raise TypeError(f"not a formula: {f!r}")


def is_sentence(f: Formula) -> bool:
    """True when every literal sits under at least one modality, so the
    formula's truth value does not depend on the evaluation point."""

    def covered(g: Formula, under_modal: bool) -> bool:
        if isinstance(g, Lit):
            return under_modal
        if isinstance(g, (And, Or)):
            return covered(g.left, under_modal) and covered(g.right, under_modal)
        return covered(g.sub, True)

    return covered(f, False)


_MODAL_TOKENS = {DiamondGeq: "<>=", BoxLt: "[]<", DiamondEq: "<>==", BoxNeq: "[]!="}


def format_formula(f: Formula) -> str:
    """Concrete syntax; parses back to the identical AST."""
    if isinstance(f, Lit):
        return f.symbol if f.positive else "!" + f.symbol
    if isinstance(f, (And, Or)):
        op = "&" if isinstance(f, And) else "|"
        left = format_formula(f.left)
        right = format_formula(f.right)
        # keep re-parse structure-exact: wrap binaries that would re-associate
        if isinstance(f, And) and isinstance(f.left, Or):
            left = f"({left})"
        if isinstance(f.right, (And, Or)):
            right = f"({right})"
        return f"{left} {op} {right}"
    if isinstance(f, MODAL_TYPES):
        sub = format_formula(f.sub)
        if isinstance(f.sub, (And, Or)):
            sub = f"({sub})"
        return f"{_MODAL_TOKENS[type(f)]}{f.grade} {sub}"
    raise TypeError(f"not a formula: {f!r}")


class _Tokenizer:
    def __init__(self, text: str, max_grade: int):
        self.text = text
        self.pos = 0
        self.max_grade = max_grade

    def error(self, msg):
        raise FormulaSyntaxError(msg, self.pos)

    def _grade(self) -> int:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected a grade (digits)")
        k = int(self.text[start : self.pos])
        if k > self.max_grade:
            raise FormulaSyntaxError(f"grade {k} exceeds cap {self.max_grade}", start)
        return k

    def tokens(self):
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch.isspace():
                self.pos += 1
                continue
            start = self.pos
            if ch in "()&|!":
                self.pos += 1
                yield ch, None, start
            elif ch == "<":
                if not text.startswith("<>=", self.pos):
                    self.error("expected <>= or <>==")
                self.pos += 3
                exact = self.pos < len(text) and text[self.pos] == "="
                if exact:
                    self.pos += 1
                yield ("<>==" if exact else "<>="), self._grade(), start
            elif ch == "[":
                if text.startswith("[]<", self.pos):
                    self.pos += 3
                    yield "[]<", self._grade(), start
                elif text.startswith("[]!=", self.pos):
                    self.pos += 4
                    yield "[]!=", self._grade(), start
                else:
                    self.error("expected []< or []!=")
            elif ch.isalpha() or ch == "_":
                while self.pos < len(text) and (
                    text[self.pos].isalnum() or text[self.pos] == "_"
                ):
                    self.pos += 1
                yield "sym", text[start : self.pos], start
            else:
                self.error(f"unexpected character {ch!r}")
        yield "end", None, self.pos


_MODAL_CLASSES = {"<>=": DiamondGeq, "[]<": BoxLt, "<>==": DiamondEq, "[]!=": BoxNeq}


class _Parser:
    def __init__(self, text: str, vocab: Vocabulary, max_grade: int):
        self.toks = list(_Tokenizer(text, max_grade).tokens())
        self.i = 0
        self.vocab = vocab

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.parse_or()
        kind, _, pos = self.peek()
        if kind != "end":
            raise FormulaSyntaxError(f"unexpected {kind!r}", pos)
        return f

    def parse_or(self) -> Formula:
        f = self.parse_and()
        while self.peek()[0] == "|":
            self.take()
            f = Or(f, self.parse_and())
        return f

    def parse_and(self) -> Formula:
        f = self.parse_unary()
        while self.peek()[0] == "&":
            self.take()
            f = And(f, self.parse_unary())
        return f

    def parse_unary(self) -> Formula:
        kind, value, pos = self.take()
        if kind == "(":
            f = self.parse_or()
            k2, _, p2 = self.take()
            if k2 != ")":
                raise FormulaSyntaxError("expected )", p2)
            return f
        if kind in _MODAL_CLASSES:
            return _MODAL_CLASSES[kind](value, self.parse_unary())
        if kind == "!":
            k2, sym, p2 = self.take()
            if k2 != "sym":
                raise FormulaSyntaxError("expected a symbol after !", p2)
            self._check_symbol(sym, p2)
            return Lit(sym, False)
        if kind == "sym":
            self._check_symbol(value, pos)
            return Lit(value, True)
        raise FormulaSyntaxError(f"unexpected {kind!r}", pos)

    def _check_symbol(self, sym: str, pos: int):
        if sym not in self.vocab.symbols:
            raise UnknownSymbolError(f"unknown symbol {sym!r}", pos)


def parse_formula(
    text: str, vocab: Vocabulary, max_grade: int = DEFAULT_MAX_GRADE
) -> Formula:
    """Parse concrete syntax, rejecting bare literals outside modalities."""
    f = _Parser(text, vocab, max_grade).parse()
    if not is_sentence(f):
        raise BareLiteralError(
            "literal outside any modality; proposition symbols are only "
            "allowed in the scope of modal operators"
        )
    return f
