"""
Lexer, recursive-descent parser and printer for resource inequalities.

Grammar (whitespace-insensitive):

    statement := side (">=" | "≥") side
    side      := "0" | term ("+" term)*
    term      := product? resource
    expr      := product (("+" | "-") product)*
    product   := unary (["*"] atom)*
    unary     := "-" unary | atom
    atom      := number | "inf" | "∞" | entropic | NAME "(" names ")" | "(" expr ")"
    entropic  := "H(" sys ["|" sys] ")" [tag] | "I(" sys ";" sys ["|" sys] ")" [tag]
    resource  := "[qq]" | "[q->q]" | "[c->c]" | "<" NAME [":" NAME] ">"

Numbers are exact rationals ("0.5" and "1/2" are the same token value). A system
run such as "RA" is split into labels R, A at each capital letter. Error
offsets are UTF-8 byte offsets into the input.
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple, Union

from qhelper.core.errors import RIParseError
from qhelper.core.qcore import EntropyKind
from qhelper.ricalc.ast import (
    ONE, BinOp, Const, Entropic, Expr, Infinity, Neg, Resource, ResourceKind,
    RIStatement, Symbol, Term,
)

_RESOURCE_RE = re.compile(r"\[\s*(qq|q\s*(?:->|→)\s*q|c\s*(?:->|→)\s*c)\s*\]")
_ANGLE_RE = re.compile(r"<([^<>:\s]+)(?::([^<>:\s]+))?>")
_NUMBER_RE = re.compile(r"\d+(?:\.\d+|/\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9']*")
_TAG_RE = re.compile(r"_[A-Za-z0-9_{}|']+")
_LABEL_RE = re.compile(r"[A-Z][a-z0-9']*")

_PUNCT = {
    "+": "PLUS", "-": "MINUS", "−": "MINUS", "*": "STAR", "·": "STAR",
    "(": "LPAREN", ")": "RPAREN", "|": "PIPE", ";": "SEMI", ",": "COMMA", "∞": "INF",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int
    value: object = None


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str, line: Optional[int] = None) -> List[Token]:
    tokens: List[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        offset = _byte_offset(text, i)
        if ch == "[":
            m = _RESOURCE_RE.match(text, i)
            if not m:
                raise RIParseError("syntax error: malformed resource", offset, line)
            unit = re.sub(r"\s+", "", m.group(1)).replace("→", "->")
            kind = {"qq": ResourceKind.EBIT, "q->q": ResourceKind.QUBIT, "c->c": ResourceKind.CBIT}[unit]
            tokens.append(Token("RESOURCE", m.group(0), offset, Resource(kind)))
            i = m.end()
        elif ch == "<":
            m = _ANGLE_RE.match(text, i)
            if not m:
                raise RIParseError("syntax error: malformed resource", offset, line)
            if m.group(2) is not None:
                resource = Resource(ResourceKind.RELATIVE, m.group(1), m.group(2))
            else:
                resource = Resource.named(m.group(1))
            tokens.append(Token("RESOURCE", m.group(0), offset, resource))
            i = m.end()
        elif text.startswith(">=", i) or ch == "≥":
            width = 2 if ch == ">" else 1
            tokens.append(Token("GE", text[i:i + width], offset))
            i += width
        elif ch.isdigit():
            m = _NUMBER_RE.match(text, i)
            raw = m.group(0)
            if "/" in raw and int(raw.split("/")[1]) == 0:
                raise RIParseError("syntax error: zero denominator", offset, line)
            tokens.append(Token("NUMBER", raw, offset, Fraction(raw)))
            i = m.end()
        elif ch == "_":
            m = _TAG_RE.match(text, i)
            if not m:
                raise RIParseError("syntax error: malformed state tag", offset, line)
            tokens.append(Token("TAG", m.group(0), offset, m.group(0)[1:]))
            i = m.end()
        elif ch.isalpha() and ch.isascii():
            m = _IDENT_RE.match(text, i)
            tokens.append(Token("IDENT", m.group(0), offset))
            i = m.end()
        elif ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, offset))
            i += 1
        else:
            raise RIParseError(f"syntax error: unknown token {ch!r}", offset, line)
    tokens.append(Token("END", "", _byte_offset(text, n)))
    return tokens


_ATOM_START = {"NUMBER", "IDENT", "LPAREN", "INF"}


class _Parser:
    def __init__(self, text: str, line: Optional[int] = None):
        self.line = line
        self.tokens = tokenize(text, line)
        self.pos = 0

    # -- token helpers -----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(f"expected {what}")
        return self.advance()

    def fail(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        seen = "end of input" if tok.kind == "END" else repr(tok.text)
        raise RIParseError(f"syntax error: {message}, found {seen}", tok.offset, self.line)

    # -- grammar -----------------------------------------------------------

    def statement(self) -> RIStatement:
        lhs = self.side()
        self.expect("GE", "'>='")
        rhs = self.side()
        self.expect("END", "end of statement")
        return RIStatement(lhs, rhs)

    def side(self) -> Tuple[Term, ...]:
        tok = self.peek()
        if tok.kind == "NUMBER" and tok.value == 0 and self.peek(1).kind in ("GE", "END"):
            self.advance()
            return ()
        terms = [self.term()]
        while self.peek().kind == "PLUS":
            self.advance()
            terms.append(self.term())
        return tuple(terms)

    def term(self) -> Term:
        if self.peek().kind == "RESOURCE":
            return Term(ONE, self.advance().value)
        coeff = self.product()
        resource = self.expect("RESOURCE", "a resource such as [qq] or <N>")
        return Term(coeff, resource.value)

    def expr(self) -> Expr:
        node = self.product()
        while self.peek().kind in ("PLUS", "MINUS"):
            op = "+" if self.advance().kind == "PLUS" else "-"
            node = BinOp(op, node, self.product())
        return node

    def product(self) -> Expr:
        node = self.unary()
        while True:
            kind = self.peek().kind
            if kind == "STAR":
                self.advance()
                node = BinOp("*", node, self.atom())
            elif kind in _ATOM_START:
                node = BinOp("*", node, self.atom())
            else:
                return node

    def unary(self) -> Expr:
        if self.peek().kind == "MINUS":
            self.advance()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.advance()
            return Const(tok.value)
        if tok.kind == "INF" or (tok.kind == "IDENT" and tok.text == "inf"):
            self.advance()
            return Infinity()
        if tok.kind == "LPAREN":
            self.advance()
            node = self.expr()
            self.expect("RPAREN", "')'")
            return node
        if tok.kind == "IDENT" and self.peek(1).kind == "LPAREN":
            if tok.text in ("H", "I"):
                return self.entropic()
            return self.symbol()
        self.fail("expected a coefficient")

    def entropic(self) -> Entropic:
        name = self.advance().text
        self.advance()  # '('
        groups = [self.systems()]
        if name == "I":
            self.expect("SEMI", "';'")
            groups.append(self.systems())
        conditional = False
        if self.peek().kind == "PIPE":
            self.advance()
            groups.append(self.systems())
            conditional = True
        self.expect("RPAREN", "')'")
        tag = self.advance().value if self.peek().kind == "TAG" else None
        if name == "H":
            kind = EntropyKind.H_COND if conditional else EntropyKind.H
        else:
            kind = EntropyKind.I_COND if conditional else EntropyKind.I
        return Entropic(kind, tuple(groups), tag)

    def systems(self) -> Tuple[str, ...]:
        labels: List[str] = []
        while True:
            tok = self.peek()
            if tok.kind != "IDENT":
                if not labels:
                    self.fail("expected system labels")
                break
            if "".join(_LABEL_RE.findall(tok.text)) != tok.text:
                self.fail("system labels must start with a capital letter")
            labels.extend(_LABEL_RE.findall(tok.text))
            self.advance()
            if self.peek().kind == "COMMA":
                self.advance()
        if len(set(labels)) != len(labels):
            self.fail("repeated system label")
        return tuple(labels)

    def symbol(self) -> Symbol:
        name = self.advance().text
        self.advance()  # '('
        args = [self.expect("IDENT", "an argument name").text]
        while self.peek().kind == "COMMA":
            self.advance()
            args.append(self.expect("IDENT", "an argument name").text)
        self.expect("RPAREN", "')'")
        return Symbol(name, tuple(args))


def parse(text: str, line: Optional[int] = None) -> RIStatement:
    return _Parser(text, line).statement()


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    node = p.expr()
    p.expect("END", "end of expression")
    return node


def parse_file(path: Union[str, Path]) -> List[RIStatement]:
    """One statement per line; '#' starts a comment, blank lines are skipped."""
    statements = []
    with open(path, "r", encoding="utf-8") as handle:
        for number, raw in enumerate(handle, start=1):
            body = raw.split("#", 1)[0]
            if body.strip():
                statements.append(parse(body.rstrip("\n"), line=number))
    return statements


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return 1 if node.op in "+-" else 2
    if isinstance(node, Neg):
        return 3
    return 4


def expr_to_text(node: Expr, min_prec: int = 0) -> str:
    if isinstance(node, Const):
        text = str(node.value)
    elif isinstance(node, Infinity):
        text = "inf"
    elif isinstance(node, Symbol):
        text = f"{node.name}({','.join(node.args)})"
    elif isinstance(node, Entropic):
        parts = ["".join(s) for s in node.systems]
        if node.quantity is EntropyKind.H:
            text = f"H({parts[0]})"
        elif node.quantity is EntropyKind.H_COND:
            text = f"H({parts[0]}|{parts[1]})"
        elif node.quantity is EntropyKind.I:
            text = f"I({parts[0]};{parts[1]})"
        else:
            text = f"I({parts[0]};{parts[1]}|{parts[2]})"
        if node.tag:
            text += f"_{node.tag}"
    elif isinstance(node, Neg):
        text = "-" + expr_to_text(node.operand, 3)
    elif node.op == "*":
        text = f"{expr_to_text(node.left, 2)} {expr_to_text(node.right, 4)}"
    else:
        text = f"{expr_to_text(node.left, 1)} {node.op} {expr_to_text(node.right, 2)}"
    return f"({text})" if _prec(node) < min_prec else text


def term_to_text(term: Term) -> str:
    if term.coeff == ONE:
        return term.resource.key
    return f"{expr_to_text(term.coeff, 2)} {term.resource.key}"


def to_text(ri: RIStatement) -> str:
    def side(terms: Tuple[Term, ...]) -> str:
        return " + ".join(term_to_text(t) for t in terms) if terms else "0"

    return f"{side(ri.lhs)} >= {side(ri.rhs)}"
