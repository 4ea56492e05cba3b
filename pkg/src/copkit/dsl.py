"""Agent language: declare predicted inputs and the predictors feeding them.

Grammar (whitespace-insensitive, ``//`` line comments)::

    program   := "conscious" "agent" IDENT "{" item* "}"
    item      := "predicted" "int" IDENT ";"
               | "bind" IDENT "->" pexpr ("when" "tick" "<" INT)? ";"
               | "behavior" IDENT ";"
    pexpr     := "simple_past" "(" ")" | "ar" "(" INT ")"
               | "kalman" "(" REAL "," REAL ")"

Bindings for one input form a schedule: guarded bindings apply while
``tick < bound`` in order, and a single unguarded binding comes last.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from typing import Callable

from .predict import AR, Kalman, Predictor, Rule, Schedule, SimplePast
from .sim import GameConfig, GameResult, Intuitive, run_game

__all__ = [
    "DslError",
    "DslSyntaxError",
    "DslSemanticError",
    "PredictorSpec",
    "Binding",
    "Program",
    "BEHAVIORS",
    "parse_dsl",
    "pretty_print",
    "bind_agent",
    "run_dsl_game",
]

KEYWORDS = {"conscious", "agent", "predicted", "int", "bind", "when", "tick", "behavior"}
PREDICTOR_ARITY = {"simple_past": 0, "ar": 1, "kalman": 2}

# Behaviours map a schedule to a sim strategy. ``chase`` steps one row
# toward the predicted ball row each tick.
BEHAVIORS: dict[str, Callable[[Schedule], Intuitive]] = {"chase": Intuitive}


class DslError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class DslSyntaxError(DslError):
    pass


class DslSemanticError(DslError):
    pass


@dataclass(frozen=True)
class PredictorSpec:
    kind: str
    args: tuple[float, ...] = ()

    def build(self) -> Predictor:
        if self.kind == "simple_past":
            return SimplePast()
        if self.kind == "ar":
            return AR(int(self.args[0]))
        if self.kind == "kalman":
            return Kalman(*self.args)
        raise ValueError(f"unknown predictor kind {self.kind!r}")


@dataclass(frozen=True)
class Binding:
    param: str
    predictor: PredictorSpec
    bound: int | None = None
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Program:
    agent_name: str
    predicted_params: tuple[str, ...]
    bindings: tuple[Binding, ...]
    behavior: str

    def schedule_for(self, param: str) -> Schedule:
        rules = [Rule(b.bound, b.predictor.build()) for b in self.bindings if b.param == param]
        return Schedule(tuple(rules))


# -- lexer ---------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*)
  | (?P<real>(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>->|[{}();,<])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind, value = m.lastgroup, m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- parser --------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, expected: str) -> DslSyntaxError:
        tok = self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return DslSyntaxError(f"expected {expected}, found {found}", tok.line, tok.col)

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "eof":
            raise self.fail(repr(text))
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "ident" or self.tok.text in KEYWORDS:
            raise self.fail(what)
        return self.advance()

    def integer(self) -> Token:
        if self.tok.kind != "int":
            raise self.fail("integer")
        return self.advance()

    def number(self) -> Token:
        if self.tok.kind not in ("int", "real"):
            raise self.fail("number")
        return self.advance()

    def program(self):
        self.expect("conscious")
        self.expect("agent")
        name = self.ident("agent name")
        self.expect("{")
        items = []
        while self.tok.text != "}" or self.tok.kind == "eof":
            if self.tok.kind == "eof":
                raise self.fail("'}'")
            items.append(self.item())
        self.expect("}")
        if self.tok.kind != "eof":
            raise self.fail("end of input")
        return name, items

    def item(self):
        tok = self.tok
        if tok.text == "predicted" and tok.kind == "ident":
            self.advance()
            self.expect("int")
            name = self.ident("input name")
            self.expect(";")
            return ("predicted", name)
        if tok.text == "bind" and tok.kind == "ident":
            self.advance()
            name = self.ident("input name")
            self.expect("->")
            spec = self.pexpr()
            bound = None
            if self.tok.text == "when" and self.tok.kind == "ident":
                self.advance()
                self.expect("tick")
                self.expect("<")
                bound = int(self.integer().text)
            self.expect(";")
            return ("bind", name, spec, bound)
        if tok.text == "behavior" and tok.kind == "ident":
            self.advance()
            name = self.ident("behavior name")
            self.expect(";")
            return ("behavior", name)
        raise self.fail("'predicted', 'bind' or 'behavior'")

    def pexpr(self):
        kind = self.ident("predictor")
        self.expect("(")
        args = []
        if self.tok.text != ")":
            args.append(self.number())
            while self.tok.text == ",":
                self.advance()
                args.append(self.number())
        self.expect(")")
        return kind, args


def _predictor_spec(kind: Token, args: list[Token]) -> PredictorSpec:
    if kind.text not in PREDICTOR_ARITY:
        raise DslSemanticError(f"unknown predictor kind {kind.text!r}", kind.line, kind.col)
    if len(args) != PREDICTOR_ARITY[kind.text]:
        raise DslSemanticError(
            f"{kind.text} takes {PREDICTOR_ARITY[kind.text]} argument(s), got {len(args)}", kind.line, kind.col
        )
    if kind.text == "ar":
        if args[0].kind != "int" or int(args[0].text) < 1:
            raise DslSemanticError("ar order must be a positive integer", args[0].line, args[0].col)
        return PredictorSpec("ar", (int(args[0].text),))
    if kind.text == "kalman":
        values = tuple(float(a.text) for a in args)
        for a, v in zip(args, values):
            if not (v > 0 and math.isfinite(v)):
                raise DslSemanticError("kalman noise parameters must be positive", a.line, a.col)
        return PredictorSpec("kalman", values)
    return PredictorSpec("simple_past")


def parse_dsl(text: str | bytes, behaviors: dict | None = BEHAVIORS) -> Program:
    """Parse and validate a program.

    ``behaviors`` is the registry used to check the behaviour name; pass
    ``None`` to skip that check (binding will still enforce it).
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            prefix = bytes(text)[: exc.start].decode("utf-8")
            line = prefix.count("\n") + 1
            col = len(prefix) - (prefix.rfind("\n") + 1) + 1
            raise DslSyntaxError("input is not valid UTF-8", line, col) from None

    parser = _Parser(_tokenize(text))
    name_tok, items = parser.program()

    params: dict[str, Token] = {}
    bindings: list[Binding] = []
    behavior: Token | None = None
    for item in items:
        if item[0] == "predicted":
            tok = item[1]
            if tok.text in params:
                raise DslSemanticError(f"input {tok.text!r} declared twice", tok.line, tok.col)
            params[tok.text] = tok
        elif item[0] == "bind":
            tok, (kind, args), bound = item[1], item[2], item[3]
            bindings.append(Binding(tok.text, _predictor_spec(kind, args), bound, (tok.line, tok.col)))
        else:
            tok = item[1]
            if behavior is not None:
                raise DslSemanticError("behavior declared more than once", tok.line, tok.col)
            behavior = tok

    end = parser.tokens[-1]
    if behavior is None:
        raise DslSemanticError("no behavior declared", end.line, end.col)
    if behaviors is not None and behavior.text not in behaviors:
        raise DslSemanticError(f"unknown behavior {behavior.text!r}", behavior.line, behavior.col)

    for b in bindings:
        if b.param not in params:
            raise DslSemanticError(f"binding to undeclared input {b.param!r}", *b.pos)
    for param, tok in params.items():
        mine = [b for b in bindings if b.param == param]
        if not mine:
            raise DslSemanticError(f"input {param!r} has no binding", tok.line, tok.col)
        unguarded = [b for b in mine if b.bound is None]
        if len(unguarded) != 1:
            where = unguarded[1].pos if len(unguarded) > 1 else (tok.line, tok.col)
            raise DslSemanticError(f"input {param!r} needs exactly one unguarded binding", *where)
        if mine[-1].bound is not None:
            raise DslSemanticError(f"unguarded binding for {param!r} must come last", *unguarded[0].pos)
        guards = [b for b in mine if b.bound is not None]
        for prev, cur in zip(guards, guards[1:]):
            if cur.bound <= prev.bound:
                raise DslSemanticError(f"guards for {param!r} must be strictly increasing", *cur.pos)

    return Program(name_tok.text, tuple(params), tuple(bindings), behavior.text)


def _format_arg(v: float) -> str:
    return str(int(v)) if isinstance(v, int) else repr(float(v))


def pretty_print(program: Program) -> str:
    lines = [f"conscious agent {program.agent_name} {{"]
    lines += [f"  predicted int {p};" for p in program.predicted_params]
    for b in program.bindings:
        args = ", ".join(_format_arg(a) for a in b.predictor.args)
        guard = f" when tick < {b.bound}" if b.bound is not None else ""
        lines.append(f"  bind {b.param} -> {b.predictor.kind}({args}){guard};")
    lines.append(f"  behavior {program.behavior};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def bind_agent(program: Program, behaviors: dict = BEHAVIORS) -> Intuitive:
    """Turn a program into the intuitive strategy the game runs."""
    if program.behavior not in behaviors:
        raise ValueError(f"behavior {program.behavior!r} is not registered (known: {sorted(behaviors)})")
    if len(program.predicted_params) != 1:
        raise ValueError("the game feeds exactly one predicted input (the ball row)")
    return behaviors[program.behavior](program.schedule_for(program.predicted_params[0]))


def run_dsl_game(program: Program, base: GameConfig, trace: bool = False) -> GameResult:
    return run_game(replace(base, strategy_p=bind_agent(program)), trace=trace)
