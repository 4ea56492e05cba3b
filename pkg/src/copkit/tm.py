"""Deterministic single-tape Turing machines with mandatory step budgets.

Machines are loaded from a small line-oriented text format::

    # comment
    states: q0 q1 qa
    input: a b
    tape: a b X _
    blank: _
    start: q0
    accept: qa
    reject: qr          # optional
    q0 a -> q1 X R      # state symbol -> state symbol move

Moves are ``L``, ``R`` or ``S``. The tape is unbounded in both
directions. A configuration with no applicable transition halts and
rejects, so a decider does not need an explicit reject sweep.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Mapping, Sequence

__all__ = [
    "TmFormatError",
    "TmSyntaxError",
    "TmSemanticError",
    "TmInputError",
    "Verdict",
    "TmSpec",
    "TmOutcome",
    "TmRun",
    "parse_tm",
    "load_tm",
    "run_tm",
    "enumerate_words",
    "iter_words",
    "word_at",
]

MOVES = {"L": -1, "R": 1, "S": 0}
HEADER_KEYS = ("states", "input", "tape", "blank", "start", "accept", "reject")
REQUIRED_KEYS = ("states", "input", "tape", "blank", "start", "accept")

_HEADER_RE = re.compile(r"^([a-z]+)\s*:\s*(.*)$")
_TRANS_RE = re.compile(r"^(\S+)\s+(\S)\s*->\s*(\S+)\s+(\S)\s+(\S+)$")


class TmFormatError(ValueError):
    """Base class for problems in a machine description."""


class TmSyntaxError(TmFormatError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class TmSemanticError(TmFormatError):
    pass


class TmInputError(ValueError):
    """A word contains a symbol outside the machine's input alphabet."""


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    BUDGET_EXHAUSTED = "budget_exhausted"


Transition = tuple[str, str, str]


@dataclass(frozen=True)
class TmSpec:
    states: frozenset[str]
    input_alphabet: frozenset[str]
    tape_alphabet: frozenset[str]
    blank: str
    transitions: Mapping[tuple[str, str], Transition]
    start: str
    accept: str
    reject: str | None = None

    def __post_init__(self) -> None:
        _validate(self)

    def check_word(self, word: str) -> None:
        bad = sorted(set(word) - self.input_alphabet)
        if bad:
            raise TmInputError(f"symbols not in input alphabet: {''.join(bad)!r}")


def _validate(spec: TmSpec) -> None:
    for name, state in (("start", spec.start), ("accept", spec.accept), ("reject", spec.reject)):
        if state is not None and state not in spec.states:
            raise TmSemanticError(f"{name} state {state!r} is not declared")
    if spec.reject is not None and spec.reject == spec.accept:
        raise TmSemanticError("accept and reject states must differ")
    for sym in spec.tape_alphabet:
        if len(sym) != 1:
            raise TmSemanticError(f"symbol {sym!r} is not a single character")
    if spec.blank not in spec.tape_alphabet:
        raise TmSemanticError(f"blank {spec.blank!r} is not in the tape alphabet")
    if spec.blank in spec.input_alphabet:
        raise TmSemanticError("blank must not be an input symbol")
    missing = spec.input_alphabet - spec.tape_alphabet
    if missing:
        raise TmSemanticError(f"input symbols missing from tape alphabet: {sorted(missing)}")
    halting = {spec.accept, spec.reject}
    for (src, sym), (dst, out, move) in spec.transitions.items():
        for state in (src, dst):
            if state not in spec.states:
                raise TmSemanticError(f"transition uses undeclared state {state!r}")
        for s in (sym, out):
            if s not in spec.tape_alphabet:
                raise TmSemanticError(f"transition uses symbol {s!r} outside the tape alphabet")
        if move not in MOVES:
            raise TmSemanticError(f"bad move {move!r}")
        if src in halting:
            raise TmSemanticError(f"halting state {src!r} has an outgoing transition")


def parse_tm(text: str) -> TmSpec:
    headers: dict[str, list[str]] = {}
    transitions: dict[tuple[str, str], Transition] = {}
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            m = _TRANS_RE.match(line)
            if m is None:
                raise TmSyntaxError(f"malformed transition {line!r}", lineno)
            src, sym, dst, out, move = m.groups()
            if move not in MOVES:
                raise TmSyntaxError(f"move must be one of L, R, S, got {move!r}", lineno)
            if (src, sym) in transitions:
                raise TmSemanticError(f"line {lineno}: duplicate transition for ({src}, {sym})")
            transitions[(src, sym)] = (dst, out, move)
            continue
        m = _HEADER_RE.match(line)
        if m is None or m.group(1) not in HEADER_KEYS:
            raise TmSyntaxError(f"unrecognised line {line!r}", lineno)
        key, value = m.group(1), m.group(2).split()
        if key in headers:
            raise TmSyntaxError(f"duplicate header {key!r}", lineno)
        if not value:
            raise TmSyntaxError(f"header {key!r} has no value", lineno)
        if key in ("blank", "start", "accept", "reject") and len(value) != 1:
            raise TmSyntaxError(f"header {key!r} takes exactly one value", lineno)
        headers[key] = value

    missing = [k for k in REQUIRED_KEYS if k not in headers]
    if missing:
        raise TmSyntaxError(f"missing header(s): {', '.join(missing)}", lineno)

    return TmSpec(
        states=frozenset(headers["states"]),
        input_alphabet=frozenset(headers["input"]),
        tape_alphabet=frozenset(headers["tape"]),
        blank=headers["blank"][0],
        transitions=transitions,
        start=headers["start"][0],
        accept=headers["accept"][0],
        reject=headers.get("reject", [None])[0],
    )


def load_tm(path: str | Path) -> TmSpec:
    return parse_tm(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class TmOutcome:
    verdict: Verdict
    steps_used: int


class TmRun:
    """A single machine execution that can be advanced one step at a time.

    Used directly by the dovetailing enumerator, which has to interleave
    many runs fairly; :func:`run_tm` is the budgeted wrapper.
    """

    __slots__ = ("spec", "state", "head", "tape", "steps", "verdict")

    def __init__(self, spec: TmSpec, word: str):
        spec.check_word(word)
        self.spec = spec
        self.state = spec.start
        self.head = 0
        self.tape: dict[int, str] = dict(enumerate(word))
        self.steps = 0
        self.verdict: Verdict | None = None
        self._check_halt()

    def _check_halt(self) -> None:
        spec = self.spec
        if self.state == spec.accept:
            self.verdict = Verdict.YES
        elif self.state == spec.reject:
            self.verdict = Verdict.NO
        elif (self.state, self.tape.get(self.head, spec.blank)) not in spec.transitions:
            self.verdict = Verdict.NO

    def step(self) -> Verdict | None:
        """Apply one transition; return the verdict once halted."""
        if self.verdict is not None:
            return self.verdict
        spec = self.spec
        dst, out, move = spec.transitions[(self.state, self.tape.get(self.head, spec.blank))]
        self.tape[self.head] = out
        self.head += MOVES[move]
        self.state = dst
        self.steps += 1
        self._check_halt()
        return self.verdict


def run_tm(spec: TmSpec, word: str, budget: int) -> TmOutcome:
    if budget < 1:
        raise ValueError("budget must be a positive integer")
    run = TmRun(spec, word)
    while run.verdict is None and run.steps < budget:
        run.step()
    if run.verdict is None:
        return TmOutcome(Verdict.BUDGET_EXHAUSTED, run.steps)
    return TmOutcome(run.verdict, run.steps)


def _check_alphabet(alphabet: Sequence[str]) -> None:
    if not alphabet:
        raise ValueError("alphabet must be nonempty")
    if len(set(alphabet)) != len(alphabet):
        raise ValueError("alphabet symbols must be distinct")


def word_at(alphabet: Sequence[str], index: int) -> str:
    """The word at position ``index`` of the length-then-lexicographic order."""
    _check_alphabet(alphabet)
    if index < 0:
        raise ValueError("index must be nonnegative")
    k = len(alphabet)
    if k == 1:
        return alphabet[0] * index
    length, block = 0, 1
    while index >= block:
        index -= block
        length += 1
        block *= k
    digits = []
    for _ in range(length):
        index, d = divmod(index, k)
        digits.append(alphabet[d])
    return "".join(reversed(digits))


def iter_words(alphabet: Sequence[str], start_index: int = 0) -> Iterator[str]:
    """Endless canonical enumeration beginning at ``start_index``."""
    _check_alphabet(alphabet)
    first = word_at(alphabet, start_index)
    length = len(first)
    started = False
    while True:
        for combo in itertools.product(alphabet, repeat=length):
            word = "".join(combo)
            if not started:
                if word != first:
                    continue
                started = True
            yield word
        length += 1


def enumerate_words(alphabet: Sequence[str], start_index: int, count: int) -> list[str]:
    if count < 1:
        raise ValueError("count must be positive")
    return list(itertools.islice(iter_words(alphabet, start_index), count))
