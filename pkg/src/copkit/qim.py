"""Quasi-intuitive acceptance over a base Turing machine.

A quasi-intuitive machine ``Q[x, p]`` accepts a word ``y`` when the base
machine ``T`` accepts it, or when ``y`` lies strictly within distance
``p`` of an already-accepted word ``x``. Everything else in this module
is built on that single disjunction:

* chains of acceptances (:func:`qil_check`),
* the similar-words decider (:func:`sw_decide`), which always halts,
* budgeted searches for a similar member of a language
  (:func:`sl_search`, :func:`qilt_member`), which may only report
  ``unknown`` when they run out of budget,
* self-similar sets grown from a seed word (:func:`self_similar_run`),
  whose acceptance bits form a consciousness indicator sequence.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Iterator, Sequence

from .distance import DistanceOracle, is_similar
from .tm import TmRun, TmSpec, Verdict, iter_words, run_tm

__all__ = [
    "Decision",
    "QimConfig",
    "QilInstance",
    "SelfSimilarState",
    "TraceRow",
    "SearchResult",
    "BudgetExhaustedError",
    "SeedRejectedError",
    "DeciderContractError",
    "BY_MACHINE",
    "qim_accept",
    "qil_check",
    "sw_decide",
    "self_similar_step",
    "self_similar_run",
    "format_trace",
    "generated",
    "canonical",
    "dovetail",
    "sl_search",
    "qilt_member",
]

# Witness marker for words accepted by the base machine itself.
BY_MACHINE = "T"


class Decision(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


_FROM_VERDICT = {
    Verdict.YES: Decision.YES,
    Verdict.NO: Decision.NO,
    Verdict.BUDGET_EXHAUSTED: Decision.UNKNOWN,
}


class BudgetExhaustedError(RuntimeError):
    pass


class SeedRejectedError(ValueError):
    pass


class DeciderContractError(RuntimeError):
    pass


@dataclass(frozen=True)
class QimConfig:
    machine: TmSpec
    p: float
    oracle: DistanceOracle
    tm_budget: int = 1_000_000

    def __post_init__(self) -> None:
        if not self.p > 0:
            raise ValueError("threshold p must be positive")
        if self.tm_budget < 1:
            raise ValueError("tm_budget must be >= 1")

    def machine_decision(self, word: str) -> Decision:
        return _FROM_VERDICT[run_tm(self.machine, word, self.tm_budget).verdict]


def qim_accept(config: QimConfig, x: str, y: str) -> Decision:
    """Q[x, p](T, y): yes if T accepts y or d(x, y) < p.

    ``x`` is assumed to have been accepted earlier by T or Q; that is the
    caller's responsibility and is not checked.
    """
    by_machine = config.machine_decision(y)
    if by_machine is Decision.YES or is_similar(config.oracle, config.p, x, y):
        return Decision.YES
    return by_machine


@dataclass(frozen=True)
class QilInstance:
    chain: tuple[str, ...]
    query: str
    machine: TmSpec
    p: float

    def __post_init__(self) -> None:
        if not self.chain:
            raise ValueError("chain must contain at least one word")
        object.__setattr__(self, "chain", tuple(self.chain))


def qil_check(instance: QilInstance, oracle: DistanceOracle, tm_budget: int) -> Decision:
    """Validate a whole acceptance chain x1 -> x2 -> ... -> xn -> query."""
    config = QimConfig(instance.machine, instance.p, oracle, tm_budget)
    head = config.machine_decision(instance.chain[0])
    if head is Decision.NO:
        return Decision.NO
    outcome = head
    words = instance.chain + (instance.query,)
    for prev, cur in zip(words, words[1:]):
        link = qim_accept(config, prev, cur)
        if link is Decision.NO:
            return Decision.NO
        if link is Decision.UNKNOWN:
            outcome = Decision.UNKNOWN
    return outcome


def sw_decide(decider: TmSpec, p: float, oracle: DistanceOracle, x: str, y: str, tm_budget: int) -> bool:
    """Membership of the pair (x, y) in the similar-words language.

    Total as long as ``decider`` halts on ``x`` within ``tm_budget``.
    """
    outcome = run_tm(decider, x, tm_budget)
    if outcome.verdict is Verdict.BUDGET_EXHAUSTED:
        raise DeciderContractError(f"decider did not halt on {x!r} within {tm_budget} steps")
    return outcome.verdict is Verdict.YES and is_similar(oracle, p, x, y)


# -- self-similar sets -------------------------------------------------------


@dataclass(frozen=True)
class SelfSimilarState:
    config: QimConfig
    accepted: tuple[str, ...]
    seed: str
    step: int = 1
    cis: tuple[int, ...] = ()

    @classmethod
    def start(cls, config: QimConfig, seed: str) -> "SelfSimilarState":
        verdict = run_tm(config.machine, seed, config.tm_budget).verdict
        if verdict is not Verdict.YES:
            raise SeedRejectedError(f"seed not in L(T): {seed!r} ({verdict.value})")
        return cls(config, (seed,), seed)


def _admission_witness(state: SelfSimilarState, r: str) -> str | None:
    config = state.config
    verdict = run_tm(config.machine, r, config.tm_budget).verdict
    if verdict is Verdict.BUDGET_EXHAUSTED:
        raise BudgetExhaustedError(f"machine exhausted {config.tm_budget} steps on {r!r}")
    if verdict is Verdict.YES:
        return BY_MACHINE
    for x in state.accepted:
        if is_similar(config.oracle, config.p, x, r):
            return x
    return None


def _advance(state: SelfSimilarState, r: str) -> tuple[SelfSimilarState, int, str | None]:
    witness = _admission_witness(state, r)
    bit = int(witness is not None)
    accepted = state.accepted
    if bit and r not in accepted:
        accepted = accepted + (r,)
    new = replace(state, accepted=accepted, step=state.step + 1, cis=state.cis + (bit,))
    return new, bit, witness


def self_similar_step(state: SelfSimilarState, r: str) -> tuple[SelfSimilarState, int]:
    new, bit, _ = _advance(state, r)
    return new, bit


@dataclass(frozen=True)
class TraceRow:
    index: int
    word: str
    bit: int
    accepted: tuple[str, ...]
    witness: str | None


def self_similar_run(config: QimConfig, s: str, rs: Iterable[str]) -> list[TraceRow]:
    state = SelfSimilarState.start(config, s)
    trace = []
    for r in rs:
        i = state.step
        state, bit, witness = _advance(state, r)
        trace.append(TraceRow(i, r, bit, state.accepted, witness))
    return trace


def format_trace(trace: Sequence[TraceRow]) -> str:
    """Tab-separated ``i, r_i, c_i, |I_{i+1}|, witness`` lines; ``-`` when rejected."""
    lines = [
        f"{row.index}\t{row.word}\t{row.bit}\t{len(row.accepted)}\t{row.witness if row.witness is not None else '-'}"
        for row in trace
    ]
    return "".join(line + "\n" for line in lines)


# -- bounded similar-language search ------------------------------------------


def generated(fn: Callable[[int], str], start: int = 1) -> Iterator[str]:
    """Members produced directly by a generator ``n -> word``."""
    for n in itertools.count(start):
        yield fn(n)


def canonical(alphabet: Sequence[str]) -> Iterator[str]:
    """All words in canonical order; pair with a membership test."""
    return iter_words(alphabet)


def dovetail(spec: TmSpec, alphabet: Sequence[str] | None = None) -> Iterator[str | None]:
    """Members of L(spec) found by interleaving runs on all words.

    At diagonal ``k`` the run for the ``k``-th canonical word is started,
    then every live run is advanced by one step. Each yielded item is one
    unit of work: the word itself when its run accepts, ``None`` otherwise.
    """
    words = iter_words(sorted(spec.input_alphabet) if alphabet is None else list(alphabet))
    live: list[tuple[str, TmRun]] = []
    for word in words:
        run = TmRun(spec, word)
        if run.verdict is None:
            live.append((word, run))
            yield None
        else:
            yield word if run.verdict is Verdict.YES else None
        still = []
        for w, r in live:
            verdict = r.step()
            if verdict is None:
                still.append((w, r))
                yield None
            else:
                yield w if verdict is Verdict.YES else None
        live = still


@dataclass(frozen=True)
class SearchResult:
    witness: str | None
    index: int | None
    units: int

    @property
    def found(self) -> bool:
        return self.witness is not None


def sl_search(
    enumerator: Iterable[str | None],
    membership: Callable[[str], Decision] | None,
    p: float,
    oracle: DistanceOracle,
    y: str,
    search_budget: int,
) -> SearchResult:
    """Look for a member ``x`` of E with ``d(x, y) < p``.

    Every item drawn from ``enumerator`` costs one unit of
    ``search_budget``. Items are confirmed members unless they are
    ``None`` or ``membership`` says otherwise. ``index`` counts confirmed
    members from 1.
    """
    if search_budget < 1:
        raise ValueError("search_budget must be positive")
    members = 0
    units = 0
    for item in itertools.islice(enumerator, search_budget):
        units += 1
        if item is None:
            continue
        if membership is not None and membership(item) is not Decision.YES:
            continue
        members += 1
        if is_similar(oracle, p, item, y):
            return SearchResult(item, members, units)
    return SearchResult(None, None, units)


def qilt_member(
    config: QimConfig,
    y: str,
    level: int,
    search_budget: int,
    generator: Callable[[int], str],
) -> Decision:
    """Membership of ``y`` in level ``level`` of the quasi-intuitive language.

    Level 1 is L(T) itself. Higher levels add words similar to some
    member of the level below, where candidate members come from
    ``generator`` and are confirmed recursively. Above level 1 a negative
    answer cannot be certified, so the result is ``yes`` or ``unknown``.
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    by_machine = config.machine_decision(y)
    if level == 1 or by_machine is Decision.YES:
        return by_machine

    def below(x: str) -> Decision:
        return qilt_member(config, x, level - 1, search_budget, generator)

    result = sl_search(generated(generator), below, config.p, config.oracle, y, search_budget)
    return Decision.YES if result.found else Decision.UNKNOWN
