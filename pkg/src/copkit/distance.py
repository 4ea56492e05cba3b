"""Computable stand-ins for the similarity distance ``d(x, y)``.

Two oracle kinds are provided:

* :class:`NcdOracle` computes the normalized compression distance with a
  real compressor.
* :class:`TableOracle` looks distances up in a fixed table of ordered
  pairs, falling back to a default. It reproduces externally measured
  values exactly, independent of any compressor.

Distances are directional: ``d(x, y)`` and ``d(y, x)`` may differ.
"""

from __future__ import annotations

import bz2
import lzma
import math
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Union

__all__ = [
    "Compressor",
    "COMPRESSORS",
    "DEFAULT_COMPRESSOR",
    "get_compressor",
    "ncd",
    "NcdOracle",
    "TableOracle",
    "DistanceOracle",
    "parse_table",
    "load_table",
    "oracle_distance",
    "is_similar",
]

Word = Union[str, bytes]


@dataclass(frozen=True)
class Compressor:
    name: str
    compress_size: Callable[[bytes], int] = field(compare=False)


def _deflate_size(data: bytes) -> int:
    # raw deflate stream, no zlib header or checksum
    c = zlib.compressobj(9, zlib.DEFLATED, -15)
    return len(c.compress(data) + c.flush())


COMPRESSORS: dict[str, Compressor] = {
    "bz2": Compressor("bz2", lambda b: len(bz2.compress(b, 9))),
    "deflate": Compressor("deflate", _deflate_size),
    "zlib": Compressor("zlib", lambda b: len(zlib.compress(b, 9))),
    "lzma": Compressor("lzma", lambda b: len(lzma.compress(b, preset=9))),
}
DEFAULT_COMPRESSOR = COMPRESSORS["bz2"]


def get_compressor(name: str) -> Compressor:
    try:
        return COMPRESSORS[name]
    except KeyError:
        raise ValueError(f"unknown compressor {name!r}; choose from {sorted(COMPRESSORS)}") from None


def _as_bytes(word: Word) -> bytes:
    return word.encode("utf-8") if isinstance(word, str) else bytes(word)


def ncd(compressor: Compressor, x: Word, y: Word) -> float:
    """(C(xy) - min(C(x), C(y))) / max(C(x), C(y)), evaluated as written."""
    bx, by = _as_bytes(x), _as_bytes(y)
    if not bx and not by:
        raise ValueError("ncd is undefined for two empty inputs")
    cx = compressor.compress_size(bx)
    cy = compressor.compress_size(by)
    denom = max(cx, cy)
    if denom <= 0:
        raise ValueError(f"compressor {compressor.name!r} reported a zero size")
    return (compressor.compress_size(bx + by) - min(cx, cy)) / denom


@dataclass(frozen=True)
class NcdOracle:
    compressor: Compressor = DEFAULT_COMPRESSOR

    def distance(self, x: Word, y: Word) -> float:
        return ncd(self.compressor, x, y)


@dataclass(frozen=True)
class TableOracle:
    entries: Mapping[tuple[bytes, bytes], float]
    default: float = 1.0

    def __post_init__(self) -> None:
        if not (self.default >= 0 and math.isfinite(self.default)):
            raise ValueError("table default must be a finite nonnegative real")
        for pair, value in self.entries.items():
            if not value >= 0:
                raise ValueError(f"negative distance for {pair!r}")

    @classmethod
    def from_pairs(cls, pairs: Mapping[tuple[Word, Word], float], default: float = 1.0) -> "TableOracle":
        return cls({(_as_bytes(x), _as_bytes(y)): float(v) for (x, y), v in pairs.items()}, default)

    def distance(self, x: Word, y: Word) -> float:
        return self.entries.get((_as_bytes(x), _as_bytes(y)), self.default)


DistanceOracle = Union[NcdOracle, TableOracle]


def parse_table(text: str) -> TableOracle:
    """Parse ``default: <real>`` plus ``x<TAB>y<TAB>distance`` lines."""
    default = None
    entries: dict[tuple[bytes, bytes], float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if line.startswith("default:"):
            if default is not None:
                raise ValueError(f"line {lineno}: duplicate default header")
            default = float(line.split(":", 1)[1])
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected x<TAB>y<TAB>distance")
        x, y, value = parts
        key = (_as_bytes(x), _as_bytes(y))
        if key in entries:
            raise ValueError(f"line {lineno}: duplicate pair ({x}, {y})")
        try:
            entries[key] = float(value)
        except ValueError:
            raise ValueError(f"line {lineno}: bad distance {value!r}") from None
    if default is None:
        raise ValueError("missing 'default: <real>' header")
    return TableOracle(entries, default)


def load_table(path: str | Path) -> TableOracle:
    return parse_table(Path(path).read_text(encoding="utf-8"))


def oracle_distance(oracle: DistanceOracle, x: Word, y: Word) -> float:
    return oracle.distance(x, y)


def is_similar(oracle: DistanceOracle, p: float, x: Word, y: Word) -> bool:
    """Strict test ``d(x, y) < p``; equality is *not* similar."""
    if not p > 0:
        raise ValueError("threshold p must be positive")
    return oracle.distance(x, y) < p
