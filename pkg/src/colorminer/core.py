"""Colored strings, their file formats, the uniqueness predicates and trace ingestion.

Positions exposed by this module are 1-based. Internally the text and colors
are stored as 0-based integer arrays.
"""
from __future__ import annotations

import csv
import io
import string
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

SENTINEL = "$"
MASK64 = (1 << 64) - 1

_SYMBOL_LETTERS = string.ascii_lowercase
# x, y, z first so the two- and three-color cases read like the usual examples
_COLOR_LETTERS = "xyz" + "wvutsrqponmlkjihgfedcba"


class ColoredStringError(ValueError):
    """Base class for malformed colored-string input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyInput(ColoredStringError):
    pass


class LengthMismatch(ColoredStringError):
    pass


class ReservedSymbol(ColoredStringError):
    pass


class ZeroAlphabet(ValueError):
    pass


class OutOfRange(IndexError):
    pass


class ArityMismatch(ValueError):
    pass


class ColorOutOfRange(ValueError):
    pass


def symbol_token(k: int) -> str:
    return _SYMBOL_LETTERS[k] if k < len(_SYMBOL_LETTERS) else str(k)


def color_token(k: int) -> str:
    return _COLOR_LETTERS[k] if k < len(_COLOR_LETTERS) else str(k)


def _frozen(values, dtype=np.int32) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ColoredString:
    """A string over symbol ids ``0..sigma-1`` whose positions carry color ids ``0..gamma-1``."""

    text: np.ndarray
    colors: np.ndarray
    sigma: int
    gamma: int
    symbol_names: tuple[str, ...] = ()
    color_names: tuple[str, ...] = ()

    def __post_init__(self):
        text = _frozen(self.text)
        colors = _frozen(self.colors)
        object.__setattr__(self, "text", text)
        object.__setattr__(self, "colors", colors)
        if text.ndim != 1 or len(text) == 0:
            raise EmptyInput("colored string must have length >= 1")
        if len(text) != len(colors):
            raise LengthMismatch(f"text has {len(text)} positions but colors has {len(colors)}")
        if self.sigma < 1 or self.gamma < 1:
            raise ZeroAlphabet("sigma and gamma must be positive")
        if text.min() < 0 or text.max() >= self.sigma:
            raise ValueError("symbol id out of range")
        if colors.min() < 0 or colors.max() >= self.gamma:
            raise ValueError("color id out of range")
        if not self.symbol_names:
            object.__setattr__(self, "symbol_names", tuple(symbol_token(k) for k in range(self.sigma)))
        if not self.color_names:
            object.__setattr__(self, "color_names", tuple(color_token(k) for k in range(self.gamma)))
        if len(self.symbol_names) != self.sigma or len(set(self.symbol_names)) != self.sigma:
            raise ValueError("symbol_names must be one distinct token per symbol id")
        if len(self.color_names) != self.gamma or len(set(self.color_names)) != self.gamma:
            raise ValueError("color_names must be one distinct token per color id")

    @property
    def n(self) -> int:
        return len(self.text)

    def __len__(self) -> int:
        return len(self.text)

    def __eq__(self, other):
        if not isinstance(other, ColoredString):
            return NotImplemented
        return (
            self.sigma == other.sigma
            and self.gamma == other.gamma
            and self.symbol_names == other.symbol_names
            and self.color_names == other.color_names
            and np.array_equal(self.text, other.text)
            and np.array_equal(self.colors, other.colors)
        )

    def __hash__(self):
        return hash((self.text.tobytes(), self.colors.tobytes(), self.symbol_names, self.color_names))

    def color_id(self, token: str) -> int:
        try:
            return self.color_names.index(token)
        except ValueError:
            raise ColorOutOfRange(f"unknown color {token!r}") from None

    def symbol_ids(self, tokens: Iterable[str]) -> tuple[int, ...]:
        index = {name: k for k, name in enumerate(self.symbol_names)}
        return tuple(index[t] for t in tokens)

    def tokens(self, pattern: Sequence[int]) -> tuple[str, ...]:
        return tuple(self.symbol_names[k] for k in pattern)

    def symbol_rank(self) -> np.ndarray:
        """Position of each symbol id when symbols are sorted by display token."""
        rank = np.empty(self.sigma, dtype=np.int64)
        rank[sorted(range(self.sigma), key=lambda k: self.symbol_names[k])] = np.arange(self.sigma)
        return rank

    def is_compact(self) -> bool:
        return all(len(t) == 1 for t in self.symbol_names + self.color_names)

    def format_pattern(self, pattern: Sequence[int], tokenized: bool | None = None) -> str:
        if tokenized is None:
            tokenized = not self.is_compact()
        sep = " " if tokenized else ""
        return sep.join(self.tokens(pattern))

    def render(self, tokenized: bool | None = None) -> str:
        """Serialize as the two-line file format."""
        if tokenized is None:
            tokenized = not self.is_compact()
        sep = " " if tokenized else ""
        line1 = sep.join(self.symbol_names[k] for k in self.text)
        line2 = sep.join(self.color_names[k] for k in self.colors)
        return f"{line1}\n{line2}\n"


@dataclass(frozen=True)
class ReportEntry:
    delay: int
    pattern: tuple[int, ...]
    occurrence_count: int = 1
    end_positions: tuple[int, ...] | None = field(default=None, compare=False)

    @property
    def key(self) -> tuple[tuple[int, ...], int]:
        return (self.pattern, self.delay)


def _assign_ids(tokens: Sequence[str]) -> tuple[list[int], tuple[str, ...]]:
    ids: dict[str, int] = {}
    out = []
    for tok in tokens:
        if tok not in ids:
            ids[tok] = len(ids)
        out.append(ids[tok])
    return out, tuple(ids)


def parse_colored(data: str | bytes, tokenized: bool = False) -> ColoredString:
    """Parse the two-line colored-string format.

    Compact mode reads one symbol per character; tokenized mode splits each
    line on whitespace. Ids are assigned by first appearance within a line.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = [(no, raw.strip()) for no, raw in enumerate(data.splitlines(), start=1)]
    lines = [(no, content) for no, content in lines if content]
    if not lines:
        raise EmptyInput("no content lines")
    if len(lines) != 2:
        raise ColoredStringError(
            f"expected exactly 2 content lines, found {len(lines)}", line=lines[min(2, len(lines) - 1)][0]
        )
    rows = []
    for no, content in lines:
        if SENTINEL in content:
            raise ReservedSymbol(f"reserved symbol {SENTINEL!r}", line=no)
        if tokenized:
            toks = content.split()
        else:
            if any(ch.isspace() for ch in content):
                raise ColoredStringError("whitespace inside a compact line (use tokenized mode)", line=no)
            toks = list(content)
        rows.append(toks)
    if len(rows[0]) != len(rows[1]):
        raise LengthMismatch(
            f"string has {len(rows[0])} symbols but colors has {len(rows[1])}", line=lines[1][0]
        )
    text, symbol_names = _assign_ids(rows[0])
    colors, color_names = _assign_ids(rows[1])
    return ColoredString(
        text=text,
        colors=colors,
        sigma=len(symbol_names),
        gamma=len(color_names),
        symbol_names=symbol_names,
        color_names=color_names,
    )


def from_strings(text: str, colors: str) -> ColoredString:
    """Convenience constructor for compact literals such as ``("acab", "xyxz")``."""
    return parse_colored(f"{text}\n{colors}\n")


def is_good_occurrence(cs: ColoredString, i: int, m: int, y: int, d: int) -> bool:
    n = cs.n
    if m < 1 or i < 1 or i + m - 1 > n or d < 0:
        raise OutOfRange(f"invalid occurrence i={i}, m={m}, d={d} for n={n}")
    pos = i + m - 1 + d
    return pos <= n and int(cs.colors[pos - 1]) == y


def occurrences(cs: ColoredString, pattern: Sequence[int]) -> list[int]:
    """1-based start positions of ``pattern`` in ``cs.text`` (naive scan)."""
    m = len(pattern)
    text = cs.text.tolist()
    pat = list(pattern)
    return [i + 1 for i in range(cs.n - m + 1) if text[i : i + m] == pat]


def is_unique(cs: ColoredString, pattern: Sequence[int], y: int, d: int) -> bool:
    """True iff every occurrence is (y, d)-good or checks a position past the end.

    Vacuously true when the pattern does not occur.
    """
    if len(pattern) == 0:
        raise ValueError("pattern must be nonempty")
    if d < 0:
        raise ValueError("delay must be non-negative")
    m = len(pattern)
    for i in occurrences(cs, pattern):
        if i + m - 1 + d <= cs.n and not is_good_occurrence(cs, i, m, y, d):
            return False
    return True


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)


def gen_random(n: int, sigma: int, gamma: int, seed: int) -> ColoredString:
    """Uniform random colored string; two draws per position, symbol first.

    Fixing (sigma, gamma, seed), shorter outputs are prefixes of longer ones.
    """
    if sigma < 1 or gamma < 1:
        raise ZeroAlphabet("sigma and gamma must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = SplitMix64(seed)
    text = np.empty(n, dtype=np.int32)
    colors = np.empty(n, dtype=np.int32)
    for j in range(n):
        text[j] = rng.next() % sigma
        colors[j] = rng.next() % gamma
    return ColoredString(text=text, colors=colors, sigma=sigma, gamma=gamma)


# --- simulation traces -------------------------------------------------------


@dataclass(frozen=True)
class TraceTable:
    rows: tuple[tuple[tuple, tuple], ...]
    input_names: tuple[str, ...] = ()
    output_names: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.rows:
            raise ValueError("trace has no rows")
        ia, oa = len(self.rows[0][0]), len(self.rows[0][1])
        for k, (ins, outs) in enumerate(self.rows, start=1):
            if len(ins) != ia or len(outs) != oa:
                raise ArityMismatch(f"row {k} has arity ({len(ins)}, {len(outs)}), expected ({ia}, {oa})")
        if not self.input_names:
            object.__setattr__(self, "input_names", tuple(f"i{k}" for k in range(1, ia + 1)))
        if not self.output_names:
            object.__setattr__(self, "output_names", tuple(f"o{k}" for k in range(1, oa + 1)))

    @property
    def input_arity(self) -> int:
        return len(self.rows[0][0])

    @property
    def output_arity(self) -> int:
        return len(self.rows[0][1])


@dataclass(frozen=True)
class TraceMapping:
    input_names: tuple[str, ...]
    output_names: tuple[str, ...]
    inputs: tuple[tuple[tuple, str], ...]
    outputs: tuple[tuple[tuple, str], ...]

    def render(self) -> str:
        out = io.StringIO()
        out.write("# input alphabet\n")
        out.write("\t".join(self.input_names + ("symbol",)) + "\n")
        for values, tok in self.inputs:
            out.write("\t".join([*map(str, values), tok]) + "\n")
        out.write("# output alphabet\n")
        out.write("\t".join(self.output_names + ("color",)) + "\n")
        for values, tok in self.outputs:
            out.write("\t".join([*map(str, values), tok]) + "\n")
        return out.getvalue()


def _value_key(v):
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


def _tuple_key(t):
    return tuple(_value_key(v) for v in t)


def ingest_trace(trace: TraceTable) -> tuple[ColoredString, TraceMapping]:
    """Map distinct input tuples to symbols and output tuples to colors, in sorted order."""
    ins = sorted({r[0] for r in trace.rows}, key=_tuple_key)
    outs = sorted({r[1] for r in trace.rows}, key=_tuple_key)
    in_id = {t: k for k, t in enumerate(ins)}
    out_id = {t: k for k, t in enumerate(outs)}
    symbol_names = tuple(symbol_token(k) for k in range(len(ins)))
    color_names = tuple(color_token(k) for k in range(len(outs)))
    cs = ColoredString(
        text=[in_id[r[0]] for r in trace.rows],
        colors=[out_id[r[1]] for r in trace.rows],
        sigma=len(ins),
        gamma=len(outs),
        symbol_names=symbol_names,
        color_names=color_names,
    )
    mapping = TraceMapping(
        input_names=trace.input_names,
        output_names=trace.output_names,
        inputs=tuple(zip(ins, symbol_names)),
        outputs=tuple(zip(outs, color_names)),
    )
    return cs, mapping


def _cell(value: str):
    value = value.strip()
    try:
        return int(value)
    except ValueError:
        return value


def read_trace_csv(data: str) -> TraceTable:
    """Parse a CSV trace: header row, ``i*`` input columns, ``o*`` output columns.

    A leading ``T`` column (the simulation instant) is ignored.
    """
    reader = csv.reader(io.StringIO(data))
    rows = [r for r in reader if any(c.strip() for c in r)]
    if not rows:
        raise ArityMismatch("empty trace file")
    header = [h.strip() for h in rows[0]]
    in_cols, out_cols = [], []
    for k, name in enumerate(header):
        if k == 0 and name.upper() == "T":
            continue
        if name.startswith("i"):
            in_cols.append(k)
        elif name.startswith("o"):
            out_cols.append(k)
        else:
            raise ArityMismatch(f"column {name!r} is neither an input (i*) nor an output (o*)")
    if not in_cols or not out_cols:
        raise ArityMismatch("trace needs at least one input and one output column")
    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ArityMismatch(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        records.append((tuple(_cell(row[k]) for k in in_cols), tuple(_cell(row[k]) for k in out_cols)))
    if not records:
        raise ArityMismatch("trace has a header but no rows")
    return TraceTable(
        rows=tuple(records),
        input_names=tuple(header[k] for k in in_cols),
        output_names=tuple(header[k] for k in out_cols),
    )
