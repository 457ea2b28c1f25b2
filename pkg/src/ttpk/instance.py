"""TTP distance instances: loading, generation, validation and summary sums.

Every distance is held exactly. Input values are read as rationals, brought
to a common denominator ``scale`` and stored as an ``int64`` matrix of
numerators, so costs and bounds downstream are integer sums divided by a
single known denominator.
"""
from __future__ import annotations

import io
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

import numpy as np

from .errors import DomainError, MetricError, ParseError

Number = Union[int, Fraction]

KINDS = ("unit", "circle", "euclidean-random")
FORMATS = ("plain", "tsplib-full-matrix")

# Side length of the integer grid used by the euclidean-random generator.
EUCLID_GRID = 1000

# Largest total any kernel may accumulate; keeps int64 sums exact.
_INT64_BUDGET = 2**62


def _exact(total: int, scale: int) -> Number:
    if scale == 1:
        return int(total)
    q = Fraction(int(total), scale)
    return q.numerator if q.denominator == 1 else q


def check_team_count(n: int) -> None:
    if n < 4 or n % 2:
        raise DomainError(f"team count must be even and at least 4, got {n}")


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric metric on ``n`` venues, stored as ``scaled / scale``."""

    scaled: np.ndarray
    scale: int = 1

    def __post_init__(self):
        arr = np.array(self.scaled, dtype=np.int64, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "scaled", arr)
        _validate(arr)

    @classmethod
    def from_values(cls, rows: Sequence[Sequence[object]]) -> "DistanceMatrix":
        """Build from any exact-convertible numbers (int, Fraction, decimal str, float)."""
        try:
            fracs = [[Fraction(v) for v in row] for row in rows]
        except (TypeError, ValueError) as exc:
            raise DomainError(f"non-numeric distance: {exc}") from None
        n = len(fracs)
        if any(len(row) != n for row in fracs):
            raise DomainError("distance matrix must be square")
        scale = 1
        for row in fracs:
            for v in row:
                scale = math.lcm(scale, v.denominator)
        ints = [[int(v * scale) for v in row] for row in fracs]
        peak = max((abs(v) for row in ints for v in row), default=0)
        if peak * max(n, 1) ** 2 * 8 >= _INT64_BUDGET:
            raise DomainError(
                "distances too large (or denominators too fine) for exact 64-bit accumulation"
            )
        return cls(np.array(ints, dtype=np.int64).reshape(n, n), scale)

    @property
    def n(self) -> int:
        return self.scaled.shape[0]

    def d(self, i: int, j: int) -> Number:
        """Distance between venues ``i`` and ``j`` (0-based)."""
        return _exact(self.scaled[i, j], self.scale)

    def value(self, scaled_total: int) -> Number:
        """Convert an accumulated numerator back to an exact distance."""
        return _exact(scaled_total, self.scale)

    def rows(self) -> list[list[Number]]:
        return [[self.d(i, j) for j in range(self.n)] for i in range(self.n)]

    def permuted(self, perm: Sequence[int]) -> "DistanceMatrix":
        """Relabel venues: new venue ``a`` is old venue ``perm[a]``."""
        p = np.asarray(perm)
        return DistanceMatrix(self.scaled[np.ix_(p, p)], self.scale)

    def __eq__(self, other):
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        return self.scale == other.scale and np.array_equal(self.scaled, other.scaled)

    def __hash__(self):
        return hash((self.scale, self.scaled.tobytes()))


def _validate(arr: np.ndarray) -> None:
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DomainError("distance matrix must be square")
    check_team_count(arr.shape[0])
    neg = np.argwhere(arr < 0)
    if len(neg):
        i, j = neg[0]
        raise MetricError(f"negative distance at ({i + 1},{j + 1})", (i + 1, j + 1))
    diag = np.flatnonzero(np.diag(arr))
    if len(diag):
        i = diag[0]
        raise MetricError(f"nonzero diagonal entry d({i + 1},{i + 1})", (i + 1, i + 1))
    asym = np.argwhere(np.triu(arr != arr.T))
    if len(asym):
        i, j = asym[0]
        raise MetricError(
            f"symmetry violated at ({i + 1},{j + 1}): "
            f"d({i + 1},{j + 1})={arr[i, j]}, d({j + 1},{i + 1})={arr[j, i]}",
            (i + 1, j + 1),
        )
    # Row i: bad[j, h] <=> d(i,h) > d(i,j) + d(j,h). Scanning i in order and
    # taking argwhere's row-major first hit gives the lexicographic minimum.
    for i in range(arr.shape[0]):
        bad = arr[i][None, :] > arr[i][:, None] + arr
        hits = np.argwhere(bad)
        if len(hits):
            j, h = hits[0]
            raise MetricError(
                f"triangle inequality violated at ({i + 1},{j + 1},{h + 1}): "
                f"d({i + 1},{h + 1}) > d({i + 1},{j + 1}) + d({j + 1},{h + 1})",
                (i + 1, j + 1, h + 1),
            )


@dataclass(frozen=True)
class InstanceStats:
    s: tuple[Number, ...]
    delta: Number


def stats(m: DistanceMatrix) -> InstanceStats:
    row_sums = m.scaled.sum(axis=1)
    return InstanceStats(
        s=tuple(m.value(v) for v in row_sums),
        delta=m.value(int(row_sums.sum())),
    )


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\S+")


def _tokens(lines: Iterable[tuple[int, str]]):
    for lineno, line in lines:
        for match in _TOKEN.finditer(line):
            yield lineno, match.start() + 1, match.group()


def _number(tok: tuple[int, int, str]) -> Fraction:
    line, col, text = tok
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected a number, got {text!r}", line, col) from None
    return value


def _read_text(source: Union[str, bytes, IO, Path]) -> str:
    if isinstance(source, Path):
        return source.read_text()
    if isinstance(source, bytes):
        return source.decode()
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode() if isinstance(data, bytes) else data


def _read_matrix(toks, n: int, end: tuple[int, int]) -> list[list[Fraction]]:
    values = []
    for _ in range(n * n):
        tok = next(toks, None)
        if tok is None:
            raise ParseError(f"expected {n * n} matrix entries, got {len(values)}", *end)
        values.append(_number(tok))
    return [values[r * n:(r + 1) * n] for r in range(n)]


def _parse_plain(text: str) -> list[list[Fraction]]:
    lines = [(i + 1, ln) for i, ln in enumerate(text.splitlines())
             if not ln.lstrip().startswith("#")]
    end = (len(text.splitlines()) + 1, 1)
    toks = _tokens(lines)
    first = next(toks, None)
    if first is None:
        raise ParseError("empty input", 1, 1)
    line, col, word = first
    if not word.isdigit():
        raise ParseError(f"expected team count, got {word!r}", line, col)
    n = int(word)
    check_team_count(n)
    rows = _read_matrix(toks, n, end)
    extra = next(toks, None)
    if extra is not None:
        raise ParseError(f"unexpected trailing token {extra[2]!r}", extra[0], extra[1])
    return rows


def _parse_tsplib(text: str) -> list[list[Fraction]]:
    raw = text.splitlines()
    header: dict[str, str] = {}
    section_at = None
    for idx, line in enumerate(raw):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.upper().startswith("EDGE_WEIGHT_SECTION"):
            section_at = idx
            break
        if stripped.upper() == "EOF":
            break
        key, sep, val = stripped.partition(":")
        if not sep:
            raise ParseError(f"expected 'KEY : VALUE', got {stripped!r}", idx + 1, 1)
        header[key.strip().upper()] = val.strip()
    if "DIMENSION" not in header:
        raise ParseError("missing DIMENSION", 1, 1)
    ewt = header.get("EDGE_WEIGHT_TYPE", "").upper()
    if ewt != "EXPLICIT":
        raise DomainError(f"unsupported EDGE_WEIGHT_TYPE {ewt or '(missing)'}; only EXPLICIT")
    ewf = header.get("EDGE_WEIGHT_FORMAT", "").upper()
    if ewf != "FULL_MATRIX":
        raise DomainError(f"unsupported EDGE_WEIGHT_FORMAT {ewf or '(missing)'}; only FULL_MATRIX")
    if section_at is None:
        raise ParseError("missing EDGE_WEIGHT_SECTION", len(raw) + 1, 1)
    try:
        n = int(header["DIMENSION"])
    except ValueError:
        raise ParseError(f"bad DIMENSION {header['DIMENSION']!r}", 1, 1) from None
    check_team_count(n)
    body = []
    for idx in range(section_at + 1, len(raw)):
        stripped = raw[idx].strip()
        if stripped.upper() == "EOF" or stripped.upper().endswith("_SECTION"):
            break
        body.append((idx + 1, raw[idx]))
    toks = _tokens(body)
    rows = _read_matrix(toks, n, (len(raw) + 1, 1))
    extra = next(toks, None)
    if extra is not None:
        raise ParseError(f"unexpected trailing token {extra[2]!r}", extra[0], extra[1])
    return rows


def load(source: Union[str, bytes, IO, Path], format: str = "plain") -> DistanceMatrix:
    """Parse an instance from text, bytes, a file object or a path."""
    text = _read_text(source)
    if format == "plain":
        rows = _parse_plain(text)
    elif format == "tsplib-full-matrix":
        rows = _parse_tsplib(text)
    else:
        raise DomainError(f"unknown format {format!r}; expected one of {FORMATS}")
    return DistanceMatrix.from_values(rows)


def save(m: DistanceMatrix) -> str:
    """Serialize in the plain format; ``load(save(m)) == m``."""
    out = io.StringIO()
    out.write(f"{m.n}\n")
    for row in m.rows():
        out.write(" ".join(str(v) for v in row))
        out.write("\n")
    return out.getvalue()


# ------------------------------------------------------------- generation

def _ceil_sqrt(q: int) -> int:
    r = math.isqrt(q)
    return r + (r * r < q)


def generate(kind: str, n: int, seed: int = 0) -> DistanceMatrix:
    """Generate an instance.

    ``circle`` places the venues on a regular polygon and uses the number of
    steps the short way around; ``euclidean-random`` draws integer points on a
    ``EUCLID_GRID`` square and rounds every Euclidean distance up, which keeps
    the triangle inequality exact.
    """
    check_team_count(n)
    idx = np.arange(n)
    if kind == "unit":
        d = 1 - np.eye(n, dtype=np.int64)
    elif kind == "circle":
        gap = np.abs(idx[:, None] - idx[None, :])
        d = np.minimum(gap, n - gap)
    elif kind in ("euclidean-random", "euclidean"):
        pts = np.random.default_rng(seed).integers(0, EUCLID_GRID + 1, size=(n, 2))
        diff = pts[:, None, :] - pts[None, :, :]
        sq = (diff**2).sum(axis=2)
        d = np.array([[_ceil_sqrt(int(q)) for q in row] for row in sq], dtype=np.int64)
    else:
        raise DomainError(f"unknown instance kind {kind!r}; expected one of {KINDS}")
    return DistanceMatrix(d.astype(np.int64))
