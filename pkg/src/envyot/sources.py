"""Item-valuation sample sources.

Every source presents the same contract: ``draw(m)`` returns an ``m x n``
:class:`SampleSet` and successive calls continue one deterministic stream.
Randomness comes from numpy's Philox counter-based generator keyed by the
source seed, so two sources built with the same parameters and seed yield
bit-identical streams on any platform.

Three kinds are provided:

* ``uniform-box``: i.i.d. uniform valuations on ``[0, 1]^n``.
* ``affine-uniform``: ``x = b - z @ M`` with ``z`` uniform on the unit
  square and ``M`` a ``2 x n`` mixing matrix (the artificial generator used
  by the experiment drivers).
* ``csv-backed``: replays rows of an ingested CSV in seeded shuffled order,
  optionally cycling with a fresh shuffle per pass.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyFile,
    ExhaustedCsvSource,
    MissingHeader,
    NonNumericField,
    RaggedRow,
    SizesExceedRows,
)

_HEADER_RE = re.compile(r"^x(\d+)$")


@dataclass(frozen=True)
class SampleSet:
    """Immutable m x n matrix of valuation vectors.

    ``value_bound`` is the declared coordinate bound for generated sets and
    the observed maximum for ingested ones.
    """

    values: np.ndarray
    value_bound: float | None = None

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 2:
            raise DimensionMismatch(f"sample values must be 2-D, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]


def _rng(seed: int) -> np.random.Generator:
    # Philox: counter-based, documented algorithm, stable across platforms.
    return np.random.Generator(np.random.Philox(key=seed))


class SampleSource:
    """Base class: a seeded, single-owner stream of valuation samples."""

    n: int
    seed: int
    value_bound: float

    def draw(self, m: int) -> SampleSet:
        if m < 1:
            raise ValueError(f"draw needs m >= 1, got {m}")
        return SampleSet(self._draw_values(m), value_bound=self.value_bound)

    def _draw_values(self, m: int) -> np.ndarray:
        raise NotImplementedError


class UniformBoxSource(SampleSource):
    """Independent uniform valuations on [0, 1]^n."""

    def __init__(self, n: int, seed: int):
        self.n = int(n)
        self.seed = int(seed)
        self.value_bound = 1.0
        self._gen = _rng(seed)

    def _draw_values(self, m: int) -> np.ndarray:
        return self._gen.random((m, self.n))


def affine_map(b: np.ndarray, M: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """The affine-uniform generator map ``x = b - Z @ M`` for noise rows Z."""
    return np.asarray(b, dtype=float) - np.asarray(Z, dtype=float) @ np.asarray(M, dtype=float)


class AffineUniformSource(SampleSource):
    """Valuations ``x = b - z @ M`` with z uniform on the unit square.

    Coordinate i then ranges over
    ``[b_i - sum_k max(M_ki, 0), b_i - sum_k min(M_ki, 0)]``.
    """

    def __init__(self, b, M, seed: int):
        self.b = np.asarray(b, dtype=float)
        self.M = np.asarray(M, dtype=float)
        if self.M.ndim != 2 or self.M.shape[0] != 2 or self.M.shape[1] != self.b.shape[0]:
            raise DimensionMismatch(
                f"mixing matrix must be 2 x n with n = len(b); got {self.M.shape} vs b {self.b.shape}"
            )
        self.n = self.b.shape[0]
        self.seed = int(seed)
        self.value_bound = float(np.max(self.b - np.minimum(self.M, 0.0).sum(axis=0)))
        self._gen = _rng(seed)

    def _draw_values(self, m: int) -> np.ndarray:
        Z = self._gen.random((m, 2))
        return affine_map(self.b, self.M, Z)


class CsvSource(SampleSource):
    """Replays an ingested sample set in seeded shuffled order.

    With ``replay`` on, each pass reshuffles and the stream never ends;
    with it off, draws beyond the row count raise ExhaustedCsvSource.
    """

    def __init__(self, data: SampleSet, seed: int, replay: bool = True):
        self.data = data
        self.n = data.n
        self.seed = int(seed)
        self.replay = replay
        self.value_bound = float(data.value_bound if data.value_bound is not None else data.values.max())
        self._gen = _rng(seed)
        self._order = self._gen.permutation(data.m)
        self._pos = 0

    def _draw_values(self, m: int) -> np.ndarray:
        out = np.empty((m, self.n))
        filled = 0
        while filled < m:
            avail = len(self._order) - self._pos
            if avail == 0:
                if not self.replay:
                    raise ExhaustedCsvSource(
                        f"csv source exhausted: {m - filled} more rows requested with replay off"
                    )
                self._order = self._gen.permutation(self.data.m)
                self._pos = 0
                avail = len(self._order)
            take = min(avail, m - filled)
            idx = self._order[self._pos : self._pos + take]
            out[filled : filled + take] = self.data.values[idx]
            self._pos += take
            filled += take
        return out


def from_csv(path, expected_n: int | None = None) -> SampleSet:
    """Parse a valuation CSV: header ``x1,...,xn`` then n floats per row.

    UTF-8, comma-separated, ``\\n`` or ``\\r\\n`` endings, no quoting.  The
    returned set records the observed value bound.
    """
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyFile(f"{path}: no content") from None
        fields = [h.strip() for h in header]
        if not fields or any(_HEADER_RE.match(h) is None for h in fields):
            raise MissingHeader(f"{path}: expected header x1,...,xn, got {header!r}")
        if [int(_HEADER_RE.match(h).group(1)) for h in fields] != list(range(1, len(fields) + 1)):
            raise MissingHeader(f"{path}: header columns must be x1..xn in order, got {header!r}")
        n = len(fields)
        if expected_n is not None and n != expected_n:
            raise DimensionMismatch(f"{path}: header has {n} columns, expected {expected_n}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != n:
                raise RaggedRow(lineno, f"{path}: line {lineno} has {len(row)} fields, expected {n}")
            parsed = []
            for col, cell in enumerate(row, start=1):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise NonNumericField(
                        lineno, col, f"{path}: non-numeric field {cell!r} at line {lineno}, column {col}"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise EmptyFile(f"{path}: header but no data rows")
    values = np.asarray(rows, dtype=float)
    return SampleSet(values, value_bound=float(values.max()))


def split(sample_set: SampleSet, sizes, seed: int) -> list[SampleSet]:
    """Disjoint row subsets of the given sizes, chosen by a seeded shuffle."""
    sizes = [int(s) for s in sizes]
    if sum(sizes) > sample_set.m:
        raise SizesExceedRows(f"requested {sum(sizes)} rows from a set of {sample_set.m}")
    order = _rng(seed).permutation(sample_set.m)
    out = []
    pos = 0
    for s in sizes:
        idx = order[pos : pos + s]
        out.append(SampleSet(sample_set.values[idx], value_bound=sample_set.value_bound))
        pos += s
    return out


@dataclass(frozen=True)
class SourceConfig:
    """Seed-free description of a source; experiments instantiate it with
    per-trial derived seeds."""

    kind: str  # "uniform" | "affine" | "csv"
    n: int | None = None
    b: tuple = ()
    M: tuple = ()  # row-major 2 x n
    path: str | None = None
    replay: bool = True

    def make(self, seed: int) -> SampleSource:
        if self.kind == "uniform":
            return UniformBoxSource(self.n, seed)
        if self.kind == "affine":
            b = np.asarray(self.b, dtype=float)
            M = np.asarray(self.M, dtype=float).reshape(2, -1)
            return AffineUniformSource(b, M, seed)
        if self.kind == "csv":
            return CsvSource(from_csv(self.path), seed, replay=self.replay)
        raise ValueError(f"unknown source kind {self.kind!r}")


#: The artificial valuation generator used throughout the experiment suite:
#: x = (1, 0.7) - z @ [[0.2, 0], [0.8, 0.4]], supported on [0,1] x [0.3,0.7].
ARTIFICIAL_SOURCE = SourceConfig(kind="affine", b=(1.0, 0.7), M=(0.2, 0.0, 0.8, 0.4))
