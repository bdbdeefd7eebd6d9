"""Exact counts of self-avoiding walks and bridges, plus the census file format."""

from __future__ import annotations

import hashlib
import itertools
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .walk import Walk, check_dimension, classify

FORMAT_VERSION = 1
DEFAULT_MAX_N = 32
ORACLE_MAX_N = 10
DEFAULT_PREFIX_DEPTH = 6


class ResourceLimitError(RuntimeError):
    """Requested enumeration is beyond the configured ceiling."""


class CensusFileError(ValueError):
    """Base class for census file problems."""


class VersionMismatchError(CensusFileError):
    pass


class ChecksumMismatchError(CensusFileError):
    pass


class MalformedCensusError(CensusFileError):
    pass


@dataclass(frozen=True)
class Census:
    """Counts for one dimension up to length ``N``.

    ``c[n]`` and ``b[n]`` are the numbers of self-avoiding walks and bridges
    of length ``n``; ``bridge_by_height[n][h]`` counts bridges of length ``n``
    ending at height ``h``. All entries are Python ints. Construction does not
    validate the counts (corrupted censuses are legitimate test inputs); call
    :meth:`problems` for that.
    """

    d: int
    N: int
    c: tuple[int, ...]
    b: tuple[int, ...]
    bridge_by_height: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(int(x) for x in self.c))
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        object.__setattr__(self, "bridge_by_height",
                           tuple(tuple(int(x) for x in row) for row in self.bridge_by_height))
        n1 = self.N + 1
        if len(self.c) != n1 or len(self.b) != n1 or len(self.bridge_by_height) != n1:
            raise ValueError("count arrays must have length N + 1")
        if any(len(row) != n1 for row in self.bridge_by_height):
            raise ValueError("bridge_by_height must be (N + 1) x (N + 1)")

    def reach(self, n: int, m: int) -> int:
        """Number of length-``n`` bridges ending at height ``>= m``."""
        return sum(self.bridge_by_height[n][m:n + 1])

    def problems(self) -> list[str]:
        """Violations of the structural invariants every true census satisfies."""
        out = []
        if self.c[0] != 1 or self.b[0] != 1 or self.bridge_by_height[0][0] != 1:
            out.append("length-0 counts must all be 1")
        two_d = 2 * self.d
        for n in range(self.N + 1):
            row = self.bridge_by_height[n]
            if any(x < 0 for x in row) or self.c[n] < 0 or self.b[n] < 0:
                out.append(f"negative count at n={n}")
            if sum(row) != self.b[n]:
                out.append(f"sum_h b[{n}][h] = {sum(row)} != b[{n}] = {self.b[n]}")
            if n > 0 and row[0] != 0:
                out.append(f"b[{n}][0] must be 0")
            if self.b[n] > self.c[n]:
                out.append(f"b[{n}] > c[{n}]")
            if n >= 1 and self.c[n] > two_d * (two_d - 1) ** (n - 1):
                out.append(f"c[{n}] exceeds the non-reversing walk count")
        return out

    def truncated(self, N: int) -> Census:
        if not 0 <= N <= self.N:
            raise ValueError(f"cannot truncate a census of length {self.N} to {N}")
        return Census(self.d, N, self.c[:N + 1], self.b[:N + 1],
                      tuple(row[:N + 1] for row in self.bridge_by_height[:N + 1]))


def max_length_ceiling() -> int:
    raw = os.environ.get("SAW_MAX_N")
    if raw is None or not raw.strip():
        return DEFAULT_MAX_N
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"SAW_MAX_N must be an integer, got {raw!r}") from None


def _from_arrays(d, N, c, bh) -> Census:
    bh_rows = tuple(tuple(int(x) for x in row) for row in bh)
    return Census(d, N, tuple(int(x) for x in c), tuple(sum(r) for r in bh_rows), bh_rows)


def enumerate_census(d: int, N: int, workers: int = 1,
                     prefix_depth: int = DEFAULT_PREFIX_DEPTH) -> Census:
    """Exact census by pruned depth-first search.

    The tree is cut at ``prefix_depth``; the subtrees below the cut are
    counted in chunks on a thread pool (the compiled kernel releases the GIL).
    Chunk totals are combined by integer addition, so the result does not
    depend on ``workers``.
    """
    check_dimension(d)
    if N < 0:
        raise ValueError("N must be >= 0")
    ceiling = max_length_ceiling()
    if N > ceiling:
        raise ResourceLimitError(f"N={N} exceeds the enumeration ceiling {ceiling} (set SAW_MAX_N)")
    if 2 * d * (2 * d - 1) ** max(N - 1, 0) >= 2**63:
        raise ResourceLimitError(f"counts for d={d}, N={N} may overflow the 64-bit kernel accumulators")
    workers = max(1, int(workers))

    head = min(prefix_depth, N)
    c = np.zeros(N + 1, np.int64)
    bh = np.zeros((N + 1, N + 1), np.int64)
    c_head = np.zeros(head + 1, np.int64)
    bh_head = np.zeros((head + 1, head + 1), np.int64)
    _kernels.count_from_origin(d, head, c_head, bh_head)
    c[:head + 1] = c_head
    bh[:head + 1, :head + 1] = bh_head
    c_total = [int(x) for x in c]
    bh_total = [[int(x) for x in row] for row in bh]

    if N > head:
        prefixes = np.empty((int(c_head[head]), head), np.int8)
        _kernels.list_prefixes(d, head, prefixes)
        n_chunks = min(len(prefixes), 4 * workers)
        chunks = np.array_split(prefixes, n_chunks)

        def run(chunk):
            cc = np.zeros(N + 1, np.int64)
            bb = np.zeros((N + 1, N + 1), np.int64)
            _kernels.count_extensions(d, N, np.ascontiguousarray(chunk), cc, bb)
            return cc, bb

        if workers == 1:
            results = map(run, chunks)
        else:
            pool = ThreadPoolExecutor(max_workers=workers)
            results = pool.map(run, chunks)
        for cc, bb in results:
            for n in range(N + 1):
                c_total[n] += int(cc[n])
                row = bh_total[n]
                for h in range(n + 1):
                    row[h] += int(bb[n, h])
        if workers > 1:
            pool.shutdown()

    return _from_arrays(d, N, c_total, bh_total)


def oracle_census(d: int, N: int) -> Census:
    """Census by brute force over all ``(2d)^n`` step sequences.

    Shares nothing with :func:`enumerate_census` except the walk predicates.
    """
    check_dimension(d)
    if N < 0:
        raise ValueError("N must be >= 0")
    if N > ORACLE_MAX_N:
        raise ResourceLimitError(f"oracle_census is limited to N <= {ORACLE_MAX_N}")
    c = [0] * (N + 1)
    bh = [[0] * (N + 1) for _ in range(N + 1)]
    for n in range(N + 1):
        for codes in itertools.product(range(2 * d), repeat=n):
            kind = classify(Walk.from_codes(d, codes))
            if kind.is_saw:
                c[n] += 1
            if kind.is_bridge:
                bh[n][kind.end_height] += 1
    return _from_arrays(d, N, c, bh)


# --- file format ----------------------------------------------------------


def _canonical_counts(census: Census) -> str:
    payload = {
        "c": [str(x) for x in census.c],
        "b": [str(x) for x in census.b],
        "bridge_by_height": [[str(x) for x in row] for row in census.bridge_by_height],
    }
    return json.dumps(payload, separators=(",", ":"), sort_keys=True)


def census_checksum(census: Census) -> str:
    return hashlib.sha256(_canonical_counts(census).encode("ascii")).hexdigest()


def census_to_dict(census: Census) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "dimension": census.d,
        "max_length": census.N,
        "c": [str(x) for x in census.c],
        "b": [str(x) for x in census.b],
        "bridge_by_height": [[str(x) for x in row] for row in census.bridge_by_height],
        "checksum": census_checksum(census),
    }


def census_from_dict(doc) -> Census:
    if not isinstance(doc, dict):
        raise MalformedCensusError("census document must be a JSON object")
    if "format_version" not in doc:
        raise MalformedCensusError("missing format_version")
    if doc["format_version"] != FORMAT_VERSION:
        raise VersionMismatchError(
            f"unsupported census format_version {doc['format_version']!r} (expected {FORMAT_VERSION})")
    try:
        d = int(doc["dimension"])
        N = int(doc["max_length"])
        c = [int(x) for x in doc["c"]]
        b = [int(x) for x in doc["b"]]
        bh = [[int(x) for x in row] for row in doc["bridge_by_height"]]
        checksum = str(doc["checksum"])
        census = Census(d, N, c, b, bh)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedCensusError(f"malformed census: {exc}") from exc
    if census_checksum(census) != checksum:
        raise ChecksumMismatchError("census checksum does not match its counts")
    return census


def save_census(census: Census, path) -> None:
    Path(path).write_text(json.dumps(census_to_dict(census), indent=1) + "\n", encoding="utf-8")


def load_census(path) -> Census:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedCensusError(f"{path}: not valid JSON ({exc})") from exc
    return census_from_dict(doc)


def persist_roundtrip(census: Census, path) -> Census:
    save_census(census, path)
    return load_census(path)
