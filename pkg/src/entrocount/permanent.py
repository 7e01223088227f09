"""Exact permanents of square (0,1)-matrices.

Rows are stored as bitmasks (bit ``j`` set iff ``a[i][j] == 1``).  All
accumulation is in Python integers, so results are exact at any size the
work budget allows.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

RYSER_MAX_N = 30
BRUTEFORCE_MAX_N = 10


class CapacityError(ValueError):
    """Matrix too large for the requested exact method."""


@dataclass(frozen=True)
class BinaryMatrix:
    n: int
    rows: tuple
    row_sums: tuple = field(init=False)

    def __post_init__(self):
        n = int(self.n)
        rows = tuple(int(r) for r in self.rows)
        if n < 1:
            raise ValueError("matrix dimension must be positive")
        if len(rows) != n:
            raise ValueError(f"expected {n} rows, got {len(rows)}")
        for r in rows:
            if r < 0 or r >> n:
                raise ValueError(f"row mask {r:#x} has bits outside the first {n} columns")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "row_sums", tuple(r.bit_count() for r in rows))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BinaryMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        masks = []
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n} (matrix must be square)")
            mask = 0
            for j, a in enumerate(row):
                if a not in (0, 1):
                    raise ValueError(f"entry ({i}, {j}) = {a!r} is not 0 or 1")
                mask |= int(a) << j
            masks.append(mask)
        return cls(n, masks)

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        return cls(n, [1 << i for i in range(n)])

    @classmethod
    def ones(cls, n: int) -> "BinaryMatrix":
        return cls(n, [(1 << n) - 1] * n)

    @classmethod
    def first_row_filled(cls, n: int) -> "BinaryMatrix":
        """Identity with its first row set to all ones; permanent 1, row sums (n, 1, ..., 1)."""
        return cls(n, [(1 << n) - 1] + [1 << i for i in range(1, n)])

    def to_lists(self) -> list:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    def column(self, j: int) -> int:
        return sum(((r >> j) & 1) << i for i, r in enumerate(self.rows))

    def minor(self, i: int, k: int) -> "BinaryMatrix":
        """Delete row ``i`` and column ``k``."""
        low = (1 << k) - 1
        rows = [(r & low) | ((r >> (k + 1)) << k) for t, r in enumerate(self.rows) if t != i]
        return BinaryMatrix(self.n - 1, rows)

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "BinaryMatrix":
        """Matrix ``B`` with ``B[i][j] = A[row_perm[i]][col_perm[j]]``."""
        rows = []
        for i in range(self.n):
            src = self.rows[row_perm[i]]
            rows.append(sum(((src >> col_perm[j]) & 1) << j for j in range(self.n)))
        return BinaryMatrix(self.n, rows)

    def to_text(self) -> str:
        return "\n".join(" ".join(str(a) for a in row) for row in self.to_lists()) + "\n"


def parse_matrix(text: str) -> BinaryMatrix:
    """Parse whitespace-separated 0/1 tokens or compact ``0101`` strings, one row per line."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) == 1 and len(tokens[0]) > 1:
            tokens = list(tokens[0])
        if any(tok not in ("0", "1") for tok in tokens):
            raise ValueError(f"line {lineno}: expected only 0/1 entries")
        rows.append([int(tok) for tok in tokens])
    if not rows:
        raise ValueError("matrix text is empty")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError("ragged rows")
    return BinaryMatrix.from_rows(rows)


def from_bipartite_graph(edges: Iterable[Sequence[int]], n: int) -> BinaryMatrix:
    """Biadjacency matrix of a bipartite graph with 1-indexed vertices on both sides."""
    masks = [0] * n
    for edge in edges:
        left, right = (int(v) for v in edge)
        if not (1 <= left <= n and 1 <= right <= n):
            raise ValueError(f"edge ({left}, {right}) has a vertex outside 1..{n}")
        masks[left - 1] |= 1 << (right - 1)
    return BinaryMatrix(n, masks)


def _ryser_chunk(columns: tuple, n: int, start: int, stop: int) -> int:
    # sum over Gray-code steps k in [start, stop) of (-1)^|S| prod_i rowsum_i(S)
    gray = start ^ (start >> 1)
    sums = [0] * n
    for j in range(n):
        if gray >> j & 1:
            col = columns[j]
            for i in range(n):
                sums[i] += col >> i & 1
    total = 0
    for k in range(start, stop):
        if k != start:
            j = (k & -k).bit_length() - 1
            gray ^= 1 << j
            col = columns[j]
            step = 1 if gray >> j & 1 else -1
            for i in range(n):
                if col >> i & 1:
                    sums[i] += step
        prod = 1
        for s in sums:
            if not s:
                prod = 0
                break
            prod *= s
        if prod:
            total += -prod if gray.bit_count() & 1 else prod
    return total


def permanent_ryser(m: BinaryMatrix, chunks: int = 1, workers: int | None = None) -> int:
    """Permanent by Ryser inclusion-exclusion over column subsets in Gray-code order.

    The ``2**n - 1`` nonempty subsets may be split into ``chunks`` contiguous
    ranges, optionally evaluated in a process pool; the result does not
    depend on either setting.
    """
    n = m.n
    if n > RYSER_MAX_N:
        raise CapacityError(f"n = {n} exceeds the Ryser limit of {RYSER_MAX_N}")
    if 0 in m.row_sums:
        return 0
    columns = tuple(m.column(j) for j in range(n))
    top = 1 << n
    chunks = max(1, min(int(chunks), top - 1))
    bounds = [1 + (top - 1) * c // chunks for c in range(chunks + 1)]
    spans = [(columns, n, lo, hi) for lo, hi in zip(bounds, bounds[1:]) if lo < hi]
    if workers and workers > 1 and len(spans) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_ryser_chunk, *zip(*spans)))
    else:
        parts = [_ryser_chunk(*s) for s in spans]
    total = sum(parts)
    return -total if n & 1 else total


def permanent_bruteforce(m: BinaryMatrix) -> int:
    """Permanent by depth-first enumeration of permutations, skipping zero factors."""
    n = m.n
    if n > BRUTEFORCE_MAX_N:
        raise CapacityError(f"n = {n} exceeds the brute-force limit of {BRUTEFORCE_MAX_N}")
    rows = m.rows

    def extend(i: int, used: int) -> int:
        if i == n:
            return 1
        count = 0
        free = rows[i] & ~used
        while free:
            bit = free & -free
            count += extend(i + 1, used | bit)
            free ^= bit
        return count

    return extend(0, 0)


def expand_minor(m: BinaryMatrix, i: int) -> int:
    """Laplace-type expansion along row ``i`` (0-indexed) using Ryser on each minor."""
    if not 0 <= i < m.n:
        raise ValueError(f"row index {i} out of range 0..{m.n - 1}")
    if m.n == 1:
        return m.rows[0] & 1
    return sum(permanent_ryser(m.minor(i, k)) for k in range(m.n) if m.rows[i] >> k & 1)


def permanent(m: BinaryMatrix) -> int:
    return permanent_ryser(m)

