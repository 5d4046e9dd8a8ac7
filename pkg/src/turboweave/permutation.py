"""Permutations on {0..n-1}, the circular Lee metric, and permutation cycles.

A "cycle" here is not an orbit of the permutation but an alternating
index/value tour: an even number l of distinct indices i_1..i_l together
with their images j_k = pi(i_k).  Its summary distance is the sum of Lee
distances between consecutive tour stops, alternating between the index
side and the value side.  The minimum over all such cycles is the summary
distance of the permutation, the interleaver quality metric this package
is built around.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import ValidationError


def lee_distance(i: int, j: int, n: int) -> int:
    """Circular distance min(|i-j|, n-|i-j|) between two indices mod n."""
    if n < 2:
        raise ValidationError(f"block length must be at least 2, got {n}")
    if not (0 <= i < n and 0 <= j < n):
        raise ValidationError(f"indices ({i}, {j}) out of range for block length {n}")
    d = abs(i - j)
    return min(d, n - d)


class Permutation:
    """A bijection on {0..n-1} stored as its lookup table."""

    __slots__ = ("table", "_array")

    def __init__(self, values: Iterable[int]):
        table = tuple(int(v) for v in values)
        n = len(table)
        if n < 2:
            raise ValidationError(f"permutation needs at least 2 entries, got {n}")
        seen = bytearray(n)
        for i, v in enumerate(table):
            if not 0 <= v < n:
                raise ValidationError(f"entry {v} at index {i} is outside 0..{n - 1}")
            if seen[v]:
                raise ValidationError(f"not a bijection: duplicate value {v} at index {i}")
            seen[v] = 1
        self.table = table
        self._array: np.ndarray | None = None

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @property
    def n(self) -> int:
        return len(self.table)

    def __call__(self, i: int) -> int:
        return self.table[i]

    def __len__(self) -> int:
        return len(self.table)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"Permutation({list(self.table)})"

    def as_array(self) -> np.ndarray:
        """Lookup table as an int64 numpy array (cached; treat as read-only)."""
        if self._array is None:
            self._array = np.asarray(self.table, dtype=np.int64)
        return self._array

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.table):
            inv[v] = i
        return Permutation(inv)

    def is_involution(self) -> bool:
        return all(self.table[v] == i for i, v in enumerate(self.table))


def make_permutation(values: Iterable[int]) -> Permutation:
    """Validate a lookup table and wrap it as a Permutation."""
    return Permutation(values)


@dataclass(frozen=True)
class PermCycle:
    """An alternating cycle of even length l: distinct indices plus their images."""

    i_seq: tuple[int, ...]
    j_seq: tuple[int, ...]

    def __post_init__(self):
        l = len(self.i_seq)
        if l < 2 or l % 2:
            raise ValidationError(f"cycle length must be even and at least 2, got {l}")
        if len(set(self.i_seq)) != l:
            raise ValidationError("cycle indices must be pairwise distinct")
        if len(self.j_seq) != l:
            raise ValidationError("index and image sequences must have equal length")

    @property
    def length(self) -> int:
        return len(self.i_seq)


def cycle_summary_distance(cycle: PermCycle, n: int) -> int:
    """Sum of Lee distances along the tour, alternating index side / image side.

    Stop k (0-based) contributes lee(i_k, i_{k+1}) for even k and
    lee(j_k, j_{k+1 mod l}) for odd k, so the final leg closes the tour on
    the image side.
    """
    l = cycle.length
    i, j = cycle.i_seq, cycle.j_seq
    total = 0
    for k in range(l):
        if k % 2 == 0:
            total += lee_distance(i[k], i[(k + 1) % l], n)
        else:
            total += lee_distance(j[k], j[(k + 1) % l], n)
    return total


def _canonical(seq: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical representative under segment rotation and tour reversal.

    Equivalent index sequences are the rotations by an even offset of the
    sequence and of its reversal; the canonical form is the lexicographic
    minimum, which always starts with the smallest index.
    """
    l = len(seq)
    best = seq
    rev = seq[::-1]
    for k in range(0, l, 2):
        for cand in (seq[k:] + seq[:k], rev[k:] + rev[:k]):
            if cand < best:
                best = cand
    return best


def enumerate_perm_cycles(perm: Permutation, max_len: int) -> Iterator[PermCycle]:
    """Yield every cycle of length at most max_len, once per equivalence class.

    Canonical form puts the smallest index first and fixes the direction by
    the second element.  Intended for desk scale (n up to ~30, max_len up
    to 4); the number of candidates grows as n^max_len.
    """
    if max_len % 2:
        raise ValidationError(f"max cycle length must be even, got {max_len}")
    n = perm.n
    if not 2 <= max_len <= n:
        raise ValidationError(f"max cycle length must be in 2..{n}, got {max_len}")
    table = perm.table
    for l in range(2, max_len + 1, 2):
        for combo in itertools.combinations(range(n), l):
            head = combo[0]
            for rest in itertools.permutations(combo[1:]):
                seq = (head,) + rest
                if _canonical(seq) == seq:
                    yield PermCycle(seq, tuple(table[i] for i in seq))


def summary_distance_bruteforce(perm: Permutation, max_len: int = 4) -> int:
    """Minimum summary distance over all cycles of length at most max_len.

    An upper bound on the true summary distance whenever max_len truncates
    the search; module `ig` computes the exact value in polynomial time and
    this enumeration serves as its small-n cross-check.
    """
    n = perm.n
    return min(cycle_summary_distance(c, n) for c in enumerate_perm_cycles(perm, max_len))


def write_interleaver_file(perm: Permutation, path) -> None:
    """Text format: first line n, then n lines holding pi(i)."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{perm.n}\n")
        for v in perm.table:
            fh.write(f"{v}\n")


def read_interleaver_file(path) -> Permutation:
    with open(path, "r", encoding="ascii") as fh:
        tokens = fh.read().split()
    if not tokens:
        raise ValidationError(f"empty interleaver file: {path}")
    n = int(tokens[0])
    values = [int(t) for t in tokens[1:]]
    if len(values) != n:
        raise ValidationError(
            f"interleaver file {path} declares {n} entries but holds {len(values)}"
        )
    return Permutation(values)
