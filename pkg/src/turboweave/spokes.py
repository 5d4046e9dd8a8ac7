"""Spoke vectors: compact parameterizations of cubic Hamiltonian graphs.

A spoke vector (c_0..c_{s-1}) for even block length n attaches the chord
i -> (i + c_{i mod s}) mod n to every ring vertex.  The chord table is a
valid involution exactly when s divides n and every entry pairs up as
c_i = n - c_{(i + c_i) mod s}.  This module covers validity checking,
closed-form counting, exhaustive enumeration, max-girth search, the
signed-description blocklength extension, and the induced interleaver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numba
import numpy as np

from . import _kernels
from .cubic import CubicGraph
from .errors import ResourceLimitError, ValidationError
from .permutation import Permutation

DEFAULT_CANDIDATE_BUDGET = 10**8


@dataclass(frozen=True)
class Verdict:
    """Outcome of a validity check; carries the first violated condition."""

    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_spoke_vector(
    n: int, s: int, entries: Sequence[int], simple_only: bool = False
) -> Verdict:
    """Check the divisibility and pairing conditions without raising.

    With simple_only, entries 1 and n-1 are additionally rejected since
    their chords would parallel ring edges.
    """
    if n < 4 or n % 2:
        return Verdict(False, f"block length must be even and at least 4, got {n}")
    if s < 1:
        return Verdict(False, f"vector size must be positive, got {s}")
    if n % s:
        return Verdict(False, f"vector size {s} does not divide block length {n}")
    if len(entries) != s:
        return Verdict(False, f"expected {s} entries, got {len(entries)}")
    for i, c in enumerate(entries):
        if not 1 <= c <= n - 1:
            return Verdict(False, f"entry {c} at index {i} is outside 1..{n - 1}")
    for i, c in enumerate(entries):
        partner = (i + c) % s
        need = n - c
        if entries[partner] != need:
            return Verdict(
                False,
                f"pairing fails at index {i}: entry {c} requires "
                f"entries[{partner}] = {need}, found {entries[partner]}",
            )
    if simple_only:
        for i, c in enumerate(entries):
            if c in (1, n - 1):
                return Verdict(
                    False, f"entry {c} at index {i} parallels a ring edge (not simple)"
                )
    return Verdict(True)


@dataclass(frozen=True)
class SpokeVector:
    """A validated spoke vector; construction rejects invalid parameter sets."""

    n: int
    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(c) for c in self.entries))
        verdict = validate_spoke_vector(self.n, len(self.entries), self.entries)
        if not verdict:
            raise ValidationError(verdict.reason)

    @property
    def s(self) -> int:
        return len(self.entries)

    @property
    def is_simple(self) -> bool:
        return all(c not in (1, self.n - 1) for c in self.entries)

    def chord_table(self) -> tuple[int, ...]:
        s = len(self.entries)
        return tuple((i + self.entries[i % s]) % self.n for i in range(self.n))

    def label(self) -> str:
        return f"{self.n}_{self.s}({', '.join(str(c) for c in self.entries)})"


def interleaver_from_spokes(vector: SpokeVector) -> Permutation:
    """Permutation i -> (i + c_{i mod s}) mod n induced by the vector.

    For simple vectors this is a fixed-point-free involution with no entry
    adjacent to its index on the ring, i.e. exactly the chord table of the
    graph, so the interleaver doubles as its own de-interleaver.
    """
    return Permutation(vector.chord_table())


def cubic_graph_from_spokes(vector: SpokeVector) -> CubicGraph:
    """Ring-plus-chords graph of the vector; requires a simple vector."""
    return CubicGraph(vector.chord_table())


def _odd_product(top: int) -> int:
    """1*3*5*...*top for odd top; empty product below 1."""
    out = 1
    for v in range(1, top + 1, 2):
        out *= v
    return out


def count_valid_formula(n: int, s: int) -> int:
    """Closed-form count of valid spoke vectors of size s for block length n.

    Counting argument: the slot map l -> (l + c_l) mod s is an involution,
    its fixed slots must hold n/2, and each of the 1*3*...*(f-1) perfect
    matchings of the f free slots admits n/s value assignments per pair.
    Exact arbitrary-precision arithmetic; exact against enumeration
    whenever 2s divides n.  Outside that regime (possible only for even s)
    the classification of n/2 entries by residue slips and the formula
    overcounts, e.g. n=14, s=2 yields 8 while enumeration finds 7.
    """
    if n < 4 or n % 2:
        raise ValidationError(f"block length must be even and at least 4, got {n}")
    if s < 1 or n % s:
        raise ValidationError(f"vector size {s} must divide block length {n}")
    m = n // s
    total = 0
    if s % 2 == 0:
        for k in range(s // 2 + 1):
            total += math.comb(s, 2 * k) * m ** (s // 2 - k) * _odd_product(s - 2 * k - 1)
    else:
        for k in range((s - 1) // 2 + 1):
            total += (
                math.comb(s, 2 * k + 1)
                * m ** ((s - 1) // 2 - k)
                * _odd_product(s - 2 * k - 2)
            )
    return total


def count_valid_bruteforce(n: int, s: int, budget: int = DEFAULT_CANDIDATE_BUDGET) -> int:
    """Count valid vectors by scanning all (n-1)^s entry tuples.

    Cross-check for the closed-form count; refuses scans beyond budget.
    """
    if n < 4 or n % 2:
        raise ValidationError(f"block length must be even and at least 4, got {n}")
    if s < 1 or n % s:
        raise ValidationError(f"vector size {s} must divide block length {n}")
    if (n - 1) ** s > budget:
        raise ResourceLimitError(
            f"brute-force scan of {(n - 1) ** s} tuples exceeds budget {budget}"
        )
    vals = np.arange(1, n, dtype=np.int64)
    grids = np.meshgrid(*([vals] * s), indexing="ij")
    c = np.stack([g.ravel() for g in grids], axis=1)  # one row per entry tuple
    ok = np.ones(c.shape[0], dtype=bool)
    rows = np.arange(c.shape[0])
    for i in range(s):
        partner = (i + c[:, i]) % s
        ok &= c[rows, partner] == n - c[:, i]
    return int(ok.sum())


def enumerate_valid(
    n: int,
    s: int,
    simple_only: bool = False,
    max_candidates: int = DEFAULT_CANDIDATE_BUDGET,
) -> Iterator[SpokeVector]:
    """Yield every valid vector once, in lexicographic entry order.

    Walks the pairing structure (choosing c_i fixes its partner entry)
    instead of scanning all n^s tuples, so the work is proportional to the
    number of valid vectors, which grows as n^(s/2).
    """
    if n < 4 or n % 2:
        raise ValidationError(f"block length must be even and at least 4, got {n}")
    if s < 1 or n % s:
        raise ValidationError(f"vector size {s} must divide block length {n}")
    predicted = count_valid_formula(n, s)
    if predicted > max_candidates:
        raise ResourceLimitError(
            f"search space holds {predicted} valid vectors, over the budget of "
            f"{max_candidates}"
        )
    entries = [0] * s
    half = n // 2

    def walk(i: int) -> Iterator[tuple[int, ...]]:
        if i == s:
            yield tuple(entries)
            return
        if entries[i]:
            yield from walk(i + 1)
            return
        for v in range(1, n):
            if simple_only and v in (1, n - 1):
                continue
            partner = (i + v) % s
            if partner == i:
                if v != half:
                    continue
                entries[i] = v
                yield from walk(i + 1)
                entries[i] = 0
            elif entries[partner] == 0:
                entries[i] = v
                entries[partner] = n - v
                yield from walk(i + 1)
                entries[i] = 0
                entries[partner] = 0
            elif entries[partner] == n - v:
                entries[i] = v
                yield from walk(i + 1)
                entries[i] = 0

    for tup in walk(0):
        yield SpokeVector(n, tup)


def min_spoke_size_for_girth(girth: int) -> int:
    """Smallest vector size that can reach the target girth, ceil((g-2)/2).

    Any spoke-vector graph contains a cycle of length 2s+2, so girth g
    forces s at least (g-2)/2.
    """
    if girth < 3:
        raise ValidationError(f"target girth must be at least 3, got {girth}")
    return (girth - 1) // 2


# --- signed descriptions and blocklength extension -------------------------

HALF = 0  # signed-entry sentinel for "n/2"


@dataclass(frozen=True)
class SignedSpokeDescription:
    """Shift-invariant form of a vector: entries are +c, -c (meaning n-c), or n/2.

    Each complementary pair c_l + c_m = n keeps the smaller value positive
    and writes the larger as its negation; an entry is marked as the half
    point exactly when it equals n/2.  Signed entries survive blocklength
    changes unchanged while the half point tracks n/2, so neither entry
    magnitudes nor pairwise separations shrink when n grows.  Keeping the
    smaller pair value positive means no pair entry can collide with the
    half point later, so descriptions round-trip through extension and
    extensions compose.
    """

    n: int
    signed: tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.signed)

    def extend(self, k: int) -> "SignedSpokeDescription":
        """Grow the block length by k steps: n + k*s (s even) or n + 2*k*s (s odd)."""
        if k < 1:
            raise ValidationError(f"extension step count must be positive, got {k}")
        s = len(self.signed)
        n_new = self.n + k * s if s % 2 == 0 else self.n + 2 * k * s
        return SignedSpokeDescription(n_new, self.signed)

    def reify(self) -> SpokeVector:
        """Resolve signed entries against the current block length."""
        entries = tuple(self.n // 2 if v == HALF else v % self.n for v in self.signed)
        return SpokeVector(self.n, entries)


def describe(vector: SpokeVector) -> SignedSpokeDescription:
    """Signed description of a vector: halves marked, pairs signed by value."""
    n, s = vector.n, vector.s
    entries = vector.entries
    signed: list[int | None] = [None] * s
    for l in range(s):
        if 2 * entries[l] == n:
            signed[l] = HALF
    for l in range(s):
        if signed[l] is not None:
            continue
        m = (l + entries[l]) % s
        # complementary pair: both differ from n/2, so one value is strictly smaller
        small = min(entries[l], entries[m])
        signed[l] = small if entries[l] == small else -small
        signed[m] = small if entries[m] == small else -small
    return SignedSpokeDescription(n, tuple(signed))  # type: ignore[arg-type]


def extend_description(vector: SpokeVector, k: int) -> SpokeVector:
    """Derive a valid vector on a larger block length from an existing one.

    Entry magnitudes and pairwise separations never shrink, which protects
    every cycle built from at most two chord families; the derived graph
    therefore tends to keep the original girth, though alignments among
    three or more chords can occasionally shorten a cycle (the tests carry
    a 24-vertex girth-7 instance whose first extension has girth 6).
    """
    return describe(vector).extend(k).reify()


# --- max-girth search -------------------------------------------------------


@dataclass(frozen=True)
class SearchReport:
    """Outcome of a max-girth scan over all simple vectors for (n, s)."""

    n: int
    s: int
    candidates_examined: int
    best_girth: int = 0
    winners: tuple[SpokeVector, ...] = field(default_factory=tuple)
    chosen: SpokeVector | None = None
    chosen_summary_distance: int | None = None

    @property
    def is_empty(self) -> bool:
        return self.chosen is None


def search_best_girth(
    n: int,
    s: int,
    tie_break: str = "summary-distance",
    workers: int | None = None,
    max_candidates: int = DEFAULT_CANDIDATE_BUDGET,
) -> SearchReport:
    """Scan all simple valid vectors and keep the girth maximizers.

    tie_break picks `chosen` among the winners: "summary-distance" (the
    default) prefers the maximal exact summary distance of the induced
    interleaver and then the lexicographically smallest entries; "lex"
    uses entry order alone.  Girths are evaluated by a batched kernel that
    mirrors the BFS girth routine (the tests assert their agreement);
    workers caps its thread count and any value yields identical results.
    Block lengths below 6 admit no chord besides ring diameters and report
    an empty search.
    """
    if tie_break not in ("summary-distance", "lex"):
        raise ValidationError(f"unknown tie-break policy: {tie_break!r}")
    if workers is not None:
        if workers < 1:
            raise ValidationError("worker count must be positive")
        numba.set_num_threads(min(workers, numba.config.NUMBA_NUM_THREADS))
    if n < 6:
        return SearchReport(n=n, s=s, candidates_examined=0)
    candidates = list(enumerate_valid(n, s, simple_only=True, max_candidates=max_candidates))
    if not candidates:
        return SearchReport(n=n, s=s, candidates_examined=0)
    entries_mat = np.asarray([v.entries for v in candidates], dtype=np.int64)
    girths = _kernels.spoke_girth_batch(n, entries_mat)
    best = int(girths.max())
    winner_rows = np.flatnonzero(girths == best)
    winners = tuple(candidates[int(r)] for r in winner_rows)
    if tie_break == "summary-distance":
        dsums = _kernels.spoke_dsum_batch(n, entries_mat[winner_rows])
        best_dsum = int(dsums.max())
        chosen = min(
            (w for w, d in zip(winners, dsums) if d == best_dsum),
            key=lambda v: v.entries,
        )
        chosen_dsum = best_dsum
    else:
        chosen = min(winners, key=lambda v: v.entries)
        chosen_dsum = int(
            _kernels.spoke_dsum_batch(n, np.asarray([chosen.entries], dtype=np.int64))[0]
        )
    return SearchReport(
        n=n,
        s=s,
        candidates_examined=len(candidates),
        best_girth=best,
        winners=winners,
        chosen=chosen,
        chosen_summary_distance=chosen_dsum,
    )


# --- file format -------------------------------------------------------------


def write_spoke_file(vector: SpokeVector, path) -> None:
    """Text format: line 1 `n s`, line 2 the s entries space-separated."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{vector.n} {vector.s}\n")
        fh.write(" ".join(str(c) for c in vector.entries) + "\n")


def read_spoke_file(path) -> SpokeVector:
    with open(path, "r", encoding="ascii") as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise ValidationError(f"malformed spoke-vector file: {path}")
    n, s = int(tokens[0]), int(tokens[1])
    entries = [int(t) for t in tokens[2:]]
    if len(entries) != s:
        raise ValidationError(f"spoke-vector file {path} declares {s} entries, holds {len(entries)}")
    return SpokeVector(n, tuple(entries))
