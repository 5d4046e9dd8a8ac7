"""Rate-1/3 turbo code: RSC constituents, log-MAP decoding, interleaver families.

The constituent code is the systematic recursive convolutional encoder
(1, 15/13) in octal: tap digits expand MSB-first onto increasing powers of
the delay, so 15 -> 1 + D + D^3 feeds forward and 13 -> 1 + D^2 + D^3
feeds back.  Encoder 1 is terminated with one (systematic, parity) tail
pair per memory element; encoder 2 is left open.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import ConstructionError, ValidationError
from .permutation import Permutation


@dataclass(frozen=True)
class TrellisCode:
    """Systematic recursive rate-1/2 convolutional code given by octal taps."""

    feedback: int = 0o13
    feedforward: int = 0o15

    def __post_init__(self):
        if self.feedback < 2:
            raise ValidationError("feedback taps must span at least one delay element")
        if self.feedforward < 1:
            raise ValidationError("feedforward taps must be a positive bit pattern")
        if not self._coeff(self.feedback, 0):
            raise ValidationError("feedback polynomial must have a unit constant term")

    @property
    def memory(self) -> int:
        return max(self.feedback.bit_length(), self.feedforward.bit_length()) - 1

    @property
    def state_count(self) -> int:
        return 1 << self.memory

    def _coeff(self, taps: int, power: int) -> int:
        # tap bits read MSB-first across powers D^0..D^memory
        width = max(self.feedback.bit_length(), self.feedforward.bit_length())
        return (taps >> (width - 1 - power)) & 1

    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(next_state[2, S], parity[2, S], terminating_input[S]) int64 arrays."""
        return _trellis_tables(self.feedback, self.feedforward)


@lru_cache(maxsize=None)
def _trellis_tables(feedback: int, feedforward: int):
    code = TrellisCode(feedback, feedforward)
    m = code.memory
    S = code.state_count
    fb_mask = 0
    ff_mask = 0
    for j in range(1, m + 1):
        # state bit (m - j) holds the register value j steps back
        fb_mask |= code._coeff(feedback, j) << (m - j)
        ff_mask |= code._coeff(feedforward, j) << (m - j)
    ff0 = code._coeff(feedforward, 0)
    next_state = np.empty((2, S), np.int64)
    parity = np.empty((2, S), np.int64)
    term_in = np.empty(S, np.int64)
    for s in range(S):
        fb = bin(s & fb_mask).count("1") & 1
        term_in[s] = fb
        for u in (0, 1):
            a = u ^ fb
            parity[u, s] = (ff0 * a) ^ (bin(s & ff_mask).count("1") & 1)
            next_state[u, s] = (a << (m - 1)) | (s >> 1)
    next_state.setflags(write=False)
    parity.setflags(write=False)
    term_in.setflags(write=False)
    return next_state, parity, term_in


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.int8)
    if arr.ndim != 1:
        raise ValidationError("bit sequence must be one-dimensional")
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise ValidationError("bit sequence must be binary")
    return arr


def rsc_encode(
    bits, code: TrellisCode | None = None, terminate: bool = True
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Encode one block; returns (systematic, parity, tail_pairs).

    tail_pairs has shape (memory, 2) holding the (input, parity) pairs that
    drive the encoder back to the zero state; it is empty when terminate is
    off.
    """
    code = code or TrellisCode()
    arr = _as_bits(bits)
    next_state, parity, term_in = code.tables()
    par, tail_u, tail_p, _ = _kernels.rsc_scan(arr, next_state, parity, term_in, terminate)
    return arr.copy(), par, np.stack([tail_u, tail_p], axis=1)


def pccc_encode(bits, interleaver: Permutation, code: TrellisCode | None = None) -> np.ndarray:
    """Rate-1/3 codeword: (sys, par1, par2) per bit plus encoder-1 tail pairs.

    Output length is 3n + 2*memory channel bits.
    """
    code = code or TrellisCode()
    arr = _as_bits(bits)
    if arr.size != interleaver.n:
        raise ValidationError(
            f"block of {arr.size} bits does not match interleaver size {interleaver.n}"
        )
    next_state, parity, term_in = code.tables()
    return _kernels.pccc_core(arr, interleaver.as_array(), next_state, parity, term_in)


def bcjr_log_map(
    systematic_llr,
    parity_llr,
    priors,
    code: TrellisCode | None = None,
    terminated: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Exact log-MAP pass over one constituent trellis.

    systematic_llr and parity_llr carry one entry per trellis step
    (info bits plus, when terminated, the memory tail steps).  priors are
    per-info-bit LLRs.  Returns (posterior, extrinsic) over the info bits,
    where extrinsic = posterior - prior - systematic channel LLR.
    """
    code = code or TrellisCode()
    sys_llr = np.ascontiguousarray(systematic_llr, dtype=np.float64)
    par_llr = np.ascontiguousarray(parity_llr, dtype=np.float64)
    prior = np.ascontiguousarray(priors, dtype=np.float64)
    if sys_llr.shape != par_llr.shape or sys_llr.ndim != 1:
        raise ValidationError("systematic and parity LLR lengths must match")
    n_info = sys_llr.size - (code.memory if terminated else 0)
    if n_info < 1:
        raise ValidationError("LLR sequence shorter than the termination tail")
    if prior.size != n_info:
        raise ValidationError(f"expected {n_info} priors, got {prior.size}")
    next_state, parity, term_in = code.tables()
    post = _kernels.bcjr_core(
        sys_llr, par_llr, prior, next_state, parity, term_in, n_info, terminated
    )
    ext = post - prior - sys_llr[:n_info]
    return post, ext


def turbo_decode(
    channel_llrs,
    interleaver: Permutation,
    iterations: int = 10,
    code: TrellisCode | None = None,
) -> np.ndarray:
    """Decode one received block of 3n + 2*memory channel LLRs to n bits.

    Runs the standard extrinsic exchange for the given iteration count and
    slices the final decision from decoder 2 through the inverse
    interleaver.
    """
    if iterations < 1:
        raise ValidationError(f"iteration count must be positive, got {iterations}")
    code = code or TrellisCode()
    llr = np.ascontiguousarray(channel_llrs, dtype=np.float64)
    n = interleaver.n
    m = code.memory
    if llr.size != 3 * n + 2 * m:
        raise ValidationError(
            f"expected {3 * n + 2 * m} channel LLRs for block length {n}, got {llr.size}"
        )
    sys_full = np.empty(n + m)
    par1_full = np.empty(n + m)
    sys_full[:n] = llr[0 : 3 * n : 3]
    par1_full[:n] = llr[1 : 3 * n : 3]
    par2 = np.ascontiguousarray(llr[2 : 3 * n : 3])
    sys_full[n:] = llr[3 * n :: 2]
    par1_full[n:] = llr[3 * n + 1 :: 2]
    next_state, parity, term_in = code.tables()
    return _kernels.turbo_core(
        sys_full, par1_full, par2, interleaver.as_array(), iterations,
        next_state, parity, term_in,
    )


# --- baseline interleaver families -------------------------------------------


def quadratic_interleaver(n: int, k: int = 1) -> Permutation:
    """pi(m) = k*m*(m+1)/2 mod n; a bijection whenever n is a power of two and k odd."""
    if n < 2 or n & (n - 1):
        raise ValidationError(f"block length must be a power of two, got {n}")
    if k < 1 or k % 2 == 0:
        raise ValidationError(f"multiplier must be a positive odd integer, got {k}")
    return Permutation((k * m * (m + 1) // 2) % n for m in range(n))


def check_spread(perm: Permutation, spread: int) -> bool:
    """Independent spread validator: indices within `spread` of each other
    must map to values at least `spread` apart."""
    if spread < 1:
        raise ValidationError(f"spread must be positive, got {spread}")
    table = perm.table
    n = perm.n
    for i in range(n):
        for j in range(max(0, i - spread), i):
            if abs(table[i] - table[j]) < spread:
                return False
    return True


def srandom_interleaver(
    n: int,
    spread: int | None = None,
    seed: int | None = None,
    max_attempts: int = 100,
) -> Permutation:
    """Random permutation where nearby indices land at least `spread` apart.

    Greedy first-fit construction; on a dead end the unplaced values are
    reshuffled to the front of the candidate order and the pass restarts,
    which converges in a handful of passes at the usual operating point
    spread = floor(sqrt(n/2)) (the default).  Raises ConstructionError once
    the attempt budget runs out.
    """
    if n < 2:
        raise ValidationError(f"block length must be at least 2, got {n}")
    if spread is None:
        spread = max(1, math.isqrt(n // 2))
    if spread < 1:
        raise ValidationError(f"spread must be positive, got {spread}")
    if max_attempts < 1:
        raise ValidationError("attempt budget must be positive")
    rng = np.random.default_rng(seed)
    order = [int(v) for v in rng.permutation(n)]
    for _ in range(max_attempts):
        pool = list(order)
        out: list[int] = []
        for i in range(n):
            window = out[max(0, i - spread) : i]
            pick = -1
            for idx, v in enumerate(pool):
                ok = True
                for w in window:
                    if abs(v - w) < spread:
                        ok = False
                        break
                if ok:
                    pick = idx
                    break
            if pick < 0:
                break
            out.append(pool.pop(pick))
        if not pool:
            perm = Permutation(out)
            if not check_spread(perm, spread):
                raise ConstructionError("construction produced an invalid spread")
            return perm
        # hard-to-place values go first in the next pass, placed ones after
        rng.shuffle(pool)
        order = pool + out
    raise ConstructionError(
        f"no spread-{spread} permutation of size {n} found in {max_attempts} attempts; "
        "try a smaller spread"
    )
