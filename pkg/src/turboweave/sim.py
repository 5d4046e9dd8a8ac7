"""Monte-Carlo BER measurement of the rate-1/3 code over BPSK/AWGN.

Noise and data are drawn from per-block streams keyed only by the master
seed and the block index, so every Eb/N0 point reuses the same
realizations (common random numbers), results are reproducible, and
parallel and serial runs aggregate identically.  The stop rule is
evaluated after each fixed-size chunk of blocks, in block order, which
keeps the consumed block count independent of the worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from . import _kernels
from .errors import ValidationError
from .permutation import Permutation
from .turbo import TrellisCode

CHUNK_BLOCKS = 32
NOISELESS_LLR = 50.0  # confidence assigned per bit when Eb/N0 is infinite


def channel(bits, ebn0_db: float, rate: float, rng: np.random.Generator) -> np.ndarray:
    """BPSK over AWGN; returns per-bit channel LLRs 2y/sigma^2.

    Bit b maps to symbol 1-2b; the noise variance is
    1 / (2 * rate * 10^(Eb/N0 / 10)).  An infinite Eb/N0 skips the noise
    and returns fixed-confidence LLRs with the transmitted signs.
    """
    if rate <= 0:
        raise ValidationError(f"rate must be positive, got {rate}")
    arr = np.asarray(bits, dtype=np.int8)
    x = 1.0 - 2.0 * arr.astype(np.float64)
    if math.isinf(ebn0_db):
        return NOISELESS_LLR * x
    sigma2 = 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))
    y = x + rng.standard_normal(arr.size) * math.sqrt(sigma2)
    return 2.0 * y / sigma2


@dataclass(frozen=True)
class SimConfig:
    """One BER sweep: block length, interleaver, Eb/N0 grid, and stop rule."""

    block_length: int
    interleaver: Permutation
    ebn0_db_grid: tuple[float, ...]
    iterations: int = 10
    master_seed: int = 0
    min_bit_errors: int = 100
    max_blocks: int = 100_000
    code: TrellisCode = TrellisCode()

    def __post_init__(self):
        object.__setattr__(self, "ebn0_db_grid", tuple(float(v) for v in self.ebn0_db_grid))
        if self.block_length != self.interleaver.n:
            raise ValidationError(
                f"block length {self.block_length} does not match interleaver size "
                f"{self.interleaver.n}"
            )
        if self.iterations < 1:
            raise ValidationError("iteration count must be at least 1")
        if not self.ebn0_db_grid:
            raise ValidationError("Eb/N0 grid must not be empty")
        if not 0 <= self.master_seed < 2**64:
            raise ValidationError("master seed must fit in 64 bits")
        if self.min_bit_errors < 1 or self.max_blocks < 1:
            raise ValidationError("stop rule bounds must be positive")

    @property
    def rate(self) -> float:
        # Eb/N0 normalization uses the actual transmitted-bit count, tail included
        n = self.block_length
        return n / (3.0 * n + 2.0 * self.code.memory)


@dataclass(frozen=True)
class BerPoint:
    """One measured point of a BER sweep."""

    ebn0_db: float
    info_bits: int
    bit_errors: int
    frame_errors: int
    blocks: int

    @property
    def ber(self) -> float:
        return self.bit_errors / self.info_bits

    @property
    def fer(self) -> float:
        return self.frame_errors / self.blocks


def _block_rng(master_seed: int, block_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((master_seed, block_index)))


def _generate_chunk(cfg: SimConfig, start_block: int, count: int):
    n = cfg.block_length
    cw_len = 3 * n + 2 * cfg.code.memory
    bits = np.empty((count, n), np.int8)
    z = np.empty((count, cw_len), np.float64)
    for row in range(count):
        rng = _block_rng(cfg.master_seed, start_block + row)
        bits[row] = rng.integers(0, 2, n, dtype=np.int8)
        z[row] = rng.standard_normal(cw_len)
    return bits, z


def simulate_ber(cfg: SimConfig, workers: int | None = None) -> list[BerPoint]:
    """Measure BER/FER at every grid point under the configured stop rule.

    A point ends at the first chunk boundary where the error target is met
    or the block budget is exhausted, whichever comes first.  workers caps
    the thread count used for block decoding; any value yields identical
    results.
    """
    if workers is not None:
        if workers < 1:
            raise ValidationError("worker count must be positive")
        numba.set_num_threads(min(workers, numba.config.NUMBA_NUM_THREADS))
    tables = cfg.code.tables()
    pi = cfg.interleaver.as_array()
    points = []
    for ebn0 in cfg.ebn0_db_grid:
        if math.isinf(ebn0):
            sigma, scale = 0.0, NOISELESS_LLR
        else:
            sigma2 = 1.0 / (2.0 * cfg.rate * 10.0 ** (ebn0 / 10.0))
            sigma, scale = math.sqrt(sigma2), 2.0 / sigma2
        blocks = 0
        bit_errors = 0
        frame_errors = 0
        while True:
            count = min(CHUNK_BLOCKS, cfg.max_blocks - blocks)
            bits, z = _generate_chunk(cfg, blocks, count)
            be, fe = _kernels.simulate_chunk(
                bits, z, sigma, scale, pi, cfg.iterations, *tables
            )
            bit_errors += int(be.sum())
            frame_errors += int(fe.sum())
            blocks += count
            if bit_errors >= cfg.min_bit_errors or blocks >= cfg.max_blocks:
                break
        points.append(
            BerPoint(
                ebn0_db=ebn0,
                info_bits=blocks * cfg.block_length,
                bit_errors=bit_errors,
                frame_errors=frame_errors,
                blocks=blocks,
            )
        )
    return points


def write_ber_csv(points: list[BerPoint], path) -> None:
    """CSV with header ebn0_db,info_bits,bit_errors,frame_errors,ber,fer."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write("ebn0_db,info_bits,bit_errors,frame_errors,ber,fer\n")
        for p in points:
            fh.write(
                f"{p.ebn0_db:g},{p.info_bits},{p.bit_errors},{p.frame_errors},"
                f"{p.ber:.10e},{p.fer:.10e}\n"
            )


def write_gnuplot_script(
    curves: list[tuple[str, str]], script_path, title: str = "BER over Eb/N0"
) -> None:
    """Companion gnuplot script plotting (csv_path, label) curves on a log axis."""
    lines = [
        "set datafile separator ','",
        f"set title '{title}'",
        "set xlabel 'Eb/N0 (dB)'",
        "set ylabel 'BER'",
        "set logscale y",
        "set grid",
        "set key bottom left",
    ]
    plots = [
        f"'{csv}' every ::1 using 1:5 with linespoints title '{label}'"
        for csv, label in curves
    ]
    lines.append("plot " + ", \\\n     ".join(plots))
    with open(script_path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
