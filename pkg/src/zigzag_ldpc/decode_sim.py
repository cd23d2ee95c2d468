"""Sum-product decoding of GLDPC codes and AWGN Monte-Carlo simulation.

Each code bit has exactly two constraint neighbours, so a decoding round is
an exchange of extrinsic LLRs: every constraint runs BCJR on its syndrome
trellis with input "channel LLR + message from the other end" per bit and
sends back its extrinsic output.  LLRs are log P(0)/P(1).
"""

from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import LengthMismatchError, TooLargeError
from .gldpc import GldpcCode, LinearCode, design_rate, true_rate

LLR_CLIP = 50.0
MAX_TRELLIS_N = 32
MAX_TRELLIS_R = 16
DEFAULT_ITERATIONS = 50
ROW_CHUNK = 8192
CSV_COLUMNS = ("snr_db", "frames", "bit_errors", "frame_errors", "ber", "fer", "avg_iterations")


# ---------------------------------------------------------------------------
# trellis and BCJR


@dataclass(frozen=True, eq=False)
class WolfTrellis:
    """Syndrome trellis: the state after t bits is the partial syndrome.

    Bit ``b`` at section ``t`` moves state ``s`` to ``s ^ (b * columns[t])``.
    ``states[t]`` holds the states at depth t that lie on some path from the
    zero state to the zero state.
    """

    n: int
    k: int
    columns: np.ndarray
    states: list[np.ndarray]

    @property
    def num_states(self) -> int:
        return 1 << (self.n - self.k)

    @property
    def state_counts(self) -> list[int]:
        return [len(s) for s in self.states]

    def transitions(self, t: int) -> list[tuple[int, int, int]]:
        """Edges ``(state, bit, next_state)`` of section t between surviving states."""
        nxt = set(self.states[t + 1].tolist())
        out = []
        for s in self.states[t].tolist():
            for b in (0, 1):
                s2 = s ^ (b * int(self.columns[t]))
                if s2 in nxt:
                    out.append((s, b, s2))
        return out

    def path_count(self) -> int:
        counts = {0: 1}
        for t in range(self.n):
            nxt: dict[int, int] = {}
            for s, c in counts.items():
                for b in (0, 1):
                    s2 = s ^ (b * int(self.columns[t]))
                    nxt[s2] = nxt.get(s2, 0) + c
            counts = nxt
        return counts.get(0, 0)


def build_trellis(code: LinearCode) -> WolfTrellis:
    r = code.n - code.k
    if code.n > MAX_TRELLIS_N or r > MAX_TRELLIS_R:
        raise TooLargeError(f"trellis limited to n <= {MAX_TRELLIS_N}, n - k <= {MAX_TRELLIS_R}")
    weights = 1 << np.arange(r, dtype=np.int64)
    columns = (code.H.astype(np.int64) * weights[:, None]).sum(axis=0) if r else np.zeros(code.n, dtype=np.int64)
    fwd = [{0}]
    for t in range(code.n):
        c = int(columns[t])
        fwd.append({s ^ b * c for s in fwd[-1] for b in (0, 1)})
    bwd = [{0}]
    for t in reversed(range(code.n)):
        c = int(columns[t])
        bwd.append({s ^ b * c for s in bwd[-1] for b in (0, 1)})
    bwd.reverse()
    states = [np.array(sorted(f & b), dtype=np.int64) for f, b in zip(fwd, bwd)]
    columns = columns.astype(np.int64)
    columns.setflags(write=False)
    return WolfTrellis(code.n, code.k, columns, states)


def _bcjr_rows(trellis: WolfTrellis, llr: np.ndarray) -> np.ndarray:
    """Extrinsic LLRs for a (rows, n) block of clipped input LLRs."""
    rows, n = llr.shape
    size = trellis.num_states
    base = np.arange(size)
    flips = [base ^ int(c) for c in trellis.columns]
    alpha = np.empty((n + 1, rows, size))
    alpha[0] = -np.inf
    alpha[0][:, 0] = 0.0
    with np.errstate(invalid="ignore"):
        for t in range(n):
            a = alpha[t]
            nxt = np.logaddexp(a, a[:, flips[t]] - llr[:, t, None])
            alpha[t + 1] = nxt - nxt.max(axis=1, keepdims=True)
        beta = np.full((rows, size), -np.inf)
        beta[:, 0] = 0.0
        ext = np.empty((rows, n))
        for t in reversed(range(n)):
            a = alpha[t]
            zero = np.logaddexp.reduce(a + beta, axis=1)
            one = np.logaddexp.reduce(a + beta[:, flips[t]], axis=1)
            ext[:, t] = zero - one
            nb = np.logaddexp(beta, beta[:, flips[t]] - llr[:, t, None])
            beta = nb - nb.max(axis=1, keepdims=True)
    # +-inf when a bit is fixed by the code; clip keeps messages finite
    return np.clip(np.nan_to_num(ext, nan=0.0), -LLR_CLIP, LLR_CLIP)


def bcjr_extrinsic(trellis: WolfTrellis, llr_in: Sequence[float] | np.ndarray) -> np.ndarray:
    """Per-bit extrinsic LLRs (a-posteriori minus intrinsic) of one or many input vectors."""
    llr = np.asarray(llr_in, dtype=float)
    single = llr.ndim == 1
    llr = np.atleast_2d(llr)
    if llr.shape[1] != trellis.n:
        raise LengthMismatchError(f"expected {trellis.n} LLRs, got {llr.shape[1]}")
    llr = np.clip(llr, -LLR_CLIP, LLR_CLIP)
    out = np.empty_like(llr)
    for start in range(0, len(llr), ROW_CHUNK):
        out[start : start + ROW_CHUNK] = _bcjr_rows(trellis, llr[start : start + ROW_CHUNK])
    return out[0] if single else out


# ---------------------------------------------------------------------------
# message passing


class Decoder:
    """Flooding-schedule decoder bound to one assembled code.

    Sockets are (vertex, position) pairs laid out group by group; every bit
    owns exactly two sockets and ``partner`` maps each socket to the other.
    """

    def __init__(self, code: GldpcCode):
        self.code = code
        self.trellises = [build_trellis(g.code) for g in code.groups]
        self.bits = np.concatenate([g.edges.ravel() for g in code.groups])
        sizes = [g.edges.size for g in code.groups]
        self.offsets = np.concatenate([[0], np.cumsum(sizes)])
        order = np.argsort(self.bits, kind="stable")
        counts = np.bincount(self.bits, minlength=code.n_bits)
        if np.any(counts != 2):
            raise ValueError("every bit must sit in exactly two constraint positions")
        pairs = order.reshape(-1, 2)
        self.partner = np.empty(len(self.bits), dtype=np.int64)
        self.partner[pairs[:, 0]] = pairs[:, 1]
        self.partner[pairs[:, 1]] = pairs[:, 0]
        self.checks = [g.code.H.T.astype(np.int64) for g in code.groups]
        self.offsets = self.offsets.astype(np.int64)
        self.g_n = np.array([g.code.n for g in code.groups], dtype=np.int64)
        self.g_size = np.array([t.num_states for t in self.trellises], dtype=np.int64)
        self.g_cols = np.concatenate([t.columns for t in self.trellises]).astype(np.int64)
        self.g_cols_lo = np.concatenate([[0], np.cumsum(self.g_n)[:-1]]).astype(np.int64)
        self.sockets_of_bit = np.ascontiguousarray(pairs, dtype=np.int64)

    def syndrome_ok(self, hard: np.ndarray) -> np.ndarray:
        ok = np.ones(len(hard), dtype=bool)
        for g, ht in zip(self.code.groups, self.checks):
            if ht.shape[1] == 0:
                continue
            s = (hard[:, g.edges] @ ht) & 1
            ok &= ~s.reshape(len(hard), -1).any(axis=1)
        return ok

    def decode_batch(
        self, llrs: np.ndarray, max_iterations: int = DEFAULT_ITERATIONS, early_stop: bool = True
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Decode a (frames, n_bits) block; returns hard bits, iterations, converged flags."""
        llrs = np.atleast_2d(np.asarray(llrs, dtype=float))
        if llrs.shape[1] != self.code.n_bits:
            raise LengthMismatchError(f"expected {self.code.n_bits} LLRs, got {llrs.shape[1]}")
        if max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        frames = len(llrs)
        hard = np.zeros((frames, self.code.n_bits), dtype=np.int64)
        iters = np.zeros(frames, dtype=np.int64)
        converged = np.zeros(frames, dtype=np.bool_)
        _kernels.decode_frames(
            np.ascontiguousarray(llrs), self.bits, self.partner, self.offsets, self.g_n, self.g_size,
            self.g_cols, self.g_cols_lo, self.sockets_of_bit, int(max_iterations), bool(early_stop),
            hard, iters, converged,
        )
        return hard, iters, converged


def decode(
    code: GldpcCode,
    channel_llrs: Sequence[float] | np.ndarray,
    max_iterations: int = DEFAULT_ITERATIONS,
    early_stop: bool = True,
    *,
    decoder: Decoder | None = None,
) -> tuple[np.ndarray, int, bool]:
    llr = np.asarray(channel_llrs, dtype=float)
    if llr.ndim != 1 or len(llr) != code.n_bits:
        raise LengthMismatchError(f"expected {code.n_bits} LLRs, got {llr.shape}")
    dec = decoder or Decoder(code)
    hard, iters, conv = dec.decode_batch(llr[None, :], max_iterations, early_stop)
    return hard[0], int(iters[0]), bool(conv[0])


# ---------------------------------------------------------------------------
# simulation


@dataclass
class SimConfig:
    snr_db_list: list[float]
    max_frames: int = 1000
    max_errors: int = 100
    max_iterations: int = DEFAULT_ITERATIONS
    seed: int = 0
    early_stop: bool = True
    batch: int = 128

    def __post_init__(self) -> None:
        self.snr_db_list = [float(x) for x in self.snr_db_list]
        if not self.snr_db_list:
            raise ValueError("snr_db_list must not be empty")
        for name in ("max_frames", "max_errors", "max_iterations", "batch"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class BerPoint:
    snr_db: float
    frames: int
    bit_errors: int
    frame_errors: int
    ber: float
    fer: float
    avg_iterations: float


def noise_sigma(rate: float | Fraction, snr_db: float) -> float:
    """Noise standard deviation for unit-energy BPSK at E_b/N_0 = ``snr_db``."""
    return math.sqrt(1.0 / (2.0 * float(rate) * 10 ** (snr_db / 10)))


def uncoded_ber(snr_db: float) -> float:
    """Q(sqrt(2 E_b/N_0)) for uncoded BPSK."""
    return 0.5 * math.erfc(math.sqrt(10 ** (snr_db / 10)))


def channel_llrs(n_bits: int, sigma: float, seed: int, point: int, frames: range) -> np.ndarray:
    """All-zero codeword over BPSK+AWGN, one counter-based noise stream per frame."""
    out = np.empty((len(frames), n_bits))
    for i, f in enumerate(frames):
        rng = np.random.default_rng([seed, point, f])
        y = 1.0 + sigma * rng.standard_normal(n_bits)
        out[i] = 2.0 * y / sigma**2
    return out


_WORKER: Decoder | None = None


def _init_worker(code: GldpcCode) -> None:
    global _WORKER
    _WORKER = Decoder(code)


def _run_batch(args) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    sigma, seed, point, start, stop, max_iterations, early_stop = args
    dec = _WORKER
    llr = channel_llrs(dec.code.n_bits, sigma, seed, point, range(start, stop))
    hard, iters, _ = dec.decode_batch(llr, max_iterations, early_stop)
    errors = hard.sum(axis=1)
    return errors, errors > 0, iters


def simulation_rate(code: GldpcCode) -> Fraction:
    """True rate when the rank is computable, design rate otherwise."""
    try:
        return true_rate(code)
    except TooLargeError:
        return design_rate(code)


def simulate(
    code: GldpcCode,
    cfg: SimConfig,
    *,
    workers: int = 1,
    rate: Fraction | None = None,
    progress=None,
    time_budget: float | None = None,
) -> list[BerPoint]:
    """BER/FER per SNR point.

    Batches may be computed ahead, but results are folded in frame order
    and cut exactly at the stopping rule, so output does not depend on the
    batch size or worker count.  With ``time_budget`` (seconds) the run
    stops once the budget is spent: the current point is reported with the
    frames done so far and later points are dropped.  Such output depends
    on machine speed.
    """
    rate = simulation_rate(code) if rate is None else rate
    pool = ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(code,)) if workers > 1 else None
    if pool is None:
        _init_worker(code)
    points = []
    end = None if time_budget is None else time.monotonic() + time_budget
    out_of_time = False
    try:
        for pi, snr in enumerate(cfg.snr_db_list):
            if out_of_time:
                break
            sigma = noise_sigma(rate, snr)
            frames = bit_err = frame_err = iter_sum = 0
            next_frame = 0
            done = False
            while not done:
                wave = []
                for _ in range(max(1, workers)):
                    if next_frame >= cfg.max_frames:
                        break
                    stop = min(next_frame + cfg.batch, cfg.max_frames)
                    wave.append((sigma, cfg.seed, pi, next_frame, stop, cfg.max_iterations, cfg.early_stop))
                    next_frame = stop
                if not wave:
                    break
                results = pool.map(_run_batch, wave) if pool else map(_run_batch, wave)
                for errs, ferr, its in results:
                    for e, fe, it in zip(errs.tolist(), ferr.tolist(), its.tolist()):
                        if done:
                            break
                        frames += 1
                        bit_err += e
                        frame_err += int(fe)
                        iter_sum += it
                        done = frames >= cfg.max_frames or frame_err >= cfg.max_errors
                if end is not None and not done and time.monotonic() > end:
                    done = out_of_time = True
            point = BerPoint(
                snr_db=snr,
                frames=frames,
                bit_errors=bit_err,
                frame_errors=frame_err,
                ber=bit_err / (frames * code.n_bits),
                fer=frame_err / frames,
                avg_iterations=iter_sum / frames,
            )
            points.append(point)
            if progress:
                progress(point)
    finally:
        if pool:
            pool.shutdown()
    return points


def default_workers() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def points_to_csv(points: Sequence[BerPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for p in points:
        w.writerow([repr(p.snr_db), p.frames, p.bit_errors, p.frame_errors, repr(p.ber), repr(p.fer), repr(p.avg_iterations)])
    return buf.getvalue()


def write_csv(path: str | Path, points: Sequence[BerPoint]) -> None:
    Path(path).write_text(points_to_csv(points), encoding="utf-8")


def read_csv(path: str | Path) -> list[BerPoint]:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [
        BerPoint(float(r["snr_db"]), int(r["frames"]), int(r["bit_errors"]), int(r["frame_errors"]),
                 float(r["ber"]), float(r["fer"]), float(r["avg_iterations"]))
        for r in rows
    ]
