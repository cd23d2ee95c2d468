"""Compiled inner loops of the GLDPC decoder.

Forward-backward runs on normalized probabilities (the exponentiated log
metrics rescaled at every section), which is the same arithmetic as the
log-domain recursion without a transcendental per state.  Messages travel
as likelihood ratios clipped to exp(+-CLIP).  A row whose sums underflow is
recomputed with exact log-domain max*.
"""

from __future__ import annotations

import math

import numba as nb
import numpy as np

CLIP = 50.0
# reassociation only; infinities and NaNs keep their IEEE meaning
RMAX = math.exp(CLIP)
RMIN = math.exp(-CLIP)
FAST = {"reassoc", "contract", "nsz", "arcp"}


@nb.njit(cache=True)
def _maxstar(a, b):
    if a == -np.inf:
        return b
    if b == -np.inf:
        return a
    if a > b:
        return a + math.log1p(math.exp(b - a))
    return b + math.log1p(math.exp(a - b))


@nb.njit(cache=True)
def _row_log(llr, cols, size, out):
    n = llr.shape[0]
    alpha = np.full((n + 1, size), -np.inf)
    alpha[0, 0] = 0.0
    for t in range(n):
        h = cols[t]
        top = -np.inf
        for s in range(size):
            v = _maxstar(alpha[t, s], alpha[t, s ^ h] - llr[t])
            alpha[t + 1, s] = v
            if v > top:
                top = v
        for s in range(size):
            alpha[t + 1, s] -= top
    beta = np.full(size, -np.inf)
    beta[0] = 0.0
    nxt = np.empty(size)
    for t in range(n - 1, -1, -1):
        h = cols[t]
        zero = -np.inf
        one = -np.inf
        for s in range(size):
            zero = _maxstar(zero, alpha[t, s] + beta[s])
            one = _maxstar(one, alpha[t, s] + beta[s ^ h])
        e = zero - one if one != -np.inf else CLIP
        out[t] = min(CLIP, max(-CLIP, e))
        top = -np.inf
        for s in range(size):
            v = _maxstar(beta[s], beta[s ^ h] - llr[t])
            nxt[s] = v
            if v > top:
                top = v
        for s in range(size):
            beta[s] = nxt[s] - top


@nb.njit(cache=True, fastmath=FAST)
def _row(ratio, cols, size, out, alpha, beta, nxt, w0, w1):
    """Probability-domain forward-backward on likelihood ratios P(0)/P(1).

    Inputs and outputs are ratios clipped to [RMIN, RMAX].  Returns False
    when a section sum underflows.
    """
    n = ratio.shape[0]
    for t in range(n):
        inv = 1.0 / (1.0 + ratio[t])
        w0[t] = ratio[t] * inv
        w1[t] = inv
    for s in range(size):
        alpha[0, s] = 0.0
    alpha[0, 0] = 1.0
    for t in range(n):
        h = cols[t]
        a0 = w0[t]
        a1 = w1[t]
        total = 0.0
        for s in range(size):
            v = alpha[t, s] * a0 + alpha[t, s ^ h] * a1
            alpha[t + 1, s] = v
            total += v
        if total == 0.0:
            return False
        inv = 1.0 / total
        for s in range(size):
            alpha[t + 1, s] *= inv
    for s in range(size):
        beta[s] = 0.0
    beta[0] = 1.0
    for t in range(n - 1, -1, -1):
        h = cols[t]
        a0 = w0[t]
        a1 = w1[t]
        zero = 0.0
        one = 0.0
        total = 0.0
        for s in range(size):
            a = alpha[t, s]
            b = beta[s]
            bh = beta[s ^ h]
            zero += a * b
            one += a * bh
            v = b * a0 + bh * a1
            nxt[s] = v
            total += v
        if (zero == 0.0 and one == 0.0) or total == 0.0:
            return False
        if one <= zero * RMIN:
            out[t] = RMAX
        elif zero <= one * RMIN:
            out[t] = RMIN
        else:
            out[t] = min(RMAX, max(RMIN, zero / one))
        inv = 1.0 / total
        for s in range(size):
            beta[s] = nxt[s] * inv
    return True


@nb.njit(cache=True)
def _row_fallback(ratio, cols, size, out):
    n = ratio.shape[0]
    llr = np.empty(n)
    for t in range(n):
        llr[t] = math.log(ratio[t])
    ext = np.empty(n)
    _row_log(llr, cols, size, ext)
    for t in range(n):
        out[t] = math.exp(ext[t])


@nb.njit(cache=True)
def extrinsic_rows(llr, cols, size):
    """Extrinsic LLRs for each row of ``llr`` (inputs are clipped first)."""
    rows, n = llr.shape
    out = np.empty((rows, n))
    alpha = np.empty((n + 1, size))
    beta = np.empty(size)
    nxt = np.empty(size)
    w0 = np.empty(n)
    w1 = np.empty(n)
    x = np.empty(n)
    ext = np.empty(n)
    for r in range(rows):
        for t in range(n):
            x[t] = math.exp(min(CLIP, max(-CLIP, llr[r, t])))
        if not _row(x, cols, size, ext, alpha, beta, nxt, w0, w1):
            _row_fallback(x, cols, size, ext)
        for t in range(n):
            out[r, t] = math.log(ext[t])
    return out


@nb.njit(cache=True)
def decode_frames(ch, bits, partner, g_lo, g_n, g_size, g_cols, g_cols_lo, sockets_of_bit,
                  max_iterations, early_stop, hard, iters, converged):
    """Flooding decoder over a batch of frames.

    Group ``g`` owns sockets ``g_lo[g]:g_lo[g+1]`` in rows of ``g_n[g]``
    positions; ``g_cols`` holds each group's parity-check columns as integers.
    Messages are likelihood ratios, so an iteration needs no exp or log.
    """
    frames, n_bits = ch.shape
    n_sock = bits.shape[0]
    groups = g_n.shape[0]
    max_n = 0
    max_size = 1
    for g in range(groups):
        max_n = max(max_n, g_n[g])
        max_size = max(max_size, g_size[g])
    alpha = np.empty((max_n + 1, max_size))
    beta = np.empty(max_size)
    nxt = np.empty(max_size)
    w0 = np.empty(max_n)
    w1 = np.empty(max_n)
    x = np.empty(max_n)
    ext = np.empty(max_n)
    msg = np.empty(n_sock)
    new = np.empty(n_sock)
    c = np.empty(n_bits)
    for f in range(frames):
        for e in range(n_bits):
            llr = min(CLIP, max(-CLIP, ch[f, e]))
            c[e] = math.exp(llr)
            hard[f, e] = 1 if llr < 0 else 0
        for s in range(n_sock):
            msg[s] = 1.0
        iters[f] = 0
        converged[f] = False
        for it in range(1, max_iterations + 1):
            for g in range(groups):
                n = g_n[g]
                size = g_size[g]
                cols = g_cols[g_cols_lo[g] : g_cols_lo[g] + n]
                for base in range(g_lo[g], g_lo[g + 1], n):
                    for t in range(n):
                        sk = base + t
                        x[t] = min(RMAX, max(RMIN, c[bits[sk]] * msg[partner[sk]]))
                    xv = x[:n]
                    ev = ext[:n]
                    if not _row(xv, cols, size, ev, alpha, beta, nxt, w0, w1):
                        _row_fallback(xv, cols, size, ev)
                    for t in range(n):
                        new[base + t] = ev[t]
            for s in range(n_sock):
                msg[s] = new[s]
            for e in range(n_bits):
                total = c[e] * msg[sockets_of_bit[e, 0]] * msg[sockets_of_bit[e, 1]]
                hard[f, e] = 1 if total < 1.0 else 0
            ok = True
            for g in range(groups):
                if not ok:
                    break
                n = g_n[g]
                cols = g_cols[g_cols_lo[g] : g_cols_lo[g] + n]
                for base in range(g_lo[g], g_lo[g + 1], n):
                    syn = 0
                    for t in range(n):
                        if hard[f, bits[base + t]]:
                            syn ^= cols[t]
                    if syn != 0:
                        ok = False
                        break
            iters[f] = it
            converged[f] = ok
            if ok and early_stop:
                break
