"""Soft-in soft-out inner decoding.

Small block codes are decoded by exact a-posteriori marginalization over
the full codeword table; unterminated convolutional codes by a single
log-domain BCJR pass (forward recursion pinned to state 0, backward
recursion uniform over all states). Outputs are per-code-bit LLRs with
positive values favouring bit 0.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import _kernels
from .channel import ChannelParams, channel_llr, transmit
from .codes import ConvCodeSpec, InnerCodeKind, block_code_table


class SisoError(ValueError):
    pass


_EXP_FLOOR = 1e-300  # keeps log() finite; caps LLR magnitudes near 700


def _table_llrs(scores: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Exact APP LLRs from per-codeword scores (rows of `scores` are
    independent chunks). One exp pass plus two mask matmuls per chunk;
    a floor on the summed likelihood bounds LLR magnitudes instead of
    letting them overflow in the noise-free limit."""
    mx = scores.max(axis=1, keepdims=True)
    ex = np.exp(scores - mx)             # (B, M)
    m0 = (table == 0).astype(np.float64)  # (M, cw)
    s0 = ex @ m0
    s1 = ex @ (1.0 - m0)
    return np.log(np.maximum(s0, _EXP_FLOOR)) - np.log(np.maximum(s1, _EXP_FLOOR))


def block_siso(r_chunk, code_table, sigma_sq: float) -> np.ndarray:
    """Exact APP LLRs for one block-code chunk.

    code_table holds all codewords (one per row, uniform prior). The LLR of
    bit j is log-sum-exp of r.s(c)/sigma^2 over codewords with c_j = 0 minus
    the same over c_j = 1.
    """
    r = np.asarray(r_chunk, dtype=np.float64)
    table = np.asarray(code_table, dtype=np.uint8)
    if table.ndim != 2 or table.shape[0] == 0:
        raise SisoError("empty codeword table")
    if table.shape[1] != r.size:
        raise SisoError(f"chunk length {r.size} != codeword length {table.shape[1]}")
    signs = 1.0 - 2.0 * table
    scores = (signs @ (r / sigma_sq))[None, :]
    return _table_llrs(scores, table)[0]


def block_siso_cascade(r, kind: InnerCodeKind, sigma_sq: float) -> np.ndarray:
    """Chunk-wise exact SISO across a cascade of identical block codes."""
    table, signs_t = _cascade_table(kind)
    cw = 2 * kind.chunk_bits
    r = np.asarray(r, dtype=np.float64)
    if r.size % cw:
        raise SisoError(f"length {r.size} not a multiple of chunk size {cw}")
    chunks = r.reshape(-1, cw)
    scores = chunks @ signs_t / sigma_sq          # (nchunks, M)
    return _table_llrs(scores, table).reshape(-1)


@lru_cache(maxsize=8)
def _cascade_table(kind: InnerCodeKind) -> tuple[np.ndarray, np.ndarray]:
    table = block_code_table(kind)
    return table, np.ascontiguousarray((1.0 - 2.0 * table).T)


@lru_cache(maxsize=8)
def conv_trellis(spec: ConvCodeSpec) -> tuple[np.ndarray, np.ndarray]:
    """(next_state, output_bits) tables indexed by [state, input].

    State bit i holds the input from i+1 steps back; output bit b of a
    transition is the generator-b tap combination of input and state.
    """
    m = spec.memory
    S = 1 << m
    g0, g1 = spec.taps()
    ns = np.zeros((S, 2), dtype=np.int64)
    ob = np.zeros((S, 2, 2), dtype=np.uint8)
    for s in range(S):
        sbits = [(s >> i) & 1 for i in range(m)]
        for u in (0, 1):
            o0 = g0[0] * u
            o1 = g1[0] * u
            for j in range(1, m + 1):
                o0 ^= g0[j] & sbits[j - 1]
                o1 ^= g1[j] & sbits[j - 1]
            ns[s, u] = ((s << 1) | u) & (S - 1)
            ob[s, u, 0] = o0
            ob[s, u, 1] = o1
    return ns, ob


def bcjr_siso(r, spec: ConvCodeSpec, sigma_sq: float) -> np.ndarray:
    """Exact per-coded-bit posterior LLRs of the unterminated trellis."""
    r = np.asarray(r, dtype=np.float64)
    if r.size % 2:
        raise SisoError("received length must be even (two samples per section)")
    if not np.isfinite(r).all():
        raise SisoError("received vector contains non-finite samples")
    ns, ob = conv_trellis(spec)
    return _kernels.bcjr_llrs(r, sigma_sq, ns, ob)


def inner_siso_llrs(r, kind: InnerCodeKind, sigma_sq: float) -> np.ndarray:
    """SISO LLRs for the full inner-coded vector, any inner kind."""
    if kind.chunk_bits is not None:
        return block_siso_cascade(r, kind, sigma_sq)
    return bcjr_siso(r, kind.conv_spec, sigma_sq)


def estimate_llr_moments(kind: InnerCodeKind | None, es_n0_db: float,
                         trials: int = 20000, n: int = 128,
                         seed: int = 0) -> tuple[float, float]:
    """Sample mean and variance of SISO output LLRs under all-zero
    transmission at the given per-symbol SNR. kind=None is the uncoded
    channel observation."""
    if trials < 1:
        raise SisoError("trials must be positive")
    params = ChannelParams.from_esn0(es_n0_db, seed=seed)
    sigma_sq = params.sigma_sq
    zero = np.zeros(n, dtype=np.uint8)
    count = 0
    s1 = 0.0
    s2 = 0.0
    for t in range(trials):
        r = transmit(zero, params, trial=t)
        if kind is None:
            llr = channel_llr(r, sigma_sq)
        else:
            llr = inner_siso_llrs(r, kind, sigma_sq)
        s1 += llr.sum()
        s2 += (llr * llr).sum()
        count += llr.size
    mean = s1 / count
    var = s2 / count - mean * mean
    return mean, var
