"""Most-reliable-independent-positions frame construction.

A frame is built either from the raw received samples (conventional) or
from inner-code SISO LLRs (improved): positions are stably sorted by
descending reliability magnitude, the first k linearly independent
generator columns are moved to the front preserving order, and the
generator is row-reduced so its first k columns form an identity. The
received vector, reliability magnitudes, and hard decisions are permuted
identically; hard decisions take the sign of the reliability source.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from . import _kernels
from .channel import ChannelParams, transmit
from .codes import GeneratorMatrix, InnerCodeKind
from .siso import inner_siso_llrs


class MripError(ValueError):
    pass


@dataclass(frozen=True)
class MripFrame:
    perm: np.ndarray       # original index of each permuted position
    g_sys: GeneratorMatrix
    r_perm: np.ndarray     # received samples, permuted
    rel_perm: np.ndarray   # reliability magnitudes, permuted
    z: np.ndarray          # hard decisions of the reliability source, permuted

    @property
    def n(self) -> int:
        return self.perm.size

    @property
    def k(self) -> int:
        return self.g_sys.k

    def inverse_perm(self) -> np.ndarray:
        inv = np.empty(self.n, dtype=np.int64)
        inv[self.perm] = np.arange(self.n)
        return inv

    def unpermute(self, word) -> np.ndarray:
        """Map a permuted-domain word back to original position order."""
        out = np.empty(self.n, dtype=np.asarray(word).dtype)
        out[self.perm] = word
        return out


def build_frame(reliability_source, r, g: GeneratorMatrix) -> MripFrame:
    """Build the search frame from a signed reliability vector.

    Pass the received samples themselves for the conventional frame, or the
    SISO LLR vector for the improved frame. Ties in reliability magnitude
    keep the lower original index first.
    """
    src = np.asarray(reliability_source, dtype=np.float64)
    rvec = np.asarray(r, dtype=np.float64)
    if src.size != g.n or rvec.size != g.n:
        raise MripError(f"length mismatch: source {src.size}, r {rvec.size}, n {g.n}")
    rel = np.abs(src)
    order = np.argsort(-rel, kind="stable")
    perm, gsys, ok = _kernels.mrb_systematize(g.rows, order)
    if not ok:
        raise MripError("generator matrix has rank below k")
    z = (src[perm] < 0).astype(np.uint8)
    return MripFrame(
        perm=perm,
        g_sys=GeneratorMatrix.trusted(gsys),
        r_perm=rvec[perm],
        rel_perm=rel[perm],
        z=z,
    )


def frame_pipeline(g: GeneratorMatrix, inner: InnerCodeKind | None,
                   params: ChannelParams, trial: int):
    """One trial of the common front end: random message -> encode ->
    transmit -> (SISO for improved frames) -> frame.

    Returns (frame, codeword, received). inner=None builds the
    conventional frame from the raw samples.
    """
    rng = params.rng(trial)
    msg = rng.integers(0, 2, size=g.k, dtype=np.uint8)
    cw = g.encode(msg)
    r = transmit(cw, params, rng=rng)
    if inner is None:
        source = r
    else:
        source = inner_siso_llrs(r, inner, params.sigma_sq)
    return build_frame(source, r, g), cw, r


def mrip_error_stats(g: GeneratorMatrix, inner: InnerCodeKind | None,
                     params: ChannelParams, trials: int,
                     workers: int = 1) -> dict:
    """Monte Carlo histogram of hard-decision errors on the k MRIP bits.

    Returns {"pj": P(j errors | MRIP) for j = 0..k, "ccdf": P(count > lam)
    for lam = 0..k, "trials": N}. The CCDF includes the j = 0 term:
    CCDF(lam) = 1 - sum_{j<=lam} P(j).
    """
    counts = np.zeros(g.k + 1, dtype=np.int64)
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        bounds = np.linspace(0, trials, workers + 1, dtype=np.int64)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [
                pool.submit(_stats_chunk, g.rows, inner, params, int(lo), int(hi))
                for lo, hi in zip(bounds[:-1], bounds[1:])
            ]
            for f in futs:
                counts += f.result()
    else:
        counts = _stats_chunk(g.rows, inner, params, 0, trials)
    pj = counts / trials
    ccdf = 1.0 - np.cumsum(pj)
    ccdf[np.abs(ccdf) < 1e-15] = 0.0
    return {"pj": pj, "ccdf": ccdf, "trials": trials}


def _stats_chunk(g_rows, inner, params, lo, hi):
    g = GeneratorMatrix(g_rows)
    counts = np.zeros(g.k + 1, dtype=np.int64)
    for t in range(lo, hi):
        frame, cw, _ = frame_pipeline(g, inner, params, t)
        errs = int((frame.z[: g.k] != cw[frame.perm[: g.k]]).sum())
        counts[errs] += 1
    return counts


def estimate_mrip_bit_error(mu: float) -> float:
    """Model bit error rate of an ordered-LLR position with mean mu:
    p = erfc(sqrt(mu)/2) / 2."""
    if mu <= 0:
        raise MripError(f"ordered-LLR mean must be positive, got {mu}")
    return 0.5 * erfc(np.sqrt(mu) / 2.0)
