"""Monte Carlo experiment engine.

A campaign runs the full pipeline per trial (random message -> encode ->
AWGN -> optional inner SISO -> MRIP frame -> tree search) over a sweep of
Eb/N0 points, accumulating block errors, complexity counters, and the
maximum-likelihood lower bound (trials whose winner strictly beat the
transmitted codeword on the search metric).

Determinism: trial t of point p draws from the stream
(seed*1_000_003 + p, t) regardless of worker count; trials are sharded in
fixed-size chunks and the stop rule (max_block_errors) is evaluated on
round boundaries, so identical configs give identical stats.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .astar import DecoderConfig, astar_decode, correlation_discrepancy
from .channel import ChannelParams
from .codes import (ConcatSpec, GeneratorMatrix, InnerCodeKind, derive_generator,
                    ebch_generator, rs_16_6, rs_16_9, rs_26_13)
from .mrip import frame_pipeline


class SimError(ValueError):
    pass


# ---------------------------------------------------------------------------
# scheme registry


@dataclass(frozen=True)
class Scheme:
    name: str
    generator: GeneratorMatrix
    inner: InnerCodeKind | None     # None for plain eBCH
    d_min: int                      # 0 when unknown

    @property
    def k(self) -> int:
        return self.generator.k

    @property
    def n(self) -> int:
        return self.generator.n

    @property
    def rate(self) -> float:
        return self.k / self.n


_EBCH_DMIN = {22: 48, 36: 32, 64: 22}


@lru_cache(maxsize=None)
def build_scheme(name: str) -> Scheme:
    if name.startswith("ebch_128_"):
        k = int(name.rsplit("_", 1)[1])
        return Scheme(name, ebch_generator(k), None, _EBCH_DMIN[k])
    concat_map = {
        "concat_128_36_hamming84": (rs_16_9, InnerCodeKind.EXT_HAMMING_8_4, 32),
        "concat_128_36_block1685": (rs_16_9, InnerCodeKind.BLOCK_16_8, 0),
        "concat_128_36_conv214": (rs_16_9, InnerCodeKind.CONV_2_1_4, 0),
        "concat_128_36_conv216": (rs_16_9, InnerCodeKind.CONV_2_1_6, 0),
        "concat_128_24_conv214": (rs_16_6, InnerCodeKind.CONV_2_1_4, 0),
        "concat_128_24_conv216": (rs_16_6, InnerCodeKind.CONV_2_1_6, 0),
        "concat_260_65_conv214": (rs_26_13, InnerCodeKind.CONV_2_1_4, 0),
        "concat_260_65_conv216": (rs_26_13, InnerCodeKind.CONV_2_1_6, 0),
    }
    if name not in concat_map:
        raise SimError(f"unknown scheme {name!r}")
    outer_fn, inner, d_min = concat_map[name]
    g = derive_generator(ConcatSpec(outer=outer_fn(), inner=inner))
    return Scheme(name, g, inner, d_min)


SCHEME_NAMES = (
    "ebch_128_22", "ebch_128_36", "ebch_128_64",
    "concat_128_36_hamming84", "concat_128_36_block1685",
    "concat_128_36_conv214", "concat_128_36_conv216",
    "concat_128_24_conv214", "concat_128_24_conv216",
    "concat_260_65_conv214", "concat_260_65_conv216",
)


# ---------------------------------------------------------------------------
# campaign configuration and results


@dataclass(frozen=True)
class SimConfig:
    scheme: str
    frame: str                      # "conventional" | "improved"
    decoder: DecoderConfig
    ebn0_points: tuple
    max_trials: int
    max_block_errors: int = 200
    seed: int = 0
    chunk_size: int = 2000

    def __post_init__(self):
        if self.frame not in ("conventional", "improved"):
            raise SimError(f"unknown frame kind {self.frame!r}")
        if self.max_trials < 1:
            raise SimError("max_trials must be >= 1")
        sch = build_scheme(self.scheme)
        if self.frame == "improved" and sch.inner is None:
            raise SimError(f"scheme {self.scheme!r} has no inner code for improved frames")
        if self.decoder.stopping == "codeword" and sch.d_min == 0 and self.decoder.d_min == 0:
            raise SimError(f"scheme {self.scheme!r} has unknown d_min; use alpha stopping")
        object.__setattr__(self, "ebn0_points", tuple(float(p) for p in self.ebn0_points))


@dataclass
class PointStats:
    ebn0_db: float
    trials: int = 0
    block_errors: int = 0
    ml_bound_errors: int = 0
    edges_total: int = 0
    comparisons_total: int = 0
    nodes_dropped: int = 0

    @property
    def bler(self) -> float:
        return self.block_errors / self.trials if self.trials else 0.0

    @property
    def ml_bound_rate(self) -> float:
        return self.ml_bound_errors / self.trials if self.trials else 0.0

    def edges_per_msg_bit(self, k: int) -> float:
        return self.edges_total / (self.trials * k) if self.trials else 0.0

    def comparisons_per_msg_bit(self, k: int) -> float:
        return self.comparisons_total / (self.trials * k) if self.trials else 0.0

    def real_ops_per_msg_bit(self, k: int) -> float:
        return self.edges_per_msg_bit(k) + self.comparisons_per_msg_bit(k)

    def merge(self, other: "PointStats") -> None:
        self.trials += other.trials
        self.block_errors += other.block_errors
        self.ml_bound_errors += other.ml_bound_errors
        self.edges_total += other.edges_total
        self.comparisons_total += other.comparisons_total
        self.nodes_dropped += other.nodes_dropped


@dataclass
class SimStats:
    config: SimConfig
    points: list = field(default_factory=list)

    def to_records(self, schema_version: int = 1) -> list[dict]:
        sch = build_scheme(self.config.scheme)
        recs = []
        for p in self.points:
            recs.append({
                "schema_version": schema_version,
                "scheme": self.config.scheme,
                "frame": self.config.frame,
                "constraint": self.config.decoder.constraint,
                "lambda": self.config.decoder.lam,
                "stack_policy": self.config.decoder.stack_policy,
                "stack_capacity": self.config.decoder.stack_capacity,
                "stopping": self.config.decoder.stopping,
                "alpha": self.config.decoder.alpha,
                "seed": self.config.seed,
                "ebn0_db": p.ebn0_db,
                "trials": p.trials,
                "block_errors": p.block_errors,
                "bler": p.bler,
                "ml_bound_errors": p.ml_bound_errors,
                "ml_bound_rate": p.ml_bound_rate,
                "edges_per_msg_bit": p.edges_per_msg_bit(sch.k),
                "comparisons_per_msg_bit": p.comparisons_per_msg_bit(sch.k),
                "real_ops_per_msg_bit": p.real_ops_per_msg_bit(sch.k),
                "nodes_dropped": p.nodes_dropped,
            })
        return recs


def ml_lower_bound(point: PointStats) -> float:
    """Error-rate floor from trials whose winner strictly beat the true
    codeword on the search metric; a lower bound on any decoder's BLER."""
    return point.ml_bound_rate


def _effective_decoder(config: SimConfig) -> DecoderConfig:
    dec = config.decoder
    if dec.stopping == "codeword" and dec.d_min == 0:
        dec = dataclasses.replace(dec, d_min=build_scheme(config.scheme).d_min)
    return dec


def _run_chunk(scheme_name: str, frame_kind: str, dec: DecoderConfig,
               ebn0_db: float, point_seed: int, lo: int, hi: int) -> PointStats:
    sch = build_scheme(scheme_name)
    params = ChannelParams(ebn0_db=ebn0_db, rate=sch.rate, seed=point_seed)
    inner = sch.inner if frame_kind == "improved" else None
    st = PointStats(ebn0_db=ebn0_db)
    for t in range(lo, hi):
        frame, cw, _ = frame_pipeline(sch.generator, inner, params, t)
        res = astar_decode(frame.r_perm, frame, dec)
        st.trials += 1
        st.edges_total += res.edges_visited
        st.comparisons_total += res.comparisons
        st.nodes_dropped += res.nodes_dropped
        if not np.array_equal(res.codeword, cw):
            st.block_errors += 1
            true_metric = correlation_discrepancy(frame.r_perm, cw[frame.perm], frame.z)
            if res.metric < true_metric:
                st.ml_bound_errors += 1
    return st


def run_campaign(config: SimConfig, workers: int = 1, progress=None) -> SimStats:
    """Run every Eb/N0 point of the campaign; deterministic per config."""
    dec = _effective_decoder(config)
    stats = SimStats(config=config)
    for idx, ebn0 in enumerate(config.ebn0_points):
        point_seed = config.seed * 1_000_003 + idx
        point = PointStats(ebn0_db=ebn0)
        chunk = config.chunk_size
        starts = list(range(0, config.max_trials, chunk))
        if workers <= 1:
            for lo in starts:
                hi = min(lo + chunk, config.max_trials)
                point.merge(_run_chunk(config.scheme, config.frame, dec,
                                       ebn0, point_seed, lo, hi))
                if progress:
                    progress(config, point)
                if point.block_errors >= config.max_block_errors:
                    break
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                pos = 0
                stop = False
                while pos < len(starts) and not stop:
                    round_starts = starts[pos:pos + workers]
                    futs = [
                        pool.submit(_run_chunk, config.scheme, config.frame, dec,
                                    ebn0, point_seed, lo,
                                    min(lo + chunk, config.max_trials))
                        for lo in round_starts
                    ]
                    for f in futs:
                        point.merge(f.result())
                    pos += len(round_starts)
                    if progress:
                        progress(config, point)
                    if point.block_errors >= config.max_block_errors:
                        stop = True
        stats.points.append(point)
    return stats


def compare_stacks(scheme: str, ebn0_points, lam: int = 4,
                   frame: str = "conventional", stopping: str = "codeword",
                   alpha: float = 0.0, max_trials: int = 200000,
                   max_block_errors: int = 200, seed: int = 0,
                   workers: int = 1,
                   modified_capacity: int = 60000,
                   conventional_capacity: int = 30000) -> tuple[SimStats, SimStats]:
    """Paired same-seed campaigns: modified (append-bottom) stack versus the
    conventional ordered stack, PC-out with the given budget."""
    base = dict(constraint="pc_out", lam=lam, stopping=stopping, alpha=alpha)
    cfg_mod = SimConfig(
        scheme=scheme, frame=frame,
        decoder=DecoderConfig(stack_policy="append_bottom",
                              stack_capacity=modified_capacity, **base),
        ebn0_points=tuple(ebn0_points), max_trials=max_trials,
        max_block_errors=max_block_errors, seed=seed)
    cfg_conv = SimConfig(
        scheme=scheme, frame=frame,
        decoder=DecoderConfig(stack_policy="ordered",
                              stack_capacity=conventional_capacity, **base),
        ebn0_points=tuple(ebn0_points), max_trials=max_trials,
        max_block_errors=max_block_errors, seed=seed)
    return (run_campaign(cfg_mod, workers=workers),
            run_campaign(cfg_conv, workers=workers))
