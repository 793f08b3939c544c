"""Priority-first search decoding over the MRIP code tree.

The search follows the classic stack algorithm: pop the top node, extend
its two children, keep the hard-decision-agreeing child on top, and either
insert the other child by metric order (conventional stack) or append it
to the bottom (modified, unordered stack). Optional path constraints limit
deviations from the hard decision over the k message positions (PC), or
complete a path immediately once it reaches the deviation budget (PC-out).
Two early-stopping rules certify the current best codeword: the
minimum-distance threshold and the fraction-of-total-reliability
threshold.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .mrip import MripFrame


class DecodeError(ValueError):
    pass


_POLICY = {"ordered": _kernels.POLICY_ORDERED, "append_bottom": _kernels.POLICY_APPEND_BOTTOM}
_CONSTRAINT = {"none": _kernels.CONSTRAINT_NONE, "pc": _kernels.CONSTRAINT_PC,
               "pc_out": _kernels.CONSTRAINT_PC_OUT}
_STOPPING = {"none": _kernels.STOP_NONE, "codeword": _kernels.STOP_CODEWORD,
             "alpha": _kernels.STOP_ALPHA}

_MAX_ARENA = 4_000_000


@dataclass(frozen=True)
class DecoderConfig:
    """Search configuration.

    lam is the deviation budget for the "pc"/"pc_out" constraints;
    stopping "codeword" needs the code's minimum distance, "alpha" the
    reliability fraction in [0, 1). disable_best_prune waives every
    best-metric deletion (test instrumentation for search-order checks);
    record_goals captures per-goal deviation counts.
    """

    lam: int = 0
    constraint: str = "none"
    stack_policy: str = "append_bottom"
    stack_capacity: int = 60000
    stopping: str = "none"
    d_min: int = 0
    alpha: float = 0.0
    disable_best_prune: bool = False
    record_goals: bool = False
    max_goals: int = 0
    max_nodes: int = 0

    def __post_init__(self):
        if self.constraint not in _CONSTRAINT:
            raise DecodeError(f"unknown constraint {self.constraint!r}")
        if self.stack_policy not in _POLICY:
            raise DecodeError(f"unknown stack policy {self.stack_policy!r}")
        if self.stopping not in _STOPPING:
            raise DecodeError(f"unknown stopping mode {self.stopping!r}")
        if self.lam < 0:
            raise DecodeError("lam must be >= 0")
        if self.stack_capacity < 2:
            raise DecodeError("stack capacity must be >= 2")
        if not 0.0 <= self.alpha < 1.0:
            raise DecodeError("alpha must lie in [0, 1)")
        # d_min == 0 with codeword stopping is allowed here so campaign
        # configs can late-bind the scheme's minimum distance; decode-time
        # validation catches a still-missing value


@dataclass
class DecodeResult:
    codeword: np.ndarray          # original position order
    metric: float
    ml_certified: bool
    edges_visited: int
    comparisons: int
    nodes_dropped: int
    goal_sequence: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int16))
    goal_last_bit_deviates: np.ndarray = field(default_factory=lambda: np.zeros(0, np.uint8))
    goals_evaluated: int = 0

    def trace_dict(self) -> dict:
        return {
            "metric": float(self.metric),
            "ml_certified": bool(self.ml_certified),
            "edges_visited": int(self.edges_visited),
            "comparisons": int(self.comparisons),
            "nodes_dropped": int(self.nodes_dropped),
            "goals_evaluated": int(self.goals_evaluated),
            "goal_sequence": [int(v) for v in self.goal_sequence],
            "goal_last_bit_deviates": [int(v) for v in self.goal_last_bit_deviates],
            "codeword": [int(b) for b in self.codeword],
        }


def correlation_discrepancy(r_hat, c_hat, z_hat) -> float:
    """Sum of |r_hat_j| over the positions where c and z disagree."""
    r = np.asarray(r_hat, dtype=np.float64)
    c = np.asarray(c_hat, dtype=np.uint8)
    z = np.asarray(z_hat, dtype=np.uint8)
    if not (r.size == c.size == z.size):
        raise DecodeError("length mismatch")
    return float(np.abs(r)[c != z].sum())


def ml_threshold_codeword(r_hat, c_hat, z_hat, d_min: int) -> float:
    """Sufficient-condition threshold: a codeword whose discrepancy does not
    exceed it is maximum likelihood. Zero when d_H(c, z) already reaches
    d_min (the criterion can then never fire)."""
    r = np.abs(np.asarray(r_hat, dtype=np.float64))
    c = np.asarray(c_hat, dtype=np.uint8)
    z = np.asarray(z_hat, dtype=np.uint8)
    q = d_min - int((c != z).sum())
    if q <= 0:
        return 0.0
    agreeing = np.sort(r[c == z])
    return float(agreeing[:q].sum())


def ml_threshold_alpha(r_hat, alpha: float) -> float:
    """Codeword-independent threshold: alpha times the total reliability."""
    if not 0.0 <= alpha < 1.0:
        raise DecodeError("alpha must lie in [0, 1)")
    return float(alpha * np.abs(np.asarray(r_hat, dtype=np.float64)).sum())


# ---------------------------------------------------------------------------
# workspace reuse (arena + stack buffers are large; allocate once per thread)

_tls = threading.local()


def _arena_bound(k: int, lam_eff: int) -> int:
    total = 1
    for d in range(1, k):
        layer = 0
        for j in range(min(lam_eff, d) + 1):
            layer += math.comb(d, j)
            if total + layer > _MAX_ARENA:
                return _MAX_ARENA
        total += layer
    return min(total + 2 * k + 4, _MAX_ARENA)


def _workspace(capacity: int, max_nodes: int, flip_width: int, max_goals: int):
    cache = getattr(_tls, "cache", None)
    if cache is None:
        cache = {}
        _tls.cache = cache
    key = (capacity, max_nodes, flip_width, max_goals)
    ws = cache.get(key)
    if ws is None:
        ws = dict(
            ametric=np.zeros(max_nodes, dtype=np.float64),
            adepth=np.zeros(max_nodes, dtype=np.int16),
            adev=np.zeros(max_nodes, dtype=np.int16),
            aflips=np.zeros((max_nodes, flip_width), dtype=np.int16),
            s_metric=np.zeros(2 * capacity + 8, dtype=np.float64),
            s_node=np.zeros(2 * capacity + 8, dtype=np.int32),
            dq=np.zeros(capacity, dtype=np.int32),
            goal_devs=np.zeros(max_goals, dtype=np.int16),
            goal_lastflip=np.zeros(max_goals, dtype=np.uint8),
        )
        if len(cache) > 8:
            cache.clear()
        cache[key] = ws
    return ws


def astar_decode(r_hat, frame: MripFrame, config: DecoderConfig) -> DecodeResult:
    """Decode the permuted received vector against the frame's code tree.

    Returns the minimum-discrepancy codeword over the searched candidate
    set, mapped back to original position order. Capacity overflow drops
    nodes (counted, never fatal)."""
    r = np.asarray(r_hat, dtype=np.float64)
    n, k = frame.n, frame.k
    if r.size != n:
        raise DecodeError(f"r_hat length {r.size} != n={n}")
    if k < 2:
        raise DecodeError("code dimension must be at least 2")
    if config.stopping == "codeword" and config.d_min <= 0:
        raise DecodeError("codeword stopping requires d_min > 0")
    w = np.abs(r)
    wsort = np.argsort(w, kind="stable")
    gsys = frame.g_sys.rows
    pmat = np.ascontiguousarray(gsys[:, k:])
    z = np.ascontiguousarray(frame.z, dtype=np.uint8)

    lam_eff = k if config.constraint == "none" else min(config.lam, k)
    flip_width = k if config.constraint == "none" else min(k, config.lam + 2)
    max_nodes = config.max_nodes or _arena_bound(k, lam_eff)
    # keep the arena under ~256 MB; overflow degrades to counted drops
    mem_cap = (256 << 20) // (12 + 2 * flip_width)
    max_nodes = max(min(max_nodes, mem_cap), 4 * k + 8)
    max_goals = config.max_goals
    if config.record_goals and max_goals == 0:
        max_goals = min(1 << min(k, 20), 1 << 20)
    ws = _workspace(config.stack_capacity, max_nodes, flip_width, max_goals)

    (best_flips, nbest, best_metric, certified, edges, comparisons, dropped,
     ngoals, ok) = _kernels.astar_search(
        w, z, pmat, wsort,
        _POLICY[config.stack_policy], _CONSTRAINT[config.constraint],
        config.lam, config.stack_capacity,
        _STOPPING[config.stopping], config.d_min, config.alpha,
        config.disable_best_prune,
        config.record_goals,
        ws["goal_devs"], ws["goal_lastflip"],
        ws["ametric"], ws["adepth"], ws["adev"], ws["aflips"],
        ws["s_metric"], ws["s_node"], ws["dq"],
    )
    if not ok:
        raise DecodeError("search exhausted its node arena before any goal")

    best_msg = z[:k].copy()
    for i in range(int(nbest)):
        best_msg[best_flips[i]] ^= 1
    cw_perm = (best_msg @ gsys) % 2
    stored = min(ngoals, max_goals)
    return DecodeResult(
        codeword=frame.unpermute(cw_perm.astype(np.uint8)),
        metric=float(best_metric),
        ml_certified=bool(certified),
        edges_visited=int(edges),
        comparisons=int(comparisons),
        nodes_dropped=int(dropped),
        goal_sequence=ws["goal_devs"][:stored].copy(),
        goal_last_bit_deviates=ws["goal_lastflip"][:stored].copy(),
        goals_evaluated=int(ngoals),
    )


def osd_candidate_count(k: int, lam: int) -> int:
    """Size of the order-lam search space: sum of C(k, j) for j <= lam."""
    return sum(math.comb(k, j) for j in range(min(lam, k) + 1))


def osd_decode(r_hat, frame: MripFrame, lam: int) -> DecodeResult:
    """Reference ordered-statistics decoder: test every message pattern
    within Hamming distance lam of the hard decision on the MRIP bits and
    return the minimum-discrepancy codeword.

    Independent of the tree search on purpose; edges_visited reports the
    number of candidates evaluated.
    """
    r = np.asarray(r_hat, dtype=np.float64)
    n, k = frame.n, frame.k
    if r.size != n:
        raise DecodeError(f"r_hat length {r.size} != n={n}")
    if lam > k:
        raise DecodeError(f"lam={lam} exceeds k={k}")
    w = np.abs(r)
    z = frame.z.astype(np.uint8)
    rows = frame.g_sys.rows

    base = (z[:k] @ rows) % 2
    b = base ^ z                       # disagreement pattern of the 0-flip candidate
    m0 = float(w[b == 1].sum())
    v = w * (1.0 - 2.0 * b)            # metric delta per flipped-in position

    best = m0
    best_flips: tuple[int, ...] = ()
    candidates = 1

    if lam >= 1:
        deltas = rows.astype(np.float64) @ v
        candidates += k
        i = int(np.argmin(deltas))
        if m0 + deltas[i] < best:
            best = m0 + deltas[i]
            best_flips = (i,)

    for size in range(2, lam + 1):
        for combo in itertools.combinations(range(k), size - 1):
            lead = combo[-1]
            if lead + 1 >= k:
                continue
            acc = rows[combo[0]].copy()
            for idx in combo[1:]:
                acc ^= rows[idx]
            tail = rows[lead + 1:] ^ acc
            mets = m0 + tail.astype(np.float64) @ v
            candidates += mets.size
            j = int(np.argmin(mets))
            if mets[j] < best:
                best = float(mets[j])
                best_flips = combo + (lead + 1 + j,)

    msg = z[:k].copy()
    for i in best_flips:
        msg[i] ^= 1
    cw_perm = (msg @ rows) % 2
    return DecodeResult(
        codeword=frame.unpermute(cw_perm.astype(np.uint8)),
        metric=best,
        ml_certified=False,
        edges_visited=candidates,
        comparisons=0,
        nodes_dropped=0,
    )
