"""Tree-search decoder: metric, thresholds, oracle equivalence, search
order, constraints, and the OSD reference decoder."""

import numpy as np
import pytest

from softdec.astar import (DecodeError, DecoderConfig, astar_decode,
                           correlation_discrepancy, ml_threshold_alpha,
                           ml_threshold_codeword, osd_candidate_count,
                           osd_decode)
from softdec.channel import ChannelParams, transmit
from softdec.codes import (GeneratorMatrix, G_BLOCK_16_8, InnerCodeKind,
                           block_code_table)
from softdec.mrip import build_frame, frame_pipeline

G1685 = GeneratorMatrix(G_BLOCK_16_8)
TABLE = block_code_table(InnerCodeKind.BLOCK_16_8)
SIGNS = 1.0 - 2.0 * TABLE


def exhaustive_ml(r):
    """Independent oracle: minimize Euclidean distance over all codewords."""
    return TABLE[np.argmin(((r - SIGNS) ** 2).sum(axis=1))]


def unconstrained(policy, capacity=4096, **kw):
    return DecoderConfig(constraint="none", stack_policy=policy,
                         stack_capacity=capacity, **kw)


class TestMetric:
    def test_zero_when_equal(self):
        z = np.array([0, 1, 0], dtype=np.uint8)
        assert correlation_discrepancy(np.array([0.9, -0.4, 0.1]), z, z) == 0.0

    def test_single_term(self):
        r = np.array([0.9, -0.4, 0.1])
        z = np.array([0, 1, 0], dtype=np.uint8)
        c = np.array([0, 1, 1], dtype=np.uint8)
        assert correlation_discrepancy(r, c, z) == pytest.approx(0.1)

    def test_additivity_of_extra_flip(self):
        rng = np.random.default_rng(0)
        r = rng.normal(0, 1, 12)
        z = (r < 0).astype(np.uint8)
        c = z.copy()
        c[[2, 5]] ^= 1
        base = correlation_discrepancy(r, c, z)
        c2 = c.copy()
        c2[7] ^= 1
        assert correlation_discrepancy(r, c2, z) == pytest.approx(base + abs(r[7]))

    def test_length_mismatch(self):
        with pytest.raises(DecodeError):
            correlation_discrepancy(np.ones(3), np.zeros(4, np.uint8), np.zeros(3, np.uint8))


class TestThresholds:
    def test_codeword_threshold_hand_example(self):
        r = np.array([1.2, 1.0, 0.8, 0.6, 0.5, 0.4, 0.3, 0.2])
        z = np.zeros(8, dtype=np.uint8)
        c = z.copy()
        c[7] = 1   # disagreement only at the weakest position
        # q = 4 - 1 = 3; the three smallest agreeing weights are .3+.4+.5
        assert ml_threshold_codeword(r, c, z, d_min=4) == pytest.approx(1.2)

    def test_threshold_zero_when_budget_spent(self):
        r = np.ones(8)
        z = np.zeros(8, dtype=np.uint8)
        c = z.copy()
        c[:5] = 1
        assert ml_threshold_codeword(r, c, z, d_min=4) == 0.0

    def test_alpha_threshold(self):
        r = np.full(10, 1.0)
        assert ml_threshold_alpha(r, 0.0) == 0.0
        assert ml_threshold_alpha(r, 0.05) == pytest.approx(0.5)
        with pytest.raises(DecodeError):
            ml_threshold_alpha(r, 1.0)

    def test_certified_is_truly_ml(self):
        # whenever metric <= threshold, the codeword must equal exhaustive ML
        p = ChannelParams(ebn0_db=2.0, rate=0.5, seed=30)
        violations = 0
        fired = 0
        for t in range(20000):
            frame, cw, r = frame_pipeline(G1685, None, p, t)
            z = (r < 0).astype(np.uint8)
            ml = exhaustive_ml(r)
            met = correlation_discrepancy(r, ml, z)
            thr = ml_threshold_codeword(r, ml, z, d_min=5)
            if met <= thr:
                fired += 1
                if not np.array_equal(ml, exhaustive_ml(r)):
                    violations += 1
        assert violations == 0
        assert fired > 1000  # the criterion does fire at this SNR


class TestAstarDecode:
    def test_noiseless_certifies_immediately(self):
        p = ChannelParams(ebn0_db=90.0, rate=0.5, seed=1)
        frame, cw, _ = frame_pipeline(G1685, None, p, 0)
        cfg = DecoderConfig(constraint="none", stack_policy="append_bottom",
                            stack_capacity=512, stopping="codeword", d_min=5)
        res = astar_decode(frame.r_perm, frame, cfg)
        assert np.array_equal(res.codeword, cw)
        assert res.metric == 0.0
        assert res.ml_certified

    @pytest.mark.parametrize("policy", ["ordered", "append_bottom"])
    def test_matches_exhaustive_ml(self, policy):
        p = ChannelParams(ebn0_db=2.0, rate=0.5, seed=31)
        cfg = unconstrained(policy)
        for t in range(3000):
            frame, cw, r = frame_pipeline(G1685, None, p, t)
            res = astar_decode(frame.r_perm, frame, cfg)
            assert np.array_equal(res.codeword, exhaustive_ml(r))

    def test_metric_additivity_and_membership(self):
        p = ChannelParams(ebn0_db=1.0, rate=0.5, seed=32)
        cfg = unconstrained("append_bottom")
        for t in range(500):
            frame, cw, r = frame_pipeline(G1685, None, p, t)
            res = astar_decode(frame.r_perm, frame, cfg)
            assert G1685.contains(res.codeword)
            recomputed = correlation_discrepancy(
                frame.r_perm, res.codeword[frame.perm], frame.z)
            assert abs(res.metric - recomputed) < 1e-12

    def test_stopping_never_changes_answer(self):
        p = ChannelParams(ebn0_db=2.0, rate=0.5, seed=33)
        plain = unconstrained("append_bottom")
        stopping = unconstrained("append_bottom", stopping="codeword", d_min=5)
        saved = 0
        for t in range(1500):
            frame, cw, r = frame_pipeline(G1685, None, p, t)
            a = astar_decode(frame.r_perm, frame, plain)
            b = astar_decode(frame.r_perm, frame, stopping)
            assert np.array_equal(a.codeword, b.codeword)
            assert b.edges_visited <= a.edges_visited
            saved += a.edges_visited - b.edges_visited
        assert saved > 0

    def test_capacity_drops_counted_never_fatal(self):
        p = ChannelParams(ebn0_db=0.0, rate=0.5, seed=34)
        tiny = unconstrained("append_bottom", capacity=2)
        dropped = 0
        for t in range(200):
            frame, cw, r = frame_pipeline(G1685, None, p, t)
            res = astar_decode(frame.r_perm, frame, tiny)
            dropped += res.nodes_dropped
            assert G1685.contains(res.codeword)
        assert dropped > 0

    def test_theorem1_order_property(self):
        # append-bottom stack, pruning disabled: goal deviation counts are
        # non-decreasing after discounting goals whose last message bit
        # deviates (they ride along one layer early)
        p = ChannelParams(ebn0_db=2.0, rate=0.5, seed=35)
        cfg = DecoderConfig(constraint="none", stack_policy="append_bottom",
                            stack_capacity=8192, disable_best_prune=True,
                            record_goals=True)
        for t in range(300):
            frame, cw, r = frame_pipeline(G1685, None, p, t)
            res = astar_decode(frame.r_perm, frame, cfg)
            assert res.goals_evaluated == 256
            adjusted = res.goal_sequence.astype(int) - res.goal_last_bit_deviates.astype(int)
            assert (np.diff(adjusted) >= 0).all()

    def test_policies_agree_without_stopping(self):
        p = ChannelParams(ebn0_db=1.5, rate=0.5, seed=36)
        a = unconstrained("ordered")
        b = unconstrained("append_bottom")
        for t in range(800):
            frame, cw, r = frame_pipeline(G1685, None, p, t)
            ra = astar_decode(frame.r_perm, frame, a)
            rb = astar_decode(frame.r_perm, frame, b)
            assert np.array_equal(ra.codeword, rb.codeword)

    def test_pc_equals_osd_small_code(self):
        p = ChannelParams(ebn0_db=2.0, rate=0.5, seed=37)
        for lam in (1, 2, 3):
            cfg = DecoderConfig(constraint="pc", lam=lam,
                                stack_policy="append_bottom", stack_capacity=8192)
            for t in range(400):
                frame, cw, r = frame_pipeline(G1685, None, p, t)
                ra = astar_decode(frame.r_perm, frame, cfg)
                ro = osd_decode(frame.r_perm, frame, lam)
                assert ra.nodes_dropped == 0
                assert ra.metric == pytest.approx(ro.metric, abs=1e-12)

    def test_pc_out_equals_pc_metric(self):
        # both constraints optimize over the same candidate set
        p = ChannelParams(ebn0_db=2.0, rate=0.5, seed=38)
        for lam in (1, 2, 3):
            pc = DecoderConfig(constraint="pc", lam=lam,
                               stack_policy="append_bottom", stack_capacity=8192)
            out = DecoderConfig(constraint="pc_out", lam=lam,
                                stack_policy="append_bottom", stack_capacity=8192)
            for t in range(400):
                frame, cw, r = frame_pipeline(G1685, None, p, t)
                ra = astar_decode(frame.r_perm, frame, pc)
                rb = astar_decode(frame.r_perm, frame, out)
                assert ra.metric == pytest.approx(rb.metric, abs=1e-12)

    def test_pc_out_lambda_zero_is_reencoded_hard_decision(self):
        p = ChannelParams(ebn0_db=2.0, rate=0.5, seed=39)
        cfg = DecoderConfig(constraint="pc_out", lam=0,
                            stack_policy="append_bottom", stack_capacity=16)
        frame, cw, r = frame_pipeline(G1685, None, p, 0)
        res = astar_decode(frame.r_perm, frame, cfg)
        want = frame.unpermute(frame.g_sys.encode(frame.z[:8]))
        assert np.array_equal(res.codeword, want)


class TestOsd:
    def test_candidate_counts(self):
        assert osd_candidate_count(36, 4) == 66712
        assert osd_candidate_count(36, 3) == 7807
        assert osd_candidate_count(8, 8) == 256

    def test_lambda_zero(self):
        p = ChannelParams(ebn0_db=2.0, rate=0.5, seed=40)
        frame, cw, r = frame_pipeline(G1685, None, p, 1)
        res = osd_decode(frame.r_perm, frame, 0)
        want = frame.unpermute(frame.g_sys.encode(frame.z[:8]))
        assert np.array_equal(res.codeword, want)
        assert res.edges_visited == 1

    def test_full_order_equals_exhaustive_ml(self):
        p = ChannelParams(ebn0_db=2.0, rate=0.5, seed=41)
        for t in range(500):
            frame, cw, r = frame_pipeline(G1685, None, p, t)
            res = osd_decode(frame.r_perm, frame, 8)
            assert res.edges_visited == 256
            assert np.array_equal(res.codeword, exhaustive_ml(r))

    def test_candidate_count_reported(self):
        p = ChannelParams(ebn0_db=2.0, rate=0.5, seed=42)
        frame, cw, r = frame_pipeline(G1685, None, p, 0)
        res = osd_decode(frame.r_perm, frame, 3)
        assert res.edges_visited == osd_candidate_count(8, 3)


class TestConfigValidation:
    def test_rejects_bad_values(self):
        with pytest.raises(DecodeError):
            DecoderConfig(constraint="bogus")
        with pytest.raises(DecodeError):
            DecoderConfig(stack_capacity=1)
        with pytest.raises(DecodeError):
            DecoderConfig(alpha=1.5)
        with pytest.raises(DecodeError):
            DecoderConfig(lam=-1)

    def test_missing_d_min_caught_at_decode_time(self):
        p = ChannelParams(ebn0_db=2.0, rate=0.5, seed=43)
        frame, cw, _ = frame_pipeline(G1685, None, p, 0)
        cfg = DecoderConfig(stopping="codeword", d_min=0, stack_capacity=64)
        with pytest.raises(DecodeError):
            astar_decode(frame.r_perm, frame, cfg)
