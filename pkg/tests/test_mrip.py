"""MRIP frame construction against hand-worked elimination oracles."""

import numpy as np
import pytest

from softdec.channel import ChannelParams
from softdec.codes import GeneratorMatrix, G_BLOCK_16_8, ebch_generator
from softdec.mrip import (MripError, build_frame, estimate_mrip_bit_error,
                          frame_pipeline, mrip_error_stats)


class TestBuildFrame:
    def test_hand_oracle_4_2(self):
        # reliabilities (0.2, 1.5, 0.7, 0.9) sort to positions (1,3,2,0);
        # columns 1 and 3 are independent, so the order stands and row
        # reduction gives [[1,0,1,0],[0,1,1,1]]
        g = GeneratorMatrix(np.array([[1, 0, 1, 1], [0, 1, 1, 0]], dtype=np.uint8))
        r = np.array([0.2, 1.5, 0.7, 0.9])
        frame = build_frame(r, r, g)
        assert frame.perm.tolist() == [1, 3, 2, 0]
        assert frame.g_sys.rows.tolist() == [[1, 0, 1, 0], [0, 1, 1, 1]]

    def test_dependency_skip_oracle(self):
        # reliabilities sort to (0,1,2,3); column 1 is zero (dependent), so
        # the selection takes columns 0 and 2
        g = GeneratorMatrix(np.array([[1, 0, 1, 0], [1, 0, 0, 1]], dtype=np.uint8))
        r = np.array([0.9, 0.8, 0.1, 0.05])
        frame = build_frame(r, r, g)
        assert frame.perm.tolist() == [0, 2, 1, 3]

    def test_identity_when_sorted_and_independent(self):
        g = GeneratorMatrix(np.array([[1, 0, 1, 1], [0, 1, 1, 0]], dtype=np.uint8))
        r = np.array([2.0, 1.5, 0.7, 0.2])
        frame = build_frame(r, r, g)
        assert frame.perm.tolist() == [0, 1, 2, 3]

    def test_tie_stability(self):
        # equal reliabilities keep the lower original index first
        g = GeneratorMatrix(np.array([[1, 0, 1, 0], [0, 1, 0, 1]], dtype=np.uint8))
        r = np.array([0.5, 0.5, 0.5, 0.5])
        frame = build_frame(r, r, g)
        assert frame.perm.tolist() == [0, 1, 2, 3]

    def test_frame_invariants_random(self):
        g = ebch_generator(36)
        h = g.parity_check()
        rng = np.random.default_rng(20)
        for _ in range(50):
            r = rng.normal(0, 1, 128)
            frame = build_frame(r, r, g)
            k = frame.k
            assert np.array_equal(frame.g_sys.rows[:, :k], np.eye(k, dtype=np.uint8))
            rel = frame.rel_perm[:k]
            assert (np.diff(rel) <= 1e-15).all()
            assert np.array_equal(frame.z, (frame.r_perm < 0).astype(np.uint8))
            # every row of g_sys is a permuted codeword of the original code
            for row in frame.g_sys.rows[:: 9]:
                orig = frame.unpermute(row)
                assert not ((h @ orig) % 2).any()

    def test_round_trip_membership(self):
        g = GeneratorMatrix(G_BLOCK_16_8)
        h = g.parity_check()
        rng = np.random.default_rng(21)
        for _ in range(1000):
            r = rng.normal(0, 1, 16)
            frame = build_frame(r, r, g)
            msg = rng.integers(0, 2, 8).astype(np.uint8)
            cw_perm = frame.g_sys.encode(msg)
            assert not ((h @ frame.unpermute(cw_perm)) % 2).any()

    def test_improved_frame_uses_source_signs(self):
        g = GeneratorMatrix(np.array([[1, 0, 1, 1], [0, 1, 1, 0]], dtype=np.uint8))
        r = np.array([0.5, -0.4, 0.3, 0.2])
        llr = np.array([-3.0, 2.0, 1.0, 0.5])   # disagrees with r signs
        frame = build_frame(llr, r, g)
        assert frame.z.tolist() == [1, 0, 0, 0]          # signs of llr, permuted
        assert np.array_equal(frame.r_perm, r[frame.perm])  # metric weights stay channel

    def test_rank_deficient_rejected(self):
        g = GeneratorMatrix(np.array([[1, 0, 1, 1], [0, 1, 1, 0]], dtype=np.uint8))
        with pytest.raises(MripError):
            build_frame(np.ones(3), np.ones(3), g)


class TestMripStats:
    def test_noiseless(self):
        g = GeneratorMatrix(G_BLOCK_16_8)
        p = ChannelParams(ebn0_db=100.0, rate=0.5, seed=1)
        st = mrip_error_stats(g, None, p, 500)
        assert st["pj"][0] == 1.0
        assert (st["ccdf"] == 0).all()

    def test_ccdf_includes_zero_term_and_monotone(self):
        g = GeneratorMatrix(G_BLOCK_16_8)
        p = ChannelParams(ebn0_db=1.0, rate=0.5, seed=2)
        st = mrip_error_stats(g, None, p, 4000)
        assert st["ccdf"][0] == pytest.approx(1.0 - st["pj"][0])
        assert (np.diff(st["ccdf"]) <= 1e-12).all()

    def test_worker_determinism(self):
        g = GeneratorMatrix(G_BLOCK_16_8)
        p = ChannelParams(ebn0_db=2.0, rate=0.5, seed=3)
        a = mrip_error_stats(g, None, p, 2000, workers=1)
        b = mrip_error_stats(g, None, p, 2000, workers=2)
        assert np.array_equal(a["pj"], b["pj"])

    def test_pipeline_shapes(self):
        g = ebch_generator(36)
        p = ChannelParams(ebn0_db=3.0, rate=36 / 128, seed=4)
        frame, cw, r = frame_pipeline(g, None, p, 0)
        assert frame.n == 128 and cw.size == 128 and r.size == 128
        assert g.contains(cw)


class TestOrderedBitError:
    def test_frozen_erfc_value(self):
        # 0.5*erfc(1) computed independently to 17 digits
        assert estimate_mrip_bit_error(4.0) == pytest.approx(0.07864960352514257, abs=1e-12)

    def test_limits_and_monotonicity(self):
        assert estimate_mrip_bit_error(1e8) < 1e-300
        assert estimate_mrip_bit_error(2.0) > estimate_mrip_bit_error(3.0)
        with pytest.raises(MripError):
            estimate_mrip_bit_error(0.0)
