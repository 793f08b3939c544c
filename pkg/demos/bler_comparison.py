# Small BLER sweep comparing the eBCH benchmark against a concatenated
# code with the improved frame, plus the two stack designs head to head.
# Trial counts here are kept small; the CLI runs the full campaigns.

from softdec import DecoderConfig, SimConfig, compare_stacks, run_campaign

POINTS = (2.0, 2.5)
TRIALS = 4000

print(f"BLER over {POINTS} dB, up to {TRIALS} trials per point\n")
for scheme, frame, lam in [("ebch_128_36", "conventional", 4),
                           ("concat_128_36_conv216", "improved", 4)]:
    cfg = SimConfig(
        scheme=scheme, frame=frame,
        decoder=DecoderConfig(constraint="pc_out", lam=lam,
                              stack_policy="append_bottom",
                              stack_capacity=60000, stopping="none"),
        ebn0_points=POINTS, max_trials=TRIALS, max_block_errors=200, seed=1)
    stats = run_campaign(cfg, workers=2)
    for pt in stats.points:
        print(f"  {scheme:26s} {frame:12s} {pt.ebn0_db:.1f} dB  "
              f"BLER {pt.bler:.4g} ({pt.block_errors}/{pt.trials})  "
              f"ml-bound {pt.ml_bound_rate:.4g}  "
              f"ops/bit {pt.real_ops_per_msg_bit(36):.0f}")

print("\nmodified(60000) vs conventional(30000) stack, eBCH PC-out-4:")
mod, conv = compare_stacks("ebch_128_36", (2.0,), lam=4, stopping="codeword",
                           max_trials=TRIALS, max_block_errors=400, seed=2,
                           workers=2)
pm, pc = mod.points[0], conv.points[0]
print(f"  modified:     BLER {pm.bler:.4g}, ops/bit {pm.real_ops_per_msg_bit(36):.0f}")
print(f"  conventional: BLER {pc.bler:.4g}, ops/bit {pc.real_ops_per_msg_bit(36):.0f}")
