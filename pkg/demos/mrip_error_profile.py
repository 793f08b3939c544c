# How often do the k most reliable independent positions carry wrong hard
# decisions? This is the quantity that decides how small the deviation
# budget of the constrained search can be.

from softdec import ChannelParams, build_scheme, mrip_error_stats

EBN0_DB = 3.0
TRIALS = 200_000

print(f"P(j errors | MRIP) at Eb/N0 = {EBN0_DB} dB, {TRIALS} trials each:")
print(f"{'scheme':34s} {'frame':12s}" + "".join(f"  j={j}" for j in range(6)) + "   CCDF(4)")
for name, frame in [
    ("ebch_128_36", "conventional"),
    ("concat_128_36_hamming84", "improved"),
    ("concat_128_36_block1685", "improved"),
    ("concat_128_36_conv214", "improved"),
    ("concat_128_36_conv216", "improved"),
]:
    sch = build_scheme(name)
    params = ChannelParams(ebn0_db=EBN0_DB, rate=sch.rate, seed=7)
    inner = sch.inner if frame == "improved" else None
    st = mrip_error_stats(sch.generator, inner, params, TRIALS, workers=2)
    cells = "".join(f" {st['pj'][j]:.3g}" for j in range(6))
    print(f"{name:34s} {frame:12s}{cells}   {st['ccdf'][4]:.3g}")
