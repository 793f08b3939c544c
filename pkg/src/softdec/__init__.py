"""softdec: construction and soft-decision decoding of short binary block
codes (eBCH and Reed-Solomon/inner concatenations) with priority-first
tree search over most-reliable-basis frames, plus the Monte Carlo
machinery to measure block error rates and search complexity."""

from .analysis import LlrModel, monte_carlo_ordered_means, ordered_mean, ordered_means, ordered_pdf, predicted_curves
from .astar import (DecodeError, DecodeResult, DecoderConfig, astar_decode,
                    correlation_discrepancy, ml_threshold_alpha,
                    ml_threshold_codeword, osd_candidate_count, osd_decode)
from .channel import ChannelParams, channel_llr, modulate, transmit
from .codes import (CONV_2_1_4, CONV_2_1_6, ConcatSpec, ConvCodeSpec,
                    GeneratorMatrix, InnerCodeKind, block_code_table,
                    concat_encode, conv_encode, derive_generator,
                    ebch_generator, inner_encode, load_generator_hex,
                    min_distance_bruteforce, rs_16_6, rs_16_9, rs_26_13,
                    save_generator_hex)
from .gf import (FieldSpec, GfError, RsSpec, bits_to_symbols, gf_inv, gf_mul,
                 rs_check_values, rs_encode, symbols_to_bits)
from .mrip import (MripFrame, build_frame, estimate_mrip_bit_error,
                   frame_pipeline, mrip_error_stats)
from .sim import (SCHEME_NAMES, PointStats, Scheme, SimConfig, SimStats,
                  build_scheme, compare_stacks, ml_lower_bound, run_campaign)
from .siso import (bcjr_siso, block_siso, block_siso_cascade, conv_trellis,
                   estimate_llr_moments, inner_siso_llrs)

__version__ = "0.1.0"
