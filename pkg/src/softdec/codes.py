"""Binary code constructions: eBCH(128,k), the four inner codes, and
RS-outer/binary-inner concatenations, each exposed as a generator matrix
plus an encoder.

All matrices are numpy uint8 arrays; everything is immutable after
construction and safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .gf import FieldSpec, RsSpec, gf_mul, rs_encode, symbols_to_bits


class CodeError(ValueError):
    """Domain or construction error in code building."""


# ---------------------------------------------------------------------------
# GF(2) linear algebra helpers


def gf2_rank(mat: np.ndarray) -> int:
    m = np.array(mat, dtype=np.uint8) & 1
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = np.nonzero(m[r:, c])[0]
        if piv.size == 0:
            continue
        piv = piv[0] + r
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        hits = np.nonzero(m[:, c])[0]
        hits = hits[hits != r]
        m[hits] ^= m[r]
        r += 1
    return r


def gf2_rref(mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2); returns (rref, pivot columns)."""
    m = np.array(mat, dtype=np.uint8) & 1
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = np.nonzero(m[r:, c])[0]
        if piv.size == 0:
            continue
        piv = piv[0] + r
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        hits = np.nonzero(m[:, c])[0]
        hits = hits[hits != r]
        m[hits] ^= m[r]
        pivots.append(c)
        r += 1
    return m, pivots


@dataclass(frozen=True)
class GeneratorMatrix:
    """k x n binary generator matrix with linearly independent rows."""

    rows: np.ndarray

    def __post_init__(self):
        rows = np.ascontiguousarray(np.asarray(self.rows, dtype=np.uint8) & 1)
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        if rows.ndim != 2:
            raise CodeError("generator matrix must be 2-D")
        if gf2_rank(rows) != self.k:
            raise CodeError(f"rows are not linearly independent (rank < {self.k})")

    @classmethod
    def trusted(cls, rows: np.ndarray) -> "GeneratorMatrix":
        """Wrap rows already known to have full rank (e.g. systematic
        output of the frame reduction); skips the rank re-check."""
        obj = object.__new__(cls)
        rows = np.ascontiguousarray(rows, dtype=np.uint8)
        rows.setflags(write=False)
        object.__setattr__(obj, "rows", rows)
        return obj

    @property
    def k(self) -> int:
        return self.rows.shape[0]

    @property
    def n(self) -> int:
        return self.rows.shape[1]

    def encode(self, message) -> np.ndarray:
        msg = np.asarray(message, dtype=np.uint8)
        if msg.shape[-1] != self.k:
            raise CodeError(f"message length {msg.shape[-1]} != k={self.k}")
        return (msg @ self.rows) % 2

    def parity_check(self) -> np.ndarray:
        """An (n-k) x n parity-check matrix H with G H^T = 0."""
        rref, pivots = gf2_rref(self.rows)
        free = [c for c in range(self.n) if c not in pivots]
        h = np.zeros((self.n - self.k, self.n), dtype=np.uint8)
        for i, fc in enumerate(free):
            h[i, fc] = 1
            for r, pc in enumerate(pivots):
                h[i, pc] = rref[r, fc]
        return h

    def contains(self, word) -> bool:
        h = getattr(self, "_h", None)
        if h is None:
            h = self.parity_check()
            object.__setattr__(self, "_h", h)
        w = np.asarray(word, dtype=np.uint8)
        return not ((h @ w) % 2).any()


def save_generator_hex(g: GeneratorMatrix, path) -> None:
    """Plain-text interchange: header "k n", then one hex row per line.

    Row bits are read left to right in groups of four, first bit most
    significant within its nibble; the final nibble is zero-padded.
    """
    width = -(-g.n // 4)
    with open(path, "w") as fh:
        fh.write(f"{g.k} {g.n}\n")
        for row in g.rows:
            val = 0
            for b in row:
                val = (val << 1) | int(b)
            val <<= 4 * width - g.n
            fh.write(f"{val:0{width}x}\n")


def load_generator_hex(path) -> GeneratorMatrix:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise CodeError(f"bad header in {path!r}")
        k, n = int(header[0]), int(header[1])
        rows = np.zeros((k, n), dtype=np.uint8)
        for i in range(k):
            line = fh.readline().strip()
            if not line:
                raise CodeError(f"missing row {i} in {path!r}")
            val = int(line, 16) >> (4 * len(line) - n)
            for j in range(n):
                rows[i, j] = (val >> (n - 1 - j)) & 1
    return GeneratorMatrix(rows)


# ---------------------------------------------------------------------------
# eBCH(128, k)

_BCH_T = {64: 10, 36: 15, 22: 23}


def _bch_generator_poly(k: int) -> np.ndarray:
    """Generator polynomial of the (127, k) BCH code, ascending GF(2) coeffs."""
    f = FieldSpec(7)
    n = 127
    t = _BCH_T[k]
    seen = set()
    g = [1]
    for j in range(1, 2 * t + 1):
        coset = set()
        c = j
        while c not in coset:
            coset.add(c)
            c = (2 * c) % n
        key = frozenset(coset)
        if key in seen:
            continue
        seen.add(key)
        mp = [1]
        for i in sorted(coset):
            root = f.alpha_pow(i)
            ng = [0] * (len(mp) + 1)
            for d, co in enumerate(mp):
                ng[d + 1] ^= co
                ng[d] ^= gf_mul(co, root, f)
            mp = ng
        if any(v not in (0, 1) for v in mp):
            raise CodeError("minimal polynomial has coefficients outside GF(2)")
        out = [0] * (len(g) + len(mp) - 1)
        for a, ga in enumerate(g):
            if ga:
                for b, mb in enumerate(mp):
                    out[a + b] ^= mb
        g = out
    if len(g) - 1 != n - k:
        raise CodeError(f"BCH degree {len(g) - 1} != {n - k}")
    return np.array(g, dtype=np.uint8)


@lru_cache(maxsize=None)
def ebch_generator(k: int) -> GeneratorMatrix:
    """(128, k) extended BCH generator: cyclic BCH(127,k) rows plus an
    overall even-parity bit. Supported k: 22, 36, 64."""
    if k not in _BCH_T:
        raise CodeError(f"unsupported eBCH dimension k={k} (supported: 22, 36, 64)")
    g = _bch_generator_poly(k)
    rows = np.zeros((k, 128), dtype=np.uint8)
    for i in range(k):
        rows[i, i:i + g.size] = g
        rows[i, 127] = rows[i, :127].sum() % 2
    return GeneratorMatrix(rows)


# ---------------------------------------------------------------------------
# Inner codes

# (8,4,4) extended Hamming, systematic.
G_HAMMING_8_4 = np.array(
    [
        [1, 0, 0, 0, 0, 1, 1, 1],
        [0, 1, 0, 0, 1, 0, 1, 1],
        [0, 0, 1, 0, 1, 1, 0, 1],
        [0, 0, 0, 1, 1, 1, 1, 0],
    ],
    dtype=np.uint8,
)

# (16,8,5) block code: the [17,9,5] quadratic-residue code
# (g(x) = x^8+x^5+x^4+x^3+1, a factor of x^17+1) systematized and shortened
# at its first message coordinate. Brute-force minimum distance 5, verified
# at import time below.
G_BLOCK_16_8 = np.array(
    [
        [1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 1, 0],
        [0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 1],
        [0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1],
        [0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 1, 1, 0, 1, 1],
        [0, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 1, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 1, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 1, 0, 0, 1],
    ],
    dtype=np.uint8,
)


@dataclass(frozen=True)
class ConvCodeSpec:
    """Rate-1/2 feedforward convolutional code, zero start, no termination.

    Generators are octal in the usual most-significant-first notation:
    octal 23 with memory 4 reads 10011 -> 1 + D^3 + D^4. Output order per
    input bit: generator-0 bit then generator-1 bit.
    """

    memory: int
    g0_octal: int
    g1_octal: int

    def taps(self) -> tuple[np.ndarray, np.ndarray]:
        def bits(o):
            s = format(o, "b").zfill(self.memory + 1)
            if len(s) != self.memory + 1:
                raise CodeError(f"generator {o:o} does not fit memory {self.memory}")
            return np.array([int(c) for c in s], dtype=np.uint8)  # D^0..D^m

        return bits(self.g0_octal), bits(self.g1_octal)

    def num_states(self) -> int:
        return 1 << self.memory


CONV_2_1_4 = ConvCodeSpec(memory=4, g0_octal=0o23, g1_octal=0o35)
CONV_2_1_6 = ConvCodeSpec(memory=6, g0_octal=0o133, g1_octal=0o171)


class InnerCodeKind(Enum):
    """The four rate-1/2 inner codes (cascade layout for the block kinds,
    one unterminated stream for the convolutional kinds)."""

    EXT_HAMMING_8_4 = "hamming84"
    BLOCK_16_8 = "block1685"
    CONV_2_1_4 = "conv214"
    CONV_2_1_6 = "conv216"

    @property
    def chunk_bits(self) -> int | None:
        if self is InnerCodeKind.EXT_HAMMING_8_4:
            return 4
        if self is InnerCodeKind.BLOCK_16_8:
            return 8
        return None

    @property
    def conv_spec(self) -> ConvCodeSpec | None:
        if self is InnerCodeKind.CONV_2_1_4:
            return CONV_2_1_4
        if self is InnerCodeKind.CONV_2_1_6:
            return CONV_2_1_6
        return None

    @property
    def block_generator(self) -> np.ndarray | None:
        if self is InnerCodeKind.EXT_HAMMING_8_4:
            return G_HAMMING_8_4
        if self is InnerCodeKind.BLOCK_16_8:
            return G_BLOCK_16_8
        return None


def conv_encode(bits, spec: ConvCodeSpec) -> np.ndarray:
    """Unterminated rate-1/2 encoding: L input bits -> 2L output bits."""
    u = np.asarray(bits, dtype=np.uint8)
    g0, g1 = spec.taps()
    o0 = np.convolve(u, g0) % 2
    o1 = np.convolve(u, g1) % 2
    out = np.empty(2 * u.size, dtype=np.uint8)
    out[0::2] = o0[: u.size]
    out[1::2] = o1[: u.size]
    return out


def inner_encode(bits, kind: InnerCodeKind) -> np.ndarray:
    """Encode k_in bits to 2*k_in bits with the chosen inner code."""
    u = np.asarray(bits, dtype=np.uint8)
    cb = kind.chunk_bits
    if cb is not None:
        if u.size % cb:
            raise CodeError(f"input length {u.size} not a multiple of {cb}")
        g = kind.block_generator
        chunks = u.reshape(-1, cb)
        return ((chunks @ g) % 2).reshape(-1)
    return conv_encode(u, kind.conv_spec)


def block_code_table(kind: InnerCodeKind) -> np.ndarray:
    """All codewords of a cascade inner code's base block code, message order."""
    g = kind.block_generator
    if g is None:
        raise CodeError(f"{kind} is not a block cascade code")
    k = g.shape[0]
    msgs = ((np.arange(1 << k)[:, None] >> np.arange(k)[None, :]) & 1).astype(np.uint8)
    return (msgs @ g) % 2


# ---------------------------------------------------------------------------
# Concatenated codes


@dataclass(frozen=True)
class ConcatSpec:
    """RS outer code composed with a rate-1/2 binary inner code.

    k = k_out*m message bits; the RS codeword expands (LSB-first per
    symbol) to k_in = n_out*m bits which feed the inner encoder, so
    n = 2*k_in.
    """

    outer: RsSpec
    inner: InnerCodeKind

    @property
    def m(self) -> int:
        return self.outer.field.m

    @property
    def k(self) -> int:
        return self.outer.k_out * self.m

    @property
    def k_in(self) -> int:
        return self.outer.n_out * self.m

    @property
    def n(self) -> int:
        return 2 * self.k_in

    def __post_init__(self):
        cb = self.inner.chunk_bits
        if cb is not None and self.k_in % cb:
            raise CodeError(
                f"inner chunk size {cb} incompatible with k_in={self.k_in}"
            )


def concat_encode(message, spec: ConcatSpec) -> np.ndarray:
    """message bits -> RS symbols -> RS codeword -> bits -> inner encoding."""
    msg = np.asarray(message, dtype=np.uint8)
    if msg.shape != (spec.k,):
        raise CodeError(f"message length {msg.size} != k={spec.k}")
    m = spec.m
    syms = np.zeros(spec.outer.k_out, dtype=np.int64)
    for i in range(m):
        syms |= msg[i::m].astype(np.int64) << i
    cw_syms = rs_encode(syms, spec.outer)
    return inner_encode(symbols_to_bits(cw_syms, m), spec.inner)


def derive_generator(spec: ConcatSpec) -> GeneratorMatrix:
    """Generator matrix of the overall binary code: row i encodes e_i."""
    rows = np.zeros((spec.k, spec.n), dtype=np.uint8)
    e = np.zeros(spec.k, dtype=np.uint8)
    for i in range(spec.k):
        e[:] = 0
        e[i] = 1
        rows[i] = concat_encode(e, spec)
    try:
        return GeneratorMatrix(rows)
    except CodeError as exc:
        raise CodeError(f"concatenated encoder is rank deficient: {exc}") from exc


def min_distance_bruteforce(g: GeneratorMatrix) -> int:
    """Exact minimum nonzero codeword weight by enumerating all 2^k codewords."""
    if g.k > 20:
        raise CodeError(f"k={g.k} too large for brute force (limit 20)")
    msgs = ((np.arange(1, 1 << g.k)[:, None] >> np.arange(g.k)[None, :]) & 1).astype(np.uint8)
    weights = ((msgs @ g.rows) % 2).sum(axis=1)
    return int(weights.min())


# Shipped inner block matrices are load-bearing; fail fast if edited badly.
if min_distance_bruteforce(GeneratorMatrix(G_HAMMING_8_4)) != 4:
    raise CodeError("(8,4) matrix does not have minimum distance 4")
if min_distance_bruteforce(GeneratorMatrix(G_BLOCK_16_8)) != 5:
    raise CodeError("(16,8) matrix does not have minimum distance 5")


# ---------------------------------------------------------------------------
# The code family studied in the experiments


def rs_16_9() -> RsSpec:
    return RsSpec(FieldSpec(4), n_out=16, k_out=9, shorten_by=-1)


def rs_16_6() -> RsSpec:
    return RsSpec(FieldSpec(4), n_out=16, k_out=6, shorten_by=-1)


def rs_26_13() -> RsSpec:
    return RsSpec(FieldSpec(5), n_out=26, k_out=13, shorten_by=5)
