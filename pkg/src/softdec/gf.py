"""GF(2^m) arithmetic and Reed-Solomon encoding.

Field elements are integers in [0, 2^m): bit i is the coefficient of x^i
in the polynomial basis. Addition is XOR; multiplication uses exp/log
tables built from a primitive polynomial.

Reed-Solomon codes come in three flavours here, all systematic:

* natural length n = 2^m - 1 (narrow-sense, generator roots alpha..alpha^(n-k)),
* shortened (leading message symbols of the parent fixed to 0 and removed),
* singly extended to length 2^m (narrow-sense parent plus one appended
  overall sum-check symbol; the result stays MDS).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Standard primitive polynomials, bit i = coefficient of x^i.
PRIMITIVE_POLYS = {
    3: 0b1011,       # x^3 + x + 1
    4: 0b10011,      # x^4 + x + 1
    5: 0b100101,     # x^5 + x^2 + 1
    6: 0b1000011,    # x^6 + x + 1
    7: 0b10001001,   # x^7 + x^3 + 1
    8: 0b100011101,  # x^8 + x^4 + x^3 + x^2 + 1
}


class GfError(ValueError):
    """Domain error in field or RS-spec arguments."""


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^m) defined by a primitive polynomial.

    Builds exp/log tables once; the tables make mul/inv O(1) and are shared
    read-only (safe for concurrent use).
    """

    m: int
    primitive_poly: int = 0
    _exp: tuple = field(init=False, repr=False, compare=False, default=())
    _log: tuple = field(init=False, repr=False, compare=False, default=())

    def __post_init__(self):
        if not 2 <= self.m <= 8:
            raise GfError(f"extension degree {self.m} out of supported range 2..8")
        poly = self.primitive_poly or PRIMITIVE_POLYS[self.m]
        if not (poly >> self.m) & 1:
            raise GfError(f"polynomial {poly:#b} does not have degree {self.m}")
        object.__setattr__(self, "primitive_poly", poly)
        q = 1 << self.m
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for i in range(q - 1):
            if x == 1 and i > 0:
                raise GfError(f"{poly:#b} is not primitive: x has order {i} < {q - 1}")
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & q:
                x ^= poly
        if x != 1:
            raise GfError(f"{poly:#b} is not primitive over GF(2)")
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        object.__setattr__(self, "_exp", tuple(exp))
        object.__setattr__(self, "_log", tuple(log))

    @property
    def q(self) -> int:
        return 1 << self.m

    def alpha_pow(self, i: int) -> int:
        """alpha^i for any integer i (alpha = the root x of the primitive poly)."""
        return self._exp[i % (self.q - 1)]


def _check_element(a: int, spec: FieldSpec, name: str) -> None:
    if not 0 <= a < spec.q:
        raise GfError(f"{name}={a} outside GF(2^{spec.m})")


def gf_mul(a: int, b: int, spec: FieldSpec) -> int:
    """Product in GF(2^m): polynomial product mod the primitive polynomial."""
    _check_element(a, spec, "a")
    _check_element(b, spec, "b")
    if a == 0 or b == 0:
        return 0
    return spec._exp[spec._log[a] + spec._log[b]]


def gf_inv(a: int, spec: FieldSpec) -> int:
    """Multiplicative inverse; a must be nonzero."""
    _check_element(a, spec, "a")
    if a == 0:
        raise GfError("0 has no multiplicative inverse")
    return spec._exp[(spec.q - 1 - spec._log[a]) % (spec.q - 1)]


@dataclass(frozen=True)
class RsSpec:
    """Reed-Solomon code parameters over GF(2^m).

    n_out = 2^m - 1 - shorten_by; shorten_by = -1 selects the singly
    extended length-2^m construction. Symbol minimum distance is
    n_out - k_out + 1 in every case (MDS).
    """

    field: FieldSpec
    n_out: int
    k_out: int
    shorten_by: int = 0

    def __post_init__(self):
        natural = self.field.q - 1
        if self.n_out != natural - self.shorten_by:
            raise GfError(
                f"n_out={self.n_out} inconsistent with shorten_by={self.shorten_by} "
                f"(natural length {natural})"
            )
        if self.shorten_by < -1 or self.shorten_by >= natural:
            raise GfError(f"shorten_by={self.shorten_by} unsupported")
        if not 0 < self.k_out < self.n_out:
            raise GfError(f"k_out={self.k_out} out of range for n_out={self.n_out}")

    @property
    def extended(self) -> bool:
        return self.shorten_by == -1

    @property
    def symbol_distance(self) -> int:
        return self.n_out - self.k_out + 1

    @property
    def parent_k(self) -> int:
        """Dimension of the parent natural-length code that gets encoded."""
        return self.k_out + max(self.shorten_by, 0)

    def generator_poly(self) -> list[int]:
        """Generator polynomial of the parent code, ascending coefficients.

        Roots alpha^1 .. alpha^(n_parent - k_parent) of the narrow-sense
        parent of natural length 2^m - 1.
        """
        f = self.field
        nroots = (f.q - 1) - self.parent_k
        g = [1]
        for i in range(1, nroots + 1):
            root = f.alpha_pow(i)
            ng = [0] * (len(g) + 1)
            for j, c in enumerate(g):
                ng[j + 1] ^= c
                ng[j] ^= gf_mul(c, root, f)
            g = ng
        return g


def rs_encode(message, spec: RsSpec) -> np.ndarray:
    """Systematic RS encoding: k_out message symbols -> n_out codeword symbols.

    Layout: parity symbols first, then the message symbols verbatim; an
    extended code appends the overall sum-check symbol last. Shortened
    codes fix the leading (highest-position) parent message symbols to 0
    and drop them.
    """
    msg = np.asarray(message, dtype=np.int64)
    if msg.shape != (spec.k_out,):
        raise GfError(f"message length {msg.shape} != k_out={spec.k_out}")
    if msg.min(initial=0) < 0 or msg.max(initial=0) >= spec.field.q:
        raise GfError("message symbols outside the field")

    f = spec.field
    n_parent = f.q - 1
    k_parent = spec.parent_k
    npar = n_parent - k_parent
    g = spec.generator_poly()

    # parent codeword c(x) = m(x) x^npar + (m(x) x^npar mod g); shortened
    # message positions (the top ones) stay 0.
    work = np.zeros(n_parent, dtype=np.int64)
    work[npar:npar + spec.k_out] = msg
    rem = work.copy()
    for i in range(n_parent - 1, npar - 1, -1):
        c = int(rem[i])
        if c:
            for j, gc in enumerate(g):
                rem[i - npar + j] ^= gf_mul(c, gc, f)
    cw_parent = work
    cw_parent[:npar] = rem[:npar]

    if spec.extended:
        s = 0
        for v in cw_parent:
            s ^= int(v)
        return np.concatenate([cw_parent, [s]])
    if spec.shorten_by:
        return cw_parent[: spec.n_out]
    return cw_parent


def rs_check_values(codeword, spec: RsSpec) -> list[int]:
    """Evaluate the codeword at every parity check of the construction.

    Returns n_out - k_out field values, all zero for a valid codeword.
    For the natural/shortened codes these are evaluations at the parent
    roots alpha^1..alpha^(d-1) (shortened positions padded back with 0).
    For the extended code the alpha^0 (sum) check includes the appended
    symbol; the remaining checks alpha^1..alpha^(d-2) cover the first
    2^m - 1 symbols.
    """
    cw = np.asarray(codeword, dtype=np.int64)
    if cw.shape != (spec.n_out,):
        raise GfError(f"codeword length {cw.shape} != n_out={spec.n_out}")
    f = spec.field

    def eval_at(word, i):
        acc = 0
        for pos, sym in enumerate(word):
            if sym:
                acc ^= gf_mul(int(sym), f.alpha_pow(i * pos), f)
        return acc

    if spec.extended:
        body = cw[:-1]
        checks = [eval_at(body, 0) ^ int(cw[-1])]
        checks += [eval_at(body, i) for i in range(1, spec.symbol_distance - 1)]
        return checks
    parent = np.zeros(f.q - 1, dtype=np.int64)
    parent[: spec.n_out] = cw
    return [eval_at(parent, i) for i in range(1, spec.symbol_distance)]


def symbols_to_bits(symbols, m: int) -> np.ndarray:
    """Expand field symbols to bits, least-significant bit first per symbol."""
    syms = np.asarray(symbols, dtype=np.int64)
    out = np.zeros(syms.size * m, dtype=np.uint8)
    for i in range(m):
        out[i::m] = (syms >> i) & 1
    return out


def bits_to_symbols(bits, m: int) -> np.ndarray:
    """Inverse of :func:`symbols_to_bits`."""
    b = np.asarray(bits, dtype=np.int64)
    if b.size % m:
        raise GfError(f"bit length {b.size} not a multiple of m={m}")
    syms = np.zeros(b.size // m, dtype=np.int64)
    for i in range(m):
        syms |= b[i::m] << i
    return syms
