"""End-to-end hybrid pipeline: secrecy premix, symbol packing, per-path encryption.

Data flow for one transmission:

* the input bytes become a bit string, followed by a single ``1`` and zero
  padding, and are cut into ``l`` equal rows (row j is message j);
* each row of ``N * k_b`` bits is read as ``N * k_b / u`` symbols of
  GF(2^u) and the ``l`` rows are mixed column-wise by the secrecy code;
* mixed rows are re-packed into bits and cut into ``N`` cipher blocks of
  ``k_b`` bits; rows routed to encrypted paths are enciphered block by block
  (``n_b`` bits each), the rest are sent as is.

``N`` is always a multiple of ``u / gcd(u, k_b)`` so that every row holds a
whole number of symbols.
"""
from __future__ import annotations

import dataclasses
import hashlib
import math
import struct

import numpy as np

from . import _bits
from ._rng import make_rng
from .cryptosys import Cipher
from .errors import DecodingFailure, DimensionError, FormatError, PaddingError, ParameterError
from .galois import GF
from .iscode import IsCode, is_decode, is_encode, iscode_build

TRANSMISSION_MAGIC = b"HNCT"
TRANSMISSION_VERSION = 1
FRAME_HEADER = struct.Struct("<I")


# ---------------------------------------------------------------------------
# symbol <-> bit packing
# ---------------------------------------------------------------------------


def symbols_per_block(k_b, u):
    return -(-k_b // u)


def _widths(count, k_b, u):
    widths = np.full(count, u, dtype=np.int64)
    widths[-1] = k_b - (count - 1) * u
    return widths


def pack_symbols_to_bits(symbols, k_b, u):
    """Pack ceil(k_b/u) symbols into k_b bits.

    Symbol j fills positions [j*u, (j+1)*u), most significant bit first; the
    last symbol only keeps its low ``k_b - (count-1)*u`` bits, and its
    dropped high bits must be zero.
    """
    symbols = np.asarray(symbols, dtype=np.int64).reshape(-1)
    count = symbols_per_block(k_b, u)
    if symbols.size != count:
        raise DimensionError(f"need {count} symbols for k_b={k_b}, u={u}, got {symbols.size}")
    last_width = k_b - (count - 1) * u
    if symbols.size and (symbols[-1] >> last_width):
        raise PaddingError("last symbol has nonzero bits beyond the block length")
    if symbols.size and (symbols.min() < 0 or symbols.max() >= 1 << u):
        raise DimensionError(f"symbol does not fit in {u} bits")
    full = symbols[: count - 1]
    shifts = np.arange(u - 1, -1, -1, dtype=np.int64)
    head = ((full[:, None] >> shifts[None, :]) & 1).reshape(-1)
    tail = (symbols[-1] >> np.arange(last_width - 1, -1, -1, dtype=np.int64)) & 1
    return np.concatenate([head, tail]).astype(np.uint8)


def unpack_bits_to_symbols(bits, k_b, u):
    """Exact inverse of :func:`pack_symbols_to_bits`."""
    bits = np.asarray(bits, dtype=np.int64).reshape(-1)
    if bits.size != k_b:
        raise DimensionError(f"need {k_b} bits, got {bits.size}")
    count = symbols_per_block(k_b, u)
    last_width = k_b - (count - 1) * u
    head = bits[: (count - 1) * u].reshape(count - 1, u)
    weights = 1 << np.arange(u - 1, -1, -1, dtype=np.int64)
    out = np.empty(count, dtype=np.int64)
    out[: count - 1] = head @ weights
    out[-1] = bits[(count - 1) * u:] @ (1 << np.arange(last_width - 1, -1, -1, dtype=np.int64))
    return out


def _rows_to_bits(symbols, u):
    """(rows, S) full-width symbols -> (rows, S*u) bits, MSB first per symbol."""
    shifts = np.arange(u - 1, -1, -1, dtype=np.int64)
    return ((symbols[:, :, None] >> shifts) & 1).reshape(symbols.shape[0], -1).astype(np.uint8)


def _bits_to_rows(bits, u):
    rows = bits.shape[0]
    weights = 1 << np.arange(u - 1, -1, -1, dtype=np.int64)
    return bits.reshape(rows, -1, u).astype(np.int64) @ weights


# ---------------------------------------------------------------------------
# configuration and containers
# ---------------------------------------------------------------------------


@dataclasses.dataclass(eq=False)
class HunccConfig:
    """Pipeline parameters.

    ``ciphers`` is one cipher shared by every encrypted path, or a list with
    one cipher per encrypted path.  ``encrypted`` lists the 1-based physical
    paths that carry ciphertext (default ``1..c``).
    """

    code: IsCode
    ciphers: object
    encrypted: tuple = None

    def __post_init__(self):
        c = self.code.c
        if c < 1:
            raise ParameterError("at least one path must be encrypted (c >= 1)")
        cips = self.ciphers
        if isinstance(cips, Cipher):
            cips = [cips] * c
        cips = list(cips)
        if len(cips) != c or not all(isinstance(x, Cipher) for x in cips):
            raise ParameterError(f"need one cipher or exactly c={c} ciphers")
        specs = {(x.k_b, x.n_b) for x in cips}
        if len(specs) != 1:
            raise ParameterError("all path ciphers must share k_b and n_b")
        self.path_ciphers = tuple(cips)
        if self.encrypted is None:
            self.encrypted = tuple(range(1, c + 1))
        enc = tuple(sorted(int(i) for i in self.encrypted))
        if len(set(enc)) != c or not all(1 <= i <= self.l for i in enc):
            raise ParameterError(f"encrypted paths must be c={c} distinct indices in 1..{self.l}")
        self.encrypted = enc
        plain = [i for i in range(1, self.l + 1) if i not in enc]
        # row r of the encoded block travels on physical path order[r]
        self.order = tuple(enc) + tuple(plain)
        fld = self.code.field
        if fld.p == 2 and fld.m < self.l:
            raise ParameterError(f"extension degree u={fld.m} must be >= l={self.l}")

    @property
    def l(self):
        return self.code.l

    @property
    def c(self):
        return self.code.c

    @property
    def w(self):
        return self.code.w

    @property
    def u(self):
        return self.code.field.symbol_bits

    @property
    def k_b(self):
        return self.path_ciphers[0].k_b

    @property
    def n_b(self):
        return self.path_ciphers[0].n_b

    @property
    def batch_unit(self):
        """Smallest block count that keeps every row a whole number of symbols."""
        return self.u // math.gcd(self.u, self.k_b)

    def blocks_for(self, nbytes):
        """Block count for a message of ``nbytes`` bytes plus its terminator bit."""
        need = 8 * nbytes + 1
        per_block = self.l * self.k_b
        n = -(-need // per_block)
        unit = self.batch_unit
        return -(-n // unit) * unit

    def payload_bits(self, blocks):
        return blocks * (self.c * self.n_b + (self.l - self.c) * self.k_b)

    def digest(self):
        h = hashlib.sha256(b"huncc-config-v1")
        h.update(struct.pack("<HHH", self.l, self.c, self.u))
        h.update(bytes(self.encrypted))
        h.update(self.code.to_bytes())
        for cip in self.path_ciphers:
            h.update(cip.public_digest())
        return h.digest()

    def cipher_for_path(self, index):
        return self.path_ciphers[self.encrypted.index(index)]


def make_config(l, c, cipher, u=None, code_seed=0, encrypted=None):
    """Standard configuration over GF(2^u) with a seeded Cauchy secrecy code."""
    if not 1 <= c <= l:
        raise ParameterError(f"need 1 <= c <= l (got c={c}, l={l}); at least one path must be encrypted")
    u = l if u is None else u
    if u < l:
        raise ParameterError(f"extension degree u={u} must be >= l={l}")
    code = iscode_build(GF(2, u), l, l - c, seed=code_seed)
    return HunccConfig(code, cipher, encrypted)


@dataclasses.dataclass
class PathPayload:
    index: int  # 1-based physical path
    data: bytes
    encrypted: bool
    bit_length: int


@dataclasses.dataclass
class Transmission:
    config_digest: bytes
    byte_count: int
    blocks: int
    payloads: list

    def to_bytes(self):
        out = [
            TRANSMISSION_MAGIC,
            struct.pack("<B", TRANSMISSION_VERSION),
            self.config_digest,
            struct.pack("<QI", self.byte_count, self.blocks),
        ]
        for p in self.payloads:
            out.append(struct.pack("<HBI", p.index, int(p.encrypted), len(p.data)))
            out.append(p.data)
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data, l):
        """Parse a container holding ``l`` records.  Bit lengths are set to ``8 * len``."""
        data = bytes(data)
        if data[:4] != TRANSMISSION_MAGIC:
            raise FormatError("not a transmission container (bad magic)")
        if len(data) < 49 or data[4] != TRANSMISSION_VERSION:
            raise FormatError("unsupported or truncated transmission container")
        digest = data[5:37]
        byte_count, blocks = struct.unpack_from("<QI", data, 37)
        off = 49
        payloads = []
        for _ in range(l):
            if off + 7 > len(data):
                raise FormatError("truncated path record")
            index, flag, length = struct.unpack_from("<HBI", data, off)
            off += 7
            body = data[off: off + length]
            if len(body) != length:
                raise FormatError(f"path {index} payload is truncated")
            off += length
            payloads.append(PathPayload(index, body, bool(flag), 8 * length))
        if off != len(data):
            raise FormatError("trailing bytes after the last path record")
        return cls(digest, byte_count, blocks, payloads)

    @property
    def total_payload_bits(self):
        return sum(p.bit_length for p in self.payloads)


# ---------------------------------------------------------------------------
# encode / decode
# ---------------------------------------------------------------------------


def encode_symbols(config, msg_block, seed, byte_count=0):
    """Encode an ``l x S`` block of field symbols (``S * u`` must be a multiple of k_b)."""
    msg_block = np.asarray(msg_block, dtype=np.int64)
    if msg_block.ndim == 1:
        msg_block = msg_block[:, None]
    l, u, k_b = config.l, config.u, config.k_b
    if msg_block.shape[0] != l:
        raise DimensionError(f"message block must have {l} rows")
    row_bits = msg_block.shape[1] * u
    if row_bits % k_b:
        raise DimensionError(f"{msg_block.shape[1]} symbols of {u} bits do not fill whole {k_b}-bit blocks")
    blocks = row_bits // k_b
    enc = is_encode(config.code, msg_block)
    bits = _rows_to_bits(enc, u).reshape(l, blocks, k_b)
    payloads = []
    for r, path in enumerate(config.order):
        if path in config.encrypted:
            cip = config.cipher_for_path(path)
            ct = cip.enc(bits[r], make_rng(seed, path)).reshape(-1)
            payloads.append(PathPayload(path, _bits.bits_to_bytes(ct), True, ct.size))
        else:
            row = bits[r].reshape(-1)
            payloads.append(PathPayload(path, _bits.bits_to_bytes(row), False, row.size))
    payloads.sort(key=lambda p: p.index)
    return Transmission(config.digest(), byte_count, blocks, payloads)


def _payload_rows(config, trans):
    """Recover the l x (blocks*k_b) encoded bit rows from the payloads."""
    l, k_b, n_b = config.l, config.k_b, config.n_b
    if len(trans.payloads) != l:
        raise FormatError(f"expected {l} path payloads, got {len(trans.payloads)}")
    by_index = {p.index: p for p in trans.payloads}
    if sorted(by_index) != list(range(1, l + 1)):
        raise FormatError("path indices must be exactly 1..l")
    blocks = trans.blocks
    rows = np.empty((l, blocks * k_b), dtype=np.uint8)
    for r, path in enumerate(config.order):
        p = by_index[path]
        is_enc = path in config.encrypted
        if p.encrypted != is_enc:
            raise FormatError(f"path {path}: encrypted flag does not match the configuration")
        width = n_b if is_enc else k_b
        nbits = blocks * width
        if len(p.data) != -(-nbits // 8):
            raise FormatError(f"path {path}: payload has {len(p.data)} bytes, expected {-(-nbits // 8)}")
        allbits = _bits.bytes_to_bits(p.data)
        if np.any(allbits[nbits:]):
            raise PaddingError(f"path {path}: nonzero padding bits")
        payload_bits = allbits[:nbits].reshape(blocks, width)
        if is_enc:
            try:
                rows[r] = config.cipher_for_path(path).dec(payload_bits).reshape(-1)
            except DecodingFailure as exc:
                raise DecodingFailure(
                    f"path {path}: {exc}", block=getattr(exc, "block", None), path=path
                ) from None
        else:
            rows[r] = payload_bits.reshape(-1)
    return rows


def decode_symbols(config, trans):
    """Inverse of :func:`encode_symbols`; returns the ``l x S`` message block."""
    if trans.config_digest != config.digest():
        raise FormatError("transmission was produced under a different configuration")
    rows = _payload_rows(config, trans)
    enc = _bits_to_rows(rows, config.u)
    if enc.size and enc.max() >= config.code.field.order:
        raise FormatError("payload holds a value outside the field")
    return is_decode(config.code, enc)


def _terminated_bits(data, total):
    bits = np.zeros(total, dtype=np.uint8)
    raw = _bits.bytes_to_bits(data)
    bits[: raw.size] = raw
    bits[raw.size] = 1
    return bits


def _strip_terminator(bits):
    ones = np.flatnonzero(bits)
    if ones.size == 0:
        raise PaddingError("message terminator not found")
    end = int(ones[-1])
    if end % 8:
        raise PaddingError("message terminator is not byte aligned")
    return _bits.bits_to_bytes(bits[:end])


def huncc_encode(config, data, seed):
    """Encode ``data`` into a :class:`Transmission` (row j of the block is message j)."""
    data = bytes(data)
    blocks = config.blocks_for(len(data))
    row_bits = blocks * config.k_b
    bits = _terminated_bits(data, config.l * row_bits).reshape(config.l, row_bits)
    symbols = _bits_to_rows(bits, config.u)
    return encode_symbols(config, symbols, seed, byte_count=len(data))


def huncc_decode(config, trans):
    """Inverse of :func:`huncc_encode`; returns the original bytes."""
    block = decode_symbols(config, trans)
    bits = _rows_to_bits(block, config.u).reshape(-1)
    out = _strip_terminator(bits)
    if trans.byte_count is not None and len(out) != trans.byte_count:
        raise FormatError(f"header says {trans.byte_count} bytes, payload carries {len(out)}")
    return out


# ---------------------------------------------------------------------------
# single-path (virtual links) framing
# ---------------------------------------------------------------------------


def concat_frames(payloads):
    """Length-prefixed concatenation (u32 LE length, then bytes) of each payload."""
    return b"".join(FRAME_HEADER.pack(len(p)) + bytes(p) for p in payloads)


def split_frames(blob):
    blob = bytes(blob)
    frames = []
    off = 0
    while off < len(blob):
        if off + FRAME_HEADER.size > len(blob):
            raise FormatError("truncated frame header")
        (length,) = FRAME_HEADER.unpack_from(blob, off)
        off += FRAME_HEADER.size
        if off + length > len(blob):
            raise FormatError("frame runs past the end of the blob")
        frames.append(blob[off: off + length])
        off += length
    return frames


def huncc_virtual_single_path(config, data, seed):
    """Encode and frame the l payloads (ordered by path index) into one blob."""
    trans = huncc_encode(config, data, seed)
    return concat_frames(p.data for p in trans.payloads)


def _blocks_from_length(config, nbytes, width):
    unit = config.batch_unit
    guess = (8 * nbytes) // width
    hits = [
        n for n in range(max(unit, guess - guess % unit - 2 * unit), guess + 2 * unit, unit)
        if -(-n * width // 8) == nbytes
    ]
    if len(hits) != 1:
        raise FormatError("cannot infer the block count from the frame lengths")
    return hits[0]


def transmission_from_frames(config, frames):
    """Rebuild a Transmission from single-path frames; the byte count is left unknown."""
    if len(frames) != config.l:
        raise FormatError(f"expected {config.l} frames, got {len(frames)}")
    first_enc = config.encrypted[0]
    blocks = _blocks_from_length(config, len(frames[first_enc - 1]), config.n_b)
    payloads = []
    for i, body in enumerate(frames, start=1):
        enc = i in config.encrypted
        payloads.append(PathPayload(i, body, enc, blocks * (config.n_b if enc else config.k_b)))
    return Transmission(config.digest(), None, blocks, payloads)


def huncc_virtual_decode(config, blob):
    return huncc_decode(config, transmission_from_frames(config, split_frames(blob)))
