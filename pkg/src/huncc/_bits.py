"""Bit-vector packing helpers.

All bit vectors are numpy ``uint8`` arrays holding 0/1.  On the wire, bit ``i``
lives in byte ``i // 8`` at position ``i % 8`` (little-endian within the byte).
"""
import numpy as np


def bits_to_bytes(bits):
    bits = np.asarray(bits, dtype=np.uint8)
    return np.packbits(bits, bitorder="little").tobytes()


def bytes_to_bits(data, nbits=None):
    arr = np.frombuffer(bytes(data), dtype=np.uint8)
    bits = np.unpackbits(arr, bitorder="little")
    if nbits is not None:
        if nbits > bits.size:
            raise ValueError(f"need {nbits} bits, have {bits.size}")
        bits = bits[:nbits]
    return bits


def pack_rows_u64(bits):
    """Pack a (rows, ncols) 0/1 matrix into (rows, ceil(ncols/64)) uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8)
    rows, ncols = bits.shape
    words = (ncols + 63) // 64
    padded = np.zeros((rows, words * 64), dtype=np.uint8)
    padded[:, :ncols] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


def unpack_rows_u64(words, ncols):
    words = np.ascontiguousarray(words, dtype="<u8")
    rows = words.shape[0]
    as_bytes = words.view(np.uint8).reshape(rows, -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :ncols]


def pack_matrix(bits):
    """Row-major packed bits, each row padded to a byte boundary."""
    bits = np.asarray(bits, dtype=np.uint8)
    return np.packbits(bits, axis=1, bitorder="little").tobytes()


def unpack_matrix(data, rows, cols):
    row_bytes = (cols + 7) // 8
    arr = np.frombuffer(bytes(data), dtype=np.uint8)
    if arr.size != rows * row_bytes:
        raise ValueError("packed matrix has wrong size")
    return np.unpackbits(arr.reshape(rows, row_bytes), axis=1, bitorder="little")[:, :cols]


def gf2_matmul(a, b):
    """Product of two 0/1 matrices over GF(2), exact via float32 BLAS."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] >= (1 << 24):
        raise ValueError("inner dimension too large for float32 accumulation")
    prod = a.astype(np.float32) @ b.astype(np.float32)
    return (prod.astype(np.int64) & 1).astype(np.uint8)
