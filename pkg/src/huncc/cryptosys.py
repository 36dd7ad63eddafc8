"""Public-key cryptosystems: binary-Goppa McEliece and an identity test cipher.

Every cipher exposes the same block contract: ``k_b`` plaintext bits in,
``n_b`` ciphertext bits out, ``dec(enc(m)) == m``.  Bit vectors are numpy
``uint8`` 0/1 arrays; batch methods take ``(N, k_b)`` / ``(N, n_b)`` matrices.
"""
from __future__ import annotations

import dataclasses
import hashlib
import os
import struct

import numpy as np

from . import _bits, _kernels
from ._rng import make_rng
from .errors import DecodingFailure, DimensionError, FormatError, ParameterError
from .galois import GF, FieldSpec, Poly, poly_eval_many, poly_is_irreducible

KEY_MAGIC = b"HNCK"
KEY_VERSION = 1
SCHEME_MCELIECE = 1
KIND_PUBLIC = 0
KIND_PRIVATE = 1

MAX_POLY_TRIES = 100_000
MAX_KEY_TRIES = 64


@dataclasses.dataclass(frozen=True)
class CryptosystemSpec:
    k_b: int
    n_b: int
    b: float
    scheme: str

    def __post_init__(self):
        if not 1 <= self.k_b <= self.n_b:
            raise ParameterError(f"need 1 <= k_b <= n_b, got k_b={self.k_b}, n_b={self.n_b}")
        if self.b > self.k_b:
            raise ParameterError("security level cannot exceed the plaintext length")

    @property
    def rate(self):
        return self.k_b / self.n_b


@dataclasses.dataclass(frozen=True)
class McElieceParams:
    """Goppa code parameters.  ``n`` may be below ``2**d`` (shortened support)."""

    d: int
    n: int
    t: int
    b: float = 0

    def __post_init__(self):
        if self.d < 2 or self.d > 16:
            raise ParameterError("extension degree d must be in [2, 16]")
        if self.t < 1:
            raise ParameterError("error weight t must be >= 1")
        if self.n > 2 ** self.d or self.n < 2:
            raise ParameterError(f"code length {self.n} must be in [2, 2^d = {2 ** self.d}]")
        if self.t == 1 and self.n == 2 ** self.d:
            raise ParameterError("t = 1 needs a support that avoids the root of g (n < 2^d)")
        if self.k < 1:
            raise ParameterError(f"n - t*d = {self.k} leaves no message bits")

    @property
    def k(self):
        return self.n - self.t * self.d

    @property
    def spec(self):
        return CryptosystemSpec(self.k, self.n, self.b, "mceliece")


PRESETS = {
    "toy16": McElieceParams(d=4, n=16, t=2, b=0),
    "classic1024": McElieceParams(d=10, n=1024, t=50, b=58),
    "pq2960": McElieceParams(d=12, n=2960, t=56, b=128),
    "pq6624": McElieceParams(d=13, n=6624, t=115, b=256),
}


def _parse_keyvalue(text):
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def load_presets(path=None):
    """Built-in presets plus entries from ``HUNCC_PRESET_PATH`` (or ``path``).

    The file uses the scenario key/value syntax with dotted keys:
    ``<id>.d``, ``<id>.n``, ``<id>.t`` and optional ``<id>.b``.
    """
    presets = dict(PRESETS)
    path = path or os.environ.get("HUNCC_PRESET_PATH")
    if not path:
        return presets
    with open(path, encoding="utf-8") as fh:
        kv = _parse_keyvalue(fh.read())
    grouped = {}
    for key, value in kv.items():
        if "." not in key:
            raise FormatError(f"preset key {key!r} must look like <id>.<field>")
        name, fld = key.rsplit(".", 1)
        grouped.setdefault(name, {})[fld] = value
    for name, fields in grouped.items():
        try:
            presets[name] = McElieceParams(
                d=int(fields["d"]), n=int(fields["n"]), t=int(fields["t"]), b=float(fields.get("b", 0))
            )
        except KeyError as exc:
            raise FormatError(f"preset {name!r} is missing {exc.args[0]}") from None
    return presets


def get_preset(name):
    presets = load_presets()
    if name not in presets:
        raise ParameterError(f"unknown preset {name!r}; known: {', '.join(sorted(presets))}")
    return presets[name]


# ---------------------------------------------------------------------------
# Goppa code machinery
# ---------------------------------------------------------------------------


def goppa_parity_check(field, g, support):
    """t x n matrix whose column j holds the coefficients of 1/(x - a_j) mod g.

    Uses (g(x) - g(a)) / (x - a) computed by synthetic division, scaled by
    g(a)^-1; the minus signs vanish in characteristic 2.
    """
    coeffs = g.coeffs
    t = g.degree
    support = np.asarray(support, dtype=np.int64)
    ga = poly_eval_many(g, support)
    if np.any(ga == 0):
        raise ParameterError("support contains a root of the Goppa polynomial")
    ginv = field.inv_arr(ga)
    hp = np.zeros((t, support.size), dtype=np.int64)
    q = np.full(support.size, coeffs[t], dtype=np.int64)
    hp[t - 1] = q
    for i in range(t - 2, -1, -1):
        q = field.add_arr(field.mul_arr(q, support), coeffs[i + 1])
        hp[i] = q
    return field.mul_arr(hp, ginv[None, :])


def expand_binary(hp, d):
    """Expand a t x n matrix over GF(2^d) into its (t*d) x n binary image."""
    t, n = hp.shape
    shifts = np.arange(d, dtype=np.int64)
    bits = (hp[:, None, :] >> shifts[None, :, None]) & 1
    return bits.reshape(t * d, n).astype(np.uint8)


def gf2_rref(bits):
    """RREF of a 0/1 matrix; returns (rref bits, pivot columns)."""
    bits = np.asarray(bits, dtype=np.uint8)
    words = _bits.pack_rows_u64(bits)
    red, piv = _kernels.gf2_rref(words, bits.shape[1])
    return _bits.unpack_rows_u64(red, bits.shape[1]), np.asarray(piv, dtype=np.int64)


def gf2_inv(mat):
    mat = np.asarray(mat, dtype=np.uint8)
    n = mat.shape[0]
    if mat.shape != (n, n):
        raise DimensionError("gf2_inv needs a square matrix")
    red, piv = gf2_rref(np.concatenate([mat, np.eye(n, dtype=np.uint8)], axis=1))
    if piv.size < n or piv[n - 1] != n - 1:
        raise ParameterError("matrix is singular over GF(2)")
    return red[:, n:].copy()


def generator_from_parity(hbin):
    """Systematic generator of the binary null space of ``hbin``.

    Returns ``(G, info_set)`` with ``G[:, info_set] == I``.
    """
    n = hbin.shape[1]
    red, piv = gf2_rref(hbin)
    rank = piv.size
    free = np.setdiff1d(np.arange(n), piv)
    k = n - rank
    gen = np.zeros((k, n), dtype=np.uint8)
    gen[np.arange(k), free] = 1
    if rank:
        gen[:, piv] = red[:rank][:, free].T
    return gen, free


def random_invertible_gf2(k, rng):
    """Random lower-unit x upper-unit triangular product with rows shuffled."""
    low = np.tril(rng.integers(0, 2, size=(k, k), dtype=np.uint8), -1) + np.eye(k, dtype=np.uint8)
    up = np.triu(rng.integers(0, 2, size=(k, k), dtype=np.uint8), 1) + np.eye(k, dtype=np.uint8)
    prod = _bits.gf2_matmul(low, up)
    return prod[rng.permutation(k)]


class GoppaDecoder:
    """Precomputed tables for Patterson decoding of Gamma(support, g)."""

    def __init__(self, field, g, support):
        self.field = field
        self.g = g
        self.t = g.degree
        self.support = np.asarray(support, dtype=np.int64)
        self.hp = goppa_parity_check(field, g, self.support)
        self.hbin = expand_binary(self.hp, field.m)
        self.g_arr = g.monic().as_array()
        self.sqrt_x = np.asarray(_kernels.sqrt_x(self.g_arr, field.m, field.exp, field.log), dtype=np.int64)
        self._hbin_t = self.hbin.T.astype(np.float32)
        self._weights = (1 << np.arange(field.m, dtype=np.int64))

    def syndromes(self, words):
        """Syndrome polynomials (N x t packed elements) of 0/1 words (N x n)."""
        words = np.asarray(words, dtype=np.uint8)
        sbits = (words.astype(np.float32) @ self._hbin_t).astype(np.int64) & 1
        sbits = sbits.reshape(words.shape[0], self.t, self.field.m)
        return sbits @ self._weights

    def decode(self, words):
        """Correct up to t errors per row; returns (codewords, status)."""
        words = np.asarray(words, dtype=np.uint8)
        synd = self.syndromes(words)
        f = self.field
        errs, status = _kernels.patterson_batch(
            np.ascontiguousarray(synd), self.g_arr, self.sqrt_x, self.support,
            self.hp, f.exp, f.log, f.sqrt_table,
        )
        return words ^ errs, np.asarray(status)


# ---------------------------------------------------------------------------
# keys
# ---------------------------------------------------------------------------


@dataclasses.dataclass(eq=False)
class McEliecePublicKey:
    params: McElieceParams
    g_pub: np.ndarray

    @property
    def t(self):
        return self.params.t

    def to_bytes(self):
        return _key_header(self.params, KIND_PUBLIC) + _bits.pack_matrix(self.g_pub)

    def digest(self):
        return hashlib.sha256(self.to_bytes()).digest()

    def __eq__(self, other):
        return (
            isinstance(other, McEliecePublicKey)
            and self.params == other.params
            and np.array_equal(self.g_pub, other.g_pub)
        )


@dataclasses.dataclass(eq=False)
class McEliecePrivateKey:
    params: McElieceParams
    field: FieldSpec
    g: Poly
    support: np.ndarray
    s: np.ndarray
    perm: np.ndarray  # P[i, perm[i]] = 1

    def __post_init__(self):
        self._cache = None

    def _derived(self):
        if self._cache is None:
            dec = GoppaDecoder(self.field, self.g, self.support)
            gen, info = generator_from_parity(dec.hbin)
            if gen.shape[0] != self.params.k:
                raise FormatError("Goppa code dimension does not match the key parameters")
            self._cache = (dec, gen, info, gf2_inv(self.s))
        return self._cache

    @property
    def decoder(self):
        return self._derived()[0]

    @property
    def generator(self):
        return self._derived()[1]

    @property
    def info_set(self):
        return self._derived()[2]

    @property
    def s_inv(self):
        return self._derived()[3]

    @property
    def p_matrix(self):
        n = self.params.n
        mat = np.zeros((n, n), dtype=np.uint8)
        mat[np.arange(n), self.perm] = 1
        return mat

    def public_key(self):
        sg = _bits.gf2_matmul(self.s, self.generator)
        g_pub = np.empty_like(sg)
        g_pub[:, self.perm] = sg
        return McEliecePublicKey(self.params, g_pub)

    def to_bytes(self):
        p = self.params
        out = [_key_header(p, KIND_PRIVATE), self.field.to_bytes()]
        out.append(np.asarray(self.g.coeffs, dtype="<u2").tobytes())
        out.append(np.asarray(self.support, dtype="<u2").tobytes())
        out.append(_bits.pack_matrix(self.s))
        out.append(_bits.pack_matrix(self.p_matrix))
        return b"".join(out)

    def __eq__(self, other):
        return (
            isinstance(other, McEliecePrivateKey)
            and self.params == other.params
            and self.field == other.field
            and self.g == other.g
            and np.array_equal(self.support, other.support)
            and np.array_equal(self.s, other.s)
            and np.array_equal(self.perm, other.perm)
        )


@dataclasses.dataclass(eq=False)
class McElieceKeyPair:
    public: McEliecePublicKey
    private: McEliecePrivateKey


_HEADER = struct.Struct("<4sBBBBIHIH")


def _key_header(p, kind):
    return _HEADER.pack(KEY_MAGIC, KEY_VERSION, SCHEME_MCELIECE, kind, p.d, p.n, p.t, p.k, int(p.b))


def load_key(data):
    """Parse a public or private key container."""
    data = bytes(data)
    if len(data) < _HEADER.size:
        raise FormatError("key file too short")
    magic, version, scheme, kind, d, n, t, k, b = _HEADER.unpack_from(data)
    if magic != KEY_MAGIC:
        raise FormatError("not a key file (bad magic)")
    if version != KEY_VERSION or scheme != SCHEME_MCELIECE:
        raise FormatError(f"unsupported key version {version} / scheme {scheme}")
    params = McElieceParams(d=d, n=n, t=t, b=b)
    if params.k != k:
        raise FormatError("inconsistent key dimension")
    off = _HEADER.size
    if kind == KIND_PUBLIC:
        body = data[off:]
        try:
            g_pub = _bits.unpack_matrix(body, k, n)
        except ValueError as exc:
            raise FormatError(str(exc)) from None
        return McEliecePublicKey(params, g_pub.copy())
    if kind != KIND_PRIVATE:
        raise FormatError(f"unknown key kind {kind}")
    field, used = FieldSpec.from_bytes(data, off)
    off += used
    g_coeffs = np.frombuffer(data, dtype="<u2", count=t + 1, offset=off).astype(np.int64)
    off += 2 * (t + 1)
    support = np.frombuffer(data, dtype="<u2", count=n, offset=off).astype(np.int64)
    off += 2 * n
    s_len = k * ((k + 7) // 8)
    s = _bits.unpack_matrix(data[off:off + s_len], k, k).copy()
    off += s_len
    p_len = n * ((n + 7) // 8)
    if len(data) != off + p_len:
        raise FormatError("private key has trailing or missing bytes")
    pmat = _bits.unpack_matrix(data[off:off + p_len], n, n)
    if not (np.all(pmat.sum(axis=1) == 1) and np.all(pmat.sum(axis=0) == 1)):
        raise FormatError("P is not a permutation matrix")
    perm = np.argmax(pmat, axis=1).astype(np.int64)
    return McEliecePrivateKey(params, field, Poly(field, g_coeffs), support, s, perm)


def _random_irreducible(field, t, rng):
    for _ in range(MAX_POLY_TRIES):
        coeffs = list(field.random(rng, t)) + [1]
        g = Poly(field, coeffs)
        if poly_is_irreducible(g):
            return g
    raise ParameterError("no irreducible Goppa polynomial found within the retry bound")


def mceliece_keygen(params, seed):
    """Deterministic key generation from ``seed``.

    Draws an irreducible monic g of degree t, a support of n distinct
    non-roots, and retries with a fresh g until the code dimension is exactly
    ``n - t*d``.
    """
    if isinstance(params, str):
        params = get_preset(params)
    rng = make_rng(seed)
    field = GF(2, params.d)
    elements = np.arange(field.order, dtype=np.int64)
    for _ in range(MAX_KEY_TRIES):
        g = _random_irreducible(field, params.t, rng)
        candidates = elements[poly_eval_many(g, elements) != 0]
        if candidates.size < params.n:
            continue
        support = rng.choice(candidates, size=params.n, replace=False).astype(np.int64)
        dec = GoppaDecoder(field, g, support)
        gen, info = generator_from_parity(dec.hbin)
        if gen.shape[0] != params.k:
            continue
        s = random_invertible_gf2(params.k, rng)
        perm = rng.permutation(params.n).astype(np.int64)
        priv = McEliecePrivateKey(params, field, g, support, s, perm)
        priv._cache = (dec, gen, info, gf2_inv(s))
        return McElieceKeyPair(priv.public_key(), priv)
    raise ParameterError("key generation exceeded its retry bound")


# ---------------------------------------------------------------------------
# encryption / decryption
# ---------------------------------------------------------------------------


def random_error_vectors(n, t, count, rng):
    """``count`` weight-t vectors; positions by seeded partial Fisher-Yates."""
    draws = np.empty((count, t), dtype=np.int64)
    for i in range(t):
        draws[:, i] = rng.integers(0, n - i, size=count)
    pos = _kernels.fisher_yates(n, t, draws)
    z = np.zeros((count, n), dtype=np.uint8)
    z[np.arange(count)[:, None], pos] = 1
    return z


def _as_bit_rows(bits, width, what):
    arr = np.asarray(bits, dtype=np.uint8)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != width:
        raise DimensionError(f"{what} must have {width} bits, got shape {np.asarray(bits).shape}")
    if arr.size and arr.max() > 1:
        raise DimensionError(f"{what} must be 0/1")
    return arr, single


def mceliece_encrypt(pub, m, rng, error=None):
    """c = m G_pub + z with wt(z) = t.

    ``m`` may be one vector or an (N, k) batch.  ``error`` overrides z (test
    hook); otherwise z is drawn from ``rng`` (a Generator or a seed).
    """
    rows, single = _as_bit_rows(m, pub.params.k, "plaintext")
    code = _bits.gf2_matmul(rows, pub.g_pub) if rows.shape[0] else np.zeros((0, pub.params.n), np.uint8)
    if error is None:
        z = random_error_vectors(pub.params.n, pub.params.t, rows.shape[0], make_rng(rng))
    else:
        z, _ = _as_bit_rows(error, pub.params.n, "error vector")
        z = np.broadcast_to(z, code.shape)
    out = code ^ z
    return out[0] if single else out


def mceliece_decrypt(priv, c):
    """Invert :func:`mceliece_encrypt`.  Raises DecodingFailure (``.block`` = row)."""
    rows, single = _as_bit_rows(c, priv.params.n, "ciphertext")
    unperm = rows[:, priv.perm]
    code, status = priv.decoder.decode(unperm)
    bad = np.flatnonzero(status)
    if bad.size:
        raise DecodingFailure(f"Goppa decoding failed on block {int(bad[0])}", block=int(bad[0]))
    ms = code[:, priv.info_set]
    m = _bits.gf2_matmul(ms, priv.s_inv)
    return m[0] if single else m


# ---------------------------------------------------------------------------
# cipher adapters
# ---------------------------------------------------------------------------


class Cipher:
    """Block cipher contract used by the pipeline."""

    scheme = "abstract"

    def spec(self):
        raise NotImplementedError

    @property
    def k_b(self):
        return self.spec().k_b

    @property
    def n_b(self):
        return self.spec().n_b

    @property
    def transparent(self):
        """True when anyone can invert the cipher without a key (b = 0 and no key)."""
        return False

    def enc(self, bits, rng):
        raise NotImplementedError

    def dec(self, bits):
        raise NotImplementedError

    def public_digest(self):
        raise NotImplementedError


class IdentityCipher(Cipher):
    """Insecure pass-through cipher (k_b = n_b, b = 0) for pipeline tests."""

    scheme = "identity"

    def __init__(self, k_b):
        self._spec = CryptosystemSpec(k_b, k_b, 0, self.scheme)

    def spec(self):
        return self._spec

    @property
    def transparent(self):
        return True

    def enc(self, bits, rng=None):
        rows, single = _as_bit_rows(bits, self._spec.k_b, "plaintext")
        return rows[0].copy() if single else rows.copy()

    def dec(self, bits):
        rows, single = _as_bit_rows(bits, self._spec.n_b, "ciphertext")
        return rows[0].copy() if single else rows.copy()

    def public_digest(self):
        return hashlib.sha256(b"identity" + struct.pack("<I", self._spec.k_b)).digest()


class McElieceCipher(Cipher):
    scheme = "mceliece"

    def __init__(self, public=None, private=None):
        if public is None and private is None:
            raise ParameterError("need a public or a private key")
        if public is None:
            public = private.public_key()
        self.public = public
        self.private = private
        self._spec = public.params.spec

    @classmethod
    def from_keypair(cls, kp):
        return cls(kp.public, kp.private)

    def spec(self):
        return self._spec

    def enc(self, bits, rng):
        return mceliece_encrypt(self.public, bits, rng)

    def dec(self, bits):
        if self.private is None:
            raise ParameterError("decryption needs the private key")
        return mceliece_decrypt(self.private, bits)

    def public_digest(self):
        return self.public.digest()
