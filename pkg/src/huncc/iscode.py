"""(l, w)-individually-secure linear codes.

A message column ``M`` (l symbols) is encoded as the row-vector product
``X = M @ G_IS``.  Blocks hold many columns side by side, so an ``l x B``
message block encodes to ``G_IS.T @ M``.

The stacked generator is ``[G_star; G_star_star]``: the first ``c = l - w``
rows span the null space of the secrecy code, the last ``w`` rows generate it.
With ``G_IS^-1 = [A | B]`` (``A`` is l x c), the parity check is ``H = A.T``
and the basis matrix is ``G_tilde = B.T``.
"""
from __future__ import annotations

import itertools
import struct
from dataclasses import dataclass, field as dc_field

import numpy as np

from ._rng import make_rng
from .errors import (
    DimensionError,
    FieldMismatchError,
    FormatError,
    InconsistentSystemError,
    ParameterError,
    SecrecyViolation,
    SingularMatrixError,
)
from .galois import GF, FieldSpec, as_matrix, eliminate, mat_inv, mat_mul, mat_rank

EXHAUSTIVE_CHECK_MAX_L = 12
SAMPLED_CHECKS = 10_000
BRUTEFORCE_LIMIT = 1 << 24
_CHUNK = 1 << 18


@dataclass(frozen=True)
class RankWitness:
    omega: tuple  # 0-based observed columns
    j: int  # 0-based leaked message index


@dataclass(eq=False)
class IsCode:
    field: FieldSpec
    l: int
    w: int
    g_star: np.ndarray
    g_star_star: np.ndarray
    h: np.ndarray
    g_tilde: np.ndarray
    g_is: np.ndarray = dc_field(repr=False)

    @property
    def c(self):
        return self.l - self.w

    def __eq__(self, other):
        return (
            isinstance(other, IsCode)
            and self.field == other.field
            and self.w == other.w
            and np.array_equal(self.g_is, other.g_is)
        )

    def to_bytes(self):
        """``l`` u16, ``w`` u16, field spec, then G_IS row-major, fixed-width LE entries."""
        width = element_width(self.field)
        head = struct.pack("<HH", self.l, self.w) + self.field.to_bytes()
        body = b"".join(int(v).to_bytes(width, "little") for v in self.g_is.ravel())
        return head + body

    @classmethod
    def from_bytes(cls, data):
        data = bytes(data)
        if len(data) < 4:
            raise FormatError("truncated code header")
        l, w = struct.unpack_from("<HH", data)
        fld, used = FieldSpec.from_bytes(data, 4)
        width = element_width(fld)
        off = 4 + used
        if len(data) != off + width * l * l:
            raise FormatError("code body has the wrong size")
        vals = [int.from_bytes(data[off + i * width: off + (i + 1) * width], "little") for i in range(l * l)]
        return iscode_from_matrix(fld, np.array(vals, dtype=np.int64).reshape(l, l), w)


def element_width(field):
    """Bytes per serialized element: ceil(log2(order) / 8)."""
    return max(1, ((field.order - 1).bit_length() + 7) // 8)


# ---------------------------------------------------------------------------
# rank criterion and brute-force oracle (work on any l x l matrix)
# ---------------------------------------------------------------------------


def _leaks(field, g, omega, j):
    sub = g[:, list(omega)]
    unit = np.zeros((g.shape[0], 1), dtype=np.int64)
    unit[j, 0] = 1
    return mat_rank(field, np.concatenate([sub, unit], axis=1)) != mat_rank(field, sub) + 1


def rank_criterion(field, g, w, samples=None, rng=None):
    """First (omega, j) with rank([G_omega | e_j]) != rank(G_omega) + 1, else None.

    Exhaustive over all w-subsets of columns unless ``samples`` is given, in
    which case that many random (omega, j) pairs are drawn from ``rng``.
    """
    g = as_matrix(field, g)
    l = g.shape[0]
    if w == 0:
        return None
    if samples is None:
        for omega in itertools.combinations(range(l), w):
            for j in range(l):
                if _leaks(field, g, omega, j):
                    return RankWitness(omega, j)
        return None
    rng = make_rng(0 if rng is None else rng)
    for _ in range(samples):
        omega = tuple(sorted(rng.choice(l, size=w, replace=False).tolist()))
        j = int(rng.integers(0, l))
        if _leaks(field, g, omega, j):
            return RankWitness(omega, j)
    return None


@dataclass
class SecrecyReport:
    passed: bool
    messages: int
    checks: int
    max_tv: float
    witness: RankWitness | None = None
    observed_value: tuple | None = None

    def summary(self):
        if self.passed:
            return f"PASS (exhaustive, {self.messages} messages)"
        w = self.witness
        return (
            f"FAIL (omega={{{', '.join(str(i + 1) for i in w.omega)}}}, j={w.j + 1}, "
            f"tv={self.max_tv:.6g})"
        )


def encode_columns(field, g, msgs):
    """``G.T @ M`` for an ``l x N`` message matrix."""
    return mat_mul(field, np.ascontiguousarray(np.asarray(g, dtype=np.int64).T), msgs)


def bruteforce(field, g, w_obs, limit=BRUTEFORCE_LIMIT):
    """Exhaustive conditional-flatness check of X = M G under uniform M.

    For every w_obs-subset omega and index j, tabulates joint counts of
    (X_omega, M_j) over all q^l messages and measures the total-variation
    distance of each conditional law of M_j from uniform.
    """
    g = as_matrix(field, g)
    l = g.shape[0]
    q = field.order
    total = q ** l
    if total > limit:
        raise ParameterError(f"{total} messages exceed the enumeration limit {limit}")
    if not 0 <= w_obs <= l:
        raise ParameterError("observed count out of range")
    omegas = list(itertools.combinations(range(l), w_obs))
    pairs = [(om, j) for om in omegas for j in range(l)]
    if w_obs == 0:
        return SecrecyReport(True, total, len(pairs), 0.0)
    nkeys = q ** w_obs
    counts = np.zeros((len(pairs), nkeys * q), dtype=np.int64)
    weights = q ** np.arange(w_obs, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        msgs = np.empty((l, idx.size), dtype=np.int64)
        for i in range(l):
            msgs[i] = (idx // q ** i) % q
        x = encode_columns(field, g, msgs)
        for p, (om, j) in enumerate(pairs):
            key = weights @ x[list(om)]
            counts[p] += np.bincount(key * q + msgs[j], minlength=nkeys * q)
    worst, worst_pair, worst_key = 0.0, None, None
    for p, pair in enumerate(pairs):
        table = counts[p].reshape(nkeys, q)
        rows = table.sum(axis=1)
        seen = rows > 0
        cond = table[seen] / rows[seen, None]
        tv = 0.5 * np.abs(cond - 1.0 / q).sum(axis=1)
        k = int(np.argmax(tv))
        if tv[k] > worst:
            worst, worst_pair = float(tv[k]), pair
            key = int(np.flatnonzero(seen)[k])
            worst_key = tuple(int((key // q ** i) % q) for i in range(w_obs))
    if worst_pair is None:
        return SecrecyReport(True, total, len(pairs), 0.0)
    return SecrecyReport(False, total, len(pairs), worst, RankWitness(*worst_pair), worst_key)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def _derive(field, g_is, w, check="full", rng=None):
    l = g_is.shape[0]
    c = l - w
    try:
        inv = mat_inv(field, g_is)
    except SingularMatrixError:
        raise SingularMatrixError("stacked generator is singular") from None
    code = IsCode(
        field=field,
        l=l,
        w=w,
        g_star=g_is[:c].copy(),
        g_star_star=g_is[c:].copy(),
        h=np.ascontiguousarray(inv[:, :c].T),
        g_tilde=np.ascontiguousarray(inv[:, c:].T),
        g_is=g_is.copy(),
    )
    for arr in (code.g_star, code.g_star_star, code.h, code.g_tilde, code.g_is):
        arr.setflags(write=False)
    if check == "full":
        samples = None if l <= EXHAUSTIVE_CHECK_MAX_L else SAMPLED_CHECKS
        wit = rank_criterion(field, g_is, w, samples=samples, rng=rng)
        if wit is not None:
            raise SecrecyViolation(
                f"observing columns {[i + 1 for i in wit.omega]} reveals message {wit.j + 1}", witness=wit
            )
    return code


def _check_w(l, w):
    if l < 1:
        raise ParameterError("need at least one path")
    if not 0 <= w <= l - 1:
        raise ParameterError(f"secrecy parameter w={w} must be in [0, l-1] for l={l}")


def cauchy_matrix(field, xs, ys):
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    diff = field.sub_arr(xs[:, None], ys[None, :])
    return field.inv_arr(diff)


def iscode_build(field, l, w, seed=0):
    """Seeded Cauchy-matrix construction; every square minor is nonsingular.

    ``w = 0`` (every path encrypted) is accepted and yields a plain invertible
    mixing matrix.
    """
    _check_w(l, w)
    if field.order < 2 * l:
        raise ParameterError(f"{field} has fewer than 2l = {2 * l} elements")
    rng = make_rng(seed, 0x15C0DE)
    chosen = []
    seen = set()
    while len(chosen) < 2 * l:
        v = int(rng.integers(0, field.order))
        if v not in seen:
            seen.add(v)
            chosen.append(v)
    g_is = cauchy_matrix(field, chosen[:l], chosen[l:])
    return _derive(field, g_is, w, rng=make_rng(seed, 0x5A3))


def iscode_from_matrix(field, g, w, verify=True):
    """Wrap a user matrix; rejects singular or leaking generators.

    ``verify=False`` skips the secrecy check so that deliberately broken codes
    can drive leakage experiments.
    """
    g = as_matrix(field, g)
    if g.shape[0] != g.shape[1]:
        raise DimensionError(f"generator must be square, got {g.shape}")
    _check_w(g.shape[0], w)
    return _derive(field, g, w, check="full" if verify else "none")


# ---------------------------------------------------------------------------
# encode / decode
# ---------------------------------------------------------------------------


def _block(code, arr, what):
    arr = np.asarray(arr, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] != code.l:
        raise DimensionError(f"{what} must have {code.l} rows, got shape {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() >= code.field.order):
        raise FieldMismatchError(f"{what} has entries outside {code.field}")
    return arr


def is_encode(code, msg):
    """Columns X = M G_IS for an l x B block (a 1-D input is one column)."""
    squeeze = np.ndim(msg) == 1
    out = encode_columns(code.field, code.g_is, _block(code, msg, "message block"))
    return out[:, 0] if squeeze else out


def is_decode(code, enc):
    """Inverse of :func:`is_encode`: first c rows via H, the rest via G_tilde."""
    squeeze = np.ndim(enc) == 1
    x = _block(code, enc, "encoded block")
    top = mat_mul(code.field, code.h, x)
    bottom = mat_mul(code.field, code.g_tilde, x)
    out = np.concatenate([top, bottom], axis=0)
    return out[:, 0] if squeeze else out


def verify_individual_secrecy_bruteforce(code, w_obs=None):
    """Exhaustive flatness check; ``w_obs`` defaults to ``code.w`` and may not exceed it."""
    w_obs = code.w if w_obs is None else w_obs
    if w_obs > code.w:
        raise ParameterError("cannot verify more observed paths than the code's w")
    return bruteforce(code.field, code.g_is, w_obs)


# ---------------------------------------------------------------------------
# reconstruction from partial knowledge
# ---------------------------------------------------------------------------


@dataclass
class Reconstruction:
    encoded: np.ndarray  # full X column
    message: np.ndarray  # full M column
    ops: int


def reconstruct_encoded(code, msg_known, enc_known, msg_pos=None, enc_pos=None):
    """Complete an encoded column from c message symbols and l - c encoded symbols.

    Unknowns are the l - c missing message symbols and the c missing encoded
    symbols; all l equations X_k = sum_i M_i G[i, k] form one l x l system
    solved by Gauss-Jordan elimination.  ``ops`` counts the field operations
    spent forming the right-hand side and eliminating.
    """
    f = code.field
    l = code.l
    c = code.c
    msg_pos = list(range(c)) if msg_pos is None else [int(i) for i in msg_pos]
    enc_pos = list(range(c, l)) if enc_pos is None else [int(i) for i in enc_pos]
    msg_known = np.asarray(msg_known, dtype=np.int64).reshape(-1)
    enc_known = np.asarray(enc_known, dtype=np.int64).reshape(-1)
    if len(set(msg_pos)) != c or msg_known.size != c:
        raise DimensionError(f"need exactly c={c} distinct known message symbols")
    if len(set(enc_pos)) != l - c or enc_known.size != l - c:
        raise DimensionError(f"need exactly l-c={l - c} distinct known encoded symbols")
    if not all(0 <= i < l for i in msg_pos + enc_pos):
        raise DimensionError("position out of range")
    msg_unknown = [i for i in range(l) if i not in msg_pos]
    enc_unknown = [k for k in range(l) if k not in enc_pos]
    g = code.g_is
    # equation k: sum_{i unknown} G[i,k] M_i - [k unknown] X_k = rhs_k
    a = np.zeros((l, l), dtype=np.int64)
    a[:, : len(msg_unknown)] = g[msg_unknown].T
    minus_one = f.neg(1)
    for col, k in enumerate(enc_unknown, start=len(msg_unknown)):
        a[k, col] = minus_one
    rhs = np.zeros(l, dtype=np.int64)
    known_x = dict(zip(enc_pos, enc_known.tolist()))
    ops = 0
    for k in range(l):
        acc = f.neg(known_x.get(k, 0))
        for i, mi in zip(msg_pos, msg_known.tolist()):
            if g[i, k] and mi:
                acc = f.add(acc, f.mul(int(g[i, k]), mi))
                ops += 2
        rhs[k] = f.neg(acc)
    el = eliminate(f, np.concatenate([a, rhs[:, None]], axis=1), ncols=l)
    if el.rank < l:
        if np.any(el.rref[el.rank:, l]):
            raise InconsistentSystemError("inputs are not produced by any message")
        raise SingularMatrixError("the partial-knowledge system is singular")
    sol = el.rref[:, l]
    msg = np.zeros(l, dtype=np.int64)
    msg[msg_pos] = msg_known
    msg[msg_unknown] = sol[: len(msg_unknown)]
    enc = np.zeros(l, dtype=np.int64)
    enc[enc_pos] = enc_known
    enc[enc_unknown] = sol[len(msg_unknown):]
    return Reconstruction(enc, msg, ops + el.ops)


# Field operations per l^3 spent by reconstruct_encoded at l = 8 over GF(2^8)
# (732 / 512); tests re-measure it.
ELIMINATION_CONSTANT = 1.4296875


def reconstruction_ops(l, seed=0):
    """Field operations of one reconstruction at ``l`` paths, ``w = l // 2``, over GF(2^max(8, l))."""
    fld = GF(2, max(8, l))
    code = iscode_build(fld, l, l // 2, seed=seed)
    rng = make_rng(seed, l)
    msg = fld.random(rng, l)
    enc = is_encode(code, msg)
    return reconstruct_encoded(code, msg[: code.c], enc[code.c:]).ops


def measure_elimination_constant(l=8, seed=0):
    return reconstruction_ops(l, seed) / l ** 3


__all__ = [
    "IsCode",
    "RankWitness",
    "SecrecyReport",
    "Reconstruction",
    "iscode_build",
    "iscode_from_matrix",
    "is_encode",
    "is_decode",
    "rank_criterion",
    "bruteforce",
    "verify_individual_secrecy_bruteforce",
    "reconstruct_encoded",
    "element_width",
]
