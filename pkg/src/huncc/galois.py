"""Finite fields GF(p^m), polynomials over them, and dense linear algebra.

Elements are stored as plain ints: the coefficient vector ``(c_0, ..., c_{m-1})``
of the polynomial-basis representation is packed as ``sum(c_i * p**i)``.  For
characteristic 2 this is the usual bit mask.  ``FieldElement`` wraps an int
with its field for the object-style API; the matrix and kernel code works on
numpy ``int64`` arrays of packed values.

Fields of order <= 2**16 get log/antilog tables.  Characteristic-2 fields with
tables are routed through the compiled kernels in :mod:`huncc._kernels`.
"""
from __future__ import annotations

import functools
import itertools
import struct

import numpy as np

from . import _kernels
from .errors import (
    DimensionError,
    FieldError,
    FieldMismatchError,
    InconsistentSystemError,
    SingularMatrixError,
)

MAX_DEGREE = 4096
TABLE_LIMIT = 1 << 16


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomials over the prime field, as plain coefficient lists (used to
# validate and search field moduli before any FieldSpec exists)
# ---------------------------------------------------------------------------


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _pp_mod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    inv = pow(b[-1], p - 2, p) if p > 2 else 1
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        f = a[-1] * inv % p
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - f * bc) % p
        a = _trim(a)
    return a


def _pp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _pp_mulmod(a, b, f, p):
    return _pp_mod(_pp_mul(a, b, p), f, p)


def _pp_powmod(a, e, f, p):
    result = [1]
    base = _pp_mod(a, f, p)
    while e:
        if e & 1:
            result = _pp_mulmod(result, base, f, p)
        base = _pp_mulmod(base, base, f, p)
        e >>= 1
    return result


def _pp_gcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pp_mod(a, b, p)
    return a


def _pp_irreducible(f, p):
    """Ben-Or test for a monic polynomial over GF(p)."""
    f = _trim(f)
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    h = [0, 1]
    for _ in range(m // 2):
        h = _pp_powmod(h, p, f, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        g = _pp_gcd(f, diff, p)
        if len(g) - 1 > 0:
            return False
    return True


def smallest_irreducible(p, m):
    """Smallest monic irreducible of degree ``m`` over GF(p).

    "Smallest" orders candidates by the integer ``sum(c_i * p**i)``, i.e. the
    coefficient list compared from the highest degree downward.  This matches
    the conventional choices (x^3+x+1, x^4+x+1, x^8+x^4+x^3+x+1, ...).
    """
    for low in range(p ** m):
        coeffs = [(low // p ** i) % p for i in range(m)] + [1]
        if _pp_irreducible(coeffs, p):
            return tuple(coeffs)
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")


# ---------------------------------------------------------------------------
# FieldSpec
# ---------------------------------------------------------------------------


class FieldSpec:
    """Immutable description of GF(p^m) with a fixed polynomial basis."""

    __slots__ = ("p", "m", "modulus", "order", "exp", "log", "sqrt_table", "_mod_int", "_hash")

    def __init__(self, p, m, modulus=None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if not 1 <= m <= MAX_DEGREE:
            raise FieldError(f"extension degree must be in [1, {MAX_DEGREE}], got {m}")
        if modulus is None or (isinstance(modulus, str) and modulus.lower() == "auto"):
            modulus = smallest_irreducible(p, m) if m > 1 else (0, 1)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(_trim(modulus)) != m + 1:
                raise FieldError(f"modulus must have degree {m}")
            modulus = tuple(_trim(modulus))
            if modulus[-1] != 1:
                inv = pow(modulus[-1], p - 2, p)
                modulus = tuple(c * inv % p for c in modulus)
            if not _pp_irreducible(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.m = m
        self.modulus = modulus
        self.order = p ** m
        self._mod_int = sum(c * p ** i for i, c in enumerate(modulus))
        self._hash = hash((p, m, modulus))
        self.exp = None
        self.log = None
        self.sqrt_table = None
        if self.order <= TABLE_LIMIT:
            self._build_tables()

    # -- representation -----------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.m, self.modulus) == (
            other.p,
            other.m,
            other.modulus,
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}, modulus={self.modulus})"

    @property
    def has_tables(self):
        return self.exp is not None

    @property
    def fast_char2(self):
        return self.p == 2 and self.exp is not None

    @property
    def symbol_bits(self):
        """Bits needed to hold one packed element."""
        return (self.order - 1).bit_length()

    def coeffs(self, a):
        return tuple((a // self.p ** i) % self.p for i in range(self.m))

    def from_coeffs(self, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) > self.m:
            raise FieldError("too many coefficients")
        return sum((int(c) % self.p) * self.p ** i for i, c in enumerate(coeffs))

    def element(self, value):
        return FieldElement(self, value)

    def _check(self, a):
        if not 0 <= a < self.order:
            raise FieldError(f"{a} is not an element of {self}")
        return a

    # -- raw arithmetic (no tables) ------------------------------------------

    def _raw_mul(self, a, b):
        if self.p == 2:
            m, mod = self.m, self._mod_int
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if (a >> m) & 1:
                    a ^= mod
            return r
        if self.m == 1:
            return a * b % self.p
        prod = _pp_mul(list(self.coeffs(a)), list(self.coeffs(b)), self.p)
        return self.from_coeffs(_pp_mod(prod, list(self.modulus), self.p) or [0])

    def _raw_pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._raw_mul(r, a)
            a = self._raw_mul(a, a)
            e >>= 1
        return r

    def _build_tables(self):
        q1 = self.order - 1
        if q1 == 1:
            gen = 1
        else:
            factors = _prime_factors(q1)
            gen = None
            for cand in range(2, self.order):
                if all(self._raw_pow(cand, q1 // f) != 1 for f in factors):
                    gen = cand
                    break
            if gen is None:  # pragma: no cover - impossible for a valid field
                raise FieldError("no primitive element found")
        exp = np.zeros(2 * q1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        x = 1
        for i in range(q1):
            exp[i] = x
            log[x] = i
            x = self._raw_mul(x, gen)
        exp[q1:] = exp[:q1]
        self.exp = exp
        self.log = log
        if self.p == 2:
            # sqrt(a) = a^(2^(m-1)): log doubles are taken mod q1 (odd)
            idx = np.arange(self.order)
            halves = (log * ((q1 + 1) // 2)) % q1
            sq = exp[halves]
            sq[0] = 0
            self.sqrt_table = np.where(idx == 0, 0, sq).astype(np.int64)

    # -- scalar arithmetic on packed ints ----------------------------------

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        r, scale = 0, 1
        while a or b:
            r += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return r

    def neg(self, a):
        if self.p == 2:
            return a
        if self.m == 1:
            return (-a) % self.p
        p = self.p
        r, scale = 0, 1
        while a:
            r += ((-(a % p)) % p) * scale
            a //= p
            scale *= p
        return r

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.exp is not None:
            return int(self.exp[self.log[a] + self.log[b]])
        return self._raw_mul(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.exp is not None:
            q1 = self.order - 1
            return int(self.exp[(q1 - self.log[a]) % q1])
        return self._raw_pow(a, self.order - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a = self.inv(a)
            e = -e
        if a == 0:
            return 1 if e == 0 else 0
        if self.exp is not None:
            q1 = self.order - 1
            return int(self.exp[(int(self.log[a]) * e) % q1])
        return self._raw_pow(a, e % (self.order - 1) if self.order > 2 else e)

    # -- vectorized arithmetic on int64 arrays ---------------------------------

    def add_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.m):
            out += (((a // scale) % self.p + (b // scale) % self.p) % self.p) * scale
            scale *= self.p
        return out

    def neg_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        if self.m == 1:
            return (-a) % self.p
        out = np.zeros(a.shape, dtype=np.int64)
        scale = 1
        for _ in range(self.m):
            out += ((-((a // scale) % self.p)) % self.p) * scale
            scale *= self.p
        return out

    def sub_arr(self, a, b):
        return self.add_arr(a, self.neg_arr(b))

    def mul_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.exp is not None:
            res = self.exp[self.log[a] + self.log[b]]
            return np.where((a != 0) & (b != 0), res, 0)
        if self.m == 1 and self.p < (1 << 31):
            return (a * b) % self.p
        a, b = np.broadcast_arrays(a, b)
        flat = [self.mul(int(x), int(y)) for x, y in zip(a.ravel(), b.ravel())]
        return np.array(flat, dtype=np.int64).reshape(a.shape)

    def inv_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        if self.exp is not None:
            q1 = self.order - 1
            return self.exp[(q1 - self.log[a]) % q1]
        return np.array([self.inv(int(x)) for x in a.ravel()], dtype=np.int64).reshape(a.shape)

    def random(self, rng, size=None):
        return rng.integers(0, self.order, size=size, dtype=np.int64)

    # -- serialization -----------------------------------------------------

    def to_bytes(self):
        """``p`` (u16 LE), ``m`` (u16 LE), then ``m+1`` modulus coefficients, one u8 each."""
        if self.p > 255:
            raise FieldError("serialization supports p <= 255 only")
        return struct.pack("<HH", self.p, self.m) + bytes(self.modulus)

    @classmethod
    def from_bytes(cls, data, offset=0):
        """Parse a serialized spec; returns ``(spec, bytes_consumed)``."""
        p, m = struct.unpack_from("<HH", data, offset)
        coeffs = tuple(data[offset + 4: offset + 5 + m])
        if len(coeffs) != m + 1:
            raise FieldError("truncated field spec")
        return cls(p, m, coeffs), 5 + m


@functools.lru_cache(maxsize=None)
def GF(p, m=1):
    """Cached field with the automatically chosen modulus."""
    return FieldSpec(p, m)


def field_new(p, m, modulus="auto"):
    if modulus is None or (isinstance(modulus, str) and modulus.lower() == "auto"):
        return GF(p, m)
    return FieldSpec(p, m, modulus)


# ---------------------------------------------------------------------------
# FieldElement
# ---------------------------------------------------------------------------


class FieldElement:
    __slots__ = ("field", "value")

    def __init__(self, field, value):
        if isinstance(value, FieldElement):
            value = value.value
        self.field = field
        self.value = field._check(int(value))

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field._check(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.div(self.value, o))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow(self.value, int(e)))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    @property
    def coeffs(self):
        return self.field.coeffs(self.value)

    def __repr__(self):
        return f"{self.value}@{self.field!r}"


def _same_field(a, b):
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")


def fe_add(a, b):
    _same_field(a, b)
    return a + b


def fe_mul(a, b):
    _same_field(a, b)
    return a * b


def fe_inv(a):
    return a.inverse()


def fe_pow(a, e):
    return a ** e


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------


class Poly:
    """Polynomial over a FieldSpec, little-endian coefficients, no trailing zeros.

    The zero polynomial has ``degree == Poly.ZERO_DEGREE`` (-1).
    """

    ZERO_DEGREE = -1
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        vals = [int(c.value if isinstance(c, FieldElement) else c) for c in coeffs]
        for v in vals:
            field._check(v)
        self.field = field
        self.coeffs = tuple(_trim(vals))

    @classmethod
    def x(cls, field):
        return cls(field, [0, 1])

    @classmethod
    def const(cls, field, c):
        return cls(field, [c])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __repr__(self):
        return f"Poly({list(self.coeffs)}, {self.field!r})"

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def _check(self, other):
        if not isinstance(other, Poly):
            raise TypeError("expected Poly")
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __add__(self, other):
        self._check(other)
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly(f, [f.add(x, y) for x, y in zip(a, b)])

    def __neg__(self):
        return Poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        f = self.field
        if self.is_zero() or other.is_zero():
            return Poly(f, [])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Poly(f, out)

    def scale(self, c):
        return Poly(self.field, [self.field.mul(c, x) for x in self.coeffs])

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        r = list(self.coeffs)
        dd = other.degree
        inv = f.inv(other.lead)
        quo = [0] * max(0, len(r) - dd)
        for i in range(len(r) - 1, dd - 1, -1):
            c = r[i]
            if c:
                factor = f.mul(c, inv)
                quo[i - dd] = factor
                for k, dk in enumerate(other.coeffs):
                    r[i - dd + k] = f.sub(r[i - dd + k], f.mul(factor, dk))
        return Poly(f, quo), Poly(f, r[:dd] if dd > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        return poly_eval(self, x)

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead))

    def derivative(self):
        f = self.field
        out = []
        for i, c in enumerate(self.coeffs[1:], start=1):
            k = i % f.p
            acc = 0
            for _ in range(k):
                acc = f.add(acc, c)
            out.append(acc)
        return Poly(f, out)

    def pow_mod(self, e, mod):
        result = Poly.const(self.field, 1) % mod
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result

    def inverse_mod(self, mod):
        r0, r1 = mod, self % mod
        s0, s1 = Poly(self.field, []), Poly.const(self.field, 1)
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r0.degree != 0:
            raise ZeroDivisionError("polynomial is not invertible modulo mod")
        return s0.scale(self.field.inv(r0.lead)) % mod

    def as_array(self):
        return np.array(self.coeffs, dtype=np.int64)


def poly_eval(f, x):
    fld = f.field
    if isinstance(x, FieldElement):
        if x.field != fld:
            raise FieldMismatchError(f"{fld} vs {x.field}")
        xv = x.value
    else:
        xv = fld._check(int(x))
    acc = 0
    for c in reversed(f.coeffs):
        acc = fld.add(fld.mul(acc, xv), c)
    return FieldElement(fld, acc)


def poly_eval_many(f, xs):
    """Evaluate ``f`` at every packed element in ``xs`` (int64 array)."""
    fld = f.field
    xs = np.asarray(xs, dtype=np.int64)
    if fld.fast_char2:
        coeffs = f.as_array() if f.coeffs else np.zeros(1, dtype=np.int64)
        return _kernels.poly_eval_many(coeffs, xs, fld.exp, fld.log)
    acc = np.zeros(xs.shape, dtype=np.int64)
    for c in reversed(f.coeffs):
        acc = fld.add_arr(fld.mul_arr(acc, xs), c)
    return acc


def poly_mod(a, b):
    return a % b


def poly_mul(a, b):
    return a * b


def poly_gcd(a, b):
    a._check(b)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def _irreducible_generic(f):
    """Ben-Or over GF(q) using the object-level polynomial arithmetic."""
    t = f.degree
    if t < 1:
        return False
    if t == 1:
        return True
    fm = f.monic()
    x = Poly.x(f.field)
    h = x
    q = f.field.order
    for _ in range(t // 2):
        h = h.pow_mod(q, fm)
        if poly_gcd(fm, h - x).degree > 0:
            return False
    return True


def poly_is_irreducible(f):
    if f.degree < 1:
        return False
    fld = f.field
    if fld.fast_char2:
        fm = f.monic()
        return bool(_kernels.irreducible(fm.as_array(), fld.m, fld.exp, fld.log))
    return _irreducible_generic(f)


# ---------------------------------------------------------------------------
# matrices (numpy int64 arrays of packed elements)
# ---------------------------------------------------------------------------


def as_matrix(field, a):
    arr = np.array(a, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise DimensionError("expected a 2-D matrix")
    if arr.size and (arr.min() < 0 or arr.max() >= field.order):
        raise FieldError(f"matrix entries outside {field}")
    return arr


def identity(field, n):
    return np.eye(n, dtype=np.int64)


def mat_mul(field, a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    if field.fast_char2:
        return _kernels.gf2m_matmul(np.ascontiguousarray(a), np.ascontiguousarray(b), field.exp, field.log)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = field.add_arr(out, field.mul_arr(a[:, k:k + 1], b[k:k + 1, :]))
    return out


def mat_add(field, a, b):
    return field.add_arr(a, b)


class Elimination:
    """Result of Gauss-Jordan elimination: RREF, pivot columns, field-op count."""

    __slots__ = ("rref", "pivots", "ops")

    def __init__(self, rref, pivots, ops):
        self.rref = rref
        self.pivots = pivots
        self.ops = ops

    @property
    def rank(self):
        return len(self.pivots)


def eliminate(field, a, ncols=None):
    """Gauss-Jordan elimination on the first ``ncols`` columns of ``a``.

    The count ``ops`` tallies every field inversion, multiplication and
    addition performed (zero multipliers are skipped and not counted).
    """
    m = np.array(a, dtype=np.int64, copy=True)
    rows, cols = m.shape
    ncols = cols if ncols is None else ncols
    pivots = []
    ops = 0
    r = 0
    for col in range(ncols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, col])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        width = cols - col
        inv = field.inv(int(m[r, col]))
        ops += 1
        if m[r, col] != 1:
            m[r, col:] = field.mul_arr(m[r, col:], inv)
            ops += width
        others = np.flatnonzero(m[:, col])
        others = others[others != r]
        if others.size:
            factors = m[others, col][:, None]
            m[others, col:] = field.sub_arr(m[others, col:], field.mul_arr(factors, m[r, col:][None, :]))
            ops += 2 * width * others.size
        pivots.append(col)
        r += 1
    return Elimination(m, pivots, ops)


def gauss_op_count(n):
    """Worst-case op count of :func:`eliminate` on an ``n x (n+1)`` system.

    Pivot ``k`` touches ``n + 1 - k`` columns: one inversion, a row scaling and
    a multiply-add on each of the other ``n - 1`` rows.
    """
    return sum(1 + (n + 1 - k) * (1 + 2 * (n - 1)) for k in range(n))


def mat_rank(field, a):
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    if field.fast_char2:
        return int(_kernels.gf2m_rank(np.ascontiguousarray(a), field.exp, field.log, field.order - 1))
    return eliminate(field, a).rank


def mat_inv(field, a):
    a = np.asarray(a, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"mat_inv needs a square matrix, got {a.shape}")
    n = a.shape[0]
    aug = np.concatenate([a, identity(field, n)], axis=1)
    el = eliminate(field, aug, ncols=n)
    if el.rank < n:
        raise SingularMatrixError("matrix is singular")
    return el.rref[:, n:]


def solve_linear(field, a, b, return_ops=False):
    """Solve ``a @ x = b``.  Free variables (if any) are set to zero."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if a.ndim != 2 or a.shape[0] != b.size:
        raise DimensionError(f"incompatible system {a.shape} and {b.shape}")
    n = a.shape[1]
    aug = np.concatenate([a, b[:, None]], axis=1)
    el = eliminate(field, aug, ncols=n)
    rank = el.rank
    if rank < a.shape[0] and np.any(el.rref[rank:, n]):
        raise InconsistentSystemError("linear system is inconsistent")
    x = np.zeros(n, dtype=np.int64)
    for i, col in enumerate(el.pivots):
        x[col] = el.rref[i, n]
    if return_ops:
        return x, el.ops
    return x


def all_elements(field):
    return np.arange(field.order, dtype=np.int64)


def enumerate_vectors(field, length):
    """All ``field.order ** length`` vectors as columns of a (length, N) array."""
    q = field.order
    total = q ** length
    idx = np.arange(total, dtype=np.int64)
    out = np.empty((length, total), dtype=np.int64)
    for i in range(length):
        out[i] = (idx // q ** i) % q
    return out


def monic_polys(field, degree):
    """Iterate all monic polynomials of exactly ``degree`` (test oracle helper)."""
    for low in itertools.product(range(field.order), repeat=degree):
        yield Poly(field, list(low) + [1])
