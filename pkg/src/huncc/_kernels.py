"""Hot numeric kernels.

Every kernel has two implementations:

* ``*_loop``: scalar loops written for ``numba.njit``.
* ``*_np``: a pure-numpy path (vectorized where the algorithm allows it).

The public name binds to the numba path when numba imports and the
``HUNCC_DISABLE_NUMBA`` environment variable is unset; otherwise to the numpy
path.  Both paths must return identical results; ``KERNELS`` lists the pairs
for the benchmark and the equivalence tests.

GF(2^m) arithmetic uses log/antilog tables: ``exp`` has length ``2*(q-1)`` so
``exp[log[a] + log[b]]`` needs no reduction; ``log[0]`` is unused.
"""
import os

import numpy as np

_DISABLE = os.environ.get("HUNCC_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLE:
        raise ImportError("numba disabled by HUNCC_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    njit = None
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def _jit(fn):
    if HAVE_NUMBA:
        return njit(cache=True, nogil=True)(fn)
    return fn


# ---------------------------------------------------------------------------
# scalar GF(2^m) and polynomial helpers (loop path)
# ---------------------------------------------------------------------------


@_jit
def _gmul(a, b, exp, log):
    if a == 0 or b == 0:
        return 0
    return exp[log[a] + log[b]]


@_jit
def _ginv(a, exp, log, q1):
    return exp[q1 - log[a]]


@_jit
def _pdeg(p, top):
    for i in range(top, -1, -1):
        if p[i] != 0:
            return i
    return -1


@_jit
def _pmod_inplace(a, da, g, dg, exp, log):
    """Reduce ``a`` (degree ``da``) modulo monic ``g`` in place; return degree."""
    for i in range(da, dg - 1, -1):
        c = a[i]
        if c != 0:
            lc = log[c]
            base = i - dg
            for k in range(dg + 1):
                gk = g[k]
                if gk != 0:
                    a[base + k] ^= exp[lc + log[gk]]
    top = dg - 1 if da >= dg else da
    return _pdeg(a, top)


@_jit
def _pmulmod(a, b, g, t, exp, log):
    """(a*b) mod g for deg a, deg b < t = deg g."""
    tmp = np.zeros(2 * t, dtype=np.int64)
    for i in range(t):
        ai = a[i]
        if ai == 0:
            continue
        la = log[ai]
        for j in range(t):
            bj = b[j]
            if bj != 0:
                tmp[i + j] ^= exp[la + log[bj]]
    _pmod_inplace(tmp, 2 * t - 2, g, t, exp, log)
    out = np.zeros(t, dtype=np.int64)
    for i in range(t):
        out[i] = tmp[i]
    return out


@_jit
def _psqmod(a, g, t, exp, log):
    tmp = np.zeros(2 * t, dtype=np.int64)
    for i in range(t):
        ai = a[i]
        if ai != 0:
            tmp[2 * i] = exp[2 * log[ai]]
    _pmod_inplace(tmp, 2 * t - 2, g, t, exp, log)
    out = np.zeros(t, dtype=np.int64)
    for i in range(t):
        out[i] = tmp[i]
    return out


@_jit
def _pdivmod_inplace(r, dr, d, dd, quo, exp, log, q1):
    """Divide ``r`` by ``d`` (any nonzero leading coefficient).

    ``r`` is overwritten with the remainder, ``quo`` (zeroed by caller) receives
    the quotient.  Returns the remainder degree.
    """
    linv = q1 - log[d[dd]]
    for i in range(dr, dd - 1, -1):
        c = r[i]
        if c != 0:
            f = log[c] + linv
            if f >= q1:
                f -= q1
            quo[i - dd] = exp[f]
            base = i - dd
            for k in range(dd + 1):
                dk = d[k]
                if dk != 0:
                    r[base + k] ^= exp[f + log[dk]]
    top = dd - 1 if dr >= dd else dr
    return _pdeg(r, top)


@_jit
def _pinvmod(a, g, t, exp, log, q1):
    """Inverse of ``a`` modulo ``g``; returns (ok, inverse)."""
    n = t + 1
    r0 = np.zeros(n, dtype=np.int64)
    r1 = np.zeros(n, dtype=np.int64)
    s0 = np.zeros(n, dtype=np.int64)
    s1 = np.zeros(n, dtype=np.int64)
    for i in range(t + 1):
        r0[i] = g[i]
    for i in range(t):
        r1[i] = a[i]
    s1[0] = 1
    d0 = t
    d1 = _pdeg(r1, t - 1)
    if d1 < 0:
        return False, np.zeros(t, dtype=np.int64)
    quo = np.zeros(n, dtype=np.int64)
    while d1 > 0:
        for i in range(n):
            quo[i] = 0
        dq = d0 - d1
        d0 = _pdivmod_inplace(r0, d0, r1, d1, quo, exp, log, q1)
        # s0 <- s0 + quo * s1
        ds1 = _pdeg(s1, t)
        for i in range(dq + 1):
            qi = quo[i]
            if qi == 0:
                continue
            lq = log[qi]
            for j in range(ds1 + 1):
                sj = s1[j]
                if sj != 0 and i + j < n:
                    s0[i + j] ^= exp[lq + log[sj]]
        # swap roles
        for i in range(n):
            tmp = r0[i]
            r0[i] = r1[i]
            r1[i] = tmp
            tmp = s0[i]
            s0[i] = s1[i]
            s1[i] = tmp
        tmpd = d0
        d0 = d1
        d1 = tmpd
        if d1 < 0:
            return False, np.zeros(t, dtype=np.int64)
    # r1 is a nonzero constant; inverse = s1 / r1[0]
    cinv = _ginv(r1[0], exp, log, q1)
    out = np.zeros(t, dtype=np.int64)
    for i in range(t):
        out[i] = _gmul(s1[i], cinv, exp, log)
    return True, out


# ---------------------------------------------------------------------------
# numpy helpers (fallback path)
# ---------------------------------------------------------------------------


def _vmul(a, b, exp, log):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    res = exp[log[a] + log[b]]
    return np.where((a != 0) & (b != 0), res, 0)


def _n_trim(p):
    nz = np.flatnonzero(p)
    if nz.size == 0:
        return p[:0].copy()
    return p[: nz[-1] + 1].copy()


def _n_divmod(a, d, exp, log, q1):
    """Polynomial division on trimmed little-endian arrays (d nonzero)."""
    r = np.array(a, dtype=np.int64)
    dd = d.size - 1
    if r.size - 1 < dd:
        return np.zeros(0, dtype=np.int64), _n_trim(r)
    quo = np.zeros(r.size - dd, dtype=np.int64)
    linv = q1 - log[d[dd]]
    for i in range(r.size - 1, dd - 1, -1):
        c = r[i]
        if c:
            f = (log[c] + linv) % q1
            quo[i - dd] = exp[f]
            r[i - dd:i + 1] ^= _vmul(np.full(dd + 1, exp[f]), d, exp, log)
    return _n_trim(quo), _n_trim(r[:dd])


def _n_mul(a, b, exp, log):
    if a.size == 0 or b.size == 0:
        return np.zeros(0, dtype=np.int64)
    out = np.zeros(a.size + b.size - 1, dtype=np.int64)
    for i, ai in enumerate(a):
        if ai:
            out[i:i + b.size] ^= _vmul(np.full(b.size, ai), b, exp, log)
    return _n_trim(out)


def _n_add(a, b):
    n = max(a.size, b.size)
    out = np.zeros(n, dtype=np.int64)
    out[: a.size] ^= a
    out[: b.size] ^= b
    return _n_trim(out)


def _n_sqmod(a, g, exp, log, q1):
    if a.size == 0:
        return a.copy()
    sq = np.zeros(2 * a.size - 1, dtype=np.int64)
    sq[::2] = _vmul(a, a, exp, log)
    return _n_divmod(sq, g, exp, log, q1)[1]


def _n_invmod(a, g, exp, log, q1):
    r0, r1 = g.copy(), _n_trim(a)
    s0, s1 = np.zeros(0, dtype=np.int64), np.ones(1, dtype=np.int64)
    if r1.size == 0:
        return None
    while r1.size > 1:
        quo, rem = _n_divmod(r0, r1, exp, log, q1)
        r0, r1 = r1, rem
        s0, s1 = s1, _n_add(s0, _n_mul(quo, s1, exp, log))
        if r1.size == 0:
            return None
    cinv = exp[q1 - log[r1[0]]]
    return _vmul(s1, np.full(s1.size, cinv), exp, log)


def _n_gcd(a, b, exp, log, q1):
    a, b = _n_trim(a), _n_trim(b)
    while b.size:
        a, b = b, _n_divmod(a, b, exp, log, q1)[1]
    return a


def _n_eval_many(coeffs, xs, exp, log):
    xs = np.asarray(xs, dtype=np.int64)
    acc = np.zeros(xs.shape, dtype=np.int64)
    for c in coeffs[::-1]:
        acc = _vmul(acc, xs, exp, log) ^ c
    return acc


# ---------------------------------------------------------------------------
# K1: GF(2) reduced row echelon form on packed uint64 rows
# ---------------------------------------------------------------------------


@_jit
def _gf2_rref_loop(words, ncols):
    m = words.copy()
    r = m.shape[0]
    nw = m.shape[1]
    pivots = np.empty(min(r, ncols), dtype=np.int64)
    rank = 0
    one = np.uint64(1)
    for col in range(ncols):
        if rank == r:
            break
        w = col >> 6
        bit = one << np.uint64(col & 63)
        piv = -1
        for i in range(rank, r):
            if (m[i, w] & bit) != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(nw):
                tmp = m[piv, k]
                m[piv, k] = m[rank, k]
                m[rank, k] = tmp
        for i in range(r):
            if i != rank and (m[i, w] & bit) != 0:
                for k in range(w, nw):
                    m[i, k] ^= m[rank, k]
        pivots[rank] = col
        rank += 1
    return m, pivots[:rank].copy()


def _gf2_rref_np(words, ncols):
    m = np.array(words, dtype=np.uint64, copy=True)
    r = m.shape[0]
    pivots = []
    rank = 0
    for col in range(ncols):
        if rank == r:
            break
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        nz = np.flatnonzero(m[rank:, w] & bit)
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        mask = (m[:, w] & bit) != 0
        mask[rank] = False
        if mask.any():
            m[mask, w:] ^= m[rank, w:]
        pivots.append(col)
        rank += 1
    return m, np.array(pivots, dtype=np.int64)


# ---------------------------------------------------------------------------
# K2: matrix product over GF(2^m)
# ---------------------------------------------------------------------------


@_jit
def _gf2m_matmul_loop(a, b, exp, log):
    r, k = a.shape
    c = b.shape[1]
    out = np.zeros((r, c), dtype=np.int64)
    for i in range(r):
        for kk in range(k):
            av = a[i, kk]
            if av == 0:
                continue
            la = log[av]
            for j in range(c):
                bv = b[kk, j]
                if bv != 0:
                    out[i, j] ^= exp[la + log[bv]]
    return out


def _gf2m_matmul_np(a, b, exp, log):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    logb = log[b]
    nzb = b != 0
    for kk in range(a.shape[1]):
        col = a[:, kk]
        nz = (col != 0)[:, None] & nzb[kk][None, :]
        if not nz.any():
            continue
        prod = exp[log[col][:, None] + logb[kk][None, :]]
        out ^= np.where(nz, prod, 0)
    return out


# ---------------------------------------------------------------------------
# K3: rank over GF(2^m)
# ---------------------------------------------------------------------------


@_jit
def _gf2m_rank_loop(a, exp, log, q1):
    m = a.copy()
    r, c = m.shape
    rank = 0
    for col in range(c):
        if rank == r:
            break
        piv = -1
        for i in range(rank, r):
            if m[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(c):
                tmp = m[piv, k]
                m[piv, k] = m[rank, k]
                m[rank, k] = tmp
        linv = q1 - log[m[rank, col]]
        for i in range(rank + 1, r):
            v = m[i, col]
            if v != 0:
                f = log[v] + linv
                if f >= q1:
                    f -= q1
                for j in range(col, c):
                    x = m[rank, j]
                    if x != 0:
                        m[i, j] ^= exp[f + log[x]]
        rank += 1
    return rank


def _gf2m_rank_np(a, exp, log, q1):
    m = np.array(a, dtype=np.int64, copy=True)
    r, c = m.shape
    rank = 0
    for col in range(c):
        if rank == r:
            break
        nz = np.flatnonzero(m[rank:, col])
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        below = m[rank + 1:, col]
        rows = np.flatnonzero(below) + rank + 1
        if rows.size:
            linv = q1 - log[m[rank, col]]
            f = (log[m[rows, col]] + linv) % q1
            prow = m[rank, col:]
            prod = exp[f[:, None] + log[prow][None, :]]
            m[rows, col:] ^= np.where(prow[None, :] != 0, prod, 0)
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# K4: evaluate one polynomial at many points
# ---------------------------------------------------------------------------


@_jit
def _poly_eval_many_loop(coeffs, xs, exp, log):
    # sum of independent terms c_k x^k in the log domain; Horner's rule would
    # chain every table lookup on the previous one
    out = np.zeros(xs.shape[0], dtype=np.int64)
    nc = coeffs.shape[0]
    q1 = log.shape[0] - 1
    lc = np.empty(nc, dtype=np.int64)
    for k in range(nc):
        lc[k] = log[coeffs[k]] if coeffs[k] != 0 else -1
    for j in range(xs.shape[0]):
        x = xs[j]
        if x == 0:
            out[j] = coeffs[0] if nc else 0
            continue
        lx = log[x]
        e = 0
        acc = 0
        for k in range(nc):
            if lc[k] >= 0:
                acc ^= exp[lc[k] + e]
            e += lx
            if e >= q1:
                e -= q1
        out[j] = acc
    return out


def _poly_eval_many_np(coeffs, xs, exp, log):
    return _n_eval_many(np.asarray(coeffs, dtype=np.int64), xs, exp, log)


# ---------------------------------------------------------------------------
# K5: batched partial Fisher-Yates (weight-t position choice)
# ---------------------------------------------------------------------------


@_jit
def _fisher_yates_loop(n, t, draws):
    rows = draws.shape[0]
    out = np.empty((rows, t), dtype=np.int64)
    perm = np.arange(n)
    for r in range(rows):
        for i in range(t):
            j = i + draws[r, i]
            tmp = perm[i]
            perm[i] = perm[j]
            perm[j] = tmp
        for i in range(t):
            out[r, i] = perm[i]
        # undo the swaps so perm is the identity again
        for i in range(t - 1, -1, -1):
            j = i + draws[r, i]
            tmp = perm[i]
            perm[i] = perm[j]
            perm[j] = tmp
    return out


def _fisher_yates_np(n, t, draws, chunk=4096):
    draws = np.asarray(draws, dtype=np.int64)
    rows = draws.shape[0]
    out = np.empty((rows, t), dtype=np.int64)
    for start in range(0, rows, chunk):
        d = draws[start:start + chunk]
        nr = d.shape[0]
        perm = np.tile(np.arange(n, dtype=np.int64), (nr, 1))
        idx = np.arange(nr)
        for i in range(t):
            j = i + d[:, i]
            tmp = perm[idx, i].copy()
            perm[idx, i] = perm[idx, j]
            perm[idx, j] = tmp
        out[start:start + nr] = perm[:, :t]
    return out


# ---------------------------------------------------------------------------
# K6: Patterson decoding of a batch of syndromes
# ---------------------------------------------------------------------------


@_jit
def _patterson_one_loop(s, g, t, sqrt_x, support, hp, exp, log, sqrt_tab, q1, err):
    """Decode one syndrome into ``err`` (zeroed by caller). Returns 0 ok, 1 failure."""
    n = support.shape[0]
    if _pdeg(s, t - 1) < 0:
        return 0
    ok, tinv = _pinvmod(s, g, t, exp, log, q1)
    if not ok:
        return 1
    if t > 1:
        tinv[1] ^= 1
    else:
        # modulo a degree-1 g, x reduces to -g[0] = g[0]
        tinv[0] ^= g[0]
    # tau = sqrt(tinv) mod g = even(tinv) + sqrt_x * odd(tinv)
    half = (t + 1) // 2
    ev = np.zeros(t, dtype=np.int64)
    od = np.zeros(t, dtype=np.int64)
    for i in range(t):
        v = sqrt_tab[tinv[i]]
        if i % 2 == 0:
            ev[i // 2] = v
        else:
            od[i // 2] = v
    tau = _pmulmod(od, sqrt_x, g, t, exp, log)
    for i in range(half):
        tau[i] ^= ev[i]
    # extended Euclid on (g, tau) until deg r <= t // 2
    n2 = t + 1
    r0 = np.zeros(n2, dtype=np.int64)
    r1 = np.zeros(n2, dtype=np.int64)
    b0 = np.zeros(n2, dtype=np.int64)
    b1 = np.zeros(n2, dtype=np.int64)
    for i in range(t + 1):
        r0[i] = g[i]
    for i in range(t):
        r1[i] = tau[i]
    b1[0] = 1
    d0 = t
    d1 = _pdeg(r1, t - 1)
    quo = np.zeros(n2, dtype=np.int64)
    lim = t // 2
    while d1 > lim:
        for i in range(n2):
            quo[i] = 0
        dq = d0 - d1
        d0 = _pdivmod_inplace(r0, d0, r1, d1, quo, exp, log, q1)
        db1 = _pdeg(b1, t)
        for i in range(dq + 1):
            qi = quo[i]
            if qi == 0:
                continue
            lq = log[qi]
            for j in range(db1 + 1):
                bj = b1[j]
                if bj != 0 and i + j < n2:
                    b0[i + j] ^= exp[lq + log[bj]]
        for i in range(n2):
            tmp = r0[i]
            r0[i] = r1[i]
            r1[i] = tmp
            tmp = b0[i]
            b0[i] = b1[i]
            b1[i] = tmp
        tmpd = d0
        d0 = d1
        d1 = tmpd
    # sigma = a^2 + x * b^2 with a = r1, b = b1
    sigma = np.zeros(2 * n2 + 2, dtype=np.int64)
    for i in range(n2):
        a = r1[i]
        if a != 0:
            sigma[2 * i] ^= exp[2 * log[a]]
        b = b1[i]
        if b != 0:
            sigma[2 * i + 1] ^= exp[2 * log[b]]
    ds = _pdeg(sigma, sigma.shape[0] - 1)
    if ds < 1 or ds > t:
        return 1
    # root search: sum of independent log-domain terms sigma_k * x^k
    lsig = np.zeros(ds + 1, dtype=np.int64)
    for k in range(ds + 1):
        if sigma[k] != 0:
            lsig[k] = log[sigma[k]]
    nroots = 0
    for j in range(n):
        x = support[j]
        acc = sigma[0]
        if x != 0:
            lx = log[x]
            e = 0
            for k in range(1, ds + 1):
                e += lx
                if e >= q1:
                    e -= q1
                if sigma[k] != 0:
                    acc ^= exp[lsig[k] + e]
        if acc == 0:
            err[j] = 1
            nroots += 1
    if nroots != ds:
        return 1
    # the located error pattern must reproduce the syndrome
    chk = np.zeros(t, dtype=np.int64)
    for j in range(n):
        if err[j] != 0:
            for i in range(t):
                chk[i] ^= hp[i, j]
    for i in range(t):
        if chk[i] != s[i]:
            return 1
    return 0


@_jit
def _patterson_batch_loop(synd, g, sqrt_x, support, hp, exp, log, sqrt_tab):
    rows, t = synd.shape
    n = support.shape[0]
    q1 = log.shape[0] - 1
    errs = np.zeros((rows, n), dtype=np.uint8)
    status = np.zeros(rows, dtype=np.int64)
    for r in range(rows):
        status[r] = _patterson_one_loop(synd[r], g, t, sqrt_x, support, hp,
                                        exp, log, sqrt_tab, q1, errs[r])
        if status[r] != 0:
            for j in range(n):
                errs[r, j] = 0
    return errs, status


def _patterson_one_np(s, g, t, sqrt_x, support, hp, exp, log, sqrt_tab, q1):
    n = support.shape[0]
    err = np.zeros(n, dtype=np.uint8)
    if not np.any(s):
        return err, 0
    tinv = _n_invmod(s, g, exp, log, q1)
    if tinv is None:
        return err, 1
    full = np.zeros(t, dtype=np.int64)
    full[: tinv.size] = tinv
    if t > 1:
        full[1] ^= 1
    else:
        full[0] ^= g[0]
    roots = sqrt_tab[full]
    ev, od = _n_trim(roots[0::2]), _n_trim(roots[1::2])
    tau = _n_add(ev, _n_divmod(_n_mul(od, _n_trim(sqrt_x), exp, log), g, exp, log, q1)[1])
    r0, r1 = g.copy(), tau
    b0, b1 = np.zeros(0, dtype=np.int64), np.ones(1, dtype=np.int64)
    while r1.size - 1 > t // 2:
        quo, rem = _n_divmod(r0, r1, exp, log, q1)
        r0, r1 = r1, rem
        b0, b1 = b1, _n_add(b0, _n_mul(quo, b1, exp, log))
    sigma = np.zeros(max(2 * r1.size - 1, 2 * b1.size, 1), dtype=np.int64)
    if r1.size:
        sigma[0:2 * r1.size - 1:2] ^= _vmul(r1, r1, exp, log)
    if b1.size:
        sigma[1:2 * b1.size:2] ^= _vmul(b1, b1, exp, log)
    sigma = _n_trim(sigma)
    ds = sigma.size - 1
    if ds < 1 or ds > t:
        return err, 1
    vals = _n_eval_many(sigma, support, exp, log)
    hits = vals == 0
    if int(hits.sum()) != ds:
        return err, 1
    chk = np.bitwise_xor.reduce(hp[:, hits], axis=1)
    if not np.array_equal(chk, s):
        return err, 1
    err[hits] = 1
    return err, 0


def _patterson_batch_np(synd, g, sqrt_x, support, hp, exp, log, sqrt_tab):
    synd = np.asarray(synd, dtype=np.int64)
    rows, t = synd.shape
    n = support.shape[0]
    q1 = log.shape[0] - 1
    errs = np.zeros((rows, n), dtype=np.uint8)
    status = np.zeros(rows, dtype=np.int64)
    todo = np.flatnonzero(synd.any(axis=1))
    for r in todo:
        e, st = _patterson_one_np(synd[r], g, t, sqrt_x, support, hp, exp, log, sqrt_tab, q1)
        errs[r] = e
        status[r] = st
    return errs, status


# ---------------------------------------------------------------------------
# K7: Ben-Or irreducibility test for monic polynomials over GF(2^m)
# ---------------------------------------------------------------------------


@_jit
def _irreducible_loop(f, m, exp, log):
    t = f.shape[0] - 1
    if t <= 1:
        return True
    q1 = log.shape[0] - 1
    h = np.zeros(t, dtype=np.int64)
    h[1] = 1
    a = np.zeros(t + 1, dtype=np.int64)
    b = np.zeros(t + 1, dtype=np.int64)
    quo = np.zeros(t + 1, dtype=np.int64)
    for _ in range(t // 2):
        for _k in range(m):
            h = _psqmod(h, f, t, exp, log)
        # gcd(h - x, f)
        for i in range(t + 1):
            a[i] = f[i]
            b[i] = 0
        for i in range(t):
            b[i] = h[i]
        b[1] ^= 1
        da = t
        db = _pdeg(b, t - 1)
        while db >= 0:
            for i in range(t + 1):
                quo[i] = 0
            da = _pdivmod_inplace(a, da, b, db, quo, exp, log, q1)
            for i in range(t + 1):
                tmp = a[i]
                a[i] = b[i]
                b[i] = tmp
            tmpd = da
            da = db
            db = tmpd
        if da > 0:
            return False
    return True


def _irreducible_np(f, m, exp, log):
    f = np.asarray(f, dtype=np.int64)
    t = f.size - 1
    if t <= 1:
        return True
    q1 = log.shape[0] - 1
    h = np.array([0, 1], dtype=np.int64)
    xpoly = np.array([0, 1], dtype=np.int64)
    for _ in range(t // 2):
        for _k in range(m):
            h = _n_sqmod(h, f, exp, log, q1)
        gcd = _n_gcd(_n_add(h, xpoly), f, exp, log, q1)
        if gcd.size - 1 > 0:
            return False
    return True



# ---------------------------------------------------------------------------
# K8: repeated squaring modulo g (square root of x in GF(2^m)[x]/g)
# ---------------------------------------------------------------------------


@_jit
def _sqrt_x_loop(g, m, exp, log):
    t = g.shape[0] - 1
    h = np.zeros(t, dtype=np.int64)
    if t == 1:
        h[0] = exp[(log[g[0]] * ((log.shape[0]) // 2)) % (log.shape[0] - 1)] if g[0] != 0 else 0
        return h
    h[1] = 1
    for _ in range(m * t - 1):
        h = _psqmod(h, g, t, exp, log)
    return h


def _sqrt_x_np(g, m, exp, log):
    g = np.asarray(g, dtype=np.int64)
    t = g.size - 1
    q1 = log.shape[0] - 1
    out = np.zeros(t, dtype=np.int64)
    if t == 1:
        if g[0] != 0:
            out[0] = exp[(log[g[0]] * ((q1 + 1) // 2)) % q1]
        return out
    h = np.array([0, 1], dtype=np.int64)
    for _ in range(m * t - 1):
        h = _n_sqmod(h, g, exp, log, q1)
    out[: h.size] = h
    return out

# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

KERNELS = {
    "gf2_rref": (_gf2_rref_loop, _gf2_rref_np),
    "gf2m_matmul": (_gf2m_matmul_loop, _gf2m_matmul_np),
    "gf2m_rank": (_gf2m_rank_loop, _gf2m_rank_np),
    "poly_eval_many": (_poly_eval_many_loop, _poly_eval_many_np),
    "fisher_yates": (_fisher_yates_loop, _fisher_yates_np),
    "patterson_batch": (_patterson_batch_loop, _patterson_batch_np),
    "irreducible": (_irreducible_loop, _irreducible_np),
    "sqrt_x": (_sqrt_x_loop, _sqrt_x_np),
}

_pick = 0 if HAVE_NUMBA else 1
gf2_rref = KERNELS["gf2_rref"][_pick]
gf2m_matmul = KERNELS["gf2m_matmul"][_pick]
gf2m_rank = KERNELS["gf2m_rank"][_pick]
poly_eval_many = KERNELS["poly_eval_many"][_pick]
fisher_yates = KERNELS["fisher_yates"][_pick]
patterson_batch = KERNELS["patterson_batch"][_pick]
irreducible = KERNELS["irreducible"][_pick]
sqrt_x = KERNELS["sqrt_x"][_pick]
