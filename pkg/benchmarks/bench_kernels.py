"""Time the numba and pure-numpy paths of every hot kernel.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--preset classic1024]

Inputs come from a real key of the chosen preset, so the numbers reflect the
sizes the pipeline actually uses.  Each pair is also checked for equal output.
"""
import argparse
import time

import numpy as np

from huncc import _bits, _kernels
from huncc._rng import make_rng
from huncc.cryptosys import mceliece_encrypt, mceliece_keygen


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def workloads(preset):
    kp = mceliece_keygen(preset, 1)
    priv = kp.private
    dec = priv.decoder
    f = dec.field
    p = priv.params
    rng = make_rng(2)
    msgs = rng.integers(0, 2, size=(200, p.k), dtype=np.uint8)
    words = mceliece_encrypt(kp.public, msgs, rng)[:, priv.perm]
    synd = np.ascontiguousarray(dec.syndromes(words))
    hwords = _bits.pack_rows_u64(dec.hbin)
    sq = rng.integers(0, f.order, size=(48, 48)).astype(np.int64)
    draws = np.stack([rng.integers(0, p.n - i, size=2000) for i in range(p.t)], axis=1)
    xs = np.arange(f.order, dtype=np.int64)
    return {
        "gf2_rref": (hwords, dec.hbin.shape[1]),
        "gf2m_matmul": (sq, sq.T.copy(), f.exp, f.log),
        "gf2m_rank": (sq, f.exp, f.log, f.order - 1),
        "poly_eval_many": (dec.g_arr, xs, f.exp, f.log),
        "fisher_yates": (p.n, p.t, draws),
        "patterson_batch": (synd, dec.g_arr, dec.sqrt_x, dec.support, dec.hp, f.exp, f.log, f.sqrt_table),
        "irreducible": (dec.g_arr, f.m, f.exp, f.log),
        "sqrt_x": (dec.g_arr, f.m, f.exp, f.log),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--preset", default="classic1024")
    args = ap.parse_args(argv)
    print(f"backend: {_kernels.BACKEND}, preset: {args.preset}")
    if not _kernels.HAVE_NUMBA:
        print("numba is disabled; the loop column times plain Python")
    print(f"{'kernel':<16} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}  equal")
    for name, call_args in workloads(args.preset).items():
        loop, vec = _kernels.KERNELS[name]
        # copies keep in-place kernels from seeing each other's output
        fresh = lambda: tuple(a.copy() if isinstance(a, np.ndarray) else a for a in call_args)
        loop(*fresh())  # compile outside the timed region
        t_loop, out_loop = best_of(lambda: loop(*fresh()), args.repeat)
        t_np, out_np = best_of(lambda: vec(*fresh()), args.repeat)
        print(f"{name:<16} {1e3 * t_loop:>10.3f} {1e3 * t_np:>10.3f} {t_np / t_loop:>8.1f}  {same(out_loop, out_np)}")


if __name__ == "__main__":
    main()
