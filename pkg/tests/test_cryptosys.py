import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from huncc._rng import make_rng
from huncc.cryptosys import (
    PRESETS,
    CryptosystemSpec,
    IdentityCipher,
    McElieceCipher,
    McElieceParams,
    generator_from_parity,
    get_preset,
    gf2_inv,
    load_key,
    load_presets,
    mceliece_decrypt,
    mceliece_encrypt,
    mceliece_keygen,
    random_error_vectors,
    random_invertible_gf2,
)
from huncc.errors import DecodingFailure, DimensionError, FormatError, ParameterError
from huncc.galois import Poly, poly_eval, poly_is_irreducible


def gf2_matmul(a, b):
    return (a.astype(np.int64) @ b.astype(np.int64) % 2).astype(np.uint8)


def goppa_membership(priv, word):
    """True when sum_i word_i / (x - L_i) == 0 mod g, computed with polynomials."""
    f, g = priv.field, priv.g
    acc = Poly(f, [])
    for bit, a in zip(word, priv.support):
        if not bit:
            continue
        ga = poly_eval(g, int(a)).value
        # (g(x) - g(a)) / (x - a) is exact; in characteristic 2 minus is plus
        quo, rem = divmod(g + Poly(f, [ga]), Poly(f, [int(a), 1]))
        assert rem.is_zero()
        acc = acc + quo * Poly(f, [f.inv(ga)])
    return acc.is_zero()


# -- parameters ----------------------------------------------------------------


def test_preset_table():
    rows = {k: (p.d, p.n, p.k, p.t, p.b) for k, p in PRESETS.items()}
    assert rows == {
        "toy16": (4, 16, 8, 2, 0),
        "classic1024": (10, 1024, 524, 50, 58),
        "pq2960": (12, 2960, 2288, 56, 128),
        "pq6624": (13, 6624, 5129, 115, 256),
    }


def test_adapter_specs():
    assert get_preset("classic1024").spec.b == 58
    spec = get_preset("pq2960").spec
    assert spec.b == 128 and spec.rate == pytest.approx(0.773, abs=5e-4)
    ident = IdentityCipher(64).spec()
    assert (ident.b, ident.k_b, ident.n_b, ident.rate) == (0, 64, 64, 1.0)


@pytest.mark.parametrize("kwargs", [dict(d=4, n=16, t=4), dict(d=4, n=17, t=1), dict(d=4, n=16, t=0)])
def test_invalid_params(kwargs):
    with pytest.raises(ParameterError):
        McElieceParams(**kwargs)


def test_spec_invariants():
    with pytest.raises(ParameterError):
        CryptosystemSpec(10, 8, 0, "x")
    with pytest.raises(ParameterError):
        CryptosystemSpec(8, 10, 9, "x")


def test_preset_file(tmp_path, monkeypatch):
    path = tmp_path / "presets.txt"
    path.write_text("tiny.d = 5\ntiny.n = 32\ntiny.t = 2\n# comment\n")
    monkeypatch.setenv("HUNCC_PRESET_PATH", str(path))
    assert get_preset("tiny") == McElieceParams(5, 32, 2, 0)
    path.write_text("tiny.d = 5\n")
    with pytest.raises(FormatError):
        load_presets()


# -- key structure ---------------------------------------------------------------


def test_toy_key_shape(toy_keys):
    kp = toy_keys[0]
    assert kp.public.g_pub.shape == (8, 16)


def test_keygen_deterministic():
    a = mceliece_keygen("toy16", 42)
    b = mceliece_keygen("toy16", 42)
    assert a.public == b.public and a.private == b.private
    assert a.public != mceliece_keygen("toy16", 43).public


@pytest.mark.parametrize("params", [McElieceParams(4, 16, 2), McElieceParams(5, 32, 3), McElieceParams(6, 50, 4)])
@pytest.mark.parametrize("seed", [0, 1])
def test_key_invariants_small(params, seed):
    kp = mceliece_keygen(params, seed)
    priv = kp.private
    assert poly_is_irreducible(priv.g) and priv.g.degree == params.t
    assert len(set(priv.support.tolist())) == params.n
    assert all(poly_eval(priv.g, int(a)).value != 0 for a in priv.support)
    if params.k <= 16:
        assert oracles.gf2_rank_bruteforce(priv.s) == params.k
    assert np.array_equal(gf2_matmul(priv.s, priv.s_inv), np.eye(params.k, dtype=np.uint8))
    pm = priv.p_matrix
    assert np.all(pm.sum(axis=0) == 1) and np.all(pm.sum(axis=1) == 1)
    # G_pub = S G P
    want = gf2_matmul(gf2_matmul(priv.s, priv.generator), pm)
    assert np.array_equal(kp.public.g_pub, want)
    # every generator row lies in the Goppa code by the polynomial definition
    for row in priv.generator:
        assert goppa_membership(priv, row)
    # and the binary parity check annihilates it
    assert not np.any(gf2_matmul(priv.generator, priv.decoder.hbin.T))


def test_t1_code_exhaustive():
    params = McElieceParams(4, 15, 1)
    priv = mceliece_keygen(params, 5).private
    words, _ = oracles.all_codewords(priv.generator)
    assert words.shape == (2 ** params.k, params.n)
    assert not np.any(priv.decoder.syndromes(words))
    assert all(goppa_membership(priv, w) for w in words[:: 64])
    # nothing outside the span has zero syndrome
    for e in np.eye(params.n, dtype=np.uint8):
        assert np.any(priv.decoder.syndromes(e[None, :]))


def test_generator_from_parity_is_systematic():
    rng = np.random.default_rng(3)
    h = rng.integers(0, 2, size=(6, 14), dtype=np.uint8)
    gen, info = generator_from_parity(h)
    assert gen.shape[0] == 14 - oracles.gf2_rank_bruteforce(h)
    assert not np.any(gf2_matmul(gen, h.T))
    assert np.array_equal(gen[:, info], np.eye(gen.shape[0], dtype=np.uint8))


def test_random_invertible():
    rng = make_rng(0)
    for k in (1, 5, 12):
        s = random_invertible_gf2(k, rng)
        assert oracles.gf2_rank_bruteforce(s) == k
        assert np.array_equal(gf2_matmul(s, gf2_inv(s)), np.eye(k, dtype=np.uint8))


def test_key_serialization(toy_keys, tmp_path):
    kp = toy_keys[2]
    pub, priv = load_key(kp.public.to_bytes()), load_key(kp.private.to_bytes())
    assert pub == kp.public and priv == kp.private
    assert priv.public_key() == kp.public
    assert kp.public.to_bytes()[:4] == b"HNCK"
    with pytest.raises(FormatError):
        load_key(b"XXXX" + kp.public.to_bytes()[4:])
    with pytest.raises(FormatError):
        load_key(kp.private.to_bytes()[:-1])


# -- encryption ---------------------------------------------------------------------


def test_zero_error_hook(toy_keys):
    pub = toy_keys[0].public
    m = np.array([1, 0, 1, 1, 0, 0, 1, 0], dtype=np.uint8)
    c = mceliece_encrypt(pub, m, 0, error=np.zeros(16, np.uint8))
    assert np.array_equal(c, gf2_matmul(m[None], pub.g_pub)[0])
    e1 = np.zeros(16, np.uint8)
    e1[0] = 1
    assert np.array_equal(mceliece_encrypt(pub, np.zeros(8, np.uint8), 0, error=e1), e1)
    assert np.array_equal(mceliece_decrypt(toy_keys[0].private, c), m)


def test_error_weight_exact(toy_keys):
    pub = toy_keys[0].public
    rng = make_rng(11)
    m = rng.integers(0, 2, size=(1000, 8), dtype=np.uint8)
    c = mceliece_encrypt(pub, m, rng)
    assert np.all((c ^ gf2_matmul(m, pub.g_pub)).sum(axis=1) == 2)


def test_error_vectors_are_uniform_enough():
    z = random_error_vectors(8, 2, 28000, make_rng(4))
    counts = np.unique(np.packbits(z, axis=1), return_counts=True)[1]
    assert counts.size == 28
    assert counts.min() > 850 and counts.max() < 1150


def test_length_mismatch(toy_keys):
    with pytest.raises(DimensionError):
        mceliece_encrypt(toy_keys[0].public, np.zeros(7, np.uint8), 0)
    with pytest.raises(DimensionError):
        mceliece_decrypt(toy_keys[0].private, np.zeros(15, np.uint8))


def test_roundtrip_toy_all_keys(toy_keys):
    rng = make_rng(1)
    for kp in toy_keys:
        m = rng.integers(0, 2, size=(2000, 8), dtype=np.uint8)
        assert np.array_equal(mceliece_decrypt(kp.private, mceliece_encrypt(kp.public, m, rng)), m)


def test_roundtrip_classic(classic_keys):
    rng = make_rng(2)
    m = rng.integers(0, 2, size=(100, 524), dtype=np.uint8)
    c = mceliece_encrypt(classic_keys.public, m, rng)
    assert np.array_equal(mceliece_decrypt(classic_keys.private, c), m)


@pytest.mark.slow
def test_roundtrip_pq2960():
    kp = mceliece_keygen("pq2960", 0)
    rng = make_rng(3)
    m = rng.integers(0, 2, size=(10, 2288), dtype=np.uint8)
    assert np.array_equal(mceliece_decrypt(kp.private, mceliece_encrypt(kp.public, m, rng)), m)


@settings(max_examples=40)
@given(st.integers(0, 4), st.lists(st.integers(0, 1), min_size=8, max_size=8), st.integers(0, 2 ** 32 - 1))
def test_roundtrip_property(toy_keys, key_index, msg, seed):
    kp = toy_keys[key_index]
    m = np.array(msg, dtype=np.uint8)
    assert np.array_equal(mceliece_decrypt(kp.private, mceliece_encrypt(kp.public, m, seed)), m)


def test_patterson_matches_nearest_codeword(toy_keys):
    """Every pattern of weight <= t decodes to the unique nearest codeword."""
    for kp in toy_keys:
        priv = kp.private
        words, msgs = oracles.all_codewords(kp.public.g_pub)
        base = words[37]
        for wt in (0, 1, 2):
            for pos in itertools.combinations(range(16), wt):
                rx = base.copy()
                rx[list(pos)] ^= 1
                near, dist = oracles.nearest_codewords(rx, words)
                assert len(near) == 1 and dist == wt
                assert np.array_equal(mceliece_decrypt(priv, rx), msgs[37])


def test_toy_minimum_distance(toy_keys):
    # a binary [16, 8] code has distance at most 5; Goppa codes with t=2 reach exactly 5
    for kp in toy_keys:
        words, _ = oracles.all_codewords(kp.public.g_pub)
        assert words[1:].sum(axis=1).min() == 5


def _tplus1_outcomes(kp):
    """(rejected, silent) counts over all weight-3 patterns added to one codeword."""
    words, msgs = oracles.all_codewords(kp.public.g_pub)
    m = msgs[101]
    rejected = silent = 0
    for pos in itertools.combinations(range(16), 3):
        rx = words[101].copy()
        rx[list(pos)] ^= 1
        near, dist = oracles.nearest_codewords(rx, words)
        try:
            out = mceliece_decrypt(kp.private, rx)
        except DecodingFailure:
            rejected += 1
            # rejection happens exactly when no codeword lies within distance t
            assert dist > 2
            continue
        assert not np.array_equal(out, m)
        assert dist == 2 and len(near) == 1
        silent += 1
    return rejected, silent


def test_tplus1_behaviour_matches_code_geometry(toy_keys):
    for kp in toy_keys:
        rejected, silent = _tplus1_outcomes(kp)
        assert rejected + silent == 560
        assert silent > 0


@pytest.mark.xfail(strict=True, reason="distance-5 codes decode some weight-3 patterns to a neighbour codeword")
def test_tplus1_all_rejected(toy_keys):
    for kp in toy_keys:
        assert _tplus1_outcomes(kp)[1] == 0


def test_cipher_adapters(toy_keys):
    kp = toy_keys[3]
    ciph = McElieceCipher.from_keypair(kp)
    rng = make_rng(9)
    m = rng.integers(0, 2, size=(5, 8), dtype=np.uint8)
    assert np.array_equal(ciph.dec(ciph.enc(m, rng)), m)
    assert not ciph.transparent
    enc_only = McElieceCipher(public=kp.public)
    with pytest.raises(ParameterError):
        enc_only.dec(ciph.enc(m, rng))
    ident = IdentityCipher(8)
    assert ident.transparent and np.array_equal(ident.dec(ident.enc(m)), m)
