"""Acceptance criteria 1-9; each test records one PASS/FAIL line in the summary."""
import io
import itertools
import time

import mpmath
import numpy as np
import pytest

from acceptance_log import criterion
from huncc.analysis import bitcount_example_check, measured_delta, security_level, sweep
from huncc.cli import main
from huncc.cryptosys import McElieceCipher, mceliece_decrypt, mceliece_encrypt, mceliece_keygen
from huncc.errors import DecodingFailure
from huncc.galois import GF
from huncc.iscode import (
    ELIMINATION_CONSTANT,
    bruteforce,
    iscode_build,
    iscode_from_matrix,
    rank_criterion,
    verify_individual_secrecy_bruteforce,
)
from huncc.netsim import NetworkConfig, received_transmission, transmit
from huncc.pipeline import huncc_decode, huncc_encode, make_config
from huncc._rng import make_rng

import oracles


def cli(*argv):
    buf = io.StringIO()
    code = main([str(a) for a in argv], out=buf)
    return code, buf.getvalue()


def test_criterion_1_rate_reproduction():
    with criterion(1, "rate reproduction") as notes:
        start = time.perf_counter()
        rates = {}
        for l in (2, 3):
            code, text = cli("rate", "--l", l, "--c", 1, "--kb", 2288, "--nb", 2960, "--csv")
            assert code == 0
            rates[l] = float(text.splitlines()[1].split(",")[4])
        elapsed = time.perf_counter() - start
        assert 0.870 <= rates[2] <= 0.875, rates[2]
        assert 0.905 <= rates[3] <= 0.915, rates[3]
        assert elapsed < 1.0
        notes.append(f"l=2 exact {rates[2]:.6f}, l=3 exact {rates[3]:.6f}")


def test_criterion_2_rsa_arithmetic():
    with criterion(2, "bit-count arithmetic") as notes:
        start = time.perf_counter()
        rep = bitcount_example_check()
        elapsed = time.perf_counter() - start
        assert rep.rsa_total == 5360
        assert abs(rep.rsa_rate - 0.8537) <= 0.001
        assert rep.mceliece_total == 5248
        assert elapsed < 1.0
        notes.append(f"RSA {rep.rsa_total} bits rate {rep.rsa_rate:.4f}, McEliece {rep.mceliece_total} bits")


def test_criterion_3_individual_secrecy_exhaustive():
    with criterion(3, "exhaustive individual secrecy") as notes:
        start = time.perf_counter()
        gf16 = GF(2, 4)
        codes = [("GF(7) example", iscode_from_matrix(GF(7), [[1, 1], [2, 1]], 1))]
        codes.append(("GF(16) l=3 w=2", iscode_build(gf16, 3, 2, seed=0)))
        for w in (1, 2, 3):
            codes.append((f"GF(16) l=4 w={w}", iscode_build(gf16, 4, w, seed=0)))
        for name, code in codes:
            rep = verify_individual_secrecy_bruteforce(code)
            assert rep.passed and rep.max_tv == 0.0, (name, rep.summary())
        broken = iscode_from_matrix(GF(7), [[1, 0], [0, 1]], 1, verify=False)
        rep = verify_individual_secrecy_bruteforce(broken)
        assert not rep.passed and rep.witness is not None
        broken16 = iscode_from_matrix(gf16, np.eye(4, dtype=np.int64), 2, verify=False)
        assert not verify_individual_secrecy_bruteforce(broken16).passed
        elapsed = time.perf_counter() - start
        assert elapsed < 300
        notes.append(f"{len(codes)} codes flat, identity {rep.summary()}")


FIELDS_UP_TO_16 = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4)]


def test_criterion_4_rank_criterion_equivalence():
    with criterion(4, "rank criterion equals brute force") as notes:
        rng = np.random.default_rng(2024)
        cases = agree = leaky = 0
        for (p, m), l in itertools.product(FIELDS_UP_TO_16, (1, 2, 3)):
            f = GF(p, m)
            for i in range(200):
                g = f.random(rng, (l, l))
                if i % 2:
                    # sparse draws so that both verdicts occur often
                    g[rng.random(g.shape) < 0.4] = 0
                for w in range(l + 1):
                    rank_ok = rank_criterion(f, g, w) is None
                    brute_ok = bruteforce(f, g, w).passed
                    cases += 1
                    agree += rank_ok == brute_ok
                    leaky += not brute_ok
        assert agree == cases, f"{cases - agree} disagreements"
        notes.append(f"{agree}/{cases} verdicts agree, {leaky} leaking")


class TPlusOneNotRejected(AssertionError):
    pass


@pytest.mark.xfail(
    strict=True,
    raises=TPlusOneNotRejected,
    reason="toy16 codes have minimum distance 5, so some weight-3 patterns decode to another codeword",
)
def test_criterion_5_mceliece_correctness(toy_keys):
    with criterion(5, "McEliece correctness") as notes:
        rng = make_rng(55)
        kp = toy_keys[0]
        m = rng.integers(0, 2, size=(10_000, 8), dtype=np.uint8)
        assert np.array_equal(mceliece_decrypt(kp.private, mceliece_encrypt(kp.public, m, rng)), m)

        start = time.perf_counter()
        big = mceliece_keygen("classic1024", 2024)
        assert big.public.g_pub.shape == (524, 1024)
        m = rng.integers(0, 2, size=(100, 524), dtype=np.uint8)
        assert np.array_equal(mceliece_decrypt(big.private, mceliece_encrypt(big.public, m, rng)), m)
        classic_time = time.perf_counter() - start
        assert classic_time < 60

        # every pattern of weight <= t decodes, exhaustively at toy16
        within = 0
        for key in toy_keys:
            words, msgs = oracles.all_codewords(key.public.g_pub)
            for wt in (0, 1, 2):
                for pos in itertools.combinations(range(16), wt):
                    rx = words[200].copy()
                    rx[list(pos)] ^= 1
                    assert np.array_equal(mceliece_decrypt(key.private, rx), msgs[200])
                    within += 1
        notes.append(f"10^4 toy16 + 10^2 classic1024 roundtrips ({classic_time:.1f}s), {within} <=t patterns")

        silent = rejected = 0
        for key in toy_keys:
            words, msgs = oracles.all_codewords(key.public.g_pub)
            for pos in itertools.combinations(range(16), 3):
                rx = words[200].copy()
                rx[list(pos)] ^= 1
                try:
                    mceliece_decrypt(key.private, rx)
                except DecodingFailure:
                    rejected += 1
                else:
                    silent += 1
        if silent:
            raise TPlusOneNotRejected(f"{silent} of {silent + rejected} weight-3 patterns decoded silently")
        notes.append(f"all {rejected} weight-3 patterns rejected")


def _sizes():
    # 1 KB to 256 KB, cycling through the grid; one 1 MB case is added separately
    return itertools.cycle([1024, 3000, 16384, 65536, 262144])


def test_criterion_6_end_to_end(toy_keys, classic_keys):
    with criterion(6, "end-to-end pipeline") as notes:
        rng = np.random.default_rng(6)
        sizes = _sizes()
        ciphers = {
            "toy16": McElieceCipher.from_keypair(toy_keys[0]),
            "classic1024": McElieceCipher.from_keypair(classic_keys),
        }
        runs = 0
        total_bytes = 0
        cases = [(p, l, c) for p in ciphers for l in (2, 3, 5, 10) for c in sorted({1, l // 2, l})]
        cases.append(("classic1024", 10, 5, 1 << 20))
        for case in cases:
            preset, l, c = case[:3]
            size = case[3] if len(case) == 4 else next(sizes)
            cfg = make_config(l, c, ciphers[preset])
            data = rng.bytes(size)
            trans = huncc_encode(cfg, data, seed=runs)
            report, _ = transmit(NetworkConfig(l), trans)
            out = huncc_decode(cfg, received_transmission(trans, report))
            assert out == data, (preset, l, c, size)
            per_batch = c * cfg.n_b + (l - c) * cfg.k_b
            assert trans.total_payload_bits == trans.blocks * per_batch
            for p in trans.payloads:
                assert len(p.data) == -(-p.bit_length // 8)
            runs += 1
            total_bytes += size
        notes.append(f"{runs} configurations byte-identical, {total_bytes} bytes")


def test_criterion_7_security_arithmetic():
    with criterion(7, "security-level arithmetic") as notes:
        mpmath.mp.prec = 400
        rep = security_level(128, 2, delta=10)
        exact = mpmath.log(mpmath.mpf(2) ** 128 - 10, 2)
        approx = mpmath.mpf(128) - mpmath.mpf(10) / mpmath.mpf(2) ** 128
        assert abs(rep.exact_level - float(exact)) < 2 ** -20
        assert abs(rep.approx_level - float(approx)) < 2 ** -20
        assert abs(rep.exact_level - rep.approx_level) < 2 ** -20
        ratios = [measured_delta(l) / (ELIMINATION_CONSTANT * l ** 3) for l in range(2, 13)]
        assert all(0.25 <= r <= 4 for r in ratios), ratios
        notes.append(f"delta/(K l^3) in [{min(ratios):.3f}, {max(ratios):.3f}] for l=2..12, K={ELIMINATION_CONSTANT}")


def test_criterion_8_sweep_shape():
    with criterion(8, "sweep shape") as notes:
        rows = sweep("pq2960", 10).rows
        rates = [r.rate_exact for r in rows]
        assert rates[0] == 1.0
        assert all(a > b for a, b in zip(rates, rates[1:]))
        assert abs(rates[-1] - 0.773) < 1e-3
        assert rows[0].f_crypto == 0
        assert all(r.f_crypto == 128 / 256 for r in rows[1:])
        notes.append(f"rate 1.0 -> {rates[-1]:.4f}, f_crypto 0 then 0.5")


def _cli_session(workdir, monkeypatch):
    """Run every subcommand with fixed seeds in ``workdir``; returns (reports, artifacts)."""
    monkeypatch.chdir(workdir)
    (workdir / "input.bin").write_bytes(bytes(range(256)) * 5)
    (workdir / "scenario.txt").write_text(
        "l = 3\nc = 1\npreset = toy16\neve.kind = myopic\neve.links = 1\neve.flips = 1:0,1,2\ntrials = 30\nseed = 8\n"
    )
    commands = [
        ("keygen", "--preset", "toy16", "--seed", "c0ffee", "--out", "keys/toy"),
        ("encode", "--in", "input.bin", "--pub", "keys/toy.pub", "--out", "enc", "--seed", "1",
         "--paths", 3, "--encrypted", 2),
        ("encode", "--in", "input.bin", "--pub", "keys/toy.pub", "--out", "venc", "--seed", "1",
         "--paths", 3, "--encrypted", 2, "--virtual-single-path"),
        ("decode", "--in", "enc", "--key", "keys/toy.key", "--out", "dec.bin", "--paths", 3, "--encrypted", 2),
        ("decode", "--in", "venc", "--key", "keys/toy.key", "--out", "vdec.bin", "--paths", 3, "--encrypted", 2,
         "--virtual-single-path"),
        ("simulate", "--scenario", "scenario.txt", "--csv"),
        ("simulate", "--scenario", "scenario.txt"),
        ("verify-secrecy", "--l", 3, "--c", 1, "--field", "2^4", "--seed", 5),
        ("sweep", "--preset", "pq2960", "--l", 10, "--csv"),
        ("rate", "--l", 3, "--c", 1, "--kb", 2288, "--nb", 2960),
        ("info",),
    ]
    reports = []
    for argv in commands:
        code, text = cli(*argv)
        assert code == 0, argv
        reports.append(text)
    artifacts = {
        str(p.relative_to(workdir)): p.read_bytes() for p in sorted(workdir.rglob("*")) if p.is_file()
    }
    return reports, artifacts


def test_criterion_9_determinism(tmp_path, monkeypatch):
    with criterion(9, "determinism") as notes:
        a_dir, b_dir = tmp_path / "a", tmp_path / "b"
        a_dir.mkdir()
        b_dir.mkdir()
        reports_a, files_a = _cli_session(a_dir, monkeypatch)
        reports_b, files_b = _cli_session(b_dir, monkeypatch)
        assert reports_a == reports_b
        assert files_a == files_b
        assert files_a["dec.bin"] == files_a["input.bin"] == files_a["vdec.bin"]
        notes.append(f"{len(reports_a)} commands, {len(files_a)} artifacts byte-identical")
