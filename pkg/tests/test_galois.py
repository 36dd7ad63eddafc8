import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from huncc.errors import FieldError, FieldMismatchError, InconsistentSystemError, SingularMatrixError
from huncc.galois import (
    GF,
    FieldElement,
    FieldSpec,
    Poly,
    _irreducible_generic,
    eliminate,
    fe_add,
    fe_inv,
    fe_mul,
    fe_pow,
    field_new,
    gauss_op_count,
    mat_inv,
    mat_mul,
    mat_rank,
    monic_polys,
    poly_eval,
    poly_eval_many,
    poly_gcd,
    poly_is_irreducible,
    smallest_irreducible,
    solve_linear,
)

SMALL_FIELDS = [(2, 1), (2, 3), (2, 4), (2, 8), (3, 1), (3, 2), (5, 1), (7, 1), (3, 3), (5, 2)]


def _modulus_int(f):
    return sum(c << i for i, c in enumerate(f.modulus))


def test_gf8_example():
    f = field_new(2, 3, [1, 1, 0, 1])
    x = f.element(0b010)
    assert (x * f.element(0b100)).value == 0b011


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        field_new(2, 3, [1, 0, 0, 1])


def test_non_prime_rejected():
    with pytest.raises(FieldError):
        FieldSpec(6, 1)


def test_prime_field_auto_modulus():
    f = field_new(7, 1)
    assert f.order == 7
    assert f.modulus == (0, 1)


@pytest.mark.parametrize(
    "p,m,expected",
    [(2, 4, 0b10011), (2, 8, 0x11B), (2, 10, (1 << 10) | 0b1001), (2, 12, (1 << 12) | 0b1001)],
)
def test_auto_modulus_smallest(p, m, expected):
    assert _modulus_int(GF(p, m)) == expected
    # nothing smaller of the same degree is irreducible
    for cand in range(1 << m, expected):
        coeffs = [(cand >> i) & 1 for i in range(m + 1)]
        assert not oracles.is_irreducible_gfp(coeffs, 2)


def test_auto_modulus_odd_characteristic():
    f = GF(3, 2)
    assert oracles.is_irreducible_gfp(list(f.modulus), 3)
    assert f.modulus == smallest_irreducible(3, 2)


def test_inverse_examples():
    f = GF(7)
    assert fe_inv(f.element(3)).value == 5
    a = f.element(4)
    assert fe_mul(a, f.element(1)) == a


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        GF(2, 4).inv(0)


def test_mismatched_fields():
    with pytest.raises(FieldMismatchError):
        fe_add(GF(7).element(1), GF(5).element(1))


@pytest.mark.parametrize("p,m", [(2, 3), (2, 4), (2, 8), (3, 2), (5, 2), (7, 1), (3, 3)])
def test_multiplication_matches_reference(p, m):
    f = GF(p, m)
    rng = np.random.default_rng(p * 100 + m)
    for a, b in rng.integers(0, f.order, size=(300, 2)):
        a, b = int(a), int(b)
        if p == 2:
            want = oracles.gf2m_mul(a, b, _modulus_int(f))
        else:
            want = oracles.gfpm_mul(a, b, p, list(f.modulus))
        assert f.mul(a, b) == want


@pytest.mark.parametrize("p,m", [(2, 1), (2, 5), (2, 10), (3, 4), (7, 2), (13, 1)])
def test_inverse_exhaustive(p, m):
    f = GF(p, m)
    vals = np.arange(1, f.order)
    assert np.all(f.mul_arr(vals, f.inv_arr(vals)) == 1)


def test_table_free_field_matches_table_field():
    # GF(2^17) has no tables; its products must agree with carry-less arithmetic
    f = GF(2, 17)
    assert not f.has_tables
    rng = np.random.default_rng(3)
    for a, b in rng.integers(0, f.order, size=(50, 2)):
        assert f.mul(int(a), int(b)) == oracles.gf2m_mul(int(a), int(b), _modulus_int(f))
    a = int(rng.integers(1, f.order))
    assert f.mul(a, f.inv(a)) == 1


field_and_triple = st.sampled_from(SMALL_FIELDS).flatmap(
    lambda pm: st.tuples(
        st.just(pm),
        *[st.integers(0, pm[0] ** pm[1] - 1)] * 3,
    )
)


@given(field_and_triple)
def test_field_axioms(args):
    (p, m), a, b, c = args
    f = GF(p, m)
    assert f.add(a, b) == f.add(b, a)
    assert f.mul(a, b) == f.mul(b, a)
    assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.add(a, f.neg(a)) == 0
    assert f.sub(f.add(a, b), b) == a


@given(st.sampled_from(SMALL_FIELDS), st.integers(0, 1000), st.integers(1, 10**6))
def test_pow_matches_repeated_multiplication(pm, e, a_seed):
    f = GF(*pm)
    a = a_seed % f.order
    acc = 1
    for _ in range(e % 40):
        acc = f.mul(acc, a)
    assert fe_pow(f.element(a), e % 40).value == acc


def test_element_serialization_roundtrip():
    for p, m in SMALL_FIELDS:
        f = GF(p, m)
        blob = f.to_bytes() + b"tail"
        back, used = FieldSpec.from_bytes(blob)
        assert back == f and blob[used:] == b"tail"


# -- polynomials -------------------------------------------------------------


def test_poly_examples():
    f2 = GF(2)
    assert poly_eval(Poly(f2, [1, 1, 0, 1]), 0).value == 1
    f7 = GF(7)
    a = Poly(f7, [f7.neg(1), 0, 1])  # x^2 - 1
    b = Poly(f7, [f7.neg(1), 1])  # x - 1
    assert poly_gcd(a, b) == Poly(f7, [6, 1])
    assert not poly_is_irreducible(Poly(f2, [1, 0, 1]))
    assert Poly(f7, []).degree == Poly.ZERO_DEGREE


@pytest.mark.parametrize("degree", range(1, 7))
def test_irreducibility_against_reference(degree):
    f2 = GF(2)
    for poly in monic_polys(f2, degree):
        assert poly_is_irreducible(poly) == oracles.is_irreducible_gfp(list(poly.coeffs), 2)


def test_irreducibility_over_extension_matches_root_search():
    # over GF(16), degree 2 and 3 polynomials are irreducible iff rootless
    f = GF(2, 4)
    rng = np.random.default_rng(11)
    elems = np.arange(f.order)
    for _ in range(200):
        deg = int(rng.integers(2, 4))
        poly = Poly(f, list(f.random(rng, deg)) + [1])
        rootless = not np.any(poly_eval_many(poly, elems) == 0)
        assert poly_is_irreducible(poly) == rootless
        assert _irreducible_generic(poly) == rootless


@given(st.lists(st.integers(0, 15), min_size=1, max_size=8), st.lists(st.integers(0, 15), min_size=1, max_size=6))
def test_poly_divmod_identity(a, b):
    f = GF(2, 4)
    pa, pb = Poly(f, a), Poly(f, b)
    if pb.is_zero():
        return
    q, r = divmod(pa, pb)
    assert q * pb + r == pa
    assert r.degree < pb.degree


def test_poly_eval_many_matches_scalar():
    f = GF(2, 8)
    rng = np.random.default_rng(1)
    poly = Poly(f, list(f.random(rng, 9)))
    xs = np.arange(f.order)
    assert list(poly_eval_many(poly, xs)) == [poly_eval(poly, int(x)).value for x in xs]


# -- matrices ------------------------------------------------------------------


def test_mat_inv_example():
    f = GF(7)
    inv = mat_inv(f, [[1, 1], [2, 1]])
    assert inv.tolist() == [[6, 1], [2, 6]]
    assert mat_mul(f, inv, np.array([[1, 1], [2, 1]])).tolist() == [[1, 0], [0, 1]]


def test_identity_rank_and_solve():
    f = GF(5)
    assert mat_rank(f, np.eye(4, dtype=np.int64)) == 4
    b = np.array([1, 2, 3, 4])
    assert solve_linear(f, np.eye(4, dtype=np.int64), b).tolist() == b.tolist()


def test_singular_inverse_raises():
    with pytest.raises(SingularMatrixError):
        mat_inv(GF(7), [[1, 2], [2, 4]])


def test_inconsistent_system():
    with pytest.raises(InconsistentSystemError):
        solve_linear(GF(7), [[1, 2], [2, 4]], [1, 1])


@pytest.mark.parametrize("n", [1, 4, 9, 16])
def test_mat_inv_random_gf256(n):
    f = GF(2, 8)
    rng = np.random.default_rng(n)
    while True:
        a = f.random(rng, (n, n))
        if mat_rank(f, a) == n:
            break
    assert np.array_equal(mat_mul(f, mat_inv(f, a), a), np.eye(n, dtype=np.int64))


def test_rank_matches_gf2_bruteforce():
    f = GF(2)
    rng = np.random.default_rng(5)
    for _ in range(100):
        a = rng.integers(0, 2, size=(int(rng.integers(1, 7)), int(rng.integers(1, 7))))
        assert mat_rank(f, a) == oracles.gf2_rank_bruteforce(a)


def test_char2_kernel_rank_matches_generic():
    f = GF(2, 4)
    rng = np.random.default_rng(9)
    for _ in range(100):
        a = f.random(rng, (int(rng.integers(1, 6)), int(rng.integers(1, 6))))
        a[rng.random(a.shape) < 0.4] = 0
        assert mat_rank(f, a) == eliminate(f, a).rank


def test_op_count_is_cubic():
    ratios = [gauss_op_count(n) / n ** 3 for n in range(2, 40)]
    assert max(ratios) / min(ratios) < 4
    f = GF(2, 8)
    rng = np.random.default_rng(2)
    for n in (3, 6, 10):
        a = f.random(rng, (n, n + 1))
        assert eliminate(f, a, ncols=n).ops <= gauss_op_count(n)


def test_field_element_wrapper():
    f = GF(2, 3)
    a = FieldElement(f, 5)
    assert (a * a.inverse()).value == 1
    assert (a + a).value == 0
    assert a.coeffs == (1, 0, 1)
