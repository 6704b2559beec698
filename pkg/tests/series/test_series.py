import pytest
import polars as pl
from faker import Faker

from modular_congruences.utils.errors import (
    BadLeadingTerm,
    CompositionDiverges,
    InvalidPrecision,
    ModulusMismatch,
    NotIntegralSqrt,
    NotInvertible,
    NotRevertible,
    PrecisionExceeded,
)
from modular_congruences.utils.series import (
    coeff,
    compose,
    d_operator,
    derivative,
    first_mismatch,
    inverse,
    linear_combine,
    make_series,
    mul,
    one,
    pow_int,
    reduce_mod,
    revert,
    schoolbook_mul,
    sign_flip,
    sqrt_unit,
)

fake = Faker()
Faker.seed(2718)


def random_series(prec: int, low: int = -50, high: int = 50, leading: int | None = None):
    values = [fake.random_int(min=low, max=high) for _ in range(prec)]
    if leading is not None:
        values[0] = leading
    return make_series(values, prec)


def test_make_series_pads():
    assert make_series([1], 3).coeffs == (1, 0, 0)
    assert make_series([0, 1], 4).coeffs == (0, 1, 0, 0)


def test_make_series_zero_precision():
    with pytest.raises(InvalidPrecision):
        make_series([], 0)


def test_make_series_too_many_coefficients():
    with pytest.raises(InvalidPrecision):
        make_series([1, 2, 3], 2)


def test_modulus_gives_canonical_residues():
    assert make_series([-1, 7], 2, 5).coeffs == (4, 2)


def test_linear_combine():
    f = make_series([3, 1, 4, 1], 4)
    assert linear_combine(1, f, -1, f).coeffs == (0, 0, 0, 0)
    assert linear_combine(1, make_series([1, 1], 2), 1, make_series([1, -1], 2)).coeffs == (2, 0)


def test_linear_combine_takes_smaller_precision():
    result = linear_combine(1, make_series([1, 2, 3], 3), 1, make_series([1], 2))
    assert result.prec == 2


def test_mul_small_products():
    assert mul(make_series([1, 1], 3), make_series([1, -1], 3)).coeffs == (1, 0, -1)
    assert mul(make_series([0, 1], 4), make_series([0, 1], 4)).coeffs == (0, 0, 1, 0)


def test_mul_rejects_different_moduli():
    with pytest.raises(ModulusMismatch):
        mul(make_series([1, 1], 2, 3), make_series([1, 1], 2, 5))


def test_mul_mixes_exact_and_reduced():
    product = mul(make_series([1, 1], 2), make_series([2, 2], 2, 3))
    assert product.modulus == 3
    assert product.coeffs == (2, 1)


@pytest.mark.parametrize("prec", [30, 47, 64, 200])
def test_kronecker_matches_schoolbook(prec):
    for _ in range(10):
        f = random_series(prec, -(10**12), 10**12)
        g = random_series(prec, -(10**3), 10**3)
        assert mul(f, g) == schoolbook_mul(f, g)


def test_kronecker_matches_schoolbook_with_modulus():
    modulus = 10**20 + 39
    f = reduce_mod(random_series(80, -(10**30), 10**30), modulus)
    g = reduce_mod(random_series(80, -(10**30), 10**30), modulus)
    assert mul(f, g) == schoolbook_mul(f, g)


def test_pow_int():
    f = make_series([1, 1], 3)
    assert pow_int(f, 0) == one(3)
    assert pow_int(f, 2).coeffs == (1, 2, 1)


def test_inverse_geometric_series():
    assert inverse(make_series([1, -1], 5)).coeffs == (1, 1, 1, 1, 1)
    assert inverse(one(4)) == one(4)


def test_inverse_needs_unit():
    with pytest.raises(NotInvertible):
        inverse(make_series([2, 1], 3))


def test_inverse_unit_modulo():
    f = make_series([2, 1], 6, 7)
    assert mul(f, inverse(f)) == one(6, 7)


def test_sqrt_unit_of_square():
    assert sqrt_unit(make_series([1, -2, 1], 3)).coeffs == (1, -1, 0)
    assert sqrt_unit(one(5)) == one(5)


def test_sqrt_unit_leading_term():
    with pytest.raises(BadLeadingTerm):
        sqrt_unit(make_series([4, 1], 3))


def test_sqrt_unit_non_integral():
    with pytest.raises(NotIntegralSqrt):
        sqrt_unit(make_series([1, 1], 3))


def test_d_operator():
    assert d_operator(make_series([0, 0, 0, 1], 4)).coeffs == (0, 0, 0, 3)
    assert d_operator(one(3)).coeffs == (0, 0, 0)


def test_derivative_loses_a_term():
    result = derivative(make_series([5, 1, 1, 1], 4))
    assert result.prec == 3
    assert result.coeffs == (1, 2, 3)


def test_sign_flip():
    assert sign_flip(make_series([1, 2, 3, 4], 4)).coeffs == (1, -2, 3, -4)


def test_compose():
    f = make_series([3, 1, 4, 1, 5], 5)
    q = make_series([0, 1], 5)
    assert compose(f, q) == f
    assert compose(make_series([1, 1], 3), make_series([0, 0, 1], 3)).coeffs == (1, 0, 1)


def test_compose_needs_valuation():
    with pytest.raises(CompositionDiverges):
        compose(make_series([1, 1], 3), make_series([1, 1], 3))


def test_revert_identity():
    q = make_series([0, 1], 6)
    assert revert(q) == q


@pytest.mark.parametrize(
    "coeffs",
    [[0, 0, 1], [0, 2, 1], [1, 1]],
)
def test_revert_rejects(coeffs):
    with pytest.raises(NotRevertible):
        revert(make_series(coeffs, 4))


def test_reduce_mod():
    assert reduce_mod(make_series([1, -8], 2), 5).coeffs == (1, 2)
    assert reduce_mod(make_series([], 3), 7).coeffs == (0, 0, 0)


def test_coeff_past_precision():
    f = make_series([1, 2], 2)
    assert coeff(f, 1) == 2
    with pytest.raises(PrecisionExceeded):
        coeff(f, 2)


def test_truncate_cannot_grow():
    with pytest.raises(PrecisionExceeded):
        make_series([1], 2).truncate(3)


def test_text_rendering():
    assert str(make_series([1, 4, -8], 3)) == "1 + 4q - 8q^2 + O(q^3)"
    assert str(make_series([0, -1], 2)) == "-q + O(q^2)"
    assert str(make_series([], 2)) == "O(q^2)"


def test_to_frame_uses_decimal_strings():
    frame = make_series([1, 10**30], 2).to_frame()
    assert frame.schema == {"exponent": pl.Int64, "coefficient": pl.String}
    assert frame["coefficient"].to_list() == ["1", str(10**30)]


def test_ring_laws():
    for _ in range(200):
        prec = fake.random_int(min=1, max=64)
        f, g, h = (random_series(prec) for _ in range(3))
        assert mul(f, g) == mul(g, f)
        assert mul(mul(f, g), h) == mul(f, mul(g, h))
        assert mul(f, g + h) == mul(f, g) + mul(f, h)


def test_reduce_mod_is_a_homomorphism():
    for _ in range(50):
        prec = fake.random_int(min=1, max=64)
        modulus = fake.random_int(min=2, max=10**6)
        f, g = random_series(prec), random_series(prec)
        assert reduce_mod(mul(f, g), modulus) == mul(
            reduce_mod(f, modulus), reduce_mod(g, modulus)
        )


def test_inverse_sqrt_revert_roundtrips():
    for _ in range(200):
        prec = fake.random_int(min=2, max=64)
        unit = random_series(prec, leading=fake.random_element([1, -1]))
        assert mul(unit, inverse(unit)) == one(prec)

        root = random_series(prec, leading=1)
        assert sqrt_unit(mul(root, root)) == root

        tail = [fake.random_int(min=-50, max=50) for _ in range(prec - 2)]
        t = make_series([0, 1] + tail, prec)
        q = make_series([0, 1], prec)
        assert compose(t, revert(t)) == q
        assert compose(revert(t), t) == q


def test_leibniz_rule():
    for _ in range(200):
        prec = fake.random_int(min=1, max=64)
        f, g = random_series(prec), random_series(prec)
        assert d_operator(mul(f, g)) == mul(d_operator(f), g) + mul(f, d_operator(g))


def test_chain_rule():
    for _ in range(200):
        prec = fake.random_int(min=3, max=64)
        f = random_series(prec)
        t = make_series([0] + list(random_series(prec - 1).coeffs), prec)
        lhs = d_operator(compose(f, t)).truncate(prec - 1)
        rhs = mul(compose(derivative(f), t), d_operator(t))
        assert first_mismatch(lhs, rhs) is None
