"""
q-expansions of the level-two forms: eta quotients, theta, the Hauptmodul l and
every product form built from them, together with the identity checks tying
the different constructions together.

Scales follow eta(s tau / 2) = q^(s/24) prod_n (1 - q^(s n)) in q = exp(pi i tau),
so s=1 is eta(tau/2), s=2 is eta(tau), s=4 is eta(2 tau) and s=8 is eta(4 tau).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from loguru import logger

from modular_congruences.utils.errors import (
    BadParameter,
    InvalidPrecision,
    NotExpandable,
    UnknownForm,
    UnsupportedWeight,
)
from modular_congruences.utils.report import VerificationReport
from modular_congruences.utils.sequences import (
    f_series,
    picard_fuchs_residual,
    sigma3,
    sigma3_half,
)
from modular_congruences.utils.series import (
    PowerSeries,
    compose,
    d_operator,
    first_mismatch,
    inverse,
    make_series,
    mul,
    one,
    pow_int,
    sign_flip,
    sqrt_unit,
)

L_FACTORS = {4: 16, 1: 8, 2: -24}
ONE_MINUS_16L_FACTORS = {1: 16, 4: 8, 2: -24}
THETA_FACTORS = {2: 10, 1: -4, 4: -4}
PSI_FACTORS = {4: 12}
NU_FACTORS = {4: 24}
APERY_ETA_FACTORS = {8: 6}
# l (1 - 16l) theta^5 collapses to a holomorphic eta product
F1_FACTORS = {1: 4, 2: 2, 4: 4}

FORM_NAMES = (
    "theta",
    "lambda",
    "one_minus_16l",
    "f1",
    "g1",
    "psi",
    "nu",
    "h",
    "f",
    "eisenstein1",
    "apery_eta",
)
FORM_ALIASES = {
    "one16l": "one_minus_16l",
    "eis1": "eisenstein1",
    "apery-eta": "apery_eta",
}
INDEXED_FORMS = ("h", "f")

IDENTITIES = (
    "eq1",
    "lemma2",
    "lemma3",
    "lemma4",
    "lemma5",
    "eisenstein",
    "psi_eta",
    "nu_eta",
    "picard_fuchs",
    "h1_shift",
    "l_shift",
    "theta_eta",
    "one16l_eta",
)
# identities that compare against a relation derived here rather than stated
DERIVED_IDENTITIES = ("psi_eta", "nu_eta", "h1_shift", "l_shift", "one16l_eta")
MIN_IDENTITY_TERMS = 8


@dataclass(frozen=True)
class EtaQuotient:
    """Formal product of eta(s tau / 2)^e over the scales s in ``factors``."""

    factors: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        for scale in self.factors:
            if scale < 1:
                raise BadParameter(f"eta scale must be positive, got {scale}")

    @property
    def leading_exponent_24(self) -> int:
        """24 times the power of q in front of the product."""
        return sum(scale * exponent for scale, exponent in self.factors.items())

    def __hash__(self):
        return hash(tuple(sorted(self.factors.items())))


def _euler_product(prec: int, scale: int = 1) -> list[int]:
    """prod_n (1 - q^(scale n)) to ``prec`` terms by the pentagonal number theorem."""
    values = [0] * prec
    values[0] = 1
    k = 1
    while True:
        low = scale * k * (3 * k - 1) // 2
        high = scale * k * (3 * k + 1) // 2
        if low >= prec:
            break
        sign = -1 if k & 1 else 1
        values[low] = sign
        if high < prec:
            values[high] = sign
        k += 1
    return values


def _power_of_unit_series(f: list[int], exponent: int, prec: int) -> list[int]:
    """
    f^exponent for f[0] = 1 and any integer exponent, from the recurrence

        n g_n = sum_{k=1..n} (exponent k - (n - k)) f_k g_{n-k}

    which costs one pass over the nonzero terms of f per output coefficient.
    """
    support = [(k, c) for k, c in enumerate(f[1:prec], start=1) if c]
    g = [1] + [0] * (prec - 1)
    for n in range(1, prec):
        total = 0
        for k, c in support:
            if k > n:
                break
            total += (exponent * k - (n - k)) * c * g[n - k]
        g[n] = total // n
    return g


def eta_product(factors: dict[int, int], prec: int) -> PowerSeries:
    """prod_s prod_n (1 - q^(s n))^(e_s), the eta quotient without its q-power."""
    if prec <= 0:
        raise InvalidPrecision(f"precision must be positive, got {prec}")
    result = one(prec)
    for scale, exponent in sorted(factors.items()):
        if scale < 1:
            raise BadParameter(f"eta scale must be positive, got {scale}")
        if not exponent:
            continue
        values = _power_of_unit_series(_euler_product(prec, scale), exponent, prec)
        result = mul(result, make_series(values, prec))
    return result


def expand_eta_quotient(eq: EtaQuotient, prec: int) -> PowerSeries:
    leading = eq.leading_exponent_24
    if leading % 24 or leading < 0:
        raise NotExpandable(
            f"leading exponent {Fraction(leading, 24)} is not a non-negative integer"
        )
    shift = leading // 24
    logger.debug(f"expanding eta quotient {eq.factors} to {prec} terms")
    if shift >= prec:
        return make_series([], prec)
    body = eta_product(eq.factors, prec - shift)
    return make_series([0] * shift + list(body.coeffs), prec)


def theta_by_squares(prec: int) -> PowerSeries:
    """sum r2(n) q^n with r2 counted over the lattice points a^2 + b^2 < prec."""
    if prec <= 0:
        raise InvalidPrecision(f"precision must be positive, got {prec}")
    values = [0] * prec
    bound = isqrt(prec - 1)
    for a in range(-bound, bound + 1):
        rest = prec - 1 - a * a
        if rest < 0:
            continue
        top = isqrt(rest)
        for b in range(-top, top + 1):
            values[a * a + b * b] += 1
    return make_series(values, prec)


@dataclass(frozen=True)
class FormSpec:
    name: str
    n: int | None = None

    def __post_init__(self):
        if self.name not in FORM_NAMES:
            raise UnknownForm(f"unknown form {self.name!r}")
        if self.name in INDEXED_FORMS:
            if self.n is None:
                raise UnknownForm(
                    f"form {self.name} needs an index, e.g. {self.name}:2"
                )
            if self.n < (2 if self.name == "f" else 1):
                raise UnknownForm(f"index {self.n} is out of range for {self.name}")
        elif self.n is not None:
            raise UnknownForm(f"form {self.name} takes no index")

    @classmethod
    def parse(cls, text: str) -> "FormSpec":
        """Read ``theta``, ``h:3``, ``one16l`` and friends."""
        name, _, index = text.strip().partition(":")
        name = FORM_ALIASES.get(name, name)
        if not index:
            return cls(name)
        try:
            return cls(name, int(index))
        except ValueError as exc:
            raise UnknownForm(f"bad form index in {text!r}") from exc

    @property
    def label(self) -> str:
        return self.name if self.n is None else f"{self.name}:{self.n}"


@lru_cache(maxsize=8)
def _theta(prec: int) -> PowerSeries:
    return theta_by_squares(prec)


@lru_cache(maxsize=8)
def _lambda(prec: int) -> PowerSeries:
    return expand_eta_quotient(EtaQuotient(L_FACTORS), prec)


@lru_cache(maxsize=8)
def _one_minus_16l(prec: int) -> PowerSeries:
    return expand_eta_quotient(EtaQuotient(ONE_MINUS_16L_FACTORS), prec)


@lru_cache(maxsize=8)
def _f1(prec: int) -> PowerSeries:
    return expand_eta_quotient(EtaQuotient(F1_FACTORS), prec)


def _product(prec: int, theta: int, one_minus_16l: int, lam: int) -> PowerSeries:
    """theta^a (1 - 16l)^b l^c."""
    return mul(
        mul(pow_int(_theta(prec), theta), pow_int(_one_minus_16l(prec), one_minus_16l)),
        pow_int(_lambda(prec), lam),
    )


def build_form(spec: FormSpec, prec: int) -> PowerSeries:
    if prec < 1:
        raise InvalidPrecision(f"precision must be positive, got {prec}")
    logger.info(f"building {spec.label} to {prec} terms")
    name, n = spec.name, spec.n
    if name == "theta":
        return _theta(prec)
    if name == "lambda":
        return _lambda(prec)
    if name == "one_minus_16l":
        return _one_minus_16l(prec)
    if name == "f1":
        return _f1(prec)
    if name == "g1":
        return _product(prec, 5, 2, 2)
    if name == "psi":
        root = sqrt_unit(_one_minus_16l(prec))
        return mul(root, _product(prec, 6, 0, 2))
    if name == "nu":
        return _product(prec, 12, 1, 4)
    if name == "eisenstein1":
        return _product(prec, 4, 1, 1)
    if name == "apery_eta":
        return expand_eta_quotient(EtaQuotient(APERY_ETA_FACTORS), prec)
    if name == "h":
        return _product(prec, 6 * n + 1, (n + 1) // 2, 2 * n)
    if name == "f":
        return mul(_product(prec, 6 * n - 6, (n - 1) // 2, 2 * n - 2), _f1(prec))
    raise UnknownForm(f"unknown form {name!r}")


def _record_equal(
    report: VerificationReport, desc: str, lhs: PowerSeries, rhs: PowerSeries
) -> None:
    at = first_mismatch(lhs, rhs)
    if at is None:
        report.add(f"{desc} to q^{min(lhs.prec, rhs.prec)}", True)
        return
    logger.warning(f"{desc} differs first at q^{at}")
    report.add(f"{desc}: first mismatch at q^{at}", False, (at, lhs[at], rhs[at]))


def _eisenstein_target(prec: int) -> PowerSeries:
    values = [0] + [
        (-1) ** k * (sigma3_half(k) - sigma3(k)) for k in range(1, prec)
    ]
    return make_series(values, prec)


def verify_identity(identity: str, prec: int) -> VerificationReport:
    """
    Check one of ``IDENTITIES`` to ``prec`` terms. Mismatches are failed records,
    not exceptions.
    """
    identity = identity.replace("-", "_")
    if identity not in IDENTITIES:
        raise BadParameter(f"unknown identity {identity!r}")
    if prec < MIN_IDENTITY_TERMS:
        raise InvalidPrecision(
            f"identities need at least {MIN_IDENTITY_TERMS} terms, got {prec}"
        )
    report = VerificationReport(f"identity.{identity}", {"terms": prec})
    tag = " [DERIVED]" if identity in DERIVED_IDENTITIES else ""
    theta, lam, one16 = _theta(prec), _lambda(prec), _one_minus_16l(prec)

    if identity == "eq1":
        lhs = compose(f_series(prec), lam)
        _record_equal(report, "sum C(2n,n)^2 l^n = theta", lhs, theta)
    elif identity == "lemma2":
        lhs = sign_flip(eta_product({1: 1}, prec))
        rhs = eta_product({2: 3, 1: -1, 4: -1}, prec)
        _record_equal(report, "eta(tau/2 + 1/2) / eta(tau/2) product form", lhs, rhs)
    elif identity == "lemma3":
        _record_equal(
            report,
            "theta(tau+1) = theta sqrt(1-16l)",
            sign_flip(theta),
            mul(theta, sqrt_unit(one16)),
        )
    elif identity == "lemma4":
        lhs = inverse(pow_int(theta, 3))
        for _ in range(4):
            lhs = d_operator(lhs)
        f1 = build_form(FormSpec("f1"), prec)
        g1 = build_form(FormSpec("g1"), prec)
        rhs = -12 * (f1 - 108 * g1)
        _record_equal(report, "D^4(theta^-3) = -12 (f1 - 108 g1)", lhs, rhs)
    elif identity == "lemma5":
        _record_equal(
            report,
            "D(l) = l (1-16l) theta^2",
            d_operator(lam),
            mul(mul(lam, one16), pow_int(theta, 2)),
        )
    elif identity == "eisenstein":
        _record_equal(
            report,
            "l (1-16l) theta^4 = sum (-1)^k (sigma3(k/2) - sigma3(k)) q^k",
            build_form(FormSpec("eisenstein1"), prec),
            _eisenstein_target(prec),
        )
    elif identity == "psi_eta":
        _record_equal(
            report,
            "sqrt(1-16l) l^2 theta^6 = eta(2tau)^12" + tag,
            build_form(FormSpec("psi"), prec),
            expand_eta_quotient(EtaQuotient(PSI_FACTORS), prec),
        )
    elif identity == "nu_eta":
        _record_equal(
            report,
            "theta^12 (1-16l) l^4 = eta(2tau)^24" + tag,
            build_form(FormSpec("nu"), prec),
            expand_eta_quotient(EtaQuotient(NU_FACTORS), prec),
        )
    elif identity == "picard_fuchs":
        for n in range(prec - 1):
            residual = picard_fuchs_residual(n)
            if residual:
                report.add(
                    f"(n+1)^2 a(n+1) = 4(2n+1)^2 a(n) at n={n}", False, (n, residual)
                )
        if not report.instances:
            report.add(f"(n+1)^2 a(n+1) = 4(2n+1)^2 a(n) for n < {prec - 1}", True)
    elif identity == "h1_shift":
        unshifted = mul(mul(pow_int(theta, 7), sqrt_unit(one16)), pow_int(lam, 2))
        shifted = sign_flip(unshifted)
        _record_equal(
            report,
            "h1 = theta(tau+1)^7 sqrt(1-16l(tau+1)) l(tau+1)^2" + tag,
            build_form(FormSpec("h", 1), prec),
            shifted,
        )
    elif identity == "l_shift":
        _record_equal(
            report, "l(tau+1) (1-16l) = -l" + tag, mul(sign_flip(lam), one16), -lam
        )
    elif identity == "theta_eta":
        _record_equal(
            report,
            "sum r2(n) q^n = eta(tau)^10 / (eta(tau/2)^4 eta(2tau)^4)",
            theta_by_squares(prec),
            expand_eta_quotient(EtaQuotient(THETA_FACTORS), prec),
        )
    elif identity == "one16l_eta":
        _record_equal(report, "16 l + (1-16l) = 1" + tag, 16 * lam + one16, one(prec))

    if report.passed:
        logger.success(f"identity {identity} holds to q^{prec}")
    return report


def dim_cusp_forms(
    g: int, r1: int, r2: int, e_list: list[int], k: int
) -> Fraction | int:
    """
    Dimension of the odd weight k cusp forms of a group with genus g, r1 regular
    cusps, r2 irregular cusps and elliptic points of the given orders.
    """
    if k % 2 == 0 or k < 3:
        raise UnsupportedWeight(f"only odd weights k >= 3 are supported, got {k}")
    value = (
        Fraction((k - 1) * (g - 1))
        + Fraction((k - 2) * r1, 2)
        + Fraction((k - 1) * r2, 2)
        + sum((Fraction(e - 1, 2 * e) for e in e_list), Fraction(0))
    )
    return int(value) if value.denominator == 1 else value

