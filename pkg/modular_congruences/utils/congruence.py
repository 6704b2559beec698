"""
Congruence engine: coefficient transfer between a form and a hypergeometric
sequence, three-term congruence checks, sums of two squares, and one verifier per
congruence family.

Every verifier returns a VerificationReport. A failed check is a failed record;
exceptions are reserved for bad parameters.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt, prod

from loguru import logger
from sympy import isprime, primerange

from modular_congruences.utils.errors import (
    BadParameter,
    NoRepresentation,
    PrecisionExceeded,
)
from modular_congruences.utils.forms import FormSpec, build_form
from modular_congruences.utils.report import VerificationReport
from modular_congruences.utils.sequences import (
    A_k_table,
    B_C_tables,
    D3_table,
    SequenceTable,
    apery_B_table,
)
from modular_congruences.utils.series import (
    PowerSeries,
    compose,
    derivative,
    make_series,
    revert,
)

__all__ = [
    "HECKE_FORMS",
    "IndexMap",
    "ThreeTermInstance",
    "TwoSquares",
    "VerificationReport",
    "cm_b1",
    "cornacchia",
    "form_coefficients",
    "hecke_check",
    "hecke_family",
    "legendre_minus_one",
    "required_terms",
    "three_term_check",
    "transfer_coefficients",
    "two_squares_by_search",
    "verify_cor1",
    "verify_cor2",
    "verify_example",
    "verify_intro_apery",
    "verify_theorem1",
    "verify_theorem2",
    "verify_transfer_bridge",
]

TRUNCATED = "[truncated-term]"
COR1_RELATIONS = ("eq1", "eq2", "eq3", "eq4")
THEOREM2_PARTS = ("a", "b", "c")

# weight, exponent step from a(n) to the power of q, and whether the character is (-1/p)
HECKE_FORMS = {
    "f1": (5, 1, True),
    "psi": (6, 2, False),
    "apery_eta": (3, 2, True),
}


@dataclass(frozen=True)
class TwoSquares:
    p: int
    x: int
    y: int

    def __post_init__(self):
        if not 0 < self.x <= self.y or self.x**2 + self.y**2 != self.p:
            raise BadParameter(f"{self.p} != {self.x}^2 + {self.y}^2")

    def __str__(self) -> str:
        return f"{self.p} = {self.x}^2 + {self.y}^2"


@dataclass(frozen=True)
class IndexMap:
    """Sequence index (value + shift) / divisor for the value m p^k."""

    shift: int = 0
    divisor: int = 1

    def __call__(self, value: Fraction) -> Fraction:
        return (value + self.shift) / self.divisor


@dataclass(frozen=True)
class ThreeTermInstance:
    p: int
    m: int
    r: int
    alpha: int
    beta: int
    mod_exponent: int
    lhs_value: int
    status: bool
    truncated: bool = False

    @property
    def modulus(self) -> int:
        return self.p**self.mod_exponent

    def record_into(self, report: VerificationReport, label: str = "") -> None:
        desc = f"{label}p={self.p} m={self.m} r={self.r}"
        if self.truncated:
            desc += f" {TRUNCATED}"
        report.add(
            desc,
            self.status,
            (self.p, self.m, self.r, self.alpha, self.beta, self.lhs_value),
            self.modulus,
        )


def _odd_primes(low: int, high: int) -> list[int]:
    return [int(p) for p in primerange(max(low, 3), high + 1)]


def legendre_minus_one(p: int) -> int:
    """(-1/p) for an odd p."""
    if p % 2 == 0:
        raise BadParameter(f"(-1/p) needs an odd p, got {p}")
    return 1 if p % 4 == 1 else -1


def _check_prime(p: int) -> None:
    if not isprime(p):
        raise BadParameter(f"{p} is not prime")


def two_squares_by_search(p: int) -> TwoSquares:
    """Exhaustive search; slow, kept as the reference for ``cornacchia``."""
    for x in range(1, isqrt(p // 2) + 1):
        rest = p - x * x
        y = isqrt(rest)
        if y * y == rest:
            return TwoSquares(p, x, y)
    raise NoRepresentation(f"{p} is not a sum of two positive squares")


def cornacchia(p: int) -> TwoSquares:
    """p = x^2 + y^2 with 0 < x <= y for a prime p = 1 (mod 4)."""
    _check_prime(p)
    if p % 4 != 1:
        raise NoRepresentation(f"{p} is not 1 mod 4")
    non_residue = 2
    while pow(non_residue, (p - 1) // 2, p) != p - 1:
        non_residue += 1
    root = pow(non_residue, (p - 1) // 4, p)
    if root < p // 2:
        root = p - root
    a, b = p, root
    limit = isqrt(p)
    while b > limit:
        a, b = b, a % b
    rest = p - b * b
    other = isqrt(rest)
    if other * other != rest:
        raise NoRepresentation(f"descent for {p} did not end on a square")
    x, y = sorted((b, other))
    return TwoSquares(p, x, y)


def cm_b1(p: int) -> int:
    """2x^4 - 12x^2y^2 + 2y^4 for p = x^2 + y^2, and 0 for p = 3 (mod 4)."""
    if p == 2:
        raise BadParameter("the closed form only covers odd primes")
    _check_prime(p)
    if p % 4 == 3:
        return 0
    rep = cornacchia(p)
    x2, y2 = rep.x**2, rep.y**2
    return 2 * x2 * x2 - 12 * x2 * y2 + 2 * y2 * y2


def transfer_coefficients(
    b: SequenceTable, t: PowerSeries, length: int
) -> SequenceTable:
    """
    c_1 .. c_length with sum c_n q^(n-1) = (sum b_n t^(n-1)) dt/dq, for b indexed
    from 1 and t of valuation 1.
    """
    if t.valuation != 1:
        raise BadParameter(f"substitution must have valuation 1, got {t.valuation}")
    if t.prec < length + 1:
        raise PrecisionExceeded(
            f"substitution known to q^{t.prec - 1}, {length + 1} terms needed"
        )
    outer = make_series([b.at(n) for n in range(1, length + 1)], length, b.modulus)
    inner = t.truncate(length + 1)
    series = compose(outer, inner.truncate(length)) * derivative(inner)
    return SequenceTable(f"transfer({b.name})", 1, series.coeffs, series.modulus)


def three_term_check(
    seq: SequenceTable,
    alpha: int,
    beta: int,
    p: int,
    m: int,
    r: int,
    mod_exponent: int,
    index_map: IndexMap = IndexMap(),
) -> ThreeTermInstance:
    """
    seq(i0) - alpha seq(i1) + beta seq(i2) for i_j = index_map(m p^(r-j)), tested
    for divisibility by p^mod_exponent. Negative and non-integral indices read as 0
    and mark the instance as truncated.
    """
    modulus = p ** max(mod_exponent, 0)
    if seq.modulus is not None and seq.modulus % modulus:
        raise BadParameter(
            f"{seq.name} is reduced mod {seq.modulus}, not a multiple of {modulus}"
        )
    indices = [index_map(Fraction(m) * Fraction(p) ** (r - j)) for j in range(3)]
    truncated = any(i.denominator != 1 or i < 0 for i in indices)
    lhs = seq.at(indices[0]) - alpha * seq.at(indices[1]) + beta * seq.at(indices[2])
    if seq.modulus is not None:
        lhs %= seq.modulus
    status = lhs % modulus == 0
    logger.debug(f"{seq.name} p={p} m={m} r={r}: lhs={lhs} mod p^{mod_exponent}")
    return ThreeTermInstance(p, m, r, alpha, beta, mod_exponent, lhs, status, truncated)


def form_coefficients(name: str, length: int) -> SequenceTable:
    """a(0) .. a(length-1) of a Hecke form, read off every ``step``-th power of q."""
    if name not in HECKE_FORMS:
        raise BadParameter(f"no Hecke data for form {name!r}")
    _, step, _ = HECKE_FORMS[name]
    series = build_form(FormSpec.parse(name), step * (length - 1) + 1)
    return SequenceTable(name, 0, series.coeffs[::step])


def hecke_check(
    coeffs: SequenceTable, p: int, weight: int, chi_p: int, range_: int
) -> VerificationReport:
    """a(pn) = a(p) a(n) - chi_p p^(weight-1) a(n/p) for 1 <= n <= range_."""
    if coeffs.end <= p * range_:
        raise PrecisionExceeded(
            f"{coeffs.name} needs index {p * range_}, has {coeffs.end - 1}"
        )
    report = VerificationReport(
        f"hecke.{coeffs.name}",
        {"p": p, "weight": weight, "chi": chi_p, "range": range_},
    )
    if range_ < 1:
        return report
    a_p = coeffs.at(p)
    for n in range(1, range_ + 1):
        lhs = coeffs.at(p * n)
        rhs = a_p * coeffs.at(n) - chi_p * p ** (weight - 1) * coeffs.at(Fraction(n, p))
        report.add(f"a({p}*{n})", lhs == rhs, (p, n, lhs, rhs))
    return report


def hecke_family(name: str, prime_max: int, range_: int) -> VerificationReport:
    """hecke_check for every prime up to ``prime_max``; p = 2 uses chi = 0."""
    weight, _, twisted = HECKE_FORMS[name]
    table = form_coefficients(name, prime_max * range_ + 1)
    report = VerificationReport(
        f"hecke.{name}", {"prime_max": prime_max, "range": range_, "weight": weight}
    )
    for p in primerange(2, prime_max + 1):
        p = int(p)
        if p == 2:
            chi = 0
        else:
            chi = legendre_minus_one(p) if twisted else 1
        report.extend(hecke_check(table, p, weight, chi, range_))
    return report


def required_terms(family: str, params: dict) -> int:
    """Precision each family expands its forms and tables to."""
    prime_max = params.get("prime_max", 0)
    if family.startswith("identity.") or family == "transfer-bridge":
        return params.get("terms") or 200
    if family in ("theorem1", "theorem2a", "theorem2b", "theorem2c", "example"):
        return prime_max + 1
    if family in ("cor1.eq1", "cor1.eq2", "cor2"):
        return prime_max
    if family in ("cor1.eq3", "cor1.eq4"):
        return params["m_max"] * prime_max ** params["r_max"]
    if family == "intro-apery":
        return (params["m_max"] * prime_max ** params["r_max"] - 1) // 2 + 1
    raise BadParameter(f"unknown family {family!r}")


def _finish(report: VerificationReport) -> VerificationReport:
    summary = report.summary
    if report.passed:
        logger.success(f"{report.family}: all {summary['pass']} checks pass")
    else:
        logger.warning(f"{report.family}: {summary['fail']} checks fail")
    return report


def _vanishing(
    report: VerificationReport, series: PowerSeries, primes: list[int], label: str
) -> None:
    for p in primes:
        value = series[p]
        report.add(f"{label}({p}) = 0", value == 0, (p, value))


def verify_theorem1(n: int, prime_bound: int) -> VerificationReport:
    """a_n(p) = 0 for the coefficients of h_n at primes p = (-1)^(n+1) mod 4."""
    report = VerificationReport("theorem1", {"n": n, "prime_max": prime_bound})
    logger.info(f"theorem1 n={n} up to {prime_bound}")
    residue = 1 if n % 2 else 3
    primes = [p for p in _odd_primes(3, prime_bound) if p % 4 == residue]
    if primes:
        terms = required_terms("theorem1", {"prime_max": prime_bound})
        h = build_form(FormSpec("h", n), terms)
        _vanishing(report, h, primes, f"a_{n}")
    return _finish(report)


def verify_theorem2(part: str, bound: int, n: int | None = None) -> VerificationReport:
    if part not in THEOREM2_PARTS:
        raise BadParameter(f"unknown part {part!r} of theorem 2")
    params = {"part": part, "prime_max": bound}
    if n is not None:
        params["n"] = n
    report = VerificationReport(f"theorem2{part}", params)
    terms = required_terms(f"theorem2{part}", {"prime_max": bound})
    logger.info(f"theorem2{part} up to {bound}")

    if part == "a":
        f1 = build_form(FormSpec("f1"), terms)
        for p in _odd_primes(3, bound):
            closed = cm_b1(p)
            report.add(f"b_1({p}) = cm_b1({p})", f1[p] == closed, (p, f1[p], closed))
    elif part == "b":
        f1 = build_form(FormSpec("f1"), terms)
        g1 = build_form(FormSpec("g1"), terms)
        for k in range(3, bound + 1):
            difference = f1[k] - 108 * g1[k]
            report.add(
                f"{k}^3 | b_1({k}) - 108 c_1({k})",
                difference % k**3 == 0,
                (k, difference),
                k**3,
            )
    else:
        if n is None or n < 2:
            raise BadParameter("theorem 2c needs n >= 2")
        residue = 1 if n % 2 == 0 else 3
        primes = [p for p in _odd_primes(3, bound) if p % 4 == residue]
        if primes:
            _vanishing(report, build_form(FormSpec("f", n), terms), primes, f"b_{n}")
    return _finish(report)


def _checked_alpha(p: int, f1: PowerSeries) -> int:
    alpha = cm_b1(p)
    if f1[p] != alpha:
        raise BadParameter(
            f"closed form b_1({p}) = {alpha} disagrees with expansion {f1[p]}"
        )
    return alpha


def verify_cor1(
    relation: str,
    prime_bound: int,
    m_max: int = 1,
    r_max: int = 1,
    prime_min: int = 5,
) -> VerificationReport:
    if relation not in COR1_RELATIONS:
        raise BadParameter(f"unknown relation {relation!r}")
    if prime_min <= 3:
        raise BadParameter(f"primes must exceed 3, got a lower bound of {prime_min}")
    family = f"cor1.{relation}"
    params = {
        "prime_min": prime_min,
        "prime_max": prime_bound,
        "m_max": m_max,
        "r_max": r_max,
    }
    report = VerificationReport(family, params)
    primes = _odd_primes(prime_min, prime_bound)
    logger.info(f"{family} over {len(primes)} primes")
    if not primes:
        return _finish(report)

    if relation in ("eq1", "eq2"):
        length = required_terms(family, params)
        table = A_k_table(3, length) if relation == "eq1" else D3_table(length)
        for p in primes:
            value = table.at(p - 1) % p
            if p % 4 == 3:
                expected = 0
            else:
                rep = cornacchia(p)
                report.add(
                    f"16x^4 = 16y^4 mod {p}",
                    (16 * rep.x**4 - 16 * rep.y**4) % p == 0,
                    (p, rep.x, rep.y),
                    p,
                )
                scale = 16 if relation == "eq1" else 4 * pow(27, -1, p)
                expected = scale * rep.x**4 % p
            report.add(
                f"{table.name}({p}-1) mod {p}",
                value == expected,
                (p, value, expected),
                p,
            )
        return _finish(report)

    f1 = build_form(FormSpec("f1"), prime_bound + 1)
    modulus = prod(p**r_max for p in primes)
    length = required_terms(family, params)
    if relation == "eq3":
        table = A_k_table(3, length, modulus)
    else:
        table = D3_table(length, modulus)
    for p in primes:
        alpha = _checked_alpha(p, f1)
        chi = legendre_minus_one(p)
        beta = chi * p**4
        for m in range(1, m_max + 1):
            for r in range(1, r_max + 1):
                exponent = r if relation == "eq3" else r - (chi + 1) // 2
                instance = three_term_check(
                    table, alpha, beta, p, m, r, exponent, IndexMap(shift=-1)
                )
                instance.record_into(report, f"{table.name} ")
    return _finish(report)


def verify_cor2(n: int, prime_bound: int) -> VerificationReport:
    """B_n(p-1) and C_n(p-1) vanish mod p on the matching residue classes of p mod 4."""
    report = VerificationReport("cor2", {"n": n, "prime_max": prime_bound})
    b_table, c_table = B_C_tables(n, required_terms("cor2", {"prime_max": prime_bound}))
    b_residue = 1 if n % 2 else 3
    for p in _odd_primes(3, prime_bound):
        table = b_table if p % 4 == b_residue else c_table
        value = table.at(p - 1)
        report.add(f"{p} | {table.name}({p}-1)", value % p == 0, (p, value % p), p)
    return _finish(report)


def verify_example(prime_bound: int) -> VerificationReport:
    report = VerificationReport("example", {"prime_max": prime_bound})
    terms = required_terms("example", {"prime_max": prime_bound})
    a2 = A_k_table(2, terms)
    eisenstein = build_form(FormSpec("eisenstein1"), terms)
    for p in _odd_primes(3, prime_bound):
        half = (p - 1) // 2
        residue = a2.at(p - 1) % p
        report.add(f"A_2({p}-1) = 1 mod {p}", residue == 1, (p, residue), p)
        binomial = comb(p - 1, half) ** 4 % p
        report.add(f"C({p}-1, {half})^4 = 1 mod {p}", binomial == 1, (p, binomial), p)
        report.add(
            f"eisenstein q^{p} = 1 mod {p}",
            eisenstein[p] % p == 1,
            (p, eisenstein[p] % p),
            p,
        )
    return _finish(report)


def verify_intro_apery(
    prime_bound: int, m_max: int = 1, r_max: int = 1, prime_min: int = 3
) -> VerificationReport:
    """
    B((m p^r - 1)/2) - a(p) B((m p^(r-1) - 1)/2)
        + (-1)^((p-1)/2) p^2 B((m p^(r-2) - 1)/2)

    vanishes mod p^r for odd m, with a(n) the coefficient of q^(2n) in eta(4 tau)^6.
    """
    if m_max % 2 == 0:
        raise BadParameter(f"m runs over odd values, got an even bound {m_max}")
    params = {
        "prime_min": prime_min,
        "prime_max": prime_bound,
        "m_max": m_max,
        "r_max": r_max,
    }
    report = VerificationReport("intro-apery", params)
    primes = _odd_primes(prime_min, prime_bound)
    if not primes:
        return _finish(report)
    a = form_coefficients("apery_eta", prime_bound + 1)
    modulus = prod(p**r_max for p in primes)
    table = apery_B_table(required_terms("intro-apery", params), modulus)
    for p in primes:
        beta = legendre_minus_one(p) * p * p
        for m in range(1, m_max + 1, 2):
            for r in range(1, r_max + 1):
                instance = three_term_check(
                    table, a.at(p), beta, p, m, r, r, IndexMap(shift=-1, divisor=2)
                )
                instance.record_into(report)
    return _finish(report)


def _record_tables(
    report: VerificationReport, desc: str, lhs: SequenceTable, rhs: SequenceTable
) -> None:
    length = min(lhs.end, rhs.end)
    first = next(
        (i for i in range(1, length) if lhs.at(i) != rhs.at(i)),
        None,
    )
    if first is None:
        report.add(desc, True, (length - 1,))
    else:
        report.add(desc, False, (first, lhs.at(first), rhs.at(first)))


def verify_transfer_bridge(n_max: int, terms: int) -> VerificationReport:
    """
    Sequence side against form side through t = l in both directions, plus
    c_p = b_p mod p on each transferred pair.
    """
    report = VerificationReport("transfer-bridge", {"n_max": n_max, "terms": terms})
    lam = build_form(FormSpec("lambda"), terms + 1)
    inverse_lam = revert(lam)
    primes = _odd_primes(3, min(100, terms - 1))
    a3 = A_k_table(3, terms).shifted(1)
    f1 = SequenceTable.from_series("f1", build_form(FormSpec("f1"), terms + 1), 1)
    pairs = [("A:3", a3, f1)]
    for n in range(1, n_max + 1):
        b_table, c_table = B_C_tables(n, terms)
        h_form = build_form(FormSpec("h", n), terms + 1)
        h = SequenceTable.from_series(f"h:{n}", h_form, 1)
        f = f1 if n == 1 else SequenceTable.from_series(
            f"f:{n}", build_form(FormSpec("f", n), terms + 1), 1
        )
        pairs.append((b_table.name, b_table.shifted(1), h))
        pairs.append((c_table.name, c_table.shifted(1), f))

    for name, b, c in pairs:
        forward = transfer_coefficients(b, lam, terms)
        _record_tables(report, f"transfer({name}, l) = {c.name}", forward, c)
        backward = transfer_coefficients(c, inverse_lam, terms)
        _record_tables(report, f"transfer({c.name}, l^-1) = {name}", backward, b)
        for p in primes:
            report.add(
                f"c_{p} = b_{p} mod {p} for {name}",
                (forward.at(p) - b.at(p)) % p == 0,
                (p, forward.at(p) % p, b.at(p) % p),
                p,
            )

    scaled = transfer_coefficients(a3.scaled(16), lam, terms)
    _record_tables(report, "transfer(16 A:3, l) = 16 f1", scaled, f1.scaled(16))
    return _finish(report)
