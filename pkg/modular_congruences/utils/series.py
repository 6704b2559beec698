"""
Truncated formal power series in one variable q with exact integer coefficients.

Every series lives in the half-period variable q = exp(pi i tau). A series of
precision N knows the coefficients of q^0 .. q^(N-1) exactly; anything beyond is
unknown, so every operation returns the smallest precision of its inputs.
A series may carry a modulus M, in which case its coefficients are the canonical
residues in [0, M).
"""

from dataclasses import dataclass
from typing import Sequence

import polars as pl
from loguru import logger

from modular_congruences.utils.errors import (
    BadLeadingTerm,
    BadParameter,
    CompositionDiverges,
    InvalidPrecision,
    ModulusMismatch,
    NotIntegralSqrt,
    NotInvertible,
    NotRevertible,
    PrecisionExceeded,
)

# below this many nonzero-trimmed terms the plain convolution beats packing
SCHOOLBOOK_CUTOFF = 24


@dataclass(frozen=True)
class PowerSeries:
    coeffs: tuple[int, ...]
    prec: int
    modulus: int | None = None

    def __post_init__(self):
        if self.prec <= 0:
            raise InvalidPrecision(f"precision must be positive, got {self.prec}")
        if len(self.coeffs) != self.prec:
            raise InvalidPrecision(
                f"{len(self.coeffs)} coefficients given for precision {self.prec}"
            )
        if self.modulus is not None:
            if self.modulus < 2:
                raise BadParameter(f"modulus must be at least 2, got {self.modulus}")
            if any(not 0 <= c < self.modulus for c in self.coeffs):
                raise BadParameter("coefficients are not canonical residues")

    @property
    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, None for the zero series."""
        for index, value in enumerate(self.coeffs):
            if value:
                return index
        return None

    def __getitem__(self, n: int) -> int:
        return coeff(self, n)

    def __neg__(self) -> "PowerSeries":
        return linear_combine(-1, self, 0, self)

    def __add__(self, other: "PowerSeries | int") -> "PowerSeries":
        return linear_combine(1, self, 1, _coerce(other, self))

    __radd__ = __add__

    def __sub__(self, other: "PowerSeries | int") -> "PowerSeries":
        return linear_combine(1, self, -1, _coerce(other, self))

    def __rsub__(self, other: int) -> "PowerSeries":
        return linear_combine(1, _coerce(other, self), -1, self)

    def __mul__(self, other: "PowerSeries | int") -> "PowerSeries":
        if isinstance(other, int):
            return linear_combine(other, self, 0, self)
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "PowerSeries":
        return pow_int(self, k)

    def truncate(self, prec: int) -> "PowerSeries":
        if prec > self.prec:
            raise PrecisionExceeded(
                f"cannot raise precision from {self.prec} to {prec}"
            )
        return PowerSeries(self.coeffs[:prec], prec, self.modulus)

    def to_frame(self) -> pl.DataFrame:
        return pl.DataFrame(
            {
                "exponent": list(range(self.prec)),
                "coefficient": [str(c) for c in self.coeffs],
            },
            schema={"exponent": pl.Int64, "coefficient": pl.String},
        )

    def to_text(self) -> str:
        """Render as ``1 + 4q - 8q^2 + O(q^N)`` with every integer in full."""
        terms = []
        for exponent, value in enumerate(self.coeffs):
            if not value:
                continue
            sign = "-" if value < 0 else "+"
            size = abs(value)
            if exponent == 0:
                body = str(size)
            else:
                power = "q" if exponent == 1 else f"q^{exponent}"
                body = power if size == 1 else f"{size}{power}"
            terms.append((sign, body))
        tail = f"O(q^{self.prec})"
        if self.modulus is not None:
            tail += f" (mod {self.modulus})"
        if not terms:
            return tail
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return f"{text} + {tail}"

    def __str__(self) -> str:
        return self.to_text()


def _canonical(values: Sequence[int], modulus: int | None) -> tuple[int, ...]:
    if modulus is None:
        return tuple(values)
    return tuple(v % modulus for v in values)


def _combine_moduli(*moduli: int | None) -> int | None:
    present = {m for m in moduli if m is not None}
    if len(present) > 1:
        raise ModulusMismatch(f"incompatible moduli {sorted(present)}")
    return present.pop() if present else None


def _coerce(value: "PowerSeries | int", like: PowerSeries) -> PowerSeries:
    if isinstance(value, PowerSeries):
        return value
    return make_series([value], like.prec, like.modulus)


def _trim(values: Sequence[int]) -> list[int]:
    end = len(values)
    while end and not values[end - 1]:
        end -= 1
    return list(values[:end])


def _schoolbook(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        for j, y in enumerate(b[: n - i]):
            if y:
                out[i + j] += x * y
    return out


def _pack(values: Sequence[int], width: int) -> int:
    positive = b"".join(
        (v if v > 0 else 0).to_bytes(width, "little") for v in values
    )
    negative = b"".join(
        (-v if v < 0 else 0).to_bytes(width, "little") for v in values
    )
    return int.from_bytes(positive, "little") - int.from_bytes(negative, "little")


def _kronecker(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """
    Multiply by packing each operand into one big integer.

    Every product coefficient is bounded by min(len) * max|a| * max|b|, so a
    slot of ``width`` bytes holds it with room for a sign offset of half a slot.
    """
    a, b = a[:n], b[:n]
    top_a = max(abs(v) for v in a)
    top_b = max(abs(v) for v in b)
    if not top_a or not top_b:
        return [0] * n
    bits = (
        top_a.bit_length()
        + top_b.bit_length()
        + min(len(a), len(b)).bit_length()
        + 1
    )
    width = bits // 8 + 1
    digits = len(a) + len(b) - 1
    half = 1 << (8 * width - 1)
    offset = int.from_bytes((b"\x00" * (width - 1) + b"\x80") * digits, "little")
    raw = (_pack(a, width) * _pack(b, width) + offset).to_bytes(
        digits * width, "little"
    )
    out = [
        int.from_bytes(raw[i * width : (i + 1) * width], "little") - half
        for i in range(min(digits, n))
    ]
    return out + [0] * (n - len(out))


def _mul_lists(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    a, b = _trim(a[:n]), _trim(b[:n])
    if not a or not b:
        return [0] * n
    if min(len(a), len(b)) <= SCHOOLBOOK_CUTOFF:
        return _schoolbook(a, b, n)
    return _kronecker(a, b, n)


def _reduce_list(values: list[int], modulus: int | None) -> list[int]:
    if modulus is None:
        return values
    return [v % modulus for v in values]


def _unit_inverse(value: int, modulus: int | None, error: type[Exception]) -> int:
    if modulus is None:
        if value not in (1, -1):
            raise error(f"{value} is not a unit in the integers")
        return value
    try:
        return pow(value, -1, modulus)
    except ValueError as exc:
        raise error(f"{value} is not a unit modulo {modulus}") from exc


def _inverse_list(f: Sequence[int], n: int, modulus: int | None) -> list[int]:
    g = [_unit_inverse(f[0], modulus, NotInvertible)]
    known = 1
    while known < n:
        known = min(2 * known, n)
        error = [-v for v in _mul_lists(f[:known], g, known)]
        error[0] += 2
        g = _reduce_list(_mul_lists(g, error, known), modulus)
    return g


def _compose_lists(
    f: Sequence[int], t: Sequence[int], n: int, modulus: int | None
) -> list[int]:
    # Horner; once f_i is added the partial sum is multiplied by t^i, so it
    # only has to be known to q^(n-i)
    f = _trim(f[:n])
    if not f:
        return [0] * n
    acc = [f[-1]]
    for i in range(len(f) - 2, -1, -1):
        acc = _reduce_list(_mul_lists(acc, t, n - i), modulus)
        acc[0] += f[i]
    acc = _reduce_list(acc, modulus)
    return acc + [0] * (n - len(acc))


def make_series(
    coeffs: Sequence[int], prec: int, modulus: int | None = None
) -> PowerSeries:
    """Zero-pad ``coeffs`` to ``prec`` terms."""
    if prec <= 0:
        raise InvalidPrecision(f"precision must be positive, got {prec}")
    if len(coeffs) > prec:
        raise InvalidPrecision(f"{len(coeffs)} coefficients exceed precision {prec}")
    padded = list(coeffs) + [0] * (prec - len(coeffs))
    return PowerSeries(_canonical(padded, modulus), prec, modulus)


def one(prec: int, modulus: int | None = None) -> PowerSeries:
    return make_series([1], prec, modulus)


def monomial(exponent: int, prec: int, coefficient: int = 1) -> PowerSeries:
    """coefficient * q^exponent, or zero if the exponent is past the precision."""
    if exponent >= prec:
        return make_series([], prec)
    return make_series([0] * exponent + [coefficient], prec)


def linear_combine(a: int, f: PowerSeries, b: int, g: PowerSeries) -> PowerSeries:
    modulus = _combine_moduli(f.modulus, g.modulus)
    n = min(f.prec, g.prec)
    values = [a * x + b * y for x, y in zip(f.coeffs[:n], g.coeffs[:n])]
    return PowerSeries(_canonical(values, modulus), n, modulus)


def mul(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Cauchy product truncated to the smaller precision."""
    modulus = _combine_moduli(f.modulus, g.modulus)
    n = min(f.prec, g.prec)
    values = _mul_lists(f.coeffs, g.coeffs, n)
    return PowerSeries(_canonical(values, modulus), n, modulus)


def schoolbook_mul(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Reference product by direct convolution, kept as the oracle for ``mul``."""
    modulus = _combine_moduli(f.modulus, g.modulus)
    n = min(f.prec, g.prec)
    values = _schoolbook(f.coeffs, g.coeffs, n)
    return PowerSeries(_canonical(values, modulus), n, modulus)


def pow_int(f: PowerSeries, k: int) -> PowerSeries:
    if k < 0:
        raise BadParameter(f"exponent must be non-negative, got {k}")
    result = one(f.prec, f.modulus)
    base = f
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def inverse(f: PowerSeries) -> PowerSeries:
    """Multiplicative inverse by order-doubling Newton iteration g <- g(2 - fg)."""
    values = _inverse_list(f.coeffs, f.prec, f.modulus)
    check = _reduce_list(_mul_lists(f.coeffs, values, f.prec), f.modulus)
    if check != [1] + [0] * (f.prec - 1):
        raise NotInvertible("inverse failed its self-check")
    return PowerSeries(tuple(values), f.prec, f.modulus)


def sqrt_unit(f: PowerSeries) -> PowerSeries:
    """
    Square root with constant term 1 by Newton iteration s <- s + (f - s^2)/(2s).

    Each correction is computed as a product and then halved; an odd
    coefficient means the root is not integral at that order.
    """
    modulus = f.modulus
    leading = f.coeffs[0] if modulus is None else f.coeffs[0] % modulus
    if leading != 1:
        raise BadLeadingTerm(f"constant term must be 1, got {f.coeffs[0]}")
    half = None
    if modulus is not None:
        half = _unit_inverse(2, modulus, NotIntegralSqrt)

    root = [1]
    known = 1
    while known < f.prec:
        known = min(2 * known, f.prec)
        root = root + [0] * (known - len(root))
        residual = [
            x - y
            for x, y in zip(f.coeffs[:known], _mul_lists(root, root, known))
        ]
        correction = _mul_lists(
            residual, _inverse_list(root, known, modulus), known
        )
        if half is None:
            odd = next((i for i, c in enumerate(correction) if c & 1), None)
            if odd is not None:
                raise NotIntegralSqrt(
                    f"square root has a non-integral coefficient at q^{odd}"
                )
            root = [r + c // 2 for r, c in zip(root, correction)]
        else:
            root = [(r + c * half) % modulus for r, c in zip(root, correction)]
        logger.debug(f"sqrt_unit known to q^{known}")

    check = _reduce_list(_mul_lists(root, root, f.prec), modulus)
    if check != list(f.coeffs):
        raise NotIntegralSqrt("square root failed its self-check")
    return PowerSeries(tuple(root), f.prec, modulus)


def d_operator(f: PowerSeries) -> PowerSeries:
    """D = q d/dq: the coefficient of q^n becomes n * f_n."""
    values = [n * c for n, c in enumerate(f.coeffs)]
    return PowerSeries(_canonical(values, f.modulus), f.prec, f.modulus)


def derivative(f: PowerSeries) -> PowerSeries:
    """Plain d/dq; loses one term of precision."""
    if f.prec < 2:
        raise InvalidPrecision("derivative needs precision of at least 2")
    values = [n * c for n, c in enumerate(f.coeffs)][1:]
    return PowerSeries(_canonical(values, f.modulus), f.prec - 1, f.modulus)


def sign_flip(f: PowerSeries) -> PowerSeries:
    """f(-q), the effect of tau -> tau + 1 on a series in integral powers of q."""
    values = [-c if n & 1 else c for n, c in enumerate(f.coeffs)]
    return PowerSeries(_canonical(values, f.modulus), f.prec, f.modulus)


def compose(f: PowerSeries, t: PowerSeries) -> PowerSeries:
    """f(t(q)) for an inner series without constant term."""
    if t.valuation == 0:
        raise CompositionDiverges("inner series has a nonzero constant term")
    modulus = _combine_moduli(f.modulus, t.modulus)
    n = min(f.prec, t.prec)
    values = _compose_lists(f.coeffs, t.coeffs, n, modulus)
    return PowerSeries(_canonical(values, modulus), n, modulus)


def revert(t: PowerSeries) -> PowerSeries:
    """
    Compositional inverse g with t(g(q)) = q, by Newton iteration
    g <- g - (t(g) - q) / t'(g).
    """
    if t.valuation != 1:
        raise NotRevertible(f"series must have valuation 1, got {t.valuation}")
    modulus = t.modulus
    n = t.prec
    linear = _unit_inverse(t.coeffs[1], modulus, NotRevertible)
    slope = [k * c for k, c in enumerate(t.coeffs)][1:]

    inverse_series = [0, linear][:n]
    known = 2
    while known < n:
        known = min(2 * known, n)
        guess = inverse_series + [0] * (known - len(inverse_series))
        residual = _compose_lists(t.coeffs, guess, known, modulus)
        residual[1] -= 1
        denominator = _compose_lists(slope, guess, known, modulus)
        correction = _mul_lists(
            residual, _inverse_list(denominator, known, modulus), known
        )
        inverse_series = _reduce_list(
            [g - c for g, c in zip(guess, correction)], modulus
        )
        logger.debug(f"revert known to q^{known}")

    inverse_series = inverse_series + [0] * (n - len(inverse_series))
    identity = [0, 1][:n] + [0] * max(n - 2, 0)
    if _compose_lists(t.coeffs, inverse_series, n, modulus) != _reduce_list(
        identity, modulus
    ):
        raise NotRevertible("reversion failed its self-check")
    return PowerSeries(tuple(inverse_series), n, modulus)


def reduce_mod(f: PowerSeries, modulus: int) -> PowerSeries:
    if modulus < 2:
        raise BadParameter(f"modulus must be at least 2, got {modulus}")
    if f.modulus is not None and f.modulus % modulus:
        raise ModulusMismatch(f"cannot reduce mod {f.modulus} to mod {modulus}")
    return PowerSeries(_canonical(f.coeffs, modulus), f.prec, modulus)


def coeff(f: PowerSeries, n: int) -> int:
    if n < 0:
        raise BadParameter(f"exponent must be non-negative, got {n}")
    if n >= f.prec:
        raise PrecisionExceeded(f"q^{n} requested from a series of precision {f.prec}")
    return f.coeffs[n]


def first_mismatch(f: PowerSeries, g: PowerSeries) -> int | None:
    """Lowest exponent where two series differ within their shared precision."""
    for n, (x, y) in enumerate(zip(f.coeffs, g.coeffs)):
        if x != y:
            return n
    return None
