"""
Integer sequences built from the central binomial squares C(2n, n)^2.

The generating series F(t) = sum C(2n, n)^2 t^n is the hypergeometric series
2F1(1/2, 1/2; 1; 16t). Every table here is a coefficient list of a product of
powers of F, 1 - 16t and t, so each is computed with the series module.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import polars as pl
from loguru import logger
from sympy import divisor_sigma

from modular_congruences.utils.errors import BadParameter, PrecisionExceeded
from modular_congruences.utils.series import (
    PowerSeries,
    make_series,
    monomial,
    mul,
    pow_int,
)


@dataclass(frozen=True)
class SequenceTable:
    """
    values[i] is the member at index offset + i.

    Tables from this module are exact. A table with a modulus holds canonical
    residues and is only ever used for congruence checks modulo a divisor of it.
    """

    name: str
    offset: int
    values: tuple[int, ...]
    modulus: int | None = None

    def __post_init__(self):
        if self.offset < 0:
            raise BadParameter(f"offset must be non-negative, got {self.offset}")
        if self.modulus is not None and any(
            not 0 <= v < self.modulus for v in self.values
        ):
            raise BadParameter(f"{self.name} holds non-canonical residues")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> int:
        """First index past the table."""
        return self.offset + len(self.values)

    def at(self, index: int | Fraction) -> int:
        """
        Member at ``index``; negative, non-integral and pre-offset indices read as 0.
        """
        if isinstance(index, Fraction):
            if index.denominator != 1:
                return 0
            index = int(index)
        if index < self.offset:
            return 0
        if index >= self.end:
            raise PrecisionExceeded(
                f"{self.name} holds indices below {self.end}, {index} requested"
            )
        return self.values[index - self.offset]

    def shifted(self, by: int, name: str | None = None) -> "SequenceTable":
        """Same values re-indexed so that ``new.at(i + by) == self.at(i)``."""
        return SequenceTable(
            name or f"{self.name}[n-{by}]", self.offset + by, self.values, self.modulus
        )

    def scaled(self, factor: int) -> "SequenceTable":
        values = tuple(factor * v for v in self.values)
        if self.modulus is not None:
            values = tuple(v % self.modulus for v in values)
        return SequenceTable(f"{factor}*{self.name}", self.offset, values, self.modulus)

    def reduced(self, modulus: int) -> "SequenceTable":
        if self.modulus is not None and self.modulus % modulus:
            raise BadParameter(f"cannot reduce {self.name} mod {modulus}")
        return SequenceTable(
            self.name, self.offset, tuple(v % modulus for v in self.values), modulus
        )

    def to_frame(self) -> pl.DataFrame:
        return pl.DataFrame(
            {
                "index": list(range(self.offset, self.end)),
                "value": [str(v) for v in self.values],
            },
            schema={"index": pl.Int64, "value": pl.String},
        )

    @classmethod
    def from_series(
        cls, name: str, series: PowerSeries, start: int = 0
    ) -> "SequenceTable":
        """Coefficients of q^start .. q^(prec-1), indexed by their exponent."""
        return cls(name, start, series.coeffs[start:], series.modulus)


def central_binomial_sq(n: int) -> int:
    if n < 0:
        return 0
    return comb(2 * n, n) ** 2


def f_series(prec: int, modulus: int | None = None) -> PowerSeries:
    """
    F(t) = sum C(2n, n)^2 t^n to ``prec`` terms.

    C(2n, n) is carried exactly along C(2n+2, n+1) = C(2n, n) * 2(2n+1)/(n+1);
    only the squares are reduced when a modulus is given.
    """
    values = []
    central = 1
    for n in range(prec):
        square = central * central
        values.append(square if modulus is None else square % modulus)
        central = central * 2 * (2 * n + 1) // (n + 1)
    return make_series(values, prec, modulus)


def A_k_table(k: int, length: int, modulus: int | None = None) -> SequenceTable:
    """A_k(n), the k-fold convolution of C(2n, n)^2, i.e. the coefficients of F^k."""
    if k < 1:
        raise BadParameter(f"k must be positive, got {k}")
    logger.debug(f"building A_{k} to {length} terms")
    series = pow_int(f_series(length, modulus), k)
    return SequenceTable.from_series(f"A:{k}", series)


def _one_minus_16t_power(power: int, prec: int, modulus: int | None) -> PowerSeries:
    return pow_int(make_series([1, -16], max(prec, 2), modulus).truncate(prec), power)


def B_C_tables(
    n: int, length: int, modulus: int | None = None
) -> tuple[SequenceTable, SequenceTable]:
    """
    B_n(m) and C_n(m), the t-expansions of

        (1 - 16t)^floor((n-1)/2) t^(2n-1) F^(6n-1)
        (1 - 16t)^floor((n-1)/2) t^(2n-2) F^(6n-3)
    """
    if n < 1:
        raise BadParameter(f"n must be positive, got {n}")
    f = f_series(length, modulus)
    common = _one_minus_16t_power((n - 1) // 2, length, modulus)
    b_series = mul(
        mul(common, monomial(2 * n - 1, length)), pow_int(f, 6 * n - 1)
    )
    c_series = mul(
        mul(common, monomial(2 * n - 2, length)), pow_int(f, 6 * n - 3)
    )
    return (
        SequenceTable.from_series(f"B:{n}", b_series),
        SequenceTable.from_series(f"C:{n}", c_series),
    )


def D3_table(length: int, modulus: int | None = None) -> SequenceTable:
    """D_3(n) = A_3(n-1) - 16 A_3(n-2), the coefficients of t(1 - 16t) F^3."""
    a3 = A_k_table(3, length, modulus)
    values = [a3.at(n - 1) - 16 * a3.at(n - 2) for n in range(length)]
    if modulus is not None:
        values = [v % modulus for v in values]
    return SequenceTable("D3", 0, tuple(values), modulus)


def apery_B_table(length: int, modulus: int | None = None) -> SequenceTable:
    """
    B(n) = sum_k C(n+k, k) C(n, k)^2 by the recurrence

        n^2 B(n) = (11n^2 - 11n + 3) B(n-1) + (n-1)^2 B(n-2).

    Only the last two exact members are kept, so residue tables stay small even
    far along the sequence.
    """
    values = []
    previous, current = 0, 1
    for n in range(length):
        if n:
            numerator = (11 * n * n - 11 * n + 3) * current + (n - 1) ** 2 * previous
            previous, current = current, numerator // (n * n)
        values.append(current if modulus is None else current % modulus)
    return SequenceTable("aperyB", 0, tuple(values), modulus)


def apery_B_direct(n: int) -> int:
    """B(n) straight from the binomial sum."""
    return sum(comb(n + k, k) * comb(n, k) ** 2 for k in range(n + 1))


def sigma3(k: int) -> int:
    if k < 1:
        raise BadParameter(f"sigma3 needs a positive argument, got {k}")
    return int(divisor_sigma(k, 3))


def sigma3_half(k: int) -> int:
    """sigma3(k/2), read as 0 for odd k."""
    return sigma3(k // 2) if k % 2 == 0 else 0


def picard_fuchs_residual(n: int) -> int:
    """(n+1)^2 a(n+1) - 4(2n+1)^2 a(n) for a(n) = C(2n, n)^2; zero for every n."""
    return (n + 1) ** 2 * central_binomial_sq(n + 1) - 4 * (
        2 * n + 1
    ) ** 2 * central_binomial_sq(n)
