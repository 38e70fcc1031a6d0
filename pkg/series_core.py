#!/usr/bin/env python3
"""
Exact truncated formal power series over the rationals
Every closed form the calculator produces is checked by expanding it here
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

from zeta_errors import SeriesError

logger = logging.getLogger(__name__)

# Coefficients are fractions.Fraction: arbitrary precision, always in lowest
# terms with a positive denominator.
Rational = Fraction

DEFAULT_ORDER = 64

Number = Union[int, Fraction]


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients c_0..c_T of a series truncated after z^T"""
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise SeriesError("a power series needs at least the constant coefficient")

    @classmethod
    def from_coefficients(cls, values: Iterable[Number], order: int) -> 'PowerSeries':
        """Build a series of the given order, padding with zeros or truncating"""
        if order < 0:
            raise SeriesError(f"truncation order must be nonnegative, got {order}")
        coeffs = [Fraction(v) for v in list(values)[:order + 1]]
        coeffs.extend([Fraction(0)] * (order + 1 - len(coeffs)))
        return cls(tuple(coeffs))

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> 'PowerSeries':
        return cls.from_coefficients([], order)

    @classmethod
    def one(cls, order: int = DEFAULT_ORDER) -> 'PowerSeries':
        return cls.from_coefficients([1], order)

    @classmethod
    def monomial(cls, degree: int, order: int = DEFAULT_ORDER, coefficient: Number = 1) -> 'PowerSeries':
        values = [0] * degree + [coefficient]
        return cls.from_coefficients(values, order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, index: int) -> Fraction:
        return self.coeffs[index]

    def truncate(self, order: int) -> 'PowerSeries':
        if order > self.order:
            raise SeriesError(f"cannot raise truncation order from {self.order} to {order}")
        return PowerSeries(self.coeffs[:order + 1])

    def scale(self, factor: Number) -> 'PowerSeries':
        factor = Fraction(factor)
        return PowerSeries(tuple(c * factor for c in self.coeffs))

    def first_difference(self, other: 'PowerSeries') -> int:
        """Index of the first differing coefficient, or -1 when they agree"""
        for i, (a, b) in enumerate(zip(self.coeffs, other.coeffs)):
            if a != b:
                return i
        return -1

    def __add__(self, other: 'PowerSeries') -> 'PowerSeries':
        return ps_add(self, other)

    def __sub__(self, other: 'PowerSeries') -> 'PowerSeries':
        return ps_add(self, other.scale(-1))

    def __neg__(self) -> 'PowerSeries':
        return self.scale(-1)

    def __mul__(self, other: 'PowerSeries') -> 'PowerSeries':
        return ps_mul(self, other)

    def __str__(self) -> str:
        terms = [f"{c}*z^{i}" for i, c in enumerate(self.coeffs) if c != 0]
        return ' + '.join(terms) if terms else '0'


def _common_order(a: PowerSeries, b: PowerSeries) -> int:
    return min(a.order, b.order)


def ps_add(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Coefficient-wise sum, truncated to the smaller order"""
    order = _common_order(a, b)
    return PowerSeries(tuple(a.coeffs[i] + b.coeffs[i] for i in range(order + 1)))


def ps_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at the smaller order"""
    order = _common_order(a, b)
    a_terms = [(i, c) for i, c in enumerate(a.coeffs[:order + 1]) if c != 0]
    b_terms = [(j, c) for j, c in enumerate(b.coeffs[:order + 1]) if c != 0]
    out = [Fraction(0)] * (order + 1)
    for i, ca in a_terms:
        for j, cb in b_terms:
            if i + j > order:
                break
            out[i + j] += ca * cb
    return PowerSeries(tuple(out))


def ps_pow(a: PowerSeries, exponent: int) -> PowerSeries:
    """Nonnegative integer power by repeated multiplication"""
    if exponent < 0:
        raise SeriesError("ps_pow only takes nonnegative integer exponents")
    result = PowerSeries.one(a.order)
    for _ in range(exponent):
        result = ps_mul(result, a)
    return result


def ps_exp(a: PowerSeries) -> PowerSeries:
    """exp(a) for a(0) = 0, via G' = A' G: n g_n = sum_k k a_k g_{n-k}"""
    if a.coeffs[0] != 0:
        raise SeriesError(f"exp needs a zero constant term, got {a.coeffs[0]}")
    order = a.order
    weighted = [(k, k * c) for k, c in enumerate(a.coeffs) if k > 0 and c != 0]
    g: List[Fraction] = [Fraction(1)] + [Fraction(0)] * order
    for n in range(1, order + 1):
        total = Fraction(0)
        for k, kc in weighted:
            if k > n:
                break
            total += kc * g[n - k]
        g[n] = total / n
    return PowerSeries(tuple(g))


def ps_log(a: PowerSeries) -> PowerSeries:
    """log(a) for a(0) = 1, via A F' = A': n f_n = n a_n - sum_j (n-j) f_{n-j} a_j"""
    if a.coeffs[0] != 1:
        raise SeriesError(f"log needs constant term 1, got {a.coeffs[0]}")
    order = a.order
    tail = [(j, c) for j, c in enumerate(a.coeffs) if j > 0 and c != 0]
    f: List[Fraction] = [Fraction(0)] * (order + 1)
    for n in range(1, order + 1):
        total = n * a.coeffs[n]
        for j, c in tail:
            if j >= n:
                break
            total -= (n - j) * f[n - j] * c
        f[n] = total / n
    return PowerSeries(tuple(f))


def ps_substitute_power(a: PowerSeries, d: int) -> PowerSeries:
    """a(z^d), truncated at the order of a"""
    if d < 1:
        raise SeriesError(f"substitution power must be positive, got {d}")
    if d == 1:
        return a
    out = [Fraction(0)] * (a.order + 1)
    for k in range(a.order // d + 1):
        out[k * d] = a.coeffs[k]
    return PowerSeries(tuple(out))


def ps_root(a: PowerSeries, b: int) -> PowerSeries:
    """The b-th root exp(log(a)/b) for a(0) = 1"""
    if b < 1:
        raise SeriesError(f"root index must be positive, got {b}")
    if a.coeffs[0] != 1:
        raise SeriesError(f"root needs constant term 1, got {a.coeffs[0]}")
    if b == 1:
        return a
    return ps_exp(ps_log(a).scale(Fraction(1, b)))


def exponential_sum(values: Sequence[Number], order: int) -> PowerSeries:
    """The partial sum sum_{n=1}^{T} values[n-1]/n z^n (values indexed from n=1)"""
    coeffs = [Fraction(0)] + [Fraction(values[n - 1], n) for n in range(1, order + 1)]
    return PowerSeries(tuple(coeffs))
