#!/usr/bin/env python3
"""
Closed forms: rational functions and radicals of rational functions
A RadicalExpr is a finite product of integer polynomials (constant term 1)
raised to exact rational exponents. Closed forms are reconstructed from
truncated series by an exact Padé-style solve with full verification.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import Matrix, Rational as SympyRational

from series_core import PowerSeries, ps_add, ps_exp, ps_log, ps_pow
from zeta_errors import RadicalError

logger = logging.getLogger(__name__)

ExponentLike = Union[int, Fraction, str]


def _format_term(coefficient: int, degree: int) -> str:
    magnitude = abs(coefficient)
    if degree == 0:
        return str(magnitude)
    var = 'z' if degree == 1 else f"z^{degree}"
    return var if magnitude == 1 else f"{magnitude}{var}"


@dataclass(frozen=True)
class Polynomial:
    """Integer polynomial, coefficients lowest degree first, no trailing zeros"""
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, 'coeffs', coeffs)

    @classmethod
    def one(cls) -> 'Polynomial':
        return cls((1,))

    @classmethod
    def one_minus_z_power(cls, d: int) -> 'Polynomial':
        """The factor 1 - z^d"""
        return cls((1,) + (0,) * (d - 1) + (-1,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.degree, self.coeffs)

    def substitute_power(self, d: int) -> 'Polynomial':
        if d < 1:
            raise RadicalError(f"substitution power must be positive, got {d}")
        out = [0] * (self.degree * d + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * d] = c
        return Polynomial(tuple(out))

    def __mul__(self, other: 'Polynomial') -> 'Polynomial':
        if not self.coeffs or not other.coeffs:
            return Polynomial(())
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(tuple(out))

    def power(self, exponent: int) -> 'Polynomial':
        result = Polynomial.one()
        for _ in range(exponent):
            result = result * self
        return result

    def to_series(self, order: int) -> PowerSeries:
        return PowerSeries.from_coefficients(self.coeffs, order)

    def __str__(self) -> str:
        if not self.coeffs:
            return '0'
        parts: List[str] = []
        for degree, c in enumerate(self.coeffs):
            if c == 0:
                continue
            term = _format_term(c, degree)
            if not parts:
                parts.append(f"-{term}" if c < 0 else term)
            else:
                parts.append(f"- {term}" if c < 0 else f"+ {term}")
        return ' '.join(parts)


def _as_fraction(value: ExponentLike) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class RadicalExpr:
    """Product of P_i(z)^(e_i); factors kept sorted by (degree, coefficients)"""
    factors: Tuple[Tuple[Polynomial, Fraction], ...] = ()

    @classmethod
    def from_factors(cls, factors: Union[Mapping[Polynomial, ExponentLike],
                                         Iterable[Tuple[Polynomial, ExponentLike]]]) -> 'RadicalExpr':
        """Merge equal factors, drop zero exponents and the constant factor 1"""
        items = factors.items() if isinstance(factors, Mapping) else factors
        merged: Dict[Polynomial, Fraction] = {}
        for poly, exponent in items:
            if poly.constant_term != 1:
                raise RadicalError(f"factor {poly} must have constant term 1")
            if poly.is_one():
                continue
            merged[poly] = merged.get(poly, Fraction(0)) + _as_fraction(exponent)
        ordered = sorted(((p, e) for p, e in merged.items() if e != 0), key=lambda item: item[0].sort_key())
        return cls(tuple(ordered))

    @classmethod
    def one(cls) -> 'RadicalExpr':
        return cls(())

    def as_dict(self) -> Dict[Polynomial, Fraction]:
        return dict(self.factors)

    def is_one(self) -> bool:
        return not self.factors

    def __mul__(self, other: 'RadicalExpr') -> 'RadicalExpr':
        return rr_mul(self, other)

    def __str__(self) -> str:
        return format_radical(self)


def format_radical(e: RadicalExpr) -> str:
    """Canonical text form, e.g. '(1 - z)^(-1) · (1 - z^2)^(-1/2)'"""
    if e.is_one():
        return '1'
    parts = []
    for poly, exponent in e.factors:
        if exponent == 1:
            parts.append(f"({poly})")
        else:
            parts.append(f"({poly})^({exponent})")
    return ' · '.join(parts)


def rr_mul(a: RadicalExpr, b: RadicalExpr) -> RadicalExpr:
    return RadicalExpr.from_factors(list(a.factors) + list(b.factors))


def rr_pow(a: RadicalExpr, q: ExponentLike) -> RadicalExpr:
    q = _as_fraction(q)
    return RadicalExpr.from_factors([(p, e * q) for p, e in a.factors])


def rr_substitute_power(a: RadicalExpr, d: int) -> RadicalExpr:
    if d < 1:
        raise RadicalError(f"substitution power must be positive, got {d}")
    return RadicalExpr.from_factors([(p.substitute_power(d), e) for p, e in a.factors])


def rr_log_series(e: RadicalExpr, order: int) -> PowerSeries:
    """sum_i e_i log P_i(z), truncated at the given order"""
    total = PowerSeries.zero(order)
    for poly, exponent in e.factors:
        if poly.constant_term != 1:
            raise RadicalError(f"factor {poly} must have constant term 1")
        total = ps_add(total, ps_log(poly.to_series(order)).scale(exponent))
    return total


def rr_expand(e: RadicalExpr, order: int) -> PowerSeries:
    """Exact series of the product, computed as exp(sum e_i log P_i)"""
    return ps_exp(rr_log_series(e, order))


def radical_index(e: RadicalExpr) -> int:
    """Smallest b such that e^b has integer exponents"""
    return lcm(1, *(exponent.denominator for _, exponent in e.factors))


def is_rational(e: RadicalExpr) -> bool:
    return radical_index(e) == 1


def rr_to_rational(e: RadicalExpr) -> Tuple[Polynomial, Polynomial]:
    """Numerator and denominator polynomials of e raised to its radical index"""
    b = radical_index(e)
    numerator, denominator = Polynomial.one(), Polynomial.one()
    for poly, exponent in e.factors:
        k = int(exponent * b)
        if k > 0:
            numerator = numerator * poly.power(k)
        else:
            denominator = denominator * poly.power(-k)
    return numerator, denominator


def _solve_denominator(s: PowerSeries, p: int, q: int) -> Optional[List[Fraction]]:
    """Q = 1 + q_1 z + ... + q_q z^q with (Q s)_k = 0 for p < k <= T, or None"""
    if q == 0:
        return []
    c = s.coeffs
    rows = range(p + 1, s.order + 1)

    def system(ks):
        a = Matrix([[SympyRational(c[k - j].numerator, c[k - j].denominator) if k - j >= 0 else 0
                     for j in range(1, q + 1)] for k in ks])
        b = Matrix([-SympyRational(c[k].numerator, c[k].denominator) for k in ks])
        return a, b

    square_a, square_b = system(range(p + 1, p + q + 1))
    try:
        if square_a.det() == 0:
            raise ValueError("singular leading block")
        solution = square_a.LUsolve(square_b)
    except ValueError:
        full_a, full_b = system(rows)
        try:
            solution, params = full_a.gauss_jordan_solve(full_b)
        except ValueError:
            return None
        solution = solution.subs({t: 0 for t in params})
    return [Fraction(int(SympyRational(v).p), int(SympyRational(v).q)) for v in solution]


def reconstruct_rational(s: PowerSeries, max_den_degree: int,
                         max_num_degree: Optional[int] = None) -> Optional[Tuple[Polynomial, Polynomial]]:
    """Find P/Q, Q(0) = 1, deg Q minimal and <= max_den_degree, whose expansion equals s

    Every available coefficient is checked. Returns None when no denominator
    degree up to the bound works, or when the only fit has non-integer
    coefficients.
    """
    if max_den_degree < 1:
        raise RadicalError("max_den_degree must be positive")
    if s.order + 1 < 2 * max_den_degree + 2:
        raise RadicalError(
            f"need at least {2 * max_den_degree + 2} coefficients to reconstruct at degree "
            f"{max_den_degree}, series has {s.order + 1}")
    p = max_den_degree if max_num_degree is None else max_num_degree
    c = s.coeffs
    for q in range(max_den_degree + 1):
        if p + q >= s.order:
            break
        den = _solve_denominator(s, p, q)
        if den is None:
            logger.debug(f"reconstruct: no denominator of degree {q}")
            continue
        q_coeffs = [Fraction(1)] + den
        # full verification of (Q s)_k = 0 beyond the numerator degree
        ok = True
        for k in range(p + 1, s.order + 1):
            total = sum((q_coeffs[j] * c[k - j] for j in range(min(q, k) + 1)), Fraction(0))
            if total != 0:
                ok = False
                break
        if not ok:
            logger.debug(f"reconstruct: degree {q} candidate failed verification")
            continue
        num = [sum((q_coeffs[j] * c[k - j] for j in range(min(q, k) + 1)), Fraction(0))
               for k in range(p + 1)]
        if any(v.denominator != 1 for v in num + q_coeffs):
            logger.debug(f"reconstruct: degree {q} fit has non-integer coefficients")
            return None
        numerator = Polynomial(tuple(int(v) for v in num))
        denominator = Polynomial(tuple(int(v) for v in q_coeffs))
        logger.debug(f"reconstruct: found ({numerator}) / ({denominator})")
        return numerator, denominator
    return None


def detect_radical(s: PowerSeries, b_candidates: Sequence[int],
                   max_den_degree: int) -> Optional[RadicalExpr]:
    """First b whose power s^b is rational; returns (P/Q)^(1/b) or None"""
    if s.coeffs[0] != 1:
        raise RadicalError(f"radical detection needs constant term 1, got {s.coeffs[0]}")
    for b in b_candidates:
        found = reconstruct_rational(ps_pow(s, b), max_den_degree)
        if found is None:
            continue
        numerator, denominator = found
        if numerator.constant_term != 1:
            continue
        candidate = RadicalExpr.from_factors([(numerator, Fraction(1, b)), (denominator, Fraction(-1, b))])
        if rr_expand(candidate, s.order) != s:
            logger.debug(f"detect_radical: b={b} reconstruction failed re-expansion")
            continue
        logger.debug(f"detect_radical: radical of index {b}: {candidate}")
        return candidate
    return None
