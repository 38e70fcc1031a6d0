#!/usr/bin/env python3
"""
Nielsen zeta functions in closed form
Builds the RadicalExpr of a map descriptor from the product formulas for
periodic maps, Seifert-fibered maps, Markov subshifts and decompositions,
and checks every closed form against the defining exponential sum
exp(sum N(f^n)/n z^n).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Sequence

from sympy import divisors, factorint

from descriptors import (Decomposition, FiberAction, MapDescriptor, Periodic, SeifertFibered,
                         SubshiftMarkov, TorusLinear, describe, iterate, nielsen_sequence,
                         validate_descriptor)
from integer_matrix import det_one_minus_z
from rational_radical import (Polynomial, RadicalExpr, detect_radical, rr_expand, rr_log_series,
                              rr_mul, rr_pow, rr_substitute_power)
from series_core import PowerSeries, exponential_sum, ps_exp
from zeta_config import ZetaSettings
from zeta_errors import DescriptorError, ReconstructionError

logger = logging.getLogger(__name__)


class MoebiusTable:
    """Memoized Moebius function"""

    def __init__(self):
        self.cache: Dict[int, int] = {1: 1}

    def __call__(self, d: int) -> int:
        if d < 1:
            raise ValueError(f"Moebius function is defined for positive integers, got {d}")
        if d not in self.cache:
            exponents = factorint(d)
            if any(e > 1 for e in exponents.values()):
                self.cache[d] = 0
            else:
                self.cache[d] = -1 if len(exponents) % 2 else 1
        return self.cache[d]


_moebius_table = MoebiusTable()


def moebius(d: int) -> int:
    return _moebius_table(d)


def periodic_p_values(d: Periodic) -> Dict[int, int]:
    """P(k) = sum over k1 | k of mu(k1) N_(k/k1), for every divisor k of the period"""
    table = d.table
    return {k: sum(moebius(k1) * table[k // k1] for k1 in divisors(k)) for k in divisors(d.period)}


def p_values_by_recursion(d: Periodic) -> Dict[int, int]:
    """P(k) = N_k - sum of P(k1) over proper divisors k1 of k"""
    table = d.table
    values: Dict[int, int] = {}
    for k in divisors(d.period):
        values[k] = table[k] - sum(values[k1] for k1 in divisors(k) if k1 != k)
    return values


def prime_power_p_values(d: Periodic) -> Dict[int, int]:
    """For m = p^l: P(1) = N_1 and P(p^k) = N_(p^k) - N_(p^(k-1))"""
    factors = factorint(d.period)
    if len(factors) > 1:
        raise DescriptorError(f"period {d.period} is not a prime power", rule='periodic.prime-power')
    table = d.table
    values = {1: table[1]}
    for p, l in factors.items():
        for k in range(1, l + 1):
            values[p ** k] = table[p ** k] - table[p ** (k - 1)]
    return values


def checked_p_values(d: Periodic) -> Dict[int, int]:
    by_moebius = periodic_p_values(d)
    by_recursion = p_values_by_recursion(d)
    if by_moebius != by_recursion:
        raise AssertionError(f"P(d) mismatch for {d}: moebius {by_moebius}, recursion {by_recursion}")
    return by_moebius


def periodic_zeta(d: Periodic) -> RadicalExpr:
    """Product over divisors k of m of (1 - z^k)^(-P(k)/k)"""
    p_values = checked_p_values(d)
    return RadicalExpr.from_factors(
        [(Polynomial.one_minus_z_power(k), Fraction(-p, k)) for k, p in p_values.items() if p != 0])


def subshift_zeta(d: SubshiftMarkov) -> RadicalExpr:
    """Product over terms of det(I - zA)^(-sign)"""
    return RadicalExpr.from_factors(
        [(Polynomial(det_one_minus_z(matrix)), -sign) for matrix, sign in d.terms])


def definition_series(d: MapDescriptor, order: int) -> PowerSeries:
    """exp(sum_{n<=T} N(f^n)/n z^n), the defining series"""
    if order == 0:
        return PowerSeries.one(0)
    return ps_exp(exponential_sum(nielsen_sequence(d, order), order))


def nielsen_from_zeta(e: RadicalExpr, n_max: int) -> List[Fraction]:
    """Read N(f^n) back from a closed form as n [z^n] log Z(z)"""
    log_series = rr_log_series(e, n_max)
    return [n * log_series[n] for n in range(1, n_max + 1)]


def structural_radical_index(d: MapDescriptor) -> int:
    """A multiple of the radical index implied by the descriptor's structure"""
    if isinstance(d, Periodic):
        return d.period
    if isinstance(d, TorusLinear):
        return 2
    if isinstance(d, SubshiftMarkov):
        return 1
    if isinstance(d, SeifertFibered):
        return structural_radical_index(d.base)
    return lcm(*(p.return_time * structural_radical_index(p.piece_map) for p in d.pieces))


def radical_candidates(d: MapDescriptor, fallback: Sequence[int]) -> List[int]:
    """Divisors of the structural index first, then the remaining fallback values"""
    structural = list(divisors(structural_radical_index(d)))
    return structural + [b for b in fallback if b not in structural]


@dataclass
class VerificationReport:
    descriptor: str
    order: int
    closed_form: Optional[RadicalExpr]
    agree: bool
    first_mismatch: Optional[int] = None
    expected: Optional[Fraction] = None
    actual: Optional[Fraction] = None
    failure: Optional[str] = None

    def summary(self) -> str:
        if self.failure:
            return f"no closed form to compare: {self.failure}"
        if self.agree:
            return f"agreement to order {self.order}"
        return (f"mismatch at index {self.first_mismatch}: closed form gives {self.actual}, "
                f"definition gives {self.expected}")


@dataclass
class ZetaAssembler:
    """Closed-form constructor bound to one set of truncation and search settings"""
    settings: ZetaSettings = field(default_factory=ZetaSettings)

    def torus_zeta(self, d: TorusLinear) -> RadicalExpr:
        """Expand the definition and detect a rational or square-root closed form"""
        max_den = self.settings.max_den_degree
        order = max(2 * max_den + 2, self.settings.torus_check_order)
        validate_descriptor(d, order)
        series = definition_series(d, order)
        found = detect_radical(series, [1, 2], max_den)
        if found is None:
            raise ReconstructionError(
                f"no closed form of denominator degree <= {max_den} for {describe(d)} "
                f"(checked to order {order})")
        logger.debug(f"torus closed form {found}")
        return found

    def seifert_zeta(self, d: SeifertFibered) -> RadicalExpr:
        """N_f(z) = N_g(z)^2 / N_(g^2)(z^2) for fibre reversing maps over base g, else 1"""
        if d.fiber_action is FiberAction.PRESERVING:
            return RadicalExpr.one()
        base = self.zeta(d.base)
        squared_base = rr_substitute_power(self.zeta(iterate(d.base, 2)), 2)
        return rr_mul(rr_pow(base, 2), rr_pow(squared_base, -1))

    def decomposition_zeta(self, d: Decomposition) -> RadicalExpr:
        result = RadicalExpr.one()
        for piece in d.pieces:
            n_j = piece.return_time
            contribution = rr_pow(rr_substitute_power(self.zeta(piece.piece_map), n_j), Fraction(1, n_j))
            result = rr_mul(result, contribution)
        return result

    def zeta(self, d: MapDescriptor) -> RadicalExpr:
        if isinstance(d, Periodic):
            return periodic_zeta(d)
        if isinstance(d, TorusLinear):
            return self.torus_zeta(d)
        if isinstance(d, SubshiftMarkov):
            validate_descriptor(d, self.settings.order)
            return subshift_zeta(d)
        if isinstance(d, SeifertFibered):
            return self.seifert_zeta(d)
        if isinstance(d, Decomposition):
            return self.decomposition_zeta(d)
        raise DescriptorError(f"not a map descriptor: {type(d).__name__}", rule='descriptor.type')

    def zeta_from_series(self, d: MapDescriptor) -> RadicalExpr:
        """Closed form found by reconstruction alone, candidates ordered by the descriptor's structure"""
        max_den = self.settings.max_den_degree
        order = max(2 * max_den + 2, self.settings.order)
        series = definition_series(d, order)
        candidates = radical_candidates(d, self.settings.radical_fallback_candidates)
        found = detect_radical(series, candidates, max_den)
        if found is None:
            raise ReconstructionError(
                f"no radical closed form with index in {candidates} and denominator degree <= {max_den}")
        return found

    def verify(self, d: MapDescriptor, order: int, closed_form: Optional[RadicalExpr] = None) -> VerificationReport:
        """Compare the closed form expansion with the definition, coefficient by coefficient

        A descriptor whose closed form cannot be reconstructed gets a failed
        report carrying the reason instead of an exception.
        """
        form = closed_form
        if form is None:
            try:
                form = self.zeta(d)
            except ReconstructionError as e:
                logger.warning(f"verification of {describe(d)}: {e}")
                return VerificationReport(describe(d), order, None, False, failure=str(e))
        actual = rr_expand(form, order)
        expected = definition_series(d, order)
        index = actual.first_difference(expected)
        report = VerificationReport(describe(d), order, form, index < 0)
        if index >= 0:
            report.first_mismatch = index
            report.expected = expected[index]
            report.actual = actual[index]
            logger.warning(f"verification of {report.descriptor}: {report.summary()}")
        else:
            logger.info(f"verification of {report.descriptor}: {report.summary()}")
        return report


_default_assembler = ZetaAssembler()


def seifert_zeta(d: SeifertFibered, settings: Optional[ZetaSettings] = None) -> RadicalExpr:
    return (ZetaAssembler(settings) if settings else _default_assembler).seifert_zeta(d)


def torus_zeta(d: TorusLinear, settings: Optional[ZetaSettings] = None) -> RadicalExpr:
    return (ZetaAssembler(settings) if settings else _default_assembler).torus_zeta(d)


def zeta(d: MapDescriptor, settings: Optional[ZetaSettings] = None) -> RadicalExpr:
    """Closed form of the Nielsen zeta function of d"""
    return (ZetaAssembler(settings) if settings else _default_assembler).zeta(d)


def verify_zeta(d: MapDescriptor, order: int, closed_form: Optional[RadicalExpr] = None,
                settings: Optional[ZetaSettings] = None) -> VerificationReport:
    return (ZetaAssembler(settings) if settings else _default_assembler).verify(d, order, closed_form)
