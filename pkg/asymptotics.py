#!/usr/bin/env python3
"""
Asymptotic counting functions
Evaluates and fits expansions of the form

    count(x) ~ e^(hx) / x^(3/2) * sum_{n=0}^{N} C_n / x^(n/2)

in extended precision with mpmath. This is the only module that leaves exact
arithmetic: the C_n are analytic constants, not rationals.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath

from zeta_errors import ExpansionRangeError, FitError

logger = logging.getLogger(__name__)

DEFAULT_ENTROPY = 2
DEFAULT_DIGITS = 40
DEFAULT_OVERFLOW_LIMIT = 10000

RealLike = Union[int, float, str, mpmath.mpf]


@dataclass(frozen=True)
class AsymptoticExpansion:
    h: mpmath.mpf
    coeffs: Tuple[mpmath.mpf, ...]
    enforce_odd_zero: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'h', mpmath.mpf(self.h))
        object.__setattr__(self, 'coeffs', tuple(mpmath.mpf(c) for c in self.coeffs))
        if self.h <= 0:
            raise ExpansionRangeError(f"entropy h must be positive, got {self.h}")
        if not self.coeffs or self.coeffs[0] <= 0:
            raise ExpansionRangeError("leading coefficient C0 must be positive")
        if self.enforce_odd_zero and any(c != 0 for c in self.coeffs[1::2]):
            raise ExpansionRangeError("odd coefficients must vanish when the odd-zero constraint is on")

    @property
    def terms(self) -> int:
        """N, the index of the last coefficient"""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> mpmath.mpf:
        return self.coeffs[0]

    def describe(self) -> str:
        parts = [f"h={mpmath.nstr(self.h, 12)}"]
        parts.extend(f"C{n}={mpmath.nstr(c, 12)}" for n, c in enumerate(self.coeffs) if c != 0)
        return ' '.join(parts)


@dataclass(frozen=True)
class CountSample:
    """Number of classes of norm below x; real-valued for synthetic data"""
    x: mpmath.mpf
    count: mpmath.mpf

    def __post_init__(self):
        object.__setattr__(self, 'x', mpmath.mpf(self.x))
        object.__setattr__(self, 'count', mpmath.mpf(self.count))
        if self.x <= 0:
            raise ExpansionRangeError(f"sample cutoff must be positive, got {self.x}")
        if self.count < 0:
            raise ExpansionRangeError(f"sample count must be nonnegative, got {self.count}")


def check_samples(samples: Sequence[CountSample]) -> None:
    """Cutoffs strictly increasing and counts nondecreasing"""
    for previous, current in zip(samples, samples[1:]):
        if current.x <= previous.x:
            raise FitError(f"sample cutoffs must be strictly increasing ({previous.x} then {current.x})")
        if current.count < previous.count:
            raise FitError(f"sample counts must be nondecreasing (at x={current.x})")


def _leading_term(h: mpmath.mpf, x: mpmath.mpf, overflow_limit: RealLike) -> mpmath.mpf:
    if x <= 0:
        raise ExpansionRangeError(f"x must be positive, got {x}")
    if h * x > overflow_limit:
        raise ExpansionRangeError(f"h*x = {mpmath.nstr(h * x, 8)} exceeds the overflow limit {overflow_limit}")
    return mpmath.exp(h * x) / x ** mpmath.mpf(1.5)


def eval_expansion(e: AsymptoticExpansion, x: RealLike,
                   overflow_limit: RealLike = DEFAULT_OVERFLOW_LIMIT,
                   digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    """e^(hx) x^(-3/2) sum_n C_n x^(-n/2), without the error term"""
    with mpmath.workdps(digits):
        x = mpmath.mpf(x)
        lead = _leading_term(e.h, x, overflow_limit)
        return lead * mpmath.fsum(c / x ** (mpmath.mpf(n) / 2) for n, c in enumerate(e.coeffs))


@dataclass
class RatioReport:
    xs: List[mpmath.mpf]
    ratios: List[mpmath.mpf]
    conforming: bool


def leading_ratio(e: AsymptoticExpansion, samples: Sequence[CountSample],
                  overflow_limit: RealLike = DEFAULT_OVERFLOW_LIMIT,
                  digits: int = DEFAULT_DIGITS) -> RatioReport:
    """count / (C0 e^(hx) x^(-3/2)) per sample; should tend to 1"""
    if not samples:
        raise ValueError("leading_ratio needs at least one sample")
    check_samples(samples)
    with mpmath.workdps(digits):
        ratios = [s.count / (e.leading * _leading_term(e.h, s.x, overflow_limit)) for s in samples]
    conforming = all(r > 0 for r in ratios)
    if not conforming:
        logger.warning("leading ratio: zero counts in samples, data does not follow the expansion")
    return RatioReport([s.x for s in samples], ratios, conforming)


def ratio_error_bound(e: AsymptoticExpansion, x: RealLike) -> mpmath.mpf:
    """(sum_{n>=2} |C_n| / C0) / x; bounds |ratio - 1| for x >= 1 when C1 = 0"""
    tail = mpmath.fsum(abs(c) for c in e.coeffs[2:])
    return tail / e.leading / mpmath.mpf(x)


@dataclass
class FitResult:
    expansion: AsymptoticExpansion
    max_relative_residual: mpmath.mpf
    samples: int
    free_indices: List[int] = field(default_factory=list)


def fit_expansion(samples: Sequence[CountSample], h: RealLike, terms: int,
                  enforce_odd_zero: bool = False, digits: int = DEFAULT_DIGITS,
                  overflow_limit: RealLike = DEFAULT_OVERFLOW_LIMIT) -> FitResult:
    """Least squares for C_0..C_N in count x^(3/2) e^(-hx) = sum C_n x^(-n/2)

    Odd coefficients are pinned to zero when enforce_odd_zero is set.
    """
    if terms < 0:
        raise FitError(f"number of terms must be nonnegative, got {terms}")
    check_samples(samples)
    free = [n for n in range(terms + 1) if not (enforce_odd_zero and n % 2)]
    if len(samples) < len(free):
        raise FitError(f"{len(samples)} samples cannot determine {len(free)} coefficients")

    with mpmath.workdps(digits):
        h = mpmath.mpf(h)
        design = mpmath.matrix(len(samples), len(free))
        target = mpmath.matrix(len(samples), 1)
        for i, s in enumerate(samples):
            target[i] = s.count / _leading_term(h, s.x, overflow_limit)
            for j, n in enumerate(free):
                design[i, j] = s.x ** (-mpmath.mpf(n) / 2)

        values = mpmath.svd_r(design, compute_uv=False)
        singular = [abs(values[i]) for i in range(values.rows)]
        largest = max(singular)
        smallest = min(singular)
        if largest == 0 or smallest / largest < mpmath.mpf(10) ** (-(digits // 2)):
            raise FitError("design matrix is numerically rank-deficient (sample range too narrow?)")
        solution, _ = mpmath.qr_solve(design, target)

        coeffs = [mpmath.mpf(0)] * (terms + 1)
        for j, n in enumerate(free):
            coeffs[n] = solution[j]
        if coeffs[0] <= 0:
            raise FitError(f"fitted C0 = {mpmath.nstr(coeffs[0], 8)} is not positive")
        expansion = AsymptoticExpansion(h, tuple(coeffs), enforce_odd_zero)

        residual = mpmath.mpf(0)
        for s in samples:
            if s.count > 0:
                predicted = eval_expansion(expansion, s.x, overflow_limit, digits)
                residual = max(residual, abs(predicted - s.count) / s.count)
    logger.debug(f"fit h={h} N={terms}: {expansion.describe()}, residual {mpmath.nstr(residual, 6)}")
    return FitResult(expansion, residual, len(samples), free)


@dataclass
class SweepResult:
    best: FitResult
    residuals: Dict[str, mpmath.mpf]


def sweep_entropy(samples: Sequence[CountSample], h_grid: Sequence[RealLike], terms: int,
                  enforce_odd_zero: bool = False, digits: int = DEFAULT_DIGITS,
                  overflow_limit: RealLike = DEFAULT_OVERFLOW_LIMIT) -> SweepResult:
    """Fit at each h on the grid and keep the smallest residual"""
    check_samples(samples)
    best: Optional[FitResult] = None
    residuals: Dict[str, mpmath.mpf] = {}
    for h in h_grid:
        try:
            result = fit_expansion(samples, h, terms, enforce_odd_zero, digits, overflow_limit)
        except (FitError, ExpansionRangeError) as e:
            logger.debug(f"sweep: h={h} skipped ({e})")
            continue
        residuals[mpmath.nstr(mpmath.mpf(h), 12)] = result.max_relative_residual
        if best is None or result.max_relative_residual < best.max_relative_residual:
            best = result
    if best is None:
        raise FitError("no entropy value on the grid produced a fit")
    return SweepResult(best, residuals)


def synthesize_samples(e: AsymptoticExpansion, xs: Sequence[RealLike], rounded: bool = False,
                       digits: int = DEFAULT_DIGITS,
                       overflow_limit: RealLike = DEFAULT_OVERFLOW_LIMIT) -> List[CountSample]:
    """Counts produced by the expansion itself, optionally rounded to integers"""
    samples = []
    for x in xs:
        value = eval_expansion(e, x, overflow_limit, digits)
        samples.append(CountSample(x, mpmath.nint(value) if rounded else value))
    return samples


def expansion_table(e: AsymptoticExpansion, samples: Sequence[CountSample],
                    overflow_limit: RealLike = DEFAULT_OVERFLOW_LIMIT,
                    digits: int = DEFAULT_DIGITS) -> List[Dict[str, str]]:
    """Plot-ready rows: x, observed, predicted, ratio"""
    ratios = leading_ratio(e, samples, overflow_limit, digits).ratios
    rows = []
    for s, ratio in zip(samples, ratios):
        predicted = eval_expansion(e, s.x, overflow_limit, digits)
        rows.append({
            'x': mpmath.nstr(s.x, 15),
            'observed': mpmath.nstr(s.count, 15),
            'predicted': mpmath.nstr(predicted, 15),
            'ratio': mpmath.nstr(ratio, 15),
        })
    return rows
