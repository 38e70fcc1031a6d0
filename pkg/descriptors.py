#!/usr/bin/env python3
"""
Map descriptors
Structured descriptions of homeomorphisms (periodic, torus-linear, Markov
subshift, Seifert-fibered, decomposition into pieces) and the Nielsen number
sequences N(f^n) they induce.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from math import gcd
from typing import Dict, List, Mapping, Tuple, Union

from sympy import divisors

from integer_matrix import (IntMatrix, as_int_matrix, det_power_minus_identity, determinant,
                            matrix_power, trace_of_power)
from zeta_errors import DegenerateIterateError, DescriptorError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Periodic:
    """A map of period m with Nielsen numbers N_d tabulated for each divisor d of m"""
    period: int
    nielsen_table: Tuple[Tuple[int, int], ...]

    @classmethod
    def from_table(cls, period: int, table: Mapping[int, int]) -> 'Periodic':
        if period < 1:
            raise DescriptorError(f"period must be positive, got {period}", rule='periodic.period')
        expected = set(divisors(period))
        if set(table) != expected:
            raise DescriptorError(
                f"table keys {sorted(table)} must be exactly the divisors {sorted(expected)} of {period}",
                rule='periodic.divisor-keys')
        negative = [d for d, v in table.items() if v < 0]
        if negative:
            raise DescriptorError(f"negative Nielsen numbers at divisors {sorted(negative)}",
                                  rule='periodic.nonnegative')
        return cls(period, tuple(sorted((int(d), int(v)) for d, v in table.items())))

    @property
    def table(self) -> Dict[int, int]:
        return dict(self.nielsen_table)

    def nielsen_number(self, n: int) -> int:
        return self.table[gcd(n, self.period)]

    def iterate(self, k: int) -> 'Periodic':
        m = self.period
        new_period = m // gcd(m, k)
        table = self.table
        return Periodic.from_table(new_period, {d: table[gcd(d * k, m)] for d in divisors(new_period)})


@dataclass(frozen=True)
class TorusLinear:
    """A linear torus map given by its integer matrix"""
    matrix: IntMatrix

    @classmethod
    def from_rows(cls, rows) -> 'TorusLinear':
        return cls(as_int_matrix(rows))

    def nielsen_number(self, n: int) -> int:
        value = det_power_minus_identity(self.matrix, n)
        if value == 0:
            raise DegenerateIterateError(f"det(A^{n} - I) = 0 for A = {self.matrix}",
                                         rule='torus.root-of-unity')
        return abs(value)

    def iterate(self, k: int) -> 'TorusLinear':
        return TorusLinear(matrix_power(self.matrix, k))


@dataclass(frozen=True)
class SubshiftMarkov:
    """Signed sum of transition matrices whose traces count periodic points"""
    terms: Tuple[Tuple[IntMatrix, int], ...]

    @classmethod
    def from_terms(cls, terms) -> 'SubshiftMarkov':
        normalized = []
        for matrix, sign in terms:
            matrix = as_int_matrix(matrix)
            if sign not in (1, -1):
                raise DescriptorError(f"term sign must be +1 or -1, got {sign}", rule='subshift.sign')
            if any(v < 0 for row in matrix for v in row):
                raise DescriptorError(f"transition matrix {matrix} has negative entries",
                                      rule='subshift.nonnegative-matrix')
            normalized.append((matrix, int(sign)))
        if not normalized:
            raise DescriptorError("a subshift needs at least one term", rule='subshift.nonempty')
        return cls(tuple(normalized))

    def nielsen_number(self, n: int) -> int:
        value = sum(sign * trace_of_power(matrix, n) for matrix, sign in self.terms)
        if value < 0:
            raise DescriptorError(f"signed trace sum at n={n} is {value}", rule='subshift.nonnegative-count')
        return value

    def iterate(self, k: int) -> 'SubshiftMarkov':
        return SubshiftMarkov(tuple((matrix_power(matrix, k), sign) for matrix, sign in self.terms))


class FiberAction(Enum):
    PRESERVING = 'preserving'
    REVERSING = 'reversing'


@dataclass(frozen=True)
class SeifertFibered:
    """Fiber-preserving homeomorphism of a special Seifert fibre space over its base map"""
    fiber_action: FiberAction
    base: 'MapDescriptor'

    def nielsen_number(self, n: int) -> int:
        if self.fiber_action is FiberAction.PRESERVING or n % 2 == 0:
            return 0
        return 2 * nielsen_number(self.base, n)

    def iterate(self, k: int) -> 'SeifertFibered':
        action = self.fiber_action
        if action is FiberAction.REVERSING and k % 2 == 0:
            action = FiberAction.PRESERVING
        return SeifertFibered(action, iterate(self.base, k))


PIECE_LABELS = ('component', 'band', 'tube')


@dataclass(frozen=True)
class Piece:
    """A piece mapped into itself by the return map phi^(return_time)"""
    return_time: int
    piece_map: 'MapDescriptor'
    label: str = 'component'

    def __post_init__(self):
        if self.return_time < 1:
            raise DescriptorError(f"return time must be positive, got {self.return_time}",
                                  rule='decomposition.return-time')
        if self.label not in PIECE_LABELS:
            raise DescriptorError(f"unknown piece label '{self.label}'", rule='decomposition.label')


@dataclass(frozen=True)
class Decomposition:
    pieces: Tuple[Piece, ...]

    def __post_init__(self):
        if not self.pieces:
            raise DescriptorError("a decomposition needs at least one piece", rule='decomposition.nonempty')

    def nielsen_number(self, n: int) -> int:
        return sum(nielsen_number(p.piece_map, n // p.return_time)
                   for p in self.pieces if n % p.return_time == 0)

    def iterate(self, k: int) -> 'Decomposition':
        pieces = []
        for p in self.pieces:
            g = gcd(p.return_time, k)
            pieces.append(Piece(p.return_time // g, iterate(p.piece_map, k // g), p.label))
        return Decomposition(tuple(pieces))


MapDescriptor = Union[Periodic, TorusLinear, SubshiftMarkov, SeifertFibered, Decomposition]

DESCRIPTOR_TYPES = (Periodic, TorusLinear, SubshiftMarkov, SeifertFibered, Decomposition)


def _check_descriptor(d) -> None:
    if not isinstance(d, DESCRIPTOR_TYPES):
        raise DescriptorError(f"not a map descriptor: {type(d).__name__}", rule='descriptor.type')


def nielsen_number(d: MapDescriptor, n: int) -> int:
    """N(f^n) for the map described by d"""
    _check_descriptor(d)
    if n < 1:
        raise DescriptorError(f"iterate index must be positive, got {n}", rule='descriptor.index')
    return d.nielsen_number(n)


def iterate(d: MapDescriptor, k: int) -> MapDescriptor:
    """Descriptor of f^k"""
    _check_descriptor(d)
    if k < 1:
        raise DescriptorError(f"iterate power must be positive, got {k}", rule='descriptor.index')
    if k == 1:
        return d
    return d.iterate(k)


def nielsen_sequence(d: MapDescriptor, n_max: int) -> List[int]:
    if n_max < 1:
        raise DescriptorError(f"n_max must be positive, got {n_max}", rule='descriptor.index')
    return [nielsen_number(d, n) for n in range(1, n_max + 1)]


class NielsenSequence:
    """Lazily evaluated N(f^n), cached per index"""

    def __init__(self, source: MapDescriptor):
        _check_descriptor(source)
        self.source = source
        self._values: Dict[int, int] = {}

    def __getitem__(self, n: int) -> int:
        if n not in self._values:
            self._values[n] = nielsen_number(self.source, n)
        return self._values[n]

    def take(self, n_max: int) -> List[int]:
        return [self[n] for n in range(1, n_max + 1)]


def fixed_point_counts(d: SubshiftMarkov, n_max: int) -> List[int]:
    """Artin-Mazur counts F(f^n) = sum sign tr(A^n); equal to N(f^n) for pseudo-Anosov maps"""
    if not isinstance(d, SubshiftMarkov):
        raise DescriptorError("fixed point counts are only defined for subshift descriptors",
                              rule='descriptor.type')
    return [sum(sign * trace_of_power(m, n) for m, sign in d.terms) for n in range(1, n_max + 1)]


def validate_descriptor(d: MapDescriptor, order: int) -> MapDescriptor:
    """Check the invariants that depend on the working truncation order

    Raises DescriptorError naming the violated rule. Returns d unchanged.
    """
    _check_descriptor(d)
    if isinstance(d, TorusLinear):
        det = determinant(d.matrix)
        if abs(det) != 1:
            raise DescriptorError(f"|det A| = {abs(det)}, expected 1", rule='torus.unimodular')
        for n in range(1, order + 1):
            d.nielsen_number(n)
    elif isinstance(d, SubshiftMarkov):
        for n in range(1, order + 1):
            d.nielsen_number(n)
    elif isinstance(d, SeifertFibered):
        validate_descriptor(d.base, order)
    elif isinstance(d, Decomposition):
        for piece in d.pieces:
            validate_descriptor(piece.piece_map, order // piece.return_time)
    logger.debug(f"validated {type(d).__name__} to order {order}")
    return d


def describe(d: MapDescriptor) -> str:
    """Short one-line summary for reports"""
    if isinstance(d, Periodic):
        return f"Periodic(m={d.period})"
    if isinstance(d, TorusLinear):
        return f"TorusLinear({len(d.matrix)}x{len(d.matrix)})"
    if isinstance(d, SubshiftMarkov):
        return f"SubshiftMarkov({len(d.terms)} terms)"
    if isinstance(d, SeifertFibered):
        return f"SeifertFibered({d.fiber_action.value}, {describe(d.base)})"
    return "Decomposition(" + ', '.join(
        f"{p.label} n={p.return_time}: {describe(p.piece_map)}" for p in d.pieces) + ")"
