#!/usr/bin/env python3
"""
Exact integer matrix helpers
Powers, traces, fraction-free determinants, det(I - zA) and Smith invariants,
all delegated to sympy over the integers
"""

import logging
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import sympy
from sympy import ImmutableMatrix, Poly, ZZ, eye, symbols
from sympy.matrices.normalforms import smith_normal_form

logger = logging.getLogger(__name__)

IntMatrix = Tuple[Tuple[int, ...], ...]

_z = symbols('z')


def as_int_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    """Normalize nested sequences to a square tuple-of-tuples integer matrix"""
    matrix = tuple(tuple(int(v) for v in row) for row in rows)
    size = len(matrix)
    if size == 0 or any(len(row) != size for row in matrix):
        raise ValueError(f"expected a nonempty square matrix, got shape {[len(r) for r in matrix]}")
    return matrix


def _to_sympy(matrix: IntMatrix) -> ImmutableMatrix:
    return ImmutableMatrix(matrix)


def _from_sympy(matrix) -> IntMatrix:
    return tuple(tuple(int(matrix[i, j]) for j in range(matrix.cols)) for i in range(matrix.rows))


def identity(size: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(size)) for i in range(size))


def subtract(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


class PowerCache:
    """Successive powers A^1, A^2, ... of one matrix, built incrementally"""

    def __init__(self, matrix: IntMatrix):
        self.matrix = matrix
        self._base = _to_sympy(matrix)
        self._powers: Dict[int, ImmutableMatrix] = {0: ImmutableMatrix(eye(len(matrix))), 1: self._base}

    def get(self, n: int) -> ImmutableMatrix:
        if n < 0:
            raise ValueError(f"negative matrix powers are not supported, got {n}")
        top = max(self._powers)
        while top < n:
            self._powers[top + 1] = self._powers[top] * self._base
            top += 1
        return self._powers[n]


@lru_cache(maxsize=256)
def _power_cache(matrix: IntMatrix) -> PowerCache:
    return PowerCache(matrix)


def matrix_power(matrix: IntMatrix, n: int) -> IntMatrix:
    return _from_sympy(_power_cache(matrix).get(n))


def trace_of_power(matrix: IntMatrix, n: int) -> int:
    return int(_power_cache(matrix).get(n).trace())


def determinant(matrix: IntMatrix) -> int:
    """Fraction-free (Bareiss) determinant"""
    return int(_to_sympy(matrix).det(method='bareiss'))


def det_power_minus_identity(matrix: IntMatrix, n: int) -> int:
    """det(A^n - I) without materializing the difference as a Python tuple"""
    power = _power_cache(matrix).get(n)
    return int((power - eye(len(matrix))).det(method='bareiss'))


@lru_cache(maxsize=256)
def det_one_minus_z(matrix: IntMatrix) -> Tuple[int, ...]:
    """Coefficients of det(I - zA) in Z[z], lowest degree first"""
    size = len(matrix)
    expr = (eye(size) - _z * _to_sympy(matrix)).det(method='bareiss')
    coeffs: List[int] = [int(c) for c in reversed(Poly(sympy.expand(expr), _z).all_coeffs())]
    logger.debug(f"det(I - zA) for {matrix}: {coeffs}")
    return tuple(coeffs)


def smith_invariants(matrix: IntMatrix) -> Tuple[int, ...]:
    """Diagonal of the Smith normal form over Z, nonnegative, zeros kept"""
    form = smith_normal_form(_to_sympy(matrix).as_mutable(), domain=ZZ)
    return tuple(abs(int(form[i, i])) for i in range(min(form.rows, form.cols)))
