#!/usr/bin/env python3
"""
Seeded random corpora for verification runs
Every generator draws from a random.Random seeded by the caller, so a
(kind, count, seed) triple always reproduces the same descriptors.
"""

import logging
import random
from typing import Callable, Dict, List

from sympy import divisors

from descriptors import (PIECE_LABELS, Decomposition, FiberAction, MapDescriptor, Periodic, Piece,
                         SeifertFibered, SubshiftMarkov, TorusLinear)
from integer_matrix import IntMatrix, determinant, identity, subtract
from twisted_conjugacy import Word, reduce_word

logger = logging.getLogger(__name__)

# Hyperbolic torus matrices with small closed forms
TORUS_MATRICES = (
    ((2, 1), (1, 1)),
    ((1, 1), (1, 0)),
    ((3, 2), (1, 1)),
    ((0, 1), (1, 3)),
)


def random_periodic(rng: random.Random, max_period: int = 12, max_value: int = 100) -> Periodic:
    period = rng.randint(1, max_period)
    return Periodic.from_table(period, {d: rng.randint(0, max_value) for d in divisors(period)})


def random_matrix(rng: random.Random, size: int, max_entry: int) -> IntMatrix:
    return tuple(tuple(rng.randint(0, max_entry) for _ in range(size)) for _ in range(size))


def random_subshift(rng: random.Random, max_size: int = 3, max_entry: int = 3) -> SubshiftMarkov:
    """A single positive term; its trace counts are automatically nonnegative"""
    size = rng.randint(1, max_size)
    return SubshiftMarkov.from_terms([(random_matrix(rng, size, max_entry), 1)])


def random_torus(rng: random.Random) -> TorusLinear:
    return TorusLinear(rng.choice(TORUS_MATRICES))


def random_seifert(rng: random.Random) -> SeifertFibered:
    action = FiberAction.REVERSING if rng.random() < 0.8 else FiberAction.PRESERVING
    if rng.random() < 0.6:
        base: MapDescriptor = random_periodic(rng)
    else:
        base = random_subshift(rng, max_size=2, max_entry=2)
    return SeifertFibered(action, base)


def random_piece_map(rng: random.Random) -> MapDescriptor:
    choice = rng.randrange(4)
    if choice == 0:
        return random_periodic(rng, max_period=6, max_value=20)
    if choice == 1:
        return random_subshift(rng, max_size=2, max_entry=2)
    if choice == 2:
        return random_torus(rng)
    return SeifertFibered(FiberAction.REVERSING, random_periodic(rng, max_period=4, max_value=10))


def random_decomposition(rng: random.Random, max_pieces: int = 3, max_return_time: int = 4) -> Decomposition:
    pieces = [Piece(rng.randint(1, max_return_time), random_piece_map(rng), rng.choice(PIECE_LABELS))
              for _ in range(rng.randint(1, max_pieces))]
    return Decomposition(tuple(pieces))


def random_word(rng: random.Random, rank: int, max_length: int) -> Word:
    """Freely reduced word of length at most max_length"""
    letters: List[int] = []
    target = rng.randint(0, max_length)
    while len(letters) < target:
        letter = rng.randint(1, rank) * rng.choice((1, -1))
        if letters and letters[-1] == -letter:
            continue
        letters.append(letter)
    return reduce_word(letters)


def random_abelian_matrix(rng: random.Random, size: int, max_abs: int = 3) -> IntMatrix:
    """Integer matrix with det(I - M) != 0"""
    while True:
        matrix = tuple(tuple(rng.randint(-max_abs, max_abs) for _ in range(size)) for _ in range(size))
        if determinant(subtract(identity(size), matrix)) != 0:
            return matrix


CORPUS_KINDS: Dict[str, Callable[[random.Random], MapDescriptor]] = {
    'periodic': random_periodic,
    'seifert': random_seifert,
    'decomposition': random_decomposition,
    'subshift': lambda rng: random_subshift(rng, max_size=4, max_entry=3),
    'torus': random_torus,
}


def generate_corpus(kind: str, count: int, seed: int) -> List[MapDescriptor]:
    if kind not in CORPUS_KINDS:
        raise ValueError(f"unknown corpus kind '{kind}', expected one of {', '.join(CORPUS_KINDS)}")
    rng = random.Random(f"{kind}:{seed}")
    corpus = [CORPUS_KINDS[kind](rng) for _ in range(count)]
    logger.debug(f"generated {count} {kind} descriptors with seed {seed}")
    return corpus
