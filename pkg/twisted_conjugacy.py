#!/usr/bin/env python3
"""
Twisted conjugacy experiments
Bounded searches for gamma x phi(gamma)^-1 = y in free groups, normal forms
in the mapping torus group, class-count growth over word-length balls, and
exact Reidemeister numbers for free-abelian endomorphisms.

Words are tuples of nonzero ints: +i is the i-th generator (a, b, c, ...),
-i its inverse.
"""

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from math import isqrt, prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from integer_matrix import IntMatrix, as_int_matrix, determinant, identity, smith_invariants, subtract
from zeta_errors import DescriptorError, DocumentError, ResourceGuardError, UnsupportedOperationError

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]

IDENTITY: Word = ()

NORM_LABEL = 'word-length norm'

DEFAULT_BALL_LIMIT = 1_000_000


# --- words ---------------------------------------------------------------

def reduce_word(letters: Sequence[int]) -> Word:
    reduced: List[int] = []
    for letter in letters:
        if reduced and reduced[-1] == -letter:
            reduced.pop()
        else:
            reduced.append(letter)
    return tuple(reduced)


def invert(word: Word) -> Word:
    return tuple(-letter for letter in reversed(word))


def multiply(*words: Word) -> Word:
    letters: List[int] = []
    for word in words:
        letters.extend(word)
    return reduce_word(letters)


def letter_name(generator: int) -> str:
    return chr(ord('a') + generator - 1)


def format_word(word: Word) -> str:
    """'a b^-1 c', or '1' for the identity"""
    if not word:
        return '1'
    return ' '.join(letter_name(l) if l > 0 else f"{letter_name(-l)}^-1" for l in word)


_TOKEN = re.compile(r'([a-zA-Z])(?:\^(-?\d+))?')


def parse_word(text: str, rank: Optional[int] = None) -> Word:
    """Parse 'a b^-1', 'aB', 'a^2 b' or '1'; capital letters are inverses"""
    letters: List[int] = []
    for token in text.replace('*', ' ').split():
        if token == '1':
            continue
        position = 0
        for match in _TOKEN.finditer(token):
            if match.start() != position:
                break
            char, power = match.group(1), int(match.group(2) or 1)
            generator = ord(char.lower()) - ord('a') + 1
            if char.isupper():
                power = -power
            letters.extend([generator if power > 0 else -generator] * abs(power))
            position = match.end()
        if position != len(token):
            raise DocumentError(f"cannot parse word token '{token}'")
    word = reduce_word(letters)
    if rank is not None and any(abs(l) > rank for l in word):
        raise DocumentError(f"word '{text}' uses generators beyond rank {rank}")
    return word


def word_ball(rank: int, length: int) -> Iterator[Word]:
    """Reduced words of length <= length in shortlex order (a, a^-1, b, b^-1, ...)"""
    alphabet = [s * g for g in range(1, rank + 1) for s in (1, -1)]
    frontier: List[Word] = [IDENTITY]
    yield IDENTITY
    for _ in range(length):
        grown: List[Word] = []
        for word in frontier:
            for letter in alphabet:
                if word and word[-1] == -letter:
                    continue
                grown.append(word + (letter,))
        for word in grown:
            yield word
        frontier = grown


def ball_size(rank: int, length: int) -> int:
    if rank == 0:
        return 1
    return 1 + sum(2 * rank * (2 * rank - 1) ** (l - 1) for l in range(1, length + 1))


def check_ball(rank: int, length: int, limit: int) -> int:
    size = ball_size(rank, length)
    if size > limit:
        raise ResourceGuardError(
            f"word ball of rank {rank} and radius {length} has {size} elements, limit is {limit}")
    return size


# --- endomorphisms -------------------------------------------------------

@dataclass(frozen=True)
class FreeEndomorphism:
    """Endomorphism of the free group of rank len(images), given on generators"""
    images: Tuple[Word, ...]
    inverse: Optional['FreeEndomorphism'] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'images', tuple(reduce_word(w) for w in self.images))

    @property
    def rank(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, rank: int) -> 'FreeEndomorphism':
        return cls(tuple((g,) for g in range(1, rank + 1)))

    def apply(self, word: Word) -> Word:
        letters: List[int] = []
        for letter in word:
            image = self.images[abs(letter) - 1]
            letters.extend(image if letter > 0 else invert(image))
        return reduce_word(letters)

    def apply_power(self, word: Word, k: int) -> Word:
        """phi^k(word); negative k needs the inverse"""
        step = self
        if k < 0:
            if self.inverse is None:
                raise UnsupportedOperationError(
                    "negative powers of the stable letter need an inverse endomorphism")
            step, k = self.inverse, -k
        for _ in range(k):
            word = step.apply(word)
        return word

    def with_inverse(self, inverse: 'FreeEndomorphism') -> 'FreeEndomorphism':
        """Attach a generator-image inverse after checking both compositions are the identity"""
        if inverse.rank != self.rank:
            raise DescriptorError("inverse has a different rank", rule='endomorphism.inverse')
        for g in range(1, self.rank + 1):
            if self.apply(inverse.apply((g,))) != (g,) or inverse.apply(self.apply((g,))) != (g,):
                raise DescriptorError(f"supplied inverse fails on generator {letter_name(g)}",
                                      rule='endomorphism.inverse')
        backward = FreeEndomorphism(inverse.images, inverse=FreeEndomorphism(self.images))
        return FreeEndomorphism(self.images, inverse=backward)

    def __str__(self) -> str:
        return ', '.join(f"{letter_name(g)} -> {format_word(w)}" for g, w in enumerate(self.images, 1))


def parse_endomorphism(text: str) -> FreeEndomorphism:
    """Parse 'a -> a b, b -> a'; every generator a, b, ... up to the rank must appear once"""
    images: Dict[int, Word] = {}
    entries = [e for e in text.split(',') if e.strip()]
    rank = len(entries)
    for entry in entries:
        if '->' not in entry:
            raise DocumentError(f"expected 'generator -> word', got '{entry.strip()}'")
        source, image = entry.split('->', 1)
        source = source.strip()
        if len(source) != 1 or not source.islower():
            raise DocumentError(f"generator must be a single lower-case letter, got '{source}'")
        generator = ord(source) - ord('a') + 1
        if generator in images:
            raise DocumentError(f"generator '{source}' given twice")
        images[generator] = parse_word(image, rank)
    if sorted(images) != list(range(1, rank + 1)):
        raise DocumentError(f"generators must be a, b, ... without gaps, got {sorted(images)}")
    return FreeEndomorphism(tuple(images[g] for g in range(1, rank + 1)))


def abelianization(phi: FreeEndomorphism) -> IntMatrix:
    """Integer matrix of phi on Z^k; column j holds the exponent sums of phi(a_j)"""
    k = phi.rank
    columns = [[sum(1 if l == i else -1 if l == -i else 0 for l in image) for i in range(1, k + 1)]
               for image in phi.images]
    return as_int_matrix([[columns[j][i] for j in range(k)] for i in range(k)])


# --- bounded twisted conjugacy -------------------------------------------

class Verdict(Enum):
    YES = 'yes'
    UNKNOWN = 'unknown'


@dataclass
class SearchResult:
    verdict: Verdict
    witness: Optional[Word] = None
    candidates_tried: int = 0

    @property
    def found(self) -> bool:
        return self.verdict is Verdict.YES


def twisted_conjugate_action(gamma: Word, x: Word, phi: FreeEndomorphism) -> Word:
    """gamma x phi(gamma)^-1, freely reduced"""
    return multiply(gamma, x, invert(phi.apply(gamma)))


def are_twisted_conjugate_bounded(x: Word, y: Word, phi: FreeEndomorphism, bound: int,
                                  limit: int = DEFAULT_BALL_LIMIT) -> SearchResult:
    """Search conjugators of length <= bound; never answers No"""
    if bound < 0:
        raise ValueError(f"bound must be nonnegative, got {bound}")
    check_ball(phi.rank, bound, limit)
    tried = 0
    for gamma in word_ball(phi.rank, bound):
        tried += 1
        if twisted_conjugate_action(gamma, x, phi) == y:
            return SearchResult(Verdict.YES, gamma, tried)
    return SearchResult(Verdict.UNKNOWN, None, tried)


def iterate_witness(x: Word, phi: FreeEndomorphism, k: int = 1) -> Word:
    """Witness taking x to phi^k(x), built from the step witness x^-1 for x ~ phi(x)"""
    if k < 0:
        u = phi.apply_power(x, k)
        return invert(iterate_witness(u, phi, -k))
    witness: Word = IDENTITY
    current = x
    for _ in range(k):
        witness = multiply(invert(current), witness)
        current = phi.apply(current)
    return witness


# --- mapping torus -------------------------------------------------------

@dataclass(frozen=True)
class MappingTorusElement:
    """w z^t in the mapping torus group, with z g = phi(g) z"""
    word: Word
    t: int = 0

    def __str__(self) -> str:
        if self.t == 0:
            return format_word(self.word)
        prefix = '' if not self.word else format_word(self.word) + ' '
        return f"{prefix}z^{self.t}" if self.t != 1 else f"{prefix}z"


def mapping_torus_mul(u: MappingTorusElement, v: MappingTorusElement,
                      phi: FreeEndomorphism) -> MappingTorusElement:
    """(w1 z^t1)(w2 z^t2) = w1 phi^t1(w2) z^(t1 + t2)"""
    return MappingTorusElement(multiply(u.word, phi.apply_power(v.word, u.t)), u.t + v.t)


def mapping_torus_inverse(u: MappingTorusElement, phi: FreeEndomorphism) -> MappingTorusElement:
    """(w z^t)^-1 = phi^-t(w^-1) z^-t"""
    return MappingTorusElement(phi.apply_power(invert(u.word), -u.t), -u.t)


def stable_powers(stable_range: int) -> List[int]:
    powers = [0]
    for k in range(1, stable_range + 1):
        powers.extend([k, -k])
    return powers


@dataclass
class CrosscheckReport:
    x: Word
    y: Word
    bound: int
    twisted: SearchResult
    twisted_witness_valid: Optional[bool]
    conjugate_verdict: Verdict
    conjugator: Optional[MappingTorusElement] = None
    converted_witness: Optional[Word] = None
    converted_witness_valid: Optional[bool] = None

    @property
    def consistent(self) -> bool:
        """Every Yes on one side has a validated Yes on the other"""
        if self.twisted.found and not (self.twisted_witness_valid and self.conjugate_verdict is Verdict.YES):
            return False
        if self.conjugate_verdict is Verdict.YES and not self.converted_witness_valid:
            return False
        return True


def mapping_torus_crosscheck(x: Word, y: Word, phi: FreeEndomorphism, bound: int,
                      stable_range: int = 1, limit: int = DEFAULT_BALL_LIMIT) -> CrosscheckReport:
    """Twisted search for x ~ y against ordinary conjugacy of xz and yz in the mapping torus"""
    if phi.inverse is None:
        raise UnsupportedOperationError("the mapping torus cross-check needs an automorphism with its inverse")
    xz = MappingTorusElement(x, 1)
    yz = MappingTorusElement(y, 1)

    twisted = are_twisted_conjugate_bounded(x, y, phi, bound, limit)
    twisted_valid = None
    if twisted.found:
        gamma = MappingTorusElement(twisted.witness, 0)
        twisted_valid = mapping_torus_mul(gamma, xz, phi) == mapping_torus_mul(yz, gamma, phi)

    report = CrosscheckReport(x, y, bound, twisted, twisted_valid, Verdict.UNKNOWN)
    for k in stable_powers(stable_range):
        for gamma in word_ball(phi.rank, bound):
            g = MappingTorusElement(gamma, k)
            if mapping_torus_mul(g, xz, phi) != mapping_torus_mul(yz, g, phi):
                continue
            # g (xz) g^-1 = yz with g = gamma z^k means gamma takes phi^k(x) to y
            witness = multiply(gamma, iterate_witness(x, phi, k))
            report.conjugate_verdict = Verdict.YES
            report.conjugator = g
            report.converted_witness = witness
            report.converted_witness_valid = twisted_conjugate_action(witness, x, phi) == y
            break
        if report.conjugate_verdict is Verdict.YES:
            break

    if not report.consistent:
        logger.warning(f"mapping torus cross-check inconsistent for x={format_word(x)}, y={format_word(y)}")
    return report


# --- class counts --------------------------------------------------------

class UnionFind:
    """Disjoint sets over 0..n-1; the smaller index becomes the root"""

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> bool:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return False
        if rj < ri:
            ri, rj = rj, ri
        self.parent[rj] = ri
        return True

    def roots(self) -> List[int]:
        return [self.find(i) for i in range(len(self.parent))]


@dataclass
class ClassCountReport:
    lengths: List[int]
    cells: List[int]
    bound: int
    words: int
    merges: int
    unknown_fraction: float
    norm: str = NORM_LABEL

    def rows(self) -> List[Dict[str, Union[int, str]]]:
        return [{'length': l, 'cells': c, 'bound': self.bound, 'norm': self.norm}
                for l, c in zip(self.lengths, self.cells)]


def class_count_lower_bound(phi: FreeEndomorphism, length: int, bound: int,
                            limit: int = DEFAULT_BALL_LIMIT) -> ClassCountReport:
    """Partition the words of length <= length by bounded twisted conjugacy

    cells[l] counts the cells of the full partition that contain a word of
    length <= l, so the sequence is nondecreasing in l. Cells only merge on a
    found witness: they refine the true classes restricted to the ball.
    """
    if length < 1:
        raise ValueError(f"length cutoff must be positive, got {length}")
    check_ball(phi.rank, length, limit)
    check_ball(phi.rank, bound, limit)
    words = list(word_ball(phi.rank, length))
    index = {w: i for i, w in enumerate(words)}
    conjugators = [(gamma, invert(phi.apply(gamma))) for gamma in word_ball(phi.rank, bound) if gamma]

    cells = UnionFind(len(words))
    merges = 0
    for i, x in enumerate(words):
        for gamma, tail in conjugators:
            j = index.get(multiply(gamma, x, tail))
            if j is not None and cells.union(i, j):
                merges += 1

    roots = cells.roots()
    counts: List[int] = []
    seen = set()
    position = 0
    for l in range(length + 1):
        while position < len(words) and len(words[position]) <= l:
            seen.add(roots[position])
            position += 1
        counts.append(len(seen))

    sizes: Dict[int, int] = {}
    for r in roots:
        sizes[r] = sizes.get(r, 0) + 1
    n = len(words)
    total_pairs = n * (n - 1) // 2
    joined = sum(s * (s - 1) // 2 for s in sizes.values())
    unknown = (total_pairs - joined) / total_pairs if total_pairs else 0.0
    logger.info(f"class cells for L={length}, bound={bound}: {counts[1:]} ({NORM_LABEL})")
    return ClassCountReport(list(range(1, length + 1)), counts[1:], bound, n, merges, unknown)


# --- free abelian groups -------------------------------------------------

class Infinity(Enum):
    INFINITE = 'infinite'

    def __str__(self) -> str:
        return 'infinite'


AbelianEndomorphism = IntMatrix


def reidemeister_number_abelian(matrix: AbelianEndomorphism) -> Union[int, Infinity]:
    """|det(I - M)|, or INFINITE when it vanishes"""
    matrix = as_int_matrix(matrix)
    value = abs(determinant(subtract(identity(len(matrix)), matrix)))
    return value if value else Infinity.INFINITE


def reidemeister_cokernel(matrix: AbelianEndomorphism) -> Tuple[int, ...]:
    """Invariant factors of Z^k / (I - M) Z^k; a zero factor means a free summand"""
    matrix = as_int_matrix(matrix)
    return smith_invariants(subtract(identity(len(matrix)), matrix))


def abelian_class_count(matrix: AbelianEndomorphism, modulus: int) -> int:
    """Union-find count of the classes x ~ x + (I - M) gamma on (Z/modulus)^k"""
    if modulus < 1:
        raise ValueError(f"modulus must be positive, got {modulus}")
    matrix = as_int_matrix(matrix)
    k = len(matrix)
    step = subtract(identity(k), matrix)
    columns = [tuple(step[i][j] % modulus for i in range(k)) for j in range(k)]
    points = list(product(range(modulus), repeat=k))
    index = {p: i for i, p in enumerate(points)}
    cells = UnionFind(len(points))
    for i, p in enumerate(points):
        for column in columns:
            cells.union(i, index[tuple((a + b) % modulus for a, b in zip(p, column))])
    return len(set(cells.roots()))


def hadamard_bound(matrix: IntMatrix) -> int:
    """Integer upper bound on |det| from the column norms"""
    k = len(matrix)
    return max(1, prod(isqrt(sum(matrix[i][j] ** 2 for i in range(k))) + 1 for j in range(k)))


def abelian_class_census(matrix: AbelianEndomorphism, max_modulus: Optional[int] = None) -> int:
    """Largest class count over the moduli 1..max_modulus

    With max_modulus at least |det(I - M)| this equals the Reidemeister
    number; the default is the Hadamard bound of I - M.
    """
    matrix = as_int_matrix(matrix)
    if max_modulus is None:
        max_modulus = hadamard_bound(subtract(identity(len(matrix)), matrix))
    return max(abelian_class_count(matrix, m) for m in range(1, max_modulus + 1))
