"""
Seeded acceptance runs: exact identities checked over random corpora
Run alone with: pytest test_acceptance.py
"""

import random
from fractions import Fraction

import mpmath
import pytest

from asymptotics import AsymptoticExpansion, fit_expansion, leading_ratio, ratio_error_bound, synthesize_samples
from corpus import random_abelian_matrix, random_decomposition, random_periodic, random_seifert, random_subshift, random_word
from descriptors import FiberAction, SubshiftMarkov, nielsen_sequence
from rational_radical import Polynomial, RadicalExpr, detect_radical, is_rational, radical_index, rr_expand, rr_pow
from twisted_conjugacy import (Infinity, abelian_class_census, are_twisted_conjugate_bounded,
                               class_count_lower_bound, mapping_torus_crosscheck, parse_endomorphism,
                               reidemeister_number_abelian, twisted_conjugate_action)
from zeta_assembly import definition_series, periodic_zeta, verify_zeta, zeta

SEED = 20240501


@pytest.fixture
def rng() -> random.Random:
    return random.Random(SEED)


@pytest.fixture
def fibonacci():
    return parse_endomorphism('a -> a b, b -> a').with_inverse(parse_endomorphism('a -> b, b -> b^-1 a'))


def test_periodic_product_formula(rng):
    for _ in range(200):
        d = random_periodic(rng)
        assert rr_expand(periodic_zeta(d), 64) == definition_series(d, 64)


def test_seifert_square_ratio(rng):
    checked = 0
    while checked < 50:
        d = random_seifert(rng)
        if d.fiber_action is FiberAction.PRESERVING:
            assert zeta(d).is_one()
            continue
        report = verify_zeta(d, 64)
        assert report.agree, report.summary()
        checked += 1


def test_decomposition_products(rng):
    for _ in range(50):
        d = random_decomposition(rng)
        assert verify_zeta(d, 64).agree
        piece_sequences = [(p.return_time, nielsen_sequence(p.piece_map, 64 // p.return_time)) for p in d.pieces]
        expected = [sum(values[n // r - 1] for r, values in piece_sequences if n % r == 0) for n in range(1, 65)]
        assert nielsen_sequence(d, 64) == expected


def test_golden_subshift_is_rational():
    golden = SubshiftMarkov.from_terms([([[1, 1], [1, 0]], 1)])
    form = zeta(golden)
    assert form == RadicalExpr.from_factors([(Polynomial((1, -1, -1)), -1)])
    assert rr_expand(form, 32) == definition_series(golden, 32)


def test_random_subshifts(rng):
    for _ in range(50):
        d = random_subshift(rng, max_size=4, max_entry=3)
        assert is_rational(zeta(d))
        assert verify_zeta(d, 32).agree


def test_periodic_radical_index_divides_period(rng):
    for _ in range(200):
        d = random_periodic(rng)
        form = zeta(d)
        assert d.period % radical_index(form) == 0
        assert is_rational(rr_pow(form, d.period))


def random_unit_polynomial(rng: random.Random, degree: int) -> Polynomial:
    return Polynomial((1,) + tuple(rng.randint(-2, 2) for _ in range(degree)))


def test_radical_detection_round_trip(rng):
    for _ in range(100):
        b = rng.randint(1, 4)
        p = random_unit_polynomial(rng, rng.randint(0, 6))
        q = random_unit_polynomial(rng, rng.randint(1, 6))
        original = RadicalExpr.from_factors([(p, Fraction(1, b)), (q, Fraction(-1, b))])
        s = rr_expand(original, 64)
        found = detect_radical(s, [1, 2, 3, 4], 6)
        assert found is not None
        assert rr_expand(found, 64) == s
        assert b % radical_index(found) == 0


def test_words_meet_their_images(rng, fibonacci):
    for _ in range(100):
        x = random_word(rng, 2, 5)
        y = fibonacci.apply(x)
        result = are_twisted_conjugate_bounded(x, y, fibonacci, len(x))
        assert result.found and len(result.witness) <= len(x)
        assert twisted_conjugate_action(result.witness, x, fibonacci) == y


def test_yes_answers_cross_validate(rng, fibonacci):
    for i in range(100):
        x = random_word(rng, 2, 5)
        if i % 2:
            y = twisted_conjugate_action(random_word(rng, 2, 2), x, fibonacci)
        else:
            y = fibonacci.apply(x)
        report = mapping_torus_crosscheck(x, y, fibonacci, 2)
        assert report.consistent
        if report.twisted.found:
            assert report.twisted_witness_valid
        if report.converted_witness is not None:
            assert report.converted_witness_valid


def test_abelian_enumeration_matches_determinant(rng):
    for i in range(30):
        matrix = random_abelian_matrix(rng, 1 + i % 2)
        number = reidemeister_number_abelian(matrix)
        assert number is not Infinity.INFINITE
        assert abelian_class_census(matrix) == number


def test_class_cells_grow(fibonacci):
    report = class_count_lower_bound(fibonacci, 6, 4)
    growth = report.cells[1:]
    assert all(b > a for a, b in zip(growth, growth[1:])), report.cells
    assert report.norm == 'word-length norm'


def test_asymptotic_round_trip():
    truth = AsymptoticExpansion(2, ('3.7', 0, '1.2'), enforce_odd_zero=True)
    samples = synthesize_samples(truth, range(5, 21))
    result = fit_expansion(samples, 2, 2, enforce_odd_zero=True)
    for fitted, expected in zip(result.expansion.coeffs, truth.coeffs):
        if expected:
            assert abs(fitted - expected) / expected < 1e-6
        else:
            assert fitted == 0

    report = leading_ratio(truth, samples)
    for x, ratio in zip(report.xs, report.ratios):
        assert abs(ratio - 1) <= ratio_error_bound(truth, x) * (1 + mpmath.mpf('1e-10'))
