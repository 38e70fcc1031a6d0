"""
Tests for descriptor documents, closed-form machine output and sample files
"""

import json
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from asymptotics import CountSample
from corpus import CORPUS_KINDS, generate_corpus
from descriptor_io import (dumps_document, dumps_samples, load_document, load_samples, loads_document,
                           parse_document, parse_sample_lines, radical_from_machine, radical_to_machine,
                           serialize_descriptor)
from descriptors import Decomposition, FiberAction, Periodic, SeifertFibered, SubshiftMarkov, TorusLinear
from rational_radical import Polynomial, RadicalExpr
from twisted_conjugacy import FreeEndomorphism
from zeta_errors import DescriptorError, DocumentError


@pytest.mark.parametrize('name, kind', [
    ('periodic_m2.json', Periodic),
    ('torus_cat.json', TorusLinear),
    ('golden_subshift.json', SubshiftMarkov),
    ('seifert_reversing.json', SeifertFibered),
    ('decomposition.json', Decomposition),
    ('fibonacci_automorphism.json', FreeEndomorphism),
])
def test_bundled_samples_load(samples_dir, name, kind):
    assert isinstance(load_document(samples_dir / name), kind)


def test_periodic_sample_contents(samples_dir):
    d = load_document(samples_dir / 'periodic_m2.json')
    assert d == Periodic.from_table(2, {1: 3, 2: 5})


def test_decomposition_sample_labels(samples_dir):
    d = load_document(samples_dir / 'decomposition.json')
    assert [p.label for p in d.pieces] == ['component', 'band']
    assert [p.return_time for p in d.pieces] == [1, 2]


def test_automorphism_sample_has_inverse(samples_dir):
    phi = load_document(samples_dir / 'fibonacci_automorphism.json')
    assert phi.inverse is not None
    assert phi.apply_power((1,), -1) == (2,)


def test_seifert_action_values(samples_dir):
    assert load_document(samples_dir / 'seifert_reversing.json').fiber_action is FiberAction.REVERSING


def test_plain_json_numbers_rejected():
    with pytest.raises(DocumentError) as excinfo:
        parse_document({'type': 'torus_linear', 'matrix': [['2', 1], ['1', '1']]})
    assert excinfo.value.path == 'matrix[0][1]'
    with pytest.raises(DocumentError):
        parse_document({'type': 'periodic', 'period': 1, 'nielsen': {'1': '1'}})
    with pytest.raises(DocumentError):
        radical_from_machine({'factors': [{'coeffs': ['1', '-1'], 'exponent': -1}]})


def test_unknown_field_rejected():
    with pytest.raises(DocumentError) as excinfo:
        parse_document({'type': 'torus_linear', 'matrix': [['1']], 'note': 'x'})
    assert 'note' in str(excinfo.value)


def test_missing_field_reports_path():
    with pytest.raises(DocumentError) as excinfo:
        parse_document({'type': 'seifert_fibered', 'fiber_action': 'reversing', 'base': {'type': 'periodic'}})
    assert excinfo.value.path == 'base'


def test_nested_integer_path():
    document = {'type': 'decomposition',
                'pieces': [{'return_time': 'two',
                            'piece_map': {'type': 'periodic', 'period': '1', 'nielsen': {'1': '1'}}}]}
    with pytest.raises(DocumentError) as excinfo:
        parse_document(document)
    assert excinfo.value.path == 'pieces[0].return_time'


def test_booleans_are_not_integers():
    with pytest.raises(DocumentError):
        parse_document({'type': 'periodic', 'period': True, 'nielsen': {'1': '1'}})


def test_ragged_matrix_rejected():
    with pytest.raises(DocumentError) as excinfo:
        parse_document({'type': 'torus_linear', 'matrix': [['1', '0'], ['0']]})
    assert excinfo.value.path == 'matrix[1]'


def test_unknown_type_and_action():
    with pytest.raises(DocumentError):
        parse_document({'type': 'hyperbolic'})
    with pytest.raises(DocumentError):
        parse_document({'type': 'seifert_fibered', 'fiber_action': 'twisted',
                        'base': {'type': 'periodic', 'period': '1', 'nielsen': {'1': '1'}}})


def test_endomorphism_not_allowed_as_piece():
    document = {'type': 'decomposition',
                'pieces': [{'return_time': '1',
                            'piece_map': {'type': 'free_endomorphism', 'images': 'a -> a'}}]}
    with pytest.raises(DocumentError):
        parse_document(document)


def test_invalid_json_reports_line():
    with pytest.raises(DocumentError) as excinfo:
        loads_document('{\n  "type": "periodic",\n  "period": \n}')
    assert excinfo.value.line == 4
    assert str(excinfo.value).startswith('line 4')


def test_invariants_surface_as_descriptor_errors():
    with pytest.raises(DescriptorError):
        loads_document('{"type": "periodic", "period": "6", "nielsen": {"1": "1", "2": "1"}}')


def test_serialize_round_trip_for_samples(samples_dir):
    for path in sorted(samples_dir.glob('*.json')):
        d = load_document(path)
        again = loads_document(dumps_document(d))
        assert again == d
        assert serialize_descriptor(again) == serialize_descriptor(d)


@given(st.sampled_from(sorted(CORPUS_KINDS)), st.integers(0, 10_000))
def test_serialize_round_trip_for_corpus(kind, seed):
    for d in generate_corpus(kind, 3, seed):
        assert parse_document(json.loads(json.dumps(serialize_descriptor(d)))) == d


def test_radical_machine_form():
    e = RadicalExpr.from_factors([(Polynomial((1, -1)), Fraction(-1, 2)), (Polynomial((1, 0, -1)), 3)])
    data = radical_to_machine(e)
    assert data['factors'][0] == {'coeffs': ['1', '-1'], 'exponent': '-1/2'}
    assert radical_from_machine(json.loads(json.dumps(data))) == e
    assert radical_to_machine(RadicalExpr.one()) == {'factors': []}


def test_radical_machine_form_errors():
    with pytest.raises(DocumentError):
        radical_from_machine({'factors': [{'coeffs': ['1', 'x'], 'exponent': '1'}]})
    with pytest.raises(DocumentError):
        radical_from_machine({'factors': [{'coeffs': ['1'], 'exponent': '1/0'}]})


def test_sample_lines():
    samples = parse_sample_lines(['# counts', '5 100', '6, 250  # trailing', '', '7\t600'])
    assert [s.x for s in samples] == [5, 6, 7]
    assert samples[1].count == 250


def test_sample_line_errors():
    with pytest.raises(DocumentError) as excinfo:
        parse_sample_lines(['5 100', '6 250 3'])
    assert excinfo.value.line == 2
    with pytest.raises(DocumentError) as excinfo:
        parse_sample_lines(['5 abc'])
    assert excinfo.value.line == 1
    with pytest.raises(DocumentError):
        parse_sample_lines(['# nothing here'])


def test_samples_file_round_trip(tmp_path):
    samples = [CountSample(5, '1234.5'), CountSample(6, '98765.25')]
    path = tmp_path / 'counts.txt'
    path.write_text(dumps_samples(samples, comment='synthetic'))
    assert path.read_text().startswith('# synthetic\n')
    loaded = load_samples(path)
    assert [s.x for s in loaded] == [5, 6]
    assert [s.count for s in loaded] == [mpmath.mpf('1234.5'), mpmath.mpf('98765.25')]


def test_load_samples_checks_order(samples_dir):
    with pytest.raises(DocumentError) as excinfo:
        load_samples(samples_dir / 'exit_codes' / 'unordered_counts.txt')
    assert 'strictly increasing' in str(excinfo.value)
    assert len(load_samples(samples_dir / 'synthetic_counts.txt')) == 16


def test_corpus_is_seeded():
    a = [serialize_descriptor(d) for d in generate_corpus('periodic', 5, 7)]
    b = [serialize_descriptor(d) for d in generate_corpus('periodic', 5, 7)]
    assert a == b
