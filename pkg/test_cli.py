"""
Command-line tests through click's CliRunner
"""

import csv
import json

import pytest
from click.testing import CliRunner

from cli import main
from conftest import SAMPLES_DIR

FIBONACCI = ['--phi', 'a -> a b, b -> a', '--inverse', 'a -> b, b -> b^-1 a']


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def invoke(runner):
    def run(*args):
        return runner.invoke(main, [str(a) for a in args])
    return run


def machine(result):
    assert result.exit_code == 0, result.output
    return json.loads(result.output)


def test_help_lists_commands(invoke):
    result = invoke('--help')
    assert result.exit_code == 0
    for command in ('zeta', 'verify', 'nielsen', 'twisted', 'asym'):
        assert command in result.output


def test_zeta_periodic_text(invoke, samples_dir):
    result = invoke('zeta', samples_dir / 'periodic_m2.json')
    assert result.exit_code == 0, result.output
    assert '(1 - z)^(-3) · (1 - z^2)^(-1)' in result.output
    assert 'Rational: yes' in result.output


def test_zeta_periodic_machine(invoke, samples_dir):
    payload = machine(invoke('zeta', samples_dir / 'periodic_m2.json', '--format', 'machine', '--series',
                             '--order', 4))
    assert payload['descriptor'] == 'Periodic(m=2)'
    assert payload['rational'] is True
    assert payload['radical_index'] == 1
    assert payload['closed_form']['factors'][0] == {'coeffs': ['1', '-1'], 'exponent': '-3'}
    assert payload['series'] == ['1', '3', '7', '13', '22']


def test_zeta_decomposition_is_radical(invoke, samples_dir):
    payload = machine(invoke('zeta', samples_dir / 'decomposition.json', '--format', 'machine'))
    assert payload['rational'] is False
    assert payload['radical_index'] == 2


def test_zeta_torus_from_reconstruction(invoke, samples_dir):
    payload = machine(invoke('zeta', samples_dir / 'torus_cat.json', '--format', 'machine'))
    assert payload['rational'] is True


def test_zeta_from_series_flag(invoke, samples_dir):
    payload = machine(invoke('zeta', samples_dir / 'seifert_reversing.json', '--from-series', '--format', 'machine'))
    assert payload['rational'] is True


def test_zeta_reconstruction_failure(invoke, samples_dir):
    torus = samples_dir / 'torus_cat.json'
    payload = machine(invoke('zeta', torus, '--from-series', '--max-den-degree', 1, '--order', 8,
                             '--format', 'machine'))
    assert 'closed_form' not in payload
    assert payload['reconstruction_failure']
    assert len(payload['series']) == 9
    result = invoke('zeta', torus, '--from-series', '--max-den-degree', 1, '--order', 8, '--require-closed-form')
    assert result.exit_code == 5


def test_zeta_rejects_endomorphism_documents(invoke, samples_dir):
    assert invoke('zeta', samples_dir / 'fibonacci_automorphism.json').exit_code == 2


def test_malformed_document_exit_code(invoke, tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"type": "periodic", "period": "2"')
    result = invoke('zeta', path)
    assert result.exit_code == 2


def test_invariant_violation_exit_code(invoke, tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text('{"type": "periodic", "period": "2", "nielsen": {"1": "1", "2": "-4"}}')
    assert invoke('zeta', path).exit_code == 3


@pytest.mark.parametrize('name', ['periodic_m2.json', 'seifert_reversing.json', 'decomposition.json',
                                  'golden_subshift.json', 'torus_cat.json'])
def test_verify_samples_agree(invoke, samples_dir, name):
    payload = machine(invoke('verify', samples_dir / name, '--format', 'machine'))
    assert payload['agree'] is True
    assert payload['first_mismatch'] is None


def test_verify_corrupted_form(invoke, samples_dir):
    result = invoke('verify', samples_dir / 'periodic_m2.json', '--corrupt', '--format', 'machine')
    assert result.exit_code == 1
    payload = json.loads(result.output)
    assert payload['agree'] is False
    assert payload['first_mismatch'] == 1


def test_verify_order_zero(invoke, samples_dir):
    payload = machine(invoke('verify', samples_dir / 'periodic_m2.json', '--order', 0, '--format', 'machine'))
    assert payload['agree'] is True
    assert payload['recovered_nielsen'] == []


def test_verify_text_output(invoke, samples_dir):
    result = invoke('verify', samples_dir / 'golden_subshift.json')
    assert result.exit_code == 0, result.output
    assert 'Recovered N(f^n): 1, 3, 4, 7, 11' in result.output


def test_verify_corpus(invoke):
    payload = machine(invoke('verify', '--corpus', 'periodic', '--count', 5, '--seed', 3, '--order', 24,
                             '--format', 'machine'))
    assert [row['status'] for row in payload['results']] == ['agree'] * 5


def test_verify_needs_one_source(invoke, samples_dir):
    assert invoke('verify').exit_code == 2
    assert invoke('verify', samples_dir / 'periodic_m2.json', '--corpus', 'periodic').exit_code == 2


def test_nielsen_seifert(invoke, samples_dir):
    payload = machine(invoke('nielsen', samples_dir / 'seifert_reversing.json', '--n-max', 6, '--format', 'machine'))
    assert payload['nielsen'] == [2, 0, 2, 0, 2, 0]


def test_nielsen_torus(invoke, samples_dir):
    payload = machine(invoke('nielsen', samples_dir / 'torus_cat.json', '--n-max', 3, '--format', 'machine'))
    assert payload['nielsen'] == [1, 5, 16]


def test_nielsen_fixed_points_and_csv(invoke, samples_dir, tmp_path):
    out = tmp_path / 'golden.csv'
    result = invoke('nielsen', samples_dir / 'golden_subshift.json', '--n-max', 4, '--fixed-points', '--out', out)
    assert result.exit_code == 0, result.output
    with open(out, newline='') as f:
        rows = list(csv.DictReader(f))
    assert [row['fixed_points'] for row in rows] == ['1', '3', '4', '7']
    assert invoke('nielsen', samples_dir / 'torus_cat.json', '--fixed-points').exit_code == 2


def test_twisted_check_yes(invoke):
    payload = machine(invoke('twisted', 'check', 'a', 'a b', *FIBONACCI, '--bound', 1, '--format', 'machine'))
    assert payload['verdict'] == 'yes'
    assert payload['witness'] == 'a^-1'
    assert payload['witness_valid'] is True


def test_twisted_check_unknown(invoke):
    payload = machine(invoke('twisted', 'check', 'a', 'b', '--phi', 'a -> a, b -> b', '--bound', 2,
                             '--format', 'machine'))
    assert payload['verdict'] == 'unknown'
    assert payload['witness'] is None


def test_twisted_check_from_document(invoke, samples_dir):
    result = invoke('twisted', 'check', 'a', 'a b', '--document', samples_dir / 'fibonacci_automorphism.json')
    assert result.exit_code == 0, result.output
    assert 'validated' in result.output


def test_twisted_check_needs_phi(invoke):
    assert invoke('twisted', 'check', 'a', 'b').exit_code == 2


def test_twisted_classes(invoke):
    payload = machine(invoke('twisted', 'classes', '--phi', 'a -> a', '--length', 3, '--bound', 2,
                             '--format', 'machine'))
    assert payload['cells'] == [3, 5, 7]
    assert payload['norm'] == 'word-length norm'
    assert payload['abelian_reidemeister'] == 'infinite'


def test_twisted_classes_resource_guard(invoke, tmp_path):
    config = tmp_path / 'small.json'
    config.write_text(json.dumps({'word_ball_limit': 10}))
    result = invoke('--config', config, 'twisted', 'classes', *FIBONACCI, '--length', 4)
    assert result.exit_code == 2


def test_twisted_crosscheck_pair(invoke):
    payload = machine(invoke('twisted', 'crosscheck', 'a b^-1', 'a b a^-1', *FIBONACCI, '--bound', 2,
                             '--format', 'machine'))
    assert payload['inconsistent'] == 0
    assert payload['results'][0]['twisted'] == 'yes'
    assert payload['results'][0]['mapping_torus'] == 'yes'


def test_twisted_crosscheck_random_pairs(invoke):
    payload = machine(invoke('twisted', 'crosscheck', *FIBONACCI, '--pairs', 6, '--bound', 2, '--seed', 11,
                             '--format', 'machine'))
    assert len(payload['results']) == 6
    assert payload['inconsistent'] == 0


def test_twisted_crosscheck_needs_inverse(invoke):
    assert invoke('twisted', 'crosscheck', 'a', 'a', '--phi', 'a -> a b, b -> a').exit_code == 1


def test_asym_eval(invoke):
    payload = machine(invoke('asym', 'eval', '--h', 2, '--coeffs', '1', '--x', 4, '--format', 'machine'))
    assert payload['rows'][0]['x'] == '4'
    assert payload['rows'][0]['value'].startswith('372.619')


def test_asym_eval_out_of_range(invoke):
    assert invoke('asym', 'eval', '--h', 2, '--coeffs', '1', '--x', 6000).exit_code == 1


def test_asym_synth_fit_ratio_round_trip(invoke, tmp_path):
    samples = tmp_path / 'counts.txt'
    result = invoke('asym', 'synth', '--h', 2, '--coeffs', '3.7,0,1.2', '--odd-zero', '--out', samples)
    assert result.exit_code == 0, result.output
    assert len(samples.read_text().splitlines()) == 17

    payload = machine(invoke('asym', 'fit', samples, '--h', 2, '--terms', 2, '--odd-zero', '--format', 'machine'))
    assert abs(float(payload['coeffs']['C0']) - 3.7) < 1e-6
    assert float(payload['coeffs']['C1']) == 0
    assert abs(float(payload['coeffs']['C2']) - 1.2) < 1e-6
    assert payload['samples'] == 16

    payload = machine(invoke('asym', 'ratio', samples, '--h', 2, '--coeffs', '3.7,0,1.2', '--format', 'machine'))
    assert payload['conforming'] is True
    assert all(abs(float(row['ratio']) - 1) <= float(row['bound']) * 1.001 for row in payload['rows'])


def test_asym_fit_sweep(invoke, tmp_path):
    samples = tmp_path / 'counts.txt'
    invoke('asym', 'synth', '--h', 2, '--coeffs', '3.7,0,1.2', '--odd-zero', '--out', samples)
    payload = machine(invoke('asym', 'fit', samples, '--sweep', '1.5,2', '--terms', 2, '--odd-zero',
                             '--format', 'machine'))
    assert payload['h'] == '2.0'
    assert '2.0' in payload['sweep']


def test_asym_fit_too_few_samples(invoke, tmp_path):
    samples = tmp_path / 'one.txt'
    samples.write_text('5 100\n')
    assert invoke('asym', 'fit', samples, '--terms', 2).exit_code == 4


def test_asym_synth_to_stdout(invoke):
    result = invoke('asym', 'synth', '--h', 2, '--coeffs', '1', '--start', 1, '--stop', 3)
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0].startswith('# x count')
    assert [line.split()[0] for line in lines[1:]] == ['1.0', '2.0', '3.0']


def test_twisted_lemma8_command(invoke):
    payload = machine(invoke('twisted', 'lemma8', 'a', 'a b', *FIBONACCI, '--bound', 1, '--format', 'machine'))
    assert payload['inconsistent'] == 0
    assert payload['results'][0]['twisted'] == 'yes'
    assert 'lemma8' in invoke('twisted', '--help').output


def test_asym_fit_bundled_samples(invoke, samples_dir):
    payload = machine(invoke('asym', 'fit', samples_dir / 'synthetic_counts.txt', '--h', 2, '--terms', 2,
                             '--odd-zero', '--format', 'machine'))
    assert payload['samples'] == 16
    assert abs(float(payload['coeffs']['C0']) - 3.7) / 3.7 < 1e-6
    assert abs(float(payload['coeffs']['C2']) - 1.2) / 1.2 < 1e-6


def test_asym_unordered_samples_rejected(invoke, samples_dir):
    result = invoke('asym', 'fit', samples_dir / 'exit_codes' / 'unordered_counts.txt', '--terms', 0)
    assert result.exit_code == 2


def exit_code_cases():
    with open(SAMPLES_DIR / 'exit_codes' / 'expected.json') as f:
        return [(case['args'], case['exit_code']) for case in json.load(f)]


@pytest.mark.parametrize('args, expected', exit_code_cases())
def test_exit_codes_match_golden_table(invoke, args, expected):
    result = invoke(*[arg.format(samples=SAMPLES_DIR) for arg in args])
    assert result.exit_code == expected, result.output


def test_verify_reports_missing_closed_form(invoke, samples_dir):
    result = invoke('verify', samples_dir / 'torus_cat.json', '--max-den-degree', 1, '--format', 'machine')
    assert result.exit_code == 5
    payload = json.loads(result.output)
    assert payload['agree'] is False
    assert payload['reconstruction_failure']
    assert 'closed_form' not in payload
