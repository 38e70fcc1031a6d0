#!/usr/bin/env python3
"""
Descriptor documents and sample files
Strict JSON schema for map descriptors and free-group endomorphisms, the
machine-readable form of closed forms, and two-column count sample files.
Integers and rationals are written as decimal strings.
"""

import json
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import mpmath

from asymptotics import CountSample, check_samples
from descriptors import (Decomposition, FiberAction, MapDescriptor, Periodic, Piece, SeifertFibered,
                         SubshiftMarkov, TorusLinear)
from rational_radical import Polynomial, RadicalExpr
from twisted_conjugacy import FreeEndomorphism, parse_endomorphism
from zeta_errors import DocumentError, ExpansionRangeError, FitError

logger = logging.getLogger(__name__)

Document = Union[MapDescriptor, FreeEndomorphism]

_FIELDS = {
    'periodic': ({'type', 'period', 'nielsen'}, set()),
    'torus_linear': ({'type', 'matrix'}, set()),
    'subshift_markov': ({'type', 'terms'}, set()),
    'seifert_fibered': ({'type', 'fiber_action', 'base'}, set()),
    'decomposition': ({'type', 'pieces'}, set()),
    'free_endomorphism': ({'type', 'images'}, {'inverse'}),
}

_INTEGER = re.compile(r'[+-]?\d+')


def _join(path: str, key: Union[str, int]) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def _check_fields(data: Any, required: set, optional: set, path: str) -> None:
    if not isinstance(data, dict):
        raise DocumentError("expected an object", path=path or None)
    missing = sorted(required - set(data))
    if missing:
        raise DocumentError(f"missing field(s): {', '.join(missing)}", path=path or None)
    unknown = sorted(set(data) - required - optional)
    if unknown:
        raise DocumentError(f"unknown field(s): {', '.join(unknown)}", path=path or None)


def _integer(value: Any, path: str) -> int:
    if isinstance(value, str) and _INTEGER.fullmatch(value.strip()):
        return int(value)
    raise DocumentError(f"expected an integer as a decimal string, got {value!r}", path=path)


def _rational(value: Any, path: str) -> Fraction:
    if not isinstance(value, str):
        raise DocumentError(f"expected a rational as a decimal string, got {value!r}", path=path)
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise DocumentError(f"cannot read rational {value!r}", path=path)


def _matrix(value: Any, path: str):
    if not isinstance(value, list) or not value:
        raise DocumentError("expected a nonempty list of rows", path=path)
    rows = []
    for i, row in enumerate(value):
        row_path = _join(path, i)
        if not isinstance(row, list) or len(row) != len(value):
            raise DocumentError(f"row must have {len(value)} entries (square matrix)", path=row_path)
        rows.append([_integer(v, _join(row_path, j)) for j, v in enumerate(row)])
    return rows


def parse_document(data: Any, path: str = '') -> Document:
    """Build a descriptor (or endomorphism) from decoded JSON"""
    if not isinstance(data, dict) or 'type' not in data:
        raise DocumentError("document must be an object with a 'type' field", path=path or None)
    kind = data['type']
    if not isinstance(kind, str) or kind not in _FIELDS:
        raise DocumentError(f"unknown type '{kind}', expected one of {', '.join(_FIELDS)}",
                            path=_join(path, 'type'))
    required, optional = _FIELDS[kind]
    _check_fields(data, required, optional, path)

    if kind == 'periodic':
        period = _integer(data['period'], _join(path, 'period'))
        table_path = _join(path, 'nielsen')
        if not isinstance(data['nielsen'], dict):
            raise DocumentError("expected an object keyed by divisors", path=table_path)
        table = {_integer(k, table_path): _integer(v, _join(table_path, k)) for k, v in data['nielsen'].items()}
        return Periodic.from_table(period, table)

    if kind == 'torus_linear':
        return TorusLinear.from_rows(_matrix(data['matrix'], _join(path, 'matrix')))

    if kind == 'subshift_markov':
        terms_path = _join(path, 'terms')
        if not isinstance(data['terms'], list):
            raise DocumentError("expected a list of terms", path=terms_path)
        terms = []
        for i, term in enumerate(data['terms']):
            term_path = _join(terms_path, i)
            _check_fields(term, {'matrix', 'sign'}, set(), term_path)
            terms.append((_matrix(term['matrix'], _join(term_path, 'matrix')),
                          _integer(term['sign'], _join(term_path, 'sign'))))
        return SubshiftMarkov.from_terms(terms)

    if kind == 'seifert_fibered':
        action_path = _join(path, 'fiber_action')
        try:
            action = FiberAction(data['fiber_action'])
        except ValueError:
            raise DocumentError(f"fiber_action must be 'preserving' or 'reversing', got {data['fiber_action']!r}",
                                path=action_path)
        base = parse_document(data['base'], _join(path, 'base'))
        if isinstance(base, FreeEndomorphism):
            raise DocumentError("base must be a map descriptor", path=_join(path, 'base'))
        return SeifertFibered(action, base)

    if kind == 'decomposition':
        pieces_path = _join(path, 'pieces')
        if not isinstance(data['pieces'], list):
            raise DocumentError("expected a list of pieces", path=pieces_path)
        pieces = []
        for i, piece in enumerate(data['pieces']):
            piece_path = _join(pieces_path, i)
            _check_fields(piece, {'return_time', 'piece_map'}, {'label'}, piece_path)
            piece_map = parse_document(piece['piece_map'], _join(piece_path, 'piece_map'))
            if isinstance(piece_map, FreeEndomorphism):
                raise DocumentError("piece_map must be a map descriptor", path=_join(piece_path, 'piece_map'))
            pieces.append(Piece(_integer(piece['return_time'], _join(piece_path, 'return_time')),
                                piece_map, piece.get('label', 'component')))
        return Decomposition(tuple(pieces))

    phi = parse_endomorphism(_text(data['images'], _join(path, 'images')))
    if 'inverse' in data:
        phi = phi.with_inverse(parse_endomorphism(_text(data['inverse'], _join(path, 'inverse'))))
    return phi


def _text(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise DocumentError("expected a string", path=path)
    return value


def loads_document(text: str) -> Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"invalid JSON: {e.msg}", line=e.lineno)
    return parse_document(data)


def load_document(path: Union[str, Path]) -> Document:
    with open(path, 'r') as f:
        document = loads_document(f.read())
    logger.debug(f"loaded {type(document).__name__} from {path}")
    return document


def serialize_descriptor(d: Document) -> Dict[str, Any]:
    """Canonical document; parse_document(serialize_descriptor(d)) == d"""
    if isinstance(d, Periodic):
        return {'type': 'periodic', 'period': str(d.period),
                'nielsen': {str(k): str(v) for k, v in d.nielsen_table}}
    if isinstance(d, TorusLinear):
        return {'type': 'torus_linear', 'matrix': [[str(v) for v in row] for row in d.matrix]}
    if isinstance(d, SubshiftMarkov):
        return {'type': 'subshift_markov',
                'terms': [{'matrix': [[str(v) for v in row] for row in m], 'sign': str(s)} for m, s in d.terms]}
    if isinstance(d, SeifertFibered):
        return {'type': 'seifert_fibered', 'fiber_action': d.fiber_action.value,
                'base': serialize_descriptor(d.base)}
    if isinstance(d, Decomposition):
        pieces = []
        for p in d.pieces:
            piece = {'return_time': str(p.return_time), 'piece_map': serialize_descriptor(p.piece_map)}
            if p.label != 'component':
                piece['label'] = p.label
            pieces.append(piece)
        return {'type': 'decomposition', 'pieces': pieces}
    if isinstance(d, FreeEndomorphism):
        document = {'type': 'free_endomorphism', 'images': str(d)}
        if d.inverse is not None:
            document['inverse'] = str(d.inverse)
        return document
    raise DocumentError(f"cannot serialize {type(d).__name__}")


def dumps_document(d: Document) -> str:
    return json.dumps(serialize_descriptor(d), indent=2)


def radical_to_machine(e: RadicalExpr) -> Dict[str, Any]:
    return {'factors': [{'coeffs': [str(c) for c in poly.coeffs], 'exponent': str(exponent)}
                        for poly, exponent in e.factors]}


def radical_from_machine(data: Any) -> RadicalExpr:
    _check_fields(data, {'factors'}, set(), '')
    if not isinstance(data['factors'], list):
        raise DocumentError("expected a list of factors", path='factors')
    factors = []
    for i, factor in enumerate(data['factors']):
        factor_path = _join('factors', i)
        _check_fields(factor, {'coeffs', 'exponent'}, set(), factor_path)
        if not isinstance(factor['coeffs'], list):
            raise DocumentError("expected a list of coefficients", path=_join(factor_path, 'coeffs'))
        coeffs = tuple(_integer(c, _join(_join(factor_path, 'coeffs'), j)) for j, c in enumerate(factor['coeffs']))
        factors.append((Polynomial(coeffs), _rational(factor['exponent'], _join(factor_path, 'exponent'))))
    return RadicalExpr.from_factors(factors)


def parse_sample_lines(lines: Sequence[str]) -> List[CountSample]:
    """Two columns, x and count, separated by whitespace or a comma; '#' starts a comment"""
    samples = []
    for number, raw in enumerate(lines, 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        columns = [c for c in re.split(r'[,\s]+', line) if c]
        if len(columns) != 2:
            raise DocumentError(f"expected two columns, got {len(columns)}", line=number)
        try:
            samples.append(CountSample(columns[0], columns[1]))
        except (ValueError, TypeError, ExpansionRangeError) as e:
            raise DocumentError(f"cannot read sample: {e}", line=number)
    if not samples:
        raise DocumentError("sample file contains no samples")
    return samples


def load_samples(path: Union[str, Path]) -> List[CountSample]:
    """Read a sample file; cutoffs must increase strictly and counts must not decrease"""
    with open(path, 'r') as f:
        samples = parse_sample_lines(f.readlines())
    try:
        check_samples(samples)
    except FitError as e:
        raise DocumentError(f"{path}: {e}")
    return samples


def dumps_samples(samples: Sequence[CountSample], digits: int = 30, comment: str = '') -> str:
    """Two-column text readable by parse_sample_lines"""
    lines = [f"# {comment}"] if comment else []
    lines.extend(f"{mpmath.nstr(s.x, digits)} {mpmath.nstr(s.count, digits)}" for s in samples)
    return '\n'.join(lines) + '\n'
