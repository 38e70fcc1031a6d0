"""
Shared pytest fixtures and hypothesis profiles
Select a profile with HYPOTHESIS_PROFILE=fast|acceptance (default: default)
"""

import os
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from descriptors import FiberAction, Periodic, SeifertFibered, SubshiftMarkov, TorusLinear
from twisted_conjugacy import parse_endomorphism
from zeta_config import ZetaSettings

settings.register_profile('default', max_examples=50, deadline=None)
settings.register_profile('fast', max_examples=10, deadline=None)
settings.register_profile('acceptance', max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.getenv('HYPOTHESIS_PROFILE', 'default'))

SAMPLES_DIR = Path(__file__).with_name('samples')


@pytest.fixture
def samples_dir() -> Path:
    return SAMPLES_DIR


@pytest.fixture
def zeta_settings() -> ZetaSettings:
    return ZetaSettings()


@pytest.fixture
def periodic_m2() -> Periodic:
    """m=2, N_1=1, N_2=3"""
    return Periodic.from_table(2, {1: 1, 2: 3})


@pytest.fixture
def cat_map() -> TorusLinear:
    return TorusLinear.from_rows([[2, 1], [1, 1]])


@pytest.fixture
def golden_subshift() -> SubshiftMarkov:
    return SubshiftMarkov.from_terms([([[1, 1], [1, 0]], 1)])


@pytest.fixture
def reversing_over_two() -> SeifertFibered:
    return SeifertFibered(FiberAction.REVERSING, Periodic.from_table(1, {1: 2}))


@pytest.fixture
def fibonacci_automorphism():
    """a -> a b, b -> a with its inverse attached"""
    phi = parse_endomorphism('a -> a b, b -> a')
    return phi.with_inverse(parse_endomorphism('a -> b, b -> b^-1 a'))


@st.composite
def small_fractions(draw, max_abs=5, max_den=4):
    return Fraction(draw(st.integers(-max_abs, max_abs)), draw(st.integers(1, max_den)))


@st.composite
def words_of_rank(draw, rank, max_length=6):
    letters = st.integers(-rank, rank).filter(lambda x: x != 0)
    return tuple(draw(st.lists(letters, max_size=max_length)))
