import random
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from schurlat.checks import _golden_reference, random_schur_case
from schurlat.partitions import Partition
from schurlat.schur import (
    CapExceeded,
    VariableSpec,
    coset_count,
    coset_representatives,
    phi_data,
    schur_at_ones,
    schur_branching,
    schur_coset,
    schur_coset_general,
    schur_determinant,
)

rationals = st.fractions(min_value=F(1, 20), max_value=F(20), max_denominator=30)


def test_variable_spec_requires_strictly_decreasing_values():
    with pytest.raises(ValueError):
        VariableSpec((1, 2), 4)
    with pytest.raises(ValueError):
        VariableSpec((2, 1), 3)
    assert VariableSpec((3, 1), 4).expanded() == (3, 1, 3, 1)


@pytest.mark.parametrize(
    "lam, values, expected",
    [
        ((1,), (F(5),), F(5)),
        ((1, 0), (F(2), F(3)), F(5)),
        ((1, 1), (F(2), F(3)), F(6)),
        ((2, 0), (F(1), F(2)), F(7)),
        ((2, 1, 0), (F(1), F(1), F(1)), F(8)),
    ],
)
def test_small_schur_values(lam, values, expected):
    assert schur_branching(lam, values) == expected


@pytest.mark.parametrize("lam, N, dim", [((2, 1, 0), 3, 8), ((1, 1, 0, 0), 4, 6), ((3, 0), 2, 4)])
def test_schur_at_ones_is_dimension(lam, N, dim):
    assert schur_at_ones(lam, N) == dim


def test_golden_identity_at_fixed_point():
    spec = VariableSpec((F(2), F(1)), 4)
    assert schur_coset((3, 3, 3, 1), spec) == 368
    assert _golden_reference(0, [], F(2), F(1)) == 368


@settings(max_examples=25, deadline=None)
@given(rationals, rationals, st.lists(rationals, min_size=3, max_size=3))
def test_deformed_coset_matches_expanded_polynomials(a, b, u):
    # the cross-class factor is singular when a deformed value meets another class value
    assume(len({a, b, *u}) == 5)
    x1, x2 = max(a, b), min(a, b)
    spec = VariableSpec((x1, x2), 4)
    for k in (1, 2, 3):
        expected = _golden_reference(k, u, x1, x2)
        assert schur_coset_general((3, 3, 3, 1), u[:k], spec) == expected
        assert schur_branching((3, 3, 3, 1), list(u[:k]) + list(spec.expanded()[k:])) == expected


@pytest.mark.parametrize("seed", range(8))
def test_coset_equals_branching_on_random_cases(seed):
    rng = random.Random(seed)
    for _ in range(10):
        lam, spec = random_schur_case(rng)
        assert schur_coset(lam, spec) == schur_branching(lam, spec.expanded())


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.integers(0, 4), min_size=1, max_size=4),
    st.lists(rationals, min_size=4, max_size=4, unique=True),
)
def test_bialternant_equals_branching(parts, vals):
    lam = tuple(sorted(parts, reverse=True))
    values = vals[: len(lam)]
    assert schur_determinant(lam, values) == schur_branching(lam, values)


def test_coset_count_and_cap():
    spec = VariableSpec((3, 2, 1), 6)
    # multinomial 6!/(2!2!2!)
    assert coset_count(spec) == 90
    assert len(coset_representatives(spec)) == 90
    with pytest.raises(CapExceeded):
        coset_representatives(spec, cap=10)


def test_phi_data_for_sorted_permutation():
    spec = VariableSpec((2, 1), 4)
    d = phi_data((3, 3, 3, 1), (0, 2, 1, 3), spec)
    assert d.eta == (2, 2, 0, 0)
    assert d.phi == (Partition((5, 5)), Partition((3, 1)))


def test_single_class_coset_is_homogeneous():
    spec = VariableSpec((F(3),), 3)
    lam = Partition((2, 1, 0))
    assert schur_coset(lam, spec) == F(3) ** 3 * 8
