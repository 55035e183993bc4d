from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from schurlat.partitions import (
    Partition,
    boundary_from_positions,
    cointerlaces,
    counting_measure,
    horizontal_strips_below,
    index_sets,
    index_sets_disjoint,
    interlaces,
    omega_from_positions,
    positions_from_omega,
    scaled_index_sets,
    scaled_levels,
    staircase_blocks,
    vertical_strips_above,
)

from conftest import HEXAGON_BLOCKS

positions = st.lists(st.integers(1, 40), min_size=1, max_size=12, unique=True).map(sorted)


def test_partition_rejects_increasing_parts():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, -1))


def test_partition_parse_and_size():
    p = Partition.parse("3,3,1,0")
    assert p.parts == (3, 3, 1, 0)
    assert p.size == 7
    assert str(p) == "3,3,1,0"


@pytest.mark.parametrize(
    "lower, upper, expected",
    [((2, 1), (3, 1, 0), True), ((2, 2), (3, 1), False), ((3,), (3, 3), True), ((4,), (3, 0), False)],
)
def test_interlaces(lower, upper, expected):
    assert interlaces(lower, upper) is expected


@pytest.mark.parametrize("lower, upper, expected", [((2, 1), (3, 1), True), ((2, 1), (3, 3), False), ((1, 1), (1, 0), False)])
def test_cointerlaces(lower, upper, expected):
    assert cointerlaces(lower, upper) is expected


@given(st.lists(st.integers(0, 5), min_size=1, max_size=4).map(lambda v: Partition(tuple(sorted(v, reverse=True)))))
def test_strip_enumerators_match_predicates(upper):
    for length in (len(upper), len(upper) - 1):
        for lower in horizontal_strips_below(upper, length):
            assert interlaces(lower, upper)
    for above in vertical_strips_above(upper):
        assert cointerlaces(upper, above)
    assert len(vertical_strips_above(upper)) >= 1


@given(positions)
def test_omega_positions_round_trip(pos):
    assert positions_from_omega(omega_from_positions(pos)) == tuple(pos)


def test_omega_from_positions_example():
    # holes at 1, 3, 4, 6 give omega = (6-4, 4-3, 3-2, 1-1)
    assert omega_from_positions([1, 3, 4, 6]).parts == (2, 1, 1, 0)


def test_boundary_blocks_and_multiplicities():
    row = boundary_from_positions([1, 2, 5, 6, 7])
    assert row.blocks == ((1, 2), (5, 7))
    assert row.block_sizes == (2, 3)
    assert row.distinct_values == (2, 0)
    assert row.multiplicities == (3, 2)
    assert row.scaled_blocks == ((F(0), F(2, 5)), (F(4, 5), F(7, 5)))


def test_staircase_merges_adjacent_runs():
    row = staircase_blocks([(1, 2), (3, 4), (7, 7)])
    assert row.omega_positions == (1, 2, 3, 4, 7)
    assert row.blocks == ((1, 4), (7, 7))


def test_staircase_rejects_overlap():
    with pytest.raises(ValueError):
        staircase_blocks([(1, 3), (3, 5)])


def test_counting_measure_moments():
    mu = counting_measure((2, 0))
    assert mu.total_mass == 1
    # atoms (2+1)/2 and 0/2
    assert mu.moment(1) == F(3, 4)


def test_scaled_levels_of_hexagon_blocks():
    values, lengths = scaled_levels(HEXAGON_BLOCKS)
    assert values == [F(12), F(8), F(5), F(2), F(0)]
    assert sum(lengths) == 1


def test_scaled_index_sets_are_separated():
    sets = scaled_index_sets(2, HEXAGON_BLOCKS)
    assert sets == [[1, 2], [3, 4, 5]]
    assert index_sets_disjoint(sets)


def test_finite_index_sets():
    row = boundary_from_positions([1, 2, 5, 6])
    assert index_sets(2, row) == [[1], [2]]
    with pytest.raises(ValueError):
        index_sets(3, row)
