from fractions import Fraction as F

import pytest

from schurlat.asymptotics import ModelAsymptotics

HEXAGON_BLOCKS = (
    (F(0), F(1, 6)),
    (F(13, 6), F(7, 3)),
    (F(16, 3), F(11, 2)),
    (F(17, 2), F(35, 4)),
    (F(51, 4), F(13)),
)


@pytest.fixture(scope="session")
def hexagon_model() -> ModelAsymptotics:
    return ModelAsymptotics.from_blocks(HEXAGON_BLOCKS, 2)


@pytest.fixture(scope="session")
def square_model() -> ModelAsymptotics:
    # one square row per period with c = 1/(y x1) = 1/2
    return ModelAsymptotics.from_blocks(HEXAGON_BLOCKS, 2, F(1), [F(2)])


@pytest.fixture(scope="session")
def uniform_model() -> ModelAsymptotics:
    return ModelAsymptotics.from_blocks(((F(0), F(1)),), 1)


def random_lattice_spec(rng, max_vertices: int = 60, max_matchings: int = 1500):
    """Random periodic lattice within the vertex cap; squares appear with probability 1/2 per row.

    The matching count is the partition function at unit weights, so oversized
    lattices are skipped before enumeration.
    """
    from schurlat.lattice import LatticeSpec, WeightSpec, build_lattice, partition_function
    from schurlat.partitions import boundary_from_positions

    while True:
        n = rng.choice([1, 2, 3])
        N = n * rng.randint(1, max(1, 4 // n))
        pos = sorted(rng.sample(range(2, N + 4), N - 1))
        positions = [1] + pos
        xs = sorted({F(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(3 * n)}, reverse=True)[:n]
        if len(xs) < n:
            continue
        a = tuple(rng.randint(0, 1) for _ in range(n))
        y = tuple(F(rng.randint(1, 7), rng.randint(1, 3)) if b == 0 else None for b in a)
        spec = LatticeSpec.periodic(boundary_from_positions(positions), WeightSpec(tuple(xs), a, y))
        unit = LatticeSpec(spec.boundary, spec.a_bits, (F(1),) * spec.N, tuple(F(1) for _ in spec.y))
        if len(build_lattice(spec).vertices) <= max_vertices and partition_function(unit) <= max_matchings:
            return spec
