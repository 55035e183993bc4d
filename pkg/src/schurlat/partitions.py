"""Exact partition arithmetic, interlacing predicates and boundary-row encodings."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of nonnegative integers with a fixed length."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        for p in parts:
            if p < 0:
                raise ValueError(f"negative part in {parts}")
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"parts must be weakly decreasing: {parts}")

    @classmethod
    def parse(cls, text: str) -> "Partition":
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(int(tok) for tok in text.split(",")))

    @classmethod
    def zero(cls, length: int) -> "Partition":
        return cls((0,) * length)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, k: int) -> int:
        return self.parts[k]

    @property
    def size(self) -> int:
        return sum(self.parts)

    def padded(self, length: int) -> tuple[int, ...]:
        if length < len(self.parts):
            raise ValueError("cannot pad to a shorter length")
        return self.parts + (0,) * (length - len(self.parts))

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)


def _as_partition(p: Partition | Sequence[int]) -> Partition:
    return p if isinstance(p, Partition) else Partition(tuple(p))


def _pad_pair(lower: Partition, upper: Partition) -> tuple[tuple[int, ...], tuple[int, ...]]:
    n = max(len(lower), len(upper))
    return lower.padded(n), upper.padded(n)


def interlaces(lower: Partition | Sequence[int], upper: Partition | Sequence[int]) -> bool:
    """True iff upper/lower is a horizontal strip: upper_1 >= lower_1 >= upper_2 >= ..."""
    lo, up = _pad_pair(_as_partition(lower), _as_partition(upper))
    for k in range(len(up)):
        if lo[k] > up[k]:
            return False
        if k + 1 < len(up) and lo[k] < up[k + 1]:
            return False
    return True


def cointerlaces(lower: Partition | Sequence[int], upper: Partition | Sequence[int]) -> bool:
    """True iff upper/lower is a vertical strip: 0 <= upper_k - lower_k <= 1."""
    lo, up = _pad_pair(_as_partition(lower), _as_partition(upper))
    return all(0 <= u - l <= 1 for l, u in zip(lo, up))


def horizontal_strips_below(upper: Partition, length: int) -> list[Partition]:
    """All partitions of the given length (len(upper) or len(upper)-1) interlacing below upper."""
    up = upper.parts
    if length not in (len(up), len(up) - 1):
        raise ValueError("length must be len(upper) or len(upper) - 1")
    out: list[Partition] = []

    def rec(k: int, acc: list[int]) -> None:
        if k == length:
            out.append(Partition(tuple(acc)))
            return
        lo = up[k + 1] if k + 1 < len(up) else 0
        for v in range(up[k], lo - 1, -1):
            acc.append(v)
            rec(k + 1, acc)
            acc.pop()

    rec(0, [])
    return out


def vertical_strips_above(lower: Partition) -> list[Partition]:
    """All partitions of the same length obtained by adding a vertical strip."""
    lo = lower.parts
    out: list[Partition] = []

    def rec(k: int, acc: list[int]) -> None:
        if k == len(lo):
            out.append(Partition(tuple(acc)))
            return
        for d in (0, 1):
            v = lo[k] + d
            if acc and v > acc[-1]:
                continue
            acc.append(v)
            rec(k + 1, acc)
            acc.pop()

    rec(0, [])
    return out


@dataclass(frozen=True)
class AtomicMeasure:
    atoms: tuple[tuple[Fraction, Fraction], ...]

    @property
    def total_mass(self) -> Fraction:
        return sum((m for _, m in self.atoms), Fraction(0))

    def moment(self, p: int) -> Fraction:
        return sum((x**p * m for x, m in self.atoms), Fraction(0))


def counting_measure(lam: Partition | Sequence[int]) -> AtomicMeasure:
    """Atoms (lam_i + N - i)/N of mass 1/N, coincident atoms merged."""
    lam = _as_partition(lam)
    n = len(lam)
    if n == 0:
        raise ValueError("counting measure needs a partition of positive length")
    merged: dict[Fraction, Fraction] = {}
    for i, part in enumerate(lam.parts, start=1):
        loc = Fraction(part + n - i, n)
        merged[loc] = merged.get(loc, Fraction(0)) + Fraction(1, n)
    atoms = tuple(sorted(merged.items(), key=lambda a: a[0], reverse=True))
    return AtomicMeasure(atoms)


def omega_from_positions(positions: Sequence[int]) -> Partition:
    """Partition (Omega_N - N, ..., Omega_1 - 1) read off the hole positions of the bottom row."""
    pos = [int(p) for p in positions]
    if not pos:
        raise ValueError("empty position list")
    if pos[0] < 1:
        raise ValueError("positions must be >= 1")
    for a, b in zip(pos, pos[1:]):
        if a >= b:
            raise ValueError(f"positions must be strictly increasing: {pos}")
    n = len(pos)
    return Partition(tuple(pos[n - 1 - k] - (n - k) for k in range(n)))


def positions_from_omega(omega: Partition | Sequence[int]) -> tuple[int, ...]:
    omega = _as_partition(omega)
    n = len(omega)
    return tuple(omega[n - q] + q for q in range(1, n + 1))


@dataclass(frozen=True)
class BoundaryRow:
    """Bottom-row data: positions, integer runs and their scaled versions."""

    omega_positions: tuple[int, ...]
    blocks: tuple[tuple[int, int], ...]
    scaled_blocks: tuple[tuple[Fraction, Fraction], ...] = field(repr=False)

    @property
    def N(self) -> int:
        return len(self.omega_positions)

    @property
    def omega(self) -> Partition:
        return omega_from_positions(self.omega_positions)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        """K_i = B_i - A_i + 1, left to right."""
        return tuple(b - a + 1 for a, b in self.blocks)

    @property
    def distinct_values(self) -> tuple[int, ...]:
        """Distinct parts mu_1 > ... > mu_s of omega."""
        return tuple(sorted(set(self.omega.parts), reverse=True))

    @property
    def multiplicities(self) -> tuple[int, ...]:
        """Multiplicity of each distinct value, largest value first."""
        return tuple(reversed(self.block_sizes))

    def __str__(self) -> str:
        return "[" + ",".join(f"[{a},{b}]" for a, b in self.blocks) + "]"


def _runs(positions: Sequence[int]) -> tuple[tuple[int, int], ...]:
    runs: list[tuple[int, int]] = []
    for p in positions:
        if runs and runs[-1][1] + 1 == p:
            runs[-1] = (runs[-1][0], p)
        else:
            runs.append((p, p))
    return tuple(runs)


def _scale(blocks: Sequence[tuple[int, int]], n: int) -> tuple[tuple[Fraction, Fraction], ...]:
    return tuple((Fraction(a - 1, n), Fraction(b, n)) for a, b in blocks)


def staircase_blocks(blocks: Iterable[Sequence[int]]) -> BoundaryRow:
    """Expand runs (A_i, B_i) into the position list and record its block structure."""
    runs = [(int(a), int(b)) for a, b in blocks]
    if not runs:
        raise ValueError("no blocks given")
    prev = 0
    for a, b in runs:
        if a > b:
            raise ValueError(f"block ({a},{b}) has A > B")
        if a <= prev:
            raise ValueError(f"blocks overlap or are unordered at ({a},{b})")
        prev = b
    if runs[0][0] < 1:
        raise ValueError("positions must be >= 1")
    positions = tuple(p for a, b in runs for p in range(a, b + 1))
    # adjacent runs such as (1,2),(3,4) are the same block
    merged = _runs(positions)
    return BoundaryRow(positions, merged, _scale(merged, len(positions)))


def boundary_from_positions(positions: Sequence[int]) -> BoundaryRow:
    omega_from_positions(positions)
    pos = tuple(int(p) for p in positions)
    runs = _runs(pos)
    return BoundaryRow(pos, runs, _scale(runs, len(pos)))


def scaled_levels(scaled_blocks: Sequence[tuple[Fraction, Fraction]]) -> tuple[list[Fraction], list[Fraction]]:
    """Limit part values r_t and mass fractions, largest value first.

    Block l (left to right) carries the scaled part value a_l minus the total
    length of the blocks to its left.
    """
    values: list[Fraction] = []
    lengths: list[Fraction] = []
    left = Fraction(0)
    for a, b in scaled_blocks:
        values.append(Fraction(a) - left)
        lengths.append(Fraction(b) - Fraction(a))
        left += Fraction(b) - Fraction(a)
    return values[::-1], lengths[::-1]


def index_sets(n: int, row: BoundaryRow) -> list[list[int]]:
    """Sets J_i of distinct-value indices (1-based, largest value = 1) meeting weight class i.

    Positions of omega (in decreasing order) are paired with weights sorted in
    decreasing order, so class i covers positions (i-1)N/n+1 .. iN/n.
    """
    N = row.N
    if n < 1 or N % n:
        raise ValueError(f"period {n} must divide N={N}")
    values = row.distinct_values
    rank = {v: t for t, v in enumerate(values, start=1)}
    per = N // n
    omega = row.omega.parts
    sets = []
    for i in range(n):
        sets.append(sorted({rank[omega[j]] for j in range(i * per, (i + 1) * per)}))
    return sets


def scaled_index_sets(n: int, scaled_blocks: Sequence[tuple[Fraction, Fraction]]) -> list[list[int]]:
    """Limit analogue of index_sets: class i occupies the mass fraction ((i-1)/n, i/n]."""
    _, lengths = scaled_levels(scaled_blocks)
    if sum(lengths) != 1:
        raise ValueError("scaled blocks must have total length 1")
    edges = [Fraction(0)]
    for length in lengths:
        edges.append(edges[-1] + length)
    sets = []
    for i in range(n):
        lo, hi = Fraction(i, n), Fraction(i + 1, n)
        sets.append([t + 1 for t in range(len(lengths)) if min(hi, edges[t + 1]) > max(lo, edges[t])])
    return sets


def index_sets_disjoint(sets: Sequence[Sequence[int]]) -> bool:
    """The separation condition: consecutive sets are nonempty and strictly ordered."""
    if any(len(s) == 0 for s in sets):
        return False
    return all(max(a) < min(b) for a, b in zip(sets, sets[1:]))
