"""Contracting square-hexagon lattices: construction, perfect matchings, partition
sequences, partition function and height functions.

Coordinates are doubled so that every vertex sits on the integer grid: a vertex
at (x, y) in the half-integer embedding is stored as (X, Y) = (2x, 2y).  Row k
(counted from the bottom, starting at 1) has Y = k; odd rows are white and even
rows are black.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .partitions import (
    BoundaryRow,
    Partition,
    cointerlaces,
    horizontal_strips_below,
    interlaces,
    vertical_strips_above,
)
from .schur import CapExceeded, schur_branching

DEFAULT_VERTEX_CAP = 60

Vertex = tuple[int, int]


@dataclass(frozen=True)
class WeightSpec:
    """One period of the row data: x weights, square/hexagon bits and y weights.

    ``y[l]`` is only meaningful where ``a[l] == 0`` (a square row) and is None elsewhere.
    """

    x: tuple[Fraction, ...]
    a: tuple[int, ...]
    y: tuple[Fraction | None, ...]

    def __post_init__(self) -> None:
        n = len(self.x)
        if n == 0 or len(self.a) != n or len(self.y) != n:
            raise ValueError("x, a and y must all have the period length")
        object.__setattr__(self, "x", tuple(Fraction(v) for v in self.x))
        object.__setattr__(self, "a", tuple(int(b) for b in self.a))
        ys = tuple(None if (b == 1 or v is None) else Fraction(v) for b, v in zip(self.a, self.y))
        object.__setattr__(self, "y", ys)
        if any(b not in (0, 1) for b in self.a):
            raise ValueError("row bits must be 0 or 1")
        if any(v <= 0 for v in self.x):
            raise ValueError("x weights must be positive")
        for b, v in zip(self.a, self.y):
            if b == 0 and (v is None or v <= 0):
                raise ValueError("every square row needs a positive y weight")

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def square_rows(self) -> list[int]:
        """1-based indices l in [n] with a_l = 0."""
        return [l + 1 for l, b in enumerate(self.a) if b == 0]


@dataclass(frozen=True)
class LatticeSpec:
    boundary: BoundaryRow
    a_bits: tuple[int, ...]
    x: tuple[Fraction, ...]
    y: tuple[Fraction | None, ...]

    def __post_init__(self) -> None:
        N = self.boundary.N
        if N == 0:
            raise ValueError("empty boundary row")
        if self.boundary.omega_positions[0] != 1:
            raise ValueError("the bottom row must start at position 1")
        if not (len(self.a_bits) == len(self.x) == len(self.y) == N):
            raise ValueError("a_bits, x and y need one entry per level 1..N")
        object.__setattr__(self, "x", tuple(Fraction(v) for v in self.x))
        ys = tuple(None if b == 1 else Fraction(v) for b, v in zip(self.a_bits, self.y))
        object.__setattr__(self, "y", ys)
        if any(v <= 0 for v in self.x) or any(v is not None and v <= 0 for v in self.y):
            raise ValueError("weights must be positive")

    @classmethod
    def periodic(cls, boundary: BoundaryRow, weights: WeightSpec) -> "LatticeSpec":
        N, n = boundary.N, weights.n
        idx = [(k % n) for k in range(N)]
        return cls(
            boundary,
            tuple(weights.a[i] for i in idx),
            tuple(weights.x[i] for i in idx),
            tuple(weights.y[i] for i in idx),
        )

    @property
    def N(self) -> int:
        return self.boundary.N

    @property
    def omega(self) -> Partition:
        return self.boundary.omega

    @property
    def hexagon_levels(self) -> list[int]:
        return [k + 1 for k, b in enumerate(self.a_bits) if b == 1]

    @property
    def square_levels(self) -> list[int]:
        return [k + 1 for k, b in enumerate(self.a_bits) if b == 0]


@dataclass(frozen=True)
class Edge:
    white: Vertex
    black: Vertex
    weight: Fraction
    kind: str  # "vertical", "ne" (NE-SW line) or "nw" (NW-SE line)


def _edge_kind(white: Vertex, black: Vertex) -> str:
    lower, upper = (white, black) if white[1] < black[1] else (black, white)
    if lower[0] == upper[0]:
        return "vertical"
    return "ne" if upper[0] > lower[0] else "nw"


@dataclass
class Lattice:
    spec: LatticeSpec
    rows: dict[int, tuple[int, ...]]
    holes: tuple[int, ...]
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    index: dict[Vertex, int] = field(repr=False)
    incident: dict[Vertex, tuple[int, ...]] = field(repr=False)

    @property
    def top_row(self) -> int:
        return max(self.rows)

    def is_white(self, v: Vertex) -> bool:
        return v[1] % 2 == 1


def _a_of(spec: LatticeSpec, m: int) -> int:
    """Row bit for any integer level, extended periodically outside 1..N."""
    return spec.a_bits[(m - 1) % spec.N]


def build_lattice(spec: LatticeSpec) -> Lattice:
    """Build the rows of the contracting lattice from the bottom up."""
    N = spec.N
    positions = spec.boundary.omega_positions
    rows: dict[int, tuple[int, ...]] = {1: tuple(2 * p - 1 for p in positions)}
    holes = tuple(X for X in range(rows[1][0], rows[1][-1] + 1, 2) if X not in rows[1])
    edges: list[Edge] = []
    for k in range(1, N + 1):
        whites = rows[2 * k - 1]
        if not whites:
            break
        # full-plane whites between the extreme whites of the row below
        span = range(whites[0], whites[-1] + 1, 2)
        if spec.a_bits[k - 1] == 1:
            blacks = sorted(set(span))
        else:
            blacks = sorted({X + d for X in span for d in (-1, 1)})
        rows[2 * k] = tuple(blacks)
        bset = set(blacks)
        for X in whites:
            w = (X, 2 * k - 1)
            if spec.a_bits[k - 1] == 1:
                edges.append(Edge(w, (X, 2 * k), Fraction(1), "vertical"))
            else:
                edges.append(Edge(w, (X - 1, 2 * k), Fraction(1), "nw"))
                edges.append(Edge(w, (X + 1, 2 * k), spec.y[k - 1], "ne"))
        upper = tuple(X for X in range(blacks[0] + 1, blacks[-1], 2) if X - 1 in bset and X + 1 in bset)
        rows[2 * k + 1] = upper
        for X in blacks:
            b = (X, 2 * k)
            if X - 1 in upper:
                edges.append(Edge((X - 1, 2 * k + 1), b, Fraction(1), "nw"))
            if X + 1 in upper:
                edges.append(Edge((X + 1, 2 * k + 1), b, spec.x[k - 1], "ne"))
    rows = {r: xs for r, xs in rows.items() if xs}
    vertices = tuple(sorted(((X, Y) for Y, xs in rows.items() for X in xs), key=lambda v: (v[1], v[0])))
    index = {v: i for i, v in enumerate(vertices)}

    def edge_key(e: Edge) -> tuple[int, int]:
        a, b = index[e.white], index[e.black]
        return (min(a, b), max(a, b))

    edges.sort(key=edge_key)
    incident: dict[Vertex, list[int]] = {v: [] for v in vertices}
    for i, e in enumerate(edges):
        incident[e.white].append(i)
        incident[e.black].append(i)
    return Lattice(
        spec,
        rows,
        holes,
        vertices,
        tuple(edges),
        index,
        {v: tuple(ix) for v, ix in incident.items()},
    )


@dataclass(frozen=True)
class Matching:
    edges: tuple[int, ...]  # sorted edge indices into Lattice.edges
    weight: Fraction


def enumerate_matchings(lat: Lattice, cap: int = DEFAULT_VERTEX_CAP) -> list[Matching]:
    """All perfect matchings, by branching on the lowest-index uncovered vertex."""
    nv = len(lat.vertices)
    if nv > cap:
        raise CapExceeded(f"{nv} vertices exceed the enumeration cap of {cap}")
    whites = sum(1 for v in lat.vertices if lat.is_white(v))
    if 2 * whites != nv:
        return []
    covered = [False] * nv
    chosen: list[int] = []
    out: list[Matching] = []
    other = []
    for i, e in enumerate(lat.edges):
        other.append((lat.index[e.white], lat.index[e.black]))
    inc = [lat.incident[v] for v in lat.vertices]

    def rec(start: int, weight: Fraction) -> None:
        i = start
        while i < nv and covered[i]:
            i += 1
        if i == nv:
            out.append(Matching(tuple(sorted(chosen)), weight))
            return
        covered[i] = True
        for ei in inc[i]:
            a, b = other[ei]
            j = b if a == i else a
            if covered[j]:
                continue
            covered[j] = True
            chosen.append(ei)
            rec(i + 1, weight * lat.edges[ei].weight)
            chosen.pop()
            covered[j] = False
        covered[i] = False

    rec(0, Fraction(1))
    out.sort(key=lambda m: m.edges)
    return out


def matching_weight(lat: Lattice, edges: Iterable[int]) -> Fraction:
    w = Fraction(1)
    for ei in edges:
        w *= lat.edges[ei].weight
    return w


@dataclass(frozen=True)
class InterlacingSequence:
    """Partitions read row by row from the bottom: mu(N), nu(N), mu(N-1), ..., nu(1), mu(0)."""

    partitions: tuple[Partition, ...]

    @property
    def N(self) -> int:
        return (len(self.partitions) - 1) // 2

    def mu(self, i: int) -> Partition:
        return self.partitions[2 * (self.N - i)]

    def nu(self, i: int) -> Partition:
        return self.partitions[2 * (self.N - i) + 1]


def _row_slots(lat: Lattice, row: int) -> list[int]:
    """X positions of the row, including the holes of the bottom row."""
    if row == 1:
        return sorted(lat.rows[1] + lat.holes)
    return list(lat.rows.get(row, ()))


def _partition_from_flags(flags: Sequence[bool]) -> Partition:
    """flags[j] is True for a V-vertex; V-vertices are indexed from the right."""
    parts = []
    lambdas = 0
    counts = []
    for f in flags:
        if f:
            counts.append(lambdas)
        else:
            lambdas += 1
    parts = sorted(counts, reverse=True)
    return Partition(tuple(parts))


def _flags_from_partition(part: Partition, size: int) -> list[bool]:
    n_v = len(part)
    if n_v > size:
        raise ValueError("partition longer than the row")
    flags = [False] * size
    for k, p in enumerate(part.parts, start=1):
        pos = p + (n_v - k)
        if pos >= size or flags[pos]:
            raise ValueError(f"partition {part} does not fit a row of {size} vertices")
        flags[pos] = True
    return flags


def _partner_rows(lat: Lattice, m: Matching) -> dict[Vertex, Vertex]:
    partner: dict[Vertex, Vertex] = {}
    for ei in m.edges:
        e = lat.edges[ei]
        partner[e.white] = e.black
        partner[e.black] = e.white
    return partner


def matching_to_sequence(lat: Lattice, m: Matching) -> InterlacingSequence:
    """Read a partition off each row.

    A white vertex is a V-vertex when matched upward, a black vertex when matched
    downward; the k-th V-vertex from the right contributes the number of
    Lambda-vertices to its left.  Holes of the bottom row count as Lambda-vertices.
    """
    partner = _partner_rows(lat, m)
    N = lat.spec.N
    parts = []
    for row in range(1, 2 * N + 2):
        slots = _row_slots(lat, row)
        flags = []
        for X in slots:
            v = (X, row)
            if v not in partner:
                flags.append(False)  # bottom-row hole
                continue
            up = partner[v][1] > row
            flags.append(up if row % 2 == 1 else not up)
        parts.append(_partition_from_flags(flags))
    return InterlacingSequence(tuple(parts))


def sequence_to_matching(lat: Lattice, seq: InterlacingSequence) -> Matching:
    """Inverse of matching_to_sequence; raises ValueError when the sequence does not fit."""
    N = lat.spec.N
    if len(seq.partitions) != 2 * N + 1:
        raise ValueError("sequence length does not match the lattice")
    flags = {}
    for row in range(1, 2 * N + 2):
        slots = _row_slots(lat, row)
        flags[row] = dict(zip(slots, _flags_from_partition(seq.partitions[row - 1], len(slots))))
    for X in lat.holes:
        if flags[1][X]:
            raise ValueError("a hole of the bottom row cannot be a V-vertex")
    edge_of = {(e.white, e.black): i for i, e in enumerate(lat.edges)}
    chosen = []

    def pair(lower: list[Vertex], upper: list[Vertex], lower_white: bool) -> None:
        if len(lower) != len(upper):
            raise ValueError("row counts do not match")
        for a, b in zip(lower, upper):
            key = (a, b) if lower_white else (b, a)
            if key not in edge_of:
                raise ValueError(f"no edge between {a} and {b}")
            chosen.append(edge_of[key])

    for row in range(1, 2 * N + 1):
        here = [(X, row) for X in lat.rows.get(row, ()) if flags[row][X] == (row % 2 == 1)]
        above = [(X, row + 1) for X in lat.rows.get(row + 1, ()) if flags[row + 1][X] == (row % 2 == 1)]
        # odd row: V whites go up to V blacks; even row: Lambda blacks go up to Lambda whites
        pair(here, above, lower_white=(row % 2 == 1))
    edges = tuple(sorted(chosen))
    covered = [v for ei in edges for v in (lat.edges[ei].white, lat.edges[ei].black)]
    if len(covered) != len(set(covered)) or len(covered) != len(lat.vertices):
        raise ValueError("sequence does not give a perfect matching")
    return Matching(edges, matching_weight(lat, edges))


def enumerate_sequences(spec: LatticeSpec) -> list[InterlacingSequence]:
    """All chains omega = mu(N) <' nu(N) > mu(N-1) <' ... > mu(0) = empty, built from partitions alone."""
    N = spec.N
    out: list[InterlacingSequence] = []

    def rec(level: int, mu: Partition, acc: list[Partition]) -> None:
        if level > N:
            out.append(InterlacingSequence(tuple(acc)))
            return
        nus = [mu] if spec.a_bits[level - 1] == 1 else vertical_strips_above(mu)
        for nu in nus:
            for lower in horizontal_strips_below(nu, len(nu) - 1):
                rec(level + 1, lower, acc + [nu, lower])

    rec(1, spec.omega, [spec.omega])
    return out


def is_valid_sequence(spec: LatticeSpec, seq: InterlacingSequence) -> bool:
    N = spec.N
    p = seq.partitions
    if len(p) != 2 * N + 1 or p[0] != spec.omega or len(p[-1]) != 0:
        return False
    for k in range(1, N + 1):
        mu, nu, lower = p[2 * k - 2], p[2 * k - 1], p[2 * k]
        if len(mu) != N - k + 1 or len(nu) != N - k + 1 or len(lower) != N - k:
            return False
        if not cointerlaces(mu, nu) or not interlaces(lower, nu):
            return False
        if spec.a_bits[k - 1] == 1 and mu != nu:
            return False
    return True


def gamma_factor(spec: LatticeSpec, i: int) -> Fraction:
    """Correction factor prod_{t=i}^{N} (1 + y_i x_t) for a square level i."""
    y = spec.y[i - 1]
    out = Fraction(1)
    for t in range(i, spec.N + 1):
        out *= 1 + y * spec.x[t - 1]
    return out


def partition_function(spec: LatticeSpec) -> Fraction:
    """Product of the square-level factors times s_omega(x_1, ..., x_N)."""
    z = schur_branching(spec.omega, spec.x)
    for i in spec.square_levels:
        z *= gamma_factor(spec, i)
    return z


def boltzmann_marginal(
    lat: Lattice, row: int, matchings: list[Matching] | None = None
) -> dict[Partition, Fraction]:
    """Exact law of the partition read on the given row (1 = bottom)."""
    if not 1 <= row <= 2 * lat.spec.N + 1:
        raise ValueError("row out of range")
    ms = enumerate_matchings(lat) if matchings is None else matchings
    total = sum((m.weight for m in ms), Fraction(0))
    law: dict[Partition, Fraction] = {}
    for m in ms:
        part = matching_to_sequence(lat, m).partitions[row - 1]
        law[part] = law.get(part, Fraction(0)) + m.weight
    return {p: w / total for p, w in sorted(law.items(), key=lambda kv: kv[0].parts, reverse=True)}


def row_for_level(N: int, kappa: float) -> tuple[int, int]:
    """(row index, partition length L) for the white row carrying mu(L), L = floor((1-kappa)N)."""
    L = math.floor((1 - kappa) * N)
    return 2 * (N - L) + 1, L


# ---------------------------------------------------------------------------
# height functions


@dataclass
class DualGraph:
    centers: dict[int, tuple[Fraction, Fraction]]
    # (face_a, face_b, edge endpoints (white, black), kind, lattice edge index or None)
    dual_edges: list[tuple[int, int, Vertex, Vertex, str, int | None]]
    boundary: set[int]
    around: dict[Vertex, list[tuple[int, int, int]]]  # per lattice vertex: ccw crossings (from, to, dual edge)
    root: int


def _plane_rows(spec: LatticeSpec, lat: Lattice, margin_rows: int = 4, margin_x: int = 10):
    """A finite patch of the full-plane lattice that contains every face touching the lattice."""
    top = lat.top_row
    ymin, ymax = 1 - margin_rows, top + margin_rows
    parity = {1: 1}
    for Y in range(2, ymax + 1):
        if Y % 2 == 0:
            m = Y // 2
            parity[Y] = parity[Y - 1] if _a_of(spec, m) == 1 else 1 - parity[Y - 1]
        else:
            parity[Y] = 1 - parity[Y - 1]
    for Y in range(0, ymin - 1, -1):
        if Y % 2 == 0:
            parity[Y] = 1 - parity[Y + 1]
        else:
            m = (Y + 1) // 2
            parity[Y] = parity[Y + 1] if _a_of(spec, m) == 1 else 1 - parity[Y + 1]
    xs = [v[0] for v in lat.vertices]
    xmin, xmax = min(xs) - margin_x, max(xs) + margin_x
    rows = {}
    for Y in range(ymin, ymax + 1):
        start = xmin if (xmin - parity[Y]) % 2 == 0 else xmin + 1
        rows[Y] = list(range(start, xmax + 1, 2))
    return rows


def _plane_edges(spec: LatticeSpec, rows: dict[int, list[int]]) -> list[tuple[Vertex, Vertex]]:
    edges = []
    ys = sorted(rows)
    present = {Y: set(xs) for Y, xs in rows.items()}
    for Y in ys:
        if Y % 2:
            continue
        m = Y // 2
        for X in rows[Y]:
            b = (X, Y)
            for d in (-1, 1):
                if Y + 1 in present and X + d in present[Y + 1]:
                    edges.append(((X + d, Y + 1), b))
            if Y - 1 in present:
                if _a_of(spec, m) == 1:
                    if X in present[Y - 1]:
                        edges.append(((X, Y - 1), b))
                else:
                    for d in (-1, 1):
                        if X + d in present[Y - 1]:
                            edges.append(((X + d, Y - 1), b))
    return edges


def _faces(edges: list[tuple[Vertex, Vertex]]):
    """Faces of a planar straight-line graph via half-edge traversal (face on the left)."""
    nbrs: dict[Vertex, list[Vertex]] = {}
    for a, b in edges:
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    for v, ns in nbrs.items():
        ns.sort(key=lambda u: math.atan2(u[1] - v[1], u[0] - v[0]))
    pos = {v: {u: k for k, u in enumerate(ns)} for v, ns in nbrs.items()}
    face_of: dict[tuple[Vertex, Vertex], int] = {}
    polygons: list[list[Vertex]] = []
    for a, b in edges:
        for start in ((a, b), (b, a)):
            if start in face_of:
                continue
            fid = len(polygons)
            poly = []
            he = start
            while he not in face_of:
                face_of[he] = fid
                u, v = he
                poly.append(u)
                ns = nbrs[v]
                w = ns[(pos[v][u] - 1) % len(ns)]
                he = (v, w)
            polygons.append(poly)
    return nbrs, face_of, polygons


def _signed_area(poly: list[Vertex]) -> int:
    s = 0
    for (x1, y1), (x2, y2) in zip(poly, poly[1:] + poly[:1]):
        s += x1 * y2 - x2 * y1
    return s


def build_dual(lat: Lattice) -> DualGraph:
    spec = lat.spec
    rows = _plane_rows(spec, lat)
    plane_edges = _plane_edges(spec, rows)
    nbrs, face_of, polygons = _faces(plane_edges)
    in_lattice = set(lat.vertices)
    edge_index = {(e.white, e.black): i for i, e in enumerate(lat.edges)}
    used: dict[int, tuple[Fraction, Fraction]] = {}
    dual_edges = []
    boundary: set[int] = set()
    for w, b in plane_edges:
        if w not in in_lattice and b not in in_lattice:
            continue
        fa, fb = face_of[(w, b)], face_of[(b, w)]
        for f in (fa, fb):
            if _signed_area(polygons[f]) <= 0:
                raise RuntimeError("a face touching the lattice is not bounded in the patch")
            if f not in used:
                poly = polygons[f]
                used[f] = (
                    Fraction(sum(p[0] for p in poly), len(poly)),
                    Fraction(sum(p[1] for p in poly), len(poly)),
                )
        inside = w in in_lattice and b in in_lattice
        if not inside:
            boundary.update((fa, fb))
        dual_edges.append((fa, fb, w, b, _edge_kind(w, b), edge_index.get((w, b)) if inside else None))
    around: dict[Vertex, list[tuple[int, int, int]]] = {v: [] for v in lat.vertices}
    lookup = {}
    for k, (fa, fb, w, b, _, _) in enumerate(dual_edges):
        lookup[(w, b)] = k
        lookup[(b, w)] = k
    for v in lat.vertices:
        for u in nbrs[v]:
            # turning counterclockwise about v crosses v-u from the face right of v->u to the face left of it
            around[v].append((face_of[(u, v)], face_of[(v, u)], lookup[(v, u)]))
    root = min(used, key=lambda f: used[f])
    return DualGraph(used, dual_edges, boundary, around, root)


def crossing_increment(
    center_from: tuple[Fraction, Fraction],
    center_to: tuple[Fraction, Fraction],
    white: Vertex,
    kind: str,
    present: bool,
) -> int:
    """Height change along a dual edge crossing one lattice edge."""
    dx, dy = center_to[0] - center_from[0], center_to[1] - center_from[1]
    vx, vy = white[0] - center_from[0], white[1] - center_from[1]
    cross = dx * vy - dy * vx
    if cross == 0:
        raise RuntimeError("dual edge passes through a white vertex")
    white_left = cross > 0
    if kind == "vertical":
        step = 2
        return (-step if white_left else step) if present else (step if white_left else -step)
    if present:
        return -3 if white_left else 3
    return 1 if white_left else -1


@dataclass
class HeightField:
    values: dict[tuple[Fraction, Fraction], int]
    face_sums: dict[Vertex, int]
    boundary: dict[tuple[Fraction, Fraction], int]


def height_function(lat: Lattice, m: Matching, dual: DualGraph | None = None) -> HeightField:
    dual = build_dual(lat) if dual is None else dual
    present = set(m.edges)

    def inc(k: int, forward: bool) -> int:
        fa, fb, w, _, kind, ei = dual.dual_edges[k]
        is_present = ei is not None and ei in present
        a, b = (fa, fb) if forward else (fb, fa)
        return crossing_increment(dual.centers[a], dual.centers[b], w, kind, is_present)

    adj: dict[int, list[tuple[int, int, bool]]] = {f: [] for f in dual.centers}
    for k, (fa, fb, *_rest) in enumerate(dual.dual_edges):
        adj[fa].append((fb, k, True))
        adj[fb].append((fa, k, False))
    h = {dual.root: 0}
    queue = deque([dual.root])
    while queue:
        f = queue.popleft()
        for g, k, fwd in adj[f]:
            if g not in h:
                h[g] = h[f] + inc(k, fwd)
                queue.append(g)
    for k, (fa, fb, *_rest) in enumerate(dual.dual_edges):
        if h[fb] - h[fa] != inc(k, True):
            raise RuntimeError("height increments are inconsistent")
    sums = {}
    for v, crossings in dual.around.items():
        total = 0
        for fa, fb, k in crossings:
            forward = dual.dual_edges[k][0] == fa
            total += inc(k, forward)
        sums[v] = total
    values = {dual.centers[f]: hv for f, hv in h.items()}
    bnd = {dual.centers[f]: h[f] for f in dual.boundary}
    return HeightField(values, sums, bnd)


def left_edge_heights(lat: Lattice, field_: HeightField) -> list[int]:
    """Height just left of the leftmost vertex of each white row 1, 3, ..., in order."""
    out = []
    for row in range(1, lat.top_row + 1, 2):
        if row not in lat.rows:
            break
        target = (Fraction(lat.rows[row][0] - 1), Fraction(row))
        best = min(
            field_.values,
            key=lambda c: ((c[0] - target[0]) ** 2 + (c[1] - target[1]) ** 2, c),
        )
        out.append(field_.values[best])
    return out
