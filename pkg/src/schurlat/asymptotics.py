"""Moments, density and height profile of the limit measure at level kappa.

The model is described by the limit measures m_1..m_n of the weight classes and by
the constants c_r = 1/(y_r x_1) of the square rows in one period.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .limitmeasure import (
    IntervalMeasure,
    class_measures,
    continue_inverse,
    h_function,
    h_prime,
    polish_roots,
)
from .partitions import scaled_levels
from .series import Laurent

DEFAULT_NODES = 2048


@dataclass(frozen=True)
class ModelAsymptotics:
    n: int
    measures: tuple[IntervalMeasure, ...]
    c_values: tuple[tuple[Fraction, int], ...] = ()  # distinct c_r with multiplicity
    levels: tuple[Fraction, ...] = field(default=(), compare=False)  # scaled parts r_1 > r_2 > ...
    top: Fraction = field(default=Fraction(1), compare=False)  # right end of the boundary support
    blocks: tuple[tuple[Fraction, Fraction], ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if len(self.measures) != self.n:
            raise ValueError("need one measure per weight class")
        if any(c <= 0 for c, _ in self.c_values):
            raise ValueError("c_r = 1/(y_r x_1) must be positive")

    @classmethod
    def from_blocks(
        cls,
        scaled_blocks: Sequence[tuple[Fraction, Fraction]],
        n: int,
        x1: Fraction = Fraction(1),
        square_weights: Sequence[Fraction] = (),
    ) -> "ModelAsymptotics":
        counts: dict[Fraction, int] = {}
        for y in square_weights:
            c = 1 / (Fraction(y) * Fraction(x1))
            counts[c] = counts.get(c, 0) + 1
        levels, _ = scaled_levels(scaled_blocks)
        return cls(
            n,
            tuple(class_measures(scaled_blocks, n)),
            tuple(sorted(counts.items())),
            tuple(levels),
            Fraction(scaled_blocks[-1][1]),
            tuple((Fraction(a), Fraction(b)) for a, b in scaled_blocks),
        )

    @property
    def square_count(self) -> int:
        """l = |I_2 cap [n]|."""
        return sum(k for _, k in self.c_values)

    @property
    def hexagon_count(self) -> int:
        """r = n - |I_2 cap [n]|."""
        return self.n - self.square_count

    def c_list(self, i: int) -> list[tuple[float, int]]:
        return [(float(c), k) for c, k in self.c_values] if i == 1 else []


def _check_kappa(kappa: float) -> None:
    if not 0 < float(kappa) < 1:
        raise ValueError("kappa must lie in (0, 1)")


def q_prime(model: ModelAsymptotics, i: int, z: complex, kappa: float) -> complex:
    """Q'_{i,kappa}(z) from H'_{m_i}, the -(n-i)/z term and (for i = 1) the square-row terms."""
    _check_kappa(kappa)
    z = complex(z)
    n = model.n
    if z == 0 or any(abs(z + c) == 0 for c, _ in model.c_list(i)):
        raise ValueError(f"z={z} is singular")
    val = h_prime(model.measures[i - 1], z) - (n - i) / z
    val += kappa * sum(k / (z + c) for c, k in model.c_list(i))
    return val / ((1 - kappa) * n)


def q_function(model: ModelAsymptotics, i: int, z: complex, kappa: float) -> complex:
    _check_kappa(kappa)
    z = complex(z)
    n = model.n
    val = h_function(model.measures[i - 1], z) - (n - i) * cmath.log(z)
    val += kappa * sum(k * cmath.log((1 + z / c) / (1 + 1 / c)) for c, k in model.c_list(i))
    return val / ((1 - kappa) * n)


def _f_from_t(model: ModelAsymptotics, i: int, z: np.ndarray, t: np.ndarray, kappa: float) -> np.ndarray:
    """z Q' + (n-i)/n + z/(n(z-1)) with H'(z) = t/z - 1/(z-1)."""
    n = model.n
    inner = t - z / (z - 1) - (n - i)
    for c, k in model.c_list(i):
        inner = inner + kappa * k * z / (z + c)
    return inner / ((1 - kappa) * n) + (n - i) / n + z / (n * (z - 1))


def f_function(model: ModelAsymptotics, i: int, z: complex, kappa: float) -> complex:
    z = complex(z)
    return z * q_prime(model, i, z, kappa) + (model.n - i) / model.n + z / (model.n * (z - 1))


def _psi_float(m: IntervalMeasure, t: complex) -> complex:
    out = 1 + 0j
    for a, b in m.intervals:
        out *= (t - float(a)) / (t - float(b))
    return out


def singular_points(model: ModelAsymptotics) -> list[complex]:
    """0, the points -c_r and the branch images Psi_i(critical points), Psi_i(0)."""
    pts: list[complex] = [0j] + [complex(-c) for c, _ in model.c_values]
    for m in model.measures:
        num = np.poly1d([1.0])
        den = np.poly1d([1.0])
        for a, b in m.intervals:
            num = num * np.poly1d([1.0, -float(a)])
            den = den * np.poly1d([1.0, -float(b)])
        crit = np.polyder(num) * den - num * np.polyder(den)
        for tc in np.roots(crit.coeffs) if crit.order > 0 else []:
            pts.append(_psi_float(m, tc))
        if all(float(b) != 0 for b in m.gammas):
            pts.append(_psi_float(m, 0j))
    return pts


def contour_radius(model: ModelAsymptotics) -> float:
    dist = min(abs(p - 1) for p in singular_points(model))
    return min(0.5, 0.4 * dist)


@dataclass(frozen=True)
class MomentResult:
    value: float
    imag: float
    radius: float
    nodes: int


def moment_detail(
    model: ModelAsymptotics, p: int, kappa: float, nodes: int = DEFAULT_NODES, radius: float | None = None
) -> MomentResult:
    """Trapezoid rule for the contour integral over |z - 1| = radius."""
    _check_kappa(kappa)
    if p < 0:
        raise ValueError("p must be nonnegative")
    r = contour_radius(model) if radius is None else radius
    for s in singular_points(model):
        if abs(abs(s - 1) - r) < 1e-9:
            raise ValueError(f"contour hits a singularity; try radius {0.4 * abs(s - 1):.6g}")
    theta = 2 * np.pi * np.arange(nodes) / nodes
    z = 1 + r * np.exp(1j * theta)
    w = np.log(z)
    total = 0j
    for i in range(1, model.n + 1):
        zeta = continue_inverse(model.measures[i - 1], w)
        t = 1 / zeta
        F = _f_from_t(model, i, z, t, kappa)
        total += np.mean(F ** (p + 1) * (z - 1) / z)
    total /= p + 1
    return MomentResult(float(total.real), float(total.imag), r, nodes)


def moment(model: ModelAsymptotics, p: int, kappa: float, nodes: int = DEFAULT_NODES, radius: float | None = None) -> float:
    res = moment_detail(model, p, kappa, nodes, radius)
    if abs(res.imag) > 1e-9 * max(1.0, abs(res.value)):
        raise ArithmeticError(f"moment has imaginary residue {res.imag:.3g}")
    return res.value


def moment_exact(model: ModelAsymptotics, p: int, kappa: Fraction) -> Fraction:
    """The same contour integral evaluated exactly as a residue at t = infinity.

    Substituting z = Psi_i(t) maps the small circle about z = 1 to a large clockwise
    loop in t, so the integral is minus the coefficient of 1/t of
    F(Psi(t))^(p+1) Psi'(t)/Psi(t), expanded in s = 1/t with rational arithmetic.
    """
    kappa = Fraction(kappa)
    n = model.n
    order = p + 4
    total = Fraction(0)
    for i in range(1, n + 1):
        m = model.measures[i - 1]
        psi = Laurent.const(1, order)
        for a, b in m.intervals:
            psi = psi * Laurent.make(0, [1, -a] + [0] * order) / Laurent.make(0, [1, -b] + [0] * order)
        t = Laurent.make(-1, [1] + [0] * (order + 1))
        z = psi
        zm1 = (z - 1).normalized()
        ratio = z / zm1
        inner = t - ratio - (n - i)
        for c, k in model.c_values if i == 1 else ():
            inner = inner + (z / (z + c)) * (kappa * k)
        F = inner / ((1 - kappa) * n) + Fraction(n - i, n) + ratio / n
        # dlog Psi/dt = sum_k (gamma^k - beta^k) ... expanded: -s^2 d/ds log Psi(s)
        coeffs = [Fraction(0)] * (order + 3)
        for k in range(1, order + 2):
            ck = sum((b**k - a**k for a, b in m.intervals), Fraction(0))
            # log Psi(s) has coefficient ck/k at s^k; -s^2 d/ds gives -ck s^(k+1)
            coeffs[k + 1] -= ck
        dlog = Laurent.make(0, coeffs)
        g = (F ** (p + 1)) * dlog
        total += -g.coeff(1)
    return total / (p + 1)


# ---------------------------------------------------------------------------
# root system for the density


@dataclass
class RootSample:
    x: float
    roots: np.ndarray
    pairs: int
    chosen: complex | None
    density: float
    flagged: bool


def _stack(polys: list[np.poly1d]) -> np.ndarray:
    width = max(len(p.coeffs) for p in polys)
    return np.array([np.concatenate([np.zeros(width - len(p.coeffs)), p.coeffs]) for p in polys])


class RootSystem:
    """Polynomial form of z = G_i(z, x) for one class at a fixed level kappa."""

    def __init__(self, model: ModelAsymptotics, i: int, kappa: float):
        _check_kappa(kappa)
        self.model, self.i, self.kappa = model, i, float(kappa)
        n = model.n
        z = np.poly1d([1.0, 0.0])
        one = np.poly1d([1.0])
        pc = one
        for c, _ in model.c_list(i):
            pc = pc * np.poly1d([1.0, c])
        self.B = np.poly1d([1.0, -1.0]) * pc
        extra = self.kappa * z * pc
        for c, k in model.c_list(i):
            others = one
            for c2, _ in model.c_list(i):
                if c2 != c:
                    others = others * np.poly1d([1.0, c2])
            extra = extra - self.kappa * k * z * np.poly1d([1.0, -1.0]) * others
        self.extra = extra
        m = model.measures[i - 1]
        self.betas = [float(v) for v in m.betas]
        self.gammas = [float(v) for v in m.gammas]
        self.offset = self.kappa * (n - i)
        self.slope = n * (1 - self.kappa)
        self._full: np.ndarray | None = None
        self._defl: np.ndarray | None = None

    def escape_points(self) -> list[float]:
        """Values of x where a root passes through infinity.

        The leading coefficient of the deflated polynomial is prod_k (alpha + e - gamma_k),
        with e the ratio of the leading coefficients of the x-free part of A and of B.
        """
        e = self.extra.coeffs[0] / self.B.coeffs[0] if self.extra.order == self.B.order else 0.0
        return sorted((g - e - self.offset) / self.slope for g in self.gammas)

    def zero_points(self) -> list[float]:
        """Values of x where a root passes through 0, namely alpha = beta_k."""
        return sorted((b - self.offset) / self.slope for b in self.betas)

    def crossing_points(self) -> list[float]:
        """Where a frozen stretch can switch between densities 0 and 1."""
        return sorted(self.escape_points() + self.zero_points())

    def alpha(self, x: float) -> float:
        return float(self.slope * x + self.offset)

    def _alpha_expansion(self, shifts: list[float]) -> list[np.poly1d]:
        """Coefficients (in alpha) of prod_k (alpha B + extra - shift_k B)."""
        terms = [np.poly1d([1.0])]
        for sh in shifts:
            y = self.extra - sh * self.B
            nxt = [np.poly1d([0.0])] * (len(terms) + 1)
            for j, t in enumerate(terms):
                nxt[j] = nxt[j] + t * y
                nxt[j + 1] = nxt[j + 1] + t * self.B
            terms = nxt
        return terms

    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Rows j hold the z-coefficients (highest first) of alpha^j in E and in E/(z-1)."""
        if getattr(self, "_full", None) is None:
            z = np.poly1d([1.0, 0.0])
            left = self._alpha_expansion(self.gammas)
            right = self._alpha_expansion(self.betas)
            full = [z * g - b for g, b in zip(left, right)]
            defl = [np.poly1d(np.polydiv(e, np.poly1d([1.0, -1.0]))[0]) for e in full]
            self._full = _stack(full)
            self._defl = _stack(defl)
        return self._full, self._defl

    def polynomial(self, x: float, deflate: bool = True) -> np.poly1d:
        full, defl = self._tables()
        table = defl if deflate else full
        powers = self.alpha(x) ** np.arange(table.shape[0])
        return np.poly1d(powers @ table)

    def roots(self, x: float) -> np.ndarray:
        coeffs = np.trim_zeros(self.polynomial(x).coeffs, "f")
        if len(coeffs) < 2:
            return np.array([], dtype=complex)
        scale = np.max(np.abs(coeffs))
        # a root escapes through infinity where the leading coefficient cancels
        while len(coeffs) > 1 and abs(coeffs[0]) < 1e-13 * scale:
            coeffs = coeffs[1:]
        if len(coeffs) < 2:
            return np.array([], dtype=complex)
        return polish_roots(coeffs, np.roots(coeffs))

    def dz_dx(self, x: float, z: complex) -> complex:
        full, _ = self._tables()
        a = self.alpha(x)
        k = np.arange(full.shape[0])
        vals = np.array([np.polyval(row, z) for row in full])
        Ex = self.slope * np.sum(k[1:] * a ** (k[1:] - 1) * vals[1:])
        Ez = np.polyval(np.polyder(np.poly1d(a ** k @ full)), z)
        with np.errstate(divide="ignore", invalid="ignore"):
            return -Ex / Ez

    def sample(self, x: float, previous: complex | None = None, tol: float = 1e-9) -> RootSample:
        rts = self.roots(x)
        scale = np.maximum(1.0, np.abs(rts))
        imag = rts.imag / scale
        lower = rts[imag < -tol]
        pairs = int(np.sum(imag > tol))
        flagged = False
        if len(lower) >= 1:
            if len(lower) > 1:
                flagged = previous is None
                ref = previous if previous is not None else lower[0]
                chosen = complex(lower[np.argmin(np.abs(lower - ref))])
            else:
                chosen = complex(lower[0])
            dens = -cmath.phase(chosen) / math.pi
        else:
            real = rts[np.abs(imag) <= tol].real
            cands = [r for r in real if self.dz_dx(x, r).real < 0]
            if len(cands) != 1:
                flagged = True
                if previous is not None and len(real):
                    cands = [real[np.argmin(np.abs(real - previous))]]
                elif not cands:
                    cands = list(real[:1])
            chosen = complex(cands[0]) if cands else None
            dens = 1.0 if (chosen is not None and chosen.real < 0) else 0.0
        return RootSample(x, rts, pairs, chosen, dens, flagged)


@lru_cache(maxsize=4096)
def root_system(model: ModelAsymptotics, i: int, kappa: float) -> RootSystem:
    return RootSystem(model, i, float(kappa))


@dataclass
class DensityProfile:
    kappa: float
    x: np.ndarray
    f: np.ndarray
    flagged: np.ndarray
    pairs: np.ndarray  # max conjugate pairs over classes at each sample


def support_bound(model: ModelAsymptotics, kappa: float) -> float:
    """Right end of an interval certain to contain the support of the level-kappa measure."""
    grow = kappa * model.square_count / model.n
    return (float(model.top) - kappa + grow) / (1 - kappa)


def density_profile(model: ModelAsymptotics, kappa: float, xs: Sequence[float] | None = None, points: int = 2000) -> DensityProfile:
    _check_kappa(kappa)
    if xs is None:
        xs = np.linspace(0.0, support_bound(model, kappa), points)
    xs = np.asarray(xs, dtype=float)
    systems = [root_system(model, i, kappa) for i in range(1, model.n + 1)]
    f = np.zeros(len(xs))
    flagged = np.zeros(len(xs), dtype=bool)
    pairs = np.zeros(len(xs), dtype=int)
    prev: list[complex | None] = [None] * model.n
    # sweep from the right, where every branch is close to z = 1
    for k in reversed(range(len(xs))):
        for ci, sysm in enumerate(systems):
            s = sysm.sample(xs[k], prev[ci])
            prev[ci] = s.chosen
            f[k] += s.density
            flagged[k] |= s.flagged
            pairs[k] = max(pairs[k], s.pairs)
    return DensityProfile(float(kappa), xs, f, flagged, pairs)


class LevelMeasure:
    """Accurate integrals against the level-kappa density, class by class.

    Each class density is 0 or 1 on frozen stretches and smooth inside liquid
    stretches, with square-root behaviour at the edges.  Edges are located by
    bisection and liquid stretches are integrated by Gauss-Legendre after the
    substitution x = (a+b)/2 - (b-a)/2 cos(theta).
    """

    def __init__(self, model: ModelAsymptotics, kappa: float, scan: int = 1000, nodes: int = 192):
        _check_kappa(kappa)
        self.model, self.kappa = model, float(kappa)
        self.hi = support_bound(model, kappa)
        self.systems = [root_system(model, i, kappa) for i in range(1, model.n + 1)]
        self.gl = np.polynomial.legendre.leggauss(nodes)
        self._cumulative: dict = {}
        self.pieces: list[list[tuple[float, float, str, float]]] = []
        for sysm in self.systems:
            cuts = [x for x in sysm.crossing_points() if 0.0 < x < self.hi]
            bounds = [0.0] + cuts + [self.hi]
            edges = [0.0]
            for lo, hi in zip(bounds, bounds[1:]):
                if hi - lo < 1e-12:
                    continue
                k = max(3, int(scan * (hi - lo) / self.hi))
                eps = 1e-9 * (hi - lo)
                xs = np.linspace(lo + eps, hi - eps, k)
                state = [self._state(sysm, x) for x in xs]
                for j in range(1, len(xs)):
                    if state[j] != state[j - 1]:
                        edges.append(self._bisect(sysm, xs[j - 1], xs[j], state[j - 1]))
                if hi < self.hi:
                    edges.append(hi)
            edges.append(self.hi)
            pieces = []
            for a, b in zip(edges, edges[1:]):
                mid = 0.5 * (a + b)
                s = sysm.sample(mid)
                if s.pairs > 0:
                    pieces.append((a, b, "liquid", float("nan")))
                else:
                    pieces.append((a, b, "frozen", s.density))
            merged = [pieces[0]]
            for a, b, kind, val in pieces[1:]:
                pa, _, pkind, pval = merged[-1]
                if kind == pkind and (kind == "liquid" or val == pval):
                    merged[-1] = (pa, b, kind, pval)
                else:
                    merged.append((a, b, kind, val))
            self.pieces.append(merged)

    @staticmethod
    def _state(sysm: RootSystem, x: float) -> float | str:
        """'liquid', or the constant value of a frozen stretch.

        Frozen stretches with values 0 and 1 can abut where a root passes through infinity.
        """
        s = sysm.sample(x)
        return "liquid" if s.pairs > 0 else s.density

    @classmethod
    def _bisect(cls, sysm: RootSystem, a: float, b: float, left_state) -> float:
        for _ in range(60):
            mid = 0.5 * (a + b)
            if cls._state(sysm, mid) == left_state:
                a = mid
            else:
                b = mid
        return 0.5 * (a + b)

    def _class_density(self, ci: int, x: float) -> float:
        return self.systems[ci].sample(x).density

    def _liquid_integral(self, ci: int, a: float, b: float, g) -> float:
        if b <= a:
            return 0.0
        u, w = self.gl
        theta = (u + 1) * np.pi / 2
        xs = (a + b) / 2 - (b - a) / 2 * np.cos(theta)
        jac = (b - a) / 2 * np.sin(theta) * np.pi / 2
        vals = np.array([self._class_density(ci, x) for x in xs])
        return float(np.sum(w * vals * g(xs) * jac))

    def integrate(self, g, upper: float | None = None) -> float:
        """Integral of g(x) f(x) over [0, upper]; g must accept numpy arrays."""
        hi = self.hi if upper is None else min(max(upper, 0.0), self.hi)
        total = 0.0
        for ci, pieces in enumerate(self.pieces):
            for a, b, kind, val in pieces:
                if a >= hi:
                    break
                b = min(b, hi)
                if kind == "frozen":
                    if val:
                        u, w = self.gl
                        xs = (a + b) / 2 + (b - a) / 2 * u
                        total += val * float(np.sum(w * g(xs))) * (b - a) / 2
                else:
                    total += self._liquid_integral(ci, a, b, g)
        return total

    def moment(self, p: int) -> float:
        return self.integrate(lambda x: x**p)

    def _antiderivative(self, ci: int, a: float, b: float):
        """Chebyshev antiderivative of the density in theta, where x = (a+b)/2 - (b-a)/2 cos(theta)."""
        key = (ci, a, b)
        if key not in self._cumulative:
            deg = len(self.gl[0])

            def integrand(s: np.ndarray) -> np.ndarray:
                theta = (s + 1) * np.pi / 2
                xs = (a + b) / 2 - (b - a) / 2 * np.cos(theta)
                vals = np.array([self._class_density(ci, x) for x in xs])
                return vals * (b - a) / 2 * np.sin(theta) * np.pi / 2

            self._cumulative[key] = np.polynomial.Chebyshev.interpolate(integrand, deg).integ(lbnd=-1)
        return self._cumulative[key]

    def cdf(self, u: float) -> float:
        """Mass of [0, u]; liquid stretches reuse one interpolant, so repeated calls are cheap."""
        total = 0.0
        for ci, pieces in enumerate(self.pieces):
            for a, b, kind, val in pieces:
                if a >= u:
                    break
                if kind == "frozen":
                    total += val * (min(b, u) - a)
                elif u >= b:
                    total += float(self._antiderivative(ci, a, b)(1.0))
                else:
                    theta = np.arccos(np.clip(((a + b) / 2 - u) / ((b - a) / 2), -1.0, 1.0))
                    total += float(self._antiderivative(ci, a, b)(2 * theta / np.pi - 1))
        return total

    def liquid_edges(self) -> list[list[tuple[float, float]]]:
        return [[(a, b) for a, b, kind, _ in pieces if kind == "liquid"] for pieces in self.pieces]


def height_limit(model: ModelAsymptotics, chi: float, kappa: float, level: LevelMeasure | None = None) -> float:
    """2 (2 (1-kappa) CDF((chi - kappa r/(2n))/(1-kappa)) - 2 chi + 2 kappa)."""
    level = LevelMeasure(model, kappa) if level is None else level
    n, r = model.n, model.hexagon_count
    u = (chi - kappa * r / (2 * n)) / (1 - kappa)
    return 2 * (2 * (1 - kappa) * level.cdf(u) - 2 * chi + 2 * kappa)


@dataclass(frozen=True)
class TrendRow:
    N: int
    L: int
    exact: Fraction
    limit: float

    @property
    def gap(self) -> float:
        return abs(float(self.exact) - self.limit)


def finite_moment(spec, kappa: float, p: int = 1) -> tuple[int, Fraction]:
    """Exact E[int x^p dm(mu)] for the partition mu at level kappa of a finite lattice.

    The law is summed over interlacing sequences, each weighted by its matching.
    """
    from .lattice import build_lattice, enumerate_sequences, matching_weight, row_for_level, sequence_to_matching

    lat = build_lattice(spec)
    row, L = row_for_level(spec.N, kappa)
    if L < 1:
        raise ValueError("level leaves no parts")
    total = Fraction(0)
    acc = Fraction(0)
    for seq in enumerate_sequences(spec):
        w = matching_weight(lat, sequence_to_matching(lat, seq).edges)
        parts = seq.partitions[row - 1].padded(L)
        m = sum((Fraction(parts[j] + L - 1 - j, L) ** p for j in range(L)), Fraction(0)) / L
        total += w
        acc += w * m
    return L, acc / total


def finite_size_trend(model: ModelAsymptotics, specs: Sequence, kappa: float, p: int = 1) -> tuple[list[TrendRow], bool]:
    """Exact finite-N moments against the limit; the flag says whether the gaps shrink monotonically.

    Reported only: convergence is an asymptotic statement and small lattices lie outside its regime.
    """
    limit = moment(model, p, kappa)
    rows = []
    for spec in sorted(specs, key=lambda s: s.N):
        L, ex = finite_moment(spec, kappa, p)
        rows.append(TrendRow(spec.N, L, ex, limit))
    monotone = all(b.gap <= a.gap for a, b in zip(rows, rows[1:]))
    return rows, monotone
