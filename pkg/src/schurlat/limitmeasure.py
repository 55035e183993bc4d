"""Limit measures of the weight classes and their transforms.

Each limit measure has density 1 on a finite union of intervals [beta_k, gamma_k].
Its Stieltjes transform is log prod (t - beta_k)/(t - gamma_k), which turns every
inverse-transform question into polynomial root finding.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .partitions import index_sets_disjoint, scaled_index_sets
from .series import compose, power_series_reversion

SERIES_RADIUS = 1e-3


class BranchError(ArithmeticError):
    """Root continuation lost track of the analytic branch."""


@dataclass(frozen=True)
class IntervalMeasure:
    """Density-1 measure on disjoint, increasing intervals with exact endpoints."""

    intervals: tuple[tuple[Fraction, Fraction], ...]
    merged: tuple[Fraction, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        ivs = tuple((Fraction(a), Fraction(b)) for a, b in self.intervals)
        object.__setattr__(self, "intervals", ivs)
        if not ivs:
            raise ValueError("empty measure")
        for a, b in ivs:
            if not a < b:
                raise ValueError(f"interval [{a}, {b}] is empty")
        for (_, b), (a, _) in zip(ivs, ivs[1:]):
            if not b < a:
                raise ValueError("intervals must be strictly increasing and separated")

    @property
    def betas(self) -> list[Fraction]:
        return [a for a, _ in self.intervals]

    @property
    def gammas(self) -> list[Fraction]:
        return [b for _, b in self.intervals]

    @property
    def mass(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), Fraction(0))

    def moment(self, k: int) -> Fraction:
        return sum(((b ** (k + 1) - a ** (k + 1)) / (k + 1) for a, b in self.intervals), Fraction(0))

    def contains(self, t: complex, tol: float = 0.0) -> bool:
        if abs(complex(t).imag) > tol:
            return False
        x = complex(t).real
        return any(float(a) - tol <= x <= float(b) + tol for a, b in self.intervals)


def merge_intervals(raw: Sequence[tuple[Fraction, Fraction]]) -> IntervalMeasure:
    ivs = sorted((Fraction(a), Fraction(b)) for a, b in raw if b > a)
    out: list[list[Fraction]] = []
    joins: list[Fraction] = []
    for a, b in ivs:
        if out and a <= out[-1][1]:
            if a < out[-1][1]:
                raise ValueError("intervals overlap")
            joins.append(a)
            out[-1][1] = b
        else:
            out.append([a, b])
    return IntervalMeasure(tuple((a, b) for a, b in out), tuple(joins))


def limit_measure(
    i: int,
    scaled_blocks: Sequence[tuple[Fraction, Fraction]],
    n: int,
    j_sets: Sequence[Sequence[int]] | None = None,
) -> IntervalMeasure:
    """Limit counting measure of the i-th weight class (1-based).

    With d_i = min J_i and D_i = d_{i+1} - d_i - 1, for k = 0..D_i:
      beta_{i,k}  = n * r_{d_i + k} + n - i + 1 - n * sum_{l = s-d_i-k+1}^{s-d_i+1} (b_l - a_l)
      gamma_{i,k} = n * r_{d_i + k} + n - i + 1 - n * sum_{l = s-d_i-k+2}^{s-d_i+1} (b_l - a_l)
    where r_t = a_1 + sum_{l=2}^{s-t+1} (a_l - b_{l-1}) is the scaled t-th largest part.
    """
    blocks = [(Fraction(a), Fraction(b)) for a, b in scaled_blocks]
    s = len(blocks)
    if sum((b - a for a, b in blocks), Fraction(0)) != 1:
        raise ValueError("scaled blocks must have total length 1")
    sets = scaled_index_sets(n, blocks) if j_sets is None else [list(js) for js in j_sets]
    if len(sets) != n or not index_sets_disjoint(sets):
        raise ValueError(f"index sets {sets} overlap: the classes do not separate the boundary blocks")
    if not 1 <= i <= n:
        raise ValueError("class index out of range")
    d = [min(js) for js in sets] + [s + 1]
    di = d[i - 1]
    Di = d[i] - di - 1
    a = [None] + [blk[0] for blk in blocks]  # 1-based
    b = [None] + [blk[1] for blk in blocks]

    def level(t: int) -> Fraction:
        return a[1] + sum((a[l] - b[l - 1] for l in range(2, s - t + 2)), Fraction(0))

    def lengths(lo: int, hi: int) -> Fraction:
        return sum((b[l] - a[l] for l in range(lo, hi + 1)), Fraction(0))

    raw = []
    for k in range(Di + 1):
        base = n * level(di + k) + n - i + 1
        raw.append((base - n * lengths(s - di - k + 1, s - di + 1), base - n * lengths(s - di - k + 2, s - di + 1)))
    return merge_intervals(raw)


def class_measures(scaled_blocks: Sequence[tuple[Fraction, Fraction]], n: int) -> list[IntervalMeasure]:
    return [limit_measure(i, scaled_blocks, n) for i in range(1, n + 1)]


# ---------------------------------------------------------------------------
# transforms


def _poly_from_roots(roots: Sequence[Fraction]) -> list[Fraction]:
    """Monic polynomial coefficients, highest degree first."""
    out = [Fraction(1)]
    for r in roots:
        nxt = out + [Fraction(0)]
        for k in range(1, len(nxt)):
            nxt[k] -= r * out[k - 1]
        out = nxt
    return out


@dataclass(frozen=True)
class TransformContext:
    measure: IntervalMeasure
    numerator: tuple[Fraction, ...]  # prod (t - beta), highest degree first
    denominator: tuple[Fraction, ...]  # prod (t - gamma)

    @classmethod
    def of(cls, m: IntervalMeasure) -> "TransformContext":
        return cls(m, tuple(_poly_from_roots(m.betas)), tuple(_poly_from_roots(m.gammas)))

    @property
    def betas(self) -> np.ndarray:
        return np.array([float(v) for v in self.measure.betas])

    @property
    def gammas(self) -> np.ndarray:
        return np.array([float(v) for v in self.measure.gammas])


def stieltjes(m: IntervalMeasure, t: complex) -> complex:
    """Integral of m(ds)/(t - s), as a sum of principal logarithms per interval."""
    t = complex(t)
    if m.contains(t):
        raise ValueError(f"t={t} lies in the support")
    return sum(cmath.log(t - float(a)) - cmath.log(t - float(b)) for a, b in m.intervals)


def s_transform(m: IntervalMeasure, z: complex) -> complex:
    """S_m(z) = St_m(1/z) = sum log(1 - beta z) - log(1 - gamma z), analytic near z = 0."""
    z = complex(z)
    return sum(cmath.log(1 - float(a) * z) - cmath.log(1 - float(b) * z) for a, b in m.intervals)


def _z_polys(m: IntervalMeasure) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients (highest first) of prod (1 - beta z) and prod (1 - gamma z)."""
    pb = np.poly1d([1.0])
    pg = np.poly1d([1.0])
    for a, b in m.intervals:
        pb = pb * np.poly1d([-float(a), 1.0])
        pg = pg * np.poly1d([-float(b), 1.0])
    return pb.coeffs, pg.coeffs


def polish_roots(coeffs: np.ndarray, roots: np.ndarray, iters: int = 3) -> np.ndarray:
    d = np.polyder(coeffs)
    out = roots.astype(complex).copy()
    for _ in range(iters):
        fv = np.polyval(coeffs, out)
        dv = np.polyval(d, out)
        ok = np.abs(dv) > 0
        out[ok] = out[ok] - fv[ok] / dv[ok]
    return out


def _roots_at(pb: np.ndarray, pg: np.ndarray, w: complex) -> np.ndarray:
    n = max(len(pb), len(pg))
    pb = np.concatenate([np.zeros(n - len(pb)), pb])
    pg = np.concatenate([np.zeros(n - len(pg)), pg])
    coeffs = pb.astype(complex) - cmath.exp(w) * pg
    nz = np.flatnonzero(np.abs(coeffs) > 1e-14 * np.max(np.abs(coeffs)))
    coeffs = coeffs[nz[0]:]
    if len(coeffs) < 2:
        return np.array([], dtype=complex)
    return polish_roots(coeffs, np.roots(coeffs))


def _separation(roots: np.ndarray, z: complex) -> float:
    """Distance from z to the nearest root other than the one at z."""
    d = np.sort(np.abs(roots - z))
    return float(d[1]) if len(d) > 1 else np.inf


def continue_inverse(
    m: IntervalMeasure,
    path: Sequence[complex],
    z0: complex = 0.0,
    w0: complex = 0.0,
    slope0: complex = 1.0,
    min_step: float = 1e-12,
) -> np.ndarray:
    """Follow the root of prod(1 - beta z) = e^w prod(1 - gamma z) along a polyline of w values.

    Starts from the known root z0 at w0 (the defaults describe the branch through the
    origin, where dz/dw = 1).  Each segment is walked with step halving; the accepted
    root is the one nearest the linear prediction, and a step is rejected when the
    runner-up root is closer than ten times the accepted distance.  Steps are also
    capped so the predicted move stays below a fifth of the distance from the current
    root to its nearest competitor; without the cap a long first step can land next to
    the wrong root and still pass the ratio test.
    """
    pb, pg = _z_polys(m)
    out = np.empty(len(path), dtype=complex)
    z_prev, w_prev, slope = complex(z0), complex(w0), complex(slope0)
    sep = _separation(_roots_at(pb, pg, w_prev), z_prev)
    for k, w_target in enumerate(path):
        start = w_prev
        seg = complex(w_target) - start
        frac, h = 0.0, 1.0
        while frac < 1.0:
            h = min(h, 1.0 - frac)
            reach = abs(slope) * h * abs(seg)
            if reach > 0.2 * sep:
                h *= 0.2 * sep / reach
            w = start + seg * (frac + h)
            pred = z_prev + slope * (w - w_prev)
            roots = _roots_at(pb, pg, w)
            if len(roots) == 0:
                raise BranchError("degenerate polynomial along the path")
            dist = np.abs(roots - pred)
            order = np.argsort(dist)
            near = dist[order[0]]
            second = dist[order[1]] if len(roots) > 1 else np.inf
            if second <= 10 * near:
                h /= 2
                if h * abs(seg) < min_step:
                    raise BranchError(f"ambiguous root continuation near w={w}")
                continue
            z_new = complex(roots[order[0]])
            if w != w_prev:
                slope = (z_new - z_prev) / (w - w_prev)
            z_prev, w_prev = z_new, w
            sep = _separation(roots, z_new)
            frac += h
            h = min(1.0, 2 * h)
        out[k] = z_prev
    return out


def s_transform_inverse(m: IntervalMeasure, w: complex) -> complex:
    """Root z of S_m(z) = w on the branch with z(0) = 0, continued along the segment from 0."""
    w = complex(w)
    if w == 0:
        return 0j
    return complex(continue_inverse(m, [w])[0])


# ---------------------------------------------------------------------------
# series oracles near the origin


def s_series(m: IntervalMeasure, order: int) -> list[Fraction]:
    """Coefficients of S_m(z) = z + M_1 z^2 + M_2 z^3 + ..."""
    return [Fraction(0)] + [m.moment(k) for k in range(order)]


def inverse_series(m: IntervalMeasure, order: int) -> list[Fraction]:
    return power_series_reversion(s_series(m, order), order)


def r_transform_series(m: IntervalMeasure, order: int) -> list[Fraction]:
    """Coefficients of R(w) = 1/S^{-1}(w) - 1/w, regular at w = 0."""
    g = inverse_series(m, order + 1)  # g = w (1 + g_2 w + ...)
    unit = g[1:]  # g/w
    inv = [Fraction(0)] * (order + 1)
    inv[0] = 1 / unit[0]
    for k in range(1, order + 1):
        inv[k] = -sum((unit[j] * inv[k - j] for j in range(1, k + 1)), Fraction(0)) / unit[0]
    # 1/g = (1/w) * inv, so R = (inv - 1)/w
    return inv[1:]


def _h_prime_series(m: IntervalMeasure, order: int) -> list[Fraction]:
    """Taylor coefficients of H'_m at u = 1 in powers of (u - 1)."""
    K = order + 2
    R = r_transform_series(m, K)
    # L(e) = log(1 + e) = e - e^2/2 + ...
    L = [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, K + 1)]
    RL = compose(R, L, K)
    # 1/(1 + e) = sum (-e)^k
    inv_u = [Fraction((-1) ** k) for k in range(K + 1)]
    # 1/(u L) - 1/e = (g(e) - 1)/e with g = e/((1+e) L(e))
    prod = [Fraction(0)] * (K + 1)  # (1 + e) L(e) / e
    Le = L[1:] + [Fraction(0)]
    for k in range(K + 1):
        prod[k] = Le[k] + (Le[k - 1] if k >= 1 else 0)
    g = [Fraction(0)] * (K + 1)
    g[0] = 1 / prod[0]
    for k in range(1, K + 1):
        g[k] = -sum((prod[j] * g[k - j] for j in range(1, k + 1)), Fraction(0)) / prod[0]
    first = g[1:]
    second = [sum((inv_u[j] * RL[k - j] for j in range(k + 1)), Fraction(0)) for k in range(K + 1)]
    return [first[k] + second[k] for k in range(order + 1)]


_SERIES_CACHE: dict[tuple, list[complex]] = {}


def h_prime_near_one(m: IntervalMeasure, u: complex, order: int = 12) -> complex:
    key = (m.intervals, order)
    if key not in _SERIES_CACHE:
        _SERIES_CACHE[key] = [complex(float(c)) for c in _h_prime_series(m, order)]
    coeffs = _SERIES_CACHE[key]
    e = complex(u) - 1
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * e + c
    return acc


def h_prime(m: IntervalMeasure, u: complex) -> complex:
    """H'_m(u) = 1/(u S^{-1}(log u)) - 1/(u - 1); the removable point u = 1 uses a series."""
    u = complex(u)
    if u == 0:
        raise ValueError("u = 0 is singular")
    if abs(u - 1) < SERIES_RADIUS:
        return h_prime_near_one(m, u)
    z = s_transform_inverse(m, cmath.log(u))
    return 1 / (u * z) - 1 / (u - 1)


def h_function(m: IntervalMeasure, u: complex, nodes: int = 48) -> complex:
    """H_m(u) as the integral of H'_m along the segment from 1 (where H_m = 0)."""
    u = complex(u)
    x, wts = np.polynomial.legendre.leggauss(nodes)
    pts = 1 + (u - 1) * (x + 1) / 2
    vals = np.array([h_prime(m, p) for p in pts])
    return complex(np.sum(wts * vals) * (u - 1) / 2)
