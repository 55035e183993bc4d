"""Frozen boundary: exact rational functions Psi_i and J_i, the curves C_i, their duals,
tangency diagnostics and the frozen/liquid classification."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .asymptotics import ModelAsymptotics, root_system
from .limitmeasure import IntervalMeasure, polish_roots
from .partitions import scaled_index_sets


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    c = [Fraction(v) for v in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c) if c else (Fraction(0),)


@dataclass(frozen=True)
class Poly:
    """Polynomial with exact rational coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((Fraction(c),))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        out = cls.const(1)
        for r in roots:
            out = out * cls((-Fraction(r), Fraction(1)))
        return out

    @property
    def degree(self) -> int:
        return -1 if self.is_zero() else len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def __add__(self, other) -> "Poly":
        other = other if isinstance(other, Poly) else Poly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "Poly":
        other = other if isinstance(other, Poly) else Poly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = Fraction(other)
            return Poly(tuple(c * a for a in self.coeffs))
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly.const(0), self
        quot = [Fraction(0)] * (dq + 1)
        for k in range(dq, -1, -1):
            f = rem[k + len(other.coeffs) - 1] / other.lead
            quot[k] = f
            if f:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= f * b
        return Poly(tuple(quot)), Poly(tuple(rem[: len(other.coeffs) - 1]) or (0,))

    def monic(self) -> "Poly":
        return self * (1 / self.lead)

    def derivative(self) -> "Poly":
        return Poly(tuple(k * c for k, c in enumerate(self.coeffs))[1:] or (0,))

    def __call__(self, t):
        acc = 0 * t if not isinstance(t, Fraction) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + (c if isinstance(t, Fraction) else float(c))
        return acc

    def float_coeffs(self) -> np.ndarray:
        """Highest degree first, for numpy."""
        return np.array([float(c) for c in reversed(self.coeffs)])

    def roots(self) -> np.ndarray:
        if self.degree < 1:
            return np.array([], dtype=complex)
        c = self.float_coeffs()
        return polish_roots(c, np.roots(c))

    def real_roots(self) -> list[float]:
        """Distinct real roots (located numerically, counted exactly)."""
        sq = squarefree(self)
        count = sq.real_root_count()
        rts = sq.roots()
        order = np.argsort(np.abs(rts.imag))
        picked = sorted(float(r.real) for r in rts[order[:count]])
        return picked

    def sign_at_infinity(self, positive: bool) -> int:
        s = 1 if self.lead > 0 else -1
        return s if positive or self.degree % 2 == 0 else -s

    def real_root_count(self, lo: Fraction | None = None, hi: Fraction | None = None) -> int:
        """Number of distinct real roots in (lo, hi] by Sturm's theorem (whole line by default)."""
        if self.degree < 1:
            return 0
        chain = sturm_chain(squarefree(self))

        def changes(signs: list[int]) -> int:
            nz = [s for s in signs if s]
            return sum(1 for a, b in zip(nz, nz[1:]) if a != b)

        def signs_at(x: Fraction | None, positive: bool) -> list[int]:
            if x is None:
                return [p.sign_at_infinity(positive) for p in chain]
            return [(v > 0) - (v < 0) for v in (p(Fraction(x)) for p in chain)]

        return changes(signs_at(lo, False)) - changes(signs_at(hi, True))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


def squarefree(p: Poly) -> Poly:
    g = poly_gcd(p, p.derivative())
    return p.divmod(g)[0] if g.degree > 0 else p


def sturm_chain(p: Poly) -> list[Poly]:
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        rem = chain[-2].divmod(chain[-1])[1]
        if rem.is_zero():
            break
        chain.append(-rem)
    return chain


@dataclass(frozen=True)
class RationalFunction:
    """num/den reduced by their gcd, with a monic denominator."""

    num: Poly
    den: Poly

    def __post_init__(self) -> None:
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(self.num, self.den)
        num, den = self.num, self.den
        if g.degree > 0:
            num, den = num.divmod(g)[0], den.divmod(g)[0]
        lead = den.lead
        object.__setattr__(self, "num", num * (1 / lead))
        object.__setattr__(self, "den", den * (1 / lead))

    @classmethod
    def const(cls, c) -> "RationalFunction":
        return cls(Poly.const(c), Poly.const(1))

    @classmethod
    def variable(cls) -> "RationalFunction":
        return cls(Poly((0, 1)), Poly.const(1))

    def _lift(self, other) -> "RationalFunction":
        return other if isinstance(other, RationalFunction) else RationalFunction.const(other)

    def __add__(self, other) -> "RationalFunction":
        o = self._lift(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "RationalFunction":
        return (-self) + other

    def __mul__(self, other) -> "RationalFunction":
        o = self._lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other) -> "RationalFunction":
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other) -> "RationalFunction":
        return self._lift(other) * self.inverse()

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den
        )

    def __call__(self, t):
        d = self.den(t)
        if d == 0:
            raise ZeroDivisionError(f"pole at {t}")
        return self.num(t) / d

    def real_poles(self) -> list[float]:
        return self.den.real_roots()


def psi(m: IntervalMeasure) -> RationalFunction:
    """prod (t - beta_k) / prod (t - gamma_k); tends to 1 at infinity."""
    return RationalFunction(Poly.from_roots(m.betas), Poly.from_roots(m.gammas))


def j_function(
    i: int, psi_i: RationalFunction, n: int, c_values: Sequence[tuple[Fraction, int]] = ()
) -> RationalFunction:
    """J_1 = 1/(Psi-1) + (n - l) + sum n_j c_j/(Psi + c_j); J_i = (n-i+1) + 1/(Psi-1) for i >= 2."""
    base = 1 / (psi_i - 1)
    if i >= 2:
        return base + (n - i + 1)
    l = sum(k for _, k in c_values)
    out = base + (n - l)
    for c, k in c_values:
        c = Fraction(c)
        out = out + (c * k) / (psi_i + c)
    return out


def curve_point(J: RationalFunction, dJ: RationalFunction, n: int, t):
    """(chi, kappa) = ((t - J/J')/n, 1/J')."""
    jp = dJ(t)
    return (t - J(t) / jp) / n, 1 / jp


@dataclass(frozen=True)
class FrozenCurve:
    i: int
    samples: tuple[tuple[float, float, float], ...]  # (t, chi, kappa) with 0 <= kappa <= 1
    tangency_points: tuple[float, ...]  # chi where the curve touches kappa = 0
    top_point: float  # chi where the curve touches kappa = 1
    curve_class: int
    class_formula: int
    J: RationalFunction


def parameter_grid(J: RationalFunction, dense: int = 4000, per_pole: int = 80, far: int = 200) -> np.ndarray:
    """Uniform grid plus logarithmic refinement near the poles of J and a 1/t chart at infinity."""
    poles = J.real_poles()
    crit = J.derivative().num.real_roots()  # J' = 0 sends kappa to infinity
    pts = poles + crit
    lo, hi = (min(pts), max(pts)) if pts else (-1.0, 1.0)
    span = max(hi - lo, 1.0)
    grid = [np.linspace(lo - span, hi + span, dense)]
    offs = np.geomspace(1e-7, 0.05 * span, per_pole)
    for p in pts:
        grid += [p - offs, p + offs]
    s = np.geomspace(1e-6, 1.0 / (hi + 2 * span if hi + 2 * span > 0 else span), far)
    grid += [1 / s, -1 / s]
    t = np.unique(np.concatenate(grid))
    keep = np.ones(len(t), dtype=bool)
    for p in pts:
        keep &= np.abs(t - p) > 1e-9
    return t[keep]


def curve_class(J: RationalFunction, trials: int = 5, seed: int = 0) -> tuple[int, list[int]]:
    """Degree of the numerator of J(t) - c n + d t for generic (c, d), with real-root counts."""
    rng = random.Random(seed)
    degs, reals = [], []
    for _ in range(trials):
        c = Fraction(rng.randint(-50, 50), rng.randint(1, 7))
        d = Fraction(rng.randint(-50, 50), rng.randint(1, 7))
        eq = J - c + RationalFunction(Poly((0, d)), Poly.const(1))
        degs.append(eq.num.degree)
        reals.append(eq.num.real_root_count())
    return max(degs), reals


def line_intersections(J: RationalFunction, n: int, c: Fraction, d: Fraction) -> tuple[int, int]:
    """Degree and real-root count of c n - d t = J(t): the dual line y = c x + d meets C-dual there."""
    eq = J - Fraction(c) * n + RationalFunction(Poly((0, Fraction(d))), Poly.const(1))
    return eq.num.degree, eq.num.real_root_count()


def expected_class(i: int, D: int, m: int) -> int:
    return (m + 1) * (D + 1) if i == 1 else D + 1


def curve(
    i: int, J: RationalFunction, n: int, t_grid: Sequence[float] | None = None, D: int = 0, m: int = 0
) -> FrozenCurve:
    dJ = J.derivative()
    ts = parameter_grid(J) if t_grid is None else np.asarray(t_grid, dtype=float)
    samples = []
    for t in ts:
        try:
            chi, kap = curve_point(J, dJ, n, float(t))
        except ZeroDivisionError:
            continue
        if 0.0 <= kap <= 1.0 and np.isfinite(chi):
            samples.append((float(t), float(chi), float(kap)))
    tangency = tuple(p / n for p in J.real_poles())
    cls, _ = curve_class(J)
    return FrozenCurve(i, tuple(samples), tangency, float(top_point(J, n)), cls, expected_class(i, D, m), J)


def top_point(J: RationalFunction, n: int) -> Fraction:
    """chi where the curve meets kappa = 1, reached as t -> infinity.

    With J(t) = t/M + b + O(1/t) the parametrization gives chi -> -b M / n and kappa -> M.
    """
    q, _ = J.num.divmod(J.den)
    if q.degree != 1:
        raise ValueError("J must grow linearly at infinity")
    M = 1 / q.coeffs[1]
    return -q.coeffs[0] * M / n


def top_kappa(J: RationalFunction) -> Fraction:
    q, _ = J.num.divmod(J.den)
    return 1 / q.coeffs[1]


def dual_curve(J: RationalFunction, n: int, t_grid: Sequence[float]) -> list[tuple[float, float]]:
    out = []
    for t in t_grid:
        if t == 0:
            continue
        try:
            out.append((-n / t, -J(float(t)) / t))
        except ZeroDivisionError:
            continue
    return out


def model_curves(model: ModelAsymptotics) -> list[FrozenCurve]:
    out = []
    for i in range(1, model.n + 1):
        m_i = model.measures[i - 1]
        c_vals = model.c_values if i == 1 else ()
        J = j_function(i, psi(m_i), model.n, c_vals)
        out.append(curve(i, J, model.n, D=len(m_i.intervals) - 1, m=len(c_vals)))
    return out


@dataclass(frozen=True)
class Region:
    """Strip between two lines chi = a + b kappa, for 0 <= kappa <= 1."""

    i: int
    left: tuple[float, float]
    right: tuple[float, float]

    def bounds(self, kappa: float) -> tuple[float, float]:
        return self.left[0] + self.left[1] * kappa, self.right[0] + self.right[1] * kappa

    def contains(self, chi: float, kappa: float, tol: float = 1e-9) -> bool:
        lo, hi = self.bounds(kappa)
        return lo - tol <= chi <= hi + tol and -tol <= kappa <= 1 + tol


def regions(model: ModelAsymptotics) -> list[Region]:
    """Bounding strips R_i.

    Left line: n(chi - r_{max J_i}) + (kappa - 1)(n - i) = 0.  Right line:
    n(chi - r_{min J_i}) + (n - i + 1)(kappa - 1) = 0, except that for i = 1 with l
    square rows per period it becomes n(chi - r_{min J_1}) + (n - l) kappa - n = 0.
    """
    n = model.n
    levels = [float(v) for v in model.levels]
    sets = scaled_index_sets(n, model.blocks)
    out = []
    for i in range(1, n + 1):
        J = sets[i - 1]
        r_lo, r_hi = levels[max(J) - 1], levels[min(J) - 1]
        left = (r_lo + (n - i) / n, -(n - i) / n)
        if i == 1 and model.square_count:
            l = model.square_count
            right = (r_hi + 1.0, -(n - l) / n)
        else:
            right = (r_hi + (n - i + 1) / n, -(n - i + 1) / n)
        out.append(Region(i, left, right))
    return out


def regions_disjoint(rs: Sequence[Region]) -> bool:
    """Strips bounded by lines are disjoint on 0 <= kappa <= 1 iff they are at both ends."""
    for a in rs:
        for b in rs:
            if a.i < b.i:
                for k in (0.0, 1.0):
                    if not b.bounds(k)[1] < a.bounds(k)[0]:
                        return False
    return True


class ThresholdError(ValueError):
    """The polynomial form degenerates because a root escapes to infinity."""


def real_root_floor(model: ModelAsymptotics, i: int) -> int:
    """Minimum number of real roots of the deflated polynomial: its degree minus one pair."""
    D = len(model.measures[i - 1].intervals) - 1
    m = len(model.c_values) if i == 1 else 0
    return (m + 1) * (D + 1) - 2


def classify(model: ModelAsymptotics, chi: float, kappa: float, tol: float = 1e-9, near: float = 1e-6) -> str:
    """'frozen' when every class polynomial has only real roots, 'liquid' otherwise,
    'boundary' when a double root is within tolerance."""
    if not 0 < kappa < 1:
        raise ValueError("kappa must lie in (0, 1)")
    x = chi / (1 - kappa)
    state = "frozen"
    for i in range(1, model.n + 1):
        sysm = root_system(model, i, kappa)
        for e in sysm.escape_points():
            if abs(x - e) <= 1e-12 * max(1.0, abs(e)):
                raise ThresholdError(
                    f"class {i}: leading coefficient cancels at x={e:.12g} (a gamma endpoint threshold)"
                )
        rts = sysm.roots(x)
        if len(rts) == 0:
            continue
        scale = max(1.0, float(np.max(np.abs(rts))))
        span = max(1.0, float(np.ptp(rts.real)))
        if len(rts) > 1:
            gaps = np.abs(rts[:, None] - rts[None, :]) + np.eye(len(rts)) * 1e300
            if np.min(gaps) < near * span:
                return "boundary"
        if np.any(np.abs(rts.imag) > tol * scale):
            state = "liquid"
    return state
