"""Cross-formula verification suite run by `schurlat verify`."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import asymptotics as asy
from . import frozen as fz
from .config import RunConfig
from .lattice import (
    build_dual,
    build_lattice,
    enumerate_matchings,
    enumerate_sequences,
    height_function,
    matching_to_sequence,
    partition_function,
    sequence_to_matching,
)
from .limitmeasure import h_prime, s_transform, s_transform_inverse
from .partitions import Partition
from .schur import (
    VariableSpec,
    schur_branching,
    schur_coset,
    schur_coset_general,
    schur_determinant,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def _rand_fraction(rng: random.Random, hi: int = 30) -> Fraction:
    return Fraction(rng.randint(1, hi), rng.randint(1, hi))


def _golden_reference(lam_kind: int, u: list[Fraction], x1: Fraction, x2: Fraction) -> Fraction:
    """Expanded reference polynomials for lambda = (3,3,3,1) and X = (x1, x2, x1, x2)."""
    if lam_kind == 0:
        return x1**4 * x2**4 * (3 * x1**2 + 4 * x1 * x2 + 3 * x2**2)
    if lam_kind == 1:
        u1 = u[0]
        return u1 * x1 * x2**2 * (
            3 * u1**2 * x1**2 * x2**2 + 2 * u1**2 * x1 * x2**3 + u1**2 * x2**4
            + 2 * u1 * x1**2 * x2**3 + u1 * x1 * x2**4 + x1**2 * x2**4
        )
    if lam_kind == 2:
        u1, u2 = u[:2]
        return u1 * u2 * x1 * x2 * (
            u1**2 * u2**2 * x1**2 + u1**2 * u2**2 * x1 * x2 + u1**2 * u2**2 * x2**2
            + u1**2 * u2 * x1**2 * x2 + u1**2 * u2 * x1 * x2**2 + u1**2 * x1**2 * x2**2
            + u1 * u2**2 * x1**2 * x2 + u1 * u2**2 * x1 * x2**2 + u1 * u2 * x1**2 * x2**2
            + u2**2 * x1**2 * x2**2
        )
    u1, u2, u3 = u[:3]
    return u1 * u2 * u3 * x2 * (
        u1**2 * u2**2 * u3**2 + u1**2 * u2**2 * u3 * x2 + u1**2 * u2**2 * x2**2
        + u1**2 * u2 * u3**2 * x2 + u1**2 * u2 * u3 * x2**2 + u1**2 * u3**2 * x2**2
        + u1 * u2**2 * u3**2 * x2 + u1 * u2**2 * u3 * x2**2 + u1 * u2 * u3**2 * x2**2
        + u2**2 * u3**2 * x2**2
    )


def check_schur_golden(seed: int = 0, points: int = 10) -> CheckResult:
    rng = random.Random(seed)
    lam = (3, 3, 3, 1)
    bad = 0
    for _ in range(points):
        x1, x2 = _rand_fraction(rng), _rand_fraction(rng)
        while x1 == x2:
            x2 = _rand_fraction(rng)
        x1, x2 = max(x1, x2), min(x1, x2)
        spec = VariableSpec((x1, x2), 4)
        u = [_rand_fraction(rng) for _ in range(3)]
        if schur_coset(lam, spec) != _golden_reference(0, u, x1, x2):
            bad += 1
        for k in (1, 2, 3):
            if schur_coset_general(lam, u[:k], spec) != _golden_reference(k, u, x1, x2):
                bad += 1
    return CheckResult("schur golden identities", bad == 0, f"{points} rational points, {bad} mismatches")


def random_schur_case(rng: random.Random) -> tuple[Partition, VariableSpec]:
    n = rng.choice([1, 2, 3])
    N = n * rng.randint(1, 6 // n)
    values = sorted({_rand_fraction(rng, 12) for _ in range(4 * n)}, reverse=True)[:n]
    while len(values) < n:
        values.append(values[-1] / 2)
    parts = sorted((rng.randint(0, 4) for _ in range(N)), reverse=True)
    return Partition(tuple(parts)), VariableSpec(tuple(values), N)


def check_schur_oracles(trials: int = 200, seed: int = 0, cap: int = 10_000) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    for _ in range(trials):
        lam, spec = random_schur_case(rng)
        if schur_coset(lam, spec, cap) != schur_branching(lam, spec.expanded()):
            bad += 1
        distinct = [_rand_fraction(rng, 40) for _ in range(spec.N)]
        if len(set(distinct)) == spec.N and schur_determinant(lam, distinct) != schur_branching(lam, distinct):
            bad += 1
    return CheckResult("schur coset = branching = bialternant", bad == 0, f"{trials} random cases, {bad} mismatches")


def check_schur_config(cfg: RunConfig) -> CheckResult:
    lam = cfg.model.partition()
    spec = cfg.model.variable_spec(len(lam))
    a = schur_coset(lam, spec, cfg.run.cap_cosets)
    b = schur_branching(lam, spec.expanded())
    ok = a == b
    if cfg.run.deform:
        ok &= schur_coset_general(lam, cfg.run.deform, spec, cfg.run.cap_cosets) == schur_branching(
            lam, list(cfg.run.deform) + list(spec.expanded()[len(cfg.run.deform):])
        )
    return CheckResult("schur config value", ok, f"s_lambda(X) = {a}")


def check_lattice(cfg: RunConfig) -> list[CheckResult]:
    spec = cfg.model.lattice_spec()
    lat = build_lattice(spec)
    ms = enumerate_matchings(lat, cfg.run.cap_vertices)
    Z = sum((m.weight for m in ms), Fraction(0))
    out = [CheckResult("partition function identity", Z == partition_function(spec), f"Z = {Z}")]
    seqs = enumerate_sequences(spec)
    round_trip = all(sequence_to_matching(lat, matching_to_sequence(lat, m)) == m for m in ms)
    images = {matching_to_sequence(lat, m).partitions for m in ms}
    same = images == {s.partitions for s in seqs}
    out.append(
        CheckResult("matching/sequence bijection", round_trip and same and len(seqs) == len(ms),
                    f"{len(ms)} matchings, {len(seqs)} sequences")
    )
    dual = build_dual(lat)
    fields = [height_function(lat, m, dual) for m in ms]
    sums_ok = all(all(v == 0 for v in f.face_sums.values()) for f in fields)
    bnd_ok = all(f.boundary == fields[0].boundary for f in fields)
    out.append(CheckResult("height function well defined", sums_ok and bnd_ok, f"{len(fields)} height fields"))
    return out


def check_measures(cfg: RunConfig) -> list[CheckResult]:
    model = cfg.model.asymptotics()
    mass = sum((m.mass for m in model.measures), Fraction(0)) / model.n
    out = [CheckResult("limit measures have total mass 1", mass == 1, f"mass = {mass}")]
    worst = 0.0
    worst_h = 0.0
    for m in model.measures:
        for w in np.linspace(-0.03, 0.03, 13):
            for s in (1, 1j):
                ww = complex(w) * s
                if ww == 0:
                    continue
                z = s_transform_inverse(m, ww)
                worst = max(worst, abs(s_transform(m, z) - ww))
        top = max(float(b) for b in m.gammas)
        for t in np.linspace(2 * top + 10, 6 * top + 40, 7):
            u = asy._psi_float(m, t)
            worst_h = max(worst_h, abs(h_prime(m, u) - (t / u - 1 / (u - 1))))
    out.append(CheckResult("S(S^-1(w)) = w", worst < 1e-10, f"max error {worst:.2e}"))
    out.append(CheckResult("H' parametric identity", worst_h < 1e-10, f"max error {worst_h:.2e}"))
    return out


def check_moments(cfg: RunConfig) -> list[CheckResult]:
    model = cfg.model.asymptotics()
    kap = cfg.run.kappa
    out = []
    m0 = asy.moment(model, 0, kap, cfg.run.nodes)
    out.append(CheckResult("moment(0) = 1", abs(m0 - 1) < 1e-9, f"{m0:.12g}"))
    pmax = min(cfg.run.p, 6)
    drift = max(
        abs(asy.moment(model, p, kap, cfg.run.nodes) - asy.moment(model, p, kap, 2 * cfg.run.nodes))
        for p in range(pmax + 1)
    )
    out.append(CheckResult("contour node doubling", drift < 1e-9 * max(1.0, abs(m0)), f"max change {drift:.2e}"))
    kq = Fraction(kap).limit_denominator(10**6)
    exact_gap = max(
        abs(asy.moment(model, p, float(kq), cfg.run.nodes) - float(asy.moment_exact(model, p, kq))) / max(1.0, float(asy.moment_exact(model, p, kq)))
        for p in range(pmax + 1)
    )
    out.append(CheckResult("contour = residue at infinity", exact_gap < 1e-9, f"max relative gap {exact_gap:.2e}"))
    level = asy.LevelMeasure(model, kap)
    dens_gap = max(
        abs(level.moment(p) - asy.moment(model, p, kap, cfg.run.nodes)) / max(1.0, abs(level.moment(p)))
        for p in range(min(pmax, 4) + 1)
    )
    out.append(CheckResult("density moments = contour moments", dens_gap < 1e-4, f"max relative gap {dens_gap:.2e}"))
    return out


def check_frozen(cfg: RunConfig) -> list[CheckResult]:
    model = cfg.model.asymptotics()
    curves = fz.model_curves(model)
    regs = fz.regions(model)
    inside = all(regs[c.i - 1].contains(chi, kap, 1e-9) for c in curves for _, chi, kap in c.samples)
    out = [
        CheckResult("frozen regions pairwise disjoint", fz.regions_disjoint(regs)),
        CheckResult("curve samples inside their regions", inside),
    ]
    ok = True
    counts = []
    for c in curves:
        D = len(model.measures[c.i - 1].intervals) - 1
        mcount = len(model.c_values) if c.i == 1 else 0
        counts.append(f"C{c.i}: {len(c.tangency_points)}")
        # counts are only established for at most one distinct c value
        if mcount <= 1:
            expected = (mcount + 1) * (D + 1) - 1 if c.i == 1 else D
            ok &= len(c.tangency_points) == expected and c.curve_class == c.class_formula
    out.append(CheckResult("tangency counts and class", ok, ", ".join(counts)))
    return out


def run_all(cfg: RunConfig, progress: Callable[[CheckResult], None] | None = None) -> list[CheckResult]:
    results: list[CheckResult] = []

    def add(items):
        for r in items if isinstance(items, list) else [items]:
            results.append(r)
            if progress:
                progress(r)

    add(check_schur_golden(cfg.run.seed))
    add(check_schur_oracles(min(cfg.run.trials, 200), cfg.run.seed, cfg.run.cap_cosets))
    if cfg.model.lam:
        add(check_schur_config(cfg))
    if cfg.model.positions:
        add(check_lattice(cfg))
    if cfg.model.blocks:
        add(check_measures(cfg))
        add(check_moments(cfg))
        add(check_frozen(cfg))
    return results
