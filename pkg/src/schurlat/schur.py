"""Schur polynomial evaluation: branching oracle, bialternant and the coset formula."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .partitions import Partition, horizontal_strips_below

DEFAULT_BRANCHING_CAP = 8
DEFAULT_COSET_CAP = 10_000

Number = Fraction | int


class CapExceeded(ValueError):
    """Raised when a combinatorial sum would exceed its configured size limit."""


@dataclass(frozen=True)
class VariableSpec:
    """Periodic weights x_1 > ... > x_n > 0 repeated to length N."""

    values: tuple[Fraction, ...]
    N: int

    def __post_init__(self) -> None:
        vals = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValueError("need at least one weight")
        if self.N < 1 or self.N % len(vals):
            raise ValueError(f"period {len(vals)} must divide N={self.N}")
        if vals[-1] <= 0 or any(a <= b for a, b in zip(vals, vals[1:])):
            raise ValueError("weights must satisfy x_1 > x_2 > ... > x_n > 0")

    @property
    def n(self) -> int:
        return len(self.values)

    def label(self, j: int) -> int:
        """Weight class (0-based) of position j (0-based)."""
        return j % self.n

    def expanded(self) -> tuple[Fraction, ...]:
        return tuple(self.values[self.label(j)] for j in range(self.N))


@dataclass(frozen=True)
class CosetDatum:
    sigma: tuple[int, ...]  # sigma[j] = image of position j, 0-based
    eta: tuple[int, ...]
    phi: tuple[Partition, ...]


def schur_branching(lam: Partition | Sequence[int], values: Sequence[Number]) -> Fraction:
    """s_lam(values) summed over Gelfand-Tsetlin patterns (the reference oracle)."""
    lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
    vals = tuple(Fraction(v) for v in values)
    if len(lam) != len(vals):
        raise ValueError(f"partition length {len(lam)} != number of values {len(vals)}")

    @lru_cache(maxsize=None)
    def rec(parts: tuple[int, ...]) -> Fraction:
        k = len(parts)
        if k == 0:
            return Fraction(1)
        top = Partition(parts)
        x = vals[k - 1]
        total = Fraction(0)
        for mu in horizontal_strips_below(top, k - 1):
            total += x ** (top.size - mu.size) * rec(mu.parts)
        return total

    return rec(lam.parts)


def _det(rows: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def schur_determinant(lam: Partition | Sequence[int], values: Sequence[Number]) -> Fraction:
    """Bialternant det(u_i^(lam_j + N - j)) / prod_{i<j}(u_i - u_j)."""
    lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
    vals = [Fraction(v) for v in values]
    N = len(vals)
    if len(lam) != N:
        raise ValueError("partition length must equal number of values")
    if len(set(vals)) != N:
        raise ValueError("bialternant needs pairwise distinct values")
    num = _det([[u ** (lam[j] + N - 1 - j) for j in range(N)] for u in vals])
    den = Fraction(1)
    for i in range(N):
        for j in range(i + 1, N):
            den *= vals[i] - vals[j]
    return num / den


def schur_at_ones(lam: Partition | Sequence[int], N: int) -> Fraction:
    """Weyl dimension formula prod_{j<k} (lam_j - lam_k + k - j)/(k - j)."""
    lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
    parts = lam.padded(N)
    out = Fraction(1)
    for j in range(N):
        for k in range(j + 1, N):
            out *= Fraction(parts[j] - parts[k] + k - j, k - j)
    return out


def coset_count(spec: VariableSpec) -> int:
    per = spec.N // spec.n
    return math.factorial(spec.N) // math.factorial(per) ** spec.n


def _labels(spec: VariableSpec) -> list[int]:
    return [spec.label(j) for j in range(spec.N)]


def _distinct_words(counts: list[int]):
    """All words with the given letter multiplicities, in lexicographic order."""
    total = sum(counts)
    word: list[int] = []

    def rec():
        if len(word) == total:
            yield tuple(word)
            return
        for c in range(len(counts)):
            if counts[c]:
                counts[c] -= 1
                word.append(c)
                yield from rec()
                word.pop()
                counts[c] += 1

    yield from rec()


def canonical_representative(word: Sequence[int], labels: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically smallest sigma with labels[sigma[j]] == word[j]."""
    pools: dict[int, list[int]] = {}
    for idx, lab in enumerate(labels):
        pools.setdefault(lab, []).append(idx)
    cursor = {lab: 0 for lab in pools}
    sigma = []
    for lab in word:
        sigma.append(pools[lab][cursor[lab]])
        cursor[lab] += 1
    return tuple(sigma)


def sorting_permutation(spec: VariableSpec) -> tuple[int, ...]:
    """sigma_0: stable sort of positions by weight, largest first."""
    vals = spec.expanded()
    return tuple(sorted(range(spec.N), key=lambda j: -vals[j]))


def phi_data(lam: Partition | Sequence[int], sigma: Sequence[int], spec: VariableSpec) -> CosetDatum:
    """eta_j and the per-class partitions phi^(i) for the permutation sigma."""
    lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
    N = spec.N
    if len(lam) != N or sorted(sigma) != list(range(N)):
        raise ValueError("sigma must be a permutation of the N positions and len(lam) == N")
    word = [spec.label(s) for s in sigma]
    eta = tuple(sum(1 for k in range(j + 1, N) if word[k] != word[j]) for j in range(N))
    phi = []
    for i in range(spec.n):
        parts = sorted((lam[j] + eta[j] for j in range(N) if word[j] == i), reverse=True)
        phi.append(Partition(tuple(parts)))
    return CosetDatum(tuple(sigma), eta, tuple(phi))


def coset_representatives(spec: VariableSpec, cap: int = DEFAULT_COSET_CAP) -> list[CosetDatum]:
    """One canonical representative per right coset; phi is left empty here."""
    count = coset_count(spec)
    if count > cap:
        raise CapExceeded(f"{count} cosets exceed the cap of {cap}")
    labels = _labels(spec)
    per = spec.N // spec.n
    out = []
    for word in _distinct_words([per] * spec.n):
        sigma = canonical_representative(word, labels)
        eta = tuple(sum(1 for k in range(j + 1, spec.N) if word[k] != word[j]) for j in range(spec.N))
        out.append(CosetDatum(sigma, eta, ()))
    out.sort(key=lambda d: d.sigma)
    return out


def cross_class_factor(sigma: Sequence[int], spec: VariableSpec, values: Sequence[Number]) -> Fraction:
    """prod over i<j with different classes of 1/(w_sigma(i) - w_sigma(j))."""
    w = [Fraction(v) for v in values]
    out = Fraction(1)
    N = len(sigma)
    for i in range(N):
        for j in range(i + 1, N):
            if spec.label(sigma[i]) != spec.label(sigma[j]):
                out /= w[sigma[i]] - w[sigma[j]]
    return out


def schur_coset(lam: Partition | Sequence[int], spec: VariableSpec, cap: int = DEFAULT_COSET_CAP) -> Fraction:
    """Sum over cosets of prod x_i^|phi_i| s_phi_i(1..1) times the cross-class Vandermonde factor."""
    lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
    per = spec.N // spec.n
    xs = spec.expanded()
    total = Fraction(0)
    for rep in coset_representatives(spec, cap):
        datum = phi_data(lam, rep.sigma, spec)
        term = cross_class_factor(rep.sigma, spec, xs)
        for i, ph in enumerate(datum.phi):
            term *= spec.values[i] ** ph.size * schur_at_ones(ph, per)
        total += term
    return total


def schur_coset_general(
    lam: Partition | Sequence[int],
    u: Sequence[Number],
    spec: VariableSpec,
    cap: int = DEFAULT_COSET_CAP,
) -> Fraction:
    """Coset formula with the first k variables replaced by u_1..u_k.

    Each class factor is x_i^|phi| s_phi(u_j/x_i for deformed j in the class, 1, ..., 1),
    and the cross-class Vandermonde factor is taken in the deformed variables.
    """
    lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
    k = len(u)
    if k > spec.N:
        raise ValueError("more deformed values than variables")
    xs = spec.expanded()
    w = [Fraction(v) for v in u] + list(xs[k:])
    classes: list[list[int]] = [[] for _ in range(spec.n)]
    for j in range(spec.N):
        classes[spec.label(j)].append(j)
    total = Fraction(0)
    for rep in coset_representatives(spec, cap):
        datum = phi_data(lam, rep.sigma, spec)
        term = cross_class_factor(rep.sigma, spec, w)
        for i, ph in enumerate(datum.phi):
            xi = spec.values[i]
            scaled = [w[j] / xi for j in classes[i]]
            term *= xi ** ph.size * schur_branching(ph, scaled)
        total += term
    return total
