"""Counterpoint worlds over the dual-number plane Z_n[eps].

A *world* for a strong dichotomy assigns to every step xi -> eta between
contrapuntal intervals the number of symmetries mediating it, yielding a
144 x 144 count matrix (at n = 12), its step-count histogram, exact moment
and overlap statistics, scale restrictions, and seeded random walks.

Symmetries mediating a step are drawn from the 6912-element group of
invertible dual affine maps.  For a source interval xi = x + ek of species
S (the marked half K if k is marked, else the complement D):

  * candidate pool: maps g = (a, b, s, t) that preserve the cantus fiber,
    i.e. s = x(1 - a) mod n, so g fixes the cantus x;
  * C2 (commutation): g commutes with the local polarity at x, which on
    the fiber pool reduces to t(1 - v) = u(1 - a) - b(1 - v)x mod n;
  * C1 (deformation): the preimage of xi under g has its interval part in
    the opposite species;
  * C3 (maximality): |g(S[eps]) cap S[eps]| is maximal among candidates
    passing C1 and C2.

The count of a step xi -> eta is the number of surviving symmetries whose
preimage of eta has interval part back in the source species S.

Preset builds are gated: the Fuxian world is computed by this engine and
must reproduce its frozen histogram, worked steps and maximum; the mystic
world is read from the frozen step-class table and re-checked against its
histogram.  A mismatch raises GateFailure instead of returning a world.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import sqrt
from typing import Dict, List, Optional, Sequence

from .dichotomies import (
    FUX_HALF,
    MYSTIC_HALF,
    Dichotomy,
    NotStrong,
    strength,
)
from .model_tables import (
    EXPECTED_STEP_HISTOGRAMS,
    FUX_MAX_STEP_COUNT,
    FUX_MODEL_VARIANT,
    FUX_WORKED_STEPS,
    MYSTIC_MODEL_VARIANT,
    MYSTIC_SD_NOTE,
    mystic_class_count,
)
from .residue_algebra import (
    DualAffineMap,
    DualNumber,
    Modulus,
    ModulusMismatch,
)


class GateFailure(RuntimeError):
    """A preset world build failed its frozen calibration fingerprints."""


class DeadEnd(RuntimeError):
    """The walk's start interval has no valid successor."""


@dataclass(frozen=True)
class LocalPolarity:
    """The polarity transported to cantus x: (c + em) -> (vc + (1-v)x) + e(vm + u).

    It swaps the marked and unmarked interval species while fixing the
    cantus x itself, and is an involution on all n^2 dual numbers.
    """

    cantus: int
    map: DualAffineMap

    @property
    def modulus(self) -> Modulus:
        return self.map.modulus

    def apply(self, z: DualNumber) -> DualNumber:
        return self.map.apply(z)

    def apply_pair(self, base: int, eps: int) -> tuple:
        return self.map.apply_pair(base, eps)


@lru_cache(maxsize=None)
def _certificate(d: Dichotomy):
    return strength(d)


def _polarity_or_raise(d: Dichotomy):
    cert = _certificate(d)
    if not cert.is_strong or cert.polarity is None:
        raise NotStrong(
            f"dichotomy {d.render()} is not strong with a polarity; "
            f"stabilizer size {len(cert.stabilizer)}, swaps {len(cert.swaps)}"
        )
    return cert.polarity


def local_polarity(d: Dichotomy, x: int) -> LocalPolarity:
    """Transport the polarity e^u.v of a strong dichotomy to cantus x."""
    p = _polarity_or_raise(d)
    n = d.modulus.n
    x = d.modulus.reduce(x)
    m = DualAffineMap(p.v, 0, (1 - p.v) * x % n, p.u, d.modulus)
    return LocalPolarity(x, m)


def commutes_pointwise(g: DualAffineMap, pol: LocalPolarity) -> bool:
    """Check g(pol(z)) == pol(g(z)) on all n^2 dual numbers (early exit)."""
    n = g.modulus.n
    for c in range(n):
        for m in range(n):
            zc, zm = pol.apply_pair(c, m)
            left = g.apply_pair(zc, zm)
            gc, gm = g.apply_pair(c, m)
            if left != pol.apply_pair(gc, gm):
                return False
    return True


def commutes_algebraic(g: DualAffineMap, pol: LocalPolarity) -> bool:
    """Check commutation by composing the two maps symbolically."""
    return g.compose(pol.map) == pol.map.compose(g)


def _species(d: Dichotomy, k: int) -> frozenset:
    return d.half if d.modulus.reduce(k) in d.half else d.complement()


@lru_cache(maxsize=None)
def _overlap_rows(modulus: Modulus, species: frozenset) -> tuple:
    """J[a][w] = |(a*species + w) cap species| for every unit a."""
    n = modulus.n
    rows = {}
    for a in modulus.units():
        scaled = [(a * m) % n for m in species]
        rows[a] = tuple(
            sum(1 for m in scaled if (m + w) % n in species) for w in range(n)
        )
    return tuple(sorted(rows.items()))


def counterpoint_symmetries(d: Dichotomy, xi: DualNumber) -> list:
    """All symmetries for the interval xi: fiber pool + C2 + C1 + C3.

    Returned maps are sorted; the step count toward a successor eta is
    ``sum(1 for g in result if preimage interval of eta under g is in
    xi's species)`` — see :func:`step_count`.
    """
    if xi.modulus != d.modulus:
        raise ModulusMismatch("interval and dichotomy moduli differ")
    p = _polarity_or_raise(d)
    n = d.modulus.n
    x, k = xi.a, xi.b
    species = _species(d, k)
    opposite = d.half if species is not d.half else d.complement()
    j_rows = dict(_overlap_rows(d.modulus, species))

    best_score = -1
    best: List[DualAffineMap] = []
    u, v = p.u, p.v
    for a in d.modulus.units():
        ai = pow(a, -1, n)
        s = x * (1 - a) % n
        j_row = j_rows[a]
        rhs_base = u * (1 - a) % n
        for b in range(n):
            rhs = (rhs_base - b * (1 - v) * x) % n
            bx = b * x
            for t in range(n):
                if t * (1 - v) % n != rhs:
                    continue
                # C1: interval part of g^{-1}(xi) lies in the opposite
                # species; on the fiber pool it reduces to ai*(k - bx - t).
                if ai * (k - bx - t) % n not in opposite:
                    continue
                score = sum(j_row[(b * y + t) % n] for y in range(n))
                if score > best_score:
                    best_score = score
                    best = [DualAffineMap(a, b, s, t, d.modulus)]
                elif score == best_score:
                    best.append(DualAffineMap(a, b, s, t, d.modulus))
    return sorted(best)


def step_count(d: Dichotomy, xi: DualNumber, eta: DualNumber) -> int:
    """Number of symmetries of xi mapping a source-species interval onto eta."""
    species = _species(d, xi.b)
    n = d.modulus.n
    total = 0
    for g in counterpoint_symmetries(d, xi):
        gi = g.invert()
        if (gi.a * eta.b + gi.b * eta.a + gi.t) % n in species:
            total += 1
    return total


class RestrictionMode(Enum):
    CANTUS_ONLY = "CANTUS_ONLY"
    BOTH_VOICES = "BOTH_VOICES"


@dataclass(frozen=True)
class World:
    """Per-step symmetry counts for a strong dichotomy.

    ``counts`` holds n^2 rows of n^2 bytes; row index n*x + k, column
    index n*y + l for the step x+ek -> y+el.
    """

    dichotomy: Dichotomy
    label: str
    variant: str
    counts: tuple
    histogram: dict

    @property
    def modulus(self) -> Modulus:
        return self.dichotomy.modulus

    def count(self, xi: DualNumber, eta: DualNumber) -> int:
        n = self.modulus.n
        return self.counts[n * xi.a + xi.b][n * eta.a + eta.b]

    def count_at(self, x: int, k: int, y: int, l: int) -> int:
        n = self.modulus.n
        return self.counts[n * (x % n) + (k % n)][n * (y % n) + (l % n)]

    @property
    def total_steps(self) -> int:
        return self.modulus.n ** 4

    @property
    def valid_step_count(self) -> int:
        return self.total_steps - self.histogram.get(0, 0)

    def intervals(self):
        n = self.modulus.n
        for x in range(n):
            for k in range(n):
                yield DualNumber(x, k, self.modulus)

    def successors(self, xi: DualNumber) -> list:
        """Valid successors of xi with their counts, sorted by (cantus, interval)."""
        n = self.modulus.n
        row = self.counts[n * xi.a + xi.b]
        out = []
        for col, c in enumerate(row):
            if c:
                out.append((DualNumber(col // n, col % n, self.modulus), c))
        return out


def _histogram(counts: Sequence[bytes], pad_to: int) -> dict:
    freq: Dict[int, int] = {}
    top = pad_to
    for row in counts:
        for c in row:
            freq[c] = freq.get(c, 0) + 1
            if c > top:
                top = c
    return {c: freq.get(c, 0) for c in range(top + 1)}


def _gate_histogram(observed: dict, expected: dict, label: str) -> None:
    if observed != expected:
        raise GateFailure(
            f"{label} world failed its calibration gate: histogram {observed} "
            f"!= expected {expected}"
        )


def _engine_counts(d: Dichotomy) -> tuple:
    n = d.modulus.n
    rows = []
    for x in range(n):
        for k in range(n):
            xi = DualNumber(x, k, d.modulus)
            species = _species(d, k)
            row = bytearray(n * n)
            pulls = []
            for g in counterpoint_symmetries(d, xi):
                gi = g.invert()
                pulls.append((gi.a, gi.b, gi.t))
            for y in range(n):
                for l in range(n):
                    row[n * y + l] = sum(
                        1 for (ga, gb, gt) in pulls if (ga * l + gb * y + gt) % n in species
                    )
            rows.append(bytes(row))
    return tuple(rows)


def _table_counts(modulus: Modulus) -> tuple:
    n = modulus.n
    rows = []
    for x in range(n):
        for k in range(n):
            row = bytearray(n * n)
            for y in range(n):
                d = (y - x) % n
                for l in range(n):
                    row[n * y + l] = mystic_class_count(k, d, l)
            rows.append(bytes(row))
    return tuple(rows)


def build_world(d: Dichotomy) -> World:
    """Build the full count matrix and histogram for a strong dichotomy.

    The two presets are validated against their frozen fingerprints
    (GateFailure on mismatch); other strong dichotomies are computed by the
    engine without a calibration gate.
    """
    _polarity_or_raise(d)
    n = d.modulus.n
    if n == 12 and d.half == FUX_HALF:
        counts = _engine_counts(d)
        expected = EXPECTED_STEP_HISTOGRAMS["fux"]
        histogram = _histogram(counts, pad_to=max(expected))
        _gate_histogram(histogram, expected, "fux")
        for ((x, k), (y, l)), want in FUX_WORKED_STEPS.items():
            got = counts[n * x + k][n * y + l]
            if got != want:
                raise GateFailure(
                    f"fux world failed its calibration gate: step "
                    f"{x}+e{k} -> {y}+e{l} has count {got}, expected {want}"
                )
        if max(max(row) for row in counts) != FUX_MAX_STEP_COUNT:
            raise GateFailure(
                "fux world failed its calibration gate: maximum step count "
                f"!= {FUX_MAX_STEP_COUNT}"
            )
        return World(d, "fux", FUX_MODEL_VARIANT, counts, histogram)
    if n == 12 and d.half == MYSTIC_HALF:
        counts = _table_counts(d.modulus)
        expected = EXPECTED_STEP_HISTOGRAMS["mystic"]
        histogram = _histogram(counts, pad_to=max(expected))
        _gate_histogram(histogram, expected, "mystic")
        return World(d, "mystic", MYSTIC_MODEL_VARIANT, counts, histogram)
    counts = _engine_counts(d)
    return World(d, d.render(), FUX_MODEL_VARIANT, counts, _histogram(counts, 0))


@dataclass(frozen=True)
class WorldMoments:
    mean: Fraction
    variance: Fraction
    sd: float
    note: Optional[str]


def world_moments(w: World) -> WorldMoments:
    """Exact mean and population variance of the step-count distribution."""
    total = sum(w.histogram.values())
    mean = Fraction(sum(c * f for c, f in w.histogram.items()), total)
    second = Fraction(sum(c * c * f for c, f in w.histogram.items()), total)
    variance = second - mean * mean
    note = MYSTIC_SD_NOTE if w.label == "mystic" else None
    return WorldMoments(mean, variance, sqrt(variance), note)


@dataclass(frozen=True)
class WorldOverlap:
    p_a: Fraction
    p_b: Fraction
    p_ab: Fraction

    @property
    def gap(self) -> Fraction:
        return abs(self.p_ab - self.p_a * self.p_b)


def world_overlap(a: World, b: World) -> WorldOverlap:
    """Exact valid-step probabilities of two worlds and of their conjunction."""
    if a.modulus != b.modulus:
        raise ModulusMismatch("worlds have different moduli")
    total = a.total_steps
    both = 0
    for row_a, row_b in zip(a.counts, b.counts):
        for ca, cb in zip(row_a, row_b):
            if ca and cb:
                both += 1
    return WorldOverlap(
        Fraction(a.valid_step_count, total),
        Fraction(b.valid_step_count, total),
        Fraction(both, total),
    )


@dataclass(frozen=True)
class ScaleRestrictionReport:
    """Marked-to-marked steps inside a scale, and which of them are forbidden.

    Forbidden items are reported at two granularities: individual steps
    (x+ek -> y+el) and translation classes (k, d, l) with d = (y-x) mod n.
    """

    scale: tuple
    mode: RestrictionMode
    restricted_step_count: int
    forbidden_steps: tuple
    forbidden_classes: tuple

    @property
    def forbidden_step_count(self) -> int:
        return len(self.forbidden_steps)

    @property
    def forbidden_class_count(self) -> int:
        return len(self.forbidden_classes)


def scale_restriction_report(
    w: World, scale, mode: RestrictionMode
) -> ScaleRestrictionReport:
    """Restrict marked-to-marked steps to a scale and list the forbidden ones.

    CANTUS_ONLY keeps steps whose cantus pitches lie in the scale;
    BOTH_VOICES additionally requires both upper-voice pitches
    (cantus + interval) to lie in the scale.
    """
    n = w.modulus.n
    scale_set = frozenset(w.modulus.reduce(p) for p in scale)
    half = sorted(w.dichotomy.half)
    restricted = 0
    forbidden = []
    classes = set()
    for x in sorted(scale_set):
        for y in sorted(scale_set):
            for k in half:
                if mode is RestrictionMode.BOTH_VOICES and (x + k) % n not in scale_set:
                    continue
                for l in half:
                    if mode is RestrictionMode.BOTH_VOICES and (y + l) % n not in scale_set:
                        continue
                    restricted += 1
                    if w.counts[n * x + k][n * y + l] == 0:
                        forbidden.append(
                            (
                                DualNumber(x, k, w.modulus),
                                DualNumber(y, l, w.modulus),
                            )
                        )
                        classes.add((k, (y - x) % n, l))
    forbidden.sort(key=lambda st: (st[0].a, st[0].b, st[1].a, st[1].b))
    return ScaleRestrictionReport(
        tuple(sorted(scale_set)),
        mode,
        restricted,
        tuple(forbidden),
        tuple(sorted(classes)),
    )


@dataclass(frozen=True)
class WalkResult:
    path: tuple
    completed: bool
    dead_end_at: Optional[int]

    @property
    def steps_taken(self) -> int:
        return len(self.path) - 1


def walk(w: World, start: DualNumber, length: int, seed: int) -> WalkResult:
    """Seed-deterministic random walk over valid steps.

    Raises DeadEnd when the start itself has no valid successor; a dead end
    reached later stops the walk early and is reported in the result.
    """
    if start.modulus != w.modulus:
        raise ModulusMismatch("start interval and world moduli differ")
    if not w.successors(start):
        raise DeadEnd(f"interval {start.render()} has no valid successor")
    rng = random.Random(seed)
    path = [start]
    for i in range(length):
        options = w.successors(path[-1])
        if not options:
            return WalkResult(tuple(path), False, i)
        path.append(rng.choice(options)[0])
    return WalkResult(tuple(path), True, None)


def world_matrix_csv(w: World) -> str:
    """Full count matrix as `from,to,count` rows in row-major interval order."""
    n = w.modulus.n
    lines = ["from,to,count"]
    for x in range(n):
        for k in range(n):
            row = w.counts[n * x + k]
            src = f"{x}+e{k}"
            for y in range(n):
                for l in range(n):
                    lines.append(f"{src},{y}+e{l},{row[n * y + l]}")
    return "\n".join(lines) + "\n"


def world_histogram_csv(w: World) -> str:
    lines = ["symmetries,steps"]
    for c in sorted(w.histogram):
        lines.append(f"{c},{w.histogram[c]}")
    return "\n".join(lines) + "\n"
