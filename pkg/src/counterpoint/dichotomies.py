"""Dichotomies of Z_n: strength certificates, affine classification,
chord-endomorphism analysis, triad coverings, and whole-tone affinity.

A dichotomy splits the n pitch classes into two halves; the marked half K
plays the role of the consonances and its complement D the dissonances.
A dichotomy is *strong* when the identity is the only invertible affine
self-map fixing K setwise; a strong dichotomy may in addition possess a
unique *polarity*: an invertible affine map carrying K onto D.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .residue_algebra import Modulus, ResidueAffineMap


class NotStrong(ValueError):
    """The operation requires a strong dichotomy."""


class OddModulusUnsupported(ValueError):
    """Whole-tone classification is defined for n = 12 only."""


FUX_HALF = frozenset({0, 3, 4, 7, 8, 9})
MYSTIC_HALF = frozenset({0, 2, 4, 6, 8, 11})
PRESETS = {"fux": FUX_HALF, "mystic": MYSTIC_HALF}

EVEN_WHOLE_TONE = frozenset({0, 2, 4, 6, 8, 10})
ODD_WHOLE_TONE = frozenset({1, 3, 5, 7, 9, 11})

AUGMENTED = (0, 4, 8)
DIMINISHED = (0, 3, 6)
MAJOR = (0, 4, 7)
MINOR = (0, 3, 7)


def parse_pitch_class_set(text: str, modulus: Modulus = Modulus()) -> frozenset:
    """Parse a comma-separated residue list such as ``0,2,4,6,8,11``.

    Preset names ``fux`` and ``mystic`` are reserved and resolve to the
    corresponding half-sets.  The empty string parses to the empty set.
    """
    name = text.strip().lower()
    if name in PRESETS:
        return PRESETS[name]
    if not text.strip():
        return frozenset()
    try:
        values = [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise ValueError(f"malformed pitch-class set {text!r}") from exc
    return frozenset(modulus.reduce(v) for v in values)


@dataclass(frozen=True)
class Dichotomy:
    """A marked half/half bipartition (K / D) of Z_n."""

    half: frozenset
    modulus: Modulus = Modulus()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "half", frozenset(self.modulus.reduce(x) for x in self.half)
        )
        if len(self.half) * 2 != self.modulus.n:
            raise ValueError(
                f"marked half must contain exactly n/2 = {self.modulus.n // 2} "
                f"residues, got {sorted(self.half)}"
            )

    def complement(self) -> frozenset:
        return frozenset(self.modulus.residues()) - self.half

    def is_consonance(self, k: int) -> bool:
        return self.modulus.reduce(k) in self.half

    def render(self) -> str:
        return ",".join(str(x) for x in sorted(self.half))

    @classmethod
    def parse(cls, text: str, modulus: Modulus = Modulus()) -> "Dichotomy":
        return cls(parse_pitch_class_set(text, modulus), modulus)

    @classmethod
    def fux(cls) -> "Dichotomy":
        return cls(FUX_HALF)

    @classmethod
    def mystic(cls) -> "Dichotomy":
        return cls(MYSTIC_HALF)


@dataclass(frozen=True)
class StrengthCertificate:
    """Brute-force evidence for (non-)strength of a dichotomy."""

    stabilizer: tuple
    swaps: tuple

    @property
    def is_strong(self) -> bool:
        """Trivial stabilizer and a (then automatically unique) half swap.

        Rigidity alone is not enough: a class with trivial stabilizer but no
        half-swapping map has no polarity and is not strong.  Conversely a
        trivial stabilizer forces uniqueness of the swap, since two swaps
        would compose to a nontrivial stabilizing map.
        """
        return len(self.stabilizer) == 1 and len(self.swaps) == 1

    @property
    def polarity(self) -> Optional[ResidueAffineMap]:
        """The unique half-swapping map, when exactly one exists."""
        return self.swaps[0] if len(self.swaps) == 1 else None


def strength(d: Dichotomy) -> StrengthCertificate:
    """Filter all invertible affine maps for stabilizer and polarity.

    The stabilizer collects every map with m(K) = K; the swaps collect
    every map with m(K) = D.
    """
    comp = d.complement()
    stabilizer = []
    swaps = []
    for m in ResidueAffineMap.invertible_maps(d.modulus):
        image = m.apply_set(d.half)
        if image == d.half:
            stabilizer.append(m)
        elif image == comp:
            swaps.append(m)
    return StrengthCertificate(tuple(sorted(stabilizer)), tuple(sorted(swaps)))


@dataclass(frozen=True)
class DichotomyClass:
    """Affine equivalence class of a half-set."""

    canonical_representative: tuple
    orbit_size: int
    alias: Optional[str] = None


def _orbit(half: frozenset, modulus: Modulus) -> set:
    return {m.apply_set(half) for m in ResidueAffineMap.invertible_maps(modulus)}


def _canonical(half: frozenset, modulus: Modulus) -> tuple:
    return min(tuple(sorted(image)) for image in _orbit(half, modulus))


# Class aliases for n = 12: the mystic chord's class (number 78 in the
# standard catalogue of twelve-tone set classes) and the Fuxian consonances.
# Other strong classes are reported by canonical representative only.
_CLASS_ALIASES = {
    _canonical(MYSTIC_HALF, Modulus()): "78 (mystic)",
    _canonical(FUX_HALF, Modulus()): "Fux",
}


def classify(d: Dichotomy) -> DichotomyClass:
    orbit = _orbit(d.half, d.modulus)
    canonical = min(tuple(sorted(image)) for image in orbit)
    alias = _CLASS_ALIASES.get(canonical) if d.modulus.n == 12 else None
    return DichotomyClass(canonical, len(orbit), alias)


def strong_atlas(modulus: Modulus = Modulus()) -> list:
    """Group all C(n, n/2) half-sets into affine classes; return the strong ones.

    A class is strong iff its members have trivial stabilizer (class-wide
    property, checked on the canonical representative).
    """
    seen: dict = {}
    for half in combinations(modulus.residues(), modulus.n // 2):
        hs = frozenset(half)
        canonical = _canonical(hs, modulus)
        if canonical not in seen:
            orbit = _orbit(frozenset(canonical), modulus)
            seen[canonical] = len(orbit)
    strong = []
    for canonical, orbit_size in sorted(seen.items()):
        cert = strength(Dichotomy(frozenset(canonical), modulus))
        if cert.is_strong:
            alias = _CLASS_ALIASES.get(canonical) if modulus.n == 12 else None
            strong.append(DichotomyClass(canonical, orbit_size, alias))
    return strong


def all_class_orbit_sizes(modulus: Modulus = Modulus()) -> dict:
    """Canonical representative -> orbit size, over every half-set class."""
    seen: dict = {}
    for half in combinations(modulus.residues(), modulus.n // 2):
        hs = frozenset(half)
        canonical = _canonical(hs, modulus)
        if canonical not in seen:
            seen[canonical] = len(_orbit(hs, modulus))
    return seen


@dataclass(frozen=True)
class ChordEndomorphismReport:
    """All affine self-maps (invertible or not) sending a chord into itself."""

    chord: tuple
    endomorphisms: tuple
    linear_parts: tuple
    strong_verdict: bool


def chord_endomorphisms(
    chord: Iterable, modulus: Modulus = Modulus()
) -> ChordEndomorphismReport:
    """Brute-force the full n*n endomorphism monoid of a chord.

    ``strong_verdict`` is true iff the linear parts form a half-set whose
    dichotomy is strong.
    """
    chord_set = frozenset(modulus.reduce(c) for c in chord)
    if not chord_set:
        raise ValueError("chord must be nonempty")
    endos = [
        m
        for m in ResidueAffineMap.all_maps(modulus)
        if m.apply_set(chord_set) <= chord_set
    ]
    linear_parts = tuple(sorted({m.v for m in endos}))
    verdict = False
    if len(linear_parts) == modulus.n // 2:
        verdict = strength(Dichotomy(frozenset(linear_parts), modulus)).is_strong
    return ChordEndomorphismReport(
        tuple(sorted(chord_set)),
        tuple(sorted(endos, key=lambda m: (m.v, m.u))),
        linear_parts,
        verdict,
    )


@dataclass(frozen=True)
class TriadCoverReport:
    """Translates of the four classical triads contained in a chord."""

    chord: tuple
    augmented: tuple
    diminished: tuple
    major: tuple
    minor: tuple
    minor_major_near_covers: tuple
    #: triples (minor translate, major translate, leftover tones) where the
    #: union of the two triads covers the chord except for one tone


def _contained_translates(shape: tuple, chord: frozenset, modulus: Modulus) -> tuple:
    found = []
    for t in modulus.residues():
        triad = frozenset((p + t) % modulus.n for p in shape)
        if triad <= chord:
            found.append(tuple(sorted(triad)))
    return tuple(sorted(set(found)))


def triad_covers(chord: Iterable, modulus: Modulus = Modulus()) -> TriadCoverReport:
    chord_set = frozenset(modulus.reduce(c) for c in chord)
    aug = _contained_translates(AUGMENTED, chord_set, modulus)
    dim = _contained_translates(DIMINISHED, chord_set, modulus)
    maj = _contained_translates(MAJOR, chord_set, modulus)
    mino = _contained_translates(MINOR, chord_set, modulus)
    near = []
    for m_triad in mino:
        for j_triad in maj:
            union = frozenset(m_triad) | frozenset(j_triad)
            leftover = chord_set - union
            if union <= chord_set and len(leftover) == 1:
                near.append((m_triad, j_triad, tuple(sorted(leftover))))
    return TriadCoverReport(
        tuple(sorted(chord_set)), aug, dim, maj, mino, tuple(sorted(near))
    )


def whole_tone_affinity(chord: Iterable, modulus: Modulus = Modulus()) -> tuple:
    """Return (|chord ∩ even whole-tone|, |chord ∩ odd whole-tone|)."""
    if modulus.n != 12:
        raise OddModulusUnsupported("whole-tone affinity is defined for n = 12")
    chord_set = frozenset(modulus.reduce(c) for c in chord)
    return (len(chord_set & EVEN_WHOLE_TONE), len(chord_set & ODD_WHOLE_TONE))


def mystic_parity(chord: Iterable, modulus: Modulus = Modulus()) -> str:
    """Classify a chord as an EVEN or ODD mystic form, or neither.

    EVEN means the chord lies in the mystic affine class and shares five
    tones with the even whole-tone scale; ODD likewise with the odd scale.
    """
    if modulus.n != 12:
        raise OddModulusUnsupported("mystic parity is defined for n = 12")
    chord_set = frozenset(modulus.reduce(c) for c in chord)
    if len(chord_set) != 6:
        return "NotMysticForm"
    if _canonical(chord_set, modulus) != _canonical(MYSTIC_HALF, modulus):
        return "NotMysticForm"
    even, odd = whole_tone_affinity(chord_set, modulus)
    if even == 5:
        return "EVEN"
    if odd == 5:
        return "ODD"
    return "NotMysticForm"
