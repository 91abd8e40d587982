"""Sample statistics against world populations.

Populations come from world histograms (exact rational category
probabilities); samples are sequences of per-step symmetry counts.  The
module provides standardized effect sizes with normal-quantile confidence
intervals and a chi-square goodness-of-fit test with optional Yates
continuity correction, backed by a self-contained chi-square survival
function (regularized upper incomplete gamma).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Sequence


class DegeneratePopulation(ValueError):
    """The population standard deviation is zero; effect size is undefined."""


class EmptyCategory(ValueError):
    """An observed value falls in a category of zero population probability."""


class EmptySample(ValueError):
    """The sample contains no observations."""


class SdDivisor(Enum):
    N = "N"
    N_MINUS_1 = "N_MINUS_1"


@dataclass(frozen=True)
class PopulationSpec:
    """Category distribution of a step-count population.

    ``support`` lists the categories with nonzero frequency; their exact
    probabilities sum to one.
    """

    histogram: tuple  # ((category, frequency), ...) including zero entries
    mean: Fraction
    variance: Fraction
    sd: float
    support: tuple
    probabilities: dict

    @classmethod
    def from_histogram(cls, histogram: Dict[int, int]) -> "PopulationSpec":
        total = sum(histogram.values())
        if total <= 0:
            raise EmptySample("population histogram has no mass")
        mean = Fraction(sum(c * f for c, f in histogram.items()), total)
        second = Fraction(sum(c * c * f for c, f in histogram.items()), total)
        variance = second - mean * mean
        support = tuple(sorted(c for c, f in histogram.items() if f > 0))
        probabilities = {c: Fraction(histogram[c], total) for c in support}
        return cls(
            tuple(sorted(histogram.items())),
            mean,
            variance,
            math.sqrt(variance),
            support,
            probabilities,
        )


@dataclass(frozen=True)
class SampleSummary:
    """Observed step counts summarized against a population support.

    Values outside the support are tallied in ``overflow_values`` and do not
    appear in ``observed``; ``has_overflow`` flags their presence.  The sd
    divisor is n by default (``SdDivisor.N``).
    """

    n: int
    observed: tuple  # ((category, count), ...) over the support
    overflow_values: tuple
    mean: Fraction
    sd: float
    divisor: SdDivisor

    @property
    def overflow(self) -> int:
        return len(self.overflow_values)

    @property
    def has_overflow(self) -> bool:
        return bool(self.overflow_values)

    def observed_map(self) -> dict:
        return dict(self.observed)

    @classmethod
    def from_moments(
        cls, n: int, mean: Fraction, sd: float = 0.0
    ) -> "SampleSummary":
        """Moment-only summary (no histogram), enough for effect sizes."""
        if n < 1:
            raise EmptySample("sample size must be at least 1")
        return cls(n, (), (), Fraction(mean), sd, SdDivisor.N)


def sample_summary(
    counts: Sequence[int],
    support: Sequence[int],
    sd_divisor: SdDivisor = SdDivisor.N,
) -> SampleSummary:
    """Summarize raw symmetry counts over a population support."""
    counts = list(counts)
    if not counts:
        raise EmptySample("no observations")
    support_set = set(support)
    observed = {c: 0 for c in sorted(support_set)}
    overflow = []
    for value in counts:
        if value in support_set:
            observed[value] += 1
        else:
            overflow.append(value)
    n = len(counts)
    mean = Fraction(sum(counts), n)
    dev2 = sum((Fraction(v) - mean) ** 2 for v in counts)
    if sd_divisor is SdDivisor.N_MINUS_1:
        variance = dev2 / (n - 1) if n > 1 else Fraction(0)
    else:
        variance = dev2 / n
    return SampleSummary(
        n,
        tuple(observed.items()),
        tuple(overflow),
        mean,
        math.sqrt(variance),
        sd_divisor,
    )


# Acklam's rational approximation to the standard normal quantile, refined
# with one Halley step through math.erfc for close-to-double precision.
_A = (
    -3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
    1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00,
)
_B = (
    -5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
    6.680131188771972e01, -1.328068155288572e01,
)
_C = (
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
    -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00,
)
_D = (
    7.784695709041462e-03, 3.224671290700398e-01,
    2.445134137142996e00, 3.754408661907416e00,
)


def normal_quantile(p: float) -> float:
    """Inverse of the standard normal CDF on (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile argument must lie in (0, 1), got {p}")
    p_low = 0.02425
    if p < p_low:
        q = math.sqrt(-2 * math.log(p))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1
        )
    elif p <= 1 - p_low:
        q = p - 0.5
        r = q * q
        x = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / (
            ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1
        )
    else:
        q = math.sqrt(-2 * math.log(1 - p))
        x = -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1
        )
    err = 0.5 * math.erfc(-x / math.sqrt(2)) - p
    u = err * math.sqrt(2 * math.pi) * math.exp(x * x / 2)
    return x - u / (1 + x * u / 2)


@dataclass(frozen=True)
class EffectSizeResult:
    d: float
    ci_low: float
    ci_high: float
    alpha: float
    z: float

    @property
    def half_width(self) -> float:
        return (self.ci_high - self.ci_low) / 2


def effect_size(
    sample: SampleSummary, pop: PopulationSpec, alpha: float = 0.10
) -> EffectSizeResult:
    """Standardized deviation d = (sample mean - mu)/sigma with CI d +- z/sqrt(n)."""
    if pop.sd == 0:
        raise DegeneratePopulation("population sd is zero")
    d = float((sample.mean - pop.mean)) / pop.sd
    z = normal_quantile(1 - alpha / 2)
    half = z / math.sqrt(sample.n)
    return EffectSizeResult(d, d - half, d + half, alpha, z)


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    df: int
    p_value: float
    yates: bool
    categories: tuple
    observed: tuple
    expected: tuple


def chi_square_gof(
    sample: SampleSummary,
    pop: PopulationSpec,
    yates: bool = True,
    merge_low_expected: bool = False,
) -> ChiSquareResult:
    """Goodness of fit of observed counts against population probabilities.

    The Yates correction subtracts 0.5 from each absolute deviation,
    clamped at zero, in every category.  ``merge_low_expected`` pools
    adjacent categories until every expected count reaches 5 (off by
    default: small expected counts are kept as-is).
    """
    if sample.has_overflow:
        raise EmptyCategory(
            f"observed values {sorted(set(sample.overflow_values))} lie outside "
            "the population support (expected frequency zero)"
        )
    observed_map = sample.observed_map()
    cells = [
        (
            (cat,),
            observed_map.get(cat, 0),
            float(sample.n * pop.probabilities[cat]),
        )
        for cat in pop.support
    ]
    if merge_low_expected:
        merged = []
        acc_cats: tuple = ()
        acc_o = 0
        acc_e = 0.0
        for cats, o, e in cells:
            acc_cats += cats
            acc_o += o
            acc_e += e
            if acc_e >= 5:
                merged.append((acc_cats, acc_o, acc_e))
                acc_cats, acc_o, acc_e = (), 0, 0.0
        if acc_cats:
            if merged:
                last_cats, last_o, last_e = merged.pop()
                merged.append((last_cats + acc_cats, last_o + acc_o, last_e + acc_e))
            else:
                merged.append((acc_cats, acc_o, acc_e))
        cells = merged
    if len(cells) < 2:
        raise EmptySample(
            "too few observations: pooling low-expected categories left a "
            "single cell, so no degrees of freedom remain"
        )
    statistic = 0.0
    for _, o, e in cells:
        dev = abs(o - e)
        if yates:
            dev = max(dev - 0.5, 0.0)
        statistic += dev * dev / e
    df = len(cells) - 1
    return ChiSquareResult(
        statistic,
        df,
        chi_square_sf(statistic, df),
        yates,
        tuple(cats for cats, _, _ in cells),
        tuple(o for _, o, _ in cells),
        tuple(e for _, _, e in cells),
    )


def _lower_gamma_series(a: float, z: float) -> float:
    """Regularized lower incomplete gamma P(a, z) by power series (z < a + 1)."""
    term = 1.0 / a
    total = term
    k = a
    for _ in range(1000):
        k += 1.0
        term *= z / k
        total += term
        if abs(term) < abs(total) * 1e-16:
            break
    return total * math.exp(-z + a * math.log(z) - math.lgamma(a))

def _upper_gamma_cf(a: float, z: float) -> float:
    """Regularized upper incomplete gamma Q(a, z) by Lentz continued fraction."""
    tiny = 1e-300
    b = z + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 1000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h * math.exp(-z + a * math.log(z) - math.lgamma(a))


def chi_square_sf(x: float, df: int) -> float:
    """Survival function of the chi-square distribution, Q(df/2, x/2)."""
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    if x < 0:
        raise ValueError(f"statistic must be non-negative, got {x}")
    if x == 0:
        return 1.0
    a = df / 2.0
    z = x / 2.0
    if z < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _lower_gamma_series(a, z)))
    return min(1.0, max(0.0, _upper_gamma_cf(a, z)))
