"""Brunn-Minkowski violation certificates, the two counterexample families,
the Monte Carlo mean-width estimator, and the mean-width capacity criterion.

A certificate records the exact capacities c_k of a Minkowski sum and of
its two summands together with the exact ordering of sqrt(c_sum) against
sqrt(c_1) + sqrt(c_2); the pi factors cancel, so the square-root
comparison runs on rational coefficients and needs no floating point.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .domains import (
    DomainSpec,
    Ellipsoid,
    EllipsoidPair,
    Polydisk,
    ellipsoid_capacity,
    format_domain,
    parse_domain,
)
from .exact import Ordering, PiRational, cmp_sqrt_combination
from .minkowski import sum_capacity

__all__ = [
    "Verdict",
    "BMCertificate",
    "MeanWidthEstimate",
    "CriterionReport",
    "ReproductionError",
    "ReproduceRow",
    "even_family",
    "odd_family",
    "bm_check",
    "expected_family_coeff",
    "reproduce_theorem",
    "verify_certificate",
    "mean_width_estimate",
    "ostrover_criterion",
]


class Verdict(enum.Enum):
    """Outcome of one Brunn-Minkowski comparison at index k."""

    VIOLATES = "Violates"
    SATISFIES = "Satisfies"
    EQUALITY = "Equality"

    def __str__(self) -> str:
        return self.value


class ReproductionError(RuntimeError):
    """A family certificate failed to violate or missed its closed form."""


@dataclass(frozen=True)
class BMCertificate:
    """Exact record of one comparison sqrt(c_k(K1+K2)) vs sqrt(c_k(K1)) + sqrt(c_k(K2))."""

    k: int
    domain1: Ellipsoid
    domain2: Ellipsoid
    c_sum: PiRational
    c_1: PiRational
    c_2: PiRational
    verdict: Verdict
    comparison: Ordering

    def margin(self) -> float:
        """Float value of sqrt(c_sum) - sqrt(c_1) - sqrt(c_2); sign matches comparison."""
        return math.sqrt(float(self.c_sum)) - math.sqrt(float(self.c_1)) - math.sqrt(float(self.c_2))

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "domain1": format_domain(self.domain1),
            "domain2": format_domain(self.domain2),
            "c_sum": self.c_sum.as_dict(),
            "c1": self.c_1.as_dict(),
            "c2": self.c_2.as_dict(),
            "verdict": str(self.verdict),
            "comparison": self.comparison.name,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BMCertificate":
        domain1 = parse_domain(d["domain1"])
        domain2 = parse_domain(d["domain2"])
        if not isinstance(domain1, Ellipsoid) or not isinstance(domain2, Ellipsoid):
            raise ValueError("certificate domains must be ellipsoids")
        return cls(
            k=int(d["k"]),
            domain1=domain1,
            domain2=domain2,
            c_sum=PiRational.from_dict(d["c_sum"]),
            c_1=PiRational.from_dict(d["c1"]),
            c_2=PiRational.from_dict(d["c2"]),
            verdict=Verdict(d["verdict"]),
            comparison=Ordering[d["comparison"]],
        )


def even_family(k: int) -> EllipsoidPair:
    """The even-index counterexample pair (E(1+1/k, 1), E(1, 1+1/k))."""
    if k < 2 or k % 2 != 0:
        raise ValueError(f"even_family requires an even k >= 2, got {k}")
    bump = 1 + Fraction(1, k)
    return EllipsoidPair.normalized(Ellipsoid(bump, 1), Ellipsoid(1, bump))


def odd_family(k: int) -> EllipsoidPair:
    """The odd-index counterexample pair (E(1,1), E(1-1/k, 1))."""
    if k <= 1 or k % 2 != 1:
        raise ValueError(f"odd_family requires an odd k > 1, got {k}")
    return EllipsoidPair.normalized(Ellipsoid(1, 1), Ellipsoid(1 - Fraction(1, k), 1))


def bm_check(k: int, pair: EllipsoidPair) -> BMCertificate:
    """Compare sqrt(c_k(sum)) with sqrt(c_k(E1)) + sqrt(c_k(E2)), exactly."""
    c_sum = sum_capacity(k, pair)
    c_1 = ellipsoid_capacity(k, pair.first)
    c_2 = ellipsoid_capacity(k, pair.second)
    comparison = cmp_sqrt_combination(c_sum.coeff, c_1.coeff, c_2.coeff)
    if comparison is Ordering.LESS:
        verdict = Verdict.VIOLATES
    elif comparison is Ordering.GREATER:
        verdict = Verdict.SATISFIES
    else:
        verdict = Verdict.EQUALITY
    return BMCertificate(
        k=k,
        domain1=pair.first,
        domain2=pair.second,
        c_sum=c_sum,
        c_1=c_1,
        c_2=c_2,
        verdict=verdict,
        comparison=comparison,
    )


def verify_certificate(cert: BMCertificate) -> bool:
    """Recompute every field of a certificate from (k, domain1, domain2)."""
    fresh = bm_check(cert.k, EllipsoidPair.normalized(cert.domain1, cert.domain2))
    return (
        fresh.c_sum == cert.c_sum
        and {fresh.c_1, fresh.c_2} == {cert.c_1, cert.c_2}
        and fresh.verdict == cert.verdict
        and fresh.comparison == cert.comparison
    )


def expected_family_coeff(k: int) -> Fraction:
    """Closed-form coefficient of c_k(sum) for the family at index k.

    Even k: 2k + 2 + 1/k.  Odd k: ((k+1)/2) (2 - 1/k)^2.
    """
    if k % 2 == 0:
        return 2 * k + 2 + Fraction(1, k)
    return Fraction(k + 1, 2) * (2 - Fraction(1, k)) ** 2


@dataclass(frozen=True)
class ReproduceRow:
    k: int
    family: str
    certificate: BMCertificate
    expected_c_sum: PiRational


def _reproduce_one(k: int) -> ReproduceRow:
    family = "even" if k % 2 == 0 else "odd"
    pair = even_family(k) if k % 2 == 0 else odd_family(k)
    cert = bm_check(k, pair)
    expected = PiRational(expected_family_coeff(k))
    if cert.c_sum != expected:
        raise ReproductionError(
            f"k={k}: computed c_sum = {cert.c_sum}, closed form expects {expected}"
        )
    if cert.verdict is not Verdict.VIOLATES:
        raise ReproductionError(f"k={k}: expected verdict Violates, got {cert.verdict}")
    return ReproduceRow(k=k, family=family, certificate=cert, expected_c_sum=expected)


def reproduce_theorem(k_max: int, jobs: int = 1) -> list[ReproduceRow]:
    """One violating certificate per k in {2, ..., k_max}.

    Each row is checked against its closed form; any Satisfies verdict or
    closed-form mismatch raises ReproductionError.  Rows come back ordered
    by k regardless of the worker count.
    """
    if k_max < 2:
        raise ValueError(f"k_max must be >= 2, got {k_max}")
    ks = range(2, k_max + 1)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_reproduce_one, ks))
    return [_reproduce_one(k) for k in ks]


@dataclass(frozen=True)
class MeanWidthEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int


_CHUNK = 1 << 20


def mean_width_estimate(domain: DomainSpec, samples: int, seed: int) -> MeanWidthEstimate:
    """Monte Carlo mean width of a 4-dimensional ellipsoid or polydisk.

    Averages the support function over uniform points of S^3, drawn as
    normalized 4-dimensional Gaussians from a seeded generator.  Only the
    squared plane-split p = |(x1,x2)|^2 of each point enters the support
    function, so that is all that is computed:

        P(a,b): a sqrt(p) + b sqrt(1-p)
        E(a,b): sqrt(b^2 + (a^2 - b^2) p)

    stderr is the sample standard deviation over sqrt(samples).
    """
    if samples < 100:
        raise ValueError(f"samples must be >= 100, got {samples}")
    if isinstance(domain, Ellipsoid):
        split = _kernels.ellipsoid_support_split
    elif isinstance(domain, Polydisk):
        split = _kernels.polydisk_support_split
    else:
        raise ValueError(
            f"mean width supports only 4-dimensional ellipsoids and polydisks, got {format_domain(domain)}"
        )
    a, b = float(domain.a), float(domain.b)
    rng = np.random.default_rng(seed)
    values = np.empty(samples)
    done = 0
    while done < samples:
        n = min(_CHUNK, samples - done)
        gauss = rng.standard_normal((n, 4))
        u = gauss[:, 0] ** 2 + gauss[:, 1] ** 2
        w = gauss[:, 2] ** 2 + gauss[:, 3] ** 2
        p = u / (u + w)
        values[done : done + n] = split(p, a, b)
        done += n
    mean = float(np.mean(values))
    sd = float(np.std(values, ddof=1))
    return MeanWidthEstimate(mean=mean, stderr=sd / math.sqrt(samples), samples=samples, seed=seed)


@dataclass(frozen=True)
class CriterionReport:
    """Mean-width criterion at index k: the unit polydisk beats the bound.

    A normalized capacity satisfying the Brunn-Minkowski inequality is
    capped by pi M(K)^2 on centrally symmetric K.  With c_k(P(1,1)) = pi k,
    c_k(B^4(1)) = pi floor((k+1)/2) and M(P(1,1)) = 4/3, the cap fails
    exactly when k / floor((k+1)/2) > 16/9, so some c_k violates the
    inequality for every such k.
    """

    k: int
    violating: bool
    lhs: Fraction
    rhs: Fraction
    c_polydisk: PiRational
    c_ball: PiRational


def ostrover_criterion(k: int) -> CriterionReport:
    """Exact evaluation of k / floor((k+1)/2) > 16/9."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    half = (k + 1) // 2
    lhs = Fraction(k, half)
    rhs = Fraction(16, 9)
    return CriterionReport(
        k=k,
        violating=lhs > rhs,
        lhs=lhs,
        rhs=rhs,
        c_polydisk=PiRational(Fraction(k)),
        c_ball=PiRational(Fraction(half)),
    )
