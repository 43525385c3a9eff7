"""Symplectic domains and their closed-form capacities.

The domains handled here are the 4-dimensional symplectic ellipsoid E(a,b)
and polydisk P(a,b) with exact rational radii, Minkowski sums of two
ellipsoids, and products with a stabilizing ball factor.  Capacities are
indexed by a positive integer k and returned as exact rational multiples
of pi.

For an ellipsoid, the k-th capacity is the k-th smallest element (with
multiplicity) of the merged multiples {i*pi*a^2} and {j*pi*b^2}; the
implementation selects it through the counting function
N(t) = floor(t/a^2) + floor(t/b^2) rather than materializing a sorted list.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .exact import Ordering, PiRational, cmp_rational_sqrt, format_rational, parse_rational

__all__ = [
    "Ellipsoid",
    "Polydisk",
    "EllipsoidPair",
    "EllipsoidSum",
    "ProductWithBall",
    "DomainSpec",
    "IndexVector",
    "DomainParseError",
    "StabilizationError",
    "ellipsoid_capacity",
    "ellipsoid_capacity_bruteforce",
    "ellipsoid_norm_argmin",
    "polydisk_capacity",
    "product_with_ball_capacity",
    "ellipsoid_product_capacity",
    "capacity",
    "scale_domain",
    "parse_domain",
    "format_domain",
]


def _as_positive_radius(value, name: str) -> Fraction:
    q = Fraction(value)
    if q <= 0:
        raise ValueError(f"{name} must be a positive rational, got {q}")
    return q


@dataclass(frozen=True)
class Ellipsoid:
    """Open symplectic ellipsoid E(a,b) in C^2 with rational radii a, b."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _as_positive_radius(self.a, "a"))
        object.__setattr__(self, "b", _as_positive_radius(self.b, "b"))

    def scaled(self, lam: Fraction) -> "Ellipsoid":
        return Ellipsoid(self.a * lam, self.b * lam)


@dataclass(frozen=True)
class Polydisk:
    """Product of two open disks of radii a and b."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _as_positive_radius(self.a, "a"))
        object.__setattr__(self, "b", _as_positive_radius(self.b, "b"))

    def scaled(self, lam: Fraction) -> "Polydisk":
        return Polydisk(self.a * lam, self.b * lam)


@dataclass(frozen=True)
class EllipsoidPair:
    """An ordered pair of ellipsoids whose Minkowski sum is analyzed.

    The stored order always satisfies c*b <= a*d, i.e. c/a <= d/b for
    first = E(a,b) and second = E(c,d).  Build pairs through
    ``EllipsoidPair.normalized``, which swaps the operands when needed
    (Minkowski addition is symmetric, so only the labels can flip; the
    ``swapped`` field records whether they did).
    """

    first: Ellipsoid
    second: Ellipsoid
    swapped: bool = field(default=False, compare=False)

    def __post_init__(self):
        a, b = self.first.a, self.first.b
        c, d = self.second.a, self.second.b
        if c * b > a * d:
            raise ValueError(
                "EllipsoidPair must satisfy c/a <= d/b; "
                "use EllipsoidPair.normalized to order the operands"
            )

    @classmethod
    def normalized(cls, e1: Ellipsoid, e2: Ellipsoid) -> "EllipsoidPair":
        if e2.a * e1.b > e1.a * e2.b:
            return cls(e2, e1, swapped=True)
        return cls(e1, e2, swapped=False)

    @property
    def proportional(self) -> bool:
        """True when second = lam * first, so the sum is itself an ellipsoid."""
        return self.second.a * self.first.b == self.first.a * self.second.b

    @property
    def radii(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.first.a, self.first.b, self.second.a, self.second.b

    @property
    def outer_ellipsoid(self) -> Ellipsoid:
        """E(a+c, b+d), the ellipsoid the sum naturally contains."""
        return Ellipsoid(self.first.a + self.second.a, self.first.b + self.second.b)

    def scaled(self, lam: Fraction) -> "EllipsoidPair":
        lam = Fraction(lam)
        return EllipsoidPair(self.first.scaled(lam), self.second.scaled(lam), self.swapped)


@dataclass(frozen=True)
class EllipsoidSum:
    """The Minkowski sum of the two ellipsoids of a normalized pair."""

    pair: EllipsoidPair

    @classmethod
    def of(cls, e1: Ellipsoid, e2: Ellipsoid) -> "EllipsoidSum":
        return cls(EllipsoidPair.normalized(e1, e2))


@dataclass(frozen=True)
class ProductWithBall:
    """A domain X x B^m(R) used for dimension stabilization.

    Only one ball factor is supported; nesting products raises.
    """

    inner: "DomainSpec"
    m: int
    R: Fraction

    def __post_init__(self):
        if isinstance(self.inner, ProductWithBall):
            raise ValueError("ProductWithBall cannot nest another product")
        if self.m < 1:
            raise ValueError(f"ball dimension m must be >= 1, got {self.m}")
        object.__setattr__(self, "R", _as_positive_radius(self.R, "R"))


DomainSpec = Union[Ellipsoid, Polydisk, EllipsoidSum, ProductWithBall]


@dataclass(frozen=True)
class IndexVector:
    """A pair (v1, v2) of nonnegative integers with v1 + v2 >= 1."""

    v1: int
    v2: int

    def __post_init__(self):
        if self.v1 < 0 or self.v2 < 0:
            raise ValueError(f"index vector components must be nonnegative, got {(self.v1, self.v2)}")
        if self.v1 + self.v2 < 1:
            raise ValueError("index vector (0, 0) is not allowed")

    @property
    def k(self) -> int:
        return self.v1 + self.v2


class StabilizationError(ValueError):
    """Raised when a ball factor is too small for the product reduction."""


def _require_positive_k(k: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ValueError(f"capacity index k must be a positive integer, got {k!r}")


def _kth_merged_multiple(k: int, alpha: Fraction, beta: Fraction) -> Fraction:
    """k-th smallest element of {i*alpha : i >= 1} merged with {j*beta : j >= 1}.

    Ties count twice.  For each progression, binary search the smallest
    candidate whose count N(t) = floor(t/alpha) + floor(t/beta) reaches k;
    the answer is the smaller of the two candidates.
    """

    def smallest_reaching(step: Fraction, other: Fraction) -> Fraction:
        lo, hi = 1, k
        while lo < hi:
            mid = (lo + hi) // 2
            if mid + (mid * step) // other >= k:
                hi = mid
            else:
                lo = mid + 1
        return lo * step

    return min(smallest_reaching(alpha, beta), smallest_reaching(beta, alpha))


def ellipsoid_capacity(k: int, e: Ellipsoid) -> PiRational:
    """k-th capacity of E(a,b): the k-th smallest merged multiple of pi a^2, pi b^2."""
    _require_positive_k(k)
    return PiRational(_kth_merged_multiple(k, e.a * e.a, e.b * e.b))


def ellipsoid_capacity_bruteforce(k: int, e: Ellipsoid) -> PiRational:
    """Sorted-materialization reference for ellipsoid_capacity (testing aid)."""
    _require_positive_k(k)
    alpha, beta = e.a * e.a, e.b * e.b
    merged = sorted([i * alpha for i in range(1, k + 1)] + [j * beta for j in range(1, k + 1)])
    return PiRational(merged[k - 1])


def ellipsoid_norm_argmin(k: int, e: Ellipsoid) -> tuple[PiRational, IndexVector]:
    """Minimum over v1 + v2 = k of max(v1 * pi a^2, v2 * pi b^2), with argmin.

    Ties are broken toward the smallest v1.  The value always equals
    ellipsoid_capacity(k, e); the argmin vector is what the strictness
    criterion needs.
    """
    _require_positive_k(k)
    alpha, beta = e.a * e.a, e.b * e.b
    best = None
    best_v1 = 0
    for v1 in range(k + 1):
        value = max(v1 * alpha, (k - v1) * beta)
        if best is None or value < best:
            best = value
            best_v1 = v1
    return PiRational(best), IndexVector(best_v1, k - best_v1)


def polydisk_capacity(k: int, p: Polydisk) -> PiRational:
    """k-th capacity of P(a,b): k * pi * min(a^2, b^2)."""
    _require_positive_k(k)
    return PiRational(k * min(p.a * p.a, p.b * p.b))


def product_with_ball_capacity(k: int, inner: DomainSpec, m: int, R: Fraction) -> PiRational:
    """Capacity of X x B^m(R), valid in the stabilized regime R^2 > c_k(X)/pi.

    Under that condition the ball factor is invisible and the capacity of
    the product equals c_k(X).  A too-small R raises StabilizationError;
    the general minimum-over-splittings formula is intentionally not
    offered here.
    """
    _require_positive_k(k)
    if m < 1:
        raise ValueError(f"ball dimension m must be >= 1, got {m}")
    R = _as_positive_radius(R, "R")
    inner_cap = capacity(k, inner)
    if cmp_rational_sqrt(R, inner_cap.coeff) is not Ordering.GREATER:
        raise StabilizationError(
            f"stabilization condition unmet: need pi*R^2 > c_{k}(X), i.e. "
            f"R^2 > {format_rational(inner_cap.coeff)}, got R = {format_rational(R)}"
        )
    return inner_cap


def ellipsoid_product_capacity(k: int, e1: Ellipsoid, e2: Ellipsoid) -> PiRational:
    """Capacity of the 8-dimensional product E1 x E2 via min over splittings.

    c_k(X x Y) = min over i + j = k of c_i(X) + c_j(Y), with c_0 = 0.
    Kept as an independent check of the stabilization shortcut; the
    DomainSpec grammar deliberately does not expose general products.
    """
    _require_positive_k(k)
    best = None
    for i in range(k + 1):
        ci = ellipsoid_capacity(i, e1).coeff if i else Fraction(0)
        cj = ellipsoid_capacity(k - i, e2).coeff if k - i else Fraction(0)
        total = ci + cj
        if best is None or total < best:
            best = total
    return PiRational(best)


def capacity(k: int, domain: DomainSpec) -> PiRational:
    """k-th capacity of any supported domain."""
    _require_positive_k(k)
    if isinstance(domain, Ellipsoid):
        return ellipsoid_capacity(k, domain)
    if isinstance(domain, Polydisk):
        return polydisk_capacity(k, domain)
    if isinstance(domain, EllipsoidSum):
        from .minkowski import sum_capacity

        return sum_capacity(k, domain.pair)
    if isinstance(domain, ProductWithBall):
        return product_with_ball_capacity(k, domain.inner, domain.m, domain.R)
    raise TypeError(f"unsupported domain: {domain!r}")


def scale_domain(lam: Fraction, domain: DomainSpec) -> DomainSpec:
    """Scale every linear dimension (radii and R) by lam > 0."""
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError(f"scale factor must be positive, got {lam}")
    if isinstance(domain, (Ellipsoid, Polydisk)):
        return domain.scaled(lam)
    if isinstance(domain, EllipsoidSum):
        return EllipsoidSum(domain.pair.scaled(lam))
    if isinstance(domain, ProductWithBall):
        return ProductWithBall(scale_domain(lam, domain.inner), domain.m, domain.R * lam)
    raise TypeError(f"unsupported domain: {domain!r}")


# --------------------------------------------------------------------------
# Domain literal grammar:  E(a,b) | P(a,b) | sum(E(..),E(..)) | prod(D, m, R)
# with rationals written p/q or p.
# --------------------------------------------------------------------------


class DomainParseError(ValueError):
    """Parse failure carrying the offending token and its position."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos} in {text!r}")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        self._skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise DomainParseError(f"expected {ch!r}, found {found!r}", self.text, self.pos)
        self.pos += 1

    def name(self) -> tuple[str, int]:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        if self.pos == start:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise DomainParseError(f"expected a domain name, found {found!r}", self.text, start)
        return self.text[start : self.pos], start

    def rational(self) -> Fraction:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] in "-/"):
            self.pos += 1
        token = self.text[start : self.pos]
        if not token:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise DomainParseError(f"expected a rational, found {found!r}", self.text, start)
        try:
            return parse_rational(token)
        except ValueError:
            raise DomainParseError(f"bad rational token {token!r}", self.text, start) from None

    def integer(self) -> int:
        q = self.rational()
        if q.denominator != 1:
            raise DomainParseError(f"expected an integer, found {format_rational(q)!r}", self.text, self.pos)
        return q.numerator

    def done(self) -> None:
        self._skip_ws()
        if self.pos < len(self.text):
            raise DomainParseError(
                f"unexpected trailing input {self.text[self.pos:]!r}", self.text, self.pos
            )


def _parse_domain(sc: _Scanner) -> DomainSpec:
    name, start = sc.name()
    kind = name.lower()
    if kind == "e":
        sc.expect("(")
        a = sc.rational()
        sc.expect(",")
        b = sc.rational()
        sc.expect(")")
        return Ellipsoid(a, b)
    if kind == "p":
        sc.expect("(")
        a = sc.rational()
        sc.expect(",")
        b = sc.rational()
        sc.expect(")")
        return Polydisk(a, b)
    if kind == "sum":
        sc.expect("(")
        e1 = _parse_domain(sc)
        sc.expect(",")
        e2 = _parse_domain(sc)
        sc.expect(")")
        if not isinstance(e1, Ellipsoid) or not isinstance(e2, Ellipsoid):
            raise DomainParseError("sum(...) takes two ellipsoids", sc.text, start)
        return EllipsoidSum.of(e1, e2)
    if kind == "prod":
        sc.expect("(")
        inner = _parse_domain(sc)
        sc.expect(",")
        m = sc.integer()
        sc.expect(",")
        r = sc.rational()
        sc.expect(")")
        if isinstance(inner, ProductWithBall):
            raise DomainParseError("prod(...) cannot nest another prod", sc.text, start)
        return ProductWithBall(inner, m, r)
    raise DomainParseError(f"unknown domain kind {name!r}", sc.text, start)


def parse_domain(text: str) -> DomainSpec:
    """Parse a domain literal such as ``sum(E(3/2,1),E(1,3/2))``."""
    sc = _Scanner(text)
    domain = _parse_domain(sc)
    sc.done()
    return domain


def format_domain(domain: DomainSpec) -> str:
    """Inverse of parse_domain, canonical spacing."""
    if isinstance(domain, Ellipsoid):
        return f"E({format_rational(domain.a)},{format_rational(domain.b)})"
    if isinstance(domain, Polydisk):
        return f"P({format_rational(domain.a)},{format_rational(domain.b)})"
    if isinstance(domain, EllipsoidSum):
        e1, e2 = domain.pair.first, domain.pair.second
        return f"sum({format_domain(e1)},{format_domain(e2)})"
    if isinstance(domain, ProductWithBall):
        return f"prod({format_domain(domain.inner)},{domain.m},{format_rational(domain.R)})"
    raise TypeError(f"unsupported domain: {domain!r}")
