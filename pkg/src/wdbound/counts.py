"""Closed-form counts for the quotient modular varieties M-bar of D-elliptic sheaves.

Notation: d is the dimension parameter, R the ramification set, o the
fibre place (q_o = #F_o), p the level prime with Q = q^deg p.

Sign bookkeeping.  zeta_F^S(-i) has sign (-1)^|S|, so the product over
i = 1..d-1 has sign (-1)^(|S|(d-1)).  For odd d this is +1; for even d
the algebra forces |R| even, so |R| + 2 is even as well.  A negative
count is therefore a bug and raised as such.

Etale degree.  The step from the asymptotic for h_I to the one for
h-bar_I divides by the degree of M -> M-bar.  The two asymptotic
formulas agree only when that degree is the group index
#(F_p^x / F_q^x) = (Q - 1)/(q - 1), which is what is used here; the
field degree [F_p : F_q] = deg p would not reconcile them.

The h values are asymptotic (h ~ ...), never exact Betti sums of a
specific level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .admissible import AdmissibleLevel, quotient_order
from .algebra import DivisionAlgebraSpec, InvalidAlgebraError
from .ff_poly import Poly, PrimePower
from .zeta import Place, zeta_partial_neg


class PositivityError(ArithmeticError):
    pass


def gl_order(d: int, Q: int) -> int:
    if d < 1 or Q < 2:
        raise ValueError("need d >= 1 and Q >= 2")
    out = 1
    for i in range(d):
        out *= Q**d - Q**i
    return out


def pgl_order(d: int, Q: int) -> int:
    return gl_order(d, Q) // (Q - 1)


def component_count(q: "int | PrimePower", p: Poly) -> int:
    """Number of geometric components of M_{I,eta}: #(A/p)^x / F_q^x."""
    q = PrimePower.of(q).q
    return quotient_order(q, p.degree)


def volume_g1(spec: DivisionAlgebraSpec) -> Fraction:
    """Vol(G(F)\\G^1(A)) = (1/(q-1)) prod_{i=1}^{d-1} zeta_F^R(-i)."""
    R = spec.validate()
    vol = Fraction(1, spec.q - 1)
    for i in range(1, spec.d):
        vol *= zeta_partial_neg(spec.q, R, i)
    return vol


@dataclass(frozen=True)
class ModuliConfig:
    spec: DivisionAlgebraSpec
    o: Place
    level: AdmissibleLevel

    def __post_init__(self):
        R = self.spec.validate()
        if self.spec.d < 2:
            raise InvalidAlgebraError([f"d = {self.spec.d}: the moduli problem needs d >= 2"])
        if self.o.is_infinity:
            raise InvalidAlgebraError(["o must be a finite place"])
        if self.o.q != self.spec.q:
            raise InvalidAlgebraError([f"o is over F_{self.o.q}, not F_{self.spec.q}"])
        if self.o in R:
            raise InvalidAlgebraError([f"o = {self.o} lies in R"])
        if self.level.d != self.spec.d:
            raise InvalidAlgebraError([f"level was checked for d = {self.level.d}, not {self.spec.d}"])
        needed = set(R) | {Place.infinity(self.q), self.o}
        if not needed <= set(self.level.excluded):
            raise InvalidAlgebraError(["level exclusions must contain R, inf and o"])

    @classmethod
    def build(cls, spec: DivisionAlgebraSpec, o: Place, prime: Poly) -> "ModuliConfig":
        R = spec.validate()
        excluded = frozenset(R) | {Place.infinity(spec.q), o}
        return cls(spec, o, AdmissibleLevel(prime, spec.d, excluded))

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def R(self) -> tuple[Place, ...]:
        return self.spec.support

    @property
    def q_o(self) -> int:
        return self.o.q_x

    @property
    def Q(self) -> int:
        return self.q**self.level.degree


def _partial_product(q: int, S, d: int) -> Fraction:
    out = Fraction(1)
    for i in range(1, d):
        out *= zeta_partial_neg(q, S, i)
    return out


class SupersingularCount(NamedTuple):
    value: Fraction
    exact: bool

    @property
    def count(self) -> "int | Fraction":
        return int(self.value) if self.exact else self.value


def supersingular_count(cfg: ModuliConfig) -> SupersingularCount:
    """#M-bar(F_o^(d)) = #PGL_d(F_p) prod_{i=1}^{d-1} zeta_F^S(-i), S = R + {inf, o}.

    Holds for all but finitely many levels; a non-integral value is
    returned with exact=False rather than rejected.
    """
    S = list(cfg.R) + [Place.infinity(cfg.q), cfg.o]
    value = pgl_order(cfg.d, cfg.Q) * _partial_product(cfg.q, S, cfg.d)
    if value <= 0:
        raise PositivityError(f"supersingular count {value} is not positive")
    return SupersingularCount(value, value.denominator == 1)


def asymptotic_h(cfg: ModuliConfig, barred: bool = True) -> Fraction:
    """Leading asymptotic of the total Betti number (h-bar_I if barred, else h_I)."""
    S = list(cfg.R) + [Place.infinity(cfg.q)]
    sign = (-1) ** (cfg.d - 1)
    zeta_part = _partial_product(cfg.q, S, cfg.d)
    if barred:
        value = sign * cfg.d * pgl_order(cfg.d, cfg.Q) * zeta_part
    else:
        value = sign * cfg.d * Fraction(gl_order(cfg.d, cfg.Q), cfg.q - 1) * zeta_part
    if value <= 0:
        raise PositivityError(f"asymptotic h = {value} is not positive")
    return value


def limit_ratio(d: int, q_o: int) -> Fraction:
    """(1/d) prod_{i=1}^{d-1} (q_o^i - 1)."""
    if d < 2 or q_o < 2:
        raise ValueError("need d >= 2 and q_o >= 2")
    return Fraction(math.prod(q_o**i - 1 for i in range(1, d)), d)


def wd_limit(d: int, q_o: int) -> int:
    if d < 2 or q_o < 2:
        raise ValueError("need d >= 2 and q_o >= 2")
    return q_o ** (d * (d - 1) // 2)


def ratio_exact(cfg: ModuliConfig) -> Fraction:
    return supersingular_count(cfg).value / asymptotic_h(cfg, barred=True)


# ---------------------------------------------------------------------
# Z[sqrt(n)] and the Weil-Deligne / Drinfeld-Vladut bounds
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class QuadExact:
    """a + b sqrt(radicand), canonical with b = 0 when the radicand is a perfect square."""

    a: Fraction
    b: Fraction
    radicand: int

    def __post_init__(self):
        if self.radicand < 1:
            raise ValueError("radicand must be positive")
        a, b = Fraction(self.a), Fraction(self.b)
        r = math.isqrt(self.radicand)
        if r * r == self.radicand:
            a, b = a + b * r, Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __add__(self, other: "QuadExact") -> "QuadExact":
        if other.radicand != self.radicand:
            raise ValueError("different quadratic rings")
        return QuadExact(self.a + other.a, self.b + other.b, self.radicand)

    def __sub__(self, other: "QuadExact") -> "QuadExact":
        return self + QuadExact(-other.a, -other.b, other.radicand)

    def scale(self, c: Fraction) -> "QuadExact":
        return QuadExact(self.a * c, self.b * c, self.radicand)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def sign(self) -> int:
        """Exact sign, comparing squares instead of evaluating sqrt."""
        a, b, n = self.a, self.b, self.radicand
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: the larger of a^2 and b^2 n wins
        lhs, rhs = a * a, b * b * n
        if lhs == rhs:
            return 0
        dominant = a if lhs > rhs else b
        return 1 if dominant > 0 else -1

    def __lt__(self, other: "QuadExact") -> bool:
        return (self - other).sign() < 0

    def to_fraction(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is irrational")
        return self.a

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.radicand)

    def __str__(self):
        a = _fmt_q(self.a)
        if self.b == 0:
            return a
        return f"{a}+{_fmt_q(self.b)}*sqrt({self.radicand})"


def _fmt_q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def half_power(base: int, k: int) -> QuadExact:
    """base^(k/2) in Z[sqrt(base)]."""
    if k % 2 == 0:
        return QuadExact(Fraction(base ** (k // 2)), Fraction(0), base)
    return QuadExact(Fraction(0), Fraction(base ** (k // 2)), base)


def dv_bound(q: int, n: int) -> QuadExact:
    """(q^(n/2) - 1)/2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (half_power(q, n) - QuadExact(Fraction(1), Fraction(0), q)).scale(Fraction(1, 2))


@dataclass(frozen=True)
class BettiVector:
    dims: tuple[int, ...]
    mu: int

    @property
    def d(self) -> int:
        return len(self.dims) // 2 + 1

    @property
    def total(self) -> int:
        return sum(self.dims)


def betti_vector(d: int, h_total: "int | Fraction") -> BettiVector:
    """Betti numbers of a (d-1)-dimensional quotient of Drinfeld's symmetric space.

    h^i = 1 for even i != d-1, 0 for odd i != d-1, and the middle
    degree carries d*mu (+1 when d is odd), with mu = h_total/d - 1.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    h = Fraction(h_total)
    if h.denominator != 1 or h.numerator % d:
        raise ValueError(f"h_total = {h} is not an integer divisible by d = {d}")
    if h < d:
        raise ValueError(f"h_total = {h} < d = {d}")
    mu = int(h) // d - 1
    top = 2 * (d - 1)
    dims = []
    for i in range(top + 1):
        if i == d - 1:
            dims.append(d * mu + (1 if d % 2 else 0))
        else:
            dims.append(0 if i % 2 else 1)
    return BettiVector(tuple(dims), mu)


def wd_bound(bv: BettiVector, q_o: int, n: int) -> QuadExact:
    """WD_n = sum_i q_o^(i n / 2) h^i."""
    if n < 1:
        raise ValueError("n must be >= 1")
    acc = QuadExact(Fraction(0), Fraction(0), q_o)
    for i, h in enumerate(bv.dims):
        if h:
            acc = acc + half_power(q_o, i * n).scale(Fraction(h))
    return acc
