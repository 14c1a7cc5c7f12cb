"""Places of P^1 over F_q and exact zeta values at negative integers.

Everything here is exact: values are ``fractions.Fraction`` and the
zeta function of a division algebra is held as a rational function in
u = q^(-s).  An argument ``i`` always stands for s = -i.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import TYPE_CHECKING, Iterable, Sequence

from .ff_poly import Poly, PrimePower, count_monic_irreducibles, format_poly, is_irreducible, parse_poly

if TYPE_CHECKING:
    from .algebra import DivisionAlgebraSpec


class PoleError(ValueError):
    """Raised for s = -i with i <= 0, where the zeta functions have poles."""


@dataclass(frozen=True)
class Place:
    """A closed point of P^1 over F_q: infinity (poly None) or a monic irreducible."""

    q: int
    poly: Poly | None = None

    def __post_init__(self):
        PrimePower.of(self.q)
        if self.poly is not None:
            if self.poly.q != self.q:
                raise ValueError(f"place over F_{self.q} given a polynomial over F_{self.poly.q}")
            if not self.poly.is_monic or self.poly.degree < 1 or not is_irreducible(self.poly):
                raise ValueError(f"{self.poly} is not a monic irreducible polynomial")

    @classmethod
    def infinity(cls, q: int) -> "Place":
        return cls(q, None)

    @classmethod
    def parse(cls, text: str, q: int) -> "Place":
        text = text.strip()
        if text == "inf":
            return cls(q, None)
        return cls(q, parse_poly(text, q))

    @property
    def is_infinity(self) -> bool:
        return self.poly is None

    @property
    def deg(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    @property
    def q_x(self) -> int:
        return self.q**self.deg

    def sort_key(self) -> tuple:
        if self.poly is None:
            return (0, 0, 0)
        return (1,) + self.poly.sort_key()

    def __lt__(self, other: "Place") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return "inf" if self.poly is None else format_poly(self.poly)


def _check_i(i: int):
    if i <= 0:
        raise PoleError(f"s = {-i} is not a negative integer (i must be >= 1)")


def zeta_local_neg(x: Place, i: int) -> Fraction:
    """zeta_x(-i) = 1 / (1 - q_x^i)."""
    _check_i(i)
    return Fraction(1, 1 - x.q_x**i)


def zeta_global_neg(q: "int | PrimePower", i: int) -> Fraction:
    """zeta_F(-i) = 1 / ((1 - q^i)(1 - q^(i+1))) for F = F_q(T)."""
    _check_i(i)
    q = PrimePower.of(q).q
    return Fraction(1, (1 - q**i) * (1 - q ** (i + 1)))


def zeta_partial_neg(q: "int | PrimePower", S: Iterable[Place], i: int) -> Fraction:
    """zeta_F^S(-i): the global value with the Euler factors at S divided out."""
    _check_i(i)
    q = PrimePower.of(q).q
    S = list(S)
    if len(set(S)) != len(S):
        raise ValueError("duplicate places in S")
    value = zeta_global_neg(q, i)
    for x in S:
        if x.q != q:
            raise ValueError(f"place {x} is not over F_{q}")
        value *= 1 - x.q_x**i
    return value


# ---------------------------------------------------------------------
# Euler product, as truncated integer power series in u
# ---------------------------------------------------------------------


def series_mul(a: Sequence[int], b: Sequence[int], N: int) -> list[int]:
    out = [0] * (N + 1)
    for i, x in enumerate(a[: N + 1]):
        if x:
            for j, y in enumerate(b[: N + 1 - i]):
                out[i + j] += x * y
    return out


def _inverse_power_series(m: int, count: int, N: int) -> list[int]:
    # (1 - u^m)^(-count) = sum_k C(count + k - 1, k) u^(mk)
    out = [0] * (N + 1)
    for k in range(N // m + 1):
        out[m * k] = comb(count + k - 1, k)
    return out


def euler_product_series(q: "int | PrimePower", N: int, include_infinity: bool = True) -> list[int]:
    """Coefficients of prod_{deg x <= N} (1 - u^deg x)^(-1) modulo u^(N+1)."""
    q = PrimePower.of(q).q
    acc = [1] + [0] * N
    for m in range(1, N + 1):
        count = count_monic_irreducibles(q, m)
        if m == 1 and include_infinity:
            count += 1
        acc = series_mul(acc, _inverse_power_series(m, count, N), N)
    return acc


def closed_form_series(q: "int | PrimePower", N: int) -> list[int]:
    """Coefficients of 1/((1-u)(1-qu)) modulo u^(N+1)."""
    q = PrimePower.of(q).q
    geometric_1 = [1] * (N + 1)
    geometric_q = [q**k for k in range(N + 1)]
    return series_mul(geometric_1, geometric_q, N)


def euler_product_check(q: "int | PrimePower", N: int, include_infinity: bool = True) -> bool:
    """Compare the Euler product with the closed form, coefficient by coefficient, mod u^(N+1)."""
    if N < 1:
        raise ValueError("order must be >= 1")
    return euler_product_series(q, N, include_infinity) == closed_form_series(q, N)


# ---------------------------------------------------------------------
# Rational functions over Q in one variable u
# ---------------------------------------------------------------------


def _qtrim(c: list[Fraction]) -> tuple[Fraction, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class QPoly:
    """Polynomial in u with rational coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _qtrim([Fraction(c) for c in self.coeffs]))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __mul__(self, other: "QPoly") -> "QPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return QPoly(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return QPoly(tuple(out))

    def __sub__(self, other: "QPoly") -> "QPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return QPoly(tuple(x - y for x, y in zip(a, b)))

    def scale(self, c: Fraction) -> "QPoly":
        return QPoly(tuple(c * x for x in self.coeffs))

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        if other.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        r = list(self.coeffs)
        db = other.degree
        if len(r) - 1 < db:
            return QPoly(()), self
        qt = [Fraction(0)] * (len(r) - db)
        lead = other.coeffs[-1]
        for k in range(len(r) - 1, db - 1, -1):
            f = r[k] / lead
            qt[k - db] = f
            if f:
                for j in range(db + 1):
                    r[k - db + j] -= f * other.coeffs[j]
        return QPoly(tuple(qt)), QPoly(tuple(r[:db]))

    def __call__(self, u: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc

    def root_multiplicity(self, u0: Fraction) -> int:
        if self.is_zero:
            raise ValueError("the zero polynomial has every root")
        linear = QPoly((-Fraction(u0), Fraction(1)))
        k, f = 0, self
        while True:
            qt, r = f.divmod(linear)
            if not r.is_zero:
                return k
            k, f = k + 1, qt

    def monic(self) -> "QPoly":
        return self.scale(1 / self.coeffs[-1])


def qpoly_gcd(a: QPoly, b: QPoly) -> QPoly:
    while not b.is_zero:
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero else a


@dataclass(frozen=True)
class RationalFunctionQ:
    """num/den in lowest terms, normalized so that den has constant term 1
    (or leading coefficient 1 when den(0) = 0)."""

    num: QPoly
    den: QPoly

    def __post_init__(self):
        if self.den.is_zero:
            raise ZeroDivisionError("zero denominator")
        num, den = self.num, self.den
        g = qpoly_gcd(num, den) if not num.is_zero else den
        if g.degree > 0:
            num, den = num.divmod(g)[0], den.divmod(g)[0]
        if num.is_zero:
            den = QPoly((Fraction(1),))
        c = den.coeffs[0] if den.coeffs[0] != 0 else den.coeffs[-1]
        object.__setattr__(self, "num", num.scale(1 / c))
        object.__setattr__(self, "den", den.scale(1 / c))

    @classmethod
    def product(cls, nums: Iterable[QPoly], dens: Iterable[QPoly]) -> "RationalFunctionQ":
        n = QPoly((Fraction(1),))
        for f in nums:
            n = n * f
        d = QPoly((Fraction(1),))
        for f in dens:
            d = d * f
        return cls(n, d)

    def pole_order(self, u0: Fraction) -> int:
        """Order of the pole at u0 (negative for a zero)."""
        if self.num.is_zero:
            raise ValueError("the zero function has no pole order")
        return self.den.root_multiplicity(u0) - self.num.root_multiplicity(u0)

    def __call__(self, u: Fraction) -> Fraction:
        return self.num(u) / self.den(u)

    def __str__(self):
        return f"({_fmt_qpoly(self.num)}) / ({_fmt_qpoly(self.den)})"


def _fmt_qpoly(f: QPoly) -> str:
    if f.is_zero:
        return "0"
    terms = []
    for k, c in enumerate(f.coeffs):
        if c:
            terms.append(str(c) if k == 0 else f"{c}*u" + (f"^{k}" if k > 1 else ""))
    return " + ".join(terms)


def _one_minus(c: int, k: int) -> QPoly:
    # 1 - c u^k
    out = [Fraction(0)] * (k + 1)
    out[0] += 1
    out[k] -= c
    return QPoly(tuple(out))


def zeta_division_rational_function(spec: "DivisionAlgebraSpec", q: "int | PrimePower | None" = None) -> RationalFunctionQ:
    """zeta_D(s) as an exact rational function of u = q^(-s).

    Split places contribute zeta_x(s) zeta_x(s-1) ... zeta_x(s-d+1), which
    over all places multiplies out to prod_i zeta_F(s-i); a ramified place
    contributes only zeta_x(s), so its split factors are divided back out.
    """
    R = spec.validate()
    q = spec.q if q is None else PrimePower.of(q).q
    if q != spec.q:
        raise ValueError(f"spec is over F_{spec.q}, not F_{q}")
    d = spec.d
    nums: list[QPoly] = []
    dens: list[QPoly] = []
    for i in range(d):
        dens += [_one_minus(q**i, 1), _one_minus(q ** (i + 1), 1)]
    for x in sorted(R):
        dens.append(_one_minus(1, x.deg))
        for i in range(d):
            nums.append(_one_minus(x.q_x**i, x.deg))
    return RationalFunctionQ.product(nums, dens)


def volume_residue_oracle(spec: "DivisionAlgebraSpec", q: "int | PrimePower | None" = None) -> Fraction:
    """Volume of G(F)\\G^1(A) recovered from the residue of zeta_D at s = 0.

    Near s = 0, 1 - u = s log q + O(s^2), so Res_{s=0} zeta_D = c / log q
    with c = lim_{u->1} (1-u) zeta_D.  The residue also equals
    -Vol / log q, hence Vol = -c and log q never has to be evaluated.
    """
    f = zeta_division_rational_function(spec, q)
    one = Fraction(1)
    order = f.pole_order(one)
    if order != 1:
        raise ArithmeticError(f"zeta_D has a pole of order {order} at u = 1, expected a simple pole")
    # den = (u - 1) * rest, so (1 - u) * num / den = -num / rest
    rest, r = f.den.divmod(QPoly((-one, one)))
    assert r.is_zero
    c = -f.num(one) / rest(one)
    return -c
