"""Admissible primes of A = F_q[T].

A prime p is admissible for d when x -> x^d is an automorphism of
(A/p)^x / F_q^x.  (A/p)^x is cyclic of order q^n - 1 (n = deg p), so the
quotient is cyclic of order (q^n - 1)/(q - 1), and the d-th power map on
a finite cyclic group is bijective exactly when d is prime to its order.
The verdict therefore depends only on deg p.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable

from .ff_poly import (
    DEFAULT_ENUM_BUDGET,
    BudgetExceededError,
    Poly,
    PrimePower,
    count_monic_irreducibles,
    is_irreducible,
    iter_monic_irreducibles,
)
from .zeta import Place


class InadmissibleLevelError(ValueError):
    pass


def quotient_order(q: int, n: int) -> int:
    return (q**n - 1) // (q - 1)


def is_admissible_degree(q: int, d: int, n: int) -> bool:
    return gcd(d, quotient_order(q, n)) == 1


def is_admissible_prime(p: Poly, d: int) -> bool:
    if d < 1:
        raise ValueError("d must be >= 1")
    if not p.is_monic or p.degree < 1:
        raise ValueError(f"{p} is not monic of positive degree")
    if not is_irreducible(p):
        raise ValueError(f"{p} is reducible")
    return is_admissible_degree(p.q, d, p.degree)


def _excluded_polys(excluded: Iterable[Place]) -> set[Poly]:
    return {x.poly for x in excluded if not x.is_infinity}


def iter_admissible(q: "int | PrimePower", d: int, degrees: Iterable[int], excluded: Iterable[Place] = (), budget: int = DEFAULT_ENUM_BUDGET):
    """Yield admissible primes outside ``excluded``, by degree then lexicographically."""
    q = PrimePower.of(q).q
    skip = _excluded_polys(excluded)
    for n in degrees:
        if not is_admissible_degree(q, d, n):
            continue
        for f in iter_monic_irreducibles(q, n, budget):
            if f not in skip:
                yield f


def enumerate_admissible(q: "int | PrimePower", d: int, max_deg: int, excluded: Iterable[Place] = (), budget: int = DEFAULT_ENUM_BUDGET) -> list[Poly]:
    q = PrimePower.of(q).q
    if q**max_deg > budget:
        raise BudgetExceededError(f"{q}^{max_deg} candidates exceed the enumeration budget {budget}")
    return list(iter_admissible(q, d, range(1, max_deg + 1), excluded, budget))


def admissible_density(q: "int | PrimePower", d: int, n: int, budget: int = DEFAULT_ENUM_BUDGET) -> tuple[int, int]:
    """(admissible count, total) over the monic irreducibles of degree n, prime by prime."""
    q = PrimePower.of(q).q
    primes = list(iter_monic_irreducibles(q, n, budget))
    admissible = sum(1 for f in primes if is_admissible_prime(f, d))
    total = count_monic_irreducibles(q, n)
    return admissible, total


@dataclass(frozen=True)
class AdmissibleLevel:
    """Level I = Spec(A/p) for an admissible prime p avoiding the excluded places."""

    prime: Poly
    d: int
    excluded: frozenset[Place]

    def __post_init__(self):
        place = Place(self.prime.q, self.prime)
        if place in self.excluded:
            raise InadmissibleLevelError(f"level {self.prime} meets the excluded places")
        if not is_admissible_prime(self.prime, self.d):
            raise InadmissibleLevelError(
                f"{self.prime} is not admissible for d = {self.d}: "
                f"gcd({self.d}, {quotient_order(self.prime.q, self.prime.degree)}) != 1"
            )

    @property
    def degree(self) -> int:
        return self.prime.degree

    @property
    def place(self) -> Place:
        return Place(self.prime.q, self.prime)
