"""Finite fields F_q and polynomials in F_q[T].

F_q with q = p^e is modelled as F_p[y]/(m(y)), where m is the
lexicographically smallest monic irreducible of degree e over F_p.
A field element is stored as a single integer code whose base-p digits
are its coefficient vector in y (lowest degree first), so for e = 1 the
code is just the residue mod p.

Polynomials in T are immutable tuples of such codes, lowest degree
first, with no trailing zeros.  The zero polynomial is the empty tuple.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

MAX_Q = 2**20
DEFAULT_ENUM_BUDGET = 10**7
ORACLE_SCALE = 10**6


class FieldMismatchError(ValueError):
    pass


class BudgetExceededError(ValueError):
    pass


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    m = 2
    while m * m <= n:
        while n % m == 0:
            out[m] = out.get(m, 0) + 1
            n //= m
        m += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n: int) -> list[int]:
    return sorted(_factor(n))


def mobius(n: int) -> int:
    fac = _factor(n)
    if any(k > 1 for k in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def divisors(n: int) -> list[int]:
    return [m for m in range(1, n + 1) if n % m == 0]


@dataclass(frozen=True)
class PrimePower:
    p: int
    e: int

    def __post_init__(self):
        if self.p < 2 or len(_factor(self.p)) != 1 or _factor(self.p)[self.p] != 1:
            raise ValueError(f"{self.p} is not prime")
        if self.e < 1:
            raise ValueError("exponent must be positive")
        if self.q > MAX_Q:
            raise ValueError(f"q = {self.q} exceeds the cap 2^20")

    @property
    def q(self) -> int:
        return self.p**self.e

    @classmethod
    def of(cls, q: "int | PrimePower") -> "PrimePower":
        if isinstance(q, PrimePower):
            return q
        if q < 2:
            raise ValueError(f"{q} is not a prime power")
        fac = _factor(q)
        if len(fac) != 1:
            raise ValueError(f"{q} is not a prime power")
        ((p, e),) = fac.items()
        return cls(p, e)


class GF:
    """The finite field F_q, elements encoded as ints in [0, q)."""

    def __init__(self, pp: PrimePower):
        self.pp = pp
        self.p, self.e, self.q = pp.p, pp.e, pp.q
        self.modulus: tuple[int, ...] = ()
        if self.e > 1:
            self.modulus = _smallest_irreducible_prime_field(self.p, self.e)
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._add_table: list[list[int]] | None = None
        self._tables_built = False

    def __repr__(self):
        return f"GF({self.q})"

    def __reduce__(self):
        return (field_of, (self.q,))

    # -- vector view -------------------------------------------------
    def to_vector(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def from_vector(self, v: Sequence[int]) -> int:
        if len(v) != self.e:
            raise ValueError(f"expected a length-{self.e} vector over F_{self.p}")
        code = 0
        for c in reversed(v):
            if not 0 <= c < self.p:
                raise ValueError(f"coefficient {c} not reduced mod {self.p}")
            code = code * self.p + c
        return code

    # -- arithmetic --------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        out, scale = 0, 1
        p = self.p
        while a or b:
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * scale
            scale *= p
        return out

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        out, scale = 0, 1
        while a:
            a, r = divmod(a, self.p)
            out += ((-r) % self.p) * scale
            scale *= self.p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        if not self._tables_built:
            self._build_tables()
        if self._log is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mul_direct(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.e == 1:
            return pow(a, -1, self.p)
        if not self._tables_built:
            self._build_tables()
        if self._log is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def pow(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def _mul_direct(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        va, vb = self.to_vector(a), self.to_vector(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(va):
            if x:
                for j, y in enumerate(vb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        m = self.modulus
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c:
                for j in range(e + 1):
                    prod[k - e + j] = (prod[k - e + j] - c * m[j]) % p
        return self.from_vector(prod[:e])

    def _build_tables(self):
        self._tables_built = True
        # log tables are only worth building below 2^16 elements
        if self.q > 2**16:
            return
        order = self.q - 1
        primes = prime_divisors(order)
        gen = None
        for g in range(2, self.q):
            if all(self._pow_direct(g, order // ell) != 1 for ell in primes):
                gen = g
                break
        if gen is None:  # q = 2 is prime-only, so unreachable for e > 1
            raise RuntimeError("no primitive element found")
        exp = [0] * order
        log = [0] * self.q
        x = 1
        for k in range(order):
            exp[k] = x
            log[x] = k
            x = self._mul_direct(x, gen)
        self._exp, self._log = exp, log
        if self.p != 2 and self.q <= 256:
            self._add_table = [[self._add_digits(a, b) for b in range(self.q)] for a in range(self.q)]

    def _add_digits(self, a: int, b: int) -> int:
        out, scale = 0, 1
        while a or b:
            a, ra = divmod(a, self.p)
            b, rb = divmod(b, self.p)
            out += ((ra + rb) % self.p) * scale
            scale *= self.p
        return out

    def _pow_direct(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self._mul_direct(result, base)
            base = self._mul_direct(base, base)
            k >>= 1
        return result

    def elements(self) -> range:
        return range(self.q)

    def format_element(self, a: int) -> str:
        if self.e == 1:
            return str(a)
        return "[" + ",".join(str(c) for c in self.to_vector(a)) + "]"


@functools.lru_cache(maxsize=None)
def field_of(q: int) -> GF:
    return GF(PrimePower.of(q))


def _smallest_irreducible_prime_field(p: int, e: int) -> tuple[int, ...]:
    F = field_of(p)
    for code in range(p**e):
        f = Poly.monic_from_code(F, e, code)
        if is_irreducible(f):
            return f.coeffs
    raise RuntimeError(f"no irreducible of degree {e} over F_{p}")


# ---------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------


def _trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Poly:
    """Polynomial over F_q, coefficients lowest degree first."""

    field: GF = dc_field(compare=False, repr=False)
    coeffs: tuple[int, ...]
    q: int = dc_field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.field.q)
        c = list(self.coeffs)
        if any(not 0 <= x < self.field.q for x in c):
            raise ValueError("coefficient out of range")
        object.__setattr__(self, "coeffs", _trim(c))

    @classmethod
    def of(cls, q: int, coeffs: Sequence[int]) -> "Poly":
        return cls(field_of(q), tuple(coeffs))

    @classmethod
    def T(cls, q: int) -> "Poly":
        return cls.of(q, (0, 1))

    @classmethod
    def monic_from_code(cls, F: GF, n: int, code: int) -> "Poly":
        """The monic degree-n polynomial whose lower coefficients are the base-q digits of code."""
        c = []
        for _ in range(n):
            code, r = divmod(code, F.q)
            c.append(r)
        c.append(1)
        return cls(F, tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def code(self) -> int:
        """Integer key sum c_i q^i; orders polynomials of equal degree lexicographically."""
        out = 0
        for c in reversed(self.coeffs):
            out = out * self.q + c
        return out

    def sort_key(self) -> tuple[int, int]:
        return (self.degree, self.code)

    def _check(self, other: "Poly"):
        if not isinstance(other, Poly):
            raise TypeError("polynomial expected")
        if other.q != self.q:
            raise FieldMismatchError(f"polynomials over F_{self.q} and F_{other.q}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        c = [F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]
        return Poly(F, tuple(c))

    def __neg__(self) -> "Poly":
        return Poly(self.field, tuple(self.field.neg(x) for x in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly(self.field, _mul(self.field, self.coeffs, other.coeffs))

    def scale(self, a: int) -> "Poly":
        return Poly(self.field, tuple(self.field.mul(a, x) for x in self.coeffs))

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        qt, r = _divmod(self.field, self.coeffs, other.coeffs)
        return Poly(self.field, qt), Poly(self.field, r)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        return Poly(self.field, _rem(self.field, self.coeffs, other.coeffs))

    def monic(self) -> "Poly":
        if self.is_zero:
            raise ZeroDivisionError("zero polynomial has no monic associate")
        return self.scale(self.field.inv(self.leading))

    def powmod(self, k: int, modulus: "Poly") -> "Poly":
        self._check(modulus)
        if modulus.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        F, m = self.field, modulus.coeffs
        result: tuple[int, ...] = _rem(F, (1,), m)
        base = _rem(F, self.coeffs, m)
        while k:
            if k & 1:
                result = _rem(F, _mul(F, result, base), m)
            base = _rem(F, _mul(F, base, base), m)
            k >>= 1
        return Poly(F, result)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r} over F_{self.q})"


def _mul(F: GF, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    if F.e == 1:
        p = F.p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return _trim([c % p for c in out])
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _trim(out)


def _divmod(F: GF, a: Sequence[int], b: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return (), tuple(r)
    inv_lead = F.inv(b[-1])
    qt = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if c == 0:
            continue
        f = F.mul(c, inv_lead)
        qt[k - db] = f
        for j in range(db + 1):
            if b[j]:
                r[k - db + j] = F.sub(r[k - db + j], F.mul(f, b[j]))
    return _trim(qt), _trim(r[:db])


def _rem(F: GF, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    db = len(b) - 1
    if len(a) - 1 < db:
        return tuple(a)
    if F.e == 1:
        p = F.p
        r = list(a)
        inv_lead = pow(b[-1], -1, p)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k] % p
            if c == 0:
                continue
            f = c * inv_lead % p
            base = k - db
            for j in range(db + 1):
                r[base + j] -= f * b[j]
        return _trim([x % p for x in r[:db]])
    return _divmod(F, a, b)[1]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) is the zero polynomial."""
    a._check(b)
    while not b.is_zero:
        a, b = b, a % b
    return a if a.is_zero else a.monic()


# ---------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------


def format_poly(f: Poly) -> str:
    if f.is_zero:
        return "0"
    F = f.field
    terms = []
    for k in range(f.degree, -1, -1):
        c = f.coeffs[k]
        if c == 0:
            continue
        if k == 0:
            terms.append(F.format_element(c))
            continue
        mono = "T" if k == 1 else f"T^{k}"
        terms.append(mono if c == 1 else f"{F.format_element(c)}*{mono}")
    return "+".join(terms)


_TERM = re.compile(r"^(?:(\d+|\[[\d,]+\])(?:\*(T(?:\^(\d+))?))?|(T(?:\^(\d+))?))$")


def parse_poly(s: str, q: int) -> Poly:
    """Parse 'T^3+2*T+1' (or '[1,2]*T^2+[0,1]' for q = p^e, e > 1).

    Terms must appear in strictly decreasing degree.
    """
    F = field_of(q)
    text = "".join(s.split())
    if not text:
        raise ValueError("empty polynomial string")
    if text == "0":
        return Poly(F, ())
    coeffs: dict[int, int] = {}
    last = None
    for term in text.split("+"):
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"malformed term {term!r} in {s!r}")
        coef_s, mono, exp_s, bare, bare_exp = m.groups()
        if bare is not None:
            c, k = 1, int(bare_exp) if bare_exp else 1
        else:
            c = _parse_coeff(coef_s, F)
            k = 0 if mono is None else (int(exp_s) if exp_s else 1)
            if c == 0:
                raise ValueError(f"zero coefficient written in {s!r}")
        if bare_exp == "1" or exp_s == "1" or bare_exp == "0" or exp_s == "0":
            raise ValueError(f"non-canonical exponent in {s!r}")
        if last is not None and k >= last:
            raise ValueError(f"monomials must be in decreasing degree: {s!r}")
        last = k
        coeffs[k] = c
    out = [0] * (max(coeffs) + 1)
    for k, c in coeffs.items():
        out[k] = c
    return Poly(F, tuple(out))


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on sep outside square brackets, so '[1,2]*T+1,T' gives two polynomials."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _parse_coeff(text: str, F: GF) -> int:
    if text.startswith("["):
        if F.e == 1:
            raise ValueError(f"vector coefficient {text} over the prime field F_{F.p}")
        return F.from_vector([int(x) for x in text[1:-1].split(",")])
    c = int(text)
    if not 0 <= c < F.p:
        raise ValueError(f"coefficient {c} not reduced mod {F.p}")
    return c


# ---------------------------------------------------------------------
# Irreducibility and enumeration
# ---------------------------------------------------------------------


def is_irreducible(f: Poly) -> bool:
    """Rabin's test: T^(q^n) = T mod f and gcd(T^(q^(n/l)) - T, f) = 1 for primes l | n."""
    if f.is_zero or f.degree < 1:
        raise ValueError("irreducibility needs a polynomial of degree >= 1")
    if not f.is_monic:
        raise ValueError("irreducibility test expects a monic polynomial")
    n, q = f.degree, f.q
    if n == 1:
        return True
    x = Poly(f.field, (0, 1))
    # frob[k] = T^(q^k) mod f
    frob = [x % f]
    for _ in range(n):
        frob.append(frob[-1].powmod(q, f))
    if frob[n] != frob[0]:
        return False
    for ell in prime_divisors(n):
        g = poly_gcd(frob[n // ell] - x, f)
        if g.degree != 0:
            return False
    return True


def count_monic_irreducibles(q: "int | PrimePower", n: int) -> int:
    """Necklace formula (1/n) sum_{m | n} mu(m) q^(n/m)."""
    q = PrimePower.of(q).q
    if n < 1:
        raise ValueError("degree must be >= 1")
    total = sum(mobius(m) * q ** (n // m) for m in divisors(n))
    return total // n


def iter_monic_irreducibles(q: "int | PrimePower", n: int, budget: int = DEFAULT_ENUM_BUDGET) -> Iterator[Poly]:
    """Yield monic irreducibles of degree n in lexicographic order.

    The candidate budget is checked before any work is done, so a lazy
    consumer that stops early still needs q^n <= budget.
    """
    q = PrimePower.of(q).q
    if n < 1:
        raise ValueError("degree must be >= 1")
    if q**n > budget:
        raise BudgetExceededError(f"{q}^{n} candidates exceed the enumeration budget {budget}")
    F = field_of(q)
    for code in range(q**n):
        f = Poly.monic_from_code(F, n, code)
        if is_irreducible(f):
            yield f


def enumerate_monic_irreducibles(q: "int | PrimePower", n: int, budget: int = DEFAULT_ENUM_BUDGET) -> list[Poly]:
    return list(iter_monic_irreducibles(q, n, budget))


# ---------------------------------------------------------------------
# Brute-force admissibility oracle
# ---------------------------------------------------------------------


def brute_force_is_admissible(p: Poly, d: int, scale_cap: int = ORACLE_SCALE) -> bool:
    """Decide whether x -> x^d permutes (A/p)^x / F_q^x by listing every residue class.

    Uses no group structure: each class of nonzero residues modulo
    scalars is represented by its monic member, the d-th power of that
    member is reduced mod p and normalized again, and the map is a
    bijection of the finite quotient iff its image has as many classes
    as the quotient.
    """
    return brute_force_admissible_many(p, [d], scale_cap)[d]


def brute_force_admissible_many(p: Poly, ds, scale_cap: int = ORACLE_SCALE) -> dict[int, bool]:
    """brute_force_is_admissible for several d at once, sharing the powers x^k."""
    ds = sorted(set(ds))
    if not ds or ds[0] < 1:
        raise ValueError("d must be >= 1")
    n, q = p.degree, p.q
    if q**n > scale_cap:
        raise BudgetExceededError(f"{q}^{n} residues exceed the oracle scale {scale_cap}")
    if not is_irreducible(p):
        raise ValueError(f"{p} is reducible")
    F = p.field
    m = p.coeffs
    inv = [0] + [F.inv(a) for a in range(1, q)]

    # every scalar class of nonzero residues has exactly one monic member of degree < n
    classes = []
    for k in range(n):
        for code in range(q**k):
            classes.append(tuple(_digits(code, q, k)) + (1,))
    images = {d: set() for d in ds}
    top = ds[-1]
    for rep in classes:
        acc = rep
        if 1 in images:
            images[1].add(rep)
        for k in range(2, top + 1):
            acc = _rem(F, _mul(F, acc, rep), m)
            if k in images:
                images[k].add(_normalize(F, list(acc), inv))
    return {d: len(images[d]) == len(classes) for d in ds}


def _digits(code: int, q: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        code, r = divmod(code, q)
        out.append(r)
    return out


def _normalize(F: GF, r: list[int], inv: list[int]) -> tuple[int, ...]:
    r = list(_trim(list(r)))
    lead = r[-1]
    if lead == 1:
        return tuple(r)
    s = inv[lead]
    return tuple(F.mul(s, x) for x in r)
