"""Central division algebras over F_q(T) described by their local invariants.

A ``DivisionAlgebraSpec`` is a finite map place -> Brauer invariant, with
invariants stored as Fractions canonicalized to [0, 1).  Types
(F~, Pi~) attached to isogeny classes are checked on abstract
local-degree data only; no field extension is ever constructed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .ff_poly import PrimePower
from .zeta import Place


class InvalidAlgebraError(ValueError):
    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class TypeDataError(ValueError):
    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def invariant(value: "Fraction | int | str") -> Fraction:
    """Reduce a Brauer invariant mod 1 into [0, 1)."""
    v = Fraction(value)
    return v - (v.numerator // v.denominator)


@dataclass(frozen=True)
class DivisionAlgebraSpec:
    d: int
    q: int
    ramification: tuple[tuple[Place, Fraction], ...]
    split_at_infinity: bool = True

    def __post_init__(self):
        q = PrimePower.of(self.q).q
        object.__setattr__(self, "q", q)
        items = tuple(sorted(((x, invariant(a)) for x, a in self.ramification), key=lambda t: t[0].sort_key()))
        object.__setattr__(self, "ramification", items)

    @classmethod
    def from_map(cls, d: int, q: int, invariants: "Mapping[Place, Fraction | str] | Iterable[tuple[Place, Fraction | str]]", split_at_infinity: bool = True) -> "DivisionAlgebraSpec":
        items = invariants.items() if isinstance(invariants, Mapping) else invariants
        return cls(d, q, tuple((x, invariant(a)) for x, a in items), split_at_infinity)

    @classmethod
    def from_json(cls, doc: "dict | str", q: int | None = None) -> "DivisionAlgebraSpec":
        """Read {"d": 2, "q": 3, "ramification": [{"place": "T", "inv": "1/2"}, ...]}.

        Bare place strings in the list get the invariant 1/d.
        """
        if isinstance(doc, str):
            doc = json.loads(doc)
        q = doc.get("q", q)
        if q is None:
            raise InvalidAlgebraError(["no field size q given"])
        d = int(doc["d"])
        items = []
        for entry in doc.get("ramification", []):
            if isinstance(entry, str):
                items.append((Place.parse(entry, q), Fraction(1, d)))
            else:
                items.append((Place.parse(entry["place"], q), Fraction(entry["inv"])))
        return cls.from_map(d, q, items)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "q": self.q,
            "ramification": [{"place": str(x), "inv": _fmt_inv(a)} for x, a in self.ramification],
        }

    @property
    def invariants(self) -> dict[Place, Fraction]:
        return dict(self.ramification)

    def inv_at(self, x: Place) -> Fraction:
        return self.invariants.get(x, Fraction(0))

    @property
    def support(self) -> tuple[Place, ...]:
        return tuple(x for x, a in self.ramification if a != 0)

    def validate(self) -> tuple[Place, ...]:
        """Return the ramification set R, or raise InvalidAlgebraError listing every violation."""
        errors = []
        d = self.d
        if d < 1:
            errors.append(f"d = {d} must be >= 1")
        places = [x for x, _ in self.ramification]
        if len(set(places)) != len(places):
            errors.append("a place is listed twice")
        for x, a in self.ramification:
            if x.q != self.q:
                errors.append(f"place {x} is over F_{x.q}, not F_{self.q}")
            if a.denominator != d:
                errors.append(f"invariant {_fmt_inv(a)} at {x} does not have denominator exactly {d}")
            if x.is_infinity and self.split_at_infinity:
                errors.append("the algebra must be split at inf")
        total = sum((a for _, a in self.ramification), Fraction(0))
        if total.denominator != 1:
            errors.append(f"invariant sum {_fmt_inv(invariant(total))} is not 0 mod 1")
        R = self.support
        if d >= 2 and not R:
            errors.append(f"no ramified places: a split algebra is M_{d}(F), not a division algebra")
        if d >= 2 and d % 2 == 0 and len(R) % 2 == 1:
            # each a/d with gcd(a, d) = 1 has odd a; an odd count of them cannot sum to 0 mod 1
            errors.append(f"d = {d} is even but |R| = {len(R)} is odd")
        if errors:
            raise InvalidAlgebraError(errors)
        return R


def validate_algebra(spec: DivisionAlgebraSpec) -> tuple[Place, ...]:
    return spec.validate()


def dbar_spec(spec: DivisionAlgebraSpec, o: Place) -> DivisionAlgebraSpec:
    """The algebra with inv_o = -1/d, inv_inf = 1/d and inv_x(D) elsewhere."""
    R = spec.validate()
    if o.is_infinity:
        raise InvalidAlgebraError(["o must be a finite place"])
    if o in R:
        raise InvalidAlgebraError([f"o = {o} lies in the ramification set"])
    d = spec.d
    items = list(spec.ramification) + [(o, invariant(Fraction(-1, d))), (Place.infinity(spec.q), invariant(Fraction(1, d)))]
    out = DivisionAlgebraSpec(d, spec.q, tuple(items), split_at_infinity=False)
    out.validate()
    return out


def _fmt_inv(a: Fraction) -> str:
    return f"{a.numerator}/{a.denominator}"


# ---------------------------------------------------------------------
# (D, inf, o)-types on abstract data
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class FibrePlace:
    """A place x~ of F~ lying over the place ``over`` of F.

    local_degree is [F~_x~ : F_x]; residue_degree is deg(x~) over F_q;
    valuation is v_x~(Pi~).  role marks the distinguished places
    ("inf" for inf~, "o" for o~).
    """

    over: Place
    local_degree: int
    residue_degree: int
    valuation: Fraction = Fraction(0)
    role: str | None = None


@dataclass(frozen=True)
class TypeData:
    ext_degree: int
    places: tuple[FibrePlace, ...]

    @classmethod
    def from_json(cls, doc: dict, q: int) -> "TypeData":
        places = []
        for entry in doc["places"]:
            over = Place.parse(entry["over"], q)
            places.append(
                FibrePlace(
                    over=over,
                    local_degree=int(entry["local_degree"]),
                    residue_degree=int(entry.get("residue_degree", over.deg * int(entry["local_degree"]))),
                    valuation=Fraction(entry.get("valuation", "0")),
                    role=entry.get("role"),
                )
            )
        return cls(int(doc["ext_degree"]), tuple(places))

    @classmethod
    def supersingular(cls, spec: DivisionAlgebraSpec, o: Place) -> "TypeData":
        """The type with F~ = F: every local degree is 1 and Pi has a pole of order 1/d at inf."""
        d = spec.d
        places = [
            FibrePlace(Place.infinity(spec.q), 1, 1, Fraction(-1, d), "inf"),
            FibrePlace(o, 1, o.deg, Fraction(1, d * o.deg), "o"),
        ]
        places += [FibrePlace(x, 1, x.deg) for x in spec.support]
        return cls(1, tuple(places))


@dataclass(frozen=True)
class TypeVerdict:
    h: int
    delta_invariants: tuple[tuple[str, Fraction], ...]
    supersingular: bool
    unverified: tuple[str, ...] = field(default=("Pi~ generates no proper subfield of F~",))

    def to_json(self) -> dict:
        return {
            "verdict": "accepted",
            "h": self.h,
            "supersingular": self.supersingular,
            "delta_invariants": {k: _fmt_inv(a) for k, a in self.delta_invariants},
            "unverified": list(self.unverified),
        }


def validate_type(data: TypeData, spec: DivisionAlgebraSpec, o: Place) -> TypeVerdict:
    """Check the (D, inf, o)-type conditions that are expressible in degrees and valuations.

    The local-integrality condition is tested at every supplied place,
    ramified or not.  Full fibres are required over each ramified place
    so that the invariants of Delta can be summed.
    """
    R = spec.validate()
    d, n = spec.d, data.ext_degree
    errors: list[str] = []
    if n < 1:
        raise TypeDataError([f"[F~:F] = {n} must be >= 1"])
    if d % n:
        errors.append(f"[F~:F] = {n} does not divide d = {d}")

    by_base: dict[Place, list[FibrePlace]] = {}
    for fp in data.places:
        by_base.setdefault(fp.over, []).append(fp)
        if fp.local_degree < 1 or fp.residue_degree < 1:
            errors.append(f"non-positive degree over {fp.over}")
        elif fp.residue_degree % fp.over.deg or fp.local_degree % (fp.residue_degree // fp.over.deg):
            errors.append(f"residue degree {fp.residue_degree} over {fp.over} is incompatible with local degree {fp.local_degree}")
        if fp.role not in (None, "inf", "o"):
            errors.append(f"unknown role {fp.role!r}")
    for x, fibre in by_base.items():
        total = sum(fp.local_degree for fp in fibre)
        if total > n:
            errors.append(f"local degrees over {x} sum to {total} > {n}")
        elif x in R and total != n:
            errors.append(f"fibre over ramified place {x} is incomplete ({total} of {n})")
    for x in R:
        if x not in by_base:
            errors.append(f"no fibre supplied over ramified place {x}")

    infs = [fp for fp in data.places if fp.role == "inf"]
    inf_fibre = by_base.get(Place.infinity(spec.q), [])
    if len(infs) != 1 or not infs[0].over.is_infinity:
        errors.append("exactly one place marked inf, lying over inf, is required")
    elif len(inf_fibre) != 1 or infs[0].local_degree != n:
        errors.append("F_inf (x) F~ is not a field: inf must have a single place of local degree [F~:F]")
    else:
        inf_t = infs[0]
        if inf_t.residue_degree * inf_t.valuation != Fraction(-n, d):
            errors.append(f"deg(inf~) * v_inf~(Pi~) = {inf_t.residue_degree * inf_t.valuation} != -{n}/{d}")

    poles = [fp for fp in data.places if fp.role != "inf" and fp.valuation != 0]
    os_ = [fp for fp in data.places if fp.role == "o"]
    o_t = None
    if len(poles) != 1:
        errors.append(f"expected exactly one place besides inf~ with v(Pi~) != 0, found {len(poles)}")
    elif len(os_) != 1 or poles[0] is not os_[0]:
        errors.append("the place with v(Pi~) != 0 must be the one marked o")
    elif poles[0].over != o:
        errors.append(f"o~ lies over {poles[0].over}, not over o = {o}")
    else:
        o_t = poles[0]

    for fp in data.places:
        if n and (Fraction(d * fp.local_degree, n) * spec.inv_at(fp.over)).denominator != 1:
            errors.append(f"(d [F~_x~:F_x] / [F~:F]) inv_x(D) is not integral over {fp.over}")

    h = None
    if o_t is not None and n and not d % n:
        h_frac = Fraction(o_t.local_degree * d, n)
        if h_frac.denominator != 1 or h_frac <= 0:
            errors.append(f"h = {h_frac} is not a positive integer")
        else:
            h = int(h_frac)
    if errors:
        raise TypeDataError(errors)

    delta: list[tuple[str, Fraction]] = []
    for x, fibre in sorted(by_base.items(), key=lambda t: t[0].sort_key()):
        for k, fp in enumerate(fibre):
            if fp.role == "inf":
                a = invariant(Fraction(n, d))
            elif fp.role == "o":
                a = invariant(Fraction(-n, d))
            else:
                a = invariant(fp.local_degree * spec.inv_at(x))
            if a:
                label = str(x) if len(fibre) == 1 else f"{x}#{k}"
                delta.append((label, a))
    if sum((a for _, a in delta), Fraction(0)).denominator != 1:
        raise TypeDataError(["invariants of Delta do not sum to 0 mod 1"])
    return TypeVerdict(h=h, delta_invariants=tuple(delta), supersingular=(n == 1))
