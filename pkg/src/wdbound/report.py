"""Convergence tables and the d = 2 optimal-curves report."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from itertools import islice
from typing import Sequence

from .admissible import is_admissible_degree, iter_admissible
from .algebra import DivisionAlgebraSpec, InvalidAlgebraError
from .counts import (
    ModuliConfig,
    asymptotic_h,
    betti_vector,
    dv_bound,
    limit_ratio,
    supersingular_count,
    wd_bound,
    wd_limit,
)
from .ff_poly import DEFAULT_ENUM_BUDGET, PrimePower, format_poly
from .zeta import Place

NONE_ADMISSIBLE = "none admissible"


class NoAdmissibleLevelsError(ValueError):
    pass


def fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def decimal6(x: Fraction) -> str:
    """Six significant digits, rounded half-even from the exact value."""
    x = Fraction(x)
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    x = abs(x)
    e = len(str(x.numerator)) - len(str(x.denominator))
    while Fraction(10) ** e > x:
        e -= 1
    while Fraction(10) ** (e + 1) <= x:
        e += 1
    m = round(x / Fraction(10) ** (e - 5))
    if m == 10**6:
        m, e = 10**5, e + 1
    digits = str(m)
    if e < -5 or e >= 15:
        return f"{sign}{digits[0]}.{digits[1:]}e{e:+d}"
    if e >= 5:
        return sign + digits + "0" * (e - 5)
    if e < 0:
        return f"{sign}0.{'0' * (-e - 1)}{digits}"
    return f"{sign}{digits[: e + 1]}.{digits[e + 1:]}"


@dataclass(frozen=True)
class RunConfig:
    q: int
    d: int
    ramification: tuple[tuple[str, str], ...]
    o: str
    level_degrees: tuple[int, ...]
    format: str = "csv"
    out: str | None = None
    max_per_degree: int = 3

    @classmethod
    def from_json(cls, doc: "dict | str") -> "RunConfig":
        if isinstance(doc, str):
            doc = json.loads(doc)
        d = int(doc["d"])
        ram = []
        for entry in doc.get("ramification", []):
            if isinstance(entry, str):
                ram.append((entry, f"1/{d}"))
            else:
                ram.append((entry["place"], str(entry["inv"])))
        fmt = doc.get("format", "csv")
        if fmt not in ("csv", "json"):
            raise ValueError(f"unknown output format {fmt!r}")
        return cls(
            q=int(doc["q"]),
            d=d,
            ramification=tuple(ram),
            o=str(doc["o"]),
            level_degrees=tuple(int(n) for n in doc.get("level_degrees", ())),
            format=fmt,
            out=doc.get("out"),
            max_per_degree=int(doc.get("max_per_degree", 3)),
        )

    def algebra(self) -> DivisionAlgebraSpec:
        items = [(Place.parse(x, self.q), Fraction(a)) for x, a in self.ramification]
        spec = DivisionAlgebraSpec.from_map(self.d, self.q, items)
        spec.validate()
        return spec

    def place_o(self) -> Place:
        if self.o.strip() == "inf":
            raise InvalidAlgebraError(["o must be a finite place, not inf"])
        return Place.parse(self.o, self.q)


@dataclass(frozen=True)
class TableRow:
    level: str
    degree: int
    supersingular_count: str = ""
    asymptotic_h: str = ""
    ratio: str = ""
    limit_ratio: str = ""
    wd_ratio: str = ""
    wd_ratio_exact: str = ""
    wd_limit: str = ""
    genus_estimate: str = ""
    dv_limit: str = ""


@dataclass(frozen=True)
class CurveRow:
    level: str
    degree: int
    points: str = ""
    genus_estimate: str = ""
    points_per_genus: str = ""
    points_per_genus_exact: str = ""
    dv_limit: str = ""


def _levels(spec: DivisionAlgebraSpec, o: Place, degrees: Sequence[int], cap: int, budget: int):
    excluded = set(spec.support) | {Place.infinity(spec.q), o}
    for n in degrees:
        if n < 1:
            raise ValueError(f"level degree {n} must be >= 1")
        yield n, list(islice(iter_admissible(spec.q, spec.d, [n], excluded, budget), cap))


def table_row(cfg: ModuliConfig) -> TableRow:
    count = supersingular_count(cfg)
    h = asymptotic_h(cfg, barred=True)
    d, q_o = cfg.d, cfg.q_o
    bv = betti_vector(d, h)
    # i*d is even for every nonzero Betti number here, so WD_d is rational
    wd_ratio = wd_bound(bv, q_o, d).to_fraction() / h
    genus = dv = ""
    if d == 2:
        genus = fmt_rational((h - 2) / 2)
        dv = fmt_rational(dv_bound(q_o, 2).to_fraction())
    return TableRow(
        level=format_poly(cfg.level.prime),
        degree=cfg.level.degree,
        supersingular_count=fmt_rational(count.value),
        asymptotic_h=fmt_rational(h),
        ratio=fmt_rational(count.value / h),
        limit_ratio=fmt_rational(limit_ratio(d, q_o)),
        wd_ratio=decimal6(wd_ratio),
        wd_ratio_exact=fmt_rational(wd_ratio),
        wd_limit=str(wd_limit(d, q_o)),
        genus_estimate=genus,
        dv_limit=dv,
    )


def build_convergence_table(cfg: RunConfig, budget: int = DEFAULT_ENUM_BUDGET) -> list[TableRow]:
    """One row per admissible level (first max_per_degree per degree), sorted by (degree, polynomial).

    Degrees without admissible primes get an explicit placeholder row.
    """
    spec = cfg.algebra()
    o = cfg.place_o()
    rows: list[TableRow] = []
    found = False
    for n, primes in _levels(spec, o, sorted(set(cfg.level_degrees)), cfg.max_per_degree, budget):
        if not primes:
            rows.append(TableRow(level=NONE_ADMISSIBLE, degree=n))
            continue
        found = True
        for prime in primes:
            rows.append(table_row(ModuliConfig.build(spec, o, prime)))
    if not found:
        reason = []
        for n in sorted(set(cfg.level_degrees)):
            if not is_admissible_degree(spec.q, spec.d, n):
                reason.append(f"degree {n}: gcd({spec.d}, ({spec.q}^{n}-1)/({spec.q}-1)) != 1")
        raise NoAdmissibleLevelsError("no admissible levels in the requested degrees" + (": " + "; ".join(reason) if reason else ""))
    return rows


def optimal_curves_report(q: int, R: Sequence[Place], o: Place, degrees: Sequence[int], max_per_degree: int = 3, budget: int = DEFAULT_ENUM_BUDGET) -> list[CurveRow]:
    """d = 2, deg o = 1: curves over F_{q^2} whose points/genus tends to q - 1."""
    q = PrimePower.of(q).q
    if o.is_infinity or o.deg != 1:
        raise InvalidAlgebraError([f"o = {o} must be a finite place of degree 1"])
    spec = DivisionAlgebraSpec.from_map(2, q, [(x, Fraction(1, 2)) for x in R])
    spec.validate()
    rows: list[CurveRow] = []
    found = False
    for n, primes in _levels(spec, o, sorted(set(degrees)), max_per_degree, budget):
        if not primes:
            rows.append(CurveRow(level=NONE_ADMISSIBLE, degree=n))
            continue
        found = True
        for prime in primes:
            cfg = ModuliConfig.build(spec, o, prime)
            points = supersingular_count(cfg).value
            genus = (asymptotic_h(cfg, barred=True) - 2) / 2
            ppg = points / genus
            rows.append(
                CurveRow(
                    level=format_poly(prime),
                    degree=n,
                    points=fmt_rational(points),
                    genus_estimate=fmt_rational(genus),
                    points_per_genus=decimal6(ppg),
                    points_per_genus_exact=fmt_rational(ppg),
                    dv_limit=str(q - 1),
                )
            )
    if not found:
        raise NoAdmissibleLevelsError("no admissible levels in the requested degrees")
    return rows


def render(rows: Sequence, fmt: str) -> str:
    if not rows:
        return "" if fmt == "csv" else "[]\n"
    names = [f.name for f in fields(rows[0])]
    if fmt == "json":
        return json.dumps([asdict(r) for r in rows], indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown output format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    for r in rows:
        writer.writerow([getattr(r, n) for n in names])
    return buf.getvalue()
