"""Oracle suite: every closed form is compared with an independent computation.

Failures are reported as data with a counterexample payload; nothing
here raises on a mismatch.
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from typing import Callable

from .admissible import is_admissible_degree, is_admissible_prime, iter_admissible
from .algebra import DivisionAlgebraSpec, dbar_spec
from .counts import (
    ModuliConfig,
    asymptotic_h,
    betti_vector,
    component_count,
    limit_ratio,
    pgl_order,
    ratio_exact,
    supersingular_count,
    volume_g1,
)
from .ff_poly import (
    Poly,
    brute_force_admissible_many,
    count_monic_irreducibles,
    enumerate_monic_irreducibles,
    field_of,
    is_irreducible,
    iter_monic_irreducibles,
)
from .zeta import Place, euler_product_check, volume_residue_oracle, zeta_partial_neg

SCALES = {
    "quick": {
        "euler_qs": (2, 3, 4, 5),
        "euler_N": 20,
        "necklace_qs": (2, 3, 4),
        "necklace_n": 5,
        "irreducible_q_n": ((2, 5), (3, 4)),
        "admissible_qs": (2, 3, 5),
        "admissible_ds": tuple(range(2, 9)),
        "admissible_cap": 200,
        "ratio_configs": 50,
    },
    "full": {
        "euler_qs": (2, 3, 4, 5),
        "euler_N": 20,
        "necklace_qs": (2, 3, 4),
        "necklace_n": 6,
        "irreducible_q_n": ((2, 5), (3, 5)),
        "admissible_qs": (2, 3, 5),
        "admissible_ds": tuple(range(2, 9)),
        "admissible_cap": 1000,
        "ratio_configs": 200,
    },
}


@dataclass
class OracleResult:
    name: str
    passed: bool
    cases: int
    seconds: float = 0.0
    counterexample: dict | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"oracle": self.name, "passed": self.passed, "cases": self.cases, "seconds": round(self.seconds, 3)}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class CheckReport:
    scale: str
    seed: int
    results: list[OracleResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "scale": self.scale,
            "seed": self.seed,
            "passed": self.passed,
            "oracles": [r.to_json() for r in self.results],
        }


# ---------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------


def trial_division_irreducible(f: Poly) -> bool:
    """Irreducible iff no monic polynomial of degree 1..deg(f)/2 divides f."""
    F = f.field
    for k in range(1, f.degree // 2 + 1):
        for code in range(F.q**k):
            g = Poly.monic_from_code(F, k, code)
            if (f % g).is_zero:
                return False
    return True


def all_monic(q: int, n: int):
    F = field_of(q)
    for code in range(q**n):
        yield Poly.monic_from_code(F, n, code)


# ---------------------------------------------------------------------
# Configuration generators
# ---------------------------------------------------------------------


def places_of_degree(q: int, n: int, limit: int | None = None) -> list[Place]:
    it = iter_monic_irreducibles(q, n)
    if limit is not None:
        it = islice(it, limit)
    return [Place(q, f) for f in it]


def _invariant_patterns(d: int) -> list[list[int]]:
    if d == 2:
        return [[1, 1], [1, 1, 1, 1]]
    if d == 3:
        return [[1, 2], [1, 1, 1], [1, 1, 2, 2]]
    if d == 4:
        return [[1, 3], [1, 1, 1, 1], [1, 3, 3, 1]]
    raise ValueError(d)


def volume_config_grid() -> list[DivisionAlgebraSpec]:
    """Specs over q in {2, 3, 4}, d in {2, 3, 4}, |R| <= 4, mixing place degrees 1 and 2."""
    specs = []
    for q in (2, 3, 4):
        deg1 = places_of_degree(q, 1)
        deg2 = places_of_degree(q, 2, 4)
        for d in (2, 3, 4):
            for pattern in _invariant_patterns(d):
                k = len(pattern)
                for mix in (0, 1):
                    # mix 0 leads with degree-1 places, mix 1 with degree-2 places
                    pool = (deg1 + deg2) if mix == 0 else (deg2 + deg1)
                    if mix == 0 and k <= len(deg1):
                        pool = deg1[: k - 1] + deg2[:1] if k > 1 else deg1
                    R = pool[:k]
                    if len(set(R)) < k:
                        continue
                    specs.append(DivisionAlgebraSpec.from_map(d, q, [(x, Fraction(a, d)) for x, a in zip(R, pattern)]))
    seen, out = set(), []
    for s in specs:
        key = (s.d, s.q, s.ramification)
        if key not in seen:
            seen.add(key)
            out.append(s)
    return out


def random_config(rng: random.Random, qs=(2, 3, 4, 5, 7, 8, 9), ds=(2, 3, 4), max_level_degree: int = 7) -> ModuliConfig:
    """Draw a valid ModuliConfig: random invariants, o and an admissible level outside R + {inf, o}."""
    while True:
        q, d = rng.choice(qs), rng.choice(ds)
        pool = places_of_degree(q, 1) + places_of_degree(q, 2, 6) + places_of_degree(q, 3, 4)
        k = rng.choice([2, 4] if d % 2 == 0 else [2, 3, 4])
        if k + 1 > len(pool):
            continue
        chosen = rng.sample(pool, k + 1)
        R, o = chosen[:k], chosen[k]
        units = [a for a in range(1, d) if _gcd(a, d) == 1]
        nums = [rng.choice(units) for _ in range(k - 1)]
        last = (-sum(nums)) % d
        if last not in units:
            continue
        nums.append(last)
        spec = DivisionAlgebraSpec.from_map(d, q, [(x, Fraction(a, d)) for x, a in zip(R, nums)])
        degrees = [n for n in range(1, max_level_degree + 1) if is_admissible_degree(q, d, n) and q**n <= 10**5]
        if not degrees:
            continue
        n = rng.choice(degrees)
        excluded = set(R) | {o, Place.infinity(q)}
        primes = list(islice(iter_admissible(q, d, [n], excluded), 5))
        if not primes:
            continue
        return ModuliConfig.build(spec, o, rng.choice(primes))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------
# The oracles
# ---------------------------------------------------------------------


def _timed(name: str, fn: Callable, args: tuple) -> OracleResult:
    t0 = time.perf_counter()
    try:
        res = fn(*args)
    except Exception as exc:  # a crash is reported like any other failure
        res = OracleResult(name, False, 0, counterexample={"exception": f"{type(exc).__name__}: {exc}"})
    res.name = name
    res.seconds = time.perf_counter() - t0
    return res


def oracle_euler(qs, N) -> OracleResult:
    for q in qs:
        if not euler_product_check(q, N):
            return OracleResult("euler_product", False, len(qs), counterexample={"q": q, "N": N})
    # negative control: dropping the factor at inf must break coefficient 1
    if euler_product_check(2, 1, include_infinity=False):
        return OracleResult("euler_product", False, len(qs), counterexample={"negative_control": "missing inf factor went unnoticed"})
    return OracleResult("euler_product", True, len(qs) + 1)


def oracle_necklace(qs, max_n) -> OracleResult:
    cases = 0
    for q in qs:
        for n in range(1, max_n + 1):
            listed = enumerate_monic_irreducibles(q, n)
            counted = count_monic_irreducibles(q, n)
            cases += 1
            if len(listed) != counted:
                return OracleResult("necklace_vs_enumeration", False, cases, counterexample={"q": q, "n": n, "enumerated": len(listed), "formula": counted})
            if sum(m * count_monic_irreducibles(q, m) for m in range(1, n + 1) if n % m == 0) != q**n:
                return OracleResult("necklace_vs_enumeration", False, cases, counterexample={"q": q, "n": n, "identity": "sum m*N_m != q^n"})
    return OracleResult("necklace_vs_enumeration", True, cases)


def oracle_irreducible(q_n) -> OracleResult:
    cases = 0
    for q, max_n in q_n:
        for n in range(1, max_n + 1):
            for f in all_monic(q, n):
                cases += 1
                if is_irreducible(f) != trial_division_irreducible(f):
                    return OracleResult("rabin_vs_trial_division", False, cases, counterexample={"q": q, "poly": str(f)})
    return OracleResult("rabin_vs_trial_division", True, cases)


def oracle_admissible(qs, ds, cap) -> OracleResult:
    cases = 0
    for q in qs:
        n = 1
        while q**n <= cap:
            for f in iter_monic_irreducibles(q, n):
                brute = brute_force_admissible_many(f, ds)
                for d in ds:
                    cases += 1
                    if is_admissible_prime(f, d) != brute[d]:
                        return OracleResult("admissible_gcd_vs_bruteforce", False, cases, counterexample={"q": q, "poly": str(f), "d": d, "brute_force": brute[d]})
            n += 1
    return OracleResult("admissible_gcd_vs_bruteforce", True, cases, note=f"all primes with q^deg <= {cap}")


def _faulty_volume(spec: DivisionAlgebraSpec) -> Fraction:
    # volume_g1 with the sign of the first partial zeta value flipped
    R = spec.validate()
    vol = Fraction(1, spec.q - 1)
    for i in range(1, spec.d):
        z = zeta_partial_neg(spec.q, R, i)
        vol *= -z if i == 1 else z
    return vol


def oracle_volume(specs, inject_fault: bool = False) -> OracleResult:
    closed = _faulty_volume if inject_fault else volume_g1
    for k, spec in enumerate(specs):
        a, b = closed(spec), volume_residue_oracle(spec)
        if a != b:
            return OracleResult("volume_vs_residue", False, k + 1, counterexample={"spec": spec.to_json(), "closed_form": str(a), "residue": str(b)})
    return OracleResult("volume_vs_residue", True, len(specs))


def oracle_volume_negative_control(specs) -> OracleResult:
    missed = [s.to_json() for s in specs if _faulty_volume(s) == volume_residue_oracle(s)]
    if missed:
        return OracleResult("volume_negative_control", False, len(specs), counterexample={"undetected_fault": missed[0]})
    return OracleResult("volume_negative_control", True, len(specs), note="flipped zeta sign detected in every case")


def _describe(cfg: ModuliConfig) -> dict:
    return {
        "q": cfg.q,
        "d": cfg.d,
        "ramification": cfg.spec.to_json()["ramification"],
        "o": str(cfg.o),
        "level": str(cfg.level.prime),
    }


def oracle_ratio(configs) -> OracleResult:
    for k, cfg in enumerate(configs):
        r, lim = ratio_exact(cfg), limit_ratio(cfg.d, cfg.q_o)
        if r != lim:
            return OracleResult("ratio_identity", False, k + 1, counterexample={**_describe(cfg), "ratio": str(r), "limit": str(lim)})
    return OracleResult("ratio_identity", True, len(configs))


def oracle_supersingular_two_routes(configs) -> OracleResult:
    """#M-bar(F_o^(d)) against (q-1) #PGL_d(F_p) Vol(D-bar) via the residue of zeta_{D-bar}."""
    for k, cfg in enumerate(configs):
        direct = supersingular_count(cfg).value
        via_dbar = (cfg.q - 1) * pgl_order(cfg.d, cfg.Q) * volume_residue_oracle(dbar_spec(cfg.spec, cfg.o))
        if direct != via_dbar:
            return OracleResult("supersingular_two_routes", False, k + 1, counterexample={**_describe(cfg), "direct": str(direct), "via_dbar": str(via_dbar)})
    return OracleResult("supersingular_two_routes", True, len(configs))


def oracle_betti(configs) -> OracleResult:
    for k, cfg in enumerate(configs):
        h = asymptotic_h(cfg, barred=True)
        unbarred = asymptotic_h(cfg, barred=False)
        payload = {**_describe(cfg), "h": str(h)}
        if unbarred != h * component_count(cfg.q, cfg.level.prime):
            return OracleResult("betti_structure", False, k + 1, counterexample={**payload, "unbarred": str(unbarred)})
        if h.denominator != 1 or h.numerator % cfg.d:
            return OracleResult("betti_structure", False, k + 1, counterexample={**payload, "issue": "h not divisible by d"})
        bv = betti_vector(cfg.d, h)
        dims = bv.dims
        if sum(dims) != h or dims[0] != 1 or dims != dims[::-1]:
            return OracleResult("betti_structure", False, k + 1, counterexample={**payload, "dims": list(dims)})
    return OracleResult("betti_structure", True, len(configs))


def _tasks(grid: dict, seed: int, inject_fault: bool) -> list[tuple[str, Callable, tuple]]:
    rng = random.Random(seed)
    configs = [random_config(rng) for _ in range(grid["ratio_configs"])]
    specs = volume_config_grid()
    tasks = [
        ("euler_product", oracle_euler, (grid["euler_qs"], grid["euler_N"])),
        ("necklace_vs_enumeration", oracle_necklace, (grid["necklace_qs"], grid["necklace_n"])),
        ("rabin_vs_trial_division", oracle_irreducible, (grid["irreducible_q_n"],)),
    ]
    for q in grid["admissible_qs"]:
        tasks.append((f"admissible_gcd_vs_bruteforce[q={q}]", oracle_admissible, ((q,), grid["admissible_ds"], grid["admissible_cap"])))
    tasks += [
        ("volume_vs_residue", oracle_volume, (specs, inject_fault)),
        ("volume_negative_control", oracle_volume_negative_control, (specs,)),
        ("ratio_identity", oracle_ratio, (configs,)),
        ("supersingular_two_routes", oracle_supersingular_two_routes, (configs,)),
        ("betti_structure", oracle_betti, (configs,)),
    ]
    return tasks


def run_check(scale: str = "quick", seed: int = 0, inject_fault: bool = False, jobs: int | None = None) -> CheckReport:
    """Run every oracle; jobs > 1 spreads them over worker processes.

    The report lists oracles in a fixed order whatever the scheduling.
    """
    if scale not in SCALES:
        raise ValueError(f"unknown scale {scale!r}")
    report = CheckReport(scale, seed)
    tasks = _tasks(SCALES[scale], seed, inject_fault)
    if jobs is None:
        jobs = min(len(tasks), os.cpu_count() or 1)
    if jobs <= 1:
        report.results = [_timed(*t) for t in tasks]
        return report
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_timed, *t) for t in tasks]
        report.results = [f.result() for f in futures]
    return report
