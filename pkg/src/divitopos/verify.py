"""Aggregated self-verification: the fixed acceptance checks plus per-modulus suites.

Each check returns a :class:`CheckResult` carrying the number of cases it
examined and, on failure, a JSON witness. Timings are logged, never returned,
so reports are byte-identical between runs.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from itertools import product

from . import equivalences as eq
from .heyting import boolean_witness, check_negation_laws, implies
from .lattice import (
    AmbientLattice,
    check_bounds,
    check_partial_order,
    distributivity_counterexample,
    is_squarefree,
)
from .omega import (
    build_omega,
    check_classification_bijection,
    verify_classifier,
)
from .presheaf import (
    constant_presheaf,
    is_sheaf,
    random_presheaf,
    random_sheaf,
    terminal_presheaf,
    validate_presheaf,
)
from .sieves import (
    BUILTIN_TOPOLOGIES,
    build_topology,
    check_topology_axioms,
    enumerate_sieves,
)

log = logging.getLogger(__name__)


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    cases: int
    witness: dict | None = None
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"id": self.key, "title": self.title, "pass": self.passed, "cases": self.cases}
        if self.notes:
            out["notes"] = self.notes
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        log.info("%s: %s in %.3fs", result.key, "pass" if result.passed else "FAIL", time.perf_counter() - start)
        return result

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def subset_filter_sieves(n: int) -> set[frozenset[int]]:
    """Down-closed subsets of the divisors of ``n`` by filtering the power set."""
    ds = [d for d in range(1, n + 1) if n % d == 0]
    out = set()
    for mask in range(1 << len(ds)):
        s = {ds[i] for i in range(len(ds)) if mask >> i & 1}
        if all(t in s for k in s for t in ds if k % t == 0):
            out.add(frozenset(s))
    return out


@_timed
def criterion_1(modulus: int = 360) -> CheckResult:
    lattice = AmbientLattice(modulus)
    els = lattice.elements
    table = {(k, n): implies(lattice, k, n) for k, n in product(els, repeat=2)}
    cases = 0
    for t, k, n in product(els, repeat=3):
        cases += 1
        if (table[k, n] % t == 0) != (n % math.gcd(t, k) == 0):
            return CheckResult("1", "Heyting adjunction", False, cases, {"t": t, "k": k, "n": n})
    return CheckResult("1", "Heyting adjunction", True, cases, notes={"modulus": modulus})


@_timed
def criterion_2(moduli=(12, 30, 360)) -> CheckResult:
    cases = 0
    for m in moduli:
        report = check_negation_laws(AmbientLattice(m))
        cases += len(report.law_results)
        if not report.passed:
            return CheckResult("2", "negation laws", False, cases, {"modulus": m, "laws": report.to_json()})
    return CheckResult("2", "negation laws", True, cases, notes={"moduli": list(moduli)})


@_timed
def criterion_3(upto: int = 1000) -> CheckResult:
    for n in range(1, upto + 1):
        lattice = AmbientLattice(n)
        boolean = boolean_witness(lattice) is None
        if boolean != is_squarefree(n):
            return CheckResult("3", "Boolean iff squarefree", False, n, {"modulus": n, "boolean": boolean})
    return CheckResult("3", "Boolean iff squarefree", True, upto, notes={"range": [1, upto]})


@_timed
def criterion_4(moduli=(12, 36, 60)) -> CheckResult:
    cases = 0
    for m in moduli:
        lattice = AmbientLattice(m)
        tops = {name: build_topology(lattice, name) for name in BUILTIN_TOPOLOGIES}
        for name, j in tops.items():
            cases += 1
            report = check_topology_axioms(lattice, j)
            if not report.passed:
                return CheckResult("4", "topology axioms", False, cases, {"modulus": m, "topology": name, **report.to_json()})
        for n in lattice.elements:
            cases += 1
            if tops["dense"].covers[n] != tops["atomic"].covers[n]:
                return CheckResult("4", "topology axioms", False, cases, {"modulus": m, "object": n, "reason": "dense != atomic"})
    return CheckResult("4", "topology axioms", True, cases, notes={"moduli": list(moduli)})


@_timed
def criterion_5(n: int = 12) -> CheckResult:
    lattice = AmbientLattice(n)
    got = {s.members for s in enumerate_sieves(lattice, n)}
    count = len(enumerate_sieves(lattice, n))
    oracle = subset_filter_sieves(n)
    ok = count == 10 and got == oracle and count == len(got)
    witness = None if ok else {"enumerated": count, "oracle": len(oracle)}
    return CheckResult("5", "sieve counting", ok, count, witness)


@_timed
def criterion_6(seed: int = 0, fixtures: int = 20, max_size: int = 3, modulus: int = 12) -> CheckResult:
    lattice = AmbientLattice(modulus)
    j = build_topology(lattice, "trivial")
    for i in range(fixtures):
        f = random_presheaf(lattice, seed + i, max_size)
        valid, violation = validate_presheaf(f)
        if not valid:
            return CheckResult("6", "trivial-topology sheaves", False, i + 1, {"seed": seed + i, **violation.to_json()})
        verdict = is_sheaf(f, j)
        if not verdict.is_sheaf:
            return CheckResult("6", "trivial-topology sheaves", False, i + 1, {"seed": seed + i, **verdict.witness})
    return CheckResult("6", "trivial-topology sheaves", True, fixtures)


@_timed
def criterion_7(seed: int = 0, fixtures: int = 20, singles: int = 5, max_size: int = 3, modulus: int = 12) -> CheckResult:
    lattice = AmbientLattice(modulus)
    j = build_topology(lattice, "discrete")
    cases = [random_presheaf(lattice, seed + i, max_size) for i in range(fixtures)]
    cases += [random_presheaf(lattice, seed + i, 1) for i in range(singles)]
    sheaves = 0
    for idx, f in enumerate(cases):
        singleton = all(len(v) == 1 for v in f.values.values())
        verdict = is_sheaf(f, j)
        sheaves += verdict.is_sheaf
        if verdict.is_sheaf != singleton:
            return CheckResult("7", "discrete-topology collapse", False, idx + 1,
                               {"fixture": idx, "is_sheaf": verdict.is_sheaf, "all_singletons": singleton})
    return CheckResult("7", "discrete-topology collapse", True, len(cases), notes={"sheaves": sheaves})


@_timed
def criterion_8(seed: int = 0, moduli=(12, 30), sheaves: int = 5, subs_per_sheaf: int = 2, max_size: int = 2) -> CheckResult:
    cases = 0
    uniqueness = 0
    for m in moduli:
        lattice = AmbientLattice(m)
        for name in BUILTIN_TOPOLOGIES:
            j = build_topology(lattice, name)
            omega = build_omega(lattice, j)
            valid, violation = validate_presheaf(omega.underlying)
            verdict = is_sheaf(omega.underlying, j)
            cases += 1
            if not valid or not verdict.is_sheaf:
                witness = violation.to_json() if violation else verdict.witness
                return CheckResult("8", "omega classifies", False, cases, {"modulus": m, "topology": name, **witness})
            for i in range(sheaves):
                f = random_sheaf(lattice, j, seed + 100 * i, max_size)
                ok, witness, checked = verify_classifier(f, j, subs_per_sheaf, seed + i, omega=omega)
                cases += subs_per_sheaf
                uniqueness += checked
                if not ok:
                    return CheckResult("8", "omega classifies", False, cases, {"modulus": m, "topology": name, "sheaf": i, **witness})
    return CheckResult("8", "omega classifies", True, cases, notes={"uniqueness_checks": uniqueness})


@_timed
def criterion_9(modulus: int = 12) -> CheckResult:
    lattice = AmbientLattice(modulus)
    cases = 0
    for kind in eq.KINDS:
        family = eq.build_family(lattice, kind)
        report = eq.check_poset_iso(family, lattice)
        cases += 1
        if not report.passed:
            return CheckResult("9", "equivalences", False, cases, {"kind": kind, **report.to_json()})
        for name in BUILTIN_TOPOLOGIES:
            j = build_topology(lattice, name)
            t, axioms = eq.transport_topology(j, family)
            cases += 1
            if not axioms.passed or t.forget().covers != j.covers:
                return CheckResult("9", "equivalences", False, cases, {"kind": kind, "topology": name, **axioms.to_json()})
    return CheckResult("9", "equivalences", True, cases, notes={"modulus": modulus})


def run_criteria(seed: int = 0) -> list[CheckResult]:
    return [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(seed),
        criterion_7(seed),
        criterion_8(seed),
        criterion_9(),
    ]


def modulus_suites(modulus: int, seed: int = 0, max_size: int = 3) -> list[CheckResult]:
    """Every module invariant evaluated on D_modulus."""
    lattice = AmbientLattice(modulus)
    els = lattice.elements
    out = []

    def add(key, title, witness, cases):
        out.append(CheckResult(key, title, witness is None, cases, witness))

    bad = check_partial_order(lattice) or check_bounds(lattice) or distributivity_counterexample(lattice)
    add("lattice", "partial order, bounds, distributivity", None if bad is None else {"tuple": list(bad)}, len(els) ** 3)

    dual = lattice.dual()
    bad = next(([a, b] for a, b in product(els, repeat=2) if dual.leq(a, b) != lattice.leq(b, a)), None)
    add("dual", "dual order view", None if bad is None else {"pair": bad}, len(els) ** 2)

    report = check_negation_laws(lattice)
    add("heyting", "adjunction and negation laws", None if report.passed else report.to_json(), len(els) ** 3)

    w = boolean_witness(lattice)
    ok = (w is None) == is_squarefree(modulus)
    add("boolean", "Boolean iff squarefree", None if ok else {"witness": w}, len(els))

    tops = {name: build_topology(lattice, name) for name in BUILTIN_TOPOLOGIES}
    witness = None
    for name, j in tops.items():
        rep = check_topology_axioms(lattice, j)
        if not rep.passed:
            witness = {"topology": name, **rep.to_json()}
            break
    if witness is None:
        for n in els:
            tri, dense, dis = tops["trivial"].covers[n], tops["dense"].covers[n], tops["discrete"].covers[n]
            if dense != tops["atomic"].covers[n] or not (tri <= dense <= dis):
                witness = {"object": n, "reason": "inclusion chain or dense == atomic"}
                break
    add("topologies", "built-in topology axioms", witness, len(tops))

    witness = None
    for n in els:
        if {s.members for s in enumerate_sieves(lattice, n)} != subset_filter_sieves(n):
            witness = {"object": n}
            break
    add("sieves", "sieve enumeration vs subset filter", witness, len(els))

    witness = None
    fixtures = [random_presheaf(lattice, seed + i, max_size) for i in range(5)]
    for i, f in enumerate(fixtures):
        valid, violation = validate_presheaf(f)
        if not valid:
            witness = {"fixture": i, **violation.to_json()}
            break
        if not is_sheaf(f, tops["trivial"]).is_sheaf:
            witness = {"fixture": i, "reason": "not a trivial-topology sheaf"}
            break
        singleton = all(len(v) == 1 for v in f.values.values())
        if is_sheaf(f, tops["discrete"]).is_sheaf != singleton:
            witness = {"fixture": i, "reason": "discrete collapse"}
            break
    add("presheaves", "presheaf fixtures", witness, len(fixtures))

    witness = None
    uniqueness = 0
    small_lattice = AmbientLattice(math.gcd(modulus, 12))
    for name, j in tops.items():
        omega = build_omega(lattice, j)
        if not is_sheaf(omega.underlying, j).is_sheaf:
            witness = {"topology": name, "reason": "omega is not a sheaf"}
            break
        f = random_sheaf(lattice, j, seed, 2)
        ok, w, checked = verify_classifier(f, j, 2, seed, omega=omega)
        uniqueness += checked
        if not ok:
            witness = {"topology": name, **w}
            break
        # the full bijection check enumerates all subsheaves, so keep it on a small sublattice
        small_j = build_topology(small_lattice, name)
        ok, w = check_classification_bijection(random_sheaf(small_lattice, small_j, seed, 2), small_j)
        if not ok:
            witness = {"topology": name, **w}
            break
    out.append(CheckResult("omega", "omega sheafhood and classification", witness is None, len(tops), witness,
                           {"uniqueness_checks": uniqueness}))

    witness = None
    for kind in eq.KINDS:
        family = eq.build_family(lattice, kind)
        rep = eq.check_poset_iso(family, lattice)
        if not rep.passed:
            witness = {"kind": kind, **rep.to_json()}
            break
        for name, j in tops.items():
            _, axioms = eq.transport_topology(j, family)
            if not axioms.passed:
                witness = {"kind": kind, "topology": name, **axioms.to_json()}
                break
        if witness:
            break
    add("equivalences", "indexed families and transport", witness, len(eq.KINDS))
    return out


def verify_all(modulus: int, seed: int = 0, max_size: int = 3) -> dict:
    criteria = run_criteria(seed)
    suites = modulus_suites(modulus, seed, max_size)
    return {
        "modulus": modulus,
        "seed": seed,
        "pass": all(r.passed for r in criteria + suites),
        "criteria": [r.to_json() for r in criteria],
        "suites": [r.to_json() for r in suites],
    }
