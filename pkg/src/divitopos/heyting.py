"""Heyting implication and negation on D_N."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from .lattice import AmbientLattice, lcm

LAWS = ("adjunction", "dnn_intro", "antitone", "triple_neg", "dnn_meet")


def implies(lattice: AmbientLattice, k: int, n: int) -> int:
    """``k => n``: lcm of every divisor t of N with gcd(t, k) dividing n."""
    lattice.check(k, n)
    acc = 1
    for t in lattice.elements:
        if n % math.gcd(t, k) == 0:
            acc = lcm(acc, t)
    return acc


def neg(lattice: AmbientLattice, n: int) -> int:
    """Pseudo-complement ``n => 1``, the largest divisor of N coprime to n."""
    return implies(lattice, n, 1)


@dataclass
class LawResult:
    passed: bool
    counterexample: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        out: dict = {"pass": self.passed}
        if self.counterexample is not None:
            out["counterexample"] = list(self.counterexample)
        return out


@dataclass
class HeytingReport:
    modulus: int
    law_results: dict[str, LawResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.law_results.values())

    def to_json(self) -> dict:
        return {law: r.to_json() for law, r in self.law_results.items()}


def _first(cases, predicate) -> LawResult:
    for case in cases:
        if not predicate(*case):
            return LawResult(False, tuple(case))
    return LawResult(True)


def check_negation_laws(
    lattice: AmbientLattice,
    implies_fn: Callable[[AmbientLattice, int, int], int] = implies,
) -> HeytingReport:
    """Exhaustively check the adjunction and the four negation laws.

    ``implies_fn`` can be swapped for a faulty operation to exercise the
    counterexample path; negation is always derived as ``implies_fn(n, 1)``.
    """
    els = lattice.elements
    imp = {(k, n): implies_fn(lattice, k, n) for k, n in product(els, repeat=2)}
    ng = {n: imp[n, 1] for n in els}

    def divides(a, b):
        return b % a == 0

    report = HeytingReport(lattice.modulus)
    report.law_results["adjunction"] = _first(
        product(els, repeat=3),
        lambda t, k, n: divides(t, imp[k, n]) == divides(math.gcd(t, k), n),
    )
    # ng values may fall outside D_N under a faulty implies_fn; .get keeps the check total
    nn = {n: ng.get(ng[n]) for n in els}
    report.law_results["dnn_intro"] = _first(
        ((n,) for n in els), lambda n: nn[n] is not None and divides(n, nn[n])
    )
    report.law_results["antitone"] = _first(
        product(els, repeat=2),
        lambda n, k: not divides(n, k) or divides(ng[k], ng[n]),
    )
    report.law_results["triple_neg"] = _first(
        ((n,) for n in els), lambda n: nn[n] is not None and ng.get(nn[n]) == ng[n]
    )
    report.law_results["dnn_meet"] = _first(
        product(els, repeat=2),
        lambda n, k: nn[n] is not None
        and nn[k] is not None
        and nn[math.gcd(n, k)] == math.gcd(nn[n], nn[k]),
    )
    return report


def boolean_witness(lattice: AmbientLattice) -> int | None:
    """First n with ``not not n != n``, or None when D_N is Boolean."""
    for n in lattice.elements:
        if neg(lattice, neg(lattice, n)) != n:
            return n
    return None


def is_boolean(lattice: AmbientLattice) -> bool:
    return boolean_witness(lattice) is None
