"""Divisor-indexed families whose inclusion order reproduces D_N.

Three concrete families are built extensionally: periodic points of a fixed
permutation, groups of roots of unity written as exact rotation numbers, and
exponential bases of the solution spaces of ``f^(n) = f``. Their orders are
computed from set inclusion and then compared with divisibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import IsoError
from .lattice import AmbientLattice, lcm
from .sieves import AxiomReport, Sieve, Topology, verify_axioms

KINDS = ("periodic_points", "root_groups", "solution_spaces")
KIND_ALIASES = {
    "periodic": "periodic_points",
    "roots": "root_groups",
    "solutions": "solution_spaces",
    **{k: k for k in KINDS},
}


@dataclass(frozen=True)
class Permutation:
    """A permutation of ``range(len(mapping))`` with its cycle layout."""

    mapping: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...]

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def iterate(self, x: int, times: int) -> int:
        for _ in range(times):
            x = self.mapping[x]
        return x

    def __len__(self) -> int:
        return len(self.mapping)


def build_permutation(lattice: AmbientLattice) -> Permutation:
    """One cycle of length d for every divisor d of N, on consecutive points."""
    mapping: list[int] = []
    cycles = []
    start = 0
    for d in lattice.elements:
        cyc = tuple(range(start, start + d))
        mapping.extend(cyc[1:] + cyc[:1])
        cycles.append(cyc)
        start += d
    return Permutation(tuple(mapping), tuple(cycles))


def periodic_points(perm: Permutation, n: int) -> frozenset[int]:
    """Fixed points of the ``n``-th iterate."""
    return frozenset(x for x in range(len(perm)) if perm.iterate(x, n) == x)


def roots_of_unity(n: int) -> frozenset[Fraction]:
    """The n-th roots of unity as rotation numbers ``j/n`` in [0, 1)."""
    if n < 1:
        raise ValueError(f"expected n >= 1, got {n}")
    return frozenset(Fraction(j, n) for j in range(n))


def closed_under_addition(rotations) -> bool:
    rotations = set(rotations)
    return all((a + b) % 1 in rotations for a in rotations for b in rotations)


@dataclass(frozen=True)
class ExpMode:
    """The function ``c·exp(ω t)`` with ``ω = exp(2πi·rotation)``, ``c = exp(2πi·phase)``.

    Differentiation multiplies the coefficient by ω, i.e. adds ``rotation`` to
    ``phase`` modulo 1.
    """

    rotation: Fraction
    phase: Fraction = Fraction(0)

    def derivative(self) -> ExpMode:
        return ExpMode(self.rotation, (self.phase + self.rotation) % 1)

    def derivative_power(self, times: int) -> ExpMode:
        mode = self
        for _ in range(times):
            mode = mode.derivative()
        return mode


def solution_space_basis(n: int, universe=None) -> frozenset[Fraction]:
    """Rotation numbers of the modes fixed by the ``n``-fold derivative.

    ``universe`` is the pool of candidate frequencies (default: the n-th roots
    of unity); only those passing the fixed-point test are kept.
    """
    if universe is None:
        universe = roots_of_unity(n)
    return frozenset(r for r in universe if ExpMode(r).derivative_power(n) == ExpMode(r))


@dataclass
class IndexedFamily:
    kind: str
    lattice: AmbientLattice
    carrier: dict[int, frozenset]

    def to_json(self) -> dict:
        def fmt(v):
            if isinstance(v, Fraction):
                return f"{v.numerator}/{v.denominator}"
            return v

        def order(v):
            return (v.denominator, v.numerator) if isinstance(v, Fraction) else (v,)

        return {
            "modulus": self.lattice.modulus,
            "kind": self.kind,
            "carriers": {
                str(n): [fmt(v) for v in sorted(self.carrier[n], key=lambda v: (float(v), order(v)))]
                for n in self.lattice.elements
            },
        }


def build_family(lattice: AmbientLattice, kind: str) -> IndexedFamily:
    try:
        kind = KIND_ALIASES[kind]
    except KeyError:
        raise ValueError(f"unknown family kind {kind!r}; expected one of {', '.join(KIND_ALIASES)}") from None
    if kind == "periodic_points":
        perm = build_permutation(lattice)
        carrier = {n: periodic_points(perm, n) for n in lattice.elements}
    elif kind == "root_groups":
        carrier = {n: roots_of_unity(n) for n in lattice.elements}
    else:
        universe = roots_of_unity(lattice.modulus)
        carrier = {n: solution_space_basis(n, universe) for n in lattice.elements}
    return IndexedFamily(kind, lattice, carrier)


def inclusion_order(family: IndexedFamily) -> dict[tuple[int, int], bool]:
    c = family.carrier
    return {(k, n): c[k] <= c[n] for k, n in product(family.lattice.elements, repeat=2)}


@dataclass
class PosetIsoReport:
    order_match: bool = True
    meet_match: bool = True
    join_match: bool = True
    distributive_match: bool = True
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return self.order_match and self.meet_match and self.join_match and self.distributive_match

    def to_json(self) -> dict:
        return {
            "order_match": self.order_match,
            "meet_match": self.meet_match,
            "join_match": self.join_match,
            "distributive_match": self.distributive_match,
            "counterexample": self.counterexample,
        }


def check_poset_iso(family: IndexedFamily, lattice: AmbientLattice) -> PosetIsoReport:
    """Compare the extensional order of ``family`` with divisibility.

    Meets must be intersections (``carrier(gcd) = carrier(m) ∩ carrier(n)``) and
    joins the least member containing both. Distributivity is checked on these
    carrier-level operations.
    """
    if set(family.carrier) != set(lattice.elements):
        raise IsoError("family is not indexed by the divisors of the modulus")
    report = PosetIsoReport()
    c = family.carrier
    els = lattice.elements
    incl = inclusion_order(family)

    def fail(attr, **witness):
        setattr(report, attr, False)
        if report.counterexample is None:
            report.counterexample = {"check": attr, **witness}

    for k, n in product(els, repeat=2):
        if incl[k, n] != (n % k == 0):
            fail("order_match", pair=[k, n], included=incl[k, n])
            break
    for m, n in product(els, repeat=2):
        if c[math.gcd(m, n)] != c[m] & c[n]:
            fail("meet_match", pair=[m, n])
            break
    for m, n in product(els, repeat=2):
        upper = [t for t in els if c[m] <= c[t] and c[n] <= c[t]]
        least = [t for t in upper if all(c[t] <= c[u] for u in upper)]
        if least != [lcm(m, n)]:
            fail("join_match", pair=[m, n], least=least)
            break

    # carrier-level meet is intersection; join is the least containing member
    index = {c[n]: n for n in els}

    def meet(a, b):
        return index.get(a & b)

    def join(a, b):
        ups = [c[t] for t in els if a <= c[t] and b <= c[t]]
        least = [u for u in ups if all(u <= v for v in ups)]
        return least[0] if len(least) == 1 else None

    if len(index) == len(els):
        for x, y, z in product(els, repeat=3):
            a, b, d = c[x], c[y], c[z]
            bd = join(b, d)
            lhs = meet(a, bd) if bd is not None else None
            ab, ad = meet(a, b), meet(a, d)
            rhs = join(c[ab], c[ad]) if ab is not None and ad is not None else None
            if lhs is None or rhs is None or c[lhs] != rhs:
                fail("distributive_match", triple=[x, y, z])
                break
    else:
        fail("distributive_match", reason="carriers are not distinct")
    return report


@dataclass
class TransportedTopology:
    """Covers on the family objects, keyed by carrier sets rather than indices."""

    family: IndexedFamily
    covers: dict[frozenset, frozenset[frozenset]]
    name: str = "transported"
    index_of: dict[frozenset, int] = field(default_factory=dict)

    def below(self, obj: frozenset) -> frozenset[frozenset]:
        return frozenset(o for o in self.covers if o <= obj)

    def forget(self) -> Topology:
        """Translate covers back along the object identification."""
        lattice = self.family.lattice
        covers = {
            self.index_of[obj]: frozenset(
                Sieve(self.index_of[obj], frozenset(self.index_of[o] for o in s)) for s in sieves
            )
            for obj, sieves in self.covers.items()
        }
        return Topology(lattice, self.name, covers)


def _down_sets(objects: list[frozenset]) -> list[frozenset]:
    """Every inclusion-down-closed subset of ``objects``."""
    objects = sorted(objects, key=len)
    out = []

    def extend(i, chosen):
        if i == len(objects):
            out.append(frozenset(chosen))
            return
        o = objects[i]
        extend(i + 1, chosen)
        # strictly smaller objects come earlier in size order
        if all(p in chosen for p in objects[:i] if p < o):
            extend(i + 1, chosen | {o})

    extend(0, frozenset())
    return out


def transport_topology(j: Topology, family: IndexedFamily) -> tuple[TransportedTopology, AxiomReport]:
    """Carry ``j`` along ``n ↦ carrier(n)`` and re-check the axioms in the family order."""
    lattice = family.lattice
    iso = check_poset_iso(family, lattice)
    if not iso.passed:
        raise IsoError(f"family is not order-isomorphic to D_{lattice.modulus}: {iso.counterexample}")
    c = family.carrier
    covers = {
        c[n]: frozenset(frozenset(c[k] for k in s.members) for s in j.covers[n]) for n in lattice.elements
    }
    index_of = {c[n]: n for n in lattice.elements}
    t = TransportedTopology(family, covers, name=j.name, index_of=index_of)
    objects = list(covers)
    sieves = {o: _down_sets(list(t.below(o))) for o in objects}
    report = verify_axioms(objects, t.below, covers.__getitem__, sieves.__getitem__, label=index_of.__getitem__)
    return t, report
