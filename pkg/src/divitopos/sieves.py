"""Sieves on divisor lattices and Grothendieck topologies built from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping

from .errors import DomainError, SieveError, TopologyError
from .lattice import AmbientLattice, divisors, factorize

BUILTIN_TOPOLOGIES = ("trivial", "discrete", "atomic", "dense")


@dataclass(frozen=True, order=True)
class Sieve:
    """A down-closed set of divisors of ``base``.

    Construct through :func:`make_sieve` to get validation; the raw constructor
    trusts its input.
    """

    base: int
    members: frozenset[int] = field(compare=False)
    # canonical ordering key; equality and hashing go through it
    key: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        object.__setattr__(self, "key", tuple(sorted(self.members)))

    def __contains__(self, k) -> bool:
        return k in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.key)

    def to_json(self) -> list[int]:
        return list(self.key)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.key)) + "}"


def make_sieve(lattice: AmbientLattice, n: int, members: Iterable[int]) -> Sieve:
    lattice.check(n)
    members = frozenset(members)
    for k in sorted(members):
        if k not in lattice or n % k:
            raise SieveError(f"{k} is not a divisor of {n}", pair=(k, n))
    for k in sorted(members):
        for t in divisors(k):
            if t not in members:
                raise SieveError(f"not down-closed: {t} divides {k} but is missing", pair=(t, k))
    return Sieve(n, members)


def pullback_sieve(lattice: AmbientLattice, s: Sieve, k: int) -> Sieve:
    """Restrict ``s`` to the sieve ``s ∩ ↓k`` on ``k``."""
    lattice.check(k)
    if s.base % k:
        raise DomainError(f"{k} does not divide the sieve base {s.base}")
    return Sieve(k, frozenset(m for m in s.members if k % m == 0))


def enumerate_sieves(lattice: AmbientLattice, n: int) -> list[Sieve]:
    """Every sieve on ``n``, ordered by (size, members)."""
    lattice.check(n)
    elems = divisors(n)
    primes = list(factorize(n))
    out: list[frozenset[int]] = []

    # ascending order puts every lower cover d/p before d
    def extend(i: int, chosen: frozenset[int]):
        if i == len(elems):
            out.append(chosen)
            return
        d = elems[i]
        extend(i + 1, chosen)
        if all(d // p in chosen for p in primes if d % p == 0):
            extend(i + 1, chosen | {d})

    extend(0, frozenset())
    return sorted((Sieve(n, m) for m in out), key=lambda s: (len(s.key), s.key))


def is_dense_below(lattice: AmbientLattice, d: Sieve, n: int) -> bool:
    if d.base != n:
        raise DomainError(f"sieve base {d.base} differs from {n}")
    return all(any(m % k == 0 for k in d.members) for m in divisors(n))


@dataclass
class Topology:
    """Covering sieves ``covers[n]`` for every element ``n`` of the lattice."""

    lattice: AmbientLattice
    name: str
    covers: dict[int, frozenset[Sieve]]

    def __post_init__(self):
        for n in self.lattice.elements:
            self.covers.setdefault(n, frozenset())
        for n, sieves in self.covers.items():
            self.lattice.check(n)
            for s in sieves:
                if s.base != n:
                    raise TopologyError(f"sieve {s} with base {s.base} listed under {n}")

    def __call__(self, n: int) -> frozenset[Sieve]:
        return self.covers[n]

    def is_cover(self, s: Sieve) -> bool:
        return s in self.covers[s.base]

    def to_json(self) -> dict:
        return {
            "modulus": self.lattice.modulus,
            "name": self.name,
            "covers": {
                str(n): [s.to_json() for s in sorted(self.covers[n], key=lambda s: (len(s.key), s.key))]
                for n in self.lattice.elements
            },
        }


def build_topology(lattice: AmbientLattice, name: str) -> Topology:
    if name not in BUILTIN_TOPOLOGIES:
        raise TopologyError(f"unknown topology {name!r}; expected one of {', '.join(BUILTIN_TOPOLOGIES)}")
    covers = {}
    for n in lattice.elements:
        sieves = enumerate_sieves(lattice, n)
        if name == "trivial":
            chosen = [s for s in sieves if len(s) == len(divisors(n))]
        elif name == "discrete":
            chosen = sieves
        elif name == "atomic":
            # D_N always has the lower bound gcd, so the downward-directed caveat holds
            chosen = [s for s in sieves if s.members]
        else:
            chosen = [s for s in sieves if is_dense_below(lattice, s, n)]
        covers[n] = frozenset(chosen)
    return Topology(lattice, name, covers)


def topology_from_json(data: Mapping) -> Topology:
    """Parse ``{"modulus": N, "name": ..., "covers": {"n": [[...], ...]}}``.

    Objects missing from ``covers`` get no covering sieves.
    """
    try:
        lattice = AmbientLattice(int(data["modulus"]))
        covers = {}
        for key, sieves in data.get("covers", {}).items():
            n = int(key)
            covers[n] = frozenset(make_sieve(lattice, n, members) for members in sieves)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (SieveError, DomainError)):
            raise
        raise TopologyError(f"malformed topology: {exc}") from exc
    return Topology(lattice, str(data.get("name", "custom")), covers)


@dataclass
class AxiomReport:
    maximal_ok: bool = True
    stability_ok: bool = True
    transitivity_ok: bool = True
    counterexamples: dict[str, dict] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.maximal_ok and self.stability_ok and self.transitivity_ok

    def to_json(self) -> dict:
        return {
            "maximal": self.maximal_ok,
            "stability": self.stability_ok,
            "transitivity": self.transitivity_ok,
            "counterexamples": self.counterexamples,
        }


def verify_axioms(
    objects: Iterable[Hashable],
    below: Callable[[Hashable], frozenset],
    covers: Callable[[Hashable], frozenset],
    sieves_on: Callable[[Hashable], Iterable[frozenset]],
    label: Callable = lambda x: x,
) -> AxiomReport:
    """Check the three topology axioms on an arbitrary finite poset.

    Sieves are plain frozensets of objects. ``below(n)`` is the maximal sieve
    on ``n``; ``label`` turns objects into JSON-friendly witnesses.
    """

    def dump(s):
        return sorted(label(x) for x in s)

    report = AxiomReport()
    objects = list(objects)
    for n in objects:
        if below(n) not in covers(n):
            report.maximal_ok = False
            report.counterexamples.setdefault("maximal", {"object": label(n)})
    for n in objects:
        for s in sorted(covers(n), key=dump):
            for k in sorted(below(n), key=label):
                pulled = s & below(k)
                if pulled not in covers(k):
                    if report.stability_ok:
                        report.counterexamples["stability"] = {
                            "object": label(n),
                            "sieve": dump(s),
                            "k": label(k),
                            "pullback": dump(pulled),
                        }
                    report.stability_ok = False
    for n in objects:
        all_sieves = list(sieves_on(n))
        for s in sorted(covers(n), key=dump):
            for r in all_sieves:
                if r in covers(n):
                    continue
                if all((r & below(k)) in covers(k) for k in s):
                    if report.transitivity_ok:
                        report.counterexamples["transitivity"] = {
                            "object": label(n),
                            "cover": dump(s),
                            "sieve": dump(r),
                        }
                    report.transitivity_ok = False
    return report


def check_topology_axioms(lattice: AmbientLattice, j: Topology) -> AxiomReport:
    """Exhaustive maximality, stability and transitivity check for ``j``."""
    sieves = {n: [s.members for s in enumerate_sieves(lattice, n)] for n in lattice.elements}
    cover_sets = {n: frozenset(s.members for s in j.covers[n]) for n in lattice.elements}
    return verify_axioms(
        lattice.elements,
        lambda n: lattice.down_set(n).members,
        cover_sets.__getitem__,
        sieves.__getitem__,
    )
