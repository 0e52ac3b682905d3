"""Finite presheaves on D_N and the sheaf condition.

A presheaf stores a finite value set per divisor and a restriction map for
every divisibility pair ``k | n``, so that ``restrict(k, n, x)`` is a lookup.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Hashable, Iterable, Mapping

from .errors import PresheafError
from .lattice import AmbientLattice
from .sieves import Sieve, Topology


@dataclass
class Presheaf:
    lattice: AmbientLattice
    values: dict[int, tuple]
    restrictions: dict[tuple[int, int], dict]

    def restrict(self, k: int, n: int, x):
        return self.restrictions[k, n][x]

    def pairs(self):
        els = self.lattice.elements
        return [(k, n) for n in els for k in els if n % k == 0]

    def to_json(self) -> dict:
        return {
            "modulus": self.lattice.modulus,
            "values": {str(n): [str(x) for x in self.values[n]] for n in self.lattice.elements},
            "restrictions": {
                f"{k}|{n}": {str(x): str(y) for x, y in sorted(self.restrictions[k, n].items(), key=lambda kv: str(kv[0]))}
                for k, n in self.pairs()
                if k != n
            },
        }


@dataclass(frozen=True)
class FunctorViolation:
    law: str
    chain: tuple[int, ...]
    element: Hashable

    def to_json(self) -> dict:
        return {"law": self.law, "chain": list(self.chain), "element": str(self.element)}


def validate_presheaf(f: Presheaf) -> tuple[bool, FunctorViolation | None]:
    """Check totality, the identity law and the composition law.

    Raises :class:`PresheafError` for a missing value set or restriction map;
    a law violation is returned as the first offending chain.
    """
    els = f.lattice.elements
    for n in els:
        if n not in f.values:
            raise PresheafError(f"missing value set for {n}")
    for k, n in f.pairs():
        if (k, n) not in f.restrictions:
            raise PresheafError(f"missing restriction map {k}|{n}")
        rmap = f.restrictions[k, n]
        target = set(f.values[k])
        for x in f.values[n]:
            if x not in rmap:
                raise PresheafError(f"restriction {k}|{n} undefined on {x!r}")
            if rmap[x] not in target:
                raise PresheafError(f"restriction {k}|{n} sends {x!r} outside values({k})")
    for n in els:
        for x in f.values[n]:
            if f.restrict(n, n, x) != x:
                return False, FunctorViolation("identity", (n, n), x)
    for n in els:
        for m in els:
            if n % m:
                continue
            for k in els:
                if m % k:
                    continue
                for x in f.values[n]:
                    if f.restrict(k, n, x) != f.restrict(k, m, f.restrict(m, n, x)):
                        return False, FunctorViolation("composition", (k, m, n), x)
    return True, None


def presheaf_from_json(data: Mapping) -> Presheaf:
    """Parse the presheaf JSON format; identity maps ``n|n`` may be omitted."""
    try:
        lattice = AmbientLattice(int(data["modulus"]))
        values = {int(n): tuple(str(x) for x in xs) for n, xs in data["values"].items()}
        restrictions = {}
        for key, mapping in data.get("restrictions", {}).items():
            k, n = (int(p) for p in key.split("|"))
            restrictions[k, n] = {str(a): str(b) for a, b in mapping.items()}
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise PresheafError(f"malformed presheaf: {exc}") from exc
    for n in lattice.elements:
        if n in values:
            restrictions.setdefault((n, n), {x: x for x in values[n]})
    for n in values:
        lattice.check(n)
    return Presheaf(lattice, values, restrictions)


def _from_families(lattice, values, families) -> Presheaf:
    """Presheaf whose element ``x`` at ``n`` restricts to ``families[n][x][k]``."""
    restrictions = {}
    for n in lattice.elements:
        for k in lattice.elements:
            if n % k == 0:
                restrictions[k, n] = {x: families[n][x][k] for x in values[n]}
    return Presheaf(lattice, values, restrictions)


def constant_presheaf(lattice: AmbientLattice, labels: Iterable[str]) -> Presheaf:
    labels = tuple(labels)
    values = {n: labels for n in lattice.elements}
    families = {
        n: {x: {k: x for k in lattice.elements if n % k == 0} for x in labels}
        for n in lattice.elements
    }
    return _from_families(lattice, values, families)


def terminal_presheaf(lattice: AmbientLattice) -> Presheaf:
    return constant_presheaf(lattice, ("*",))


def representable_presheaf(lattice: AmbientLattice, m: int) -> Presheaf:
    """Hom(-, m): one point over every divisor of ``m``, nothing elsewhere."""
    lattice.check(m)
    values = {n: ("*",) if m % n == 0 else () for n in lattice.elements}
    families = {
        n: {"*": {k: "*" for k in lattice.elements if n % k == 0}} if values[n] else {}
        for n in lattice.elements
    }
    return _from_families(lattice, values, families)


def _compatible(values_below, restrict, members, maxima):
    """Compatible assignments on ``members`` chosen freely at ``maxima``."""
    members = sorted(members)
    above = {t: next(m for m in maxima if m % t == 0) for t in members}
    out = []
    for choice in product(*(values_below[m] for m in maxima)):
        top = dict(zip(maxima, choice))
        assignment = {t: top[above[t]] if t == above[t] else restrict(t, above[t], top[above[t]]) for t in members}
        ok = all(
            restrict(t, k, assignment[k]) == assignment[t]
            for k in members
            for t in members
            if k % t == 0 and k != t
        )
        if ok:
            out.append(assignment)
    return out


def _maxima(members) -> list[int]:
    members = sorted(members)
    return [m for m in members if not any(o != m and o % m == 0 for o in members)]


def random_presheaf(lattice: AmbientLattice, seed: int, max_size: int = 3) -> Presheaf:
    """Deterministic random presheaf, functorial by construction.

    Built bottom-up: each element of ``values(n)`` is tagged with a compatible
    family on the proper divisors of ``n``, and its restrictions read off that
    family. Composites then agree automatically. Distinct elements may share a
    family, which produces non-separated presheaves.
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    rng = random.Random(seed)
    values: dict[int, tuple] = {}
    families: dict[int, dict] = {}

    def restrict(k, n, x):
        return families[n][x][k]

    for n in lattice.elements:
        proper = [d for d in lattice.elements if n % d == 0 and d != n]
        size = rng.randint(1, max_size)
        labels = tuple(f"{n}.{i}" for i in range(size))
        if proper:
            options = _compatible(values, restrict, proper, _maxima(proper))
            if not options:
                labels, options = (), []
            chosen = [rng.choice(options) for _ in labels]
        else:
            chosen = [{} for _ in labels]
        values[n] = labels
        families[n] = {x: {**fam, n: x} for x, fam in zip(labels, chosen)}
    return _from_families(lattice, values, families)


def relabeled_constant_presheaf(lattice: AmbientLattice, seed: int, size: int) -> Presheaf:
    """Constant presheaf of ``size`` points with randomly permuted labels per object.

    Each ``values(n)`` is identified with a common index set through a random
    bijection, so every restriction is a bijection and composites agree.
    """
    rng = random.Random(seed)
    perm = {}
    values = {}
    for n in lattice.elements:
        order = list(range(size))
        rng.shuffle(order)
        perm[n] = order
        values[n] = tuple(f"{n}.{i}" for i in range(size))
    restrictions = {}
    for n in lattice.elements:
        for k in lattice.elements:
            if n % k == 0:
                inv_k = {idx: i for i, idx in enumerate(perm[k])}
                restrictions[k, n] = {f"{n}.{i}": f"{k}.{inv_k[perm[n][i]]}" for i in range(size)}
    return Presheaf(lattice, values, restrictions)


@dataclass(frozen=True)
class MatchingFamily:
    cover: Sieve
    assignment: Mapping[int, Hashable] = field(hash=False)

    def to_json(self) -> dict:
        return {str(k): str(v) for k, v in sorted(self.assignment.items())}


def matching_families(f: Presheaf, s: Sieve) -> list[MatchingFamily]:
    """Every compatible family for the sieve ``s``.

    Values at the maximal members are chosen freely; everything below is
    forced by restriction and then checked for compatibility.
    """
    if not s.members:
        return [MatchingFamily(s, {})]
    maxima = _maxima(s.members)
    return [MatchingFamily(s, a) for a in _compatible(f.values, f.restrict, s.members, maxima)]


def amalgamations(f: Presheaf, family: MatchingFamily) -> list:
    n = family.cover.base
    return [
        a
        for a in f.values[n]
        if all(f.restrict(k, n, a) == x for k, x in family.assignment.items())
    ]


@dataclass
class SheafVerdict:
    is_sheaf: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"is_sheaf": self.is_sheaf, "witness": self.witness}


def is_sheaf(f: Presheaf, j: Topology) -> SheafVerdict:
    """Every matching family for every cover must have exactly one amalgamation."""
    for n in f.lattice.elements:
        for s in sorted(j.covers[n], key=lambda s: (len(s.key), s.key)):
            for fam in matching_families(f, s):
                count = len(amalgamations(f, fam))
                if count != 1:
                    return SheafVerdict(
                        False,
                        {
                            "object": n,
                            "cover": s.to_json(),
                            "family": fam.to_json(),
                            "amalgamations": count,
                        },
                    )
    return SheafVerdict(True)


def random_sheaf(lattice: AmbientLattice, j: Topology, seed: int, max_size: int = 3) -> Presheaf:
    """A seeded J-sheaf, found by testing candidates in a fixed order.

    Candidates: random presheaves, then relabeled constant presheaves of
    decreasing size, then the terminal presheaf (a sheaf for every topology).
    """
    rng = random.Random(seed)
    candidates = [random_presheaf(lattice, rng.randrange(2**31), max_size) for _ in range(4)]
    for size in range(max_size, 0, -1):
        candidates.append(relabeled_constant_presheaf(lattice, rng.randrange(2**31), size))
    candidates.append(terminal_presheaf(lattice))
    for cand in candidates:
        if is_sheaf(cand, j).is_sheaf:
            return cand
    raise AssertionError("terminal presheaf is always a sheaf")

