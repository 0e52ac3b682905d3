"""The subobject classifier of sheaves on (D_N, J).

``Omega(n)`` is the set of J-closed sieves on ``n`` with pullback as
restriction. ``build_omega(..., principal=True)`` instead uses the principal
sieves ``↓k`` for ``k | n``; that variant is a presheaf but is not claimed to
classify anything.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations

from .errors import PresheafError
from .lattice import AmbientLattice
from .presheaf import Presheaf, is_sheaf
from .sieves import Sieve, Topology, enumerate_sieves, pullback_sieve

DEFAULT_UNIQUENESS_BOUND = 10**6


def is_closed_sieve(lattice: AmbientLattice, j: Topology, s: Sieve) -> bool:
    """True iff every ``k | n`` whose pullback of ``s`` covers ``k`` lies in ``s``."""
    n = s.base
    for k in lattice.elements:
        if n % k == 0 and k not in s and j.is_cover(pullback_sieve(lattice, s, k)):
            return False
    return True


@dataclass
class OmegaSheaf:
    topology: Topology
    underlying: Presheaf
    principal: bool = False

    @property
    def lattice(self) -> AmbientLattice:
        return self.underlying.lattice

    def __call__(self, n: int) -> tuple[Sieve, ...]:
        return self.underlying.values[n]

    def top(self, n: int) -> Sieve:
        return self.lattice.down_set(n)

    def to_json(self) -> dict:
        return {str(n): [s.to_json() for s in self(n)] for n in self.lattice.elements}


def build_omega(lattice: AmbientLattice, j: Topology, principal: bool = False) -> OmegaSheaf:
    values = {}
    for n in lattice.elements:
        if principal:
            values[n] = tuple(Sieve(n, lattice.down_set(k).members) for k in lattice.elements if n % k == 0)
        else:
            values[n] = tuple(s for s in enumerate_sieves(lattice, n) if is_closed_sieve(lattice, j, s))
    restrictions = {}
    for n in lattice.elements:
        for k in lattice.elements:
            if n % k == 0:
                restrictions[k, n] = {s: pullback_sieve(lattice, s, k) for s in values[n]}
    return OmegaSheaf(j, Presheaf(lattice, values, restrictions), principal)


@dataclass
class NaturalTransformation:
    """Components ``components[n][x]`` of a map between presheaves."""

    components: dict[int, dict]

    def __call__(self, n, x):
        return self.components[n][x]

    def to_json(self) -> dict:
        return {
            str(n): {str(x): _dump(v) for x, v in sorted(comp.items(), key=lambda kv: str(kv[0]))}
            for n, comp in sorted(self.components.items())
        }


def _dump(v):
    return v.to_json() if isinstance(v, Sieve) else str(v)


def naturality_witness(source: Presheaf, target: Presheaf, eta: NaturalTransformation) -> dict | None:
    """First square ``target(k|n) ∘ eta_n != eta_k ∘ source(k|n)``, or None."""
    els = source.lattice.elements
    for n in els:
        for x in source.values[n]:
            if eta(n, x) not in target.values[n]:
                return {"object": n, "element": str(x), "reason": "component leaves target"}
    for n in els:
        for k in els:
            if n % k or k == n:
                continue
            for x in source.values[n]:
                lhs = target.restrict(k, n, eta(n, x))
                rhs = eta(k, source.restrict(k, n, x))
                if lhs != rhs:
                    return {"k": k, "n": n, "element": str(x), "lhs": _dump(lhs), "rhs": _dump(rhs)}
    return None


def true_arrow(omega: OmegaSheaf) -> NaturalTransformation:
    """``true: 1 -> Omega``, sending the point over ``n`` to the maximal sieve."""
    return NaturalTransformation({n: {"*": omega.top(n)} for n in omega.lattice.elements})


@dataclass
class Subpresheaf:
    parent: Presheaf
    selection: dict[int, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        given = self.selection
        self.selection = {n: frozenset(given.get(n, ())) for n in self.parent.lattice.elements}
        for n in self.parent.lattice.elements:
            extra = self.selection[n] - set(self.parent.values[n])
            if extra:
                raise PresheafError(f"selection at {n} has elements outside the parent: {sorted(map(str, extra))}")

    def closure_witness(self) -> tuple | None:
        f = self.parent
        for k, n in f.pairs():
            for x in self.selection[n]:
                if f.restrict(k, n, x) not in self.selection[k]:
                    return (k, n, x)
        return None

    def as_presheaf(self) -> Presheaf:
        f = self.parent
        values = {n: tuple(x for x in f.values[n] if x in self.selection[n]) for n in f.lattice.elements}
        restrictions = {
            (k, n): {x: f.restrict(k, n, x) for x in values[n]} for k, n in f.pairs()
        }
        return Presheaf(f.lattice, values, restrictions)

    def key(self):
        return tuple(sorted((n, tuple(sorted(map(str, s)))) for n, s in self.selection.items()))

    def to_json(self) -> dict:
        return {"selection": {str(n): sorted(map(str, s)) for n, s in sorted(self.selection.items())}}


def subpresheaf_from_json(parent: Presheaf, data) -> Subpresheaf:
    try:
        selection = {int(n): frozenset(str(x) for x in xs) for n, xs in data["selection"].items()}
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise PresheafError(f"malformed subpresheaf: {exc}") from exc
    for n in selection:
        parent.lattice.check(n)
    return Subpresheaf(parent, selection)


def char_map(a: Subpresheaf, f: Presheaf, j: Topology | None = None) -> NaturalTransformation:
    """Characteristic map ``x ↦ {k | n : x|k ∈ A(k)}``.

    ``j`` is accepted for symmetry with the classifier check; the formula
    itself does not depend on it.
    """
    if a.parent is not f:
        raise PresheafError("subpresheaf belongs to a different parent")
    bad = a.closure_witness()
    if bad is not None:
        k, n, x = bad
        raise PresheafError(f"selection not closed under restriction: {x!r} at {n} restricts outside at {k}")
    els = f.lattice.elements
    comps = {}
    for n in els:
        comps[n] = {
            x: Sieve(n, frozenset(k for k in els if n % k == 0 and f.restrict(k, n, x) in a.selection[k]))
            for x in f.values[n]
        }
    return NaturalTransformation(comps)


def is_closed_subpresheaf(a: Subpresheaf, j: Topology) -> bool:
    """A contains every ``x`` whose characteristic sieve is a J-cover."""
    chi = char_map(a, a.parent)
    return all(
        x in a.selection[n]
        for n in a.parent.lattice.elements
        for x in a.parent.values[n]
        if j.is_cover(chi(n, x))
    )


def j_closure(a: Subpresheaf, j: Topology) -> Subpresheaf:
    f = a.parent
    sel = dict(a.selection)
    while True:
        chi = char_map(Subpresheaf(f, sel), f)
        grown = {
            n: sel[n] | {x for x in f.values[n] if j.is_cover(chi(n, x))}
            for n in f.lattice.elements
        }
        if grown == sel:
            return Subpresheaf(f, sel)
        sel = grown


def enumerate_subpresheaves(f: Presheaf) -> list[Subpresheaf]:
    """All restriction-closed selections, built bottom-up."""
    els = f.lattice.elements
    out = []

    def extend(i, sel):
        if i == len(els):
            out.append(Subpresheaf(f, dict(sel)))
            return
        n = els[i]
        allowed = [
            x
            for x in f.values[n]
            if all(f.restrict(k, n, x) in sel[k] for k in els[:i] if n % k == 0)
        ]
        for r in range(len(allowed) + 1):
            for bits in combinations(allowed, r):
                sel[n] = frozenset(bits)
                extend(i + 1, sel)
        sel.pop(n, None)

    extend(0, {})
    return out


def enumerate_subsheaves(f: Presheaf, j: Topology) -> list[Subpresheaf]:
    return [a for a in enumerate_subpresheaves(f) if is_closed_subpresheaf(a, j)]


def random_subsheaf(f: Presheaf, j: Topology, seed: int) -> Subpresheaf:
    """Close a random set of generators downward, then J-close the result."""
    rng = random.Random(seed)
    sel = {n: set() for n in f.lattice.elements}
    for n in f.lattice.elements:
        for x in f.values[n]:
            if rng.random() < 0.3:
                for k in f.lattice.elements:
                    if n % k == 0:
                        sel[k].add(f.restrict(k, n, x))
    return j_closure(Subpresheaf(f, sel), j)


def candidate_space(f: Presheaf, omega: OmegaSheaf) -> int:
    """Number of unconstrained component choices ``prod_n |Omega(n)|^|F(n)|``."""
    return math.prod(len(omega(n)) ** len(f.values[n]) for n in f.lattice.elements)


def enumerate_natural_transformations(f: Presheaf, omega: OmegaSheaf, marker=None, limit=None):
    """Yield every natural map ``F -> Omega``.

    With ``marker`` (a subpresheaf), only maps whose preimage of the maximal
    sieves is exactly the marker's selection are produced. Search proceeds
    bottom-up and prunes on each naturality square against lower objects.
    """
    els = f.lattice.elements
    lattice = f.lattice
    count = 0
    comps: dict[int, dict] = {}

    def choices(n, x):
        below = [k for k in els if n % k == 0 and k != n]
        top = omega.top(n)
        for s in omega(n):
            if marker is not None and ((s == top) != (x in marker.selection[n])):
                continue
            if all(pullback_sieve(lattice, s, k) == comps[k][f.restrict(k, n, x)] for k in below):
                yield s

    slots = [(n, x) for n in els for x in f.values[n]]

    def go(i):
        nonlocal count
        if limit is not None and count >= limit:
            return
        if i == len(slots):
            count += 1
            yield NaturalTransformation({n: dict(c) for n, c in comps.items()})
            return
        n, x = slots[i]
        for s in choices(n, x):
            comps[n][x] = s
            yield from go(i + 1)
            if limit is not None and count >= limit:
                break
        comps[n].pop(x, None)

    for n in els:
        comps[n] = {}
    yield from go(0)


@dataclass
class ClassifierResult:
    passed: bool
    uniqueness_checked: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"pass": self.passed, "uniqueness_checked": self.uniqueness_checked, "witness": self.witness}


def verify_characteristic(
    f: Presheaf,
    a: Subpresheaf,
    chi: NaturalTransformation,
    omega: OmegaSheaf,
    bound: int = DEFAULT_UNIQUENESS_BOUND,
) -> ClassifierResult:
    """Check that ``chi`` is natural, pulls ``true`` back to ``a``, and is the only such map."""
    bad = naturality_witness(f, omega.underlying, chi)
    if bad is not None:
        return ClassifierResult(False, False, {"check": "naturality", **bad})
    for n in f.lattice.elements:
        top = omega.top(n)
        pulled = frozenset(x for x in f.values[n] if chi(n, x) == top)
        if pulled != a.selection[n]:
            return ClassifierResult(
                False,
                False,
                {
                    "check": "pullback",
                    "object": n,
                    "expected": sorted(map(str, a.selection[n])),
                    "got": sorted(map(str, pulled)),
                },
            )
    if candidate_space(f, omega) > bound:
        return ClassifierResult(True, False)
    found = list(enumerate_natural_transformations(f, omega, marker=a, limit=2))
    if len(found) != 1 or found[0].components != chi.components:
        return ClassifierResult(False, True, {"check": "uniqueness", "maps_found": len(found)})
    return ClassifierResult(True, True)


def verify_classifier(
    f: Presheaf,
    j: Topology,
    trials: int = 2,
    seed: int = 0,
    bound: int = DEFAULT_UNIQUENESS_BOUND,
    omega: OmegaSheaf | None = None,
) -> tuple[bool, dict | None, int]:
    """Run ``trials`` seeded subsheaves of ``f`` through :func:`verify_characteristic`.

    Returns ``(passed, witness, uniqueness_checks)``.
    """
    lattice = f.lattice
    omega = omega or build_omega(lattice, j)
    if not is_sheaf(f, j).is_sheaf:
        return False, {"check": "input is not a sheaf"}, 0
    rng = random.Random(seed)
    checked = 0
    for _ in range(trials):
        a = random_subsheaf(f, j, rng.randrange(2**31))
        chi = char_map(a, f, j)
        res = verify_characteristic(f, a, chi, omega, bound)
        checked += res.uniqueness_checked
        if not res.passed:
            return False, {"subpresheaf": a.to_json(), **(res.witness or {})}, checked
    return True, None, checked


def check_classification_bijection(
    f: Presheaf, j: Topology, omega: OmegaSheaf | None = None
) -> tuple[bool, dict | None]:
    """Exhaustively compare subsheaves of ``f`` with natural maps ``f -> Omega``."""
    omega = omega or build_omega(f.lattice, j)
    subs = enumerate_subsheaves(f, j)
    chis = {}
    for a in subs:
        chi = char_map(a, f, j)
        if naturality_witness(f, omega.underlying, chi) is not None:
            return False, {"reason": "characteristic map not natural", "sub": a.to_json()}
        key = _component_key(chi)
        if key in chis:
            return False, {"reason": "two subsheaves share a characteristic map", "sub": a.to_json()}
        chis[key] = a
    maps = list(enumerate_natural_transformations(f, omega))
    keys = {_component_key(m) for m in maps}
    if keys != set(chis):
        return False, {"reason": "natural maps and characteristic maps differ", "maps": len(keys), "subsheaves": len(chis)}
    return True, None


def _component_key(eta: NaturalTransformation):
    return tuple(
        (n, tuple(sorted(((str(x), s.key) for x, s in comp.items()))))
        for n, comp in sorted(eta.components.items())
    )


def corrupt(chi: NaturalTransformation, n: int, x, replacement: Sieve) -> NaturalTransformation:
    comps = {k: dict(c) for k, c in chi.components.items()}
    comps[n][x] = replacement
    return NaturalTransformation(comps)
