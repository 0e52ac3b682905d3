"""The finite divisor lattice D_N ordered by divisibility.

Elements are stored as the raw divisors of the modulus so that every dump is
readable without a lookup table. Meet is gcd, join is lcm, 1 is the bottom and
N is the top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import product

from .errors import DomainError


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``n`` by trial division, as ``{prime: exponent}``."""
    if n < 1:
        raise DomainError(f"expected a positive integer, got {n}")
    factors: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def divisors(n: int) -> list[int]:
    """All positive divisors of ``n`` in ascending order.

    >>> divisors(12)
    [1, 2, 3, 4, 6, 12]
    """
    factors = factorize(n)
    out = [1]
    for p, e in factors.items():
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)


def omega_count(n: int) -> int:
    """Number of prime factors of ``n`` counted with multiplicity (Hasse rank)."""
    return sum(factorize(n).values())


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


@dataclass(frozen=True)
class AmbientLattice:
    """Divisors of ``modulus`` with the divisibility order."""

    modulus: int

    def __post_init__(self):
        if not isinstance(self.modulus, int) or self.modulus < 1:
            raise DomainError(f"modulus must be a positive integer, got {self.modulus!r}")

    @cached_property
    def elements(self) -> tuple[int, ...]:
        return tuple(divisors(self.modulus))

    @cached_property
    def index(self) -> dict[int, int]:
        return {e: i for i, e in enumerate(self.elements)}

    @cached_property
    def order_matrix(self) -> tuple[tuple[bool, ...], ...]:
        """``order_matrix[i][j]`` is True iff ``elements[i]`` divides ``elements[j]``."""
        return tuple(tuple(b % a == 0 for b in self.elements) for a in self.elements)

    def __contains__(self, n) -> bool:
        return n in self.index

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def check(self, *ns: int) -> None:
        for n in ns:
            if n not in self.index:
                raise DomainError(f"{n!r} is not a divisor of {self.modulus}")

    def leq(self, k: int, n: int) -> bool:
        self.check(k, n)
        return self.order_matrix[self.index[k]][self.index[n]]

    def meet(self, m: int, n: int) -> int:
        self.check(m, n)
        return math.gcd(m, n)

    def join(self, m: int, n: int) -> int:
        self.check(m, n)
        return lcm(m, n)

    def down_set(self, n: int):
        """The maximal sieve on ``n``: every divisor of ``n``."""
        from .sieves import Sieve

        self.check(n)
        return Sieve(n, frozenset(d for d in self.elements if n % d == 0))

    def up_set(self, n: int) -> frozenset[int]:
        self.check(n)
        return frozenset(m for m in self.elements if m % n == 0)

    def down_closure(self, members) -> frozenset[int]:
        """Union of the down-sets of ``members``."""
        members = set(members)
        self.check(*members)
        return frozenset(d for d in self.elements if any(m % d == 0 for m in members))

    def covering_edges(self) -> list[tuple[int, int]]:
        """Pairs ``(k, n)`` with ``n / k`` prime: the edges of the Hasse diagram."""
        primes = list(factorize(self.modulus))
        elems = set(self.elements)
        return sorted(
            (k, k * p) for k in self.elements for p in primes if k * p in elems
        )

    def dual(self) -> DualOrderView:
        return DualOrderView(self)

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "elements": list(self.elements),
            "hasse": [list(e) for e in self.covering_edges()],
        }

    def to_dot(self) -> str:
        ranks: dict[int, list[int]] = {}
        for n in self.elements:
            ranks.setdefault(omega_count(n), []).append(n)
        lines = [f"digraph D{self.modulus} {{", "  rankdir=BT;", "  node [shape=circle];"]
        for n in self.elements:
            lines.append(f'  "{n}";')
        for r in sorted(ranks):
            same = " ".join(f'"{n}";' for n in ranks[r])
            lines.append(f"  {{ rank=same; {same} }}")
        for k, n in self.covering_edges():
            lines.append(f'  "{k}" -> "{n}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DualOrderView:
    """The multiplicative order on D_N: ``a`` precedes ``b`` iff ``b`` divides ``a``."""

    base: AmbientLattice

    def leq(self, a: int, b: int) -> bool:
        return self.base.leq(b, a)

    def meet(self, a: int, b: int) -> int:
        return self.base.join(a, b)

    def join(self, a: int, b: int) -> int:
        return self.base.meet(a, b)


def check_partial_order(lattice: AmbientLattice) -> tuple[int, ...] | None:
    """First violation of reflexivity, antisymmetry or transitivity, or None."""
    els = lattice.elements
    for a in els:
        if not lattice.leq(a, a):
            return (a,)
    for a, b in product(els, repeat=2):
        if a != b and lattice.leq(a, b) and lattice.leq(b, a):
            return (a, b)
    for a, b, c in product(els, repeat=3):
        if lattice.leq(a, b) and lattice.leq(b, c) and not lattice.leq(a, c):
            return (a, b, c)
    return None


def check_bounds(lattice: AmbientLattice) -> tuple[int, int] | None:
    """Check that meet/join are the greatest lower / least upper bounds.

    Returns the first offending pair, or None.
    """
    els = lattice.elements
    for m, n in product(els, repeat=2):
        g, j = lattice.meet(m, n), lattice.join(m, n)
        if not (lattice.leq(g, m) and lattice.leq(g, n)):
            return (m, n)
        if not (lattice.leq(m, j) and lattice.leq(n, j)):
            return (m, n)
        for t in els:
            if lattice.leq(t, m) and lattice.leq(t, n) and not lattice.leq(t, g):
                return (m, n)
            if lattice.leq(m, t) and lattice.leq(n, t) and not lattice.leq(j, t):
                return (m, n)
    return None


def distributivity_counterexample(lattice: AmbientLattice) -> tuple[int, int, int] | None:
    for a, b, c in product(lattice.elements, repeat=3):
        if math.gcd(a, lcm(b, c)) != lcm(math.gcd(a, b), math.gcd(a, c)):
            return (a, b, c)
    return None


def check_distributive(lattice: AmbientLattice) -> bool:
    """Exhaustively verify gcd(a, lcm(b, c)) == lcm(gcd(a, b), gcd(a, c))."""
    return distributivity_counterexample(lattice) is None
