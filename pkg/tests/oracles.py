"""Independent reference computations used to freeze expected values.

Nothing here imports the package: each oracle recomputes its answer by the
most direct method available (trial division, power-set filtering, iteration).
"""

from itertools import product


def divisors_by_trial(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def factor_exponents(n):
    out = {}
    p = 2
    while n > 1:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    return out


def gcd_by_factorization(a, b):
    fa, fb = factor_exponents(a), factor_exponents(b)
    out = 1
    for p in fa:
        out *= p ** min(fa[p], fb.get(p, 0))
    return out


def lcm_by_factorization(a, b):
    fa, fb = factor_exponents(a), factor_exponents(b)
    out = 1
    for p in set(fa) | set(fb):
        out *= p ** max(fa.get(p, 0), fb.get(p, 0))
    return out


def implies_by_max(N, k, n):
    """Largest divisor t of N (in divisibility) with gcd(t, k) | n."""
    ok = [t for t in divisors_by_trial(N) if n % gcd_by_factorization(t, k) == 0]
    top = [t for t in ok if all(t % s == 0 for s in ok)]
    assert len(top) == 1
    return top[0]


def down_sets_by_filter(n):
    ds = divisors_by_trial(n)
    out = set()
    for mask in range(1 << len(ds)):
        s = frozenset(ds[i] for i in range(len(ds)) if mask >> i & 1)
        if all(t in s for k in s for t in ds if k % t == 0):
            out.add(s)
    return out


def grid_down_set_count(exponents):
    """Down-sets of a product of chains, counted via antichains of the grid.

    Every down-set is determined by its set of maximal elements, an antichain;
    counting antichains by direct enumeration over subsets of the grid.
    """
    points = list(product(*(range(e + 1) for e in exponents)))
    count = 0
    for mask in range(1 << len(points)):
        chosen = [points[i] for i in range(len(points)) if mask >> i & 1]
        if all(
            a == b or not all(x <= y for x, y in zip(a, b))
            for a in chosen
            for b in chosen
        ):
            count += 1
    return count


def fixed_points_of_iterate(mapping, n):
    out = set()
    for x in range(len(mapping)):
        y = x
        for _ in range(n):
            y = mapping[y]
        if y == x:
            out.add(x)
    return out
