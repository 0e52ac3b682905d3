from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divitopos.errors import PresheafError
from divitopos.lattice import AmbientLattice
from divitopos.omega import (
    NaturalTransformation,
    Subpresheaf,
    build_omega,
    candidate_space,
    char_map,
    check_classification_bijection,
    corrupt,
    enumerate_natural_transformations,
    enumerate_subpresheaves,
    enumerate_subsheaves,
    is_closed_sieve,
    naturality_witness,
    random_subsheaf,
    true_arrow,
    verify_characteristic,
    verify_classifier,
)
from divitopos.presheaf import (
    constant_presheaf,
    is_sheaf,
    random_presheaf,
    random_sheaf,
    terminal_presheaf,
    validate_presheaf,
)
from divitopos.sieves import BUILTIN_TOPOLOGIES, Sieve, build_topology, enumerate_sieves

D4 = AmbientLattice(4)
D12 = AmbientLattice(12)


def tops(lat):
    return {name: build_topology(lat, name) for name in BUILTIN_TOPOLOGIES}


def a_component(f):
    return Subpresheaf(f, {n: {"a"} for n in f.lattice})


def test_maximal_sieve_always_closed():
    for lat in (D4, D12):
        for j in tops(lat).values():
            assert all(is_closed_sieve(lat, j, lat.down_set(n)) for n in lat)


def test_every_sieve_closed_for_trivial():
    j = build_topology(D12, "trivial")
    assert all(is_closed_sieve(D12, j, s) for n in D12 for s in enumerate_sieves(D12, n))


def test_atomic_singleton_not_closed():
    assert not is_closed_sieve(D4, build_topology(D4, "atomic"), Sieve(4, {1}))


def test_build_omega_examples():
    tri = build_omega(D12, build_topology(D12, "trivial"))
    assert len(tri(4)) == 4
    assert tri.underlying.restrict(4, 12, Sieve(12, {1, 2, 3, 6})) == Sieve(4, {1, 2})
    dis = build_omega(D12, build_topology(D12, "discrete"))
    assert all(dis(n) == (D12.down_set(n),) for n in D12)


@pytest.mark.parametrize("N", [1, 4, 12, 30, 36])
def test_omega_is_a_valid_sheaf(N):
    lat = AmbientLattice(N)
    for name, j in tops(lat).items():
        omega = build_omega(lat, j)
        assert validate_presheaf(omega.underlying) == (True, None)
        assert is_sheaf(omega.underlying, j).is_sheaf, name
        for n in lat:
            assert lat.down_set(n) in omega(n)
            assert all(is_closed_sieve(lat, j, s) for s in omega(n))


@pytest.mark.parametrize("N", [12, 36, 60])
def test_omega_sizes(N):
    lat = AmbientLattice(N)
    t = tops(lat)
    tri, dis, atom = (build_omega(lat, t[name]) for name in ("trivial", "discrete", "atomic"))
    for n in lat:
        assert len(tri(n)) == len(enumerate_sieves(lat, n))
        assert len(dis(n)) == 1
        assert set(atom(n)) == {Sieve(n, ()), lat.down_set(n)}


def test_true_arrow():
    omega = build_omega(D12, build_topology(D12, "atomic"))
    t = true_arrow(omega)
    assert t(12, "*").key == (1, 2, 3, 4, 6, 12)
    assert t(1, "*").key == (1,)
    assert omega.underlying.restrict(2, 12, t(12, "*")) == D12.down_set(2)
    assert naturality_witness(terminal_presheaf(D12), omega.underlying, t) is None


def test_char_map_of_whole_presheaf_is_true():
    f = constant_presheaf(D12, "ab")
    chi = char_map(Subpresheaf(f, {n: set(f.values[n]) for n in D12}), f)
    assert all(chi(n, x) == D12.down_set(n) for n in D12 for x in f.values[n])


def test_char_map_of_empty_subpresheaf():
    f = constant_presheaf(D12, "ab")
    j = build_topology(D12, "trivial")
    chi = char_map(Subpresheaf(f, {}), f, j)
    assert all(chi(n, x) == Sieve(n, ()) for n in D12 for x in f.values[n])
    assert is_closed_sieve(D12, j, Sieve(12, ()))


def test_char_map_pointwise_membership():
    f = constant_presheaf(D4, "ab")
    chi = char_map(a_component(f), f)
    assert chi(4, "a").key == (1, 2, 4)
    assert chi(4, "b").key == ()


def test_char_map_rejects_unclosed_selection():
    f = random_presheaf(D12, 1, 3)
    with pytest.raises(PresheafError):
        char_map(Subpresheaf(f, {12: set(f.values[12])}), f)


@pytest.mark.parametrize("name", BUILTIN_TOPOLOGIES)
def test_singleton_presheaf_classifier(name):
    j = build_topology(D12, name)
    ok, witness, _ = verify_classifier(terminal_presheaf(D12), j, trials=3)
    assert ok, witness


def test_constant_two_point_a_component_trivial():
    f = constant_presheaf(D12, "ab")
    j = build_topology(D12, "trivial")
    omega = build_omega(D12, j)
    a = a_component(f)
    assert candidate_space(f, omega) == 18_662_400
    res = verify_characteristic(f, a, char_map(a, f, j), omega, bound=10**8)
    assert res.passed and res.uniqueness_checked


def test_corrupted_char_map_fails():
    f = constant_presheaf(D12, "ab")
    j = build_topology(D12, "trivial")
    omega = build_omega(D12, j)
    a = a_component(f)
    chi = char_map(a, f, j)
    bad = corrupt(chi, 12, "b", D12.down_set(12))
    res = verify_characteristic(f, a, bad, omega)
    assert not res.passed
    assert res.witness == {
        "check": "naturality", "k": 1, "n": 12, "element": "b", "lhs": [1], "rhs": [],
    }
    swapped = corrupt(corrupt(chi, 1, "b", D12.down_set(1)), 1, "a", Sieve(1, ()))
    res = verify_characteristic(f, a, swapped, omega)
    assert not res.passed


def test_corruption_isolated_to_pullback_condition():
    # {1,2,3,4,6} and the maximal sieve on 12 pull back identically to every proper divisor
    f = terminal_presheaf(D12)
    j = build_topology(D12, "trivial")
    omega = build_omega(D12, j)
    a = Subpresheaf(f, {n: {"*"} for n in D12 if n != 12})
    chi = char_map(a, f, j)
    assert chi(12, "*").key == (1, 2, 3, 4, 6)
    bad = corrupt(chi, 12, "*", D12.down_set(12))
    res = verify_characteristic(f, a, bad, omega)
    assert not res.passed and res.witness["check"] == "pullback"


def brute_force_natural_count(f, omega, marker=None):
    slots = [(n, x) for n in f.lattice for x in f.values[n]]
    count = 0
    for choice in product(*(omega(n) for n, _ in slots)):
        comps = {n: {} for n in f.lattice}
        for (n, x), s in zip(slots, choice):
            comps[n][x] = s
        eta = NaturalTransformation(comps)
        if naturality_witness(f, omega.underlying, eta) is not None:
            continue
        if marker is not None and any(
            (eta(n, x) == f.lattice.down_set(n)) != (x in marker.selection[n]) for n, x in slots
        ):
            continue
        count += 1
    return count


@pytest.mark.parametrize("name", BUILTIN_TOPOLOGIES)
def test_natural_transformation_enumeration_matches_brute_force(name):
    j = build_topology(D4, name)
    omega = build_omega(D4, j)
    f = constant_presheaf(D4, "ab")
    assert candidate_space(f, omega) <= 576
    assert len(list(enumerate_natural_transformations(f, omega))) == brute_force_natural_count(f, omega)
    a = a_component(f)
    assert len(list(enumerate_natural_transformations(f, omega, marker=a))) == brute_force_natural_count(f, omega, a)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([4, 6, 12]))
def test_char_map_outputs_are_sieves(seed, N):
    lat = AmbientLattice(N)
    f = random_presheaf(lat, seed, 3)
    subs = enumerate_subpresheaves(f)
    for a in subs[:: max(1, len(subs) // 10)]:
        chi = char_map(a, f)
        for n in lat:
            for x in f.values[n]:
                s = chi(n, x)
                assert s.base == n
                assert all(t in s for k in s for t in lat if k % t == 0)


@pytest.mark.parametrize("N", [4, 6, 12])
@pytest.mark.parametrize("name", BUILTIN_TOPOLOGIES)
def test_classification_bijection(N, name):
    lat = AmbientLattice(N)
    j = build_topology(lat, name)
    for seed in range(3):
        f = random_sheaf(lat, j, seed, 2)
        ok, witness = check_classification_bijection(f, j)
        assert ok, witness


def test_subsheaves_are_sheaves():
    for name, j in tops(D12).items():
        f = random_sheaf(D12, j, 5, 2)
        for a in enumerate_subsheaves(f, j):
            assert is_sheaf(a.as_presheaf(), j).is_sheaf, name


@pytest.mark.parametrize("name", BUILTIN_TOPOLOGIES)
def test_random_subsheaf_is_closed(name):
    j = build_topology(D12, name)
    f = random_sheaf(D12, j, 9, 3)
    for seed in range(5):
        a = random_subsheaf(f, j, seed)
        assert a.closure_witness() is None
        assert is_sheaf(a.as_presheaf(), j).is_sheaf


def test_uniqueness_skipped_above_bound():
    f = random_presheaf(D12, 0, 3)
    j = build_topology(D12, "trivial")
    omega = build_omega(D12, j)
    a = random_subsheaf(f, j, 1)
    res = verify_characteristic(f, a, char_map(a, f, j), omega, bound=10)
    assert res.passed and not res.uniqueness_checked


def test_principal_variant_does_not_classify():
    j = build_topology(D12, "trivial")
    principal = build_omega(D12, j, principal=True)
    assert validate_presheaf(principal.underlying)[0]
    assert len(principal(12)) == 6 < len(enumerate_sieves(D12, 12))
    f = terminal_presheaf(D12)
    a = Subpresheaf(f, {1: {"*"}, 2: {"*"}, 3: {"*"}})
    chi = char_map(a, f, j)
    assert chi(12, "*").key == (1, 2, 3)
    res = verify_characteristic(f, a, chi, principal)
    assert not res.passed and res.witness["check"] == "naturality"
