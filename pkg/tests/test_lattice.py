import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divitopos.errors import DomainError
from divitopos.lattice import (
    AmbientLattice,
    check_bounds,
    check_distributive,
    check_partial_order,
    divisors,
    is_squarefree,
)

from oracles import divisors_by_trial, factor_exponents, gcd_by_factorization, lcm_by_factorization

D12 = AmbientLattice(12)


@pytest.mark.parametrize(
    "n, expected",
    [(1, [1]), (12, [1, 2, 3, 4, 6, 12]), (97, [1, 97])],
)
def test_divisors_small(n, expected):
    assert divisors(n) == expected


def test_divisors_of_360_has_24_elements():
    # frozen from the trial-division oracle
    assert len(divisors(360)) == 24


@given(st.integers(1, 5000))
def test_divisors_match_trial_division(n):
    assert divisors(n) == divisors_by_trial(n)


def test_lattice_elements_and_bounds():
    lat = AmbientLattice(360)
    assert lat.elements[0] == 1 and lat.elements[-1] == 360
    assert all(a < b for a, b in zip(lat.elements, lat.elements[1:]))
    assert all(360 % e == 0 for e in lat.elements)


def test_leq():
    assert D12.leq(3, 6)
    assert not D12.leq(4, 6)
    assert all(D12.leq(1, n) for n in D12)


def test_leq_rejects_non_elements():
    with pytest.raises(DomainError):
        D12.leq(5, 12)


def test_order_matrix_is_divisibility():
    lat = AmbientLattice(60)
    for i, a in enumerate(lat.elements):
        for j, b in enumerate(lat.elements):
            assert lat.order_matrix[i][j] == (b % a == 0)


def test_meet_join():
    assert D12.meet(4, 6) == 2
    assert D12.join(4, 6) == 12
    assert D12.meet(6, 6) == 6 and D12.join(6, 6) == 6
    d30 = AmbientLattice(30)
    assert (d30.meet(5, 6), d30.join(5, 6)) == (1, 30)


@settings(max_examples=50)
@given(st.sampled_from(divisors(720)), st.sampled_from(divisors(720)))
def test_meet_join_match_factorization(a, b):
    lat = AmbientLattice(720)
    assert lat.meet(a, b) == gcd_by_factorization(a, b)
    assert lat.join(a, b) == lcm_by_factorization(a, b)


def test_down_and_up_sets():
    assert D12.down_set(4).key == (1, 2, 4)
    assert D12.up_set(4) == {4, 12}
    assert set(D12.down_set(12).members) == set(D12.elements)


def test_down_set_down_closed_up_set_up_closed():
    lat = AmbientLattice(72)
    for n in lat:
        down = lat.down_set(n).members
        assert all(t in down for k in down for t in lat if k % t == 0)
        up = lat.up_set(n)
        assert all(m in up for k in up for m in lat if m % k == 0)


def test_down_closure():
    assert D12.down_closure({4, 6}) == {1, 2, 3, 4, 6}
    assert D12.down_closure(set()) == frozenset()
    assert D12.down_closure({12}) == set(D12.elements)


def test_covering_edges():
    assert AmbientLattice(4).covering_edges() == [(1, 2), (2, 4)]
    assert len(D12.covering_edges()) == 7
    assert AmbientLattice(13).covering_edges() == [(1, 13)]


@given(st.integers(1, 2000))
def test_covering_edges_have_prime_quotient(n):
    lat = AmbientLattice(n)
    expected = sorted(
        (k, m)
        for k in lat
        for m in lat
        if m % k == 0 and m != k and sum(factor_exponents(m // k).values()) == 1
    )
    assert lat.covering_edges() == expected


def test_is_squarefree():
    assert is_squarefree(30)
    assert not is_squarefree(12)
    assert is_squarefree(1)


@pytest.mark.parametrize("n", [1, 12, 360])
def test_distributive(n):
    assert check_distributive(AmbientLattice(n))


@pytest.mark.parametrize("n", [1, 2, 12, 30, 64, 210])
def test_partial_order_and_bounds(n):
    lat = AmbientLattice(n)
    assert check_partial_order(lat) is None
    assert check_bounds(lat) is None


def test_dual_order_view():
    lat = AmbientLattice(36)
    dual = lat.dual()
    for a in lat:
        for b in lat:
            assert dual.leq(a, b) == lat.leq(b, a)
            assert dual.meet(a, b) == math.lcm(a, b)


def test_json_and_dot():
    data = D12.to_json()
    assert data == {
        "modulus": 12,
        "elements": [1, 2, 3, 4, 6, 12],
        "hasse": [[1, 2], [1, 3], [2, 4], [2, 6], [3, 6], [4, 12], [6, 12]],
    }
    dot = D12.to_dot()
    assert dot.count("->") == 7
    assert '{ rank=same; "2"; "3"; }' in dot
    assert '{ rank=same; "4"; "6"; }' in dot


def test_invalid_modulus():
    with pytest.raises(DomainError):
        AmbientLattice(0)
