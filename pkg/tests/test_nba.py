import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import BACKENDS
from hyperaffine.errors import NotBijective
from hyperaffine.nba import (NBA, axiom_holds_at, boolean_isomorphism, check_axioms, check_coordinate_algebra,
                             coordinate_algebra, coordinate_carrier, coordinates, dicker_failures, format_nba,
                             mutation_check, nba_from_theory, psi_reconstruct)
from hyperaffine.rings import boolean_view, is_boolean, make_powerset_boolean, make_zmod
from hyperaffine.theory import affine_theory, coefficient, hyperaffine_theory

B1, B2 = make_powerset_boolean(1), make_powerset_boolean(2)
H1T, H2T = hyperaffine_theory(B1), hyperaffine_theory(B2)


# oracle: direct loops over every assignment, written independently of the axiom builders
def brute_axioms(a):
    N, n, q, e = a.carrier_size, a.n, a.q, a.constants
    out = {}
    for i in range(n):
        out[f"H1 i={i + 1}"] = sum(q(e[i], *xs) != xs[i] for xs in itertools.product(range(N), repeat=n))
    out["H2"] = sum(q(y, *([x] * n)) != x for y in range(N) for x in range(N))
    out["H5"] = sum(q(y, *e) != y for y in range(N))
    bad3 = bad4 = 0
    for y in range(N):
        for xs in itertools.product(range(N), repeat=n * n):
            X = [xs[i * n:(i + 1) * n] for i in range(n)]
            bad3 += q(y, *(q(y, *X[i]) for i in range(n))) != q(y, *(X[i][i] for i in range(n)))
            for zs in itertools.product(range(N), repeat=n):
                lhs = q(y, *(q(zs[i], *X[i]) for i in range(n)))
                rhs = q(q(y, *zs), *(q(y, *(X[i][j] for i in range(n))) for j in range(n)))
                bad4 += lhs != rhs
    out["H3"], out["H4"] = bad3, bad4
    return out


def bad_counts(rep):
    out = {}
    for c in rep.checks:
        if c.passed:
            out[c.name] = 0
        else:
            out[c.name] = int(c.detail.split("(exhaustive, ")[1].split(" of")[0])
    return out


# construction --------------------------------------------------------------------------

def test_theory_nba_shape():
    a = nba_from_theory(H2T, 3)
    assert a.carrier_size == 9 and a.dense and a.q_table.shape == (9,) * 4
    for i, e in enumerate(a.constants):
        assert a.operations[e] == H2T.projection(3, i + 1)
    lines = format_nba(a).splitlines()
    assert lines[0] == "nba dimension 3" and lines[1] == "carrier 9"
    assert len(lines[-1].split()) == 1 + 9**4


def test_virtual_above_dense_caps():
    a = nba_from_theory(H1T, 4)
    assert not a.dense and a.carrier_size == 4
    assert a.q(a.constants[2], 0, 1, 2, 3) == 2
    rep = check_axioms(a, samples=300)
    assert rep.ok and all("sampled" in c.detail for c in rep.checks)


def test_nba_validation():
    with pytest.raises(ValueError):
        NBA(2, 2, np.zeros((2, 2, 2)), (0,))
    with pytest.raises(ValueError):
        NBA(2, 2, np.zeros((2, 2)), (0, 1))
    with pytest.raises(ValueError):
        NBA(2, 2, None, (0, 1))
    with pytest.raises(ValueError):
        nba_from_theory(affine_theory(make_zmod(3)), 2)


# axioms ---------------------------------------------------------------------------------

@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("t,n", [(H1T, 2), (H2T, 2), (H1T, 3), (H2T, 1)], ids=str)
def test_theory_nbas_satisfy_axioms(backend, t, n):
    a = nba_from_theory(t, n)
    rep = check_axioms(a, backend=backend)
    assert rep.ok
    assert [c.name for c in rep.checks] == [f"H1 i={i + 1}" for i in range(n)] + ["H2", "H5", "H3", "H4"]
    assert all("exhaustive" in c.detail for c in rep.checks)
    if a.carrier_size ** (1 + n + n * n) <= 10**5:
        assert all(v == 0 for v in brute_axioms(a).values())


@pytest.mark.parametrize("backend", BACKENDS)
def test_full_check_three_dimensional(backend):
    rep = check_axioms(nba_from_theory(H2T, 3), backend=backend)
    assert rep.ok
    assert rep.get("H4").detail == f"(exhaustive, {9**13} assignments)"


def tables(N, n):
    return st.lists(st.integers(0, N - 1), min_size=N ** (n + 1), max_size=N ** (n + 1)).map(
        lambda v: np.array(v).reshape((N,) * (n + 1)))


@pytest.mark.parametrize("backend", BACKENDS)
@given(data=st.data())
@settings(max_examples=40, deadline=None)
def test_counts_match_brute_force_on_random_tables(backend, data):
    N = data.draw(st.integers(1, 3))
    n = 2
    table = data.draw(tables(N, n))
    consts = tuple(data.draw(st.lists(st.integers(0, N - 1), min_size=n, max_size=n)))
    a = NBA(n, N, table, consts)
    rep = check_axioms(a, backend=backend)
    assert bad_counts(rep) == brute_axioms(a)
    for c in rep.failures:
        assert not axiom_holds_at(a, c.name, c.payload)


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
@settings(max_examples=50, deadline=None)
def test_single_mutation_is_caught(i, j, k, m):
    a = nba_from_theory(H2T, 2)
    N = a.carrier_size
    idx = (i % N, j % N, k % N)
    new = (int(a.q_table[idx]) + 1 + m % (N - 1)) % N
    rep = check_axioms(a.mutated(idx, new))
    assert not rep.ok
    c = rep.failures[0]
    assert c.line().startswith(f"FAIL {c.name} at ")
    assert not axiom_holds_at(a.mutated(idx, new), c.name, c.payload)
    assert axiom_holds_at(a, c.name, c.payload)


@pytest.mark.parametrize("backend", BACKENDS)
def test_mutation_check(backend):
    out = mutation_check(nba_from_theory(H2T, 3), count=20, seed=7, backend=backend)
    assert len(out) == 20 and len({idx for idx, _, _ in out}) == 20
    assert all(failing for _, _, failing in out)


def test_sampled_mode_respects_cap_and_seed():
    a = nba_from_theory(H2T, 2)
    rep = check_axioms(a, exhaustive_cap=100, samples=200, seed=3)
    assert rep.ok
    assert rep.get("H1 i=1").detail.startswith("(exhaustive")
    assert rep.get("H4").detail == "(sampled, 200 assignments)"
    broken = a.mutated((a.constants[0], 0, 1), 2)
    r1 = check_axioms(broken, exhaustive_cap=1, samples=2000, seed=5)
    r2 = check_axioms(broken, exhaustive_cap=1, samples=2000, seed=5)
    assert r1.render() == r2.render() and not r1.ok


def test_unknown_axiom_replay():
    with pytest.raises(KeyError):
        axiom_holds_at(nba_from_theory(H1T, 2), "H9", [0])


def test_one_element_nba():
    a = NBA(2, 1, np.zeros((1, 1, 1)), (0, 0))
    assert check_axioms(a).ok
    assert coordinate_carrier(a) == [0]


# coordinates -----------------------------------------------------------------------------

def test_coordinates_of_constants():
    a = nba_from_theory(H2T, 3)
    e = a.constants
    for i in range(3):
        assert coordinates(a, e[i]) == tuple(e[0] if j == i else e[1] for j in range(3))
    with pytest.raises(ValueError):
        coordinates(nba_from_theory(H2T, 1), 0)


def test_coordinate_matches_theory_coefficient():
    a = nba_from_theory(H2T, 3)
    s, t = B2.element("{s}"), B2.element("{t}")
    x = a.operations.index(H2T.operation((s, t, 0)))
    c1 = a.operations[coordinates(a, x)[0]]
    # the binary operation (b, not b) sits in T(3) as (b, not b, 0 ... ) after identifying
    # the first two projections; its first entry is the coefficient
    assert c1.coeffs[0] == coefficient(a.operations[x], 1).coeffs[0] == s
    for y in range(a.carrier_size):
        for i, c in enumerate(coordinates(a, y)):
            assert a.operations[c].coeffs[0] == a.operations[y].coeffs[i]


@pytest.mark.parametrize("t,n,size", [(H2T, 3, 4), (H2T, 2, 4), (H1T, 2, 2), (H1T, 3, 2),
                                      (hyperaffine_theory(make_powerset_boolean(3)), 2, 8)], ids=str)
def test_coordinate_algebra_sizes(t, n, size):
    a = nba_from_theory(t, n)
    ca = coordinate_algebra(a)
    assert ca.size == size
    ring = ca.as_ring()
    assert is_boolean(ring) and not dicker_failures(ca)
    assert boolean_isomorphism(ring, t.ring) is not None
    rep = check_coordinate_algebra(a, t.ring)
    assert rep.ok and rep.get(f"B_A iso {t.ring.spec}").passed


def test_boolean_isomorphism_oracle():
    v = boolean_view(B2)
    phi = boolean_isomorphism(B2, B2)
    assert phi is not None and phi[0] == 0 and phi[B2.one] == B2.one
    assert boolean_isomorphism(B1, B2) is None
    assert boolean_isomorphism(make_zmod(4), B2) is None
    assert len(v.atoms) == 2


def test_coordinate_algebra_detects_wrong_target():
    a = nba_from_theory(H2T, 2)
    rep = check_coordinate_algebra(a, make_powerset_boolean(3))
    assert not rep.ok and rep.failures[0].name == "B_A iso bool:3"


# reconstruction ----------------------------------------------------------------------------

@pytest.mark.parametrize("t,n", [(H2T, 3), (H2T, 2), (H1T, 2)], ids=str)
def test_psi_is_identity_up_to_identification(t, n):
    a = nba_from_theory(t, n)
    res = psi_reconstruct(a, t)
    assert res.ok
    assert len(res.psi) == a.carrier_size
    for i, e in enumerate(a.constants):
        assert res.psi[e] == t.projection(n, i + 1)
    assert res.psi == tuple(a.operations)


def test_psi_rejects_mismatched_target():
    with pytest.raises(NotBijective):
        psi_reconstruct(nba_from_theory(H2T, 2), hyperaffine_theory(make_powerset_boolean(3)))
