import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperaffine.errors import DecompositionFailed, EmptyStalk, ModelFormatError, NotABSet, SuiteFailed
from hyperaffine.models import (B_AXIOMS, R_AXIOMS, FiniteModel, SheafData, affine_model_from_vector_space,
                                axiom_equivalence_probe, canonical_bset, check_a_axioms, check_b_axioms,
                                check_comb, check_group, check_l1, check_r_axioms, decompose_to_stalks,
                                format_model, parse_model, regular_model, suite_holds_batch,
                                vect_sheaf_decompose, vector_space_from_affine_model)
from hyperaffine.rings import boolean_view, make_powerset_boolean, make_zmod, parse_ring_spec

B0, B1, B2 = (make_powerset_boolean(k) for k in range(3))


# oracle: per-instance loops with the axioms written out by hand
def brute_b(m):
    R, X, r = m.ring.elements, range(m.carrier_size), m.ring
    a = m.act
    out = {
        "B1": all(a(b, x, x) == x for b in R for x in X),
        "B2": all(a(b, a(b, x, y), z) == a(b, x, z) == a(b, x, a(b, y, z)) for b in R for x in X for y in X for z in X),
        "B3": all(a(r.sub(r.one, b), x, y) == a(b, y, x) for b in R for x in X for y in X),
        "B4": all(a(r.zero, x, y) == y for x in X for y in X),
        "B5": all(a(b, a(c, x, y), y) == a(r.mul(b, c), x, y) for b in R for c in R for x in X for y in X),
    }
    return out


def brute_r(m):
    R, X, r = m.ring.elements, range(m.carrier_size), m.ring
    a = m.act
    P = list(itertools.product(X, repeat=4))
    return {
        "R1": all(a(b, x, x) == x for b in R for x in X),
        "R2": all(a(b, a(c, x, y), a(c, z, w)) == a(c, a(b, x, z), a(b, y, w)) for b in R for c in R for x, y, z, w in P),
        "R3": all(a(r.one, x, y) == x and a(r.zero, x, y) == y for x in X for y in X),
        "R4": all(a(p, a(b, x, y), a(c, x, y)) == a(r.add(r.mul(p, b), r.mul(r.sub(r.one, p), c)), x, y)
                  for p in R for b in R for c in R for x in X for y in X),
        "R5": all(a(b, a(b, x, y), a(b, z, w)) == a(b, x, w) for b in R for x, y, z, w in P),
    }


def verdicts(rep):
    return {c.name: c.passed for c in rep.checks}


def random_model(ring, N, seed):
    rng = np.random.default_rng(seed)
    return FiniteModel(N, ring, rng.integers(N, size=(ring.size, N, N)))


# suites ---------------------------------------------------------------------------------

@given(st.integers(0, 10**6), st.integers(1, 3), st.sampled_from([0, 1, 2]), st.booleans())
@settings(max_examples=60, deadline=None)
def test_suites_match_brute_force(seed, N, k, force):
    ring = make_powerset_boolean(k)
    m = random_model(ring, N, seed)
    if force:
        e = np.arange(N)
        m.action[:, e, e] = e
        m.action[ring.one] = e[:, None]
        m.action[ring.zero] = e[None, :]
    assert verdicts(check_b_axioms(m)) == brute_b(m)
    assert verdicts(check_r_axioms(m)) == brute_r(m)
    batch = suite_holds_batch(B_AXIOMS, ring, m.action[None])
    assert bool(batch[0]) == all(brute_b(m).values())
    batch = suite_holds_batch(R_AXIOMS, ring, m.action[None])
    assert bool(batch[0]) == all(brute_r(m).values())


def test_failure_lines_cite_instances():
    m = canonical_bset(SheafData(B1, (3,)))
    m.action[0, 0, 1] = 2
    rep = check_b_axioms(m)
    c = rep.get("B4")
    assert not c.passed and c.line().startswith("FAIL B4 at x=(0), y=(1)")
    assert rep.get("B1").detail == "(full scan, 6 instances)"
    r = check_r_axioms(m)
    assert not r.get("R3").passed


def test_one_element_model_passes():
    m = FiniteModel(1, B2, np.zeros((4, 1, 1)))
    assert check_b_axioms(m).ok and check_r_axioms(m).ok


def test_r5_can_be_left_out():
    m = canonical_bset(SheafData(B1, (2,)))
    assert [c.name for c in check_r_axioms(m, include_r5=False).checks] == ["R1", "R2", "R3", "R4"]


@pytest.mark.parametrize("idx", [(1, 0, 1), (2, 3, 4), (3, 5, 0), (0, 2, 2)])
def test_mutating_a_canonical_model_breaks_a_suite(idx):
    m = canonical_bset(SheafData(B2, (2, 3)))
    m.action[idx] = (m.action[idx] + 1) % 6
    assert not check_b_axioms(m).ok
    assert not check_r_axioms(m).ok


# canonical models -----------------------------------------------------------------------

def test_canonical_example():
    m = canonical_bset(SheafData(B2, (2, 3)))
    assert m.carrier_size == 6
    s = B2.element("{s}")
    x, y = m.labels.index("(1,2)"), m.labels.index("(0,0)")
    assert m.labels[m.act(s, x, y)] == "(1,0)"
    e = np.arange(6)
    assert (m.action[B2.one] == e[:, None]).all() and (m.action[B2.zero] == e[None, :]).all()
    assert check_b_axioms(m).ok and check_r_axioms(m).ok


def test_canonical_action_oracle():
    v = boolean_view(B2)
    m = canonical_bset(SheafData(B2, (3, 2)))
    pts = [tuple(int(c) for c in lab.strip("()").split(",")) for lab in m.labels]
    for b in B2.elements:
        under = v.atoms_below(b)
        for i, x in enumerate(pts):
            for j, y in enumerate(pts):
                want = tuple(x[k] if k in under else y[k] for k in range(2))
                assert pts[m.act(b, i, j)] == want


def test_singleton_stalks_and_errors():
    assert canonical_bset(SheafData(B2, (1, 1))).carrier_size == 1
    with pytest.raises(EmptyStalk):
        canonical_bset(SheafData(B2, (0, 2)))
    with pytest.raises(ValueError):
        canonical_bset(SheafData(B2, (2,)))


@given(st.sampled_from([0, 1, 2, 3]), st.data())
@settings(max_examples=30, deadline=None)
def test_decompose_inverts_canonical(k, data):
    ring = make_powerset_boolean(k)
    stalks = tuple(data.draw(st.lists(st.integers(1, 3), min_size=k, max_size=k)))
    if np.prod(stalks) > 12:
        stalks = tuple(min(s, 2) for s in stalks)
    m = canonical_bset(SheafData(ring, stalks))
    perm = np.random.default_rng(k).permutation(m.carrier_size)
    inv = np.argsort(perm)
    shuffled = FiniteModel(m.carrier_size, ring, perm[m.action[:, inv[:, None], inv[None, :]]])
    dec = decompose_to_stalks(shuffled)
    assert dec.sheaf.stalks == stalks
    assert dec.report.ok
    ph = np.array(dec.eval_map)
    assert sorted(dec.eval_map) == list(range(m.carrier_size))
    assert (ph[shuffled.action] == dec.canonical.action[:, ph[:, None], ph[None, :]]).all()


def test_decompose_regular_boolean_ring():
    dec = decompose_to_stalks(regular_model(B2))
    assert dec.sheaf.stalks == (2, 2)
    assert decompose_to_stalks(FiniteModel(1, B2, np.zeros((4, 1, 1)))).sheaf.stalks == (1, 1)
    assert decompose_to_stalks(regular_model(B0)).sheaf.stalks == ()


def test_decompose_rejects_non_bsets():
    m = random_model(B1, 3, 0)
    with pytest.raises(NotABSet):
        decompose_to_stalks(m)


# regular models and the vector-space round trip --------------------------------------------

def test_regular_model_tables():
    for ring in (B2, make_zmod(3), make_zmod(4)):
        m = regular_model(ring)
        r = ring
        for a in r.elements:
            for x in r.elements:
                for y in r.elements:
                    assert m.act(a, x, y) == r.add(r.mul(a, x), r.mul(r.sub(r.one, a), y))
                    for z in r.elements:
                        assert m.p_table[x, y, z] == r.add(r.sub(x, y), z)


@pytest.mark.parametrize("spec", ["bool:1", "bool:2", "bool:3"])
def test_regular_boolean_model_passes_everything(spec):
    ring = parse_ring_spec(spec)
    m = regular_model(ring)
    assert check_r_axioms(m).ok
    assert check_a_axioms(m).ok
    v = vector_space_from_affine_model(m, 0)
    assert check_group(v).ok and check_l1(v).ok and check_comb(v).ok


def test_r5_over_boolean_and_non_boolean_rings():
    # over a Boolean ring b(b(x,y), b(z,w)) = bx + (1-b)w, so the linear model satisfies R5
    assert check_r_axioms(regular_model(B2)).get("R5").passed
    # over Z3, where b^2 != b, it fails
    rep = check_r_axioms(regular_model(make_zmod(3)))
    assert [c.name for c in rep.failures] == ["R5"]
    assert rep.get("R5").instance == "b=2, x=0, y=0, z=0, w=1"


def test_a3_instance_over_bool1():
    m = regular_model(B1)
    assert m.p_table[0, 1, 0] == 1 == m.act(B1.from_int(2), 0, 1)


def test_vector_space_from_regular_model():
    m = regular_model(B2)
    v = vector_space_from_affine_model(m, 0)
    assert (v.add_table == B2.add_table).all()
    for x in range(4):
        assert v.p_table[x, 0, x] == 0 and v.add_table[x, 0] == x


@pytest.mark.parametrize("spec,o", [("bool:1", 0), ("bool:2", 0), ("bool:2", 3), ("bool:2", 2)])
def test_round_trip_is_identity(spec, o):
    m = regular_model(parse_ring_spec(spec))
    v = vector_space_from_affine_model(m, o)
    back = affine_model_from_vector_space(v)
    assert (back.p_table == m.p_table).all()
    again = vector_space_from_affine_model(back, o)
    assert (again.add_table == v.add_table).all()
    assert check_a_axioms(back).ok


def test_conversions_reject_bad_models():
    m = regular_model(B1)
    m.p_table[0, 1, 1] = 1
    with pytest.raises(SuiteFailed):
        vector_space_from_affine_model(m, 0)
    v = vector_space_from_affine_model(regular_model(B1), 0)
    v.add_table[1, 1] = 1
    with pytest.raises(SuiteFailed):
        affine_model_from_vector_space(v)


def test_nonlinear_action_fails_l1():
    v = vector_space_from_affine_model(regular_model(B2), 0)
    v.action[B2.element("{s}"), 1, 2] = 0
    rep = check_l1(v)
    assert not rep.ok and rep.failures[0].line().startswith("FAIL L1 at b=")


def test_vect_decomposition():
    dec = vect_sheaf_decompose(regular_model(B2), 0)
    assert dec.sheaf.stalks == (2, 2) and dec.sheaf.is_group
    assert dec.report.ok
    assert all(t.shape == (2, 2) for t in dec.sheaf.adds)
    assert dec.report.get("evaluation additive").passed
    assert vect_sheaf_decompose(regular_model(B0), 0).sheaf.stalks == ()


def test_vect_decomposition_of_product_model():
    ring = parse_ring_spec("prod(bool:1,bool:1)")
    dec = vect_sheaf_decompose(regular_model(ring), ring.zero)
    assert dec.sheaf.stalks == (2, 2) and dec.report.ok
    canon = canonical_bset(SheafData(ring, (2, 2), (0, 0), tuple(np.array([[0, 1], [1, 0]]) for _ in range(2))))
    assert check_group(canon).ok and check_l1(canon).ok and check_comb(canon).ok


def test_vect_decomposition_rejects_broken_models():
    m = random_model(B1, 2, 3).with_tables(add_table=np.array([[0, 1], [1, 0]]), o=0)
    with pytest.raises(SuiteFailed):
        vect_sheaf_decompose(m)
    with pytest.raises(SuiteFailed):
        vect_sheaf_decompose(regular_model(make_zmod(3)).with_tables(add_table=make_zmod(3).add_table), 0)


# probe ----------------------------------------------------------------------------------

def test_probe_small():
    rep = axiom_equivalence_probe(B1, 2, samples=500, seed=1)
    assert rep.ok and rep.disagreements == 0
    assert rep.render() == axiom_equivalence_probe(B1, 2, samples=500, seed=1).render()
    assert axiom_equivalence_probe(B0, 2, samples=50).ok
    with pytest.raises(ValueError):
        axiom_equivalence_probe(make_powerset_boolean(3), 2)
    with pytest.raises(ValueError):
        axiom_equivalence_probe(B1, 4)


def test_b4_violation_violates_r3():
    m = canonical_bset(SheafData(B1, (2,)))
    m.action[B1.zero, 1, 0] = 1
    assert not check_b_axioms(m).get("B4").passed and not check_r_axioms(m).get("R3").passed


# text format --------------------------------------------------------------------------------

def test_format_round_trip():
    m = vector_space_from_affine_model(regular_model(B2), 1)
    text = format_model(m)
    assert text.splitlines()[0] == "model 4 over bool:2"
    back = parse_model("# comment\n" + text)
    assert (back.action == m.action).all() and (back.p_table == m.p_table).all()
    assert (back.add_table == m.add_table).all() and back.o == 1
    assert format_model(back) == text


@pytest.mark.parametrize("text,line,column", [
    ("model 2 over zmod:2\naction 0 : 0 1 0\n", 2, 17),
    ("model 2 over zmod:2\naction 0 : 0 1 x 1\n", 2, 16),
    ("model 2 over zmod:2\naction 0 : 0 1 5 1\n", 2, 16),
    ("modl 2 over bool:1\n", 1, 1),
    ("model 2 over bool:11\n", 1, 14),
    ("model 2 over zmod:x\n", 1, 14),
    ("model 2 over bool:1\naction {q} : 0 1 0 1\n", 2, 8),
    ("model 2 over bool:1\nzap : 1\n", 2, 1),
    ("model 2 over bool:1\nno colon here\n", 2, 1),
])
def test_format_diagnostics(text, line, column):
    with pytest.raises(ModelFormatError) as info:
        parse_model(text)
    assert (info.value.line, info.value.column) == (line, column)
    assert str(info.value).startswith(f"line {line}, column {column}: ")


def test_missing_action():
    with pytest.raises(ModelFormatError, match="missing action"):
        parse_model("model 2 over zmod:2\naction 0 : 0 1 0 1\n")
    with pytest.raises(ModelFormatError):
        parse_model("")
