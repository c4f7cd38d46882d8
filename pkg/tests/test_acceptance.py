"""Acceptance criteria 1-9.  Each test prints one line

    PASS criterion <k>: <what> [tolerance exact]
    FAIL criterion <k>: <what> [tolerance exact] -- <why>

and the lines are repeated together at the end of the pytest run.  Every
comparison is exact (integer tables and exhaustive or symbolic scans).
"""

import time

import pytest

from conftest import ACCEPTANCE_LINES
from hyperaffine.ite import SemanticOracle, check_dicker_axioms, corpus, equiv, eval_to_operation, normalize, \
    sample_pairs
from hyperaffine.models import (SheafData, affine_model_from_vector_space, axiom_equivalence_probe,
                                canonical_bset, check_a_axioms, check_b_axioms, check_comb, check_l1,
                                check_r_axioms, decompose_to_stalks, regular_model, vect_sheaf_decompose,
                                vector_space_from_affine_model)
from hyperaffine.nba import check_axioms, check_coordinate_algebra, mutation_check, nba_from_theory, \
    psi_reconstruct
from hyperaffine.rings import homs_to_f2, make_powerset_boolean, make_zmod
from hyperaffine.theory import (affine_theory, check_c5, check_commute, check_coordinates, check_idempotent,
                                check_m1_m2, check_ring_on_binary, check_split, hyperaffine_theory, is_malcev,
                                malcev_binary_expressibility, malcev_operation, malcev_operations,
                                verify_phi_morphism)

BOOLS = [make_powerset_boolean(k) for k in (1, 2, 3)]
ZMODS = [make_zmod(n) for n in (2, 3, 4, 6)]
STARTED = time.perf_counter()


def record(k, what, failures):
    """Print and store the criterion line, then fail the test if anything failed."""
    if failures:
        line = f"FAIL criterion {k}: {what} [tolerance exact] -- {'; '.join(failures)}"
    else:
        line = f"PASS criterion {k}: {what} [tolerance exact]"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert not failures, line


def failed(label, rep):
    return [f"{label}: {c.line()}" for c in rep.failures]


def test_criterion_1_hyperaffine_axioms():
    bad = []
    for b in BOOLS:
        t = hyperaffine_theory(b)
        for check in (check_idempotent, check_commute, check_split, check_c5):
            bad += failed(b.spec, check(t, 4))
    record(1, "H_B idempotent, commutative, splitting and distributive for bool:1..3, arity <= 4", bad)


def test_criterion_2_affine_axioms():
    bad = []
    for r in ZMODS:
        t = affine_theory(r)
        bad += failed(r.spec, check_idempotent(t, 4)) + failed(r.spec, check_commute(t, 4))
        p = malcev_operation(t)
        if not is_malcev(p):
            bad.append(f"{r.spec}: (1,-1,1) is not Mal'cev")
        bad += failed(r.spec, check_m1_m2(t, p))
        found = malcev_operations(t)
        if found != [p]:
            bad.append(f"{r.spec}: Mal'cev operations in A(3) are {found}")
    record(2, "A_R idempotent and commutative, (1,-1,1) the unique Mal'cev operation, for Z2, Z3, Z4, Z6", bad)


def test_criterion_3_round_trips():
    bad = []
    theories = [hyperaffine_theory(b) for b in BOOLS] + [affine_theory(r) for r in ZMODS]
    for t in theories:
        bad += failed(t.label, check_ring_on_binary(t))
        bad += failed(t.label, check_coordinates(t, 4))
        bad += failed(t.label, verify_phi_morphism(t, 3, 3))
    record(3, "T(2) ~ ring, coefficients <-> reconstruct, coefficient map a morphism (arity <= 3)", bad)


def separation_parts():
    no_malcev, r5_fails = [], []
    for b in BOOLS:
        ops = malcev_operations(hyperaffine_theory(b))
        if ops:
            no_malcev.append(f"{b.spec}: H(3) has Mal'cev operation {ops[0]}")
        r5 = check_r_axioms(regular_model(b)).get("R5")
        if r5.passed:
            r5_fails.append(f"{b.spec}: regular model passes R5 {r5.detail}")
    return no_malcev, r5_fails


def test_criterion_4a_no_malcev_in_hyperaffine():
    no_malcev, _ = separation_parts()
    assert not no_malcev, no_malcev


@pytest.mark.xfail(strict=True, reason="over a Boolean ring b(b(x,y),b(z,w)) = bx + (1-b)w, so every linear "
                                       "model satisfies R5; the claimed R5 failure cannot occur")
def test_criterion_4_separation():
    no_malcev, r5_fails = separation_parts()
    record(4, "H_B(3) has no Mal'cev operation and the regular A_B-model fails R5 (bool:1..3)",
           no_malcev + r5_fails)


def test_criterion_5_nba():
    bad = []
    a = nba_from_theory(hyperaffine_theory(BOOLS[1]), 3)
    rep = check_axioms(a)
    bad += failed("axioms", rep)
    bad += [f"{c.name} not exhaustive" for c in rep.checks if "exhaustive" not in c.detail]
    bad += failed("B_A", check_coordinate_algebra(a, BOOLS[1]))
    bad += failed("psi", psi_reconstruct(a, hyperaffine_theory(BOOLS[1])).report)
    muts = mutation_check(a, count=20, seed=7)
    bad += [f"mutation {idx}->{new} passes every axiom" for idx, new, names in muts if not names]
    if len(muts) != 20:
        bad.append(f"{len(muts)} mutations")
    record(5, "nBA from H(bool:2), n=3: H1-H5 exhaustive, B_A ~ bool:2, psi bijective, 20/20 mutations caught",
           bad)


def test_criterion_6_models():
    bad = []
    m = canonical_bset(SheafData(BOOLS[1], (2, 3)))
    bad += failed("B", check_b_axioms(m)) + failed("R", check_r_axioms(m))
    dec = decompose_to_stalks(m)
    if dec.sheaf.stalks != (2, 3):
        bad.append(f"stalks {dec.sheaf.stalks}")
    bad += failed("decompose", dec.report)
    probe = axiom_equivalence_probe(BOOLS[1], 3, samples=10_000, seed=42)
    bad += failed("probe", probe)
    if probe.disagreements:
        bad.append(f"{probe.disagreements} disagreements")
    record(6, "canonical (2,3) B-set passes B and R, decomposes to (2,3), probe has 0 disagreements in 10^4", bad)


def test_criterion_7_vector_spaces():
    bad = []
    b = BOOLS[1]
    m = regular_model(b)
    bad += failed("R1-R4", check_r_axioms(m, include_r5=False)) + failed("A", check_a_axioms(m))
    v = vector_space_from_affine_model(m, 0)
    bad += failed("L1", check_l1(v)) + failed("comb", check_comb(v))
    back = affine_model_from_vector_space(v)
    if not (back.p_table == m.p_table).all():
        bad.append("p table not recovered")
    if not (vector_space_from_affine_model(back, 0).add_table == v.add_table).all():
        bad.append("add table not recovered")
    dec = vect_sheaf_decompose(m, 0)
    if dec.sheaf.stalks != (2, 2):
        bad.append(f"stalks {dec.sheaf.stalks}")
    bad += failed("decompose", dec.report)
    record(7, "regular bool:2 model: R1-R4, A1-A4, L1, comb; conversions inverse; two 2-element group stalks", bad)


def test_criterion_8_ite():
    bad = []
    items = corpus(count=1000, seed=2024, max_depth=6, max_atoms=3, max_arity=4)
    for k, (ring, n, e) in enumerate(items):
        nf = normalize(e, ring, n)
        if eval_to_operation(nf, ring, n) != eval_to_operation(e, ring, n):
            bad.append(f"expr {k}: normalize changes the operation")
        if normalize(nf, ring, n) != nf:
            bad.append(f"expr {k}: normalize not idempotent")
    oracles = {}
    for i, j in sample_pairs(items, count=500, seed=2025):
        ring, n, e1 = items[i]
        e2 = items[j][2]
        key = (ring.spec, n)
        if key not in oracles:
            oracles[key] = SemanticOracle(ring, n)
        if equiv(e1, e2, ring, n) != oracles[key].equiv(e1, e2):
            bad.append(f"pair ({i},{j}): equiv disagrees with the oracle")
    bad += failed("dicker", check_dicker_axioms(BOOLS[1]))
    record(8, "10^3-expression corpus sound and idempotent, 500 equiv pairs match the oracle, Dicker on bool:2",
           bad[:5])


def test_criterion_9_expressibility():
    bad = []
    for ring, want in ((make_zmod(3), True), (make_zmod(2), False), (BOOLS[1], False)):
        res = malcev_binary_expressibility(ring, 6)
        if res.found != want:
            bad.append(f"{ring.spec}: found={res.found}")
        if not want and not res.exhausted:
            bad.append(f"{ring.spec}: not exhausted")
        if res.found == bool(homs_to_f2(ring)):
            bad.append(f"{ring.spec}: inconsistent with {len(homs_to_f2(ring))} homs to F2")
    record(9, "Mal'cev term found for Z3, exhausted for Z2 and bool:2 at depth 6, matching homs to F2", bad)


def test_acceptance_budget():
    # runs last in this module: the criteria above must fit in one minute together
    elapsed = time.perf_counter() - STARTED
    print(f"acceptance suite time {elapsed:.1f}s")
    assert elapsed < 60
