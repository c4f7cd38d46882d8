"""Finite models of H_B and A_B given by explicit action tables.

A model is a carrier ``0 .. N-1`` with one binary table per ring element
(``b(x, y)``), and optionally a ternary ``p``, a binary ``+`` and a base point
``o``.  Every axiom suite is a verdict computed by a full numpy scan over all
variable assignments; nothing is assumed about a model.

Stalks at an atom ``s`` are the classes of ``x ~ y iff s(x, y) = y``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (CarrierTooLarge, DecompositionFailed, EmptyStalk, ModelFormatError, NotABSet, NotBoolean,
                     RingSpecError, SuiteFailed)
from .report import Report
from .rings import FiniteRing, boolean_view, is_boolean, parse_ring_spec

SCAN_CHUNK = 1 << 22
PROBE_BATCH = 1000


@dataclass(eq=False)
class FiniteModel:
    carrier_size: int
    ring: FiniteRing
    action: np.ndarray = field(repr=False)  # action[b, x, y] = b(x, y)
    p_table: np.ndarray | None = field(default=None, repr=False)
    add_table: np.ndarray | None = field(default=None, repr=False)
    o: int | None = None
    labels: tuple | None = None

    def __post_init__(self):
        N, R = self.carrier_size, self.ring.size
        self.action = _table(self.action, (R, N, N), "action", N)
        if self.p_table is not None:
            self.p_table = _table(self.p_table, (N, N, N), "p", N)
        if self.add_table is not None:
            self.add_table = _table(self.add_table, (N, N), "add", N)
        if self.o is not None and not 0 <= self.o < N:
            raise ValueError("base point outside the carrier")
        if self.labels is None:
            self.labels = tuple(str(i) for i in range(N))

    def act(self, b, x, y) -> int:
        return int(self.action[b, x, y])

    def with_tables(self, **kw) -> "FiniteModel":
        fields = dict(carrier_size=self.carrier_size, ring=self.ring, action=self.action,
                      p_table=self.p_table, add_table=self.add_table, o=self.o, labels=self.labels)
        fields.update(kw)
        return FiniteModel(**fields)


def _table(t, shape, name, N):
    t = np.array(t, dtype=np.int64)
    if t.shape != shape:
        raise ValueError(f"{name} table has shape {t.shape}, expected {shape}")
    if t.size and (t.min() < 0 or t.max() >= N):
        raise ValueError(f"{name} table has entries outside the carrier")
    return t


@dataclass
class SheafData:
    """Stalks indexed by the atoms of a finite Boolean ring (in atom order)."""

    ring: FiniteRing
    stalks: tuple  # stalk sizes
    zeros: tuple | None = None  # group variant: zero of each stalk
    adds: tuple | None = None  # group variant: addition table of each stalk

    def __post_init__(self):
        self.stalks = tuple(int(s) for s in self.stalks)

    @property
    def is_group(self) -> bool:
        return self.adds is not None


# scanning ---------------------------------------------------------------------------

def _scan(rep, name, m, names, kinds, fn):
    """Full scan of an identity; ``fn`` maps index grids to a list of (lhs, rhs) arrays."""
    sizes = [m.ring.size if k == "r" else m.carrier_size for k in kinds]
    total = math.prod(sizes)
    first, bad = None, 0
    # chunk over the leading variable so large suites stay within memory
    leads = [None] if total <= SCAN_CHUNK or len(sizes) == 1 else range(sizes[0])
    for lead in leads:
        axes = [np.arange(s) for s in sizes]
        if lead is not None:
            axes[0] = np.array([lead])
        grids = np.ix_(*axes)
        shape = tuple(len(a) for a in axes)
        mask = np.zeros(shape, dtype=bool)
        for lhs, rhs in fn(*grids):
            mask |= np.broadcast_to(lhs != rhs, shape)
        hits = np.flatnonzero(mask)
        bad += hits.size
        if hits.size and first is None:
            idx = [int(i) for i in np.unravel_index(hits[0], shape)]
            if lead is not None:
                idx[0] = lead
            first = idx
    if first is None:
        return rep.add(name, True, f"(full scan, {total} instances)")
    inst = ", ".join(
        f"{nm}={m.ring.label(v) if k == 'r' else m.labels[v]}" for nm, k, v in zip(names, kinds, first))
    return rep.add(name, False, f"({bad} of {total} instances)", inst, payload=tuple(first))


def _ring_ops(r):
    M, A = r.mul_table, r.add_table
    one_minus = A[r.one, r.neg_table]
    return M, A, one_minus


class _RingTables:
    def __init__(self, r):
        self.mul, self.add = r.mul_table, r.add_table
        self.comp = r.add_table[r.one, r.neg_table]  # 1 - a
        self.zero, self.one = r.zero, r.one


# name, variable names, variable kinds (r = ring, x = carrier), sides(op, ring tables, *grids)
B_AXIOMS = [
    ("B1", "bx", "rx", lambda op, t, b, x: [(op(b, x, x), x)]),
    ("B2", "bxyz", "rxxx", lambda op, t, b, x, y, z: [
        (op(b, op(b, x, y), z), op(b, x, z)), (op(b, x, op(b, y, z)), op(b, x, z))]),
    ("B3", "bxy", "rxx", lambda op, t, b, x, y: [(op(t.comp[b], x, y), op(b, y, x))]),
    ("B4", "xy", "xx", lambda op, t, x, y: [(op(t.zero, x, y), y)]),
    ("B5", "bcxy", "rrxx", lambda op, t, b, c, x, y: [(op(b, op(c, x, y), y), op(t.mul[b, c], x, y))]),
]

R_AXIOMS = [
    ("R1", "bx", "rx", lambda op, t, b, x: [(op(b, x, x), x)]),
    ("R2", "bcxyzw", "rrxxxx", lambda op, t, b, c, x, y, z, w: [
        (op(b, op(c, x, y), op(c, z, w)), op(c, op(b, x, z), op(b, y, w)))]),
    ("R3", "xy", "xx", lambda op, t, x, y: [(op(t.one, x, y), x), (op(t.zero, x, y), y)]),
    ("R4", "abcxy", "rrrxx", lambda op, t, a, b, c, x, y: [
        (op(a, op(b, x, y), op(c, x, y)), op(t.add[t.mul[a, b], t.mul[t.comp[a], c]], x, y))]),
    ("R5", "bxyzw", "rxxxx", lambda op, t, b, x, y, z, w: [(op(b, op(b, x, y), op(b, z, w)), op(b, x, w))]),
]


def _run_suite(title, axioms, m):
    act = m.action
    t = _RingTables(m.ring)

    def op(b, x, y):
        return act[b, x, y]
    rep = Report(title=title)
    for name, names, kinds, sides in axioms:
        _scan(rep, name, m, names, kinds, lambda *g, sides=sides: sides(op, t, *g))
    return rep


def check_b_axioms(m: FiniteModel) -> Report:
    return _run_suite("B-suite", B_AXIOMS, m)


def check_r_axioms(m: FiniteModel, include_r5: bool = True) -> Report:
    return _run_suite("R-suite", R_AXIOMS if include_r5 else R_AXIOMS[:4], m)


def suite_holds_batch(axioms, ring: FiniteRing, actions: np.ndarray) -> np.ndarray:
    """Verdict of a whole suite for each table in ``actions[s, b, x, y]``."""
    S, R, N, _ = actions.shape
    t = _RingTables(ring)
    ok = np.ones(S, dtype=bool)
    for _, _, kinds, sides in axioms:
        axes = [np.arange(S)] + [np.arange(R if k == "r" else N) for k in kinds]
        s_idx, *grids = np.ix_(*axes)

        def op(b, x, y):
            return actions[s_idx, b, x, y]
        shape = tuple(len(a) for a in axes)
        bad = np.zeros(shape, dtype=bool)
        for lhs, rhs in sides(op, t, *grids):
            bad |= np.broadcast_to(lhs != rhs, shape)
        ok &= ~bad.reshape(S, -1).any(axis=1)
    return ok


def check_a_axioms(m: FiniteModel) -> Report:
    if m.p_table is None:
        raise ValueError("the A-suite needs a p table")
    act, p = m.action, m.p_table
    M, A, _ = _ring_ops(m.ring)
    r = m.ring
    two = r.from_int(2)
    rep = Report(title="A-suite")
    _scan(rep, "A1", m, "xy", "xx", lambda x, y: [(p[x, y, y], x), (p[x, x, y], y)])
    names = [f"x{i}{j}" for i in range(1, 4) for j in range(1, 4)]

    def self_commute(*v):
        rows = [p[v[3 * i], v[3 * i + 1], v[3 * i + 2]] for i in range(3)]
        cols = [p[v[j], v[3 + j], v[6 + j]] for j in range(3)]
        return [(p[rows[0], rows[1], rows[2]], p[cols[0], cols[1], cols[2]])]
    _scan(rep, "A2 p-p", m, names, "x" * 9, self_commute)
    _scan(rep, "A2 p-a", m, ["a", "x1", "x2", "x3", "y1", "y2", "y3"], "rxxxxxx",
          lambda a, x1, x2, x3, y1, y2, y3: [
              (act[a, p[x1, x2, x3], p[y1, y2, y3]], p[act[a, x1, y1], act[a, x2, y2], act[a, x3, y3]])])
    _scan(rep, "A3", m, "xy", "xx", lambda x, y: [(p[y, x, y], act[two, y, x])])
    _scan(rep, "A4", m, "abcxy", "rrrxx", lambda a, b, c, x, y: [
        (p[act[a, x, y], act[b, x, y], act[c, x, y]], act[A[A[a, r.neg_table[b]], c], x, y])])
    return rep


def check_group(m: FiniteModel) -> Report:
    """(X, +, o) is an Abelian group in which x + x = o."""
    if m.add_table is None or m.o is None:
        raise ValueError("the group laws need an add table and a base point")
    s, o = m.add_table, m.o
    rep = Report(title="group")
    _scan(rep, "assoc", m, "xyz", "xxx", lambda x, y, z: [(s[s[x, y], z], s[x, s[y, z]])])
    _scan(rep, "comm", m, "xy", "xx", lambda x, y: [(s[x, y], s[y, x])])
    _scan(rep, "unit", m, "x", "x", lambda x: [(s[x, o], x)])
    _scan(rep, "exponent-2", m, "x", "x", lambda x: [(s[x, x], np.full_like(x, o))])
    return rep


def check_l1(m: FiniteModel) -> Report:
    if m.add_table is None:
        raise ValueError("L1 needs an add table")
    act, s = m.action, m.add_table
    rep = Report(title="L1")
    _scan(rep, "L1", m, "bxyzw", "rxxxx", lambda b, x, y, z, w: [
        (s[act[b, x, y], act[b, z, w]], act[b, s[x, z], s[y, w]])])
    return rep


def check_comb(m: FiniteModel, o: int | None = None) -> Report:
    o = m.o if o is None else o
    if m.add_table is None or o is None:
        raise ValueError("eq. comb needs an add table and a base point")
    act, s = m.action, m.add_table
    _, _, comp = _ring_ops(m.ring)
    rep = Report(title="comb")
    _scan(rep, "comb", m, "bxy", "rxx", lambda b, x, y: [(act[b, x, y], s[act[b, x, o], act[comp[b], y, o]])])
    return rep


# constructions ----------------------------------------------------------------------

def regular_model(ring: FiniteRing, o: int | None = None) -> FiniteModel:
    """The ring acting on itself: a(x, y) = ax + (1-a)y and p(x, y, z) = x - y + z."""
    M, A, comp = _ring_ops(ring)
    e = np.arange(ring.size)
    a, x, y = np.ix_(e, e, e)
    action = A[M[a, x], M[comp[a], y]]
    p = A[A[a, ring.neg_table[x]], y]  # grids reused as (x, y, z)
    return FiniteModel(ring.size, ring, action, p_table=p, o=o, labels=ring.labels)


def _atoms(ring):
    if not is_boolean(ring):
        raise NotBoolean(f"{ring.spec} is not a Boolean ring")
    v = boolean_view(ring)
    return v, v.atoms


def canonical_bset(s: SheafData) -> FiniteModel:
    """Product of the stalks; b picks the x-coordinate at atoms under b, else y's."""
    view, atoms = _atoms(s.ring)
    if len(s.stalks) != len(atoms):
        raise ValueError(f"{len(atoms)} atoms need {len(atoms)} stalks, got {len(s.stalks)}")
    if any(k < 1 for k in s.stalks):
        raise EmptyStalk("every stalk must be nonempty")
    points = list(itertools.product(*[range(k) for k in s.stalks]))
    index = {pt: i for i, pt in enumerate(points)}
    N, R = len(points), s.ring.size
    action = np.empty((R, N, N), dtype=np.int64)
    for b in range(R):
        under = view.atoms_below(b)
        for i, x in enumerate(points):
            for j, y in enumerate(points):
                action[b, i, j] = index[tuple(x[k] if k in under else y[k] for k in range(len(atoms)))]
    labels = tuple("(" + ",".join(map(str, pt)) + ")" for pt in points)
    add, o = None, None
    if s.is_group:
        add = np.empty((N, N), dtype=np.int64)
        for i, x in enumerate(points):
            for j, y in enumerate(points):
                add[i, j] = index[tuple(int(s.adds[k][x[k], y[k]]) for k in range(len(atoms)))]
        o = index[tuple(s.zeros)]
    return FiniteModel(N, s.ring, action, add_table=add, o=o, labels=labels)


@dataclass
class Decomposition:
    sheaf: SheafData
    classes: list  # per atom: list of classes (sorted lists of carrier points)
    eval_map: tuple  # carrier point -> index in canonical_bset(sheaf)
    canonical: FiniteModel
    report: Report


def _stalk_classes(m, atom):
    N = m.carrier_size
    rel = m.action[atom] == np.arange(N)[None, :]  # rel[x, y]: s(x, y) = y
    if not (rel == rel.T).all():
        x, y = np.argwhere(rel != rel.T)[0]
        raise DecompositionFailed(f"agreement relation not symmetric at x={x}, y={y}")
    if not ((rel.astype(np.int64) @ rel.astype(np.int64) > 0) <= rel).all():
        raise DecompositionFailed("agreement relation not transitive")
    classes, seen = [], set()
    for x in range(N):
        if x not in seen:
            cls = [y for y in range(N) if rel[x, y]]
            seen.update(cls)
            classes.append(cls)
    return classes


def decompose_to_stalks(m: FiniteModel) -> Decomposition:
    brep = check_b_axioms(m)
    if not brep.ok:
        c = brep.failures[0]
        raise NotABSet(f"{c.name} fails at {c.instance}")
    _, atoms = _atoms(m.ring)
    classes = [_stalk_classes(m, s) for s in atoms]
    sheaf = SheafData(m.ring, tuple(len(c) for c in classes))
    canon = canonical_bset(sheaf)
    which = [{x: k for k, cls in enumerate(cl) for x in cls} for cl in classes]
    points = list(itertools.product(*[range(k) for k in sheaf.stalks]))
    index = {pt: i for i, pt in enumerate(points)}
    phi = tuple(index[tuple(w[x] for w in which)] for x in range(m.carrier_size))
    if len(set(phi)) != canon.carrier_size or m.carrier_size != canon.carrier_size:
        dup = next((x for x in range(m.carrier_size) if phi.count(phi[x]) > 1), None)
        raise DecompositionFailed(f"evaluation map not bijective (collision at x={dup})")
    rep = Report(title="decompose")
    rep.add("evaluation bijective", True, f"({m.carrier_size} points)")
    ph = np.array(phi)
    ok = np.array_equal(ph[m.action], canon.action[:, ph[:, None], ph[None, :]])
    bad = None
    if not ok:
        b, x, y = np.argwhere(ph[m.action] != canon.action[:, ph[:, None], ph[None, :]])[0]
        bad = f"b={m.ring.label(b)}, x={x}, y={y}"
    rep.add("evaluation homomorphic", ok, "(action intertwined)", bad)
    return Decomposition(sheaf, classes, phi, canon, rep)


def _require(rep: Report):
    if not rep.ok:
        c = rep.failures[0]
        raise SuiteFailed(c.name, f"at {c.instance}")


def vector_space_from_affine_model(m: FiniteModel, o: int) -> FiniteModel:
    """x + y := p(x, o, y)."""
    if m.p_table is None:
        raise ValueError("the model has no p table")
    _require(check_r_axioms(m, include_r5=False))
    _require(check_a_axioms(m))
    add = m.p_table[:, o, :].copy()
    return m.with_tables(add_table=add, o=o)


def affine_model_from_vector_space(m: FiniteModel) -> FiniteModel:
    """p(x, y, z) := x + y + z."""
    _require(check_group(m))
    _require(check_r_axioms(m, include_r5=False))
    _require(check_l1(m))
    s = m.add_table
    e = np.arange(m.carrier_size)
    x, y, z = np.ix_(e, e, e)
    return m.with_tables(p_table=s[s[x, y], z])


def vect_sheaf_decompose(m: FiniteModel, o: int | None = None) -> Decomposition:
    """Stalk decomposition of an exponent-2 vector space with a linear B-action.

    R5 and the B-suite are derived through eq. comb and then checked by scan
    before decomposing; each stalk receives the quotient group structure.
    """
    o = m.o if o is None else o
    if m.add_table is None:
        m = vector_space_from_affine_model(m, o)
    else:
        m = m.with_tables(o=o)
    _require(check_group(m))
    _require(check_r_axioms(m, include_r5=False))
    _require(check_l1(m))
    _require(check_comb(m))
    r5 = check_r_axioms(m, include_r5=True)
    _require(r5)
    dec = decompose_to_stalks(m)
    s = m.add_table
    zeros, adds = [], []
    for ai, cl in enumerate(dec.classes):
        which = {x: k for k, c in enumerate(cl) for x in c}
        table = np.empty((len(cl), len(cl)), dtype=np.int64)
        for i, ci in enumerate(cl):
            for j, cj in enumerate(cl):
                sums = {which[int(s[x, y])] for x in ci for y in cj}
                if len(sums) != 1:
                    raise DecompositionFailed(f"addition not well defined on stalk {ai + 1}")
                table[i, j] = sums.pop()
        zeros.append(which[o])
        adds.append(table)
    sheaf = SheafData(m.ring, dec.sheaf.stalks, tuple(zeros), tuple(adds))
    canon = canonical_bset(sheaf)
    stalk_rep = Report(title="stalk groups")
    for k, (z, t) in enumerate(zip(zeros, adds)):
        sm = FiniteModel(len(t), m.ring, np.zeros((m.ring.size, len(t), len(t)), dtype=np.int64)
                         + np.arange(len(t))[None, None, :], add_table=t, o=z)
        g = check_group(sm)
        stalk_rep.add(f"stalk {k + 1} group", g.ok, f"(order {len(t)})",
                      None if g.ok else g.failures[0].name)
    ph = np.array(dec.eval_map)
    ok = np.array_equal(ph[s], canon.add_table[ph[:, None], ph[None, :]]) and ph[o] == canon.o
    dec.report.extend(stalk_rep)
    dec.report.add("evaluation additive", ok, "(group isomorphism)", None if ok else "add table mismatch")
    dec.sheaf = sheaf
    dec.canonical = canon
    return dec


# rtob probe -------------------------------------------------------------------------

def _probe_rng(seed, i):
    """Sample ``i`` draws from child ``i`` of ``SeedSequence(seed)``: order-independent and reproducible."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(i,))))


def _stalk_shapes(k, carrier):
    for shape in itertools.product(range(1, carrier + 1), repeat=k):
        if math.prod(shape) <= carrier:
            yield shape


def _sample_model(ring, N, rng, shapes):
    """One action table from one of three families chosen uniformly: uniform
    tables; tables with 0, 1 and idempotence forced; canonical B-sets under a
    random relabelling, mutated in one entry half of the time.  The third
    family falls back to the second when no canonical model has N points."""
    R = ring.size
    kind = int(rng.integers(3))
    fitting = [sh for sh in shapes if math.prod(sh) == N]
    if kind == 2 and not fitting:
        kind = 1
    if kind == 0:
        action = rng.integers(N, size=(R, N, N))
    elif kind == 1:
        action = rng.integers(N, size=(R, N, N))
        e = np.arange(N)
        action[:, e, e] = e
        action[ring.one] = e[:, None]
        action[ring.zero] = e[None, :]
    else:
        sh = fitting[int(rng.integers(len(fitting)))]
        base = canonical_bset(SheafData(ring, sh))
        perm = rng.permutation(N)
        inv = np.argsort(perm)
        action = perm[base.action[:, inv[:, None], inv[None, :]]]
        if rng.integers(2):
            b, x, y = (int(rng.integers(R)), int(rng.integers(N)), int(rng.integers(N)))
            action[b, x, y] = (action[b, x, y] + 1 + int(rng.integers(N - 1))) % N if N > 1 else 0
    return action


def axiom_equivalence_probe(ring: FiniteRing, carrier_size: int, samples: int = 10_000,
                            seed: int = 42) -> Report:
    """Compare the B-suite verdict with the R1-R5 verdict on many action tables."""
    if not is_boolean(ring) or ring.size > 4:
        raise ValueError("the probe needs a Boolean ring with at most 4 elements")
    if not 1 <= carrier_size <= 3:
        raise ValueError("the probe needs a carrier of size 1..3")
    _, atoms = _atoms(ring)
    shapes = list(_stalk_shapes(len(atoms), carrier_size))
    rep = Report(title=f"rtob probe {ring.spec} carrier {carrier_size}",
                 header=[f"samples {samples} seed {seed}"])
    both_pass = disagree = 0
    first = None
    for sh in shapes:
        mdl = canonical_bset(SheafData(ring, sh))
        b, r = check_b_axioms(mdl).ok, check_r_axioms(mdl).ok
        both_pass += b and r
        if b != r:
            disagree += 1
            first = first or f"canonical {sh}"
    rep.add("canonical models", both_pass == len(shapes) and first is None,
            f"({len(shapes)} models, both suites pass on {both_pass})", first)
    first, agree_pass = None, 0
    for lo in range(0, samples, PROBE_BATCH):
        ids = range(lo, min(samples, lo + PROBE_BATCH))
        actions = np.array([_sample_model(ring, carrier_size, _probe_rng(seed, i), shapes) for i in ids])
        b = suite_holds_batch(B_AXIOMS, ring, actions)
        r = suite_holds_batch(R_AXIOMS, ring, actions)
        agree_pass += int((b & r).sum())
        diff = np.flatnonzero(b != r)
        disagree += diff.size
        if diff.size and first is None:
            first = f"sample {lo + int(diff[0])}"
    rep.add("sampled tables", first is None, f"({samples} samples, {agree_pass} pass both)", first)
    rep.notes.append(f"disagreements: {disagree}")
    rep.disagreements = disagree
    return rep


# text format -----------------------------------------------------------------------

def format_model(m: FiniteModel) -> str:
    lines = [f"model {m.carrier_size} over {m.ring.spec}"]
    for b in m.ring.elements:
        lines.append(f"action {m.ring.label(b)} : " + " ".join(map(str, m.action[b].ravel().tolist())))
    if m.p_table is not None:
        lines.append("p : " + " ".join(map(str, m.p_table.ravel().tolist())))
    if m.add_table is not None:
        lines.append("add : " + " ".join(map(str, m.add_table.ravel().tolist())))
    if m.o is not None:
        lines.append(f"o : {m.o}")
    return "\n".join(lines) + "\n"


def _entries(text, lineno, col0, count, N):
    out, pos = [], 0
    for tok in text.split():
        pos = text.index(tok, pos)
        column = col0 + pos
        try:
            v = int(tok)
        except ValueError:
            raise ModelFormatError(f"expected an integer, got {tok!r}", lineno, column) from None
        if not 0 <= v < N:
            raise ModelFormatError(f"entry {v} outside the carrier 0..{N - 1}", lineno, column)
        out.append(v)
        pos += len(tok)
    if len(out) != count:
        column = col0 + len(text.rstrip())
        raise ModelFormatError(f"expected {count} entries, found {len(out)}", lineno, column)
    return out


def parse_model(text: str) -> FiniteModel:
    """Read the line-oriented model format; '#' starts a comment."""
    N = ring = None
    actions, p, add, o = {}, None, None, None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        head = line.split()
        if N is None:
            if len(head) < 4 or head[0] != "model" or head[2] != "over":
                raise ModelFormatError("expected 'model <size> over <ring-spec>'", lineno, 1)
            try:
                N = int(head[1])
            except ValueError:
                raise ModelFormatError(f"bad carrier size {head[1]!r}", lineno, line.index(head[1]) + 1) from None
            if N < 1:
                raise ModelFormatError("carrier size must be positive", lineno, line.index(head[1]) + 1)
            spec = line.split("over", 1)[1].strip()
            try:
                ring = parse_ring_spec(spec)
            except (RingSpecError, CarrierTooLarge) as exc:
                raise ModelFormatError(str(exc), lineno, line.index(spec) + 1) from None
            continue
        if ":" not in line:
            raise ModelFormatError("expected '<key> : <entries>'", lineno, 1)
        key, rest = line.split(":", 1)
        col0 = len(key) + 2
        key = key.strip()
        if key.startswith("action"):
            elem_text = key[len("action"):].strip()
            try:
                b = ring.element(elem_text)
            except RingSpecError as exc:
                raise ModelFormatError(str(exc), lineno, raw.index(elem_text) + 1 if elem_text else 1) from None
            if b in actions:
                raise ModelFormatError(f"duplicate action for {ring.label(b)}", lineno, 1)
            actions[b] = _entries(rest, lineno, col0, N * N, N)
        elif key == "p":
            p = _entries(rest, lineno, col0, N**3, N)
        elif key == "add":
            add = _entries(rest, lineno, col0, N * N, N)
        elif key == "o":
            o = _entries(rest, lineno, col0, 1, N)[0]
        else:
            raise ModelFormatError(f"unknown key {key!r}", lineno, 1)
    if N is None:
        raise ModelFormatError("empty model file", 1, 1)
    missing = [ring.label(b) for b in ring.elements if b not in actions]
    if missing:
        raise ModelFormatError(f"missing action for {', '.join(missing)}")
    action = np.array([np.reshape(actions[b], (N, N)) for b in ring.elements], dtype=np.int64)
    return FiniteModel(
        N, ring, action,
        p_table=None if p is None else np.reshape(p, (N, N, N)),
        add_table=None if add is None else np.reshape(add, (N, N)),
        o=o,
    )
