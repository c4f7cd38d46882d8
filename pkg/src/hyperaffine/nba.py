"""n-dimensional Boolean algebras.

An nBA is a carrier with constants ``e_1 .. e_n`` and an (n+1)-ary operation
``q`` obeying H1-H5.  ``T(n)`` of a hyperaffine theory is one, with
``q(a, b_1..b_n) = a(b_1..b_n)`` and ``e_i`` the projections.

H1-H5 are checked over every variable assignment by building both sides as
decision diagrams keyed on the q table, so H3 and H4 (n^2 + 1 and
n^2 + n + 1 variables) stay exact at desk scale.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import NotBijective, NotHomomorphic
from .report import Report
from .rings import FiniteRing, boolean_view, is_boolean, is_ring_isomorphism, ring_axiom_failures, ring_from_tables
from .symbolic import make_manager
from .theory import DEFAULT_ENUM_CAP, Flavor, Theory, compose

DENSE_MAX_ARITY = 4
DENSE_MAX_CARRIER = 16


@dataclass(eq=False)
class NBA:
    n: int
    carrier_size: int
    q_table: np.ndarray | None = field(repr=False)
    constants: tuple
    labels: tuple | None = None
    q_func: object = field(default=None, repr=False)
    source: Theory | None = field(default=None, repr=False)

    def __post_init__(self):
        if len(self.constants) != self.n:
            raise ValueError("an nBA needs exactly n constants")
        if self.q_table is not None:
            self.q_table = np.asarray(self.q_table, dtype=np.int64)
            if self.q_table.shape != (self.carrier_size,) * (self.n + 1):
                raise ValueError("q table has the wrong shape")
        elif self.q_func is None:
            raise ValueError("an nBA needs a q table or a q function")
        if self.labels is None:
            self.labels = tuple(str(i) for i in range(self.carrier_size))

    @property
    def dense(self) -> bool:
        return self.q_table is not None

    def q(self, a, *bs) -> int:
        if self.q_table is not None:
            return int(self.q_table[(a,) + bs])
        return self.q_func(a, *bs)

    def label(self, a) -> str:
        return self.labels[a]

    def mutated(self, index, value) -> "NBA":
        table = self.q_table.copy()
        table[tuple(index)] = value
        return NBA(self.n, self.carrier_size, table, self.constants, self.labels)


def nba_from_theory(t: Theory, n: int, cap: int = DEFAULT_ENUM_CAP) -> NBA:
    """T(n) with q = composition and e_i = projections."""
    if t.flavor is not Flavor.HYPERAFFINE:
        raise ValueError(f"{t.label} is not hyperaffine")
    ops = list(t.enumerate(n, cap))
    index = {op: i for i, op in enumerate(ops)}
    N = len(ops)
    consts = tuple(index[t.projection(n, i)] for i in range(1, n + 1))
    labels = tuple(str(op).split("@")[0] for op in ops)

    def q(a, *bs):
        return index[compose(ops[a], [ops[b] for b in bs])]

    table = None
    if n + 1 <= DENSE_MAX_ARITY and N <= DENSE_MAX_CARRIER:
        table = np.empty((N,) * (n + 1), dtype=np.int64)
        for combo in itertools.product(range(N), repeat=n + 1):
            table[combo] = q(*combo)
    nba = NBA(n, N, table, consts, labels, None if table is not None else q, t)
    nba.operations = ops
    return nba


def format_nba(a: NBA) -> str:
    lines = [f"nba dimension {a.n}", f"carrier {a.carrier_size}",
             "constants " + " ".join(a.label(e) for e in a.constants),
             "elements " + " ".join(a.labels)]
    if a.dense:
        lines.append("q " + " ".join(str(v) for v in a.q_table.ravel().tolist()))
    return "\n".join(lines)


# axiom sides (written once, evaluated on diagrams or on plain integers) ------------------

def _h1_sides(a, q, i):
    def sides(xs):
        return q(a.constants[i], *xs), xs[i]
    return a.n, sides


def _h2_sides(a, q):
    def sides(v):
        y, x = v
        return q(y, *([x] * a.n)), x
    return 2, sides


def _h3_sides(a, q):
    n = a.n

    def sides(v):
        y, xs = v[0], v[1:]
        rows = [xs[i * n:(i + 1) * n] for i in range(n)]
        lhs = q(y, *(q(y, *row) for row in rows))
        return lhs, q(y, *(rows[i][i] for i in range(n)))
    return 1 + n * n, sides


def _h4_sides(a, q):
    n = a.n

    def sides(v):
        y, zs, xs = v[0], v[1:n + 1], v[n + 1:]
        rows = [xs[i * n:(i + 1) * n] for i in range(n)]
        lhs = q(y, *(q(zs[i], *rows[i]) for i in range(n)))
        rhs = q(q(y, *zs), *(q(y, *(rows[i][j] for i in range(n))) for j in range(n)))
        return lhs, rhs
    return 1 + n + n * n, sides


def _h5_sides(a, q):
    def sides(v):
        return q(v[0], *a.constants), v[0]
    return 1, sides


def _variable_names(axiom, n):
    if axiom.startswith("H1"):
        return [f"x{i + 1}" for i in range(n)]
    if axiom == "H2":
        return ["y", "x"]
    if axiom == "H3":
        return ["y"] + [f"x{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    if axiom == "H4":
        return ["y"] + [f"z{i + 1}" for i in range(n)] + [f"x{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return ["y"]


def _axiom_list(a):
    out = [(f"H1 i={i + 1}", lambda q, i=i: _h1_sides(a, q, i)) for i in range(a.n)]
    out += [("H2", lambda q: _h2_sides(a, q)), ("H5", lambda q: _h5_sides(a, q)),
            ("H3", lambda q: _h3_sides(a, q)), ("H4", lambda q: _h4_sides(a, q))]
    return out


class _TableDiagrams:
    """Diagram evaluation of q over ``nvars`` carrier-valued variables."""

    def __init__(self, a: NBA, nvars, backend=None):
        N = a.carrier_size
        self.mgr = make_manager([N] * nvars, N, backend)
        T = self.mgr.n_terminals
        padded = np.zeros((T,) * (a.n + 1), dtype=np.int64)
        padded[(slice(0, N),) * (a.n + 1)] = a.q_table
        self.key = self.mgr.register(padded.ravel(), a.n + 1)
        idx = np.arange(T)
        self.neq = self.mgr.register((idx[:, None] != idx[None, :]).astype(np.int64).ravel(), 2)
        self.vars = [self.mgr.literal(level, list(range(N))) for level in range(nvars)]

    def q(self, *args):
        return self.mgr.apply(self.key, args)


def _check_exhaustive(a, build, backend=None):
    nvars, _ = build(lambda *args: 0)
    d = _TableDiagrams(a, nvars, backend)
    _, sides = build(d.q)
    lhs, rhs = sides(d.vars)
    diff = 0 if lhs == rhs else d.mgr.apply(d.neq, (lhs, rhs))
    total = a.carrier_size**nvars
    path = d.mgr.witness(diff)
    if path is None:
        return total, 0, None
    return total, d.mgr.count_nonzero(diff), path


def _check_sampled(a, build, samples, seed):
    nvars, sides = build(a.q)
    rng = random.Random(seed)
    N = a.carrier_size
    for _ in range(samples):
        v = [rng.randrange(N) for _ in range(nvars)]
        lhs, rhs = sides(v)
        if lhs != rhs:
            return samples, 1, v
    return samples, 0, None


def check_axioms(a: NBA, *, exhaustive_cap: int = 10**15, samples: int = 10_000, seed: int = 0,
                 stop_early: bool = False, backend=None) -> Report:
    """Verdict and first counterexample for each of H1..H5.

    An axiom is checked over every assignment when the nBA is dense and the
    assignment count is at most ``exhaustive_cap``; otherwise ``samples``
    assignments drawn with ``random.Random(seed)`` are tested and the line says
    ``sampled``.
    """
    rep = Report(title=f"nba check dimension {a.n} carrier {a.carrier_size}")
    for name, build in _axiom_list(a):
        nvars, _ = build(lambda *args: 0)
        count = a.carrier_size**nvars
        if a.dense and count <= exhaustive_cap:
            total, bad, path = _check_exhaustive(a, build, backend)
            mode = "exhaustive"
        else:
            total, bad, path = _check_sampled(a, build, samples, seed)
            mode = "sampled"
        if bad == 0:
            rep.add(name, True, f"({mode}, {total} assignments)")
        else:
            names = _variable_names(name, a.n)
            inst = ", ".join(f"{nm}={a.label(v)}" for nm, v in zip(names, path))
            detail = f"({mode}, {bad} of {total} assignments)" if mode == "exhaustive" else f"({mode})"
            rep.add(name, False, detail, inst, payload=tuple(path))
            if stop_early:
                break
    return rep


def axiom_holds_at(a: NBA, axiom: str, values) -> bool:
    """Evaluate one axiom at one assignment (used to replay counterexamples)."""
    for name, build in _axiom_list(a):
        if name == axiom:
            _, sides = build(a.q)
            lhs, rhs = sides(list(values))
            return lhs == rhs
    raise KeyError(axiom)


# coordinates ------------------------------------------------------------------------------

def _t(a: NBA, x, b, c):
    return a.q(x, b, c, *a.constants[2:])


def coordinates(a: NBA, elem: int) -> tuple:
    """a[i] = q(elem, e_2, .., e_1, .., e_2) with e_1 in slot i."""
    if a.n < 2:
        raise ValueError("coordinates need dimension >= 2")
    e1, e2 = a.constants[0], a.constants[1]
    out = []
    for i in range(a.n):
        out.append(a.q(elem, *[e1 if j == i else e2 for j in range(a.n)]))
    return tuple(out)


def coordinate_carrier(a: NBA) -> list:
    """B_A = {x : t(x, b, b) = b for all b}, by full scan."""
    N = a.carrier_size
    return [x for x in range(N) if all(_t(a, x, b, b) == b for b in range(N))]


@dataclass
class CoordinateAlgebra:
    parent: NBA
    carrier: list
    t_table: np.ndarray = field(repr=False)
    top: int  # index into carrier of e_1
    bottom: int  # index into carrier of e_2

    @property
    def size(self):
        return len(self.carrier)

    def t(self, x, b, c):
        return int(self.t_table[x, b, c])

    def as_ring(self) -> FiniteRing:
        """Boolean ring with ab = t(a, b, 0) and a + b = t(a, not b, b), not a = t(a, 0, 1)."""
        m = self.size
        one, zero = self.top, self.bottom
        neg = [self.t(x, zero, one) for x in range(m)]
        mul = [[self.t(x, y, zero) for y in range(m)] for x in range(m)]
        add = [[self.t(x, neg[y], y) for y in range(m)] for x in range(m)]
        labels = [self.parent.label(c) for c in self.carrier]
        return ring_from_tables(add, mul, zero, one, labels)


def coordinate_algebra(a: NBA) -> CoordinateAlgebra:
    if a.n < 2:
        raise ValueError("the coordinate algebra needs dimension >= 2")
    carrier = coordinate_carrier(a)
    pos = {c: i for i, c in enumerate(carrier)}
    m = len(carrier)
    table = np.empty((m, m, m), dtype=np.int64)
    for i, x in enumerate(carrier):
        for j, b in enumerate(carrier):
            for k, c in enumerate(carrier):
                v = _t(a, x, b, c)
                if v not in pos:
                    raise NotHomomorphic(f"B_A is not closed under t: t({x},{b},{c}) = {v}")
                table[i, j, k] = pos[v]
    e1, e2 = a.constants[0], a.constants[1]
    if e1 not in pos or e2 not in pos:
        raise NotHomomorphic("e_1 or e_2 lies outside B_A")
    return CoordinateAlgebra(a, carrier, table, pos[e1], pos[e2])


def dicker_failures(ca: CoordinateAlgebra) -> list[str]:
    """The six conditional-disjunction identities on B_A with 1 = e_1, 0 = e_2."""
    m = ca.size
    t = ca.t
    one, zero = ca.top, ca.bottom
    bad = []
    E = range(m)
    if any(t(a, one, zero) != a for a in E):
        bad.append("q(a,1,0)=a")
    if any(t(one, a, b) != a or t(zero, a, b) != b for a in E for b in E):
        bad.append("q(1,a,b)=a, q(0,a,b)=b")
    if any(t(a, t(b, x, y), t(c, x, y)) != t(t(a, b, c), x, y)
           for a in E for b in E for c in E for x in E for y in E):
        bad.append("q(a,q(b,x,y),q(c,x,y))=q(q(a,b,c),x,y)")
    if any(t(a, x, x) != x for a in E for x in E):
        bad.append("q(a,x,x)=x")
    if any(t(a, t(b, x, y), t(b, z, w)) != t(b, t(a, x, z), t(a, y, w))
           for a in E for b in E for x in E for y in E for z in E for w in E):
        bad.append("q(a,q(b,x,y),q(b,z,w))=q(b,q(a,x,z),q(a,y,w))")
    if any(t(a, t(a, x, y), t(a, z, w)) != t(a, x, w)
           for a in E for x in E for y in E for z in E for w in E):
        bad.append("q(a,q(a,x,y),q(a,z,w))=q(a,x,w)")
    return bad


def boolean_isomorphism(r1: FiniteRing, r2: FiniteRing):
    """Isomorphism r1 -> r2 of finite Boolean rings, searched over atom bijections."""
    if r1.size != r2.size or not (is_boolean(r1) and is_boolean(r2)):
        return None
    v1, v2 = boolean_view(r1), boolean_view(r2)
    if len(v1.atoms) != len(v2.atoms):
        return None
    for perm in itertools.permutations(range(len(v2.atoms))):
        phi = [0] * r1.size
        for x in r1.elements:
            phi[x] = v2.from_atoms(perm[i] for i in v1.atoms_below(x))
        if is_ring_isomorphism(r1, r2, phi):
            return tuple(phi)
    return None


def check_coordinate_algebra(a: NBA, target: FiniteRing | None = None) -> Report:
    rep = Report()
    ca = coordinate_algebra(a)
    ring = ca.as_ring()
    bad = ring_axiom_failures(ring)
    rep.add("B_A ring-axioms", not bad, f"({ca.size} elements)", ",".join(bad) or None)
    rep.add("B_A boolean", is_boolean(ring))
    d = dicker_failures(ca)
    rep.add("B_A dicker", not d, "(6 identities)", "; ".join(d) or None)
    for x in range(a.carrier_size):
        if any(c not in ca.carrier for c in coordinates(a, x)):
            rep.add("coordinates-in-B_A", False, "", f"elem={a.label(x)}")
            break
    else:
        rep.add("coordinates-in-B_A", True, f"({a.carrier_size} elements)")
    if target is not None:
        iso = boolean_isomorphism(ring, target) if not bad else None
        rep.add(f"B_A iso {target.spec}", iso is not None, "(atom-permutation search)",
                None if iso is not None else "no isomorphism")
    return rep


# psi ------------------------------------------------------------------------------------

@dataclass
class PsiResult:
    psi: tuple  # psi[elem] = operation of the target theory
    report: Report

    @property
    def ok(self):
        return self.report.ok


def psi_reconstruct(a: NBA, target: Theory) -> PsiResult:
    """elem -> coordinates, read in the target ring through an iso B_A ~ B."""
    if target.flavor is not Flavor.HYPERAFFINE:
        raise ValueError(f"{target.label} is not hyperaffine")
    ca = coordinate_algebra(a)
    ring = ca.as_ring()
    iso = boolean_isomorphism(ring, target.ring)
    if iso is None:
        raise NotBijective(f"B_A is not isomorphic to {target.ring.spec}")
    pos = {c: i for i, c in enumerate(ca.carrier)}
    rep = Report(title=f"psi {target.label}({a.n})")
    psi = []
    for x in range(a.carrier_size):
        vec = tuple(iso[pos[c]] for c in coordinates(a, x))
        if not target.contains(vec):
            raise NotHomomorphic(f"coordinates of {a.label(x)} are not a partition of unity")
        psi.append(target.operation(vec))
    psi = tuple(psi)
    expected = target.count(a.n)
    distinct = len(set(psi))
    rep.add("psi injective", distinct == a.carrier_size, f"({distinct} images)")
    rep.add("psi surjective", distinct == expected, f"({expected} operations)")
    bad = [i for i in range(a.n) if psi[a.constants[i]] != target.projection(a.n, i + 1)]
    rep.add("psi constants", not bad, "(e_i -> projection i)",
            None if not bad else f"e{bad[0] + 1}")
    witness = None
    for combo in itertools.product(range(a.carrier_size), repeat=a.n + 1):
        lhs = psi[a.q(*combo)]
        rhs = compose(psi[combo[0]], [psi[b] for b in combo[1:]])
        if lhs != rhs:
            witness = combo
            break
    rep.add("psi homomorphism", witness is None,
            f"({a.carrier_size ** (a.n + 1)} q-instances)",
            None if witness is None else ", ".join(a.label(v) for v in witness))
    if distinct != a.carrier_size or distinct != expected:
        rep.notes.append("psi is not a bijection")
    return PsiResult(psi, rep)


def mutation_check(a: NBA, count: int = 20, seed: int = 7, backend=None) -> list[tuple]:
    """Mutate ``count`` distinct single q entries; return (index, new value, failing axioms)."""
    rng = random.Random(seed)
    N = a.carrier_size
    seen = set()
    out = []
    while len(out) < count:
        idx = tuple(rng.randrange(N) for _ in range(a.n + 1))
        if idx in seen:
            continue
        seen.add(idx)
        old = int(a.q_table[idx])
        new = rng.choice([v for v in range(N) if v != old])
        rep = check_axioms(a.mutated(idx, new), stop_early=True, backend=backend)
        out.append((idx, new, [c.name for c in rep.failures]))
    return out
