"""Algebraic theories of coefficient vectors over a finite ring.

An n-ary operation is a vector ``(r_1, ..., r_n)``, read as the linear
combination ``r_1 x_1 + ... + r_n x_n``; composition is matrix
multiplication.  Three flavors restrict which vectors are operations:

* full module: every vector;
* affine: coefficients sum to 1;
* hyperaffine (Boolean rings only): coefficients are a partition of unity.

Identities such as splitting or commutation are decided by evaluating both
sides in the free model, i.e. by composing against projections.  The
``check_*`` functions quantify over every operation of the given arities at
once by running the same composition routine over a :class:`SymbolicRing`.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    ArityMismatch,
    DegenerateTheory,
    EnumerationTooLarge,
    IndexOutOfRange,
    NotHomomorphic,
    NotInTheory,
    NotPartitionOfUnity,
    SumNotOne,
    TheoryMismatch,
)
from .report import Report
from .rings import (
    FiniteRing,
    boolean_view,
    homs_to_f2,
    is_boolean,
    is_commutative,
    is_ring_isomorphism,
    make_zmod,
    ring_axiom_failures,
    ring_from_tables,
)
from .symbolic import SymbolicRing, make_manager

DEFAULT_ENUM_CAP = 10**6
DEFAULT_MAX_ARITY = 3


class Flavor(enum.Enum):
    FULL = "full"
    AFFINE = "affine"
    HYPERAFFINE = "hyperaffine"
    DEGENERATE_U = "U"
    DEGENERATE_U_PRIME = "U'"


_LETTER = {Flavor.FULL: "T", Flavor.AFFINE: "A", Flavor.HYPERAFFINE: "H"}


@dataclass(frozen=True, eq=False)
class Theory:
    ring: FiniteRing
    flavor: Flavor

    def __post_init__(self):
        if self.flavor is Flavor.HYPERAFFINE and not is_boolean(self.ring):
            raise ValueError(f"H needs a Boolean ring, got {self.ring.spec}")
        if self.flavor in (Flavor.AFFINE, Flavor.FULL) and not is_commutative(self.ring):
            raise ValueError(f"{self.flavor.value} theory needs a commutative ring")
        if self.flavor in (Flavor.DEGENERATE_U, Flavor.DEGENERATE_U_PRIME) and self.ring.size != 1:
            raise ValueError("degenerate theories live over the one-element ring")

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Theory) and self.flavor is other.flavor and self.ring == other.ring

    def __hash__(self):
        return hash((self.flavor, self.ring))

    @property
    def label(self) -> str:
        if self.flavor in _LETTER:
            return f"{_LETTER[self.flavor]}({self.ring.spec})"
        return self.flavor.value

    def __repr__(self):
        return f"Theory({self.label})"

    @property
    def is_degenerate(self) -> bool:
        return self.ring.is_degenerate

    @cached_property
    def _atoms(self):
        return boolean_view(self.ring).atoms

    # membership ------------------------------------------------------------
    def contains(self, coeffs) -> bool:
        r = self.ring
        if any(not 0 <= c < r.size for c in coeffs):
            return False
        fl = self.flavor
        if fl is Flavor.FULL or fl is Flavor.DEGENERATE_U:
            return True
        if fl is Flavor.DEGENERATE_U_PRIME:
            return len(coeffs) > 0
        if r.sum(coeffs) != r.one:
            return False
        if fl is Flavor.HYPERAFFINE:
            for i, j in itertools.combinations(range(len(coeffs)), 2):
                if r.mul(coeffs[i], coeffs[j]) != r.zero:
                    return False
        return True

    def operation(self, coeffs) -> "Operation":
        coeffs = tuple(int(c) for c in coeffs)
        if not self.contains(coeffs):
            raise NotInTheory(f"{_fmt(self, coeffs)} violates the membership constraint")
        return Operation(self, coeffs)

    def projection(self, n: int, i: int) -> "Operation":
        """The projection onto the i-th of n variables (1-based)."""
        if not 1 <= i <= n:
            raise IndexOutOfRange(f"projection index {i} outside 1..{n}")
        r = self.ring
        return Operation(self, tuple(r.one if j == i - 1 else r.zero for j in range(n)))

    def count(self, n: int) -> int:
        """|T(n)|, from the closed-form count for the flavor."""
        r = self.ring
        fl = self.flavor
        if fl is Flavor.FULL:
            return r.size**n
        if fl is Flavor.DEGENERATE_U:
            return 1
        if fl is Flavor.DEGENERATE_U_PRIME:
            return 1 if n > 0 else 0
        if fl is Flavor.AFFINE:
            if n == 0:
                return 1 if r.is_degenerate else 0
            return r.size ** (n - 1)
        return n ** len(self._atoms)

    def enumerate(self, n: int, cap: int = DEFAULT_ENUM_CAP):
        """All operations of arity n in lexicographic coefficient order."""
        total = self.count(n)
        if total > cap:
            raise EnumerationTooLarge(f"|{self.label}({n})| = {total} exceeds cap {cap}")
        return iter(self._enumerate(n))

    def _enumerate(self, n):
        r = self.ring
        fl = self.flavor
        if fl in (Flavor.FULL, Flavor.DEGENERATE_U, Flavor.DEGENERATE_U_PRIME):
            if fl is Flavor.DEGENERATE_U_PRIME and n == 0:
                return []
            return [Operation(self, c) for c in itertools.product(range(r.size), repeat=n)]
        if fl is Flavor.AFFINE:
            if n == 0:
                return [Operation(self, ())] if r.is_degenerate else []
            out = []
            for head in itertools.product(range(r.size), repeat=n - 1):
                out.append(Operation(self, head + (r.sub(r.one, r.sum(head)),)))
            return out
        # hyperaffine: each atom picks the slot whose coefficient carries it
        atoms = self._atoms
        vecs = set()
        for slots in itertools.product(range(n), repeat=len(atoms)):
            c = [r.zero] * n
            for atom, s in zip(atoms, slots):
                c[s] = r.add(c[s], atom)
            vecs.add(tuple(c))
        return [Operation(self, c) for c in sorted(vecs)]


@dataclass(frozen=True)
class Operation:
    theory: Theory = field(repr=False)
    coeffs: tuple

    @property
    def arity(self) -> int:
        return len(self.coeffs)

    def __str__(self):
        return _fmt(self.theory, self.coeffs)

    def __call__(self, *args: "Operation") -> "Operation":
        return compose(self, list(args))


def _fmt(theory, coeffs):
    lab = theory.ring.labels
    return "[" + ",".join(lab[c] for c in coeffs) + "]@" + theory.label


# constructors -----------------------------------------------------------------

def full_theory(ring: FiniteRing) -> Theory:
    return Theory(ring, Flavor.FULL)


def affine_theory(ring: FiniteRing) -> Theory:
    return Theory(ring, Flavor.AFFINE)


def hyperaffine_theory(ring: FiniteRing) -> Theory:
    return Theory(ring, Flavor.HYPERAFFINE)


def degenerate_theory(prime: bool = False) -> Theory:
    """U (one operation at every arity) or U' (same, but empty at arity 0)."""
    return Theory(make_zmod(1), Flavor.DEGENERATE_U_PRIME if prime else Flavor.DEGENERATE_U)


def make_theory(ring: FiniteRing, flavor) -> Theory:
    return Theory(ring, Flavor(flavor))


# composition -------------------------------------------------------------------

def combine(ring, f, gs, m):
    """Matrix product: ``result[j] = sum_i gs[i][j] * f[i]`` over ``ring``."""
    add, mul = ring.add, ring.mul
    out = []
    for j in range(m):
        acc = ring.zero
        for fi, g in zip(f, gs):
            acc = add(acc, mul(g[j], fi))
        out.append(acc)
    return tuple(out)


def compose(f: Operation, gs, arity: int | None = None) -> Operation:
    """``f(g_1, ..., g_n)``; ``arity`` is only needed when f is nullary."""
    gs = list(gs)
    if len(gs) != f.arity:
        raise ArityMismatch(f"{f} takes {f.arity} arguments, got {len(gs)}")
    t = f.theory
    for g in gs:
        if g.theory != t:
            raise TheoryMismatch(f"{g} is not in {t.label}")
    arities = {g.arity for g in gs}
    if len(arities) > 1:
        raise ArityMismatch(f"arguments have different arities {sorted(arities)}")
    m = arities.pop() if arities else (arity or 0)
    if arity is not None and m != arity:
        raise ArityMismatch(f"arguments have arity {m}, expected {arity}")
    coeffs = combine(t.ring, f.coeffs, [g.coeffs for g in gs], m)
    if not t.contains(coeffs):
        raise NotInTheory(f"composite {_fmt(t, coeffs)} escaped {t.label}")
    return Operation(t, coeffs)


# free-model terms ------------------------------------------------------------------

class Terms:
    """Builds free-model terms over a coefficient ring (concrete or symbolic)."""

    def __init__(self, ring, manager=None):
        self.ring = ring
        self.manager = manager
        self._lifted = {}

    def var(self, k, i):
        r = self.ring
        return tuple(r.one if j == i else r.zero for j in range(k))

    def app(self, f, args):
        m = len(args[0]) if args else 0
        return combine(self.ring, f, args, m)

    def coefficient(self, f, i):
        x, y = self.var(2, 0), self.var(2, 1)
        return self.app(f, [x if j == i else y for j in range(len(f))])

    def lift(self, ring):
        """``ring`` over the same variables as this builder."""
        if self.manager is None:
            return ring
        key = id(ring)
        if key not in self._lifted:
            self._lifted[key] = (ring, SymbolicRing(ring, self.manager))
        return self._lifted[key][1]


def idempotent_sides(t, f):
    x = t.var(1, 0)
    return t.app(f, [x] * len(f)), x


def split_sides(t, f):
    n = len(f)
    k = n * n

    def x(i, j):
        return t.var(k, i * n + j)

    lhs = t.app(f, [t.app(f, [x(i, j) for j in range(n)]) for i in range(n)])
    return lhs, t.app(f, [x(i, i) for i in range(n)])


def commute_sides(t, f, g):
    n, m = len(f), len(g)
    k = n * m

    def x(i, j):
        return t.var(k, i * m + j)

    lhs = t.app(f, [t.app(g, [x(i, j) for j in range(m)]) for i in range(n)])
    rhs = t.app(g, [t.app(f, [x(i, j) for i in range(n)]) for j in range(m)])
    return lhs, rhs


def malcev_xyy_sides(t, p):
    x, y = t.var(2, 0), t.var(2, 1)
    return t.app(p, [x, y, y]), x


def malcev_xxy_sides(t, p):
    x, y = t.var(2, 0), t.var(2, 1)
    return t.app(p, [x, x, y]), y


def m1_sides(t, p):
    x, y, s, u, v = (t.var(5, i) for i in range(5))
    return t.app(p, [x, y, t.app(p, [s, u, v])]), t.app(p, [t.app(p, [x, y, s]), u, v])


def m2_sides(t, p):
    x, y, z = (t.var(3, i) for i in range(3))
    return t.app(p, [x, y, z]), t.app(p, [z, y, x])


def c5_sides(t, f, *gs):
    """Distributivity: f(g_1,...,g_k) o (f(x^1_j,...,x^k_j))_j = f(g_1(x^1), ..., g_k(x^k))."""
    k = len(f)
    n = len(gs[0])
    total = k * n

    def x(i, j):
        return t.var(total, i * n + j)

    lhs = t.app(t.app(f, list(gs)), [t.app(f, [x(i, j) for i in range(k)]) for j in range(n)])
    rhs = t.app(f, [t.app(g, [x(i, j) for j in range(n)]) for i, g in enumerate(gs)])
    return lhs, rhs


def _pl_sides(t, p, a, b, c):
    r = t.ring
    lhs = t.app(p, [a, b, c])
    rhs = tuple(r.add(r.sub(ai, bi), ci) for ai, bi, ci in zip(a, b, c))
    return lhs, rhs


# exhaustive checking ---------------------------------------------------------------

@dataclass
class Verdict:
    instances: int
    violations: int
    witness: tuple | None = None

    @property
    def holds(self) -> bool:
        return self.violations == 0


def _concrete_diff(lhs, rhs):
    return lhs != rhs


def find_violations(theory, arities, sides, *, fixed=(), method="symbolic",
                    cap=DEFAULT_ENUM_CAP, backend=None) -> Verdict:
    """Check ``sides`` for every choice of operations of the given arities.

    ``fixed`` operations are passed before the quantified ones.  ``method`` is
    ``"symbolic"`` (all instances at once) or ``"enumerate"`` (one by one);
    both report the lexicographically first violating instance.
    """
    domains = [list(theory.enumerate(n, cap)) for n in arities]
    total = math.prod(len(d) for d in domains)
    fixed_coeffs = [op.coeffs for op in fixed]
    if total == 0:
        return Verdict(0, 0)
    if method == "enumerate":
        bad, first = 0, None
        t = Terms(theory.ring)
        for combo in itertools.product(*domains):
            lhs, rhs = sides(t, *fixed_coeffs, *(op.coeffs for op in combo))
            if lhs != rhs:
                bad += 1
                if first is None:
                    first = combo
        return Verdict(total, bad, first)
    if method != "symbolic":
        raise ValueError(f"unknown method {method!r}")
    if not domains:
        lhs, rhs = sides(Terms(theory.ring), *fixed_coeffs)
        return Verdict(1, int(lhs != rhs), () if lhs != rhs else None)
    mgr = make_manager([len(d) for d in domains], theory.ring.size, backend)
    sring = SymbolicRing(theory.ring, mgr)
    ops = []
    for level, (n, dom) in enumerate(zip(arities, domains)):
        ops.append(tuple(sring.variable(level, [op.coeffs[c] for op in dom]) for c in range(n)))
    t = Terms(sring, mgr)
    lhs, rhs = sides(t, *fixed_coeffs, *ops)
    diff = 0
    if len(lhs) != len(rhs):
        raise ArityMismatch("identity sides have different arities")
    for a, b in zip(lhs, rhs):
        diff = sring.either(diff, sring.differs(a, b))
    path = mgr.witness(diff)
    if path is None:
        return Verdict(total, 0)
    witness = tuple(dom[v] for dom, v in zip(domains, path))
    return Verdict(total, mgr.count_nonzero(diff), witness)


def _instance(names, ops):
    return ", ".join(f"{nm}={op}" for nm, op in zip(names, ops))


def _record(report, name, verdict, names):
    if verdict.holds:
        report.add(name, True, f"({verdict.instances} instances)")
    else:
        report.add(
            name, False, f"({verdict.violations} of {verdict.instances} instances)",
            _instance(names, verdict.witness), payload=verdict.witness,
        )


# single-operation verdicts -----------------------------------------------------------

def _holds(f_theory, sides, *ops):
    lhs, rhs = sides(Terms(f_theory.ring), *(op.coeffs for op in ops))
    return lhs == rhs


def _same_theory(*ops):
    t = ops[0].theory
    for op in ops[1:]:
        if op.theory != t:
            raise TheoryMismatch(f"{op} and {ops[0]} live in different theories")
    return t


def is_idempotent(f: Operation) -> bool:
    return _holds(f.theory, idempotent_sides, f)


def splits(f: Operation) -> bool:
    return _holds(f.theory, split_sides, f)


def commute(f: Operation, g: Operation) -> bool:
    return _holds(_same_theory(f, g), commute_sides, f, g)


def is_malcev(p: Operation) -> bool:
    if p.arity != 3:
        raise ArityMismatch(f"a Mal'cev operation is ternary, {p} has arity {p.arity}")
    return _holds(p.theory, malcev_xyy_sides, p) and _holds(p.theory, malcev_xxy_sides, p)


def c5_holds(f: Operation, gs) -> bool:
    gs = list(gs)
    _same_theory(f, *gs)
    if len(gs) != f.arity or len({g.arity for g in gs}) > 1:
        raise ArityMismatch("c5 needs f of arity k and k operations of a common arity")
    return _holds(f.theory, c5_sides, f, *gs)


def malcev_operation(t: Theory) -> Operation:
    """The operation (1, -1, 1) of A_R(3)."""
    r = t.ring
    return t.operation((r.one, r.neg(r.one), r.one))


# suites ---------------------------------------------------------------------------

def _arity_range(max_arity, lo=1):
    return range(lo, max_arity + 1)


def check_idempotent(t, max_arity, **kw) -> Report:
    rep = Report()
    for n in _arity_range(max_arity):
        _record(rep, f"idempotent n={n}", find_violations(t, [n], idempotent_sides, **kw), ["f"])
    return rep


def check_split(t, max_arity, **kw) -> Report:
    rep = Report()
    for n in _arity_range(max_arity):
        _record(rep, f"split n={n}", find_violations(t, [n], split_sides, **kw), ["f"])
    return rep


def check_commute(t, max_arity, **kw) -> Report:
    rep = Report()
    for n in _arity_range(max_arity):
        for m in _arity_range(max_arity):
            v = find_violations(t, [n, m], commute_sides, **kw)
            _record(rep, f"commute n={n} m={m}", v, ["f", "g"])
    return rep


def check_c5(t: Theory, max_arity: int = DEFAULT_MAX_ARITY, **kw) -> Report:
    """The distributive identity for all f of arity k and g_1..g_k of arity n, k, n <= max_arity."""
    rep = Report()
    for k in _arity_range(max_arity):
        for n in _arity_range(max_arity):
            v = find_violations(t, [k] + [n] * k, c5_sides, **kw)
            _record(rep, f"c5 k={k} n={n}", v, ["f"] + [f"g{i + 1}" for i in range(k)])
    return rep


def check_m1_m2(t: Theory, p: Operation) -> Report:
    rep = Report()
    if p.theory != t:
        raise TheoryMismatch(f"{p} is not in {t.label}")
    for name, sides in (("M1", m1_sides), ("M2", m2_sides)):
        ok = _holds(t, sides, p)
        rep.add(name, ok, "", None if ok else f"p={p}")
    return rep


def malcev_operations(t: Theory, cap=DEFAULT_ENUM_CAP) -> list[Operation]:
    return [p for p in t.enumerate(3, cap) if is_malcev(p)]


# coefficients -----------------------------------------------------------------------

def coefficient(f: Operation, i: int) -> Operation:
    """f[i](x, y) = f(y, ..., x, ..., y) with x in slot i (1-based)."""
    if not 1 <= i <= f.arity:
        raise IndexOutOfRange(f"coefficient index {i} outside 1..{f.arity}")
    t = f.theory
    x, y = t.projection(2, 1), t.projection(2, 2)
    return compose(f, [x if j == i - 1 else y for j in range(f.arity)])


def coefficients(f: Operation) -> tuple:
    """Ring elements b with f[i] = (b, 1 - b), i.e. the first coordinates."""
    return tuple(coefficient(f, i).coeffs[0] for i in range(1, f.arity + 1))


def binary(t: Theory, b: int) -> Operation:
    """The binary operation (b, 1 - b)."""
    r = t.ring
    return t.operation((b, r.sub(r.one, b)))


def _is_partition(r, coeffs):
    if r.sum(coeffs) != r.one:
        return False
    return all(r.mul(a, b) == r.zero for a, b in itertools.combinations(coeffs, 2))


def reconstruct_hyperaffine(t: Theory, coeffs) -> Operation:
    """Operation with the given coefficients, built as f = b_1(x_1, g(x_2, ..., x_n))."""
    if t.flavor is not Flavor.HYPERAFFINE:
        raise TheoryMismatch(f"{t.label} is not hyperaffine")
    r = t.ring
    coeffs = [int(c) for c in coeffs]
    if not _is_partition(r, coeffs):
        raise NotPartitionOfUnity(f"{[r.label(c) for c in coeffs]} is not a partition of unity")
    return _rebuild_h(t, coeffs)


def _rebuild_h(t, b):
    n = len(b)
    if n == 0:
        return Operation(t, ())
    if n == 1:
        return t.projection(1, 1)
    r = t.ring
    bv = boolean_view(r)
    g = _rebuild_h(t, [bv.join(b[0], b[1])] + b[2:])
    proj = [t.projection(n, i) for i in range(1, n + 1)]
    return compose(binary(t, b[0]), [proj[0], compose(g, proj[1:])])


def reconstruct_affine(t: Theory, coeffs) -> Operation:
    """Operation with the given coefficients, built as f = p(r_2(x_2, x_1), x_1, g(x_1, x_3, ..., x_n))."""
    if t.flavor is not Flavor.AFFINE:
        raise TheoryMismatch(f"{t.label} is not affine")
    r = t.ring
    coeffs = [int(c) for c in coeffs]
    if r.sum(coeffs) != r.one:
        raise SumNotOne(f"{[r.label(c) for c in coeffs]} does not sum to 1")
    return _rebuild_a(t, coeffs)


def _rebuild_a(t, rs):
    n = len(rs)
    if n == 0:
        return Operation(t, ())
    if n == 1:
        return t.projection(1, 1)
    r = t.ring
    p = malcev_operation(t)
    g = _rebuild_a(t, [r.add(rs[0], rs[1])] + rs[2:])
    proj = [t.projection(n, i) for i in range(1, n + 1)]
    first = compose(binary(t, rs[1]), [proj[1], proj[0]])
    rest = compose(g, [proj[0]] + proj[2:])
    return compose(p, [first, proj[0], rest])


def reconstruct(t: Theory, coeffs) -> Operation:
    if t.flavor is Flavor.HYPERAFFINE:
        return reconstruct_hyperaffine(t, coeffs)
    return reconstruct_affine(t, coeffs)


# the ring on T(2) -------------------------------------------------------------------

@dataclass
class BinaryRing:
    """T(2) with ring structure defined by composition, and its iso to the base ring."""

    theory: Theory
    ring: FiniteRing
    operations: list
    iso: tuple  # iso[r] = index of (r, 1 - r) in ``operations``

    def element(self, op: Operation) -> int:
        return self.operations.index(op)


def ring_on_binary(t: Theory) -> BinaryRing:
    if t.flavor not in (Flavor.AFFINE, Flavor.HYPERAFFINE):
        raise DegenerateTheory(f"{t.label} has no ring of binary operations here")
    if t.is_degenerate:
        raise DegenerateTheory(f"{t.label} is degenerate")
    ops = list(t.enumerate(2))
    index = {op: i for i, op in enumerate(ops)}
    x, y = t.projection(2, 1), t.projection(2, 2)
    n = len(ops)
    add = [[0] * n for _ in range(n)]
    mul = [[0] * n for _ in range(n)]
    if t.flavor is Flavor.AFFINE:
        p = malcev_operation(t)
        for i, a in enumerate(ops):
            for j, b in enumerate(ops):
                add[i][j] = index[compose(p, [a, y, b])]
                mul[i][j] = index[compose(a, [b, y])]
    else:
        meet = [[index[compose(a, [b, y])] for b in ops] for a in ops]
        join = [[index[compose(a, [x, b])] for b in ops] for a in ops]
        neg = [index[compose(a, [y, x])] for a in ops]
        for i in range(n):
            for j in range(n):
                add[i][j] = join[meet[i][neg[j]]][meet[neg[i]][j]]
                mul[i][j] = meet[i][j]
    labels = [str(op).split("@")[0] for op in ops]
    ring = ring_from_tables(add, mul, index[y], index[x], labels)
    iso = tuple(index[binary(t, r)] for r in t.ring.elements)
    if not is_ring_isomorphism(t.ring, ring, iso):
        raise NotHomomorphic(f"r -> (r, 1-r) is not a ring isomorphism onto {t.label}(2)")
    return BinaryRing(t, ring, ops, iso)


def check_ring_on_binary(t: Theory) -> Report:
    rep = Report()
    br = ring_on_binary(t)
    bad = ring_axiom_failures(br.ring)
    rep.add("binary-ring-axioms", not bad, "", ",".join(bad) or None)
    if t.flavor is Flavor.HYPERAFFINE:
        rep.add("binary-ring-boolean", is_boolean(br.ring))
    ok = is_ring_isomorphism(t.ring, br.ring, br.iso)
    rep.add(f"binary-ring-iso {t.ring.spec}", ok, "(r -> (r,1-r), full table comparison)")
    return rep


def phi_sides_factory(binary_ring: FiniteRing):
    def sides(t, f, *gs):
        r2 = t.lift(binary_ring)
        h = t.app(f, list(gs))
        fc = [t.coefficient(f, i)[0] for i in range(len(f))]
        gc = [[t.coefficient(g, j)[0] for j in range(len(h))] for g in gs]
        lhs = tuple(t.coefficient(h, j)[0] for j in range(len(h)))
        rhs = tuple(r2.sum(r2.mul(gc[i][j], fc[i]) for i in range(len(f))) for j in range(len(h)))
        return lhs, rhs

    return sides


def verify_phi_morphism(t: Theory, max_n: int = 3, max_m: int = 3, **kw) -> Report:
    """Coefficients of f(g_1..g_n) equal the matrix product of coefficient vectors."""
    br = ring_on_binary(t)
    for op, idx in zip(br.operations, range(len(br.operations))):
        if op.coeffs[0] != idx:
            raise AssertionError("T(2) enumeration is not indexed by the first coordinate")
    sides = phi_sides_factory(br.ring)
    rep = Report()
    for n in _arity_range(max_n):
        for m in _arity_range(max_m):
            v = find_violations(t, [n] + [m] * n, sides, **kw)
            _record(rep, f"phi n={n} m={m}", v, ["f"] + [f"g{i + 1}" for i in range(n)])
    return rep


def check_coordinates(t: Theory, max_arity: int, cap=DEFAULT_ENUM_CAP) -> Report:
    """Coefficient extraction and reconstruction are mutually inverse."""
    rep = Report()
    r = t.ring
    for n in _arity_range(max_arity):
        ops = list(t.enumerate(n, cap))
        bad = None
        for f in ops:
            c = coefficients(f)
            constrained = _is_partition(r, c) if t.flavor is Flavor.HYPERAFFINE else r.sum(c) == r.one
            if not constrained or reconstruct(t, c) != f:
                bad = f
                break
        rep.add(f"reconstruct-after-coefficients n={n}", bad is None,
                f"({len(ops)} operations)", None if bad is None else f"f={bad}")
        bad = None
        for f in ops:
            # every constrained vector arises as the coefficient vector of an operation
            if coefficients(reconstruct(t, f.coeffs)) != f.coeffs:
                bad = f.coeffs
                break
        rep.add(f"coefficients-after-reconstruct n={n}", bad is None,
                f"({len(ops)} vectors)", None if bad is None else str(bad))
    return rep


def check_pl(t: Theory, **kw) -> Report:
    """p(a, b, c) = a - b + c on binary operations."""
    p = malcev_operation(t)
    rep = Report()
    v = find_violations(t, [2, 2, 2], _pl_sides, fixed=[p], **kw)
    _record(rep, "pl", v, ["a", "b", "c"])
    return rep


def verify_theory(t: Theory, max_arity: int = DEFAULT_MAX_ARITY, **kw) -> Report:
    """Full axiom suite for an affine or hyperaffine theory."""
    rep = Report(title=f"theory verify {t.label}", header=[f"max-arity {max_arity}"])
    rep.extend(check_idempotent(t, max_arity, **kw))
    rep.extend(check_commute(t, max_arity, **kw))
    if t.flavor is Flavor.HYPERAFFINE:
        rep.extend(check_split(t, max_arity, **kw))
        rep.extend(check_c5(t, max_arity, **kw))
        if not t.is_degenerate:
            found = malcev_operations(t)
            rep.add("no-malcev n=3", not found, f"({t.count(3)} operations)",
                    None if not found else f"p={found[0]}")
    elif t.flavor is Flavor.AFFINE:
        p = malcev_operation(t)
        rep.add("malcev (1,-1,1)", is_malcev(p), "", None if is_malcev(p) else f"p={p}")
        rep.extend(check_m1_m2(t, p))
        found = malcev_operations(t)
        rep.add("malcev-unique n=3", found == [p], f"({t.count(3)} operations)",
                None if found == [p] else ", ".join(str(q) for q in found))
        rep.extend(check_pl(t, **kw))
    if t.flavor in (Flavor.AFFINE, Flavor.HYPERAFFINE) and not t.is_degenerate:
        rep.extend(check_coordinates(t, max_arity))
    return rep


def roundtrip_theory(t: Theory, max_arity: int = DEFAULT_MAX_ARITY, **kw) -> Report:
    """Ring <-> theory round trip: T(2) ~ R and the coefficient map is a theory morphism."""
    rep = Report(title=f"theory roundtrip {t.label}", header=[f"max-arity {max_arity}"])
    br = ring_on_binary(t)
    rep.extend(check_ring_on_binary(t))
    rep.notes.append("iso " + " ".join(
        f"{t.ring.label(r)}->{br.ring.label(br.iso[r])}" for r in t.ring.elements))
    rep.extend(verify_phi_morphism(t, max_arity, max_arity, **kw))
    return rep


# Mal'cev term search ------------------------------------------------------------------

@dataclass
class ExpressibilityResult:
    ring: FiniteRing
    witness: str | None
    depth: int
    exhausted: bool
    homs: list

    @property
    def found(self) -> bool:
        return self.witness is not None

    @property
    def consistent(self) -> bool:
        # a witness may only exist when there is no hom to F2
        return not (self.found and self.homs)


def malcev_binary_expressibility(r: FiniteRing, depth_cap: int = 6) -> ExpressibilityResult:
    """Search terms built from x, y, z and binary operations (s, 1-s) for (1,-1,1).

    Level d holds every value of a term of nesting depth <= d.  The search stops at
    the first witness, at a fixpoint (``exhausted``) or at ``depth_cap``.
    """
    t = affine_theory(r)
    target = malcev_operation(t)
    x, y, z = (t.projection(3, i) for i in (1, 2, 3))
    known = {x: "x", y: "y", z: "z"}
    homs = homs_to_f2(r) if r.size <= 16 else []
    if target in known:
        return ExpressibilityResult(r, known[target], 0, False, homs)
    binaries = [binary(t, s) for s in r.elements]
    for depth in range(1, depth_cap + 1):
        fresh = {}
        current = sorted(known.items(), key=lambda kv: (len(kv[1]), kv[1]))
        for s, op in zip(r.elements, binaries):
            for a, ta in current:
                for b, tb in current:
                    v = compose(op, [a, b])
                    if v not in known and v not in fresh:
                        fresh[v] = f"{r.label(s)}({ta},{tb})"
        if target in fresh:
            return ExpressibilityResult(r, fresh[target], depth, False, homs)
        if not fresh:
            return ExpressibilityResult(r, None, depth, True, homs)
        known.update(fresh)
    return ExpressibilityResult(r, None, depth_cap, False, homs)
