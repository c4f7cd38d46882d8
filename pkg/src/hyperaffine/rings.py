"""Finite commutative rings as dense operation tables.

Elements are the indices ``0 .. size-1``.  Boolean rings built with
:func:`make_powerset_boolean` use the bitmask of the atoms below an element as
its index, so ``+`` is xor and ``*`` is and.

Ring spec strings::

    zmod:<n>            integers mod n
    bool:<k>            Boolean ring of subsets of k atoms
    prod(<spec>,<spec>) direct product
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import CarrierTooLarge, NotBoolean, RingSpecError

ATOM_NAMES = "stuvwyzabcdefghijklmnopqr"
MAX_BOOL_ATOMS = 10
MAX_ZMOD = 1024
HOM_SEARCH_CAP = 16


def atom_name(i: int) -> str:
    if i < len(ATOM_NAMES):
        return ATOM_NAMES[i]
    return f"a{i}"


class FiniteRing:
    """A finite ring given by its addition and multiplication tables."""

    def __init__(self, add, mul, zero: int, one: int, kind: tuple, labels=None):
        add = np.array(add, dtype=np.int64)
        mul = np.array(mul, dtype=np.int64)
        n = add.shape[0]
        if n < 1 or add.shape != (n, n) or mul.shape != (n, n):
            raise ValueError("operation tables must be square and nonempty")
        if add.min() < 0 or add.max() >= n or mul.min() < 0 or mul.max() >= n:
            raise ValueError("table entries out of range")
        add.setflags(write=False)
        mul.setflags(write=False)
        self.size = n
        self.add_table = add
        self.mul_table = mul
        self.zero = int(zero)
        self.one = int(one)
        self.kind = kind
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        # python-level copies: scalar lookups on lists beat numpy indexing
        self._add = add.tolist()
        self._mul = mul.tolist()
        neg = [0] * n
        for a in range(n):
            for b in range(n):
                if self._add[a][b] == self.zero:
                    neg[a] = b
                    break
        self._neg = neg
        self.neg_table = np.array(neg, dtype=np.int64)
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        self._hash = hash((n, self.zero, self.one, add.tobytes(), mul.tobytes()))

    # arithmetic -----------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def sum(self, values) -> int:
        acc = self.zero
        for v in values:
            acc = self._add[acc][v]
        return acc

    def from_int(self, k: int) -> int:
        """Image of the integer ``k`` under the unique map Z -> R."""
        acc = self.zero
        step = self.one if k >= 0 else self._neg[self.one]
        for _ in range(abs(k)):
            acc = self._add[acc][step]
        return acc

    # descriptive ----------------------------------------------------------
    @property
    def spec(self) -> str:
        return kind_to_spec(self.kind)

    @property
    def is_degenerate(self) -> bool:
        return self.zero == self.one

    @property
    def elements(self) -> range:
        return range(self.size)

    def label(self, a: int) -> str:
        return self.labels[a]

    def element(self, text: str) -> int:
        """Parse an element label (as printed by :meth:`label`)."""
        text = text.strip()
        if text in self._label_index:
            return self._label_index[text]
        if self.kind[0] == "zmod":
            try:
                return int(text) % self.size
            except ValueError:
                pass
        if self.kind[0] == "bool" and text.startswith("#"):
            try:
                v = int(text[1:], 16)
            except ValueError:
                v = -1
            if 0 <= v < self.size:
                return v
        if self.kind[0] == "bool" and text.startswith("{") and text.endswith("}"):
            names = [t.strip() for t in text[1:-1].split(",") if t.strip()]
            mask = 0
            for nm in names:
                k = _atom_index(nm, self.kind[1])
                if k is None:
                    raise RingSpecError(f"unknown atom {nm!r} in {text!r}")
                mask |= 1 << k
            return mask
        raise RingSpecError(f"{text!r} is not an element of {self.spec}")

    def __repr__(self):
        return f"FiniteRing({self.spec})"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteRing):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.size == other.size
            and self.zero == other.zero
            and self.one == other.one
            and np.array_equal(self.add_table, other.add_table)
            and np.array_equal(self.mul_table, other.mul_table)
        )

    def __hash__(self):
        return self._hash


def _atom_index(name: str, k: int):
    for i in range(k):
        if atom_name(i) == name:
            return i
    return None


def kind_to_spec(kind: tuple) -> str:
    tag = kind[0]
    if tag == "zmod":
        return f"zmod:{kind[1]}"
    if tag == "bool":
        return f"bool:{kind[1]}"
    if tag == "prod":
        return f"prod({kind_to_spec(kind[1])},{kind_to_spec(kind[2])})"
    return "table"


# constructors ---------------------------------------------------------------

def make_zmod(n: int) -> FiniteRing:
    if n < 1:
        raise RingSpecError("zmod needs n >= 1")
    if n > MAX_ZMOD:
        raise CarrierTooLarge(f"zmod:{n} exceeds the table cap {MAX_ZMOD}")
    r = np.arange(n)
    add = (r[:, None] + r[None, :]) % n
    mul = (r[:, None] * r[None, :]) % n
    return FiniteRing(add, mul, 0, 1 % n, ("zmod", n))


def bool_label(mask: int, k: int) -> str:
    return "{" + ",".join(atom_name(i) for i in range(k) if mask >> i & 1) + "}"


def make_powerset_boolean(k: int) -> FiniteRing:
    if k < 0:
        raise RingSpecError("bool needs k >= 0")
    if k > MAX_BOOL_ATOMS:
        raise CarrierTooLarge(f"bool:{k} exceeds the atom cap {MAX_BOOL_ATOMS}")
    r = np.arange(1 << k)
    add = r[:, None] ^ r[None, :]
    mul = r[:, None] & r[None, :]
    labels = [bool_label(m, k) for m in range(1 << k)]
    return FiniteRing(add, mul, 0, (1 << k) - 1, ("bool", k), labels)


def product_ring(r1: FiniteRing, r2: FiniteRing) -> FiniteRing:
    """Componentwise product; the pair ``(a, b)`` has index ``a * |r2| + b``."""
    n1, n2 = r1.size, r2.size
    a1, b1 = np.divmod(np.arange(n1 * n2), n2)
    add = r1.add_table[a1[:, None], a1[None, :]] * n2 + r2.add_table[b1[:, None], b1[None, :]]
    mul = r1.mul_table[a1[:, None], a1[None, :]] * n2 + r2.mul_table[b1[:, None], b1[None, :]]
    labels = [f"({r1.label(int(x))},{r2.label(int(y))})" for x, y in zip(a1, b1)]
    return FiniteRing(
        add, mul, r1.zero * n2 + r2.zero, r1.one * n2 + r2.one, ("prod", r1.kind, r2.kind), labels
    )


def ring_from_tables(add, mul, zero: int, one: int, labels=None) -> FiniteRing:
    return FiniteRing(add, mul, zero, one, ("table",), labels)


_SPEC_ATOM = re.compile(r"\s*(zmod|bool)\s*:\s*(\d+)\s*")


def parse_ring_spec(text: str) -> FiniteRing:
    """Build a ring from ``zmod:<n>``, ``bool:<k>`` or ``prod(<spec>,<spec>)``."""
    ring, rest = _parse_spec(text, 0)
    if text[rest:].strip():
        raise RingSpecError(f"trailing input in ring spec {text!r} at position {rest}")
    return ring


def _parse_spec(text: str, pos: int):
    m = _SPEC_ATOM.match(text, pos)
    if m:
        n = int(m.group(2))
        ring = make_zmod(n) if m.group(1) == "zmod" else make_powerset_boolean(n)
        return ring, m.end()
    stripped = text[pos:].lstrip()
    pos = len(text) - len(stripped)
    if stripped.startswith("prod("):
        left, pos = _parse_spec(text, pos + 5)
        if pos >= len(text) or text[pos] != ",":
            raise RingSpecError(f"expected ',' in ring spec {text!r} at position {pos}")
        right, pos = _parse_spec(text, pos + 1)
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text) or text[pos] != ")":
            raise RingSpecError(f"expected ')' in ring spec {text!r} at position {pos}")
        return product_ring(left, right), pos + 1
    raise RingSpecError(f"bad ring spec {text!r} at position {pos}")


# verdicts -------------------------------------------------------------------

def ring_axiom_failures(r: FiniteRing) -> list[str]:
    """Full table scan of the commutative-ring axioms; returns violated laws."""
    A, M = r.add_table, r.mul_table
    e = np.arange(r.size)
    x, y, z = np.meshgrid(e, e, e, indexing="ij")
    bad = []
    if not np.array_equal(A[A[x, y], z], A[x, A[y, z]]):
        bad.append("add-associative")
    if not np.array_equal(A, A.T):
        bad.append("add-commutative")
    if not np.array_equal(A[e, r.zero], e):
        bad.append("add-unit")
    if not np.all(A[e, r.neg_table] == r.zero):
        bad.append("add-inverse")
    if not np.array_equal(M[M[x, y], z], M[x, M[y, z]]):
        bad.append("mul-associative")
    if not np.array_equal(M[e, r.one], e) or not np.array_equal(M[r.one, e], e):
        bad.append("mul-unit")
    if not np.array_equal(M[x, A[y, z]], A[M[x, y], M[x, z]]):
        bad.append("left-distributive")
    if not np.array_equal(M[A[x, y], z], A[M[x, z], M[y, z]]):
        bad.append("right-distributive")
    return bad


def is_commutative(r: FiniteRing) -> bool:
    return bool(np.array_equal(r.mul_table, r.mul_table.T))


def is_boolean(r: FiniteRing) -> bool:
    e = np.arange(r.size)
    return bool(np.array_equal(r.mul_table[e, e], e))


# Boolean algebra view ---------------------------------------------------------

@dataclass(frozen=True)
class BooleanView:
    """Lattice reading of a Boolean ring: meet = ab, join = a + (1-a)b, not = 1-a."""

    ring: FiniteRing
    meet_table: np.ndarray = field(repr=False)
    join_table: np.ndarray = field(repr=False)
    not_table: np.ndarray = field(repr=False)
    atoms: tuple

    def meet(self, a: int, b: int) -> int:
        return int(self.meet_table[a, b])

    def join(self, a: int, b: int) -> int:
        return int(self.join_table[a, b])

    def complement(self, a: int) -> int:
        return int(self.not_table[a])

    def le(self, a: int, b: int) -> bool:
        return self.meet(a, b) == a

    def atoms_below(self, a: int) -> frozenset:
        """Indices (into :attr:`atoms`) of the atoms under ``a``."""
        return frozenset(i for i, s in enumerate(self.atoms) if self.meet(s, a) == s)

    def from_atoms(self, indices) -> int:
        acc = self.ring.zero
        for i in indices:
            acc = self.join(acc, self.atoms[i])
        return acc

    def atom_name(self, i: int) -> str:
        return atom_name(i)

    def guard_label(self, a: int) -> str:
        return "{" + ",".join(atom_name(i) for i in sorted(self.atoms_below(a))) + "}"


def boolean_view(r: FiniteRing) -> BooleanView:
    if not is_boolean(r):
        e = next(a for a in r.elements if r.mul(a, a) != a)
        raise NotBoolean(f"{r.spec}: {r.label(e)}^2 = {r.label(r.mul(e, e))}")
    M, A = r.mul_table, r.add_table
    comp = A[r.one, r.neg_table]  # 1 - a
    join = A[np.arange(r.size)[:, None], M[comp[:, None], np.arange(r.size)[None, :]]]
    nonzero = [a for a in r.elements if a != r.zero]
    atoms = tuple(
        a for a in nonzero if not any(b != a and M[b, a] == b for b in nonzero)
    )
    for t in (M, join, comp):
        t.setflags(write=False)
    return BooleanView(r, M, join, comp, atoms)


# homomorphisms to F2 ---------------------------------------------------------------

def homs_to_f2(r: FiniteRing, cap: int = HOM_SEARCH_CAP) -> list[tuple[int, ...]]:
    """All unital ring homomorphisms ``r -> F2``, by exhaustive map search.

    Each hom is returned as the tuple of images of ``0 .. size-1``.
    """
    if r.size > cap:
        raise CarrierTooLarge(f"hom search over {r.size} elements exceeds cap {cap}")
    n = r.size
    cand = (np.arange(1 << n)[:, None] >> np.arange(n)[None, :]) & 1
    ok = (cand[:, r.zero] == 0) & (cand[:, r.one] == 1)
    cand = cand[ok]
    add_ok = (cand[:, r.add_table] == (cand[:, :, None] ^ cand[:, None, :])).all(axis=(1, 2))
    mul_ok = (cand[:, r.mul_table] == (cand[:, :, None] & cand[:, None, :])).all(axis=(1, 2))
    return [tuple(int(v) for v in row) for row in cand[add_ok & mul_ok]]


def find_ring_isomorphism(r1: FiniteRing, r2: FiniteRing):
    """Brute-force search for a ring isomorphism (only for small rings)."""
    if r1.size != r2.size:
        return None
    if r1.size > 8:
        raise CarrierTooLarge("isomorphism search is capped at 8 elements")
    for perm in itertools.permutations(range(r2.size)):
        if is_ring_isomorphism(r1, r2, perm):
            return perm
    return None


def is_ring_isomorphism(r1: FiniteRing, r2: FiniteRing, phi) -> bool:
    """Check that ``phi`` (a sequence indexed by r1 elements) is a bijective unital ring hom."""
    phi = np.asarray(phi, dtype=np.int64)
    if r1.size != r2.size or sorted(phi.tolist()) != list(range(r2.size)):
        return False
    if phi[r1.zero] != r2.zero or phi[r1.one] != r2.one:
        return False
    return bool(
        np.array_equal(phi[r1.add_table], r2.add_table[phi[:, None], phi[None, :]])
        and np.array_equal(phi[r1.mul_table], r2.mul_table[phi[:, None], phi[None, :]])
    )


def format_ring(r: FiniteRing) -> str:
    """Stable text layout: header, element list, ring tables, lattice tables if Boolean."""
    lab = r.labels
    lines = [
        f"ring {r.spec}",
        f"size {r.size}",
        f"zero {lab[r.zero]}",
        f"one {lab[r.one]}",
        "elements " + " ".join(lab),
        "add",
    ]
    lines += [" ".join(lab[v] for v in row) for row in r.add_table.tolist()]
    lines.append("mul")
    lines += [" ".join(lab[v] for v in row) for row in r.mul_table.tolist()]
    if is_boolean(r):
        bv = boolean_view(r)
        lines.append("atoms " + " ".join(lab[a] for a in bv.atoms))
        lines.append("meet")
        lines += [" ".join(lab[v] for v in row) for row in bv.meet_table.tolist()]
        lines.append("join")
        lines += [" ".join(lab[v] for v in row) for row in bv.join_table.tolist()]
        lines.append("not " + " ".join(lab[v] for v in bv.not_table.tolist()))
    return "\n".join(lines)
