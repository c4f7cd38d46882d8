"""If-then-else expressions over a finite Boolean guard algebra.

Grammar (whitespace between tokens is ignored)::

    expr  := var | "ite(" guard "," expr "," expr ")"
    var   := "x" digits                      (1-based, at most the arity)
    guard := "{" [atom ("," atom)*] "}" | "#" hex

Atoms are named s, t, u, v, w, y, z, a, ... by index; ``#hex`` is a bitmask
over the atoms (bit i = atom i).  As conveniences the parser also accepts the
guards ``0`` and ``1`` and the n-ary sugar ``q([g1, .., gm], e1, .., em)``,
which becomes a binary chain straight away.  The printer emits only the core
grammar.

``ite(b, e1, e2)`` denotes the coefficient vector ``b*[e1] + (1-b)*[e2]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import NotPartitionOfUnity, ParseError, UnknownAtom, VarOutOfRange
from .report import Report
from .rings import ATOM_NAMES, BooleanView, boolean_view


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class Ite:
    guard: int
    then: object
    orelse: object


class Q:
    """n-ary selector: branch i is taken under guard i.  Desugars to an Ite chain."""

    def __init__(self, view: BooleanView, selector, branches):
        selector, branches = tuple(selector), tuple(branches)
        if len(selector) != len(branches) or not selector:
            raise ValueError("a selector needs one guard per branch")
        if not _is_partition(view, selector):
            raise NotPartitionOfUnity(f"{selector} is not a partition of unity")
        self.view, self.selector, self.branches = view, selector, branches

    def desugar(self):
        """q(b1..bm; e1..em) = ite(b1, e1, q(b1 v b2, b3, ..; e2, ..))."""
        sel, br = self.selector, self.branches
        if len(br) == 1:
            return br[0]
        rest = (self.view.join(sel[0], sel[1]),) + sel[2:]
        return Ite(sel[0], br[0], Q(self.view, rest, br[1:]).desugar())


def _is_partition(view, coeffs):
    r = view.ring
    acc = r.zero
    for c in coeffs:
        if view.meet(acc, c) != r.zero:
            return False
        acc = view.join(acc, c)
    return acc == r.one


def _view(ring):
    return ring if isinstance(ring, BooleanView) else boolean_view(ring)


@dataclass(frozen=True)
class NormalForm:
    arity: int
    coeffs: tuple


# parsing --------------------------------------------------------------------------

class _Parser:
    def __init__(self, text, view, n):
        self.text, self.view, self.n, self.pos = text, view, n, 0

    def error(self, msg, cls=ParseError, pos=None):
        raise cls(msg, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, s):
        self.skip()
        if not self.text.startswith(s, self.pos):
            found = self.text[self.pos:self.pos + 1] or "end of input"
            self.error(f"expected {s!r}, found {found!r}")
        self.pos += len(s)

    def expr(self):
        self.skip()
        t = self.text
        if t.startswith("ite", self.pos) and t[self.pos + 3:].lstrip().startswith("("):
            self.pos += 3
            self.expect("(")
            g = self.guard()
            self.expect(",")
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            return Ite(g, a, b)
        if t.startswith("q", self.pos) and t[self.pos + 1:].lstrip().startswith("("):
            return self.q_sugar()
        if self.peek() == "x":
            start = self.pos
            self.pos += 1
            digits = start + 1
            while self.pos < len(t) and t[self.pos].isdigit():
                self.pos += 1
            if self.pos == digits:
                self.error("expected digits after 'x'")
            i = int(t[digits:self.pos])
            if not 1 <= i <= self.n:
                self.error(f"variable x{i} outside arity {self.n}", VarOutOfRange, start)
            return Var(i)
        self.error("expected 'ite(' or a variable")

    def q_sugar(self):
        start = self.pos
        self.pos += 1
        self.expect("(")
        self.expect("[")
        guards = [self.guard()]
        while self.peek() == ",":
            self.pos += 1
            guards.append(self.guard())
        self.expect("]")
        branches = []
        for _ in guards:
            self.expect(",")
            branches.append(self.expr())
        self.expect(")")
        if not _is_partition(self.view, guards):
            self.error("q selector is not a partition of unity", pos=start)
        return Q(self.view, guards, branches).desugar()

    def guard(self):
        c = self.peek()
        r = self.view.ring
        if c == "{":
            self.pos += 1
            idx = []
            while True:
                self.skip()
                if self.peek() == "}":
                    self.pos += 1
                    break
                start = self.pos
                while self.pos < len(self.text) and self.text[self.pos].isalpha():
                    self.pos += 1
                name = self.text[start:self.pos]
                if not name:
                    self.error("expected an atom name")
                k = ATOM_NAMES.find(name) if len(name) == 1 else -1
                if not 0 <= k < len(self.view.atoms):
                    self.error(f"unknown atom {name!r}", UnknownAtom, start)
                idx.append(k)
                if self.peek() == ",":
                    self.pos += 1
                elif self.peek() != "}":
                    self.error("expected ',' or '}'")
            return self.view.from_atoms(idx)
        if c == "#":
            start = self.pos
            self.pos += 1
            h = self.pos
            while self.pos < len(self.text) and self.text[self.pos] in "0123456789abcdefABCDEF":
                self.pos += 1
            if self.pos == h:
                self.error("expected hex digits after '#'")
            mask = int(self.text[h:self.pos], 16)
            if mask >> len(self.view.atoms):
                self.error(f"mask #{self.text[h:self.pos]} names atoms beyond {len(self.view.atoms)}",
                           UnknownAtom, start)
            return self.view.from_atoms(i for i in range(len(self.view.atoms)) if mask >> i & 1)
        if c and c in "01":
            self.pos += 1
            return r.one if c == "1" else r.zero
        self.error("expected a guard")


def parse(text: str, ring, n: int):
    view = _view(ring)
    p = _Parser(text, view, n)
    e = p.expr()
    p.skip()
    if p.pos != len(text):
        p.error(f"unexpected {text[p.pos]!r}")
    return e


def to_text(e, ring) -> str:
    view = _view(ring)
    if isinstance(e, Var):
        return f"x{e.index}"
    return f"ite({view.guard_label(e.guard)}, {to_text(e.then, view)}, {to_text(e.orelse, view)})"


def size(e) -> int:
    return 1 if isinstance(e, Var) else 1 + size(e.then) + size(e.orelse)


def depth(e) -> int:
    return 0 if isinstance(e, Var) else 1 + max(depth(e.then), depth(e.orelse))


# semantics ------------------------------------------------------------------------

def eval_to_operation(e, ring, n: int) -> NormalForm:
    """Coefficient vector, bottom-up: Var(i) is basis vector i, Ite mixes by b and 1-b."""
    r = _view(ring).ring

    def go(e):
        if isinstance(e, Var):
            return tuple(r.one if j == e.index else r.zero for j in range(1, n + 1))
        a, b = go(e.then), go(e.orelse)
        nb = r.sub(r.one, e.guard)
        return tuple(r.add(r.mul(e.guard, x), r.mul(nb, y)) for x, y in zip(a, b))
    return NormalForm(n, go(e))


def chain(nf: NormalForm, ring):
    """Right-nested Ite chain over the support with cumulative guards."""
    view = _view(ring)
    r = view.ring
    support = [(i + 1, c) for i, c in enumerate(nf.coeffs) if c != r.zero]
    if not support:
        raise NotPartitionOfUnity("all coefficients are zero")
    acc = r.zero
    guards = []
    for _, c in support[:-1]:
        acc = view.join(acc, c)
        guards.append(acc)
    e = Var(support[-1][0])
    for (i, _), g in zip(reversed(support[:-1]), reversed(guards)):
        e = Ite(g, Var(i), e)
    return e


def normalize(e, ring, n: int):
    return chain(eval_to_operation(e, ring, n), ring)


def equiv(e1, e2, ring, n: int) -> bool:
    return eval_to_operation(e1, ring, n).coeffs == eval_to_operation(e2, ring, n).coeffs


# brute-force oracle ----------------------------------------------------------------

class SemanticOracle:
    """Evaluates trees in the canonical B-set with 2-element stalks at every
    assignment of the n variables, using only the model's action table."""

    def __init__(self, ring, n: int):
        from .models import SheafData, canonical_bset
        view = _view(ring)
        self.view, self.n = view, n
        self.model = canonical_bset(SheafData(view.ring, (2,) * len(view.atoms)))
        N = self.model.carrier_size
        grids = np.indices((N,) * n).reshape(n, -1)
        self.values = [grids[i] for i in range(n)]

    def table(self, e):
        if isinstance(e, Var):
            return self.values[e.index - 1]
        return self.model.action[e.guard, self.table(e.then), self.table(e.orelse)]

    def equiv(self, e1, e2) -> bool:
        return bool(np.array_equal(self.table(e1), self.table(e2)))


def pick_map(e, ring) -> tuple:
    """For each atom, the variable an Ite tree selects there."""
    view = _view(ring)

    def at(e, k):
        while isinstance(e, Ite):
            e = e.then if k in view.atoms_below(e.guard) else e.orelse
        return e.index
    return tuple(at(e, k) for k in range(len(view.atoms)))


# Dicker axioms ---------------------------------------------------------------------

def check_dicker_axioms(ring) -> Report:
    """The six conditional-disjunction identities, with guards encoded in T(2)."""
    view = _view(ring)
    r = view.ring
    E = list(r.elements)
    x1, x2, x3, x4 = (Var(i) for i in range(1, 5))

    def T(a):  # a guard as the binary operation a(x1, x2)
        return Ite(a, x1, x2)

    def cond(a, b, c):  # guard-level q(a, b, c)
        return view.join(view.meet(a, b), view.meet(view.complement(a), c))

    cases = [
        ("q(a,1,0)=a", [(a,) for a in E], lambda a: (Ite(a, T(r.one), T(r.zero)), T(a))),
        ("q(1,a,b)=a, q(0,a,b)=b", [(a, b) for a in E for b in E],
         lambda a, b: (Ite(r.one, T(a), T(b)), T(a))),
        ("q(a,q(b,x,y),q(c,x,y))=q(q(a,b,c),x,y)", [(a, b, c) for a in E for b in E for c in E],
         lambda a, b, c: (Ite(a, Ite(b, x1, x2), Ite(c, x1, x2)), Ite(cond(a, b, c), x1, x2))),
        ("q(a,x,x)=x", [(a,) for a in E], lambda a: (Ite(a, x1, x1), x1)),
        ("q(a,q(b,x,y),q(b,z,w))=q(b,q(a,x,z),q(a,y,w))", [(a, b) for a in E for b in E],
         lambda a, b: (Ite(a, Ite(b, x1, x2), Ite(b, x3, x4)), Ite(b, Ite(a, x1, x3), Ite(a, x2, x4)))),
        ("q(a,q(a,x,y),q(a,z,w))=q(a,x,w)", [(a,) for a in E],
         lambda a: (Ite(a, Ite(a, x1, x2), Ite(a, x3, x4)), Ite(a, x1, x4))),
    ]
    rep = Report(title=f"dicker {r.spec}")
    for name, instances, build in cases:
        bad = None
        for inst in instances:
            pairs = [build(*inst)]
            if name.startswith("q(1,a,b)"):
                a, b = inst
                pairs.append((Ite(r.zero, T(a), T(b)), T(b)))
            if any(not equiv(lhs, rhs, view, 4) for lhs, rhs in pairs):
                bad = ", ".join(f"{v}={view.guard_label(g)}" for v, g in zip("abc", inst))
                break
        rep.add(name, bad is None, f"({len(instances)} guard instances)", bad)
    return rep


# random corpus --------------------------------------------------------------------

def random_expr(rng: random.Random, ring, n: int, max_depth: int, leaf_p: float = 0.3):
    r = _view(ring).ring
    if max_depth == 0 or rng.random() < leaf_p:
        return Var(rng.randint(1, n))
    return Ite(rng.randrange(r.size), random_expr(rng, r, n, max_depth - 1, leaf_p),
               random_expr(rng, r, n, max_depth - 1, leaf_p))


def corpus(count: int = 1000, seed: int = 2024, max_depth: int = 6, max_atoms: int = 3, max_arity: int = 4):
    """``count`` triples (ring, arity, expr); ring bool:k with 1 <= k <= max_atoms."""
    from .rings import make_powerset_boolean
    rings = {k: make_powerset_boolean(k) for k in range(1, max_atoms + 1)}
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        k = rng.randint(1, max_atoms)
        n = rng.randint(1, max_arity)
        out.append((rings[k], n, random_expr(rng, rings[k], n, max_depth)))
    return out


def sample_pairs(items, count: int = 500, seed: int = 2025):
    """``count`` distinct index pairs i < j with the same ring and arity."""
    groups = {}
    for i, (r, n, _) in enumerate(items):
        groups.setdefault((r.spec, n), []).append(i)
    candidates = [(i, j) for g in groups.values() for a, i in enumerate(g) for j in g[a + 1:]]
    rng = random.Random(seed)
    return sorted(rng.sample(candidates, min(count, len(candidates))))
