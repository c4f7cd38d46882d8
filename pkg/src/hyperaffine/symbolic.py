"""Ring arithmetic on decision-diagram nodes.

A :class:`SymbolicRing` presents the same ``add/mul/neg/sub/sum`` surface as
:class:`~hyperaffine.rings.FiniteRing`, but its elements are diagram nodes:
functions from an assignment of finite-domain variables to ring elements.
Terminal node ``v`` is the constant ring element ``v``, so concrete
coefficient vectors are valid symbolic values unchanged.  Running an ordinary
composition routine over this ring evaluates it for every assignment at once.
"""

from __future__ import annotations

import numpy as np

from .diagram import DiagramManager


def make_manager(domains, ring_size, backend=None):
    cls = backend or DiagramManager
    return cls(domains, max(ring_size, 2))


class SymbolicRing:
    def __init__(self, ring, manager):
        self.ring = ring
        self.manager = manager
        t = manager.n_terminals
        if t < ring.size:
            raise ValueError("manager has fewer terminals than the ring has elements")
        self.zero = ring.zero
        self.one = ring.one
        self.size = ring.size

        def pad2(table):
            out = np.zeros((t, t), dtype=np.int64)
            out[: ring.size, : ring.size] = table
            return out.ravel()

        neg = np.zeros(t, dtype=np.int64)
        neg[: ring.size] = ring.neg_table
        idx = np.arange(t)
        self._add = manager.register(pad2(ring.add_table), 2)
        self._mul = manager.register(pad2(ring.mul_table), 2)
        self._neg = manager.register(neg, 1)
        self._neq = manager.register((idx[:, None] != idx[None, :]).astype(np.int64).ravel(), 2)
        self._or = manager.register(((idx[:, None] != 0) | (idx[None, :] != 0)).astype(np.int64).ravel(), 2)

    def variable(self, level, values):
        """Symbolic element equal to ``values[i]`` when variable ``level`` takes value ``i``."""
        return self.manager.literal(level, [int(v) for v in values])

    def add(self, a, b):
        if a == self.zero:
            return b
        if b == self.zero:
            return a
        return self.manager.apply(self._add, (a, b))

    def mul(self, a, b):
        if a == self.zero or b == self.zero:
            return self.zero
        if a == self.one:
            return b
        if b == self.one:
            return a
        return self.manager.apply(self._mul, (a, b))

    def neg(self, a):
        return self.manager.apply(self._neg, (a,))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def sum(self, values):
        acc = self.zero
        for v in values:
            acc = self.add(acc, v)
        return acc

    def differs(self, a, b):
        """0/1-valued node: 1 exactly where ``a`` and ``b`` disagree."""
        if a == b:
            return 0
        return self.manager.apply(self._neq, (a, b))

    def either(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        return self.manager.apply(self._or, (a, b))
