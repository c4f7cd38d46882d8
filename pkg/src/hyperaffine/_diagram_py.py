"""Pure-Python multi-valued decision diagrams (fallback for ``_diagram_c``).

Node ids ``0 .. n_terminals-1`` are the terminals; terminal ``v`` stands for
the value ``v``.  Every other node sits on a level (a variable index) and has
one child per value in that variable's domain.  Nodes are hash-consed and
reduced, so two ids are equal iff they denote the same function.
"""


class DiagramManager:
    def __init__(self, domains, n_terminals):
        self.domains = tuple(int(d) for d in domains)
        if any(d < 1 for d in self.domains):
            raise ValueError("variable domains must be nonempty")
        self.n_terminals = int(n_terminals)
        self.depth = len(self.domains)
        self._level = [self.depth] * self.n_terminals
        self._kids = [()] * self.n_terminals
        self._unique = {}
        self._memo = {}
        self._tables = []

    @property
    def node_count(self):
        return len(self._level)

    def register(self, table, arity):
        """Register a flat lookup table of ``n_terminals**arity`` entries; returns its key."""
        table = [int(v) for v in table]
        if len(table) != self.n_terminals**arity:
            raise ValueError("table size does not match arity")
        if table and (min(table) < 0 or max(table) >= self.n_terminals):
            raise ValueError("table values must be terminals")
        self._tables.append((arity, table))
        return len(self._tables) - 1

    def level(self, u):
        return self._level[u]

    def children(self, u):
        return self._kids[u]

    def node(self, level, kids):
        kids = tuple(kids)
        first = kids[0]
        for k in kids:
            if k != first:
                break
        else:
            return first
        key = (level, kids)
        u = self._unique.get(key)
        if u is None:
            u = len(self._level)
            self._level.append(level)
            self._kids.append(kids)
            self._unique[key] = u
        return u

    def literal(self, level, values):
        """The function of variable ``level`` sending domain value ``i`` to ``values[i]``."""
        if len(values) != self.domains[level]:
            raise ValueError("literal needs one value per domain element")
        return self.node(level, values)

    def apply(self, key, args):
        args = tuple(args)
        memo_key = (key,) + args
        r = self._memo.get(memo_key)
        if r is not None:
            return r
        lv = self._level
        top = min(lv[a] for a in args)
        if top == self.depth:
            arity, table = self._tables[key]
            idx = 0
            t = self.n_terminals
            for a in args:
                idx = idx * t + a
            r = table[idx]
        else:
            kids_of = self._kids
            kids = []
            for v in range(self.domains[top]):
                sub = tuple(kids_of[a][v] if lv[a] == top else a for a in args)
                kids.append(self.apply(key, sub))
            r = self.node(top, kids)
        self._memo[memo_key] = r
        return r

    def evaluate(self, u, assignment):
        while self._level[u] != self.depth:
            u = self._kids[u][assignment[self._level[u]]]
        return u

    def witness(self, u):
        """Lexicographically least assignment on which ``u`` is nonzero, or None."""
        if u == 0:
            return None
        path = [0] * self.depth
        while self._level[u] != self.depth:
            lev = self._level[u]
            for v, k in enumerate(self._kids[u]):
                if k != 0:
                    path[lev] = v
                    u = k
                    break
        return path

    def count_nonzero(self, u):
        """Number of full assignments on which ``u`` is nonzero."""
        cache = {}

        def go(w, lev):
            # assignments to levels lev..depth-1
            if self._level[w] == self.depth:
                if w == 0:
                    return 0
                total = 1
                for d in self.domains[lev:]:
                    total *= d
                return total
            key = (w, lev)
            if key in cache:
                return cache[key]
            wl = self._level[w]
            skip = 1
            for d in self.domains[lev:wl]:
                skip *= d
            c = sum(go(k, wl + 1) for k in self._kids[w]) * skip
            cache[key] = c
            return c

        return go(u, 0)
