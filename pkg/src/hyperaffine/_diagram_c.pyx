# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled multi-valued decision diagrams; same interface as ``_diagram_py``.

Nodes live in flat vectors (level, offset into a shared child array).  The
unique table and the apply memo are open-addressing hash tables keyed on
integer tuples, so the recursive apply never touches Python objects.
"""

from libc.stdint cimport int64_t, uint64_t
from libcpp.vector cimport vector

DEF MAX_ARGS = 8


cdef inline uint64_t _mix(uint64_t h, uint64_t v) nogil:
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)
    return h


cdef class DiagramManager:
    cdef public tuple domains
    cdef public int n_terminals
    cdef public int depth
    cdef vector[int] _dom
    cdef vector[int] _level
    cdef vector[int64_t] _off
    cdef vector[int] _kids
    # unique table: slots hold node ids or -1
    cdef vector[int] _uslots
    cdef int64_t _ucount
    # memo: entries of stride MAX_ARGS + 3 (key, nargs, args..., result); slots index entries
    cdef vector[int] _mentries
    cdef vector[int64_t] _mslots
    cdef int64_t _mcount
    # tables
    cdef vector[int] _tarity
    cdef vector[int64_t] _toff
    cdef vector[int] _tdata

    def __init__(self, domains, n_terminals):
        self.domains = tuple(int(d) for d in domains)
        if any(d < 1 for d in self.domains):
            raise ValueError("variable domains must be nonempty")
        self.n_terminals = int(n_terminals)
        self.depth = len(self.domains)
        for d in self.domains:
            self._dom.push_back(d)
        cdef int i
        for i in range(self.n_terminals):
            self._level.push_back(self.depth)
            self._off.push_back(0)
        self._uslots.assign(1024, -1)
        self._ucount = 0
        self._mslots.assign(1 << 14, -1)
        self._mcount = 0

    @property
    def node_count(self):
        return self._level.size()

    def register(self, table, arity):
        table = [int(v) for v in table]
        if arity > MAX_ARGS:
            raise ValueError(f"arity above {MAX_ARGS} is not supported")
        if len(table) != self.n_terminals ** arity:
            raise ValueError("table size does not match arity")
        if table and (min(table) < 0 or max(table) >= self.n_terminals):
            raise ValueError("table values must be terminals")
        self._tarity.push_back(arity)
        self._toff.push_back(self._tdata.size())
        for v in table:
            self._tdata.push_back(v)
        return self._tarity.size() - 1

    def level(self, int u):
        return self._level[u]

    def children(self, int u):
        if self._level[u] == self.depth:
            return ()
        cdef int64_t off = self._off[u]
        cdef int d = self._dom[self._level[u]]
        return tuple(self._kids[off + i] for i in range(d))

    # unique table ------------------------------------------------------------------
    cdef uint64_t _uhash(self, int level, const int* kids, int d) nogil:
        cdef uint64_t h = <uint64_t>level * 0x100000001b3ULL
        cdef int i
        for i in range(d):
            h = _mix(h, <uint64_t>kids[i])
        return h

    cdef bint _usame(self, int u, int level, const int* kids, int d) nogil:
        if self._level[u] != level:
            return False
        cdef int64_t off = self._off[u]
        cdef int i
        for i in range(d):
            if self._kids[off + i] != kids[i]:
                return False
        return True

    cdef void _ugrow(self):
        cdef size_t n = self._uslots.size() * 2
        cdef vector[int] fresh
        fresh.assign(n, -1)
        cdef int u, lev, d
        cdef size_t s
        for u in range(self.n_terminals, <int>self._level.size()):
            lev = self._level[u]
            d = self._dom[lev]
            s = self._uhash(lev, &self._kids[self._off[u]], d) & (n - 1)
            while fresh[s] != -1:
                s = (s + 1) & (n - 1)
            fresh[s] = u
        self._uslots.swap(fresh)

    cdef int _node(self, int level, const int* kids) except -1:
        cdef int d = self._dom[level]
        cdef int i
        cdef bint same = True
        for i in range(1, d):
            if kids[i] != kids[0]:
                same = False
                break
        if same:
            return kids[0]
        if 2 * (self._ucount + 1) > <int64_t>self._uslots.size():
            self._ugrow()
        cdef size_t mask = self._uslots.size() - 1
        cdef size_t s = self._uhash(level, kids, d) & mask
        cdef int u
        while True:
            u = self._uslots[s]
            if u == -1:
                break
            if self._usame(u, level, kids, d):
                return u
            s = (s + 1) & mask
        u = self._level.size()
        self._level.push_back(level)
        self._off.push_back(self._kids.size())
        for i in range(d):
            self._kids.push_back(kids[i])
        self._uslots[s] = u
        self._ucount += 1
        return u

    def node(self, level, kids):
        kids = [int(k) for k in kids]
        if len(kids) != self._dom[level]:
            raise ValueError("one child per domain value is required")
        cdef vector[int] buf = kids
        return self._node(level, buf.data())

    def literal(self, level, values):
        if len(values) != self.domains[level]:
            raise ValueError("literal needs one value per domain element")
        return self.node(level, values)

    # apply -------------------------------------------------------------------------
    cdef uint64_t _mhash(self, int key, const int* args, int n) nogil:
        cdef uint64_t h = <uint64_t>key * 0x9e3779b97f4a7c15ULL + <uint64_t>n
        cdef int i
        for i in range(n):
            h = _mix(h, <uint64_t>args[i])
        return h

    cdef void _mgrow(self):
        cdef size_t n = self._mslots.size() * 2
        cdef vector[int64_t] fresh
        fresh.assign(n, -1)
        cdef int stride = MAX_ARGS + 3
        cdef int64_t e
        cdef size_t s
        for e in range(self._mcount):
            s = self._mhash(self._mentries[e * stride], &self._mentries[e * stride + 2],
                            self._mentries[e * stride + 1]) & (n - 1)
            while fresh[s] != -1:
                s = (s + 1) & (n - 1)
            fresh[s] = e
        self._mslots.swap(fresh)

    cdef int _apply(self, int key, int* args, int n) except -2:
        cdef int stride = MAX_ARGS + 3
        cdef size_t mask = self._mslots.size() - 1
        cdef size_t s = self._mhash(key, args, n) & mask
        cdef int64_t e
        cdef int i, j
        cdef bint hit
        while True:
            e = self._mslots[s]
            if e == -1:
                break
            if self._mentries[e * stride] == key and self._mentries[e * stride + 1] == n:
                hit = True
                for i in range(n):
                    if self._mentries[e * stride + 2 + i] != args[i]:
                        hit = False
                        break
                if hit:
                    return self._mentries[e * stride + 2 + MAX_ARGS]
            s = (s + 1) & mask

        cdef int top = self.depth
        for i in range(n):
            if self._level[args[i]] < top:
                top = self._level[args[i]]
        cdef int r
        cdef int64_t idx
        cdef int d
        cdef int sub[MAX_ARGS]
        cdef vector[int] kids
        if top == self.depth:
            idx = 0
            for i in range(n):
                idx = idx * self.n_terminals + args[i]
            r = self._tdata[self._toff[key] + idx]
        else:
            d = self._dom[top]
            kids.resize(d)
            for j in range(d):
                for i in range(n):
                    if self._level[args[i]] == top:
                        sub[i] = self._kids[self._off[args[i]] + j]
                    else:
                        sub[i] = args[i]
                kids[j] = self._apply(key, sub, n)
            r = self._node(top, kids.data())

        if 2 * (self._mcount + 1) > <int64_t>self._mslots.size():
            self._mgrow()
            mask = self._mslots.size() - 1
        s = self._mhash(key, args, n) & mask
        while self._mslots[s] != -1:
            s = (s + 1) & mask
        e = self._mcount
        self._mentries.resize((e + 1) * stride)
        self._mentries[e * stride] = key
        self._mentries[e * stride + 1] = n
        for i in range(n):
            self._mentries[e * stride + 2 + i] = args[i]
        self._mentries[e * stride + 2 + MAX_ARGS] = r
        self._mslots[s] = e
        self._mcount += 1
        return r

    def apply(self, int key, args):
        cdef int buf[MAX_ARGS]
        cdef int n = len(args)
        if key < 0 or key >= <int>self._tarity.size():
            raise KeyError(key)
        if n != self._tarity[key]:
            raise ValueError("argument count does not match the table arity")
        cdef int i
        for i in range(n):
            buf[i] = args[i]
        return self._apply(key, buf, n)

    # queries -----------------------------------------------------------------------
    def evaluate(self, int u, assignment):
        while self._level[u] != self.depth:
            u = self._kids[self._off[u] + assignment[self._level[u]]]
        return u

    def witness(self, int u):
        if u == 0:
            return None
        path = [0] * self.depth
        cdef int lev, v, k
        while self._level[u] != self.depth:
            lev = self._level[u]
            for v in range(self._dom[lev]):
                k = self._kids[self._off[u] + v]
                if k != 0:
                    path[lev] = v
                    u = k
                    break
        return path

    def count_nonzero(self, int u):
        cache = {}
        domains = self.domains
        depth = self.depth

        def go(int w, int lev):
            cdef int wl, v
            if self._level[w] == depth:
                if w == 0:
                    return 0
                total = 1
                for d in domains[lev:]:
                    total *= d
                return total
            key = (w, lev)
            if key in cache:
                return cache[key]
            wl = self._level[w]
            skip = 1
            for d in domains[lev:wl]:
                skip *= d
            c = 0
            for v in range(self._dom[wl]):
                c += go(self._kids[self._off[w] + v], wl + 1)
            c *= skip
            cache[key] = c
            return c

        return go(u, 0)
