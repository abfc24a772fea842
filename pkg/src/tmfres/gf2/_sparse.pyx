# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Sparse GF(2) elimination and bar-complex boundary rows.

Rows are sorted vectors of column indices; addition is a sorted symmetric
difference.
"""

from libcpp.vector cimport vector
from libcpp.algorithm cimport sort
from libc.stdint cimport int32_t, int64_t


cdef void _symdiff(vector[int32_t]& a, vector[int32_t]& b, vector[int32_t]& out) noexcept nogil:
    cdef size_t i = 0, j = 0, na = a.size(), nb = b.size()
    out.clear()
    while i < na and j < nb:
        if a[i] < b[j]:
            out.push_back(a[i]); i += 1
        elif b[j] < a[i]:
            out.push_back(b[j]); j += 1
        else:
            i += 1; j += 1
    while i < na:
        out.push_back(a[i]); i += 1
    while j < nb:
        out.push_back(b[j]); j += 1


cdef class _Eliminator:
    cdef vector[vector[int32_t]] stored
    cdef vector[int64_t] piv
    cdef vector[int32_t] buf
    cdef public Py_ssize_t rank

    def __cinit__(self, Py_ssize_t ncols):
        self.piv.assign(ncols, -1)
        self.rank = 0

    cdef void add(self, vector[int32_t]& row) noexcept nogil:
        cdef int32_t c
        cdef int64_t p
        while row.size():
            c = row[0]
            p = self.piv[c]
            if p < 0:
                self.piv[c] = self.stored.size()
                self.stored.push_back(row)
                self.rank += 1
                return
            _symdiff(row, self.stored[p], self.buf)
            row.swap(self.buf)

    def add_row(self, cols):
        cdef vector[int32_t] row
        for c in sorted(cols):
            row.push_back(c)
        self.add(row)


def sparse_rank(rows, Py_ssize_t ncols):
    """Rank of rows given as iterables of column indices (each column at most once)."""
    cdef vector[vector[int32_t]] data
    cdef vector[int32_t] row
    cdef size_t i
    for r in rows:
        row.clear()
        for c in sorted(r):
            row.push_back(c)
        data.push_back(row)
    return _rank_of(data, ncols)


cdef Py_ssize_t _rank_of(vector[vector[int32_t]]& data, Py_ssize_t ncols):
    # Pivot on the largest column and keep the natural row order: on bar
    # complexes this keeps fill-in far lower than smallest-column pivoting.
    cdef _Eliminator el = _Eliminator(ncols)
    cdef size_t i, j
    cdef vector[int32_t]* r
    with nogil:
        for i in range(data.size()):
            r = &data[i]
            for j in range(r.size()):
                r[0][j] = <int32_t>(ncols - 1 - r[0][j])
            sort(r.begin(), r.end())
            el.add(r[0])
    return el.rank


# --------------------------------------------------------------------------
# bar complex


cdef class BarKernel:
    """Cells [a1|...|as] m of a normalized bar complex, ranked lexicographically.

    letters: degrees of the augmentation-ideal basis (letter ids 0..L-1, sorted)
    prod: prod[a * L + b] = letter ids of the terms of a * b
    act: act[a * D + m] = module basis indices of a * m
    """
    cdef int L, D, T
    cdef vector[int] ldeg
    cdef vector[int] mdeg
    cdef vector[vector[int]] prod
    cdef vector[vector[int]] act
    cdef vector[int64_t] N        # N[s * (T+1) + d]
    cdef vector[int64_t] B        # B[(s * (T+1) + d) * (L+1) + l]

    def __cinit__(self, ldeg, mdeg, prod, act, int T):
        self.L = len(ldeg)
        self.D = len(mdeg)
        self.T = T
        for x in ldeg:
            self.ldeg.push_back(x)
        for x in mdeg:
            self.mdeg.push_back(x)
        cdef vector[int] v
        for p in prod:
            v.clear()
            for x in p:
                v.push_back(x)
            self.prod.push_back(v)
        for p in act:
            v.clear()
            for x in p:
                v.push_back(x)
            self.act.push_back(v)
        self._tables()

    cdef void _tables(self):
        cdef int T = self.T, L = self.L, s, d, l, k
        cdef int64_t acc
        self.N.assign((T + 2) * (T + 1), 0)
        self.N[0] = 1
        for s in range(1, T + 2):
            for d in range(T + 1):
                acc = 0
                for l in range(L):
                    k = d - self.ldeg[l]
                    if k >= 0:
                        acc += self.N[(s - 1) * (T + 1) + k]
                self.N[s * (T + 1) + d] = acc
        self.B.assign((T + 2) * (T + 1) * (L + 1), 0)
        for s in range(T + 2):
            for d in range(T + 1):
                acc = 0
                for l in range(L + 1):
                    self.B[(s * (T + 1) + d) * (L + 1) + l] = acc
                    if l < L:
                        k = d - self.ldeg[l]
                        if k >= 0:
                            acc += self.N[s * (T + 1) + k]

    def count(self, int s, int t):
        cdef int64_t total = 0
        cdef int m
        for m in range(self.D):
            if 0 <= t - self.mdeg[m] <= self.T:
                total += self.N[s * (self.T + 1) + t - self.mdeg[m]]
        return total

    cdef int64_t _offset(self, int s, int t, int m) noexcept nogil:
        cdef int64_t off = 0
        cdef int j, d
        for j in range(m):
            d = t - self.mdeg[j]
            if 0 <= d <= self.T:
                off += self.N[s * (self.T + 1) + d]
        return off

    cdef int64_t _rank(self, int* w, int s, int d) noexcept nogil:
        # lexicographic index of the s-word w of total degree d
        cdef int64_t r = 0
        cdef int i, rest = s
        for i in range(s):
            rest -= 1
            r += self.B[(rest * (self.T + 1) + d) * (self.L + 1) + w[i]]
            d -= self.ldeg[w[i]]
        return r

    def boundary_rank(self, int s, int t):
        """Rank of d: C_s -> C_{s-1} in internal degree t."""
        if s <= 0:
            return 0
        cdef int64_t ncols = self.count(s - 1, t)
        if ncols == 0 or self.count(s, t) == 0:
            return 0
        cdef vector[vector[int32_t]] rows
        cdef vector[int32_t] row
        cdef vector[int] w, w2
        cdef vector[int64_t] offs
        cdef int m, d, i, j, k, depth, c, a
        w.assign(s, 0)
        w2.assign(s, 0)
        for m in range(self.D):
            offs.push_back(self._offset(s - 1, t, m))
        with nogil:
            for m in range(self.D):
                d = t - self.mdeg[m]
                if d < 0 or d > self.T:
                    continue
                # enumerate s-words of degree d with an explicit stack
                depth = 0
                w[0] = -1
                while depth >= 0:
                    w[depth] += 1
                    if w[depth] >= self.L:
                        depth -= 1
                        continue
                    k = d
                    for i in range(depth + 1):
                        k -= self.ldeg[w[i]]
                    if k < 0:
                        # letters are sorted by degree, nothing larger fits
                        depth -= 1
                        continue
                    if depth < s - 1:
                        if self.N[(s - 1 - depth) * (self.T + 1) + k] == 0:
                            continue
                        depth += 1
                        w[depth] = -1
                        continue
                    if k != 0:
                        continue
                    # full word: build its boundary
                    row.clear()
                    for i in range(s - 1):
                        a = w[i] * self.L + w[i + 1]
                        for c in self.prod[a]:
                            for j in range(i):
                                w2[j] = w[j]
                            w2[i] = c
                            for j in range(i + 2, s):
                                w2[j - 1] = w[j]
                            row.push_back(<int32_t>(offs[m] + self._rank(&w2[0], s - 1, d)))
                    a = w[s - 1] * self.D + m
                    for c in self.act[a]:
                        for j in range(s - 1):
                            w2[j] = w[j]
                        row.push_back(<int32_t>(offs[c] + self._rank(&w2[0], s - 1, t - self.mdeg[c])))
                    sort(row.begin(), row.end())
                    # cancel repeated entries in pairs
                    j = 0
                    i = 0
                    while i < <int>row.size():
                        if i + 1 < <int>row.size() and row[i] == row[i + 1]:
                            i += 2
                            continue
                        row[j] = row[i]
                        j += 1
                        i += 1
                    row.resize(j)
                    if row.size():
                        rows.push_back(row)
        return _rank_of(rows, ncols)
