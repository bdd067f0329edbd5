# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring ``_pycore`` one for one."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free
from libc.string cimport memset

cnp.import_array()

ctypedef long long i64


def path_lengths(const unsigned char[::1] bits, i64 sigma, int k, int[::1] lengths):
    cdef i64 n = sigma ** k
    cdef i64 t = n // sigma
    cdef i64 u, v, a, base, head = 0, tail = 0, done = 0
    cdef int nxt
    cdef int *indeg = <int *> malloc(n * sizeof(int))
    cdef i64 *queue = <i64 *> malloc(n * sizeof(i64))
    if indeg == NULL or queue == NULL:
        free(indeg); free(queue)
        raise MemoryError()
    try:
        memset(indeg, 0, n * sizeof(int))
        for u in range(n):
            lengths[u] = 0
            if bits[u]:
                continue
            base = (u % t) * sigma
            for a in range(sigma):
                if not bits[base + a]:
                    indeg[base + a] += 1
        for u in range(n):
            if not bits[u] and indeg[u] == 0:
                queue[tail] = u
                tail += 1
                lengths[u] = 1
        while head < tail:
            u = queue[head]
            head += 1
            done += 1
            nxt = lengths[u] + 1
            base = (u % t) * sigma
            for a in range(sigma):
                v = base + a
                if bits[v]:
                    continue
                if nxt > lengths[v]:
                    lengths[v] = nxt
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue[tail] = v
                    tail += 1
        return done
    finally:
        free(indeg)
        free(queue)


def find_cycle(const unsigned char[::1] bits, i64 sigma, int k):
    cdef i64 n = sigma ** k
    cdef i64 t = n // sigma
    cdef i64 root, u, v, a, top, j
    cdef unsigned char *color = <unsigned char *> malloc(n)
    cdef i64 *stack = <i64 *> malloc(n * sizeof(i64))
    cdef i64 *edge = <i64 *> malloc(n * sizeof(i64))
    if color == NULL or stack == NULL or edge == NULL:
        free(color); free(stack); free(edge)
        raise MemoryError()
    try:
        memset(color, 0, n)
        for root in range(n):
            if bits[root] or color[root]:
                continue
            top = 0
            stack[0] = root
            edge[0] = 0
            color[root] = 1
            while top >= 0:
                u = stack[top]
                a = edge[top]
                if a == sigma:
                    color[u] = 2
                    top -= 1
                    continue
                edge[top] = a + 1
                v = (u % t) * sigma + a
                if bits[v]:
                    continue
                if color[v] == 1:
                    j = top
                    while stack[j] != v:
                        j -= 1
                    return [stack[i] for i in range(j, top + 1)]
                if color[v] == 0:
                    color[v] = 1
                    top += 1
                    stack[top] = v
                    edge[top] = 0
        return None
    finally:
        free(color)
        free(stack)
        free(edge)


def reachable(const unsigned char[::1] bits, i64 sigma, int k, i64 start, bint forward,
              unsigned char[::1] out):
    cdef i64 n = sigma ** k
    cdef i64 t = n // sigma
    cdef i64 u, v, a, top = 0
    cdef i64 *todo = <i64 *> malloc(n * sizeof(i64))
    if todo == NULL:
        raise MemoryError()
    try:
        out[:] = 0
        out[start] = 1
        todo[0] = start
        top = 1
        while top > 0:
            top -= 1
            u = todo[top]
            for a in range(sigma):
                if forward:
                    v = (u % t) * sigma + a
                else:
                    v = a * t + u // sigma
                if not bits[v] and not out[v]:
                    out[v] = 1
                    todo[top] = v
                    top += 1
    finally:
        free(todo)


cdef bint _cycle_through(unsigned char *avail, i64 *fresh, int nfresh, i64 sigma, i64 t,
                         i64 *stamp, i64 cur, unsigned char *gray, i64 *stack, i64 *edge):
    # stamp[u] == cur marks u as visited in this call; gray[u] marks "on stack"
    cdef int r
    cdef i64 root, u, v, a, top
    for r in range(nfresh):
        root = fresh[r]
        if stamp[root] == cur:
            continue
        stamp[root] = cur
        gray[root] = 1
        top = 0
        stack[0] = root
        edge[0] = 0
        while top >= 0:
            u = stack[top]
            a = edge[top]
            if a == sigma:
                gray[u] = 0
                top -= 1
                continue
            edge[top] = a + 1
            v = (u % t) * sigma + a
            if not avail[v]:
                continue
            if stamp[v] == cur:
                if gray[v]:
                    # unwind gray flags before reporting
                    while top >= 0:
                        gray[stack[top]] = 0
                        top -= 1
                    return True
                continue
            stamp[v] = cur
            gray[v] = 1
            top += 1
            stack[top] = v
            edge[top] = 0
    return False


def enumerate_mds(i64 sigma, int k, classes):
    cdef i64 n = sigma ** k
    cdef i64 t = n // sigma
    cdef int nclass = len(classes)
    cdef int i, j, c, size, nfresh
    cdef i64 cur = 0, m
    offsets_py = [0]
    flat_py = []
    for members in classes:
        flat_py.extend(members)
        offsets_py.append(len(flat_py))
    cdef i64[::1] flat = np.asarray(flat_py, dtype=np.int64)
    cdef i64[::1] offsets = np.asarray(offsets_py, dtype=np.int64)
    cdef i64[::1] choice = np.full(nclass + 1, -1, dtype=np.int64)
    cdef i64[::1] chosen = np.zeros(nclass + 1, dtype=np.int64)
    cdef unsigned char *avail = <unsigned char *> malloc(n)
    cdef unsigned char *gray = <unsigned char *> malloc(n)
    cdef i64 *stamp = <i64 *> malloc(n * sizeof(i64))
    cdef i64 *stack = <i64 *> malloc(n * sizeof(i64))
    cdef i64 *edge = <i64 *> malloc(n * sizeof(i64))
    cdef i64 *fresh = <i64 *> malloc((k + 1) * sizeof(i64))
    if (avail == NULL or gray == NULL or stamp == NULL or stack == NULL
            or edge == NULL or fresh == NULL):
        free(avail); free(gray); free(stamp); free(stack); free(edge); free(fresh)
        raise MemoryError()
    results = []
    try:
        memset(avail, 0, n)
        memset(gray, 0, n)
        for j in range(n):
            stamp[j] = -1
        if nclass == 0:
            return [()]
        i = 0
        choice[0] = -1
        while i >= 0:
            if choice[i] >= 0:
                for j in range(offsets[i], offsets[i + 1]):
                    avail[flat[j]] = 0
            choice[i] += 1
            size = offsets[i + 1] - offsets[i]
            if choice[i] >= size:
                choice[i] = -1
                i -= 1
                continue
            m = flat[offsets[i] + choice[i]]
            nfresh = 0
            for j in range(offsets[i], offsets[i + 1]):
                if flat[j] != m:
                    avail[flat[j]] = 1
                    fresh[nfresh] = flat[j]
                    nfresh += 1
            cur += 1
            if nfresh and _cycle_through(avail, fresh, nfresh, sigma, t, stamp, cur,
                                         gray, stack, edge):
                continue
            chosen[i] = m
            if i == nclass - 1:
                results.append(tuple([chosen[c] for c in range(nclass)]))
                continue
            i += 1
            choice[i] = -1
        return results
    finally:
        free(avail); free(gray); free(stamp); free(stack); free(edge); free(fresh)


def valid_f_moves(const unsigned char[::1] bits, i64 sigma, int k):
    cdef i64 t = sigma ** (k - 1)
    cdef i64 f, a
    cdef bint ok
    out = []
    for f in range(t):
        ok = True
        for a in range(sigma):
            if not bits[a * t + f]:
                ok = False
                break
        if ok:
            out.append(f)
    return out
