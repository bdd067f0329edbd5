"""Pure-Python kernels. Same signatures and results as the compiled ``_core``.

``bits`` is always a uint8 array of length sigma**k where a nonzero entry
marks a k-mer removed from the graph.
"""
from collections import deque

import numpy as np


def path_lengths(bits, sigma, k, lengths):
    """Kahn DP over D_k minus the marked k-mers.

    Fills ``lengths[u]`` with the vertex count of the longest path ending at
    u (0 for marked k-mers) and returns how many unmarked nodes were ordered.
    Fewer than the unmarked total means a cycle survives.
    """
    n = sigma**k
    t = sigma ** (k - 1)
    indeg = [0] * n
    for u in range(n):
        if bits[u]:
            continue
        base = (u % t) * sigma
        for a in range(sigma):
            if not bits[base + a]:
                indeg[base + a] += 1
    queue = deque(u for u in range(n) if not bits[u] and indeg[u] == 0)
    for u in range(n):
        lengths[u] = 0
    for u in queue:
        lengths[u] = 1
    done = 0
    while queue:
        u = queue.popleft()
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
                queue.append(v)
    return done


def find_cycle(bits, sigma, k):
    """Iterative three-colour DFS; returns one cycle avoiding marked k-mers or None."""
    n = sigma**k
    t = sigma ** (k - 1)
    color = bytearray(n)  # 0 white, 1 on stack, 2 finished
    for root in range(n):
        if bits[root] or color[root]:
            continue
        stack = [root]
        edge = [0]
        color[root] = 1
        while stack:
            u = stack[-1]
            a = edge[-1]
            if a == sigma:
                color[u] = 2
                stack.pop()
                edge.pop()
                continue
            edge[-1] = a + 1
            v = (u % t) * sigma + a
            if bits[v]:
                continue
            if color[v] == 1:
                return stack[stack.index(v):]
            if color[v] == 0:
                color[v] = 1
                stack.append(v)
                edge.append(0)
    return None


def reachable(bits, sigma, k, start, forward, out):
    """Mark in ``out`` every unmarked node reachable from ``start`` (inclusive)."""
    t = sigma ** (k - 1)
    out[:] = 0
    out[start] = 1
    todo = [start]
    while todo:
        u = todo.pop()
        for a in range(sigma):
            v = (u % t) * sigma + a if forward else a * t + u // sigma
            if not bits[v] and not out[v]:
                out[v] = 1
                todo.append(v)


def enumerate_mds(sigma, k, classes):
    """Backtracking over one-choice-per-class assignments.

    ``classes`` lists the k-mers of each rotation class in the order they are
    tried. A partial assignment is pruned as soon as the nodes released so
    far (everything in assigned classes except the chosen k-mers) contain a
    cycle. Returns a list of tuples of chosen k-mers aligned with ``classes``.
    """
    n = sigma**k
    t = sigma ** (k - 1)
    avail = bytearray(n)
    results = []
    chosen = []

    def cycle_through(fresh):
        color = {}
        for root in fresh:
            if color.get(root):
                continue
            color[root] = 1
            stack = [root]
            edge = [0]
            while stack:
                u = stack[-1]
                a = edge[-1]
                if a == sigma:
                    color[u] = 2
                    stack.pop()
                    edge.pop()
                    continue
                edge[-1] = a + 1
                v = (u % t) * sigma + a
                if not avail[v]:
                    continue
                c = color.get(v, 0)
                if c == 1:
                    return True
                if c == 0:
                    color[v] = 1
                    stack.append(v)
                    edge.append(0)
        return False

    def descend(i):
        if i == len(classes):
            results.append(tuple(chosen))
            return
        members = classes[i]
        for m in members:
            fresh = [u for u in members if u != m]
            for u in fresh:
                avail[u] = 1
            if not fresh or not cycle_through(fresh):
                chosen.append(m)
                descend(i + 1)
                chosen.pop()
            for u in fresh:
                avail[u] = 0

    descend(0)
    return results


def valid_f_moves(bits, sigma, k):
    """All (k-1)-mers f whose left companions are all marked."""
    t = sigma ** (k - 1)
    grid = np.asarray(bits, dtype=np.uint8).reshape(sigma, t)
    return [int(f) for f in np.flatnonzero(grid.all(axis=0))]
