# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled UCT search over a flattened MDP; see ``_mcts_py`` for the reference."""

from libc.math cimport log, sqrt, INFINITY, NAN
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free

import numpy as np


cdef inline uint64_t _next64(uint64_t* state) nogil:
    state[0] += <uint64_t>0x9E3779B97F4A7C15
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline double _random(uint64_t* state) nogil:
    return <double>(_next64(state) >> 11) * (1.0 / 9007199254740992.0)


def mcts_search(ptr_in, succ_in, cum_in, lab_in, greedy_in, int n_actions, int root,
                int target, int n_iter, int depth, double c_uct, double x_pen,
                double y_rew, double greedy_p, seed):
    cdef int64_t[::1] ptr = np.ascontiguousarray(ptr_in, dtype=np.int64)
    cdef int64_t[::1] succ = np.ascontiguousarray(succ_in, dtype=np.int64)
    cdef double[::1] cum = np.ascontiguousarray(cum_in, dtype=np.float64)
    cdef int64_t[::1] lab = np.ascontiguousarray(lab_in, dtype=np.int64)
    cdef int64_t[::1] greedy = np.ascontiguousarray(greedy_in, dtype=np.int64)
    cdef uint64_t rng = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef int A = n_actions
    cdef Py_ssize_t i, nptr = ptr.shape[0]
    cdef int64_t maxdeg = 1
    for i in range(nptr - 1):
        if ptr[i + 1] - ptr[i] > maxdeg:
            maxdeg = ptr[i + 1] - ptr[i]

    cdef int64_t cap = n_iter + 2
    cdef int64_t[::1] node_state = np.zeros(cap, dtype=np.int64)
    cdef int64_t[::1] node_visits = np.zeros(cap, dtype=np.int64)
    cdef int64_t[::1] sa_n = np.zeros(cap * A, dtype=np.int64)
    cdef double[::1] sa_w = np.zeros(cap * A, dtype=np.float64)
    cdef int64_t[::1] child = np.full(cap * A * maxdeg, -1, dtype=np.int64)
    cdef int64_t[::1] path_node = np.zeros(depth + 1, dtype=np.int64)
    cdef int64_t[::1] path_a = np.zeros(depth + 1, dtype=np.int64)
    cdef double[::1] path_r = np.zeros(depth + 1, dtype=np.float64)

    cdef int64_t n_nodes = 1, node, s, s2, lo, hi, k, c, ci, n0, ai, n
    cdef int it, d, plen, a, b, nd, j, label
    cdef bint terminal, term, expanded
    cdef double best, ln_n, val, u, r, g, m

    node_state[0] = root
    with nogil:
        for it in range(n_iter):
            node = 0
            s = root
            d = 0
            plen = 0
            terminal = False
            while d < depth:
                a = -1
                for b in range(A):
                    if ptr[s * A + b] < ptr[s * A + b + 1] and sa_n[node * A + b] == 0:
                        a = b
                        break
                if a < 0:
                    best = -INFINITY
                    ln_n = log(<double>node_visits[node])
                    for b in range(A):
                        if ptr[s * A + b] < ptr[s * A + b + 1]:
                            n = sa_n[node * A + b]
                            val = sa_w[node * A + b] / <double>n + c_uct * sqrt(ln_n / <double>n)
                            if val > best:
                                best = val
                                a = b
                if a < 0:
                    break
                lo = ptr[s * A + a]
                hi = ptr[s * A + a + 1]
                u = _random(&rng)
                k = lo
                while k < hi - 1 and u >= cum[k]:
                    k += 1
                s2 = succ[k]
                label = <int>lab[k]
                if label < 0:
                    r = -x_pen
                    term = False
                elif label == target:
                    r = y_rew
                    term = True
                else:
                    r = -y_rew
                    term = False
                path_node[plen] = node
                path_a[plen] = a
                path_r[plen] = r
                plen += 1
                d += 1
                ci = (node * A + a) * maxdeg + (k - lo)
                c = child[ci]
                expanded = False
                if c < 0:
                    c = n_nodes
                    n_nodes += 1
                    node_state[c] = s2
                    child[ci] = c
                    expanded = True
                node = c
                s = s2
                if term:
                    terminal = True
                    break
                if expanded:
                    break

            g = 0.0
            if not terminal:
                while d < depth:
                    a = -1
                    if greedy[s] >= 0 and _random(&rng) < greedy_p:
                        a = <int>greedy[s]
                    else:
                        nd = 0
                        for b in range(A):
                            if ptr[s * A + b] < ptr[s * A + b + 1]:
                                nd += 1
                        if nd == 0:
                            break
                        j = <int>(_random(&rng) * nd)
                        for b in range(A):
                            if ptr[s * A + b] < ptr[s * A + b + 1]:
                                if j == 0:
                                    a = b
                                    break
                                j -= 1
                    lo = ptr[s * A + a]
                    hi = ptr[s * A + a + 1]
                    u = _random(&rng)
                    k = lo
                    while k < hi - 1 and u >= cum[k]:
                        k += 1
                    label = <int>lab[k]
                    d += 1
                    if label < 0:
                        g += -x_pen
                    elif label == target:
                        g += y_rew
                        break
                    else:
                        g += -y_rew
                    s = succ[k]

            i = plen - 1
            while i >= 0:
                g += path_r[i]
                n0 = path_node[i]
                ai = n0 * A + path_a[i]
                sa_n[ai] += 1
                sa_w[ai] += g
                node_visits[n0] += 1
                i -= 1

    means = []
    cdef int best_a = -1
    best = -INFINITY
    for b in range(A):
        if ptr[root * A + b] < ptr[root * A + b + 1] and sa_n[b] > 0:
            m = sa_w[b] / <double>sa_n[b]
            means.append(m)
            if m > best:
                best = m
                best_a = b
        else:
            means.append(float("nan"))
    if best_a < 0:
        for b in range(A):
            if ptr[root * A + b] < ptr[root * A + b + 1]:
                best_a = b
                break
    return best_a, means
