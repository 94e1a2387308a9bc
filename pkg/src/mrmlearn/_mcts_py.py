"""Pure-Python UCT search over a flattened MDP.

Mirrors ``_mcts.pyx`` operation for operation (same generator, same float
arithmetic) so both backends return identical actions for identical seeds.
"""

import math

MASK = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
INV53 = 1.0 / 9007199254740992.0


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed):
        self.state = seed & MASK

    def next64(self):
        self.state = (self.state + GOLDEN) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def random(self):
        return (self.next64() >> 11) * INV53


def mcts_search(ptr, succ, cum, lab, greedy, n_actions, root, target, n_iter,
                depth, c_uct, x_pen, y_rew, greedy_p, seed):
    ptr = list(ptr)
    succ = list(succ)
    cum = list(cum)
    lab = list(lab)
    greedy = list(greedy)
    A = n_actions
    rng = SplitMix64(seed)
    maxdeg = 1
    for i in range(len(ptr) - 1):
        maxdeg = max(maxdeg, ptr[i + 1] - ptr[i])

    cap = n_iter + 2
    node_state = [0] * cap
    node_visits = [0] * cap
    sa_n = [0] * (cap * A)
    sa_w = [0.0] * (cap * A)
    child = [-1] * (cap * A * maxdeg)
    node_state[0] = root
    n_nodes = 1
    path_node = [0] * (depth + 1)
    path_a = [0] * (depth + 1)
    path_r = [0.0] * (depth + 1)

    for _ in range(n_iter):
        node = 0
        s = root
        d = 0
        plen = 0
        terminal = False
        while d < depth:
            base = node * A
            a = -1
            for b in range(A):
                if ptr[s * A + b] < ptr[s * A + b + 1] and sa_n[base + b] == 0:
                    a = b
                    break
            if a < 0:
                best = -math.inf
                ln_n = math.log(node_visits[node])
                for b in range(A):
                    if ptr[s * A + b] < ptr[s * A + b + 1]:
                        n = sa_n[base + b]
                        val = sa_w[base + b] / n + c_uct * math.sqrt(ln_n / n)
                        if val > best:
                            best = val
                            a = b
            if a < 0:
                break
            lo = ptr[s * A + a]
            hi = ptr[s * A + a + 1]
            u = rng.random()
            k = lo
            while k < hi - 1 and u >= cum[k]:
                k += 1
            s2 = succ[k]
            label = lab[k]
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
                if greedy[s] >= 0 and rng.random() < greedy_p:
                    a = greedy[s]
                else:
                    nd = 0
                    for b in range(A):
                        if ptr[s * A + b] < ptr[s * A + b + 1]:
                            nd += 1
                    if nd == 0:
                        break
                    j = int(rng.random() * nd)
                    for b in range(A):
                        if ptr[s * A + b] < ptr[s * A + b + 1]:
                            if j == 0:
                                a = b
                                break
                            j -= 1
                lo = ptr[s * A + a]
                hi = ptr[s * A + a + 1]
                u = rng.random()
                k = lo
                while k < hi - 1 and u >= cum[k]:
                    k += 1
                label = lab[k]
                d += 1
                if label < 0:
                    g += -x_pen
                elif label == target:
                    g += y_rew
                    break
                else:
                    g += -y_rew
                s = succ[k]

        for i in range(plen - 1, -1, -1):
            g += path_r[i]
            n0 = path_node[i]
            ai = n0 * A + path_a[i]
            sa_n[ai] += 1
            sa_w[ai] += g
            node_visits[n0] += 1

    means = []
    best_a = -1
    best = -math.inf
    for b in range(A):
        if ptr[root * A + b] < ptr[root * A + b + 1] and sa_n[b] > 0:
            m = sa_w[b] / sa_n[b]
            means.append(m)
            if m > best:
                best = m
                best_a = b
        else:
            means.append(math.nan)
    if best_a < 0:
        for b in range(A):
            if ptr[root * A + b] < ptr[root * A + b + 1]:
                best_a = b
                break
    return best_a, means
