"""Shared fixtures and independent oracles for the test suite.

Everything here is deliberately naive: subset filters, joint enumerations,
Prufer sequences, textbook recurrences.  The point is that none of it shares
code paths with the package, so agreement is evidence rather than tautology.
"""

from __future__ import annotations

import heapq
import itertools
import math
import random

import numpy as np

from loopgas import (
    FactorGraph,
    GeneralWeights,
    LdgmWeights,
    LdpcWeights,
    MessageSet,
    apply_channel,
    attach_random_general_weights,
    build_factor_graph,
    sample_ldgm,
    sample_regular_bipartite,
)

# ---------------------------------------------------------------------------
# instance builders


def ldpc_instance(l: int, r: int, n: int, p: float, seed: int, chan_seed: int = 0) -> FactorGraph:
    """Regular parity-check instance with channel fields applied."""
    g = sample_regular_bipartite(l, r, n, seed=seed)
    return apply_channel(g, p, seed=chan_seed)


def ldgm_instance(l: int, r: int, n: int, p: float, seed: int, chan_seed: int = 0) -> FactorGraph:
    """Regular generator-matrix instance with channel fields applied."""
    g = sample_ldgm({l: 1.0}, {r: 1.0}, n, seed=seed)
    return apply_channel(g, p, seed=chan_seed)


def general_instance(l: int, r: int, n: int, beta: float, seed: int) -> FactorGraph:
    """Regular graph with random soft couplings of unit mass per check."""
    g = sample_regular_bipartite(l, r, n, seed=seed)
    g = build_factor_graph(
        g.n, g.m, g.edges, LdpcWeights(variable_fields=(0.0,) * g.n), meta=dict(g.meta)
    )
    return attach_random_general_weights(g, beta=beta, seed=seed)


def random_tree(n_vars: int, seed: int, kind: str = "ldpc") -> FactorGraph:
    """Random bipartite tree grown check by check from a single variable.

    Each new check attaches to one existing variable and at least one fresh
    variable, so every check has degree >= 2 and the factor graph is acyclic
    by construction.
    """
    rng = random.Random(seed)
    edges: list[tuple[int, int]] = []
    n = 1
    m = 0
    while n < n_vars:
        anchor = rng.randrange(n)
        fresh = rng.randint(1, min(3, n_vars - n))
        a = m
        m += 1
        edges.append((anchor, a))
        for _ in range(fresh):
            edges.append((n, a))
            n += 1
    return build_factor_graph(n, m, edges, _tree_weights(kind, n, m, rng))


def _tree_weights(kind: str, n: int, m: int, rng: random.Random):
    if kind == "ldpc":
        return LdpcWeights(variable_fields=tuple(rng.uniform(-1.0, 1.0) for _ in range(n)))
    if kind == "ldgm":
        return LdgmWeights(check_fields=tuple(rng.uniform(-1.0, 1.0) for _ in range(m)))
    raise ValueError(kind)


def random_general_tree(n_vars: int, seed: int, beta: float) -> FactorGraph:
    """Tree-shaped instance with random soft couplings."""
    g = random_tree(n_vars, seed, kind="ldpc")
    return attach_random_general_weights(g, beta=beta, seed=seed)


def random_messages(graph: FactorGraph, seed: int, scale: float = 0.5) -> MessageSet:
    """Arbitrary tanh-domain messages, uniform in (-scale, scale)."""
    rng = np.random.default_rng(seed)
    e = graph.edge_count
    return MessageSet(
        kind=graph.weights.kind,
        var_to_check=rng.uniform(-scale, scale, size=e),
        check_to_var=rng.uniform(-scale, scale, size=e),
    )


# ---------------------------------------------------------------------------
# subset-filter oracles for generalized loops and polymers


def oracle_loops(graph: FactorGraph) -> set[frozenset[int]]:
    """All dangling-free nonempty edge subsets, by filtering 2^|E|."""
    e = graph.edge_count
    if e > 16:
        raise ValueError("oracle only meant for |E| <= 16")
    out: set[frozenset[int]] = set()
    for bits in range(1, 1 << e):
        subset = [k for k in range(e) if bits >> k & 1]
        var_deg: dict[int, int] = {}
        check_deg: dict[int, int] = {}
        for k in subset:
            i, a = graph.edges[k]
            var_deg[i] = var_deg.get(i, 0) + 1
            check_deg[a] = check_deg.get(a, 0) + 1
        if all(d >= 2 for d in var_deg.values()) and all(
            d >= 2 for d in check_deg.values()
        ):
            out.add(frozenset(subset))
    return out


def _edge_components(graph: FactorGraph, subset: frozenset[int]) -> list[set[int]]:
    """Connected components of the subgraph, as sets of global node ids."""
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for k in subset:
        i, a = graph.edges[k]
        u, v = i, graph.n + a
        parent.setdefault(u, u)
        parent.setdefault(v, v)
        union(u, v)
    comps: dict[int, set[int]] = {}
    for node in parent:
        comps.setdefault(find(node), set()).add(node)
    return list(comps.values())


def oracle_polymers(graph: FactorGraph) -> set[frozenset[int]]:
    """Connected dangling-free subsets, from the loop oracle plus union-find."""
    return {
        s for s in oracle_loops(graph) if len(_edge_components(graph, s)) == 1
    }


def oracle_split(
    graph: FactorGraph, messages: MessageSet, lam: float, evaluator
) -> tuple[float, float]:
    """(z_small, r_large) by composing the loop oracle with components."""
    threshold = lam * graph.n
    small: list[float] = []
    large: list[float] = []
    for s in oracle_loops(graph):
        term = evaluator.value(tuple(sorted(s)))
        if any(len(c) >= threshold for c in _edge_components(graph, s)):
            large.append(term)
        else:
            small.append(term)
    return 1.0 + math.fsum(small), math.fsum(large)


# ---------------------------------------------------------------------------
# counting oracles


def catalan(t: int) -> int:
    c = [1] * (t + 1)
    for k in range(1, t + 1):
        c[k] = sum(c[j] * c[k - 1 - j] for j in range(k))
    return c[t]


def dary_tree_dp(d: int, t: int) -> int:
    """Rooted plane trees where every node has d ordered child slots."""
    b = [1] * (t + 1)
    for k in range(1, t + 1):
        total = 0
        for parts in itertools.product(range(k), repeat=d):
            if sum(parts) == k - 1:
                prod = 1
                for x in parts:
                    prod *= b[x]
                total += prod
        b[k] = total
    return b[t]


def prufer_tree_edges(seq: tuple[int, ...], m: int) -> frozenset[tuple[int, int]]:
    """Edges of the labeled tree with the given Prufer sequence on 0..m-1."""
    degree = [1] * m
    for x in seq:
        degree[x] += 1
    edges = []
    leaves = sorted(i for i in range(m) if degree[i] == 1)
    heapq.heapify(leaves)
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((min(u, v), max(u, v)))
    return frozenset(edges)


def all_labeled_trees(m: int) -> list[frozenset[tuple[int, int]]]:
    if m == 1:
        return [frozenset()]
    if m == 2:
        return [frozenset({(0, 1)})]
    return [
        prufer_tree_edges(seq, m)
        for seq in itertools.product(range(m), repeat=m - 2)
    ]


def spanning_tree_count(m: int, edges: frozenset[tuple[int, int]]) -> int:
    """Labeled spanning trees of the graph ([m], edges), by Prufer filter."""
    norm = {(min(u, v), max(u, v)) for u, v in edges}
    return sum(1 for t in all_labeled_trees(m) if t <= norm)


def oracle_mayer(m: int, edges: frozenset[tuple[int, int]]) -> int:
    """Signed connected spanning subgraph count, by direct subset sweep."""
    edge_list = sorted((min(u, v), max(u, v)) for u, v in edges)
    total = 0
    for bits in range(1 << len(edge_list)):
        subset = [edge_list[k] for k in range(len(edge_list)) if bits >> k & 1]
        parent = list(range(m))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in subset:
            parent[find(u)] = find(v)
        if len({find(x) for x in range(m)}) == 1:
            total += (-1) ** len(subset)
    return total


# ---------------------------------------------------------------------------
# independent log partition function


def oracle_log_z(graph: FactorGraph) -> float:
    """ln Z by plain configuration sweep in pure Python.

    Same statistical models as the package brute force, written without
    numpy or shared helpers: spins s_i = (-1)^{x_i}, hard parities for
    ldpc, field-on-parity for ldgm, exponential couplings for general.
    """
    n = graph.n
    if n > 20:
        raise ValueError("oracle only meant for n <= 20")
    masks = []
    for a in range(graph.m):
        mask = 0
        for i in graph.check_neighbors(a):
            mask |= 1 << i
        masks.append(mask)
    w = graph.weights
    weights: list[float] = []
    for x in range(1 << n):
        if w.kind == "ldpc":
            if any(bin(x & mask).count("1") & 1 for mask in masks):
                continue
            log_w = sum(
                h * (1.0 - 2.0 * (x >> i & 1))
                for i, h in enumerate(w.variable_fields)
            )
        elif w.kind == "ldgm":
            log_w = sum(
                h * (1.0 - 2.0 * (bin(x & mask).count("1") & 1))
                for h, mask in zip(w.check_fields, masks)
            )
        else:
            log_w = 0.0
            for a in range(graph.m):
                for subset, j in w.couplings[a]:
                    sign = 1.0
                    for i in subset:
                        if x >> i & 1:
                            sign = -sign
                    log_w += w.beta * j * sign
        weights.append(log_w)
    peak = max(weights)
    return peak + math.log(math.fsum(math.exp(v - peak) for v in weights))


# ---------------------------------------------------------------------------
# joint-enumeration conditional entropy oracles

LN2 = math.log(2.0)


def _xlogx(x: float) -> float:
    return 0.0 if x <= 0.0 else x * math.log(x)


def entropy_oracle_ldgm(graph: FactorGraph, p: float) -> float:
    """H(U|Y)/n by enumerating every message and channel output jointly.

    The graph is the bare structure; only its edges matter.  Information
    bits u index the variables, each check emits the parity of its
    neighborhood, and every emitted bit crosses an independent flip-p
    channel.
    """
    n, m = graph.n, graph.m
    masks = []
    for a in range(m):
        mask = 0
        for i in graph.check_neighbors(a):
            mask |= 1 << i
        masks.append(mask)
    p_y = [0.0] * (1 << m)
    h_uy = 0.0
    for u in range(1 << n):
        code = 0
        for a in range(m):
            if bin(u & masks[a]).count("1") & 1:
                code |= 1 << a
        for y in range(1 << m):
            flips = bin(code ^ y).count("1")
            prob = (p**flips) * ((1.0 - p) ** (m - flips)) / (1 << n)
            p_y[y] += prob
            h_uy -= _xlogx(prob)
    h_y = -math.fsum(_xlogx(q) for q in p_y)
    return (h_uy - h_y) / n


def entropy_oracle_ldpc(graph: FactorGraph, p: float) -> float:
    """H(X|Y)/n by enumerating codewords and channel outputs jointly."""
    n, m = graph.n, graph.m
    masks = []
    for a in range(m):
        mask = 0
        for i in graph.check_neighbors(a):
            mask |= 1 << i
        masks.append(mask)
    codewords = [
        x
        for x in range(1 << n)
        if all(bin(x & mask).count("1") % 2 == 0 for mask in masks)
    ]
    k = len(codewords)
    p_y = [0.0] * (1 << n)
    h_xy = 0.0
    for x in codewords:
        for y in range(1 << n):
            flips = bin(x ^ y).count("1")
            prob = (p**flips) * ((1.0 - p) ** (n - flips)) / k
            p_y[y] += prob
            h_xy -= _xlogx(prob)
    h_y = -math.fsum(_xlogx(q) for q in p_y)
    return (h_xy - h_y) / n
