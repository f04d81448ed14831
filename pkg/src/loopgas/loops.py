"""Generalized loops, their activities, and the loop-corrected partition sum.

The partition function factorizes as Z = exp(n f_bethe) * sum_g K(g), where g
runs over all subsets of edges and K(g) is a product of one factor per touched
check and variable.  The factors are built from an exact per-edge resolution
of the identity, so the full-subset expansion holds for arbitrary messages.
At a BP fixed point every subset containing a node of induced degree one drops
out, and the sum collapses onto generalized loops: subsets whose every touched
node has induced degree at least two.

Polymers are connected generalized loops; every generalized loop is a disjoint
union of polymers and its activity factorizes over them, which is what the
composition routine in loop_sum exploits.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .bp import MessageSet, solve_fixed_point
from .bethe import bethe_free_energy
from .errors import (
    BudgetExceededError,
    HypothesisNotMetError,
    LogDomainError,
    SingularDenominatorError,
    TooLargeError,
)
from .exact import brute_force_log_partition
from .graphs import (
    ExpanderCheckResult,
    ExpanderParams,
    FactorGraph,
    GeneralWeights,
    LdgmWeights,
    LdpcWeights,
)

FULL_EXPANSION_MAX_EDGES = 20
_DENOMINATOR_FLOOR = 1e-14


@dataclass(frozen=True)
class LoopSubgraph:
    """An edge subset together with its touched-node bookkeeping.

    node_mask packs variable i as bit i and check a as bit n + a; size is the
    number of touched nodes.
    """

    edge_ids: tuple[int, ...]
    node_mask: int
    size: int


@dataclass(frozen=True)
class Polymer:
    """A connected generalized loop; spanning_edges certify connectivity."""

    edge_ids: tuple[int, ...]
    node_mask: int
    size: int
    spanning_edges: tuple[int, ...]


@dataclass(frozen=True)
class ActivityReport:
    value: float
    var_factors: tuple[tuple[int, float], ...]
    check_factors: tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class LoopSumResult:
    total: float
    loop_count: int
    polymer_count: int


@dataclass(frozen=True)
class SplitResult:
    z_small: float
    r_large: float
    total: float
    small_term_count: int
    large_term_count: int


@dataclass(frozen=True)
class IdentityReport:
    residual: float
    ln_z_exact: float
    f_bethe: float
    ln_loop_sum: float
    loop_count: int
    polymer_count: int
    bp_residual: float
    max_factorization_error: float


@dataclass(frozen=True)
class FullExpansionReport:
    residual: float
    subset_count: int
    max_dangling_activity: float


def subgraph_from_edges(graph: FactorGraph, edge_ids: tuple[int, ...]) -> LoopSubgraph:
    """Wrap an arbitrary edge subset; no degree condition is imposed."""
    mask = 0
    for e in edge_ids:
        i, a = graph.edges[e]
        mask |= (1 << i) | (1 << (graph.n + a))
    return LoopSubgraph(
        edge_ids=tuple(sorted(edge_ids)),
        node_mask=mask,
        size=mask.bit_count(),
    )


# ---------------------------------------------------------------------------
# enumeration


def _check_block_options(
    graph: FactorGraph,
) -> list[list[tuple[tuple[int, ...], int, tuple[int, ...]]]]:
    """Per check: the locally admissible edge subsets (size != 1).

    Every option is (edge_ids, var_mask, var_list), ordered empty-first then
    by (size, ids), so the depth-first walk below is deterministic.
    """
    options = []
    for a in range(graph.m):
        eids = graph.check_edges[a]
        opts: list[tuple[tuple[int, ...], int, tuple[int, ...]]] = [((), 0, ())]
        for k in range(2, len(eids) + 1):
            for combo in itertools.combinations(eids, k):
                mask = 0
                for e in combo:
                    mask |= 1 << graph.edges[e][0]
                opts.append((combo, mask, tuple(graph.edges[e][0] for e in combo)))
        options.append(opts)
    return options


def _var_last_check(graph: FactorGraph) -> list[int]:
    last = [-1] * graph.n
    for i, a in graph.edges:
        last[i] = max(last[i], a)
    return last


def _walk_loops(
    graph: FactorGraph,
    max_edges: int,
    max_nodes: int,
    budget: int,
    emit,
) -> None:
    """Depth-first walk over per-check edge subsets with degree pruning.

    Checks are processed in index order; each picks one locally admissible
    subset.  A branch dies as soon as a variable whose checks are all decided
    has induced degree one, or the edge or node caps are exceeded.  emit is
    called at each admissible leaf with (chosen_per_check, var_deg).
    """
    options = _check_block_options(graph)
    var_last = _var_last_check(graph)
    # variables whose last incident check is a, to finalize after level a
    finalize: list[list[int]] = [[] for _ in range(graph.m)]
    for i, a in enumerate(var_last):
        if a >= 0:
            finalize[a].append(i)
    var_deg = [0] * graph.n
    chosen: list[tuple[tuple[int, ...], int, tuple[int, ...]]] = []
    visits = 0

    def dfs(a: int, n_edges: int, var_mask: int, n_checks: int) -> None:
        nonlocal visits
        visits += 1
        if visits > budget:
            raise BudgetExceededError(
                f"loop enumeration exceeded budget of {budget} visits"
            )
        if a == graph.m:
            if n_edges:
                emit(chosen, var_deg)
            return
        for opt in options[a]:
            eids, mask, var_list = opt
            ne = n_edges + len(eids)
            if ne > max_edges:
                continue
            grown = var_mask | mask
            n_nodes = grown.bit_count() + n_checks + (1 if eids else 0)
            if n_nodes > max_nodes:
                continue
            for i in var_list:
                var_deg[i] += 1
            if all(var_deg[i] != 1 for i in finalize[a]):
                chosen.append(opt)
                dfs(a + 1, ne, grown, n_checks + (1 if eids else 0))
                chosen.pop()
            for i in var_list:
                var_deg[i] -= 1

    dfs(0, 0, 0, 0)


def enumerate_generalized_loops(
    graph: FactorGraph,
    max_edges: int | None = None,
    max_nodes: int | None = None,
    budget: int = 10_000_000,
) -> list[LoopSubgraph]:
    """All nonempty edge subsets with every touched node of induced degree >= 2.

    The walk assigns whole per-check edge subsets (their sizes are never one),
    pruning on variable degrees as soon as a variable's last check is decided
    and on the edge and node caps.  Each visited state counts against the
    budget.
    """
    e_cap = graph.edge_count if max_edges is None else max_edges
    n_cap = graph.n + graph.m if max_nodes is None else max_nodes
    out: list[LoopSubgraph] = []
    n = graph.n

    def emit(chosen, var_deg) -> None:
        edge_ids: list[int] = []
        mask = 0
        for a, (eids, vmask, _vl) in enumerate(chosen):
            if eids:
                edge_ids.extend(eids)
                mask |= vmask | (1 << (n + a))
        out.append(
            LoopSubgraph(
                edge_ids=tuple(edge_ids),
                node_mask=mask,
                size=mask.bit_count(),
            )
        )

    _walk_loops(graph, e_cap, n_cap, budget, emit)
    out.sort(key=lambda g: (len(g.edge_ids), g.edge_ids))
    return out


def _spanning_edges(graph: FactorGraph, edge_ids: tuple[int, ...]) -> tuple[int, ...] | None:
    """Spanning-tree edge ids if the subgraph is connected, else None."""
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree: list[int] = []
    for e in edge_ids:
        i, a = graph.edges[e]
        u, v = i, graph.n + a
        for x in (u, v):
            if x not in parent:
                parent[x] = x
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            tree.append(e)
    roots = {find(x) for x in parent}
    if len(roots) != 1:
        return None
    return tuple(tree)


def enumerate_polymers(
    graph: FactorGraph,
    max_size: int | None = None,
    budget: int = 10_000_000,
) -> list[Polymer]:
    """Connected generalized loops with at most max_size touched nodes."""
    n_cap = graph.n + graph.m if max_size is None else max_size
    n = graph.n
    out: list[Polymer] = []

    def emit(chosen, var_deg) -> None:
        blocks = [
            (eids, vmask, a)
            for a, (eids, vmask, _vl) in enumerate(chosen)
            if eids
        ]
        # merge check blocks through shared variables; connected iff one pool
        pool = blocks[0][1]
        rest = blocks[1:]
        while rest:
            nxt = []
            progress = False
            for b in rest:
                if b[1] & pool:
                    pool |= b[1]
                    progress = True
                else:
                    nxt.append(b)
            if not progress:
                return
            rest = nxt
        edge_ids = tuple(e for eids, _m, _a in blocks for e in eids)
        mask = pool
        for _eids, _m, a in blocks:
            mask |= 1 << (n + a)
        tree = _spanning_edges(graph, edge_ids)
        assert tree is not None
        out.append(
            Polymer(
                edge_ids=edge_ids,
                node_mask=mask,
                size=mask.bit_count(),
                spanning_edges=tree,
            )
        )

    _walk_loops(graph, graph.edge_count, n_cap, budget, emit)
    out.sort(key=lambda g: (len(g.edge_ids), g.edge_ids))
    return out


# ---------------------------------------------------------------------------
# activities


class ActivityEvaluator:
    """Evaluates touched-node factors for one (graph, messages) pair.

    Precomputes everything reusable across subsets so that sweeping many
    polymers or subsets stays cheap.
    """

    def __init__(self, graph: FactorGraph, messages: MessageSet) -> None:
        self.graph = graph
        self.t = [float(x) for x in messages.var_to_check]
        self.that = [float(x) for x in messages.check_to_var]
        w = graph.weights
        self.kind = w.kind
        if isinstance(w, LdpcWeights):
            self.exp_h = [math.exp(h) for h in w.variable_fields]
            self.exp_mh = [math.exp(-h) for h in w.variable_fields]
        else:
            self.exp_h = [1.0] * graph.n
            self.exp_mh = [1.0] * graph.n
        if isinstance(w, LdgmWeights):
            self.tanh_field = [math.tanh(h) for h in w.check_fields]
        else:
            self.tanh_field = []
        if isinstance(w, GeneralWeights):
            self.tables = []
            for a in range(graph.m):
                hood = graph.check_neighbors(a)
                pos = {i: k for k, i in enumerate(hood)}
                self.tables.append(
                    [
                        (sum(1 << pos[i] for i in subset), w.beta * j)
                        for subset, j in w.couplings[a]
                    ]
                )
        else:
            self.tables = []

    def check_factor(self, a: int, g_edges: frozenset[int] | set[int]) -> float:
        graph = self.graph
        t = self.t
        that = self.that
        eids = graph.check_edges[a]
        d = 0
        if self.kind != "general":
            out_prod = 1.0  # product of t over edges not in g
            in_that = 1.0  # product of t_hat over edges in g
            in_t = 1.0  # product of t over edges in g
            for e in eids:
                if e in g_edges:
                    d += 1
                    in_that *= that[e]
                    in_t *= t[e]
                else:
                    out_prod *= t[e]
            sign = -1.0 if d % 2 else 1.0
            if self.kind == "ldpc":
                num = out_prod + sign * in_that
                den = 1.0 + out_prod * in_t
            else:
                th = self.tanh_field[a]
                num = sign * in_that + th * out_prod
                den = 1.0 + th * out_prod * in_t
        else:
            dloc = len(eids)
            tv = [t[e] for e in eids]
            hv = [that[e] for e in eids]
            ing = [e in g_edges for e in eids]
            terms = self.tables[a]
            num = 0.0
            den = 0.0
            for cfg in range(1 << dloc):
                log_psi = 0.0
                for mask, bj in terms:
                    log_psi += bj * (1.0 - 2.0 * ((cfg & mask).bit_count() & 1))
                psi = math.exp(log_psi)
                wn = psi
                wd = psi
                for k in range(dloc):
                    s = 1.0 - 2.0 * ((cfg >> k) & 1)
                    wd *= (1.0 + s * tv[k]) / 2.0
                    wn *= (s - hv[k]) / 2.0 if ing[k] else (1.0 + s * tv[k]) / 2.0
                num += wn
                den += wd
        if abs(den) < _DENOMINATOR_FLOOR * max(1.0, abs(num)):
            raise SingularDenominatorError(
                f"check {a} normalization {den} is numerically singular"
            )
        return num / den

    def var_factor(self, i: int, g_edges: frozenset[int] | set[int]) -> float:
        t = self.t
        that = self.that
        up = self.exp_h[i]
        dn = self.exp_mh[i]
        num_up = up
        num_dn = dn
        d = 0
        for e in self.graph.var_edges[i]:
            he = that[e]
            up_f = 1.0 + he
            dn_f = 1.0 - he
            if e in g_edges:
                d += 1
                te = t[e]
                num_up *= 1.0 - te
                num_dn *= 1.0 + te
            else:
                num_up *= up_f
                num_dn *= dn_f
            up *= up_f
            dn *= dn_f
        den = up + dn
        sign = -1.0 if d % 2 else 1.0
        num = num_up + sign * num_dn
        if abs(den) < _DENOMINATOR_FLOOR * max(1.0, abs(num)):
            raise SingularDenominatorError(
                f"variable {i} normalization {den} is numerically singular"
            )
        return num / den

    def touched(self, edge_ids: tuple[int, ...]) -> tuple[list[int], list[int]]:
        seen_v: set[int] = set()
        seen_c: set[int] = set()
        for e in edge_ids:
            i, a = self.graph.edges[e]
            seen_v.add(i)
            seen_c.add(a)
        return sorted(seen_v), sorted(seen_c)

    def value(self, edge_ids: tuple[int, ...]) -> float:
        g_edges = set(edge_ids)
        tv, tc = self.touched(edge_ids)
        out = 1.0
        for i in tv:
            out *= self.var_factor(i, g_edges)
        for a in tc:
            out *= self.check_factor(a, g_edges)
        return out


def activity(
    graph: FactorGraph,
    messages: MessageSet,
    subgraph: LoopSubgraph | Polymer,
    evaluator: ActivityEvaluator | None = None,
) -> ActivityReport:
    """Product of touched-node factors for an edge subset.

    Exact for arbitrary messages and arbitrary subsets; untouched nodes
    contribute a factor of one and are omitted from the report.  Pass a
    prebuilt evaluator when sweeping many subsets of one instance.
    """
    ev = evaluator if evaluator is not None else ActivityEvaluator(graph, messages)
    g_edges = set(subgraph.edge_ids)
    tv, tc = ev.touched(subgraph.edge_ids)
    var_factors = tuple((i, ev.var_factor(i, g_edges)) for i in tv)
    check_factors = tuple((a, ev.check_factor(a, g_edges)) for a in tc)
    value = 1.0
    for _, v in var_factors:
        value *= v
    for _, v in check_factors:
        value *= v
    return ActivityReport(
        value=value, var_factors=var_factors, check_factors=check_factors
    )


# ---------------------------------------------------------------------------
# loop sums


def _pool_connected(blocks: list[int]) -> bool:
    """Whether the var masks of the chosen blocks merge into one pool."""
    pool = blocks[0]
    rest = blocks[1:]
    while rest:
        nxt = []
        progress = False
        for b in rest:
            if b & pool:
                pool |= b
                progress = True
            else:
                nxt.append(b)
        if not progress:
            return False
        rest = nxt
    return True


def _pool_components(blocks: list[int]) -> list[tuple[int, int]]:
    """Connected components of the chosen blocks: (var mask, block count)."""
    comps: list[tuple[int, int]] = []
    rest = list(blocks)
    while rest:
        pool = rest.pop()
        count = 1
        progress = True
        while progress:
            progress = False
            nxt = []
            for b in rest:
                if b & pool:
                    pool |= b
                    count += 1
                    progress = True
                else:
                    nxt.append(b)
            rest = nxt
        comps.append((pool, count))
    return comps


def _fused_walk(graph: FactorGraph, messages: MessageSet, budget: int, leaf) -> None:
    """Visit every generalized loop, calling leaf(activity, block var masks).

    The enumerator's walk repeated with the activity built up on the way
    down: each check contributes a factor depending only on its own
    included-edge subset, each variable a factor looked up by its included
    edges once its last check is decided.  One var mask per nonempty check
    block is handed to the leaf for connectivity work; the list is reused
    across calls and must not be retained.
    """
    ev = ActivityEvaluator(graph, messages)
    options = _check_block_options(graph)
    var_last = _var_last_check(graph)
    finalize: list[list[int]] = [[] for _ in range(graph.m)]
    for i, a in enumerate(var_last):
        if a >= 0:
            finalize[a].append(i)
    # precomputed factor tables
    var_pos: dict[int, tuple[int, int]] = {}
    for i, eids in enumerate(graph.var_edges):
        for k, e in enumerate(eids):
            var_pos[e] = (i, 1 << k)
    var_table: list[list[float]] = []
    for i, eids in enumerate(graph.var_edges):
        row = []
        for mask in range(1 << len(eids)):
            subset = {e for k, e in enumerate(eids) if (mask >> k) & 1}
            row.append(ev.var_factor(i, subset) if subset else 1.0)
        var_table.append(row)
    # per check: (factor, [(var, bit), ...], var_mask, nonempty)
    mapped: list[list[tuple[float, list[tuple[int, int]], int, bool]]] = []
    for a, opts in enumerate(options):
        rows = []
        for eids, vmask, _vl in opts:
            factor = ev.check_factor(a, set(eids)) if eids else 1.0
            rows.append((factor, [var_pos[e] for e in eids], vmask, bool(eids)))
        mapped.append(rows)

    var_inc = [0] * graph.n
    blocks: list[int] = []  # var masks of nonempty chosen blocks
    visits = 0
    m = graph.m

    def dfs(a: int, prod: float) -> None:
        nonlocal visits
        visits += 1
        if visits > budget:
            raise BudgetExceededError(
                f"loop sum exceeded budget of {budget} visits"
            )
        if a == m:
            if blocks:
                leaf(prod, blocks)
            return
        for factor, bits, vmask, nonempty in mapped[a]:
            for i, bit in bits:
                var_inc[i] ^= bit
            p2 = prod * factor
            dead = False
            for i in finalize[a]:
                mk = var_inc[i]
                if mk:
                    if mk.bit_count() == 1:
                        dead = True
                        break
                    p2 *= var_table[i][mk]
            if not dead:
                if nonempty:
                    blocks.append(vmask)
                    dfs(a + 1, p2)
                    blocks.pop()
                else:
                    dfs(a + 1, p2)
            for i, bit in bits:
                var_inc[i] ^= bit

    dfs(0, 1.0)


def loop_sum_direct(
    graph: FactorGraph,
    messages: MessageSet,
    budget: int = 10_000_000,
) -> LoopSumResult:
    """1 + sum of activities over all generalized loops, in one fused walk.

    Leaf terms are collected and fsummed, so the result matches summing
    per-loop activities without ever materializing the loops.  Connected
    leaves are counted to report how many of the loops are single polymers.
    """
    terms: list[float] = []
    state = {"polymers": 0}

    def leaf(prod: float, blocks: list[int]) -> None:
        terms.append(prod)
        if _pool_connected(blocks):
            state["polymers"] += 1

    _fused_walk(graph, messages, budget, leaf)
    return LoopSumResult(
        total=1.0 + math.fsum(terms),
        loop_count=len(terms),
        polymer_count=state["polymers"],
    )


def loop_sum(
    graph: FactorGraph,
    messages: MessageSet,
    polymers: list[Polymer] | None = None,
    budget: int = 10_000_000,
) -> LoopSumResult:
    """1 + sum of activities over all generalized loops.

    Works by composing pairwise node-disjoint polymers; the activity of a
    disjoint union is the product of the activities, so each composition term
    is one generalized loop.  Terms are accumulated exactly with fsum.  The
    composition route is the natural one when polymers are few; on graphs
    where most loops are already connected, loop_sum_direct is much faster.
    """
    if polymers is None:
        polymers = enumerate_polymers(graph, budget=budget)
    ev = ActivityEvaluator(graph, messages)
    acts = [ev.value(p.edge_ids) for p in polymers]
    masks = [p.node_mask for p in polymers]
    terms: list[float] = []
    count = 0

    def extend(start: int, mask: int, prod: float) -> None:
        nonlocal count
        for j in range(start, len(polymers)):
            if masks[j] & mask:
                continue
            count += 1
            if count > budget:
                raise BudgetExceededError(
                    f"loop composition exceeded budget of {budget} terms"
                )
            term = prod * acts[j]
            terms.append(term)
            extend(j + 1, mask | masks[j], term)

    extend(0, 0, 1.0)
    return LoopSumResult(
        total=1.0 + math.fsum(terms),
        loop_count=len(terms),
        polymer_count=len(polymers),
    )


def loop_sum_bruteforce(
    graph: FactorGraph,
    messages: MessageSet,
    budget: int = 10_000_000,
) -> LoopSumResult:
    """Same total as loop_sum but via direct loop enumeration; test oracle."""
    loops = enumerate_generalized_loops(graph, budget=budget)
    ev = ActivityEvaluator(graph, messages)
    terms = [ev.value(g.edge_ids) for g in loops]
    polymer_count = sum(
        1 for g in loops if _spanning_edges(graph, g.edge_ids) is not None
    )
    return LoopSumResult(
        total=1.0 + math.fsum(terms),
        loop_count=len(loops),
        polymer_count=polymer_count,
    )


def split_small_large(
    graph: FactorGraph,
    messages: MessageSet,
    lam: float,
    budget: int = 10_000_000,
) -> SplitResult:
    """Partition the loop sum by polymer size.

    Every generalized loop decomposes into disjoint polymers; a loop term is
    small when each of those polymers has size < lam * n.  z_small collects
    1 plus the small terms, r_large everything else, so z_small + r_large
    equals the loop-sum total.  Runs the same fused walk as loop_sum_direct,
    classifying each leaf by the connected components of its check blocks
    (component size = pooled variables plus merged checks).
    """
    threshold = lam * graph.n
    small_terms: list[float] = []
    large_terms: list[float] = []

    def leaf(prod: float, blocks: list[int]) -> None:
        for vmask, count in _pool_components(blocks):
            if vmask.bit_count() + count >= threshold:
                large_terms.append(prod)
                return
        small_terms.append(prod)

    _fused_walk(graph, messages, budget, leaf)
    z_small = 1.0 + math.fsum(small_terms)
    r_large = math.fsum(large_terms)
    return SplitResult(
        z_small=z_small,
        r_large=r_large,
        total=z_small + r_large,
        small_term_count=len(small_terms),
        large_term_count=len(large_terms),
    )


# ---------------------------------------------------------------------------
# end-to-end identity checks


def verify_loop_identity(
    graph: FactorGraph,
    damping: float = 0.0,
    tol: float = 1e-12,
    max_iter: int = 10_000,
    budget: int = 10_000_000,
    factorization_cap: int = 50,
    factorization_size_cap: int = 8,
) -> IdentityReport:
    """Check ln Z = n f_bethe + ln(1 + sum of loop activities) on one instance.

    Runs BP to a fixed point, sums the loop series with the fused walk and
    compares against the brute-force partition function.  A sample of
    disjoint unions of small polymers is re-evaluated as a single subset to
    confirm the activity factorizes over polymers.
    """
    bp = solve_fixed_point(graph, damping=damping, tol=tol, max_iter=max_iter)
    f = bethe_free_energy(graph, bp.messages).f_bethe
    ls = loop_sum_direct(graph, bp.messages, budget=budget)
    if ls.total <= 0.0:
        raise LogDomainError(f"loop-sum total {ls.total} is not positive")
    ln_loop = math.log(ls.total)
    ln_z = brute_force_log_partition(graph).log_z
    residual = abs(ln_z - graph.n * f - ln_loop)

    max_fact = 0.0
    checked = 0
    scanned = 0
    scan_cap = 400 * factorization_cap  # disjoint combos can be rare
    ev = ActivityEvaluator(graph, bp.messages)
    polymers = enumerate_polymers(
        graph, max_size=factorization_size_cap, budget=budget
    )
    acts = {p.edge_ids: ev.value(p.edge_ids) for p in polymers}
    for k in (2, 3):
        if checked >= factorization_cap or scanned >= scan_cap:
            break
        for combo in itertools.combinations(range(len(polymers)), k):
            scanned += 1
            if scanned >= scan_cap:
                break
            mask = 0
            ok = True
            for j in combo:
                if polymers[j].node_mask & mask:
                    ok = False
                    break
                mask |= polymers[j].node_mask
            if not ok:
                continue
            merged: tuple[int, ...] = tuple(
                sorted(e for j in combo for e in polymers[j].edge_ids)
            )
            direct = ev.value(merged)
            prod = 1.0
            for j in combo:
                prod *= acts[polymers[j].edge_ids]
            max_fact = max(max_fact, abs(direct - prod))
            checked += 1
            if checked >= factorization_cap:
                break
    return IdentityReport(
        residual=residual,
        ln_z_exact=ln_z,
        f_bethe=f,
        ln_loop_sum=ln_loop,
        loop_count=ls.loop_count,
        polymer_count=ls.polymer_count,
        bp_residual=bp.residual,
        max_factorization_error=max_fact,
    )


def tree_exactness_report(
    graph: FactorGraph,
    damping: float = 0.0,
    tol: float = 1e-12,
    max_iter: int = 10_000,
) -> tuple[float, int]:
    """(|f_bethe - ln Z / n|, loop count) for a tree-shaped instance."""
    bp = solve_fixed_point(graph, damping=damping, tol=tol, max_iter=max_iter)
    f = bethe_free_energy(graph, bp.messages).f_bethe
    ln_z = brute_force_log_partition(graph).log_z
    loops = enumerate_generalized_loops(graph)
    return abs(f - ln_z / graph.n), len(loops)


def verify_full_expansion(
    graph: FactorGraph,
    messages: MessageSet,
) -> FullExpansionReport:
    """Check Z / exp(n f_bethe) = sum over all edge subsets of K(subset).

    Valid for completely arbitrary messages, which is the point: the subset
    expansion is an identity, not a fixed-point property.  Also reports the
    largest activity among subsets with a dangling (degree-one) node; at a BP
    fixed point that maximum collapses to zero.
    """
    E = graph.edge_count
    if E > FULL_EXPANSION_MAX_EDGES:
        raise TooLargeError(
            f"full expansion needs 2^{E} subsets; limit is 2^{FULL_EXPANSION_MAX_EDGES}"
        )
    f = bethe_free_energy(graph, messages).f_bethe
    ln_z = brute_force_log_partition(graph).log_z
    target = math.exp(ln_z - graph.n * f)
    ev = ActivityEvaluator(graph, messages)
    terms: list[float] = [1.0]
    max_dangling = 0.0
    for bits in range(1, 1 << E):
        edge_ids = tuple(e for e in range(E) if (bits >> e) & 1)
        val = ev.value(edge_ids)
        terms.append(val)
        var_deg: dict[int, int] = {}
        check_deg: dict[int, int] = {}
        for e in edge_ids:
            i, a = graph.edges[e]
            var_deg[i] = var_deg.get(i, 0) + 1
            check_deg[a] = check_deg.get(a, 0) + 1
        if any(d == 1 for d in var_deg.values()) or any(
            d == 1 for d in check_deg.values()
        ):
            max_dangling = max(max_dangling, abs(val))
    total = math.fsum(terms)
    return FullExpansionReport(
        residual=abs(total - target),
        subset_count=1 << E,
        max_dangling_activity=max_dangling,
    )


# ---------------------------------------------------------------------------
# activity bounds


def high_temperature_activity_bound(graph: FactorGraph, polymer: Polymer) -> float:
    """(6 e mu)^(2|g|/(2+r_max)) for general weights at small coupling mass."""
    w = graph.weights
    if not isinstance(w, GeneralWeights):
        raise HypothesisNotMetError("high-temperature bound needs general weights")
    mu = w.mu()
    limit = 1.0 / (2.0 * graph.l_max**2 * graph.r_max)
    if not mu < limit:
        raise HypothesisNotMetError(
            f"coupling mass mu = {mu} is not below 1/(2 l_max^2 r_max) = {limit}"
        )
    return (6.0 * math.e * mu) ** (2.0 * polymer.size / (2.0 + graph.r_max))


def ldgm_activity_bound(graph: FactorGraph, polymer: Polymer) -> float:
    """(12 e h)^(2|g|/(2+r_max)) for ldgm weights at small field strength."""
    w = graph.weights
    if not isinstance(w, LdgmWeights):
        raise HypothesisNotMetError("this bound needs ldgm weights")
    h = max((abs(x) for x in w.check_fields), default=0.0)
    limit = 1.0 / (4.0 * graph.l_max**2 * graph.r_max)
    if not h < limit:
        raise HypothesisNotMetError(
            f"field strength h = {h} is not below 1/(4 l_max^2 r_max) = {limit}"
        )
    return (12.0 * math.e * h) ** (2.0 * polymer.size / (2.0 + graph.r_max))


def ldgm_trivial_activity_bound(
    graph: FactorGraph,
    polymer: Polymer,
    p: float,
    messages: MessageSet,
) -> float:
    """(1-2p)^(2|g|/(2+r_max)) at the all-zero fixed point of an ldgm channel."""
    w = graph.weights
    if not isinstance(w, LdgmWeights):
        raise HypothesisNotMetError("this bound needs ldgm weights")
    if not 0.0 < p < 0.5:
        raise HypothesisNotMetError(f"flip probability p = {p} not in (0, 1/2)")
    h = math.atanh(1.0 - 2.0 * p)
    if any(abs(abs(x) - h) > 1e-9 for x in w.check_fields):
        raise HypothesisNotMetError(
            "check fields do not all have the channel magnitude atanh(1-2p)"
        )
    peak = max(
        float(np.abs(messages.var_to_check).max(initial=0.0)),
        float(np.abs(messages.check_to_var).max(initial=0.0)),
    )
    if peak > 1e-12:
        raise HypothesisNotMetError(
            f"messages reach {peak}; the bound holds at the all-zero fixed point"
        )
    return (1.0 - 2.0 * p) ** (2.0 * polymer.size / (2.0 + graph.r_max))


def ldpc_type_activity_bound(
    graph: FactorGraph,
    polymer: Polymer,
    theta: float,
    alpha1: float = 1.1,
    alpha2: float = 1.1,
) -> float:
    """Per-node type bound for ldpc activities in the high-noise window.

    Requires 0 < theta <= 0.1 and messages within theta of zero (the caller
    certifies the latter, e.g. with verify_high_noise).  Checks of degree r
    with d included edges contribute alpha1 * theta^(r-d), or 1 + alpha1 *
    theta^r when fully included; variables with d included edges contribute
    alpha2 * (1+d) * theta for odd d and 1 + (alpha2/2) * (1+4d+d^2) * theta^2
    for even d.
    """
    if not isinstance(graph.weights, LdpcWeights):
        raise HypothesisNotMetError("the type bound needs ldpc weights")
    if not 0.0 < theta <= 0.1:
        raise HypothesisNotMetError(
            f"theta = {theta} outside the validity window (0, 0.1]"
        )
    var_deg: dict[int, int] = {}
    check_deg: dict[int, int] = {}
    for e in polymer.edge_ids:
        i, a = graph.edges[e]
        var_deg[i] = var_deg.get(i, 0) + 1
        check_deg[a] = check_deg.get(a, 0) + 1
    bound = 1.0
    for a, d in check_deg.items():
        r = graph.check_degree(a)
        if d == r:
            bound *= 1.0 + alpha1 * theta**r
        else:
            bound *= alpha1 * theta ** (r - d)
    for _i, d in var_deg.items():
        if d % 2:
            bound *= alpha2 * (1.0 + d) * theta
        else:
            bound *= 1.0 + (alpha2 / 2.0) * (1.0 + 4.0 * d + d * d) * theta**2
    return bound


def expander_activity_bound(
    graph: FactorGraph,
    polymer: Polymer,
    theta: float,
    expander: ExpanderParams,
    certificate: ExpanderCheckResult,
) -> float:
    """theta^((c/2)|g|) for small polymers of a certified expander code."""
    if not isinstance(graph.weights, LdpcWeights):
        raise HypothesisNotMetError("the expander bound needs ldpc weights")
    if not certificate.certified:
        raise HypothesisNotMetError("the expansion property is not certified")
    if not 0.0 < theta <= 0.1:
        raise HypothesisNotMetError(
            f"theta = {theta} outside the validity window (0, 0.1]"
        )
    if not polymer.size < expander.lam * graph.n:
        raise HypothesisNotMetError(
            f"polymer size {polymer.size} is not below lambda*n = {expander.lam * graph.n}"
        )
    return theta ** (expander.c / 2.0 * polymer.size)


def activity_bound(
    graph: FactorGraph,
    polymer: Polymer,
    kind: str,
    **params: object,
) -> float:
    """Dispatch to one of the named activity bounds."""
    table = {
        "high_temperature": high_temperature_activity_bound,
        "ldgm": ldgm_activity_bound,
        "ldgm_trivial": ldgm_trivial_activity_bound,
        "ldpc_type": ldpc_type_activity_bound,
        "expander": expander_activity_bound,
    }
    if kind not in table:
        raise ValueError(f"unknown bound kind {kind!r}; choose from {sorted(table)}")
    return table[kind](graph, polymer, **params)  # type: ignore[operator]
