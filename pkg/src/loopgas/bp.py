"""Belief-propagation message passing in the tanh domain.

Messages live on directed edges: var_to_check[e] stores tanh of the
variable-to-check log-likelihood message on edge e, check_to_var[e] the
check-to-variable direction.  Sweeps are fully synchronous (both directions
recomputed from the previous iterate), which keeps trajectories independent
of edge order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegreeTooLargeError
from .graphs import ChannelParams, FactorGraph, GeneralWeights, LdgmWeights, LdpcWeights

CHECK_TABLE_MAX_DEGREE = 20


@dataclass(frozen=True)
class MessageSet:
    """Tanh-domain messages for every directed edge of a graph."""

    kind: str
    var_to_check: np.ndarray
    check_to_var: np.ndarray

    def copy(self) -> "MessageSet":
        return MessageSet(
            kind=self.kind,
            var_to_check=self.var_to_check.copy(),
            check_to_var=self.check_to_var.copy(),
        )


@dataclass(frozen=True)
class BPResult:
    messages: MessageSet
    residual: float
    iterations: int
    converged: bool


def _combine(x: float, y: float) -> float:
    # tanh(atanh x + atanh y) without leaving the tanh domain
    return (x + y) / (1.0 + x * y)


def _exclusive_combine(values: list[float], base: float) -> list[float]:
    # out[k] = combine of base with all values except values[k]
    d = len(values)
    prefix = [base] * (d + 1)
    for k in range(d):
        prefix[k + 1] = _combine(prefix[k], values[k])
    suffix = [0.0] * (d + 1)
    for k in range(d - 1, -1, -1):
        suffix[k] = _combine(suffix[k + 1], values[k])
    return [_combine(prefix[k], suffix[k + 1]) for k in range(d)]


def _exclusive_products(values: list[float]) -> list[float]:
    # out[k] = product of all values except values[k], no division
    d = len(values)
    prefix = [1.0] * (d + 1)
    for k in range(d):
        prefix[k + 1] = prefix[k] * values[k]
    suffix = [1.0] * (d + 1)
    for k in range(d - 1, -1, -1):
        suffix[k] = suffix[k + 1] * values[k]
    return [prefix[k] * suffix[k + 1] for k in range(d)]


def check_coupling_tables(graph: FactorGraph) -> list[list[tuple[int, float]]]:
    """Per check: coupling terms as (local bitmask, beta*J) pairs."""
    w = graph.weights
    assert isinstance(w, GeneralWeights)
    tables = []
    for a in range(graph.m):
        hood = list(graph.check_neighbors(a))
        local = {i: k for k, i in enumerate(hood)}
        terms = []
        for subset, j in w.couplings[a]:
            mask = 0
            for i in subset:
                mask |= 1 << local[i]
            terms.append((mask, w.beta * j))
        tables.append(terms)
    return tables


def _general_check_update(
    graph: FactorGraph,
    t_in: np.ndarray,
    out: np.ndarray,
    tables: list[list[tuple[int, float]]],
) -> None:
    for a in range(graph.m):
        eids = graph.check_edges[a]
        d = len(eids)
        if d == 0:
            continue
        if d > CHECK_TABLE_MAX_DEGREE:
            raise DegreeTooLargeError(
                f"check {a} has degree {d} > {CHECK_TABLE_MAX_DEGREE}"
            )
        t = [t_in[e] for e in eids]
        terms = tables[a]
        num = [0.0] * d
        den = [0.0] * d
        for cfg in range(1 << d):
            log_psi = 0.0
            for mask, bj in terms:
                log_psi += bj * (1.0 - 2.0 * ((cfg & mask).bit_count() & 1))
            psi = math.exp(log_psi)
            for k in range(d):
                s_k = 1.0 - 2.0 * ((cfg >> k) & 1)
                w = psi
                for j in range(d):
                    if j != k:
                        s_j = 1.0 - 2.0 * ((cfg >> j) & 1)
                        w *= 1.0 + s_j * t[j]
                num[k] += s_k * w
                den[k] += w
        for k, e in enumerate(eids):
            out[e] = num[k] / den[k]


def bp_sweep(graph: FactorGraph, messages: MessageSet) -> MessageSet:
    """One synchronous sweep: both directions recomputed from the old iterate."""
    E = graph.edge_count
    new_t = np.zeros(E)
    new_that = np.zeros(E)
    t_old = messages.var_to_check
    that_old = messages.check_to_var
    w = graph.weights

    # check -> variable
    if isinstance(w, LdpcWeights):
        for a in range(graph.m):
            eids = graph.check_edges[a]
            vals = [float(t_old[e]) for e in eids]
            for k, e in enumerate(eids):
                prod = 1.0
                for j, v in enumerate(vals):
                    if j != k:
                        prod *= v
                new_that[e] = prod
    elif isinstance(w, LdgmWeights):
        for a in range(graph.m):
            eids = graph.check_edges[a]
            th = math.tanh(w.check_fields[a])
            vals = [float(t_old[e]) for e in eids]
            excl = _exclusive_products(vals)
            for k, e in enumerate(eids):
                new_that[e] = th * excl[k]
    else:
        _general_check_update(graph, t_old, new_that, check_coupling_tables(graph))

    # variable -> check
    fields = w.variable_fields if isinstance(w, LdpcWeights) else None
    for i in range(graph.n):
        eids = graph.var_edges[i]
        if not eids:
            continue
        base = math.tanh(fields[i]) if fields is not None else 0.0
        vals = [float(that_old[e]) for e in eids]
        excl = _exclusive_combine(vals, base)
        for k, e in enumerate(eids):
            new_t[e] = excl[k]

    return MessageSet(kind=w.kind, var_to_check=new_t, check_to_var=new_that)


def initial_messages(graph: FactorGraph) -> MessageSet:
    """Default starting point: zeros, except ldpc which seeds the channel
    fields on variable messages and their first-order products on check
    messages."""
    E = graph.edge_count
    w = graph.weights
    t = np.zeros(E)
    that = np.zeros(E)
    if isinstance(w, LdpcWeights):
        for e, (i, _a) in enumerate(graph.edges):
            t[e] = math.tanh(w.variable_fields[i])
        for a in range(graph.m):
            eids = graph.check_edges[a]
            vals = [float(t[e]) for e in eids]
            excl = _exclusive_products(vals)
            for k, e in enumerate(eids):
                that[e] = excl[k]
    return MessageSet(kind=w.kind, var_to_check=t, check_to_var=that)


def residual_of(graph: FactorGraph, messages: MessageSet) -> float:
    """Sup-norm distance between messages and one undamped sweep of them."""
    swept = bp_sweep(graph, messages)
    return float(
        max(
            np.abs(swept.var_to_check - messages.var_to_check).max(initial=0.0),
            np.abs(swept.check_to_var - messages.check_to_var).max(initial=0.0),
        )
    )


def solve_fixed_point(
    graph: FactorGraph,
    init: MessageSet | None = None,
    damping: float = 0.0,
    tol: float = 1e-12,
    max_iter: int = 10_000,
) -> BPResult:
    """Iterate damped synchronous sweeps until the sup-norm residual <= tol.

    damping d in [0, 1) mixes the old iterate back in (t <- (1-d)*sweep + d*t,
    in the tanh domain).  Non-convergence is reported, not raised.
    """
    if not 0.0 <= damping < 1.0:
        raise ValueError(f"damping must lie in [0, 1), got {damping}")
    msgs = init.copy() if init is not None else initial_messages(graph)
    residual = math.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        swept = bp_sweep(graph, msgs)
        if damping > 0.0:
            swept = MessageSet(
                kind=swept.kind,
                var_to_check=(1.0 - damping) * swept.var_to_check
                + damping * msgs.var_to_check,
                check_to_var=(1.0 - damping) * swept.check_to_var
                + damping * msgs.check_to_var,
            )
        residual = float(
            max(
                np.abs(swept.var_to_check - msgs.var_to_check).max(initial=0.0),
                np.abs(swept.check_to_var - msgs.check_to_var).max(initial=0.0),
            )
        )
        msgs = swept
        if residual <= tol:
            break
    return BPResult(
        messages=msgs,
        residual=residual,
        iterations=iterations,
        converged=residual <= tol,
    )


# ---------------------------------------------------------------------------
# fixed-point verification predicates


def verify_high_noise(messages: MessageSet, channel: ChannelParams) -> bool:
    """All variable-to-check messages within the high-noise threshold theta."""
    if messages.kind != "ldpc":
        raise ValueError("the high-noise predicate applies to ldpc messages")
    if messages.var_to_check.size == 0:
        return True
    return bool(
        np.abs(messages.var_to_check).max() <= channel.theta + 1e-12
    )


def verify_high_temperature_bounds(messages: MessageSet, graph: FactorGraph) -> bool:
    """General-weight fixed-point bounds |t| <= 2(l_max - 1)*mu, |t_hat| <= 2*mu."""
    w = graph.weights
    if not isinstance(w, GeneralWeights):
        raise ValueError("high-temperature bounds apply to general weights")
    mu = w.mu()
    if mu >= 0.5:
        raise ValueError(f"bounds require mu < 1/2, got mu = {mu}")
    slack = 1e-12
    ok_var = (
        messages.var_to_check.size == 0
        or np.abs(messages.var_to_check).max()
        <= 2.0 * (graph.l_max - 1) * mu + slack
    )
    ok_check = (
        messages.check_to_var.size == 0
        or np.abs(messages.check_to_var).max() <= 2.0 * mu + slack
    )
    return bool(ok_var and ok_check)


def verify_ldgm_message_bounds(messages: MessageSet, graph: FactorGraph) -> bool:
    """ldgm fixed-point bounds |t| <= 4(l_max - 1)*h, |t_hat| <= 4*h."""
    w = graph.weights
    if not isinstance(w, LdgmWeights):
        raise ValueError("these bounds apply to ldgm weights")
    h = max((abs(x) for x in w.check_fields), default=0.0)
    slack = 1e-12
    ok_var = (
        messages.var_to_check.size == 0
        or np.abs(messages.var_to_check).max() <= 4.0 * (graph.l_max - 1) * h + slack
    )
    ok_check = (
        messages.check_to_var.size == 0
        or np.abs(messages.check_to_var).max() <= 4.0 * h + slack
    )
    return bool(ok_var and ok_check)
