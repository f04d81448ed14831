"""Exact references: brute-force log partition functions, GF(2) codeword
counts, and the conditional-entropy formulas they plug into.

Everything here is an oracle for the approximate machinery in the sibling
modules, so clarity and exactness win over speed; the only concession is a
vectorized configuration sweep so that n up to 26 stays usable.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import TooLargeError, WrongWeightKindError
from .graphs import FactorGraph, GeneralWeights, LdgmWeights, LdpcWeights

BRUTE_FORCE_MAX_VARS = 26
_BLOCK_BITS = 18


@dataclass(frozen=True)
class PartitionReport:
    """log Z together with the peak log-weight seen (overflow diagnostics)."""

    log_z: float
    n: int
    max_log_weight: float


def _parity(x: np.ndarray, mask: int) -> np.ndarray:
    """Parity of the bits of x & mask, as uint8 in {0, 1}."""
    return (np.bitwise_count(x & np.uint64(mask)) & np.uint8(1)).astype(np.uint8)


def _check_masks(graph: FactorGraph) -> list[int]:
    masks = []
    for a in range(graph.m):
        mask = 0
        for i in graph.check_neighbors(a):
            mask |= 1 << i
        masks.append(mask)
    return masks


def _block_log_weights(
    graph: FactorGraph, lo: int, hi: int
) -> tuple[np.ndarray, np.ndarray]:
    """Log weights of configurations lo..hi-1 and their validity mask.

    Configurations are bit patterns x over variables with spin
    s_i = (-1)^{x_i}; invalid rows (violated ldpc parity) are flagged False
    and their log weight is meaningless.
    """
    x = np.arange(lo, hi, dtype=np.uint64)
    w = graph.weights
    valid = np.ones(hi - lo, dtype=bool)
    if isinstance(w, LdpcWeights):
        logw = np.full(hi - lo, math.fsum(w.variable_fields))
        for a, mask in enumerate(_check_masks(graph)):
            valid &= _parity(x, mask) == 0
        for i, h in enumerate(w.variable_fields):
            if h != 0.0:
                logw -= (2.0 * h) * ((x >> np.uint64(i)) & np.uint64(1)).astype(
                    np.float64
                )
    elif isinstance(w, LdgmWeights):
        logw = np.zeros(hi - lo)
        for a, mask in enumerate(_check_masks(graph)):
            h = w.check_fields[a]
            if h != 0.0:
                logw += h * (1.0 - 2.0 * _parity(x, mask).astype(np.float64))
    else:
        assert isinstance(w, GeneralWeights)
        logw = np.zeros(hi - lo)
        for terms in w.couplings:
            for subset, j in terms:
                if j == 0.0:
                    continue
                mask = 0
                for i in subset:
                    mask |= 1 << i
                logw += (w.beta * j) * (
                    1.0 - 2.0 * _parity(x, mask).astype(np.float64)
                )
    return logw, valid


def brute_force_log_partition(graph: FactorGraph) -> PartitionReport:
    """ln Z by exhaustive enumeration of all 2^n spin configurations.

    Uses a two-pass max-shifted log-sum-exp with block partial sums combined
    by exact summation in a fixed block order, so the result is deterministic
    and insensitive to block size.

    Raises TooLargeError for n > 26.
    """
    n = graph.n
    if n > BRUTE_FORCE_MAX_VARS:
        raise TooLargeError(
            f"n = {n} exceeds the exhaustive cap {BRUTE_FORCE_MAX_VARS}"
        )
    total = 1 << n
    block = 1 << _BLOCK_BITS

    peak = -math.inf
    for lo in range(0, total, block):
        logw, valid = _block_log_weights(graph, lo, min(lo + block, total))
        if valid.any():
            peak = max(peak, float(logw[valid].max()))
    if peak == -math.inf:
        raise WrongWeightKindError("no configuration has positive weight")

    partials = []
    for lo in range(0, total, block):
        logw, valid = _block_log_weights(graph, lo, min(lo + block, total))
        partials.append(float(np.exp(logw[valid] - peak).sum()))
    return PartitionReport(
        log_z=peak + math.log(math.fsum(partials)), n=n, max_log_weight=peak
    )


def gf2_rank(rows: list[int]) -> int:
    """Rank over GF(2) of bitmask rows, by elimination on leading bits."""
    pivots: dict[int, int] = {}
    for row in rows:
        cur = row
        while cur:
            hb = cur.bit_length() - 1
            if hb in pivots:
                cur ^= pivots[hb]
            else:
                pivots[hb] = cur
                break
    return len(pivots)


def codeword_count_gf2(graph: FactorGraph) -> int:
    """log2 of the number of parity-check solutions: k = n - rank(H).

    Only meaningful for ldpc graphs; anything else raises
    WrongWeightKindError.
    """
    if graph.weights.kind != "ldpc":
        raise WrongWeightKindError("codeword counting needs ldpc weights")
    rows = []
    for a in range(graph.m):
        mask = 0
        for i in graph.check_neighbors(a):
            mask |= 1 << i
        rows.append(mask)
    return graph.n - gf2_rank(rows)


# ---------------------------------------------------------------------------
# conditional entropy formulas and channel averages


def channel_shift(p: float) -> float:
    """(1-2p)/2 * ln((1-p)/p), the per-field entropy correction."""
    if not 0.0 < p <= 0.5:
        raise ValueError(f"p must lie in (0, 1/2], got {p}")
    return 0.5 * (1.0 - 2.0 * p) * math.log((1.0 - p) / p)


def conditional_entropy_ldpc(avg_free_energy: float, p: float) -> float:
    """H(X|Y)/n for an ldpc instance from its channel-averaged free energy."""
    return avg_free_energy - channel_shift(p)


def conditional_entropy_ldgm(
    avg_free_energy: float, p: float, edge_ratio: float
) -> float:
    """H(U|Y)/n for an ldgm instance; edge_ratio is m/n (checks per variable)."""
    return avg_free_energy - edge_ratio * channel_shift(p)


@dataclass(frozen=True)
class ChannelAverage:
    """Mean of a per-instance functional over channel sign patterns."""

    mean: float
    stderr: float
    method: str
    patterns: int


def channel_average(
    graph: FactorGraph,
    p: float,
    value_fn: Callable[[FactorGraph], float],
    exhaustive_limit: int = 20,
    mc_samples: int = 2_000,
    seed: int = 0,
) -> ChannelAverage:
    """Average value_fn over channel realizations of the field signs.

    The graph supplies the topology; fields are redrawn as +-h(p) on the
    n variables (ldpc) or m checks (ldgm).  All 2^k sign patterns are
    enumerated exactly when k <= exhaustive_limit, otherwise a seeded Monte
    Carlo estimate with its standard error is returned.  At p = 1/2 the
    fields vanish and a single evaluation suffices.
    """
    kind = graph.weights.kind
    if kind == "ldpc":
        count = graph.n
    elif kind == "ldgm":
        count = graph.m
    else:
        raise WrongWeightKindError("channel averaging needs ldpc or ldgm weights")
    h = 0.5 * math.log((1.0 - p) / p)

    def with_fields(fields: tuple[float, ...]) -> FactorGraph:
        import dataclasses

        if kind == "ldpc":
            return dataclasses.replace(
                graph, weights=LdpcWeights(variable_fields=fields)
            )
        return dataclasses.replace(graph, weights=LdgmWeights(check_fields=fields))

    if h == 0.0:
        val = value_fn(with_fields((0.0,) * count))
        return ChannelAverage(mean=val, stderr=0.0, method="degenerate", patterns=1)

    if count <= exhaustive_limit:
        contribs = []
        for pattern in range(1 << count):
            flips = pattern.bit_count()
            weight = (p**flips) * ((1.0 - p) ** (count - flips))
            fields = tuple(
                -h if (pattern >> k) & 1 else h for k in range(count)
            )
            contribs.append(weight * value_fn(with_fields(fields)))
        return ChannelAverage(
            mean=math.fsum(contribs),
            stderr=0.0,
            method="exhaustive",
            patterns=1 << count,
        )

    rng = random.Random(seed)
    vals = []
    for _ in range(mc_samples):
        fields = tuple(-h if rng.random() < p else h for _ in range(count))
        vals.append(value_fn(with_fields(fields)))
    arr = np.asarray(vals)
    return ChannelAverage(
        mean=float(arr.mean()),
        stderr=float(arr.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0,
        method="montecarlo",
        patterns=mc_samples,
    )
