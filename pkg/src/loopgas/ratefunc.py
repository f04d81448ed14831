"""Growth-versus-decay rate functions for large-subgraph types.

In a regular two-sided degree ensemble, subgraphs of a prescribed type
(counts of touched variables by induced degree s and touched checks by
induced degree t) proliferate like exp(n l f(x, y)) while the uniform
activity bound decays like exp(n l k_theta(x, y)).  The sign of

    Lambda(theta) = max over the admissible type region of f + k_theta

decides whether subgraphs containing a large connected piece can carry
any weight.  This module evaluates f, k_theta, the restriction f0 of f
to the even sub-lattice, and Lambda(theta) by seeded multi-start search
with coordinate refinement.

Coordinates: xs = (x_2..x_l) are variable-type fractions, ys = (y_2..y_r)
check-type fractions rescaled by r/l, so the admissible region is

    lam <= (1/l) sum x_s + (1/r) sum y_t,
    sum (s/l) x_s = sum (t/r) y_t,
    sum x_s < 1,  sum y_t < 1,

with all coordinates nonnegative.  The equality eliminates y_r.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import InfeasibleDomainError
from .graphs import binary_entropy

REFINE_TOP = 12


def omega_constant(r: int) -> int:
    """Edge-count margin below which the type-counting estimate applies."""
    if r < 2:
        raise ValueError(f"need r >= 2, got {r}")
    return 4 * r * r - 2 * r + 2


def _xlogx(v: float) -> float:
    return v * math.log(v) if v > 0.0 else 0.0


def _ln(v: float) -> float:
    return math.log(v) if v > 0.0 else float("-inf")


@dataclass(frozen=True)
class RateFunctionSpec:
    """Ensemble degrees, noise level, bound constants, and size fraction."""

    l: int
    r: int
    theta: float
    lam: float
    alpha1: float = 1.1
    alpha2: float = 1.1

    def __post_init__(self) -> None:
        if self.l % 2 == 0 or not 3 <= self.l < self.r:
            raise ValueError(
                f"need l odd with 3 <= l < r, got l = {self.l}, r = {self.r}"
            )
        if not 0.0 <= self.theta < 0.5:
            raise ValueError(f"theta must lie in [0, 0.5), got {self.theta}")
        if self.lam <= 0.0:
            raise ValueError(f"size fraction must be positive, got {self.lam}")
        if self.alpha1 <= 1.0 or self.alpha2 <= 1.0:
            raise ValueError("bound constants alpha1, alpha2 must exceed 1")


@dataclass(frozen=True)
class RateFunctionResult:
    """Maximized rate and the type coordinates achieving it."""

    value: float
    xs: tuple[float, ...]
    ys: tuple[float, ...]
    theta: float


def _check_coords(l: int, r: int, xs, ys) -> None:
    if len(xs) != l - 1:
        raise ValueError(f"expected {l - 1} variable coordinates, got {len(xs)}")
    if len(ys) != r - 1:
        raise ValueError(f"expected {r - 1} check coordinates, got {len(ys)}")
    if any(v < 0.0 for v in xs) or any(v < 0.0 for v in ys):
        raise ValueError("type coordinates must be nonnegative")
    if sum(xs) >= 1.0 or sum(ys) >= 1.0:
        raise ValueError("coordinate sums must stay below 1")


def f_xy(l: int, r: int, xs, ys) -> float:
    """Exponential growth rate of the number of subgraphs of type (xs, ys).

    xs runs over induced variable degrees s = 2..l, ys over induced check
    degrees t = 2..r.  Entropy-like terms extend by continuity to zero
    coordinates.
    """
    _check_coords(l, r, xs, ys)
    sx = math.fsum(xs)
    sy = math.fsum(ys)
    wx = math.fsum((s / l) * x for s, x in zip(range(2, l + 1), xs))
    val = _xlogx(1.0 - wx) + _xlogx(wx)
    val += math.fsum(
        x * math.log(math.comb(l, s)) for s, x in zip(range(2, l + 1), xs)
    ) / l
    val += math.fsum(
        y * math.log(math.comb(r, t)) for t, y in zip(range(2, r + 1), ys)
    ) / r
    val -= (_xlogx(1.0 - sy) + math.fsum(_xlogx(y) for y in ys)) / r
    val -= (_xlogx(1.0 - sx) + math.fsum(_xlogx(x) for x in xs)) / l
    return val


def k_theta(
    l: int,
    r: int,
    theta: float,
    xs,
    ys,
    alpha1: float = 1.1,
    alpha2: float = 1.1,
) -> float:
    """Exponential decay rate of the uniform activity bound for type (xs, ys).

    Zero coordinates contribute nothing even where the underlying log
    diverges (theta = 0 on a plain-theta term); positive coordinates on
    such terms give -inf.
    """
    _check_coords(l, r, xs, ys)
    val = 0.0
    if ys[-1]:
        val += (ys[-1] / r) * math.log1p(alpha1 * theta**r)
    for t, y in zip(range(2, r), ys[:-1]):
        if y:
            val += (y / r) * _ln(alpha1 * theta ** (r - t))
    for s, x in zip(range(2, l + 1), xs):
        if not x:
            continue
        if s % 2 == 0:
            val += (x / l) * math.log1p(
                0.5 * alpha2 * (1 + 4 * s + s * s) * theta * theta
            )
        else:
            val += (x / l) * _ln(alpha2 * (1 + s) * theta)
    return val


# ---------------------------------------------------------------------------
# restriction to the even sub-lattice (odd xs and all ys below y_r zero)


def z_star(l: int) -> tuple[float, ...]:
    """Maximizer of the restricted profile: z_s = C(l, 2s) / 2^(l-1)."""
    if l % 2 == 0 or l < 3:
        raise ValueError(f"need l odd and >= 3, got {l}")
    return tuple(math.comb(l, 2 * s) / 2 ** (l - 1) for s in range(1, (l + 1) // 2))


def f0_restricted(l: int, zs) -> float:
    """Profile of l*f on the even sub-lattice, minus its channel-free part.

    With z_s = x_{2s} and all other coordinates eliminated,
    l*f = f0(z) - (1 - l/r) * h2(sum (2s/l) z_s); this returns f0, which
    vanishes at z_star and is negative elsewhere.
    """
    if l % 2 == 0 or l < 3:
        raise ValueError(f"need l odd and >= 3, got {l}")
    if len(zs) != (l - 1) // 2:
        raise ValueError(f"expected {(l - 1) // 2} coordinates, got {len(zs)}")
    if any(v < 0.0 for v in zs):
        raise ValueError("coordinates must be nonnegative")
    sz = math.fsum(zs)
    if sz >= 1.0:
        raise ValueError("coordinate sum must stay below 1")
    wz = math.fsum((2 * s / l) * z for s, z in zip(range(1, (l + 1) // 2), zs))
    val = -(l - 1) * binary_entropy(wz)
    val += math.fsum(
        z * math.log(math.comb(l, 2 * s)) for s, z in zip(range(1, (l + 1) // 2), zs)
    )
    val -= _xlogx(1.0 - sz) + math.fsum(_xlogx(z) for z in zs)
    return val


def restricted_point(l: int, r: int, zs) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Full (xs, ys) coordinates of a point z on the even sub-lattice."""
    xs = [0.0] * (l - 1)
    for s, zv in zip(range(1, (l + 1) // 2), zs):
        xs[2 * s - 2] = zv
    ys = [0.0] * (r - 1)
    ys[-1] = math.fsum((2 * s / l) * z for s, z in zip(range(1, (l + 1) // 2), zs))
    return tuple(xs), tuple(ys)


def maximize_f0(
    l: int,
    lam: float,
    starts: int = 4096,
    seed: int = 0,
    tol: float = 1e-6,
) -> tuple[float, tuple[float, ...]]:
    """Maximize the restricted profile over l*lam <= sum z_s < 1.

    Random multi-start plus coordinate refinement; no analytic hints, so
    the output doubles as an independent check of the closed-form point.
    """
    if l % 2 == 0 or l < 3:
        raise ValueError(f"need l odd and >= 3, got {l}")
    if lam <= 0.0 or l * lam >= 1.0:
        raise InfeasibleDomainError(
            f"size fraction {lam} leaves no admissible restricted types for l = {l}"
        )
    dim = (l - 1) // 2
    floor = l * lam

    def feasible(point: list[float]) -> bool:
        if any(v < 0.0 for v in point):
            return False
        total = math.fsum(point)
        return floor <= total <= 1.0 - 1e-12

    def objective(point: list[float]) -> float:
        return f0_restricted(l, point)

    rng = random.Random(seed)
    best_pool: list[tuple[float, list[float]]] = []
    attempts = 0
    while len(best_pool) < starts and attempts < 50 * starts:
        attempts += 1
        raw = [rng.expovariate(1.0) for _ in range(dim)]
        total = sum(raw) or 1.0
        scale = math.exp(rng.uniform(math.log(max(floor, 1e-4)), math.log(0.999)))
        point = [v / total * scale for v in raw]
        if feasible(point):
            best_pool.append((objective(point), point))
    if not best_pool:
        raise InfeasibleDomainError(
            f"no admissible restricted types sampled for l = {l}, lam = {lam}"
        )
    best_pool.sort(key=lambda item: -item[0])
    value, point = best_pool[0][0], best_pool[0][1]
    for cand_value, cand in best_pool[:REFINE_TOP]:
        ref_value, ref = _coordinate_ascent(objective, feasible, cand, tol)
        if ref_value > value:
            value, point = ref_value, ref
    return value, tuple(point)


# ---------------------------------------------------------------------------
# full maximization


def _coordinate_ascent(objective, feasible, start, tol, step0=0.05):
    point = list(start)
    value = objective(point)
    step = step0
    while step >= tol:
        moved = False
        for _round in range(200):
            improved = False
            for j in range(len(point)):
                for delta in (step, -step):
                    trial = point[j] + delta
                    if trial < 0.0:
                        trial = 0.0
                    if trial == point[j]:
                        continue
                    cand = list(point)
                    cand[j] = trial
                    if not feasible(cand):
                        continue
                    cand_value = objective(cand)
                    if cand_value > value:
                        value, point = cand_value, cand
                        improved = moved = True
            if not improved:
                break
        step *= 0.5
        if not moved and step < tol:
            break
    return value, point


def mckay_rate_function(
    spec: RateFunctionSpec,
    starts: int = 10_000,
    seed: int = 0,
    extra_starts: tuple[tuple[float, ...], ...] = (),
    tol: float = 1e-6,
) -> RateFunctionResult:
    """Maximize f + k_theta over the admissible type region.

    The degree-matching equality eliminates y_r; the remaining free
    coordinates are searched by seeded random multi-start (log-uniform
    scales, sparsified faces) plus coordinate refinement.  `extra_starts`
    accepts free-coordinate vectors (xs then ys without y_r) from earlier
    runs; re-offering a maximizer found at a smaller theta makes profiles
    over increasing theta provably nondecreasing, since k_theta is
    pointwise nondecreasing in theta.
    """
    l, r, theta, lam = spec.l, spec.r, spec.theta, spec.lam
    if lam >= 1.0 / l + 1.0 / r:
        raise InfeasibleDomainError(
            f"size fraction {lam} >= 1/{l} + 1/{r}; no admissible types exist"
        )
    dim_x = l - 1
    dim_y = r - 2  # y_r eliminated

    def y_last(xs: list[float], ys_head: list[float]) -> float:
        wx = math.fsum((s / l) * x for s, x in zip(range(2, l + 1), xs))
        wy = math.fsum((t / r) * y for t, y in zip(range(2, r), ys_head))
        return wx - wy

    def feasible(point: list[float]) -> bool:
        if any(v < 0.0 for v in point):
            return False
        xs = point[:dim_x]
        ys_head = point[dim_x:]
        yr = y_last(xs, ys_head)
        if yr < 0.0:
            return False
        sx = math.fsum(xs)
        sy = math.fsum(ys_head) + yr
        if sx >= 1.0 - 1e-12 or sy >= 1.0 - 1e-12:
            return False
        return sx / l + sy / r >= lam - 1e-12

    def objective(point: list[float]) -> float:
        xs = point[:dim_x]
        ys_head = point[dim_x:]
        ys = ys_head + [y_last(xs, ys_head)]
        return f_xy(l, r, xs, ys) + k_theta(
            l, r, theta, xs, ys, spec.alpha1, spec.alpha2
        )

    rng = random.Random(seed)
    pool: list[tuple[float, list[float]]] = []
    attempts = 0
    while len(pool) < starts and attempts < 100 * starts:
        attempts += 1
        raw_x = [rng.expovariate(1.0) for _ in range(dim_x)]
        if rng.random() < 0.5:
            keep = rng.randrange(1, 1 << dim_x)
            raw_x = [v if (keep >> j) & 1 else 0.0 for j, v in enumerate(raw_x)]
        total = sum(raw_x) or 1.0
        scale = math.exp(rng.uniform(math.log(1e-4), math.log(0.999)))
        xs = [v / total * scale for v in raw_x]
        wx = math.fsum((s / l) * x for s, x in zip(range(2, l + 1), xs))
        ys_head = [0.0] * dim_y
        if dim_y and rng.random() < 0.5 and wx > 0.0:
            raw_y = [rng.expovariate(1.0) for _ in range(dim_y)]
            weight = math.fsum((t / r) * v for t, v in zip(range(2, r), raw_y))
            budget = rng.random() * wx
            if weight > 0.0:
                ys_head = [v / weight * budget for v in raw_y]
        point = xs + ys_head
        if feasible(point):
            pool.append((objective(point), point))
    carried: list[tuple[float, list[float]]] = []
    for start in extra_starts:
        point = [max(0.0, float(v)) for v in start]
        if len(point) == dim_x + dim_y and feasible(point):
            carried.append((objective(point), point))
    if not pool and not carried:
        raise InfeasibleDomainError(
            f"no admissible types sampled for l = {l}, r = {r}, lam = {lam}"
        )
    pool.sort(key=lambda item: -item[0])
    keep = pool[:REFINE_TOP] + carried
    value, point = max(keep, key=lambda item: item[0])
    point = list(point)
    for _cand_value, cand in keep:
        ref_value, ref = _coordinate_ascent(objective, feasible, cand, tol)
        if ref_value > value:
            value, point = ref_value, ref
    xs = point[:dim_x]
    ys_head = point[dim_x:]
    ys = ys_head + [y_last(xs, ys_head)]
    return RateFunctionResult(
        value=value, xs=tuple(xs), ys=tuple(ys), theta=theta
    )


def rate_function_profile(
    l: int,
    r: int,
    thetas,
    lam: float,
    alpha1: float = 1.1,
    alpha2: float = 1.1,
    starts: int = 10_000,
    seed: int = 0,
    tol: float = 1e-6,
) -> list[RateFunctionResult]:
    """Lambda(theta) over a grid, re-offering each maximizer downstream.

    With thetas in increasing order the returned values are nondecreasing:
    k_theta is pointwise nondecreasing in theta, every maximizer is handed
    to the next run as a start, and refinement never returns less than its
    start value.
    """
    carried: list[tuple[float, ...]] = []
    out: list[RateFunctionResult] = []
    for theta in thetas:
        spec = RateFunctionSpec(l=l, r=r, theta=theta, lam=lam, alpha1=alpha1, alpha2=alpha2)
        res = mckay_rate_function(
            spec, starts=starts, seed=seed, extra_starts=tuple(carried), tol=tol
        )
        carried.append(tuple(res.xs) + tuple(res.ys[:-1]))
        out.append(res)
    return out
