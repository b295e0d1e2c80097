"""Discounted evaluation of streams and the three discounting criteria.

The building block is the normalized discounted value

    D_delta(x) = (1 - delta) * sum_t delta^t x_t,

computed in closed form for eventually periodic streams: a Horner pass over
the prefix plus a geometric-tail term.  The delta-domain is the closed
interval [0, 1]; at delta = 1 the continuous (Abel) extension equals the
tail-cycle mean, and every cost function is infinite there, so minimization
over [0, 1] is effectively over [0, 1).  The convention 0^0 = 1 makes
delta = 0 the weighting that puts all mass on the present, D_0(x) = x_0.

Three criteria are built on top of D:

* ``Edu(delta)``          -- a single discount factor in (0, 1);
* ``Maxmin(points, intervals)`` -- worst case over a closed set of factors;
* ``Variational(cost)``   -- min over delta of D_delta(x) + cost(delta),
  where the cost is grounded (its infimum is 0) and infinite at 1.

Costs are expressed in the same utility units as streams; infinity is an
explicit absorbing value, never a large float.  The objective
delta -> D_delta(x) + cost(delta) need not be convex, so the minimizer runs
a dense grid per continuous piece of the cost followed by golden-section
refinement inside each bracketing triple; finite point sets are enumerated
exactly.

Everything here is a pure function of immutable inputs; independent
(criterion, stream) evaluations can run concurrently without coordination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import patient
from .errors import InfeasibleCost, InvalidCost, InvalidCriterion, InvalidDelta
from .streams import Constant, Stream

#: Right edge used for numerically searching half-open pieces [a, 1).
_ONE_EDGE = 1.0 - 1e-9

_INF = math.inf


# ---------------------------------------------------------------------------
# discounted value
# ---------------------------------------------------------------------------

def _tail_mean(x: Stream) -> float:
    cyc = x.tail_cycle
    return math.fsum(cyc) / len(cyc)


def discounted_value(x: Stream, delta: float) -> float:
    """Closed-form D_delta(x) for delta in [0, 1].

    Exact form: (1-delta) * sum_{t<N} delta^t x_t + delta^N * A(delta) where
    A is the tail value (the constant c, or for a cycle q of period p,
    (1-delta) * sum_{k<p} delta^k q_k / (1 - delta^p)).  At delta = 1 the
    continuous extension equals the tail mean; at delta = 0 the value is
    x_0 by the 0^0 = 1 convention.

    Raises:
        InvalidDelta: if delta is outside [0, 1] (or NaN).
    """
    if not 0.0 <= delta <= 1.0:
        raise InvalidDelta(f"discount factor must lie in [0, 1], got {delta}")
    if delta == 1.0:
        return _tail_mean(x)
    s = 0.0
    for v in reversed(x.prefix):
        s = v + delta * s
    if isinstance(x.tail, Constant):
        tail_abel = x.tail.value
    else:
        cyc = x.tail.cycle
        t = 0.0
        for v in reversed(cyc):
            t = v + delta * t
        if delta == 0.0:
            tail_abel = t
        else:
            # (1 - delta^p) via expm1 to avoid cancellation near delta = 1.
            denom = -math.expm1(len(cyc) * math.log(delta))
            tail_abel = (1.0 - delta) * t / denom
    return (1.0 - delta) * s + delta ** len(x.prefix) * tail_abel


def discounted_value_grid(x: Stream, deltas: np.ndarray) -> np.ndarray:
    """Vectorized :func:`discounted_value` over an array of factors."""
    d = np.asarray(deltas, dtype=float)
    if d.size and (d.min() < 0.0 or d.max() > 1.0 or np.isnan(d).any()):
        raise InvalidDelta("discount factors must lie in [0, 1]")
    at_one = d == 1.0
    dd = np.where(at_one, 0.5, d)
    s = np.zeros_like(dd)
    for v in reversed(x.prefix):
        s = v + dd * s
    if isinstance(x.tail, Constant):
        tail_abel = np.full_like(dd, x.tail.value)
    else:
        cyc = x.tail.cycle
        t = np.zeros_like(dd)
        for v in reversed(cyc):
            t = v + dd * t
        with np.errstate(divide="ignore"):
            denom = -np.expm1(len(cyc) * np.log(dd))
        tail_abel = (1.0 - dd) * t / denom
    out = (1.0 - dd) * s + dd ** len(x.prefix) * tail_abel
    if at_one.any():
        out = np.where(at_one, _tail_mean(x), out)
    return out


# ---------------------------------------------------------------------------
# cost functions
# ---------------------------------------------------------------------------

def _check_unit_point(value: float, what: str) -> float:
    v = float(value)
    if not 0.0 <= v < 1.0:
        raise InvalidCost(f"{what} must lie in [0, 1), got {value}")
    return v


@dataclass(frozen=True)
class IndicatorSet:
    """Zero (or finite per-point) cost on a closed set E, infinite elsewhere.

    E is a finite union of points and closed sub-intervals of [0, 1).  Each
    point may carry a finite nonnegative cost (``point_costs``, default 0);
    intervals always carry cost 0.  An interval end b = 1.0 is accepted and
    read as the half-open piece [a, 1), since the cost at 1 is always
    infinite.  Groundedness (inf cost = 0) is checked at construction.
    """

    points: tuple[float, ...] = ()
    intervals: tuple[tuple[float, float], ...] = ()
    point_costs: tuple[float, ...] = ()

    def __post_init__(self):
        pts = tuple(_check_unit_point(p, "indicator point") for p in self.points)
        ivs = []
        for pair in self.intervals:
            a, b = (float(pair[0]), float(pair[1]))
            if not (0.0 <= a <= b <= 1.0) or a >= 1.0:
                raise InvalidCost(f"interval [{a}, {b}] must sit inside [0, 1) "
                                  "(right end 1.0 is read as the open end)")
            ivs.append((a, b))
        costs = tuple(float(c) for c in self.point_costs)
        if not costs:
            costs = (0.0,) * len(pts)
        if len(costs) != len(pts):
            raise InvalidCost("point_costs length must match points")
        if any(c < 0 or not math.isfinite(c) for c in costs):
            raise InvalidCost("point costs must be finite and >= 0")
        if not pts and not ivs:
            raise InvalidCost("indicator set must be nonempty")
        if not ivs and min(costs) != 0.0:
            raise InvalidCost("not grounded: no zero-cost point")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "intervals", tuple(ivs))
        object.__setattr__(self, "point_costs", costs)


@dataclass(frozen=True)
class Quadratic:
    """cost(delta) = stiffness * (delta - center)^2, infinite at delta = 1."""

    center: float
    stiffness: float

    def __post_init__(self):
        object.__setattr__(self, "center", _check_unit_point(self.center, "quadratic center"))
        k = float(self.stiffness)
        if k < 0 or not math.isfinite(k):
            raise InvalidCost(f"stiffness must be finite and >= 0, got {self.stiffness}")
        object.__setattr__(self, "stiffness", k)


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear cost through sorted (delta, cost) knots.

    Finite on [0, delta_max] with delta_max < 1 (below the first knot the
    cost extends flat), infinite beyond delta_max.  Must contain a
    zero-cost knot (groundedness).
    """

    knots: tuple[tuple[float, float], ...]

    def __post_init__(self):
        ks = tuple((_check_unit_point(d, "tabulated knot"), float(c)) for d, c in self.knots)
        if not ks:
            raise InvalidCost("tabulated cost needs at least one knot")
        ds = [d for d, _ in ks]
        if sorted(ds) != ds or len(set(ds)) != len(ds):
            raise InvalidCost("tabulated knots must have strictly increasing deltas")
        if any(c < 0 or not math.isfinite(c) for _, c in ks):
            raise InvalidCost("knot costs must be finite and >= 0")
        if min(c for _, c in ks) != 0.0:
            raise InvalidCost("not grounded: no zero-cost knot")
        object.__setattr__(self, "knots", ks)


CostFunction = Union[IndicatorSet, Quadratic, Tabulated]


def cost_eval(c: CostFunction, delta: float) -> float:
    """Cost value in [0, +inf]; always +inf at delta = 1."""
    if not 0.0 <= delta <= 1.0:
        raise InvalidDelta(f"discount factor must lie in [0, 1], got {delta}")
    if delta == 1.0:
        return _INF
    if isinstance(c, IndicatorSet):
        best = _INF
        for p, k in zip(c.points, c.point_costs):
            if delta == p:
                best = min(best, k)
        for a, b in c.intervals:
            if a <= delta <= b:
                return 0.0
        return best
    if isinstance(c, Quadratic):
        return c.stiffness * (delta - c.center) ** 2
    if isinstance(c, Tabulated):
        ds = [d for d, _ in c.knots]
        if delta > ds[-1]:
            return _INF
        return float(np.interp(delta, ds, [k for _, k in c.knots]))
    raise InvalidCost(f"not a cost function: {c!r}")


def _cost_points(c: CostFunction) -> list[tuple[float, float]]:
    """Isolated finite-cost points (delta, cost); solved by enumeration."""
    if isinstance(c, IndicatorSet):
        return list(zip(c.points, c.point_costs))
    return []


def _cost_pieces(c: CostFunction) -> list[tuple[float, float,
                                                Callable[[np.ndarray], np.ndarray],
                                                Callable[[float], float]]]:
    """Continuous finite-cost pieces (a, b, vector_cost, scalar_cost)."""
    if isinstance(c, IndicatorSet):
        return [(a, min(b, _ONE_EDGE), lambda g: np.zeros_like(g), lambda d: 0.0)
                for a, b in c.intervals]
    if isinstance(c, Quadratic):
        return [(0.0, _ONE_EDGE,
                 lambda g: c.stiffness * (g - c.center) ** 2,
                 lambda d: c.stiffness * (d - c.center) ** 2)]
    if isinstance(c, Tabulated):
        ds = [d for d, _ in c.knots]
        ks = [k for _, k in c.knots]
        return [(0.0, ds[-1],
                 lambda g: np.interp(g, ds, ks),
                 lambda d: float(np.interp(d, ds, ks)))]
    raise InvalidCost(f"not a cost function: {c!r}")


# ---------------------------------------------------------------------------
# minimization over the discount factor
# ---------------------------------------------------------------------------

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden(fun: Callable[[float], float], a: float, b: float,
            xtol: float = 1e-9, maxiter: int = 80) -> tuple[float, float]:
    """Golden-section minimum of ``fun`` on [a, b]; returns (argmin, value)."""
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = fun(x1), fun(x2)
    fa, fb = fun(a), fun(b)
    for _ in range(maxiter):
        if b - a <= xtol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = fun(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = fun(x2)
    xm = 0.5 * (a + b)
    candidates = [(fun(xm), xm), (f1, x1), (f2, x2), (fa, a), (fb, b)]
    best_v, best_x = min(candidates)
    return best_x, best_v


def _minimize_on_interval(x: Stream, a: float, b: float,
                          vec_cost: Callable[[np.ndarray], np.ndarray],
                          scalar_cost: Callable[[float], float],
                          nodes: int) -> tuple[float, float]:
    """Grid scan plus golden refinement of D_delta(x) + cost on [a, b]."""

    def objective(d: float) -> float:
        return discounted_value(x, d) + scalar_cost(d)

    if b <= a:
        return a, objective(a)
    grid = np.linspace(a, b, nodes)
    f = discounted_value_grid(x, grid) + vec_cost(grid)
    interior = np.nonzero((f[1:-1] <= f[:-2]) & (f[1:-1] <= f[2:]))[0] + 1
    brackets = {0, nodes - 1, *interior.tolist()}
    candidates = [(float(f[i]), float(grid[i])) for i in brackets]
    for i in brackets:
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, nodes - 1)]
        d_star, v_star = _golden(objective, float(lo), float(hi))
        candidates.append((v_star, d_star))
    v_best, d_best = min(candidates)
    return d_best, v_best


def minimize_over_delta(x: Stream, c: CostFunction,
                        nodes: int = 2001) -> tuple[float, float]:
    """Global minimum of delta -> D_delta(x) + cost(delta) over [0, 1].

    Finite point sets are enumerated exactly; each continuous piece of the
    cost gets a dense grid (``nodes`` per piece) followed by golden-section
    refinement inside every bracketing triple.  Returns (argmin, value);
    ties resolve to the smallest argmin.

    Raises:
        InfeasibleCost: if the cost is infinite everywhere on [0, 1).
    """
    candidates: list[tuple[float, float]] = []
    for d, k in _cost_points(c):
        candidates.append((discounted_value(x, d) + k, d))
    for a, b, vcost, scost in _cost_pieces(c):
        d_star, v_star = _minimize_on_interval(x, a, b, vcost, scost, nodes)
        candidates.append((v_star, d_star))
    if not candidates:
        raise InfeasibleCost("cost is identically infinite on [0, 1)")
    v_best, d_best = min(candidates)
    return d_best, v_best


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Edu:
    """Exponential discounting with a single factor strictly inside (0, 1)."""

    delta: float

    def __post_init__(self):
        d = float(self.delta)
        if not 0.0 < d < 1.0:
            raise InvalidCriterion(f"EDU factor must lie in (0, 1), got {self.delta}")
        object.__setattr__(self, "delta", d)


@dataclass(frozen=True)
class Maxmin:
    """Worst-case discounting over a closed set of factors in [0, 1).

    delta = 0 is admissible here (mass on the present, via 0^0 = 1), unlike
    in :class:`Edu`.
    """

    points: tuple[float, ...] = ()
    intervals: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        # Validation rules are identical to a zero-cost indicator set.
        ind = IndicatorSet(points=self.points, intervals=self.intervals)
        object.__setattr__(self, "points", ind.points)
        object.__setattr__(self, "intervals", ind.intervals)


@dataclass(frozen=True)
class Variational:
    """min over delta of discounted value plus a grounded cost."""

    cost: CostFunction

    def __post_init__(self):
        if not isinstance(self.cost, (IndicatorSet, Quadratic, Tabulated)):
            raise InvalidCriterion(f"not a cost function: {self.cost!r}")


@dataclass(frozen=True)
class Inf:
    """Worst utility over all periods."""


@dataclass(frozen=True)
class Liminf:
    """Worst recurring utility."""


@dataclass(frozen=True)
class BanachWindow:
    """Long-run worst window average (shift-invariant patient criterion)."""


@dataclass(frozen=True)
class Cesaro:
    """Long-run plain average."""


Criterion = Union[Edu, Maxmin, Variational, Inf, Liminf, BanachWindow, Cesaro]


def _maxmin_value(x: Stream, k: Maxmin, nodes: int) -> float:
    zero_vec = lambda g: np.zeros_like(g)
    zero_sca = lambda d: 0.0
    candidates = [(discounted_value(x, d), d) for d in k.points]
    for a, b in k.intervals:
        d_star, v_star = _minimize_on_interval(x, a, min(b, _ONE_EDGE),
                                               zero_vec, zero_sca, nodes)
        candidates.append((v_star, d_star))
    v_best, _ = min(candidates)
    return v_best


def evaluate(k: Criterion, x: Stream, nodes: int = 2001) -> float:
    """Constant equivalent I(x) of the stream under criterion ``k``."""
    if isinstance(k, Edu):
        return discounted_value(x, k.delta)
    if isinstance(k, Maxmin):
        return _maxmin_value(x, k, nodes)
    if isinstance(k, Variational):
        return minimize_over_delta(x, k.cost, nodes)[1]
    if isinstance(k, Inf):
        return patient.inf_value(x)
    if isinstance(k, Liminf):
        return patient.liminf_value(x)
    if isinstance(k, BanachWindow):
        return patient.banach_window_value(x)
    if isinstance(k, Cesaro):
        return patient.cesaro_value(x)
    raise InvalidCriterion(f"not a criterion: {k!r}")


def as_evaluator(k) -> Callable[[Stream], float]:
    """Criterion (or plain callable) as a stream -> value function."""
    if callable(k) and not isinstance(k, type):
        return k
    return lambda x: evaluate(k, x)
