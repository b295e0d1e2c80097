"""Finite-dimensional adjoints and invariant discount structures.

A positive linear operator on length-N coordinate truncations is stored as
a nonnegative matrix; its adjoint, acting on discount weightings, is the
transpose.  ``invariant_structure`` finds a normalized eigenvector on the
simplex by iterating the normalized map p -> M p / <1, M p> (the fixed
point satisfies M p = <1, M p> p, so the eigenvalue is read off as
lambda = <1, M p>, which keeps it nonnegative by positivity).  For
operators whose iterates cycle, such as permutations, a Cesaro-averaged
variant converges to the cycle-uniform invariant vector.

Two truncations of the one-period delay ship as builtins.  The absorbing
truncation is the faithful one, p -> (p_1, ..., p_{N-1}, 0); its only
normalized eigenvector is the mass-at-present vector e_0 with eigenvalue 0,
at every N, which documents that the geometric eigenvector family exists
only in the infinite-dimensional limit (see
:func:`geometric_invariance_check` for the closed-form witness).  The
cyclic truncation wraps around instead and is eigen-rich; its uniform
invariant vector is the finite stand-in for a patient, shift-invariant
weighting.

Iteration state is caller-local; callers may parallelize across operators
or starting vectors freely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .discounting import discounted_value
from .errors import (InvalidOperator, InvalidPermutation, NoInvariantFound,
                     NonConvergence)
from .streams import Stream, delay, _as_mapping


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Nonnegative N x N matrix: the coordinate truncation of a positive
    linear operator."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidOperator(f"expected a square matrix, got shape {m.shape}")
        if not np.isfinite(m).all() or (m < 0).any():
            raise InvalidOperator("matrix entries must be finite and >= 0")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class DiscountVector:
    """Nonnegative weights over N periods summing to one."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise InvalidOperator(f"expected a weight vector, got shape {w.shape}")
        if not np.isfinite(w).all() or (w < 0).any():
            raise InvalidOperator("weights must be finite and >= 0")
        if abs(w.sum() - 1.0) > 1e-12:
            raise InvalidOperator(f"weights must sum to 1, got {w.sum()!r}")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.weights.size


def uniform_vector(n: int) -> DiscountVector:
    return DiscountVector(np.full(n, 1.0 / n))


def adjoint(m: OperatorMatrix) -> OperatorMatrix:
    """The unique adjoint: <M x, p> = <x, adjoint(M) p> for all x, p.

    At finite dimension this is the transpose.
    """
    return OperatorMatrix(m.entries.T.copy())


def verify_eigen(mstar: OperatorMatrix, p: DiscountVector) -> tuple[float, float]:
    """Eigenvalue read-off and L1 residual for a candidate vector.

    Returns (lambda, residual) with lambda = <1, M p> and
    residual = ||M p - lambda p||_1.
    """
    if p.dim != mstar.dim:
        raise InvalidOperator("dimension mismatch between matrix and vector")
    q = mstar.entries @ p.weights
    lam = float(q.sum())
    residual = float(np.abs(q - lam * p.weights).sum())
    return lam, residual


@dataclass(frozen=True)
class EigenResult:
    p: DiscountVector
    eigenvalue: float
    residual: float
    iterations: int


def _kernel_simplex_element(mstar: OperatorMatrix, tol: float) -> np.ndarray:
    """Solve M v = 0, v >= 0, sum v = 1 as a linear feasibility problem."""
    n = mstar.dim
    a_eq = np.vstack([mstar.entries, np.ones((1, n))])
    b_eq = np.concatenate([np.zeros(n), [1.0]])
    res = linprog(c=np.zeros(n), A_eq=a_eq, b_eq=b_eq, bounds=(0.0, None),
                  method="highs")
    if not res.success:
        raise NoInvariantFound("simplex kernel of the operator is empty")
    v = np.clip(res.x, 0.0, None)
    v /= v.sum()
    if float(np.abs(mstar.entries @ v).sum()) > tol:
        raise NoInvariantFound("kernel candidate fails the residual check")
    return v


def invariant_structure(mstar: OperatorMatrix, *, tol: float = 1e-10,
                        max_iter: int = 10 ** 5,
                        cesaro_averaging: bool = False,
                        start: DiscountVector | None = None) -> EigenResult:
    """Normalized eigenvector of a nonnegative matrix via fixed-point iteration.

    Iterates p <- M p / <1, M p> from the uniform start (or ``start``).
    With ``cesaro_averaging`` the convergence test is applied to the
    renormalized running mean of the iterates, which converges for periodic
    operators where the plain iteration cycles.  If <1, M p> underflows
    below 1e-14 the routine switches to a kernel search and returns a
    simplex element of ker M with eigenvalue 0.

    Raises:
        NonConvergence: if the residual never drops below ``tol`` within
            ``max_iter`` iterations (the message carries the last residual).
        NoInvariantFound: if the zero-eigenvalue branch is reached but the
            simplex kernel is empty.
    """
    n = mstar.dim
    if start is None:
        p = np.full(n, 1.0 / n)
    else:
        if start.dim != n:
            raise InvalidOperator("start vector dimension mismatch")
        p = start.weights.copy()
    running_sum = p.copy()
    residual = np.inf
    for it in range(1, max_iter + 1):
        # With averaging on, the running mean is the primary candidate, but
        # the plain iterate stays in play so geometrically convergent cases
        # do not wait on the O(1/k) average.
        candidates = [p]
        if cesaro_averaging:
            candidates.insert(0, running_sum / running_sum.sum())
        for cand in candidates:
            q = mstar.entries @ cand
            lam = float(q.sum())
            residual = float(np.abs(q - lam * cand).sum())
            if residual <= tol:
                return EigenResult(DiscountVector(cand), lam, residual, it)
        step = mstar.entries @ p
        mass = float(step.sum())
        if mass < 1e-14:
            if float(np.abs(mstar.entries @ p).sum()) <= tol:
                return EigenResult(DiscountVector(p), 0.0, 0.0, it)
            v = _kernel_simplex_element(mstar, tol)
            res = float(np.abs(mstar.entries @ v).sum())
            return EigenResult(DiscountVector(v), 0.0, res, it)
        p = step / mass
        running_sum += p
    raise NonConvergence(
        f"no invariant vector within {max_iter} iterations "
        f"(last residual {residual:.3e})", residual=residual)


# ---------------------------------------------------------------------------
# builtin operator truncations
# ---------------------------------------------------------------------------

def builtin_operator(name: str, n: int, *, sigma=None, factor: float | None = None) -> OperatorMatrix:
    """Named truncations acting on streams' leading N coordinates.

    ``cyclic_delay``     (x_0..x_{N-1}) -> (x_{N-1}, x_0, .., x_{N-2})
    ``absorbing_delay``  (x_0..x_{N-1}) -> (0, x_0, .., x_{N-2})
    ``permutation``      x -> (x_{sigma(0)}, .., x_{sigma(N-1)})
    ``scaling``          x -> factor * x
    """
    if n < 1:
        raise InvalidOperator(f"dimension must be >= 1, got {n}")
    m = np.zeros((n, n))
    if name == "cyclic_delay":
        for i in range(n):
            m[i, (i - 1) % n] = 1.0
    elif name == "absorbing_delay":
        for i in range(1, n):
            m[i, i - 1] = 1.0
    elif name == "permutation":
        if sigma is None:
            raise InvalidPermutation("permutation operator needs sigma")
        mapping = _as_mapping(sigma)
        if len(mapping) != n:
            raise InvalidPermutation(
                f"sigma acts on {len(mapping)} indices, operator has {n}")
        for i in range(n):
            m[i, mapping[i]] = 1.0
    elif name == "scaling":
        if factor is None or factor < 0:
            raise InvalidOperator("scaling operator needs a factor >= 0")
        m = float(factor) * np.eye(n)
    else:
        raise InvalidOperator(f"unknown builtin operator {name!r}")
    return OperatorMatrix(m)


def geometric_invariance_check(x: Stream, delta: float) -> float:
    """|D_delta((0, x)) - delta * D_delta(x)|, in closed form.

    The identity holds exactly for geometric weightings on the full
    sequence space; no finite truncation of the delay operator can exhibit
    it, which is why the absorbing truncation above is eigen-degenerate.
    """
    if not 0.0 <= delta < 1.0:
        raise InvalidOperator(f"delta must lie in [0, 1), got {delta}")
    return abs(discounted_value(delay(x), delta) - delta * discounted_value(x, delta))
