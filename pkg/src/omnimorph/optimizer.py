"""Small dense solvers: a box-constrained strictly convex QP and a bounded LP.

Both are sized for the controller and wrench-set queries (8-9 variables,
at most 6 equality rows) and are written for low per-call overhead rather
than generality.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import NonConvergenceError

QP_TOL = 1e-9
QP_MAX_ITER = 200


@dataclass
class BoxQP:
    """minimize 0.5 x'Hx + g'x  subject to  lower <= x <= upper."""

    hessian: np.ndarray
    linear: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def cost(self, x):
        return 0.5 * x @ self.hessian @ x + self.linear @ x


@dataclass
class QPResult:
    x: np.ndarray
    cost: float
    iterations: int
    # -1 at lower bound, +1 at upper bound, 0 free; reusable as a warm start
    active: np.ndarray


def kkt_residual(qp, x):
    """Largest violation of the box-QP optimality conditions at ``x``."""
    grad = qp.hessian @ x + qp.linear
    at_lower = x <= qp.lower
    at_upper = x >= qp.upper
    free = ~(at_lower | at_upper)
    res = np.zeros_like(x)
    res[free] = np.abs(grad[free])
    res[at_lower] = np.maximum(0.0, -grad[at_lower])
    res[at_upper] = np.maximum(0.0, grad[at_upper])
    bound_violation = np.maximum(qp.lower - x, x - qp.upper).clip(min=0.0)
    return float(max(res.max(initial=0.0), bound_violation.max(initial=0.0)))


def solve_box_qp(qp, tol=QP_TOL, max_iter=QP_MAX_ITER, warm_active=None):
    """Primal active-set method on the box.

    The working set is the set of clamped coordinates; each iteration solves
    the reduced Newton system on the free coordinates by Cholesky. A previous
    ``QPResult.active`` may be passed as ``warm_active``.
    """
    H, g, lo, hi = qp.hessian, qp.linear, qp.lower, qp.upper
    n = g.shape[0]
    active = np.zeros(n, dtype=int) if warm_active is None else np.array(warm_active, dtype=int)
    x = np.zeros(n)
    np.clip(x, lo, hi, out=x)
    x[active < 0] = lo[active < 0]
    x[active > 0] = hi[active > 0]

    for it in range(1, max_iter + 1):
        free = active == 0
        target = x.copy()
        if free.any():
            Hff = H[np.ix_(free, free)]
            rhs = -(g[free] + H[np.ix_(free, ~free)] @ x[~free])
            target[free] = cho_solve(cho_factor(Hff), rhs)

        step = target - x
        blocking = None
        t = 1.0
        for i in np.flatnonzero(free):
            if step[i] < 0.0 and target[i] < lo[i]:
                ti = (lo[i] - x[i]) / step[i]
                if ti < t:
                    t, blocking = ti, (i, -1)
            elif step[i] > 0.0 and target[i] > hi[i]:
                ti = (hi[i] - x[i]) / step[i]
                if ti < t:
                    t, blocking = ti, (i, 1)
        x = x + t * step

        if blocking is not None:
            i, side = blocking
            active[i] = side
            x[i] = lo[i] if side < 0 else hi[i]
            continue

        grad = H @ x + g
        # Multiplier sign: at lower bound the gradient must be >= 0, at upper <= 0.
        violation = np.where(active < 0, -grad, np.where(active > 0, grad, 0.0))
        worst = int(np.argmax(violation))
        if violation[worst] <= tol:
            return QPResult(x=x, cost=float(qp.cost(x)), iterations=it, active=active)
        active[worst] = 0

    raise NonConvergenceError(
        f"box QP did not converge in {max_iter} iterations", best=x, iterations=max_iter)


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class BoundedLP:
    """maximize c'x  subject to  A_eq x = b_eq,  lower <= x <= upper."""

    c: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    lower: np.ndarray
    upper: np.ndarray


@dataclass
class LPResult:
    status: LPStatus
    x: np.ndarray = None
    value: float = None
    iterations: int = 0


LP_TOL = 1e-10


def _bounded_simplex(c, A, b, upper, basis, at_upper, max_iter, tol):
    """Revised simplex for max c'x, Ax = b, 0 <= x <= upper (upper may be inf).

    ``basis`` lists basic column indices; nonbasic columns sit at 0 or at
    their upper bound according to ``at_upper``. Entering and leaving
    variables are chosen by Bland's rule, which rules out cycling.
    """
    m, n = A.shape
    basis = list(basis)
    for it in range(max_iter):
        Bm = A[:, basis]
        x = np.where(at_upper, upper, 0.0)
        x[basis] = 0.0
        xb = np.linalg.solve(Bm, b - A @ x)
        x[basis] = xb
        y = np.linalg.solve(Bm.T, c[basis])
        reduced = c - A.T @ y

        entering = None
        is_basic = np.zeros(n, dtype=bool)
        is_basic[basis] = True
        for j in range(n):
            if is_basic[j]:
                continue
            if (not at_upper[j] and reduced[j] > tol) or (at_upper[j] and reduced[j] < -tol):
                entering = j
                break
        if entering is None:
            return LPStatus.OPTIMAL, x, basis, at_upper, it

        j = entering
        direction = 1.0 if not at_upper[j] else -1.0
        col = np.linalg.solve(Bm, A[:, j])
        # Basic values move as xb - direction * t * col; the entering variable
        # itself may just jump to its opposite bound.
        theta = upper[j]
        leave_pos, leave_to_upper = None, False
        for pos in range(m):
            rate = direction * col[pos]
            bi = basis[pos]
            if rate > tol:
                ti, to_upper = max(xb[pos], 0.0) / rate, False
            elif rate < -tol and np.isfinite(upper[bi]):
                ti, to_upper = max(upper[bi] - xb[pos], 0.0) / -rate, True
            else:
                continue
            if ti < theta - tol or (
                    leave_pos is not None and ti <= theta + tol and bi < basis[leave_pos]):
                theta, leave_pos, leave_to_upper = ti, pos, to_upper
        if not np.isfinite(theta):
            return LPStatus.UNBOUNDED, x, basis, at_upper, it
        if leave_pos is None:
            at_upper[j] = not at_upper[j]
            continue
        at_upper[basis[leave_pos]] = leave_to_upper
        at_upper[j] = False
        basis[leave_pos] = j
    raise NonConvergenceError("simplex iteration cap reached", iterations=max_iter)


def solve_lp(lp, tol=LP_TOL, max_iter=500):
    """Two-phase bounded-variable simplex. Bounds must be finite."""
    c = np.asarray(lp.c, dtype=float)
    A = np.atleast_2d(np.asarray(lp.A_eq, dtype=float))
    lo = np.asarray(lp.lower, dtype=float)
    hi = np.asarray(lp.upper, dtype=float)
    m, n = A.shape
    if np.any(lo > hi):
        return LPResult(LPStatus.INFEASIBLE)
    width = hi - lo
    b = np.asarray(lp.b_eq, dtype=float) - A @ lo
    flip = b < 0
    A = np.where(flip[:, None], -A, A)
    b = np.abs(b)

    # Phase 1: artificials start basic, minimize their sum.
    A1 = np.hstack([A, np.eye(m)])
    up1 = np.concatenate([width, np.full(m, np.inf)])
    c1 = np.concatenate([np.zeros(n), -np.ones(m)])
    at_upper = np.zeros(n + m, dtype=bool)
    status, x1, basis, at_upper, it1 = _bounded_simplex(
        c1, A1, b, up1, list(range(n, n + m)), at_upper, max_iter, tol)
    scale = max(1.0, float(np.abs(b).max(initial=0.0)))
    if x1[n:].sum() > 1e-8 * scale:
        return LPResult(LPStatus.INFEASIBLE, iterations=it1)

    # Artificials stay in the problem pinned to zero, so a degenerate one left
    # in the basis (redundant row) is harmless.
    c2 = np.concatenate([c, np.zeros(m)])
    up2 = np.concatenate([width, np.zeros(m)])
    at_upper[n:] = False
    status, x, basis, at_upper, it2 = _bounded_simplex(
        c2, A1, b, up2, basis, at_upper, max_iter, tol)
    if status is LPStatus.UNBOUNDED:
        return LPResult(LPStatus.UNBOUNDED, iterations=it1 + it2)
    # lo + width can round past hi; clip in the original coordinates
    x = np.clip(np.clip(x[:n], 0.0, width) + lo, lo, hi)
    return LPResult(LPStatus.OPTIMAL, x=x, value=float(np.asarray(lp.c) @ x), iterations=it1 + it2)
