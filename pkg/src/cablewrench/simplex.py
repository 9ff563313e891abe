"""Dense bounded-variable primal simplex with Bland's anti-cycling rule.

Solves ``min c.x  s.t.  A x = b,  lower <= x <= upper`` where every lower
bound is finite and upper bounds may be ``inf``. Intended for the tiny
(tens of variables) programs of the tension feasibility test, where
determinism matters more than speed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LPError

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass
class LPResult:
    status: str
    x: np.ndarray | None
    fun: float
    iterations: int


def _iterate(c, A, b, lower, upper, basis, at_upper, tol, max_iter):
    m, n = A.shape
    basis = list(basis)
    in_basis = np.zeros(n, dtype=bool)
    in_basis[basis] = True
    movable = upper - lower > 0
    for it in range(max_iter):
        x = np.where(at_upper, upper, lower)
        x[basis] = 0.0
        B = A[:, basis]
        xb = np.linalg.solve(B, b - A @ x)
        x[basis] = xb
        y = np.linalg.solve(B.T, c[basis])
        d = c - A.T @ y
        eligible = ~in_basis & movable & ((~at_upper & (d < -tol)) | (at_upper & (d > tol)))
        entering = np.flatnonzero(eligible)
        if entering.size == 0:
            return x, basis, at_upper, it
        j = int(entering[0])
        sigma = -1.0 if at_upper[j] else 1.0
        rate = -sigma * np.linalg.solve(B, A[:, j])

        theta = upper[j] - lower[j]
        leave_row, leave_to_upper = -1, False
        lb, ub = lower[basis], upper[basis]
        best_var = n
        for i in range(m):
            if rate[i] < -tol:
                step, to_upper = max(xb[i] - lb[i], 0.0) / -rate[i], False
            elif rate[i] > tol and np.isfinite(ub[i]):
                step, to_upper = max(ub[i] - xb[i], 0.0) / rate[i], True
            else:
                continue
            slack = 1e-12 * max(1.0, theta) if np.isfinite(theta) else 0.0
            # Bland: among (near) ties the smallest variable index leaves
            if step < theta - slack or (step <= theta + slack and leave_row >= 0 and basis[i] < best_var):
                theta, leave_row, leave_to_upper, best_var = step, i, to_upper, basis[i]
        if not np.isfinite(theta):
            raise _Unbounded()
        if leave_row < 0:
            at_upper[j] = not at_upper[j]
            continue
        leaving = basis[leave_row]
        basis[leave_row] = j
        in_basis[leaving], in_basis[j] = False, True
        at_upper[leaving] = leave_to_upper
        at_upper[j] = False
    raise LPError(f"simplex did not converge within {max_iter} iterations")


class _Unbounded(Exception):
    pass


def solve(c, A, b, lower, upper, basis=None, at_upper=None, tol=1e-9, max_iter=5000) -> LPResult:
    """Minimize ``c.x`` over ``{A x = b, lower <= x <= upper}``.

    If ``basis`` is given it must be a primal-feasible starting basis (with
    ``at_upper`` flagging nonbasic variables resting on their upper bound);
    otherwise a phase-one problem with artificial variables is solved first.
    """
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    m, n = A.shape
    if not np.all(np.isfinite(lower)):
        raise LPError("lower bounds must be finite")
    if np.any(lower > upper):
        return LPResult(INFEASIBLE, None, np.inf, 0)
    at_upper = np.zeros(n, dtype=bool) if at_upper is None else np.asarray(at_upper, dtype=bool).copy()

    iterations = 0
    if basis is None:
        x0 = lower.copy()
        resid = b - A @ x0
        signs = np.where(resid >= 0, 1.0, -1.0)
        A1 = np.hstack([A, np.diag(signs)])
        c1 = np.concatenate([np.zeros(n), np.ones(m)])
        lo1 = np.concatenate([lower, np.zeros(m)])
        up1 = np.concatenate([upper, np.full(m, np.inf)])
        au1 = np.concatenate([np.zeros(n, dtype=bool), np.zeros(m, dtype=bool)])
        try:
            x, basis1, au1, iterations = _iterate(c1, A1, b, lo1, up1, list(range(n, n + m)), au1, tol, max_iter)
        except _Unbounded:  # pragma: no cover - phase one is bounded below by 0
            raise LPError("phase one reported unbounded")
        scale = max(1.0, float(np.max(np.abs(b))) if m else 1.0)
        if x[n:].sum() > 1e-9 * scale:
            return LPResult(INFEASIBLE, None, np.inf, iterations)
        # artificials stay in the problem pinned to zero so the basis stays square
        c2 = np.concatenate([c, np.zeros(m)])
        up2 = np.concatenate([upper, np.zeros(m)])
        try:
            x, _, _, it2 = _iterate(c2, A1, b, lo1, up2, basis1, au1, tol, max_iter)
        except _Unbounded:
            return LPResult(UNBOUNDED, None, -np.inf, iterations)
        x = x[:n]
        iterations += it2
    else:
        try:
            x, _, _, iterations = _iterate(c, A, b, lower, upper, list(basis), at_upper, tol, max_iter)
        except _Unbounded:
            return LPResult(UNBOUNDED, None, -np.inf, 0)
    x = np.clip(x, lower, upper)
    return LPResult(OPTIMAL, x, float(c @ x), iterations)
