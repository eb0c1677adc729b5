"""
convex QP relaxations: a primal-dual interior point method (Mehrotra
predictor-corrector) followed by an active-set polish.

    minimize    0.5 x'Qx + c'x
    subject to  A x == b
                G x + s == h,  s >= 0

G stacks the problem's inequality rows and the finite column bounds.
columns whose bounds coincide are substituted out first. newton steps
solve the reduced KKT system

    [Q + G'DG + rI    A' ] [dx]
    [A               -rI ] [dy]

with D = diag(z / s), factored by a sparse LU and refined against the
unregularized matrix. a solved parent hands its multipliers to its
children, whose iteration starts from them pushed back off the boundary.
relaxations without a quadratic term go to HiGHS as plain LPs.
"""
from dataclasses import dataclass
from typing import Optional
from typing import Union

import numpy as np
from scipy import sparse
from scipy.optimize import linprog
from scipy.sparse.linalg import splu

from .config import SolverConfig
from ..core import QpIterationLimit
from ..core import QpNumericalError
from ..core import logd
from ..model import MiqpProblem

__all__ = ['QpDuals', 'QpResult', 'UNBOUNDED_GUARD', 'solve_qp']

UNBOUNDED_GUARD = 1e10
_FIX_TOL = 1e-12
_REG = 1e-9
_STEP_FRACTION = 0.99
_WARM_SHIFT = 1e-2


@dataclass(frozen=True, eq=False)
class QpDuals:
    """ multipliers in the full problem's row and column indexing. """
    eq: np.ndarray
    ub: np.ndarray
    lower: np.ndarray
    upper: np.ndarray


@dataclass(frozen=True, eq=False)
class QpResult:
    status: str
    #   'optimal', 'infeasible' or 'unbounded'
    x: Optional[np.ndarray]
    objective: float
    iterations: int = 0
    polished: bool = False
    duals: Optional[QpDuals] = None
    
    @property
    def ok(self) -> bool:
        return self.status == 'optimal'


def solve_qp(
        problem: MiqpProblem,
        config: SolverConfig = SolverConfig(),
        warm_start: Union[np.ndarray, QpResult] = None,
        lb: np.ndarray = None,
        ub: np.ndarray = None,
) -> QpResult:
    """
    solve the continuous relaxation of `problem`, binaries ranging over
    their bounds.
    
    args:
        warm_start: a full-length point used as the initial iterate, or a
            parent's result whose point and multipliers are both reused.
        lb, ub: node bounds overriding the problem's (binary fixings).
    
    raises:
        QpIterationLimit: no convergence within `config.qp_max_iterations`
            on a problem that is feasible.
        QpNumericalError: the KKT system could not be factored, or the
            iteration broke down on a feasible problem.
    """
    lb = problem.lb if lb is None else lb
    ub = problem.ub if ub is None else ub
    tol = config.absolute_feasibility_tolerance
    if np.any(lb > ub + tol):
        return QpResult('infeasible', None, np.inf)
    
    red = _Reduced(problem, lb, np.maximum(ub, lb), tol)
    if red.conflict:
        return QpResult('infeasible', None, np.inf)
    if red.n == 0:
        x = red.expand(np.zeros(0))
        return QpResult('optimal', x, problem.objective(x))
    if red.q.count_nonzero() == 0:
        return _solve_lp(red, problem, config)
    
    duals = None
    if isinstance(warm_start, QpResult):
        warm_start, duals = warm_start.x, warm_start.duals
    x0 = red.initial_point(None if warm_start is None
                           else np.asarray(warm_start)[red.free])
    ipm = _InteriorPoint(red, config)
    outcome = 'cold'
    if duals is not None:
        outcome = ipm.run(x0, *red.dual_start(duals))
        if outcome != 'converged':
            logd(f'qp: warm start {outcome}, restarting cold')
    if outcome != 'converged':
        outcome = ipm.run(x0)
    if outcome != 'converged':
        status = _classify(red, outcome, ipm.iterations, config)
        return QpResult(status, None, np.inf, ipm.iterations)
    
    x, polished = ipm.x, False
    if config.polish:
        xp = _polish(red, ipm, tol)
        if xp is not None and red.objective(xp) <= red.objective(x) + \
                1e-9 * (1 + abs(red.objective(x))):
            x, polished = xp, True
    x = red.expand(x)
    return QpResult('optimal', x, problem.objective(x), ipm.iterations,
                    polished, red.expand_duals(ipm.y, ipm.z, problem))


def _solve_lp(red: '_Reduced', problem: MiqpProblem,
              config: SolverConfig) -> QpResult:
    res = linprog(red.c, **_linprog_args(red), method='highs')
    iterations = int(getattr(res, 'nit', 0) or 0)
    if res.status == 0:
        x = red.expand(res.x)
        return QpResult('optimal', x, problem.objective(x), iterations)
    if res.status == 2:
        return QpResult('infeasible', None, np.inf, iterations)
    if res.status == 3:
        return QpResult('unbounded', None, np.inf, iterations)
    if res.status == 1:
        raise QpIterationLimit(f'linear relaxation hit its iteration limit '
                               f'({res.message})')
    raise QpNumericalError(f'linear relaxation failed: {res.message}')


# -----------------------------------------------------------------------------

class _Reduced:
    
    def __init__(self, problem: MiqpProblem, lb, ub, tol):
        fixed = ub - lb <= _FIX_TOL
        self.n_full = problem.n
        self.free = f = np.flatnonzero(~fixed)
        self.gone = g = np.flatnonzero(fixed)
        self.xf = xf = lb[g]
        self.lb, self.ub = lb[f], ub[f]
        self.n = len(f)
        self.conflict = False
        
        q = problem.q.tocsc()
        self.q = q[f][:, f].tocsc()
        self.c = problem.c[f] + q[f][:, g] @ xf
        self.constant = problem.constant + float(problem.c[g] @ xf) + \
            0.5 * float(xf @ (q[g][:, g] @ xf))
        
        a_ub, b_ub, self.ub_rows = self._rows(problem.a_ub, problem.b_ub,
                                              lambda r: r < -tol)
        self.a, self.b, self.eq_rows = self._rows(
            problem.a_eq, problem.b_eq, lambda r: abs(r) > tol
        )
        self.a_ub, self.b_ub = a_ub, b_ub
        
        self.has_lb = has_lb = np.flatnonzero(np.isfinite(self.lb))
        self.has_ub = has_ub = np.flatnonzero(np.isfinite(self.ub))
        eye = sparse.identity(self.n, format='csr')
        self.g = sparse.vstack([a_ub, -eye[has_lb], eye[has_ub]],
                               format='csr')
        self.h = np.concatenate([b_ub, -self.lb[has_lb], self.ub[has_ub]])
    
    def _rows(self, a, b, violated):
        a = a.tocsc()
        rhs = b - a[:, self.gone] @ self.xf
        a = a[:, self.free].tocsr()
        nnz = np.diff(a.indptr)
        if any(violated(rhs[r]) for r in np.flatnonzero(nnz == 0)):
            self.conflict = True
        keep = np.flatnonzero(nnz > 0)
        return a[keep], rhs[keep], keep
    
    def initial_point(self, warm: Optional[np.ndarray]) -> np.ndarray:
        if warm is not None:
            return np.clip(warm, self.lb, self.ub)
        x = np.zeros(self.n)
        both = np.isfinite(self.lb) & np.isfinite(self.ub)
        x[both] = (self.lb[both] + self.ub[both]) / 2
        only_lb = np.isfinite(self.lb) & ~both
        x[only_lb] = self.lb[only_lb] + 1
        only_ub = np.isfinite(self.ub) & ~both
        x[only_ub] = self.ub[only_ub] - 1
        return x
    
    def objective(self, x) -> float:
        return float(0.5 * x @ (self.q @ x) + self.c @ x + self.constant)
    
    def expand(self, x) -> np.ndarray:
        out = np.zeros(self.n_full)
        out[self.free] = np.clip(x, self.lb, self.ub)
        out[self.gone] = self.xf
        return out
    
    def dual_start(self, duals: QpDuals):
        """ (y, z) for this reduction, taken from full-problem multipliers. """
        z = np.concatenate([duals.ub[self.ub_rows],
                            duals.lower[self.free[self.has_lb]],
                            duals.upper[self.free[self.has_ub]]])
        return duals.eq[self.eq_rows], z
    
    def expand_duals(self, y, z, problem: MiqpProblem) -> QpDuals:
        k, nl = len(self.ub_rows), len(self.has_lb)
        eq = np.zeros(problem.a_eq.shape[0])
        eq[self.eq_rows] = y
        ub = np.zeros(problem.a_ub.shape[0])
        ub[self.ub_rows] = z[:k]
        lower, upper = np.zeros(self.n_full), np.zeros(self.n_full)
        lower[self.free[self.has_lb]] = z[k:k + nl]
        upper[self.free[self.has_ub]] = z[k + nl:]
        return QpDuals(eq, ub, lower, upper)


class _Kkt:
    """ LU of the regularized saddle-point matrix, refined against the exact one. """
    
    def __init__(self, h, a, reg=_REG):
        n, m = h.shape[0], a.shape[0]
        self.n = n
        if m:
            exact = sparse.bmat([[h, a.T], [a, sparse.csc_matrix((m, m))]],
                                format='csc')
            shift = sparse.diags(np.concatenate([np.full(n, reg),
                                                 np.full(m, -reg)]))
        else:
            exact = sparse.csc_matrix(h)
            shift = sparse.identity(n) * reg
        self.exact = exact
        for _ in range(3):
            try:
                self.lu = splu((exact + shift).tocsc())
                break
            except RuntimeError:
                shift = shift * 1e3
        else:
            raise QpNumericalError('KKT matrix is singular')
    
    def solve(self, rhs: np.ndarray, refine: int = 3) -> np.ndarray:
        sol = self.lu.solve(rhs)
        best, best_res = sol, np.inf
        for _ in range(refine + 1):
            res = rhs - self.exact @ sol
            norm = float(np.max(np.abs(res))) if len(res) else 0.0
            if norm < best_res:
                best, best_res = sol, norm
            if norm <= 1e-14 * (1 + float(np.max(np.abs(rhs)))):
                break
            sol = sol + self.lu.solve(res)
        return best


class _InteriorPoint:
    
    def __init__(self, red: _Reduced, config: SolverConfig):
        self.red = red
        self.tol = config.absolute_feasibility_tolerance
        self.max_iterations = config.qp_max_iterations
        self.iterations = 0
        self.x = self.s = self.z = self.y = None
    
    def run(self, x0, y0=None, z0=None) -> str:
        """
        args:
            y0, z0: multipliers of a nearby solved problem. slacks and
                multipliers are shifted off zero before iterating.
        
        returns:
            'converged', 'iteration-limit', 'stalled', 'diverged' or
            'numerical'.
        """
        red = self.red
        g, h, a, b, q, c = red.g, red.h, red.a, red.b, red.q, red.c
        m = g.shape[0]
        gt, at = g.T.tocsr(), a.T.tocsr()
        x = x0
        if z0 is None:
            s = np.maximum(h - g @ x, 1.0)
            z = np.ones(m)
            y = np.zeros(a.shape[0])
        else:
            s = np.maximum(h - g @ x, _WARM_SHIFT)
            z = np.maximum(z0, _WARM_SHIFT)
            y = np.array(y0, dtype=float)
        scale_d = 1 + (float(np.max(np.abs(c))) if len(c) else 0.0)
        
        for it in range(self.max_iterations + 1):
            self.iterations = it
            self.x, self.s, self.z, self.y = x, s, z, y
            r_d = q @ x + c + at @ y + gt @ z
            r_p = a @ x - b
            r_i = g @ x + s - h
            gap = float(s @ z)
            mu = gap / m if m else 0.0
            pres = max(_norm(r_p), _norm(r_i))
            if pres <= self.tol and _norm(r_d) <= self.tol * scale_d and \
                    gap <= 1e-9 * (1 + abs(red.objective(x))):
                return 'converged'
            if it == self.max_iterations:
                return 'iteration-limit'
            if _norm(x) > UNBOUNDED_GUARD:
                return 'diverged'
            if m and np.max(z) > 1e13:
                return 'stalled'
            
            d = z / s
            try:
                kkt = _Kkt(q + gt @ sparse.diags(d) @ g, a)
            except QpNumericalError:
                return 'numerical'
            
            def direction(r_sz):
                rhs = -r_d - gt @ ((z * r_i - r_sz) / s)
                sol = kkt.solve(np.concatenate([rhs, -r_p]))
                dx, dy = sol[:red.n], sol[red.n:]
                gdx = g @ dx
                return dx, dy, -r_i - gdx, (z * (r_i + gdx) - r_sz) / s
            
            _, _, ds, dz = direction(s * z)
            alpha = min(_max_step(s, ds), _max_step(z, dz))
            mu_aff = float((s + alpha * ds) @ (z + alpha * dz)) / m if m \
                else 0.0
            sigma = (mu_aff / mu) ** 3 if mu > 0 else 0.0
            dx, dy, ds, dz = direction(s * z + ds * dz - sigma * mu)
            if not all(np.all(np.isfinite(v)) for v in (dx, dy, ds, dz)):
                return 'numerical'
            alpha = min(1.0, _STEP_FRACTION *
                        min(_max_step(s, ds), _max_step(z, dz)))
            if alpha < 1e-10:
                return 'stalled'
            x, y = x + alpha * dx, y + alpha * dy
            s, z = s + alpha * ds, z + alpha * dz
        return 'iteration-limit'  # pragma: no cover


def _norm(v) -> float:
    return float(np.max(np.abs(v))) if len(v) else 0.0


def _max_step(v, dv) -> float:
    neg = dv < 0
    if not neg.any():
        return 1.0
    return min(1.0, float(np.min(-v[neg] / dv[neg])))


def _polish(red: _Reduced, ipm: _InteriorPoint, tol) -> Optional[np.ndarray]:
    """
    re-solve with the constraints the interior point found active held as
    equalities. returns None when that point is not a valid KKT point.
    """
    active = ipm.z > ipm.s
    g_act = red.g[np.flatnonzero(active)]
    a = sparse.vstack([red.a, g_act], format='csr')
    try:
        kkt = _Kkt(red.q, a, reg=1e-10)
    except QpNumericalError:
        return None
    sol = kkt.solve(np.concatenate([-red.c, red.b, red.h[active]]))
    x, lam = sol[:red.n], sol[red.n + red.a.shape[0]:]
    if not np.all(np.isfinite(sol)):
        return None
    if len(red.h) and np.max(red.g @ x - red.h) > tol:
        return None
    if len(red.b) and _norm(red.a @ x - red.b) > tol:
        return None
    if len(lam) and np.min(lam) < -1e-7 * (1 + _norm(lam)):
        return None
    return x


def _classify(red: _Reduced, outcome: str, iterations: int,
              config: SolverConfig) -> str:
    """ tell an infeasible problem apart from a solver breakdown. """
    res = linprog(np.zeros(red.n), **_linprog_args(red), method='highs')
    if res.status == 2:
        logd(f'qp: infeasible after {iterations} iterations ({outcome})')
        return 'infeasible'
    if outcome == 'diverged' and res.status == 0:
        return 'unbounded'
    if outcome == 'iteration-limit':
        raise QpIterationLimit(
            f'no convergence within {config.qp_max_iterations} iterations'
        )
    raise QpNumericalError(f'interior point {outcome} after {iterations} '
                           f'iterations on a feasible problem')


def _linprog_args(red: _Reduced) -> dict:
    bounds = [(None if np.isinf(lo) else lo, None if np.isinf(hi) else hi)
              for lo, hi in zip(red.lb, red.ub)]
    return dict(
        A_ub=red.a_ub if red.a_ub.shape[0] else None,
        b_ub=red.b_ub if red.a_ub.shape[0] else None,
        A_eq=red.a if red.a.shape[0] else None,
        b_eq=red.b if red.a.shape[0] else None,
        bounds=bounds,
    )
