"""
problem reduction before branch and bound.

the left side of the desired-reach row only depends on data, so every Z
is decided here. fixed columns are substituted out, and equality rows left
with a single free column fix that column in turn (an SOC chain collapses
once its rates are fixed).
"""
import numpy as np

from .problem import MiqpProblem
from ..core import logd
from ..domain import ENERGY_TOL
from ..domain import charge_step

__all__ = ['presolve']

_FIX_TOL = 1e-12


def presolve(problem: MiqpProblem) -> MiqpProblem:
    """
    returns:
        the reduced problem. its `fixed` map holds every removed column, so
        `problem.value()` still answers for them. a row that becomes empty
        but is violated stays in the problem as an all-zero row (the solver
        reports it as infeasible).
    """
    if problem.n == 0:
        return problem
    lb, ub = problem.lb.copy(), problem.ub.copy()
    _fix_z(problem, lb, ub)
    _propagate_singletons(problem, lb, ub)
    
    fixed = ub - lb <= _FIX_TOL
    if not fixed.any():
        return problem.with_bounds(lb, ub)
    reduced = _substitute(problem, lb, ub, fixed)
    logd(f'presolve: {problem.n} -> {reduced.n} columns, '
         f'{len(problem.binaries)} -> {len(reduced.binaries)} binaries')
    return reduced


def _fix_z(problem, lb, ub):
    lay, d = problem.layout, problem.directory
    for s in lay.sessions:
        z = d.col('z', s.id)
        if z is None:
            continue
        reach = s.soc_init_kwh + charge_step(s.spec, lay.grid) * \
            (s.t_dep - s.t_arr)
        if reach >= s.soc_desired_kwh:
            lb[z] = ub[z] = 0.0
        else:
            lb[z] = ub[z] = 1.0
            for t in s.plug_periods:
                col = d.col('x_c', s.id, t)
                lb[col] = ub[col] = 1.0


def _propagate_singletons(problem, lb, ub):
    a = problem.a_eq.tocsr()
    b = problem.b_eq
    changed = True
    while changed:
        changed = False
        fixed = ub - lb <= _FIX_TOL
        for r in range(a.shape[0]):
            cols = a.indices[a.indptr[r]:a.indptr[r + 1]]
            vals = a.data[a.indptr[r]:a.indptr[r + 1]]
            free = ~fixed[cols]
            if free.sum() != 1:
                continue
            k = int(np.flatnonzero(free)[0])
            col, coef = cols[k], vals[k]
            rest = float(vals[~free] @ lb[cols[~free]])
            value = (b[r] - rest) / coef
            if value < lb[col] - ENERGY_TOL or value > ub[col] + ENERGY_TOL:
                # leave it for the solver to prove infeasible.
                continue
            value = min(max(value, lb[col]), ub[col])
            lb[col] = ub[col] = value
            fixed[col] = True
            changed = True


def _substitute(problem, lb, ub, fixed) -> MiqpProblem:
    keep = np.flatnonzero(~fixed)
    gone = np.flatnonzero(fixed)
    xf = lb[gone]
    q = problem.q.tocsc()
    
    c = problem.c[keep] + q[keep][:, gone] @ xf
    constant = problem.constant + float(problem.c[gone] @ xf) + \
        0.5 * float(xf @ (q[gone][:, gone] @ xf))
    
    a_ub, b_ub, ub_labels = _reduce_rows(
        problem.a_ub, problem.b_ub, problem.ub_labels, keep, gone, xf,
        lambda rhs: rhs < -ENERGY_TOL
    )
    a_eq, b_eq, eq_labels = _reduce_rows(
        problem.a_eq, problem.b_eq, problem.eq_labels, keep, gone, xf,
        lambda rhs: abs(rhs) > ENERGY_TOL
    )
    
    position = -np.ones(problem.n, dtype=int)
    position[keep] = np.arange(len(keep))
    binaries = position[problem.binaries]
    binaries = binaries[binaries >= 0]
    
    fixings = dict(problem.fixed)
    for col, value in zip(gone, xf):
        fixings[problem.directory[col]] = float(value)
    
    return MiqpProblem(
        q=q[keep][:, keep].tocsc(),
        c=c,
        constant=constant,
        a_ub=a_ub, b_ub=b_ub,
        a_eq=a_eq, b_eq=b_eq,
        lb=lb[keep], ub=ub[keep],
        binaries=binaries,
        directory=problem.directory.subset(keep),
        layout=problem.layout,
        ub_labels=ub_labels,
        eq_labels=eq_labels,
        fixed=fixings,
    )


def _reduce_rows(a, b, labels, keep, gone, xf, violated):
    """ empty rows are dropped unless `violated` by the fixed columns. """
    a = a.tocsc()
    rhs = b - a[:, gone] @ xf
    a = a[:, keep].tocsr()
    nnz = np.diff(a.indptr)
    rows = [r for r in range(a.shape[0]) if nnz[r] or violated(rhs[r])]
    labels = tuple(labels[r] for r in rows) if labels else ()
    return a[rows], rhs[rows], labels
