"""
plain-text dump of a standard-form problem, one line per nonzero, for
cross-checking against other optimizers.

    # v2g-miqp
    size <n> <m_ub> <m_eq> <constant>
    var <j> <name> <lb> <ub> <c> <C|B>
    q <i> <j> <value>
    ub <r> <label> <rhs>
    aub <r> <j> <value>
    eq <r> <label> <rhs>
    aeq <r> <j> <value>
    fixed <name> <value>

indices are zero-based; `q` lists the full symmetric matrix of
0.5 x'Qx.
"""
from lk_utils import dumps

from .problem import MiqpProblem

__all__ = ['dump_problem', 'format_problem']


def format_problem(problem: MiqpProblem) -> str:
    binaries = set(int(j) for j in problem.binaries)
    lines = ['# v2g-miqp', 'size {} {} {} {!r}'.format(
        problem.n, problem.a_ub.shape[0], problem.a_eq.shape[0],
        float(problem.constant)
    )]
    for j, key in enumerate(problem.directory):
        lines.append('var {} {} {!r} {!r} {!r} {}'.format(
            j, key, float(problem.lb[j]), float(problem.ub[j]),
            float(problem.c[j]),
            'B' if j in binaries else 'C'
        ))
    q = problem.q.tocoo()
    for i, j, v in sorted(zip(q.row, q.col, q.data)):
        lines.append(f'q {i} {j} {float(v)!r}')
    for tag, a, b, labels in (('ub', problem.a_ub, problem.b_ub,
                               problem.ub_labels),
                              ('eq', problem.a_eq, problem.b_eq,
                               problem.eq_labels)):
        a = a.tocsr()
        for r in range(a.shape[0]):
            label = labels[r] if labels else f'r{r}'
            lines.append(f'{tag} {r} {label} {float(b[r])!r}')
            for p in range(a.indptr[r], a.indptr[r + 1]):
                lines.append(
                    f'a{tag} {r} {a.indices[p]} {float(a.data[p])!r}'
                )
    for key, value in problem.fixed.items():
        lines.append(f'fixed {key} {value!r}')
    return '\n'.join(lines) + '\n'


def dump_problem(problem: MiqpProblem, file: str):
    dumps(format_problem(problem), file)
