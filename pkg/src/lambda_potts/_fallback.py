"""Pure-Python (numpy) versions of the compiled kernels in ``_kernels.pyx``.

Same signatures and results; selected automatically when the extension is
missing or ``LAMBDA_POTTS_PURE=1`` is set.
"""

import numpy as np


def numerators(u, a, b, c, d):
    """Numerators of the translation-invariant boundary-law map, last axis 8."""
    u1, u2, u3, u4, u5, u6, u7, u8 = np.moveaxis(u, -1, 0)
    return np.stack(
        [
            u3 * b * d + u4 * c + u5 * b,
            u6 * a * d + u7 * b + u8 * c,
            c + u1 * b * d + u2 * a,
            u3 * b + u4 * c * d + u5 * b,
            u6 * a + u7 * b * d + u8 * c,
            c + u1 * b + u2 * a * d,
            u3 * b + u4 * c + u5 * b * d,
            u6 * a + u7 * b + u8 * c * d,
        ],
        axis=-1,
    )


def damped_iterate(v, weights, k, t, maxiter, tol):
    """Iterate v <- (1-t) v + t log F(exp v) for a batch of log-space starts.

    Returns (v_final, iterations_used, converged) where convergence means the
    last log-space step had sup-norm below ``tol``.
    """
    a, b, c, d = weights
    v = np.array(v, dtype=np.float64, copy=True)
    n = v.shape[0]
    iters = np.zeros(n, dtype=np.int64)
    done = np.zeros(n, dtype=bool)
    for it in range(1, maxiter + 1):
        active = ~done
        if not active.any():
            break
        u = np.exp(v[active])
        den = u[:, 0] * b + u[:, 1] * a + c * d
        target = k * (np.log(numerators(u, a, b, c, d)) - np.log(den)[:, None])
        new = (1.0 - t) * v[active] + t * target
        step = np.max(np.abs(new - v[active]), axis=1)
        v[active] = new
        iters[active] = it
        finished = np.flatnonzero(active)[step < tol]
        done[finished] = True
    return v, iters, done


def log_weights(parent, grandparent, pair_tab, nnn):
    """Log of the unnormalised weight of every configuration on m vertices.

    Vertex v is digit v of the base-3 configuration index.  Each non-root
    vertex contributes pair_tab[v, s_parent, s_v] and, when it has a
    grandparent, nnn * [s_grandparent == s_v].
    """
    m = len(parent)
    out = np.zeros((3,) * m, dtype=np.float64)
    axis = lambda v: m - 1 - v  # noqa: E731  (C order: vertex 0 is the last axis)
    eye = np.eye(3) * nnn
    for v in range(1, m):
        for other, tab in ((parent[v], pair_tab[v]), (grandparent[v], eye)):
            if other < 0:
                continue
            shape = [1] * m
            shape[axis(other)] = 3
            shape[axis(v)] = 3
            # axis(other) > axis(v), so the table must be indexed [s_v, s_other]
            out += np.asarray(tab).T.reshape(shape)
    return out.reshape(-1)


def marginal_sum(weights, inner):
    """out[i] = sum over o of weights[o * inner + i]."""
    w = np.asarray(weights, dtype=np.float64).reshape(-1, inner)
    return np.ascontiguousarray(w.T).sum(axis=1)
