"""Translation-invariant boundary laws for the lambda model on the semi-infinite tree.

A translation-invariant boundary field is encoded by eight positive numbers
u1..u8, the entries of a 3x3 matrix U[s][t] with U[1][1] = 1 removed:

    (u1, u2, u3, u4, u5, u6, u7, u8) = U[1,2], U[1,3], U[2,1], U[2,2],
                                       U[2,3], U[3,1], U[3,2], U[3,3]

Compatibility of the finite-volume measures is equivalent to u = F(u) with
F given by ``rhs_map``.  On the slice A (six equal entries, u4 = u8 = 1) and
a = b the system collapses to a scalar cubic, whose root count decides the
phase transition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._core import kernels
from .model import ModelParams

# d at which (d + d^2)/2 = 9, the necessary condition for three solutions
D_STAR = (math.sqrt(73.0) - 1.0) / 2.0
UPSILON_CRIT = 9.0

RESIDUAL_TOL = 1e-12
DEDUP_TOL = 1e-8


@dataclass(frozen=True)
class Weights:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not all(v > 0 and math.isfinite(v) for v in self.astuple()):
            raise ValueError(f"weights must be finite and positive, got {self}")

    def astuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


def weights(p: ModelParams) -> Weights:
    if not p.beta > 0:
        raise ValueError("beta must be positive")
    beta = float(p.beta)
    return Weights(*(math.exp(beta * float(x)) for x in p.couplings()))


def _as_weights(w: Weights | ModelParams) -> Weights:
    return weights(w) if isinstance(w, ModelParams) else w


def _linear_parts(w: Weights):
    """Numerators N = C @ u + e0, denominator D = g @ u + cd."""
    a, b, c, d = w.astuple()
    C = np.zeros((8, 8))
    # columns are u1..u8 (zero-based)
    C[0, [2, 3, 4]] = (b * d, c, b)
    C[1, [5, 6, 7]] = (a * d, b, c)
    C[2, [0, 1]] = (b * d, a)
    C[3, [2, 3, 4]] = (b, c * d, b)
    C[4, [5, 6, 7]] = (a, b * d, c)
    C[5, [0, 1]] = (b, a * d)
    C[6, [2, 3, 4]] = (b, c, b * d)
    C[7, [5, 6, 7]] = (a, b, c * d)
    e0 = np.zeros(8)
    e0[[2, 5]] = c
    g = np.zeros(8)
    g[[0, 1]] = (b, a)
    return C, e0, g, c * d


def rhs_map(u, w: Weights | ModelParams, k: int = 2) -> np.ndarray:
    """One step of the boundary-law recursion; works on (..., 8) arrays."""
    w = _as_weights(w)
    u = np.asarray(u, dtype=np.float64)
    if np.any(u <= 0):
        raise ValueError("field components must be positive")
    C, e0, g, cd = _linear_parts(w)
    num = u @ C.T + e0
    den = u @ g + cd
    return (num / den[..., None]) ** k


def residual(u, w: Weights | ModelParams, k: int = 2) -> float:
    return float(np.max(np.abs(rhs_map(u, w, k) - np.asarray(u))))


def _newton(u, w: Weights, k: int, maxiter: int = 60) -> np.ndarray | None:
    """Newton's method on k log(N/D) - v = 0 in v = log u, with backtracking."""
    C, e0, g, cd = _linear_parts(w)

    def F(v):
        u = np.exp(v)
        return k * (np.log(C @ u + e0) - math.log(g @ u + cd)) - v

    v = np.log(np.asarray(u, dtype=np.float64))
    f = F(v)
    for _ in range(maxiter):
        if not np.all(np.isfinite(f)):
            return None
        if np.max(np.abs(f)) < 1e-15:
            break
        u = np.exp(v)
        N = C @ u + e0
        D = g @ u + cd
        jac = k * (C * u[None, :] / N[:, None] - (g * u)[None, :] / D) - np.eye(8)
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None
        t = 1.0
        norm = np.max(np.abs(f))
        while t > 1e-6:
            cand = v + t * step
            fc = F(cand)
            if np.all(np.isfinite(fc)) and np.max(np.abs(fc)) < norm:
                break
            t *= 0.5
        else:
            break
        v, f = cand, fc
    return np.exp(v)


def _dedup(points: list[np.ndarray], tol: float) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for p in points:
        if not any(relative_distance(p, q) < tol for q in out):
            out.append(p)
    return sorted(out, key=lambda x: tuple(x))


def relative_distance(u, v) -> float:
    u, v = np.asarray(u), np.asarray(v)
    scale = max(np.max(np.abs(u)), np.max(np.abs(v)))
    return float(np.max(np.abs(u - v)) / scale)


def fixed_points_TI(
    p: ModelParams | Weights,
    k: int = 2,
    starts: int = 64,
    seed: int = 0,
    damping: float = 0.5,
    maxiter: int = 4000,
    seed_invariant: bool = True,
) -> list[np.ndarray]:
    """Translation-invariant solutions of u = F(u), deduplicated and sorted.

    Damped log-space iteration from ``starts`` log-uniform points in
    [1e-3, 1e3]^8, each end point refined by Newton.  Unstable fixed points
    are only reachable through the Newton step, so for a = b and k = 2 the
    lifted roots of the scalar cubic are added as extra starts.  Starts whose
    polished residual stays above 1e-12 are dropped.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    w = _as_weights(p)
    rng = np.random.default_rng(seed)
    v0 = rng.uniform(math.log(1e-3), math.log(1e3), size=(starts, 8))
    v, _, _ = kernels.damped_iterate(v0, w.astuple(), k, damping, maxiter, 1e-13)
    candidates = [np.exp(row) for row in v]
    if seed_invariant and k == 2 and w.a == w.b:
        alpha, upsilon = reduce_to_scalar(w)
        candidates += [lift_scalar_to_A(X, w) for X in scalar_fixed_points(alpha, upsilon)]
    found = []
    for u in candidates:
        if not np.all(np.isfinite(u)):
            continue
        polished = _newton(u, w, k)
        if polished is not None and residual(polished, w, k) < RESIDUAL_TOL:
            found.append(polished)
    return _dedup(found, DEDUP_TOL)


def u_matrix(u) -> np.ndarray:
    """Embed u1..u8 into the 3x3 matrix U[s-1][t-1] with U[0][0] = 1."""
    u = np.asarray(u, dtype=np.float64)
    return np.concatenate([[1.0], u]).reshape(3, 3)


def flip_u(u) -> np.ndarray:
    """Image of a field under the spin relabelling 1 <-> 3, renormalised."""
    U = u_matrix(u)[::-1, ::-1]
    return (U / U[0, 0]).reshape(-1)[1:]


def in_set_A(u, tol: float = 1e-12) -> bool:
    u = np.asarray(u)
    six = u[[0, 1, 2, 4, 5, 6]]
    return bool(np.ptp(six) <= tol * max(1.0, abs(six[0])) and abs(u[3] - u[7]) <= tol)


# scalar reduction on the invariant slice ------------------------------------


def reduce_to_scalar(w: Weights | ModelParams) -> tuple[float, float]:
    """(alpha, upsilon) of the scalar equation alpha X = ((1+X)/(upsilon+X))^2."""
    w = _as_weights(w)
    if w.a != w.b:
        raise ValueError("the scalar reduction needs a == b (a_bar == b_frak)")
    alpha = 4.0 * w.c / (w.a * (1.0 + w.d) ** 3)
    upsilon = (w.d + w.d * w.d) / 2.0
    return alpha, upsilon


def cubic_coefficients(alpha: float, upsilon: float) -> tuple[float, float, float, float]:
    return (alpha, 2 * alpha * upsilon - 1, alpha * upsilon**2 - 2, -1.0)


def scalar_fixed_points(alpha: float, upsilon: float) -> list[float]:
    """Distinct positive roots of the cleared cubic, ascending."""
    if not (alpha > 0 and upsilon > 0):
        raise ValueError("alpha and upsilon must be positive")
    coeffs = cubic_coefficients(alpha, upsilon)
    poly = np.polynomial.Polynomial(coeffs[::-1])
    dpoly = poly.deriv()
    roots = []
    for r in np.roots(coeffs):
        # a double root comes back as a pair with tiny imaginary parts
        if abs(r.imag) > 1e-6 * max(1.0, abs(r)) or r.real <= 0:
            continue
        x = float(r.real)
        for _ in range(8):
            dp = dpoly(x)
            if dp == 0:
                break
            nx = x - poly(x) / dp
            if not (nx > 0 and abs(poly(nx)) < abs(poly(x))):
                break
            x = nx
        roots.append(x)
    roots.sort()
    out: list[float] = []
    for x in roots:
        if not out or abs(x - out[-1]) > 1e-6 * x:
            out.append(x)
    return out


def critical_points(upsilon: float) -> tuple[float, float]:
    """Roots v1 < v2 of v^2 + (3 - upsilon) v + upsilon = 0 (upsilon > 9)."""
    if not upsilon > UPSILON_CRIT:
        raise ValueError(f"zeta bounds need upsilon > 9, got {upsilon}")
    root = math.sqrt((upsilon - 9.0) * (upsilon - 1.0))
    return ((upsilon - 3.0 - root) / 2.0, (upsilon - 3.0 + root) / 2.0)


def zeta(v: float, upsilon: float) -> float:
    return ((1.0 + v) / (upsilon + v)) ** 2 / v


def zeta_bounds(upsilon: float, boundary: bool = False) -> tuple[float, float]:
    """Ends of the alpha window with three scalar solutions, ascending.

    With ``boundary=True`` the degenerate case upsilon == 9 returns (1/27, 1/27).
    """
    if boundary and upsilon == UPSILON_CRIT:
        return (1 / 27, 1 / 27)
    z = sorted(zeta(v, upsilon) for v in critical_points(upsilon))
    return (z[0], z[1])


def count_solutions(alpha: float, upsilon: float, tol: float = 1e-12) -> int:
    """Number of positive scalar solutions predicted from the zeta window."""
    if not (alpha > 0 and upsilon > 0):
        raise ValueError("alpha and upsilon must be positive")
    if upsilon <= UPSILON_CRIT:
        return 1
    z1, z2 = zeta_bounds(upsilon)
    if abs(alpha - z1) <= tol * z1 or abs(alpha - z2) <= tol * z2:
        return 2
    return 3 if z1 < alpha < z2 else 1


def lift_scalar_to_A(X: float, w: Weights | ModelParams) -> np.ndarray:
    w = _as_weights(w)
    if w.a != w.b:
        raise ValueError("lifting to the invariant slice needs a == b")
    u = X * w.c / (w.a * (1.0 + w.d))
    return np.array([u, u, u, 1.0, u, u, u, 1.0])


@dataclass(frozen=True)
class PhaseDiagnostics:
    alpha: float
    upsilon: float
    zeta1: float | None
    zeta2: float | None
    d: float
    d_star: float
    n_solutions: int
    phase_transition: bool


def phase_transition(p: ModelParams) -> PhaseDiagnostics:
    """Three scalar solutions on the slice A, hence several Gibbs measures."""
    if p.a_bar != p.b_frak:
        raise ValueError("phase_transition needs a_bar == b_frak")
    w = weights(p)
    alpha, upsilon = reduce_to_scalar(w)
    z1 = z2 = None
    if upsilon > UPSILON_CRIT:
        z1, z2 = zeta_bounds(upsilon)
    n = count_solutions(alpha, upsilon)
    flag = z1 is not None and z1 < alpha < z2
    return PhaseDiagnostics(alpha, upsilon, z1, z2, w.d, D_STAR, n, flag)


def params_for(alpha: float, d: float, beta: float = 1.0, a_bar: float = 0.0) -> ModelParams:
    """Couplings with a = b, d = exp(beta J) and the requested alpha."""
    a = math.exp(beta * a_bar)
    c = alpha * a * (1.0 + d) ** 3 / 4.0
    return ModelParams(a_bar, a_bar, math.log(c) / beta, math.log(d) / beta, beta)


def transition_threshold(tol: float = 1e-9, lo: float = 1.0, hi: float = 10.0) -> float:
    """Smallest d with upsilon(d) > 9, located by bisection."""
    ups = lambda d: (d + d * d) / 2.0  # noqa: E731
    if not (ups(lo) <= UPSILON_CRIT < ups(hi)):
        raise ValueError("bracket does not straddle the threshold")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ups(mid) > UPSILON_CRIT:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
