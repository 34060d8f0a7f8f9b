"""Exact finite-volume measures on the semi-infinite tree, used as an oracle.

The measure on V_n is

    mu_n(sigma) = exp(-beta H_n(sigma) + sum_{x in W_{n-1}, y in S(x)}
                      dot(sigma_x, sigma_y) h[sigma_x, sigma_y]) / Z_n

with H_n the semi-infinite Hamiltonian.  Configurations are indexed in
base 3 with vertex i of the BFS ordering of V_n at digit i, so the first
3^|V_{n-1}| digits of a configuration on V_n index its restriction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._core import kernels as default_kernels
from .gibbs_recursion import Weights, rhs_map, weights
from .model import SPINS, ModelParams, dot, lam
from .tree_group import TreeMode, TreeShape, levels, parent

MAX_VERTICES = 15  # 3^15 ~ 14M configurations (n = 3 for k = 2)

_PAIRS = [(s, t) for s in SPINS for t in SPINS]
_DOT = np.array([[float(dot(s, t)) for t in SPINS] for s in SPINS])


class EnumerationTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class BoundaryField:
    """Translation-invariant field h[s-1, t-1] for ordered spin pairs."""

    h: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h, dtype=np.float64)
        if h.shape != (3, 3) or not np.all(np.isfinite(h)):
            raise ValueError("boundary field must be a finite 3x3 array")
        object.__setattr__(self, "h", h)

    @classmethod
    def zero(cls) -> "BoundaryField":
        return cls(np.zeros((3, 3)))

    def flipped(self) -> "BoundaryField":
        return BoundaryField(self.h[::-1, ::-1].copy())


def h_from_u(u, h11: float = 0.0) -> BoundaryField:
    """Invert u[s,t] = exp(dot(s,t) h[s,t] - h[1,1]) for the chosen gauge h11."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (8,) or np.any(u <= 0):
        raise ValueError("u must be 8 positive numbers")
    logU = np.log(np.concatenate([[1.0], u])).reshape(3, 3)
    h = (logU + h11) / _DOT
    h[0, 0] = h11
    return BoundaryField(h)


def u_from_h(h: BoundaryField) -> np.ndarray:
    U = np.exp(_DOT * h.h - h.h[0, 0])
    return U.reshape(-1)[1:]


@dataclass(frozen=True)
class Layout:
    n: int
    vertices: list
    parent: np.ndarray  # -1 for the root
    grandparent: np.ndarray  # -1 when absent
    inner: int  # number of vertices in V_{n-1}


def layout(n: int, k: int = 2) -> Layout:
    shape = TreeShape(k, TreeMode.SEMI)
    _, ball = levels(shape, n)
    _, inner = levels(shape, n - 1) if n >= 1 else ([], [])
    index = {v: i for i, v in enumerate(ball)}
    par = np.full(len(ball), -1, dtype=np.int64)
    gp = np.full(len(ball), -1, dtype=np.int64)
    for v, i in index.items():
        if v:
            par[i] = index[parent(v)]
            if len(v) >= 2:
                gp[i] = index[parent(parent(v))]
    return Layout(n, ball, par, gp, len(inner))


@dataclass(frozen=True)
class FiniteMeasure:
    n: int
    log_weights: np.ndarray
    log_Z: float
    inner: int  # |V_{n-1}|, for marginalisation

    @property
    def Z(self) -> float:
        return math.exp(self.log_Z)

    @cached_property
    def probabilities(self) -> np.ndarray:
        return np.exp(self.log_weights - self.log_Z)

    def configuration(self, index: int) -> tuple[int, ...]:
        """Spins of vertices in BFS order for a configuration index."""
        m = round(math.log(len(self.log_weights), 3))
        return tuple(int(index // 3**i % 3) + 1 for i in range(m))


def finite_measure(
    p: ModelParams,
    h: BoundaryField,
    n: int,
    k: int = 2,
    max_vertices: int = MAX_VERTICES,
    kernels=None,
) -> FiniteMeasure:
    if n < 1:
        raise ValueError("depth must be at least 1")
    kern = kernels or default_kernels
    lay = layout(n, k)
    m = len(lay.vertices)
    if m > max_vertices:
        raise EnumerationTooLarge(f"{m} vertices exceeds the enumeration cap of {max_vertices}")
    beta = float(p.beta)
    pair = beta * np.array([[float(lam(s, t, p)) for t in SPINS] for s in SPINS])
    boundary = pair + _DOT * h.h
    depth = np.array([len(v) for v in lay.vertices])
    tab = np.where((depth == n)[:, None, None], boundary, pair)
    logw = np.asarray(kern.log_weights(lay.parent, lay.grandparent, tab, beta * float(p.J)))
    shift = float(np.max(logw))
    total = float(math.fsum(np.exp(logw - shift)))
    return FiniteMeasure(n, logw, shift + math.log(total), lay.inner)


def marginal(mu: FiniteMeasure, kernels=None) -> np.ndarray:
    """Distribution of the restriction to V_{n-1}."""
    kern = kernels or default_kernels
    return np.asarray(kern.marginal_sum(mu.probabilities, 3**mu.inner))


def compatibility_residual(p: ModelParams, h: BoundaryField, n: int, k: int = 2, kernels=None) -> float:
    """max |marginal of mu_n on V_{n-1} - mu_{n-1}|."""
    if n < 2:
        raise ValueError("compatibility needs n >= 2")
    mu_n = finite_measure(p, h, n, k, kernels=kernels)
    mu_prev = finite_measure(p, h, n - 1, k, kernels=kernels)
    return float(np.max(np.abs(marginal(mu_n, kernels) - mu_prev.probabilities)))


def _lambda_sums(w: Weights, h: BoundaryField) -> np.ndarray:
    """L[s, t] = sum_eta exp(beta lam(t, eta) + beta J [s == eta] + dot(t, eta) h[t, eta])."""
    lam_w = np.array([[w.c, w.b, w.a], [w.b, w.c, w.b], [w.a, w.b, w.c]])
    L = np.zeros((3, 3))
    for s in range(3):
        for t in range(3):
            for e in range(3):
                L[s, t] += lam_w[t, e] * (w.d if s == e else 1.0) * math.exp(_DOT[t, e] * h.h[t, e])
    return L


def check_necessary_system(p: ModelParams, h: BoundaryField, k: int = 2) -> float:
    """Max absolute mismatch of the eight compatibility equations.

    Each equation reads exp(dot(s,t) h[s,t] - h[1,1]) = (L[s,t] / L[1,1])^k,
    evaluated from spin sums rather than from ``rhs_map``; its mismatch
    equals the u-space residual |F(u) - u| after the change of variables.
    """
    L = _lambda_sums(weights(p), h)
    lhs = u_from_h(h)
    rhs = ((L / L[0, 0]) ** k).reshape(-1)[1:]
    return float(np.max(np.abs(rhs - lhs)))


def partition_ratio(p: ModelParams, h: BoundaryField, n: int, k: int = 2) -> tuple[float, float]:
    """(log Z_n - log Z_{n-1} measured, predicted) for the compatible case.

    When h solves the system, Z_n = D^(k^(n-1)) Z_{n-1} with
    D = L[1,1]^k exp(-h[1,1]).
    """
    if n < 2:
        raise ValueError("needs n >= 2")
    measured = finite_measure(p, h, n, k).log_Z - finite_measure(p, h, n - 1, k).log_Z
    L = _lambda_sums(weights(p), h)
    predicted = k ** (n - 1) * (k * math.log(L[0, 0]) - h.h[0, 0])
    return measured, predicted


def u_residual(p: ModelParams, h: BoundaryField, k: int = 2) -> float:
    u = u_from_h(h)
    return float(np.max(np.abs(rhs_map(u, p, k) - u)))
