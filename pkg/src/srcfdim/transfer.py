"""Spectral refiner for autonomous systems: the weighted transfer operator

    (L_s g)(x) = sum_{i in A} |D phi_i(x)|^s * g(phi_i(x)),   x in [0,1],

discretized by polynomial collocation at Chebyshev points.  The branches are
analytic on a neighbourhood of [0,1], so the leading eigenvalue lambda(s)
converges spectrally in the degree; the dimension refiner solves
log lambda(s) = 0 by bisection, doubling the degree until the root shift
drops below the requested tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ifs import NonAutonomousIFS, NonAutonomousInputError


def _require_autonomous(system: NonAutonomousIFS) -> tuple[tuple[int, ...], int]:
    if not system.autonomous or system.sigma.kind != "constant":
        raise NonAutonomousInputError(
            "transfer refinement needs one alphabet and one sign at every level"
        )
    return system.level_alphabet(1), system.sign(1)


def _cheb_nodes(degree: int) -> np.ndarray:
    # second-kind Chebyshev points mapped to [0,1]
    return (1.0 - np.cos(np.pi * np.arange(degree + 1) / degree)) / 2.0


def _bary_weights(degree: int) -> np.ndarray:
    w = np.ones(degree + 1)
    w[1::2] = -1.0
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def _lagrange_rows(nodes: np.ndarray, weights: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Rows of the interpolation matrix: row j evaluates the Lagrange basis at
    points[j] (barycentric form, exact at nodes)."""
    rows = np.empty((len(points), len(nodes)))
    for j, y in enumerate(points):
        diff = y - nodes
        hit = np.where(np.abs(diff) < 1e-14)[0]
        if hit.size:
            row = np.zeros(len(nodes))
            row[hit[0]] = 1.0
        else:
            t = weights / diff
            row = t / t.sum()
        rows[j] = row
    return rows


def transfer_matrix(alphabet, sign: int, s: float, degree: int) -> np.ndarray:
    nodes = _cheb_nodes(degree)
    weights = _bary_weights(degree)
    L = np.zeros((degree + 1, degree + 1))
    for i in alphabet:
        den = i + sign * nodes
        image = 1.0 / den
        weight = (1.0 / den**2) ** s
        L += weight[:, None] * _lagrange_rows(nodes, weights, image)
    return L


def leading_eigenvalue(system_or_alphabet, s: float, degree: int = 32,
                       sign: int | None = None) -> float:
    """Leading eigenvalue lambda(s) of the collocation-discretized operator.

    Accepts an autonomous system, or a bare alphabet plus sign.  At s=0 the
    operator counts branches, so lambda(0) equals the alphabet size at any
    degree.
    """
    if isinstance(system_or_alphabet, NonAutonomousIFS):
        alphabet, sign = _require_autonomous(system_or_alphabet)
    else:
        alphabet = tuple(system_or_alphabet)
        if sign is None:
            sign = 1
    ev = np.linalg.eigvals(transfer_matrix(alphabet, sign, s, degree))
    lead = ev[np.argmax(np.abs(ev))]
    if abs(lead.imag) > 1e-8 * max(1.0, abs(lead.real)):
        raise ArithmeticError(f"leading eigenvalue not real: {lead}")
    return float(lead.real)


@dataclass(frozen=True)
class RefinedRoot:
    value: float
    degree: int
    history: tuple[tuple[int, float], ...]  # (degree, root) per refinement pass

    @property
    def shift(self) -> float:
        if len(self.history) < 2:
            return math.inf
        return abs(self.history[-1][1] - self.history[-2][1])


def _root_at_degree(alphabet, sign: int, degree: int) -> float:
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if leading_eigenvalue(alphabet, mid, degree, sign=sign) > 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def transfer_refine(system: NonAutonomousIFS, tolerance: float = 1e-10,
                    start_degree: int = 8, max_degree: int = 256) -> RefinedRoot:
    """Root of log lambda(s) = 0 with degree doubling until the eigenvalue
    (equivalently, root) shift falls below `tolerance`."""
    alphabet, sign = _require_autonomous(system)
    history = []
    degree = start_degree
    while True:
        history.append((degree, _root_at_degree(alphabet, sign, degree)))
        if len(history) >= 2 and abs(history[-1][1] - history[-2][1]) < tolerance:
            break
        if degree >= max_degree:
            break
        degree *= 2
    return RefinedRoot(value=history[-1][1], degree=history[-1][0], history=tuple(history))
