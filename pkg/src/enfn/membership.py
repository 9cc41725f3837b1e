"""
Membership functions over a fixed grid of centers on [0, 1].

Two families are provided: the classic triangular partition used by the
neo-fuzzy neuron, and B-splines of order ``q`` evaluated with the Cox-de Boor
recursion on a clamped knot vector. Order 2 B-splines coincide with the
triangular functions.

All evaluators accept a scalar or a 1-D array of inputs. Inputs outside
[0, 1] are clamped.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property
from enum import Enum

import numpy as np

from .errors import ConfigurationError


class Kind(str, Enum):
    TRIANGULAR = "triangular"
    BSPLINE = "bspline"


@dataclass(frozen=True)
class MembershipGrid:
    """Center layout and membership family for one input.

    Parameters
    ----------
    centers : tuple of float
        Strictly increasing centers in [0, 1].
    kind : Kind
        Membership family.
    degree : int
        Spline order ``q``. Ignored for triangular grids (which behave as q=2).
    """

    centers: tuple
    kind: Kind = Kind.TRIANGULAR
    degree: int = 2

    def __post_init__(self):
        try:
            c = tuple(float(v) for v in self.centers)
        except (TypeError, ValueError):
            raise ConfigurationError("centers must be a flat sequence of numbers") from None
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "kind", Kind(self.kind))
        if not all(math.isfinite(v) for v in c):
            raise ConfigurationError("centers must be finite")
        if any(b <= a for a, b in zip(c, c[1:])):
            raise ConfigurationError("centers must be strictly increasing")
        if self.kind is Kind.TRIANGULAR:
            if len(c) < 2:
                raise ConfigurationError("triangular grid needs h >= 2 centers")
            object.__setattr__(self, "degree", 2)
        else:
            if int(self.degree) != self.degree or self.degree < 1:
                raise ConfigurationError("spline order q must be an integer >= 1")
            object.__setattr__(self, "degree", int(self.degree))
            if len(c) < max(self.degree, 2):
                raise ConfigurationError(
                    f"B-spline grid of order {self.degree} needs at least "
                    f"{max(self.degree, 2)} centers, got {len(c)}"
                )

    @property
    def h(self) -> int:
        return len(self.centers)

    @property
    def size(self) -> int:
        """Number of membership functions the grid produces."""
        if self.kind is Kind.TRIANGULAR:
            return self.h
        return self.h + self.degree - 2

    @property
    def min_gap(self) -> float:
        return float(np.min(np.diff(self.centers)))

    def knots(self) -> np.ndarray:
        """Clamped knot vector: end centers repeated ``q - 1`` extra times."""
        return np.array(self._knot_list)

    @cached_property
    def _knot_list(self) -> list:
        pad = self.degree - 1
        c = list(self.centers)
        return [c[0]] * pad + c + [c[-1]] * pad

    @cached_property
    def _center_array(self) -> np.ndarray:
        return np.asarray(self.centers)

    def activations(self, x):
        if self.kind is Kind.TRIANGULAR:
            return triangular_activations(x, self)
        return bspline_activations(x, self)


def make_uniform_centers(h: int, kind=Kind.TRIANGULAR, degree: int = 2) -> MembershipGrid:
    """Grid of ``h`` equally spaced centers, ``c_l = (l - 1) / (h - 1)``."""
    if int(h) != h or h < 2:
        raise ConfigurationError(f"need h >= 2 centers, got {h}")
    return MembershipGrid(tuple(np.linspace(0.0, 1.0, int(h))), kind=kind, degree=degree)


def _span_index(x: np.ndarray, breaks: np.ndarray) -> np.ndarray:
    # half-open [b_j, b_{j+1}); the last span is closed at the right end
    j = np.searchsorted(breaks, x, side="right") - 1
    return np.clip(j, 0, breaks.size - 2)


def _scalar_span(x, centers):
    return min(max(bisect_right(centers, x) - 1, 0), len(centers) - 2)


def _prepare(x):
    if np.ndim(x) == 0:
        return min(max(float(x), 0.0), 1.0), True
    return np.clip(np.asarray(x, dtype=float), 0.0, 1.0), False


def triangular_activations(x, grid: MembershipGrid) -> np.ndarray:
    """Triangular memberships with half-triangles at both ends.

    Returns shape ``(h,)`` for scalar ``x`` and ``(N, h)`` for an array.
    At most two adjacent entries are nonzero and they sum to one.
    """
    xs, scalar = _prepare(x)
    if scalar:
        c = grid.centers
        j = _scalar_span(xs, c)
        t = (xs - c[j]) / (c[j + 1] - c[j])
        out = np.zeros(len(c))
        out[j], out[j + 1] = 1.0 - t, t
        return out
    c = grid._center_array
    j = _span_index(xs, c)
    left, right = c[j], c[j + 1]
    t = (xs - left) / (right - left)
    out = np.zeros((xs.size, c.size))
    rows = np.arange(xs.size)
    out[rows, j] = 1.0 - t
    out[rows, j + 1] = t
    return out


def _local_basis(x, t, s, q):
    """The ``q`` order-``q`` B-splines that are nonzero on knot span ``s``.

    Triangular evaluation of the Cox-de Boor recursion; entry ``r`` is basis
    function ``s - q + 1 + r``. Plain floats: this runs once per sample.
    """
    vals = [1.0] + [0.0] * (q - 1)
    left = [0.0] * q
    right = [0.0] * q
    for j in range(1, q):
        left[j] = x - t[s + 1 - j]
        right[j] = t[s + j] - x
        saved = 0.0
        for r in range(j):
            temp = vals[r] / (right[r + 1] + left[j - r])
            vals[r] = saved + right[r + 1] * temp
            saved = left[j - r] * temp
        vals[j] = saved
    return vals


def bspline_activations(x, grid: MembershipGrid) -> np.ndarray:
    """Order-``q`` B-spline memberships via the Cox-de Boor recursion.

    The knot vector is the grid's clamped knots, giving ``h + q - 2``
    basis functions that form a partition of unity on [0, 1]. Only the ``q``
    functions that do not vanish on the knot span containing ``x`` are
    evaluated; the rest are zero by local support.
    """
    q = grid.degree
    if grid.h < q:
        raise ConfigurationError(f"B-spline order {q} needs at least {q} centers")
    xs, scalar = _prepare(x)
    t = grid._knot_list
    # knot span t[s] <= x < t[s + 1]; never one of the empty padded spans
    if scalar:
        s = _scalar_span(xs, grid.centers) + (q - 1)
        out = np.zeros(grid.size)
        out[s - q + 1:s + 1] = _local_basis(xs, t, s, q)
        return out
    spans = (_span_index(xs, grid._center_array) + (q - 1)).tolist()
    out = np.zeros((xs.size, grid.size))
    for row, (xv, s) in enumerate(zip(xs.tolist(), spans)):
        out[row, s - q + 1:s + 1] = _local_basis(xv, t, s, q)
    return out
