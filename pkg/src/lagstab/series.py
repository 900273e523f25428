"""Integer power series with explicit truncation orders, and the cell data
of a shell: the full Poincaré series, the quotient series, cell polynomials
from the torus-fixed points, and the dimension formulas."""

from __future__ import annotations

from .errors import OrderExceeded
from .lattices import ShellSpec
from .rootdata import fixed_points_shell

__all__ = [
    "PowerSeriesZ",
    "truncate",
    "bott_series",
    "quotient_series",
    "cells_polynomial",
    "cells_count",
    "cell_dimension",
    "dim_shell",
    "codim_bound",
]


class PowerSeriesZ:
    """Integer coefficients c_0..c_order; arithmetic keeps the minimum order."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        coeffs = tuple(coeffs)
        if order < 0:
            raise ValueError("order must be nonnegative")
        if len(coeffs) != order + 1:
            raise ValueError("coefficient list must have length order + 1")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("PowerSeriesZ is immutable")

    @classmethod
    def one(cls, order: int) -> "PowerSeriesZ":
        return cls(order, (1,) + (0,) * order)

    @classmethod
    def from_coeffs(cls, coeffs, order: int | None = None) -> "PowerSeriesZ":
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        coeffs += [0] * (order + 1 - len(coeffs))
        return cls(order, coeffs[: order + 1])

    @classmethod
    def geometric(cls, k: int, order: int) -> "PowerSeriesZ":
        """(1 - t^k)^{-1} to the given order."""
        coeffs = [1 if i % k == 0 else 0 for i in range(order + 1)]
        return cls(order, coeffs)

    def coeff(self, i: int) -> int:
        if i > self.order:
            raise OrderExceeded(f"coefficient {i} beyond carried order {self.order}")
        return self.coeffs[i]

    def __add__(self, other: "PowerSeriesZ") -> "PowerSeriesZ":
        order = min(self.order, other.order)
        return PowerSeriesZ(
            order, [self.coeffs[i] + other.coeffs[i] for i in range(order + 1)]
        )

    def __sub__(self, other: "PowerSeriesZ") -> "PowerSeriesZ":
        order = min(self.order, other.order)
        return PowerSeriesZ(
            order, [self.coeffs[i] - other.coeffs[i] for i in range(order + 1)]
        )

    def __mul__(self, other: "PowerSeriesZ") -> "PowerSeriesZ":
        order = min(self.order, other.order)
        out = [0] * (order + 1)
        for i, a in enumerate(self.coeffs[: order + 1]):
            if a:
                for j in range(0, order + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return PowerSeriesZ(order, out)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PowerSeriesZ)
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"PowerSeriesZ(order={self.order}, coeffs={list(self.coeffs)})"


def truncate(f: PowerSeriesZ, n: int) -> PowerSeriesZ:
    """Drop all terms of degree above n; the result carries order n."""
    if n > f.order:
        raise OrderExceeded(f"truncation order {n} exceeds carried order {f.order}")
    return PowerSeriesZ(n, f.coeffs[: n + 1])


def bott_series(d: int, order: int) -> PowerSeriesZ:
    """Product over i < d of (1 - t^{2i})^{-1}."""
    if d < 2:
        raise ValueError("d must be at least 2")
    out = PowerSeriesZ.one(order)
    for i in range(1, d):
        out = out * PowerSeriesZ.geometric(2 * i, order)
    return out


def quotient_series(d: int, order: int) -> PowerSeriesZ:
    """(1 - t^2)^{-(d-1)} times the full series."""
    if d < 2:
        raise ValueError("d must be at least 2")
    out = bott_series(d, order)
    for _ in range(d - 1):
        out = out * PowerSeriesZ.geometric(2, order)
    return out


def dim_shell(shell: ShellSpec) -> int:
    return shell.n * shell.d * (shell.d - 1)


def codim_bound(shell: ShellSpec) -> int:
    return (shell.d - 1) * shell.n


def cell_dimension(mu, n: int) -> int:
    """Affine cell dimension at the fixed point mu: sum (i-1)(n - mu_i)."""
    return sum((i) * (n - mu[i]) for i in range(1, len(mu)))


def cells_polynomial(shell: ShellSpec, order: int | None = None) -> PowerSeriesZ:
    """Sum of t^{2 dim} over the fixed-point cells; top degree 2nd(d-1)."""
    top = 2 * dim_shell(shell)
    if order is None:
        order = top
    coeffs = [0] * (order + 1)
    for mu in fixed_points_shell(shell):
        deg = 2 * cell_dimension(mu, shell.n)
        if deg <= order:
            coeffs[deg] += 1
    return PowerSeriesZ(order, coeffs)


def cells_count(shell: ShellSpec, q: int) -> int:
    """Point count predicted by the paving: sum q^{dim} over the cells."""
    return sum(q ** cell_dimension(mu, shell.n) for mu in fixed_points_shell(shell))
