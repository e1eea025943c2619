"""Cauchy-Riemann operators and the degree -7 Cauchy kernel.

The left operator is ``D f = df/dx0 + sum_i ei * (df/dxi)`` and the
right operator multiplies the partials by ``ei`` on the right.  A
function is left (right) monogenic where the corresponding image
vanishes.  Derivatives are central finite differences, so residuals of
truly monogenic functions sit at the truncation floor ``O(h^2 |f'''|)``
rather than at zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Union

import numpy as np

from .algebra import Octonion, mul_many
from .errors import SingularityError

ArrayFn = Callable[[np.ndarray], np.ndarray]
PointLike = Union[Octonion, np.ndarray]

_BASIS = np.eye(8, dtype=np.float64)


@dataclass(frozen=True)
class FiniteDiffConfig:
    """Step size for central differences."""

    h: float = 1e-5


@dataclass(frozen=True)
class FunctionHandle:
    """Named octonion-valued function of an octonion variable.

    ``eval_batch`` maps coordinate arrays of shape (..., 8) to arrays of
    the same shape and must broadcast over leading axes.  An optional
    ``domain_guard`` predicate reports whether a point sits far enough
    inside the function's domain for finite-difference probing.
    """

    name: str
    eval_batch: ArrayFn
    domain_guard: Optional[Callable[[np.ndarray], bool]] = None

    def __call__(self, z: PointLike) -> PointLike:
        if isinstance(z, Octonion):
            return Octonion(*self.eval_batch(z.to_array()))
        return self.eval_batch(np.asarray(z, dtype=np.float64))

    def admits(self, z: PointLike) -> bool:
        if self.domain_guard is None:
            return True
        return bool(self.domain_guard(_as_coords(z)))


def _as_coords(z: PointLike) -> np.ndarray:
    if isinstance(z, Octonion):
        return z.to_array()
    return np.asarray(z, dtype=np.float64)


def q0_many(points: np.ndarray, min_norm: float = 1e-30) -> np.ndarray:
    """Cauchy kernel conj(z)/|z|^8 on a coordinate array (..., 8)."""
    p = np.asarray(points, dtype=np.float64)
    r2 = np.einsum("...i,...i->...", p, p)
    if np.any(r2 < min_norm * min_norm):
        raise SingularityError("Cauchy kernel evaluated too close to 0")
    r8 = (r2 * r2) ** 2
    out = -p / r8[..., None]
    out[..., 0] *= -1.0
    return out


def cauchy_kernel(z: PointLike) -> PointLike:
    """conj(z)/|z|^8, the degree -7 monogenic kernel with pole at 0."""
    if isinstance(z, Octonion):
        return Octonion(*q0_many(z.to_array()))
    return q0_many(z)


def dq0_dx0_many(points: np.ndarray, min_norm: float = 1e-30) -> np.ndarray:
    """First-coordinate partial of the Cauchy kernel, in closed form."""
    p = np.asarray(points, dtype=np.float64)
    r2 = np.einsum("...i,...i->...", p, p)
    if np.any(r2 < min_norm * min_norm):
        raise SingularityError("Cauchy kernel derivative too close to 0")
    r8 = (r2 * r2) ** 2
    r10 = r8 * r2
    out = p * (8.0 * p[..., :1] / r10[..., None])
    out[..., 0] = 1.0 / r8 - 8.0 * p[..., 0] ** 2 / r10
    return out


def dq0_dx0(z: PointLike) -> PointLike:
    if isinstance(z, Octonion):
        return Octonion(*dq0_dx0_many(z.to_array()))
    return dq0_dx0_many(z)


def partial_derivative(f: ArrayFn, z: PointLike, axis: int, h: float = 1e-5) -> PointLike:
    """Central-difference partial along one coordinate axis."""
    zc = _as_coords(z)
    step = h * _BASIS[axis]
    val = (f(zc + step) - f(zc - step)) / (2.0 * h)
    if isinstance(z, Octonion):
        return Octonion(*val)
    return val


def _jacobian_rows(f: ArrayFn, zc: np.ndarray, h: float) -> np.ndarray:
    # rows[i] = df/dxi at zc, shape (8, 8); one batched call per sign.
    plus = f(zc[None, :] + h * _BASIS)
    minus = f(zc[None, :] - h * _BASIS)
    return (plus - minus) / (2.0 * h)


def apply_D_left(f: ArrayFn, z: PointLike, h: float = 1e-5) -> PointLike:
    """df/dx0 + sum_i ei * (df/dxi) by central differences."""
    zc = _as_coords(z)
    rows = _jacobian_rows(f, zc, h)
    out = mul_many(_BASIS, rows).sum(axis=0)
    if isinstance(z, Octonion):
        return Octonion(*out)
    return out


def apply_D_right(f: ArrayFn, z: PointLike, h: float = 1e-5) -> PointLike:
    """df/dx0 + sum_i (df/dxi) * ei by central differences."""
    zc = _as_coords(z)
    rows = _jacobian_rows(f, zc, h)
    out = mul_many(rows, _BASIS).sum(axis=0)
    if isinstance(z, Octonion):
        return Octonion(*out)
    return out


def o_regularity_residual(
    f: ArrayFn,
    points: Union[PointLike, Iterable[PointLike]],
    h: float = 1e-5,
    side: str = "left",
) -> float:
    """Max Cauchy-Riemann image norm over points; near 0 for monogenic f.

    ``points`` is a single point or an iterable of points.  Callers must
    keep every point at distance >= 10h from the singular set of f.
    """
    if side == "left":
        apply = apply_D_left
    elif side == "right":
        apply = apply_D_right
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if isinstance(points, Octonion) or (
        isinstance(points, np.ndarray) and points.ndim == 1
    ):
        points = [points]
    worst = 0.0
    for z in points:
        image = apply(f, z, h)
        arr = image.to_array() if isinstance(image, Octonion) else np.asarray(image)
        worst = max(worst, float(np.sqrt(np.sum(arr * arr))))
    return worst
