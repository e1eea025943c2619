"""Premade octonion-valued test functions.

Everything here is a :class:`~octomono.regularity.FunctionHandle`
operating on coordinate arrays of shape (..., 8), so the same object
feeds the finite-difference operators and the Monte Carlo integrators.
"""

from __future__ import annotations

import numpy as np

from .algebra import Octonion, conj_many, mul_many, parse_octonion
from .errors import DomainError
from .regularity import FunctionHandle, q0_many


def constant(value: Octonion | float, name: str | None = None) -> FunctionHandle:
    vo = value if isinstance(value, Octonion) else Octonion(float(value))
    row = np.array(vo.coords)

    def ev(points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        return np.broadcast_to(row, pts.shape).copy()

    return FunctionHandle(name or f"constant({vo})", ev)


def identity_map() -> FunctionHandle:
    def ev(points: np.ndarray) -> np.ndarray:
        return np.array(points, dtype=np.float64, copy=True)

    return FunctionHandle("identity", ev)


def linear_monogenic() -> FunctionHandle:
    """f(x) = x1 - x2 e4; annihilated by the left Cauchy-Riemann operator."""

    def ev(points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        out = np.zeros_like(pts)
        out[..., 0] = pts[..., 1]
        out[..., 4] = -pts[..., 2]
        return out

    return FunctionHandle("linear", ev)


def right_multiplied(handle: FunctionHandle, factor: Octonion) -> FunctionHandle:
    """w -> handle(w) * factor; right factors can break left monogenicity."""
    row = np.array(factor.coords)

    def ev(points: np.ndarray) -> np.ndarray:
        return mul_many(handle.eval_batch(points), row)

    return FunctionHandle(f"{handle.name}*({factor})", ev)


def shifted_cauchy_kernel(center: Octonion) -> FunctionHandle:
    """w -> q0(w - center); two-sided monogenic away from the center."""
    row = np.array(center.coords)

    def ev(points: np.ndarray) -> np.ndarray:
        return q0_many(np.asarray(points, dtype=np.float64) - row)

    def guard(p: np.ndarray) -> bool:
        return float(np.sqrt(np.sum((p - row) ** 2))) > 1e-3

    return FunctionHandle(f"q0(w - ({center}))", ev, guard)


def szego_ball_section(w0: Octonion) -> FunctionHandle:
    """x -> S(x, w0) on the ball; equals conj(S(w0, x)) by symmetry."""
    from .kernels import szego_ball_values

    def ev(points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        flat = pts.reshape(-1, 8)
        out = conj_many(szego_ball_values(w0, flat))
        return out.reshape(pts.shape)

    return FunctionHandle(f"szego_ball(., {w0})", ev)


def bergman_ball_section(w0: Octonion) -> FunctionHandle:
    """x -> B(x, w0) on the ball; equals conj(B(w0, x)) by symmetry."""
    from .kernels import bergman_ball_values

    def ev(points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        flat = pts.reshape(-1, 8)
        out = conj_many(bergman_ball_values(w0, flat))
        return out.reshape(pts.shape)

    return FunctionHandle(f"bergman_ball(., {w0})", ev)


def resolve(spec: str) -> FunctionHandle:
    """Look up a function by CLI name.

    Plain names: ``one``, ``identity``, ``linear``, ``linear_e3``.
    Parameterized: ``kernel_shift:<octonion literal>`` for
    q0(w - center).
    """
    name, _, arg = spec.partition(":")
    if name == "one" and not arg:
        return constant(1.0, name="one")
    if name == "identity" and not arg:
        return identity_map()
    if name == "linear" and not arg:
        return linear_monogenic()
    if name == "linear_e3" and not arg:
        return right_multiplied(linear_monogenic(), Octonion.basis(3))
    if name == "kernel_shift":
        if not arg:
            raise DomainError("kernel_shift needs a center, e.g. kernel_shift:-0.5")
        return shifted_cauchy_kernel(parse_octonion(arg))
    raise DomainError(
        f"unknown function {spec!r}; choose one, identity, linear, linear_e3, "
        "or kernel_shift:<octonion>"
    )
