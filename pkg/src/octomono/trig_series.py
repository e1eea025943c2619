"""Octonionic trigonometric functions as periodized Cauchy-kernel sums.

Each function is a lattice sum ``sum_n s^n q0(z + step*n*e0)`` over the
real direction, truncated once the analytic tail bound drops below the
policy tolerance.  The kernel has degree -7, so one-sided tails are
bounded by ``(1/(3*step)) * (step*N - |z|)^-6`` and the derivative sums
(degree -8 terms, used by the strip volume kernels) by
``(18/(7*step)) * (step*N - |z|)^-7``.

Normalization: ``cot(z) = sum_n q0(z + pi*n*e0)`` and
``csc(z) = sum_n (-1)^n q0(z + pi*n*e0)``; the shifted companions are
``tan(z) = -cot(z + pi/2)`` and ``sec(z) = csc(z + pi/2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .algebra import Octonion
from .errors import PolicyError, SingularityError
from .regularity import dq0_dx0_many, q0_many

PointLike = Union[Octonion, np.ndarray]

# Distance from a lattice pole below which evaluation is refused.
POLE_GUARD = 1e-12


@dataclass(frozen=True)
class TruncationPolicy:
    """Tail tolerance and a hard cap on the one-sided term count."""

    tail_tol: float = 1e-12
    max_terms: int = 1_000_000


@dataclass(frozen=True)
class PeriodizedSumSpec:
    """Lattice step along e0 and whether terms alternate in sign."""

    step: float
    alternating: bool = False


@dataclass(frozen=True)
class SumResult:
    value: PointLike
    tail_bound: float
    terms: int


def _coords(z: PointLike) -> np.ndarray:
    if isinstance(z, Octonion):
        return z.to_array()
    arr = np.asarray(z, dtype=np.float64)
    if arr.shape != (8,):
        raise ValueError(f"expected a single point of shape (8,), got {arr.shape}")
    return arr


def _wrap(value: np.ndarray, like: PointLike) -> PointLike:
    if isinstance(like, Octonion):
        return Octonion(*value)
    return value


def _term_count(norm: float, step: float, policy: TruncationPolicy, margin: float) -> int:
    n = int(math.floor((norm + margin) / step)) + 1
    if n > policy.max_terms:
        raise PolicyError(
            f"periodized sum needs {n} one-sided terms, policy allows {policy.max_terms}"
        )
    return n


def _lattice_values(
    zc: np.ndarray, spec: PeriodizedSumSpec, n_side: int, kernel
) -> tuple[np.ndarray, np.ndarray]:
    ns = np.arange(-n_side, n_side + 1, dtype=np.float64)
    points = np.tile(zc, (ns.size, 1))
    points[:, 0] += spec.step * ns
    dists = np.sqrt(np.einsum("ij,ij->i", points, points))
    if np.any(dists < POLE_GUARD):
        k = int(np.argmin(dists))
        raise SingularityError(
            f"lattice point n={int(ns[k])} lies within {POLE_GUARD} of a pole"
        )
    values = kernel(points)
    if spec.alternating:
        signs = np.where((np.abs(ns).astype(np.int64) % 2) == 1, -1.0, 1.0)
        values = values * signs[:, None]
    return values, ns


def periodized_sum(
    zeta: PointLike,
    spec: PeriodizedSumSpec,
    policy: TruncationPolicy = TruncationPolicy(),
) -> SumResult:
    """Truncated ``sum_n s^n q0(zeta + step*n*e0)`` with its tail bound."""
    zc = _coords(zeta)
    norm = float(np.sqrt(zc @ zc))
    margin = (1.0 / (3.0 * spec.step * policy.tail_tol)) ** (1.0 / 6.0)
    n_side = _term_count(norm, spec.step, policy, margin)
    values, _ = _lattice_values(zc, spec, n_side, q0_many)
    total = values.sum(axis=0)
    tail = (1.0 / (3.0 * spec.step)) * (spec.step * n_side - norm) ** -6
    return SumResult(_wrap(total, zeta), tail, 2 * n_side + 1)


def periodized_deriv_sum(
    zeta: PointLike,
    spec: PeriodizedSumSpec,
    policy: TruncationPolicy = TruncationPolicy(),
) -> SumResult:
    """Same lattice sum built from the x0-derivative of the kernel."""
    zc = _coords(zeta)
    norm = float(np.sqrt(zc @ zc))
    margin = (18.0 / (7.0 * spec.step * policy.tail_tol)) ** (1.0 / 7.0)
    n_side = _term_count(norm, spec.step, policy, margin)
    values, _ = _lattice_values(zc, spec, n_side, dq0_dx0_many)
    total = values.sum(axis=0)
    tail = (18.0 / (7.0 * spec.step)) * (spec.step * n_side - norm) ** -7
    return SumResult(_wrap(total, zeta), tail, 2 * n_side + 1)


def cot(z: PointLike, policy: TruncationPolicy = TruncationPolicy()) -> SumResult:
    return periodized_sum(z, PeriodizedSumSpec(step=math.pi), policy)


def csc(z: PointLike, policy: TruncationPolicy = TruncationPolicy()) -> SumResult:
    return periodized_sum(z, PeriodizedSumSpec(step=math.pi, alternating=True), policy)


def _shift_half_pi(z: PointLike) -> PointLike:
    if isinstance(z, Octonion):
        return z + math.pi / 2.0
    out = np.array(z, dtype=np.float64, copy=True)
    out[0] += math.pi / 2.0
    return out


def tan(z: PointLike, policy: TruncationPolicy = TruncationPolicy()) -> SumResult:
    res = cot(_shift_half_pi(z), policy)
    return SumResult(_wrap(-_coords(res.value), z), res.tail_bound, res.terms)


def sec(z: PointLike, policy: TruncationPolicy = TruncationPolicy()) -> SumResult:
    res = csc(_shift_half_pi(z), policy)
    return SumResult(_wrap(_coords(res.value), z), res.tail_bound, res.terms)


def duplication_residual(
    z: PointLike, policy: TruncationPolicy = TruncationPolicy()
) -> float:
    """|128*cot(2z) - cot(z) - cot(z + pi/2)|, zero up to truncation."""
    zc = _coords(z)
    lhs = 128.0 * _coords(cot(2.0 * zc, policy).value)
    rhs = _coords(cot(zc, policy).value) + _coords(cot(_shift_half_pi(zc), policy).value)
    diff = lhs - rhs
    return float(np.sqrt(diff @ diff))


class CombinedRelationResiduals(NamedTuple):
    """Residuals of two candidate closures of ``csc + tan - tan(z/2)/64``."""

    against_duplication: float
    against_two_cot: float


def combined_relation_residuals(
    z: PointLike, policy: TruncationPolicy = TruncationPolicy()
) -> CombinedRelationResiduals:
    """Measure both candidate right-hand sides of the combined relation.

    ``against_duplication`` compares to ``128*cot(2z)`` and
    ``against_two_cot`` compares to ``2*cot(z) - 128*cot(2z)``.  Which
    one vanishes is a property of the function family, not an input to
    this routine; callers should measure rather than assume.
    """
    zc = _coords(z)
    combo = (
        _coords(csc(zc, policy).value)
        + _coords(tan(zc, policy).value)
        - _coords(tan(0.5 * zc, policy).value) / 64.0
    )
    dup = 128.0 * _coords(cot(2.0 * zc, policy).value)
    two_cot = 2.0 * _coords(cot(zc, policy).value) - dup
    r1 = combo - dup
    r2 = combo - two_cot
    return CombinedRelationResiduals(
        against_duplication=float(np.sqrt(r1 @ r1)),
        against_two_cot=float(np.sqrt(r2 @ r2)),
    )
