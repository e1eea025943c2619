"""Octonion arithmetic over a fixed oriented basis.

The algebra is generated by seven imaginary units ``e1 .. e7`` with
``ei * ei = -1`` and the seven oriented triples

    (1, 2, 4), (1, 3, 5), (2, 3, 6), (1, 7, 6),
    (2, 5, 7), (3, 7, 4), (4, 6, 5)

where each triple ``(a, b, c)`` means ``ea * eb = ec`` cyclically and
products anticommute.  Two independent multiplication routes are
provided: a precomputed 8x8 sign/index table, and Cayley-Dickson
doubling of Hamilton quaternions.  They must agree exactly on all
basis products; tests enforce this.

Cayley-Dickson pairing used by :func:`mul_cayley_dickson`: an octonion
with coordinates ``c0 .. c7`` corresponds to the quaternion pair
``A = (c0, c1, c2, c4)``, ``B = (c3, -c5, -c6, -c7)`` (components in
``1, i, j, k`` order with ``i*j = k``), multiplied by

    (A, B) * (C, D) = (A*C - D*conj(B), conj(A)*D + C*B)

with conjugation ``(conj(A), -B)``.
"""

from __future__ import annotations

import json
import re
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

# Oriented triples (a, b, c): ea*eb = ec, eb*ec = ea, ec*ea = eb.
TRIPLES: tuple[tuple[int, int, int], ...] = (
    (1, 2, 4),
    (1, 3, 5),
    (2, 3, 6),
    (1, 7, 6),
    (2, 5, 7),
    (3, 7, 4),
    (4, 6, 5),
)


def _build_tables() -> tuple[np.ndarray, np.ndarray]:
    idx = np.zeros((8, 8), dtype=np.intp)
    sgn = np.zeros((8, 8), dtype=np.float64)
    for j in range(8):
        idx[0, j] = j
        sgn[0, j] = 1.0
        idx[j, 0] = j
        sgn[j, 0] = 1.0
    for i in range(1, 8):
        idx[i, i] = 0
        sgn[i, i] = -1.0
    for a, b, c in TRIPLES:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            idx[x, y] = z
            sgn[x, y] = 1.0
            idx[y, x] = z
            sgn[y, x] = -1.0
    return idx, sgn


MUL_IDX, MUL_SGN = _build_tables()


class Octonion:
    """Immutable octonion with float64 coordinates ``c0 + c1 e1 + ... + c7 e7``."""

    __slots__ = ("_c",)

    def __init__(
        self,
        c0: float = 0.0,
        c1: float = 0.0,
        c2: float = 0.0,
        c3: float = 0.0,
        c4: float = 0.0,
        c5: float = 0.0,
        c6: float = 0.0,
        c7: float = 0.0,
    ) -> None:
        object.__setattr__(
            self,
            "_c",
            (
                float(c0),
                float(c1),
                float(c2),
                float(c3),
                float(c4),
                float(c5),
                float(c6),
                float(c7),
            ),
        )

    @classmethod
    def from_coords(cls, coords: Iterable[float]) -> "Octonion":
        c = tuple(float(x) for x in coords)
        if len(c) != 8:
            raise DomainError(f"octonion needs exactly 8 coordinates, got {len(c)}")
        return cls(*c)

    @classmethod
    def basis(cls, k: int) -> "Octonion":
        if not 0 <= k <= 7:
            raise DomainError(f"basis index must be in 0..7, got {k}")
        c = [0.0] * 8
        c[k] = 1.0
        return cls(*c)

    @property
    def coords(self) -> tuple[float, ...]:
        return self._c

    @property
    def real(self) -> float:
        return self._c[0]

    @property
    def imag(self) -> "Octonion":
        return Octonion(0.0, *self._c[1:])

    def conjugate(self) -> "Octonion":
        c = self._c
        return Octonion(c[0], -c[1], -c[2], -c[3], -c[4], -c[5], -c[6], -c[7])

    def norm_sq(self) -> float:
        return sum(x * x for x in self._c)

    def norm(self) -> float:
        return self.norm_sq() ** 0.5

    def inverse(self) -> "Octonion":
        n2 = self.norm_sq()
        if n2 < 1e-300:
            raise DomainError("octonion too close to zero to invert")
        return self.conjugate() * (1.0 / n2)

    def to_array(self) -> np.ndarray:
        return np.array(self._c, dtype=np.float64)

    def __add__(self, other: "Octonion | float") -> "Octonion":
        if isinstance(other, Octonion):
            return Octonion(*(x + y for x, y in zip(self._c, other._c)))
        if isinstance(other, (int, float)):
            c = self._c
            return Octonion(c[0] + other, *c[1:])
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: "Octonion | float") -> "Octonion":
        if isinstance(other, Octonion):
            return Octonion(*(x - y for x, y in zip(self._c, other._c)))
        if isinstance(other, (int, float)):
            c = self._c
            return Octonion(c[0] - other, *c[1:])
        return NotImplemented

    def __rsub__(self, other: float) -> "Octonion":
        if isinstance(other, (int, float)):
            return (-self) + other
        return NotImplemented

    def __neg__(self) -> "Octonion":
        return Octonion(*(-x for x in self._c))

    def __pos__(self) -> "Octonion":
        return self

    def __mul__(self, other: "Octonion | float") -> "Octonion":
        if isinstance(other, Octonion):
            return mul(self, other)
        if isinstance(other, (int, float)):
            return Octonion(*(x * other for x in self._c))
        return NotImplemented

    def __rmul__(self, other: float) -> "Octonion":
        if isinstance(other, (int, float)):
            return Octonion(*(x * other for x in self._c))
        return NotImplemented

    def __truediv__(self, other: float) -> "Octonion":
        if isinstance(other, (int, float)):
            return Octonion(*(x / other for x in self._c))
        # Octonion division is order-sensitive; spell it out with inverse().
        return NotImplemented

    def __abs__(self) -> float:
        return self.norm()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Octonion):
            return self._c == other._c
        if isinstance(other, (int, float)):
            return self._c == (float(other),) + (0.0,) * 7
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return f"Octonion({', '.join(repr(x) for x in self._c)})"

    def __str__(self) -> str:
        return format_octonion(self)


def mul(a: Octonion, b: Octonion) -> Octonion:
    """Table-driven product."""
    ac = a.coords
    bc = b.coords
    out = [0.0] * 8
    for i in range(8):
        ai = ac[i]
        if ai == 0.0:
            continue
        row_idx = MUL_IDX[i]
        row_sgn = MUL_SGN[i]
        for j in range(8):
            out[row_idx[j]] += row_sgn[j] * ai * bc[j]
    return Octonion(*out)


def _qmul(p: Sequence[float], q: Sequence[float]) -> tuple[float, float, float, float]:
    # Hamilton quaternions, components (1, i, j, k), i*j = k.
    pw, px, py, pz = p
    qw, qx, qy, qz = q
    return (
        pw * qw - px * qx - py * qy - pz * qz,
        pw * qx + px * qw + py * qz - pz * qy,
        pw * qy - px * qz + py * qw + pz * qx,
        pw * qz + px * qy - py * qx + pz * qw,
    )


def _qconj(p: Sequence[float]) -> tuple[float, float, float, float]:
    return (p[0], -p[1], -p[2], -p[3])


def _to_pair(a: Octonion) -> tuple[tuple[float, ...], tuple[float, ...]]:
    c = a.coords
    return (c[0], c[1], c[2], c[4]), (c[3], -c[5], -c[6], -c[7])


def _from_pair(A: Sequence[float], B: Sequence[float]) -> Octonion:
    return Octonion(A[0], A[1], A[2], B[0], A[3], -B[1], -B[2], -B[3])


def mul_cayley_dickson(a: Octonion, b: Octonion) -> Octonion:
    """Doubled-quaternion product; independent of the table route."""
    A, B = _to_pair(a)
    C, D = _to_pair(b)
    first = tuple(
        x - y for x, y in zip(_qmul(A, C), _qmul(D, _qconj(B)))
    )
    second = tuple(
        x + y for x, y in zip(_qmul(_qconj(A), D), _qmul(C, B))
    )
    return _from_pair(first, second)


def conj(a: Octonion) -> Octonion:
    return a.conjugate()


def inverse(a: Octonion) -> Octonion:
    return a.inverse()


def norm(a: Octonion) -> float:
    return a.norm()


def dot(a: Octonion, b: Octonion) -> float:
    """Euclidean inner product of the coordinate vectors."""
    return sum(x * y for x, y in zip(a.coords, b.coords))


def associator(a: Octonion, b: Octonion, c: Octonion) -> Octonion:
    """(a*b)*c - a*(b*c); zero iff the triple associates."""
    return (a * b) * c - a * (b * c)


def commutator(a: Octonion, b: Octonion) -> Octonion:
    return a * b - b * a


# ---------------------------------------------------------------------------
# Text forms


_NUMBER = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_NUM_RE = re.compile(_NUMBER)
_UNIT_RE = re.compile(r"e([0-7])")
_SIGN_RE = re.compile(r"[+-]")


def parse_octonion(text: str) -> Octonion:
    """Parse an octonion literal.

    Accepted forms:
      * a JSON array of exactly 8 numbers: ``[1, 0, 0, 0, 0, 0, 0, 0]``
      * a bare real number: ``1.5`` (so ``3e1`` is the real 30.0)
      * a sum of terms: ``1.5 + 2 e1 - 0.5*e7``; a coefficient and a
        unit must be separated by whitespace or ``*``.
    """
    s = text.strip()
    if not s:
        raise DomainError("empty octonion literal")
    if s.startswith("["):
        try:
            data = json.loads(s)
        except json.JSONDecodeError as exc:
            raise DomainError(f"bad octonion array: {exc}") from None
        if (
            not isinstance(data, list)
            or len(data) != 8
            or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in data)
        ):
            raise DomainError("octonion array must hold exactly 8 numbers")
        return Octonion(*data)
    try:
        return Octonion(float(s))
    except ValueError:
        pass
    return _parse_terms(s)


def _parse_terms(s: str) -> Octonion:
    coords = [0.0] * 8
    pos = 0
    n = len(s)
    first = True
    while True:
        while pos < n and s[pos].isspace():
            pos += 1
        if pos >= n:
            if first:
                raise DomainError(f"bad octonion literal: {s!r}")
            break
        sign = 1.0
        m = _SIGN_RE.match(s, pos)
        if m:
            sign = -1.0 if m.group(0) == "-" else 1.0
            pos = m.end()
            while pos < n and s[pos].isspace():
                pos += 1
        elif not first:
            raise DomainError(f"expected '+' or '-' at position {pos} in {s!r}")
        first = False

        m = _NUM_RE.match(s, pos)
        if m:
            value = float(m.group(0))
            pos = m.end()
            # A unit may follow, but only across whitespace or '*'.
            probe = pos
            saw_sep = False
            while probe < n and s[probe].isspace():
                probe += 1
                saw_sep = True
            if probe < n and s[probe] == "*":
                probe += 1
                saw_sep = True
                while probe < n and s[probe].isspace():
                    probe += 1
            um = _UNIT_RE.match(s, probe) if saw_sep else None
            if um:
                coords[int(um.group(1))] += sign * value
                pos = um.end()
            else:
                coords[0] += sign * value
            continue

        um = _UNIT_RE.match(s, pos)
        if um:
            coords[int(um.group(1))] += sign
            pos = um.end()
            continue
        raise DomainError(f"unrecognized term at position {pos} in {s!r}")
    return Octonion(*coords)


def format_octonion(a: Octonion, precision: int = 12) -> str:
    """Human-readable form, e.g. ``1.5 + 2 e1 - 0.5 e7``."""
    parts: list[str] = []
    c = a.coords
    for k in range(8):
        x = c[k]
        if x == 0.0 and not (k == 0 and not any(c)):
            continue
        mag = f"{abs(x):.{precision}g}"
        unit = "" if k == 0 else f" e{k}"
        if not parts:
            head = "-" if x < 0 else ""
            parts.append(f"{head}{mag}{unit}")
        else:
            op = "-" if x < 0 else "+"
            parts.append(f"{op} {mag}{unit}")
    if not parts:
        return "0"
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Batched coordinate-array operations (shape (..., 8) float64)


def as_coord_array(values: Iterable[Octonion]) -> np.ndarray:
    return np.array([v.coords for v in values], dtype=np.float64)


def mul_many(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Componentwise octonion product of coordinate arrays, broadcasting.

    The float dtype is preserved (and promoted across operands), so
    identity checks can run in extended precision where the structure
    constants need to be separated from double roundoff.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.dtype.kind != "f":
        a = a.astype(np.float64)
    if b.dtype.kind != "f":
        b = b.astype(np.float64)
    out_shape = np.broadcast_shapes(a.shape, b.shape)
    out = np.zeros(out_shape, dtype=np.result_type(a, b))
    for i in range(8):
        # MUL_IDX[i] is a permutation of 0..7, so fancy += has no collisions.
        out[..., MUL_IDX[i]] += MUL_SGN[i] * (a[..., i, None] * b)
    return out

def conj_many(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    out = np.array(a, dtype=a.dtype if a.dtype.kind == "f" else np.float64, copy=True)
    out[..., 1:] *= -1.0
    return out


def norm_sq_many(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype.kind != "f":
        a = a.astype(np.float64)
    return np.einsum("...i,...i->...", a, a)


def norm_many(a: np.ndarray) -> np.ndarray:
    return np.sqrt(norm_sq_many(a))


def random_octonions(
    rng: np.random.Generator,
    n: int,
    scale_range: tuple[float, float] = (0.05, 2.0),
) -> np.ndarray:
    """Coordinate array of n random octonions with log-uniform overall scale.

    Bounded scales keep identity residuals near machine precision while
    still exercising several orders of magnitude.
    """
    lo, hi = scale_range
    if not (0.0 < lo <= hi):
        raise DomainError("scale_range must satisfy 0 < lo <= hi")
    scale = np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))
    coords = rng.uniform(-1.0, 1.0, size=(n, 8))
    return scale[:, None] * coords
