"""Homogeneous projective primitives.

Points and hyperplanes live in R^{d+1} up to nonzero scale; the affine chart
is x_0 = 1, and a hyperplane u is incident with a point x when

    u_0*x_0 + u_1*x_1 + ... + u_d*x_d = 0.

Canonical representatives have unit Euclidean norm and a positive first
nonzero coordinate, which makes every residual in this module scale-free.
Rank tests use singular values rather than determinants so that
near-degenerate data degrades gracefully.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError
from .tolerances import TOL_RANK

_SIGN_EPS = 1e-12


def canonicalize(vec) -> np.ndarray:
    """Unit-norm representative with positive first nonzero coordinate."""
    v = np.asarray(vec, dtype=float)
    norm = np.linalg.norm(v)
    if not np.isfinite(norm) or norm == 0.0:
        raise GeometryError("cannot canonicalize a zero or non-finite vector")
    v = v / norm
    for c in v:
        if abs(c) > _SIGN_EPS:
            if c < 0:
                v = -v
            break
    return v


def _frozen_array(values, n_min=2) -> np.ndarray:
    arr = np.asarray(values, dtype=float).copy()
    if arr.ndim != 1 or arr.size < n_min:
        raise GeometryError(f"expected a 1-d sequence of at least {n_min} reals, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise GeometryError("coordinates must be finite")
    if not np.any(arr != 0.0):
        raise GeometryError("all coordinates are zero")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class HomPoint:
    """Point (x_0 : x_1 : ... : x_d), equal to its nonzero multiples."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _frozen_array(self.coords))

    @classmethod
    def affine(cls, xs) -> "HomPoint":
        xs = np.asarray(xs, dtype=float)
        return cls(np.concatenate(([1.0], xs)))

    @property
    def dim(self) -> int:
        return self.coords.size - 1

    @property
    def is_finite(self) -> bool:
        return abs(self.coords[0]) > _SIGN_EPS * np.max(np.abs(self.coords))

    def affine_coords(self) -> np.ndarray:
        if not self.is_finite:
            raise GeometryError("point at infinity has no affine coordinates")
        return self.coords[1:] / self.coords[0]

    def canonical(self) -> "HomPoint":
        return HomPoint(canonicalize(self.coords))

    def same_as(self, other: "HomPoint", tol: float = 1e-9) -> bool:
        a = canonicalize(self.coords)
        b = canonicalize(other.coords)
        return bool(np.linalg.norm(a - b) < tol)

    def __repr__(self):
        return f"HomPoint({np.array2string(self.coords, precision=6)})"


@dataclass(frozen=True, eq=False)
class DualHyperplane:
    """Hyperplane (u_0 : u_1 : ... : u_d); incidence u.x = 0 on homogeneous x."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _frozen_array(self.coords))

    @classmethod
    def from_offset_normal(cls, offset: float, normal) -> "DualHyperplane":
        return cls(np.concatenate(([offset], np.asarray(normal, dtype=float))))

    @property
    def dim(self) -> int:
        return self.coords.size - 1

    @property
    def offset(self) -> float:
        return float(self.coords[0])

    @property
    def spatial(self) -> np.ndarray:
        return self.coords[1:]

    @property
    def is_finite(self) -> bool:
        """True when the spatial part is nonzero (not the hyperplane at infinity)."""
        return bool(np.linalg.norm(self.spatial) > _SIGN_EPS * np.max(np.abs(self.coords)))

    def eval_point(self, point: HomPoint) -> float:
        return float(np.dot(self.coords, point.coords))

    def canonical(self) -> "DualHyperplane":
        return DualHyperplane(canonicalize(self.coords))

    def same_as(self, other: "DualHyperplane", tol: float = 1e-9) -> bool:
        a = canonicalize(self.coords)
        b = canonicalize(other.coords)
        return bool(np.linalg.norm(a - b) < tol)

    def __repr__(self):
        return f"DualHyperplane({np.array2string(self.coords, precision=6)})"


@dataclass(frozen=True, eq=False)
class ProjLine:
    """Line given by a finite base point and a unit direction.

    Two values describe the same line when their Plucker data agree up to
    scale; compare with :func:`line_separation` rather than identity of the
    base point (any base point on the line is valid) or the direction sign.
    """

    base: HomPoint
    direction: np.ndarray

    def __post_init__(self):
        if not self.base.is_finite:
            raise GeometryError("line base point must be finite")
        d = np.asarray(self.direction, dtype=float).copy()
        norm = np.linalg.norm(d)
        if norm == 0.0 or not np.isfinite(norm):
            raise GeometryError("line direction must be nonzero and finite")
        d /= norm
        d.flags.writeable = False
        object.__setattr__(self, "direction", d)
        if d.size != self.base.dim:
            raise GeometryError("direction dimension does not match the base point")

    @classmethod
    def from_affine(cls, base, direction) -> "ProjLine":
        return cls(HomPoint.affine(base), direction)

    @classmethod
    def through_points(cls, p, q) -> "ProjLine":
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        return cls(HomPoint.affine(p), q - p)

    @property
    def dim(self) -> int:
        return self.direction.size

    def point_at(self, t: float) -> np.ndarray:
        return self.base.affine_coords() + t * self.direction

    def distance_to_point(self, x) -> float:
        dx = np.asarray(x, dtype=float) - self.base.affine_coords()
        return float(np.linalg.norm(dx - np.dot(dx, self.direction) * self.direction))

    def reversed(self) -> "ProjLine":
        return ProjLine(self.base, -self.direction)

    def __repr__(self):
        return (f"ProjLine(base={np.array2string(self.base.affine_coords(), precision=6)}, "
                f"dir={np.array2string(self.direction, precision=6)})")


def direction_angle(v1, v2) -> float:
    """Angle between two directions, sign-insensitive, accurate near zero."""
    a = np.asarray(v1, dtype=float)
    b = np.asarray(v2, dtype=float)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    if np.dot(a, b) < 0:
        b = -b
    # 2*asin(|a-b|/2) is stable for small angles, unlike acos(dot)
    return float(2.0 * math.asin(min(1.0, 0.5 * np.linalg.norm(a - b))))


def line_separation(l1: ProjLine, l2: ProjLine) -> tuple[float, float]:
    """(direction angle, max distance of either base to the other line)."""
    ang = direction_angle(l1.direction, l2.direction)
    d1 = l2.distance_to_point(l1.base.affine_coords())
    d2 = l1.distance_to_point(l2.base.affine_coords())
    return ang, max(d1, d2)


def _rank2_residual(rows) -> float:
    mat = np.array([canonicalize(r) for r in rows])
    sigma = np.linalg.svd(mat, compute_uv=False)
    if sigma[0] == 0.0:
        raise GeometryError("zero matrix in rank test")
    return float(sigma[2] / sigma[0])


def collinearity_residual(points) -> float:
    """sigma_3/sigma_1 of the canonicalized coordinate rows; 0 iff collinear."""
    points = list(points)
    if len(points) < 3:
        raise GeometryError("collinearity test needs at least 3 points")
    return _rank2_residual([p.coords for p in points])


def pencil_residual(planes) -> float:
    """sigma_3/sigma_1 of the canonicalized dual rows; 0 iff the planes lie in a pencil."""
    planes = list(planes)
    if len(planes) < 3:
        raise GeometryError("pencil test needs at least 3 hyperplanes")
    return _rank2_residual([h.coords for h in planes])


def _span_coefficients(b1: np.ndarray, b2: np.ndarray, w: np.ndarray) -> tuple[float, float]:
    basis = np.stack([b1, b2], axis=1)
    (mu, nu), *_ = np.linalg.lstsq(basis, w, rcond=None)
    return float(mu), float(nu)


def _proportional(a: np.ndarray, b: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.linalg.norm(np.outer(a, b) - np.outer(b, a)) < tol * np.linalg.norm(a) * np.linalg.norm(b))


def _cross_ratio_from_rows(r1, r2, r3, r4, tol_rank: float, what: str) -> float:
    """CR(r1,r2; r3,r4) for four members of a rank-2 family.

    Writes r3 = mu3*r1 + nu3*r2 and r4 = mu4*r1 + nu4*r2 (least squares on
    canonical representatives) and evaluates the projective cross-ratio of
    the parameters (1:0), (0:1), (mu3:nu3), (mu4:nu4):

        CR = (nu3*mu4) / (nu4*mu3)

    which matches CR(a,b;c,d) = ((a-c)(b-d))/((a-d)(b-c)) on affine pencil
    parameters. Returns math.inf when the denominator vanishes.
    """
    rows = [canonicalize(r) for r in (r1, r2, r3, r4)]
    if _proportional(rows[0], rows[1]):
        raise GeometryError(f"coincident basis {what}")
    if _proportional(rows[2], rows[3]):
        raise GeometryError(f"coincident {what}")
    resid = _rank2_residual(rows)
    if resid >= tol_rank:
        raise GeometryError(f"{what} are not in a rank-2 family (residual {resid:.3e} >= {tol_rank:.1e})")
    mu3, nu3 = _span_coefficients(rows[0], rows[1], rows[2])
    mu4, nu4 = _span_coefficients(rows[0], rows[1], rows[3])
    num = nu3 * mu4
    den = nu4 * mu3
    scale = max(abs(mu3), abs(nu3)) * max(abs(mu4), abs(nu4))
    if abs(den) < 1e-13 * scale:
        if abs(num) < 1e-13 * scale:
            raise GeometryError(f"indeterminate cross-ratio of {what}")
        return math.inf
    return num / den


def cross_ratio_pencil(h1: DualHyperplane, h2: DualHyperplane,
                       h3: DualHyperplane, h4: DualHyperplane,
                       tol_rank: float = TOL_RANK) -> float:
    """Cross-ratio of four hyperplanes of one pencil; -1 means the pairs
    (h1,h2) and (h3,h4) are harmonic conjugates."""
    return _cross_ratio_from_rows(h1.coords, h2.coords, h3.coords, h4.coords,
                                  tol_rank, "hyperplanes")


def cross_ratio_collinear(p1: HomPoint, p2: HomPoint, p3: HomPoint, p4: HomPoint,
                          tol_rank: float = TOL_RANK) -> float:
    """Cross-ratio of four collinear points, same conventions as the pencil case."""
    return _cross_ratio_from_rows(p1.coords, p2.coords, p3.coords, p4.coords,
                                  tol_rank, "points")
