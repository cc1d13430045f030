"""Line-quadric intersections, billiard reflection, trajectories, caustics.

A line p + t*v is tangent to Q_lam exactly when the discriminant of the
intersection quadratic vanishes. Clearing denominators turns that condition
into a polynomial of degree d-1 in lam,

    G(lam) = sum_i v_i^2 prod_{k!=i}(a_k-lam)
           - sum_{i<j} (p_i v_j - p_j v_i)^2 prod_{k!=i,j}(a_k-lam),

whose real roots are the line's caustic parameters; reflections off any
family member preserve them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .confocal import ConfocalFamily
from .errors import GeometryError, NoIntersectionError, TangencyError
from .projective import DualHyperplane, HomPoint, ProjLine
from .tolerances import TOL_FORWARD, TOL_RANK
from . import polyroots

_DISC_REL = 1e-12     # relative discriminant threshold for tangency
_ON_QUADRIC_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class LineIntersection:
    """Intersection of a line with one family member, ordered by parameter."""
    params: tuple[float, ...]
    points: tuple[HomPoint, ...]
    tangent: bool

    def __len__(self):
        return len(self.params)


@dataclass(frozen=True, eq=False)
class ReflectionEvent:
    point: HomPoint
    incoming: ProjLine
    outgoing: ProjLine
    tangent_plane: DualHyperplane
    lam: float


@dataclass(frozen=True)
class CausticSet:
    """Caustic parameters of a line, ascending, double roots repeated."""
    values: tuple[float, ...]

    def max_drift(self, other: "CausticSet") -> float:
        """Largest relative deviation of matched (sorted) parameters."""
        if len(self.values) != len(other.values):
            return float("inf")
        return max(abs(a - b) / max(1.0, abs(a))
                   for a, b in zip(self.values, other.values))


def intersect(family: ConfocalFamily, lam: float, line: ProjLine) -> LineIntersection:
    """Both intersection points of a line with Q_lam, ordered by the line
    parameter; a double root within tolerance is reported as tangency."""
    lam = family.check_param(lam)
    p = line.base.affine_coords()
    v = line.direction
    q = 1.0 / (family.axes_array - lam)
    A = float(np.sum(v ** 2 * q))
    B = float(np.sum(p * v * q))
    C = float(np.sum(p ** 2 * q) - 1.0)
    scale = B * B + abs(A * C)
    disc = B * B - A * C
    if abs(A) < 1e-14 * float(np.sum(np.abs(q))):
        # direction asymptotic to the quadric: at most one crossing
        if abs(B) < 1e-14:
            return LineIntersection((), (), False)
        t = -C / (2.0 * B)
        return LineIntersection((t,), (HomPoint.affine(p + t * v),), False)
    if disc < -_DISC_REL * scale:
        return LineIntersection((), (), False)
    if disc <= _DISC_REL * scale:
        t = -B / A
        return LineIntersection((t,), (HomPoint.affine(p + t * v),), True)
    sq = np.sqrt(disc)
    ts = sorted(((-B - sq) / A, (-B + sq) / A))
    pts = tuple(HomPoint.affine(p + t * v) for t in ts)
    return LineIntersection(tuple(ts), pts, False)


def reflect(family: ConfocalFamily, lam: float, line: ProjLine, point: HomPoint,
            tol_rank: float = TOL_RANK) -> ReflectionEvent:
    """Mirror the line's direction across the tangent hyperplane of Q_lam at
    the given intersection point."""
    lam = family.check_param(lam)
    x = point.affine_coords()
    if abs(family.quadric_value(lam, point)) > _ON_QUADRIC_TOL:
        raise GeometryError(
            f"reflection point is not on the quadric (residual {family.quadric_value(lam, point):.3e})")
    if line.distance_to_point(x) > _ON_QUADRIC_TOL * (1.0 + float(np.linalg.norm(x))):
        raise GeometryError("reflection point is not on the line")
    v = line.direction
    n = family.normal_at(lam, x)
    vn = float(np.dot(v, n))
    nn = float(np.dot(n, n))
    if abs(vn) < tol_rank * float(np.linalg.norm(v)) * np.sqrt(nn):
        raise TangencyError("tangential incidence: direction lies in the tangent hyperplane")
    v_out = v - 2.0 * vn / nn * n
    outgoing = ProjLine(HomPoint.affine(x), v_out)
    incoming = ProjLine(HomPoint.affine(x), v)
    return ReflectionEvent(HomPoint.affine(x), incoming, outgoing,
                           family.tangent_plane_at(lam, x).canonical(), lam)


def caustic_poly(family: ConfocalFamily, line: ProjLine) -> np.ndarray:
    """Ascending coefficients of the degree d-1 tangency polynomial G."""
    p = line.base.affine_coords()
    v = line.direction
    axes = family.semi_axes
    d = family.d
    coeffs = np.zeros(d)
    for i in range(d):
        part = polyroots.poly_from_linear_factors([axes[k] for k in range(d) if k != i])
        coeffs[: part.size] += v[i] ** 2 * part
    for i in range(d):
        for j in range(i + 1, d):
            w = p[i] * v[j] - p[j] * v[i]
            part = polyroots.poly_from_linear_factors(
                [axes[k] for k in range(d) if k != i and k != j])
            coeffs[: part.size] -= w * w * part
    return coeffs


def line_caustics(family: ConfocalFamily, line: ProjLine) -> CausticSet:
    """The d-1 caustic parameters of a line (Chasles), double roots repeated."""
    coeffs = caustic_poly(family, line)
    roots = polyroots.real_roots(coeffs)
    count = sum(m for _, m in roots)
    if count < family.d - 1:
        raise GeometryError(
            f"complex caustic parameters: only {count} of {family.d - 1} are real")
    values = []
    for value, mult in roots:
        values.extend([value] * mult)
    return CausticSet(tuple(sorted(values)))


def nearest_intersection(family: ConfocalFamily, lam: float, line: ProjLine,
                         x_guess) -> HomPoint:
    """The intersection point of the line with Q_lam closest to a guess.

    Used to pin approximately-known reflection points (e.g. from a line-line
    meet) back onto the quadric exactly, which stops residual growth when
    nets are filled face by face.
    """
    hit = intersect(family, lam, line)
    if not hit.points:
        raise NoIntersectionError("no real intersection near the guessed point")
    guess = np.asarray(x_guess, dtype=float)
    return min(hit.points,
               key=lambda p: float(np.linalg.norm(p.affine_coords() - guess)))


def forward_intersection(family: ConfocalFamily, lam: float, line: ProjLine,
                         tol_forward: float = TOL_FORWARD) -> HomPoint:
    """First intersection with parameter t > tol_forward along the direction."""
    hit = intersect(family, lam, line)
    ts = [t for t in hit.params if t > tol_forward]
    if not ts:
        raise NoIntersectionError("no forward intersection with the quadric")
    if hit.tangent:
        raise TangencyError("line is tangent to the quadric")
    t = ts[0]
    return HomPoint.affine(line.point_at(t))


def trajectory(family: ConfocalFamily, lam: float, start: ProjLine, steps: int,
               tol_forward: float = TOL_FORWARD) -> list[ReflectionEvent]:
    """Billiard trajectory within Q_lam: repeatedly advance to the next
    forward intersection and reflect there."""
    events = []
    current = start
    for _ in range(steps):
        point = forward_intersection(family, lam, current, tol_forward)
        event = reflect(family, lam, current, point)
        events.append(event)
        current = event.outgoing
    return events
