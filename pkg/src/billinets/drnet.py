"""Double reflection configurations and nets over finite windows of Z^m.

A double reflection configuration is four lines l, l1, l2, l12 with l/l1 and
l2/l12 reflecting off Q_alpha, l/l2 and l1/l12 reflecting off Q_beta, and the
four tangent hyperplanes at the reflection points lying in one pencil. The
pencil condition is what picks the correct second-reflection branch: among
the two candidate intersection points, exactly one has its tangent plane in
the span of the first two (generically), and both completion orders must
yield the same fourth line.

A net assigns a line to each vertex of a window of Z^m so that the axis
sequences are billiard trajectories within Q_{lam_j} and every elementary
quadrilateral is a double reflection configuration.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .billiards import (CausticSet, intersect, line_caustics, nearest_intersection,
                        reflect, trajectory)
from .confocal import ConfocalFamily
from .errors import ConstructionError, GeometryError, NoIntersectionError
from .projective import (DualHyperplane, HomPoint, ProjLine, direction_angle,
                         line_separation, pencil_residual)
from .tolerances import TOL_FORWARD, TOL_RANK

_CLOSURE_TOL = 1e-8     # agreement of the two l12 constructions
_MEET_TOL = 1e-7        # two net lines must actually intersect


def meet_point(l1: ProjLine, l2: ProjLine) -> tuple[np.ndarray, float]:
    """Closest-approach midpoint of two lines and their gap distance."""
    p1 = l1.base.affine_coords()
    p2 = l2.base.affine_coords()
    v1, v2 = l1.direction, l2.direction
    b = float(np.dot(v1, v2))
    denom = 1.0 - b * b
    if denom < 1e-16:
        raise GeometryError("lines are parallel; no meet point")
    dp = p2 - p1
    e = float(np.dot(dp, v1))
    f = float(np.dot(dp, v2))
    s = (e - b * f) / denom
    t = (b * e - f) / denom
    q1 = p1 + s * v1
    q2 = p2 + t * v2
    return 0.5 * (q1 + q2), float(np.linalg.norm(q1 - q2))


@dataclass(frozen=True, eq=False)
class DRConfig:
    lines: tuple[ProjLine, ProjLine, ProjLine, ProjLine]      # l, l1, l2, l12
    alpha: float
    beta: float
    points: tuple[HomPoint, HomPoint, HomPoint, HomPoint]     # A, B, B1, A1
    planes: tuple[DualHyperplane, ...]                        # T_A, T_B, T_B1, T_A1
    pencil_residual: float
    closure_angle: float
    closure_gap: float

    @property
    def line(self):
        return self.lines[0]

    @property
    def line12(self):
        return self.lines[3]


def _pencil_branch(family: ConfocalFamily, lam: float, line: ProjLine,
                   ref_planes, tol_rank: float):
    """Intersection point of `line` with Q_lam whose tangent plane best
    extends `ref_planes` to a pencil; ties break toward the smaller parameter."""
    hit = intersect(family, lam, line)
    if len(hit) < 2:
        raise NoIntersectionError(
            f"line meets Q_{lam} in {len(hit)} point(s); need two for branch selection")
    scored = []
    for t, pt in zip(hit.params, hit.points):
        plane = family.tangent_plane_at(lam, pt.affine_coords())
        resid = pencil_residual([*ref_planes, plane])
        scored.append((resid, t, pt, plane))
    scored.sort(key=lambda z: (z[0], z[1]))
    best = scored[0]
    if best[0] >= tol_rank:
        raise GeometryError(
            "no branch completes the pencil: residuals "
            + ", ".join(f"{z[0]:.3e}" for z in scored))
    return best[2], best[3]


def double_reflection(family: ConfocalFamily, alpha: float, beta: float,
                      line: ProjLine, a_point: HomPoint, b_point: HomPoint,
                      tol_rank: float = TOL_RANK) -> DRConfig:
    """Complete (line, A, B) to a double reflection configuration.

    Reflects at A and B, selects the opposite reflection points by the
    pencil condition on tangent planes, builds l12 both ways and checks the
    two constructions agree.
    """
    alpha = family.check_param(alpha)
    beta = family.check_param(beta)
    if abs(alpha - beta) <= 1e-12 * max(1.0, abs(alpha)):
        raise GeometryError("double reflection needs two distinct quadrics")
    ev_a = reflect(family, alpha, line, a_point, tol_rank)
    ev_b = reflect(family, beta, line, b_point, tol_rank)
    l1, l2 = ev_a.outgoing, ev_b.outgoing
    t_a, t_b = ev_a.tangent_plane, ev_b.tangent_plane

    b1_point, t_b1 = _pencil_branch(family, beta, l1, (t_a, t_b), tol_rank)
    ev_b1 = reflect(family, beta, l1, b1_point, tol_rank)
    a1_point, t_a1 = _pencil_branch(family, alpha, l2, (t_a, t_b), tol_rank)
    ev_a1 = reflect(family, alpha, l2, a1_point, tol_rank)

    l12_a, l12_b = ev_b1.outgoing, ev_a1.outgoing
    angle = direction_angle(l12_a.direction, l12_b.direction)
    _, gap = line_separation(l12_a, l12_b)
    if angle > _CLOSURE_TOL or gap > _CLOSURE_TOL:
        raise GeometryError(
            f"the two l12 constructions disagree (angle {angle:.3e}, gap {gap:.3e})")
    planes = (t_a, t_b, t_b1.canonical(), t_a1.canonical())
    resid = pencil_residual(planes)
    return DRConfig(lines=(line, l1, l2, l12_a), alpha=alpha, beta=beta,
                    points=(ev_a.point, ev_b.point, b1_point, a1_point),
                    planes=planes, pencil_residual=resid,
                    closure_angle=angle, closure_gap=gap)


@dataclass(frozen=True, eq=False)
class DRNet:
    m: int
    lambdas: tuple[float, ...]
    window: tuple[int, ...]
    lines: dict

    def vertices(self):
        return sorted(self.lines.keys())

    def line_at(self, vertex) -> ProjLine:
        return self.lines[tuple(vertex)]

    def edges(self):
        """(vertex, direction) pairs for every window edge, lexicographic."""
        out = []
        for vertex in self.vertices():
            for i in range(self.m):
                if vertex[i] + 1 <= self.window[i]:
                    out.append((vertex, i))
        return out


def _axis_vertex(i: int, k: int, m: int) -> tuple[int, ...]:
    v = [0] * m
    v[i] = k
    return tuple(v)


def _fill_pairs(vertex) -> list[tuple[int, int]]:
    pos = [i for i, c in enumerate(vertex) if c > 0]
    return [(i, j) for i, j in itertools.combinations(pos, 2)]


def _fill_from_face(family, lambdas, lines, vertex, pair, tol_rank):
    """Line at `vertex` from the face spanned by `pair`, using the three
    already-known lines of the elementary quadrilateral below it."""
    i, j = pair
    n0 = tuple(c - (1 if k in (i, j) else 0) for k, c in enumerate(vertex))
    ni = tuple(c + (1 if k == i else 0) for k, c in enumerate(n0))
    nj = tuple(c + (1 if k == j else 0) for k, c in enumerate(n0))
    l0, li, lj = lines[n0], lines[ni], lines[nj]
    a_pt, gap_a = meet_point(l0, li)
    b_pt, gap_b = meet_point(l0, lj)
    if max(gap_a, gap_b) > _MEET_TOL:
        raise ConstructionError(
            f"edge lines do not meet (gaps {gap_a:.3e}, {gap_b:.3e})", vertex)
    # pin the meets back onto their quadrics so residuals do not compound
    a_exact = nearest_intersection(family, lambdas[i], l0, a_pt)
    b_exact = nearest_intersection(family, lambdas[j], l0, b_pt)
    cfg = double_reflection(family, lambdas[i], lambdas[j], l0, a_exact, b_exact, tol_rank)
    return cfg.line12


def build_net(family: ConfocalFamily, lambdas, initial: ProjLine, window,
              tol_rank: float = TOL_RANK, tol_forward: float = TOL_FORWARD,
              fill_order: str = "min", consistency_fraction: float = 0.1,
              seed: int = 0) -> DRNet:
    """Fill a window of Z^m: axes by billiard trajectories, everything else
    by double reflection across elementary quadrilaterals.

    fill_order picks which admissible coordinate pair completes each vertex
    ("min" or "max" lexicographic); for m >= 3 a sample of the filled
    vertices is re-derived through every alternative pair and must agree to
    the closure tolerance.
    """
    lambdas = tuple(family.check_param(l) for l in lambdas)
    window = tuple(int(n) for n in window)
    m = len(lambdas)
    if len(window) != m:
        raise GeometryError("window and lambdas must have equal length")
    if any(n < 1 for n in window):
        raise GeometryError("window extents must be >= 1")
    for i, j in itertools.combinations(range(m), 2):
        if abs(lambdas[i] - lambdas[j]) <= 1e-12 * max(1.0, abs(lambdas[i])):
            raise GeometryError("net quadric parameters must be pairwise distinct")
    if fill_order not in ("min", "max"):
        raise GeometryError("fill_order must be 'min' or 'max'")

    lines: dict = {(0,) * m: initial}
    for i in range(m):
        current = initial
        for k in range(1, window[i] + 1):
            try:
                event = trajectory(family, lambdas[i], current, 1, tol_forward)[0]
            except GeometryError as exc:
                raise ConstructionError(str(exc), _axis_vertex(i, k, m)) from exc
            current = event.outgoing
            lines[_axis_vertex(i, k, m)] = current

    fillable = []
    for vertex in itertools.product(*(range(n + 1) for n in window)):
        if sum(1 for c in vertex if c > 0) >= 2:
            fillable.append(vertex)
    fillable.sort()
    for vertex in fillable:
        pairs = _fill_pairs(vertex)
        pair = pairs[0] if fill_order == "min" else pairs[-1]
        try:
            lines[vertex] = _fill_from_face(family, lambdas, lines, vertex, pair, tol_rank)
        except GeometryError as exc:
            if isinstance(exc, ConstructionError):
                raise
            raise ConstructionError(str(exc), vertex) from exc

    if m >= 3:
        multi = [v for v in fillable if len(_fill_pairs(v)) > 1]
        rng = np.random.default_rng(seed)
        if len(multi) > 64:
            keep = rng.choice(len(multi), size=max(1, int(consistency_fraction * len(multi))),
                              replace=False)
            multi = [multi[k] for k in sorted(keep)]
        for vertex in multi:
            for pair in _fill_pairs(vertex):
                alt = _fill_from_face(family, lambdas, lines, vertex, pair, tol_rank)
                angle, gap = line_separation(alt, lines[vertex])
                if angle > _CLOSURE_TOL or gap > _CLOSURE_TOL:
                    raise ConstructionError(
                        f"fill orders disagree via pair {pair} "
                        f"(angle {angle:.3e}, gap {gap:.3e})", vertex)

    return DRNet(m=m, lambdas=lambdas, window=window, lines=lines)


@dataclass(frozen=True, eq=False)
class EdgeCheck:
    vertex: tuple[int, ...]
    direction: int
    lam: float
    meet_gap: float
    quadric_residual: float
    mirror_residual: float


@dataclass(frozen=True, eq=False)
class QuadCheck:
    base: tuple[int, ...]
    dirs: tuple[int, int]
    pencil_residual: float


@dataclass(frozen=True, eq=False)
class CausticCheck:
    vertex: tuple[int, ...]
    drift: float


@dataclass(eq=False)
class NetReport:
    edges: list = field(default_factory=list)
    quads: list = field(default_factory=list)
    caustics: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    passed: bool = True

    @property
    def max_edge_residual(self) -> float:
        return max((max(e.meet_gap, e.quadric_residual, e.mirror_residual)
                    for e in self.edges), default=0.0)

    @property
    def max_pencil_residual(self) -> float:
        return max((q.pencil_residual for q in self.quads), default=0.0)

    @property
    def max_caustic_drift(self) -> float:
        return max((c.drift for c in self.caustics), default=0.0)


def edge_event(family: ConfocalFamily, net: DRNet, vertex, direction: int):
    """Reflection data of one net edge recomputed from its two lines:
    (meet point, tangent plane, gap, quadric residual, mirror residual)."""
    vertex = tuple(vertex)
    upper = tuple(c + (1 if k == direction else 0) for k, c in enumerate(vertex))
    l0, l1 = net.lines[vertex], net.lines[upper]
    lam = net.lambdas[direction]
    x, gap = meet_point(l0, l1)
    q_res = abs(family.quadric_value(lam, HomPoint.affine(x)))
    n = family.normal_at(lam, x)
    v = l0.direction
    v_ref = v - 2.0 * float(np.dot(v, n)) / float(np.dot(n, n)) * n
    mirror = min(float(np.linalg.norm(v_ref - l1.direction)),
                 float(np.linalg.norm(v_ref + l1.direction)))
    plane = family.tangent_plane_at(lam, x).canonical()
    return x, plane, gap, q_res, mirror


def verify_net(family: ConfocalFamily, net: DRNet,
               tol_edge: float = 1e-8, tol_pencil: float = TOL_RANK,
               tol_caustic: float = 1e-8) -> NetReport:
    """Re-derive every invariant of a net from its lines alone."""
    report = NetReport()
    planes: dict = {}
    for vertex, i in net.edges():
        try:
            _, plane, gap, q_res, mirror = edge_event(family, net, vertex, i)
        except GeometryError as exc:
            report.failures.append(f"edge {vertex}+e{i}: {exc}")
            report.passed = False
            continue
        planes[(vertex, i)] = plane
        report.edges.append(EdgeCheck(vertex, i, net.lambdas[i], gap, q_res, mirror))
        if max(gap, q_res, mirror) > tol_edge:
            report.failures.append(
                f"edge {vertex}+e{i}: residuals gap={gap:.3e} quadric={q_res:.3e} mirror={mirror:.3e}")
            report.passed = False

    for base in net.vertices():
        for i, j in itertools.combinations(range(net.m), 2):
            if base[i] + 1 > net.window[i] or base[j] + 1 > net.window[j]:
                continue
            ni = tuple(c + (1 if k == i else 0) for k, c in enumerate(base))
            nj = tuple(c + (1 if k == j else 0) for k, c in enumerate(base))
            keys = [(base, i), (base, j), (nj, i), (ni, j)]
            if any(k not in planes for k in keys):
                continue
            resid = pencil_residual([planes[k] for k in keys])
            report.quads.append(QuadCheck(base, (i, j), resid))
            if resid > tol_pencil:
                report.failures.append(
                    f"quadrilateral at {base} dirs ({i},{j}): pencil residual {resid:.3e}")
                report.passed = False

    try:
        reference = line_caustics(family, net.lines[(0,) * net.m])
    except GeometryError as exc:
        report.failures.append(f"caustics of the initial line: {exc}")
        report.passed = False
        reference = None
    if reference is not None:
        for vertex in net.vertices():
            try:
                drift = reference.max_drift(line_caustics(family, net.lines[vertex]))
            except GeometryError as exc:
                report.failures.append(f"caustics at {vertex}: {exc}")
                report.passed = False
                continue
            report.caustics.append(CausticCheck(vertex, drift))
            if drift > tol_caustic:
                report.failures.append(f"caustic drift {drift:.3e} at {vertex}")
                report.passed = False
    return report
