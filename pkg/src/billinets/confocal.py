"""Confocal families of quadrics and their dual tangency pencil.

The family with squared semi-axes a_1 > ... > a_d > 0 is

    Q_lam:  sum_i x_i^2 / (a_i - lam) = 1,       lam not in {a_1, ..., a_d},

in the affine chart x_0 = 1. Its tangent hyperplanes are cut out by the
quadratic form on dual coordinates

    Phi_lam(u) = sum_i (a_i - lam) u_i^2 - u_0^2,

which is linear in lam, so every hyperplane with nonzero spatial part
touches exactly one member (away from a measure-zero degenerate set) and the
touching point is the pole of the hyperplane with respect to that member.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import GeometryError
from .projective import DualHyperplane, HomPoint
from . import polyroots

_DEGENERATE_REL = 1e-9   # |lam - a_i| below this (relative) counts as degenerate


class ConfocalRoot(NamedTuple):
    """One real solution of the confocal-parameter polynomial of a point."""
    value: float
    multiplicity: int
    degenerate: bool     # True when the root collides with a semi-axis


@dataclass(frozen=True)
class ConfocalFamily:
    semi_axes: tuple[float, ...]

    def __post_init__(self):
        axes = tuple(float(a) for a in self.semi_axes)
        object.__setattr__(self, "semi_axes", axes)
        if len(axes) < 2:
            raise GeometryError("need at least two semi-axes")
        if any(a <= 0 for a in axes):
            raise GeometryError("squared semi-axes must be positive")
        if any(axes[i] <= axes[i + 1] for i in range(len(axes) - 1)):
            raise GeometryError("squared semi-axes must be strictly decreasing")

    @property
    def d(self) -> int:
        return len(self.semi_axes)

    @property
    def axes_array(self) -> np.ndarray:
        return np.array(self.semi_axes)

    def check_param(self, lam: float) -> float:
        """Validate that lam avoids every semi-axis; returns lam."""
        lam = float(lam)
        for a in self.semi_axes:
            if abs(lam - a) <= _DEGENERATE_REL * max(1.0, abs(a)):
                raise GeometryError(f"quadric parameter {lam} coincides with semi-axis {a}")
        return lam

    def _check_dim(self, n: int, what: str):
        if n != self.d:
            raise GeometryError(f"{what} has dimension {n}, family has d={self.d}")

    # -- point side ---------------------------------------------------------

    def quadric_value(self, lam: float, x: HomPoint) -> float:
        """sum x_i^2/(a_i - lam) - 1 in the affine chart; 0 iff x on Q_lam."""
        lam = self.check_param(lam)
        if not x.is_finite:
            raise GeometryError("quadric_value needs a finite point")
        xa = x.affine_coords()
        self._check_dim(xa.size, "point")
        return float(np.sum(xa ** 2 / (self.axes_array - lam)) - 1.0)

    def normal_at(self, lam: float, x) -> np.ndarray:
        """Half-gradient n_i = x_i/(a_i - lam) of Q_lam at an affine point."""
        xa = np.asarray(x, dtype=float)
        self._check_dim(xa.size, "point")
        return xa / (self.axes_array - self.check_param(lam))

    def tangent_plane_at(self, lam: float, x) -> DualHyperplane:
        """Tangent hyperplane of Q_lam at an affine point of the quadric."""
        n = self.normal_at(lam, x)
        return DualHyperplane(np.concatenate(([-1.0], n)))

    # -- dual side ----------------------------------------------------------

    def tangency_form(self, lam: float, u: DualHyperplane) -> float:
        """Phi_lam(u); 0 iff the hyperplane is tangent to Q_lam."""
        lam = float(lam)
        self._check_dim(u.spatial.size, "hyperplane")
        if not u.is_finite:
            raise GeometryError("tangency form needs a hyperplane with nonzero spatial part")
        return float(np.sum((self.axes_array - lam) * u.spatial ** 2) - u.offset ** 2)

    def tangency_bilinear(self, lam: float, u: DualHyperplane, w: DualHyperplane) -> float:
        """Polarization B_lam(u, w) of Phi_lam."""
        lam = float(lam)
        return float(np.sum((self.axes_array - lam) * u.spatial * w.spatial) - u.offset * w.offset)

    def tangency_residual(self, lam: float, u: DualHyperplane) -> float:
        """|Phi_lam(u)| scaled by the form's magnitude on u."""
        scale = float(np.sum(np.abs(self.axes_array - lam) * u.spatial ** 2) + u.offset ** 2)
        return abs(self.tangency_form(lam, u)) / max(scale, 1e-300)

    def hyperplane_caustic(self, u: DualHyperplane) -> float:
        """The unique lam with Phi_lam(u) = 0."""
        self._check_dim(u.spatial.size, "hyperplane")
        s2 = float(np.sum(u.spatial ** 2))
        if s2 == 0.0:
            raise GeometryError("hyperplane at infinity touches no family member")
        lam = (float(np.sum(self.axes_array * u.spatial ** 2)) - u.offset ** 2) / s2
        for a in self.semi_axes:
            if abs(lam - a) <= _DEGENERATE_REL * max(1.0, abs(a)):
                raise GeometryError(
                    f"degenerate tangency: hyperplane touches the family at lam={lam} ~ semi-axis {a}")
        return lam

    def touching_point(self, u: DualHyperplane) -> HomPoint:
        """Pole of u with respect to the unique member it touches."""
        lam = self.hyperplane_caustic(u)
        if abs(u.offset) <= _DEGENERATE_REL * np.linalg.norm(u.spatial):
            raise GeometryError("hyperplane through the center: touching point is at infinity")
        xa = -(self.axes_array - lam) * u.spatial / u.offset
        return HomPoint.affine(xa)

    # -- confocal coordinates -----------------------------------------------

    def confocal_poly(self, x: HomPoint) -> np.ndarray:
        """Ascending coefficients of the degree-d polynomial whose roots are
        the confocal parameters of x (denominators cleared)."""
        if not x.is_finite:
            raise GeometryError("confocal parameters need a finite point")
        xa = x.affine_coords()
        self._check_dim(xa.size, "point")
        axes = self.semi_axes
        coeffs = -polyroots.poly_from_linear_factors(axes)
        for i in range(self.d):
            part = polyroots.poly_from_linear_factors([axes[j] for j in range(self.d) if j != i])
            coeffs[: part.size] += xa[i] ** 2 * part
        return coeffs

    def point_confocal_params(self, x: HomPoint) -> list[ConfocalRoot]:
        """Real confocal parameters of a point, ascending, with roots that
        collide with a semi-axis flagged degenerate."""
        coeffs = self.confocal_poly(x)
        if not np.any(coeffs != 0.0):
            raise GeometryError("confocal polynomial is identically zero")
        out = []
        for value, mult in polyroots.real_roots(coeffs):
            degenerate = any(abs(value - a) <= _DEGENERATE_REL * max(1.0, abs(a))
                             for a in self.semi_axes)
            out.append(ConfocalRoot(value, mult, degenerate))
        return out
