"""Real roots of low-degree polynomials in closed form.

Coefficients are ascending (c[0] + c[1]*x + ...). Degrees 1-3 are solved
without eigensolvers; the discriminant tolerance decides when a near-double
root is reported as one root of multiplicity 2. Higher degrees fall back to
numpy's companion-matrix roots.
"""
from __future__ import annotations

import math

import numpy as np


def poly_from_linear_factors(constants) -> np.ndarray:
    """Ascending coefficients of prod_k (constants[k] - x)."""
    coeffs = np.array([1.0])
    for c in constants:
        coeffs = np.convolve(coeffs, np.array([c, -1.0]))
    return coeffs


def polish_root(coeffs: np.ndarray, x: float, iterations: int = 2) -> float:
    """A couple of Newton steps; skipped near critical points."""
    deriv = np.polynomial.polynomial.polyder(coeffs)
    scale = max(np.max(np.abs(coeffs)), 1e-300)
    for _ in range(iterations):
        f = np.polynomial.polynomial.polyval(x, coeffs)
        fp = np.polynomial.polynomial.polyval(x, deriv)
        if abs(fp) < 1e-8 * scale:
            break
        x -= f / fp
    return float(x)


def real_roots(coeffs, rel_tol: float = 1e-12) -> list[tuple[float, int]]:
    """Sorted (root, multiplicity) pairs of the real roots.

    rel_tol controls the relative discriminant threshold under which a pair
    of roots is merged into one double root.
    """
    c = np.asarray(coeffs, dtype=float)
    while c.size > 1 and c[-1] == 0.0:
        c = c[:-1]
    deg = c.size - 1
    if deg <= 0:
        return []
    if deg == 1:
        return [(-c[0] / c[1], 1)]
    if deg == 2:
        return _quadratic(c[0], c[1], c[2], rel_tol)
    if deg == 3:
        return _cubic(c[0], c[1], c[2], c[3], rel_tol)
    roots = np.polynomial.polynomial.polyroots(c)
    out = [float(r.real) for r in roots if abs(r.imag) <= rel_tol ** 0.5 * (1 + abs(r))]
    return _cluster(sorted(out), rel_tol ** 0.5)


def _quadratic(c0, c1, c2, rel_tol) -> list[tuple[float, int]]:
    disc = c1 * c1 - 4.0 * c2 * c0
    scale = c1 * c1 + abs(4.0 * c2 * c0)
    if disc < -rel_tol * scale:
        return []
    if disc <= rel_tol * scale:
        return [(-c1 / (2.0 * c2), 2)]
    sq = math.sqrt(disc)
    # Citardauq pairing avoids cancellation
    q = -0.5 * (c1 + math.copysign(sq, c1)) if c1 != 0.0 else 0.5 * sq
    r1 = q / c2
    r2 = c0 / q if q != 0.0 else -c1 / c2 - r1
    lo, hi = sorted((r1, r2))
    return [(lo, 1), (hi, 1)]


def _cubic(c0, c1, c2, c3, rel_tol) -> list[tuple[float, int]]:
    # normalize to x^3 + p2 x^2 + p1 x + p0, then depress with x = y - p2/3
    p2, p1, p0 = c2 / c3, c1 / c3, c0 / c3
    shift = p2 / 3.0
    p = p1 - p2 * p2 / 3.0
    q = 2.0 * p2 ** 3 / 27.0 - p2 * p1 / 3.0 + p0
    disc = -4.0 * p ** 3 - 27.0 * q * q
    scale = abs(p) ** 3 + q * q + 1e-300
    if disc > rel_tol * scale:
        # three distinct real roots: trigonometric method
        m = 2.0 * math.sqrt(-p / 3.0)
        theta = math.acos(max(-1.0, min(1.0, 3.0 * q / (p * m)))) / 3.0
        ys = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3)]
        roots = sorted(y - shift for y in ys)
        return [(polish_root(np.array([c0, c1, c2, c3]), r), 1) for r in roots]
    if disc >= -rel_tol * scale:
        # repeated roots: triple when p ~ q ~ 0, else double + simple
        if abs(p) ** 1.5 <= rel_tol * (1.0 + abs(q)) and abs(q) <= rel_tol * (1.0 + abs(p)):
            return [(-shift, 3)]
        double = -1.5 * q / p if p != 0.0 else 0.0
        simple = 3.0 * q / p if p != 0.0 else 0.0
        pairs = sorted([(double - shift, 2), (simple - shift, 1)])
        return pairs
    # one real root: Cardano
    half_q = q / 2.0
    root_term = math.sqrt(q * q / 4.0 + p ** 3 / 27.0)
    u = math.copysign(abs(-half_q + root_term) ** (1.0 / 3.0), -half_q + root_term)
    v = math.copysign(abs(-half_q - root_term) ** (1.0 / 3.0), -half_q - root_term)
    y = u + v
    return [(polish_root(np.array([c0, c1, c2, c3]), y - shift), 1)]


def _cluster(values: list[float], tol: float) -> list[tuple[float, int]]:
    out: list[tuple[float, int]] = []
    for v in values:
        if out and abs(v - out[-1][0]) <= tol * (1.0 + abs(v)):
            prev, mult = out[-1]
            out[-1] = ((prev * mult + v) / (mult + 1), mult + 1)
        else:
            out.append((v, 1))
    return out
