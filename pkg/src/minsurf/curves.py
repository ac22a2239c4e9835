"""Boundary curve catalog.

A boundary curve is a 2*pi-periodic map b: [0, 2*pi) -> R^3 tracing a closed
Jordan curve, together with its exact derivative b'.  The derivative is
required downstream: the reparametrization gradient contracts b'(phi_j)
against the inverse collocation matrix, so curves are supplied analytically
and never tabulated.

All evaluators are vectorized: for theta of shape (m,), they return arrays
of shape (m, 3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import make_interp_spline


@dataclass(frozen=True)
class BoundaryCurve:
    """Closed space curve with exact parametric derivative.

    eval / deriv map an array of angles (m,) to points (m, 3).  The
    descriptor (name + parameter map) identifies the curve in configs and
    reports; B-spline control points are carried inline.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]
    descriptor: dict = field(default_factory=dict)

    def __call__(self, theta):
        return self.eval(np.asarray(theta, dtype=float))


def _stack(*components):
    return np.stack(np.broadcast_arrays(*components), axis=-1)


def ellipse() -> BoundaryCurve:
    """Planar ellipse b(theta) = (2 cos theta, sin theta, 0)."""

    def b(t):
        return _stack(2.0 * np.cos(t), np.sin(t), np.zeros_like(t))

    def bp(t):
        return _stack(-2.0 * np.sin(t), np.cos(t), np.zeros_like(t))

    return BoundaryCurve(b, bp, {"name": "ellipse", "params": {}})


def cassini_oval(a: float = 1.1) -> BoundaryCurve:
    """Cassini oval r(theta) = sqrt(cos 2theta + sqrt(a^4 - sin^2 2theta)).

    Requires a > 1 so the radicand stays positive and the curve is a single
    Jordan loop; the outer square root takes the principal branch.
    """
    if a <= 1.0:
        raise ValueError("cassini oval parameter must exceed 1")
    a4 = float(a) ** 4

    def radius(t):
        return np.sqrt(np.cos(2.0 * t) + np.sqrt(a4 - np.sin(2.0 * t) ** 2))

    def b(t):
        r = radius(t)
        return _stack(r * np.cos(t), r * np.sin(t), np.zeros_like(t))

    def bp(t):
        root = np.sqrt(a4 - np.sin(2.0 * t) ** 2)
        r = np.sqrt(np.cos(2.0 * t) + root)
        # d/dt [cos 2t + sqrt(a^4 - sin^2 2t)] = -2 sin 2t - sin 4t / root
        rp = (-2.0 * np.sin(2.0 * t) - np.sin(4.0 * t) / root) / (2.0 * r)
        return _stack(
            rp * np.cos(t) - r * np.sin(t),
            rp * np.sin(t) + r * np.cos(t),
            np.zeros_like(t),
        )

    return BoundaryCurve(b, bp, {"name": "cassini", "params": {"a": float(a)}})


def crown(n: int, amplitude: float = 0.3) -> BoundaryCurve:
    """Crown curve b(theta) = (cos theta, sin theta, amplitude * sin n theta).

    amplitude = 0 degenerates to the unit circle, the flat-disk reference
    case used throughout the tests.
    """
    n = int(n)

    def b(t):
        return _stack(np.cos(t), np.sin(t), amplitude * np.sin(n * t))

    def bp(t):
        return _stack(-np.sin(t), np.cos(t), amplitude * n * np.cos(n * t))

    return BoundaryCurve(
        b, bp, {"name": "crown", "params": {"n": n, "amplitude": float(amplitude)}}
    )


def torus_knot(p: int, q: int) -> BoundaryCurve:
    """(p, q) torus knot on the torus of major radius 2, minor radius 1."""
    p, q = int(p), int(q)
    if math.gcd(p, q) != 1:
        raise ValueError("torus knot indices must be coprime")

    def b(t):
        w = 2.0 + np.cos(q * t)
        return _stack(w * np.cos(p * t), w * np.sin(p * t), -np.sin(q * t))

    def bp(t):
        w = 2.0 + np.cos(q * t)
        wp = -q * np.sin(q * t)
        return _stack(
            wp * np.cos(p * t) - p * w * np.sin(p * t),
            wp * np.sin(p * t) + p * w * np.cos(p * t),
            -q * np.cos(q * t),
        )

    return BoundaryCurve(b, bp, {"name": "torus_knot", "params": {"p": p, "q": q}})


def enneper_wire(r: float) -> BoundaryCurve:
    """Boundary of the Enneper surface with scale parameter r in (0, sqrt(3)).

        b1 =  r cos theta - (r^3/3) cos 3theta
        b2 = -r sin theta - (r^3/3) sin 3theta
        b3 =  r^2 cos 2theta

    The identity parametrization of this wire extends harmonically to the
    Enneper surface itself, so the equidistant configuration is already
    conformal up to discretization error.
    """
    r = float(r)
    if not 0.0 < r < math.sqrt(3.0):
        raise ValueError("enneper parameter must lie in (0, sqrt(3))")
    r3 = r**3 / 3.0

    def b(t):
        return _stack(
            r * np.cos(t) - r3 * np.cos(3.0 * t),
            -r * np.sin(t) - r3 * np.sin(3.0 * t),
            r * r * np.cos(2.0 * t),
        )

    def bp(t):
        return _stack(
            -r * np.sin(t) + 3.0 * r3 * np.sin(3.0 * t),
            -r * np.cos(t) - 3.0 * r3 * np.cos(3.0 * t),
            -2.0 * r * r * np.sin(2.0 * t),
        )

    return BoundaryCurve(b, bp, {"name": "enneper", "params": {"r": r}})


def bspline_curve(control, degree: int = 3) -> BoundaryCurve:
    """Closed periodic B-spline interpolating the given R^3 control points.

    Control point i is attained at parameter 2*pi*i/M (M points, uniform in
    knot space); the periodic interpolation system is solved once and the
    derivative comes from the spline itself.
    """
    pts = np.asarray(control, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError("control points must be an (m, 3) array")
    degree = int(degree)
    m = pts.shape[0]
    if m < degree + 1:
        raise ValueError(f"need at least {degree + 1} control points, got {m}")
    if np.max(np.linalg.norm(pts - pts[0], axis=1)) < 1e-12:
        raise ValueError("control points are degenerate (zero-length curve)")

    # Periodic interpolation needs the closing point repeated.
    t_knots = np.linspace(0.0, 2.0 * np.pi, m + 1)
    data = np.vstack([pts, pts[:1]])
    spline = make_interp_spline(t_knots, data, k=degree, bc_type="periodic")
    dspline = spline.derivative()

    def b(t):
        return spline(np.mod(t, 2.0 * np.pi))

    def bp(t):
        return dspline(np.mod(t, 2.0 * np.pi))

    return BoundaryCurve(
        b,
        bp,
        {
            "name": "bspline",
            "params": {"control": pts.tolist(), "degree": degree},
        },
    )


_CATALOG = {
    "ellipse": ellipse,
    "cassini": cassini_oval,
    "crown": crown,
    "torus_knot": torus_knot,
    "enneper": enneper_wire,
    "bspline": bspline_curve,
}


def from_descriptor(descriptor: dict) -> BoundaryCurve:
    """Rebuild a catalog curve from its descriptor (name + parameter map)."""
    try:
        name = descriptor["name"]
    except (TypeError, KeyError):
        raise ValueError("curve descriptor must carry a 'name' key") from None
    if name not in _CATALOG:
        raise ValueError(f"unknown curve {name!r}; choices: {sorted(_CATALOG)}")
    params = descriptor.get("params", {})
    return _CATALOG[name](**params)
