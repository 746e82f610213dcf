"""Integration of the two foliations of a BDE via the lifted field.

On the surface F(x, y, p) = a p^2 + 2 b p + c = 0 (p = dy/dx) the vector
field (F_p, p F_p, -(F_x + p F_y)) is tangent to {F = 0}; its projection
to (x, y) integrates the BDE and passes through the discriminant, where
the projected curve generically shows a cusp.  Steep slopes are handled
in the reciprocal chart q = 1/p, where q = dx/dy solves the same equation
with the roles of the outer coefficients swapped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bde import BDE
from .errors import UsageError
from .numeval import compile_poly
from .poly import Poly
from .trace import fix_params

#: slope variable: v plays the role of p = dy/dx on the lifted surface.
_SLOPE = "v"
_LIFT_VARS = ("x", "y", _SLOPE)


def _fix(b: BDE, params=(0, 0)) -> tuple[Poly, Poly, Poly]:
    out = []
    for q in (b.a, b.b, b.c):
        q = fix_params(q, params)
        if not set(q.varlist) <= {"x", "y"}:
            raise UsageError(
                f"coefficient still depends on {q.varlist}; fix all parameters first"
            )
        out.append(q.extend(_LIFT_VARS))
    return tuple(out)


@dataclass(frozen=True)
class LiftedField:
    """The contact surface F = a v^2 + 2 b v + c and its tangent field."""

    F: Poly
    dx: Poly  # F_v
    dy: Poly  # v * F_v
    dv: Poly  # -(F_x + v F_y)

    @staticmethod
    def from_bde(b: BDE, params=(0, 0)) -> "LiftedField":
        a, b2, c = _fix(b, params)
        v = Poly.var(_SLOPE, _LIFT_VARS)
        F = a * v * v + b2.scale(2) * v + c
        dx = F.partial(_SLOPE)
        dy = v * dx
        dv = -(F.partial("x") + v * F.partial("y"))
        # Tangency: the field must annihilate F identically.
        tangency = F.partial("x") * dx + F.partial("y") * dy + F.partial(_SLOPE) * dv
        assert tangency.is_zero(), "lifted field is not tangent to {F=0}"
        return LiftedField(F=F, dx=dx, dy=dy, dv=dv)

    def reciprocal(self) -> "LiftedField":
        """The same surface in the chart q = 1/v (here still named v).

        G(x, y, q) = q^2 F(x, y, 1/q) = c q^2 + 2 b q + a, with tangent
        field (q G_q, G_q, -(G_y + q G_x)) since q = dx/dy.
        """
        coeffs = self.F.coeffs_in(_SLOPE)
        zero = Poly.zero(tuple(n for n in self.F.varlist if n != _SLOPE))
        a = coeffs.get(2, zero).extend(_LIFT_VARS)
        b2 = coeffs.get(1, zero).extend(_LIFT_VARS).scale(Fraction(1, 2))
        c = coeffs.get(0, zero).extend(_LIFT_VARS)
        q = Poly.var(_SLOPE, _LIFT_VARS)
        G = c * q * q + b2.scale(2) * q + a
        gq = G.partial(_SLOPE)
        return LiftedField(
            F=G,
            dx=q * gq,
            dy=gq,
            dv=-(G.partial("y") + q * G.partial("x")),
        )



def directions_at(b: BDE, point, params=(0, 0), flat_tol: float = 1e-10):
    """Real asymptotic slopes at a point: [], one or two values, or "all".

    A vertical direction is reported as ``math.inf`` (found in the
    reciprocal chart when the leading coefficient vanishes); at a flat
    umbilic every direction solves the equation and the string ``"all"``
    is returned.
    """
    a, b2, c = _fix(b, params)
    vals = {"x": float(point[0]), "y": float(point[1]), _SLOPE: 0.0}
    av, bv, cv = (q.eval_float(vals) for q in (a, b2, c))
    scale = max(abs(av), abs(bv), abs(cv))
    if scale < flat_tol:
        return "all"
    disc = bv * bv - av * cv
    if disc < 0:
        return []
    if abs(av) > 1e-12 * scale:
        r = math.sqrt(disc)
        return sorted({(-bv + r) / av, (-bv - r) / av})
    # a ~ 0: one vertical direction, plus the root of the linear part.
    out = [math.inf]
    if abs(bv) > 1e-12 * scale:
        out.insert(0, -cv / (2 * bv))
    return out


def integrate_field(
    b: BDE,
    seed,
    params=(0, 0),
    *,
    slope: float | None = None,
    orientation: int = 1,
    step: float = 1e-3,
    max_steps: int = 10**5,
    window=(-0.5, 0.5, -0.5, 0.5),
    chart_bound: float = 4.0,
    flat_tol: float = 1e-10,
) -> np.ndarray:
    """One integral curve of one foliation, as an (N, 2) polyline.

    Fixed-step RK4 on the lifted surface with the field normalized to
    unit speed, so ``step`` is arclength on the lift.  Stops on window
    exit, step budget, or approach to a flat umbilic (all three
    coefficients below ``flat_tol``).  Crossing the discriminant needs no
    special casing: the lifted field is regular there and the projection
    produces the cusp by itself.
    """
    if slope is None:
        dirs = directions_at(b, seed, params, flat_tol)
        if dirs == "all":
            raise UsageError("seed is a flat umbilic: every direction is asymptotic")
        if not dirs:
            raise UsageError("seed lies in the elliptic region: no real asymptotic direction")
        slope = dirs[0]
    lift = LiftedField.from_bde(b, params)
    charts = {
        "v": [compile_poly(f, _LIFT_VARS) for f in (lift.dx, lift.dy, lift.dv)],
        "q": [
            compile_poly(f, _LIFT_VARS)
            for f in (lift.reciprocal().dx, lift.reciprocal().dy, lift.reciprocal().dv)
        ],
    }
    a, b2, c = _fix(b, params)
    coeff_fns = [compile_poly(q, ("x", "y")) for q in (a, b2, c)]

    def rhs(state, chart, direction):
        x, y, s = state
        fx, fy, fs = charts[chart]
        vec = np.array([fx(x, y, s), fy(x, y, s), fs(x, y, s)])
        n = np.linalg.norm(vec)
        return direction * vec / n if n > 0 else vec

    xmin, xmax, ymin, ymax = window
    x0, y0 = float(seed[0]), float(seed[1])
    chart, s0 = "v", float(slope)
    if not math.isfinite(s0) or abs(s0) > chart_bound:
        chart = "q"
        s0 = 0.0 if not math.isfinite(s0) else 1.0 / s0
    state = np.array([x0, y0, s0])
    direction = float(orientation)
    pts = [(x0, y0)]
    h = step
    for _ in range(max_steps):
        k1 = rhs(state, chart, direction)
        k2 = rhs(state + 0.5 * h * k1, chart, direction)
        k3 = rhs(state + 0.5 * h * k2, chart, direction)
        k4 = rhs(state + h * k3, chart, direction)
        new = state + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(new)):
            break
        x, y, s = new
        if not (xmin <= x <= xmax and ymin <= y <= ymax):
            break
        pts.append((float(x), float(y)))
        state = new
        if max(abs(f(x, y)) for f in coeff_fns) < flat_tol:
            break
        if abs(s) > chart_bound:
            # Switch charts; the two tangent fields are antiparallel on
            # the overlap, so keep the direction of travel by comparing
            # with the step just taken.
            other = "q" if chart == "v" else "v"
            switched = np.array([x, y, 1.0 / s])
            vec = rhs(switched, other, direction)
            if vec[0] * k1[0] + vec[1] * k1[1] < 0:
                direction = -direction
            chart, state = other, switched
    return np.array(pts)


def bde_residual(b: BDE, polyline: np.ndarray, params=(0, 0)) -> float:
    """Max of |a dy^2 + 2b dx dy + c dx^2| / (dx^2 + dy^2) over segments.

    Coefficients are evaluated at segment midpoints.  Small values certify
    that the polyline follows one of the BDE's direction fields.
    """
    a, b2, c = _fix(b, params)
    fa, fb, fc = (compile_poly(q, ("x", "y")) for q in (a, b2, c))
    if len(polyline) < 2:
        return 0.0
    p0, p1 = polyline[:-1], polyline[1:]
    dx = p1[:, 0] - p0[:, 0]
    dy = p1[:, 1] - p0[:, 1]
    mx = (p0[:, 0] + p1[:, 0]) / 2
    my = (p0[:, 1] + p1[:, 1]) / 2
    res = fa(mx, my) * dy * dy + 2 * fb(mx, my) * dx * dy + fc(mx, my) * dx * dx
    length2 = dx * dx + dy * dy
    ok = length2 > 0
    return float(np.max(np.abs(res[ok]) / length2[ok])) if ok.any() else 0.0


def portrait(
    b: BDE,
    window=(-0.5, 0.5, -0.5, 0.5),
    params=(0, 0),
    *,
    seeds: int = 7,
    step: float = 1e-3,
    max_steps: int = 4000,
) -> list:
    """Deterministic batch of integral curves covering the hyperbolic region.

    Seeds on a lattice where real directions exist; both foliations, both
    orientations.  Returns a list of (N, 2) polylines.
    """
    xmin, xmax, ymin, ymax = window
    curves = []
    for x0 in np.linspace(xmin, xmax, seeds):
        for y0 in np.linspace(ymin, ymax, seeds):
            dirs = directions_at(b, (x0, y0), params)
            if dirs == "all" or not dirs:
                continue
            for slope in dirs:
                for orientation in (+1, -1):
                    curve = integrate_field(
                        b,
                        (x0, y0),
                        params,
                        slope=slope,
                        orientation=orientation,
                        step=step,
                        max_steps=max_steps,
                        window=window,
                    )
                    if len(curve) > 1:
                        curves.append(curve)
    return curves
