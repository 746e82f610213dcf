"""Numerical tracing of implicit curves and their special points.

Exact polynomials come in; floats come out.  Tracing is marching squares
with Newton refinement of every crossing; singular points are found by a
batched Newton iteration on the gradient system and classified by the
Hessian (falling back to the cubic term in the kernel direction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import UsageError
from .families import SurfaceFamily
from .flecnodal import FlecnodalSystem, flecnodal_system, parabolic_poly
from .numeval import compile_gradient, compile_poly
from .poly import Poly, substitute

Window = tuple[float, float, float, float]  # xmin, xmax, ymin, ymax
DEFAULT_WINDOW: Window = (-0.5, 0.5, -0.5, 0.5)


def fix_params(p: Poly, params=(0, 0)) -> Poly:
    """Substitute (t, u) exactly (rationals preferred) and drop unused vars."""
    t, u = params
    bindings = {}
    for name, value in (("t", t), ("u", u)):
        if name in p.varlist:
            bindings[name] = Poly.const(_as_fraction(value), ())
    return (substitute(p, bindings) if bindings else p).restrict()


def _as_fraction(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value).limit_denominator(10**12)


@dataclass
class TracedCurve:
    """Polyline approximation of an implicit curve plus marked points."""

    branches: list  # list of (N, 2) float arrays
    special_points: list  # list of ((x, y), tag)
    source: Poly
    window: Window
    resolution: int

    def n_branches(self) -> int:
        return len(self.branches)

    def all_points(self) -> np.ndarray:
        if not self.branches:
            return np.zeros((0, 2))
        return np.vstack(self.branches)


# -- singular points -------------------------------------------------------


def curve_singularities(
    p: Poly,
    window: Window = DEFAULT_WINDOW,
    params=None,
    *,
    grid: int = 64,
    newton_tol: float = 1e-12,
    residual_tol: float = 1e-10,
    dedupe: float = 1e-6,
) -> list:
    """Solutions of p = p_x = p_y = 0 in the window, classified.

    Classification: nondegenerate Hessian -> node (indefinite) or isolated
    (definite); rank-1 Hessian with a nonzero cubic term along the kernel
    -> cusp; anything deeper -> degenerate.
    """
    if params is not None:
        p = fix_params(p, params)
    p = _in_xy(p.restrict())
    fp = compile_poly(p)
    px, py = p.partial("x"), p.partial("y")
    fx, fy = compile_poly(px), compile_poly(py)
    fxx = compile_poly(px.partial("x"))
    fxy = compile_poly(px.partial("y"))
    fyy = compile_poly(py.partial("y"))
    xmin, xmax, ymin, ymax = window
    gx, gy = np.meshgrid(
        np.linspace(xmin, xmax, grid), np.linspace(ymin, ymax, grid)
    )
    X, Y = gx.ravel().copy(), gy.ravel().copy()
    # Degenerate roots of the gradient system (cusps) converge only
    # linearly, so allow many iterations; the loop exits early once every
    # seed has stalled or converged.
    for _ in range(300):
        a, b, c = fxx(X, Y), fxy(X, Y), fyy(X, Y)
        g1, g2 = fx(X, Y), fy(X, Y)
        det = a * c - b * b
        bad = np.abs(det) < 1e-300
        det = np.where(bad, 1.0, det)
        dx = (c * g1 - b * g2) / det
        dy = (a * g2 - b * g1) / det
        dx = np.where(bad, 0.0, dx)
        dy = np.where(bad, 0.0, dy)
        step = np.clip(np.hypot(dx, dy), 0, None)
        lim = np.maximum(1.0, step)  # damp huge steps
        X -= dx / lim
        Y -= dy / lim
        if np.max(np.hypot(dx, dy)) < newton_tol:
            break
    pad = 1e-9 + 0.0
    ok = (
        (X >= xmin - pad)
        & (X <= xmax + pad)
        & (Y >= ymin - pad)
        & (Y <= ymax + pad)
        & (np.abs(fp(X, Y)) <= residual_tol)
        & (np.hypot(fx(X, Y), fy(X, Y)) <= math.sqrt(residual_tol))
    )
    X, Y = X[ok], Y[ok]
    quality = np.abs(fp(X, Y)) + np.hypot(fx(X, Y), fy(X, Y))
    order = np.argsort(quality)
    points = _dedupe(np.column_stack([X[order], Y[order]]), dedupe)
    out = []
    for x0, y0 in points:
        out.append(((float(x0), float(y0)), _classify_point(p, x0, y0)))
    return out


def _in_xy(p: Poly) -> Poly:
    for name in p.varlist:
        if name not in ("x", "y") and p.degree(name) > 0:
            raise UsageError(
                f"expected a polynomial in (x, y); found {name!r} (substitute params first)"
            )
    return p.restrict().extend(("x", "y"))


def _classify_point(p: Poly, x0: float, y0: float) -> str:
    vals = {"x": x0, "y": y0}
    h11 = p.partial("x").partial("x").eval_float(vals)
    h12 = p.partial("x").partial("y").eval_float(vals)
    h22 = p.partial("y").partial("y").eval_float(vals)
    hnorm = max(abs(h11), abs(h12), abs(h22))
    det = h11 * h22 - h12 * h12
    if hnorm > 1e-8 and abs(det) > 1e-8 * hnorm * hnorm:
        return "node" if det < 0 else "isolated"
    if hnorm <= 1e-8:
        return "degenerate"
    # Rank 1: kernel direction of the (symmetric) Hessian.
    if abs(h11) + abs(h12) >= abs(h12) + abs(h22):
        kx, ky = h12, -h11
    else:
        kx, ky = h22, -h12
    n = math.hypot(kx, ky)
    kx, ky = kx / n, ky / n
    c3 = (
        p.partial("x").partial("x").partial("x").eval_float(vals) * kx**3
        + 3 * p.partial("x").partial("x").partial("y").eval_float(vals) * kx**2 * ky
        + 3 * p.partial("x").partial("y").partial("y").eval_float(vals) * kx * ky**2
        + p.partial("y").partial("y").partial("y").eval_float(vals) * ky**3
    )
    return "cusp" if abs(c3) > 1e-6 * max(1.0, hnorm) else "degenerate"


def _dedupe(points: np.ndarray, radius: float) -> np.ndarray:
    kept: list = []
    for pt in points:
        if all(np.hypot(pt[0] - q[0], pt[1] - q[1]) > radius for q in kept):
            kept.append(pt)
    return np.array(kept) if kept else np.zeros((0, 2))


# -- marching squares ------------------------------------------------------


def trace_zero_set(
    p: Poly,
    window: Window = DEFAULT_WINDOW,
    resolution: int = 128,
    params=None,
    *,
    refine_tol: float = 1e-9,
    mark_singular: bool = True,
) -> TracedCurve:
    """Marching squares with Newton refinement; branches split at singular points."""
    if resolution < 8:
        raise UsageError("resolution must be at least 8")
    if params is not None:
        p = fix_params(p, params)
    p = _in_xy(p.restrict())
    xmin, xmax, ymin, ymax = window
    xs = np.linspace(xmin, xmax, resolution + 1)
    ys = np.linspace(ymin, ymax, resolution + 1)
    fp = compile_poly(p)
    fx, fy = compile_gradient(p)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    vals = fp(gx, gy)

    # Crossing point per grid edge (keyed so neighbors share vertices).
    edge_pts: dict = {}

    def edge_point(i0, j0, i1, j1):
        key = (i0, j0, i1, j1)
        if key in edge_pts:
            return key
        v0, v1 = vals[i0, j0], vals[i1, j1]
        s = 0.5 if v0 == v1 else v0 / (v0 - v1)
        x = xs[i0] + (xs[i1] - xs[i0]) * s
        y = ys[j0] + (ys[j1] - ys[j0]) * s
        x, y = _newton_onto_curve(fp, fx, fy, x, y, refine_tol)
        edge_pts[key] = (x, y)
        return key

    segments = []
    neg = vals < 0
    for i in range(resolution):
        for j in range(resolution):
            mask = (
                (1 if neg[i, j] else 0)
                | (2 if neg[i + 1, j] else 0)
                | (4 if neg[i + 1, j + 1] else 0)
                | (8 if neg[i, j + 1] else 0)
            )
            if mask in (0, 15):
                continue
            bottom = (i, j, i + 1, j)
            right = (i + 1, j, i + 1, j + 1)
            top = (i, j + 1, i + 1, j + 1)
            left = (i, j, i, j + 1)
            combos = _MS_TABLE[mask]
            if mask in (5, 10):
                center = fp((xs[i] + xs[i + 1]) / 2, (ys[j] + ys[j + 1]) / 2)
                combos = _ms_ambiguous(mask, center < 0)
            for e1, e2 in combos:
                k1 = edge_point(*{"b": bottom, "r": right, "t": top, "l": left}[e1])
                k2 = edge_point(*{"b": bottom, "r": right, "t": top, "l": left}[e2])
                if k1 != k2:
                    segments.append((k1, k2))

    branches = _chain_segments(segments, edge_pts)
    special = []
    if mark_singular:
        special = curve_singularities(p, window)
        cell = max((xmax - xmin), (ymax - ymin)) / resolution
        branches = _split_at_points(branches, [pt for pt, _ in special], 1.5 * cell)
    return TracedCurve(
        branches=[np.array(b) for b in branches],
        special_points=special,
        source=p,
        window=window,
        resolution=resolution,
    )


_MS_TABLE = {
    1: [("b", "l")],
    2: [("b", "r")],
    3: [("l", "r")],
    4: [("r", "t")],
    5: None,
    6: [("b", "t")],
    7: [("l", "t")],
    8: [("l", "t")],
    9: [("b", "t")],
    10: None,
    11: [("r", "t")],
    12: [("l", "r")],
    13: [("b", "r")],
    14: [("b", "l")],
}


def _ms_ambiguous(mask, center_neg):
    # mask 5: corners (0,0) and (1,1) negative; mask 10: the other pair.
    if mask == 5:
        return [("b", "r"), ("l", "t")] if center_neg else [("b", "l"), ("r", "t")]
    return [("b", "l"), ("r", "t")] if center_neg else [("b", "r"), ("l", "t")]


def _newton_onto_curve(fp, fx, fy, x, y, tol, max_iter=50):
    for _ in range(max_iter):
        v = fp(x, y)
        if abs(v) <= tol:
            return float(x), float(y)
        g1, g2 = fx(x, y), fy(x, y)
        n2 = g1 * g1 + g2 * g2
        if n2 < 1e-300:
            break
        x -= v * g1 / n2
        y -= v * g2 / n2
    return float(x), float(y)


def _chain_segments(segments, edge_pts):
    adj: dict = {}
    for idx, (a, b) in enumerate(segments):
        adj.setdefault(a, []).append((idx, b))
        adj.setdefault(b, []).append((idx, a))
    used = [False] * len(segments)
    chains = []
    for start in adj:
        if len(adj[start]) == 2:
            continue
        for idx, nxt in adj[start]:
            if used[idx]:
                continue
            chains.append(_walk(start, idx, nxt, adj, used))
    # Remaining segments form closed loops.
    for idx, (a, b) in enumerate(segments):
        if not used[idx]:
            used[idx] = True
            chains.append(_walk(a, idx, b, adj, used, first_used=True))
    return [[edge_pts[k] for k in chain] for chain in chains if len(chain) > 1]


def _walk(start, idx, nxt, adj, used, first_used=False):
    if not first_used:
        used[idx] = True
    chain = [start, nxt]
    cur = nxt
    prev_idx = idx
    while True:
        options = [(i, o) for i, o in adj.get(cur, []) if not used[i] and i != prev_idx]
        if not options:
            break
        i, o = options[0]
        used[i] = True
        chain.append(o)
        cur, prev_idx = o, i
        if cur == start:
            break
    return chain


def _split_at_points(branches, points, radius):
    if not points:
        return branches
    out = []
    for br in branches:
        dists = [
            min(math.hypot(x - px, y - py) for px, py in points) for x, y in br
        ]
        # One cut per passage: the closest vertex of each maximal run of
        # vertices inside the radius, snapped onto the singular point.
        cuts = []
        k = 0
        while k < len(br):
            if dists[k] <= radius:
                j = k
                while j + 1 < len(br) and dists[j + 1] <= radius:
                    j += 1
                best = min(range(k, j + 1), key=lambda m: dists[m])
                cuts.append(best)
                k = j + 1
            else:
                k += 1
        if not cuts:
            out.append(br)
            continue
        br = list(br)
        closed = br[0] == br[-1] and len(br) > 2
        if closed:
            # Rotate so the loop starts at a cut; one cut then yields one
            # open branch with both ends at the singular point.
            c0 = cuts[0]
            br = br[c0:-1] + br[: c0 + 1]
            dists = dists[c0:-1] + dists[: c0 + 1]
            cuts = [k - c0 for k in cuts]
            cuts[-1] = len(br) - 1 if cuts[0] == 0 else cuts[-1]
            cuts = sorted({0, len(br) - 1} | {k for k in cuts if 0 < k < len(br) - 1})
        for k in cuts:
            nearest = min(points, key=lambda q: math.hypot(br[k][0] - q[0], br[k][1] - q[1]))
            br[k] = (nearest[0], nearest[1])
        prev = 0
        for k in cuts:
            piece = br[prev:k + 1]
            if len(piece) > 1:
                out.append(piece)
            prev = k
        tail = br[prev:]
        if len(tail) > 1:
            out.append(tail)
    return out


# -- special point solvers -------------------------------------------------


def gauss_cusps(
    f: "SurfaceFamily | Poly",
    params=(0, 0),
    window: Window = DEFAULT_WINDOW,
    *,
    grid: int = 64,
    parallel_tol: float = 1e-8,
    on_curve_tol: float = 1e-8,
    dedupe: float = 1e-6,
) -> list:
    """Tangency points of the parabolic and flecnodal curves.

    Solves {P = 0, grad P x grad S = 0} by batched Newton and keeps
    solutions lying on S as well (|S| small): ordinary or degenerate cusps
    of Gauss.
    """
    fam = f if isinstance(f, SurfaceFamily) else SurfaceFamily(f=f)
    P = fix_params(parabolic_poly(fam), params)
    import warnings as _w

    with _w.catch_warnings():
        _w.simplefilter("ignore")
        S = fix_params(flecnodal_system(fam).eliminant, params)
    P, S = (_in_xy(q) for q in (P, S))
    from .poly import unify

    P, S = unify(P, S)
    cross = P.partial("x") * S.partial("y") - P.partial("y") * S.partial("x")
    sols = _newton2(P, cross, window, grid)
    fS = compile_poly(S)
    fP = compile_poly(P)
    fc = compile_poly(cross)
    out = []
    for x0, y0 in sols:
        if (
            abs(fP(x0, y0)) <= on_curve_tol
            and abs(fc(x0, y0)) <= parallel_tol
            and abs(fS(x0, y0)) <= on_curve_tol
        ):
            out.append((float(x0), float(y0)))
    return [tuple(pt) for pt in _dedupe(np.array(out) if out else np.zeros((0, 2)), dedupe)]


def _newton2(p: Poly, q: Poly, window: Window, grid: int, iters: int = 60):
    from .poly import unify

    p, q = unify(p, q)
    f1, f2 = compile_poly(p), compile_poly(q)
    j11, j12 = compile_gradient(p)
    j21, j22 = compile_gradient(q)
    xmin, xmax, ymin, ymax = window
    gx, gy = np.meshgrid(np.linspace(xmin, xmax, grid), np.linspace(ymin, ymax, grid))
    X, Y = gx.ravel().copy(), gy.ravel().copy()
    for _ in range(iters):
        a, b, c, d = j11(X, Y), j12(X, Y), j21(X, Y), j22(X, Y)
        r1, r2 = f1(X, Y), f2(X, Y)
        det = a * d - b * c
        bad = np.abs(det) < 1e-300
        det = np.where(bad, 1.0, det)
        dx = (d * r1 - b * r2) / det
        dy = (a * r2 - c * r1) / det
        dx = np.where(bad, 0.0, dx)
        dy = np.where(bad, 0.0, dy)
        lim = np.maximum(1.0, np.hypot(dx, dy))
        X -= dx / lim
        Y -= dy / lim
    pad = 1e-9
    ok = (X >= xmin - pad) & (X <= xmax + pad) & (Y >= ymin - pad) & (Y <= ymax + pad)
    ok &= np.isfinite(X) & np.isfinite(Y)
    return np.column_stack([X[ok], Y[ok]])


def butterfly_points(
    f: "SurfaceFamily | FlecnodalSystem",
    window: Window = DEFAULT_WINDOW,
    params=(0, 0),
    *,
    vmax: float = 10.0,
    grid: int = 10,
    v_seeds: int = 9,
    residual_tol: float = 1e-9,
    dedupe: float = 1e-6,
) -> list:
    """Points of 5-point contact: common zeros of e2 = e3 = e4.

    A SurfaceFamily is solved in both direction charts (x- and y-axis
    projections) and results merged, so directions with |v| beyond the
    chart bound are not lost.
    """
    if isinstance(f, FlecnodalSystem):
        systems = [f]
    else:
        import warnings as _w

        with _w.catch_warnings():
            _w.simplefilter("ignore")
            systems = [flecnodal_system(f, axis="x"), flecnodal_system(f, axis="y")]
    found = []
    for fs in systems:
        eqs = [fix_params(e, params) for e in (fs.e2, fs.e3, fs.e4)]
        sols = _newton3(eqs, window, grid, v_seeds, vmax)
        for x0, y0, v0 in sols:
            if abs(v0) <= vmax and all(
                abs(compile_poly(e, ("x", "y", "v"))(x0, y0, v0)) <= residual_tol
                for e in eqs
            ):
                found.append((float(x0), float(y0)))
    pts = _dedupe(np.array(found) if found else np.zeros((0, 2)), dedupe)
    return [tuple(pt) for pt in pts]


def _newton3(eqs, window: Window, grid: int, v_seeds: int, vmax: float, iters: int = 60):
    from .poly import unify

    eqs = list(unify(*eqs))
    args = ("x", "y", "v")
    fs = [compile_poly(e, args) for e in eqs]
    jac = [[compile_poly(e.partial(n) if n in e.varlist else Poly.zero(e.varlist), args) for n in args] for e in eqs]
    xmin, xmax, ymin, ymax = window
    gx, gy, gv = np.meshgrid(
        np.linspace(xmin, xmax, grid),
        np.linspace(ymin, ymax, grid),
        np.linspace(-2.0, 2.0, v_seeds),
    )
    Z = np.column_stack([gx.ravel(), gy.ravel(), gv.ravel()])
    for _ in range(iters):
        F = np.column_stack([f(Z[:, 0], Z[:, 1], Z[:, 2]) for f in fs])
        J = np.empty((len(Z), 3, 3))
        for r in range(3):
            for c in range(3):
                J[:, r, c] = jac[r][c](Z[:, 0], Z[:, 1], Z[:, 2])
        det = np.linalg.det(J)
        bad = ~np.isfinite(det) | (np.abs(det) < 1e-300)
        J[bad] = np.eye(3)
        F[bad] = 0
        step = np.linalg.solve(J, F[..., None])[..., 0]
        lim = np.maximum(1.0, np.linalg.norm(step, axis=1))[:, None]
        Z -= step / lim
    ok = np.all(np.isfinite(Z), axis=1)
    ok &= (Z[:, 0] >= xmin) & (Z[:, 0] <= xmax) & (Z[:, 1] >= ymin) & (Z[:, 1] <= ymax)
    return Z[ok]


def flecnodal_parametrization_check(
    f: "SurfaceFamily | None" = None,
    t: float = -0.01,
    n_samples: int = 11,
    v_range: float = 0.05,
) -> float:
    """Max |eliminant| along the closed-form flecnodal parametrization.

    The check applies to the binodal deformation y^2 + x^4 + x^2 y^2 + t x^2
    (t < 0).  Solving e3 = 0 gives y = -x(2 + v^2)/v; substituting into
    e2 = 0 yields the exact parametrization

        x = +-      v  sqrt(-t - v^2) / sqrt(2 (2 + v^2 - v^4)),
        y = -+ (2+v^2) sqrt(-t - v^2) / sqrt(2 (2 + v^2 - v^4)),

    valid for t <= -v^2.  The eliminant must vanish along it to float
    precision.
    """
    from .families import family_library

    fam = f or family_library("Pi_v1++")
    elim = fix_params(flecnodal_system(fam).eliminant, (Fraction(t).limit_denominator(10**12), 0))
    fe = compile_poly(_in_xy(elim))
    worst = 0.0
    for v in np.linspace(-v_range, v_range, n_samples):
        if -t - v * v < 0:
            continue
        scale = math.sqrt(-t - v * v) / math.sqrt(2 * (2 + v * v - v**4))
        for sgn in (+1, -1):
            x = sgn * v * scale
            y = -sgn * (2 + v * v) * scale
            worst = max(worst, abs(fe(x, y)))
    return worst
