"""Reduction of a BDE to a single implicit differential equation.

When the dy^2 coefficient is a unit at the origin, the equation
a p^2 + 2 b p + c = 0 (p = dy/dx) can be completed to a square: after the
change of the dependent variable y -> y + \\int_0^x (b/a)(s, y) ds the
equation reads dy^2 + phi(x, y) dx^2 = 0.  All series manipulations are
exact on rational coefficients, truncated in the (x, y)-grading (parameters
t, u carry weight 0 and ride along symbolically).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bde import BDE
from .errors import NotAnIDEError, UsageError
from .poly import Poly, substitute, unify


def _grade0_constant(p: Poly) -> Fraction:
    """Constant term of the weight-0 part; raises if that part is not constant."""
    low = p.truncate(0)
    if not low.is_constant():
        raise NotAnIDEError(
            "the dy^2 coefficient has parameter-dependent terms of (x, y)-degree 0; "
            "the square-completion reduction needs a constant unit there"
        )
    return low.constant_value()


def _series_inverse(p: Poly, trunc_deg: int) -> Poly:
    """1/p as a truncated series, requiring a nonzero constant weight-0 part."""
    a0 = _grade0_constant(p)
    if a0 == 0:
        raise NotAnIDEError("the dy^2 coefficient vanishes at the origin; not reducible to an IDE")
    h = (p.scale(1 / a0) - Poly.const(1, p.varlist)).truncate(trunc_deg)
    inv = Poly.const(1, p.varlist)
    power = Poly.const(1, p.varlist)
    for _ in range(trunc_deg):
        power = (power * -h).truncate(trunc_deg)
        if power.is_zero():
            break
        inv = inv + power
    return inv.scale(1 / a0)


def to_ide(bde: BDE, trunc_deg: int = 6) -> Poly:
    """Coefficient phi of the reduced equation dy^2 + phi(x, y) dx^2 = 0.

    phi = (a c - b^2) / a^2 rewritten in the sheared dependent variable,
    truncated at (x, y)-degree ``trunc_deg``.
    """
    if trunc_deg < 0:
        raise UsageError("trunc_deg must be nonnegative")
    a, b, c = unify(bde.a, bde.b, bde.c)
    inv_a = _series_inverse(a, trunc_deg)
    psi = ((a * c - b * b).truncate(trunc_deg + 2) * inv_a * inv_a).truncate(trunc_deg)
    if "x" not in a.varlist or "y" not in a.varlist:
        return psi
    # Shift of the dependent variable: ybar = y + \int_0^x (b/a)(s, y) ds.
    shift = (b * inv_a).truncate(trunc_deg).integrate("x")
    # Invert y -> ybar term by term: z_{k+1} = ybar - shift(x, z_k).
    yv = Poly.var("y", a.varlist)
    z = yv
    for _ in range(trunc_deg + 1):
        nxt = (yv - substitute(shift, {"y": z}, trunc_deg=trunc_deg + 1)).truncate(trunc_deg + 1)
        if nxt == z:
            break
        z = nxt
    return substitute(psi, {"y": z}, trunc_deg=trunc_deg).truncate(trunc_deg)


def _deriv_at_zero(p: Poly, order: str) -> Fraction:
    """Iterated partial derivatives (one letter per variable) evaluated at 0."""
    for name in order:
        p = p.partial(name)
    return p.eval_rational({name: 0 for name in p.varlist})


@dataclass(frozen=True)
class VersalityResult:
    label: str
    matrix: tuple[tuple[Fraction, ...], ...]
    determinant: Fraction

    @property
    def versal(self) -> bool:
        return self.determinant != 0


def _det(rows) -> Fraction:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = Fraction(0)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * _det(minor)
    return total


#: Which derivative columns feed the versality matrix, per stratum base label.
_PHI_RECIPES = {
    "Pi_v1": (("t",), ("",)),
    "Pi_c2": (("t",), ("x",)),
    "Pi_c3": (("u", "t"), ("x", "xx")),
    "Pi_v2": (("u", "t"), ("", "y")),
    "Pi_v3": (("u", "t"), ("", "y", "xx")),
}

#: Fixed extra rows (tangent directions of the normal form itself).
_FIXED_ROWS = {
    "Pi_v3": ((Fraction(0), Fraction(1), Fraction(6)),),
}


def versality_check(label: str, obj: "Poly | BDE") -> VersalityResult:
    """Transversality determinant for a deformation against its stratum.

    For the parabolic strata ``obj`` is the reduced coefficient phi (a Poly
    in x, y, t, u); each parameter contributes a row of initial derivatives
    of d(phi)/d(param).  For ``Pi_f1`` the check runs directly on the BDE
    coefficient triple: the Jacobian of (a, b, c) with respect to (x, y, t)
    at the origin.  A nonzero determinant certifies the family is versal.
    """
    base = label.rstrip("+-")
    if base == "Pi_f1":
        if not isinstance(obj, BDE):
            raise UsageError("Pi_f1 versality works on the BDE coefficient triple")
        rows = tuple(
            tuple(_deriv_at_zero(coeff, v) for v in ("x", "y", "t"))
            for coeff in (obj.a, obj.b, obj.c)
        )
        return VersalityResult(label, rows, _det([list(r) for r in rows]))
    if base not in _PHI_RECIPES:
        raise UsageError(f"no closed-form versality recipe for stratum {label!r}")
    if isinstance(obj, BDE):
        obj = to_ide(obj)
    params, cols = _PHI_RECIPES[base]
    rows = list(_FIXED_ROWS.get(base, ()))
    for param in params:
        dphi = obj.partial(param)
        rows.append(tuple(_deriv_at_zero(dphi, c) for c in cols))
    rows_t = tuple(tuple(r) for r in rows)
    return VersalityResult(label, rows_t, _det([list(r) for r in rows_t]))
