from fractions import Fraction

import pytest

from mongebde.bde import BDE, asymptotic_bde
from mongebde.errors import NotAnIDEError, UsageError
from mongebde.families import family_library
from mongebde.ide import to_ide, versality_check
from mongebde.poly import parse_poly


def phi_of(label, trunc_deg=6, moduli=None):
    fam = family_library(label, moduli)
    return to_ide(asymptotic_bde(fam.f), trunc_deg)


class TestToIDE:
    def test_simple_square_completion(self):
        # y^2 + x^3: a=2, b=0, c=6x -> phi = (2*6x)/4 = 3x exactly.
        phi = to_ide(asymptotic_bde(parse_poly("y^2 + x^3")), 6)
        assert phi.same_poly(parse_poly("3*x"))

    def test_gauss_cusp_normal_form(self):
        # y^2 + x^2 y + c40 x^4 reduces to dy^2 + (-y + lambda-shifted x^2) dx^2.
        phi = to_ide(asymptotic_bde(parse_poly("y^2 + x^2*y + x^4")), 2)
        # a = 2, b = 2x, c = 2y + 12x^2; psi = (ac - b^2)/4 = y + 6x^2 - x^2,
        # then the y-shift replaces y by y - x^2/2 + O(3).
        assert phi.coefficient({"y": 1}) == 1
        assert phi.coefficient({"x": 2}) == Fraction(9, 2)

    def test_v2_family_low_order(self):
        phi = phi_of("Pi_v2+", trunc_deg=3)
        expected = parse_poly(
            "t + u*y + 6*x^2 + y^3 + -3/2*u^2*x^2 + -3*t*x^2*y"
        )
        assert phi.same_poly(expected.extend(phi.varlist).truncate(3))

    def test_v2_minus_flips_quadratic(self):
        phi = phi_of("Pi_v2-", trunc_deg=2)
        assert phi.coefficient({"x": 2}) == -6

    def test_flat_umbilic_rejected(self):
        with pytest.raises(NotAnIDEError):
            to_ide(asymptotic_bde(parse_poly("x*y^2 + x^4 + y^4")))

    def test_parameter_blocked_unit_rejected(self):
        with pytest.raises(NotAnIDEError):
            to_ide(BDE(parse_poly("t + x"), parse_poly("x*y"), parse_poly("y")))


class TestVersality:
    def test_v2_determinant(self):
        res = versality_check("Pi_v2+", phi_of("Pi_v2+", 5))
        assert res.determinant == -1
        assert res.versal

    def test_v3_determinant(self):
        res = versality_check("Pi_v3", phi_of("Pi_v3", 5))
        assert res.determinant == -6

    def test_c3_determinant(self):
        res = versality_check("Pi_c3+", phi_of("Pi_c3+", 6))
        assert res.determinant == -36

    def test_f1_jacobian(self):
        fam = family_library("Pi_f1+")
        res = versality_check("Pi_f1+", asymptotic_bde(fam.f))
        assert res.matrix == (
            (Fraction(2), Fraction(0), Fraction(0)),
            (Fraction(0), Fraction(2), Fraction(0)),
            (Fraction(6), Fraction(0), Fraction(2)),
        )
        assert res.determinant == 8

    def test_codim1_rows(self):
        assert versality_check("Pi_v1++", phi_of("Pi_v1++", 4)).versal
        assert versality_check("Pi_c2", phi_of("Pi_c2", 5)).versal

    def test_bde_accepted_directly(self):
        fam = family_library("Pi_v2+")
        res = versality_check("Pi_v2+", asymptotic_bde(fam.f))
        assert res.determinant == -1

    def test_unknown_label(self):
        with pytest.raises(UsageError):
            versality_check("Pi_f2+", phi_of("Pi_v2+", 4))
