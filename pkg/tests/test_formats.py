"""File formats, value grammar, and rendering."""

from fractions import Fraction as F

import numpy as np
import pytest

from isrlift.errors import ParseError
from isrlift.exact import LAMBDA, GaussianRational as G, Matrix, Poly, RatFun
from isrlift.formats import (
    format_float_value,
    format_gaussian,
    format_rational,
    parse_float_value,
    parse_gaussian,
    parse_index_spec,
    parse_rational,
    poly_str,
    ratfun_str,
    read_graph_text,
    read_matrix_text,
    write_matrix_text,
)

L = LAMBDA


class TestValueGrammar:
    def test_rational(self):
        assert parse_rational("3") == F(3)
        assert parse_rational("-5/2") == F(-5, 2)
        assert format_rational(F(7, 3)) == "7/3"
        assert format_rational(F(4)) == "4"
        with pytest.raises(ValueError):
            parse_rational("1.5")

    def test_gaussian(self):
        assert parse_gaussian("1/2+3/4i") == G(F(1, 2), F(3, 4))
        assert parse_gaussian("1/2-3/4i") == G(F(1, 2), F(-3, 4))
        assert parse_gaussian("-1+2i") == G(-1, 2)
        assert parse_gaussian("3") == G(3, 0)
        assert parse_gaussian("2i") == G(0, 2)
        assert parse_gaussian("-3/4i") == G(0, F(-3, 4))
        assert format_gaussian(G(F(1, 2), F(3, 4))) == "1/2+3/4i"
        assert format_gaussian(G(1, -1)) == "1-1i"
        assert format_gaussian(G(2, 0)) == "2+0i"

    def test_gaussian_round_trip(self):
        for g in (G(F(1, 2), F(-3, 4)), G(0, 1), G(-2, 0), G(F(-7, 5), F(11, 3))):
            assert parse_gaussian(format_gaussian(g)) == g

    def test_float_values(self):
        assert parse_float_value("1.5") == 1.5
        assert parse_float_value("-2e-3") == -2e-3
        assert parse_float_value("0.5-0.25i") == complex(0.5, -0.25)
        assert parse_float_value("1e-3i") == complex(0, 1e-3)
        x = 0.1 + 0.2  # not exactly representable in decimal
        assert parse_float_value(format_float_value(x)) == x
        z = complex(1 / 3, -2 / 7)
        assert parse_float_value(format_float_value(z)) == z


class TestMatrixFile:
    def test_round_trip_rational(self):
        m = Matrix([[F(1, 2), 0], [F(-3), F(7, 5)]])
        text = write_matrix_text(m)
        m2, field = read_matrix_text(text)
        assert field == "rational"
        assert m2 == m
        assert write_matrix_text(m2) == text

    def test_round_trip_gaussian(self):
        m = Matrix([[G(0, 1), F(1)], [G(1, -1), F(0)]])
        text = write_matrix_text(m)
        m2, field = read_matrix_text(text)
        assert field == "gaussian"
        assert m2 == m

    def test_round_trip_float_bit_identical(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((3, 4))
        a[1, 2] = 0.0  # zero entries are omitted from the file
        text = write_matrix_text(a)
        a2, field = read_matrix_text(text)
        assert field == "float"
        assert np.array_equal(a, a2)
        z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        z2, _ = read_matrix_text(write_matrix_text(z))
        assert np.array_equal(z, z2)

    def test_unlisted_entries_are_zero(self):
        m, _ = read_matrix_text("isr-matrix v1 2 2 rational\n1 1 5\n")
        assert m == Matrix([[5, 0], [0, 0]])

    def test_comments_and_blanks(self):
        text = "# header comment\n\nisr-matrix v1 1 1 rational\n# entry\n1 1 3\n"
        m, _ = read_matrix_text(text)
        assert m[0, 0] == 3

    def test_duplicate_rejected_with_line(self):
        text = "isr-matrix v1 2 2 rational\n1 1 1\n1 1 2\n"
        with pytest.raises(ParseError) as err:
            read_matrix_text(text)
        assert err.value.line == 3

    def test_out_of_range_rejected(self):
        with pytest.raises(ParseError):
            read_matrix_text("isr-matrix v1 2 2 rational\n3 1 1\n")

    def test_bad_header(self):
        with pytest.raises(ParseError):
            read_matrix_text("isr-matrix v2 2 2 rational\n")
        with pytest.raises(ParseError):
            read_matrix_text("isr-matrix v1 2 2 decimal\n")
        with pytest.raises(ParseError):
            read_matrix_text("")

    def test_bad_value_names_line(self):
        with pytest.raises(ParseError) as err:
            read_matrix_text("isr-matrix v1 1 1 rational\n1 1 0.5\n")
        assert err.value.line == 2


class TestGraphFile:
    def test_basic_graph(self):
        h = read_graph_text("isr-graph v1 3\n1 2\n2 3\n")
        assert h == Matrix([[0, 1, 0], [1, 0, 1], [0, 1, 0]])

    def test_weights_rational_and_float(self):
        h = read_graph_text("isr-graph v1 2\n1 2 3/2\n")
        assert isinstance(h, Matrix) and h[0, 1] == F(3, 2)
        hf = read_graph_text("isr-graph v1 2\n1 2 1.5\n")
        assert isinstance(hf, np.ndarray) and hf[0, 1] == 1.5

    def test_loops_flag(self):
        with pytest.raises(ParseError):
            read_graph_text("isr-graph v1 2\n1 1\n")
        h = read_graph_text("isr-graph v1 2 loops\n1 1 2\n1 2\n")
        assert h[0, 0] == 2 and h[0, 1] == 1

    def test_duplicate_edge_rejected(self):
        with pytest.raises(ParseError):
            read_graph_text("isr-graph v1 3\n1 2\n2 1\n")

    def test_vertex_range(self):
        with pytest.raises(ParseError):
            read_graph_text("isr-graph v1 2\n1 5\n")


class TestIndexSpec:
    def test_forms(self):
        assert parse_index_spec("1,3,5") == (1, 3, 5)
        assert parse_index_spec("1-4") == (1, 2, 3, 4)
        assert parse_index_spec("5,1-3") == (1, 2, 3, 5)

    def test_rejects(self):
        with pytest.raises(ValueError):
            parse_index_spec("")
        with pytest.raises(ValueError):
            parse_index_spec("3-1")
        with pytest.raises(ValueError):
            parse_index_spec("1,1")
        with pytest.raises(ValueError):
            parse_index_spec("x")


class TestRendering:
    def test_poly_str(self):
        assert poly_str(L * L - 1) == "λ^2 - 1"
        assert poly_str(Poly()) == "0"
        assert poly_str(-L) == "-λ"
        assert poly_str(2 * L ** 3 + Poly((F(1, 2),))) == "2λ^3 + 1/2"
        assert poly_str(Poly((F(-1, 2), F(3, 2)))) == "(3/2)λ - 1/2"

    def test_ratfun_str(self):
        assert ratfun_str(RatFun(1, L)) == "1 / λ"
        assert ratfun_str(RatFun(L + 1)) == "λ + 1"
        assert ratfun_str(RatFun(L * L - 1, L)) == "(λ^2 - 1) / λ"
        assert ratfun_str(RatFun(1, L * L - 1)) == "1 / (λ^2 - 1)"

    def test_gaussian_coefficients(self):
        i = G(0, 1)
        p = Poly((i,)) * L + 1  # i*λ + 1
        assert poly_str(p) == "(0+1i)λ + 1"
