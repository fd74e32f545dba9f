"""Exact arithmetic kernel: scalars, polynomials, rational functions, matrices."""

import random
from fractions import Fraction as F

import pytest

from isrlift.errors import DimensionMismatch, SingularMatrix
from isrlift.exact import (
    LAMBDA,
    GaussianRational as G,
    Matrix,
    Poly,
    RatFun,
    char_poly,
    char_poly_via_det,
    exact_det,
    exact_inverse,
    nullspace,
    poly_exact_div,
    poly_gcd,
    rational_roots,
    solve,
)

L = LAMBDA


class TestGaussianRational:
    def test_arithmetic(self):
        i = G(0, 1)
        assert i * i == -1
        assert (G(1, 2) + G(3, -1)) == G(4, 1)
        assert G(1, 1) * G(1, -1) == 2
        assert (G(1, 1) / G(0, 1)) == G(1, -1)
        assert G(F(1, 2), F(3, 4)).conjugate() == G(F(1, 2), F(-3, 4))

    def test_real_interop(self):
        assert G(3, 0) == 3
        assert G(3, 0) == F(3)
        assert hash(G(F(1, 2), 0)) == hash(F(1, 2))
        assert G(1, 0) + F(1, 2) == G(F(3, 2), 0)

    def test_float_rejected(self):
        with pytest.raises(TypeError):
            G(0.5, 0)


class TestPolyGcd:
    def test_difference_of_squares(self):
        assert poly_gcd(L * L - 1, L - 1) == (L - 1)

    def test_zero_operand_gives_monic(self):
        p = 2 * (L * L - 1)
        assert poly_gcd(p, Poly()) == (L * L - 1)
        assert poly_gcd(Poly(), Poly()) == Poly()

    def test_coprime(self):
        assert poly_gcd(L, L + 1) == Poly((1,))

    def test_gaussian_coefficients(self):
        i = G(0, 1)
        p = (L - Poly((i,))) * (L + 1)
        q = (L - Poly((i,))) * (L - 2)
        assert poly_gcd(p, q) == (L - Poly((i,)))

    def test_random_products_share_factor(self):
        rng = random.Random(7)
        for _ in range(25):
            g = Poly([F(rng.randint(-3, 3)) for _ in range(rng.randint(1, 3))] + [F(1)])
            a = g * Poly([F(rng.randint(-3, 3)), F(1)])
            b = g * Poly([F(rng.randint(-3, 3)), F(rng.randint(1, 2))])
            d = poly_gcd(a, b)
            assert (a % d).is_zero and (b % d).is_zero
            assert (d % g).is_zero  # contains the planted factor


class TestPolyBasics:
    def test_divmod_roundtrip(self):
        a = L ** 3 - 2 * L + 5
        b = L * L + 1
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.degree < b.degree

    def test_exact_div_raises_on_remainder(self):
        with pytest.raises(ArithmeticError):
            poly_exact_div(L * L + 1, L - 1)

    def test_evaluation_types(self):
        p = L * L - 1
        assert p(F(3)) == 8
        assert p(2.0) == 3.0
        assert p(G(0, 1)) == -2

    def test_zero_degree_convention(self):
        assert Poly().degree == -1
        assert Poly().is_zero
        assert Poly((0, 0)).is_zero

    def test_rational_roots(self):
        roots, rem = rational_roots((L - 1) * (L + 1) * (2 * L - 3))
        assert roots == [F(-1), F(1), F(3, 2)]
        assert rem.degree == 0
        roots, rem = rational_roots(L * L - 2)
        assert roots == []
        assert rem == L * L - 2
        roots, rem = rational_roots(L * L * (L - 5))
        assert roots == [F(0), F(0), F(5)]


class TestRatFun:
    def test_canonical_normalization(self):
        a = RatFun(L * L - 1, L - 1)
        assert a == RatFun(L + 1)
        b = RatFun(1, 2 * L)  # denominator kept monic
        assert b.den == L
        assert b.num == Poly((F(1, 2),))

    def test_two_routes_compare_equal(self):
        x = RatFun(1, L) + RatFun(1, L + 1)
        y = RatFun(2 * L + 1, L * (L + 1))
        assert x == y

    def test_normalization_idempotent(self):
        a = RatFun(L * L - 1, L - 1)
        assert RatFun(a.num, a.den) == a

    def test_arithmetic(self):
        f = RatFun(1, L)
        assert f * L == RatFun(1)
        assert (f + f) == RatFun(2, L)
        assert f - f == RatFun(0)
        assert (1 / f) == RatFun(L)

    def test_pole_evaluation_raises(self):
        with pytest.raises(ZeroDivisionError):
            RatFun(1, L)(0.0)


def _rand_fraction_matrix(rng, n, symmetric=False):
    data = [[F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
    if symmetric:
        for i in range(n):
            for j in range(i):
                data[i][j] = data[j][i]
    return Matrix(data)


class TestDeterminant:
    def test_exchange(self):
        assert exact_det(Matrix([[0, 1], [1, 0]])) == -1

    def test_identity(self):
        for n in (1, 2, 5):
            assert exact_det(Matrix.identity(n)) == 1

    def test_poly_entries(self):
        m = Matrix([[L, Poly((1,))], [Poly((1,)), L]])
        assert exact_det(m) == L * L - 1

    def test_ratfun_entries(self):
        m = Matrix([[RatFun(1, L), RatFun(1)], [RatFun(1), RatFun(L)]])
        # (1/x) * x - 1 = 0
        assert exact_det(m) == RatFun(0)
        m2 = Matrix([[RatFun(1, L), RatFun(1)], [RatFun(1), RatFun(L, L - 1)]])
        assert exact_det(m2) == RatFun(1, L - 1) - 1

    def test_non_square_rejected(self):
        with pytest.raises(DimensionMismatch):
            exact_det(Matrix([[1, 2]]))

    def test_zero_pivot_row_search(self):
        m = Matrix([[0, 1, 2], [1, 0, 3], [2, 3, 0]])
        # cofactor expansion by hand: -1*(0-6) + 2*(3-0) = 12
        assert exact_det(m) == 12

    def test_empty_matrix(self):
        assert exact_det(Matrix.zeros(0, 0)) == 1


class TestCharPoly:
    def test_exchange(self):
        assert char_poly(Matrix([[0, 1], [1, 0]])) == L * L - 1

    def test_identity_powers(self):
        for n in (1, 2, 4):
            assert char_poly(Matrix.identity(n)) == (L - 1) ** n

    def test_single_zero(self):
        assert char_poly(Matrix([[0]])) == L

    def test_two_routes_agree(self):
        rng = random.Random(11)
        for _ in range(15):
            n = rng.randint(1, 5)
            m = _rand_fraction_matrix(rng, n)
            assert char_poly(m) == char_poly_via_det(m)

    def test_gaussian_hermitian(self):
        m = Matrix([[G(0, 0), G(0, 1)], [G(0, -1), G(0, 0)]])
        assert char_poly(m) == L * L - 1
        assert char_poly(m) == char_poly_via_det(m)

    def test_empty(self):
        assert char_poly(Matrix.zeros(0, 0)) == Poly((1,))


class TestInverse:
    def test_single_variable(self):
        inv = exact_inverse(Matrix([[RatFun(L)]]))
        assert inv[0, 0] == RatFun(1, L)

    def test_identity(self):
        assert exact_inverse(Matrix.identity(3)) == Matrix.identity(3)

    def test_two_by_two_adjugate(self):
        m = Matrix([[L, Poly((1,))], [Poly((1,)), L]])
        inv = exact_inverse(m)
        d = L * L - 1
        assert inv[0, 0] == RatFun(L, d)
        assert inv[0, 1] == RatFun(-1, d)
        assert inv[1, 0] == RatFun(-1, d)
        assert inv[1, 1] == RatFun(L, d)

    def test_singular_rejected(self):
        with pytest.raises(SingularMatrix):
            exact_inverse(Matrix([[1, 1], [1, 1]]))
        with pytest.raises(SingularMatrix):
            # singular as a rational function although pointwise invertible a.e.
            m = Matrix([[L, L], [L, L]])
            exact_inverse(m)

    def test_random_inverse_property(self):
        rng = random.Random(23)
        done = 0
        while done < 12:
            n = rng.randint(1, 5)
            base = _rand_fraction_matrix(rng, n)
            m = Matrix(
                [
                    [
                        Poly((base[i, j], F(1))) if i == j else Poly((base[i, j],))
                        for j in range(n)
                    ]
                    for i in range(n)
                ]
            )
            if not exact_det(m):
                continue
            inv = exact_inverse(m)
            prod = m @ inv
            ident = Matrix(
                [[RatFun(1) if i == j else RatFun(0) for j in range(n)] for i in range(n)]
            )
            assert prod == ident
            done += 1


class TestLinearAlgebra:
    def test_nullspace(self):
        ns = nullspace(Matrix([[1, 1, 0], [0, 0, 1]]))
        assert len(ns) == 1
        assert ns[0] == (F(-1), F(1), F(0))

    def test_solve(self):
        x = solve(Matrix([[2, 0], [1, 1]]), [F(3), F(4)])
        assert x == [F(3, 2), F(5, 2)]
        with pytest.raises(SingularMatrix):
            solve(Matrix([[1, 1], [1, 1]]), [F(0), F(1)])

    def test_matrix_immutability_and_hermitian(self):
        m = Matrix([[1, G(0, 1)], [G(0, -1), 2]])
        assert m.is_hermitian()
        assert not Matrix([[1, G(0, 1)], [G(0, 1), 2]]).is_hermitian()

    def test_to_numpy(self):
        import numpy as np

        m = Matrix([[F(1, 2), 0], [0, 1]])
        arr = m.to_numpy()
        assert arr.dtype == np.float64 and arr[0, 0] == 0.5
        g = Matrix([[G(0, 1)]])
        assert g.to_numpy().dtype == np.complex128
