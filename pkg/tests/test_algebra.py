from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import coker_oracle, normalized_coeffs, to_sympy
from twistalex.algebra import (
    GF,
    QQ,
    ContractError,
    LaurentPoly,
    PolyMatrix,
    coker_invariants,
    coker_order,
    determinant,
    int_smith,
    lp_degree,
    lp_normalize,
    rank_and_minor,
    smith_divisors,
    smith_normal_form,
    torsion_order,
)

PRIMES = (2, 3, 5, 13)
CONWAY_D1 = "1 + 6*t + 9*t^2 + 12*t^3 + t^5 + 3*t^6 + t^7 + 3*t^8 + t^9 + 12*t^11 + 9*t^12 + 6*t^13 + t^14"


def lp(field, text):
    return LaurentPoly.from_string(field, text)


@st.composite
def laurent(draw, field, max_len=4, nonzero=False):
    p = field.characteristic
    coeffs = draw(st.lists(st.integers(0, p - 1), min_size=1 if nonzero else 0, max_size=max_len))
    if nonzero:
        coeffs[-1] = coeffs[-1] or 1
    shift = draw(st.integers(-3, 3))
    return LaurentPoly.from_int_coeffs(field, coeffs, shift) if coeffs else LaurentPoly.zero(field)


@st.composite
def poly_matrix(draw, max_dim=4, max_len=3, primes=PRIMES):
    field = GF(draw(st.sampled_from(primes)))
    rows = draw(st.integers(1, max_dim))
    cols = draw(st.integers(1, max_dim))
    entries = [[draw(laurent(field, max_len)) for _ in range(cols)] for _ in range(rows)]
    return PolyMatrix(field, rows, cols, entries)


def is_unit_det(M):
    d = determinant(M)
    return bool(d) and d.is_unit()


# --- Laurent polynomials --------------------------------------------------


class TestLaurent:
    def test_normalize_zero(self):
        z = LaurentPoly.zero(GF(13))
        assert lp_normalize(z) == z
        assert lp_degree(z) is None

    def test_normalize_hand_example(self):
        F = GF(13)
        f = lp(F, "3*t^-2 + 3*t")
        assert lp_normalize(f) == lp(F, "1 + t^3")

    def test_conway_polynomial_already_canonical(self):
        f = lp(GF(13), CONWAY_D1)
        assert lp_normalize(f) == f
        assert lp_degree(f) == 14

    def test_span_degree(self):
        assert lp_degree(lp(GF(5), "t^-2 + t^3")) == 5
        assert lp_degree(LaurentPoly.one(GF(5))) == 0

    def test_from_string_constant_terms(self):
        F = GF(7)
        assert lp(F, "3") == LaurentPoly.monomial(F, 3)
        assert lp(F, "2 - t") == LaurentPoly.from_int_coeffs(F, [2, -1])

    def test_rational_coefficients(self):
        f = LaurentPoly.from_int_coeffs(QQ, [Fraction(1, 2), 0, 3])
        assert lp_normalize(f).coeffs == (Fraction(1, 6), 0, 1)
        assert f.primitive_integer().coeffs == (1, 0, 6)

    @given(st.data())
    def test_degree_multiplicative(self, data):
        F = GF(data.draw(st.sampled_from(PRIMES)))
        f = data.draw(laurent(F, nonzero=True))
        g = data.draw(laurent(F, nonzero=True))
        assert lp_degree(f * g) == lp_degree(f) + lp_degree(g)

    @given(st.data())
    def test_normalize_idempotent_and_unit_invariant(self, data):
        F = GF(data.draw(st.sampled_from(PRIMES)))
        f = data.draw(laurent(F))
        c = data.draw(st.integers(1, F.characteristic - 1))
        j = data.draw(st.integers(-5, 5))
        n = lp_normalize(f)
        assert lp_normalize(n) == n
        assert lp_normalize(f.shifted(j) * c) == n
        if f:
            assert n.min_exp == 0 and n.leading_coefficient() == 1

    @given(st.data())
    def test_divmod_against_sympy(self, data):
        p = data.draw(st.sampled_from(PRIMES))
        F = GF(p)
        f = LaurentPoly.from_int_coeffs(F, data.draw(st.lists(st.integers(0, p - 1), max_size=6)))
        g = LaurentPoly.from_int_coeffs(F, data.draw(st.lists(st.integers(0, p - 1), max_size=3)) + [1])
        q, r = f.divmod(g)
        assert q * g + r == f
        sq, sr = divmod(to_sympy(f, p), to_sympy(g, p))
        assert normalized_coeffs(to_sympy(r, p)) == normalized_coeffs(sr) or (not r and sr.is_zero)

    @given(st.data())
    def test_gcd_against_sympy(self, data):
        p = data.draw(st.sampled_from(PRIMES))
        F = GF(p)
        f = data.draw(laurent(F, max_len=5, nonzero=True))
        g = data.draw(laurent(F, max_len=5, nonzero=True))
        ours = f.gcd(g)
        theirs = to_sympy(f, p).gcd(to_sympy(g, p))
        assert normalized_coeffs(to_sympy(ours, p)) == normalized_coeffs(theirs)


# --- Smith normal form ----------------------------------------------------


class TestSmith:
    def test_identity(self):
        F = GF(5)
        res = smith_normal_form(PolyMatrix.identity(F, 3))
        assert res.divisors == (LaurentPoly.one(F),) * 3

    def test_single_entry(self):
        F = GF(3)
        res = smith_normal_form(PolyMatrix.from_rows(F, [["t - 1"]]))
        assert res.divisors == (lp(F, "t - 1").normalize(),)

    def test_jordan_block(self):
        F = GF(7)
        A = PolyMatrix.from_rows(F, [["t - 1", 0], [1, "t - 1"]])
        res = smith_normal_form(A)
        assert res.divisors == (LaurentPoly.one(F), (lp(F, "t - 1") ** 2).normalize())
        assert determinant(A).equal_up_to_unit(res.divisors[0] * res.divisors[1])

    @settings(max_examples=150)
    @given(poly_matrix(max_dim=8, max_len=2))
    def test_reconstruction(self, A):
        res = smith_normal_form(A)
        assert res.U @ A @ res.V == res.D
        assert res.D.is_diagonal()
        assert is_unit_det(res.U) and is_unit_det(res.V)
        nonzero = [d for d in res.divisors if d]
        assert all(d == d.normalize() for d in nonzero)
        assert all(a.divides(b) for a, b in zip(nonzero, nonzero[1:]))
        assert nonzero == [d for d in res.divisors[: len(nonzero)]]

    @settings(max_examples=150)
    @given(poly_matrix(max_dim=6, max_len=3))
    def test_modular_divisors_match_euclidean(self, A):
        ref = [d for d in smith_normal_form(A).divisors if d]
        assert smith_divisors(A) == ref

    @given(poly_matrix(max_dim=5, max_len=3))
    def test_rank_and_minor(self, A):
        r, minor = rank_and_minor(A)
        assert r == smith_normal_form(A).rank
        assert (r == 0) or bool(minor)

    @settings(max_examples=60)
    @given(poly_matrix(max_dim=4, max_len=3, primes=(2, 3, 13)))
    def test_cokernel_matches_determinantal_oracle(self, A):
        p = A.field.characteristic
        inv = coker_invariants(A, A.rows)
        free, tors = coker_oracle(A, p)
        assert inv.free_rank == free
        assert normalized_coeffs(to_sympy(inv.torsion, p)) == normalized_coeffs(tors)
        if free:
            assert not inv.order
        else:
            assert inv.order == inv.torsion

    def test_determinant_against_sympy(self):
        F = GF(13)
        A = PolyMatrix.from_rows(F, [["t", "1 + t", 2], ["t^2", 0, "t - 3"], [1, "t^-1", 5]])
        import sympy

        t = sympy.Symbol("t")
        M = sympy.Matrix([[t, 1 + t, 2], [t**2, 0, t - 3], [1, 1 / t, 5]])
        ref = sympy.Poly(sympy.expand(M.det() * t), t, modulus=13)
        assert normalized_coeffs(to_sympy(determinant(A).normalize(), 13)) == normalized_coeffs(ref)


class TestCokernel:
    def test_empty_matrix_has_free_rank(self):
        F = GF(5)
        A = PolyMatrix(F, 1, 0)
        assert not coker_order(A, 1)

    def test_cyclic(self):
        F = GF(5)
        A = PolyMatrix.from_rows(F, [["t - 1"]])
        assert coker_order(A, 1) == lp(F, "t - 1").normalize()

    def test_torsion_part_with_free_rank(self):
        F = GF(5)
        A = PolyMatrix.from_rows(F, [["t - 1"], [0]])
        assert not coker_order(A, 2)
        assert torsion_order(A, 2) == lp(F, "t - 1").normalize()

    def test_rank_mismatch(self):
        with pytest.raises(ContractError):
            coker_order(PolyMatrix.identity(GF(5), 2), 3)


class TestIntSmith:
    def test_zero(self):
        assert int_smith([[0]]).divisors == [0]

    def test_hand_example(self):
        assert int_smith([[2, 0], [0, 3]]).divisors == [1, 6]

    @given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=4))
    def test_reconstruction(self, A):
        res = int_smith(A)

        def mul(a, b):
            return [[sum(x * y for x, y in zip(r, c)) for c in zip(*b)] for r in a]

        assert mul(mul(res.U, A), res.V) == res.D
        nz = [d for d in res.divisors if d]
        assert all(d > 0 for d in nz)
        assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
