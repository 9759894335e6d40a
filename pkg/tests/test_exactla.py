import itertools
import random
from fractions import Fraction

import pytest

from gradalib.exactla import (
    GF,
    QQ,
    Mat,
    UnsupportedFieldError,
    factor_gfp,
    hstack,
    integer_diagonalizable,
    inverse,
    minimal_polynomial,
    null_space_cols,
    poly_deg,
    poly_divmod,
    poly_eval_mat,
    poly_mul,
    rank,
    rational_roots,
    row_basis,
    rows_contained,
    solve,
    squarefree_decomposition,
    vstack,
)

GF2 = GF(2)
GF3 = GF(3)


def random_mat(field, rows, cols, rng):
    if field.is_rationals:
        return Mat.from_rows(
            field,
            [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(cols)] for _ in range(rows)],
        ) if rows and cols else Mat.zeros(field, rows, cols)
    return Mat.from_rows(
        field, [[rng.randrange(field.p) for _ in range(cols)] for _ in range(rows)]
    ) if rows and cols else Mat.zeros(field, rows, cols)


def test_canonical_entries():
    m = Mat.from_rows(GF3, [[4, -1], [9, 5]])
    assert m.entries == (1, 2, 0, 2)
    q = Mat.from_rows(QQ, [[Fraction(2, 4), Fraction(-3, -6)]])
    assert q.entries == (Fraction(1, 2), Fraction(1, 2))


def test_solve_identity_case():
    eye = Mat.identity(GF3, 2)
    part, ker = solve(eye, eye)
    assert part == eye
    assert ker.cols == 0


def test_solve_gf2_underdetermined():
    # A = [[1,1]], B = [[0]] over GF(2): oracle by enumerating all 4 vectors.
    A = Mat.from_rows(GF2, [[1, 1]])
    B = Mat.from_rows(GF2, [[0]])
    sols = [
        v
        for v in itertools.product(range(2), repeat=2)
        if (v[0] + v[1]) % 2 == 0
    ]
    assert sols == [(0, 0), (1, 1)]
    part, ker = solve(A, B)
    assert (A @ part) == B
    assert ker.cols == 1
    assert tuple(ker.a[:, 0]) == (1, 1)


def test_solve_inconsistent():
    A = Mat.from_rows(QQ, [[0]])
    B = Mat.from_rows(QQ, [[1]])
    assert solve(A, B) is None


def test_solve_shape_mismatch():
    with pytest.raises(ValueError):
        solve(Mat.identity(GF2, 2), Mat.identity(GF2, 3))


def test_rank_examples():
    assert rank(Mat.identity(QQ, 3)) == 3
    assert rank(Mat.zeros(GF2, 2, 2)) == 0
    assert rank(Mat.from_rows(QQ, [[1, 2], [2, 4]])) == 1


def test_rank_nullity_random():
    rng = random.Random(7)
    for field in (GF2, GF3, QQ):
        for _ in range(200):
            r = rng.randint(0, 5)
            c = rng.randint(0, 5)
            a = random_mat(field, r, c, rng)
            ker = null_space_cols(a)
            assert rank(a) + ker.cols == c
            if ker.cols and r:
                assert (a @ ker).is_zero()


def test_solve_postconditions_random():
    rng = random.Random(11)
    for field in (GF3, QQ):
        for _ in range(60):
            r = rng.randint(1, 4)
            c = rng.randint(1, 4)
            a = random_mat(field, r, c, rng)
            x = random_mat(field, c, 2, rng)
            b = a @ x
            res = solve(a, b)
            assert res is not None
            part, ker = res
            assert a @ part == b
            if ker.cols:
                assert (a @ ker).is_zero()


def test_inverse():
    a = Mat.from_rows(GF3, [[1, 1], [0, 1]])
    ainv = inverse(a)
    assert a @ ainv == Mat.identity(GF3, 2)
    assert inverse(Mat.from_rows(QQ, [[1, 2], [2, 4]])) is None


def test_row_basis_canonical():
    a = Mat.from_rows(QQ, [[1, 2], [3, 6]])
    b = Mat.from_rows(QQ, [[2, 4]])
    assert row_basis(a) == row_basis(b)
    assert rows_contained(b, a)
    assert not rows_contained(Mat.from_rows(QQ, [[1, 0]]), a)


def test_minimal_polynomial_examples():
    assert minimal_polynomial(Mat.identity(GF3, 2)) == [2, 1]  # t - 1
    nil = Mat.from_rows(QQ, [[0, 1], [0, 0]])
    assert (nil @ nil).is_zero()  # oracle: squaring the matrix
    assert minimal_polynomial(nil) == [Fraction(0), Fraction(0), Fraction(1)]  # t^2
    d = Mat.from_rows(QQ, [[0, 0], [0, 1]])
    # oracle: evaluate t^2 - t at d
    assert poly_eval_mat([Fraction(0), Fraction(-1), Fraction(1)], d).is_zero()
    assert minimal_polynomial(d) == [Fraction(0), Fraction(-1), Fraction(1)]


def test_minimal_polynomial_annihilates_random():
    rng = random.Random(3)
    for field in (GF2, GF3, QQ):
        for _ in range(40):
            n = rng.randint(1, 4)
            a = random_mat(field, n, n, rng)
            mu = minimal_polynomial(a)
            assert poly_eval_mat(mu, a).is_zero()
            assert mu[-1] == field.one
            # no proper monic divisor of smaller degree annihilates
            assert poly_deg(mu) <= n


def test_integer_diagonalizable():
    d = Mat.from_rows(QQ, [[0, 0, 0], [0, 1, 0], [0, 0, 1]])
    res = integer_diagonalizable(d)
    assert res is not None
    vals, basis = res
    assert vals == [0, 1, 1]
    for j, lam in enumerate(vals):
        col = basis.take_cols([j])
        assert d @ col == col.scale(lam)
    jordan = Mat.from_rows(QQ, [[0, 1], [0, 0]])
    assert integer_diagonalizable(jordan) is None
    assert integer_diagonalizable(Mat.from_rows(QQ, [[Fraction(1, 2)]])) is None
    with pytest.raises(UnsupportedFieldError):
        integer_diagonalizable(Mat.identity(GF2, 1))


def test_squarefree_decomposition_char_p():
    # (x+1)^2 * x^3 over GF(3)
    f = poly_mul(GF3, poly_mul(GF3, [1, 2, 1], [0, 0, 0, 1]), [1])
    parts = squarefree_decomposition(GF3, f)
    rebuilt = [1]
    for g, m in parts:
        for _ in range(m):
            rebuilt = poly_mul(GF3, rebuilt, g)
    assert rebuilt == f
    mults = sorted(m for _, m in parts)
    assert mults == [2, 3]
    # x^3 over GF(3): derivative vanishes
    parts = squarefree_decomposition(GF3, [0, 0, 0, 1])
    assert parts == [([0, 1], 3)]


def test_squarefree_decomposition_q():
    # (x^2+1)^2 (x-1) over Q
    f = poly_mul(QQ, poly_mul(QQ, [1, 0, 1], [1, 0, 1]), [-1, 1])
    parts = squarefree_decomposition(QQ, f)
    by_mult = {m: g for g, m in parts}
    assert poly_deg(by_mult[1]) == 1
    assert poly_deg(by_mult[2]) == 2


def test_factor_gfp():
    # x^2 + 1 over GF(2) = (x+1)^2
    assert factor_gfp(GF2, [1, 0, 1]) == [([1, 1], 2)]
    # x^2 + x + 1 irreducible over GF(2)
    assert factor_gfp(GF2, [1, 1, 1]) == [([1, 1, 1], 1)]
    # x^2 + 1 over GF(3): roots?  x=0:1, 1:2, 2:2 -> irreducible
    assert factor_gfp(GF3, [1, 0, 1]) == [([1, 0, 1], 1)]
    # brute check: random products factor back correctly over GF(2) and GF(3)
    rng = random.Random(5)
    for field in (GF2, GF3):
        for _ in range(25):
            f = [field.one]
            for _ in range(rng.randint(1, 3)):
                d = rng.randint(1, 3)
                g = [rng.randrange(field.p) for _ in range(d)] + [1]
                f = poly_mul(field, f, g)
            rebuilt = [field.one]
            for g, m in factor_gfp(field, f):
                assert poly_deg(g) >= 1
                for _ in range(m):
                    rebuilt = poly_mul(field, rebuilt, g)
            assert rebuilt == f


def test_rational_roots():
    # (x - 2)(x + 1/3)^2, cleared or not
    f = poly_mul(QQ, [-2, 1], poly_mul(QQ, [Fraction(1, 3), 1], [Fraction(1, 3), 1]))
    roots = rational_roots(f)
    assert (Fraction(2), 1) in roots
    assert (Fraction(-1, 3), 2) in roots
    assert rational_roots([1, 0, 1]) == []


def test_stack_and_kron_shapes():
    a = Mat.identity(GF2, 2)
    b = Mat.zeros(GF2, 2, 3)
    assert hstack([a, b]).shape == (2, 5)
    assert vstack([a, Mat.zeros(GF2, 1, 2)]).shape == (3, 2)
