import itertools

import numpy as np
import pytest

from gradalib.algebra import (
    AlgebraError,
    CapExceededError,
    InhomogeneousRelationError,
    QuiverPresentation,
    UnknownSymbolError,
    build,
)
from gradalib.exactla import GF, QQ

GF2 = GF(2)
GF3 = GF(3)


def kx_presentation(n):
    """k[x]/(x^n) with deg x = 1."""
    return QuiverPresentation.make(
        ["v"], [("x", "v", "v", 1)], [[(1, ["x"] * n)]]
    )


def kronecker_presentation():
    return QuiverPresentation.make(
        ["1", "2"], [("a", "1", "2", 0), ("b", "1", "2", 1)]
    )


def a3_presentation():
    return QuiverPresentation.make(
        ["1", "2", "3"], [("al", "1", "2", 1), ("be", "2", "3", 1)]
    )


def test_kx3_basis():
    A = build(kx_presentation(3), GF3)
    assert A.dim == 3
    assert sorted(A.path_length(i) for i in range(3)) == [0, 1, 2]
    assert A.d == 2
    assert A.is_positively_graded
    assert A.radical_nilpotency_index() == 3


def test_kronecker_basis():
    A = build(kronecker_presentation(), GF2)
    assert A.dim == 4
    assert A.d == 1
    assert sorted(A.degrees) == [0, 0, 0, 1]
    assert A.radical_nilpotency_index() == 2


def test_homogeneous_components():
    A = build(kx_presentation(3), GF3)
    assert len(A.homogeneous_component(2)) == 1
    assert A.homogeneous_component(3) == []
    K = build(kronecker_presentation(), GF2)
    assert len(K.homogeneous_component(0)) == 3  # e1, e2, a
    assert len(K.homogeneous_component(1)) == 1  # b


def test_commutation_relation_accepted():
    # two loops with deg a = 0, deg b = 1; a*b - b*a is degree homogeneous
    pres = QuiverPresentation.make(
        ["v"],
        [("a", "v", "v", 0), ("b", "v", "v", 1)],
        [
            [(1, ["a", "b"]), (-1, ["b", "a"])],
            [(1, ["a", "a"])],
            [(1, ["b", "b"])],
        ],
    )
    A = build(pres, GF3)
    assert A.dim == 4  # e, a, b, ab


def test_inhomogeneous_relation_rejected():
    pres = QuiverPresentation.make(
        ["v"],
        [("a", "v", "v", 0), ("b", "v", "v", 1)],
        [[(1, ["a", "a"]), (-1, ["b", "b"])]],
    )
    with pytest.raises(InhomogeneousRelationError):
        build(pres, GF3)


def test_length_one_relation_rejected_after_homogeneity():
    pres = QuiverPresentation.make(
        ["v"],
        [("a", "v", "v", 0), ("b", "v", "v", 1)],
        [[(1, ["a"]), (-1, ["b"])]],
    )
    with pytest.raises(InhomogeneousRelationError):
        build(pres, GF3)


def test_unknown_symbols():
    with pytest.raises(UnknownSymbolError):
        QuiverPresentation.make(["v"], [("a", "v", "w", 0)])
    with pytest.raises(UnknownSymbolError):
        QuiverPresentation.make(["v"], [("a", "v", "v", 0)], [[(1, ["zz"])]])


def test_infinite_dimensional_cap():
    pres = QuiverPresentation.make(["v"], [("x", "v", "v", 1)])
    with pytest.raises(CapExceededError):
        build(pres, GF3, cap=10)


def test_associativity_exhaustive():
    for pres, field in [
        (kx_presentation(3), GF3),
        (kronecker_presentation(), GF2),
        (a3_presentation(), GF2),
    ]:
        A = build(pres, field)
        basis_elems = []
        for i in range(A.dim):
            x = A.zero_element()
            x[i] = field.one
            basis_elems.append(x)
        for u, v, w in itertools.product(basis_elems, repeat=3):
            left = A.multiply(A.multiply(u, v), w)
            right = A.multiply(u, A.multiply(v, w))
            assert np.all(left == right)


def test_unit_and_idempotents():
    A = build(kronecker_presentation(), GF2)
    one = A.unit()
    for i in range(A.dim):
        x = A.zero_element()
        x[i] = GF2.one
        assert np.all(A.multiply(one, x) == x)
        assert np.all(A.multiply(x, one) == x)
    e1 = A.vertex_idempotent(0)
    assert np.all(A.multiply(e1, e1) == e1)


def test_product_degree_homogeneity():
    A = build(kx_presentation(3), GF3)
    for i in range(A.dim):
        for j in range(A.dim):
            prod = A.multiply_basis(i, j)
            for k, c in prod:
                assert A.degrees[k] == A.degrees[i] + A.degrees[j]


def test_dim_is_sum_of_components():
    for pres, field in [(kx_presentation(3), GF3), (kronecker_presentation(), GF2)]:
        A = build(pres, field)
        total = sum(
            len(A.homogeneous_component(n)) for n in range(-A.d, A.d + 1)
        )
        assert total == A.dim
        assert A.homogeneous_component(A.d + 1) == []
        assert A.homogeneous_component(-A.d - 1) == []


def test_opposite_kronecker():
    A = build(kronecker_presentation(), GF2)
    B = A.opposite()
    assert B.arrows[0].source == 1 and B.arrows[0].target == 0
    assert B.arrows[0].degree == 0 and B.arrows[1].degree == 1
    assert B.opposite().presentation == A.presentation


def test_opposite_relation_reversal():
    pres = QuiverPresentation.make(
        ["v"],
        [("a", "v", "v", 0), ("b", "v", "v", 0)],
        [[(1, ["a", "b"])], [(1, ["a", "a"])], [(1, ["b", "b"])], [(1, ["b", "a", "b"])]],
    )
    A = build(pres, GF3)
    op = A.opposite()
    rel_words = {tuple(w for _, w in rel) for rel in op.presentation.relations}
    assert ((1, 0),) in rel_words  # a*b reversed to b*a (by index)


def test_opposite_commutative_is_same_shape():
    A = build(kx_presentation(3), GF3)
    op = A.opposite()
    assert op.dim == 3
    assert op.d == 2
    # x^op * x^op = (x*x)^op
    x = A._arrow_element(0)
    sq = A.multiply(x, x)
    assert np.all(A.op_element(sq) == op.multiply(op._arrow_element(0), op._arrow_element(0)))


def test_op_element_antihomomorphism():
    pres = QuiverPresentation.make(
        ["1", "2"], [("a", "1", "2", 0), ("b", "2", "1", 1)], [[(1, ["a", "b", "a"])], [(1, ["b", "a", "b"])]]
    )
    A = build(pres, GF3)
    op = A.opposite()
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = A.zero_element()
        y = A.zero_element()
        for i in range(A.dim):
            x[i] = int(rng.integers(0, 3))
            y[i] = int(rng.integers(0, 3))
        lhs = A.op_element(A.multiply(x, y))
        rhs = op.multiply(A.op_element(y), A.op_element(x))
        assert np.all(lhs == rhs)


def test_element_from_word_reduces():
    A = build(kx_presentation(2), GF3)
    xx = A.element_from_word(0, (0, 0))
    assert not np.any(xx != 0)
