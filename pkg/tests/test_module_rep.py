import itertools
import random

import pytest

from gradalib.algebra import QuiverPresentation, build
from gradalib.exactla import GF, QQ, Mat
from gradalib.module_rep import (
    BoundExceededError,
    GradedModule,
    InhomogeneousBlockError,
    Module,
    ModuleMap,
    RelationViolatedError,
    check,
    decompose,
    decompose_graded,
    direct_sum,
    end_ring,
    enumerate_graded,
    enumerate_modules,
    graded_direct_sum,
    graded_hom_degrees,
    graded_iso_shift,
    graded_right_projective,
    graded_simple,
    hom,
    hom_graded,
    is_graded_isomorphic,
    is_isomorphic,
    random_graded_module,
    random_module,
    right_projective,
    simple_module,
)

GF2 = GF(2)
GF3 = GF(3)


@pytest.fixture(scope="module")
def kx3():
    return build(QuiverPresentation.make(["v"], [("x", "v", "v", 1)], [[(1, ["x", "x", "x"])]]), GF3)


@pytest.fixture(scope="module")
def kx3_q():
    return build(QuiverPresentation.make(["v"], [("x", "v", "v", 1)], [[(1, ["x", "x", "x"])]]), QQ)


@pytest.fixture(scope="module")
def kron2():
    return build(QuiverPresentation.make(["1", "2"], [("a", "1", "2", 0), ("b", "1", "2", 1)]), GF2)


@pytest.fixture(scope="module")
def kron3():
    return build(QuiverPresentation.make(["1", "2"], [("a", "1", "2", 0), ("b", "1", "2", 1)]), GF3)


def kx_module(A, n):
    """k[x]/(x^n) as a module over k[x]/(x^3), n <= 3."""
    m = A.field.empty(n, n)
    for i in range(n - 1):
        m[i, i + 1] = A.field.one
    return Module(A, [n], {0: Mat(A.field, m, copy=False)})


def kron_module(A, a_mat, b_mat, dims):
    return Module(A, dims, {0: Mat.from_rows(A.field, a_mat) if a_mat else Mat.zeros(A.field, *_shape(dims, 0, 1)),
                            1: Mat.from_rows(A.field, b_mat) if b_mat else Mat.zeros(A.field, *_shape(dims, 0, 1))})


def _shape(dims, s, t):
    return (dims[s], dims[t])


# -- validation ---------------------------------------------------------------


def test_check_valid_kronecker(kron2):
    M = kron_module(kron2, [[1]], [[1]], (1, 1))
    assert check(M) is M


def test_check_relation_violated(kx3):
    bad = Mat.from_rows(GF3, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])  # x^3 = id != 0
    with pytest.raises(RelationViolatedError) as ei:
        check(Module(kx3, [3], {0: bad}))
    assert ei.value.relation_index == 0


def test_graded_block_must_be_homogeneous(kron2):
    cells = {(0, 0): 1, (1, 0): 1}
    # b has degree 1: a block (b, 0) must land in cell (1, 1) which is absent
    with pytest.raises(InhomogeneousBlockError):
        GradedModule(kron2, cells, {(1, 0): Mat.from_rows(GF2, [[1]])})


def test_graded_valid_and_push_down(kx3):
    # graded k[x]/(x^2) in degrees [0, 1]
    M = GradedModule(kx3, {(0, 0): 1, (0, 1): 1}, {(0, 0): Mat.from_rows(GF3, [[1]])})
    assert check(M) is M
    pd = M.push_down()
    assert pd.dims == (2,)
    assert pd.action[0] == Mat.from_rows(GF3, [[0, 1], [0, 0]])


def test_shift_preserves_graded_length(kx3):
    M = GradedModule(kx3, {(0, 0): 1, (0, 1): 1}, {(0, 0): Mat.from_rows(GF3, [[1]])})
    assert M.graded_length() == 2
    assert M.shift(7).graded_length() == 2
    assert M.shift(0).equal_structure(M)
    # push-down of a shift is the identical module (block order is unchanged)
    assert M.shift(1).push_down().equal_structure(M.push_down())


# -- hom spaces -----------------------------------------------------------------


def test_hom_examples(kx3):
    k = kx_module(kx3, 1)
    kx2 = kx_module(kx3, 2)
    kx3m = kx_module(kx3, 3)
    assert hom(k, k).dim == 1
    assert hom(kx2, kx3m).dim == 2
    ends = hom(kx2, kx2)
    assert ends.dim == 2


def test_hom_brute_force_oracle(kron2):
    # all 1- and 2-dimensional Kronecker modules over GF(2)
    mods = [
        kron_module(kron2, [[1]], [[1]], (1, 1)),
        kron_module(kron2, [[1]], [[0]], (1, 1)),
        kron_module(kron2, [[0]], [[1]], (1, 1)),
        kron_module(kron2, [[1, 0]], [[0, 1]], (1, 2)),
    ]
    for M in mods:
        for N in mods:
            count = 0
            shapes = [(M.dims[v], N.dims[v]) for v in range(2)]
            entries = sum(r * c for r, c in shapes)
            for code in itertools.product(range(2), repeat=entries):
                mats, pos = [], 0
                for r, c in shapes:
                    mats.append(Mat.from_rows(GF2, [[code[pos + i * c + j] for j in range(c)] for i in range(r)])
                                if r and c else Mat.zeros(GF2, r, c))
                    pos += r * c
                f = ModuleMap(M, N, mats)
                if f.is_intertwiner():
                    count += 1
            assert 2 ** hom(M, N).dim == count


def test_hom_base_change_invariance(kx3, kron3):
    rng = random.Random(2)
    for A in (kx3, kron3):
        for _ in range(10):
            M = random_module(A, rng, max_dim=5)
            N = random_module(A, rng, max_dim=5)
            d0 = hom(M, N).dim
            # conjugate N by a random invertible base change
            from gradalib.exactla import inverse

            mats = {}
            gs = []
            for v in range(A.num_vertices):
                while True:
                    g = Mat.from_rows(A.field, [[rng.randrange(A.field.p) for _ in range(N.dims[v])]
                                                for _ in range(N.dims[v])]) if N.dims[v] else Mat.zeros(A.field, 0, 0)
                    if N.dims[v] == 0 or inverse(g) is not None:
                        gs.append(g)
                        break
            for a_idx, arrow in enumerate(A.arrows):
                gi = inverse(gs[arrow.source]) if N.dims[arrow.source] else gs[arrow.source]
                mats[a_idx] = gi @ N.action[a_idx] @ gs[arrow.target]
            N2 = Module(A, N.dims, mats)
            assert hom(M, N2).dim == d0


def test_graded_hom_sum_identity(kx3, kron3):
    rng = random.Random(4)
    for A in (kx3, kron3):
        for _ in range(8):
            M = random_graded_module(A, rng, max_dim=5)
            N = random_graded_module(A, rng, max_dim=5)
            total = sum(hom_graded(M, N, k).dim for k in graded_hom_degrees(M, N))
            assert total == hom(M.push_down(), N.push_down()).dim


# -- endomorphism rings ----------------------------------------------------------


def test_end_ring_examples(kx3):
    k = kx_module(kx3, 1)
    E = end_ring(k)
    assert E.dim == 1 and E.radical_dim == 0 and E.is_local()
    two = direct_sum([k, k])[0]
    E2 = end_ring(two)
    assert E2.dim == 4 and E2.radical_dim == 0 and not E2.is_local()
    kx2 = kx_module(kx3, 2)
    E3 = end_ring(kx2)
    assert E3.dim == 2 and E3.radical_dim == 1 and E3.is_local()


def test_end_ring_gf4_point(kron2):
    # dims (2,2), a = I, b = companion of t^2+t+1: End = F_4, local
    M = kron_module(kron2, [[1, 0], [0, 1]], [[0, 1], [1, 1]], (2, 2))
    E = end_ring(M)
    assert E.dim == 2 and E.radical_dim == 0 and E.is_local()


# -- isomorphism ------------------------------------------------------------------


def test_is_isomorphic_identity(kx3):
    M = kx_module(kx3, 2)
    iso = is_isomorphic(M, M)
    assert iso is not None and iso.is_isomorphism()


def test_is_isomorphic_dim_mismatch(kx3):
    assert is_isomorphic(kx_module(kx3, 1), kx_module(kx3, 2)) is None


def test_is_isomorphic_kronecker_regulars(kron3):
    R1 = kron_module(kron3, [[1]], [[1]], (1, 1))
    R2 = kron_module(kron3, [[1]], [[2]], (1, 1))
    assert is_isomorphic(R1, R2) is None
    # oracle: exhaust the four 1x1 candidate intertwiner pairs
    found = False
    for c in range(3):
        f = ModuleMap(R1, R2, [Mat.from_rows(GF3, [[c]]), Mat.from_rows(GF3, [[c]])])
        if f.is_intertwiner() and c != 0:
            found = True
    assert not found


def test_is_isomorphic_after_base_change(kron3):
    M = kron_module(kron3, [[1, 0], [0, 1]], [[0, 1], [0, 0]], (2, 2))
    g1 = Mat.from_rows(GF3, [[1, 1], [0, 1]])
    g2 = Mat.from_rows(GF3, [[2, 0], [1, 1]])
    from gradalib.exactla import inverse

    N = Module(kron3, (2, 2), {
        0: inverse(g1) @ M.action[0] @ g2,
        1: inverse(g1) @ M.action[1] @ g2,
    })
    iso = is_isomorphic(M, N)
    assert iso is not None and iso.is_isomorphism() and iso.is_intertwiner()


def test_is_isomorphic_direct_sums_permuted(kx3):
    k = kx_module(kx3, 1)
    kx2 = kx_module(kx3, 2)
    A = direct_sum([k, kx2])[0]
    B = direct_sum([kx2, k])[0]
    iso = is_isomorphic(A, B)
    assert iso is not None and iso.is_isomorphism() and iso.is_intertwiner()


# -- decomposition ------------------------------------------------------------------


def test_decompose_direct_sum(kx3):
    k = kx_module(kx3, 1)
    kx2 = kx_module(kx3, 2)
    S = direct_sum([k, kx2])[0]
    rep = decompose(S)
    assert rep.summand_count == 2
    assert sorted(p[0].total_dim for p in rep.parts) == [1, 2]


def test_decompose_regular_module_local(kx3):
    reg = kx_module(kx3, 3)
    rep = decompose(reg)
    assert rep.summand_count == 1
    assert end_ring(reg).dim == 3


def test_decompose_kronecker_preprojective(kron2):
    M = kron_module(kron2, [[1, 0]], [[0, 1]], (1, 2))
    rep = decompose(M)
    assert rep.summand_count == 1
    assert end_ring(M).dim == 1


def test_decompose_idempotent_property(kx3, kron2):
    rng = random.Random(9)
    for A in (kx3, kron2):
        for _ in range(6):
            M = random_module(A, rng, max_dim=6)
            rep = decompose(M)
            rebuilt = direct_sum([p[0] for p in rep.parts])[0] if rep.parts else M
            rep2 = decompose(rebuilt)
            multiset1 = sorted(p[0].total_dim for p in rep.parts)
            multiset2 = sorted(p[0].total_dim for p in rep2.parts)
            assert multiset1 == multiset2
            # matching multiset of iso classes
            used = [False] * rep2.summand_count
            for S, _, _ in rep.parts:
                hit = None
                for j, (T, _, _) in enumerate(rep2.parts):
                    if not used[j] and is_isomorphic(S, T) is not None:
                        hit = j
                        break
                assert hit is not None
                used[hit] = True


def test_decompose_sum_of_isomorphic_simples(kron2):
    S = simple_module(kron2, 0)
    M = direct_sum([S, S])[0]
    rep = decompose(M)
    assert rep.summand_count == 2
    assert len(rep.classes) == 1 and rep.classes[0][1] == 2


def test_decompose_graded(kx3):
    gp = graded_right_projective(kx3, 0, 0)
    rep = decompose_graded(gp)
    assert rep.summand_count == 1
    s0 = graded_simple(kx3, 0, 0)
    s5 = graded_simple(kx3, 0, 5)
    S = graded_direct_sum([s0, s5])[0]
    rep2 = decompose_graded(S)
    assert rep2.summand_count == 2


# -- graded iso and shifts ------------------------------------------------------------


def test_graded_iso_shift(kx3):
    M = GradedModule(kx3, {(0, 0): 1, (0, 1): 1}, {(0, 0): Mat.from_rows(GF3, [[1]])})
    assert graded_iso_shift(M, M.shift(4)) == 4
    N = GradedModule(kx3, {(0, 0): 1, (0, 1): 1}, {})  # semisimple: not iso
    assert graded_iso_shift(M, N) is None


def test_is_graded_isomorphic_scaling(kx3):
    M = GradedModule(kx3, {(0, 0): 1, (0, 1): 1}, {(0, 0): Mat.from_rows(GF3, [[1]])})
    N = GradedModule(kx3, {(0, 0): 1, (0, 1): 1}, {(0, 0): Mat.from_rows(GF3, [[2]])})
    iso = is_graded_isomorphic(M, N)
    assert iso is not None and iso.is_isomorphism()


# -- enumeration -----------------------------------------------------------------------


def test_enumerate_kx3_gf2():
    A = build(QuiverPresentation.make(["v"], [("x", "v", "v", 1)], [[(1, ["x", "x", "x"])]]), GF2)
    mods = enumerate_modules(A, 3)
    assert len(mods) == 3
    assert sorted(m.total_dim for m in mods) == [1, 2, 3]


def test_enumerate_semisimple_two_classes():
    A = build(QuiverPresentation.make(["1", "2"], []), GF2)
    mods = enumerate_modules(A, 2)
    assert len(mods) == 2
    assert sorted(m.dims for m in mods) == [(0, 1), (1, 0)]


def test_enumerate_kronecker_gf2_dim2(kron2):
    mods = enumerate_modules(kron2, 2)
    # two simples + three classes of dims (1,1): (a,b) in {(1,0),(0,1),(1,1)}
    assert len(mods) == 5
    dims11 = [m for m in mods if m.dims == (1, 1)]
    assert len(dims11) == 3


def test_enumerate_pairwise_noniso(kron2):
    mods = enumerate_modules(kron2, 3)
    for i in range(len(mods)):
        for j in range(i + 1, len(mods)):
            assert is_isomorphic(mods[i], mods[j]) is None


def test_enumerate_bound_exceeded(kron3):
    with pytest.raises(BoundExceededError):
        enumerate_modules(kron3, 7)


def test_enumerate_graded_kx3_gf3(kx3):
    mods, max_grl = enumerate_graded(kx3, 3, 3)
    assert len(mods) == 3
    assert max_grl == 3
    assert sorted(m.total_dim for m in mods) == [1, 2, 3]


def test_enumerate_graded_kronecker(kron2):
    mods, max_grl = enumerate_graded(kron2, 2, 3)
    assert any(m.dims_vector() == (1, 2) and m.graded_length() == 2 for m in mods)


def test_enumerate_graded_semisimple_max_grl_one():
    A = build(QuiverPresentation.make(["1", "2"], []), GF2)
    mods, max_grl = enumerate_graded(A, 2, 2)
    assert max_grl == 1


def test_camillo_fuller_transfer_smoke(kron2):
    mods, _ = enumerate_graded(kron2, 3, 3)
    for m in mods:
        assert end_ring(m.push_down()).is_local()


# -- random module sanity ---------------------------------------------------------------


def test_random_modules_are_valid(kx3, kron3, kx3_q):
    rng = random.Random(31)
    for A in (kx3, kron3, kx3_q):
        for _ in range(5):
            check(random_module(A, rng, max_dim=6))
            check(random_graded_module(A, rng, max_dim=6))
