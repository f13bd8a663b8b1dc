import random
from math import gcd, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amplehom.abelian import (
    FgAbGroup,
    IntMatrix,
    cokernel,
    determinant,
    identity_minus,
    kernel,
    smith_normal_form,
)


def mat(rows):
    return IntMatrix.from_rows(rows)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def test_snf_hand_reduction_example():
    # Oracle: by hand, R2 -= R1 then C2 -= C1 then negate R1 gives diag(1, 0).
    d = smith_normal_form(mat([[-1, -1], [-1, -1]]))
    assert d.diagonal() == [1, 0]
    d.verify(mat([[-1, -1], [-1, -1]]))


def test_snf_zero_matrix_fixed_point():
    d = smith_normal_form(mat([[0]]))
    assert d.diagonal() == [0]
    assert d.U == IntMatrix.identity(1)
    assert d.V == IntMatrix.identity(1)


def test_snf_structure_theorem_example():
    # Oracle: elementary divisors of diag(2, 3) recombine to gcd=1, lcm=6.
    d = smith_normal_form(mat([[2, 0], [0, 3]]))
    assert d.diagonal() == [1, 6]
    d.verify(mat([[2, 0], [0, 3]]))


def test_snf_empty_and_degenerate_shapes():
    for rows, cols in [(0, 0), (0, 3), (3, 0), (1, 5), (5, 1)]:
        m = IntMatrix.zeros(rows, cols)
        d = smith_normal_form(m)
        d.verify(m)
        assert d.D == m


def test_snf_deterministic():
    rng = random.Random(7)
    for _ in range(25):
        rows = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(3)]
        m = mat(rows)
        assert smith_normal_form(m) == smith_normal_form(m)


@st.composite
def int_matrices(draw, max_dim=6, max_entry=9):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    entries = draw(
        st.lists(st.integers(-max_entry, max_entry), min_size=r * c, max_size=r * c)
    )
    return IntMatrix(r, c, tuple(entries))


@given(int_matrices())
@settings(max_examples=150, deadline=None)
def test_snf_properties(m):
    d = smith_normal_form(m)
    d.verify(m)
    grp, basis = kernel(m)
    # rank-nullity
    assert basis.cols + d.rank() == m.cols
    assert grp.free_rank == basis.cols


@given(int_matrices(max_dim=5, max_entry=6))
@settings(max_examples=100, deadline=None)
def test_coker_order_equals_det_on_nonsingular(m):
    if m.rows != m.cols or m.rows == 0:
        return
    det = determinant(m)  # Bareiss, independent of the Smith reduction
    if det == 0:
        return
    c = cokernel(m)
    assert c.free_rank == 0
    assert c.order() == abs(det)


# ---------------------------------------------------------------------------
# cokernel / kernel
# ---------------------------------------------------------------------------

def test_cokernel_examples():
    assert cokernel(mat([[-1]])) == FgAbGroup.trivial()  # unimodular 1x1
    assert cokernel(IntMatrix.zeros(2, 2)) == FgAbGroup.free(2)
    assert cokernel(mat([[-1, -1], [-1, -1]])) == FgAbGroup.free(1)


def test_kernel_examples():
    for n in (1, 2, 3):
        grp, basis = kernel(IntMatrix.zeros(n, n))
        assert grp == FgAbGroup.free(n)
        assert basis == IntMatrix.identity(n)

    grp, basis = kernel(mat([[-1, -1], [-1, -1]]))
    assert grp == FgAbGroup.free(1)
    # direct solve oracle: x + y = 0, Hermite normalization picks (1, -1)
    assert basis.to_lists() == [[1], [-1]]

    grp, basis = kernel(mat([[-1]]))
    assert grp == FgAbGroup.trivial()
    assert basis.cols == 0


@given(int_matrices())
@settings(max_examples=100, deadline=None)
def test_kernel_columns_really_in_kernel(m):
    _, basis = kernel(m)
    for j in range(basis.cols):
        col = IntMatrix(m.cols, 1, tuple(basis.column(j)))
        assert (m * col).is_zero()


def test_identity_minus():
    assert identity_minus(mat([[2]])) == mat([[-1]])
    assert identity_minus(mat([[2, 1], [1, 2]])) == mat([[-1, -1], [-1, -1]])
    with pytest.raises(ValueError):
        identity_minus(IntMatrix.zeros(1, 2))


# ---------------------------------------------------------------------------
# FgAbGroup arithmetic
# ---------------------------------------------------------------------------

def test_canonical_form_is_isomorphism_invariant():
    assert FgAbGroup.from_cyclic_orders([2, 3]) == FgAbGroup.cyclic(6)
    assert FgAbGroup.from_cyclic_orders([4, 6]) == FgAbGroup(0, (2, 12))
    assert FgAbGroup.from_cyclic_orders([0, 2, 4, 8, 3, 9, 5]) == FgAbGroup(
        1, (2, 12, 360)
    )
    assert FgAbGroup.cyclic(1) == FgAbGroup.trivial()
    assert FgAbGroup.cyclic(0) == FgAbGroup.free(1)


def test_invalid_invariant_factors_rejected():
    with pytest.raises(ValueError):
        FgAbGroup(0, (3, 4))  # 3 does not divide 4
    with pytest.raises(ValueError):
        FgAbGroup(0, (1,))
    with pytest.raises(ValueError):
        FgAbGroup(-1, ())


def test_tensor_examples():
    Z = FgAbGroup.free(1)
    assert FgAbGroup.cyclic(4).tensor(FgAbGroup.cyclic(6)) == FgAbGroup.cyclic(2)
    for g in [Z, FgAbGroup.cyclic(5), FgAbGroup(2, (2, 4))]:
        assert Z.tensor(g) == g
        assert FgAbGroup.trivial().tensor(g) == FgAbGroup.trivial()


def test_tor_examples():
    Z = FgAbGroup.free(1)
    for g in [Z, FgAbGroup.cyclic(7), FgAbGroup(1, (2,))]:
        assert Z.tor(g) == FgAbGroup.trivial()
    for m in (2, 3, 12):
        assert FgAbGroup.cyclic(m).tor(FgAbGroup.cyclic(m)) == FgAbGroup.cyclic(m)
    assert FgAbGroup.cyclic(4).tor(FgAbGroup.cyclic(6)) == FgAbGroup.cyclic(2)


def test_mod2_examples():
    assert FgAbGroup.free(1).mod2() == FgAbGroup.cyclic(2)
    assert FgAbGroup.cyclic(3).mod2() == FgAbGroup.trivial()
    assert FgAbGroup.from_cyclic_orders([0, 2, 3]).mod2() == FgAbGroup(0, (2, 2))


def small_groups():
    orders = st.lists(st.sampled_from([0, 2, 3, 4, 5, 6, 8, 9, 12]), max_size=4)
    return orders.map(FgAbGroup.from_cyclic_orders)


@given(small_groups(), small_groups())
@settings(max_examples=150, deadline=None)
def test_tensor_tor_commutative(a, b):
    assert a.tensor(b) == b.tensor(a)
    assert a.tor(b) == b.tor(a)


@given(small_groups(), small_groups(), small_groups())
@settings(max_examples=100, deadline=None)
def test_tensor_tor_distribute_over_direct_sum(a, b, c):
    assert a.tensor(b.direct_sum(c)) == a.tensor(b).direct_sum(a.tensor(c))
    assert a.tor(b.direct_sum(c)) == a.tor(b).direct_sum(a.tor(c))


@given(small_groups())
@settings(max_examples=80, deadline=None)
def test_mod2_shape(a):
    m = a.mod2()
    assert m.free_rank == 0
    assert all(t == 2 for t in m.torsion)
    # agrees with tensoring by Z/2
    assert m == a.tensor(FgAbGroup.cyclic(2))


def test_json_round_trip():
    g = FgAbGroup(2, (2, 6))
    assert FgAbGroup.from_json(g.to_json()) == g
    assert g.to_json() == {"rank": 2, "torsion": [2, 6]}
    with pytest.raises(ValueError):
        FgAbGroup.from_json({"rank": 1, "torsion": [3, 4]})  # chain violated
    with pytest.raises(ValueError):
        FgAbGroup.from_json({"rank": 1, "torsion": [1]})
    with pytest.raises(ValueError):
        FgAbGroup.from_json({"rank": -1})


def test_order():
    assert FgAbGroup.trivial().order() == 1
    assert FgAbGroup(0, (2, 6)).order() == 12
    assert FgAbGroup.free(1).order() is None
