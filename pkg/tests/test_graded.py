import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amplehom.abelian import FgAbGroup
from amplehom.graded import (
    GradedAbGroup,
    GradedDims,
    TruncatedSeries,
    derived_series,
    ext_sym_dims,
    full_group_series,
    rationalize,
)


def expand_product_oracle(d, upto):
    """Independent oracle: expand the product with naive polynomial division.

    (1+t)^a factors are multiplied out term by term; each (1-t^j)^(-1) is
    applied by long division of truncated polynomials.
    """
    coeffs = [1] + [0] * upto
    for j, mult in d.items():
        for _ in range(mult):
            if j % 2 == 1:
                new = coeffs[:]
                for n in range(upto, j - 1, -1):
                    new[n] += coeffs[n - j]
                coeffs = new
            else:
                # divide by (1 - t^j): quotient q satisfies q - t^j q = coeffs
                q = [0] * (upto + 1)
                for n in range(upto + 1):
                    q[n] = coeffs[n] + (q[n - j] if n >= j else 0)
                coeffs = q
    return coeffs


# ---------------------------------------------------------------------------
# ext_sym_dims
# ---------------------------------------------------------------------------

def test_ext_sym_penrose_shape():
    # frozen from the series-expansion oracle for (1+t)^5 / (1-t^2)
    assert expand_product_oracle({1: 5, 2: 1}, 6) == [1, 5, 11, 15, 16, 16, 16]
    out = ext_sym_dims(GradedDims({1: 5}), GradedDims({2: 1}), 6)
    assert out.as_list(6) == [1, 5, 11, 15, 16, 16, 16]


def test_ext_sym_on_zero_space_is_scalars():
    out = ext_sym_dims(GradedDims({}), GradedDims({}), 8)
    assert out.as_list(8) == [1] + [0] * 8


def test_ext_sym_pure_exterior_is_binomial():
    from math import comb

    for d in range(6):
        out = ext_sym_dims(GradedDims({1: d}), GradedDims({}), 8)
        assert out.as_list(8) == [comb(d, j) for j in range(9)]


def test_ext_sym_rejects_parity_violations():
    with pytest.raises(ValueError):
        ext_sym_dims(GradedDims({2: 1}), GradedDims({}), 4)
    with pytest.raises(ValueError):
        ext_sym_dims(GradedDims({}), GradedDims({3: 1}), 4)


def test_ext_sym_degree_one_is_d1():
    out = ext_sym_dims(GradedDims({1: 4, 3: 2}), GradedDims({2: 3}), 10)
    assert out.dim(1) == 4


# ---------------------------------------------------------------------------
# series builders
# ---------------------------------------------------------------------------

def test_full_series_telescopes_to_all_ones():
    # (1+t) * (1-t^2)^(-1) = 1/(1-t)
    s = full_group_series(GradedDims({1: 1, 2: 1}), 12)
    assert list(s.coeffs) == [1] * 13


def test_full_series_empty_product():
    s = full_group_series(GradedDims({}), 6)
    assert list(s.coeffs) == [1, 0, 0, 0, 0, 0, 0]


def test_full_series_penrose():
    s = full_group_series(GradedDims({1: 5, 2: 1}), 8)
    assert list(s.coeffs) == [1, 5, 11, 15, 16, 16, 16, 16, 16]


def test_derived_series_examples():
    # Penrose: d_1 dropped, leaving (1-t^2)^(-1)
    s = derived_series(GradedDims({1: 5, 2: 1}), 8)
    assert list(s.coeffs) == [1, 0, 1, 0, 1, 0, 1, 0, 1]
    # only d_1 present: rationally acyclic commutator subgroup
    s = derived_series(GradedDims({1: 7}), 6)
    assert list(s.coeffs) == [1, 0, 0, 0, 0, 0, 0]
    # KEP shape: (1 - t^2)^(-dB) regardless of d_1
    s = derived_series(GradedDims({1: 3, 2: 2}), 6)
    assert list(s.coeffs) == expand_product_oracle({2: 2}, 6)


def test_series_rejects_degree_zero_support():
    with pytest.raises(ValueError):
        full_group_series(GradedDims({0: 1}), 4)


@st.composite
def dim_vectors(draw):
    support = draw(st.lists(st.integers(1, 8), unique=True, max_size=5))
    return GradedDims({j: draw(st.integers(1, 4)) for j in support})


@given(dim_vectors())
@settings(max_examples=120, deadline=None)
def test_ext_sym_agrees_with_series(d):
    n = 20
    via_algebra = ext_sym_dims(d.odd_part(), d.even_part(), n)
    via_series = full_group_series(d, n)
    assert via_algebra.as_list(n) == list(via_series.coeffs)


@given(dim_vectors())
@settings(max_examples=80, deadline=None)
def test_derived_is_full_with_d1_dropped(d):
    n = 16
    lhs = derived_series(d, n)
    rhs = full_group_series(d.restrict(lambda j: j != 1), n)
    assert lhs == rhs
    assert lhs.coefficient(0) == 1


# ---------------------------------------------------------------------------
# graded groups and dims
# ---------------------------------------------------------------------------

def test_rationalize_examples():
    H = GradedAbGroup({0: FgAbGroup.cyclic(2), 1: FgAbGroup.cyclic(2)})
    assert rationalize(H).dims == {}

    penrose = GradedAbGroup.from_list(
        [FgAbGroup.free(8), FgAbGroup.free(5), FgAbGroup.free(1)]
    )
    assert rationalize(penrose).dims == {0: 8, 1: 5, 2: 1}

    cantor = GradedAbGroup({1: FgAbGroup.free(1)})
    assert rationalize(cantor).dims == {1: 1}


def test_graded_group_drops_trivial_degrees():
    H = GradedAbGroup({0: FgAbGroup.trivial(), 3: FgAbGroup.cyclic(2)})
    assert H.support() == [3]
    assert H.group(0).is_trivial
    assert H.max_support == 3


def test_graded_group_max_support_enforced():
    with pytest.raises(ValueError):
        GradedAbGroup({5: FgAbGroup.free(1)}, eventually_zero=True, max_support=3)
    with pytest.raises(ValueError):
        GradedAbGroup({}, eventually_zero=False, max_support=3)


def test_graded_group_json_round_trip():
    H = GradedAbGroup(
        {0: FgAbGroup.free(8), 2: FgAbGroup(1, (2,))}, max_support=4
    )
    assert GradedAbGroup.from_json(H.to_json()) == H
    with pytest.raises(ValueError):
        GradedAbGroup.from_json({"groups": {"x": {"rank": 1}}})


def test_series_json_round_trip():
    s = full_group_series(GradedDims({1: 2}), 5)
    assert TruncatedSeries.from_json(s.to_json()) == s


def test_series_arithmetic_guardrails():
    a = TruncatedSeries.from_coeffs([1, 1], 3)
    b = TruncatedSeries.from_coeffs([1, 2, 1], 3)
    assert (a * a) == b
    with pytest.raises(ValueError):
        a * TruncatedSeries.one(5)
    with pytest.raises(IndexError):
        a.coefficient(9)
