from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amplehom.abelian import FgAbGroup, IntMatrix
from amplehom.graded import GradedAbGroup, rationalize
from amplehom.homology import sft_homology
from amplehom.invariants import (
    StrongAh,
    ah_resolve,
    derived_poincare,
    full_poincare,
    rational_derived_dims,
    rational_full_dims,
    scope_note,
    vanishing_report,
)
from amplehom.models import SftSpec

Z = FgAbGroup.free(1)


def graded(*groups):
    return GradedAbGroup({d: g for d, g in enumerate(groups)})


# ---------------------------------------------------------------------------
# rational homology of F and D
# ---------------------------------------------------------------------------

def test_rational_full_sft_is_binomial():
    # kernel rank 1 for this matrix, so dims are binom(1, *)
    h = sft_homology(SftSpec(IntMatrix.from_rows([[2, 1], [1, 2]])))
    dims = rational_full_dims(h, 6)
    assert dims.as_list(6) == [comb(1, j) for j in range(7)]


def test_rational_full_cantor_minimal_shape():
    h = GradedAbGroup({1: Z})
    assert rational_full_dims(h, 5).as_list(5) == [1, 1, 0, 0, 0, 0]


def test_rational_full_acyclic():
    assert rational_full_dims(GradedAbGroup({}), 4).as_list(4) == [1, 0, 0, 0, 0]


def test_rational_derived_cantor_minimal_is_acyclic():
    h = GradedAbGroup({1: Z})
    assert rational_derived_dims(h, 5).as_list(5) == [1, 0, 0, 0, 0, 0]


def test_rational_derived_penrose_alternates():
    penrose = graded(FgAbGroup.free(8), FgAbGroup.free(5), Z)
    assert rational_derived_dims(penrose, 6).as_list(6) == [1, 0, 1, 0, 1, 0, 1]


def test_rational_derived_single_high_odd_generator():
    h = GradedAbGroup({5: Z})
    assert rational_derived_dims(h, 6).as_list(6) == [1, 0, 0, 0, 0, 1, 0]


def test_poincare_series_wrappers():
    penrose = graded(FgAbGroup.free(8), FgAbGroup.free(5), Z)
    assert list(full_poincare(penrose, 8).coeffs) == [1, 5, 11, 15, 16, 16, 16, 16, 16]
    assert list(derived_poincare(penrose, 8).coeffs) == [1, 0, 1, 0, 1, 0, 1, 0, 1]


def small_graded():
    group = st.builds(
        FgAbGroup.from_cyclic_orders,
        st.lists(st.sampled_from([0, 0, 2, 3, 4]), max_size=3),
    )
    return st.builds(
        lambda gs: GradedAbGroup({d: g for d, g in enumerate(gs)}),
        st.lists(group, max_size=5),
    )


@given(small_graded())
@settings(max_examples=80, deadline=None)
def test_degree_one_of_full_rational_homology_is_h1_rank(h):
    dims = rational_full_dims(h, 8)
    assert dims.dim(1) == h.group(1).free_rank
    assert dims.dim(0) == 1


@given(small_graded())
@settings(max_examples=60, deadline=None)
def test_degree_one_of_derived_rational_homology_vanishes(h):
    assert rational_derived_dims(h, 8).dim(1) == 0


def test_requires_finite_support():
    infinite = GradedAbGroup({0: Z}, eventually_zero=False)
    with pytest.raises(ValueError):
        rational_full_dims(infinite, 4)
    with pytest.raises(ValueError):
        vanishing_report(infinite)


# ---------------------------------------------------------------------------
# vanishing verdicts
# ---------------------------------------------------------------------------

def kinds(verdict):
    return [c["kind"] for c in verdict.conclusions]


def test_vanishing_all_trivial():
    v = vanishing_report(GradedAbGroup({}))
    assert v.first_nonzero is None
    assert "integrally_acyclic" in kinds(v)
    assert "derived_h1_trivial" in kinds(v)
    # cross-module consistency: rationally acyclic full group
    assert rational_full_dims(GradedAbGroup({}), 6).as_list(6) == [1, 0, 0, 0, 0, 0, 0]


def test_vanishing_first_at_two():
    for coeff in (Z, FgAbGroup.cyclic(2), FgAbGroup(1, (4,))):
        v = vanishing_report(GradedAbGroup({2: coeff}))
        assert v.first_nonzero == 2
        assert "full_equals_derived" in kinds(v)
        at_k = next(c for c in v.conclusions if c["kind"] == "full_group_at_first_degree")
        assert at_k["group"] == coeff.to_json()
        assert at_k["degree"] == 2


def test_vanishing_h0_nonzero_only_unconditional_conclusion():
    v = vanishing_report(graded(Z))
    assert v.first_nonzero == 0
    assert kinds(v) == ["derived_h1_trivial"]


# ---------------------------------------------------------------------------
# resolving H_1 of the full group
# ---------------------------------------------------------------------------

def test_ah_sft_two_vertex():
    h = sft_homology(SftSpec(IntMatrix.from_rows([[2, 1], [1, 2]])))
    res = ah_resolve(h)
    assert res.strong_ah is StrongAh.HOLDS
    assert res.determined == FgAbGroup(1, (2,))  # Z + Z/2
    assert res.determined.free_rank == res.h1.free_rank == 1


def test_ah_mod2_trivial_gives_h1_directly():
    h = GradedAbGroup({0: FgAbGroup.cyclic(3), 1: FgAbGroup(1, (6,))})
    res = ah_resolve(h)
    assert res.h0_mod2.is_trivial
    assert res.strong_ah is StrongAh.HOLDS
    assert res.determined == FgAbGroup(1, (6,))


def test_ah_penrose_connecting_map_unknown():
    penrose = graded(FgAbGroup.free(8), FgAbGroup.free(5), Z)
    res = ah_resolve(penrose)
    assert res.strong_ah is StrongAh.UNDETERMINED
    assert res.verdict[0] == "connecting_unknown"
    kernel_bound, quotient = res.verdict[1], res.verdict[2]
    assert kernel_bound == FgAbGroup.from_cyclic_orders([2] * 8)
    assert quotient == FgAbGroup.free(5)


def test_ah_extension_ambiguous_when_h1_has_torsion():
    h = GradedAbGroup({0: Z, 1: FgAbGroup.cyclic(2)})
    res = ah_resolve(h)
    assert res.strong_ah is StrongAh.HOLDS
    assert res.verdict[0] == "extension_ambiguous"
    assert res.verdict[1] == FgAbGroup.cyclic(2)
    assert res.verdict[2] == FgAbGroup.cyclic(2)


def test_ah_never_determined_with_all_three_obstructions():
    h = GradedAbGroup(
        {0: Z, 1: FgAbGroup.cyclic(2), 2: FgAbGroup.cyclic(2)}
    )
    res = ah_resolve(h)
    assert res.verdict[0] != "determined"
    assert res.strong_ah is StrongAh.UNDETERMINED


@given(small_graded())
@settings(max_examples=80, deadline=None)
def test_ah_determined_value_has_h1_rank(h):
    res = ah_resolve(h)
    if res.determined is not None:
        assert res.determined.free_rank == res.h1.free_rank
    # the resolution never invents an answer in the genuinely open case
    if (
        not res.h2.is_trivial
        and not res.h0_mod2.is_trivial
        and not res.h1.is_free
    ):
        assert res.verdict[0] != "determined"


def test_ah_defaults_missing_degree_two_to_trivial():
    h = GradedAbGroup({0: Z}, max_support=1)
    res = ah_resolve(h)
    assert res.h2.is_trivial
    assert res.determined == FgAbGroup.cyclic(2)  # mod-2 class survives alone


# ---------------------------------------------------------------------------
# hypothesis declarations
# ---------------------------------------------------------------------------

def test_scope_full_group_when_all_declared():
    note = scope_note({"minimal", "comparison", "no-isolated-points"})
    assert note["scope"] == "full_group"


def test_scope_amplified_without_declarations():
    note = scope_note(set())
    assert note["scope"] == "amplified_full_group"
    assert set(note["missing"]) == {"minimal", "comparison", "no-isolated-points"}


def test_scope_partial_declaration_is_amplified_only():
    note = scope_note({"minimal", "comparison"})
    assert note["scope"] == "amplified_full_group"
    assert note["missing"] == ["no-isolated-points"]


def test_scope_rejects_unknown_declarations():
    with pytest.raises(ValueError):
        scope_note({"effective"})
