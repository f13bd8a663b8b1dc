"""Invariants of topological full groups derived from groupoid homology.

Given the graded homology of an ample groupoid, this module derives what
that determines about the topological full group F and its commutator
subgroup D: rational homology in all degrees (a free graded-commutative
algebra on the positive-degree rational homology, with the degree-one part
dropped for D), the low-degree vanishing and acyclicity consequences, and
the resolution of H_1(F) through the degree-two exact sequence.

Whether the conclusions attach to F of the groupoid itself or only to F of
its matrix amplification depends on dynamical hypotheses (minimal,
comparison, no isolated points) that cannot be read off a matrix; they are
user-declared metadata, handled by :func:`scope_note`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .abelian import FgAbGroup
from .graded import (
    GradedAbGroup,
    GradedDims,
    TruncatedSeries,
    derived_series,
    ext_sym_dims,
    full_group_series,
    rationalize,
)

REQUIRED_DECLARATIONS = frozenset({"minimal", "comparison", "no-isolated-points"})


def _require_finite_support(H: GradedAbGroup):
    if not H.eventually_zero:
        raise ValueError("need homology with finite support (eventually zero)")


def rational_full_dims(H: GradedAbGroup, truncation: int) -> GradedDims:
    """Rational homology dimensions of the full group through the cutoff.

    Built as the free graded-commutative algebra on the positive-degree
    rational homology of the groupoid: exterior generators from odd
    degrees, symmetric generators from even degrees >= 2.  Degree zero of
    the input never enters.
    """
    _require_finite_support(H)
    d = rationalize(H)
    return ext_sym_dims(d.odd_part(min_degree=1), d.even_part(), truncation)


def rational_derived_dims(H: GradedAbGroup, truncation: int) -> GradedDims:
    """Same algebra but with the odd part restricted to degrees above one;
    degree-one homology never survives into the commutator subgroup.
    """
    _require_finite_support(H)
    d = rationalize(H)
    return ext_sym_dims(d.odd_part(min_degree=3), d.even_part(), truncation)


def full_poincare(H: GradedAbGroup, truncation: int) -> TruncatedSeries:
    _require_finite_support(H)
    return full_group_series(rationalize(H).restrict(lambda j: j >= 1), truncation)


def derived_poincare(H: GradedAbGroup, truncation: int) -> TruncatedSeries:
    _require_finite_support(H)
    return derived_series(rationalize(H).restrict(lambda j: j >= 1), truncation)


# ---------------------------------------------------------------------------
# vanishing verdicts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VanishingVerdict:
    """What low-degree vanishing of groupoid homology forces on F and D.

    first_nonzero is the least degree with nonzero homology, or None when
    every degree vanishes (then F is integrally acyclic and F = D).
    """

    first_nonzero: int | None
    conclusions: tuple[dict, ...]

    def to_json(self) -> dict:
        return {
            "first_nonzero_degree": self.first_nonzero,
            "conclusions": list(self.conclusions),
        }


def vanishing_report(H: GradedAbGroup) -> VanishingVerdict:
    _require_finite_support(H)
    support = H.support()
    k = support[0] if support else None

    conclusions = [
        {
            "kind": "derived_h1_trivial",
            "statement": "H_1 of the commutator subgroup D vanishes",
        }
    ]
    if k is None:
        conclusions.append(
            {
                "kind": "integrally_acyclic",
                "statement": "all groupoid homology vanishes, so the full group F "
                "is integrally acyclic and F = D",
            }
        )
    elif k > 0:
        conclusions.append(
            {
                "kind": "full_group_vanishing_below",
                "degree": k,
                "statement": f"H_* of the full group F vanishes for 0 < * < {k}",
            }
        )
        conclusions.append(
            {
                "kind": "full_group_at_first_degree",
                "degree": k,
                "group": H.group(k).to_json(),
                "statement": f"H_{k}(F) is isomorphic to H_{k} of the groupoid, "
                f"namely {H.group(k)}",
            }
        )
        if k >= 2:
            conclusions.append(
                {
                    "kind": "full_equals_derived",
                    "statement": "homology vanishes through degree 1, so F = D",
                }
            )
    return VanishingVerdict(first_nonzero=k, conclusions=tuple(conclusions))


# ---------------------------------------------------------------------------
# resolving H_1 of the full group
# ---------------------------------------------------------------------------

class StrongAh(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class AhResolution:
    """Resolution of H_1(F) from the exact sequence

        H_2(G) -> H_0(G, Z/2) -> H_1(F) -> H_1(G) -> 0.

    verdict is one of
      - ("determined", group): the middle term is forced;
      - ("extension_ambiguous", kernel, quotient): the sequence pins both
        ends but not the extension class;
      - ("connecting_unknown", kernel_bound, quotient): the map out of
        H_2(G) cannot be evaluated from homology alone, so only an upper
        bound for the kernel is known.

    strong_ah records whether H_0(G, Z/2) injects into H_1(F), which holds
    exactly when the connecting map vanishes.
    """

    h2: FgAbGroup
    h1: FgAbGroup
    h0_mod2: FgAbGroup
    verdict: tuple
    strong_ah: StrongAh

    @property
    def determined(self) -> FgAbGroup | None:
        return self.verdict[1] if self.verdict[0] == "determined" else None

    def to_json(self) -> dict:
        kind = self.verdict[0]
        out = {
            "h2": self.h2.to_json(),
            "h1": self.h1.to_json(),
            "h0_mod2": self.h0_mod2.to_json(),
            "strong_ah": self.strong_ah.value,
            "verdict": kind,
        }
        if kind == "determined":
            out["h1_full_group"] = self.verdict[1].to_json()
            out["summary"] = f"H_1(F) = {self.verdict[1]}"
        elif kind == "extension_ambiguous":
            out["kernel"] = self.verdict[1].to_json()
            out["quotient"] = self.verdict[2].to_json()
            out["summary"] = (
                f"H_1(F) is an extension of {self.verdict[2]} by "
                f"{self.verdict[1]}; the extension class is not determined"
            )
        else:
            out["kernel_bound"] = self.verdict[1].to_json()
            out["quotient"] = self.verdict[2].to_json()
            out["summary"] = (
                "the connecting map out of H_2 is not determined by homology "
                f"alone; H_1(F) surjects onto {self.verdict[2]} with kernel a "
                f"quotient of {self.verdict[1]}"
            )
        return out


def ah_resolve(H: GradedAbGroup) -> AhResolution:
    """Resolve H_1 of the full group as far as the exact sequence forces it.

    The connecting map out of degree two is forced to vanish when either
    end is trivial; the resulting extension of H_1(G) by H_0(G, Z/2) is
    forced when the quotient is free (it splits) or the kernel is trivial.
    Anything less stays explicitly ambiguous rather than guessed.
    """
    h2 = H.group(2)
    h1 = H.group(1)
    h0m2 = H.group(0).mod2()

    if h2.is_trivial or h0m2.is_trivial:
        strong = StrongAh.HOLDS
        if h0m2.is_trivial:
            verdict = ("determined", h1)
        elif h1.is_free:
            verdict = ("determined", h1.direct_sum(h0m2))
        else:
            verdict = ("extension_ambiguous", h0m2, h1)
    else:
        strong = StrongAh.UNDETERMINED
        verdict = ("connecting_unknown", h0m2, h1)
    return AhResolution(h2=h2, h1=h1, h0_mod2=h0m2, verdict=verdict, strong_ah=strong)


def scope_note(declared: frozenset | set) -> dict:
    """Where the conclusions apply, as a function of declared hypotheses.

    The dynamical hypotheses cannot be inferred from presentation data, so
    they are taken as user declarations only.  With all of them declared,
    conclusions attach to the full group of the groupoid itself; otherwise
    only to the full group of its amplification, which needs no hypotheses.
    """
    declared = frozenset(declared)
    unknown = declared - REQUIRED_DECLARATIONS
    if unknown:
        raise ValueError(
            f"unknown hypothesis declarations {sorted(unknown)}; "
            f"expected a subset of {sorted(REQUIRED_DECLARATIONS)}"
        )
    missing = REQUIRED_DECLARATIONS - declared
    if not missing:
        return {
            "scope": "full_group",
            "declared": sorted(declared),
            "statement": "declared minimal + comparison + no isolated points: "
            "conclusions apply to the full group F(G) itself",
        }
    return {
        "scope": "amplified_full_group",
        "declared": sorted(declared),
        "missing": sorted(missing),
        "statement": "without declared dynamical hypotheses the conclusions "
        "apply to the full group of the amplified groupoid only",
    }
