"""Graded homology of groupoid specs.

Matrix-presented classes get closed formulas, products are folded through
the Kunneth rule, and finite groupoids go through a brute-force chain
complex over composable tuples.  The brute-force route is deliberately
formula-free so it can serve as the independent oracle for everything else
on small inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .abelian import (
    FgAbGroup,
    IntMatrix,
    cokernel,
    determinant,
    identity_minus,
    invariant_factors_of,
    kernel,
)
from .errors import BudgetExceeded, SpecError
from .graded import GradedAbGroup
from .models import (
    BratteliSpec,
    DirectHomologySpec,
    FiniteGroupoid,
    GroupoidSpec,
    KepSpec,
    KGraphSpec,
    ProductSpec,
    SftSpec,
)

DEFAULT_MEMORY_BUDGET = 256 * 1024 * 1024
DEFAULT_MAX_DEGREE = 3


def sft_homology(spec: SftSpec) -> GradedAbGroup:
    """Degree 0: coker(id - A^t); degree 1: ker(id - A^t); nothing above."""
    m = identity_minus(spec.A.transpose())
    h0 = cokernel(m)
    h1, _ = kernel(m)
    return GradedAbGroup({0: h0, 1: h1}, eventually_zero=True, max_support=1)


def kgraph_homology(spec: KGraphSpec) -> GradedAbGroup:
    """(Z/g)^binom(k-1, degree) through degree k-1, g the gcd of the
    reduced edge counts; g = 1 collapses everything.
    """
    from math import gcd

    g = 0
    for n in spec.reduced_counts:
        g = gcd(g, n)
    k = spec.k
    groups = {}
    if g > 1:
        for deg in range(k):
            groups[deg] = FgAbGroup.from_cyclic_orders([g] * comb(k - 1, deg))
    return GradedAbGroup(groups, eventually_zero=True, max_support=k - 1)


def kep_homology(spec: KepSpec) -> GradedAbGroup:
    """Degrees 0..2 from the pair (id - A, id - B); nothing above."""
    ia = identity_minus(spec.A)
    ib = identity_minus(spec.B)
    h0 = cokernel(ia)
    ka, _ = kernel(ia)
    h1 = ka.direct_sum(cokernel(ib))
    h2, _ = kernel(ib)
    return GradedAbGroup({0: h0, 1: h1, 2: h2}, eventually_zero=True, max_support=2)


@dataclass(frozen=True)
class AfHomologyReport:
    """Structural description of AF homology at a chosen telescope level.

    Higher homology vanishes outright.  Degree zero is an inductive limit
    that need not be finitely generated, so it is reported as the level-L
    stage together with the telescoped incidence map into it, plus the
    stabilized rational rank when the diagram is stationary.
    """

    level: int
    stage_rank: int
    telescoped: IntMatrix
    stabilized_rational_rank: int | None
    limit_note: str
    higher: GradedAbGroup

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "stage_rank": self.stage_rank,
            "telescoped_map": self.telescoped.to_lists(),
            "stabilized_rational_rank": self.stabilized_rational_rank,
            "limit_note": self.limit_note,
            "higher_degrees": self.higher.to_json(),
        }


def af_homology(spec: BratteliSpec, level: int) -> AfHomologyReport:
    """Telescope the diagram to the given level and describe degree zero."""
    levels = spec.levels()
    if level < 0:
        raise SpecError("level", "telescope level must be nonnegative")
    if not spec.stationary and level >= len(levels):
        raise SpecError(
            "level",
            f"level {level} beyond stored prefix (deepest is {len(levels) - 1}) "
            "and the diagram is not stationary",
        )

    def matrix_at(l: int) -> IntMatrix:
        if l < len(spec.incidence):
            return spec.incidence[l]
        return spec.incidence[-1]  # stationary tail

    stage_rank = levels[level] if level < len(levels) else levels[-1]
    telescoped = IntMatrix.identity(levels[0])
    for l in range(level):
        telescoped = matrix_at(l) * telescoped

    stabilized = None
    note = "finite prefix only; the limit beyond the stored levels is unspecified"
    if spec.stationary:
        m = spec.incidence[-1]
        stabilized = _stable_rank(m)
        det = determinant(m)
        if abs(det) == 1:
            note = (
                f"stationary telescope with unimodular stage map; the limit is free "
                f"of rank {m.rows}"
            )
        elif det != 0:
            note = (
                f"stationary telescope with |det| = {abs(det)} > 1; stages embed "
                "strictly, so the limit is not finitely generated"
            )
        else:
            note = (
                f"stationary telescope with singular stage map; rational rank "
                f"stabilizes at {stabilized}, finite generation is undetermined "
                "from this data"
            )
    return AfHomologyReport(
        level=level,
        stage_rank=stage_rank,
        telescoped=telescoped,
        stabilized_rational_rank=stabilized,
        limit_note=note,
        higher=GradedAbGroup({}, eventually_zero=True, max_support=0),
    )


def _stable_rank(m: IntMatrix) -> int:
    power = m
    rank = len(invariant_factors_of(power))
    for _ in range(m.rows):
        power = power * m
        nxt = len(invariant_factors_of(power))
        if nxt == rank:
            return rank
        rank = nxt
    return rank


def kunneth(h1: GradedAbGroup, h2: GradedAbGroup) -> GradedAbGroup:
    """Homology of a product from the factors: tensor terms in matching
    total degree plus Tor terms shifted up by one.
    """
    for h in (h1, h2):
        if not h.eventually_zero:
            raise ValueError(
                "Kunneth needs finite support; compute factors with eventual "
                "vanishing first"
            )
    top = (h1.max_support or 0) + (h2.max_support or 0) + 1
    groups = {}
    for n in range(top + 1):
        parts = []
        for p in range(n + 1):
            parts.append(h1.group(p).tensor(h2.group(n - p)))
        for p in range(n):
            parts.append(h1.group(p).tor(h2.group(n - 1 - p)))
        total = FgAbGroup.trivial().direct_sum(*parts)
        if not total.is_trivial:
            groups[n] = total
    return GradedAbGroup(groups, eventually_zero=True)


# ---------------------------------------------------------------------------
# brute force over composable tuples
# ---------------------------------------------------------------------------

def _composable_tuples(G: FiniteGroupoid, length: int) -> list[tuple[int, ...]]:
    """All length-long tuples with s(g_mu) = r(g_{mu+1}), in lex order."""
    by_target: dict[int, list[int]] = {}
    for g in G.arrows():
        by_target.setdefault(G.target[g], []).append(g)
    tuples = [(g,) for g in G.arrows()]
    for _ in range(length - 1):
        tuples = [t + (g,) for t in tuples for g in by_target.get(G.source[t[-1]], [])]
    return tuples if length >= 1 else [()]


def _tuple_counts(G: FiniteGroupoid, upto: int) -> list[int]:
    """Number of composable tuples per length 0..upto, without enumerating.

    per_last[g] counts tuples of the current length ending in g; a tuple
    ending in g extends on the right by every h with r(h) = s(g).
    """
    counts = [len(G.units)]
    per_last = {g: 1 for g in G.arrows()}
    for _ in range(1, upto + 1):
        counts.append(sum(per_last.values()))
        new = {g: 0 for g in G.arrows()}
        for g, n in per_last.items():
            for h in G.arrows():
                if G.target[h] == G.source[g]:
                    new[h] += n
        per_last = new
    return counts


def bruteforce_homology(
    G: FiniteGroupoid,
    max_degree: int,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> GradedAbGroup:
    """Homology of the composable-tuple chain complex through max_degree.

    Chain group nu is free on composable nu-tuples (degree 0 on units); the
    boundary alternates drop-left, multiply-adjacent, and drop-right face
    maps.  Results above max_degree are unknown, so the output does not
    claim eventual vanishing.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    counts = _tuple_counts(G, max_degree + 1)
    required = 8 * max(
        (counts[nu - 1] * counts[nu] for nu in range(1, max_degree + 2)), default=0
    )
    if required > memory_budget:
        raise BudgetExceeded(required, memory_budget)

    tuple_levels: list[list[tuple[int, ...]]] = [
        [(u,) for u in sorted(G.units)]
    ]
    for nu in range(1, max_degree + 2):
        tuple_levels.append(_composable_tuples(G, nu))

    boundaries = [
        _boundary_matrix(G, tuple_levels[nu - 1], tuple_levels[nu], nu)
        for nu in range(1, max_degree + 2)
    ]

    ranks = [0]  # rank of boundary_nu for nu = 0 (the zero map out of C_0)
    factors: list[list[int]] = [[]]
    for b in boundaries:
        inv = invariant_factors_of(b)
        ranks.append(len(inv))
        factors.append(inv)

    groups = {}
    for nu in range(max_degree + 1):
        n_nu = len(tuple_levels[nu]) if nu else len(G.units)
        free = n_nu - ranks[nu] - ranks[nu + 1]
        torsion = tuple(d for d in factors[nu + 1] if d >= 2)
        grp = FgAbGroup(free, torsion)
        if not grp.is_trivial:
            groups[nu] = grp
    return GradedAbGroup(groups, eventually_zero=False)


def _boundary_matrix(G, lower, upper, nu) -> IntMatrix:
    index = {t: i for i, t in enumerate(lower)}
    rows, cols = len(lower), len(upper)
    entries = [0] * (rows * cols)
    for j, t in enumerate(upper):
        if nu == 1:
            entries[index[(G.source[t[0]],)] * cols + j] += 1
            entries[index[(G.target[t[0]],)] * cols + j] -= 1
            continue
        sign = 1
        entries[index[t[1:]] * cols + j] += sign
        for mu in range(1, nu):
            sign = -sign
            merged = t[: mu - 1] + (G.compose(t[mu - 1], t[mu]),) + t[mu + 1 :]
            entries[index[merged] * cols + j] += sign
        sign = -sign
        entries[index[t[:-1]] * cols + j] += sign
    return IntMatrix(rows, cols, tuple(entries))


def boundary_matrices(G: FiniteGroupoid, upto: int) -> list[IntMatrix]:
    """The boundary maps d_1 .. d_upto, mainly for invariant checks."""
    tuple_levels = [[(u,) for u in sorted(G.units)]]
    for nu in range(1, upto + 1):
        tuple_levels.append(_composable_tuples(G, nu))
    return [
        _boundary_matrix(G, tuple_levels[nu - 1], tuple_levels[nu], nu)
        for nu in range(1, upto + 1)
    ]


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def homology_of(
    spec: GroupoidSpec,
    *,
    max_degree: int = DEFAULT_MAX_DEGREE,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> GradedAbGroup:
    """Compute homology by the engine appropriate to the spec class.

    Products fold their factors through the Kunneth rule left to right;
    externally supplied homology passes straight through.
    """
    if isinstance(spec, SftSpec):
        return sft_homology(spec)
    if isinstance(spec, KGraphSpec):
        return kgraph_homology(spec)
    if isinstance(spec, KepSpec):
        return kep_homology(spec)
    if isinstance(spec, DirectHomologySpec):
        return spec.homology
    if isinstance(spec, FiniteGroupoid):
        return bruteforce_homology(spec, max_degree, memory_budget)
    if isinstance(spec, ProductSpec):
        result = None
        for factor in spec.factors:
            h = homology_of(
                factor, max_degree=max_degree, memory_budget=memory_budget
            )
            result = h if result is None else kunneth(result, h)
        return result
    if isinstance(spec, BratteliSpec):
        raise SpecError(
            "bratteli",
            "AF homology is an inductive system, not a single graded group; "
            "use the structural AF report instead",
        )
    raise SpecError("spec", f"no homology engine for {type(spec).__name__}")


def engine_name(spec: GroupoidSpec) -> str:
    if isinstance(spec, (SftSpec, KGraphSpec, KepSpec)):
        return "formula"
    if isinstance(spec, ProductSpec):
        return "kunneth"
    if isinstance(spec, FiniteGroupoid):
        return "bruteforce"
    if isinstance(spec, DirectHomologySpec):
        return "passthrough"
    if isinstance(spec, BratteliSpec):
        return "af"
    return "unknown"
