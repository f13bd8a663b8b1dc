"""Graded abelian groups, rational dimension vectors, and truncated series.

A :class:`GradedAbGroup` stores one :class:`FgAbGroup` per degree (sparse,
absent degrees are trivial) and carries eventual-vanishing metadata.  Its
rational shadow is a :class:`GradedDims` of free ranks per degree.  The two
series builders both expand the same infinite product

    prod_{j >= 1} (1 + (-1)^(j+1) t^j) ** ((-1)^(j+1) d_j)

that is, a factor (1 + t^j) per odd-degree dimension and a geometric factor
(1 - t^j)^(-1) per even-degree dimension, but by deliberately different
routes: :func:`ext_sym_dims` convolves one generator at a time, while
:func:`full_group_series` uses closed binomial expansions per degree.  Each
is the independent cross-check of the other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .abelian import FgAbGroup

DEFAULT_TRUNCATION = 32


@dataclass(frozen=True)
class GradedAbGroup:
    """Degree-indexed abelian groups; degrees not stored are trivial.

    max_support is an upper bound on the support, not part of the group
    data, so it does not participate in equality.
    """

    groups: dict[int, FgAbGroup] = field(default_factory=dict)
    eventually_zero: bool = True
    max_support: int | None = field(default=None, compare=False)

    def __post_init__(self):
        cleaned = {}
        for deg, grp in self.groups.items():
            if not isinstance(deg, int) or deg < 0:
                raise ValueError(f"degree must be a nonnegative integer, got {deg!r}")
            if not grp.is_trivial:
                cleaned[deg] = grp
        object.__setattr__(self, "groups", cleaned)
        if self.eventually_zero:
            top = max(cleaned, default=0)
            bound = self.max_support
            if bound is None:
                bound = top
            elif cleaned and top > bound:
                raise ValueError(
                    f"stored degree {top} exceeds declared max_support {bound}"
                )
            object.__setattr__(self, "max_support", bound)
        elif self.max_support is not None:
            raise ValueError("max_support only makes sense with eventually_zero")

    @classmethod
    def from_list(cls, groups_by_degree, eventually_zero=True, max_support=None):
        return cls(
            {d: g for d, g in enumerate(groups_by_degree)},
            eventually_zero=eventually_zero,
            max_support=max_support,
        )

    @classmethod
    def point(cls) -> "GradedAbGroup":
        """Z concentrated in degree 0."""
        return cls({0: FgAbGroup.free(1)}, eventually_zero=True, max_support=0)

    def group(self, degree: int) -> FgAbGroup:
        return self.groups.get(degree, FgAbGroup.trivial())

    @property
    def is_trivial(self) -> bool:
        return not self.groups

    def support(self) -> list[int]:
        return sorted(self.groups)

    def to_json(self) -> dict:
        out = {
            "groups": {str(d): self.groups[d].to_json() for d in sorted(self.groups)},
            "eventually_zero": self.eventually_zero,
        }
        if self.eventually_zero:
            out["max_support"] = self.max_support
        return out

    @classmethod
    def from_json(cls, data: dict) -> "GradedAbGroup":
        if not isinstance(data, dict) or "groups" not in data:
            raise ValueError(f"malformed graded-group JSON: {data!r}")
        groups = {}
        for key, val in data["groups"].items():
            try:
                deg = int(key)
            except (TypeError, ValueError):
                raise ValueError(f"bad degree key {key!r}") from None
            groups[deg] = FgAbGroup.from_json(val)
        return cls(
            groups,
            eventually_zero=data.get("eventually_zero", True),
            max_support=data.get("max_support"),
        )

    def __str__(self):
        if not self.groups:
            return "all degrees: 0"
        return ", ".join(f"H_{d} = {self.groups[d]}" for d in sorted(self.groups))


@dataclass(frozen=True)
class GradedDims:
    """Nonnegative counts per degree; the rational shadow of a graded group."""

    dims: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for deg, n in self.dims.items():
            if not isinstance(deg, int) or deg < 0:
                raise ValueError(f"degree must be a nonnegative integer, got {deg!r}")
            if not isinstance(n, int) or n < 0:
                raise ValueError(f"dimension must be a nonnegative count, got {n!r}")
            if n:
                cleaned[deg] = n
        object.__setattr__(self, "dims", cleaned)

    def dim(self, degree: int) -> int:
        return self.dims.get(degree, 0)

    def restrict(self, predicate) -> "GradedDims":
        return GradedDims({d: n for d, n in self.dims.items() if predicate(d)})

    def odd_part(self, min_degree: int = 1) -> "GradedDims":
        return self.restrict(lambda d: d % 2 == 1 and d >= min_degree)

    def even_part(self) -> "GradedDims":
        return self.restrict(lambda d: d % 2 == 0 and d >= 2)

    def as_list(self, upto: int) -> list[int]:
        return [self.dim(d) for d in range(upto + 1)]

    def to_json(self) -> dict:
        return {str(d): self.dims[d] for d in sorted(self.dims)}


def rationalize(H: GradedAbGroup) -> GradedDims:
    """Free rank per degree; torsion dies over Q."""
    return GradedDims({d: g.free_rank for d, g in H.groups.items()})


@dataclass(frozen=True)
class TruncatedSeries:
    """Integer power series known exactly through degree `truncation`."""

    truncation: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.truncation < 0:
            raise ValueError("truncation degree must be nonnegative")
        if len(self.coeffs) != self.truncation + 1:
            raise ValueError("need exactly truncation + 1 coefficients")

    @classmethod
    def from_coeffs(cls, coeffs, truncation: int) -> "TruncatedSeries":
        coeffs = list(coeffs)[: truncation + 1]
        coeffs += [0] * (truncation + 1 - len(coeffs))
        return cls(truncation, tuple(int(c) for c in coeffs))

    @classmethod
    def one(cls, truncation: int) -> "TruncatedSeries":
        return cls.from_coeffs([1], truncation)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if self.truncation != other.truncation:
            raise ValueError("series truncations differ")
        n = self.truncation
        out = [0] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return TruncatedSeries(n, tuple(out))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if self.truncation != other.truncation:
            raise ValueError("series truncations differ")
        return TruncatedSeries(
            self.truncation, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def coefficient(self, degree: int) -> int:
        if degree > self.truncation:
            raise IndexError(f"degree {degree} beyond truncation {self.truncation}")
        return self.coeffs[degree]

    def to_json(self) -> dict:
        return {"truncation": self.truncation, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, data: dict) -> "TruncatedSeries":
        return cls(int(data["truncation"]), tuple(int(c) for c in data["coeffs"]))

    def __str__(self):
        return "(" + ", ".join(map(str, self.coeffs)) + ", ...)"


def ext_sym_dims(odd: GradedDims, even: GradedDims, truncation: int) -> GradedDims:
    """Graded dimensions of the free graded-commutative algebra on a graded
    vector space with `odd` generators in odd degrees and `even` generators
    in even degrees, through the given degree.

    Each odd generator contributes a factor (1 + t^j), each even generator a
    geometric factor (1 - t^j)^(-1); generators are folded in one at a time
    by convolution.
    """
    for d in odd.dims:
        if d % 2 == 0 or d < 1:
            raise ValueError(f"odd part has a generator in even degree {d}")
    for d in even.dims:
        if d % 2 == 1 or d < 2:
            raise ValueError(f"even part has a generator in odd degree {d}")
    coeffs = [1] + [0] * truncation
    for j in sorted(odd.dims):
        for _ in range(odd.dims[j]):
            # multiply by 1 + t^j, in place from the top down
            for n in range(truncation, j - 1, -1):
                coeffs[n] += coeffs[n - j]
    for j in sorted(even.dims):
        for _ in range(even.dims[j]):
            # multiply by the geometric series in t^j, bottom up
            for n in range(j, truncation + 1):
                coeffs[n] += coeffs[n - j]
    return GradedDims({d: c for d, c in enumerate(coeffs)})


def _binomial_factor(j: int, d: int, truncation: int) -> TruncatedSeries:
    """(1 + t^j)^d for odd j; (1 - t^j)^(-d) for even j, exactly."""
    coeffs = [0] * (truncation + 1)
    if j % 2 == 1:
        for m in range(0, min(d, truncation // j) + 1):
            coeffs[j * m] = comb(d, m)
    else:
        for m in range(0, truncation // j + 1):
            coeffs[j * m] = comb(d - 1 + m, m)
    return TruncatedSeries(truncation, tuple(coeffs))


def full_group_series(d: GradedDims, truncation: int) -> TruncatedSeries:
    """Poincare series of the rational homology of the topological full
    group, from the groupoid's rational dimensions d_1, d_2, ...

    Expands prod_{j>=1} (1 + (-1)^(j+1) t^j)^((-1)^(j+1) d_j); factors with
    j > truncation cannot touch the retained coefficients and are omitted.
    """
    if d.dim(0):
        raise ValueError("dimension vector must be supported in degrees >= 1")
    series = TruncatedSeries.one(truncation)
    for j in sorted(d.dims):
        if j > truncation:
            break
        series = series * _binomial_factor(j, d.dims[j], truncation)
    return series


def derived_series(d: GradedDims, truncation: int) -> TruncatedSeries:
    """Poincare series for the commutator (derived) subgroup: the same
    product but starting at j = 2, so d_1 never enters.
    """
    return full_group_series(d.restrict(lambda deg: deg >= 2), truncation)
