"""Validated in-memory descriptions of the groupoid classes we compute with.

Specs are parsed from declarative JSON (or TOML) documents; every type
checks its own invariants on construction and reports violations with the
offending field path.  Finite groupoids are fully machine-checked against
the groupoid axioms (associativity, unit and inverse laws), so anything
that constructs successfully is safe to feed to the chain-complex engine.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .abelian import IntMatrix
from .errors import SpecError
from .graded import GradedAbGroup


class GroupoidSpec:
    """Marker base class for the spec sum type."""

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class HypothesisCheck:
    name: str
    holds: bool
    detail: str

    def to_json(self) -> dict:
        return {"name": self.name, "holds": self.holds, "detail": self.detail}


# ---------------------------------------------------------------------------
# matrix-presented classes
# ---------------------------------------------------------------------------

def _parse_matrix(data, path: str, *, square=False, nonnegative=False) -> IntMatrix:
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise SpecError(path, "expected a nonempty list of rows")
    width = len(data[0])
    for i, row in enumerate(data):
        if len(row) != width:
            raise SpecError(f"{path}[{i}]", f"ragged row (expected {width} entries)")
        for j, e in enumerate(row):
            if not isinstance(e, int) or isinstance(e, bool):
                raise SpecError(f"{path}[{i}][{j}]", f"entry {e!r} is not an integer")
            if nonnegative and e < 0:
                raise SpecError(f"{path}[{i}][{j}]", f"negative entry {e}")
    if square and len(data) != width:
        raise SpecError(path, f"matrix must be square, got {len(data)}x{width}")
    return IntMatrix.from_rows(data)


def _is_irreducible(A: IntMatrix) -> bool:
    # every vertex reaches every vertex through at least one step
    n = A.rows
    succ = [[j for j in range(n) if A.get(j, i) > 0] for i in range(n)]
    for start in range(n):
        seen = set()
        frontier = list(succ[start])
        while frontier:
            v = frontier.pop()
            if v in seen:
                continue
            seen.add(v)
            frontier.extend(succ[v])
        if len(seen) != n:
            return False
    return True


def _is_permutation(A: IntMatrix) -> bool:
    n = A.rows
    if any(e not in (0, 1) for e in A.entries):
        return False
    return all(sum(A.row(i)) == 1 for i in range(n)) and all(
        sum(A.column(j)) == 1 for j in range(n)
    )


@dataclass(frozen=True)
class SftSpec(GroupoidSpec):
    """Shift of finite type; A(j, i) counts the edges from vertex i to j."""

    A: IntMatrix
    irreducible: bool = field(init=False)
    is_permutation: bool = field(init=False)

    def __post_init__(self):
        if self.A.rows != self.A.cols:
            raise SpecError("sft.matrix", "adjacency matrix must be square")
        if any(e < 0 for e in self.A.entries):
            raise SpecError("sft.matrix", "adjacency entries must be nonnegative")
        object.__setattr__(self, "irreducible", _is_irreducible(self.A))
        object.__setattr__(self, "is_permutation", _is_permutation(self.A))

    @property
    def vertices(self) -> int:
        return self.A.rows

    def edges(self) -> list[tuple[int, int]]:
        """Deterministic edge list as (source, target) pairs."""
        out = []
        for src in range(self.vertices):
            for tgt in range(self.vertices):
                out.extend([(src, tgt)] * self.A.get(tgt, src))
        return out

    def hypothesis_report(self) -> list[HypothesisCheck]:
        return [
            HypothesisCheck(
                "irreducible",
                self.irreducible,
                "every vertex reaches every vertex" if self.irreducible
                else "some vertex pair is not connected by any path",
            ),
            HypothesisCheck(
                "not_permutation",
                not self.is_permutation,
                "adjacency matrix is not a permutation" if not self.is_permutation
                else "adjacency matrix is a permutation matrix",
            ),
        ]

    def to_json(self) -> dict:
        return {"type": "sft", "matrix": self.A.to_lists()}


@dataclass(frozen=True)
class KGraphSpec(GroupoidSpec):
    """One-vertex higher-rank graph with k edge directions."""

    edge_counts: tuple[int, ...]

    def __post_init__(self):
        if not self.edge_counts:
            raise SpecError("kgraph.edge_counts", "need at least one direction")
        for i, c in enumerate(self.edge_counts):
            if not isinstance(c, int) or c < 2:
                raise SpecError(
                    f"kgraph.edge_counts[{i}]",
                    f"edge count must be an integer >= 2, got {c!r}",
                )

    @property
    def k(self) -> int:
        return len(self.edge_counts)

    @property
    def reduced_counts(self) -> tuple[int, ...]:
        """One less than each edge count; all entries are >= 1."""
        return tuple(c - 1 for c in self.edge_counts)

    def hypothesis_report(self) -> list[HypothesisCheck]:
        return [
            HypothesisCheck(
                "reduced_counts_positive", True,
                f"reduced edge counts {self.reduced_counts} are all >= 1",
            )
        ]

    def to_json(self) -> dict:
        return {"type": "kgraph", "edge_counts": list(self.edge_counts)}


@dataclass(frozen=True)
class KepSpec(GroupoidSpec):
    """Self-similar-action groupoid data: matrix pair with matching zeros."""

    A: IntMatrix
    B: IntMatrix

    def __post_init__(self):
        if self.A.rows != self.A.cols:
            raise SpecError("kep.A", "must be square")
        if (self.B.rows, self.B.cols) != (self.A.rows, self.A.cols):
            raise SpecError("kep.B", "must have the same shape as A")
        if any(e < 0 for e in self.A.entries):
            raise SpecError("kep.A", "entries must be nonnegative")
        for i in range(self.A.rows):
            for j in range(self.A.cols):
                if (self.A.get(i, j) == 0) != (self.B.get(i, j) == 0):
                    raise SpecError(
                        f"kep.B[{i}][{j}]",
                        "zero pattern mismatch: B entries vanish exactly where A's do",
                    )

    @property
    def size(self) -> int:
        return self.A.rows

    def hypothesis_report(self) -> list[HypothesisCheck]:
        irr = _is_irreducible(self.A)
        perm = _is_permutation(self.A)
        return [
            HypothesisCheck("zero_pattern", True, "zero patterns of A and B agree"),
            HypothesisCheck(
                "irreducible", irr,
                "A is irreducible" if irr else "A is reducible",
            ),
            HypothesisCheck(
                "not_permutation", not perm,
                "A is not a permutation" if not perm else "A is a permutation matrix",
            ),
        ]

    def to_json(self) -> dict:
        return {"type": "kep", "A": self.A.to_lists(), "B": self.B.to_lists()}


@dataclass(frozen=True)
class BratteliSpec(GroupoidSpec):
    """Finite prefix of a Bratteli diagram, optionally with a stationary tail."""

    incidence: tuple[IntMatrix, ...]
    stationary: bool = False

    def __post_init__(self):
        if not self.incidence:
            raise SpecError("bratteli.incidence", "need at least one incidence matrix")
        for m in self.incidence:
            if any(e < 0 for e in m.entries):
                raise SpecError("bratteli.incidence", "entries must be nonnegative")
        for l, (a, b) in enumerate(zip(self.incidence, self.incidence[1:])):
            if b.cols != a.rows:
                raise SpecError(
                    f"bratteli.incidence[{l + 1}]",
                    f"shape {b.rows}x{b.cols} does not compose with level {l} "
                    f"({a.rows}x{a.cols})",
                )
        if self.stationary:
            last = self.incidence[-1]
            if last.rows != last.cols:
                raise SpecError(
                    "bratteli.incidence", "stationary tail needs a square matrix"
                )

    def levels(self) -> list[int]:
        return [self.incidence[0].cols] + [m.rows for m in self.incidence]

    def hypothesis_report(self) -> list[HypothesisCheck]:
        return []

    def to_json(self) -> dict:
        return {
            "type": "bratteli",
            "incidence": [m.to_lists() for m in self.incidence],
            "stationary": self.stationary,
        }


@dataclass(frozen=True)
class ProductSpec(GroupoidSpec):
    factors: tuple[GroupoidSpec, ...]

    def __post_init__(self):
        if not self.factors:
            raise SpecError("product.factors", "need at least one factor")

    def hypothesis_report(self) -> list[HypothesisCheck]:
        out = []
        for i, f in enumerate(self.factors):
            for check in f.hypothesis_report():
                out.append(
                    HypothesisCheck(f"factor[{i}].{check.name}", check.holds, check.detail)
                )
        return out

    def to_json(self) -> dict:
        return {"type": "product", "factors": [f.to_json() for f in self.factors]}


@dataclass(frozen=True)
class DirectHomologySpec(GroupoidSpec):
    """Admits homology computed elsewhere (tilings, affine groupoids, ...)."""

    homology: GradedAbGroup

    def hypothesis_report(self) -> list[HypothesisCheck]:
        return []

    def to_json(self) -> dict:
        return {"type": "graded", "homology": self.homology.to_json()}


# ---------------------------------------------------------------------------
# finite groupoids
# ---------------------------------------------------------------------------

class FiniteGroupoid(GroupoidSpec):
    """A finite groupoid with every axiom machine-checked on construction.

    Arrows are integers 0..size-1; the first `n_units` of them are the unit
    arrows.  Composition g1*g2 is defined exactly when s(g1) = r(g2), and
    source/target of an arrow are given as unit arrow ids.
    """

    def __init__(self, n_units: int, source, target, inverse, compose: dict):
        self.n_units = n_units
        self.source = tuple(source)
        self.target = tuple(target)
        self.inverse = tuple(inverse)
        self.compose_table = dict(compose)
        self._validate()

    @property
    def size(self) -> int:
        return len(self.source)

    @property
    def units(self) -> range:
        return range(self.n_units)

    def arrows(self) -> range:
        return range(self.size)

    def compose(self, g1: int, g2: int) -> int:
        return self.compose_table[(g1, g2)]

    def composable(self, g1: int, g2: int) -> bool:
        return self.source[g1] == self.target[g2]

    def _validate(self):
        n, m = self.n_units, self.size
        if not 0 < n <= m:
            raise SpecError("finite.units", "need at least one unit")
        for name, seq in (("src", self.source), ("tgt", self.target)):
            if len(seq) != m or any(not (0 <= u < n) for u in seq):
                raise SpecError(f"finite.{name}", "must map every arrow to a unit id")
        if len(self.inverse) != m or any(not (0 <= g < m) for g in self.inverse):
            raise SpecError("finite.inv", "must map every arrow to an arrow")
        for u in range(n):
            if self.source[u] != u or self.target[u] != u:
                raise SpecError(
                    f"finite.arrows[{u}]", "unit arrow must have itself as source and target"
                )
        # composition defined exactly on matching source/range
        for (g1, g2), g12 in self.compose_table.items():
            if not self.composable(g1, g2):
                raise SpecError(
                    "finite.compose", f"pair ({g1}, {g2}) is not composable: "
                    f"s({g1}) = {self.source[g1]} != r({g2}) = {self.target[g2]}"
                )
            if not (0 <= g12 < m):
                raise SpecError("finite.compose", f"product {g12} is not an arrow")
            if self.source[g12] != self.source[g2] or self.target[g12] != self.target[g1]:
                raise SpecError(
                    "finite.compose",
                    f"product of ({g1}, {g2}) has wrong source or target",
                )
        for g1 in range(m):
            for g2 in range(m):
                if self.composable(g1, g2) and (g1, g2) not in self.compose_table:
                    raise SpecError(
                        "finite.compose", f"missing product for composable pair ({g1}, {g2})"
                    )
        # unit laws
        for g in range(m):
            if self.compose(self.target[g], g) != g or self.compose(g, self.source[g]) != g:
                raise SpecError("finite.compose", f"unit law fails at arrow {g}")
        # inverse laws
        for g in range(m):
            h = self.inverse[g]
            if self.inverse[h] != g:
                raise SpecError("finite.inv", f"inverse is not an involution at {g}")
            if self.source[h] != self.target[g] or self.target[h] != self.source[g]:
                raise SpecError("finite.inv", f"inverse of {g} has wrong endpoints")
            if self.compose(g, h) != self.target[g] or self.compose(h, g) != self.source[g]:
                raise SpecError("finite.inv", f"g * g^-1 = r(g) fails at {g}")
        # associativity over all composable triples
        for g1 in range(m):
            for g2 in range(m):
                if not self.composable(g1, g2):
                    continue
                g12 = self.compose(g1, g2)
                for g3 in range(m):
                    if not self.composable(g2, g3):
                        continue
                    if self.compose(g12, g3) != self.compose(g1, self.compose(g2, g3)):
                        raise SpecError(
                            "finite.compose",
                            f"associativity fails on triple ({g1}, {g2}, {g3})",
                        )

    def hypothesis_report(self) -> list[HypothesisCheck]:
        return []

    def __eq__(self, other):
        return (
            isinstance(other, FiniteGroupoid)
            and self.n_units == other.n_units
            and self.source == other.source
            and self.target == other.target
            and self.inverse == other.inverse
            and self.compose_table == other.compose_table
        )

    def __hash__(self):
        return hash((self.n_units, self.source, self.target, self.inverse))

    def to_json(self) -> dict:
        non_units = [
            {"id": g, "src": self.source[g], "tgt": self.target[g], "inv": self.inverse[g]}
            for g in range(self.n_units, self.size)
        ]
        products = [
            [g1, g2, g12]
            for (g1, g2), g12 in sorted(self.compose_table.items())
            if g1 >= self.n_units and g2 >= self.n_units
        ]
        return {
            "type": "finite",
            "units": self.n_units,
            "arrows": non_units,
            "compose": products,
        }


def pair_groupoid(n: int) -> FiniteGroupoid:
    """Full equivalence relation on n points; arrow (i, j) runs from j to i."""
    if n < 1:
        raise SpecError("pair_groupoid", "need at least one point")
    pairs = [(i, i) for i in range(n)] + sorted(
        (i, j) for i in range(n) for j in range(n) if i != j
    )
    index = {p: k for k, p in enumerate(pairs)}
    source = [j for (_, j) in pairs]
    target = [i for (i, _) in pairs]
    inverse = [index[(j, i)] for (i, j) in pairs]
    compose = {}
    for (i, j) in pairs:
        for (j2, k) in pairs:
            if j == j2:
                compose[(index[(i, j)], index[(j2, k)])] = index[(i, k)]
    return FiniteGroupoid(n, source, target, inverse, compose)


def group_as_groupoid(table: list[list[int]]) -> FiniteGroupoid:
    """One-object groupoid from a group multiplication table.

    The table must be a group with the identity listed first; anything
    else is rejected.
    """
    m = len(table)
    if m == 0 or any(len(r) != m for r in table):
        raise SpecError("group.table", "expected a square multiplication table")
    if any(not (0 <= e < m) for r in table for e in r):
        raise SpecError("group.table", "entries must index elements")
    if any(table[0][g] != g or table[g][0] != g for g in range(m)):
        raise SpecError("group.table", "element 0 must be the identity")
    inverse = []
    for g in range(m):
        invs = [h for h in range(m) if table[g][h] == 0 and table[h][g] == 0]
        if len(invs) != 1:
            raise SpecError("group.table", f"element {g} lacks a unique inverse")
        inverse.append(invs[0])
    compose = {(g, h): table[g][h] for g in range(m) for h in range(m)}
    return FiniteGroupoid(1, [0] * m, [0] * m, inverse, compose)


def cyclic_group_groupoid(order: int) -> FiniteGroupoid:
    """Z/order as a one-object groupoid."""
    return group_as_groupoid(
        [[(a + b) % order for b in range(order)] for a in range(order)]
    )


def finite_product(G: FiniteGroupoid, H: FiniteGroupoid) -> FiniteGroupoid:
    """Product groupoid, arrows relabelled with units first."""
    pairs = [(u, v) for u in G.units for v in H.units]
    pairs += sorted(
        (g, h)
        for g in G.arrows()
        for h in H.arrows()
        if g >= G.n_units or h >= H.n_units
    )
    index = {p: k for k, p in enumerate(pairs)}
    unit_index = {
        (u, v): k for k, (u, v) in enumerate(pairs[: G.n_units * H.n_units])
    }
    source = [unit_index[(G.source[g], H.source[h])] for (g, h) in pairs]
    target = [unit_index[(G.target[g], H.target[h])] for (g, h) in pairs]
    inverse = [index[(G.inverse[g], H.inverse[h])] for (g, h) in pairs]
    compose = {}
    for (g1, h1) in pairs:
        for (g2, h2) in pairs:
            if G.composable(g1, g2) and H.composable(h1, h2):
                compose[(index[(g1, h1)], index[(g2, h2)])] = index[
                    (G.compose(g1, g2), H.compose(h1, h2))
                ]
    return FiniteGroupoid(G.n_units * H.n_units, source, target, inverse, compose)


def disjoint_union(G: FiniteGroupoid, H: FiniteGroupoid) -> FiniteGroupoid:
    """Disjoint union, G's arrows first and units re-front-loaded."""
    # order: G units, H units, G non-units, H non-units
    def relabel(side, g):
        if side == 0:
            return g if g < G.n_units else g + H.n_units
        return g + G.n_units if g < H.n_units else g + G.size

    tagged = [(0, g) for g in G.arrows()] + [(1, h) for h in H.arrows()]
    n = G.size + H.size
    source = [0] * n
    target = [0] * n
    inverse = [0] * n
    for side, g in tagged:
        gpd = G if side == 0 else H
        k = relabel(side, g)
        source[k] = relabel(side, gpd.source[g])
        target[k] = relabel(side, gpd.target[g])
        inverse[k] = relabel(side, gpd.inverse[g])
    compose = {}
    for side, gpd in ((0, G), (1, H)):
        for (g1, g2), g12 in gpd.compose_table.items():
            compose[(relabel(side, g1), relabel(side, g2))] = relabel(side, g12)
    return FiniteGroupoid(G.n_units + H.n_units, source, target, inverse, compose)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def check_hypotheses(spec: GroupoidSpec) -> list[HypothesisCheck]:
    """Which of the formula hypotheses hold for this spec (reporting only)."""
    return spec.hypothesis_report()


def parse_spec(document) -> GroupoidSpec:
    """Validate a parsed JSON/TOML document into a GroupoidSpec."""
    return _parse_spec(document, path="")


def _parse_spec(data, path: str) -> GroupoidSpec:
    def at(field):
        return f"{path}.{field}" if path else field

    if not isinstance(data, dict):
        raise SpecError(path, f"expected an object, got {type(data).__name__}")
    kind = data.get("type")
    if kind == "sft":
        _require_keys(data, {"type", "matrix"}, path)
        return SftSpec(_parse_matrix(data.get("matrix"), at("matrix"),
                                     square=True, nonnegative=True))
    if kind == "kgraph":
        _require_keys(data, {"type", "edge_counts"}, path)
        counts = data.get("edge_counts")
        if not isinstance(counts, list):
            raise SpecError(at("edge_counts"), "expected a list of counts")
        return KGraphSpec(tuple(counts))
    if kind == "kep":
        _require_keys(data, {"type", "A", "B"}, path)
        A = _parse_matrix(data.get("A"), at("A"), square=True, nonnegative=True)
        B = _parse_matrix(data.get("B"), at("B"), square=True)
        return KepSpec(A, B)
    if kind == "bratteli":
        _require_keys(data, {"type", "incidence", "stationary"}, path)
        inc = data.get("incidence")
        if not isinstance(inc, list) or not inc:
            raise SpecError(at("incidence"), "expected a nonempty list of matrices")
        mats = tuple(
            _parse_matrix(m, f"{at('incidence')}[{l}]", nonnegative=True)
            for l, m in enumerate(inc)
        )
        return BratteliSpec(mats, stationary=bool(data.get("stationary", False)))
    if kind == "product":
        _require_keys(data, {"type", "factors"}, path)
        factors = data.get("factors")
        if not isinstance(factors, list):
            raise SpecError(at("factors"), "expected a list of specs")
        return ProductSpec(
            tuple(_parse_spec(f, f"{at('factors')}[{i}]") for i, f in enumerate(factors))
        )
    if kind == "graded":
        _require_keys(data, {"type", "homology"}, path)
        try:
            hom = GradedAbGroup.from_json(data.get("homology"))
        except ValueError as e:
            raise SpecError(at("homology"), str(e)) from None
        return DirectHomologySpec(hom)
    if kind == "finite":
        return _parse_finite(data, path)
    raise SpecError(at("type"), f"unknown spec type {kind!r}")


def _require_keys(data: dict, allowed: set, path: str):
    extra = set(data) - allowed
    if extra:
        raise SpecError(path or "spec", f"unexpected fields {sorted(extra)}")


def _parse_finite(data: dict, path: str) -> FiniteGroupoid:
    def at(field):
        return f"{path}.{field}" if path else field

    _require_keys(data, {"type", "units", "arrows", "compose"}, path)
    n = data.get("units")
    if not isinstance(n, int) or n < 1:
        raise SpecError(at("units"), "expected a positive unit count")
    arrows = data.get("arrows", [])
    if not isinstance(arrows, list):
        raise SpecError(at("arrows"), "expected a list of arrow records")
    m = n + len(arrows)
    source = list(range(n)) + [0] * len(arrows)
    target = list(range(n)) + [0] * len(arrows)
    inverse = list(range(n)) + [0] * len(arrows)
    seen_ids = set(range(n))
    for i, rec in enumerate(arrows):
        if not isinstance(rec, dict) or set(rec) != {"id", "src", "tgt", "inv"}:
            raise SpecError(at(f"arrows[{i}]"), "expected fields id, src, tgt, inv")
        gid = rec["id"]
        if not isinstance(gid, int) or not (n <= gid < m):
            raise SpecError(
                at(f"arrows[{i}].id"),
                f"non-unit arrow ids must run from {n} to {m - 1}",
            )
        if gid in seen_ids:
            raise SpecError(at(f"arrows[{i}].id"), f"duplicate arrow id {gid}")
        seen_ids.add(gid)
        source[gid] = rec["src"]
        target[gid] = rec["tgt"]
        inverse[gid] = rec["inv"]
    compose = {}
    table = data.get("compose", [])
    if not isinstance(table, list):
        raise SpecError(at("compose"), "expected a list of [g1, g2, g12] triples")
    for i, triple in enumerate(table):
        if not (isinstance(triple, list) and len(triple) == 3
                and all(isinstance(x, int) for x in triple)):
            raise SpecError(at(f"compose[{i}]"), "expected a triple of arrow ids")
        g1, g2, g12 = triple
        if (g1, g2) in compose:
            raise SpecError(at(f"compose[{i}]"), f"duplicate product for ({g1}, {g2})")
        compose[(g1, g2)] = g12
    # products with units are forced by the unit laws; fill them in
    for g in range(m):
        if 0 <= g < m:
            if not (0 <= source[g] < n and 0 <= target[g] < n):
                raise SpecError(at("arrows"), f"arrow {g} has non-unit endpoints")
            compose.setdefault((target[g], g), g)
            compose.setdefault((g, source[g]), g)
    try:
        return FiniteGroupoid(n, source, target, inverse, compose)
    except SpecError as e:
        raise SpecError(path or "finite", str(e)) from None


def parse_spec_text(text: str, fmt: str = "json") -> GroupoidSpec:
    if fmt == "json":
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise SpecError("", f"invalid JSON at line {e.lineno}: {e.msg}") from None
    elif fmt == "toml":
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        try:
            document = tomllib.loads(text)
        except tomllib.TOMLDecodeError as e:
            raise SpecError("", f"invalid TOML: {e}") from None
    else:
        raise SpecError("", f"unknown input format {fmt!r}")
    return parse_spec(document)


def parse_spec_file(path: str) -> GroupoidSpec:
    fmt = "toml" if str(path).endswith(".toml") else "json"
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise SpecError(str(path), f"cannot read file: {e.strerror}") from None
    return parse_spec_text(text, fmt)
