"""Exact group arithmetic for full-group elements of shift groupoids.

Elements are prefix-exchange tables: finite lists of admissible word pairs
(u -> v), each acting on the path space by the suffix substitution
u x -> v x, together with a copy index per side so that elements of the
amplified group (finitely many copies of the path space) are covered by
the same machinery.  Copy index 1 everywhere is the plain full group.

Word convention, shared by every operation and the validator: a word is a
left-to-right sequence of edges x_1 x_2 ... x_n in which the target of
x_{k+1} equals the source of x_k.  The terminal vertex of a word is the
source of its last edge, and a word is extended by appending edges whose
target equals the current terminal vertex.  For a single-vertex graph the
empty word's terminal vertex is that vertex; on larger graphs the empty
word only ever pairs with the empty word.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ComputationRefused, HypothesisNotMet, SpecError
from .models import SftSpec, parse_spec

DEFAULT_WORD_CAP = 16

Word = tuple[int, ...]


class ShiftGraph:
    """Edge-indexed view of an SFT spec, gated on the group-theory hypotheses.

    The full-group statements need the shift to be irreducible and not a
    permutation; unlike the homology formulas, which merely warn, this is a
    hard precondition here.
    """

    def __init__(self, spec: SftSpec):
        if not spec.irreducible:
            raise HypothesisNotMet(
                "full-group arithmetic needs an irreducible adjacency matrix"
            )
        if spec.is_permutation:
            raise HypothesisNotMet(
                "full-group arithmetic needs a non-permutation adjacency matrix"
            )
        self.spec = spec
        self.edges = tuple(spec.edges())  # (source, target) per edge id
        self._by_target: dict[int | None, tuple[int, ...]] = {}
        for vertex in range(spec.vertices):
            self._by_target[vertex] = tuple(
                e for e, (_, tgt) in enumerate(self.edges) if tgt == vertex
            )
        self._by_target[None] = tuple(range(len(self.edges)))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def terminal(self, word: Word) -> int | None:
        if word:
            return self.edges[word[-1]][0]
        return 0 if self.spec.vertices == 1 else None

    def extensions(self, vertex: int | None) -> tuple[int, ...]:
        return self._by_target[vertex]

    def admissible(self, word: Word) -> bool:
        if any(not (0 <= e < self.n_edges) for e in word):
            return False
        return all(
            self.edges[nxt][1] == self.edges[cur][0]
            for cur, nxt in zip(word, word[1:])
        )


@dataclass(frozen=True, order=True)
class Pair:
    """One clause (copy_u, u) -> (copy_v, v) of a prefix-exchange table."""

    cu: int
    u: Word
    cv: int
    v: Word


@dataclass(frozen=True)
class Diagnostic:
    kind: str  # overlap | gap | vertex_mismatch | inadmissible | support_mismatch
    side: str  # domain | range | pair
    copy: int
    witness: str

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "side": self.side,
            "copy": self.copy,
            "witness": self.witness,
        }


@dataclass(frozen=True)
class PrefixTable:
    """An element of the (amplified) full group as a sorted pair list.

    Construction checks only well-formedness; run :func:`validate` for the
    semantic checks (admissibility, vertex compatibility, and the partition
    property on both sides).
    """

    graph: SftSpec
    pairs: tuple[Pair, ...]

    def __post_init__(self):
        n_edges = sum(self.graph.A.entries)
        for p in self.pairs:
            if p.cu < 1 or p.cv < 1:
                raise SpecError("pairs", f"copy indices start at 1, got {p}")
            for w in (p.u, p.v):
                if any(not (0 <= e < n_edges) for e in w):
                    raise SpecError("pairs", f"edge id out of range in {w}")
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted({p.cu for p in self.pairs}))

    def word_length(self) -> int:
        return max((max(len(p.u), len(p.v)) for p in self.pairs), default=0)

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "pairs": [
                {"cu": p.cu, "u": word_to_str(p.u), "cv": p.cv, "v": word_to_str(p.v)}
                for p in self.pairs
            ],
        }

    def __str__(self):
        body = ", ".join(
            f"({p.cu},{word_to_str(p.u) or 'eps'}) -> ({p.cv},{word_to_str(p.v) or 'eps'})"
            for p in self.pairs
        )
        return "{" + body + "}"


def word_to_str(word: Word) -> str:
    return " ".join(f"e{e}" for e in word)


def parse_word(text) -> Word:
    """Accepts 'e0 e1', '0 1', a compact digit string like '01', or a list."""
    if isinstance(text, (list, tuple)):
        return tuple(int(e) for e in text)
    if not isinstance(text, str):
        raise SpecError("word", f"expected a word, got {text!r}")
    text = text.strip()
    if not text:
        return ()
    if " " in text or text.startswith("e"):
        out = []
        for token in text.split():
            token = token.removeprefix("e")
            if not token.isdigit():
                raise SpecError("word", f"bad edge token {token!r}")
            out.append(int(token))
        return tuple(out)
    if text.isdigit():
        return tuple(int(c) for c in text)
    raise SpecError("word", f"cannot parse word {text!r}")


def parse_element(document: dict) -> PrefixTable:
    if not isinstance(document, dict) or set(document) != {"graph", "pairs"}:
        raise SpecError("element", "expected fields graph, pairs")
    graph = parse_spec(document["graph"])
    if not isinstance(graph, SftSpec):
        raise SpecError("element.graph", "elements live over sft graphs")
    pairs = []
    for i, rec in enumerate(document["pairs"]):
        if not isinstance(rec, dict) or set(rec) != {"cu", "u", "cv", "v"}:
            raise SpecError(f"element.pairs[{i}]", "expected fields cu, u, cv, v")
        pairs.append(
            Pair(rec["cu"], parse_word(rec["u"]), rec["cv"], parse_word(rec["v"]))
        )
    return PrefixTable(graph, tuple(pairs))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate(table: PrefixTable) -> list[Diagnostic]:
    """Full semantic check; an empty list means the table is an element."""
    g = ShiftGraph(table.graph)
    issues: list[Diagnostic] = []

    for p in table.pairs:
        for side, word in (("domain", p.u), ("range", p.v)):
            if not g.admissible(word):
                issues.append(
                    Diagnostic("inadmissible", side, p.cu if side == "domain" else p.cv,
                               word_to_str(word))
                )
        if g.terminal(p.u) != g.terminal(p.v):
            issues.append(
                Diagnostic(
                    "vertex_mismatch", "pair", p.cu,
                    f"{word_to_str(p.u) or 'eps'} -> {word_to_str(p.v) or 'eps'}",
                )
            )
    if issues:
        return issues

    domain_copies = {p.cu for p in table.pairs}
    range_copies = {p.cv for p in table.pairs}
    if domain_copies != range_copies:
        issues.append(
            Diagnostic(
                "support_mismatch", "pair", 0,
                f"domain copies {sorted(domain_copies)} != range copies "
                f"{sorted(range_copies)}",
            )
        )
    for copy in sorted(domain_copies):
        issues += _partition_diagnostics(
            g, [p.u for p in table.pairs if p.cu == copy], "domain", copy
        )
    for copy in sorted(range_copies):
        issues += _partition_diagnostics(
            g, [p.v for p in table.pairs if p.cv == copy], "range", copy
        )
    return issues


def _partition_diagnostics(g: ShiftGraph, words, side, copy) -> list[Diagnostic]:
    """Check that the cylinders of the words tile the whole path space."""
    issues = []
    root: dict = {}
    END = "end"
    for w in sorted(words):
        node = root
        clean = True
        for e in w:
            if END in node:
                issues.append(Diagnostic("overlap", side, copy, word_to_str(w)))
                clean = False
                break
            node = node.setdefault(e, {})
        if not clean:
            continue
        if END in node or node:
            issues.append(Diagnostic("overlap", side, copy, word_to_str(w)))
        else:
            node[END] = True

    def walk(node, prefix):
        if END in node:
            return
        for e in g.extensions(g.terminal(prefix)):
            child = node.get(e)
            if child is None:
                issues.append(Diagnostic("gap", side, copy, word_to_str(prefix + (e,))))
            else:
                walk(child, prefix + (e,))

    if issues:
        return issues
    walk(root, ())
    return issues


def _require_valid(table: PrefixTable):
    issues = validate(table)
    if issues:
        raise SpecError(
            "element",
            "; ".join(f"{d.kind} on {d.side} ({d.witness})" for d in issues[:3]),
        )


def _same_setting(s: PrefixTable, t: PrefixTable):
    if s.graph != t.graph:
        raise SpecError("element", "elements live over different graphs")
    if s.support != t.support:
        raise SpecError(
            "element",
            f"support mismatch: {s.support} vs {t.support}; corner-embed first",
        )


# ---------------------------------------------------------------------------
# the group operations
# ---------------------------------------------------------------------------

def identity_table(graph: SftSpec, support=(1,)) -> PrefixTable:
    return PrefixTable(graph, tuple(Pair(c, (), c, ()) for c in support))


def compose(s: PrefixTable, t: PrefixTable,
            word_cap: int = DEFAULT_WORD_CAP) -> PrefixTable:
    """The element acting as t first, then s.

    Refines t's range cylinders against s's domain cylinders; a pair of t
    whose output lands inside a domain cylinder of s contributes one clause,
    and a domain cylinder of s that splits an output of t contributes one
    clause per refinement.
    """
    _same_setting(s, t)
    _require_valid(s)
    _require_valid(t)
    out = []
    for p in t.pairs:
        for q in s.pairs:
            if p.cv != q.cu:
                continue
            if p.v[: len(q.u)] == q.u:
                tail = p.v[len(q.u):]
                out.append(Pair(p.cu, p.u, q.cv, q.v + tail))
            elif q.u[: len(p.v)] == p.v and len(q.u) > len(p.v):
                tail = q.u[len(p.v):]
                out.append(Pair(p.cu, p.u + tail, q.cv, q.v))
    result = PrefixTable(s.graph, tuple(out))
    if result.word_length() > word_cap:
        raise ComputationRefused(
            f"composite words exceed the depth cap ({word_cap}); canonicalize "
            "inputs or raise the cap"
        )
    return result


def inverse(t: PrefixTable) -> PrefixTable:
    return PrefixTable(t.graph, tuple(Pair(p.cv, p.v, p.cu, p.u) for p in t.pairs))


def canonicalize(t: PrefixTable) -> PrefixTable:
    """Unique minimal table: collapse complete sibling families greedily.

    Whenever every one-edge extension e of a would-be pair (u, v) occurs as
    a clause (u e -> v e), the family is replaced by (u -> v); repeating to
    a fixpoint strictly shrinks the table, so this terminates.
    """
    _require_valid(t)
    g = ShiftGraph(t.graph)
    pairs = set(t.pairs)
    changed = True
    while changed:
        changed = False
        families: dict[tuple, set[int]] = {}
        for p in pairs:
            if p.u and p.v and p.u[-1] == p.v[-1]:
                key = (p.cu, p.u[:-1], p.cv, p.v[:-1])
                families.setdefault(key, set()).add(p.u[-1])
        for (cu, u0, cv, v0), edges in families.items():
            if g.terminal(u0) != g.terminal(v0):
                continue
            expected = set(g.extensions(g.terminal(u0)))
            if edges == expected:
                for e in expected:
                    pairs.remove(Pair(cu, u0 + (e,), cv, v0 + (e,)))
                pairs.add(Pair(cu, u0, cv, v0))
                changed = True
                break  # families are stale now; rebuild
    return PrefixTable(t.graph, tuple(pairs))


def equals(s: PrefixTable, t: PrefixTable) -> bool:
    """Equality as group elements: identical canonical forms."""
    _same_setting(s, t)
    return canonicalize(s).pairs == canonicalize(t).pairs


def is_identity(t: PrefixTable) -> bool:
    return equals(t, identity_table(t.graph, t.support))


def corner_embed(t: PrefixTable, larger_support) -> PrefixTable:
    """Extend by the identity on the extra copies; a group embedding."""
    larger = tuple(sorted(set(larger_support)))
    if not set(t.support) <= set(larger):
        raise SpecError(
            "support",
            f"target support {larger} does not contain {t.support}",
        )
    extra = tuple(Pair(c, (), c, ()) for c in larger if c not in set(t.support))
    return PrefixTable(t.graph, t.pairs + extra)


def cylinder_complement(graph: SftSpec, cylinders) -> list[Word]:
    """Antichain of words whose cylinders tile the complement of the given
    (pairwise incomparable) cylinder union.
    """
    g = ShiftGraph(graph)
    words = [tuple(w) for w in cylinders]
    for w in words:
        if not g.admissible(w):
            raise SpecError("cylinders", f"inadmissible word {word_to_str(w)}")
    for a in words:
        for b in words:
            if a != b and b[: len(a)] == a:
                raise SpecError(
                    "cylinders",
                    f"cylinder words must be incomparable: {word_to_str(a)} "
                    f"is a prefix of {word_to_str(b)}",
                )
    if len(set(words)) != len(words):
        raise SpecError("cylinders", "duplicate cylinder word")

    complement: list[Word] = []

    def walk(prefix: Word, tails):
        if any(tail == () for tail in tails):
            return  # prefix lies inside the cylinder union
        if not tails:
            complement.append(prefix)
            return
        for e in g.extensions(g.terminal(prefix)):
            walk(prefix + (e,), [s[1:] for s in tails if s and s[0] == e])

    walk((), words)
    return complement


def zeta_witness(graph: SftSpec, cylinders) -> PrefixTable:
    """The order-two element swapping copies 1 and 2 of a cylinder union
    identically and fixing everything else; supported on copies {1, 2}.
    """
    words = [tuple(w) for w in cylinders]
    complement = cylinder_complement(graph, words)
    pairs = []
    for w in words:
        pairs.append(Pair(1, w, 2, w))
        pairs.append(Pair(2, w, 1, w))
    for w in complement:
        pairs.append(Pair(1, w, 1, w))
        pairs.append(Pair(2, w, 2, w))
    return PrefixTable(graph, tuple(pairs))


def commutator(s: PrefixTable, t: PrefixTable,
               word_cap: int = DEFAULT_WORD_CAP) -> PrefixTable:
    """s t s^-1 t^-1, canonicalized."""
    st = compose(s, t, word_cap)
    sts = compose(st, inverse(s), word_cap)
    return canonicalize(compose(sts, inverse(t), word_cap))


def order(t: PrefixTable, cap: int = 64,
          word_cap: int = DEFAULT_WORD_CAP) -> int | None:
    """Order by iterated composition; None when it exceeds the cap."""
    _require_valid(t)
    ident = identity_table(t.graph, t.support)
    acc = canonicalize(t)
    for n in range(1, cap + 1):
        if equals(acc, ident):
            return n
        acc = canonicalize(compose(acc, t, word_cap))
    return None


def apply_to_word(t: PrefixTable, copy: int, word: Word) -> tuple[int, Word]:
    """Image of a (copy, word) cylinder fine enough to lie in one clause.

    Used by tests as a point-sampling oracle; raises when the word is too
    short to be resolved by the table.
    """
    for p in t.pairs:
        if p.cu == copy and word[: len(p.u)] == p.u:
            return p.cv, p.v + word[len(p.u):]
    raise ValueError(
        f"word {word_to_str(word)} in copy {copy} is not resolved by the table"
    )
