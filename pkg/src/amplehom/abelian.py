"""Exact integer linear algebra and finitely generated abelian groups.

Everything in this module works over Z with Python's arbitrary-precision
integers; no floating point is involved anywhere.  The two central objects
are :class:`IntMatrix` (immutable integer matrices) and :class:`FgAbGroup`
(finitely generated abelian groups stored in canonical invariant-factor
form, so equality of values is isomorphism of groups).

>>> M = IntMatrix.from_rows([[-1, -1], [-1, -1]])
>>> smith_normal_form(M).diagonal()
[1, 0]
>>> print(cokernel(M))
Z
>>> grp, basis = kernel(M)
>>> str(grp), basis.column(0)
('Z', [1, -1])
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod


@dataclass(frozen=True)
class IntMatrix:
    """An immutable rows x cols integer matrix, entries row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        if not all(isinstance(e, int) for e in self.entries):
            raise TypeError("matrix entries must be integers")

    @classmethod
    def from_rows(cls, rows: list[list[int]]) -> "IntMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(nrows, ncols, tuple(int(e) for r in rows for e in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def get(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def column(self, j: int) -> list[int]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_lists(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.get(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other.get(k, j) for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix difference")
        return IntMatrix(
            self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries))
        )

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def diagonal(self) -> list[int]:
        return [self.get(i, i) for i in range(min(self.rows, self.cols))]

    def __str__(self):
        return "[" + "; ".join(" ".join(map(str, self.row(i))) for i in range(self.rows)) + "]"


def identity_minus(A: IntMatrix) -> IntMatrix:
    """id - A for square A; the presentation matrix behind the shift formulas."""
    if A.rows != A.cols:
        raise ValueError("identity_minus needs a square matrix")
    return IntMatrix.identity(A.rows) - A


def determinant(M: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Kept independent of the Smith reduction so it can serve as an oracle
    for |coker| = |det| checks.
    """
    if M.rows != M.cols:
        raise ValueError("determinant needs a square matrix")
    n = M.rows
    if n == 0:
        return 1
    a = [M.row(i) for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """U * M * V = D with U, V unimodular and D in Smith normal form."""

    D: IntMatrix
    U: IntMatrix
    V: IntMatrix

    def diagonal(self) -> list[int]:
        return self.D.diagonal()

    def rank(self) -> int:
        return sum(1 for d in self.diagonal() if d != 0)

    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal() if d != 0]

    def verify(self, M: IntMatrix) -> None:
        """Assert every structural invariant against the original matrix."""
        if self.U * M * self.V != self.D:
            raise AssertionError("U*M*V != D")
        if abs(determinant(self.U)) != 1 or abs(determinant(self.V)) != 1:
            raise AssertionError("transform matrix is not unimodular")
        diag = self.diagonal()
        for i in range(self.D.rows):
            for j in range(self.D.cols):
                if i != j and self.D.get(i, j) != 0:
                    raise AssertionError("D is not diagonal")
        if any(d < 0 for d in diag):
            raise AssertionError("negative diagonal entry")
        seen_zero = False
        for prev, cur in zip(diag, diag[1:]):
            if prev == 0:
                seen_zero = True
            if seen_zero and cur != 0:
                raise AssertionError("zero diagonal entries must trail")
            if prev != 0 and cur % prev != 0:
                raise AssertionError("divisibility chain broken")


def _argmin_pivot(a: list[list[int]], t: int) -> tuple[int, int] | None:
    # smallest nonzero absolute value; ties broken by lowest (row, col)
    best = None
    best_val = None
    for i in range(t, len(a)):
        for j in range(t, len(a[0]) if a else 0):
            v = abs(a[i][j])
            if v and (best_val is None or v < best_val):
                best, best_val = (i, j), v
                if v == 1:
                    return best
    return best


def _smith_engine(M: IntMatrix, want_u: bool, want_v: bool):
    """Diagonalize by row/column reduction, tracking transforms on demand.

    Pivot choice is deterministic (smallest |entry|, lowest index), so the
    decomposition is reproducible across runs.
    """
    m, n = M.rows, M.cols
    a = [M.row(i) for i in range(m)]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if want_u else None
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if want_v else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if v is not None:
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row[dst] += c * row[src]
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        if u is not None:
            u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        if v is not None:
            for row in v:
                row[dst] += c * row[src]

    t = 0
    limit = min(m, n)
    while t < limit:
        pivot = _argmin_pivot(a, t)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        while True:
            # clear the pivot column; a nonzero remainder becomes the new
            # (strictly smaller) pivot
            restart = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(i, t)
                        restart = True
            if restart:
                continue
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(j, t)
                        restart = True
            if restart:
                continue
            break
        t += 1

    # a is now diagonal; enforce the divisibility chain pairwise
    diag_len = limit
    for i in range(diag_len):
        for j in range(i + 1, diag_len):
            di, dj = a[i][i], a[j][j]
            if dj == 0 and di == 0:
                continue
            if di != 0 and dj % di == 0:
                continue
            # replace diag(di, dj) by diag(gcd, +-lcm) via unimodular moves
            add_col(i, j, 1)  # column j into i: [[di,0],[dj,dj]] pattern
            g, x, y = _xgcd(di, dj)
            # row transform [[x, y], [-dj//g, di//g]] on rows (i, j)
            ri, rj = a[i], a[j]
            a[i] = [x * p + y * q for p, q in zip(ri, rj)]
            a[j] = [(-dj // g) * p + (di // g) * q for p, q in zip(ri, rj)]
            if u is not None:
                ri, rj = u[i], u[j]
                u[i] = [x * p + y * q for p, q in zip(ri, rj)]
                u[j] = [(-dj // g) * p + (di // g) * q for p, q in zip(ri, rj)]
            # clear the fill-in at (i, j)
            if a[i][j]:
                add_col(j, i, -(a[i][j] // a[i][i]))

    # normalize signs
    for i in range(diag_len):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            if u is not None:
                u[i] = [-x for x in u[i]]

    D = IntMatrix(m, n, tuple(x for row in a for x in row))
    U = IntMatrix(m, m, tuple(x for row in u for x in row)) if want_u else None
    V = IntMatrix(n, n, tuple(x for row in v for x in row)) if want_v else None
    return D, U, V


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, x, y with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def smith_normal_form(M: IntMatrix) -> SmithDecomposition:
    """Smith decomposition U*M*V = D over Z.

    >>> smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 3]])).diagonal()
    [1, 6]
    >>> smith_normal_form(IntMatrix.from_rows([[0]])).diagonal()
    [0]
    """
    D, U, V = _smith_engine(M, want_u=True, want_v=True)
    return SmithDecomposition(D=D, U=U, V=V)


def invariant_factors_of(M: IntMatrix) -> list[int]:
    """Nonzero diagonal of the Smith form, without transform bookkeeping."""
    D, _, _ = _smith_engine(M, want_u=False, want_v=False)
    return [d for d in D.diagonal() if d != 0]


@dataclass(frozen=True)
class FgAbGroup:
    """Z^free_rank + Z/t_1 + Z/t_2 + ... with t_1 | t_2 | ..., each t_i >= 2.

    Instances are always canonical, so == is isomorphism:

    >>> FgAbGroup.from_cyclic_orders([2, 3]) == FgAbGroup.from_cyclic_orders([6])
    True
    >>> FgAbGroup.from_cyclic_orders([2, 4]) == FgAbGroup.from_cyclic_orders([8])
    False
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for t in self.torsion:
            if t < 2:
                raise ValueError("invariant factors must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must form a divisibility chain")

    # -- constructors ---------------------------------------------------

    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls(0, ())

    @classmethod
    def free(cls, rank: int) -> "FgAbGroup":
        return cls(rank, ())

    @classmethod
    def cyclic(cls, order: int) -> "FgAbGroup":
        """Z/order, with order 0 meaning Z and order 1 the trivial group."""
        return cls.from_cyclic_orders([order])

    @classmethod
    def from_cyclic_orders(cls, orders) -> "FgAbGroup":
        """Canonicalize a direct sum of cyclic groups Z/o (o = 0 for Z)."""
        rank = 0
        prime_exp: dict[int, list[int]] = {}
        for o in orders:
            o = abs(int(o))
            if o == 0:
                rank += 1
            elif o == 1:
                continue
            else:
                for p, e in _factorize(o).items():
                    prime_exp.setdefault(p, []).append(e)
        depth = max((len(v) for v in prime_exp.values()), default=0)
        factors = []
        for i in range(depth):
            f = 1
            for p, exps in prime_exp.items():
                exps_sorted = sorted(exps, reverse=True)
                if i < len(exps_sorted):
                    f *= p ** exps_sorted[i]
            factors.append(f)
        factors.reverse()  # ascending divisibility chain
        return cls(rank, tuple(factors))

    # -- structure ------------------------------------------------------

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_free(self) -> bool:
        return not self.torsion

    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        return prod(self.torsion, start=1)

    def direct_sum(self, *others: "FgAbGroup") -> "FgAbGroup":
        orders = [0] * self.free_rank + list(self.torsion)
        for g in others:
            orders += [0] * g.free_rank + list(g.torsion)
        return FgAbGroup.from_cyclic_orders(orders)

    def tensor(self, other: "FgAbGroup") -> "FgAbGroup":
        """Tensor product over Z.

        >>> print(FgAbGroup.cyclic(4).tensor(FgAbGroup.cyclic(6)))
        Z/2
        """
        orders = [0] * (self.free_rank * other.free_rank)
        orders += list(other.torsion) * self.free_rank
        orders += list(self.torsion) * other.free_rank
        orders += [gcd(s, t) for s in self.torsion for t in other.torsion]
        return FgAbGroup.from_cyclic_orders(orders)

    def tor(self, other: "FgAbGroup") -> "FgAbGroup":
        """Tor_1 over Z; kills free parts, gcd on cyclic pairs.

        >>> print(FgAbGroup.cyclic(4).tor(FgAbGroup.cyclic(6)))
        Z/2
        """
        orders = [gcd(s, t) for s in self.torsion for t in other.torsion]
        return FgAbGroup.from_cyclic_orders(orders)

    def mod2(self) -> "FgAbGroup":
        """Reduction mod 2, i.e. (- tensor Z/2): one Z/2 per free generator
        and per even invariant factor.
        """
        count = self.free_rank + sum(1 for t in self.torsion if t % 2 == 0)
        return FgAbGroup.from_cyclic_orders([2] * count)

    def rationalized_rank(self) -> int:
        return self.free_rank

    # -- serialization / display ----------------------------------------

    def to_json(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: dict) -> "FgAbGroup":
        if not isinstance(data, dict) or set(data) - {"rank", "torsion"}:
            raise ValueError(f"malformed group JSON: {data!r}")
        rank = data.get("rank", 0)
        torsion = data.get("torsion", [])
        if not isinstance(rank, int) or rank < 0:
            raise ValueError("group rank must be a nonnegative integer")
        if not isinstance(torsion, list) or not all(
            isinstance(t, int) and t >= 2 for t in torsion
        ):
            raise ValueError("torsion must be a list of integers >= 2")
        for a, b in zip(torsion, torsion[1:]):
            if b % a != 0:
                raise ValueError(f"torsion {torsion} violates the divisibility chain")
        return cls(rank, tuple(torsion))

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def cokernel(M: IntMatrix) -> FgAbGroup:
    """coker(M : Z^cols -> Z^rows) in canonical form.

    >>> print(cokernel(IntMatrix.from_rows([[-1, -1], [-1, -1]])))
    Z
    """
    D, _, _ = _smith_engine(M, want_u=False, want_v=False)
    diag = D.diagonal()
    rank = sum(1 for d in diag if d != 0)
    # the Smith diagonal is already a divisibility chain, no refactoring needed
    return FgAbGroup(M.rows - rank, tuple(d for d in diag if d >= 2))


def kernel(M: IntMatrix) -> tuple[FgAbGroup, IntMatrix]:
    """ker(M : Z^cols -> Z^rows) with a column basis in Hermite-reduced form.

    The returned group is free of rank cols - rank(M); the basis matrix has
    that many columns, each an exact kernel vector.
    """
    D, _, V = _smith_engine(M, want_u=False, want_v=True)
    rank = sum(1 for d in D.diagonal() if d != 0)
    basis_cols = [V.column(j) for j in range(rank, M.cols)]
    basis = _column_hermite(basis_cols, M.cols)
    return FgAbGroup.free(M.cols - rank), basis


def _column_hermite(cols: list[list[int]], height: int) -> IntMatrix:
    """Canonical column form of the lattice spanned by the given columns."""
    # echelonize as rows of the transpose
    rows = [list(c) for c in cols]
    basis: list[list[int]] = []
    for vec in rows:
        for b in basis:
            piv = next(i for i, x in enumerate(b) if x != 0)
            if vec[piv]:
                g, x, y = _xgcd(b[piv], vec[piv])
                if g == abs(b[piv]):
                    q = vec[piv] // b[piv]
                    vec[:] = [v - q * w for v, w in zip(vec, b)]
                else:
                    b_new = [x * p + y * q2 for p, q2 in zip(b, vec)]
                    v_new = [
                        (-vec[piv] // g) * p + (b[piv] // g) * q2
                        for p, q2 in zip(b, vec)
                    ]
                    b[:] = b_new
                    vec[:] = v_new
        if any(vec):
            basis.append(vec)
            basis.sort(key=lambda r: next(i for i, x in enumerate(r) if x != 0))
    # normalize: positive pivots, entries above each pivot reduced mod pivot
    for b in basis:
        piv = next(i for i, x in enumerate(b) if x != 0)
        if b[piv] < 0:
            b[:] = [-x for x in b]
    for k, b in enumerate(basis):
        piv = next(i for i, x in enumerate(b) if x != 0)
        for other in basis[:k]:
            q = other[piv] // b[piv]
            if q:
                other[:] = [o - q * x for o, x in zip(other, b)]
    entries = tuple(basis[j][i] for i in range(height) for j in range(len(basis)))
    return IntMatrix(height, len(basis), entries)


def tensor(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    return a.tensor(b)


def tor(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    return a.tor(b)


def mod2(a: FgAbGroup) -> FgAbGroup:
    return a.mod2()
