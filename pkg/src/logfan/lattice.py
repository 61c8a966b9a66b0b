"""Exact integer linear algebra over finitely generated abelian groups.

Everything here runs on plain Python integers, so there is no overflow to
worry about: saturation indices and Hilbert basis determinants overflow
64-bit arithmetic already on small inputs.  Matrices are immutable and
row-major.  The workhorse is the Smith normal form with tracked unimodular
transforms; kernels, cokernels, integer solves and lattice saturation are
all read off from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, entries stored flat in row-major order."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match rows x cols")

    @staticmethod
    def from_rows(rows) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        n = len(rows[0]) if rows else 0
        if any(len(r) != n for r in rows):
            raise ValueError("ragged rows")
        return IntMatrix(len(rows), n, tuple(x for r in rows for x in r))

    @staticmethod
    def from_columns(cols, rows: int | None = None) -> "IntMatrix":
        cols = [tuple(int(x) for x in c) for c in cols]
        if cols:
            m = len(cols[0])
            if any(len(c) != m for c in cols):
                raise ValueError("ragged columns")
        else:
            m = rows if rows is not None else 0
        return IntMatrix.from_rows([[c[i] for c in cols] for i in range(m)])

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def zero(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, (0,) * (rows * cols))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def as_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows([self.column(j) for j in range(self.cols)])

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.append([sum(r[k] * other.at(k, j) for k in range(self.cols))
                        for j in range(other.cols)])
        return IntMatrix.from_rows(out) if out else IntMatrix.zero(0, other.cols)

    def apply(self, v) -> Vector:
        """Matrix times column vector."""
        v = tuple(v)
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(self.row(i)[k] * v[k] for k in range(self.cols))
                     for i in range(self.rows))

    @property
    def is_diagonal(self) -> bool:
        return all(self.at(i, j) == 0
                   for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal(self) -> Vector:
        return tuple(self.at(i, i) for i in range(min(self.rows, self.cols)))


def det(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = m.as_rows()
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
class FgAbelianGroup:
    """Finitely generated abelian group: free rank plus invariant factors.

    The torsion orders satisfy d1 | d2 | ... and are each at least 2.
    Elements are coordinate tuples: free coordinates first, then one
    coordinate per torsion factor (reduced modulo its order).
    """

    free_rank: int
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion_orders:
            if d < 2:
                raise ValueError("torsion orders must be >= 2")
        for a, b in zip(self.torsion_orders, self.torsion_orders[1:]):
            if b % a != 0:
                raise ValueError("torsion orders must form a divisibility chain")

    @property
    def num_coords(self) -> int:
        return self.free_rank + len(self.torsion_orders)

    @property
    def torsion_order(self) -> int:
        n = 1
        for d in self.torsion_orders:
            n *= d
        return n

    def reduce(self, v) -> Vector:
        """Canonical coordinates: torsion entries taken mod their orders."""
        v = tuple(int(x) for x in v)
        if len(v) != self.num_coords:
            raise ValueError("coordinate length mismatch")
        f = self.free_rank
        return v[:f] + tuple(x % d for x, d in zip(v[f:], self.torsion_orders))

    def zero(self) -> Vector:
        return (0,) * self.num_coords

    def add(self, a, b) -> Vector:
        return self.reduce(tuple(x + y for x, y in zip(a, b)))

    def neg(self, a) -> Vector:
        return self.reduce(tuple(-x for x in a))

    def free_part(self, v) -> Vector:
        return tuple(v[:self.free_rank])

    def is_torsion(self, v) -> bool:
        return all(x == 0 for x in self.free_part(v))


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V = D with U, V unimodular and D a divisibility-chain diagonal."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inverse: IntMatrix
    V_inverse: IntMatrix

    def diagonal(self) -> Vector:
        return self.D.diagonal()

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal() if d != 0)


def _select_pivot(M, t, m, n):
    """Smallest absolute value in the trailing block; ties by (row, col)."""
    best = None
    best_key = None
    for i in range(t, m):
        for j in range(t, n):
            a = M[i][j]
            if a != 0:
                key = (abs(a), i, j)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (i, j)
    return best


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with tracked transforms.

    Deterministic: pivots are chosen by smallest absolute value, ties broken
    by lowest (row, col).  Handles empty matrices.  Asserts the exact
    identity U @ A @ V == D before returning.
    """
    m, n = A.rows, A.cols
    M = A.as_rows()
    U = IntMatrix.identity(m).as_rows()
    Ui = IntMatrix.identity(m).as_rows()
    V = IntMatrix.identity(n).as_rows()
    Vi = IntMatrix.identity(n).as_rows()

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:                       # inverse op swaps columns of Ui
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_sub(i, j, q):
        """row i -= q * row j"""
        if q == 0:
            return
        M[i] = [a - q * b for a, b in zip(M[i], M[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]
        for r in Ui:                       # inverse: col j += q * col i
            r[j] += q * r[i]

    def col_sub(i, j, q):
        """col i -= q * col j"""
        if q == 0:
            return
        for r in M:
            r[i] -= q * r[j]
        for r in V:
            r[i] -= q * r[j]
        Vi[j] = [a + q * b for a, b in zip(Vi[j], Vi[i])]

    def negate_row(i):
        M[i] = [-a for a in M[i]]
        U[i] = [-a for a in U[i]]
        for r in Ui:
            r[i] = -r[i]

    t = 0
    while True:
        piv = _select_pivot(M, t, m, n)
        if piv is None:
            break
        i0, j0 = piv
        if i0 != t:
            swap_rows(t, i0)
        if j0 != t:
            swap_cols(t, j0)
        while True:
            dirty = False
            p = M[t][t]
            for i in range(t + 1, m):
                if M[i][t] != 0:
                    row_sub(i, t, M[i][t] // p)
                    if M[i][t] != 0:
                        dirty = True
            for j in range(t + 1, n):
                if M[t][j] != 0:
                    col_sub(j, t, M[t][j] // p)
                    if M[t][j] != 0:
                        dirty = True
            if not dirty:
                break
            i0, j0 = _select_pivot(M, t, m, n)
            if i0 != t:
                swap_rows(t, i0)
            if j0 != t:
                swap_cols(t, j0)
        t += 1

    for i in range(min(m, n)):
        if M[i][i] < 0:
            negate_row(i)

    # enforce d1 | d2 | ... by the classic gcd/lcm 2x2 repair
    r = sum(1 for i in range(min(m, n)) if M[i][i] != 0)
    changed = True
    while changed:
        changed = False
        for i in range(r - 1):
            a, b = M[i][i], M[i + 1][i + 1]
            if b % a != 0:
                changed = True
                col_sub(i, i + 1, -1)              # col i += col i+1
                g, x, y = _xgcd(a, b)
                # unimodular row pair op [[x, y], [-b//g, a//g]]
                ri, rj = M[i][:], M[i + 1][:]
                M[i] = [x * p + y * q for p, q in zip(ri, rj)]
                M[i + 1] = [-(b // g) * p + (a // g) * q for p, q in zip(ri, rj)]
                ui, uj = U[i][:], U[i + 1][:]
                U[i] = [x * p + y * q for p, q in zip(ui, uj)]
                U[i + 1] = [-(b // g) * p + (a // g) * q for p, q in zip(ui, uj)]
                for row in Ui:                     # inverse cols: [[a//g, -y], [b//g, x]]
                    p, q = row[i], row[i + 1]
                    row[i] = p * (a // g) + q * (b // g)
                    row[i + 1] = -p * y + q * x
                col_sub(i + 1, i, M[i][i + 1] // M[i][i])
                if M[i][i] < 0:
                    negate_row(i)
                if M[i + 1][i + 1] < 0:
                    negate_row(i + 1)

    Um, Dm, Vm = (IntMatrix.from_rows(U) if m else IntMatrix.zero(0, 0),
                  IntMatrix.from_rows(M) if m else IntMatrix.zero(0, n),
                  IntMatrix.from_rows(V) if n else IntMatrix.zero(0, 0))
    Uim = IntMatrix.from_rows(Ui) if m else IntMatrix.zero(0, 0)
    Vim = IntMatrix.from_rows(Vi) if n else IntMatrix.zero(0, 0)
    assert (Um @ A) @ Vm == Dm, "Smith recomposition failed"
    assert Um @ Uim == IntMatrix.identity(m)
    assert Vm @ Vim == IntMatrix.identity(n)
    return SmithDecomposition(Um, Dm, Vm, Uim, Vim)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, x, y with x*a + y*b == g == gcd(a, b), g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def cokernel(A: IntMatrix) -> FgAbelianGroup:
    """Z^rows / image(A), read off the Smith diagonal."""
    diag = smith_normal_form(A).diagonal()
    torsion = tuple(d for d in diag if d >= 2)
    free = A.rows - sum(1 for d in diag if d != 0)
    return FgAbelianGroup(free, torsion)


def kernel_basis(A: IntMatrix) -> list[Vector]:
    """Basis of the (saturated) integer kernel of A, as column vectors."""
    snf = smith_normal_form(A)
    diag = snf.diagonal()
    out = []
    for j in range(A.cols):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            out.append(snf.V.column(j))
    return out


def solve_integer(A: IntMatrix, b) -> Vector | None:
    """One integer solution x of A x = b, or None if none exists."""
    b = tuple(int(v) for v in b)
    if len(b) != A.rows:
        raise ValueError("rhs length mismatch")
    snf = smith_normal_form(A)
    c = snf.U.apply(b)
    diag = snf.diagonal()
    y = []
    for j in range(A.cols):
        d = diag[j] if j < len(diag) else 0
        cj = c[j] if j < len(c) else 0
        if d == 0:
            if cj != 0:
                return None
            y.append(0)
        else:
            if cj % d != 0:
                return None
            y.append(cj // d)
    for i in range(A.cols, A.rows):
        if c[i] != 0:
            return None
    return snf.V.apply(y)


def hnf_rows(rows) -> tuple[Vector, ...]:
    """Row-style Hermite normal form; canonical basis of the row span.

    Pivots are positive, entries below a pivot are zero and entries above are
    reduced into [0, pivot).  Zero rows are dropped, so equal lattices give
    equal outputs.
    """
    work = [list(int(x) for x in r) for r in rows]
    if not work:
        return ()
    n = len(work[0])
    pivot_row = 0
    for col in range(n):
        best = None
        for i in range(pivot_row, len(work)):
            if work[i][col] != 0 and (best is None or abs(work[i][col]) < abs(work[best][col])):
                best = i
        if best is None:
            continue
        work[pivot_row], work[best] = work[best], work[pivot_row]
        while True:
            done = True
            for i in range(pivot_row + 1, len(work)):
                if work[i][col] != 0:
                    q = work[i][col] // work[pivot_row][col]
                    work[i] = [a - q * b for a, b in zip(work[i], work[pivot_row])]
                    if work[i][col] != 0:
                        work[pivot_row], work[i] = work[i], work[pivot_row]
                        done = False
            if done:
                break
        if work[pivot_row][col] < 0:
            work[pivot_row] = [-a for a in work[pivot_row]]
        p = work[pivot_row][col]
        for i in range(pivot_row):
            q = work[i][col] // p
            work[i] = [a - q * b for a, b in zip(work[i], work[pivot_row])]
        pivot_row += 1
        if pivot_row == len(work):
            break
    return tuple(tuple(r) for r in work[:pivot_row] if any(r))


def lattice_rank(rows) -> int:
    return len(hnf_rows(rows))


def in_lattice(v, basis_hnf) -> bool:
    """Membership of v in the lattice spanned by HNF rows."""
    v = list(int(x) for x in v)
    for row in basis_hnf:
        col = next((j for j, x in enumerate(row) if x != 0), None)
        if col is None:
            continue
        if v[col] % row[col] != 0:
            return False
        q = v[col] // row[col]
        v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def reduce_mod_lattice(v, basis_hnf) -> Vector:
    """Canonical coset representative of v modulo the HNF lattice."""
    v = list(int(x) for x in v)
    for row in basis_hnf:
        col = next((j for j, x in enumerate(row) if x != 0), None)
        if col is None:
            continue
        q = v[col] // row[col]
        v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)


def saturate_subgroup(generators, ambient_rank: int) -> tuple[Vector, ...]:
    """Basis of {v : n*v in span(generators) for some n >= 1}.

    The output is the canonical (HNF) basis of the saturation, a primitive
    sublattice of Z^ambient_rank.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    for g in gens:
        if len(g) != ambient_rank:
            raise ValueError("generator length mismatch")
    if not gens:
        return ()
    A = IntMatrix.from_columns(gens, rows=ambient_rank)
    snf = smith_normal_form(A)
    r = snf.rank
    basis = [snf.U_inverse.column(i) for i in range(r)]
    return hnf_rows(basis)


def primitive(v) -> Vector:
    """Divide out the gcd of the coordinates; primitive(0) is 0."""
    v = tuple(int(x) for x in v)
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return v
    return tuple(x // g for x in v)


def solve_rational(A: IntMatrix, b) -> tuple[Fraction, ...] | None:
    """One rational solution of A x = b by Gaussian elimination, or None."""
    m, n = A.rows, A.cols
    aug = [[Fraction(A.at(i, j)) for j in range(n)] + [Fraction(b[i])] for i in range(m)]
    pivots = []
    row = 0
    for col in range(n):
        sel = next((i for i in range(row, m) if aug[i][col] != 0), None)
        if sel is None:
            continue
        aug[row], aug[sel] = aug[sel], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for i in range(m):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for i in range(row, m):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = aug[i][n]
    return tuple(x)
