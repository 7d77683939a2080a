"""Exact integer linear algebra on small matrices.

Everything here works over Z with Python's arbitrary-precision ints.
Matrices are lists of row lists.  Sizes stay tiny (a handful of unit-group
coordinates), so the plain row-reduction HNF is plenty.

The main consumer is subgroup arithmetic in finite abelian groups
presented as Z^r / diag(d_1..d_r): a subgroup generated by coordinate
vectors corresponds to the lattice spanned by those vectors together with
the relation rows d_i * e_i, and order / membership / intersection
questions become lattice questions.
"""

from __future__ import annotations

from .errors import KidaError


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) = a*x + b*y and g >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf(mat: list[list[int]], ncols: int | None = None) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``mat``.

    Returns the nonzero rows in echelon form: pivots positive, strictly
    increasing pivot columns, entries above each pivot reduced into
    [0, pivot).  The row span over Z is unchanged, and the output is the
    unique canonical basis of that lattice.
    """
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    m = [list(row) for row in mat]
    rows = len(m)
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, rows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            if not m[i][c]:
                continue
            g, x, y = xgcd(m[r][c], m[i][c])
            ar, ai = m[r][c] // g, m[i][c] // g
            row_r, row_i = m[r], m[i]
            new_r = [x * row_r[j] + y * row_i[j] for j in range(ncols)]
            new_i = [-ai * row_r[j] + ar * row_i[j] for j in range(ncols)]
            m[r], m[i] = new_r, new_i
        if m[r][c] < 0:
            m[r] = [-v for v in m[r]]
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                m[i] = [m[i][j] - q * m[r][j] for j in range(ncols)]
        r += 1
        if r == rows:
            break
    return [row for row in m[:r] if any(row)]


def kernel(mat: list[list[int]], ncols: int | None = None) -> list[list[int]]:
    """Basis of the left kernel {v : v * mat = 0} as rows."""
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    rows = len(mat)
    # Augment with an identity block and HNF the combined matrix; rows whose
    # mat-part vanishes record kernel combinations in the identity part.
    aug = [list(mat[i]) + [1 if j == i else 0 for j in range(rows)]
           for i in range(rows)]
    m = aug
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, rows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            if not m[i][c]:
                continue
            g, x, y = xgcd(m[r][c], m[i][c])
            ar, ai = m[r][c] // g, m[i][c] // g
            row_r, row_i = m[r], m[i]
            width = ncols + rows
            new_r = [x * row_r[j] + y * row_i[j] for j in range(width)]
            new_i = [-ai * row_r[j] + ar * row_i[j] for j in range(width)]
            m[r], m[i] = new_r, new_i
        r += 1
        if r == rows:
            break
    return [row[ncols:] for row in m[r:]]


class Lattice:
    """Full or partial rank sublattice of Z^n given by an HNF basis."""

    __slots__ = ("n", "basis")

    def __init__(self, rows: list[list[int]], n: int):
        self.n = n
        self.basis = hnf(rows, n)

    @classmethod
    def from_rows(cls, rows, n: int) -> "Lattice":
        return cls([list(r) for r in rows], n)

    def key(self) -> tuple:
        """Hashable canonical identity (HNF rows are unique per lattice)."""
        return (self.n, tuple(tuple(r) for r in self.basis))

    def rank(self) -> int:
        return len(self.basis)

    def det(self) -> int:
        """Index [Z^n : L] for full-rank L (product of HNF pivots)."""
        if len(self.basis) != self.n:
            raise KidaError("determinant of a non-full-rank lattice")
        piv = []
        for row in self.basis:
            for v in row:
                if v:
                    piv.append(v)
                    break
        prod = 1
        for v in piv:
            prod *= v
        return prod

    def contains(self, vec) -> bool:
        v = list(vec)
        for row in self.basis:
            c = next((j for j, x in enumerate(row) if x), None)
            if c is None:
                continue
            if v[c] % row[c]:
                return False
            q = v[c] // row[c]
            if q:
                v = [v[j] - q * row[j] for j in range(self.n)]
        return not any(v)

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(row) for row in other.basis)

    def sum(self, other: "Lattice") -> "Lattice":
        return Lattice(self.basis + other.basis, self.n)

    def intersect(self, other: "Lattice") -> "Lattice":
        # u*B1 = v*B2 solutions: left kernel of [B1; -B2] stacked.
        b1, b2 = self.basis, other.basis
        stacked = [list(r) for r in b1] + [[-x for x in r] for r in b2]
        ker = kernel(stacked, self.n)
        rows = []
        for comb in ker:
            vec = [0] * self.n
            for coef, row in zip(comb[:len(b1)], b1):
                if coef:
                    for j in range(self.n):
                        vec[j] += coef * row[j]
            rows.append(vec)
        return Lattice(rows, self.n)

    def is_sublattice_of(self, other: "Lattice") -> bool:
        return other.contains_lattice(self)


def preimage_lattice(n: int, amat: list[list[int]], target: Lattice) -> Lattice:
    """Lattice {x in Z^n : x * amat in target}, with ``amat`` n x target.n.

    ``amat`` must describe a well-defined group homomorphism, i.e. the
    relation rows of the source must map into ``target``; the returned
    lattice then automatically contains the source relations.
    """
    rows_a = [list(r) for r in amat]
    rows_t = [[-x for x in r] for r in target.basis]
    ker = kernel(rows_a + rows_t, target.n)
    return Lattice([list(comb[:n]) for comb in ker], n)


def subgroup_lattice(gens, orders) -> Lattice:
    """Lattice of the subgroup of prod Z/orders generated by ``gens``."""
    n = len(orders)
    rows = [list(g) for g in gens]
    rows += [[orders[i] if j == i else 0 for j in range(n)] for i in range(n)]
    return Lattice(rows, n)


def subgroup_order(gens, orders) -> int:
    """Order of the subgroup of prod Z/orders generated by ``gens``."""
    group_order = 1
    for d in orders:
        group_order *= d
    if not orders:
        return 1
    lat = subgroup_lattice(gens, orders)
    return group_order // lat.det()
