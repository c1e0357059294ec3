"""Block-graded matrices over SuperFractions.

A SuperMatrix has bosonic block size m and fermionic block size n.  Parity is
inferred from the entry pattern: an even matrix carries even ring elements on
its diagonal blocks and odd ones off-diagonal, an odd matrix the reverse.
Sums of unlike parities are legal but poison the parity to None, and the
graded operations refuse such values.

Products and brackets are plain matrix algebra over the supercommutative
ring; all grading signs live in the entries.  The one place the block
structure enters an operation directly is the grading sign matrix E =
diag(+1 x m, -1 x n), which weights the supertrace, the Killing form, and the
row twist used by the derivation layer.
"""

from __future__ import annotations

from itertools import permutations

from .ring import (
    EVEN,
    ODD,
    GRat,
    GeneratorCatalog,
    NotInvertible,
    ParityError,
    SuperExpr,
    SuperFraction,
    _acc_mul,
    frac_equal,
    frac_invert,
    render_fraction,
)


def _as_fraction(catalog, v) -> SuperFraction:
    if isinstance(v, SuperFraction):
        return v
    if isinstance(v, SuperExpr):
        return SuperFraction(v)
    if isinstance(v, (int, GRat)):
        return SuperFraction(catalog.const(v))
    raise TypeError(f"cannot use {type(v).__name__} as a matrix entry")


def _is_unit(f: SuperFraction) -> bool:
    return f.num.parity() == EVEN and not f.num.bosonic_shadow().is_zero()


class SuperMatrix:
    """(m|n)-graded square or rectangular matrix of SuperFractions."""

    __slots__ = ("catalog", "m", "n", "rows", "parity")

    def __init__(self, catalog: GeneratorCatalog, m: int, n: int, rows):
        size_r = len(rows)
        if size_r != m + n:
            raise ValueError(f"expected {m + n} rows, got {size_r}")
        norm = []
        for row in rows:
            if len(row) != m + n:
                raise ValueError("matrix must be square over the (m|n) grading")
            norm.append(tuple(_as_fraction(catalog, v) for v in row))
        object.__setattr__(self, "catalog", catalog)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", tuple(norm))
        object.__setattr__(self, "parity", self._infer_parity())

    def __setattr__(self, name, value):
        raise AttributeError("SuperMatrix is immutable")

    # -- structure ----------------------------------------------------------------

    @property
    def size(self) -> int:
        return self.m + self.n

    def block_parity(self, i: int) -> int:
        return EVEN if i < self.m else ODD

    def grading_sign(self, i: int) -> int:
        return 1 if i < self.m else -1

    def _infer_parity(self):
        found = None
        for i, row in enumerate(self.rows):
            for j, f in enumerate(row):
                p = f.parity()
                if p is None:
                    if f.is_zero():
                        continue
                    return None
                mat_p = (p + self.block_parity(i) + self.block_parity(j)) & 1
                if found is None:
                    found = mat_p
                elif found != mat_p:
                    return None
        return EVEN if found is None else found

    def entry(self, i: int, j: int) -> SuperFraction:
        return self.rows[i][j]

    def is_zero(self) -> bool:
        return all(f.is_zero() for row in self.rows for f in row)

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        if (self.m, self.n) != (other.m, other.n):
            return False
        return all(
            frac_equal(self.rows[i][j], other.rows[i][j])
            for i in range(self.size)
            for j in range(self.size)
        )

    def __hash__(self):
        raise TypeError("SuperMatrix is not hashable")

    # -- constructors ---------------------------------------------------------------

    @classmethod
    def zeros(cls, catalog, m, n):
        z = SuperFraction(catalog.zero())
        return cls(catalog, m, n, [[z] * (m + n) for _ in range(m + n)])

    @classmethod
    def identity(cls, catalog, m, n):
        one = SuperFraction(catalog.one())
        z = SuperFraction(catalog.zero())
        return cls(
            catalog, m, n,
            [[one if i == j else z for j in range(m + n)] for i in range(m + n)],
        )

    @classmethod
    def diagonal(cls, catalog, m, n, values):
        z = SuperFraction(catalog.zero())
        vals = [_as_fraction(catalog, v) for v in values]
        return cls(
            catalog, m, n,
            [[vals[i] if i == j else z for j in range(m + n)] for i in range(m + n)],
        )

    @classmethod
    def grading_matrix(cls, catalog, m, n):
        return cls.diagonal(catalog, m, n, [1] * m + [-1] * n)

    def map_entries(self, f) -> "SuperMatrix":
        return SuperMatrix(
            self.catalog, self.m, self.n,
            [[f(v) for v in row] for row in self.rows],
        )

    # -- linear operations ------------------------------------------------------------

    def _check(self, other):
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("block dimension mismatch")
        if self.catalog is not other.catalog:
            raise ValueError("matrices over different catalogs")

    def __add__(self, other):
        self._check(other)
        return SuperMatrix(
            self.catalog, self.m, self.n,
            [
                [self.rows[i][j] + other.rows[i][j] for j in range(self.size)]
                for i in range(self.size)
            ],
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.map_entries(lambda f: -f)

    def scale(self, c) -> "SuperMatrix":
        """Left multiplication by a ring scalar (order matters for odd c)."""
        if isinstance(c, (int, GRat, SuperExpr)):
            c = _as_fraction(self.catalog, c)
        return self.map_entries(lambda f: c * f)

    def __matmul__(self, other):
        self._check(other)
        size = self.size
        cat = self.catalog
        rows = []
        for i in range(size):
            row = []
            for j in range(size):
                pairs = []
                poly = True
                for k in range(size):
                    a = self.rows[i][k]
                    b = other.rows[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    pairs.append((a, b))
                    poly = poly and a.den_one and b.den_one
                if poly:
                    out: dict = {}
                    for a, b in pairs:
                        _acc_mul(out, cat, a.num.terms, b.num.terms)
                    row.append(SuperFraction._poly(SuperExpr(cat, out)))
                else:
                    acc = SuperFraction(cat.zero())
                    for a, b in pairs:
                        acc = acc + a * b
                    row.append(acc)
            rows.append(row)
        return SuperMatrix(cat, self.m, self.n, rows)

    # -- graded structure ---------------------------------------------------------------

    def e_left(self) -> "SuperMatrix":
        """E*M: flip the sign of the fermionic-block rows."""
        return SuperMatrix(
            self.catalog, self.m, self.n,
            [
                [(-v if i >= self.m else v) for v in row]
                for i, row in enumerate(self.rows)
            ],
        )

    def e_conj(self) -> "SuperMatrix":
        """E*M*E: flip the sign of the off-diagonal blocks."""
        return SuperMatrix(
            self.catalog, self.m, self.n,
            [
                [
                    (-v if (i < self.m) != (j < self.m) else v)
                    for j, v in enumerate(row)
                ]
                for i, row in enumerate(self.rows)
            ],
        )

    def require_parity(self, want, what="matrix"):
        if self.parity != want:
            got = {EVEN: "even", ODD: "odd", None: "heterogeneous"}[self.parity]
            need = {EVEN: "even", ODD: "odd"}[want]
            raise ParityError(f"{what} must be {need}, got {got}")
        return self

    def __repr__(self):
        return f"<SuperMatrix ({self.m}|{self.n}) parity={self.parity}>"

    def render(self) -> str:
        return (
            "["
            + ", ".join(
                "[" + ", ".join(render_fraction(v) for v in row) + "]"
                for row in self.rows
            )
            + "]"
        )


def mat_mul(a: SuperMatrix, b: SuperMatrix) -> SuperMatrix:
    return a @ b


def graded_bracket(a: SuperMatrix, b: SuperMatrix) -> SuperMatrix:
    """MN - (-1)^(|M||N|) NM: anticommutator for odd pairs, commutator else."""
    if a.parity is None or b.parity is None:
        raise ParityError("graded bracket needs homogeneous matrices")
    ab = a @ b
    ba = b @ a
    if a.parity == ODD and b.parity == ODD:
        return ab + ba
    return ab - ba


def supertrace(a: SuperMatrix) -> SuperFraction:
    acc = SuperFraction(a.catalog.zero())
    for i in range(a.size):
        d = a.rows[i][i]
        if d.is_zero():
            continue
        acc = acc + (d if i < a.m else -d)
    return acc


def killing_form(a: SuperMatrix, b: SuperMatrix) -> SuperFraction:
    """Half the E-weighted trace of the product.

    For same-parity arguments this is str(MN)/2; for mixed parities the E
    weight squares away and it is tr(MN)/2.
    """
    if a.parity is None or b.parity is None:
        raise ParityError("killing form needs homogeneous matrices")
    a._check(b)
    mixed = (a.parity + b.parity) & 1
    cat = a.catalog
    pairs = []
    poly = True
    for i in range(a.size):
        w = 1 if mixed else a.grading_sign(i)
        for k in range(a.size):
            x = a.rows[i][k]
            y = b.rows[k][i]
            if x.is_zero() or y.is_zero():
                continue
            pairs.append((w, x, y))
            poly = poly and x.den_one and y.den_one
    half = GRat(1) / 2
    if poly:
        out: dict = {}
        for w, x, y in pairs:
            _acc_mul(out, cat, x.num.terms, y.num.terms, scale=half if w > 0 else -half)
        return SuperFraction._poly(SuperExpr(cat, out))
    acc = SuperFraction(cat.zero())
    for w, x, y in pairs:
        term = x * y
        acc = acc + (term if w > 0 else -term)
    return acc.scale(half)


def _det(catalog, grid) -> SuperFraction:
    """Determinant of a grid of commuting (even) fractions, Leibniz expansion."""
    size = len(grid)
    if size == 0:
        return SuperFraction(catalog.one())
    if size == 1:
        return grid[0][0]
    if size == 2:
        return grid[0][0] * grid[1][1] - grid[0][1] * grid[1][0]
    acc = SuperFraction(catalog.zero())
    for perm in permutations(range(size)):
        inv = sum(
            1
            for x in range(size)
            for y in range(x + 1, size)
            if perm[x] > perm[y]
        )
        term = grid[0][perm[0]]
        for r in range(1, size):
            term = term * grid[r][perm[r]]
        acc = acc + (term if inv % 2 == 0 else -term)
    return acc


def _grid_inverse(catalog, grid, what):
    """Gauss-Jordan over fractions with bosonically regular pivots."""
    size = len(grid)
    aug = [
        list(row)
        + [
            SuperFraction(catalog.one() if i == j else catalog.zero())
            for j in range(size)
        ]
        for i, row in enumerate(grid)
    ]
    for col in range(size):
        pivot = None
        for r in range(col, size):
            if _is_unit(aug[r][col]):
                pivot = r
                break
        if pivot is None:
            raise NotInvertible(f"{what}: no invertible pivot in column {col + 1}")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = frac_invert(aug[col][col])
        aug[col] = [inv * v for v in aug[col]]
        for r in range(size):
            if r == col:
                continue
            factor = aug[r][col]
            if factor.is_zero():
                continue
            aug[r] = [
                aug[r][j] - factor * aug[col][j] for j in range(2 * size)
            ]
    return [row[size:] for row in aug]


def mat_inverse(a: SuperMatrix) -> SuperMatrix:
    """Two-sided inverse of an even matrix by elimination; may raise."""
    a.require_parity(EVEN, "matrix to invert")
    inv = _grid_inverse(a.catalog, [list(r) for r in a.rows], "matrix")
    return SuperMatrix(a.catalog, a.m, a.n, inv)


def berezinian(a: SuperMatrix) -> SuperFraction:
    """det(A - B D^-1 C) / det(D) over the (m|n) blocks of an even matrix."""
    a.require_parity(EVEN, "berezinian argument")
    m, n = a.m, a.n
    A = [[a.rows[i][j] for j in range(m)] for i in range(m)]
    B = [[a.rows[i][m + j] for j in range(n)] for i in range(m)]
    C = [[a.rows[m + i][j] for j in range(m)] for i in range(n)]
    D = [[a.rows[m + i][m + j] for j in range(n)] for i in range(n)]
    det_d = _det(a.catalog, D)
    if not _is_unit(det_d):
        raise NotInvertible("berezinian: fermionic block is not invertible")
    d_inv = _grid_inverse(a.catalog, D, "fermionic block")
    # S = A - B D^-1 C
    S = []
    for i in range(m):
        row = []
        for j in range(m):
            acc = A[i][j]
            for k in range(n):
                for l in range(n):
                    t = B[i][k] * d_inv[k][l] * C[l][j]
                    acc = acc - t
            row.append(acc)
        S.append(row)
    return _det(a.catalog, S) / det_d
