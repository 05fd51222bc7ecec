"""Sparse exact linear algebra: matrices, echelon subspaces, kernels.

Everything here is exact.  Matrices are stored row-major as dicts mapping
column -> nonzero scalar.  Subspaces are stored via a basis in reduced
row-echelon form with strictly increasing pivots, so two equal subspaces
have syntactically identical bases and equality is a plain comparison.

Elimination uses the leftmost nonzero column as the pivot column (the
result, being a reduced echelon form, is unique no matter how pivot rows
are chosen; rows are picked sparsest-first for speed).  Inputs that are
dense enough are routed to a dense engine; over a prime field with numpy
available the dense engine is vectorized.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Sequence

from .errors import InternalCheckError, ValidationError

#: above this fill ratio the elimination switches to a dense representation
DENSE_THRESHOLD = 0.25


class Matrix:
    """An immutable-by-convention sparse matrix over an exact field."""

    __slots__ = ("field", "nrows", "ncols", "rows", "_cols")

    def __init__(self, field, nrows: int, ncols: int, rows: list[dict]):
        if len(rows) != nrows:
            raise ValidationError("row count mismatch", expected=nrows, got=len(rows))
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows
        self._cols = None

    # ---------------------------------------------------------------- build

    @classmethod
    def zeros(cls, field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, nrows, ncols, [{} for _ in range(nrows)])

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        one = field.one
        return cls(field, n, n, [{i: one} for i in range(n)])

    @classmethod
    def from_entries(cls, field, nrows: int, ncols: int, entries: Iterable) -> "Matrix":
        """Build from (row, col, scalar) triples; duplicates accumulate."""
        rows = [dict() for _ in range(nrows)]
        add = field.add
        for r, c, v in entries:
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise ValidationError(
                    "entry out of bounds", row=r, col=c, nrows=nrows, ncols=ncols
                )
            row = rows[r]
            w = add(row.get(c, field.zero), v)
            if w:
                row[c] = w
            elif c in row:
                del row[c]
        return cls(field, nrows, ncols, rows)

    @classmethod
    def from_rows(cls, field, ncols: int, rows: Sequence[dict]) -> "Matrix":
        return cls(field, len(rows), ncols, [dict(r) for r in rows])

    @classmethod
    def from_columns(cls, field, nrows: int, cols: Sequence[dict]) -> "Matrix":
        rows = [dict() for _ in range(nrows)]
        for c, col in enumerate(cols):
            for r, v in col.items():
                rows[r][c] = v
        m = cls(field, nrows, len(cols), rows)
        m._cols = [dict(c) for c in cols]
        return m

    @classmethod
    def from_dense(cls, field, data: Sequence[Sequence]) -> "Matrix":
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        rows = []
        for drow in data:
            if len(drow) != ncols:
                raise ValidationError("ragged dense matrix")
            rows.append({c: v for c, v in enumerate(drow) if v})
        return cls(field, nrows, ncols, rows)

    # ------------------------------------------------------------- queries

    def entry(self, r: int, c: int):
        return self.rows[r].get(c, self.field.zero)

    def column(self, c: int) -> dict:
        if self._cols is None:
            cols = [dict() for _ in range(self.ncols)]
            for r, row in enumerate(self.rows):
                for k, v in row.items():
                    cols[k][r] = v
            self._cols = cols
        return self._cols[c]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def density(self) -> float:
        cells = self.nrows * self.ncols
        return self.nnz() / cells if cells else 0.0

    def is_zero(self) -> bool:
        return all(not r for r in self.rows)

    def to_dense(self) -> list[list]:
        zero = self.field.zero
        return [
            [row.get(c, zero) for c in range(self.ncols)] for row in self.rows
        ]

    def to_entries(self) -> list[list]:
        """Sorted (row, col, str) triples for serialization."""
        fmt = self.field.fmt
        out = []
        for r, row in enumerate(self.rows):
            for c in sorted(row):
                out.append([r, c, fmt(row[c])])
        return out

    # ---------------------------------------------------------- arithmetic

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise ValidationError("field mismatch")
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValidationError(
                "shape mismatch",
                left=[self.nrows, self.ncols],
                right=[other.nrows, other.ncols],
            )

    def add(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        f = self.field
        rows = [dict(r) for r in self.rows]
        for dst, src in zip(rows, other.rows):
            f.axpy_row(dst, src, f.one)
        return Matrix(f, self.nrows, self.ncols, rows)

    def sub(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        f = self.field
        minus_one = f.neg(f.one)
        rows = [dict(r) for r in self.rows]
        for dst, src in zip(rows, other.rows):
            f.axpy_row(dst, src, minus_one)
        return Matrix(f, self.nrows, self.ncols, rows)

    def scale(self, c) -> "Matrix":
        f = self.field
        if not c:
            return Matrix.zeros(f, self.nrows, self.ncols)
        rows = []
        for row in self.rows:
            rows.append({k: f.mul(v, c) for k, v in row.items()})
        return Matrix(f, self.nrows, self.ncols, rows)

    def mul(self, other: "Matrix") -> "Matrix":
        """Matrix product self @ other."""
        if self.field != other.field:
            raise ValidationError("field mismatch")
        if self.ncols != other.nrows:
            raise ValidationError(
                "inner dimension mismatch", left=self.ncols, right=other.nrows
            )
        f = self.field
        orows = other.rows
        rows = []
        for row in self.rows:
            acc: dict = {}
            for c, a in row.items():
                src = orows[c]
                if src:
                    f.axpy_row(acc, src, a)
            rows.append(acc)
        return Matrix(f, self.nrows, other.ncols, rows)

    def matvec(self, vec: dict) -> dict:
        """Apply to a sparse column vector."""
        f = self.field
        out = {}
        for r, row in enumerate(self.rows):
            if not row:
                continue
            s = f.dot(row, vec)
            if s:
                out[r] = s
        return out

    def apply_to_vec(self, vec: dict) -> dict:
        """Column-oriented apply; faster than matvec for very sparse vectors."""
        f = self.field
        out: dict = {}
        for c, a in vec.items():
            col = self.column(c)
            if col:
                f.axpy_row(out, col, a)
        return out

    def transpose(self) -> "Matrix":
        rows = [dict() for _ in range(self.ncols)]
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                rows[c][r] = v
        return Matrix(self.field, self.ncols, self.nrows, rows)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    __hash__ = None

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols} over {self.field}, nnz={self.nnz()})"


# ---------------------------------------------------------------------------
# elimination engines
# ---------------------------------------------------------------------------


def _rref_sparse(field, work: list[dict], ncols: int, full: bool):
    colindex = defaultdict(set)
    for idx, row in enumerate(work):
        for c in row:
            colindex[c].add(idx)
    done: set[int] = set()
    piv: list[tuple[int, int]] = []
    axpy = field.axpy_row_indexed
    nrows = len(work)
    # iterate only columns that are ever populated: empty columns cannot
    # carry a pivot, and column counts can dwarf the support of the rows
    for col in sorted(colindex):
        cand = colindex.get(col)
        if not cand:
            continue
        best = -1
        best_len = -1
        for idx in cand:
            if idx in done:
                continue
            k = len(work[idx])
            if best < 0 or k < best_len or (k == best_len and idx < best):
                best = idx
                best_len = k
        if best < 0:
            continue
        prow = work[best]
        pv = prow[col]
        if pv != field.one:
            field.scale_row(prow, field.inv(pv))
        targets = [i for i in cand if i != best and (full or i not in done)]
        for idx in targets:
            f = work[idx].get(col)
            if f is not None:
                axpy(work[idx], prow, field.neg(f), colindex, idx)
        done.add(best)
        piv.append((col, best))
        if len(done) == nrows:
            break
    piv.sort()
    return [work[i] for _, i in piv], tuple(c for c, _ in piv)


def _rref_dense_python(field, work: list[dict], ncols: int, full: bool):
    zero = field.zero
    dense = []
    for row in work:
        drow = [zero] * ncols
        for c, v in row.items():
            drow[c] = v
        dense.append(drow)
    nrows = len(dense)
    piv_cols: list[int] = []
    piv_rows: list[int] = []
    r = 0
    for col in range(ncols):
        sel = -1
        for i in range(r, nrows):
            if dense[i][col]:
                sel = i
                break
        if sel < 0:
            continue
        dense[r], dense[sel] = dense[sel], dense[r]
        prow = dense[r]
        pv = prow[col]
        if pv != field.one:
            c = field.inv(pv)
            for j in range(col, ncols):
                if prow[j]:
                    prow[j] = field.mul(prow[j], c)
        lo = 0 if full else r + 1
        for i in range(lo, nrows):
            if i == r:
                continue
            f = dense[i][col]
            if f:
                trow = dense[i]
                nf = field.neg(f)
                for j in range(col, ncols):
                    v = prow[j]
                    if v:
                        trow[j] = field.add(trow[j], field.mul(nf, v))
        piv_cols.append(col)
        piv_rows.append(r)
        r += 1
        if r == nrows:
            break
    out_rows = []
    for r in piv_rows:
        drow = dense[r]
        out_rows.append({c: drow[c] for c in range(ncols) if drow[c]})
    return out_rows, tuple(piv_cols)


def _rref_dense_fp_numpy(field, work: list[dict], ncols: int, full: bool):
    import numpy as np

    p = field.p
    m = np.zeros((len(work), ncols), dtype=np.int64)
    for i, row in enumerate(work):
        for c, v in row.items():
            m[i, c] = v
    nrows = m.shape[0]
    piv_cols: list[int] = []
    r = 0
    for col in range(ncols):
        nz = np.nonzero(m[r:, col])[0]
        if nz.size == 0:
            continue
        sel = r + int(nz[0])
        if sel != r:
            m[[r, sel]] = m[[sel, r]]
        pv = int(m[r, col])
        if pv != 1:
            m[r] = (m[r] * pow(pv, -1, p)) % p
        if full:
            targets = np.nonzero(m[:, col])[0]
            targets = targets[targets != r]
        else:
            below = np.nonzero(m[r + 1 :, col])[0]
            targets = below + r + 1
        if targets.size:
            factors = m[targets, col][:, None]
            m[targets] = (m[targets] - factors * m[r][None, :]) % p
        piv_cols.append(col)
        r += 1
        if r == nrows:
            break
    out_rows = []
    for i in range(len(piv_cols)):
        nz = np.nonzero(m[i])[0]
        out_rows.append({int(c): int(m[i, c]) for c in nz})
    return out_rows, tuple(piv_cols)


def rref(field, rows: Sequence[dict], ncols: int, full: bool = True,
         dense_threshold: float = DENSE_THRESHOLD):
    """Row-reduce sparse rows; returns (echelon rows, pivot columns).

    With ``full=True`` the result is the reduced row-echelon form (unique);
    with ``full=False`` only entries below pivots are cleared, which is
    enough for ranks.  Zero rows are dropped; pivots come back strictly
    increasing with their rows in matching order.
    """
    work = [dict(r) for r in rows if r]
    if not work or ncols == 0:
        return [], ()
    nnz = sum(len(r) for r in work)
    density = nnz / (len(work) * ncols)
    if density > dense_threshold:
        if field.kind == "Fp" and field.p < 2**31:
            try:
                return _rref_dense_fp_numpy(field, work, ncols, full)
            except ImportError:
                pass
        return _rref_dense_python(field, work, ncols, full)
    return _rref_sparse(field, work, ncols, full)


def kernel_rows_from_rref(field, rref_rows: list[dict], pivots: tuple, ncols: int) -> list[dict]:
    """Standard kernel basis read off a reduced echelon form."""
    pivset = set(pivots)
    neg = field.neg
    out = []
    for free in range(ncols):
        if free in pivset:
            continue
        vec = {free: field.one}
        for pcol, row in zip(pivots, rref_rows):
            a = row.get(free)
            if a is not None:
                vec[pcol] = neg(a)
        out.append(vec)
    return out


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------


class Subspace:
    """A linear subspace held by a pivot-structured basis.

    Every basis carries a set of pivot columns at which the basis rows form
    an identity pattern (row r is 1 at pivots[r] and 0 at the other pivots).
    Membership, coordinates, and complement projectors only need that much.
    A basis may additionally be the reduced echelon form, which is canonical:
    equality and serialization canonicalize lazily so that hot paths can
    keep cheaper kernel-shaped bases.
    """

    __slots__ = ("field", "ambient_dim", "basis", "pivots", "canonical", "_canon")

    def __init__(self, field, ambient_dim: int, basis: Matrix, pivots: tuple,
                 canonical: bool = True):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = pivots
        self.canonical = canonical
        self._canon = self if canonical else None

    @classmethod
    def _from_rref(cls, field, ambient_dim: int, rows: list[dict], pivots: tuple) -> "Subspace":
        return cls(field, ambient_dim, Matrix(field, len(rows), ambient_dim, rows), pivots)

    @classmethod
    def from_vectors(cls, field, ambient_dim: int, vectors: Sequence[dict]) -> "Subspace":
        rows, pivots = rref(field, vectors, ambient_dim, full=True)
        return cls._from_rref(field, ambient_dim, rows, pivots)

    @classmethod
    def from_pivot_basis(cls, field, ambient_dim: int, rows: list[dict],
                         pivots: tuple) -> "Subspace":
        """Adopt rows already in identity pattern at the given pivots."""
        m = Matrix(field, len(rows), ambient_dim, rows)
        return cls(field, ambient_dim, m, pivots, canonical=False)

    def canonicalize(self) -> "Subspace":
        """The same subspace with the unique reduced-echelon basis."""
        if self._canon is None:
            self._canon = Subspace.from_vectors(
                self.field, self.ambient_dim, self.basis.rows
            )
        return self._canon

    @classmethod
    def full(cls, field, ambient_dim: int) -> "Subspace":
        one = field.one
        rows = [{i: one} for i in range(ambient_dim)]
        return cls._from_rref(field, ambient_dim, rows, tuple(range(ambient_dim)))

    @classmethod
    def zero(cls, field, ambient_dim: int) -> "Subspace":
        return cls._from_rref(field, ambient_dim, [], ())

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def basis_rows(self) -> list[dict]:
        return self.basis.rows

    # ----------------------------------------------------------- membership

    def residual(self, vec: dict) -> dict:
        """vec minus its projection onto the basis; empty iff contained."""
        f = self.field
        out = dict(vec)
        rows = self.basis.rows
        for pcol, row in zip(self.pivots, rows):
            c = out.get(pcol)
            if c:
                f.axpy_row(out, row, f.neg(c))
        return out

    def contains(self, vec: dict) -> bool:
        return not self.residual(vec)

    def coords_of(self, vec: dict) -> dict:
        """Coordinates of vec in the echelon basis; raises if it escapes."""
        if not self.contains(vec):
            raise InternalCheckError(
                "vector escapes subspace", ambient_dim=self.ambient_dim
            )
        coords = {}
        for r, pcol in enumerate(self.pivots):
            c = vec.get(pcol)
            if c:
                coords[r] = c
        return coords

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.basis.rows)

    # ---------------------------------------------------------- operations

    def complement_free_coords(self) -> tuple:
        pivset = set(self.pivots)
        return tuple(c for c in range(self.ambient_dim) if c not in pivset)

    def complement_projector(self) -> Matrix:
        """Rows indexed by free coordinates; kills the subspace exactly.

        For v in the ambient space, row f computes v[f] minus the f-entry of
        the projection of v onto the basis, so P v = 0 iff v is contained.
        """
        f = self.field
        neg = f.neg
        free = self.complement_free_coords()
        rows = []
        row_entries: dict[int, dict] = {fc: {fc: f.one} for fc in free}
        for pcol, brow in zip(self.pivots, self.basis.rows):
            for c, v in brow.items():
                if c != pcol and c in row_entries:
                    row_entries[c][pcol] = neg(v)
        for fc in free:
            rows.append(row_entries[fc])
        return Matrix(f, len(free), self.ambient_dim, rows)

    def compose_relative(self, rel: "Subspace") -> "Subspace":
        """Push a subspace given in self-coordinates down to the ambient space."""
        if rel.ambient_dim != self.dim:
            raise ValidationError(
                "relative coordinates mismatch", expected=self.dim, got=rel.ambient_dim
            )
        f = self.field
        brows = self.basis.rows
        out = []
        for crow in rel.basis.rows:
            acc: dict = {}
            for r, c in crow.items():
                f.axpy_row(acc, brows[r], c)
            out.append(acc)
        return Subspace.from_vectors(f, self.ambient_dim, out)

    def sum_with(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        return Subspace.from_vectors(
            self.field, self.ambient_dim, list(self.basis.rows) + list(other.basis.rows)
        )

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        if self.is_full:
            return other
        if other.is_full:
            return self
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        # solve: combinations of self.basis that other's projector kills
        proj = other.complement_projector()
        m = proj.mul(self.basis.transpose())  # (free of other) x dim(self)
        _, ker = rank_and_kernel(m)
        return self.compose_relative(ker)

    def _check_compatible(self, other: "Subspace") -> None:
        if self.field != other.field:
            raise ValidationError("field mismatch")
        if self.ambient_dim != other.ambient_dim:
            raise ValidationError(
                "ambient dimension mismatch",
                left=self.ambient_dim,
                right=other.ambient_dim,
            )

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.field != other.field or self.ambient_dim != other.ambient_dim:
            return False
        if self.dim != other.dim:
            return False
        a = self.canonicalize()
        b = other.canonicalize()
        return a.pivots == b.pivots and a.basis == b.basis

    __hash__ = None

    def __repr__(self):
        return f"Subspace(dim={self.dim} in {self.ambient_dim} over {self.field})"

    def to_json(self) -> dict:
        canon = self.canonicalize()
        return {
            "ambient_dim": canon.ambient_dim,
            "dim": canon.dim,
            "pivots": list(canon.pivots),
            "basis": canon.basis.to_entries(),
        }


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def rank_and_kernel(m: Matrix) -> tuple[int, Subspace]:
    """Rank and kernel of a matrix acting on column vectors."""
    rows, pivots = rref(m.field, m.rows, m.ncols, full=True)
    kernel_rows = kernel_rows_from_rref(m.field, rows, pivots, m.ncols)
    return len(pivots), Subspace.from_vectors(m.field, m.ncols, kernel_rows)


def rank(m: Matrix) -> int:
    _, pivots = rref(m.field, m.rows, m.ncols, full=False)
    return len(pivots)


def kernel_of_rows(field, rows: Sequence[dict], ncols: int) -> Subspace:
    """Kernel of the linear map whose matrix has the given rows."""
    rr, pivots = rref(field, rows, ncols, full=True)
    return Subspace.from_vectors(
        field, ncols, kernel_rows_from_rref(field, rr, pivots, ncols)
    )


def kernel_of_rows_raw(field, rows: Sequence[dict], ncols: int) -> Subspace:
    """Like kernel_of_rows but keeps the kernel-shaped basis uncanonicalized.

    The pivots of the result are the free columns of the constraint system.
    This avoids a second elimination pass on large kernels; callers that
    need the canonical basis call canonicalize().
    """
    rr, pivots = rref(field, rows, ncols, full=True)
    if not pivots:
        return Subspace.full(field, ncols)
    krows = kernel_rows_from_rref(field, rr, pivots, ncols)
    pivset = set(pivots)
    free = tuple(c for c in range(ncols) if c not in pivset)
    return Subspace.from_pivot_basis(field, ncols, krows, free)


def image(m: Matrix) -> Subspace:
    """Column span of a matrix."""
    return Subspace.from_vectors(m.field, m.nrows, m.transpose().rows)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    return u.intersect(v)


def contains(u: Subspace, vec: dict) -> bool:
    return u.contains(vec)


def preimage_constraint(m: Matrix, target: Subspace) -> Subspace:
    """The subspace {v : m v lies in target} of the domain of m."""
    if target.ambient_dim != m.nrows:
        raise ValidationError(
            "target lives in the wrong space", expected=m.nrows, got=target.ambient_dim
        )
    if target.is_full:
        return Subspace.full(m.field, m.ncols)
    proj = target.complement_projector()
    constrained = proj.mul(m)
    _, ker = rank_and_kernel(constrained)
    return ker


def restrict_map(m: Matrix, domain: Subspace, codomain: Subspace) -> Matrix:
    """Matrix of m between the echelon bases of domain and codomain.

    Columns are the codomain coordinates of m applied to domain basis rows.
    Raises InternalCheckError if any image escapes the codomain, since that
    means the caller's invariants are broken.
    """
    if domain.ambient_dim != m.ncols or codomain.ambient_dim != m.nrows:
        raise ValidationError(
            "restriction shape mismatch",
            map_shape=[m.nrows, m.ncols],
            domain=domain.ambient_dim,
            codomain=codomain.ambient_dim,
        )
    cols = []
    for brow in domain.basis.rows:
        img = m.matvec(brow)
        cols.append(codomain.coords_of(img))
    return Matrix.from_columns(m.field, codomain.dim, cols)
