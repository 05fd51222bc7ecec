"""Finite-dimensional algebras, bimodules, and algebra morphisms.

An algebra is a unital associative algebra given by structure constants on
a chosen basis; a bimodule carries left and right action tensors over such
an algebra.  Elements are sparse coordinate vectors (dict index -> scalar).
Validation checks the axioms exhaustively on basis triples, which is the
honest thing to do at these dimensions.
"""

from __future__ import annotations

import itertools

from .errors import ValidationError
from .fields import field_from_json
from .linalg import Matrix

__all__ = [
    "Algebra",
    "Bimodule",
    "AlgebraMorphism",
    "validate_algebra",
    "validate_bimodule",
    "ground_field_algebra",
    "truncated_polynomial_algebra",
    "group_algebra",
    "upper_triangular_2x2",
    "named_algebra",
    "matrix_algebra",
    "matrix_bimodule",
    "symmetric_group_table",
    "cyclic_group_table",
    "commutativity_report",
    "check_central_morphism",
    "is_w_witness_pair",
    "is_t_witness_pair",
    "algebra_from_json",
    "algebra_to_json",
    "bimodule_from_json",
    "bimodule_to_json",
    "morphism_from_json",
    "morphism_to_json",
    "vector_from_json",
    "vector_to_json",
]


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


class Algebra:
    """Unital associative algebra via basis products.

    ``pairs[i][j]`` holds the product of basis elements i and j as a sparse
    vector; ``unit`` is the coordinate vector of 1.
    """

    def __init__(self, field, dim: int, pairs: list[list[dict]], unit: dict, label: str = ""):
        self.field = field
        self.dim = dim
        self.pairs = pairs
        self.unit = _clean(unit)
        self.label = label

    def pair(self, i: int, j: int) -> dict:
        return self.pairs[i][j]

    def multiply(self, x: dict, y: dict) -> dict:
        f = self.field
        out: dict = {}
        for i, a in x.items():
            row = self.pairs[i]
            for j, b in y.items():
                prod = row[j]
                if prod:
                    f.axpy_row(out, prod, f.mul(a, b))
        return out

    def is_commutative(self) -> bool:
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if self.pairs[i][j] != self.pairs[j][i]:
                    return False
        return True

    def validate(self) -> list[dict]:
        return validate_algebra(self)

    def __repr__(self):
        tag = self.label or "algebra"
        return f"Algebra({tag}, dim={self.dim} over {self.field})"


class Bimodule:
    """A bimodule over an algebra, by left/right action tensors on bases."""

    def __init__(self, over: Algebra, dim: int, left: list[list[dict]],
                 right: list[list[dict]], label: str = ""):
        self.over = over
        self.field = over.field
        self.dim = dim
        # left[a_i][m_j] and right[m_j][a_i], both sparse module vectors
        self.left = left
        self.right = right
        self.label = label

    def left_pair(self, a_i: int, m_j: int) -> dict:
        return self.left[a_i][m_j]

    def right_pair(self, m_j: int, a_i: int) -> dict:
        return self.right[m_j][a_i]

    def act_left(self, avec: dict, mvec: dict) -> dict:
        f = self.field
        out: dict = {}
        for i, a in avec.items():
            row = self.left[i]
            for j, m in mvec.items():
                prod = row[j]
                if prod:
                    f.axpy_row(out, prod, f.mul(a, m))
        return out

    def act_right(self, mvec: dict, avec: dict) -> dict:
        f = self.field
        out: dict = {}
        for j, m in mvec.items():
            row = self.right[j]
            for i, a in avec.items():
                prod = row[i]
                if prod:
                    f.axpy_row(out, prod, f.mul(m, a))
        return out

    def is_symmetric(self) -> bool:
        """True when a.m == m.a on all basis pairs."""
        for i in range(self.over.dim):
            for j in range(self.dim):
                if self.left[i][j] != self.right[j][i]:
                    return False
        return True

    @classmethod
    def regular(cls, algebra: Algebra) -> "Bimodule":
        pairs = algebra.pairs
        left = [[pairs[i][j] for j in range(algebra.dim)] for i in range(algebra.dim)]
        right = [[pairs[j][i] for i in range(algebra.dim)] for j in range(algebra.dim)]
        return cls(algebra, algebra.dim, left, right, label=algebra.label or "regular")

    def validate(self) -> list[dict]:
        return validate_bimodule(self)

    def __repr__(self):
        return f"Bimodule(dim={self.dim} over {self.over!r})"


class AlgebraMorphism:
    """A linear map between algebras that preserves products.

    Unit preservation is recorded as a flag rather than required: corner
    embeddings into matrix algebras are multiplicative but not unital.
    """

    def __init__(self, source: Algebra, target: Algebra, matrix: Matrix, label: str = ""):
        if matrix.ncols != source.dim or matrix.nrows != target.dim:
            raise ValidationError(
                "morphism matrix shape mismatch",
                shape=[matrix.nrows, matrix.ncols],
                source_dim=source.dim,
                target_dim=target.dim,
            )
        self.source = source
        self.target = target
        self.matrix = matrix
        self.label = label
        self.unital = self.apply(source.unit) == target.unit

    def apply(self, vec: dict) -> dict:
        return self.matrix.matvec(vec)

    def apply_basis(self, i: int) -> dict:
        return self.matrix.column(i)

    def validate(self) -> list[dict]:
        """Check multiplicativity on basis pairs; unit status is a flag."""
        bad = []
        for i in range(self.source.dim):
            fi = self.apply_basis(i)
            for j in range(self.source.dim):
                lhs = self.apply(self.source.pair(i, j))
                rhs = self.target.multiply(fi, self.apply_basis(j))
                if lhs != rhs:
                    bad.append({"kind": "multiplicativity", "pair": [i, j]})
        return bad

    def __repr__(self):
        tag = self.label or "morphism"
        u = "unital" if self.unital else "non-unital"
        return f"AlgebraMorphism({tag}, {u})"


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def validate_algebra(a: Algebra) -> list[dict]:
    """All failed axiom instances: associativity triples and unit laws."""
    bad = []
    d = a.dim
    for i in range(d):
        for j in range(d):
            for k in range(d):
                lhs = a.multiply(a.pair(i, j), {k: a.field.one})
                rhs = a.multiply({i: a.field.one}, a.pair(j, k))
                if lhs != rhs:
                    bad.append({"kind": "associativity", "triple": [i, j, k]})
    for i in range(d):
        e = {i: a.field.one}
        if a.multiply(a.unit, e) != e:
            bad.append({"kind": "unit", "basis": i, "side": "left"})
        if a.multiply(e, a.unit) != e:
            bad.append({"kind": "unit", "basis": i, "side": "right"})
    return bad


def validate_bimodule(m: Bimodule) -> list[dict]:
    bad = []
    a = m.over
    one = m.field.one
    for i in range(a.dim):
        for j in range(a.dim):
            ab = a.pair(i, j)
            for k in range(m.dim):
                mk = {k: one}
                # (ab)m = a(bm)
                if m.act_left(ab, mk) != m.act_left({i: one}, m.act_left({j: one}, mk)):
                    bad.append({"kind": "left_associativity", "triple": [i, j, k]})
                # m(ab) = (ma)b
                if m.act_right(mk, ab) != m.act_right(m.act_right(mk, {i: one}), {j: one}):
                    bad.append({"kind": "right_associativity", "triple": [i, j, k]})
                # (am)b = a(mb)
                lhs = m.act_right(m.act_left({i: one}, mk), {j: one})
                rhs = m.act_left({i: one}, m.act_right(mk, {j: one}))
                if lhs != rhs:
                    bad.append({"kind": "middle_associativity", "triple": [i, j, k]})
    for k in range(m.dim):
        mk = {k: one}
        if m.act_left(a.unit, mk) != mk:
            bad.append({"kind": "unit", "basis": k, "side": "left"})
        if m.act_right(mk, a.unit) != mk:
            bad.append({"kind": "unit", "basis": k, "side": "right"})
    return bad


def commutativity_report(a: Algebra, m: Bimodule | None = None) -> dict:
    rep = {"algebra_commutative": a.is_commutative()}
    if m is not None:
        rep["bimodule_symmetric"] = m.is_symmetric()
    return rep


def check_central_morphism(eps: AlgebraMorphism) -> bool:
    """True when every image eps(b) commutes with all of the target."""
    t = eps.target
    one = t.field.one
    for j in range(eps.source.dim):
        img = eps.apply_basis(j)
        for i in range(t.dim):
            e = {i: one}
            if t.multiply(img, e) != t.multiply(e, img):
                return False
    return True


def is_w_witness_pair(bim: Bimodule, e: dict, m: dict) -> bool:
    """e idempotent in the algebra and acting as identity on m, both sides."""
    a = bim.over
    return (
        a.multiply(e, e) == _clean(e)
        and bim.act_left(e, m) == _clean(m)
        and bim.act_right(m, e) == _clean(m)
    )


def is_t_witness_pair(eps: AlgebraMorphism, e: dict, f: dict) -> bool:
    """e, f idempotent with eps(f) absorbing e from both sides."""
    a = eps.target
    b = eps.source
    ef = eps.apply(f)
    return (
        a.multiply(e, e) == _clean(e)
        and b.multiply(f, f) == _clean(f)
        and a.multiply(e, ef) == _clean(e)
        and a.multiply(ef, e) == _clean(e)
    )


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def ground_field_algebra(field) -> Algebra:
    one = field.one
    return Algebra(field, 1, [[{0: one}]], {0: one}, label="k")


def truncated_polynomial_algebra(field, order: int) -> Algebra:
    """k[x]/(x^order); basis 1, x, ..., x^(order-1)."""
    if order < 1:
        raise ValidationError("truncation order must be at least 1", order=order)
    one = field.one
    pairs = [
        [({i + j: one} if i + j < order else {}) for j in range(order)]
        for i in range(order)
    ]
    return Algebra(field, order, pairs, {0: one}, label=f"k[x]/(x^{order})")


def group_algebra(field, table: list[list[int]], label: str = "") -> Algebra:
    """Group algebra from a Cayley table; the table is checked to be a group."""
    n = len(table)
    if any(len(row) != n for row in table):
        raise ValidationError("Cayley table is not square")
    for row in table:
        for v in row:
            if not (0 <= v < n):
                raise ValidationError("Cayley table entry out of range", entry=v)
    identity = None
    for e in range(n):
        if all(table[e][g] == g and table[g][e] == g for g in range(n)):
            identity = e
            break
    if identity is None:
        raise ValidationError("Cayley table has no identity element")
    for g in range(n):
        if not any(table[g][h] == identity and table[h][g] == identity for h in range(n)):
            raise ValidationError("Cayley table element has no inverse", element=g)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if table[table[i][j]][k] != table[i][table[j][k]]:
                    raise ValidationError(
                        "Cayley table is not associative", triple=[i, j, k]
                    )
    one = field.one
    pairs = [[{table[i][j]: one} for j in range(n)] for i in range(n)]
    return Algebra(field, n, pairs, {identity: one}, label=label or f"group({n})")


def upper_triangular_2x2(field) -> Algebra:
    """Upper-triangular 2x2 matrices; basis e11, e12, e22."""
    one = field.one
    e11, e12, e22 = 0, 1, 2
    pairs = [[{} for _ in range(3)] for _ in range(3)]
    pairs[e11][e11] = {e11: one}
    pairs[e11][e12] = {e12: one}
    pairs[e12][e22] = {e12: one}
    pairs[e22][e22] = {e22: one}
    return Algebra(field, 3, pairs, {e11: one, e22: one}, label="upper_triangular_2x2")


def named_algebra(field, kind: str, **params) -> Algebra:
    """Named constructors used by the JSON loaders and the CLI."""
    if kind == "ground_field":
        return ground_field_algebra(field)
    if kind == "truncated_polynomial":
        return truncated_polynomial_algebra(field, int(params.get("order", 2)))
    if kind == "group_algebra":
        table = params.get("table")
        if table is None:
            raise ValidationError("group_algebra needs a 'table'")
        return group_algebra(field, table, label=params.get("label", ""))
    if kind == "upper_triangular":
        return upper_triangular_2x2(field)
    if kind == "matrix":
        inner = params.get("inner")
        size = int(params.get("size", 2))
        if inner is None:
            raise ValidationError("matrix algebra needs an 'inner' algebra spec")
        base = algebra_from_json(inner, field=field)
        alg, _ = matrix_algebra(base, size)
        return alg
    raise ValidationError(f"unknown builtin algebra {kind!r}", kind=kind)


def symmetric_group_table(n: int) -> list[list[int]]:
    """Cayley table of S_n; product g*h applies h first, then g."""
    elems = sorted(itertools.permutations(range(n)))
    index = {g: i for i, g in enumerate(elems)}
    return [
        [index[tuple(g[h[k]] for k in range(n))] for h in elems]
        for g in elems
    ]


def cyclic_group_table(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def matrix_algebra(a: Algebra, size: int) -> tuple[Algebra, AlgebraMorphism]:
    """size x size matrices over a, with the corner embedding into slot (0,0).

    Basis order is (row, col, inner basis index), lexicographic.  The corner
    embedding is multiplicative; it is unital only for size 1, and the
    morphism's ``unital`` flag records that.
    """
    if size < 1:
        raise ValidationError("matrix size must be at least 1", size=size)
    f = a.field
    d = a.dim
    dim = size * size * d

    def flat(r: int, c: int, k: int) -> int:
        return (r * size + c) * d + k

    pairs = [[{} for _ in range(dim)] for _ in range(dim)]
    for r1 in range(size):
        for c1 in range(size):
            for k1 in range(d):
                i = flat(r1, c1, k1)
                for c2 in range(size):
                    for k2 in range(d):
                        j = flat(c1, c2, k2)
                        prod = a.pair(k1, k2)
                        if prod:
                            pairs[i][j] = {flat(r1, c2, t): v for t, v in prod.items()}
    unit = {}
    for r in range(size):
        for k, v in a.unit.items():
            unit[flat(r, r, k)] = v
    label = f"M{size}({a.label})" if a.label else f"M{size}"
    big = Algebra(f, dim, pairs, unit, label=label)
    corner = Matrix.from_entries(
        f, dim, d, [(flat(0, 0, k), k, f.one) for k in range(d)]
    )
    emb = AlgebraMorphism(a, big, corner, label="corner")
    return big, emb


def matrix_bimodule(big: Algebra, m: Bimodule, size: int) -> tuple[Bimodule, Matrix]:
    """size x size matrices over a bimodule, over the matching matrix algebra.

    Returns the bimodule together with the corner embedding matrix of the
    underlying module spaces.
    """
    f = m.field
    d = m.over.dim
    dm = m.dim
    dim = size * size * dm
    if big.dim != size * size * d:
        raise ValidationError(
            "matrix algebra does not match bimodule base algebra",
            algebra_dim=big.dim,
            expected=size * size * d,
        )

    def aflat(r: int, c: int, k: int) -> int:
        return (r * size + c) * d + k

    def mflat(r: int, c: int, k: int) -> int:
        return (r * size + c) * dm + k

    left = [[{} for _ in range(dim)] for _ in range(big.dim)]
    right = [[{} for _ in range(big.dim)] for _ in range(dim)]
    for r1 in range(size):
        for c1 in range(size):
            for k1 in range(d):
                ai = aflat(r1, c1, k1)
                for c2 in range(size):
                    for k2 in range(dm):
                        mj = mflat(c1, c2, k2)
                        prod = m.left_pair(k1, k2)
                        if prod:
                            left[ai][mj] = {
                                mflat(r1, c2, t): v for t, v in prod.items()
                            }
    for r1 in range(size):
        for c1 in range(size):
            for k1 in range(dm):
                mj = mflat(r1, c1, k1)
                for c2 in range(size):
                    for k2 in range(d):
                        ai = aflat(c1, c2, k2)
                        prod = m.right_pair(k1, k2)
                        if prod:
                            right[mj][ai] = {
                                mflat(r1, c2, t): v for t, v in prod.items()
                            }
    label = f"M{size}({m.label})" if m.label else f"M{size}"
    bigmod = Bimodule(big, dim, left, right, label=label)
    corner = Matrix.from_entries(
        f, dim, dm, [(mflat(0, 0, k), k, f.one) for k in range(dm)]
    )
    return bigmod, corner


# ---------------------------------------------------------------------------
# JSON formats
# ---------------------------------------------------------------------------
#
# algebra:  {"field": {"kind": "Q"}, "dim": d,
#            "mult": [[i, j, k, "num/den"], ...], "unit": ["...", ...]}
# bimodule: {"dim": m, "left": [[a_i, m_j, m_k, "c"], ...],
#            "right": [[m_j, a_i, m_k, "c"], ...]}
# morphism: {"matrix": [[target_row, source_col, "c"], ...]}
#
# Omitted entries are zero.  A {"builtin": ...} algebra object delegates to
# named_algebra.


def algebra_from_json(obj: dict, field=None) -> Algebra:
    if "builtin" in obj:
        if field is None:
            field = field_from_json(obj.get("field", {"kind": "Q"}))
        params = {k: v for k, v in obj.items() if k not in ("builtin", "field")}
        return named_algebra(field, obj["builtin"], **params)
    if field is None:
        field = field_from_json(obj.get("field", {"kind": "Q"}))
    try:
        dim = int(obj["dim"])
    except KeyError as exc:
        raise ValidationError("algebra spec needs 'dim'") from exc
    pairs = [[{} for _ in range(dim)] for _ in range(dim)]
    for quad in obj.get("mult", []):
        i, j, k, lit = quad
        if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
            raise ValidationError("mult entry out of range", entry=quad)
        v = field.parse(lit)
        if v:
            pairs[i][j][k] = field.add(pairs[i][j].get(k, field.zero), v)
    unit_list = obj.get("unit")
    if unit_list is None or len(unit_list) != dim:
        raise ValidationError("algebra spec needs a dense 'unit' of length dim")
    unit = {}
    for k, lit in enumerate(unit_list):
        v = field.parse(lit)
        if v:
            unit[k] = v
    for i in range(dim):
        for j in range(dim):
            pairs[i][j] = _clean(pairs[i][j])
    a = Algebra(field, dim, pairs, unit, label=obj.get("label", ""))
    bad = validate_algebra(a)
    if bad:
        raise ValidationError("algebra axioms fail", violations=bad[:5])
    return a


def algebra_to_json(a: Algebra) -> dict:
    fmt = a.field.fmt
    mult = []
    for i in range(a.dim):
        for j in range(a.dim):
            for k in sorted(a.pairs[i][j]):
                mult.append([i, j, k, fmt(a.pairs[i][j][k])])
    unit = [fmt(a.unit.get(k, a.field.zero)) for k in range(a.dim)]
    out = {"field": a.field.to_json(), "dim": a.dim, "mult": mult, "unit": unit}
    if a.label:
        out["label"] = a.label
    return out


def bimodule_from_json(obj: dict, over: Algebra) -> Bimodule:
    field = over.field
    if "builtin" in obj:
        if obj["builtin"] == "regular":
            return Bimodule.regular(over)
        raise ValidationError(f"unknown builtin bimodule {obj['builtin']!r}")
    try:
        dim = int(obj["dim"])
    except KeyError as exc:
        raise ValidationError("bimodule spec needs 'dim'") from exc
    left = [[{} for _ in range(dim)] for _ in range(over.dim)]
    right = [[{} for _ in range(over.dim)] for _ in range(dim)]
    for quad in obj.get("left", []):
        i, j, k, lit = quad
        if not (0 <= i < over.dim and 0 <= j < dim and 0 <= k < dim):
            raise ValidationError("left action entry out of range", entry=quad)
        v = field.parse(lit)
        if v:
            left[i][j][k] = field.add(left[i][j].get(k, field.zero), v)
    for quad in obj.get("right", []):
        j, i, k, lit = quad
        if not (0 <= j < dim and 0 <= i < over.dim and 0 <= k < dim):
            raise ValidationError("right action entry out of range", entry=quad)
        v = field.parse(lit)
        if v:
            right[j][i][k] = field.add(right[j][i].get(k, field.zero), v)
    for i in range(over.dim):
        for j in range(dim):
            left[i][j] = _clean(left[i][j])
    for j in range(dim):
        for i in range(over.dim):
            right[j][i] = _clean(right[j][i])
    m = Bimodule(over, dim, left, right, label=obj.get("label", ""))
    bad = validate_bimodule(m)
    if bad:
        raise ValidationError("bimodule axioms fail", violations=bad[:5])
    return m


def bimodule_to_json(m: Bimodule) -> dict:
    fmt = m.field.fmt
    left = []
    for i in range(m.over.dim):
        for j in range(m.dim):
            for k in sorted(m.left[i][j]):
                left.append([i, j, k, fmt(m.left[i][j][k])])
    right = []
    for j in range(m.dim):
        for i in range(m.over.dim):
            for k in sorted(m.right[j][i]):
                right.append([j, i, k, fmt(m.right[j][i][k])])
    out = {"dim": m.dim, "left": left, "right": right}
    if m.label:
        out["label"] = m.label
    return out


def morphism_from_json(obj: dict, source: Algebra, target: Algebra) -> AlgebraMorphism:
    if obj == "unit" or (isinstance(obj, dict) and obj.get("builtin") == "unit"):
        # the unit map from a one-dimensional algebra spanned by its unit
        if source.dim != 1 or source.unit != {0: source.field.one}:
            raise ValidationError(
                "builtin 'unit' morphism needs a one-dimensional source spanned by 1"
            )
        mat = Matrix.from_columns(source.field, target.dim, [dict(target.unit)])
        return AlgebraMorphism(source, target, mat, label="unit")
    field = source.field
    entries = []
    for trip in obj.get("matrix", []):
        r, c, lit = trip
        entries.append((int(r), int(c), field.parse(lit)))
    mat = Matrix.from_entries(field, target.dim, source.dim, entries)
    mor = AlgebraMorphism(source, target, mat, label=obj.get("label", ""))
    bad = mor.validate()
    if bad:
        raise ValidationError("morphism is not multiplicative", violations=bad[:5])
    return mor


def morphism_to_json(m: AlgebraMorphism) -> dict:
    out = {"matrix": m.matrix.to_entries(), "unital": m.unital}
    if m.label:
        out["label"] = m.label
    return out


def vector_from_json(field, lits: list, dim: int) -> dict:
    if len(lits) != dim:
        raise ValidationError("vector length mismatch", expected=dim, got=len(lits))
    out = {}
    for i, lit in enumerate(lits):
        v = field.parse(lit)
        if v:
            out[i] = v
    return out


def vector_to_json(field, vec: dict, dim: int) -> list:
    return [field.fmt(vec.get(i, field.zero)) for i in range(dim)]
