"""Concrete face systems built from algebras, bimodules, and simplicial sets.

Every system here lives on a tensor-power module with a documented slot
order and faces given by structure-constant products:

* the classical cyclic-bar system (one candidate per face, the oracle);
* the simplicial-set system: one algebra factor per non-basepoint simplex,
  candidates enumerate the orderings of each face-map fiber;
* the triangular system: algebra factors at positions (p, q), p < q, with
  permutation candidates at the ends and swap candidates in the middle;
* the two-algebra system: factors of one algebra on a diagonal and of a
  second algebra above it, connected by an algebra morphism;
* idempotent witness vectors fixed by every face candidate, and the
  matrix-extension comparison report built from the corner embeddings.
"""

from __future__ import annotations

import itertools

from .algebras import (
    Algebra,
    AlgebraMorphism,
    Bimodule,
    commutativity_report,
    is_t_witness_pair,
    is_w_witness_pair,
    matrix_algebra,
    matrix_bimodule,
)
from .config import DEFAULT_CAPS
from .errors import ResourceCapError, ValidationError
from .linalg import Matrix, Subspace
from .simplicial import PointedSimplicialSet, circle
from .systems import (
    LambdaMorphism,
    LambdaSystem,
    ThetaComplex,
    check_lambda_morphism,
    compute_theta,
    induced_theta_map,
    validate_subcomplex,
)

__all__ = [
    "TensorLayout",
    "hochschild_system",
    "loday_chain",
    "higher_hochschild_system",
    "sphere2_system",
    "secondary_system",
    "w_witness_vector",
    "t_witness_vector",
    "witness_w_suite",
    "witness_t_suite",
    "corner_chain_map",
    "morita_report",
    "compare_systems",
]


class TensorLayout:
    """Row-major coordinates for a tensor product of based factors.

    Slot 0 is the most significant; ``encode`` and ``decode`` translate
    between index tuples and flat basis codes.
    """

    __slots__ = ("dims", "total")

    def __init__(self, dims: tuple[int, ...]):
        self.dims = dims
        total = 1
        for d in dims:
            total *= d
        self.total = total

    def encode(self, idx) -> int:
        code = 0
        for d, i in zip(self.dims, idx):
            code = code * d + i
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for d in reversed(self.dims):
            out.append(code % d)
            code //= d
        return tuple(reversed(out))

    def expand(self, field, slots) -> dict:
        """Tensor product of per-slot sparse vectors, as a sparse vector."""
        partial = {0: field.one}
        mul = field.mul
        for d, vec in zip(self.dims, slots):
            if not vec:
                return {}
            nxt = {}
            for code, cf in partial.items():
                base = code * d
                for i, v in vec.items():
                    nxt[base + i] = mul(cf, v)
            partial = nxt
        return partial


def _alg_product(a: Algebra, factors: list[dict]) -> dict:
    if not factors:
        return dict(a.unit)
    acc = factors[0]
    for g in factors[1:]:
        acc = a.multiply(acc, g)
        if not acc:
            return {}
    return acc


def _mixed_product(bim: Bimodule, factors: list[dict], module_pos: int) -> dict:
    """Product of a sequence with one module factor at ``module_pos``."""
    mvec = factors[module_pos]
    prefix = factors[:module_pos]
    suffix = factors[module_pos + 1 :]
    if prefix:
        mvec = bim.act_left(_alg_product(bim.over, prefix), mvec)
        if not mvec:
            return {}
    if suffix:
        mvec = bim.act_right(mvec, _alg_product(bim.over, suffix))
    return mvec


def _check_pair(a: Algebra, m: Bimodule) -> None:
    if m.over is not a:
        raise ValidationError("bimodule is not over the given algebra")


# ---------------------------------------------------------------------------
# classical cyclic-bar system (the oracle)
# ---------------------------------------------------------------------------


def hochschild_system(a: Algebra, m: Bimodule, max_degree: int) -> LambdaSystem:
    """The classical complex on M (x) A^n with one candidate per face.

    d_0 multiplies the first algebra factor into the module from the right,
    middle faces merge adjacent algebra factors, and the last face wraps the
    final factor onto the module from the left.  This construction is kept
    independent of the simplicial-set machinery so the two can corroborate
    each other.
    """
    _check_pair(a, m)
    field = a.field
    layouts = [TensorLayout((m.dim,) + (a.dim,) * n) for n in range(max_degree + 1)]
    dims = tuple(layouts[n].total for n in range(max_degree + 1))
    labels = {(n, i): (0,) for n in range(1, max_degree + 1) for i in range(n + 1)}
    one = field.one

    def column_fn(n, i, lab, code):
        idx = layouts[n].decode(code)
        mvec = {idx[0]: one}
        avecs = [{idx[j]: one} for j in range(1, n + 1)]
        if i == 0:
            slots = [m.act_right(mvec, avecs[0])] + avecs[1:]
        elif i == n:
            slots = [m.act_left(avecs[-1], mvec)] + avecs[:-1]
        else:
            merged = a.multiply(avecs[i - 1], avecs[i])
            slots = [mvec] + avecs[: i - 1] + [merged] + avecs[i + 1 :]
        return layouts[n - 1].expand(field, slots)

    tag = f"classical({a.label or 'A'},{m.label or 'M'})"
    return LambdaSystem(field, max_degree, dims, labels, column_fn, label=tag)


# ---------------------------------------------------------------------------
# simplicial-set systems
# ---------------------------------------------------------------------------


def _simplicial_engine(a: Algebra, m: Bimodule, x: PointedSimplicialSet,
                       caps=DEFAULT_CAPS):
    """Shared dims/labels/columns for systems over a simplicial set.

    Simplex ids double as slot indices: slot 0 holds the module factor at
    the basepoint and slot j holds the algebra factor of simplex j.  For
    each face map, each target simplex collects the ordered product of its
    fiber; candidate labels pick one ordering per fiber of size > 1, listed
    per target id, identity orderings first.
    """
    _check_pair(a, m)
    field = a.field
    bad = x.validate()
    if bad:
        raise ValidationError("simplicial set axioms fail", violations=bad[:5])
    max_degree = x.max_level
    layouts = [
        TensorLayout((m.dim,) + (a.dim,) * (x.size(n) - 1))
        for n in range(max_degree + 1)
    ]
    dims = tuple(layouts[n].total for n in range(max_degree + 1))

    fibers = {}
    multis = {}
    labels = {}
    for n in range(1, max_degree + 1):
        for i in range(n + 1):
            part = x.fibers(n, i)
            fibers[(n, i)] = part
            multi = part.multi_fibers()
            for _, fib in multi:
                if len(fib) > caps.max_fiber_size:
                    raise ResourceCapError(
                        "fiber exceeds cap", degree=n, position=i,
                        size=len(fib), cap=caps.max_fiber_size,
                    )
            multis[(n, i)] = multi
            perm_sets = [
                tuple(itertools.permutations(range(len(fib))))
                for _, fib in multi
            ]
            labels[(n, i)] = tuple(itertools.product(*perm_sets))

    one = field.one

    def column_fn(n, i, lab, code):
        idx = layouts[n].decode(code)
        part = fibers[(n, i)]
        perm_of = {t: p for (t, _), p in zip(multis[(n, i)], lab)}
        slots = []
        for t in range(x.size(n - 1)):
            fib = part.fiber_of(t)
            perm = perm_of.get(t)
            ordered = [fib[p] for p in perm] if perm else fib
            factors = [
                {idx[s]: one} for s in ordered
            ]
            if t == 0:
                pos = ordered.index(0)
                slots.append(_mixed_product(m, factors, pos))
            else:
                slots.append(_alg_product(a, factors))
        return layouts[n - 1].expand(field, slots)

    return dims, labels, column_fn


def higher_hochschild_system(a: Algebra, m: Bimodule, x: PointedSimplicialSet,
                             caps=DEFAULT_CAPS) -> LambdaSystem:
    """The system over a pointed simplicial set with all fiber orderings."""
    dims, labels, column_fn = _simplicial_engine(a, m, x, caps)
    tag = f"simplicial({a.label or 'A'},{m.label or 'M'},{x.label or 'X'})"
    return LambdaSystem(a.field, x.max_level, dims, labels, column_fn, label=tag)


def loday_chain(a: Algebra, m: Bimodule, x: PointedSimplicialSet,
                caps=DEFAULT_CAPS) -> LambdaSystem:
    """The commutative-case chain: fiber products with no ordering choices.

    Requires a commutative algebra and symmetric bimodule, where unordered
    fiber products are well defined; the faces equal the reference faces of
    the full system, wrapped with a single candidate each.
    """
    rep = commutativity_report(a, m)
    if not rep["algebra_commutative"]:
        raise ValidationError("commutative chain needs a commutative algebra")
    if not rep["bimodule_symmetric"]:
        raise ValidationError("commutative chain needs a symmetric bimodule")
    dims, labels, column_fn = _simplicial_engine(a, m, x, caps)
    trimmed = {key: (labs[0],) for key, labs in labels.items()}
    tag = f"commutative({a.label or 'A'},{m.label or 'M'},{x.label or 'X'})"
    return LambdaSystem(a.field, x.max_level, dims, trimmed, column_fn, label=tag)


# ---------------------------------------------------------------------------
# the triangular system
# ---------------------------------------------------------------------------


def _tri_slot(n: int, p: int, q: int) -> int:
    """Slot of position (p, q), 1 <= p < q <= n, row-major, after the module."""
    return 1 + (p - 1) * (2 * n - p) // 2 + (q - p - 1)


def sphere2_system(a: Algebra, m: Bimodule, max_degree: int,
                   caps=DEFAULT_CAPS) -> LambdaSystem:
    """Faces on M (x) A^(n(n-1)/2) with factors at positions (p, q), p < q.

    d_0 consumes row 1 into the module, multiplying the module and the row
    entries in a chosen order (candidates: all permutations); d_n does the
    same with the last column; middle faces merge rows and columns i, i+1
    pairwise and the (i, i+1) entry onto the module, each merge in one of
    two orders.
    """
    _check_pair(a, m)
    field = a.field
    layouts = [
        TensorLayout((m.dim,) + (a.dim,) * (n * (n - 1) // 2))
        for n in range(max_degree + 1)
    ]
    dims = tuple(layouts[n].total for n in range(max_degree + 1))
    labels = {}
    for n in range(1, max_degree + 1):
        head = tuple(sorted(itertools.permutations((0,) + tuple(range(2, n + 1)))))
        tail = tuple(sorted(itertools.permutations(tuple(range(n)))))
        labels[(n, 0)] = head
        labels[(n, n)] = tail
        for i in range(1, n):
            labels[(n, i)] = tuple(itertools.product((0, 1), repeat=n - 1))
    one = field.one

    def column_fn(n, i, lab, code):
        idx = layouts[n].decode(code)
        mvec = {idx[0]: one}

        def avec(p, q):
            return {idx[_tri_slot(n, p, q)]: one}

        tgt = layouts[n - 1]
        if i == 0 or i == n:
            # by-position values: 0 is the module, others are row-1 or
            # last-column entries; the candidate lists the multiplication order
            values = {0: mvec}
            if i == 0:
                for q in range(2, n + 1):
                    values[q] = avec(1, q)
            else:
                for p in range(1, n):
                    values[p] = avec(p, n)
            factors = [values[s] for s in lab]
            slots = [_mixed_product(m, factors, lab.index(0))]
            for pp in range(1, n):
                for qq in range(pp + 1, n):
                    if i == 0:
                        slots.append(avec(pp + 1, qq + 1))
                    else:
                        slots.append(avec(pp, qq))
            return tgt.expand(field, slots)
        # middle face: lab = (s_1, ..., s_{n-1}), 0 keeps order, 1 swaps
        def two(x, y, swap):
            return a.multiply(y, x) if swap else a.multiply(x, y)

        s = dict(enumerate(lab, start=1))
        if s[i]:
            module = m.act_left(avec(i, i + 1), mvec)
        else:
            module = m.act_right(mvec, avec(i, i + 1))
        slots = [module]
        for pp in range(1, n):
            for qq in range(pp + 1, n):
                # (pp, qq) runs over target positions, 1 <= pp < qq <= n-1
                if qq == i and pp < i:
                    slots.append(two(avec(pp, i), avec(pp, i + 1), s[pp]))
                elif pp == i and qq >= i + 1:
                    slots.append(two(avec(i, qq + 1), avec(i + 1, qq + 1), s[qq]))
                else:
                    sp = pp + 1 if pp > i else pp
                    sq = qq + 1 if qq > i else qq
                    slots.append(avec(sp, sq))
        return tgt.expand(field, slots)

    tag = f"triangular({a.label or 'A'},{m.label or 'M'})"
    return LambdaSystem(field, max_degree, dims, labels, column_fn, label=tag)


# ---------------------------------------------------------------------------
# the two-algebra system
# ---------------------------------------------------------------------------


def _pair_slot(n: int, p: int, q: int) -> int:
    """Slot of pair (p, q), 0 <= p < q <= n, row-major, after the diagonal."""
    return (n + 1) + p * (2 * n + 1 - p) // 2 + (q - p - 1)


def secondary_system(a: Algebra, b: Algebra, eps: AlgebraMorphism,
                     max_degree: int, caps=DEFAULT_CAPS) -> LambdaSystem:
    """Faces on A^(n+1) (x) B^(n(n+1)/2) connected by a morphism B -> A.

    Face i < n merges diagonal factors i, i+1; the (i, i+1) factor of B
    enters that product through the morphism, placed left, center, or right
    (the ternary candidate component), while the other B-factors of the
    collapsed rows and columns merge pairwise in one of two orders.  The
    last face wraps diagonal factor n onto factor 0 the same way.  With a
    one-dimensional B this reduces to the classical system on A, matrix for
    matrix.
    """
    if eps.source is not b or eps.target is not a:
        raise ValidationError("morphism endpoints do not match the algebras")
    field = a.field
    layouts = [
        TensorLayout((a.dim,) * (n + 1) + (b.dim,) * (n * (n + 1) // 2))
        for n in range(max_degree + 1)
    ]
    dims = tuple(layouts[n].total for n in range(max_degree + 1))
    labels = {}
    for n in range(1, max_degree + 1):
        for i in range(n + 1):
            ternary_at = 0 if i == n else i
            ranges = [
                (0, 1, 2) if j == ternary_at else (0, 1)
                for j in range(n)
            ]
            labels[(n, i)] = tuple(itertools.product(*ranges))
    one = field.one

    def column_fn(n, i, lab, code):
        idx = layouts[n].decode(code)

        def da(j):
            return {idx[j]: one}

        def db(p, q):
            return {idx[_pair_slot(n, p, q)]: one}

        def triple(a1, a2, bvec, mode):
            eb = eps.apply(bvec)
            if mode == 0:
                return _alg_product(a, [eb, a1, a2])
            if mode == 1:
                return _alg_product(a, [a1, eb, a2])
            return _alg_product(a, [a1, a2, eb])

        def two(b1, b2, swap):
            return b.multiply(b2, b1) if swap else b.multiply(b1, b2)

        tgt = layouts[n - 1]
        if i < n:
            diag = [da(j) for j in range(i)]
            diag.append(triple(da(i), da(i + 1), db(i, i + 1), lab[i]))
            diag.extend(da(j) for j in range(i + 2, n + 1))
            pairs = []
            for pp in range(n):
                for qq in range(pp + 1, n):
                    if qq == i and pp < i:
                        pairs.append(two(db(pp, i), db(pp, i + 1), lab[pp]))
                    elif pp == i and qq >= i + 1:
                        pairs.append(two(db(i, qq + 1), db(i + 1, qq + 1), lab[qq]))
                    else:
                        sp = pp + 1 if pp > i else pp
                        sq = qq + 1 if qq > i else qq
                        pairs.append(db(sp, sq))
            return tgt.expand(field, diag + pairs)
        # wrap: diagonal n folds onto diagonal 0 through the (0, n) factor
        diag = [triple(da(n), da(0), db(0, n), lab[0])]
        diag.extend(da(j) for j in range(1, n))
        pairs = []
        for pp in range(n):
            for qq in range(pp + 1, n):
                if pp == 0:
                    pairs.append(two(db(0, qq), db(qq, n), lab[qq]))
                else:
                    pairs.append(db(pp, qq))
        return tgt.expand(field, diag + pairs)

    tag = f"paired({a.label or 'A'},{b.label or 'B'})"
    return LambdaSystem(field, max_degree, dims, labels, column_fn, label=tag)


# ---------------------------------------------------------------------------
# witness vectors
# ---------------------------------------------------------------------------


def w_witness_vector(m: Bimodule, x: PointedSimplicialSet, e: dict,
                     mvec: dict, n: int) -> dict:
    """The module vector in slot 0 and the idempotent in every other slot."""
    a = m.over
    layout = TensorLayout((m.dim,) + (a.dim,) * (x.size(n) - 1))
    return layout.expand(m.field, [mvec] + [e] * (x.size(n) - 1))


def t_witness_vector(a: Algebra, b: Algebra, e: dict, f: dict, n: int) -> dict:
    """One idempotent along the diagonal, the other in every pair slot."""
    layout = TensorLayout((a.dim,) * (n + 1) + (b.dim,) * (n * (n + 1) // 2))
    return layout.expand(a.field, [e] * (n + 1) + [f] * (n * (n + 1) // 2))


def _transport_report(system: LambdaSystem, vectors: list[dict]) -> dict:
    """Check every face candidate maps each witness onto the previous one."""
    checked = 0
    failures = []
    for n in range(1, len(vectors)):
        for i in range(n + 1):
            for lab in system.labels_at(n, i):
                img = system.apply_face(n, i, lab, vectors[n])
                checked += 1
                if img != vectors[n - 1]:
                    failures.append({"degree": n, "position": i})
                    if len(failures) >= 5:
                        return {"ok": False, "checked": checked,
                                "failures": failures}
    return {"ok": not failures, "checked": checked, "failures": failures}


def _boundary_parity_report(system: LambdaSystem, vectors: list[dict]) -> dict:
    """Alternating sums on the witnesses: zero in odd degrees, the previous
    witness in even degrees (an odd/even count of cancelling terms)."""
    entries = []
    ok = True
    for n in range(1, len(vectors)):
        img = system.apply_boundary(n, vectors[n])
        if n % 2 == 1:
            expected = "zero"
            good = not img
        else:
            expected = "previous_witness"
            good = img == vectors[n - 1]
        ok = ok and good
        entries.append({
            "n": n,
            "boundary": "zero" if not img else "previous_witness"
            if img == vectors[n - 1] else "other",
            "expected": expected,
            "ok": good,
        })
    return {"ok": ok, "entries": entries}


def _span_chain(field, system: LambdaSystem, vectors: list[dict]) -> list[Subspace]:
    return [
        Subspace.from_vectors(field, system.dims[n], [vectors[n]])
        for n in range(len(vectors))
    ]


def witness_w_suite(a: Algebra, m: Bimodule, x: PointedSimplicialSet,
                    e: dict, mvec: dict, theta_degree: int | None = None,
                    caps=DEFAULT_CAPS) -> dict:
    """Transport, span validation, membership, and boundary parity for the
    module-type witness on a simplicial-set system."""
    if not is_w_witness_pair(m, e, mvec):
        raise ValidationError(
            "witness data must be an idempotent acting as identity on the module vector"
        )
    system = higher_hochschild_system(a, m, x, caps)
    field = a.field
    vectors = [w_witness_vector(m, x, e, mvec, n) for n in range(x.max_level + 1)]
    spans = _span_chain(field, system, vectors)
    sub_report = validate_subcomplex(system, spans)
    n_theta = x.max_level if theta_degree is None else theta_degree
    theta = compute_theta(
        higher_hochschild_system(a, m, x.truncate(n_theta), caps), caps
    )
    membership = [
        {"n": n, "in_theta": theta.subspaces[n].contains(vectors[n])}
        for n in range(n_theta + 1)
    ]
    return {
        "kind": "module_idempotent",
        "max_degree": x.max_level,
        "transport": _transport_report(system, vectors),
        "span_is_subcomplex": sub_report,
        "theta_membership": membership,
        "theta_checked_up_to": n_theta,
        "boundary_parity": _boundary_parity_report(system, vectors),
    }


def witness_t_suite(a: Algebra, b: Algebra, eps: AlgebraMorphism,
                    e: dict, f: dict, max_degree: int,
                    theta_degree: int | None = None,
                    caps=DEFAULT_CAPS) -> dict:
    """The same suite for the two-idempotent witness on the paired system.

    Direct membership is checked up to ``theta_degree`` (the ambient grows
    too fast beyond desk scale); above that the validated one-dimensional
    subcomplex certifies membership, since the computed space contains
    every subcomplex degreewise.
    """
    if not is_t_witness_pair(eps, e, f):
        raise ValidationError(
            "witness data must be idempotents absorbing through the morphism"
        )
    system = secondary_system(a, b, eps, max_degree, caps)
    field = a.field
    vectors = [t_witness_vector(a, b, e, f, n) for n in range(max_degree + 1)]
    spans = _span_chain(field, system, vectors)
    sub_report = validate_subcomplex(system, spans)
    n_theta = max_degree if theta_degree is None else theta_degree
    theta = compute_theta(secondary_system(a, b, eps, n_theta, caps), caps)
    membership = [
        {"n": n, "in_theta": theta.subspaces[n].contains(vectors[n])}
        for n in range(n_theta + 1)
    ]
    return {
        "kind": "paired_idempotents",
        "max_degree": max_degree,
        "transport": _transport_report(system, vectors),
        "span_is_subcomplex": sub_report,
        "theta_membership": membership,
        "theta_checked_up_to": n_theta,
        "membership_above_direct_check": "certified by subcomplex containment",
        "boundary_parity": _boundary_parity_report(system, vectors),
    }


# ---------------------------------------------------------------------------
# matrix extension comparison
# ---------------------------------------------------------------------------


def corner_chain_map(a: Algebra, m: Bimodule, corner_a: Matrix,
                     corner_m: Matrix, max_degree: int,
                     big_dims) -> list[Matrix]:
    """Degreewise corner embeddings M (x) A^n -> M_l(M) (x) M_l(A)^n."""
    field = a.field
    mats = []
    for n in range(max_degree + 1):
        src = TensorLayout((m.dim,) + (a.dim,) * n)
        tgt = TensorLayout(
            (corner_m.nrows,) + (corner_a.nrows,) * n
        )
        if tgt.total != big_dims[n]:
            raise ValidationError("corner map shape mismatch", degree=n)
        cols = []
        for code in range(src.total):
            idx = src.decode(code)
            slots = [dict(corner_m.column(idx[0]))]
            slots.extend(dict(corner_a.column(idx[j])) for j in range(1, n + 1))
            cols.append(tgt.expand(field, slots))
        mats.append(Matrix.from_columns(field, big_dims[n], cols))
    return mats


def morita_report(a: Algebra, m: Bimodule, size: int, max_degree: int,
                  caps=DEFAULT_CAPS) -> dict:
    """Compare four homology tables across the matrix extension.

    Tables: (1) the circle system of (a, m), full by commutativity; (2) the
    classical system of (a, m); (3) the classical system of the matrix
    extension; (4) the computed subcomplex of the circle system of the
    matrix extension.  Alongside: certificates for the corner embedding and
    the identity comparison map, their induced maps on homology, and the
    matrix identity composite = identity_after_corner.
    """
    rep = commutativity_report(a, m)
    if not rep["algebra_commutative"] or not rep["bimodule_symmetric"]:
        raise ValidationError(
            "matrix comparison needs a commutative algebra and symmetric bimodule"
        )
    field = a.field
    big, corner_emb = matrix_algebra(a, size)
    bigmod, corner_mod = matrix_bimodule(big, m, size)
    circ = circle(max_degree)

    sys_small_circle = higher_hochschild_system(a, m, circ, caps)
    sys_small_classical = hochschild_system(a, m, max_degree)
    sys_big_classical = hochschild_system(big, bigmod, max_degree)
    sys_big_circle = higher_hochschild_system(big, bigmod, circ, caps)

    theta1 = compute_theta(sys_small_circle, caps)
    theta2 = compute_theta(sys_small_classical, caps)
    theta3 = compute_theta(sys_big_classical, caps)
    theta4 = compute_theta(sys_big_circle, caps)

    tables = [theta1.homology(), theta2.homology(), theta3.homology(),
              theta4.homology()]
    betti = [[e["betti"] for e in t["entries"]] for t in tables]
    agree = all(b == betti[0] for b in betti[1:])

    corner_mats = corner_chain_map(
        a, m, corner_emb.matrix, corner_mod, max_degree, sys_big_circle.dims
    )
    mor0 = LambdaMorphism(sys_small_classical, sys_big_circle, corner_mats,
                          label="corner_to_circle")
    mor1 = LambdaMorphism.identity(sys_big_circle, sys_big_classical,
                                   label="circle_to_classical")
    cert0 = check_lambda_morphism(mor0)
    cert1 = check_lambda_morphism(mor1)
    mor2 = mor1.compose(mor0, label="corner_to_classical")
    direct2 = corner_chain_map(
        a, m, corner_emb.matrix, corner_mod, max_degree,
        sys_big_classical.dims
    )
    composition_ok = all(
        mor2.matrices[n] == direct2[n] for n in range(max_degree + 1)
    )
    ind0 = induced_theta_map(mor0, theta2, theta4)
    ind1 = induced_theta_map(mor1, theta4, theta3)
    ind2 = induced_theta_map(mor2, theta2, theta3)

    return {
        "field": field.to_json(),
        "matrix_size": size,
        "max_degree": max_degree,
        "valid_up_to": max_degree - 1,
        "tables": {
            "circle_small": tables[0],
            "classical_small": tables[1],
            "classical_matrix": tables[2],
            "circle_matrix_theta": tables[3],
        },
        "betti": {
            "circle_small": betti[0],
            "classical_small": betti[1],
            "classical_matrix": betti[2],
            "circle_matrix_theta": betti[3],
        },
        "tables_agree": agree,
        "corner_to_circle": {
            "is_lambda_morphism": cert0["ok"],
            "matched_candidates": len(cert0["assignments"]),
            "failures": cert0["failures"],
            "induced": ind0["homology_maps"],
        },
        "circle_to_classical": {
            "is_lambda_morphism": cert1["ok"],
            "matched_candidates": len(cert1["assignments"]),
            "failures": cert1["failures"],
            "induced": ind1["homology_maps"],
        },
        "composition_matches_corner_to_classical": composition_ok,
        "corner_to_classical_induced": ind2["homology_maps"],
        "composite_induces_isomorphism": all(
            h["isomorphism"] for h in ind2["homology_maps"]
        ),
    }


# ---------------------------------------------------------------------------
# system comparison
# ---------------------------------------------------------------------------


def compare_systems(left: LambdaSystem, right: LambdaSystem,
                    with_homology: bool = False, caps=DEFAULT_CAPS) -> dict:
    """Degreewise reference-face comparison, with optional betti tables.

    Reports the first differing dimension or face matrix; candidate counts
    are listed so degenerate indexings are visible next to rich ones.
    """
    depth = min(left.max_degree, right.max_degree)
    report = {
        "max_degree": depth,
        "left": left.label,
        "right": right.label,
        "first_difference": None,
        "dims_left": list(left.dims[: depth + 1]),
        "dims_right": list(right.dims[: depth + 1]),
        "index_sizes_left": {
            k: v for k, v in left.index_sizes().items()
            if int(k.split(",")[0]) <= depth
        },
        "index_sizes_right": {
            k: v for k, v in right.index_sizes().items()
            if int(k.split(",")[0]) <= depth
        },
    }
    if left.dims[: depth + 1] != right.dims[: depth + 1]:
        for n in range(depth + 1):
            if left.dims[n] != right.dims[n]:
                report["equal"] = False
                report["first_difference"] = {
                    "kind": "dimension", "degree": n,
                    "left": left.dims[n], "right": right.dims[n],
                }
                return report
    for n in range(1, depth + 1):
        for i in range(n + 1):
            if left.face_matrix(n, i) != right.face_matrix(n, i):
                report["equal"] = False
                report["first_difference"] = {
                    "kind": "face_matrix", "degree": n, "position": i,
                }
                return report
    report["equal"] = True
    if with_homology:
        report["homology_left"] = compute_theta(left, caps).homology()
        report["homology_right"] = compute_theta(right, caps).homology()
    return report
