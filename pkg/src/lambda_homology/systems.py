"""Multi-indexed face systems and their largest well-behaved subcomplex.

A system assigns to each degree n a vector space M_n and to each face
position i a finite family of candidate linear maps M_n -> M_{n-1}.  The
object of interest is the largest graded subspace on which (i) all the
candidates at each position agree, (ii) face images stay inside the lower
subspace, and (iii) the pre-simplicial identities d_i d_j = d_{j-1} d_i
(i < j) hold.  Those three conditions only reference lower degrees, so the
subcomplex is computed bottom-up, degree by degree, as the kernel of one
stacked linear system per degree:

* agreement rows:   d_i^a - d_i^ref for every non-reference candidate a;
* closure rows:     (projector killing the lower subspace) . d_i^ref;
* identity rows:    d_i^ref d_j^ref - d_{j-1}^ref d_i^ref for i < j.

Any vector satisfying all three conditions lies in the computed space and
conversely, which is the fixed-point characterization the probe in
``maximality_probe`` re-checks vector by vector.

Boundary ranks, homology, and induced maps are computed against ambient
coordinates wherever possible; subcomplex coordinates appear only in the
optional restricted matrices, since their bases can be large.
"""

from __future__ import annotations

from .config import DEFAULT_CAPS
from .errors import InternalCheckError, ResourceCapError, ValidationError
from .linalg import (
    Matrix,
    Subspace,
    kernel_of_rows_raw,
    rank,
    restrict_map,
    rref,
)

__all__ = [
    "LambdaSystem",
    "trivial_system",
    "ThetaComplex",
    "compute_theta",
    "homology",
    "validate_subcomplex",
    "LambdaMorphism",
    "check_lambda_morphism",
    "induced_theta_map",
    "subcomplex_sum",
    "maximality_probe",
    "label_json",
]


def label_json(lab):
    """Face-candidate labels (nested tuples of ints) as JSON-ready lists."""
    if isinstance(lab, tuple):
        return [label_json(x) for x in lab]
    return lab


class LambdaSystem:
    """Graded spaces with families of candidate face maps.

    ``labels[(n, i)]`` lists the candidates at position i in degree n, the
    first one being the reference; ``column_fn(n, i, lab, x)`` returns the
    image of the x-th basis vector under that candidate as a sparse vector.
    Reference face matrices are cached; non-reference candidates are
    materialized on demand and dropped, since their number can be factorial.
    """

    def __init__(self, field, max_degree: int, dims, labels: dict,
                 column_fn, label: str = ""):
        if max_degree < 0:
            raise ValidationError("max_degree must be nonnegative", max_degree=max_degree)
        dims = tuple(int(d) for d in dims)
        if len(dims) != max_degree + 1:
            raise ValidationError(
                "dims must cover degrees 0..max_degree",
                expected=max_degree + 1, got=len(dims),
            )
        for n in range(1, max_degree + 1):
            for i in range(n + 1):
                labs = labels.get((n, i))
                if not labs:
                    raise ValidationError("empty candidate set", degree=n, position=i)
                if len(set(labs)) != len(labs):
                    raise ValidationError("duplicate candidate labels", degree=n, position=i)
        self.field = field
        self.max_degree = max_degree
        self.dims = dims
        self.labels = labels
        self.column_fn = column_fn
        self.label = label
        self._ref_cache: dict = {}

    def labels_at(self, n: int, i: int) -> tuple:
        return self.labels[(n, i)]

    def reference_label(self, n: int, i: int):
        return self.labels[(n, i)][0]

    def face_matrix(self, n: int, i: int, lab=None) -> Matrix:
        """The candidate's matrix; the reference candidate is cached."""
        ref = self.reference_label(n, i)
        if lab is None:
            lab = ref
        if lab == ref:
            key = (n, i)
            m = self._ref_cache.get(key)
            if m is None:
                m = self._build_face(n, i, ref)
                self._ref_cache[key] = m
            return m
        return self._build_face(n, i, lab)

    def _build_face(self, n: int, i: int, lab) -> Matrix:
        cols = [self.column_fn(n, i, lab, x) for x in range(self.dims[n])]
        return Matrix.from_columns(self.field, self.dims[n - 1], cols)

    def apply_face(self, n: int, i: int, lab, vec: dict) -> dict:
        """Image of a vector without materializing a matrix."""
        m = self._ref_cache.get((n, i))
        if m is not None and lab == self.reference_label(n, i):
            return m.apply_to_vec(vec)
        f = self.field
        out: dict = {}
        for x, a in vec.items():
            col = self.column_fn(n, i, lab, x)
            if col:
                f.axpy_row(out, col, a)
        return out

    def boundary_matrix(self, n: int) -> Matrix:
        """Alternating sum of the reference faces on the ambient space."""
        f = self.field
        acc = Matrix.zeros(f, self.dims[n - 1], self.dims[n])
        for i in range(n + 1):
            term = self.face_matrix(n, i)
            acc = acc.add(term) if i % 2 == 0 else acc.sub(term)
        return acc

    def apply_boundary(self, n: int, vec: dict) -> dict:
        # goes through apply_face so huge ambients with sparse vectors
        # never force a full matrix build
        f = self.field
        out: dict = {}
        sign = f.one
        for i in range(n + 1):
            img = self.apply_face(n, i, self.reference_label(n, i), vec)
            if img:
                f.axpy_row(out, img, sign)
            sign = f.neg(sign)
        return out

    def check_caps(self, caps=DEFAULT_CAPS) -> None:
        for n, d in enumerate(self.dims):
            if d > caps.max_ambient_dim:
                raise ResourceCapError(
                    "ambient dimension exceeds cap",
                    degree=n, dim=d, cap=caps.max_ambient_dim,
                )
        for (n, i), labs in self.labels.items():
            if len(labs) > caps.max_index_size:
                raise ResourceCapError(
                    "candidate set exceeds cap",
                    degree=n, position=i, size=len(labs), cap=caps.max_index_size,
                )

    def index_sizes(self) -> dict:
        return {f"{n},{i}": len(labs) for (n, i), labs in sorted(self.labels.items())}

    def __repr__(self):
        tag = self.label or "system"
        return f"LambdaSystem({tag}, dims={list(self.dims)})"


def trivial_system(field, dims, face_matrices: dict, label: str = "") -> LambdaSystem:
    """Wrap plain face matrices as a system with one candidate per position.

    ``face_matrices[(n, i)]`` must have shape dims[n-1] x dims[n]; no
    identities are assumed or checked here.
    """
    dims = tuple(int(d) for d in dims)
    labels = {}
    for n in range(1, len(dims)):
        for i in range(n + 1):
            m = face_matrices.get((n, i))
            if m is None:
                raise ValidationError("missing face matrix", degree=n, position=i)
            if m.nrows != dims[n - 1] or m.ncols != dims[n]:
                raise ValidationError(
                    "face matrix shape mismatch",
                    degree=n, position=i,
                    shape=[m.nrows, m.ncols],
                    expected=[dims[n - 1], dims[n]],
                )
            labels[(n, i)] = (0,)

    def column_fn(n, i, lab, x):
        return dict(face_matrices[(n, i)].column(x))

    sys = LambdaSystem(field, len(dims) - 1, dims, labels, column_fn, label=label)
    for (n, i), m in face_matrices.items():
        sys._ref_cache[(n, i)] = m
    return sys


# ---------------------------------------------------------------------------
# the maximal subcomplex
# ---------------------------------------------------------------------------


def _agreement_rows(system: LambdaSystem, n: int) -> list[dict]:
    """Difference rows d_i^a - d_i^ref, stacked deterministically."""
    f = system.field
    rows = []
    amb = system.dims[n]
    for i in range(n + 1):
        labs = system.labels_at(n, i)
        if len(labs) == 1:
            continue
        refmat = system.face_matrix(n, i)
        for lab in labs[1:]:
            by_target: dict[int, dict] = {}
            for x in range(amb):
                cand = system.column_fn(n, i, lab, x)
                base = refmat.column(x)
                if cand == base:
                    continue
                diff = dict(cand)
                f.axpy_row(diff, base, f.neg(f.one))
                for r, v in diff.items():
                    by_target.setdefault(r, {})[x] = v
            rows.extend(by_target[r] for r in sorted(by_target))
    return rows


def _closure_rows(system: LambdaSystem, n: int, lower: Subspace) -> list[dict]:
    """Rows expressing that every reference face image stays in ``lower``."""
    if lower.is_full:
        return []
    proj = lower.complement_projector()
    rows = []
    for i in range(n + 1):
        prod = proj.mul(system.face_matrix(n, i))
        rows.extend(r for r in prod.rows if r)
    return rows


def _identity_rows(system: LambdaSystem, n: int) -> list[dict]:
    """Rows of d_i d_j - d_{j-1} d_i on reference faces, for i < j."""
    if n < 2:
        return []
    f = system.field
    amb = system.dims[n]
    rows = []
    for j in range(1, n + 1):
        upper_j = system.face_matrix(n, j)
        for i in range(j):
            upper_i = system.face_matrix(n, i)
            lower_i = system.face_matrix(n - 1, i)
            lower_jm1 = system.face_matrix(n - 1, j - 1)
            by_target: dict[int, dict] = {}
            for x in range(amb):
                left = lower_i.apply_to_vec(upper_j.column(x))
                right = lower_jm1.apply_to_vec(upper_i.column(x))
                if left == right:
                    continue
                f.axpy_row(left, right, f.neg(f.one))
                for r, v in left.items():
                    by_target.setdefault(r, {})[x] = v
            rows.extend(by_target[r] for r in sorted(by_target))
    return rows


def compute_theta(system: LambdaSystem, caps=DEFAULT_CAPS) -> "ThetaComplex":
    """The unique maximal subcomplex, degree by degree.

    Degree 0 is the full space.  Each higher degree solves the stacked
    agreement/closure/identity system relative to the degree below; the
    kernel-shaped basis is kept as-is and canonicalized lazily.
    """
    system.check_caps(caps)
    f = system.field
    subspaces = [Subspace.full(f, system.dims[0])]
    for n in range(1, system.max_degree + 1):
        amb = system.dims[n]
        rows = _agreement_rows(system, n)
        rows += _closure_rows(system, n, subspaces[n - 1])
        rows += _identity_rows(system, n)
        if rows:
            subspaces.append(kernel_of_rows_raw(f, rows, amb))
        else:
            subspaces.append(Subspace.full(f, amb))
    return ThetaComplex(system, subspaces)


class ThetaComplex:
    """The computed maximal subcomplex with its boundary structure."""

    def __init__(self, system: LambdaSystem, subspaces: list[Subspace]):
        self.system = system
        self.subspaces = subspaces
        self._image_rows_cache: dict[int, list[dict]] = {}
        self._restricted_cache: dict = {}

    @property
    def max_degree(self) -> int:
        return self.system.max_degree

    def dim(self, n: int) -> int:
        return self.subspaces[n].dim

    def dims(self) -> list[int]:
        return [s.dim for s in self.subspaces]

    def boundary_image_rows(self, n: int) -> list[dict]:
        """Ambient images of the basis under the boundary, one per basis row.

        All face candidates agree on the subcomplex, so the reference faces
        compute the restricted boundary without choosing coordinates.
        """
        cached = self._image_rows_cache.get(n)
        if cached is None:
            sysm = self.system
            cached = [
                sysm.apply_boundary(n, row)
                for row in self.subspaces[n].basis.rows
            ]
            self._image_rows_cache[n] = cached
        return cached

    def restricted_face(self, n: int, i: int) -> Matrix:
        """The reference face in subcomplex coordinates (small systems)."""
        key = (n, i)
        m = self._restricted_cache.get(key)
        if m is None:
            m = restrict_map(
                self.system.face_matrix(n, i),
                self.subspaces[n],
                self.subspaces[n - 1],
            )
            self._restricted_cache[key] = m
        return m

    def restricted_boundary(self, n: int) -> Matrix:
        f = self.system.field
        acc = Matrix.zeros(f, self.subspaces[n - 1].dim, self.subspaces[n].dim)
        for i in range(n + 1):
            term = self.restricted_face(n, i)
            acc = acc.add(term) if i % 2 == 0 else acc.sub(term)
        return acc

    def check_boundary_squares_to_zero(self) -> None:
        """Exact check that the boundary composes to zero, degree by degree."""
        sysm = self.system
        for n in range(2, self.max_degree + 1):
            for idx, img in enumerate(self.boundary_image_rows(n)):
                again = sysm.apply_boundary(n - 1, img)
                if again:
                    raise InternalCheckError(
                        "boundary does not square to zero",
                        degree=n, basis_index=idx,
                    )

    def homology(self) -> dict:
        """Per-degree dims, boundary ranks, and betti numbers.

        Degree N is excluded: under truncation the incoming boundary at the
        top degree is unknown, so the report is valid up to N-1.
        """
        self.check_boundary_squares_to_zero()
        f = self.system.field
        n_max = self.max_degree
        ranks = [0] * (n_max + 2)
        for n in range(1, n_max + 1):
            rows = self.boundary_image_rows(n)
            ranks[n] = rank(Matrix.from_rows(f, self.system.dims[n - 1], rows))
        entries = []
        for n in range(n_max):
            dim_n = self.dim(n)
            betti = dim_n - ranks[n] - ranks[n + 1]
            if betti < 0:
                raise InternalCheckError(
                    "negative betti", degree=n, dim=dim_n,
                    rank_in=ranks[n], rank_out=ranks[n + 1],
                )
            entries.append({
                "n": n,
                "dim_theta": dim_n,
                "rank_d_n": ranks[n],
                "rank_d_n_plus_1": ranks[n + 1],
                "betti": betti,
            })
        return {
            "field": f.to_json(),
            "system": self.system.label,
            "max_degree": n_max,
            "valid_up_to": n_max - 1,
            "entries": entries,
        }

    def betti(self) -> list[int]:
        return [e["betti"] for e in self.homology()["entries"]]

    def to_json(self, emit_bases: bool = False) -> dict:
        out = {
            "field": self.system.field.to_json(),
            "system": self.system.label,
            "max_degree": self.max_degree,
            "ambient_dims": list(self.system.dims),
            "theta_dims": self.dims(),
        }
        if emit_bases:
            out["bases"] = [s.to_json() for s in self.subspaces]
        return out


def homology(theta: ThetaComplex) -> dict:
    return theta.homology()


# ---------------------------------------------------------------------------
# validation of candidate subcomplexes
# ---------------------------------------------------------------------------


def validate_subcomplex(system: LambdaSystem, candidates: list[Subspace],
                        max_violations: int = 10) -> dict:
    """Check conditions (i)-(iii) on candidate subspaces, vector by vector.

    The report is empty exactly when the candidate is a genuine subcomplex;
    otherwise it lists the first violations found, in condition order, with
    the offending degree, positions, and basis index.
    """
    if len(candidates) != system.max_degree + 1:
        raise ValidationError(
            "candidate subspaces must cover degrees 0..max_degree",
            expected=system.max_degree + 1, got=len(candidates),
        )
    for n, sub in enumerate(candidates):
        if sub.ambient_dim != system.dims[n]:
            raise ValidationError(
                "candidate ambient mismatch",
                degree=n, ambient=sub.ambient_dim, expected=system.dims[n],
            )
    violations = []

    def record(v):
        violations.append(v)
        return len(violations) >= max_violations

    done = False
    for n in range(1, system.max_degree + 1):
        if done:
            break
        basis = candidates[n].basis.rows
        for i in range(n + 1):
            labs = system.labels_at(n, i)
            ref = labs[0]
            for idx, w in enumerate(basis):
                base_img = system.apply_face(n, i, ref, w)
                for lab in labs[1:]:
                    if system.apply_face(n, i, lab, w) != base_img:
                        done = record({
                            "condition": "agreement", "degree": n,
                            "position": i, "candidate": label_json(lab),
                            "basis_index": idx,
                        })
                        if done:
                            break
                if done:
                    break
                if not candidates[n - 1].contains(base_img):
                    done = record({
                        "condition": "closure", "degree": n,
                        "position": i, "basis_index": idx,
                    })
                    if done:
                        break
            if done:
                break
        if done:
            break
        if n >= 2:
            for j in range(1, n + 1):
                for i in range(j):
                    for idx, w in enumerate(basis):
                        left = system.apply_face(
                            n - 1, i, system.reference_label(n - 1, i),
                            system.apply_face(n, j, system.reference_label(n, j), w),
                        )
                        right = system.apply_face(
                            n - 1, j - 1, system.reference_label(n - 1, j - 1),
                            system.apply_face(n, i, system.reference_label(n, i), w),
                        )
                        if left != right:
                            done = record({
                                "condition": "identity", "degree": n,
                                "positions": [i, j], "basis_index": idx,
                            })
                            if done:
                                break
                    if done:
                        break
                if done:
                    break
    return {"valid": not violations, "violations": violations}


def subcomplex_sum(system: LambdaSystem, a: list[Subspace],
                   b: list[Subspace]) -> list[Subspace]:
    """Degreewise sum of two subcomplexes; the sum is again one."""
    if len(a) != len(b):
        raise ValidationError("subcomplex lengths differ", left=len(a), right=len(b))
    return [u.sum_with(v) for u, v in zip(a, b)]


# ---------------------------------------------------------------------------
# morphisms and induced maps
# ---------------------------------------------------------------------------


class LambdaMorphism:
    """Degreewise linear maps from one system to another.

    The defining property: every candidate face of the *target* composed
    with the map equals the map composed with some candidate face of the
    *source* (checked by ``check_lambda_morphism``).
    """

    def __init__(self, source: LambdaSystem, target: LambdaSystem,
                 matrices: list[Matrix], label: str = ""):
        if source.field != target.field:
            raise ValidationError("systems live over different fields")
        depth = min(source.max_degree, target.max_degree)
        if len(matrices) < depth + 1:
            raise ValidationError(
                "need a matrix per degree", expected=depth + 1, got=len(matrices)
            )
        for n in range(depth + 1):
            m = matrices[n]
            if m.ncols != source.dims[n] or m.nrows != target.dims[n]:
                raise ValidationError(
                    "morphism matrix shape mismatch", degree=n,
                    shape=[m.nrows, m.ncols],
                    expected=[target.dims[n], source.dims[n]],
                )
        self.source = source
        self.target = target
        self.matrices = matrices[: depth + 1]
        self.max_degree = depth
        self.label = label

    @classmethod
    def identity(cls, source: LambdaSystem, target: LambdaSystem,
                 label: str = "identity") -> "LambdaMorphism":
        if source.dims != target.dims:
            raise ValidationError("identity morphism needs equal dims")
        depth = min(source.max_degree, target.max_degree)
        mats = [Matrix.identity(source.field, source.dims[n]) for n in range(depth + 1)]
        return cls(source, target, mats, label=label)

    def apply(self, n: int, vec: dict) -> dict:
        return self.matrices[n].apply_to_vec(vec)

    def compose(self, earlier: "LambdaMorphism", label: str = "") -> "LambdaMorphism":
        """self after earlier (earlier's target must be self's source)."""
        if earlier.target is not self.source and earlier.target.dims != self.source.dims:
            raise ValidationError("composition endpoint mismatch")
        depth = min(self.max_degree, earlier.max_degree)
        mats = [self.matrices[n].mul(earlier.matrices[n]) for n in range(depth + 1)]
        return LambdaMorphism(earlier.source, self.target, mats, label=label)


def check_lambda_morphism(mor: LambdaMorphism, max_failures: int = 5) -> dict:
    """Certify the intertwining property, recording the matched candidates.

    For each degree, position, and target candidate the first source
    candidate achieving matrix equality is recorded; failures list target
    candidates with no match.
    """
    assignments = []
    failures = []
    for n in range(1, mor.max_degree + 1):
        f_n = mor.matrices[n]
        f_prev = mor.matrices[n - 1]
        for i in range(n + 1):
            rhs_cache = {}
            for alpha in mor.target.labels_at(n, i):
                lhs = mor.target.face_matrix(n, i, alpha).mul(f_n)
                found = None
                for beta in mor.source.labels_at(n, i):
                    rhs = rhs_cache.get(beta)
                    if rhs is None:
                        rhs = f_prev.mul(mor.source.face_matrix(n, i, beta))
                        rhs_cache[beta] = rhs
                    if lhs == rhs:
                        found = beta
                        break
                if found is None:
                    failures.append({
                        "degree": n, "position": i, "target_candidate": label_json(alpha),
                    })
                    if len(failures) >= max_failures:
                        return {"ok": False, "assignments": assignments,
                                "failures": failures}
                else:
                    assignments.append({
                        "degree": n, "position": i,
                        "target_candidate": label_json(alpha),
                        "source_candidate": label_json(found),
                    })
    return {"ok": not failures, "assignments": assignments, "failures": failures}


class QuotientBasis:
    """Homology coordinates for one degree: kernel modulo boundary image."""

    def __init__(self, kernel: Subspace, image: Subspace):
        f = kernel.field
        self.kernel = kernel
        coords = [kernel.coords_of(row) for row in image.basis.rows]
        self._rows, pivots = rref(f, coords, kernel.dim, full=True)
        self._pivots = pivots
        pivset = set(pivots)
        self.free = tuple(c for c in range(kernel.dim) if c not in pivset)
        self.dim = len(self.free)

    def class_of(self, vec: dict) -> dict:
        f = self.kernel.field
        k = self.kernel.coords_of(vec)
        for pcol, row in zip(self._pivots, self._rows):
            c = k.get(pcol)
            if c:
                f.axpy_row(k, row, f.neg(c))
        return {j: k[c] for j, c in enumerate(self.free) if c in k}

    def representative(self, j: int) -> dict:
        return dict(self.kernel.basis.rows[self.free[j]])


def _kernel_of_restricted_boundary(theta: ThetaComplex, n: int) -> Subspace:
    """{v in the subcomplex at degree n : boundary v = 0}, ambient coords."""
    f = theta.system.field
    sub = theta.subspaces[n]
    amb = sub.ambient_dim
    if n == 0:
        return sub
    rows = []
    if not sub.is_full:
        rows.extend(r for r in sub.complement_projector().rows if r)
    bnd = theta.system.boundary_matrix(n)
    rows.extend(r for r in bnd.rows if r)
    return kernel_of_rows_raw(f, rows, amb)


def homology_quotients(theta: ThetaComplex, up_to: int) -> list[QuotientBasis]:
    """Quotient bases for degrees 0..up_to (inclusive)."""
    f = theta.system.field
    out = []
    for n in range(up_to + 1):
        kern = _kernel_of_restricted_boundary(theta, n)
        img_rows = theta.boundary_image_rows(n + 1)
        image = Subspace.from_vectors(f, theta.system.dims[n], img_rows)
        out.append(QuotientBasis(kern, image))
    return out


def induced_theta_map(mor: LambdaMorphism, theta_src: ThetaComplex,
                      theta_tgt: ThetaComplex, emit_matrices: bool = False) -> dict:
    """Restrict a certified morphism to the subcomplexes and to homology.

    Verifies degreewise that the source subcomplex maps into the target one
    and that the map commutes with the boundaries (vector-wise, in ambient
    coordinates), then computes the induced maps on homology as maps of
    quotients.  Escape of the image signals a broken certificate and raises.
    """
    depth = min(mor.max_degree, theta_src.max_degree, theta_tgt.max_degree)
    f = mor.source.field
    for n in range(depth + 1):
        tgt = theta_tgt.subspaces[n]
        for idx, row in enumerate(theta_src.subspaces[n].basis.rows):
            img = mor.apply(n, row)
            if not tgt.contains(img):
                raise InternalCheckError(
                    "morphism image escapes the target subcomplex",
                    degree=n, basis_index=idx,
                )
    for n in range(1, depth + 1):
        for idx, row in enumerate(theta_src.subspaces[n].basis.rows):
            via_src = mor.apply(n - 1, theta_src.system.apply_boundary(n, row))
            via_tgt = theta_tgt.system.apply_boundary(n, mor.apply(n, row))
            if via_src != via_tgt:
                raise InternalCheckError(
                    "morphism does not commute with the boundary",
                    degree=n, basis_index=idx,
                )
    valid = depth - 1
    report = {
        "max_degree": depth,
        "valid_up_to": valid,
        "homology_maps": [],
    }
    if valid >= 0:
        q_src = homology_quotients(theta_src, valid)
        q_tgt = homology_quotients(theta_tgt, valid)
        for n in range(valid + 1):
            cols = []
            for j in range(q_src[n].dim):
                img = mor.apply(n, q_src[n].representative(j))
                cols.append(q_tgt[n].class_of(img))
            hmat = Matrix.from_columns(f, q_tgt[n].dim, cols)
            r = rank(hmat)
            report["homology_maps"].append({
                "n": n,
                "source_betti": q_src[n].dim,
                "target_betti": q_tgt[n].dim,
                "rank": r,
                "isomorphism": r == q_src[n].dim == q_tgt[n].dim,
            })
    if emit_matrices:
        report["restricted_matrices"] = []
        for n in range(depth + 1):
            mat = restrict_map(
                mor.matrices[n], theta_src.subspaces[n], theta_tgt.subspaces[n]
            )
            report["restricted_matrices"].append({"n": n, "matrix": mat.to_entries()})
    return report


# ---------------------------------------------------------------------------
# maximality probe
# ---------------------------------------------------------------------------


def maximality_probe(theta: ThetaComplex) -> dict:
    """Certify maximality per degree, vector by vector.

    Every standard basis vector of a complement of the computed subspace
    must violate agreement, closure, or an identity; and re-running the
    fixed-point computation must reproduce the subspaces verbatim.
    """
    system = theta.system
    report = {"degrees": [], "recomputation_identical": None}
    for n in range(1, system.max_degree + 1):
        sub = theta.subspaces[n]
        entries = []
        for fcoord in sub.complement_free_coords():
            probe = {fcoord: system.field.one}
            reason = _first_violation(system, theta, n, probe)
            entries.append({
                "coordinate": fcoord,
                "violates": reason,
            })
        bad = [e for e in entries if e["violates"] is None]
        report["degrees"].append({
            "n": n,
            "complement_dim": len(entries),
            "all_violate": not bad,
            "entries": entries,
        })
    again = compute_theta(system)
    report["recomputation_identical"] = all(
        a == b for a, b in zip(theta.subspaces, again.subspaces)
    )
    report["ok"] = report["recomputation_identical"] and all(
        d["all_violate"] for d in report["degrees"]
    )
    return report


def _first_violation(system: LambdaSystem, theta: ThetaComplex, n: int,
                     vec: dict):
    """Which staged condition the vector breaks, if any."""
    for i in range(n + 1):
        labs = system.labels_at(n, i)
        ref_img = system.apply_face(n, i, labs[0], vec)
        for lab in labs[1:]:
            if system.apply_face(n, i, lab, vec) != ref_img:
                return {"condition": "agreement", "position": i,
                        "candidate": label_json(lab)}
    for i in range(n + 1):
        img = system.apply_face(n, i, system.reference_label(n, i), vec)
        if not theta.subspaces[n - 1].contains(img):
            return {"condition": "closure", "position": i}
    if n >= 2:
        for j in range(1, n + 1):
            for i in range(j):
                left = system.apply_face(
                    n - 1, i, system.reference_label(n - 1, i),
                    system.apply_face(n, j, system.reference_label(n, j), vec),
                )
                right = system.apply_face(
                    n - 1, j - 1, system.reference_label(n - 1, j - 1),
                    system.apply_face(n, i, system.reference_label(n, i), vec),
                )
                if left != right:
                    return {"condition": "identity", "positions": [i, j]}
    return None
