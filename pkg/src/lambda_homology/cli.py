"""Command-line front end.

Subcommands: ``homology``, ``theta``, ``verify`` (simplicial, algebra,
morphism, subcomplex, morita, witness), ``compare``, ``circle``.  Inputs
are JSON files; reports are JSON (default) or TSV, written to stdout or
``--out``.  Exit codes: 0 success, 1 validation failure or a failed
verification, 2 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .algebras import (
    Bimodule,
    algebra_from_json,
    bimodule_from_json,
    ground_field_algebra,
    matrix_algebra,
    matrix_bimodule,
    morphism_from_json,
    validate_algebra,
    validate_bimodule,
    vector_from_json,
)
from .config import DEFAULT_CAPS, ResourceCaps, thread_bound
from .constructions import (
    compare_systems,
    higher_hochschild_system,
    hochschild_system,
    loday_chain,
    morita_report,
    secondary_system,
    sphere2_system,
    witness_t_suite,
    witness_w_suite,
)
from .errors import LambdaHomologyError, ResourceCapError, ValidationError
from .fields import field_from_json, parse_field_flag
from .linalg import Matrix, Subspace
from .simplicial import circle, simplicial_from_json, simplicial_to_json
from .systems import (
    LambdaMorphism,
    check_lambda_morphism,
    compute_theta,
    validate_subcomplex,
)


# ---------------------------------------------------------------------------
# input loading
# ---------------------------------------------------------------------------


def _read_json(path: Path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ValidationError(f"input file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON in {path}: {exc}") from exc


def _resolve(obj, base: Path):
    """A string is a path relative to the enclosing spec file."""
    if isinstance(obj, str):
        return _read_json(base / obj), (base / obj).parent
    return obj, base


def _load_field(spec: dict, override):
    if override is not None:
        return override
    return field_from_json(spec.get("field", {"kind": "Q"}))


def _load_simplicial(obj, base: Path, max_degree):
    obj, base = _resolve(obj, base)
    if isinstance(obj, dict) and obj.get("builtin") == "circle":
        levels = obj.get("max_level", max_degree)
        if levels is None:
            raise ValidationError("circle spec needs 'max_level' or --max-degree")
        return circle(int(levels))
    x = simplicial_from_json(obj)
    if max_degree is not None and max_degree < x.max_level:
        x = x.truncate(max_degree)
    return x


def load_system(spec, base: Path, field=None, max_degree=None,
                caps=DEFAULT_CAPS):
    """Build a face system from a JSON spec (see README for the format)."""
    spec, base = _resolve(spec, base)
    if not isinstance(spec, dict):
        raise ValidationError("system spec must be a JSON object")
    kind = spec.get("construction")
    if kind is None:
        raise ValidationError("system spec needs a 'construction' key")
    f = _load_field(spec, field)
    degree = max_degree if max_degree is not None else spec.get("max_degree")

    def algebra(key="algebra"):
        obj = spec.get(key)
        if obj is None:
            raise ValidationError(f"system spec needs '{key}'")
        obj, _ = _resolve(obj, base)
        return algebra_from_json(obj, field=f)

    def bimodule(a):
        obj = spec.get("bimodule", {"builtin": "regular"})
        obj, _ = _resolve(obj, base)
        return bimodule_from_json(obj, a)

    if kind in ("hochschild", "sphere2"):
        if degree is None:
            raise ValidationError("spec needs 'max_degree' or --max-degree")
        a = algebra()
        m = bimodule(a)
        if kind == "hochschild":
            return hochschild_system(a, m, int(degree))
        return sphere2_system(a, m, int(degree), caps)
    if kind in ("higher_hochschild", "loday"):
        a = algebra()
        m = bimodule(a)
        x = _load_simplicial(
            spec.get("simplicial", {"builtin": "circle"}), base,
            None if degree is None else int(degree),
        )
        if kind == "loday":
            return loday_chain(a, m, x, caps)
        return higher_hochschild_system(a, m, x, caps)
    if kind == "secondary":
        if degree is None:
            raise ValidationError("spec needs 'max_degree' or --max-degree")
        a = algebra()
        b = algebra("second_algebra")
        eps_obj = spec.get("epsilon", "unit")
        if isinstance(eps_obj, str) and eps_obj not in ("unit", "identity"):
            eps_obj, _ = _resolve(eps_obj, base)
        if eps_obj == "identity" or (
            isinstance(eps_obj, dict) and eps_obj.get("builtin") == "identity"
        ):
            eps = _identity_morphism(b, a)
        else:
            eps = morphism_from_json(eps_obj, b, a)
        return secondary_system(a, b, eps, int(degree), caps)
    raise ValidationError(f"unknown construction {kind!r}")


def _identity_morphism(b, a):
    from .algebras import AlgebraMorphism

    if b.dim != a.dim:
        raise ValidationError("identity morphism needs equal dimensions")
    eps = AlgebraMorphism(b, a, Matrix.identity(a.field, a.dim), label="identity")
    bad = eps.validate()
    if bad:
        raise ValidationError(
            "identity is not multiplicative between these algebras",
            violations=bad[:5],
        )
    return eps


def _caps_from_args(args) -> ResourceCaps:
    updates = {}
    if getattr(args, "cap_dim", None):
        updates["max_ambient_dim"] = args.cap_dim
    if getattr(args, "cap_index", None):
        updates["max_index_size"] = args.cap_index
    return dataclasses.replace(DEFAULT_CAPS, **updates) if updates else DEFAULT_CAPS


def _field_from_args(args):
    flag = getattr(args, "field", None)
    return parse_field_flag(flag) if flag else None


# ---------------------------------------------------------------------------
# report writing
# ---------------------------------------------------------------------------


def _tsv_escape(v) -> str:
    s = str(v)
    return s.replace("\t", " ").replace("\n", " ")


def _tsv_table(header: list, rows: list) -> str:
    out = ["\t".join(header)]
    out.extend("\t".join(_tsv_escape(c) for c in row) for row in rows)
    return "\n".join(out) + "\n"


def _homology_tsv(report: dict) -> str:
    rows = [
        [e["n"], e["dim_theta"], e["rank_d_n"], e["rank_d_n_plus_1"], e["betti"]]
        for e in report["entries"]
    ]
    return _tsv_table(["n", "dim_theta", "rank_d_n", "rank_d_n_plus_1", "betti"],
                      rows)


def _theta_tsv(report: dict) -> str:
    rows = [
        [n, a, t]
        for n, (a, t) in enumerate(zip(report["ambient_dims"],
                                       report["theta_dims"]))
    ]
    return _tsv_table(["n", "ambient_dim", "theta_dim"], rows)


def _flat_checks(report: dict, prefix="") -> list:
    rows = []
    for k in sorted(report):
        v = report[k]
        name = f"{prefix}{k}"
        if isinstance(v, bool):
            rows.append([name, "pass" if v else "fail"])
        elif isinstance(v, dict):
            rows.extend(_flat_checks(v, prefix=name + "."))
    return rows


def write_report(report: dict, args, tsv_fn=None) -> None:
    if getattr(args, "format", "json") == "tsv":
        text = tsv_fn(report) if tsv_fn else _tsv_table(
            ["check", "result"], _flat_checks(report)
        )
    else:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_homology(args) -> int:
    caps = _caps_from_args(args)
    system = load_system(args.spec, Path(args.spec).parent,
                         field=_field_from_args(args),
                         max_degree=args.max_degree, caps=caps)
    theta = compute_theta(system, caps)
    report = theta.homology()
    if args.emit_bases:
        report["theta"] = theta.to_json(emit_bases=True)
    write_report(report, args, _homology_tsv)
    return 0


def cmd_theta(args) -> int:
    caps = _caps_from_args(args)
    system = load_system(args.spec, Path(args.spec).parent,
                         field=_field_from_args(args),
                         max_degree=args.max_degree, caps=caps)
    theta = compute_theta(system, caps)
    report = theta.to_json(emit_bases=args.emit_bases)
    write_report(report, args, _theta_tsv)
    return 0


def cmd_circle(args) -> int:
    x = circle(args.max_level)
    report = {
        "label": x.label,
        "max_level": x.max_level,
        "sizes": list(x.sizes),
        "violations": x.validate(),
        "valid": not x.validate(),
    }
    if args.emit:
        report["simplicial"] = simplicial_to_json(x)
    write_report(report, args,
                 lambda r: _tsv_table(["n", "size"],
                                      list(enumerate(r["sizes"]))))
    return 0 if report["valid"] else 1


def cmd_compare(args) -> int:
    caps = _caps_from_args(args)
    f = _field_from_args(args)
    left = load_system(args.left, Path(args.left).parent, field=f,
                       max_degree=args.max_degree, caps=caps)
    right = load_system(args.right, Path(args.right).parent, field=f,
                        max_degree=args.max_degree, caps=caps)
    report = compare_systems(left, right, with_homology=args.betti, caps=caps)
    write_report(report, args)
    return 0 if report["equal"] else 1


def _verify_simplicial(args) -> tuple[dict, bool]:
    if args.circle is not None:
        x = circle(args.circle)
    elif args.input:
        x = simplicial_from_json(_read_json(Path(args.input)))
    else:
        raise ValidationError("verify simplicial needs --input or --circle")
    bad = x.validate()
    report = {
        "check": "simplicial_identities",
        "label": x.label,
        "sizes": list(x.sizes),
        "violations": bad[:10],
        "passed": not bad,
    }
    return report, not bad


def _verify_algebra(args) -> tuple[dict, bool]:
    if not args.input:
        raise ValidationError("verify algebra needs --input")
    obj = _read_json(Path(args.input))
    field = _field_from_args(args)
    try:
        a = algebra_from_json(obj, field=field)
    except ValidationError as exc:
        return {
            "check": "algebra_axioms",
            "passed": False,
            "violations": exc.details.get("violations", [str(exc)]),
        }, False
    report = {
        "check": "algebra_axioms",
        "label": a.label,
        "dim": a.dim,
        "commutative": a.is_commutative(),
        "violations": [],
        "passed": True,
    }
    return report, True


def _verify_morphism(args) -> tuple[dict, bool]:
    if not (args.input and args.source and args.target):
        raise ValidationError(
            "verify morphism needs --input, --source, and --target"
        )
    field = _field_from_args(args)
    src = algebra_from_json(_read_json(Path(args.source)), field=field)
    tgt = algebra_from_json(_read_json(Path(args.target)), field=field)
    try:
        mor = morphism_from_json(_read_json(Path(args.input)), src, tgt)
    except ValidationError as exc:
        return {
            "check": "algebra_morphism",
            "passed": False,
            "violations": exc.details.get("violations", [str(exc)]),
        }, False
    report = {
        "check": "algebra_morphism",
        "unital": mor.unital,
        "multiplicative": True,
        "violations": [],
        "passed": True,
    }
    return report, True


def _verify_subcomplex(args) -> tuple[dict, bool]:
    if not args.spec or not args.subspaces:
        raise ValidationError("verify subcomplex needs --spec and --subspaces")
    caps = _caps_from_args(args)
    system = load_system(args.spec, Path(args.spec).parent,
                         field=_field_from_args(args),
                         max_degree=args.max_degree, caps=caps)
    data = _read_json(Path(args.subspaces))
    degrees = data.get("subspaces")
    if not isinstance(degrees, list):
        raise ValidationError("subspaces file needs a 'subspaces' list")
    f = system.field
    candidates = []
    for n, entry in enumerate(degrees):
        vecs = [
            vector_from_json(f, v, system.dims[n])
            for v in entry.get("vectors", [])
        ]
        candidates.append(Subspace.from_vectors(f, system.dims[n], vecs))
    result = validate_subcomplex(system, candidates)
    report = {
        "check": "lambda_subcomplex",
        "system": system.label,
        "dims": [s.dim for s in candidates],
        "violations": result["violations"],
        "passed": result["valid"],
    }
    return report, result["valid"]


def _verify_morita(args) -> tuple[dict, bool]:
    field = _field_from_args(args)
    if args.algebra:
        a = algebra_from_json(_read_json(Path(args.algebra)), field=field)
    else:
        a = ground_field_algebra(field or parse_field_flag("q"))
    m = Bimodule.regular(a)
    caps = _caps_from_args(args)
    if args.max_degree is None:
        raise ValidationError("verify morita needs --max-degree")
    report = morita_report(a, m, args.matrix_size, args.max_degree, caps)
    checks = {
        "corner_map_is_lambda_morphism":
            report["corner_to_circle"]["is_lambda_morphism"],
        "identity_map_is_lambda_morphism":
            report["circle_to_classical"]["is_lambda_morphism"],
        "composition_matches_corner_to_classical":
            report["composition_matches_corner_to_classical"],
        "composite_induces_isomorphism":
            report["composite_induces_isomorphism"],
    }
    report["check"] = "morita_comparison"
    report["passed"] = all(checks.values())
    report["checks"] = checks
    return report, report["passed"]


def _witness_elements(args, big, bigmod, field):
    """Elements file for the witness suites; None means use the defaults."""
    if not args.elements:
        return None, None
    data = _read_json(Path(args.elements))
    if "e" not in data:
        raise ValidationError("elements file needs 'e'")
    e = vector_from_json(field, data["e"], big.dim)
    if bigmod is not None:
        if "m" not in data:
            raise ValidationError("elements file needs 'm' for the w witness")
        return e, vector_from_json(field, data["m"], bigmod.dim)
    if "f" not in data:
        raise ValidationError("elements file needs 'f' for the t witness")
    return e, vector_from_json(field, data["f"], big.dim)


def _verify_witness(args) -> tuple[dict, bool]:
    field = _field_from_args(args) or parse_field_flag("q")
    caps = _caps_from_args(args)
    if args.max_degree is None:
        raise ValidationError("verify witness needs --max-degree")
    if args.algebra:
        inner = algebra_from_json(_read_json(Path(args.algebra)), field=field)
    else:
        inner = ground_field_algebra(field)
    size = args.matrix_size
    big, _ = matrix_algebra(inner, size)
    if args.kind == "w":
        bigmod, _ = matrix_bimodule(big, Bimodule.regular(inner), size)
        e, mv = _witness_elements(args, big, bigmod, field)
        if e is None:
            # corner unit of the matrix algebra, same element as module vector
            e = {k: v for k, v in big.unit.items() if k < inner.dim}
            mv = dict(e)
        report = witness_w_suite(big, bigmod, circle(args.max_degree), e, mv,
                                 theta_degree=args.theta_degree, caps=caps)
    else:
        eps = _identity_morphism(big, big)
        e, f_vec = _witness_elements(args, big, None, field)
        if e is None:
            e = {k: v for k, v in big.unit.items() if k < inner.dim}
            f_vec = dict(big.unit)
        report = witness_t_suite(big, big, eps, e, f_vec, args.max_degree,
                                 theta_degree=args.theta_degree, caps=caps)
    passed = (
        report["transport"]["ok"]
        and report["span_is_subcomplex"]["valid"]
        and all(d["in_theta"] for d in report["theta_membership"])
        and report["boundary_parity"]["ok"]
    )
    report["check"] = "witness_suite"
    report["passed"] = passed
    return report, passed


def cmd_verify(args) -> int:
    handler = {
        "simplicial": _verify_simplicial,
        "algebra": _verify_algebra,
        "morphism": _verify_morphism,
        "subcomplex": _verify_subcomplex,
        "morita": _verify_morita,
        "witness": _verify_witness,
    }[args.target_kind]
    report, passed = handler(args)
    write_report(report, args)
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(p, spec_positional=True):
    if spec_positional:
        p.add_argument("spec", help="system spec JSON file")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--field", default=None,
                   help="field override: q or fp:<prime>")
    p.add_argument("--cap-dim", type=int, default=None,
                   help="ambient dimension cap")
    p.add_argument("--cap-index", type=int, default=None,
                   help="face-variant count cap")
    p.add_argument("--out", default=None, help="write the report here")
    p.add_argument("--format", choices=("json", "tsv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lambda-homology",
        description="Exact homology of maximal subcomplexes of face systems",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", help="betti table of the maximal subcomplex")
    _add_common(p)
    p.add_argument("--emit-bases", action="store_true")
    p.set_defaults(fn=cmd_homology)

    p = sub.add_parser("theta", help="dimensions (and bases) of the maximal subcomplex")
    _add_common(p)
    p.add_argument("--emit-bases", action="store_true")
    p.set_defaults(fn=cmd_theta)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("target_kind", choices=(
        "simplicial", "algebra", "morphism", "subcomplex", "morita", "witness"
    ))
    p.add_argument("--spec", default=None, help="system spec (subcomplex)")
    p.add_argument("--input", default=None, help="object file to verify")
    p.add_argument("--source", default=None, help="source algebra (morphism)")
    p.add_argument("--target", default=None, help="target algebra (morphism)")
    p.add_argument("--subspaces", default=None, help="candidate subspaces file")
    p.add_argument("--circle", type=int, default=None,
                   help="verify the built-in circle at this truncation")
    p.add_argument("--algebra", default=None,
                   help="inner algebra file (morita, witness)")
    p.add_argument("--matrix-size", type=int, default=2)
    p.add_argument("--kind", choices=("w", "t"), default="w",
                   help="witness flavor")
    p.add_argument("--elements", default=None,
                   help="witness elements file with dense 'e' and 'm'/'f'")
    p.add_argument("--theta-degree", type=int, default=None,
                   help="check membership directly up to this degree")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--field", default=None)
    p.add_argument("--cap-dim", type=int, default=None)
    p.add_argument("--cap-index", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("compare", help="compare two systems face by face")
    p.add_argument("left", help="left system spec")
    p.add_argument("right", help="right system spec")
    p.add_argument("--betti", action="store_true",
                   help="also compare homology tables")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--field", default=None)
    p.add_argument("--cap-dim", type=int, default=None)
    p.add_argument("--cap-index", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("circle", help="emit the built-in circle model")
    p.add_argument("--max-level", type=int, required=True)
    p.add_argument("--emit", action="store_true",
                   help="include the full face/degeneracy tables")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.set_defaults(fn=cmd_circle)

    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; keep 2 reserved for resource caps
        return 0 if exc.code == 0 else 1
    try:
        thread_bound()
        return args.fn(args)
    except ResourceCapError as exc:
        sys.stdout.write(json.dumps(exc.to_json(), sort_keys=True, indent=2) + "\n")
        return 2
    except ValidationError as exc:
        sys.stdout.write(json.dumps(exc.to_json(), sort_keys=True, indent=2) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
