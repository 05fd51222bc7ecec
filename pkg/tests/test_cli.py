"""End-to-end command line runs in subprocesses: exit codes, determinism,
report formats, and error bodies."""

import json
import os
import subprocess
import sys

import pytest

PKG_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def run_cli(args, threads=None, cwd=None):
    env = dict(os.environ)
    env["PYTHONPATH"] = os.path.join(PKG_ROOT, "src")
    env.pop("LAMBDA_HOMOLOGY_THREADS", None)
    if threads is not None:
        env["LAMBDA_HOMOLOGY_THREADS"] = str(threads)
    return subprocess.run(
        [sys.executable, "-m", "lambda_homology", *args],
        capture_output=True, text=True, env=env, cwd=cwd or PKG_ROOT,
    )


@pytest.fixture(scope="module")
def specs(tmp_path_factory):
    """A directory of small system specs used across the CLI tests."""
    root = tmp_path_factory.mktemp("specs")

    def put(name, obj):
        path = root / name
        path.write_text(json.dumps(obj, indent=1))
        return str(path)

    dual = {"builtin": "truncated_polynomial", "order": 2}
    files = {
        "dual_classical": put("dual_classical.json", {
            "construction": "hochschild", "algebra": dual, "max_degree": 3,
        }),
        "dual_circle": put("dual_circle.json", {
            "construction": "higher_hochschild", "algebra": dual,
            "simplicial": {"builtin": "circle"}, "max_degree": 3,
        }),
        "dual_loday": put("dual_loday.json", {
            "construction": "loday", "algebra": dual,
            "simplicial": {"builtin": "circle"}, "max_degree": 3,
        }),
        "upper_circle": put("upper_circle.json", {
            "construction": "higher_hochschild",
            "algebra": {"builtin": "upper_triangular"},
            "simplicial": {"builtin": "circle"}, "max_degree": 3,
        }),
        "upper_secondary": put("upper_secondary.json", {
            "construction": "secondary",
            "algebra": {"builtin": "upper_triangular"},
            "second_algebra": {"builtin": "ground_field"},
            "epsilon": "unit", "max_degree": 3,
        }),
        "upper_classical": put("upper_classical.json", {
            "construction": "hochschild",
            "algebra": {"builtin": "upper_triangular"}, "max_degree": 3,
        }),
        "good_algebra": put("good_algebra.json", {
            "dim": 2, "unit": ["1", "0"],
            "mult": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"]],
        }),
        "bad_algebra": put("bad_algebra.json", {
            "dim": 3, "unit": ["1", "0", "0"],
            "mult": [
                [0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"],
                [0, 2, 2, "1"], [2, 0, 2, "1"],
                [1, 1, 2, "1"], [1, 2, 0, "1"],
            ],
        }),
        "unit_morphism": put("unit_morphism.json", {"builtin": "unit"}),
        "ground": put("ground.json", {"builtin": "ground_field"}),
    }
    files["root"] = str(root)
    return files


# ---------------------------------------------------------------------------
# homology and theta
# ---------------------------------------------------------------------------


def test_homology_dual_classical(specs):
    r = run_cli(["homology", specs["dual_classical"]])
    assert r.returncode == 0, r.stdout + r.stderr
    rep = json.loads(r.stdout)
    assert [e["betti"] for e in rep["entries"]] == [2, 1, 1]
    assert rep["valid_up_to"] == 2


def test_homology_deterministic_across_thread_counts(specs):
    a = run_cli(["homology", specs["dual_circle"]], threads=1)
    b = run_cli(["homology", specs["dual_circle"]], threads=8)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_homology_rejects_bad_thread_env(specs):
    r = run_cli(["homology", specs["dual_classical"]], threads="many")
    assert r.returncode == 1
    body = json.loads(r.stdout)
    assert "LAMBDA_HOMOLOGY_THREADS" in body["message"]


def test_homology_tsv_and_out_file(specs, tmp_path):
    out = tmp_path / "report.tsv"
    r = run_cli(["homology", specs["dual_classical"],
                 "--format", "tsv", "--out", str(out)])
    assert r.returncode == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].split("\t") == [
        "n", "dim_theta", "rank_d_n", "rank_d_n_plus_1", "betti"]
    assert lines[1].split("\t") == ["0", "2", "0", "0", "2"]


def test_homology_prime_field_override(specs):
    r = run_cli(["homology", specs["dual_classical"], "--field", "fp:7"])
    assert r.returncode == 0
    rep = json.loads(r.stdout)
    assert rep["field"] == {"kind": "Fp", "p": 7}
    assert [e["betti"] for e in rep["entries"]] == [2, 1, 1]


def test_homology_emit_bases(specs):
    r = run_cli(["homology", specs["upper_circle"], "--emit-bases"])
    assert r.returncode == 0
    rep = json.loads(r.stdout)
    assert rep["theta"]["theta_dims"] == [3, 8, 20, 48]
    assert len(rep["theta"]["bases"]) == 4


def test_theta_command(specs):
    r = run_cli(["theta", specs["upper_circle"], "--format", "tsv"])
    assert r.returncode == 0
    lines = r.stdout.strip().splitlines()
    assert lines[0].split("\t") == ["n", "ambient_dim", "theta_dim"]
    assert [l.split("\t") for l in lines[1:]] == [
        ["0", "3", "3"], ["1", "9", "8"], ["2", "27", "20"], ["3", "81", "48"]]


def test_cap_exceeded_exits_2(specs):
    r = run_cli(["homology", specs["dual_classical"], "--cap-dim", "4"])
    assert r.returncode == 2
    body = json.loads(r.stdout)
    assert body["error"] == "ResourceCapError"
    assert body["details"]["cap"] == 4


def test_missing_spec_file_exits_1(specs):
    r = run_cli(["homology", os.path.join(specs["root"], "nope.json")])
    assert r.returncode == 1
    body = json.loads(r.stdout)
    assert "nope.json" in body["message"]


def test_usage_error_exits_1():
    r = run_cli(["homology"])
    assert r.returncode == 1


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_simplicial_circle():
    r = run_cli(["verify", "simplicial", "--circle", "4"])
    assert r.returncode == 0
    rep = json.loads(r.stdout)
    assert rep["passed"] is True
    assert rep["violations"] == []


def test_verify_algebra_pass(specs):
    r = run_cli(["verify", "algebra", "--input", specs["good_algebra"]])
    assert r.returncode == 0
    rep = json.loads(r.stdout)
    assert rep["passed"] is True


def test_verify_algebra_fail_names_triple(specs):
    r = run_cli(["verify", "algebra", "--input", specs["bad_algebra"]])
    assert r.returncode == 1
    rep = json.loads(r.stdout)
    assert rep["passed"] is False
    kinds = {v["kind"] for v in rep["violations"]}
    assert "associativity" in kinds
    first = next(v for v in rep["violations"] if v["kind"] == "associativity")
    assert "triple" in first


def test_verify_morphism(specs):
    r = run_cli(["verify", "morphism", "--input", specs["unit_morphism"],
                 "--source", specs["ground"], "--target", specs["good_algebra"]])
    assert r.returncode == 0
    rep = json.loads(r.stdout)
    assert rep["passed"] is True


def test_verify_subcomplex(specs, tmp_path):
    subs = {"subspaces": [
        {"vectors": [["1", "0"], ["0", "1"]]},
        {"vectors": [["1", "0", "0", "0"], ["0", "1", "0", "0"],
                     ["0", "0", "1", "0"], ["0", "0", "0", "1"]]},
    ]}
    path = tmp_path / "subs.json"
    path.write_text(json.dumps(subs))
    spec = {"construction": "hochschild",
            "algebra": {"builtin": "truncated_polynomial", "order": 2},
            "max_degree": 1}
    spec_path = tmp_path / "sys.json"
    spec_path.write_text(json.dumps(spec))
    r = run_cli(["verify", "subcomplex", "--spec", str(spec_path),
                 "--subspaces", str(path)])
    assert r.returncode == 0
    rep = json.loads(r.stdout)
    assert rep["passed"] is True


def test_verify_morita(specs):
    r = run_cli(["verify", "morita", "--matrix-size", "2", "--max-degree", "3"])
    assert r.returncode == 0
    rep = json.loads(r.stdout)
    assert rep["passed"] is True
    assert rep["tables_agree"] is False
    assert rep["composite_induces_isomorphism"] is True
    assert set(rep["checks"]) == {
        "corner_map_is_lambda_morphism",
        "identity_map_is_lambda_morphism",
        "composition_matches_corner_to_classical",
        "composite_induces_isomorphism",
    }


def test_verify_witness_w():
    r = run_cli(["verify", "witness", "--kind", "w", "--max-degree", "4"])
    assert r.returncode == 0
    rep = json.loads(r.stdout)
    assert rep["passed"] is True
    assert rep["transport"]["ok"] is True


def test_verify_witness_t():
    r = run_cli(["verify", "witness", "--kind", "t", "--max-degree", "4",
                 "--theta-degree", "2"])
    assert r.returncode == 0
    rep = json.loads(r.stdout)
    assert rep["passed"] is True


# ---------------------------------------------------------------------------
# compare and circle
# ---------------------------------------------------------------------------


def test_compare_equal(specs):
    r = run_cli(["compare", specs["dual_loday"], specs["dual_circle"],
                 "--betti"])
    assert r.returncode == 0
    rep = json.loads(r.stdout)
    assert rep["equal"] is True
    assert rep["first_difference"] is None


def test_compare_secondary_degenerates(specs):
    r = run_cli(["compare", specs["upper_secondary"],
                 specs["upper_classical"]])
    assert r.returncode == 0
    rep = json.loads(r.stdout)
    assert rep["equal"] is True


def test_compare_unequal_exits_1(specs):
    r = run_cli(["compare", specs["dual_classical"], specs["upper_classical"]])
    assert r.returncode == 1
    rep = json.loads(r.stdout)
    assert rep["equal"] is False
    assert rep["first_difference"]["kind"] == "dimension"


def test_circle_command(tmp_path):
    out = tmp_path / "circle.json"
    r = run_cli(["circle", "--max-level", "3", "--emit", "--out", str(out)])
    assert r.returncode == 0
    rep = json.loads(out.read_text())
    assert rep["sizes"] == [1, 2, 3, 4]
    assert rep["valid"] is True
    assert "faces" in rep["simplicial"]


def test_reports_are_bytewise_stable(specs):
    """The same invocation twice gives identical bytes on stdout."""
    for args in (["homology", specs["upper_circle"]],
                 ["verify", "witness", "--kind", "w", "--max-degree", "3"],
                 ["compare", specs["dual_loday"], specs["dual_circle"]]):
        a = run_cli(args)
        b = run_cli(args)
        assert a.stdout == b.stdout
        assert a.returncode == b.returncode
