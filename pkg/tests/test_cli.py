"""End-to-end command tests: output text and the 0/1/2/3 exit-code contract."""
import json

import pytest

from gogkit import cli
from gogkit.fixtures import fixture_text


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_fixture_ok(capsys):
    code, out, _ = run(capsys, "validate", "c4c6")
    assert code == 0
    assert out.startswith("ok")


def test_validate_rejects_non_homomorphic_inclusion(capsys, tmp_path):
    doc = json.loads(fixture_text("c4c6"))
    doc["graph"]["edges"][0]["d1_images"] = [0, 2]
    bad = tmp_path / "bad.gog.json"
    bad.write_text(json.dumps(doc))
    code, out, err = run(capsys, "validate", str(bad))
    assert code == 2
    assert "not a homomorphism" in out + err
    assert "(1,1)" in out + err


def test_validate_unknown_reference(capsys):
    code, _, err = run(capsys, "validate", "no_such_fixture")
    assert code == 2
    assert "error:" in err


def test_nf_identity_example(capsys):
    code, out, _ = run(capsys, "nf", "c4c6", "--word", "v:g2 * w:g3")
    assert code == 0
    assert out.strip() == "1"


def test_nf_malformed_word(capsys):
    code, _, err = run(capsys, "nf", "c4c6", "--word", "v:g9")
    assert code == 2
    assert "error:" in err


def test_eq_reports_both_outcomes(capsys):
    code, out, _ = run(capsys, "eq", "c4c6", "--w1", "v:g2", "--w2", "w:g3")
    assert code == 0 and out.strip() == "equal: v:g2"
    code, out, _ = run(capsys, "eq", "c4c6", "--w1", "v:g1", "--w2", "w:g3")
    assert code == 0 and out.strip() == "different: v:g1 vs v:g2"


def test_ball_counts_and_lists(capsys):
    code, out, _ = run(capsys, "ball", "c4c6", "--radius", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "16 elements (radius 2)"
    assert lines[1] == "1"
    assert len(lines) == 17


def test_deriv_build_eval_round_trip(capsys, tmp_path):
    path = tmp_path / "f.deriv.json"
    code, out, _ = run(
        capsys, "deriv", "dunwoody", "c4c6",
        "--base", "v", "--target", "w", "--mod", "5", "--out", str(path),
    )
    assert code == 0
    assert f"wrote {path}" in out
    code, out, _ = run(
        capsys, "deriv", "eval", "c4c6", "--deriv", str(path), "--word", "w:g1"
    )
    assert code == 0
    assert out.strip() == "component 0: 4·[1] + 4·[v:g2] + 1·[w:g1] + 1·[w:g1 * v:g2]"


def test_kernel_scan_clean(capsys):
    code, out, _ = run(
        capsys, "deriv", "kernel-scan", "c4c6", "--kind", "access",
        "--base", "v", "--mod", "5", "--subgroup", "v", "--radius", "6",
    )
    assert code == 0
    assert out.strip() == "0 mismatches / 100 elements"


def test_kernel_scan_flags_wrong_designation(capsys):
    code, out, _ = run(
        capsys, "deriv", "kernel-scan", "c4c6", "--kind", "access",
        "--base", "v", "--mod", "5", "--subgroup", "w", "--radius", "3",
    )
    assert code == 1
    assert out.splitlines()[0] == "6 mismatches / 28 elements"
    assert "killed but outside the designated subgroup" in out


def test_tree_ball_counts(capsys):
    code, out, _ = run(capsys, "tree", "ball", "c4c6", "--radius", "2")
    assert code == 0
    assert out.splitlines() == ["7 vertices, 6 edges (radius 2)", "tree: True"]


def test_tree_ball_dot(capsys):
    code, out, _ = run(capsys, "tree", "ball", "c4c6", "--radius", "1", "--dot")
    assert code == 0
    assert out.startswith("graph structure_tree {")
    assert 'n0 -- n2 [label="v:g1·G(e)"];' in out


def test_tree_fix_within_and_beyond_radius(capsys):
    deep = "w:g5 * v:g3 * w:g5 * v:g1 * w:g1 * v:g1 * w:g1"
    code, out, _ = run(capsys, "tree", "fix", "c4c6", "--elements", deep, "--radius", "6")
    assert code == 0
    assert out.startswith("fixed vertex at v")
    code, out, _ = run(capsys, "tree", "fix", "c4c6", "--elements", deep, "--radius", "1")
    assert code == 3
    assert "no fixed vertex within radius 1" in out


def test_tree_fix_rejects_infinite_subgroups(capsys):
    code, _, err = run(
        capsys, "tree", "fix", "c4c6", "--elements", "v:g1 * w:g1", "--radius", "4"
    )
    assert code == 2
    assert "treating as infinite" in err


def test_tree_conj_finds_vertex_representative(capsys):
    code, out, _ = run(
        capsys, "tree", "conj", "c4c6", "--elements", "w:g1 * v:g2 * w:g5"
    )
    assert code == 0
    assert out.strip() == "conjugator 1 into vertex v"


def test_quotient_separate_finds_c12(capsys, tmp_path):
    path = tmp_path / "q.quot.json"
    code, out, _ = run(
        capsys, "quotient", "separate", "c4c6",
        "--elements", "v:g1", "--out", str(path),
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "target C12 (order 12)"
    assert lines[1] == "  v: [0, 3, 6, 9]"
    assert lines[2] == "  w: [0, 2, 4, 6, 8, 10]"
    data = json.loads(path.read_text())
    assert data["vertex_images"]["v"] == [0, 3, 6, 9]


def test_quotient_separate_rejects_identity(capsys):
    code, _, err = run(capsys, "quotient", "separate", "c4c6", "--elements", "1")
    assert code == 2
    assert "identity" in err


def test_quotient_embed_and_refine(capsys, tmp_path):
    code, out, _ = run(
        capsys, "quotient", "embed", "c4c6", "--vertex", "v", "--subgroup", "0,2"
    )
    assert code == 0
    assert out.splitlines()[0] == "target C4 (order 4)"
    given = tmp_path / "given.quot.json"
    run(capsys, "quotient", "separate", "c4c6", "--elements", "v:g1", "--out", str(given))
    code, out, _ = run(
        capsys, "quotient", "refine", "c4c6", "--subgraph", "v", "--given", str(given)
    )
    assert code == 0
    assert out.splitlines()[0] == "target C4 (order 4)"


def test_surgery_collapse_writes_document_and_transcript(capsys, tmp_path):
    out_doc = tmp_path / "coll.gog.json"
    transcript = tmp_path / "coll.transcript.json"
    code, out, _ = run(
        capsys, "surgery", "collapse", "c4c2c4", "--edge", "e1",
        "--out", str(out_doc), "--transcript", str(transcript),
    )
    assert code == 0
    assert out.splitlines()[0] == "collapse: 2 vertices, 1 edges, basepoint u"
    assert "ok" in out
    code, out, _ = run(capsys, "validate", str(out_doc))
    assert code == 0
    record = json.loads(transcript.read_text())
    assert record["op"] == "collapse"
    assert set(record) >= {"input_sha256", "source", "output", "psi", "phi"}


def test_surgery_reverse_and_expand(capsys, tmp_path):
    code, out, _ = run(capsys, "surgery", "reverse", "c4c6", "--edge", "e")
    assert code == 0
    assert "ok" in out
    out_doc = tmp_path / "expanded.gog.json"
    code, out, _ = run(
        capsys, "surgery", "expand", "expand_demo", "--vertex", "m", "--out", str(out_doc)
    )
    assert code == 0
    code, _, _ = run(capsys, "validate", str(out_doc))
    assert code == 0


def test_surgery_attach_success_and_exhaustion(capsys):
    code, out, _ = run(capsys, "surgery", "attach", "c4c6", "--vertex", "v", "--chi", "0,2")
    assert code == 0
    assert "ok" in out
    code, out, _ = run(capsys, "surgery", "attach", "c4c6", "--vertex", "v", "--chi", "0")
    assert code == 3
    assert "no conjugator table" in out


def test_surgery_amalgamate_reports_factors(capsys):
    code, out, _ = run(capsys, "surgery", "amalgamate", "c4c6", "--subgraph", "v")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "amalgam over edge e"
    assert "delta: vertices ['w']" in lines[1]
    assert "chi:   [0, 3] at w" in lines[2]


def test_surgery_unknown_edge(capsys):
    code, _, err = run(capsys, "surgery", "collapse", "c4c6", "--edge", "zz")
    assert code == 2
    assert "error:" in err


def test_verify_fixture_subset(capsys):
    code, out, _ = run(capsys, "verify", "all", "--fixture", "c2c2")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "10/10 checks passed"
    assert any(line.startswith("PASS c07-relative-malnormality") for line in lines)
