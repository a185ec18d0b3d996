import json

import pytest

from hopftwist.cli import _data_path, main
from hopftwist.io import dumps, instance_to_json

from conftest import ALL, instance


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--json", *argv)
    return code, json.loads(out)


def checks(doc):
    return {c["name"]: c for r in doc["reports"] for c in r["checks"]}


def write(tmp_path, name, d):
    p = tmp_path / name
    p.write_text(dumps(d) if isinstance(d, dict) else d)
    return str(p)


def test_bundled_pair_algebroid_checks_clean(capsys):
    code, doc = run_json(capsys, "check", "--instance", "pair_qz2")
    assert code == 0 and doc["exit"] == 0
    assert checks(doc)["(f) Takeuchi: Delta(h) I_R in I_R"]["status"] == "pass"


def test_check_by_path(capsys):
    code, out, _ = run(capsys, "check", "--instance", str(_data_path("instances", "groupoid2.json")))
    assert code == 0
    assert out.rstrip().endswith("exit 0")


def test_corrupted_delta_entry_exits_1(capsys, tmp_path):
    B, A = instance("pair_qz2")
    d = instance_to_json(B, A)
    i, j, c = d["delta"]["1"][0]
    d["delta"]["1"][0] = [i, j, str(int(c) + 1)]
    code, doc = run_json(capsys, "check", "--instance", write(tmp_path, "bad.json", d))
    assert code == 1
    failed = [n for n, c in checks(doc).items() if c["status"] == "fail"]
    assert any("Takeuchi" in n or "coassociativity" in n for n in failed)


def test_truncated_file_exits_2(capsys, tmp_path):
    text = _data_path("instances", "z2.json").read_text()
    code, _, err = run(capsys, "check", "--instance", write(tmp_path, "t.json", text[:200]))
    assert code == 2
    assert "malformed input" in err


def test_missing_file_exits_2(capsys):
    assert run(capsys, "check", "--instance", "no-such-instance")[0] == 2


def test_non_commuting_images_exit_3(capsys, tmp_path):
    B, A = instance("groupoid2")
    d = instance_to_json(B, A)
    # beta sends the first idempotent to an arrow that does not commute with alpha's image
    d["beta"] = [["0", "0"], ["1", "0"], ["0", "0"], ["0", "1"]]
    code, doc = run_json(capsys, "check", "--instance", write(tmp_path, "nc.json", d))
    assert code == 3
    assert any(n.startswith(("beta ", "images commute")) for n, c in checks(doc).items()
               if c["status"] == "fail")


def test_instance_without_antipode_skips(capsys, tmp_path):
    B, _ = instance("z2")
    code, doc = run_json(capsys, "check", "--instance", write(tmp_path, "noS.json", instance_to_json(B)))
    assert code == 0
    assert checks(doc)["antipode"]["status"] == "skipped"


@pytest.mark.parametrize("name", [n for n in ALL if n != "pair_m2"])
def test_identity_twist_emits_the_input(capsys, tmp_path, name):
    out = tmp_path / "out.json"
    code, _, _ = run(capsys, "twist", "--instance", name, "--cocycle", f"{name}.identity", "--emit", str(out))
    assert code == 0
    src = json.loads(_data_path("instances", f"{name}.json").read_text())
    got = json.loads(out.read_text())
    src.pop("name"), got.pop("name")
    assert got == src


def test_klein_twist_passes_the_full_catalog(capsys, tmp_path):
    out = tmp_path / "tw.json"
    code, doc = run_json(capsys, "twist", "--instance", "z2xz2", "--cocycle", "z2xz2.factor-pairing",
                         "--verify-all", "--emit", str(out))
    assert code == 0
    names = checks(doc)
    assert names["twisted (b) antipode axiom"]["status"] == "pass"
    assert any(n.startswith("round trip: ") for n in names)
    assert any(n.startswith("base ") for n in names)
    # the emitted file re-loads and re-verifies
    code, _, _ = run(capsys, "check", "--instance", str(out))
    assert code == 0


def test_cocycle_failing_counitality_exits_1(capsys, tmp_path):
    c = {"format": "hopftwist-cocycle/1", "scalar": "rational", "F": [[0, 0, "1"], [2, 1, "1"]]}
    code, doc = run_json(capsys, "twist", "--instance", "z2xz2", "--cocycle", write(tmp_path, "c.json", c))
    assert code == 1
    assert checks(doc)["(id (x)_R eps)F = 1"]["status"] == "fail"


def test_skip_lift_validation_flag(capsys):
    code, doc = run_json(capsys, "twist", "--instance", "groupoid2_s3",
                         "--cocycle", "groupoid2_s3.diagonal-transposition", "--skip-lift-validation")
    assert code == 0
    assert checks(doc)["lift independence"]["status"] == "skipped"


def test_eval_bundled_corpus_on_the_klein_twist(capsys):
    code, out, _ = run(capsys, "eval", "--instance", "z2xz2", "--cocycle", "z2xz2.factor-pairing", "--native")
    assert code == 0
    assert "DSL vs native engine" in out


def test_eval_false_identity_gives_a_witness(capsys):
    code, doc = run_json(capsys, "eval", "--instance", "pair_m2", "S(h) (x)R 1 == 1 (x)R S(h)")
    assert code == 1
    c = checks(doc)["identity"]
    assert c["status"] == "fail" and "h" in c["witness"]


def test_eval_syntax_error_exits_2_with_position(capsys):
    code, _, err = run(capsys, "eval", "--instance", "z2", "S(h (x)R 1 == 1")
    assert code == 2
    assert err.startswith("syntax error: 1:")


def test_eval_corpus_path_and_seed(capsys, tmp_path):
    p = write(tmp_path, "c.txt", "[antipode]\nS(h_(1))_(1) * h_(2) (x)R S(h_(1))_(2) == 1 (x)R S(h)\n")
    assert run(capsys, "eval", "--instance", "groupoid2", p, "--seed", "3")[0] == 0


def test_build_and_list(capsys, tmp_path):
    out = tmp_path / "g.json"
    code, _, _ = run(capsys, "build", str(_data_path("tables", "groupoid2.json")), "--emit", str(out))
    assert code == 0
    assert json.loads(out.read_text())["H"] == json.loads(_data_path("instances", "groupoid2.json").read_text())["H"]
    bad = write(tmp_path, "bad.json", {"kind": "group", "product": [[0, 1], [1, 1]]})
    assert run(capsys, "build", bad)[0] == 2
    code, out, _ = run(capsys, "list")
    assert code == 0 and "z2xz2.factor-pairing" in out


def test_reports_are_deterministic(capsys):
    def strip(doc):
        for r in doc["reports"]:
            for c in r["checks"]:
                c.pop("seconds", None)
        return doc
    a = strip(run_json(capsys, "check", "--instance", "groupoid2")[1])
    b = strip(run_json(capsys, "check", "--instance", "groupoid2")[1])
    assert a == b
