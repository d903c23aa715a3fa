"""hg --json output against tools/schema/hg-cli.schema.json, plus exit codes."""

import json
import os
import re
import subprocess
from pathlib import Path

import jsonschema
import pytest

HG = os.environ["HG_BIN"]
ROOT = Path(__file__).resolve().parents[2]
CORPUS = ROOT / "corpus"
SCHEMA = json.loads((ROOT / "tools/schema/hg-cli.schema.json").read_text())
VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def hg(*args):
    return subprocess.run([HG, *map(str, args)], capture_output=True, text=True, timeout=300)


def hg_json(*args):
    p = hg("--json", *args)
    doc = json.loads(p.stdout)
    VALIDATOR.validate(doc)
    return p.returncode, doc


def assertions(path):
    return re.findall(r"^\s*assert\s+(\w+)\s*:", path.read_text(), re.M)


CHECKS = [(p, a) for p in sorted(CORPUS.rglob("*.hg")) for a in assertions(p)]


@pytest.mark.parametrize("path,name", CHECKS, ids=[f"{p.stem}:{a}" for p, a in CHECKS])
def test_check_corpus(path, name):
    code, doc = hg_json("check", path, "--assert", name, "--scope", "2")
    assert doc["command"] == "check"
    assert code == {"none-within-scope": 0, "refuted": 2, "unsupported": 1}[doc["outcome"]]


def test_check_counts_and_witness():
    code, doc = hg_json("check", CORPUS / "rel/laws.hg", "--assert", "assoc", "--scope", "3")
    assert (code, doc["outcome"], doc["examined"]) == (0, "none-within-scope", 530)
    code, doc = hg_json("check", CORPUS / "rel/bad.hg", "--assert", "rins", "--scope", "1")
    assert code == 2
    assert doc["interpretation"]["text"] == "|U|=1, r={(0,0)}, s={}"


def test_check_text():
    p = hg("check", CORPUS / "rel/bad.hg", "--assert", "rins", "--scope", "1")
    assert p.returncode == 2
    assert p.stdout.splitlines() == ["counterexample within scope 1 (3 interpretations)", "|U|=1, r={(0,0)}, s={}"]


def test_errors(tmp_path):
    code, doc = hg_json("check", CORPUS / "rel/bad.hg", "--assert", "nope")
    assert (code, doc["error"]["code"]) == (1, "UnknownGoal")
    bad = tmp_path / "bad.hg"
    bad.write_text("lang REL; rel r : 2;\nassert a: r in (;\n")
    code, doc = hg_json("check", bad, "--assert", "a")
    assert (code, doc["error"]["code"], doc["error"]["line"]) == (1, "ParseError", 2)
    p = hg("check", bad, "--assert", "a")
    assert p.returncode == 1 and p.stderr.startswith(f"{bad}:2:")
    code, doc = hg_json("check", CORPUS / "rel/bad.hg", "--assert", "rins", "--scope", "9")
    assert (code, doc["error"]["code"]) == (1, "ScopeExceedsCeiling")


def test_prove_save_replay(tmp_path):
    saved = tmp_path / "trans.hgsession"
    code, doc = hg_json("prove", CORPUS / "rel/trans.hg", "--goal", "trans", "--script", CORPUS / "rel/trans.hgs",
                        "--save", saved)
    assert code == 0 and doc["discharged"]
    assert doc["nodes"][0]["status"] == "Discharged"
    assert any(n["language"] == "FORK" for n in doc["nodes"])
    code, again = hg_json("replay", saved)
    assert code == 0 and again["digest"] == doc["digest"]

    tampered = json.loads(saved.read_text())
    tampered["digest"] = "0" * 64
    bad = tmp_path / "tampered.hgsession"
    bad.write_text(json.dumps(tampered))
    code, err = hg_json("replay", bad)
    assert (code, err["error"]["code"]) == (1, "DigestMismatch")


def test_prove_partial_and_failing(tmp_path):
    partial = tmp_path / "partial.hgs"
    partial.write_text("root switch-language translator=rel2fork\n")
    code, doc = hg_json("prove", CORPUS / "rel/trans.hg", "--goal", "trans", "--script", partial)
    assert code == 2 and not doc["discharged"]
    assert doc["nodes"][0]["status"] == "Translated"
    code, doc = hg_json("prove", CORPUS / "rel/swap.hg", "--goal", "swap", "--script", CORPUS / "rel/wit.hgs")
    assert (code, doc["error"]["code"]) == (1, "ActionNotApplicable")


def test_usage():
    assert hg().returncode == 64
    assert hg("check").returncode == 64
    assert hg("frobnicate").returncode == 64
    assert hg("--help").returncode == 0


def test_schema_rejects_malformed():
    _, doc = hg_json("check", CORPUS / "rel/bad.hg", "--assert", "rins", "--scope", "1")
    for mutate in (lambda d: d.update(outcome="Refuted"), lambda d: d.update(interpretation=None),
                   lambda d: d.pop("examined"), lambda d: d.update(error={"code": "Nope", "message": ""})):
        broken = json.loads(json.dumps(doc))
        mutate(broken)
        assert not VALIDATOR.is_valid(broken)
