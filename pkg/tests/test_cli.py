import csv
import json

import pytest

from toeplitz_lab import decks
from toeplitz_lab.cli import main
from toeplitz_lab.lattice import SpecError


def run(args):
    return main(args)


def test_show_config_roundtrip(tmp_path, capsys):
    assert run(["show-config", "--config", "dihedral-m2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    deck = decks.deck_from_config(doc)
    assert deck.name == "dihedral-m2"
    # a saved configuration loads back through the file path route
    path = tmp_path / "deck.json"
    path.write_text(json.dumps(doc))
    assert decks.load_deck(str(path)).chain == deck.chain


def test_unknown_deck_is_config_error():
    assert run(["gen-z", "--config", "no-such-deck"]) == 2


def test_invalid_chain_is_config_error(tmp_path):
    doc = decks.deck_to_config(decks.bundled_deck("dihedral-m2"))
    doc["chain"] = [[3]] + doc["chain"][1:]  # violates p^1 > 3
    doc["offsets"] = "auto"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    assert run(["gen-group", "--config", str(path)]) == 2
    with pytest.raises(SpecError):
        decks.load_deck(str(path))


def test_gen_z_outputs(tmp_path):
    out = tmp_path / "o"
    assert run(["gen-z", "--config", "williams-m2", "--window", "200",
                "--out", str(out)]) == 0
    rows = list(csv.reader(open(out / "williams-m2" / "gen-z" / "patch.csv")))
    assert rows[0] == ["position", "symbol", "level"]
    assert len(rows) == 402
    summary = json.loads((out / "williams-m2" / "gen-z" / "summary.json")
                         .read_text())
    assert summary["ratio_partial_sums"][0] == "1/6"


def test_gen_group_and_measures(tmp_path):
    out = tmp_path / "o"
    assert run(["gen-group", "--config", "dihedral-m2", "--level", "2",
                "--out", str(out)]) == 0
    rows = list(csv.reader(open(out / "dihedral-m2" / "gen-group" /
                                "patch.csv")))
    assert rows[0] == ["finite_part", "v1", "symbol", "level"]
    assert len(rows) == 51
    assert run(["measures", "--config", "dihedral-m2", "--level", "3",
                "--out", str(out)]) == 0
    doc = json.loads((out / "dihedral-m2" / "measures" / "verdicts.json")
                     .read_text())
    assert doc["passed"]
    assert doc["checks"]["marker_mass"]["counted"] == "1/10"


def test_reports_are_deterministic(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert run(["measures", "--config", "dihedral-m2", "--level", "3",
                    "--out", str(out)]) == 0
    f1 = (out1 / "dihedral-m2" / "measures" / "verdicts.json").read_bytes()
    f2 = (out2 / "dihedral-m2" / "measures" / "verdicts.json").read_bytes()
    assert f1 == f2
    c1 = (out1 / "dihedral-m2" / "measures" / "frequencies.csv").read_bytes()
    c2 = (out2 / "dihedral-m2" / "measures" / "frequencies.csv").read_bytes()
    assert c1 == c2


def test_fibers_report(tmp_path):
    out = tmp_path / "o"
    assert run(["fibers", "--config", "dihedral-m2", "--out", str(out)]) == 0
    doc = json.loads((out / "dihedral-m2" / "fibers" / "fibers.json")
                     .read_text())
    assert doc["passed"] and doc["max_fiber_count"] <= doc["fiber_bound"]
    assert len(doc["rows"]) == 50


def test_independence_budget_exhaustion(tmp_path):
    out = tmp_path / "o"
    code = run(["independence", "--config", "williams-m2", "--max-steps", "2",
                "--out", str(out)])
    assert code == 3
    rows = list(csv.reader(open(out / "williams-m2" / "independence" /
                                "summary.csv")))
    assert rows[1][3] == "exhausted"


def test_independence_success(tmp_path):
    out = tmp_path / "o"
    assert run(["independence", "--config", "dihedral-m2",
                "--out", str(out)]) == 0
    cert = (out / "dihedral-m2" / "independence" / "certificate.json")
    assert cert.exists()
    doc = json.loads((out / "dihedral-m2" / "independence" / "entropy.json")
                     .read_text())
    assert doc["lower_bits"] == 1.0 and doc["upper_bits"] == 4.0


def test_pullback_rejection_and_success(tmp_path):
    out = tmp_path / "o"
    assert run(["pullback", "--config", "dihedral-m2", "--weights", "1",
                "--out", str(out)]) == 1
    assert run(["pullback", "--config", "swap-m2", "--weights", "1,1",
                "--reach", "4", "--out", str(out)]) == 0
    doc = json.loads((out / "swap-m2" / "pullback" / "pullback.json")
                     .read_text())
    assert doc["valid"] and doc["section"] == [0, 1]
