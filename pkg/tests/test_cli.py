import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from cli_corpus import CORPUS
from tori.cli import build_parser, main
from tori.contfrac import ContinuedFraction
from tori.serialize import cf_from_json, convergent_from_json, dumps, matrix_from_json, spectrum_from_json


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_reduce_example(capsys):
    code, out, _ = run(["reduce", "--tau", "5+1i"], capsys)
    assert code == 0
    assert json.loads(out) == {"schema": 1, "tau": "0+1i", "matrix": [[1, -5], [0, 1]]}


def test_cf_example(capsys):
    code, out, _ = run(["cf", "--surd", "0", "1", "1", "2"], capsys)
    assert json.loads(out) == {"schema": 1, "a0": 1, "preperiod": [], "period": [2]}
    assert cf_from_json(json.loads(out)) == ContinuedFraction(1, (), (2,))


def test_morita_example(capsys):
    code, out, _ = run(["morita", "--surd1", "0", "1", "1", "2", "--surd2", "1", "1", "1", "2"], capsys)
    data = json.loads(out)
    assert code == 0 and data["equivalent"] is True and data["exact"] is True
    assert isinstance(data["shift"], int)
    assert matrix_from_json(data["matrix"]).det in (1, -1)


@pytest.mark.parametrize("argv", CORPUS, ids=lambda a: " ".join(a[:3]))
def test_corpus_deterministic(argv, capsys):
    first = run(argv, capsys)
    second = run(argv, capsys)
    assert first[0] == 0
    assert first == second


@pytest.mark.parametrize("argv", [a for a in CORPUS if "--output" not in a and a[0] != "plot"], ids=lambda a: a[0])
def test_corpus_json_roundtrip(argv, capsys):
    _, out, _ = run(argv, capsys)
    data = json.loads(out)
    assert data["schema"] == 1
    payload = {k: v for k, v in data.items() if k != "schema"}
    assert dumps(payload) + "\n" == out


def test_spectrum_payload_decodes(capsys):
    _, out, _ = run(["spectrum", "--tau", "0+1i", "--cutoff", "2.3", "--mode", "primitive"], capsys)
    sp = spectrum_from_json(json.loads(out)["spectrum"])
    assert [e.multiplicity for e in sp.entries] == [2, 2, 4]


def test_convergents_payload_decodes(capsys):
    _, out, _ = run(["convergents", "--real", "3.141592653589793", "--depth", "4"], capsys)
    convs = [convergent_from_json(c) for c in json.loads(out)["convergents"]]
    assert [(c.p, c.q) for c in convs][-2:] == [(333, 106), (355, 113)]


def test_text_output_is_tab_delimited(capsys):
    _, out, _ = run(["spectrum", "--tau", "0+1i", "--cutoff", "2.3", "--output", "text"], capsys)
    rows = [line.split("\t") for line in out.splitlines()]
    assert rows[0] == ["length", "multiplicity"]
    assert all(len(r) == 2 for r in rows)


def test_svg_outputs(capsys, tmp_path):
    _, out, _ = run(["plot", "lattice", "--tau", "0+1i", "--cutoff", "2.3"], capsys)
    root = ET.fromstring(out)
    ids = [el.get("id") for el in root.iter() if el.get("id")]
    assert len([i for i in ids if i.startswith("geodesic-")]) == 8
    fig = tmp_path / "klein.svg"
    code, out, _ = run(["klein", "--real", "3.141592653589793", "--depth", "3", "--figure", str(fig)], capsys)
    assert code == 0 and json.loads(out)["figure"] == str(fig)
    assert "segment-I-3" in fig.read_text()


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(["reduce", "--tau", "0.5i", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["tau"] == "0+2i"


@pytest.mark.parametrize(
    "argv",
    [
        ["reduce", "--tau", "1-1i"],
        ["reduce", "--tau", "abc"],
        ["spectrum", "--tau", "0+1i", "--cutoff", "-2"],
        ["spectrum", "--tau", "0+1i", "--mode", "odd"],
        ["cf", "--surd", "2", "0", "1", "2"],
        ["cf"],
        ["cf", "--surd", "0", "1", "1", "2", "--real", "1.5"],
        ["morita", "--surd1", "0", "1", "1", "-2", "--surd2", "0", "1", "1", "2"],
        ["vmap", "--surd", "0", "1", "1", "2", "--f-family", "cubic"],
        ["weierstrass", "--tau", "0+1i", "--box", "2"],
        ["reduce", "--tau", "0+1i", "--output", "svg"],
        ["nosuch"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 2 and out == ""


def test_domain_error_json(capsys, monkeypatch):
    monkeypatch.setenv("TORI_MAX_ENTRIES", "50")
    code, out, err = run(["spectrum", "--tau", "0+1i", "--cutoff", "40"], capsys)
    assert code == 1 and out == ""
    assert json.loads(err.strip().splitlines()[-1])["error"] == "resource_limit"


def test_domain_error_no_convergence(capsys):
    code, _, err = run(["weierstrass", "--tau", "0.3+0.02i", "--box", "8"], capsys)
    assert code == 1
    assert json.loads(err)["error"] == "no_convergence"


def test_help_on_every_subcommand(capsys):
    parser = build_parser()
    sub = next(a for a in parser._actions if a.dest == "command")
    for name, p in sub.choices.items():
        assert run([name, "--help"], capsys)[0] == 0
        text = p.format_help()
        for action in p._actions:
            for flag in action.option_strings:
                assert flag in text
    assert run(["--help"], capsys)[0] == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tori", "reduce", "--tau", "5+1i"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["matrix"] == [[1, -5], [0, 1]]
