import csv
import io
import json

import numpy as np
import pytest

from onepoint.cli import CSV_HEADER, fmt_complex, parse_complex, run
from onepoint.report import load_report


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


@pytest.mark.parametrize("text,want", [("0+1.0i", 1j), ("0.2", 0.2), ("-0.5-2i", -0.5 - 2j),
                                       ("i", 1j), ("1e-3+2e-1i", 0.001 + 0.2j)])
def test_parse_complex(text, want):
    assert parse_complex(text) == want


def test_complex_format_round_trip():
    for z in (0.3 - 1.25j, -2 + 0j, 1e-9j):
        assert parse_complex(fmt_complex(z)) == z


def test_smatrix_table():
    code, text = call("table", "smatrix")
    assert code == 0
    rows = [[parse_complex(t) for t in line.split()] for line in text.strip().splitlines()]
    h = np.arange(4)
    assert np.allclose(np.array(rows), 0.5 * np.exp(-1j * np.pi * np.outer(h, h) / 2), atol=1e-6)


def test_verify_s_example_passes():
    code, text = call("verify", "theorem1", "--gamma", "0,-1,1,0", "--module", "1", "--v", "alpha",
                      "--u", "0.2", "--tau", "0+1.0i", "--depth", "12")
    assert code == 0 and text.startswith("PASS")


def test_unknown_check_is_usage_error(capsys):
    assert call("verify", "bogus")[0] == 2
    assert call("nonsense")[0] == 2
    assert call("verify", "theorem1", "--tau", "0-1i")[0] == 2


def test_failing_check_exits_one():
    code, text = call("verify", "theorem1", "--data", "printed", "--module", "1", "--v", "alpha")
    assert code == 1 and "FAIL" in text


def test_json_round_trip(tmp_path):
    path = tmp_path / "r.json"
    code, _ = call("verify", "corollary", "--gamma", "TS", "--module", "2", "--u", "0.3+0.1i",
                   "--w", "0.2", "--tau", "0.4+1.1i", "--json", str(path))
    assert code == 0
    doc = load_report(path)
    raw = json.loads(path.read_text())
    assert doc["schema"] == 1 and doc["pass"] is True
    assert raw["parameters"]["gamma"] == "TS"
    again = tmp_path / "again.json"
    call("verify", "corollary", "--gamma", "TS", "--module", "2", "--u", "0.3+0.1i",
         "--w", "0.2", "--tau", "0.4+1.1i", "--json", str(again))
    assert again.read_text() == path.read_text()
    rec = raw["records"][0]
    assert rec["abs_err"] == doc["records"][0]["abs_err"]


def test_csv_header(tmp_path):
    path = tmp_path / "s.csv"
    code, _ = call("sweep", "--grid", "2,2", "--module", "1", "--v", "alpha", "--csv", str(path))
    assert code == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 1 + 4
    assert all(float(r[-1]) < 1e-8 for r in rows[1:])


def test_random_gamma_deterministic(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        call("verify", "theorem1", "--gamma", "random", "--seed", "11", "--json", str(path))
        outs.append(path.read_text())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("argv", [
    ("verify", "pk", "--gamma", "S", "--tau", "0.3+1.2i", "--z=-0.2+0.4i"),
    ("verify", "section4", "--which", "S-theta", "--h", "1", "--k", "1", "--tau", "0.2+1.1i", "--z", "0.1+0.2i"),
    ("verify", "prop1", "--module", "1", "--v", "alpha", "--tau", "1.3i", "--z", "0.4i", "--x", "0.9i"),
    ("verify", "prop-zero-modes", "--n", "2", "--module", "1", "--gamma", "T", "--tau", "0.1+1i", "--x", "0.4i"),
    ("verify", "counting"),
    ("verify", "schur"),
    ("verify", "mode-sum"),
    ("verify", "cross-oracle", "--module", "3", "--u", "0.3+0.1i", "--w", "0.2"),
    ("table", "agamma", "--gamma", "ST^-1S"),
    ("table", "tmatrix"),
])
def test_subcommands_pass(argv):
    code, text = call(*argv)
    assert code == 0, text


def test_printed_theta_law_fails():
    code, _ = call("verify", "section4", "--which", "T-prime", "--h", "1", "--k", "0",
                   "--tau", "0.2+1.1i", "--z", "0.1+0.2i", "--form", "printed")
    assert code == 1
