import json
import subprocess
import sys

import pytest

from genmat.cli import main
from genmat.matrix import Mat2, lie_bracket
from genmat.poly import GF2, PSEUDO4, PolyRing
from genmat.words import GenericPair, evaluate_word, parse_word


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def verify_json():
    import io
    from contextlib import redirect_stdout

    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(["verify", "--trials", "20", "--json"])
    return code, buf.getvalue()


def test_verify_passes(verify_json):
    code, text = verify_json
    doc = json.loads(text)
    assert code == 0 and doc["ok"]
    assert doc["schema"] == "genmat.cli/1"
    names = {s["suite"] for s in doc["suites"]}
    assert {"trace_identities_rational", "trace_identities_char2", "bracket_scalars", "j_ideal_closure",
            "module_roundtrips", "commutator_shape", "transport", "bch_commutator"} <= names


def test_verify_is_deterministic(verify_json, capsys):
    _, text, _ = run(capsys, "verify", "--trials", "20", "--json")
    assert text == verify_json[1]


def test_forced_failure_exits_nonzero(capsys):
    code, text, _ = run(capsys, "verify", "--trials", "5", "--force-failure")
    assert code == 1
    assert "FAIL  forced_failure" in text


def test_ranks(capsys):
    code, text, _ = run(capsys, "ranks", "--p", "2", "--max-n", "6", "--json")
    doc = json.loads(text)
    assert code == 0
    assert [r["omega_lower"] for r in doc["rows"]] == [2, 1, 2, 3, 6, 6]
    code, _, err = run(capsys, "ranks", "--max-n", "9", "--cap", "8")
    assert code == 2 and "increase" in err


def test_build_identity_and_out_file(capsys, tmp_path):
    out = tmp_path / "word.json"
    code, text, _ = run(capsys, "build-identity", "--p", "3", "--degree", "8", "--out", str(out))
    assert code == 0 and "overall: PASS" in text
    doc = json.loads(out.read_text())
    assert doc["word"]["schema"] == "genmat.identity/1"
    assert doc["certificate"]["ok"] is True


def test_build_identity_refuses_two(capsys):
    code, text, _ = run(capsys, "build-identity", "--p", "2", "--degree", "8")
    assert code == 1 and "p = 2 is not supported" in text


def test_build_identity_degree_validation(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["build-identity", "--degree", "6"])
    assert exc.value.code == 2
    assert "at least 7" in capsys.readouterr().err


def test_dichotomy(capsys):
    code, text, _ = run(capsys, "dichotomy", "--trials", "5")
    assert code == 0 and "(Z/2)^3" in text
    code, _, err = run(capsys, "dichotomy", "--cap", "6")
    assert code == 2 and "increase --cap" in err


def _write(tmp_path, name, m):
    path = tmp_path / name
    path.write_text(json.dumps(m.to_json()))
    return str(path)


def test_decompose(capsys, tmp_path):
    pair = GenericPair.pseudo4_char2(12)
    g = evaluate_word(parse_word("[[X,Y],[X,Y,X]]"), pair)
    code, text, _ = run(capsys, "decompose", _write(tmp_path, "g.json", g.delta), "--json")
    doc = json.loads(text)
    assert code == 0 and doc["UVW"]["schema"] == "genmat.uvw/1"

    code, text, _ = run(capsys, "decompose", _write(tmp_path, "c.json", lie_bracket(pair.x, pair.y)))
    assert code == 0 and "not in J" in text

    R = PolyRing(GF2, PSEUDO4, 6)
    x11 = R.var("x11")
    z = R.zero()
    code, text, _ = run(capsys, "decompose", _write(tmp_path, "bad.json", Mat2(z, z, x11, z)))
    assert code == 1 and "not in R" in text


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "genmat", "ranks", "--max-n", "4"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "overall: PASS" in res.stdout
