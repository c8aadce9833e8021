import json
import subprocess
import sys

import pytest

from twistsig.cli import main, parse_and_dispatch
from twistsig.manifolds import catalog_manifold, load_manifold, product_manifold
from twistsig.qseries import QSeries


def run(*argv):
    return parse_and_dispatch(list(argv))


def test_expand():
    assert run("expand", "--form", "E4", "--order", "4") == (0, "1 + 240q + 2160q^2 + 6720q^3 + O(q^4)")
    status, out = run("expand", "--form", "eps2", "--order", "3/2", "--json")
    assert status == 0 and QSeries.from_json(out).coefficient("1/2") == 1
    assert run("expand", "--form", "E2")[1].endswith("O(q^6)")


def test_numbers():
    assert run("sig", "--manifold", "catalog:HP2", "--twist", "L2T") == (0, "92")
    assert run("sig", "--manifold", "product:B8,HP2,HP2", "--twist", "L2T") == (0, "14336")
    assert run("index", "--manifold", "product:M08,M08,M08", "--twist", "T") == (0, "-744")
    assert json.loads(run("index", "--manifold", "catalog:B8", "--json")[1])["value"] == "1"


def test_fit(tmp_path):
    status, out = run("fit", "--basis", "sl2z12", "--form", "E4", "--order", "4")
    assert status == 0 and "in_span=false" in out
    series = -(QSeries({0: 1, 1: 240, 2: 2160, 3: 6720, 4: 17520}, 5) ** 3)
    path = tmp_path / "w.json"
    path.write_text(json.dumps(series.to_json()))
    doc = json.loads(run("fit", "--basis", "sl2z12", "--input", str(path), "--json")[1])
    assert doc == {"basis": "tate_w12", "coefficients": ["-1", "0"], "in_span": True, "verified_order": "5"}


def test_witten_and_manifold(tmp_path):
    assert run("witten", "--manifold", "catalog:M08", "--order", "3") == (0, "-1 - 240q - 2160q^2 + O(q^3)")
    out = tmp_path / "x.json"
    status, _ = run("manifold", "save", "product:B8,HP2,HP2", "--output", str(out))
    assert status == 0
    assert load_manifold(out) == product_manifold([catalog_manifold(n) for n in ("B8", "HP2", "HP2")])
    assert run("sig", "--manifold", f"file:{out}", "--twist", "L2T") == (0, "14336")
    assert json.loads(run("manifold", "show", "catalog:M08")[1])["string"] is True


def test_verify_exit_status():
    status, out = run("verify", "--suite", "all")
    assert status == 0 and out.startswith("#") and "\nFAIL " not in out
    status, out = run("verify", "--suite", "thm01", "--manifold", "product:B8,HP2,HP2")
    assert status == 0 and "XFAIL thm01: 2 ≠ 0 (mod 3) [non-string control]" in out
    assert run("verify", "--suite", "examples")[0] == 0
    assert run("verify", "--suite", "lemmas", "--seed", "1")[0] == 0


def test_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        run("frobnicate")
    assert exc.value.code != 0
    with pytest.raises(SystemExit):
        run("expand", "--form", "E4", "--bogus")
    assert run("sig", "--manifold", "catalog:K3")[0] == 1
    assert run("sig", "--manifold", "catalog:HP2", "--twist", "T^2")[0] == 1
    assert main(["sig", "--manifold", "nowhere"]) == 1
    assert "error:" in capsys.readouterr().err


def test_deterministic_output_and_module_entry():
    a = subprocess.run([sys.executable, "-m", "twistsig", "verify", "--suite", "examples"],
                       capture_output=True, text=True)
    b = subprocess.run([sys.executable, "-m", "twistsig", "verify", "--suite", "examples"],
                       capture_output=True, text=True)
    assert a.returncode == 0 and a.stdout == b.stdout
