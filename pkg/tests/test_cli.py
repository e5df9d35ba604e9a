import json
import subprocess
import sys

import pytest

from conftest import kan, valpha
from kanjordan.bimodule import BimoduleAction, direct_sum
from kanjordan.cli import main, parse_params
from kanjordan.report import CheckReport
from kanjordan.superalg import StructureTable


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_build_kan(capsys):
    code, d = run(capsys, "build", "kan", "--n", "3", "--field", "q")
    assert code == 0 and d["dim"] == 16
    assert StructureTable.from_dict(d).to_dict() == d


def test_build_valpha(capsys):
    code, d = run(capsys, "build", "valpha", "--n", "2", "--alpha", "1", "--parity", "0")
    assert code == 0 and d["dimV"] == 8
    assert BimoduleAction.from_dict(d).to_dict() == d


def test_build_tensor_and_symbolic(capsys):
    code, d = run(capsys, "build", "tensor", "--n", "2", "--alpha", "1", "--N", "2")
    assert code == 0 and d["dim"] == 16
    code, d = run(capsys, "build", "valpha", "--n", "2", "--alpha", "al", "--field", "symbolic")
    assert code == 0 and d["field"] == "Q[al]"
    assert BimoduleAction.from_dict(d).to_dict() == d


@pytest.mark.parametrize("argv", [
    ["build", "kan", "--n", "1"],
    ["build", "kan", "--n", "2", "--field", "f2"],
    ["build", "valpha", "--n", "2", "--parity", "3"],
    ["build", "valpha", "--n", "2", "--alpha", "x"],
    ["check", "jordan"],
    ["check", "jordan", "--kan", "1"],
    ["check", "lemmas", "--kan", "2"],
    ["check", "kantor", "--valpha", "n=2"],
    ["check", "jordan", "--file", "/nonexistent.json"],
    ["classify", "--kan", "2"],
    ["iso", "--valpha", "n=2"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["check", "nonsense", "--kan", "2"])
    assert exc.value.code == 2


def test_check_jordan_kan(capsys):
    code, d = run(capsys, "check", "jordan", "--kan", "3")
    assert code == 0 and d["status"] == "pass"
    for r in d["reports"]:
        assert CheckReport.from_dict(r).to_dict() == r


def test_check_lemmas(capsys):
    code, d = run(capsys, "check", "lemmas", "--valpha", "n=3,alpha=2")
    assert code == 0 and d["status"] == "pass"


def test_check_corrupted_file(capsys, tmp_path):
    K = kan(2)
    i, j = K.index("be[1]"), K.index("be[1,2]")
    (k, c), = K.product[(i, j)]
    path = tmp_path / "corrupted.json"
    path.write_text(K.with_entry(i, j, [(k, 2 * c)]).to_json())
    code, d = run(capsys, "check", "jordan", "--file", str(path), "--limit", "3")
    assert code == 1 and d["status"] == "fail"
    jordan = d["reports"][-1]
    assert jordan["total_violations"] > 3 and len(jordan["violations"]) == 3


def test_check_file_breaking_parity(capsys, tmp_path):
    K = kan(2)
    path = tmp_path / "bad.json"
    path.write_text(K.with_entry(1, 2, [(1, 1)]).to_json())
    code, d = run(capsys, "check", "jordan", "--file", str(path))
    assert code == 1 and "parity" in d["reports"][0]["violations"][0]["note"]


def test_check_suites(capsys):
    assert run(capsys, "check", "kantor", "--kan", "3", "--field", "f3")[0] == 0
    assert run(capsys, "check", "bimodule", "--regular", "n=2")[0] == 0
    code, d = run(capsys, "check", "all", "--valpha", "n=2,alpha=1/2,parity=1", "--field", "f5")
    assert code == 0 and len(d["reports"]) == 3
    code, d = run(capsys, "check", "all", "--tensor", "n=2,alpha=-1,N=2")
    assert code == 0 and {r["subject"].split()[0] for r in d["reports"]} == {"supercommutativity", "Jordan", "Kantor"}


def test_threads_are_deterministic(capsys, tmp_path):
    path = tmp_path / "c.json"
    path.write_text(kan(3).with_entry(9, 10, [(3, 2)]).to_json())
    outs = []
    for t in ("1", "3"):
        code, d = run(capsys, "check", "jordan", "--file", str(path), "--threads", t)
        assert code == 1
        outs.append([r["violations"] for r in d["reports"]])
    assert outs[0] == outs[1]


def test_classify(capsys):
    assert run(capsys, "classify", "--valpha", "n=2,alpha=2,parity=0") == (0, {"parity": 0, "alpha": "2"})
    code, d = run(capsys, "classify", "--regular", "n=2")
    assert code == 0 and d["alpha"] == "0"


def test_classify_reducible(capsys, tmp_path):
    V = valpha(2, 1)
    path = tmp_path / "reducible.json"
    path.write_text(direct_sum(V, V).to_json())
    code, d = run(capsys, "classify", "--file", str(path))
    assert code == 1
    assert d["irreducible"] is False and d["certificate"]["type"] == "reducible"


def test_iso_and_special(capsys):
    code, d = run(capsys, "iso", "--valpha", "n=2,alpha=0,parity=0", "--regular", "n=2")
    assert code == 0 and d["isomorphic"] and d["phi"]
    code, d = run(capsys, "iso", "--valpha", "n=2,alpha=1", "--valpha", "n=2,alpha=2")
    assert code == 1 and not d["isomorphic"]
    code, d = run(capsys, "special", "--valpha", "n=2,alpha=-1", "--certificate")
    assert code == 0 and d["dimension"] == 1 and d["certificate"]["type"] == "irreducible"


def test_parse_params():
    assert parse_params("3") == {"n": "3"}
    assert parse_params("n=2, alpha=1/2,parity=1") == {"n": "2", "alpha": "1/2", "parity": "1"}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kanjordan", "classify", "--valpha", "n=2,alpha=3,parity=1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"parity": 1, "alpha": "3"}
