import json

import pytest

from mcg4 import catalog
from mcg4.cli import main
from mcg4.james import SSReport
from mcg4.mcg import MCGReport


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_catalog_examples(capsys):
    code, out, _ = run(capsys, "analyze", "S3xI")
    assert code == 0 and "order: 2" in out.splitlines()
    code, out, _ = run(capsys, "analyze", "D4")
    assert code == 0 and "trivial group" in out
    code, out, _ = run(capsys, "analyze", "CP2-minus-disk", "--text")
    assert code == 0 and "order: 2" in out.splitlines()


def test_analyze_json_round_trip(capsys):
    code, out, _ = run(capsys, "analyze", "H", "--json")
    assert code == 0
    data = json.loads(out)
    rep = MCGReport.from_dict(data)
    assert rep.to_dict() == data
    assert rep.order == 4


def test_analyze_is_deterministic(capsys):
    first = run(capsys, "analyze", "E8-minus-disk", "--json")[1]
    second = run(capsys, "analyze", "E8-minus-disk", "--json")[1]
    assert first == second


def test_analyze_file(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"name": "lens", "gram": [[2]], "spin": True, "boundary_components": 1}))
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 0 and "order: 2" in out


def test_analyze_stabilize(capsys):
    code, out, _ = run(capsys, "--json", "analyze", "S3xI", "--stabilize", "1")
    data = json.loads(out)
    assert code == 0 and data["rank"] == 2 and data["theta_rank"] == 1


@pytest.mark.parametrize(
    "text, needle",
    [
        ('{"gram": [[1]], "spin": true,\n "boundary_components": }', "line 2"),
        ('{"gram": [[1, 2], [3, 4]], "spin": true, "boundary_components": 1}', "gram"),
        ('{"gram": [[1]], "spin": true, "boundary_components": 1, "components": [{"label": 3}]}',
         "components[0].label"),
    ],
)
def test_analyze_bad_files(tmp_path, capsys, text, needle):
    path = tmp_path / "bad.json"
    path.write_text(text)
    code, _, err = run(capsys, "analyze", str(path))
    assert code == 2 and needle in err


def test_analyze_missing(capsys):
    code, _, err = run(capsys, "analyze", "no-such-model")
    assert code == 2 and "catalog" in err


def test_ss_examples(capsys):
    code, out, _ = run(capsys, "ss", "--rank", "2", "--nonspin")
    assert code == 0 and "E3^(2,2) dim: 1" in out
    code, out, _ = run(capsys, "ss", "--rank", "3", "--spin")
    assert code == 0 and "E3^(4,1) dim: 0" in out and "omega5_zero: true" in out
    code, out, _ = run(capsys, "ss", "--rank", "1", "--spin")
    assert code == 0 and "E3^(2,2) dim: 0" in out


def test_ss_json(capsys):
    code, out, _ = run(capsys, "ss", "--rank", "4", "--spin", "--json")
    data = json.loads(out)
    assert code == 0 and SSReport.from_dict(data).to_dict() == data


@pytest.mark.parametrize("argv", [["ss", "--rank", "0", "--spin"], ["ss", "--rank", "9", "--spin"],
                                  ["ss", "--rank", "2"], ["ss", "--rank", "2", "--spin", "--nonspin"]])
def test_ss_bad_input(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_check_examples(capsys):
    code, out, _ = run(capsys, "check", "--form", "[[1]]", "--variation", "[[2]]")
    assert code == 0 and out.strip().startswith("member: true; xi: [[-1]]")
    code, out, _ = run(capsys, "check", "--form", "[[1]]", "--variation", "[[1]]")
    assert code == 0 and out.strip() == "member: false"
    code, out, _ = run(capsys, "check", "--form", "[[0, 1], [1, 0]]", "--variation", "[[0, 0], [0, 0]]")
    assert code == 0 and out.strip().startswith("member: true; xi: I")


def test_check_files_and_compose(tmp_path, capsys):
    (tmp_path / "q.json").write_text("[[1]]")
    (tmp_path / "v.json").write_text("[[2]]")
    code, out, _ = run(capsys, "--json", "check", "--form", str(tmp_path / "q.json"),
                       "--variation", str(tmp_path / "v.json"), "--compose-with", "[[2]]")
    data = json.loads(out)
    assert code == 0
    assert data == {"member": True, "xi": [[-1]], "rel_boundary": True, "compose": [[0]]}


@pytest.mark.parametrize(
    "form, var",
    [("[[1]]", "[[1, 0]]"), ("[[1, 0], [0, 1]]", "[[2]]"), ("[[1, 2], [3, 4]]", "[[0, 0], [0, 0]]"),
     ("[[1]]", "nosuchfile.json"), ("[[1]", "[[0]]")],
)
def test_check_bad_input(capsys, form, var):
    assert run(capsys, "check", "--form", form, "--variation", var)[0] == 2


def test_catalog_list(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    names = out.split()
    assert code == 0
    for name in ("S3xI", "D4", "CP2-minus-disk", "E8-minus-disk", "S2xD2", "H"):
        assert name in names
    assert names == catalog.names()


def test_catalog_show(capsys):
    code, out, _ = run(capsys, "catalog", "show", "S3xI")
    data = json.loads(out)
    assert code == 0
    assert data["gram"] == [] and data["spin"] is True and data["boundary_components"] == 2


@pytest.mark.parametrize("argv", [["catalog", "show", "nosuch"], ["catalog", "show"], ["catalog", "drop"]])
def test_catalog_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_quiet(capsys):
    code, out, _ = run(capsys, "--quiet", "analyze", "S3xI")
    assert code == 0 and out == ""


@pytest.mark.parametrize("entry", catalog.entries(), ids=lambda e: e.name)
def test_catalog_regression(capsys, entry):
    code, out, _ = run(capsys, "analyze", entry.name, "--json")
    data = json.loads(out)
    assert code == 0
    for key, value in entry.expected.items():
        assert data[key] == value, key


def test_catalog_dir(tmp_path, monkeypatch, capsys):
    (tmp_path / "lens7.json").write_text(json.dumps({
        "gram": [[7]], "spin": False, "boundary_components": 1,
        "expected": {"order": 1},
    }))
    monkeypatch.setenv("MCG4_CATALOG_DIR", str(tmp_path))
    assert "lens7" in catalog.names()
    entry = catalog.get("lens7")
    assert entry.expected == {"order": 1}
    code, out, _ = run(capsys, "analyze", "lens7", "--json")
    assert code == 0 and json.loads(out)["order"] == 1  # -1 moves the boundary class of order 7


def test_catalog_dir_bad_file(tmp_path, monkeypatch, capsys):
    (tmp_path / "broken.json").write_text("{")
    monkeypatch.setenv("MCG4_CATALOG_DIR", str(tmp_path))
    assert run(capsys, "catalog", "list")[0] == 2


def test_internal_inconsistency_exit(monkeypatch, capsys):
    from mcg4 import cli
    from mcg4.forms import InternalInconsistency

    def boom(_):
        raise InternalInconsistency("forced")

    monkeypatch.setattr(cli, "analyze", boom)
    code, _, err = run(capsys, "analyze", "D4")
    assert code == 3 and "forced" in err


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0
