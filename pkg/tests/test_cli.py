import json
import xml.dom.minidom

import pytest

from quartichull.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_exact_exit_code(capsys):
    code, out, _ = run(capsys, "check", "--curve", "fermat")
    assert code == 0
    assert "verdict: Exact" in out


def test_check_not_exact_exit_code(capsys):
    code, out, _ = run(capsys, "check", "--curve", "smoothconvex")
    assert code == 1
    assert "verdict: NotExact" in out
    assert "witness: x1" in out


def test_check_json_format(capsys):
    code, out, _ = run(capsys, "check", "--curve", "fermat", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "Exact"


def test_usage_errors(capsys):
    assert run(capsys, "check", "--curve", "nosuch")[0] == 64
    assert run(capsys, "check", "--poly", "x1 + +")[0] == 64
    assert run(capsys, "check")[0] == 64  # no input given
    assert run(capsys, "check", "--curve", "egg", "--poly", "x1")[0] == 64
    assert run(capsys, "minimize", "x1*x2", "--curve", "egg")[0] == 64
    assert run(capsys, "minimize", "x1", "--curve", "egg", "-k", "1")[0] == 64
    assert run(capsys, "rational", "--curve", "egg")[0] == 64
    assert run(capsys, "boundary", "--curve", "egg", "-k", "x")[0] == 64
    assert run(capsys, "minimize", "x1", "--curve", "egg", "-k", "5..2")[0] == 64
    assert run(capsys, "check", "--curve", "egg", "--tol", "-1")[0] == 64
    assert run(capsys, "check", "--curve", "egg", "-n", "4")[0] == 64


def test_minimize_csv(capsys):
    code, out, _ = run(capsys, "minimize", "x2", "--curve", "egg", "-k", "2")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "k;bound;status"
    k, bound, status = lines[1].split(";")
    assert k == "2"
    assert status == "Optimal"
    assert float(bound) < -0.9  # egg reaches down to about -1.08


def test_boundary_csv_row_counts(capsys):
    code, out, _ = run(capsys, "boundary", "--curve", "fermat",
                       "-k", "2..3", "-n", "8")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines.count("# order k=2") == 1
    assert lines.count("# order k=3") == 1
    header_rows = [ln for ln in lines if ln.startswith("angle")]
    assert len(header_rows) == 2
    data_rows = [ln for ln in lines if ln and not ln.startswith(("#", "angle"))]
    assert len(data_rows) == 16  # 8 per order


def test_boundary_determinism(capsys, tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    for path in (a, b):
        code = main(["boundary", "--curve", "fermat", "-k", "2", "-n", "12",
                     "--out", str(path)])
        capsys.readouterr()
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_boundary_svg_well_formed(capsys, tmp_path):
    path = tmp_path / "hull.svg"
    code = main(["boundary", "--curve", "fermat", "-k", "2..3", "-n", "16",
                 "--format", "svg", "--out", str(path), "--jobs", "2"])
    capsys.readouterr()
    assert code == 0
    doc = xml.dom.minidom.parse(str(path))
    paths = doc.getElementsByTagName("path")
    assert len(paths) == 2  # one layer per order
    for el in paths:
        d = el.getAttribute("d")
        assert d.startswith("M ") and d.endswith(" Z")


def test_rational_text_output(capsys):
    code, out, _ = run(capsys, "rational", "--curve", "folium")
    assert code == 0
    assert "2*y0" in out
    assert "liftings: y0, y1" in out


def test_sos_feasible_and_infeasible(capsys):
    code, out, _ = run(capsys, "sos", "--curve", "egg", "--line", "2,0,-2")
    assert code == 0
    data = json.loads(out)
    assert len(data["squares"]) >= 1
    code, out, _ = run(capsys, "sos", "--curve", "bean", "--line", "0,1,0")
    assert code == 1
    assert json.loads(out)["feasible"] is False


def test_singularities_json(capsys):
    code, out, _ = run(capsys, "singularities", "--curve", "lemniscate")
    assert code == 0
    data = json.loads(out)
    assert len(data) == 1
    assert data[0]["location"] == [1.0, 0.0, 0.0]


def test_poly_file_input(capsys, tmp_path):
    path = tmp_path / "curve.txt"
    path.write_text("1 - x1^4 - x2^4\n")
    code, out, _ = run(capsys, "check", "--poly-file", str(path))
    assert code == 0
    assert "Exact" in out
