import io
import subprocess
import sys
from fractions import Fraction

import pytest

from spheresnap.cli import main
from spheresnap.sphere import UnitSpherePoint


def run(argv, stdin="", monkeypatch=None, capsys=None):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cli(monkeypatch, capsys):
    return lambda argv, stdin="": run(argv, stdin, monkeypatch, capsys)


def test_snap_geo_jp(cli):
    assert cli(["snap", "--bits", "31", "--strategy", "jp", "--in", "geo"], "0 0\n") == (0, "1 0 0 1\n", "")


def test_snap_formats(cli):
    code, out, _ = cli(["snap", "--bits", "3", "--strategy", "fx", "--out", "fractions"], "3 -4\n")
    assert code == 0 and out == "48/73 -55/73\n"
    code, out, _ = cli(["snap", "--epsilon", "1/100", "--strategy", "cf", "--out", "decimal:10"], "3 -4\n")
    assert out == "0.6000000000 -0.8000000000\n"


def test_snap_stream_order_and_comments(cli):
    lines = "# header\n\n0 0 -7\n3 4 0\n1/3 2/3 -2/3\n"
    code, out, _ = cli(["snap", "--bits", "20"], lines)
    rows = [list(map(int, l.split())) for l in out.splitlines()]
    assert code == 0 and len(rows) == 3
    assert rows[0] == [0, 0, -1, 1]
    for r in rows:
        UnitSpherePoint.from_common(r[:-1], r[-1])
    assert rows[2] == [1, 2, -2, 3]


def test_snap_jobs_matches_serial(cli, tmp_path):
    pts = [f"{i} {2 * i + 1} {-(i % 7) - 1}" for i in range(300)]
    f = tmp_path / "pts.txt"
    f.write_text("\n".join(pts) + "\n")
    a = cli(["snap", "--bits", "23", str(f)])
    b = cli(["snap", "--bits", "23", "--jobs", "2", str(f)])
    assert a == b and a[0] == 0 and len(a[1].splitlines()) == 300


def test_snap_bad_line_continues(cli):
    code, out, err = cli(["snap", "--bits", "10", "--in", "geo"], "0 0\n100 0\nfoo 1\n90 0\n")
    assert code == 1
    assert out.splitlines() == ["1 0 0 1", "0 0 1 1"]
    assert "line 2" in err and "line 3" in err and err.startswith("spheresnap: ")


def test_snap_dim_and_zero(cli):
    code, out, err = cli(["snap", "--bits", "10", "--dim", "3"], "1 2\n0 0 0\n")
    assert code == 1 and out == "" and err.count("\n") == 2


def test_snap_bad_config(cli):
    code, _, err = cli(["snap", "--epsilon", "1/2"], "1 0\n")
    assert code == 1 and "epsilon" in err
    with pytest.raises(SystemExit):
        cli(["snap", "--bits", "3", "--epsilon", "1/8"])


def test_snap_bd_miss_exit_2(cli):
    code, out, err = cli(["snap", "--epsilon", "1/8", "--strategy", "bd", "--bd-n", "1"], "3 1 -4\n")
    assert code == 2 and out == "" and "line 1" in err


def test_missing_file(cli):
    code, _, err = cli(["snap", "/nonexistent/file"])
    assert code == 1 and err


def test_verify_no_floats(cli):
    code, out, _ = cli(["verify", "--theorem", "no-floats", "--d", "2", "--max-exp", "6"])
    assert code == 0
    assert out.startswith("no-floats: PASS\n  4 points")


def test_verify_liouville_mentions_q13(cli):
    code, out, _ = cli(["verify", "--theorem", "liouville", "--q-max", "10000"])
    assert code == 0 and "-4/13" in out


def test_verify_bad_args(cli):
    code, _, err = cli(["verify", "--theorem", "no-floats", "--d", "10", "--max-exp", "8"])
    assert code == 1 and "guard" in err


def test_bench(cli, tmp_path):
    scatter = tmp_path / "s.tsv"
    code, out, _ = cli(["bench", "--d", "3", "--e", "23", "--strategy", "fx,jp", "--count", "50",
                        "--seed", "42", "--scatter", str(scatter)])
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3
    assert lines[0].split("\t")[0] == "dataset"
    assert [l.split("\t")[3] for l in lines[1:]] == ["fx", "jp"]
    assert len(scatter.read_text().splitlines()) == 101
    # deterministic per seed
    assert cli(["bench", "--d", "3", "--e", "23", "--strategy", "fx", "--count", "20", "--seed", "1"])[1].split("\t")[:7] \
        == cli(["bench", "--d", "3", "--e", "23", "--strategy", "fx", "--count", "20", "--seed", "1"])[1].split("\t")[:7]


def test_bench_rejects(cli):
    assert cli(["bench", "--count", "0"])[0] == 1
    with pytest.raises(SystemExit):
        cli(["bench", "--strategy", "fx,zz"])


def test_intersect(cli):
    line = "1 0 0  0 1 1  1 1 0  0 0 1\n"
    code, out, _ = cli(["intersect", "--bits", "30"], line)
    assert code == 0
    nums = list(map(int, out.split()))
    p = UnitSpherePoint.from_common(nums[:-1], nums[-1])
    # the planes y = z and x = y meet along (1, 1, 1)
    assert all(abs(float(c) - 3 ** -0.5) < 1e-8 for c in p.coords)


def test_intersect_miss_and_errors(cli):
    code, out, _ = cli(["intersect", "--bits", "20"], "1 0 0  0 1 0  -1 -1 1  -1 -1 -1\n")
    assert code == 0 and out == "none\n"
    code, out, err = cli(["intersect", "--bits", "20"], "1 0 0 0 1 0\n1 0 0 0 1 0 1 0 0 0 1 0\n")
    assert code == 1 and out == "" and "line 1" in err and "line 2" in err


def test_intersect_geo(cli):
    code, out, _ = cli(["intersect", "--bits", "30", "--in", "geo"], "0 -10  0 10  -10 0  10 0\n")
    assert code == 0 and out == "1 0 0 1\n"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "spheresnap", "snap", "--bits", "3", "--strategy", "fx"],
                       input="3 -4\n", capture_output=True, text=True, timeout=60)
    assert r.returncode == 0 and r.stdout == "48 -55 73\n"
