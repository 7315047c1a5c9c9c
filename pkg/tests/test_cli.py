import os
import shutil
import subprocess
import sys

import pytest

from conftest import GOLDEN
from mpd.cli import main
from mpd.complex import complexes_equal, koszul
from mpd.io import parse_complex, serialize_complex


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "triangle.mpfil"
    shutil.copy(os.path.join(GOLDEN, "triangle.mpfil"), path)
    return str(path)


def test_resolve_then_betti_matches_direct(tmp_path, triangle_file, capsys):
    C = str(tmp_path / "C.fcc")
    G = str(tmp_path / "G.fcc")
    assert run(["complex", "--filtration", triangle_file, "-o", C], capsys)[0] == 0
    assert run(["resolve", "--complex", C, "--deg", "1", "--via", "cohomological", "-o", G], capsys)[0] == 0
    code, via_g, _ = run(["betti", "--complex", G], capsys)
    assert code == 0
    code, direct, _ = run(["betti", "--complex", C, "--deg", "1", "--via", "direct"], capsys)
    assert direct == via_g == "degree,g1,g2,multiplicity\n0,1,1,1\n1,2,2,1\n"


def test_verify_duality_koszul(tmp_path, capsys):
    path = tmp_path / "K2.fcc"
    path.write_text(serialize_complex(koszul(2, 3)))
    code, out, _ = run(["verify-duality", "--complex", str(path), "--deg", "0"], capsys)
    assert code == 0
    assert out.splitlines()[-1] == "PASS degree 0"
    assert "FAIL" not in out


def test_verify_duality_without_cone_fails(tmp_path, capsys):
    path = tmp_path / "F.fcc"
    path.write_text("fcc 2 2 0 0\ngens 0:\n0 0\n")
    code, out, _ = run(["verify-duality", "--complex", str(path), "--deg", "0", "--no-cone"], capsys)
    assert code == 1
    assert out.splitlines()[-1] == "FAIL degree 0"
    code, _, _ = run(["verify-duality", "--complex", str(path), "--deg", "0"], capsys)
    assert code == 0


def test_barcode_two_points_then_edge(tmp_path, capsys):
    path = tmp_path / "F.mpfil"
    path.write_text("mpfil 1 2\n0 ; 0\n0 ; 1\n1 ; 0 1\n")
    code, out, _ = run(["barcode", "--filtration", str(path), "--deg", "0"], capsys)
    assert code == 0
    assert out == "degree,birth,death\n0,0,1\n"
    code, out, _ = run(["barcode", "--filtration", str(path), "--deg", "1", "--relative"], capsys)
    # the reduced H_0 bar [0, 1) reappears as [1 - 1, 1 - 0) in degree 1
    assert out == "degree,birth,death\n1,0,1\n"


def test_cone_dagger_restrict_hilbert(tmp_path, capsys):
    path = tmp_path / "K2.fcc"
    path.write_text(serialize_complex(koszul(2)))
    cone = tmp_path / "cone.fcc"
    assert run(["cone", "--complex", str(path), "-o", str(cone)], capsys)[0] == 0
    code, out, _ = run(["restrict", "--complex", str(cone), "--zeta", "1,1"], capsys)
    assert complexes_equal(parse_complex(out).trimmed(), koszul(2))
    code, out, _ = run(["dagger", "--complex", str(path)], capsys)
    assert parse_complex(out).gens_at(0) == ((1, 1),)
    code, out, _ = run(["hilbert", "--complex", str(path), "--deg", "0", "--box=-1,-1;1,1"], capsys)
    rows = out.splitlines()
    assert rows[0] == "d,z1,z2,dim" and len(rows) == 10 and "0,0,0,1" in rows


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.fcc"
    bad.write_text("fcc 1 2 0 1\ngens 0:\n3\ngens 1:\n1\nmap 1\ncol 0: 0:1\n")
    code, _, err = run(["betti", "--complex", str(bad), "--deg", "0"], capsys)
    assert code == 1 and "entry (0, 0)" in err
    assert run(["betti", "--complex", str(tmp_path / "missing.fcc")], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2
    k3 = tmp_path / "K3.fcc"
    k3.write_text(serialize_complex(koszul(3)))
    code, _, err = run(["resolve", "--complex", str(k3), "--deg", "0"], capsys)
    assert code == 1 and "N <= 2" in err
    assert run(["cone", "--complex", str(k3), "--zeta", "1,1"], capsys)[0] == 2
    assert run(["hilbert", "--complex", str(k3), "--box", "0,0,0"], capsys)[0] == 2


def test_seeded_generators_are_reproducible(tmp_path, capsys):
    a = run(["random-filtration", "--seed", "7"], capsys)[1]
    b = run(["random-filtration", "--seed", "7"], capsys)[1]
    assert a == b and a.startswith("mpfil 2 2\n")
    c = run(["random-complex", "--seed", "7", "--N", "1", "-p", "3"], capsys)[1]
    assert c == run(["random-complex", "--seed", "7", "--N", "1", "-p", "3"], capsys)[1]
    parse_complex(c)


def test_console_script_entry_point(tmp_path):
    path = tmp_path / "K2.fcc"
    path.write_text(serialize_complex(koszul(2)))
    res = subprocess.run(
        [sys.executable, "-m", "mpd.cli", "betti", "--complex", str(path)], capture_output=True, text=True
    )
    assert res.returncode == 0
    assert res.stdout.splitlines()[1] == "0,0,0,1"
