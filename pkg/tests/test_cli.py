import json
import subprocess
import sys

import pytest

from eulercc.cli import main
from eulercc.formats import LoadError, Workspace


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def write(tmp_path, name, doc):
    p = tmp_path / f"{name}.json"
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return p


def test_integrate_interval(capsys):
    rc, out, _ = run(capsys, "integrate", "interval", "one_interval")
    assert rc == 0 and out == "1\n"


def test_unknown_name_is_a_load_error(capsys):
    rc, _, err = run(capsys, "integrate", "nope")
    assert rc == 2 and "nope" in err


def test_bad_usage(capsys):
    rc, *_ = run(capsys, "verify", "everything")
    assert rc == 2


def test_load_complex(tmp_path, capsys):
    write(tmp_path, "K", {"vertices": [0, 1, 2], "simplices": [[0, 1, 2]]})
    rc, out, _ = run(capsys, "info", "K", "--load", str(tmp_path))
    assert rc == 0 and "simplices: 7" in out


def test_missing_face_rejected(tmp_path, capsys):
    write(tmp_path, "K", {"vertices": [0, 1], "simplices": [[0, 1, 2]]})
    rc, _, err = run(capsys, "info", "K", "--load", str(tmp_path / "K.json"))
    assert rc == 2 and "missing its face [2]" in err


def test_function_on_absent_simplex_rejected():
    ws = Workspace.with_fixtures()
    with pytest.raises(LoadError, match=r"\[0, 2\]"):
        ws.load_doc("f", {"complex": "path", "values": [{"simplex": [0, 2], "value": "1"}]})


def test_action_breaking_simpliciality(tmp_path, capsys):
    write(tmp_path, "a", {"complex": "path", "generators": [{"0": 1, "1": 0}]})
    rc, _, err = run(capsys, "info", "a", "--load", str(tmp_path / "a.json"))
    assert rc == 2 and "[1, 2]" in err


def test_parse_error_reports_position(tmp_path, capsys):
    write(tmp_path, "bad", '{"vertices": [0,\n  1,, 2]}')
    rc, _, err = run(capsys, "info", "bad", "--load", str(tmp_path / "bad.json"))
    assert rc == 2 and "line 2" in err and "column" in err


def test_float_values_rejected(tmp_path, capsys):
    write(tmp_path, "f", {"complex": "interval", "values": [{"simplex": [0], "value": 0.5}]})
    rc, _, err = run(capsys, "integrate", "f", "--load", str(tmp_path / "f.json"))
    assert rc == 2 and "rational" in err


def test_function_file_and_rational_output(tmp_path, capsys):
    write(tmp_path, "f", {"complex": "path", "values": [{"simplex": [0, 1], "value": "2/6"}]})
    rc, out, _ = run(capsys, "integrate", "path", "f", "--load", str(tmp_path))
    assert rc == 0 and out == "-1/3\n"


def test_cc_table_roundtrip(tmp_path, capsys):
    write(tmp_path, "f", {"complex": "triangle", "values": [{"simplex": [0, 1, 2], "value": "3/2"},
                                                            {"simplex": [1], "value": "-1"}]})
    out_doc = tmp_path / "t.json"
    rc, *_ = run(capsys, "cc", "triangle", "f", "--load", str(tmp_path / "f.json"), "--out", str(out_doc))
    assert rc == 0
    rc, out, _ = run(capsys, "cc-inverse", "t", "--load", str(out_doc))
    assert rc == 0 and out.splitlines() == ["[1] -1", "[0, 1, 2] 3/2"]
    rc, out, _ = run(capsys, "intersect", "t", "--load", str(out_doc), "--covector", "3,5")
    assert out == "1/2\n"


def test_intersect_non_generic(capsys):
    rc, _, err = run(capsys, "intersect", "triangle", "one_triangle", "--covector", "1,1")
    assert rc == 2 and "not injective" in err


def test_morse_eval(capsys):
    rc, out, _ = run(capsys, "morse-eval", "one_circle", "--heights", "0,1,2")
    assert rc == 0 and out == "0\n"
    rc, out, _ = run(capsys, "morse-eval", "one_octahedron", "--trials", "10", "--seed", "4")
    assert rc == 0 and out == "2\n"


def test_mv_split(capsys):
    rc, out, _ = run(capsys, "mv-split", "one_interval", "--U", "0", "--V", "1")
    assert rc == 0 and out.splitlines() == ["subdivisions: 1", "integral: 1 = 1 + 0"]


def test_quotient_iota_pushforward(capsys):
    rc, out, _ = run(capsys, "iota", "path", "swap")
    assert out.splitlines() == ["[0] 1", "[1] 1/2", "[0, 1] 1"]
    rc, out, _ = run(capsys, "pushforward", "one_path", "swap")
    assert rc == 0 and out.splitlines()[-1] == "integral over X: 1; integral of p_!(f)*iota: 1"
    rc, _, err = run(capsys, "quotient", "interval", "edge_swap")
    assert rc == 2 and "fixed setwise" in err
    rc, out, _ = run(capsys, "quotient", "interval", "edge_swap", "--regularize")
    assert rc == 0 and "[0] |G_s|=1" in out


def test_manifold_info(capsys):
    rc, out, _ = run(capsys, "info", "octahedron", "--manifold", "2")
    assert "'ok': True" in out
    rc, out, _ = run(capsys, "info", "bowtie", "--manifold", "2")
    assert "'ok': False" in out


def test_verify_subcommands(capsys):
    assert run(capsys, "verify", "index", "--chart", "D", "--trials", "100", "--seed", "7")[0] == 0
    rc, out, _ = run(capsys, "verify", "orbifold-index", "--complex", "path", "--action", "swap",
                     "--trials", "50", "--seed", "7")
    assert rc == 0 and out.count("trial ") == 50
    assert run(capsys, "verify", "chambers")[0] == 0
    assert run(capsys, "verify", "norm", "--trials", "10")[0] == 0
    assert run(capsys, "verify", "cosheaf", "--trials", "10")[0] == 0


def test_inconsistent_table_is_refused(tmp_path, capsys):
    write(tmp_path, "t", {"chart": "triangle", "entries": [{"simplex": [0], "signs": "++", "mult": "1"}]})
    rc, _, err = run(capsys, "cc-inverse", "t", "--load", str(tmp_path / "t.json"))
    assert rc == 2 and "[0]" in err


def test_failed_verification_exits_1(monkeypatch, capsys):
    from eulercc import verify
    real = verify.index_suite

    def broken(*a, **k):
        return dict(real(*a, **k), ok=False)

    monkeypatch.setattr(verify, "index_suite", broken)
    rc, out, _ = run(capsys, "verify", "index", "--chart", "triangle", "--trials", "2")
    assert rc == 1 and "FAIL" in out


def test_out_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        run(capsys, "verify", "index", "--chart", "square", "--trials", "20", "--seed", "99", "--out", str(p))
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["ok"] is True


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "eulercc", "integrate", "one_circle"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "0\n"
