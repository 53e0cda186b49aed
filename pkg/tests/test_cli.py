from __future__ import annotations

import pytest

from calabi_liouville.cli import main, parse_args, read_config
from calabi_liouville.spectral import SpectrumTable


def _run(argv, capsys):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_specfun_values(capsys):
    code, out, _ = _run(["specfun", "--fn", "K", "--nu", "0.5", "--y", "1"], capsys)
    assert code == 0
    rows = [l for l in out.splitlines() if not l.startswith("#")]
    assert rows[0] == "y,value,sign,log_abs"
    assert rows[1].split(",")[1] == "4.6106850444789355e-01"


def test_negative_y_list(capsys):
    code, out, _ = _run(["specfun", "--fn", "M", "--beta", "-1", "--alpha", "0.5", "--y=-3,3"], capsys)
    assert code == 0
    rows = [l for l in out.splitlines() if l and not l.startswith(("#", "y,"))]
    assert len(rows) == 2


def test_certify_bessel(capsys):
    code, out, _ = _run(["certify", "--what", "bessel", "--npts", "8"], capsys)
    assert code == 0
    recs = [l for l in out.splitlines() if not l.startswith("#")]
    assert recs and all(r.endswith("|true") for r in recs)


def test_jobs_do_not_change_output(capsys, tmp_path):
    outs = []
    for jobs in ("1", "3"):
        path = tmp_path / f"c{jobs}.txt"
        assert main(["certify", "--what", "caseA", "--npts", "8", "--jobs", jobs, "--output", str(path)]) == 0
        outs.append(path.read_text())
    assert outs[0] == outs[1]


def test_spectrum_round_trip(capsys, tmp_path):
    path = tmp_path / "spec.txt"
    assert main(["spectrum", "--n", "3", "--j-max", "2", "--per-weight", "3", "--output", str(path)]) == 0
    table = SpectrumTable.from_text(path.read_text())
    assert table.params.n == 3 and len(table) == 3 + 3 * 2 - 1 + 1
    code, out, _ = _run(["classify", "--neumann", "--kappa0", "0", "--spectrum", str(path)], capsys)
    assert code == 0 and "verdict,constant" in out


def test_dirichlet_without_flux_is_config_error(capsys):
    code, _, err = _run(["classify", "--dirichlet"], capsys)
    assert code == 1 and err


def test_domain_error_exit_code(capsys):
    code, _, err = _run(["solve", "--n", "3", "--j", "1", "--lam", "0.1"], capsys)
    assert code == 1 and err


def test_unknown_flag(capsys):
    code, _, _ = _run(["specfun", "--bogus"], capsys)
    assert code == 1


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nfn = I\nnu=0.25\ny = 1,2\n")
    assert read_config(str(cfg)) == {"fn": "I", "nu": "0.25", "y": "1,2"}
    args = parse_args(["specfun", "--config", str(cfg), "--nu", "0.5"])
    assert args.fn == "I" and args.nu == 0.5 and args.y == [1.0, 2.0]


def test_solve_output(capsys):
    code, out, _ = _run(["solve", "--n", "2", "--k", "0", "--j", "0", "--lam", "0", "--npts", "3", "--z-max", "3"], capsys)
    assert code == 0
    rows = [l for l in out.splitlines() if not l.startswith("#")]
    assert rows[0] == "z,value"
    assert len(rows) == 4


@pytest.mark.parametrize("cmd", ["specfun", "certify", "solve", "classify", "spectrum"])
def test_help_exits_cleanly(cmd):
    with pytest.raises(SystemExit) as exc:
        main([cmd, "--help"])
    assert exc.value.code == 0
