"""Command-line front end: config parsing, subcommands, exit codes, CSV I/O.

All invocations call ``cli.main`` in-process with small grids, so the whole
file stays fast.  The metadata block written at the top of every CSV is
itself a parseable configuration document; that round trip is tested here.
"""

import numpy as np
import pytest

from opentc import (ParseError, SystemParams, UnknownKey, ValidationError,
                    __version__)
from opentc import cli


def read_csv(path):
    """(header columns, data rows as string lists), metadata stripped."""
    lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    return lines[0].split(","), [l.split(",") for l in lines[1:]]


def read_numeric(path):
    header, rows = read_csv(path)
    return header, np.array([[float(c) for c in row] for row in rows])


def meta_config(path):
    """Re-parse the '# '-prefixed metadata block of a CSV."""
    lines = [l[2:] for l in path.read_text().splitlines() if l.startswith("# ")]
    return cli.parse_config("\n".join(lines))


# -------------------------------------------------------------- configuration

def test_empty_document_is_complete():
    cfg = cli.parse_config("")
    assert cfg.system == SystemParams()
    assert cfg.drive.kind == "lorentzian" and cfg.drive.h == 0.0
    assert cfg.solver.dressing == "one_shot"
    assert cfg.sweep.axis1 == "h"


def test_comments_and_blank_lines_ignored():
    cfg = cli.parse_config("\n# comment\n  system.kappa = 0.4  # inline\n\n")
    assert cfg.system.kappa == 0.4


def test_resonance_default_tracks_level_splitting():
    assert cli.parse_config("system.eps0 = 0.7").system.omega0 == 0.7 * 2
    cfg = cli.parse_config("system.eps0 = 0.7\nsystem.omega0 = 0.9")
    assert cfg.system.omega0 == 0.9


def test_parse_errors():
    with pytest.raises(ParseError) as e:
        cli.parse_config("just words")
    assert e.value.line == 1
    with pytest.raises(ParseError):
        cli.parse_config("kappa = 0.4")        # missing section prefix
    with pytest.raises(ParseError):
        cli.parse_config("grid.points = many")
    with pytest.raises(UnknownKey):
        cli.parse_config("system.decay = 1")
    with pytest.raises(UnknownKey):
        cli.parse_config("misc.x = 1")
    with pytest.raises(ValidationError):
        cli.parse_config("drive.kind = square")
    with pytest.raises(ValidationError):
        cli.parse_config("drive.h = -1")
    with pytest.raises(ValidationError):
        cli.parse_config("system.kappa = -0.5")
    with pytest.raises(ValidationError):
        cli.parse_config("sweep.num1 = 0")


def test_config_lines_round_trip():
    text = ("system.g = 0.8\nsystem.eps0 = 0.35\ndrive.h = 1.25\n"
            "drive.Omega = 2.5\ngrid.points = 257\nsolver.dressing = bare\n"
            "sweep.axis2 = Omega\noutput.stem = run7")
    cfg = cli.parse_config(text)
    again = cli.parse_config("\n".join(cli.config_lines(cfg)))
    assert again == cfg


def test_run_rejects_unknown_command():
    with pytest.raises(ValidationError):
        cli.run("explode", cli.parse_config(""))


# -------------------------------------------------------------- solve command

def test_solve_writes_csv_and_log(tmp_path, capsys):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("grid.points = 1025\noutput.stem = vac\n")
    assert cli.main(["solve", "--config", str(cfg),
                     "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "phase=Normal" in out
    header, rows = read_csv(tmp_path / "vac.csv")
    assert header[0] == "mu_S" and len(rows) == 1
    assert rows[0][4] == "Normal"
    log = (tmp_path / "vac.log").read_text()
    assert log.startswith(f"opentc {__version__} :: solve")
    ### the metadata block is a complete configuration document
    cfg2 = meta_config(tmp_path / "vac.csv")
    assert cfg2.grid.points == 1025
    assert cfg2.output.dir == str(tmp_path)


def test_reruns_are_byte_identical(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("grid.points = 1025\n")
    argv = ["solve", "--config", str(cfg), "--out", str(tmp_path)]
    assert cli.main(argv) == 0
    first = (tmp_path / "opentc.csv").read_bytes()
    first_log = (tmp_path / "opentc.log").read_bytes()
    assert cli.main(argv) == 0
    assert (tmp_path / "opentc.csv").read_bytes() == first
    assert (tmp_path / "opentc.log").read_bytes() == first_log


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("drive.h = -1\n")
    assert cli.main(["solve", "--config", str(bad)]) == 1
    assert "error:" in capsys.readouterr().err

    ### a two-unit grid cannot hold the propagator tails: every point of the
    ### run is numerically inaccessible
    narrow = tmp_path / "narrow.txt"
    narrow.write_text("grid.half_width = 1\ngrid.points = 257\n")
    assert cli.main(["solve", "--config", str(narrow),
                     "--out", str(tmp_path)]) == 2
    assert "Inaccessible" in (tmp_path / "opentc.csv").read_text()

    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory")
    assert cli.main(["solve", "--out", str(blocker / "sub")]) == 3
    assert "i/o error" in capsys.readouterr().err

    assert cli.main(["solve", "--config", str(tmp_path / "missing.txt")]) == 3


def test_version_and_bad_command():
    with pytest.raises(SystemExit) as e:
        cli.main(["--version"])
    assert e.value.code == 0
    with pytest.raises(SystemExit):
        cli.main(["frobnicate"])


def test_cli_overrides(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("grid.points = 2049\n")
    assert cli.main(["solve", "--config", str(cfg), "--out", str(tmp_path),
                     "--grid-points", "1025", "--dressing", "bare"]) == 0
    cfg2 = meta_config(tmp_path / "opentc.csv")
    assert cfg2.grid.points == 1025
    assert cfg2.solver.dressing == "bare"


def test_threads_flag_is_validated(capsys):
    assert cli.main(["solve", "--threads", "0"]) == 1
    assert "thread count" in capsys.readouterr().err


# --------------------------------------------------------------------- sweeps

def test_sweep1d_command(tmp_path, capsys):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("grid.points = 1025\nsweep.axis1 = h\n"
                   "sweep.stop1 = 0.5\nsweep.num1 = 2\n")
    assert cli.main(["sweep1d", "--config", str(cfg),
                     "--out", str(tmp_path)]) == 0
    assert "threshold = none" in capsys.readouterr().out
    _, rows = read_csv(tmp_path / "opentc.csv")
    assert len(rows) == 2
    log = (tmp_path / "opentc.log").read_text()
    assert "h = 0:" in log and "h = 0.5:" in log


def test_sweep2d_command(tmp_path, capsys):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("grid.points = 1025\nsweep.num1 = 2\nsweep.stop1 = 0.5\n"
                   "sweep.axis2 = kappa\nsweep.start2 = 0.2\n"
                   "sweep.stop2 = 0.3\nsweep.num2 = 2\n")
    assert cli.main(["sweep2d", "--config", str(cfg),
                     "--out", str(tmp_path)]) == 0
    assert "4 points" in capsys.readouterr().out
    assert len(read_csv(tmp_path / "opentc.csv")[1]) == 4
    boundary = (tmp_path / "opentc_boundary.csv").read_text()
    assert "axis1,axis2" in boundary


def test_sweep2d_requires_second_axis(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("sweep.axis2 =\n")         # explicit empty stays empty
    assert cli.main(["sweep2d", "--config", str(cfg),
                     "--out", str(tmp_path)]) == 1


# --------------------------------------------------------------- diagnostics

def test_stability_csv_decoupled(tmp_path, capsys):
    """At g = 0 the inverse photon block is (omega - omega0 + i kappa)/2:
    the CSV must show a constant imaginary part kappa/2 and a unit-area
    spectral weight."""
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("system.g = 0\ngrid.points = 257\nsolver.dressing = bare\n")
    assert cli.main(["stability", "--config", str(cfg),
                     "--out", str(tmp_path)]) == 0
    assert "mu_eff = none" in capsys.readouterr().out
    _, table = read_numeric(tmp_path / "opentc.csv")
    omega, re_k1, im_k1, weight = table.T
    assert np.allclose(im_k1, 0.125, atol=1e-12)
    assert np.allclose(re_k1, 0.5 * omega, atol=1e-12)
    assert abs(np.trapezoid(weight, omega) - 1.0) < 1e-2


def test_dump_greens(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("grid.points = 257\nsolver.dressing = bare\n"
                   "system.omega0 = 0.3\n")
    assert cli.main(["dump-greens", "--config", str(cfg),
                     "--out", str(tmp_path)]) == 0
    cols, table = read_numeric(tmp_path / "opentc.csv")
    assert cols[:3] == ["omega", "re_g_psi_R", "im_g_psi_R"]
    assert table.shape[0] == 257
    omega = table[:, 0]
    r = table[:, 1] + 1j * table[:, 2]
    assert np.allclose(r, 1.0 / (omega - 0.3 + 0.25j), atol=1e-12)
    ### at psi_f = 0 the anomalous fermion components vanish
    i_ba = cols.index("re_G_R_ba")
    assert np.allclose(table[:, i_ba:i_ba + 2], 0.0, atol=1e-15)


def test_dump_selfenergy(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("grid.points = 513\ndrive.h = 0.5\ndrive.Omega = 2\n")
    assert cli.main(["dump-selfenergy", "--config", str(cfg),
                     "--out", str(tmp_path)]) == 0
    _, table = read_numeric(tmp_path / "opentc.csv")
    assert table.shape == (513, 13)
    assert np.all(np.isfinite(table))
    r_bb = table[:, 1] + 1j * table[:, 2]
    a_bb = table[:, 5] + 1j * table[:, 6]
    assert np.allclose(a_bb, np.conj(r_bb), atol=1e-12)


# ------------------------------------------------------------ tabulated drive

def test_tabulated_drive_file(tmp_path):
    nu = np.linspace(-40.0, 40.0, 401)
    nb = 0.4 / (1.0 + nu**2)
    data = tmp_path / "drive.csv"
    np.savetxt(data, np.column_stack([nu, nb]), delimiter=",")
    cfg = tmp_path / "cfg.txt"
    cfg.write_text(f"drive.kind = tabulated\ndrive.file = {data}\n"
                   "grid.points = 257\nsolver.dressing = bare\n")
    assert cli.main(["dump-greens", "--config", str(cfg),
                     "--out", str(tmp_path)]) == 0


def test_tabulated_drive_errors(tmp_path, capsys):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("drive.kind = tabulated\n")   # no file given
    assert cli.main(["solve", "--config", str(cfg),
                     "--out", str(tmp_path)]) == 1
    bad = tmp_path / "bad.csv"
    np.savetxt(bad, np.ones((4, 3)), delimiter=",")
    cfg.write_text(f"drive.kind = tabulated\ndrive.file = {bad}\n")
    assert cli.main(["solve", "--config", str(cfg),
                     "--out", str(tmp_path)]) == 1
    assert "two columns" in capsys.readouterr().err
