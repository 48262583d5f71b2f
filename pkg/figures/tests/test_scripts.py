"""Command line behaviour of the figure scripts."""

import shutil
import subprocess
import sys

import pytest

from alvar_figures import trace


def test_main_renders_and_prints_the_output_path(golden, tmp_path, capsys):
    out = tmp_path / "fig.png"
    code = trace.main(
        ["--in", str(golden["compare"] / "compare.csv"), "--out", str(out)]
    )
    assert code == 0
    assert out.exists()
    assert str(out) in capsys.readouterr().out


def test_main_missing_input_exits_nonzero_with_message(tmp_path, capsys):
    gone = tmp_path / "gone.csv"
    code = trace.main(["--in", str(gone), "--out", str(tmp_path / "o.png")])
    assert code == 1
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "gone.csv" in err


def test_main_requires_the_out_flag(golden):
    with pytest.raises(SystemExit) as excinfo:
        trace.main(["--in", str(golden["compare"] / "compare.csv")])
    assert excinfo.value.code == 2


def test_module_invocation(golden, tmp_path):
    out = tmp_path / "fig.png"
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "alvar_figures.trace",
            "--in",
            str(golden["compare"] / "compare.csv"),
            "--out",
            str(out),
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()


def test_console_script(golden, tmp_path):
    exe = shutil.which("alvar-fig-trace")
    assert exe is not None, "package not installed with its scripts"
    out = tmp_path / "fig.png"
    proc = subprocess.run(
        [
            exe,
            "--in",
            str(golden["compare"] / "compare.csv"),
            "--out",
            str(out),
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
