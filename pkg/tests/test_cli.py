import json

import pytest

from excitonsearch import cli
from excitonsearch.config import load_preset, parse_config, preset_text
from excitonsearch.errors import ConfigError
from excitonsearch.report import run_oracle_verify, same_order

POWER = """
[lattice]
mu = {mu}
N = {N}
J = {J}
[phonons]
hbar_omega_D = 90 cm^-1
E_LR = 0.004 eV
v = 1e4 cm/s
[search]
trap_depth = 50 cm^-1
"""

LRIC = """
[lattice]
family = lric
N = 32
m = 4
J = 1 cm^-1
delta_E = 2 cm^-1
[phonons]
hbar_omega_D = 90 cm^-1
E_LR = 0.004 eV
v = 1e4 cm/s
[search]
trap_depth = 50 cm^-1
"""


def write(tmp_path, text, name="c.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def read_csv(path):
    lines = open(path).read().splitlines()
    return lines[0].split(","), [l.split(",") for l in lines[1:]]


def test_dispersion_csv(tmp_path):
    cfg = write(tmp_path, POWER.format(mu=1.25, N=128, J="1 cm^-1"))
    out = tmp_path / "d.csv"
    assert cli.main(["dispersion", "--config", cfg, "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["k", "K", "E_direct", "E_closed", "abs_diff"]
    assert len(rows) + 1 == 129
    assert max(float(r[4]) for r in rows) <= 1e-9 * max(abs(float(r[2])) for r in rows)
    assert all(len(r[2].split("e")[0].replace("-", "").replace(".", "")) == 9 for r in rows)


def test_dispersion_flat_band(tmp_path):
    cfg = write(tmp_path, POWER.format(mu=2, N=16, J="0 J"))
    out = tmp_path / "d.csv"
    assert cli.main(["dispersion", "--config", cfg, "--out", str(out)]) == 0
    _, rows = read_csv(out)
    assert all(float(r[2]) == 0 and float(r[3]) == 0 for r in rows)


def test_dispersion_lric(tmp_path):
    import math

    out = tmp_path / "d.csv"
    assert cli.main(["dispersion", "--config", write(tmp_path, LRIC), "--out", str(out)]) == 0
    _, rows = read_csv(out)
    wn = 1.986445857e-23
    for r in rows:
        K = 2 * math.pi * int(r[0]) / 32
        assert float(r[2]) == pytest.approx((2 + 2 * (math.cos(K) + math.cos(4 * K))) * wn, rel=1e-8, abs=1e-12 * wn)


def test_output_is_deterministic(tmp_path):
    cfg = write(tmp_path, POWER.format(mu=1.5, N=40, J="1 cm^-1"))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.main(["dispersion", "--config", cfg, "--out", str(a)])
    cli.main(["dispersion", "--config", cfg, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("mu,grid,target", [(1.25, "1048576 16777216 268435456 4294967296 68719476736", 0.25),
                                            (1.5, "1024 4096 16384 65536 262144", 0.5),
                                            (3, "64 256 1024 4096 16384", 2.0)])
def test_sweep_slopes(tmp_path, mu, grid, target):
    text = POWER.format(mu=mu, N=64, J="1 cm^-1") + f"[sweep]\nvariable = N\ngrid = {grid}\n"
    out = tmp_path / "s.csv"
    assert cli.main(["sweep", "--config", write(tmp_path, text), "--out", str(out)]) == 0
    summary = json.loads((tmp_path / "s.csv.summary.json").read_text())
    assert summary["slope_TN_closed_form"] == pytest.approx(target, abs=1e-9)
    assert summary["slope_TN_numeric"] == pytest.approx(target, abs=0.05)
    header, rows = read_csv(out)
    assert header == cli.SWEEP_COLUMNS and len(rows) == 5


def test_sweep_needs_five_points(tmp_path):
    text = POWER.format(mu=1.25, N=64, J="1 cm^-1") + "[sweep]\nvariable = N\ngrid = 64 128 256\n"
    assert cli.main(["sweep", "--config", write(tmp_path, text)]) == 2


def test_sweep_parallel_matches_serial(tmp_path):
    text = POWER.format(mu=3, N=64, J="1 cm^-1") + "[sweep]\nvariable = T\ngrid = 5 10 20 30\n"
    cfg = write(tmp_path, text)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.main(["sweep", "--config", cfg, "--out", str(a)])
    cli.main(["sweep", "--config", cfg, "--out", str(b), "--jobs", "2"])
    assert a.read_bytes() == b.read_bytes()


def test_config_errors_carry_line(tmp_path):
    bad = POWER.format(mu=1.25, N=64, J="1 cm^-1").replace("trap_depth = 50 cm^-1", "trap_depth = 50 K")
    with pytest.raises(ConfigError, match=r":11: \[search\] trap_depth"):
        parse_config(bad, "x.ini")
    assert cli.main(["search", "--config", write(tmp_path, bad)]) == 2
    assert cli.main(["search", "--config", str(tmp_path / "missing.ini")]) == 2


def test_preset_loads():
    cfg = load_preset()
    assert cfg.lattice.N == 100 and cfg.A_prime == 1.0
    assert "trap_depth = 50 cm^-1" in preset_text()


def test_report_exit_code(tmp_path):
    out = tmp_path / "r.csv"
    assert cli.main(["report", "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header[:5] == ["figure", "computed", "reference", "ratio", "status"]
    assert len(rows) >= 9


def test_json_format(tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["rates", "--format", "json", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert {d["quantity"] for d in data} >= {"T0", "T_scat", "band_shift"}


def test_lric_command(tmp_path):
    out = tmp_path / "l.csv"
    assert cli.main(["lric", "--config", write(tmp_path, LRIC), "--out", str(out), "--m", "2", "4", "8"]) == 0
    header, rows = read_csv(out)
    assert header[0] == "m" and len(rows) == 3


def test_verify_sign_flip_on_offdiagonal():
    import numpy as np

    def flip(H):
        H = H.copy()
        H[0, 1] = H[1, 0] = -H[0, 1]
        return H

    checks = {c.name: c for c in run_oracle_verify(perturb=flip, mu_values=(1.25,), sizes=(16,))}
    assert not checks["spectrum matches dispersion"].passed
    assert np.isfinite(checks["spectrum matches dispersion"].value)


def test_same_order():
    assert same_order(1.02e-13, 1e-14)
    assert not same_order(1e-12, 1e-14)
    assert same_order(5e-11, 1e-11, 1e-10)
