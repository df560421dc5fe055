import csv
import logging

import numpy as np
import pytest
import yaml

from depletion.cli import main, parse_config
from depletion.errors import ConfigError


def write_config(tmp_path, **body):
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(body))
    return path


def read_columns(path):
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    return {k: np.array([float(r[k]) for r in rows]) for k in rows[0]}


def run_cli(tmp_path, command, outdir="out", extra=(), **body):
    cfg = write_config(tmp_path, **body)
    return main([command, "--config", str(cfg), "--outdir", str(tmp_path / outdir), *extra])


RAINBOW = {"kind": "rainbow", "h": 4}
RINDLER = {"kind": "rindler", "c": 0}


def test_density_minkowski_half_filling(tmp_path):
    assert run_cli(tmp_path, "density", N=40, profile={"kind": "minkowski"}, fillings=["1/2"]) == 0
    cols = read_columns(tmp_path / "out/density/minkowski_nu0.5.csv")
    assert list(cols) == ["site", "x", "n_exact", "n_sdrg", "n_semiclassical", "n_fitted"]
    np.testing.assert_allclose(cols["n_exact"], 0.5, atol=1e-10)


def test_density_multiple_fillings(tmp_path):
    code = run_cli(tmp_path, "density", N=80, profile=RINDLER, fillings=["1/4", "1/8", "3/4"], fit=False)
    assert code == 0
    names = sorted(p.name for p in (tmp_path / "out/density").iterdir())
    assert names == ["rindler_c0_nu0.125.csv", "rindler_c0_nu0.25.csv", "rindler_c0_nu0.75.csv"]
    cols = read_columns(tmp_path / "out/density/rindler_c0_nu0.75.csv")
    assert cols["n_exact"].sum() == pytest.approx(60)
    assert cols["n_semiclassical"].sum() == pytest.approx(60)
    assert "n_fitted" not in cols


def test_modes(tmp_path):
    code = run_cli(tmp_path, "modes", N=100, profile={"kind": "rindler", "c": 0.25}, modes=[10, 30])
    assert code == 0
    cols = read_columns(tmp_path / "out/modes/rindler_c0.25_mode30.csv")
    assert set(cols) >= {"psi_abs", "psi_upper_envelope", "wkb_envelope", "wkb_mask"}
    assert np.sum(cols["psi_abs"] ** 2) == pytest.approx(1.0)


def test_strongsweep_h_zero_matches_minkowski(tmp_path):
    assert run_cli(tmp_path, "strongsweep", N=40, h_values=[0, 8], fillings=["1/4"]) == 0
    assert run_cli(tmp_path, "density", N=40, profile={"kind": "minkowski"}, fillings=["1/4"]) == 0
    sweep = read_columns(tmp_path / "out/strongsweep/rainbow_h0_nu0.25.csv")
    flat = read_columns(tmp_path / "out/density/minkowski_nu0.25.csv")
    np.testing.assert_array_equal(sweep["n_exact"], flat["n_exact"])
    assert (tmp_path / "out/strongsweep/rainbow_h8_nu0.25.csv").exists()


def test_strongsweep_warns_above_cap(tmp_path, caplog):
    with caplog.at_level(logging.WARNING, logger="depletion"):
        code = run_cli(tmp_path, "strongsweep", N=20, h_values=[35], fillings=["1/4"])
    assert code == 0
    assert any("exceeds" in r.message for r in caplog.records)
    assert (tmp_path / "out/strongsweep/rainbow_h35_nu0.25.csv").exists()


def test_compensate_and_mimic(tmp_path):
    assert run_cli(tmp_path, "compensate", N=40, profiles=[RINDLER, RAINBOW], fillings=["1/4"]) == 0
    cols = read_columns(tmp_path / "out/compensate/rainbow_h4_nu0.25.csv")
    assert list(cols)[2:] == ["mu", "n_compensated", "n_original", "n_homogeneous"]
    assert run_cli(tmp_path, "mimic", N=40, profile=RAINBOW, fillings=["1/4"], mu0="auto") == 0
    cols = read_columns(tmp_path / "out/mimic/rainbow_h4_nu0.25.csv")
    assert cols["n_mimic"].sum() == pytest.approx(10)


def test_entropy(tmp_path):
    assert run_cli(tmp_path, "entropy", N=20, profile=RAINBOW, fillings=["1/2"], mu0=1.0) == 0
    text = (tmp_path / "out/entropy/rainbow_h4_nu0.5.csv").read_text().splitlines()
    assert text[0] == "ell,S_original_nats,S_mimic_nats"
    assert len(text) == 20


@pytest.mark.parametrize(
    "command, body",
    [
        ("density", {"N": 40, "profile": RINDLER, "fillings": []}),
        ("density", {"N": 40, "profile": RINDLER, "fillings": ["1/3"]}),
        ("density", {"N": 41, "profile": RINDLER, "fillings": ["1/2"]}),
        ("density", {"N": 40, "fillings": ["1/2"]}),
        ("density", {"N": 40, "profile": {"kind": "bogus"}, "fillings": ["1/2"]}),
        ("modes", {"N": 40, "profile": RINDLER, "modes": [41]}),
        ("strongsweep", {"N": 40, "fillings": ["1/4"]}),
        ("mimic", {"N": 40, "profile": RINDLER, "fillings": ["1/4"], "mu0": "high"}),
    ],
)
def test_config_errors_exit_two(tmp_path, command, body):
    assert run_cli(tmp_path, command, **body) == 2


def test_missing_config_file_exits_two(tmp_path):
    assert main(["density", "--config", str(tmp_path / "nope.yaml")]) == 2


def test_numerical_failure_exits_three(tmp_path):
    # mode N/2 sits at kFa = pi/2, where the Schrodinger picture breaks down
    assert run_cli(tmp_path, "modes", N=40, profile=RINDLER, modes=[20]) == 3


@pytest.mark.parametrize("command", ["density", "modes", "compensate", "mimic", "entropy", "strongsweep"])
def test_reruns_are_byte_identical(tmp_path, command):
    body = {
        "N": 40,
        "profiles": [{"kind": "rindler", "c": 0.25}, RAINBOW],
        "fillings": ["1/4", "1/8"],
        "modes": [5, 30],
        "h_values": [2, 10],
    }
    assert run_cli(tmp_path, command, "a", ["--seedless"], **body) == 0
    assert run_cli(tmp_path, command, "b", ["--jobs", "2"], **body) == 0
    a = sorted((tmp_path / "a" / command).iterdir())
    b = sorted((tmp_path / "b" / command).iterdir())
    assert [p.name for p in a] == [p.name for p in b] and a
    for pa, pb in zip(a, b):
        assert pa.read_bytes() == pb.read_bytes()


def test_parse_config_accepts_fraction_strings():
    cfg = parse_config({"N": 16, "profile": RINDLER, "fillings": ["1/4", 0.5]}, "density")
    assert cfg.fillings == [0.25, 0.5]
    with pytest.raises(ConfigError):
        parse_config({"N": 16, "profile": RINDLER, "fillings": ["x"]}, "density")
