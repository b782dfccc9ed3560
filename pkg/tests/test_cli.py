"""CLI behaviour: figure emission, verification, formats, determinism."""

import json

import numpy as np
import pytest

from becback.cli import main
from becback.core import PhysicalParams
from becback.modes import QuasiparticleVacuum, minimal_depletion_vacuum
from becback.observables import depletion


def read_series(path):
    meta = {}
    ts, vs = [], []
    for line in path.read_text().splitlines():
        if line.startswith("# becback"):
            continue
        if line.startswith("# "):
            key, _, val = line[2:].partition("=")
            meta[key] = val
        elif line != "t,value":
            t, _, v = line.partition(",")
            ts.append(float(t))
            vs.append(float(v))
    return meta, np.array(ts), np.array(vs)


def test_fig1_files_match_direct_library_calls(tmp_path):
    code = main(["fig", "--id", "1", "--samples", "25", "--n-max", "300",
                 "--out", str(tmp_path)])
    assert code == 0
    files = sorted(tmp_path.glob("fig1_*.csv"))
    assert [f.name for f in files] == ["fig1_ell10.csv", "fig1_ell20.csv",
                                       "fig1_ell40.csv", "fig1_ell80.csv"]
    meta, ts, vs = read_series(tmp_path / "fig1_ell10.csv")
    assert meta["channel"] == "depletion" and meta["tau_s"] == "0"
    p = PhysicalParams(ell=10.0, tau_s=0.0, n_max=300)
    for t, v in zip(ts[::6], vs[::6]):
        # file carries 15 significant digits
        assert v == pytest.approx(depletion(t, p), rel=1e-13)


def test_fig5_sudden_member_is_zero(tmp_path):
    main(["fig", "--id", "5", "--samples", "30", "--n-max", "400",
          "--out", str(tmp_path)])
    _, _, vs = read_series(tmp_path / "fig5_tau0.csv")
    assert np.max(np.abs(vs)) < 1e-9


def test_unknown_figure_id_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["fig", "--id", "7", "--out", str(tmp_path)])
    assert exc.value.code == 2


def test_byte_identical_reruns(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    for out in (a, b):
        main(["fig", "--id", "3", "--samples", "20", "--n-max", "200",
              "--out", str(out)])
    for f in sorted(a.glob("*.csv")):
        assert f.read_bytes() == (b / f.name).read_bytes()


def test_verify_default_laws_all_pass(tmp_path):
    # full-stack consistency run over all six laws (reduced grid for speed)
    code = main(["verify", "--n-max", "600", "--samples", "25", "--t-max", "6",
                 "--out", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "verify_report.json").read_text())
    assert [e["law"] for e in report] == ["norm", "number_continuity",
                                          "energy_balance", "momentum",
                                          "oracle_modes", "oracle_zeta"]
    assert all(e["pass"] for e in report)


def test_verify_single_law(tmp_path):
    code = main(["verify", "--laws", "momentum", "--n-max", "300",
                 "--samples", "7", "--out", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "verify_report.json").read_text())
    assert len(report) == 1 and report[0]["law"] == "momentum" and report[0]["pass"]


def test_verify_unattainable_tolerance_fails(tmp_path):
    code = main(["verify", "--laws", "number_continuity", "--tol", "1e-15",
                 "--n-max", "300", "--samples", "7", "--out", str(tmp_path)])
    assert code == 1
    report = json.loads((tmp_path / "verify_report.json").read_text())
    assert not report[0]["pass"]  # report still written on failure


def test_verify_rejects_unknown_law(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--laws", "entropy", "--out", str(tmp_path)])
    assert exc.value.code == 2


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("ell = 10\ntau-s = 0\nn-max = 150\nsamples = 12\n"
                   "t-max = 5  # short window\n")
    out1 = tmp_path / "o1"
    main(["depletion", "--config", str(cfg), "--out", str(out1)])
    meta, ts, _ = read_series(out1 / "depletion.csv")
    assert meta["ell"] == "10" and meta["n_max"] == "150"
    assert ts[-1] == 5.0 and len(ts) == 12
    out2 = tmp_path / "o2"
    main(["depletion", "--config", str(cfg), "--ell", "20", "--out", str(out2)])
    meta2, _, _ = read_series(out2 / "depletion.csv")
    assert meta2["ell"] == "20"  # flag wins over file


def test_json_format_matches_csv_values(tmp_path):
    main(["power", "--ell", "20", "--tau-s", "1", "--n-max", "200",
          "--samples", "9", "--t-max", "4", "--out", str(tmp_path)])
    main(["power", "--ell", "20", "--tau-s", "1", "--n-max", "200",
          "--samples", "9", "--t-max", "4", "--format", "json",
          "--out", str(tmp_path)])
    _, _, vs = read_series(tmp_path / "power.csv")
    doc = json.loads((tmp_path / "power.json").read_text())
    assert [float(x) for x in doc["value"]] == vs.tolist()
    assert doc["meta"]["channel"] == "power"


def test_energy_channel_selection(tmp_path):
    main(["energy", "--channel", "g2", "--ell", "20", "--tau-s", "1",
          "--n-max", "200", "--samples", "8", "--t-max", "3",
          "--out", str(tmp_path)])
    meta, ts, vs = read_series(tmp_path / "energy_g2.csv")
    assert meta["channel"] == "g2"
    from becback.observables import density_variance
    p = PhysicalParams(ell=20.0, tau_s=1.0, n_max=200)
    assert vs[3] == pytest.approx(density_variance(float(ts[3]), p), rel=1e-13)


def test_qp_vacuum_flags(tmp_path):
    main(["depletion", "--vacuum", "qp", "--t0", "2", "--ell", "20",
          "--tau-s", "1", "--n-max", "200", "--samples", "6", "--t-min", "1.5",
          "--t-max", "6", "--out", str(tmp_path)])
    meta, ts, vs = read_series(tmp_path / "depletion.csv")
    assert meta["vacuum"] == "qp"
    alpha, beta = minimal_depletion_vacuum(2.0)
    assert float(meta["alpha"]) == pytest.approx(alpha, rel=1e-14)
    p = PhysicalParams(ell=20.0, tau_s=1.0, n_max=200)
    vac = QuasiparticleVacuum(alpha, beta)
    assert vs[0] == pytest.approx(depletion(float(ts[0]), p, vac), rel=1e-13)


def test_io_error_exit_code(tmp_path):
    blocker = tmp_path / "not_a_dir"
    blocker.write_text("file in the way")
    code = main(["depletion", "--samples", "4", "--t-max", "1",
                 "--n-max", "50", "--out", str(blocker)])
    assert code == 3


def test_headers_are_self_describing(tmp_path):
    main(["fig", "--id", "2", "--samples", "10", "--n-max", "150",
          "--out", str(tmp_path)])
    meta, _, _ = read_series(tmp_path / "fig2_tau1.csv")
    for key in ("figure", "channel", "ell", "tau_s", "v_ext", "n_max",
                "rel_tol", "vacuum", "mu_mode", "t_min", "t_max", "samples",
                "tail_bound", "converged"):
        assert key in meta, key
