import json

import numpy as np
import pytest

from diskmech import bistable_sweep
from diskmech import io as dio
from diskmech.backaction import backaction_sweep
from diskmech.cli import main
from diskmech.config import config_to_dict, load_device_config, reference_device, save_device_config
from diskmech.report import build_report, report_to_csv, report_to_json
from diskmech.spectra import SpectrumTrace

TWO_PI = 2.0 * np.pi


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "device.json"
    save_device_config(reference_device(), path)
    return str(path)


# ------------------------------------------------------------------ file I/O

def test_sweep_trace_round_trip(tmp_path, mode_lineshape):
    lam = np.linspace(mode_lineshape.lambda_o - 1e-10, mode_lineshape.lambda_o + 1e-10, 64)
    trace = bistable_sweep(lam, 2.5e-4, "up", mode_lineshape, 0.0)
    path = tmp_path / "trace.csv"
    dio.write_sweep_csv(trace, path)
    back = dio.read_sweep_csv(path)
    # the nm <-> m conversion costs at most one ulp; everything else is exact
    np.testing.assert_allclose(back.wavelengths, trace.wavelengths, rtol=3e-16)
    np.testing.assert_array_equal(back.transmission, trace.transmission)
    assert back.input_power == trace.input_power
    assert back.scan_direction == "up"


def test_spectrum_trace_round_trip(tmp_path):
    freq = np.linspace(2.0e9, 2.2e9, 50)
    trace = SpectrumTrace(freq, np.abs(np.sin(freq / 1e8)) * 1e-13, input_power=5e-5,
                          detuning=TWO_PI * 1.1e9, rbw=freq[1] - freq[0], seed=3)
    path = tmp_path / "spectrum.csv"
    dio.write_spectrum_csv(trace, path)
    back = dio.read_spectrum_csv(path)
    np.testing.assert_array_equal(back.freq, trace.freq)
    np.testing.assert_array_equal(back.psd, trace.psd)
    assert back.input_power == trace.input_power
    assert back.detuning == pytest.approx(trace.detuning, rel=1e-15)
    assert back.seed == 3


def test_backaction_csv_round_trip(tmp_path, mode_c, mech_rbm, coupling):
    det = np.linspace(0.2, 1.8, 9) * mech_rbm.omega_m
    sweep = backaction_sweep(det, mode_c, mech_rbm, coupling, 1e-3, alpha=-1e9)
    path = tmp_path / "ba.csv"
    sigma = np.full(det.size, TWO_PI * 40e3)
    dio.write_backaction_csv(sweep, path, sigma=sigma, dropped_power=np.linspace(1e-4, 1e-3, 9))
    back = dio.read_backaction_csv(path)
    np.testing.assert_array_equal(back["photon_number"], sweep["photon_number"])
    for key in ("detuning", "dgamma", "domega"):
        # angular <-> linear frequency conversion costs at most one ulp
        np.testing.assert_allclose(back[key], sweep[key], rtol=3e-16)
    np.testing.assert_allclose(back["sigma"], sigma, rtol=3e-16)
    assert "dropped_power" in back


def test_survey_round_trip_and_ranking(tmp_path):
    entries = [
        dio.SurveyEntry("disk-a", "diamond", "microdisk", 1.9e13, "ambient"),
        dio.SurveyEntry("crystal-b", "silicon", "optomechanical crystal", 6.8e14, "cryogenic"),
        dio.SurveyEntry("membrane-c", "nitride", "membrane", 3.0e13, "low-pressure"),
    ]
    path = tmp_path / "survey.csv"
    dio.write_survey_csv(entries, path)
    back = dio.read_survey_csv(path)
    assert back == entries
    ranked = dio.rank_survey(back)
    assert [e.label for e in ranked] == ["crystal-b", "membrane-c", "disk-a"]


def test_survey_rejects_bad_environment(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("label,material,structure,qf_hz,environment\nx,y,z,1e12,vacuum\n")
    with pytest.raises(ValueError, match="environment"):
        dio.read_survey_csv(path)


def test_config_round_trip(tmp_path):
    config = reference_device()
    path = tmp_path / "dev.json"
    save_device_config(config, path)
    back = load_device_config(path)
    assert config_to_dict(back) == config_to_dict(config)


def test_config_missing_section_rejected(tmp_path):
    doc = config_to_dict(reference_device())
    del doc["mechanics"]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ValueError, match="mechanics"):
        load_device_config(path)


def test_config_invalid_invariant_named(tmp_path):
    doc = config_to_dict(reference_device())
    doc["optics"]["q_loaded"] = 2 * doc["optics"]["q_intrinsic"]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ValueError, match="q_loaded"):
        load_device_config(path)


# -------------------------------------------------------------------- report

def test_report_deterministic_and_zero_drive():
    config = reference_device()
    text1 = report_to_json(build_report(config))
    text2 = report_to_json(build_report(config))
    assert text1 == text2
    by_name = {e["name"]: e for e in build_report(config)["entries"]}
    assert by_name["backaction_damping"]["value"] == 0.0
    assert by_name["frequency_shift"]["value"] == 0.0
    assert by_name["temperature_rise"]["value"] == 0.0
    assert by_name["qf_product"]["value"] == pytest.approx(1.89e13, rel=1e-12)
    csv_text = report_to_csv(build_report(config))
    assert csv_text.splitlines()[0] == "name,value,units,formula"


# ----------------------------------------------------------------------- CLI

def test_cli_report_and_threshold(config_path, tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["report", "--config", config_path, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert any(e["name"] == "x_zpm" for e in doc["entries"])
    assert main(["threshold", "--config", config_path]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["threshold_power_w"] == pytest.approx(810e-6, rel=0.02)


def test_cli_transmission_and_bistable(config_path, tmp_path):
    t_csv = tmp_path / "t.csv"
    assert main(["transmission", "--config", config_path, "--out", str(t_csv), "--points", "201"]) == 0
    trace = dio.read_sweep_csv(t_csv)
    assert len(trace) == 201
    b_csv = tmp_path / "b.csv"
    assert main([
        "bistable-sweep", "--config", config_path, "--out", str(b_csv),
        "--power-w", "6e-3", "--points", "301", "--scan-dir", "down",
    ]) == 0
    down = dio.read_sweep_csv(b_csv)
    assert down.scan_direction == "down"
    assert np.all(np.diff(down.wavelengths) < 0)


def test_cli_psd_pipeline(config_path, tmp_path):
    psd_csv = tmp_path / "psd.csv"
    assert main([
        "psd-synth", "--config", config_path, "--out", str(psd_csv),
        "--noise-rel", "0.05", "--seed", "9", "--floor", "1e-40",
    ]) == 0
    fit_json = tmp_path / "fit.json"
    assert main(["fit-psd", "--in", str(psd_csv), "--out", str(fit_json)]) == 0
    doc = json.loads(fit_json.read_text())
    params = {row["parameter"]: row["estimate"] for row in doc["parameters"]}
    assert params["f0"] == pytest.approx(2.1e9, rel=1e-3)
    assert doc["status"] == "converged"


def test_cli_backaction_pipeline(config_path, tmp_path):
    ba_csv = tmp_path / "ba.csv"
    assert main([
        "backaction-sweep", "--config", config_path, "--out", str(ba_csv),
        "--power-w", "6.4e-3", "--points", "20", "--sigma-hz", "40e3", "--seed", "0",
    ]) == 0
    g0_json = tmp_path / "g0.json"
    assert main(["fit-g0", "--config", config_path, "--in", str(ba_csv), "--out", str(g0_json)]) == 0
    doc = json.loads(g0_json.read_text())
    g0_hz = {r["parameter"]: r["estimate"] for r in doc["parameters"]}["g0"] / TWO_PI
    assert g0_hz == pytest.approx(26e3, abs=3e3)
    alpha_json = tmp_path / "alpha.json"
    assert main([
        "fit-alpha", "--config", config_path, "--in", str(ba_csv), "--out", str(alpha_json),
    ]) == 0
    doc = json.loads(alpha_json.read_text())
    alpha_hz = {r["parameter"]: r["estimate"] for r in doc["parameters"]}["alpha"] / TWO_PI
    assert alpha_hz == pytest.approx(-2.5e8, rel=0.25)


def test_cli_fit_lineshape(config_path, tmp_path):
    trace_csv = tmp_path / "cold.csv"
    assert main([
        "transmission", "--config", config_path, "--out", str(trace_csv),
        "--span-pm", "250", "--points", "180",
    ]) == 0
    fit_json = tmp_path / "lineshape.json"
    assert main([
        "fit-lineshape", "--in", str(trace_csv), "--out", str(fit_json), "--starts", "2",
    ]) == 0
    doc = json.loads(fit_json.read_text())
    params = {r["parameter"]: r["estimate"] for r in doc["parameters"]}
    assert params["q_intrinsic"] == pytest.approx(6.4e4, rel=0.02)


def test_cli_spin_and_calibration(config_path, tmp_path, capsys):
    assert main(["spin", "--config", config_path, "--amplitude-m", "31e-12"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["g_driven_hz"] == pytest.approx(0.6e6, rel=0.15)
    assert main([
        "calibrate-amplitude", "--config", config_path,
        "--area-om", "1.67e6", "--area-th", "1.0", "--p-th-w", "5e-5", "--p-om-w", "5e-5",
    ]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["x_om_m"] == pytest.approx(31e-12, rel=0.10)


def test_cli_survey(tmp_path):
    src = tmp_path / "survey.csv"
    dio.write_survey_csv(
        [
            dio.SurveyEntry("disk-a", "diamond", "microdisk", 1.9e13, "ambient"),
            dio.SurveyEntry("crystal-b", "silicon", "crystal", 6.8e14, "cryogenic"),
        ],
        src,
    )
    out = tmp_path / "ranked.csv"
    assert main(["survey", "--in", str(src), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "rank,label,material,structure,qf_hz,environment"
    assert lines[1].startswith("1,crystal-b")
    out_json = tmp_path / "ranked.json"
    assert main(["survey", "--in", str(src), "--out", str(out_json), "--format", "json"]) == 0
    doc = json.loads(out_json.read_text())
    assert doc["survey"][0]["label"] == "crystal-b"


def test_cli_exit_codes(config_path, tmp_path):
    # missing file -> I/O error
    assert main(["report", "--config", str(tmp_path / "nope.json")]) == 3
    # invalid config -> validation error
    doc = config_to_dict(reference_device())
    doc["optics"]["q_loaded"] = 2 * doc["optics"]["q_intrinsic"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert main(["report", "--config", str(bad)]) == 1
    # unfittable spectrum -> non-convergence
    flat = tmp_path / "flat.csv"
    dio.write_spectrum_csv(SpectrumTrace(np.linspace(1e9, 2e9, 50), np.full(50, 1e-15)), flat)
    assert main(["fit-psd", "--in", str(flat), "--out", str(tmp_path / "f.json")]) == 2


def test_selftest_exit_semantics(monkeypatch):
    import io

    from diskmech import acceptance

    passing = acceptance.AcceptanceCheck("ok", "always true", lambda: acceptance.CheckResult(True, "yes"))
    failing = acceptance.AcceptanceCheck("no", "always false", lambda: acceptance.CheckResult(False, "no"))
    monkeypatch.setattr(acceptance, "CHECKS", [passing])
    assert acceptance.run_selftest(io.StringIO()) == 0
    monkeypatch.setattr(acceptance, "CHECKS", [passing, failing])
    buf = io.StringIO()
    assert acceptance.run_selftest(buf) == 1
    assert "[FAIL] no" in buf.getvalue()


def test_report_matches_headline_numbers(mode_c):
    # the device preset report reproduces the headline figures of merit
    from diskmech import OperatingPoint

    config = reference_device()
    op = OperatingPoint.from_drive(0.5 * config.optics.gamma_loaded, config.optics, 6.4e-3)
    config.operating = op
    config.amplitude = 31e-12
    by_name = {e["name"]: e for e in build_report(config)["entries"]}
    assert by_name["x_zpm"]["value"] == pytest.approx(0.32e-15, rel=0.03)
    assert 24e-15 <= by_name["x_th"]["value"] <= 25.5e-15
    assert by_name["qf_product"]["value"] == pytest.approx(1.89e13, rel=0.01)
    assert by_name["threshold_power"]["value"] == pytest.approx(760e-6, rel=0.15)
    assert by_name["spin_coupling_single_phonon"]["value"] == pytest.approx(6.0, rel=0.05)
    assert by_name["spin_coupling_driven"]["value"] == pytest.approx(0.6e6, rel=0.10)
    assert by_name["sideband_resolution"]["value"] == pytest.approx(1.55, rel=0.05)
    assert by_name["n_th"]["value"] == pytest.approx(2.93e3, rel=0.01)
    # formulas ride along for auditability
    assert all("formula" in e and e["formula"] for e in by_name.values())
