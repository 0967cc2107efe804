import math

import numpy as np
import pytest

from tpadlab import bvdfit
from tpadlab.circuit import BvdParams, resonant_frequency
from tpadlab.errors import (
    FitNotConverged,
    InvalidProperty,
    MalformedSpectrumFile,
    NoResonanceFound,
)

C0 = 9.88e-9


def params_for(f_r, resistance, capacitance, c0=C0):
    inductance = 1.0 / ((2.0 * math.pi * f_r) ** 2 * capacitance)
    return BvdParams(inductance, capacitance, resistance, c0)


def test_spectrum_rejects_too_few_points():
    freqs = np.linspace(20e3, 40e3, 5)
    with pytest.raises(InvalidProperty):
        bvdfit.ImpedanceSpectrum(freqs, np.ones(5, dtype=complex))


def test_spectrum_rejects_unordered_frequencies():
    freqs = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 7.0]) * 1e3
    with pytest.raises(InvalidProperty):
        bvdfit.ImpedanceSpectrum(freqs, np.ones(8, dtype=complex))


def test_spectrum_rejects_zero_magnitude():
    freqs = np.linspace(20e3, 40e3, 8)
    z = np.ones(8, dtype=complex)
    z[3] = 0.0
    with pytest.raises(InvalidProperty):
        bvdfit.ImpedanceSpectrum(freqs, z)


def test_from_points_sorts():
    truth = params_for(30e3, 500.0, 1e-10)
    spectrum = bvdfit.generate_spectrum(truth, n_points=9)
    shuffled = list(spectrum.points)
    shuffled.reverse()
    rebuilt = bvdfit.ImpedanceSpectrum.from_points(shuffled)
    assert np.array_equal(rebuilt.frequencies, spectrum.frequencies)


def test_initial_guess_on_clean_data():
    # lightly damped: the dip and peak sit near their lossless positions
    truth = params_for(33.1e3, 100.0, 500e-12)
    spectrum = bvdfit.generate_spectrum(truth, n_points=201)
    guess = bvdfit.initial_guess(spectrum, C0)
    assert guess.inductance == pytest.approx(truth.inductance, rel=0.20)
    assert guess.capacitance == pytest.approx(truth.capacitance, rel=0.20)
    assert guess.resistance == pytest.approx(truth.resistance, rel=0.20)


def test_initial_guess_rejects_pure_capacitor():
    freqs = np.linspace(20e3, 40e3, 201)
    z = 1.0 / (1j * 2.0 * np.pi * freqs * C0)
    with pytest.raises(NoResonanceFound):
        bvdfit.initial_guess(bvdfit.ImpedanceSpectrum(freqs, z), C0)


def test_initial_guess_weak_coupling_gives_small_capacitance():
    # f_p/f_s -> 1 means C -> 0 in the estimation formula
    truth = params_for(30e3, 20.0, 20e-12)
    spectrum = bvdfit.generate_spectrum(truth, f_start=29.5e3, f_stop=30.5e3, n_points=2001)
    guess = bvdfit.initial_guess(spectrum, C0)
    assert 0.0 < guess.capacitance < 4.0 * truth.capacitance


def test_noise_free_round_trip():
    truth = params_for(30e3, 2150.0, 1e-9)
    spectrum = bvdfit.generate_spectrum(truth, n_points=201)
    result = bvdfit.fit_bvd(spectrum, C0)
    assert result.converged
    assert result.params.inductance == pytest.approx(truth.inductance, rel=1e-6)
    assert result.params.capacitance == pytest.approx(truth.capacitance, rel=1e-6)
    assert result.params.resistance == pytest.approx(truth.resistance, rel=1e-6)
    assert result.residual_norm < 1e-12


def test_noisy_recovery_sample():
    # 20-trial slice of the acceptance sweep
    rng = np.random.default_rng(2024)
    for _ in range(20):
        f_r = rng.uniform(20e3, 45e3)
        truth = params_for(f_r, rng.uniform(500.0, 3000.0), rng.uniform(50e-12, 200e-12))
        spectrum = bvdfit.generate_spectrum(
            truth,
            f_start=0.95 * f_r,
            f_stop=1.06 * f_r,
            n_points=6401,
            noise=0.01,
            seed=int(rng.integers(2**63)),
        )
        result = bvdfit.fit_bvd(spectrum, C0)
        assert result.converged
        assert resonant_frequency(result.params) == pytest.approx(f_r, rel=5e-4)
        assert result.params.resistance == pytest.approx(truth.resistance, rel=0.03)
        assert result.params.inductance == pytest.approx(truth.inductance, rel=0.05)
        assert result.params.capacitance == pytest.approx(truth.capacitance, rel=0.05)


def test_window_excluding_resonance_fails_cleanly():
    truth = params_for(30e3, 1000.0, 1e-10)
    spectrum = bvdfit.generate_spectrum(truth, f_start=35e3, f_stop=40e3, n_points=201)
    with pytest.raises((NoResonanceFound, FitNotConverged)):
        bvdfit.fit_bvd(spectrum, C0)


def test_residual_zero_at_generating_parameters():
    truth = params_for(30e3, 2150.0, 1e-9)
    spectrum = bvdfit.generate_spectrum(truth, n_points=64)
    assert bvdfit.residual(truth, spectrum) < 1e-12


def test_residual_grows_with_perturbed_damping():
    truth = params_for(30e3, 2150.0, 1e-9)
    spectrum = bvdfit.generate_spectrum(truth, n_points=64)
    bumped = BvdParams(truth.inductance, truth.capacitance, truth.resistance * 1.1, C0)
    assert bvdfit.residual(bumped, spectrum) > bvdfit.residual(truth, spectrum)


def test_residual_invariant_under_point_order():
    truth = params_for(30e3, 2150.0, 1e-9)
    spectrum = bvdfit.generate_spectrum(truth, n_points=33, noise=0.05, seed=3)
    shuffled = list(spectrum.points)
    rng = np.random.default_rng(0)
    rng.shuffle(shuffled)
    reordered = bvdfit.ImpedanceSpectrum.from_points(shuffled)
    perturbed = BvdParams(truth.inductance * 1.05, truth.capacitance, truth.resistance, C0)
    assert bvdfit.residual(perturbed, reordered) == pytest.approx(
        bvdfit.residual(perturbed, spectrum), rel=1e-12
    )


def test_iteration_cap_reports_best_effort():
    truth = params_for(30e3, 2150.0, 1e-9)
    spectrum = bvdfit.generate_spectrum(truth, n_points=201, noise=0.01, seed=1)
    with pytest.raises(FitNotConverged) as excinfo:
        bvdfit.fit_bvd(spectrum, C0, bvdfit.FitOptions(max_iterations=1))
    best = excinfo.value.result
    assert best.iterations == 1
    assert not best.converged
    assert np.isfinite(best.residual_norm)


def test_explicit_start_is_honored():
    truth = params_for(30e3, 2150.0, 1e-9)
    spectrum = bvdfit.generate_spectrum(truth, n_points=64)
    result = bvdfit.fit_bvd(spectrum, C0, bvdfit.FitOptions(initial=truth))
    assert result.converged
    assert result.params.resistance == pytest.approx(truth.resistance, rel=1e-9)


def test_four_parameter_fit_recovers_static_capacitance():
    truth = params_for(30e3, 800.0, 3e-10, c0=12e-9)
    spectrum = bvdfit.generate_spectrum(truth, n_points=201)
    start = BvdParams(
        truth.inductance * 1.2, truth.capacitance * 0.8, truth.resistance * 1.1, 9.88e-9
    )
    options = bvdfit.FitOptions(fit_static_capacitance=True, initial=start)
    result = bvdfit.fit_bvd(spectrum, 9.88e-9, options)
    assert result.converged
    assert result.params.static_capacitance == pytest.approx(12e-9, rel=1e-6)


def test_series_shunt_round_trip():
    truth = params_for(30e3, 2150.0, 1e-9)
    spectrum = bvdfit.generate_spectrum(truth, n_points=201, shunt_resistance=100.0)
    result = bvdfit.fit_bvd(spectrum, C0, bvdfit.FitOptions(shunt_resistance=100.0))
    assert result.converged
    assert result.params.inductance == pytest.approx(truth.inductance, rel=1e-6)
    assert result.params.resistance == pytest.approx(truth.resistance, rel=1e-6)


def test_generator_is_seeded():
    truth = params_for(30e3, 2150.0, 1e-9)
    a = bvdfit.generate_spectrum(truth, noise=0.01, seed=11)
    b = bvdfit.generate_spectrum(truth, noise=0.01, seed=11)
    c = bvdfit.generate_spectrum(truth, noise=0.01, seed=12)
    assert np.array_equal(a.impedances, b.impedances)
    assert not np.array_equal(a.impedances, c.impedances)


def test_csv_round_trip(tmp_path):
    truth = params_for(30e3, 2150.0, 1e-9)
    spectrum = bvdfit.generate_spectrum(truth, n_points=33, noise=0.02, seed=8)
    path = tmp_path / "spectrum.csv"
    with open(path, "w", encoding="utf-8", newline="") as handle:
        bvdfit.save_impedance_csv(spectrum, handle)
    loaded = bvdfit.load_impedance_csv(path)
    assert np.allclose(loaded.frequencies, spectrum.frequencies, rtol=1e-9)
    assert np.allclose(loaded.impedances, spectrum.impedances, rtol=1e-9)


def test_csv_rejects_wrong_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("freq,mag,phase\n30000,500,-80\n")
    with pytest.raises(MalformedSpectrumFile):
        bvdfit.load_impedance_csv(path)


def test_csv_rejects_bad_rows(tmp_path):
    header = "frequency_hz,magnitude_ohm,phase_deg\n"
    ragged = tmp_path / "ragged.csv"
    ragged.write_text(header + "30000,500\n")
    with pytest.raises(MalformedSpectrumFile):
        bvdfit.load_impedance_csv(ragged)
    negative = tmp_path / "negative.csv"
    negative.write_text(header + "30000,-500,-80\n")
    with pytest.raises(MalformedSpectrumFile):
        bvdfit.load_impedance_csv(negative)
    text = tmp_path / "text.csv"
    text.write_text(header + "30000,five hundred,-80\n")
    with pytest.raises(MalformedSpectrumFile):
        bvdfit.load_impedance_csv(text)


def test_model_impedance_adds_series_shunt():
    truth = params_for(30e3, 2150.0, 1e-9)
    bare = bvdfit.model_impedance(truth, 30e3)
    shunted = bvdfit.model_impedance(truth, 30e3, shunt_resistance=100.0)
    assert shunted == pytest.approx(bare + 100.0, rel=1e-15)
