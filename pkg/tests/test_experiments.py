import numpy as np
import pytest

from gscoupling.coupling import ParamPoint, SignalSet, evaluate_coupling
from gscoupling.experiments import (
    DenoiseConfig,
    SpectrumConfig,
    calibrate_threshold,
    coupling_spectrum_experiment,
    denoise_experiment,
    energy_fraction,
    helix_instance,
    piecewise_smooth_signal,
    spearman_rho,
)
from gscoupling.graphs import generate, is_connected
from gscoupling.io import to_json
from gscoupling.smoothness import smoothness_value
from gscoupling.spectral import FilterSpec, band_pass, eig_sym, laplacian, smoothness_ordered_indices


class TestHelix:
    def test_endpoints(self):
        g, f = helix_instance(22)
        assert f[0] == 0.0
        assert f[-1] == pytest.approx(5 * np.pi, abs=1e-14)
        assert g.n == 22 and g.edge_count == 22
        assert is_connected(g)

    def test_divisibility_guard(self):
        with pytest.raises(ValueError, match="divisible by 5"):
            helix_instance(21)
        with pytest.raises(ValueError):
            helix_instance(2)

    def test_helix_signal_rougher_than_sinusoid(self):
        g, f = helix_instance(22)
        smooth_helix = smoothness_value(g, f)
        # one cycle of a sinusoid along the cycle's own circular order
        angles = np.mod(f, 2 * np.pi)
        pos = np.empty(22)
        pos[np.argsort(angles, kind="stable")] = np.arange(22)
        smooth_sin = smoothness_value(g, np.cos(2 * np.pi * pos / 22))
        assert smooth_helix > smooth_sin


class TestCalibrateThreshold:
    def test_zero_weights_distance_threshold(self, paw):
        fs = SignalSet(paw, np.zeros((1, 4)))
        y = calibrate_threshold(paw, fs, 0.0, paw.edge_count, 0)
        assert y == 1.0

    def test_all_pairs_target(self, paw, f2):
        fs = SignalSet(paw, f2.reshape(1, 4))
        y = calibrate_threshold(paw, fs, 1.0, 6, 0)
        g = evaluate_coupling(paw, fs, ParamPoint(y, (1.0,)))
        assert g.edge_count == 6

    def test_paw_target_four(self, paw, f2):
        fs = SignalSet(paw, f2.reshape(1, 4))
        y = calibrate_threshold(paw, fs, 1.0, 4, 0)
        g = evaluate_coupling(paw, fs, ParamPoint(y, (1.0,)))
        assert g.edge_count == 4

    def test_unattainable_reports_bracket(self, paw):
        fs = SignalSet(paw, np.zeros((1, 4)))
        # with zero weights the count jumps 0 -> 4 -> 6; 5 is unreachable
        with pytest.raises(ValueError, match="unattainable"):
            calibrate_threshold(paw, fs, 0.0, 5, 0)

    def test_smallest_threshold_convention(self, paw, f2):
        fs = SignalSet(paw, f2.reshape(1, 4))
        y = calibrate_threshold(paw, fs, 1.0, 4, 0)
        smaller = np.nextafter(y, 0.0)
        assert evaluate_coupling(paw, fs, ParamPoint(smaller, (1.0,))).edge_count < 4


class TestEnergyFraction:
    @pytest.fixture
    def basis(self, paw):
        return eig_sym(laplacian(paw))

    def test_single_eigenvector(self, basis):
        assert energy_fraction(basis.vectors[:, 2], basis, 1) == pytest.approx(1.0, abs=1e-12)

    def test_full_k_is_one(self, basis):
        rng = np.random.default_rng(171)
        f = rng.standard_normal(4)
        assert energy_fraction(f, basis, 4) == pytest.approx(1.0, rel=1e-12)

    def test_two_equal_components(self, basis):
        f = (basis.vectors[:, 0] + basis.vectors[:, 1]) / np.sqrt(2.0)
        assert energy_fraction(f, basis, 1) == pytest.approx(1 / np.sqrt(2), abs=1e-12)

    def test_monotone_in_k(self, basis):
        rng = np.random.default_rng(173)
        for _ in range(10):
            f = rng.standard_normal(4)
            fracs = [energy_fraction(f, basis, k) for k in range(1, 5)]
            assert all(a <= b + 1e-15 for a, b in zip(fracs, fracs[1:]))

    def test_zero_signal_rejected(self, basis):
        with pytest.raises(ValueError, match="zero signal"):
            energy_fraction(np.zeros(4), basis, 1)


class TestSpearman:
    def test_perfect_monotone(self):
        assert spearman_rho([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1.0)

    def test_reversed(self):
        assert spearman_rho([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_ties_average(self):
        rho = spearman_rho([1, 1, 2, 3], [1, 2, 3, 4])
        assert 0.0 < rho < 1.0

    def test_constant_series(self):
        assert spearman_rho([1, 1, 1], [1, 2, 3]) == 0.0


class TestDenoise:
    def test_zero_noise_in_span_is_exact(self):
        g = generate("lattice2d", rows=4, cols=4)
        basis = eig_sym(laplacian(g))
        _, y_set = smoothness_ordered_indices(g, basis, 3)
        indices = tuple(sorted(y_set))
        rng = np.random.default_rng(179)
        sub = basis.vectors[:, [i - 1 for i in indices]]
        clean = sub @ rng.standard_normal(3)
        out = band_pass(clean, basis, FilterSpec(indices, (1.0, 0.0)))
        assert np.mean((out - clean) ** 2) == pytest.approx(0.0, abs=1e-28)

    def test_identity_coefficients_make_arms_equal(self):
        g = generate("lattice2d", rows=3, cols=3)
        basis = eig_sym(laplacian(g))
        rng = np.random.default_rng(181)
        f = rng.standard_normal(9)
        a = band_pass(f, basis, FilterSpec((1, 2), (0.0, 1.0)))
        b = band_pass(f, basis, FilterSpec((5, 7), (0.0, 1.0)))
        assert np.array_equal(a, b)

    def test_small_run_report_shape(self):
        cfg = DenoiseConfig(rows=3, cols=3, sigma=0.4, trials=6, tuning_trials=3, seed=5)
        rep = denoise_experiment(cfg)
        r = rep.results
        assert r["wins_smoothness"] + r["wins_frequency"] + r["ties"] == 6
        assert len(rep.series["per_trial_mse"]["rows"]) == 6
        assert r["m"] == round(0.2 * 9)

    def test_reproducible_bytes(self):
        cfg = DenoiseConfig(rows=3, cols=3, sigma=0.4, trials=4, tuning_trials=2, seed=9)
        a = to_json(denoise_experiment(cfg).to_json_dict())
        b = to_json(denoise_experiment(cfg).to_json_dict())
        assert a == b

    def test_threads_do_not_change_results(self):
        cfg = DenoiseConfig(rows=3, cols=3, sigma=0.4, trials=4, tuning_trials=2, seed=9)
        a = to_json(denoise_experiment(cfg, threads=1).to_json_dict())
        b = to_json(denoise_experiment(cfg, threads=4).to_json_dict())
        assert a == b

    def test_explicit_signals_validated(self):
        cfg = DenoiseConfig(rows=3, cols=3, trials=2, tuning_trials=2)
        with pytest.raises(ValueError, match="empty"):
            denoise_experiment(cfg, clean_signals=[])
        with pytest.raises(ValueError, match="length"):
            denoise_experiment(cfg, clean_signals=[np.zeros(5)])

    def test_generator_unit_rms(self):
        g = generate("lattice2d", rows=4, cols=4)
        basis = eig_sym(laplacian(g))
        order = tuple(range(1, 17))
        rng = np.random.default_rng(191)
        img = piecewise_smooth_signal(rng, 4, 4, basis, order)
        assert np.sqrt(np.mean(img**2)) == pytest.approx(1.0, rel=1e-12)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            DenoiseConfig(sigma=0.0)
        with pytest.raises(ValueError):
            DenoiseConfig(rows=0)
        with pytest.raises(ValueError):
            DenoiseConfig(m_fraction=0.001)


@pytest.fixture(scope="module")
def small_report():
    cfg = SpectrumConfig(n_points=30, k=3, n_signals=4, schedule_len=9,
                         k_max=4, seed=2)
    return coupling_spectrum_experiment(cfg)


class TestSpectrum:
    def test_base_reproduced(self, small_report):
        assert small_report.results["base_reproduced_at_zero"] is True

    def test_hamming_starts_at_zero(self, small_report):
        rows = small_report.series["schedule"]["rows"]
        assert rows[0][3] == 0

    def test_energy_fractions_monotone_in_k(self, small_report):
        for row in small_report.series["mean_energy_fraction"]["rows"]:
            ks = row[1:]
            assert all(a <= b + 1e-12 for a, b in zip(ks, ks[1:]))

    def test_bucket_counts_cover_signals(self, small_report):
        for _, up, down, neutral in small_report.series["relative_change_buckets"]["rows"]:
            assert up + down + neutral == 4

    def test_reproducible_bytes(self):
        cfg = SpectrumConfig(n_points=25, k=3, n_signals=3, schedule_len=6, seed=4)
        a = to_json(coupling_spectrum_experiment(cfg).to_json_dict())
        b = to_json(coupling_spectrum_experiment(cfg).to_json_dict())
        assert a == b

    def test_signals_preprocessed_perpendicular(self):
        cfg = SpectrumConfig(n_points=25, k=3, n_signals=3, schedule_len=4, seed=4)
        rng = np.random.default_rng([cfg.seed, 0, 0])
        pts = rng.uniform(size=(25, 2))
        raw = np.vstack([pts[:, 0] + 5.0, pts[:, 1] - 2.0, pts[:, 0] * 0 + 3.0])
        rep = coupling_spectrum_experiment(cfg, points=pts, signals=raw[:2])
        assert rep.results["base_reproduced_at_zero"] is True

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SpectrumConfig(schedule_len=1)
        with pytest.raises(ValueError):
            SpectrumConfig(k_max=0)
