import numpy as np
import pytest

from ris_sim.antenna import (
    BS_ELEMENT,
    BSPortConfig,
    ElementPatternParams,
    RIS_ELEMENT,
    UE_ELEMENT,
    bs_port_pattern,
    bs_port_power_gain,
    element_attenuation_db,
    element_field_amplitude,
    field_pattern,
    pattern_grid,
    single_port,
)
from ris_sim.errors import DomainError, InvalidConfigError


class TestElementAttenuation:
    def test_boresight_is_zero(self):
        assert element_attenuation_db(90.0, 0.0, BS_ELEMENT) == pytest.approx(0.0)

    def test_horizontal_cut_at_phi_3db_width(self):
        # 12 * (65/65)^2 = 12 dB down.
        assert element_attenuation_db(90.0, 65.0, BS_ELEMENT) == pytest.approx(-12.0)

    def test_back_direction_clamped_to_floor(self):
        # 12 * (180/65)^2 = 91.9 dB, clamped by the 30 dB overall floor.
        assert element_attenuation_db(90.0, 180.0, BS_ELEMENT) == pytest.approx(-30.0)

    def test_symmetric_in_both_cuts(self):
        rng = np.random.default_rng(4)
        x = rng.uniform(0.0, 90.0, 300)
        phi = rng.uniform(-180.0, 180.0, 300)
        up = element_attenuation_db(90.0 + x, phi, BS_ELEMENT)
        down = element_attenuation_db(90.0 - x, phi, BS_ELEMENT)
        np.testing.assert_allclose(up, down, atol=1e-12)
        theta = rng.uniform(0.0, 180.0, 300)
        left = element_attenuation_db(theta, phi, BS_ELEMENT)
        right = element_attenuation_db(theta, -phi, BS_ELEMENT)
        np.testing.assert_allclose(left, right, atol=1e-12)

    def test_bounded_by_a_max(self):
        rng = np.random.default_rng(5)
        att = element_attenuation_db(
            rng.uniform(0, 180, 5000), rng.uniform(-180, 180, 5000), BS_ELEMENT
        )
        assert np.all(att <= 0.0)
        assert np.all(att >= -BS_ELEMENT.a_max_db)

    def test_isotropic_variant_is_flat(self):
        att = element_attenuation_db(
            np.array([0.0, 45.0, 170.0]), np.array([-170.0, 10.0, 90.0]), UE_ELEMENT
        )
        np.testing.assert_array_equal(att, 0.0)

    def test_out_of_range_angles_rejected(self):
        with pytest.raises(DomainError):
            element_attenuation_db(181.0, 0.0, BS_ELEMENT)
        with pytest.raises(DomainError):
            element_attenuation_db(90.0, 200.0, BS_ELEMENT)

    def test_invalid_params_rejected(self):
        with pytest.raises(InvalidConfigError):
            ElementPatternParams(theta_3db_deg=0.0)
        with pytest.raises(InvalidConfigError):
            ElementPatternParams(sla_v_db=-1.0)


class TestFieldPattern:
    def test_bs_boresight_amplitude(self):
        # 8 dBi converts to a field amplitude of 10^(8/20).
        pat = field_pattern(90.0, 0.0, BS_ELEMENT)
        assert pat.f_theta == pytest.approx(10 ** (8.0 / 20.0))
        assert pat.f_phi == 0j

    def test_ris_boresight_amplitude_is_one(self):
        assert field_pattern(90.0, 0.0, RIS_ELEMENT).f_theta == pytest.approx(1.0)

    def test_clamped_direction_amplitude(self):
        pat = field_pattern(90.0, 180.0, RIS_ELEMENT)
        assert abs(pat.f_theta) == pytest.approx(10 ** (-30.0 / 20.0))

    def test_boresight_power_gain_is_exact(self):
        for params in (BS_ELEMENT, RIS_ELEMENT):
            pat = field_pattern(90.0, 0.0, params)
            assert pat.power_gain == pytest.approx(
                10 ** (params.g_e_max_dbi / 10.0), rel=1e-12
            )


class TestPortVirtualization:
    def test_single_element_port_reduces_to_element(self):
        port = single_port()
        lam = 0.1153846
        rng = np.random.default_rng(6)
        for _ in range(50):
            zen = rng.uniform(0.0, 180.0)
            az = rng.uniform(-180.0, 180.0)
            port_pat = bs_port_pattern(zen, az, port, lam)
            elem = field_pattern(zen, az, BS_ELEMENT)
            assert port_pat.f_theta == pytest.approx(elem.f_theta, rel=1e-12)

    def _two_element_vertical(self, lam):
        positions = np.array([[0.0, 0.0, -lam / 4.0], [0.0, 0.0, lam / 4.0]])
        weights = np.array([1.0, 1.0]) / np.sqrt(2.0)
        return BSPortConfig(positions, weights)

    def test_two_element_broadside_sums_in_phase(self):
        lam = 0.1153846
        port = self._two_element_vertical(lam)
        pat = bs_port_pattern(90.0, 0.0, port, lam)
        single = field_pattern(90.0, 0.0, BS_ELEMENT)
        assert abs(pat.f_theta) == pytest.approx(
            np.sqrt(2.0) * abs(single.f_theta), rel=1e-12
        )

    def test_two_element_endfire_cancels(self):
        lam = 0.1153846
        port = self._two_element_vertical(lam)
        pat = bs_port_pattern(0.0, 0.0, port, lam)
        assert abs(pat.f_theta) == pytest.approx(0.0, abs=1e-12)

    def test_unit_power_port_bounded_by_sqrt_s(self):
        rng = np.random.default_rng(7)
        lam = 0.1153846
        for _ in range(20):
            s = rng.integers(2, 6)
            pos = rng.uniform(-lam, lam, size=(s, 3))
            w = rng.normal(size=s) + 1j * rng.normal(size=s)
            w = w / np.sqrt(np.sum(np.abs(w) ** 2))
            port = BSPortConfig(pos, w)
            zen = rng.uniform(0.0, 180.0)
            az = rng.uniform(-180.0, 180.0)
            peak = np.sqrt(s) * 10 ** (8.0 / 20.0)
            assert abs(bs_port_pattern(zen, az, port, lam).f_theta) <= peak + 1e-9

    def test_power_gain_helper_matches_pattern(self):
        lam = 0.1153846
        port = self._two_element_vertical(lam)
        zen = np.array([30.0, 90.0, 120.0])
        az = np.array([-10.0, 0.0, 60.0])
        gains = bs_port_power_gain(zen, az, port, lam)
        for i in range(3):
            pat = bs_port_pattern(float(zen[i]), float(az[i]), port, lam)
            assert gains[i] == pytest.approx(pat.power_gain, rel=1e-12)

    def test_length_mismatch_rejected(self):
        with pytest.raises(InvalidConfigError):
            BSPortConfig(np.zeros((2, 3)), np.ones(3) / np.sqrt(3.0))

    def test_non_unit_power_rejected(self):
        with pytest.raises(InvalidConfigError):
            BSPortConfig(np.zeros((2, 3)), np.array([1.0, 1.0]))


class TestPatternGrid:
    def test_shape_and_boresight_value(self):
        rows = pattern_grid(BS_ELEMENT, 30.0)
        assert rows.shape[1] == 3
        zeniths = np.unique(rows[:, 0])
        assert zeniths[0] == 0.0 and zeniths[-1] == 180.0
        boresight = rows[(rows[:, 0] == 90.0) & (rows[:, 1] == 0.0)]
        assert boresight[0, 2] == pytest.approx(8.0)

    def test_invalid_step_rejected(self):
        with pytest.raises(InvalidConfigError):
            pattern_grid(BS_ELEMENT, 0.0)
