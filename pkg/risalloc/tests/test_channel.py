"""Tests for risalloc.channel module."""

# Standard Library
import math
from unittest import TestCase

# Third Party
import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

# RIS Alloc
from risalloc.association import Association
from risalloc.channel import (
    ChannelRealization,
    ap_antenna_positions,
    assemble_channel_matrix,
    cascaded_channel,
    configure_ris_phases,
    distance,
    gen_ap_ris_channel,
    gen_ris_device_channel,
    noise_power,
    path_loss_linear,
    realize_channels,
    ris_element_positions,
)
from risalloc.exceptions import (
    DegenerateChannelError,
    DegenerateDistanceError,
    InvalidGeometryError,
    InvalidInputError,
    ShapeError,
)
from risalloc.tests.factories import CarrierFactory, ComplexMatrixFactory, GeometryFactory, RealizationFactory
from risalloc.utils import linear_to_db


class TestLinkBudget(TestCase):
    def test_noise_power_table_values(self):
        """Test -174 dBm/Hz over 400 MHz with a 10 dB noise figure is -77.98 dBm."""
        level_dbm = linear_to_db(noise_power(-174.0, 400e6, 10.0)) + 30.0
        self.assertAlmostEqual(level_dbm, -77.98, delta=0.01)

    def test_noise_power_rejects_zero_bandwidth(self):
        """Test a zero bandwidth is refused."""
        with self.assertRaises(InvalidInputError):
            noise_power(-174.0, 0.0, 10.0)

    def test_path_loss_formula(self):
        """Test free-space loss at 15 GHz and 100 m is about 95.97 dB."""
        gain = path_loss_linear(15e9, 100.0)
        self.assertAlmostEqual(gain, (SPEED_OF_LIGHT / (4 * math.pi * 15e9 * 100.0)) ** 2)
        self.assertAlmostEqual(-linear_to_db(gain), 95.97, delta=0.01)

    def test_path_loss_inverse_square(self):
        """Test doubling the distance costs a factor of four."""
        self.assertAlmostEqual(path_loss_linear(15e9, 50.0) / path_loss_linear(15e9, 100.0), 4.0)

    def test_path_loss_array(self):
        """Test array input gives array output of the same shape."""
        gains = path_loss_linear(15e9, np.array([[10.0, 20.0], [40.0, 80.0]]))
        self.assertEqual(gains.shape, (2, 2))

    def test_path_loss_zero_distance(self):
        """Test that a zero-length link is degenerate."""
        with self.assertRaises(DegenerateDistanceError):
            path_loss_linear(15e9, 0.0)
        with self.assertRaises(InvalidGeometryError):
            path_loss_linear(15e9, np.array([5.0, 0.0]))

    def test_distance(self):
        """Test Euclidean distance and the non-finite guard."""
        self.assertAlmostEqual(distance([0, 0, 0], [3, 4, 12]), 13.0)
        with self.assertRaises(InvalidGeometryError):
            distance([0, 0, np.inf], [0, 0, 0])

    def test_carrier_defaults(self):
        """Test the default carrier and its half-wavelength elements."""
        carrier = CarrierFactory.create()
        self.assertEqual(carrier.carrier_frequency_hz, 15e9)
        self.assertEqual(carrier.bandwidth_hz, 400e6)
        self.assertAlmostEqual(carrier.element_side_m, SPEED_OF_LIGHT / 15e9 / 2)

    def test_carrier_rejects_bad_frequency(self):
        """Test that a non-positive carrier is refused."""
        with self.assertRaises(InvalidInputError):
            CarrierFactory.create(carrier_frequency_hz=0.0)


class TestArrayLayouts(TestCase):
    def setUp(self):
        self.geometry = GeometryFactory.create_fixed(n_antennas=8, ris_rows=3, ris_cols=4)
        self.carrier = CarrierFactory.create()

    def test_ap_array_spacing(self):
        """Test a half-wavelength ULA along x centred on the AP."""
        positions = ap_antenna_positions(self.geometry, self.carrier)
        self.assertEqual(positions.shape, (8, 3))
        np.testing.assert_allclose(np.diff(positions[:, 0]), self.carrier.wavelength / 2)
        np.testing.assert_allclose(positions.mean(axis=0), self.geometry.ap_position, atol=1e-12)

    def test_terrestrial_panel_is_upright(self):
        """Test terrestrial elements spread vertically around the RIS centre."""
        elements = ris_element_positions(self.geometry, self.carrier, 0)
        self.assertEqual(elements.shape, (12, 3))
        np.testing.assert_allclose(elements.mean(axis=0), self.geometry.ris_positions[0], atol=1e-9)
        self.assertGreater(np.ptp(elements[:, 2]), 0.0)
        pitch = np.linalg.norm(elements[1] - elements[0])
        self.assertAlmostEqual(pitch, self.carrier.element_side_m)

    def test_haps_panel_is_flat(self):
        """Test HAPS elements lie at a single altitude."""
        elements = ris_element_positions(self.geometry, self.carrier, 1)
        np.testing.assert_allclose(elements[:, 2], 20_000.0)


class TestLinkChannels(TestCase):
    def setUp(self):
        self.geometry = GeometryFactory.create_fixed(n_antennas=8, ris_rows=3, ris_cols=3)
        self.carrier = CarrierFactory.create()

    def test_ap_ris_shape_and_amplitude(self):
        """Test H is M x N with the centre-distance amplitude everywhere."""
        h = gen_ap_ris_channel(self.geometry, self.carrier, 0)
        self.assertEqual(h.shape, (9, 8))
        centre = distance(self.geometry.ap_position, self.geometry.ris_positions[0])
        np.testing.assert_allclose(np.abs(h), math.sqrt(path_loss_linear(15e9, centre)))

    def test_centre_distance_model_is_rank_one(self):
        """Test per_element=False gives a single common phase."""
        h = gen_ap_ris_channel(self.geometry, self.carrier, 0, per_element=False)
        np.testing.assert_allclose(h, np.full(h.shape, h[0, 0]))

    def test_ris_device_channel(self):
        """Test h_l,k has one entry per element."""
        h = gen_ris_device_channel(self.geometry, self.carrier, 1, 0)
        self.assertEqual(h.shape, (9,))

    def test_index_out_of_range(self):
        """Test bad RIS and device indices."""
        with self.assertRaises(IndexError):
            gen_ap_ris_channel(self.geometry, self.carrier, 2)
        with self.assertRaises(IndexError):
            gen_ris_device_channel(self.geometry, self.carrier, 0, 5)


class TestCoPhasing(TestCase):
    def setUp(self):
        self.h_ap = ComplexMatrixFactory.create(6, 4, seed=1)
        self.h_dev = ComplexMatrixFactory.create(6, 1, seed=2)[:, 0]

    def test_unit_modulus(self):
        """Test every phase shift has unit amplitude."""
        theta = configure_ris_phases(self.h_ap, self.h_dev)
        np.testing.assert_allclose(np.abs(theta), 1.0)

    def test_coherent_at_reference_antenna(self):
        """Test the reference-antenna entry adds every element in phase."""
        theta = configure_ris_phases(self.h_ap, self.h_dev, reference_antenna=2)
        g = cascaded_channel(self.h_ap, theta, self.h_dev)
        expected = np.sum(np.abs(self.h_ap[:, 2]) * np.abs(self.h_dev))
        self.assertAlmostEqual(g[2].real, expected)
        self.assertAlmostEqual(g[2].imag, 0.0)

    def test_beats_random_phases(self):
        """Test co-phasing maximises the reference-antenna gain."""
        theta = configure_ris_phases(self.h_ap, self.h_dev)
        best = abs(cascaded_channel(self.h_ap, theta, self.h_dev)[0])
        rng = np.random.default_rng(3)
        for _ in range(20):
            other = np.exp(1j * rng.uniform(0, 2 * np.pi, 6))
            self.assertLessEqual(abs(cascaded_channel(self.h_ap, other, self.h_dev)[0]), best + 1e-12)

    def test_diagonal_matrix_form(self):
        """Test Theta given as a full diagonal matrix."""
        theta = configure_ris_phases(self.h_ap, self.h_dev)
        np.testing.assert_allclose(
            cascaded_channel(self.h_ap, np.diag(theta), self.h_dev),
            cascaded_channel(self.h_ap, theta, self.h_dev),
        )

    def test_zero_path(self):
        """Test a dead element cannot be co-phased."""
        h_dev = self.h_dev.copy()
        h_dev[3] = 0.0
        with self.assertRaises(DegenerateChannelError):
            configure_ris_phases(self.h_ap, h_dev)

    def test_shape_mismatch(self):
        """Test H and h must agree on M."""
        with self.assertRaises(ShapeError):
            configure_ris_phases(self.h_ap, self.h_dev[:5])
        with self.assertRaises(ShapeError):
            cascaded_channel(self.h_ap, np.ones(5), self.h_dev)


class TestAssembleChannelMatrix(TestCase):
    def test_rows_follow_matched_devices(self):
        """Test row i is the conjugated cascade of the i-th matched device."""
        cascades = ComplexMatrixFactory.create(3 * 4, 5, seed=4).reshape(3, 4, 5)
        association = Association((2, None, 0, 1), 3)
        g = assemble_channel_matrix(cascades, association)
        self.assertEqual(g.shape, (3, 5))
        np.testing.assert_array_equal(g[0], np.conj(cascades[2, 0]))
        np.testing.assert_array_equal(g[1], np.conj(cascades[0, 2]))
        np.testing.assert_array_equal(g[2], np.conj(cascades[1, 3]))

    def test_shape_mismatch(self):
        """Test cascades must cover the association's RISs and devices."""
        with self.assertRaises(ShapeError):
            assemble_channel_matrix(np.zeros((2, 2, 4)), Association((0, 1, 2), 3))


class TestRealizeChannels(TestCase):
    def test_cascades_match_per_pair_synthesis(self):
        """Test each stored cascade equals H^H Theta h built from scratch."""
        realization = RealizationFactory.create(n_devices=3, n_antennas=8, ris_rows=3, ris_cols=3)
        self.assertEqual(realization.cascaded.shape, (3, 3, 8))
        for ris in range(3):
            for device in range(3):
                expected = cascaded_channel(
                    realization.ap_ris_channel(ris),
                    realization.ris_config(ris, device),
                    realization.ris_device_channel(ris, device),
                )
                scale = np.abs(expected).max()
                np.testing.assert_allclose(realization.cascaded[ris, device], expected, rtol=1e-10, atol=1e-12 * scale)

    def test_cascade_gains(self):
        """Test cascade_gains is the squared norm per pair."""
        realization = RealizationFactory.create()
        np.testing.assert_allclose(
            realization.cascade_gains, np.sum(np.abs(realization.cascaded) ** 2, axis=2)
        )
        self.assertTrue(np.all(realization.cascade_gains > 0))

    def test_stacked_and_configs(self):
        """Test the stacked channel and the per-RIS phase profiles of an association."""
        realization = RealizationFactory.create(n_devices=3)
        association = Association((1, 2, 0), 3)
        self.assertEqual(realization.stacked(association).shape, (3, 16))
        configs = realization.ris_configs(association)
        self.assertEqual(sorted(configs), [0, 1, 2])
        self.assertEqual(configs[1].shape, (16,))

    def test_cascades_are_read_only(self):
        """Test the realization cannot be mutated in place."""
        realization = RealizationFactory.create()
        with self.assertRaises(ValueError):
            realization.cascaded[0, 0, 0] = 0.0

    def test_rejects_wrong_shape(self):
        """Test cascades must be L x K x N."""
        geometry = GeometryFactory.create(n_devices=2)
        with self.assertRaises(ShapeError):
            ChannelRealization(geometry=geometry, carrier=CarrierFactory.create(), cascaded=np.ones((2, 2, 3)))

    def test_noise_power(self):
        """Test the realization exposes the carrier's noise power."""
        realization = RealizationFactory.create()
        self.assertAlmostEqual(realization.noise_power_w, noise_power(-174.0, 400e6, 10.0))

    def test_realize_is_deterministic(self):
        """Test the same geometry gives bit-identical cascades."""
        geometry = GeometryFactory.create(seed=5)
        first = realize_channels(geometry, CarrierFactory.create())
        second = realize_channels(geometry, CarrierFactory.create())
        np.testing.assert_array_equal(first.cascaded, second.cascaded)
