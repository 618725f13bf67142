"""Tests for risalloc.utils module."""

# Standard Library
from unittest import TestCase

# RIS Alloc
from risalloc.utils import (
    db_to_linear,
    dbm_to_watts,
    format_rate,
    linear_to_db,
    progress_checkpoints,
    watts_to_dbm,
)


class TestDecibels(TestCase):
    """Tests for the dB conversions."""

    def test_db_to_linear(self):
        """Test that 10 dB is a factor of ten."""
        self.assertAlmostEqual(db_to_linear(10.0), 10.0)
        self.assertAlmostEqual(db_to_linear(-3.0), 0.501187, places=6)

    def test_linear_to_db_rejects_non_positive(self):
        """Test that zero and negative ratios have no dB value."""
        with self.assertRaises(ValueError):
            linear_to_db(0.0)
        with self.assertRaises(ValueError):
            linear_to_db(-1.0)

    def test_dbm_to_watts(self):
        """Test the AP budget of 23 dBm is about 0.2 W."""
        self.assertAlmostEqual(dbm_to_watts(30.0), 1.0)
        self.assertAlmostEqual(dbm_to_watts(23.0), 0.19952623, places=8)
        self.assertAlmostEqual(dbm_to_watts(0.0), 1e-3)

    def test_watts_to_dbm_inverts(self):
        """Test that watts_to_dbm undoes dbm_to_watts."""
        for level in (-10.0, 0.0, 17.5, 23.0):
            self.assertAlmostEqual(watts_to_dbm(dbm_to_watts(level)), level, places=12)


class TestFormatRate(TestCase):
    """Tests for format_rate function."""

    def test_format_rate(self):
        """Test three decimals and the unit."""
        self.assertEqual(format_rate(12.3456), "12.346 bps/Hz")

    def test_format_rate_missing(self):
        """Test None and non-finite values."""
        self.assertEqual(format_rate(None), "n/a")
        self.assertEqual(format_rate(float("nan")), "n/a")


class TestProgressCheckpoints(TestCase):
    """Tests for progress_checkpoints function."""

    def test_every_tenth(self):
        """Test first, every 10% and last."""
        self.assertEqual(progress_checkpoints(100), {1, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100})

    def test_small_totals(self):
        """Test totals under ten log every item."""
        self.assertEqual(progress_checkpoints(3), {1, 2, 3})
        self.assertEqual(progress_checkpoints(0), set())
