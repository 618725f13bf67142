"""Tests for risalloc.validation module."""

# Standard Library
from unittest import TestCase

# Third Party
import numpy as np

# RIS Alloc
from risalloc.simulation import SimConfig
from risalloc.validation import (
    CHECKS,
    check_matching,
    check_noise_budget,
    check_waterfill_budget,
    run_validation,
)


class TestValidationSuite(TestCase):
    def test_every_property_passes(self):
        """Test the shipped suite passes on the default configuration."""
        results = run_validation(SimConfig())
        self.assertEqual(len(results), len(CHECKS))
        self.assertEqual(len({r.name for r in results}), len(results))
        failed = [f"{r.name}: {r.detail}" for r in results if not r.passed]
        self.assertEqual(failed, [])

    def test_noise_budget(self):
        result = check_noise_budget(np.random.default_rng(0))
        self.assertTrue(result.passed, result.detail)
        self.assertTrue(result.detail.endswith("dBm"))

    def test_individual_checks(self):
        rng = np.random.default_rng(11)
        self.assertTrue(check_matching(rng, instances=20).passed)
        self.assertTrue(check_waterfill_budget(rng, instances=50).passed)
