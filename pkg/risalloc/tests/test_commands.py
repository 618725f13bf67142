"""Tests for the ris_sim management command."""

# Standard Library
import csv
import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest.mock import patch

# Django
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

# RIS Alloc
from risalloc.exceptions import SingularChannelError
from risalloc.management.commands.ris_sim import (
    EXIT_IO,
    EXIT_PARSE,
    EXIT_PROPERTY_FAILED,
    EXIT_TRIAL_FAILED,
    EXIT_USAGE,
    EXIT_VALIDATION,
)
from risalloc.validation import PropertyResult

SMALL_CONFIG = """\
# desk-sized deployment
n_devices = 3
n_antennas = 16
ris_rows = 4
ris_cols = 4
area_side_m = 100
ris_ring_radius_m = 30
max_iterations = 30
"""


class TestRisSimCommand(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)
        self.out = self.dir / "out"

    def _config(self, text=SMALL_CONFIG, name="small.cfg") -> str:
        path = self.dir / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    def _call(self, *args) -> str:
        stdout = StringIO()
        call_command("ris_sim", *args, stdout=stdout)
        return stdout.getvalue()

    def _rows(self, name) -> list[dict]:
        with open(self.out / name, newline="", encoding="utf-8") as handle:
            return list(csv.DictReader(handle))

    def _exit_code(self, *args) -> int:
        with self.assertRaises(CommandError) as ctx:
            self._call(*args)
        return ctx.exception.returncode

    def test_sweep_power(self):
        """Test a two-point power sweep writes one row per point and scheme plus a manifest."""
        output = self._call(
            "sweep-power", "--config", self._config(), "--grid", "0,10", "--trials", "2", "--out", str(self.out)
        )
        rows = self._rows("sweep_power.csv")
        self.assertEqual(len(rows), 8)
        self.assertEqual([row["sweep_value"] for row in rows[::4]], ["0", "10"])
        self.assertEqual([row["scheme"] for row in rows[:4]], ["JBPDA", "ES", "GS", "RS"])
        manifest = json.loads((self.out / "manifest.json").read_text(encoding="utf-8"))
        self.assertEqual(manifest["subcommand"], "sweep-power")
        self.assertEqual(manifest["config"]["sweep_axis"], "power")
        self.assertEqual(manifest["config"]["trials"], 2)
        self.assertIn("power=10", output)

    def test_converge(self):
        """Test converge writes the trace and the summary table."""
        self._call("converge", "--config", self._config(), "--trials", "2", "--seed", "5", "--out", str(self.out))
        trace = self._rows("converge.csv")
        self.assertEqual(trace[0]["iteration"], "1")
        summary = self._rows("converge_summary.csv")
        self.assertEqual([row["scheme"] for row in summary], ["JBPDA"])
        manifest = json.loads((self.out / "manifest.json").read_text(encoding="utf-8"))
        self.assertEqual(manifest["seed"], 5)

    def test_converge_trace_shape(self):
        """Test the trace has one row per iteration of the longest trial and only loses trials."""
        text = SMALL_CONFIG.replace("n_devices = 3", "n_devices = 5").replace("n_antennas = 16", "n_antennas = 32")
        config = self._config(text)
        self._call("converge", "--config", config, "--trials", "6", "--out", str(self.out))
        trace = self._rows("converge.csv")
        running = [int(row["trials_running"]) for row in trace]
        best = [float(row["mean_best_sum_rate_bps_hz"]) for row in trace]
        self.assertEqual([row["iteration"] for row in trace], [str(i) for i in range(1, len(trace) + 1)])
        self.assertEqual(running[0], 6)
        self.assertGreaterEqual(running[-1], 1)
        self.assertTrue(all(b <= a for a, b in zip(running, running[1:])))
        self.assertTrue(all(b >= a for a, b in zip(best, best[1:])))
        self.assertLessEqual(len(trace), 30)

    def test_schemes_flag(self):
        self._call(
            "sweep-devices",
            "--config",
            self._config(),
            "--grid",
            "2,3",
            "--trials",
            "1",
            "--schemes",
            "gs,rs",
            "--out",
            str(self.out),
        )
        rows = self._rows("sweep_devices.csv")
        self.assertEqual([row["scheme"] for row in rows], ["GS", "RS", "GS", "RS"])

    def test_es_from_file_is_dropped_on_large_sweeps(self):
        """Test ES listed in the config file is skipped for the device sweep."""
        config = self._config(SMALL_CONFIG + "schemes = JBPDA, ES\n")
        self._call("sweep-devices", "--config", config, "--grid", "2", "--trials", "1", "--out", str(self.out))
        self.assertEqual([row["scheme"] for row in self._rows("sweep_devices.csv")], ["JBPDA"])

    def test_usage_errors(self):
        config = self._config()
        self.assertEqual(self._exit_code("sweep-devices", "--config", config, "--schemes", "JBPDA,ES"), EXIT_USAGE)
        self.assertEqual(self._exit_code("sweep-power", "--config", config, "--schemes", "JBPDA,XX"), EXIT_USAGE)
        self.assertEqual(self._exit_code("sweep-power", "--config", config, "--grid", "0,ten"), EXIT_USAGE)

    def test_parse_error(self):
        config = self._config("n_devices = 3\nnot a pair\n")
        with self.assertRaises(CommandError) as ctx:
            self._call("converge", "--config", config)
        self.assertEqual(ctx.exception.returncode, EXIT_PARSE)
        self.assertIn("line 2", str(ctx.exception))

    def test_validation_error(self):
        config = self._config(SMALL_CONFIG.replace("n_devices = 3", "n_devices = 0"))
        self.assertEqual(self._exit_code("converge", "--config", config), EXIT_VALIDATION)

    def test_io_errors(self):
        self.assertEqual(self._exit_code("converge", "--config", str(self.dir / "missing.cfg")), EXIT_IO)
        blocker = self.dir / "blocker"
        blocker.write_text("", encoding="utf-8")
        code = self._exit_code("converge", "--config", self._config(), "--trials", "1", "--out", str(blocker / "out"))
        self.assertEqual(code, EXIT_IO)

    def test_trial_failure(self):
        config = self._config(SMALL_CONFIG + "max_redraws = 0\n")
        with patch("risalloc.simulation.realize_channels", side_effect=SingularChannelError("rank deficient")):
            code = self._exit_code("converge", "--config", config, "--trials", "1", "--out", str(self.out))
        self.assertEqual(code, EXIT_TRIAL_FAILED)

    @patch("risalloc.management.commands.ris_sim.run_validation")
    def test_validate(self, mock_validation):
        mock_validation.return_value = [PropertyResult("noise_budget", True, "ok")]
        self.assertIn("PASS noise_budget", self._call("validate"))

        mock_validation.return_value = [
            PropertyResult("noise_budget", True, "ok"),
            PropertyResult("zf_orthogonality", False, "bad"),
        ]
        with self.assertRaises(CommandError) as ctx:
            self._call("validate")
        self.assertEqual(ctx.exception.returncode, EXIT_PROPERTY_FAILED)
