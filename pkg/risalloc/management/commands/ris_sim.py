# Standard Library
import logging
import time

# Django
from django.core.management.base import BaseCommand, CommandError

# RIS Alloc
from risalloc import app_settings
from risalloc.config import RunManifest, build_config, read_config_file
from risalloc.exceptions import ConfigParseError, ConfigValidationError, TrialFailedError
from risalloc.reports import emit_results
from risalloc.simulation import Scheme, SweepAxis, monte_carlo_sweep
from risalloc.utils import format_rate
from risalloc.validation import run_validation

EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_IO = 5
EXIT_TRIAL_FAILED = 6
EXIT_PROPERTY_FAILED = 7

# subcommand -> (sweep axis, presets beneath the config file)
SUBCOMMANDS = {
    "converge": (SweepAxis.NONE, {"n_devices": 50, "schemes": (Scheme.JBPDA,)}),
    "sweep-power": (
        SweepAxis.POWER,
        {"n_devices": 7, "sweep_values": tuple(float(p) for p in range(0, 24))},
    ),
    "sweep-devices": (
        SweepAxis.DEVICES,
        {"schemes": (Scheme.JBPDA, Scheme.GS, Scheme.RS), "sweep_values": (25.0, 50.0, 100.0, 200.0)},
    ),
    "sweep-antennas": (
        SweepAxis.ANTENNAS,
        {
            "n_devices": 100,
            "schemes": (Scheme.JBPDA, Scheme.GS, Scheme.RS),
            "sweep_values": (64.0, 128.0, 256.0),
        },
    ),
    "validate": (SweepAxis.NONE, {}),
}

# sweeps too large for exhaustive search
ES_EXCLUDED = {"sweep-devices", "sweep-antennas"}


def _configure_logging(verbose):
    # Always silence the noisy worker/transport loggers
    for logger_name in ("celery", "kombu", "amqp", "matplotlib"):
        logging.getLogger(logger_name).setLevel(logging.WARNING)

    risalloc_logger = logging.getLogger("risalloc")
    if verbose:
        risalloc_logger.setLevel(logging.DEBUG)
    else:
        risalloc_logger.setLevel(logging.INFO)

    # Ensure the logger has a handler (for management command context)
    if not risalloc_logger.handlers:
        handler = logging.StreamHandler()
        handler.setLevel(logging.DEBUG if verbose else logging.INFO)
        formatter = logging.Formatter("[%(levelname)s] %(message)s")
        handler.setFormatter(formatter)
        risalloc_logger.addHandler(handler)
        risalloc_logger.propagate = False  # Don't double-log to root


def _schemes_flag(text):
    try:
        return tuple(Scheme(item.strip().upper()) for item in text.split(",") if item.strip())
    except ValueError:
        raise CommandError(f"--schemes: unknown scheme in {text!r}", returncode=EXIT_USAGE) from None


def _grid_flag(text):
    try:
        return tuple(float(item) for item in text.split(",") if item.strip())
    except ValueError:
        raise CommandError(f"--grid: expected comma-separated numbers, got {text!r}", returncode=EXIT_USAGE) from None


class Command(BaseCommand):
    help = "Run RIS association campaigns: convergence traces, sweeps and the validation suite"

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest="subcommand", required=True)
        for name in SUBCOMMANDS:
            subparser = subparsers.add_parser(name)
            subparser.add_argument("--config", help="Key-value experiment config file")
            subparser.add_argument("--seed", type=int, help="Base seed; trial i uses seed ^ i")
            subparser.add_argument("--trials", type=int, help="Monte Carlo trials per sweep point")
            subparser.add_argument(
                "--out",
                default=app_settings.RIS_SIM_OUTPUT_DIR,
                help="Directory for the CSV and manifest output",
            )
            subparser.add_argument("--schemes", help="Comma-separated subset of JBPDA,ES,GS,RS")
            subparser.add_argument(
                "--verbose",
                action="store_true",
                help="Show per-iteration debug information",
            )
            if SUBCOMMANDS[name][0] is not SweepAxis.NONE:
                subparser.add_argument("--grid", help="Comma-separated sweep values")

    def handle(self, *args, **options):
        _configure_logging(options.get("verbose"))
        subcommand = options["subcommand"]
        config = self._load_config(subcommand, options)

        if subcommand == "validate":
            self._handle_validate(config)
            return

        self.stdout.write(f"Running {subcommand}: {config.trials} trials per point, seed {config.seed}")
        start_time = time.time()
        try:
            report = monte_carlo_sweep(config)
        except TrialFailedError as e:
            raise CommandError(str(e), returncode=EXIT_TRIAL_FAILED) from e

        manifest = RunManifest.for_config(config, subcommand)
        name = subcommand.replace("-", "_")
        try:
            paths = emit_results(report, manifest, options["out"], name, trace=subcommand == "converge")
        except OSError as e:
            raise CommandError(f"Cannot write results to {options['out']}: {e}", returncode=EXIT_IO) from e

        for point in report.points:
            label = "" if point.sweep_value is None else f"{config.sweep_axis.value}={point.sweep_value:g}: "
            means = ", ".join(f"{s.scheme.value} {format_rate(s.mean_sum_rate)}" for s in point.summaries)
            self.stdout.write(f"  {label}{means}")
        self.stdout.write(
            self.style.SUCCESS(f"Finished in {time.time() - start_time:.1f}s, wrote {', '.join(map(str, paths))}")
        )

    def _load_config(self, subcommand, options):
        axis, presets = SUBCOMMANDS[subcommand]
        presets = dict(presets)

        file_values = {}
        if options.get("config"):
            try:
                file_values = read_config_file(options["config"])
            except ConfigParseError as e:
                raise CommandError(f"{options['config']}: {e}", returncode=EXIT_PARSE) from e
            except OSError as e:
                raise CommandError(f"Cannot read config {options['config']}: {e}", returncode=EXIT_IO) from e

        overrides = {"sweep_axis": axis}
        if axis is SweepAxis.NONE:
            overrides["sweep_values"] = ()
        elif options.get("grid"):
            overrides["sweep_values"] = _grid_flag(options["grid"])
        elif file_values.get("sweep_axis", axis) is not axis:
            # the file's grid belongs to another axis
            file_values.pop("sweep_values", None)
        for key in ("seed", "trials"):
            if options.get(key) is not None:
                overrides[key] = options[key]
        if options.get("schemes"):
            overrides["schemes"] = _schemes_flag(options["schemes"])

        if subcommand in ES_EXCLUDED:
            if Scheme.ES in overrides.get("schemes", ()):
                raise CommandError(
                    f"ES is not available for {subcommand}: exhaustive search is infeasible at these sizes",
                    returncode=EXIT_USAGE,
                )
            if Scheme.ES in file_values.get("schemes", ()):
                logging.getLogger("risalloc").warning(
                    f"Excluding ES from {subcommand}: exhaustive search is infeasible"
                )
                file_values["schemes"] = tuple(s for s in file_values["schemes"] if s is not Scheme.ES)
                if not file_values["schemes"]:
                    file_values.pop("schemes")

        try:
            return build_config(file_values, presets, overrides)
        except ConfigValidationError as e:
            raise CommandError(str(e), returncode=EXIT_VALIDATION) from e

    def _handle_validate(self, config):
        failures = 0
        for result in run_validation(config):
            if result.passed:
                self.stdout.write(self.style.SUCCESS(f"PASS {result.name}") + f"  {result.detail}")
            else:
                failures += 1
                self.stdout.write(self.style.ERROR(f"FAIL {result.name}") + f"  {result.detail}")
        if failures:
            raise CommandError(f"{failures} validation properties failed", returncode=EXIT_PROPERTY_FAILED)
        self.stdout.write(self.style.SUCCESS("All validation properties passed."))
