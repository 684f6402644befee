"""
Unit tests for the neutralldp command line.
"""

import contextlib
import io
import json
import tempfile
import unittest
from pathlib import Path

from neutralldp import __version__
from neutralldp.__main__ import build_parser, main
from neutralldp.runner import EXIT_INPUT, EXIT_OK, EXIT_OUTPUT, load_config

CONFIGS = Path(__file__).resolve().parents[2] / "configs"


class TestCLI(unittest.TestCase):
    """Test argument handling and exit codes."""

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.root = Path(self.temp_dir.name)
        self.config_path = self.root / "sim.json"
        self.config_path.write_text(
            json.dumps(
                {
                    "experiment": "simulate",
                    "coefficients": "pure-brownian",
                    "mesh": {"tau": 1.0, "horizon_T": 1.0, "steps_per_tau": 5},
                    "eps_list": [0.1],
                    "seed": 42,
                    "output_path": str(self.root / "sim.csv"),
                }
            )
        )

    def tearDown(self):
        self.temp_dir.cleanup()

    def run_main(self, *argv):
        stdout, stderr = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            status = main(list(argv))
        return status, stdout.getvalue(), stderr.getvalue()

    def test_run(self):
        """A valid config runs and reports where it wrote."""
        status, stdout, _ = self.run_main("simulate", "--config", str(self.config_path))
        self.assertEqual(status, EXIT_OK)
        self.assertTrue((self.root / "sim.csv").exists())
        self.assertIn("sim.csv", stdout)

    def test_overrides(self):
        """--seed and --output replace the config values."""
        output = self.root / "other.csv"
        status, _, _ = self.run_main(
            "simulate", "--config", str(self.config_path), "--seed", "7", "--output", str(output)
        )
        self.assertEqual(status, EXIT_OK)
        self.assertTrue(output.exists())
        self.assertFalse((self.root / "sim.csv").exists())

    def test_experiment_mismatch(self):
        """The subcommand must match the config."""
        status, _, stderr = self.run_main("rate", "--config", str(self.config_path))
        self.assertEqual(status, EXIT_INPUT)
        self.assertIn("simulate", stderr)

    def test_missing_config(self):
        """An unreadable config is an input error."""
        status, _, _ = self.run_main("simulate", "--config", str(self.root / "nope.json"))
        self.assertEqual(status, EXIT_INPUT)

    def test_invalid_config(self):
        """Validation errors list the offending field."""
        self.config_path.write_text('{"experiment": "simulate", "coefficients": "ou"}')
        status, _, stderr = self.run_main("simulate", "--config", str(self.config_path))
        self.assertEqual(status, EXIT_INPUT)
        self.assertIn("seed", stderr)

    def test_bad_keys_are_input_errors(self):
        """Misspelt mesh keys and non-numeric m_R exit with the input status."""
        configs = {
            "simulate": {"mesh": {"tau": 1.0, "stpes": 5}, "eps_list": [0.1]},
            "ldp-verify": {
                "ldp": {"lemma": "truncation", "delta": 0.1, "m_R": "big"},
                "R_list": [2.0],
                "eps_list": [0.5],
            },
        }
        for experiment, extra in configs.items():
            with self.subTest(experiment=experiment):
                data = {"experiment": experiment, "coefficients": "ou", "seed": 1, **extra}
                self.config_path.write_text(json.dumps(data))
                status, _, stderr = self.run_main(experiment, "--config", str(self.config_path))
                self.assertEqual(status, EXIT_INPUT)
                self.assertIn("Invalid config", stderr)

    def test_stroock_config(self):
        """stroock runs without a coefficients entry."""
        self.config_path.write_text(
            json.dumps(
                {
                    "experiment": "stroock",
                    "seed": 3,
                    "samples": 500,
                    "stroock": {"A": 1.0, "B": 0.0, "R": 3.0, "T": 1.0, "steps": 50},
                    "output_path": str(self.root / "st.csv"),
                }
            )
        )
        status, _, _ = self.run_main("stroock", "--config", str(self.config_path))
        self.assertEqual(status, EXIT_OK)
        self.assertTrue((self.root / "st.csv").exists())

    def test_unwritable_output(self):
        """Output failures exit with the output status."""
        status, _, _ = self.run_main(
            "simulate",
            "--config",
            str(self.config_path),
            "--output",
            str(self.root / "missing" / "out.csv"),
        )
        self.assertEqual(status, EXIT_OUTPUT)

    def test_presets(self):
        """presets lists every shipped preset."""
        status, stdout, _ = self.run_main("presets")
        self.assertEqual(status, EXIT_OK)
        for name in ("pure-brownian", "linear-delay", "neutral-linear", "ou", "bounded-trig"):
            self.assertIn(name, stdout)

    def test_version(self):
        """-V prints the version."""
        stdout = io.StringIO()
        with contextlib.redirect_stdout(stdout), self.assertRaises(SystemExit):
            build_parser().parse_args(["-V"])
        self.assertIn(__version__, stdout.getvalue())

    def test_no_command(self):
        """Without a command the help is shown."""
        status, stdout, _ = self.run_main()
        self.assertEqual(status, 1)
        self.assertIn("usage", stdout)


class TestShippedConfigs(unittest.TestCase):
    """Test that every shipped config validates."""

    def test_configs_parse(self):
        """Each file in configs/ is a valid experiment config."""
        paths = sorted(CONFIGS.glob("*.json"))
        self.assertTrue(paths)
        for path in paths:
            with self.subTest(config=path.name):
                config = load_config(path)
                self.assertTrue(config.output_path.endswith(".csv"))
