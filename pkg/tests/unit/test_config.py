"""
Unit tests for experiment config parsing, validation and serialisation.
"""

import json
import unittest

from neutralldp._errors import ConfigError, ParseError, ValidationError
from neutralldp.runner import config_digest, create_model, parse_config, serialize_config
from neutralldp.runner.config import DEFAULT_MESH, DEFAULT_TOLERANCES


def _config(**overrides):
    data = {
        "experiment": "simulate",
        "coefficients": "pure-brownian",
        "seed": 42,
        "eps_list": [0.1],
    }
    data.update(overrides)
    return json.dumps(data)


class TestParseConfig(unittest.TestCase):
    """Test parsing and defaults."""

    def test_minimal_simulate(self):
        """A minimal config gets its defaults filled in."""
        config = parse_config(_config())
        self.assertEqual(config.experiment, "simulate")
        self.assertEqual(config.mesh, DEFAULT_MESH)
        self.assertEqual(config.tolerances, DEFAULT_TOLERANCES)
        self.assertEqual(config.eps_list, (0.1,))
        self.assertIsNone(config.output_path)

    def test_bytes_accepted(self):
        """Config files are read as bytes."""
        self.assertEqual(parse_config(_config().encode("utf-8")), parse_config(_config()))

    def test_exponent_floats(self):
        """1e-3 is a number, as in JSON."""
        config = parse_config(
            '{"experiment": "rate", "coefficients": "ou", "seed": 1,'
            ' "event": {"kind": "endpoint_ball", "center": 1, "radius_delta": 1e-3}}'
        )
        self.assertEqual(config.event["radius_delta"], 0.001)
        self.assertIsNone(config.event["normal"])

    def test_stroock_without_coefficients(self):
        """The stroock experiment simulates W directly and needs no coefficients."""
        config = parse_config(
            '{"experiment": "stroock", "seed": 2, "stroock": {"A": 1, "B": 0, "R": 3, "T": 1}}'
        )
        self.assertIsNone(config.coefficients)
        self.assertEqual(parse_config(serialize_config(config)), config)

    def test_partial_mesh(self):
        """Mesh keys default one by one."""
        config = parse_config(_config(mesh={"steps_per_tau": 10}))
        self.assertEqual(config.mesh, {"tau": 1.0, "horizon_T": 1.0, "steps_per_tau": 10})


class TestValidation(unittest.TestCase):
    """Test schema violations."""

    def _fields(self, content):
        with self.assertRaises(ValidationError) as cm:
            parse_config(content)
        return cm.exception.fields

    def test_missing_seed(self):
        """seed is required."""
        data = json.loads(_config())
        del data["seed"]
        self.assertEqual(self._fields(json.dumps(data)), ["seed"])

    def test_zero_eps_for_ldp(self):
        """eps log P is undefined at eps = 0."""
        content = _config(
            experiment="ldp-verify", eps_list=[0.0, 0.1], ldp={"lemma": "tightness"}, R_list=[1]
        )
        self.assertIn("eps_list", self._fields(content))

    def test_all_violations_reported(self):
        """Every violation is collected before raising."""
        content = _config(seed=-1, samples=0, mesh={"tau": -1.0}, bogus=True)
        self.assertEqual(
            sorted(self._fields(content)), ["bogus", "mesh.tau", "samples", "seed"]
        )

    def test_unknown_preset_suggestion(self):
        """A misspelt preset gets a suggestion."""
        with self.assertRaises(ValidationError) as cm:
            parse_config(_config(coefficients="pure-brownain"))
        violation = cm.exception.payload["violations"][0]
        self.assertEqual(violation["field"], "coefficients.preset")
        self.assertIn("'pure-brownian'", violation["message"])

    def test_event_required(self):
        """rate needs an event."""
        content = _config(experiment="rate")
        self.assertIn("event", self._fields(content))

    def test_root_must_be_object(self):
        """A list is not a config."""
        self.assertEqual(self._fields("[1, 2]"), ["<root>"])

    def test_lemma_needs_delta(self):
        """closeness needs delta and n_list."""
        content = _config(experiment="ldp-verify", ldp={"lemma": "closeness"})
        self.assertEqual(sorted(self._fields(content)), ["ldp.delta", "n_list"])

    def test_unknown_optimizer_key(self):
        """optimizer keys are RateOptions fields."""
        content = _config(optimizer={"restarts": 2, "speed": 11})
        self.assertEqual(self._fields(content), ["optimizer.speed"])

    def test_unknown_mesh_key(self):
        """A misspelt mesh key is a violation, not a crash later on."""
        content = _config(mesh={"tau": 1.0, "stpes": 10})
        self.assertEqual(self._fields(content), ["mesh.stpes"])

    def test_m_R_values(self):
        """ldp.m_R is a non-negative number or a map from radius to one."""
        cases = [
            ("big", ["ldp.m_R"]),
            (-1.0, ["ldp.m_R"]),
            ({"2": "big"}, ["ldp.m_R.2"]),
            ({"wide": 1.0}, ["ldp.m_R"]),
        ]
        for m_R, fields in cases:
            for experiment, extra in (
                ("ldp-verify", {"ldp": {"lemma": "tightness", "m_R": m_R}}),
                ("rate", {"ldp": {"m_R": m_R}, "event": {"kind": "endpoint_ball", "center": 1}}),
            ):
                with self.subTest(m_R=m_R, experiment=experiment):
                    content = _config(experiment=experiment, R_list=[2.0], **extra)
                    self.assertEqual(self._fields(content), fields)

    def test_m_R_accepted(self):
        """Numbers and radius maps pass."""
        for m_R in (2.0, 0, {"2": 2.0, "4.5": 3}):
            with self.subTest(m_R=m_R):
                config = parse_config(
                    _config(
                        experiment="ldp-verify",
                        R_list=[2.0],
                        ldp={"lemma": "tightness", "m_R": m_R},
                    )
                )
                self.assertEqual(config.ldp["m_R"], m_R)

    def test_stroock_keys(self):
        """stroock.dim and stroock.steps are positive integers; other keys are unknown."""
        content = json.dumps(
            {
                "experiment": "stroock",
                "seed": 1,
                "stroock": {"A": 1, "B": 0, "R": 3, "T": 1, "dim": 0, "steps": "many", "C": 2},
            }
        )
        self.assertEqual(
            sorted(self._fields(content)), ["stroock.C", "stroock.dim", "stroock.steps"]
        )

    def test_validation_is_config_error(self):
        """Validation failures are config errors."""
        self.assertTrue(issubclass(ValidationError, ConfigError))


class TestParseErrors(unittest.TestCase):
    """Test syntax errors."""

    def test_position_reported(self):
        """Line and column of the offending token are 1-based."""
        with self.assertRaises(ParseError) as cm:
            parse_config('{"seed": 1,\n "experiment": [}')
        self.assertEqual(cm.exception.payload["line"], 2)
        self.assertIsNotNone(cm.exception.payload["column"])

    def test_not_utf8(self):
        """Undecodable bytes are a parse error."""
        with self.assertRaises(ParseError):
            parse_config(b'{"seed": "\xff"}')


class TestSerialisation(unittest.TestCase):
    """Test the canonical form and its digest."""

    def test_round_trip(self):
        """Parsing the canonical form gives the same config."""
        config = parse_config(
            _config(
                experiment="compare",
                coefficients={"preset": "ou", "params": {"theta": 2.0}},
                event={"kind": "endpoint_ball", "center": [1.0], "radius_delta": 0.01},
                optimizer={"restarts": 2},
                eps_list=[0.5, 0.25],
            )
        )
        self.assertEqual(parse_config(serialize_config(config)), config)

    def test_canonical_form(self):
        """Sorted keys, no whitespace."""
        text = serialize_config(parse_config(_config()))
        self.assertNotIn(" ", text)
        self.assertEqual(text, json.dumps(json.loads(text), sort_keys=True, separators=(",", ":")))

    def test_digest(self):
        """Equal configs share a digest; a different seed changes it."""
        first = config_digest(parse_config(_config()))
        self.assertEqual(first, config_digest(parse_config(_config())))
        self.assertNotEqual(first, config_digest(parse_config(_config(seed=43))))
        self.assertEqual(len(first), 64)


class TestCreateModel(unittest.TestCase):
    """Test the coefficient factory."""

    def test_preset_params(self):
        """Preset parameters reach the factory."""
        model = create_model({"preset": "ou", "params": {"theta": 2.0, "s": 0.5}})
        self.assertEqual(model.coeffs.name, "ou")
        self.assertEqual(model.affine.b.head[0, 0], -2.0)

    def test_inline(self):
        """The inline mini-language builds affine coefficients."""
        inline = {"dim": 1, "G": {"delayed": 0.3}, "b": {"head": -1}, "sigma": {"constant": 2}}
        model = create_model({"inline": inline})
        self.assertAlmostEqual(model.coeffs.kappa, 0.3)
        self.assertEqual(model.affine.sigma[0, 0], 2.0)

    def test_bad_params(self):
        """Unknown preset parameters are config errors."""
        with self.assertRaises(ConfigError):
            create_model({"preset": "ou", "params": {"speed": 1}})
