"""
Parsing, validation and canonical serialisation of experiment configs.

Configs are JSON-syntax documents; JSON is a subset of YAML, so they go through the YAML
safe loader, which reports line and column of syntax errors. Validation collects every
violation before raising :class:`~neutralldp._errors.ValidationError`.
"""

import hashlib
import json
import re

import attr
import yaml

from .._errors import ParseError, ValidationError
from ..rate.events import KINDS
from ..rate.optimizer import RateOptions
from .presets import coefficient_violations

try:
    from yaml import CSafeLoader as SafeLoader
except ImportError:
    from yaml import SafeLoader


class JSONLoader(SafeLoader):
    """Safe loader that also reads exponent floats without a dot, such as 1e-12."""


JSONLoader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"^[-+]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)[eE][-+]?[0-9]+$"),
    list("-+0123456789."),
)

EXPERIMENTS = (
    "simulate",
    "skeleton",
    "rate",
    "check-assumptions",
    "ldp-verify",
    "stroock",
    "compare",
)

LEMMAS = ("closeness", "tightness", "truncation")
ASSUMPTIONS = ("H1", "H2", "H3")
RATE_SOURCES = ("optimizer", "oracle")
STROOCK_KEYS = ("A", "B", "R", "T", "dim", "steps")

DEFAULT_MESH = {"tau": 1.0, "horizon_T": 1.0, "steps_per_tau": 100}
DEFAULT_SAMPLES = 100_000
DEFAULT_TRIALS = 1000
DEFAULT_TOLERANCES = {"fixed_point_tol": 1e-12, "max_iter": 200}
OPTIMIZER_KEYS = tuple(field.name for field in attr.fields(RateOptions))

SEED_MAX = (1 << 64) - 1


@attr.s(frozen=True, slots=True)
class ExperimentConfig:
    """A validated experiment config with defaults filled in."""

    experiment = attr.ib()
    seed = attr.ib()
    coefficients = attr.ib(default=None)
    mesh = attr.ib(factory=lambda: dict(DEFAULT_MESH))
    initial = attr.ib(default=0.0)
    control = attr.ib(default=0.0)
    eps_list = attr.ib(default=(), converter=tuple)
    n_list = attr.ib(default=(), converter=tuple)
    R_list = attr.ib(default=(), converter=tuple)
    samples = attr.ib(default=DEFAULT_SAMPLES)
    output_path = attr.ib(default=None)
    tolerances = attr.ib(factory=lambda: dict(DEFAULT_TOLERANCES))
    event = attr.ib(default=None)
    optimizer = attr.ib(factory=dict)
    rate_source = attr.ib(default="optimizer")
    ldp = attr.ib(factory=dict)
    stroock = attr.ib(factory=dict)
    assumptions = attr.ib(default=ASSUMPTIONS, converter=tuple)
    trials = attr.ib(default=DEFAULT_TRIALS)

    def to_dict(self):
        data = attr.asdict(self, recurse=False)
        for key in ("eps_list", "n_list", "R_list", "assumptions"):
            data[key] = list(data[key])
        return data


FIELDS = tuple(field.name for field in attr.fields(ExperimentConfig))


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def _is_vector(value):
    return _is_number(value) or (
        isinstance(value, list) and value and all(_is_number(v) for v in value)
    )


class _Validator:
    def __init__(self, data):
        self.data = data
        self.violations = []

    def fail(self, field, message):
        self.violations.append({"field": field, "message": message})

    def numbers(self, field, positive=False, non_negative=False, integer=False, required=False):
        values = self.data.get(field, [])
        if not isinstance(values, list):
            self.fail(field, "must be a list")
            return
        if required and not values:
            self.fail(field, f"must be non-empty for experiment {self.data.get('experiment')!r}")
        for value in values:
            if not (_is_int(value) if integer else _is_number(value)):
                self.fail(field, f"{value!r} is not {'an integer' if integer else 'a number'}")
            elif positive and not value > 0:
                self.fail(field, f"{value!r} must be positive")
            elif non_negative and value < 0:
                self.fail(field, f"{value!r} must be non-negative")

    def section(self, field, required, numeric=()):
        section = self.data.get(field, {})
        if not isinstance(section, dict):
            self.fail(field, "must be an object")
            return {}
        for key in required:
            if key not in section:
                self.fail(f"{field}.{key}", "is required")
        for key in numeric:
            if key in section and not _is_number(section[key]):
                self.fail(f"{field}.{key}", "must be a number")
        return section


def _is_radius(key):
    try:
        return float(key) > 0
    except (TypeError, ValueError):
        return False


def _check_m_R(check, m_R):
    """``ldp.m_R`` is absent, a non-negative number, or a map from R to one."""
    if m_R is None:
        return
    if not isinstance(m_R, dict):
        if not (_is_number(m_R) and m_R >= 0):
            check.fail("ldp.m_R", "must be a non-negative number or a map from R to numbers")
        return
    for radius, value in m_R.items():
        if not _is_radius(radius):
            check.fail("ldp.m_R", f"key {radius!r} is not a positive radius")
        elif not (_is_number(value) and value >= 0):
            check.fail(f"ldp.m_R.{radius}", "must be a non-negative number")


def _validate(data):
    check = _Validator(data)

    unknown = set(data) - set(FIELDS)
    for key in sorted(unknown):
        check.fail(key, "unknown key")

    experiment = data.get("experiment")
    if experiment is None:
        check.fail("experiment", "is required")
    elif experiment not in EXPERIMENTS:
        check.fail("experiment", f"must be one of {', '.join(EXPERIMENTS)}")

    seed = data.get("seed")
    if seed is None:
        check.fail("seed", "is required")
    elif not _is_int(seed) or not 0 <= seed <= SEED_MAX:
        check.fail("seed", "must be an integer in [0, 2^64)")

    if experiment != "stroock":
        if "coefficients" not in data:
            check.fail("coefficients", "is required")
        else:
            check.violations.extend(coefficient_violations(data["coefficients"]))

    mesh = check.section("mesh", (), ("tau", "horizon_T", "steps_per_tau"))
    for key in sorted(set(mesh) - set(DEFAULT_MESH)):
        check.fail(f"mesh.{key}", "unknown key")
    for key in ("tau", "horizon_T", "steps_per_tau"):
        if _is_number(mesh.get(key)) and not mesh[key] > 0:
            check.fail(f"mesh.{key}", "must be positive")
    if "steps_per_tau" in mesh and not _is_int(mesh["steps_per_tau"]):
        check.fail("mesh.steps_per_tau", "must be an integer")

    for key in ("initial", "control"):
        if key in data and not _is_vector(data[key]):
            check.fail(key, "must be a number or a list of numbers")

    if "samples" in data and not (_is_int(data["samples"]) and data["samples"] >= 1):
        check.fail("samples", "must be a positive integer")
    if "trials" in data and not (_is_int(data["trials"]) and data["trials"] >= 1):
        check.fail("trials", "must be a positive integer")
    if data.get("output_path") is not None and not isinstance(data["output_path"], str):
        check.fail("output_path", "must be a string")
    if data.get("rate_source", "optimizer") not in RATE_SOURCES:
        check.fail("rate_source", f"must be one of {', '.join(RATE_SOURCES)}")

    tolerances = check.section("tolerances", (), ("fixed_point_tol", "max_iter"))
    for key in sorted(set(tolerances) - set(DEFAULT_TOLERANCES)):
        check.fail(f"tolerances.{key}", "unknown key")

    optimizer = check.section("optimizer", ())
    for key in sorted(set(optimizer) - set(OPTIMIZER_KEYS)):
        check.fail(f"optimizer.{key}", "unknown key")

    assumptions = data.get("assumptions", list(ASSUMPTIONS))
    if not isinstance(assumptions, list) or not set(assumptions) <= set(ASSUMPTIONS):
        check.fail("assumptions", f"must be a list drawn from {', '.join(ASSUMPTIONS)}")

    ldp = data.get("ldp", {}) if experiment == "ldp-verify" else {}
    if not isinstance(ldp, dict):
        ldp = {}
    eps_positive = experiment in ("ldp-verify", "compare")
    check.numbers(
        "eps_list",
        positive=eps_positive,
        non_negative=not eps_positive,
        required=experiment in ("simulate", "ldp-verify", "compare"),
    )
    check.numbers(
        "n_list",
        positive=True,
        integer=True,
        required=experiment == "skeleton" or ldp.get("lemma") == "closeness",
    )
    check.numbers(
        "R_list", positive=True, required=ldp.get("lemma") in ("tightness", "truncation")
    )

    if experiment in ("rate", "compare"):
        if data.get("event") is None:
            check.fail("event", "is required")
        else:
            event = check.section("event", ("kind", "center"), ("radius_delta",))
            if "kind" in event and event["kind"] not in KINDS:
                check.fail("event.kind", f"must be one of {', '.join(KINDS)}")
            if "radius_delta" in event and _is_number(event["radius_delta"]):
                if not event["radius_delta"] > 0:
                    check.fail("event.radius_delta", "must be positive")
            if "center" in event and not _is_vector(event["center"]):
                check.fail("event.center", "must be a number or a list of numbers")

    if experiment == "ldp-verify":
        ldp = check.section("ldp", ("lemma",), ("delta",))
        if "lemma" in ldp and ldp["lemma"] not in LEMMAS:
            check.fail("ldp.lemma", f"must be one of {', '.join(LEMMAS)}")
        if ldp.get("lemma") in ("closeness", "truncation") and "delta" not in ldp:
            check.fail("ldp.delta", "is required")

    if experiment == "rate":
        ldp = check.section("ldp", ())
    if experiment in ("rate", "ldp-verify"):
        _check_m_R(check, ldp.get("m_R"))

    if experiment == "stroock":
        stroock = check.section("stroock", ("A", "B", "R", "T"), ("A", "B", "R", "T"))
        for key in sorted(set(stroock) - set(STROOCK_KEYS)):
            check.fail(f"stroock.{key}", "unknown key")
        for key in ("dim", "steps"):
            if key in stroock and not (_is_int(stroock[key]) and stroock[key] >= 1):
                check.fail(f"stroock.{key}", "must be a positive integer")

    if check.violations:
        raise ValidationError(check.violations)


def _mark(error):
    mark = getattr(error, "problem_mark", None)
    if mark is None:
        return None, None
    return mark.line + 1, mark.column + 1


def _load(content):
    if isinstance(content, bytes):
        try:
            content = content.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"config is not UTF-8: {e}")
    try:
        return yaml.load(content, Loader=JSONLoader)
    except yaml.YAMLError as e:
        line, column = _mark(e)
        problem = getattr(e, "problem", None) or "config is not valid JSON"
        raise ParseError(problem, line=line, column=column)


def parse_config(content):
    """
    Parse and validate config bytes (or text).

    :raises ParseError: if the content is not a JSON-syntax document
    :raises ValidationError: listing every schema violation
    """
    data = _load(content)
    if not isinstance(data, dict):
        raise ValidationError([{"field": "<root>", "message": "config must be an object"}])
    _validate(data)

    values = {key: data[key] for key in FIELDS if key in data and data[key] is not None}
    mesh = dict(DEFAULT_MESH)
    mesh.update(values.get("mesh", {}))
    values["mesh"] = mesh
    tolerances = dict(DEFAULT_TOLERANCES)
    tolerances.update(values.get("tolerances", {}))
    values["tolerances"] = tolerances
    if "event" in values:
        values["event"] = {"radius_delta": 1e-3, "normal": None, **values["event"]}
    return ExperimentConfig(**values)


def serialize_config(config):
    """Canonical JSON: sorted keys, no whitespace, shortest round-trip floats."""
    return json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"), allow_nan=False)


def config_digest(config):
    return hashlib.sha256(serialize_config(config).encode("utf-8")).hexdigest()


def load_config(path):
    """Read and parse the config file at ``path``."""
    with open(path, "rb") as f:
        return parse_config(f.read())
