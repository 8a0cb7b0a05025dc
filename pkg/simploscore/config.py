"""
Run configuration of the command line interface.

Values come from three layers: command line flags, a TOML file and the
built-in defaults, in that order of precedence. In the TOML file,
top-level keys apply to every command and a table named after a command
overrides them for that command::

    beats-per-measure = "3"
    curvature = "angle_deficit"

    [evolve]
    mode = "sliding"
    window = 4

@var DEFAULTS: built-in default of every option
@type DEFAULTS: L{dict}
@var FORMATS: the supported output formats
"""
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Optional, Tuple

from twisted.python import usage

from .curvature import FORMAN_SUM, VERTEX_CURVATURES
from .errors import DomainError
from .evolution import (
    CUMULATIVE,
    DEFAULT_MIN_PLATEAU,
    DEFAULT_STRIDE,
    DEFAULT_WINDOW,
    MEASURE,
    MODES,
    STEP_UNITS,
    EvolutionConfig,
)
from .fitting import model_from_spec
from .homology import DEFAULT_TOLERANCE
from .ingest import CLI_OVERRIDE, MeterSpec
from .rational import to_fraction
from .score import DEFAULT_EPSILON_BEATS

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


FORMATS = ("csv", "json", "svg")

COMMANDS = ("analyze", "evolve", "fit", "gauss-bonnet", "plot")

DEFAULTS = {
    "beats-per-measure": None,
    "pickup-beats": Fraction(0),
    "epsilon-beats": DEFAULT_EPSILON_BEATS,
    "mode": CUMULATIVE,
    "step-unit": MEASURE,
    "window": DEFAULT_WINDOW,
    "stride": DEFAULT_STRIDE,
    "curvature": FORMAN_SUM,
    "tolerance": DEFAULT_TOLERANCE,
    "cross-check": True,
    "min-plateau": DEFAULT_MIN_PLATEAU,
    "model": None,
    "pin-offset": False,
    "x-column": "t_norm",
    "y-column": "euler_norm",
    "out": ".",
    "format": None,
    "jobs": 1,
}

DEFAULT_FORMATS = {
    "analyze": frozenset(["json"]),
    "evolve": frozenset(["csv", "json"]),
    "fit": frozenset(["json"]),
    "gauss-bonnet": frozenset(["json", "svg"]),
    "plot": frozenset(["svg"]),
}


def _fraction(name, value, minimum=None, strict=False):
    if isinstance(value, float):
        value = repr(value)
    try:
        value = to_fraction(value)
    except (TypeError, ValueError):
        raise usage.UsageError("--{} expects a rational number, got {!r}".format(name, value))
    if minimum is not None and (value < minimum or (strict and value == minimum)):
        raise usage.UsageError("--{} must be {} {}".format(name, ">" if strict else ">=", minimum))
    return value


def _integer(name, value, minimum):
    if isinstance(value, bool):
        raise usage.UsageError("--{} expects an integer, got {!r}".format(name, value))
    try:
        value = int(value)
    except (TypeError, ValueError):
        raise usage.UsageError("--{} expects an integer, got {!r}".format(name, value))
    if value < minimum:
        raise usage.UsageError("--{} must be at least {}, got {}".format(name, minimum, value))
    return value


def _choice(name, value, choices):
    if value not in choices:
        raise usage.UsageError("--{} must be one of {}, got {!r}".format(name, ", ".join(choices), value))
    return value


def _positive_float(name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise usage.UsageError("--{} expects a number, got {!r}".format(name, value))
    if not value > 0:
        raise usage.UsageError("--{} must be positive".format(name))
    return value


def _boolean(name, value):
    if not isinstance(value, bool):
        raise usage.UsageError("{} expects true or false, got {!r}".format(name, value))
    return value


def _formats(value):
    if isinstance(value, str):
        value = value.split(",")
    formats = frozenset(f.strip().lower() for f in value if f.strip())
    unknown = formats.difference(FORMATS)
    if unknown:
        raise usage.UsageError("unknown output format(s): {}".format(", ".join(sorted(unknown))))
    if not formats:
        raise usage.UsageError("--format needs at least one of {}".format(", ".join(FORMATS)))
    return formats


def _model(value):
    if value is None:
        return None
    try:
        model_from_spec(value)
    except DomainError as e:
        raise usage.UsageError(str(e))
    return value.strip().lower()


@dataclass(frozen=True)
class RunConfig:
    """
    The resolved options of one invocation.

    @ivar beats_per_measure: meter override, L{None} to use the MIDI meta data
    @ivar model: fit model name, L{None} to fit all default models
    @ivar formats: output formats to write
    """
    command: str
    inputs: Tuple[str, ...]
    beats_per_measure: Optional[Fraction] = None
    pickup_beats: Fraction = Fraction(0)
    epsilon_beats: Fraction = DEFAULT_EPSILON_BEATS
    mode: str = CUMULATIVE
    step_unit: str = MEASURE
    window: int = DEFAULT_WINDOW
    stride: int = DEFAULT_STRIDE
    curvature: str = FORMAN_SUM
    tolerance: float = DEFAULT_TOLERANCE
    cross_check: bool = True
    min_plateau: int = DEFAULT_MIN_PLATEAU
    model: Optional[str] = None
    pin_offset: bool = False
    x_column: str = "t_norm"
    y_column: str = "euler_norm"
    out: str = "."
    formats: FrozenSet[str] = frozenset(["json"])
    jobs: int = 1

    def meter_override(self):
        """
        Return the meter given on the command line, if any.

        @rtype: L{simploscore.ingest.MeterSpec} or L{None}
        """
        if self.beats_per_measure is None:
            return None
        return MeterSpec(self.beats_per_measure, CLI_OVERRIDE)

    def evolution_config(self):
        """
        @rtype: L{simploscore.evolution.EvolutionConfig}
        """
        return EvolutionConfig(
            mode=self.mode,
            step_unit=self.step_unit,
            window=self.window,
            stride=self.stride,
            curvature_mode=self.curvature,
            tolerance=self.tolerance,
            cross_check=self.cross_check,
        )


def load_toml(path):
    """
    Read a TOML configuration file.

    @param path: the file
    @type path: L{str}
    @rtype: L{dict}
    @raises usage.UsageError: if the file is missing or invalid
    """
    try:
        with open(path, "rb") as fin:
            return tomllib.load(fin)
    except OSError as e:
        raise usage.UsageError("cannot read config file {}: {}".format(path, e.strerror or e))
    except tomllib.TOMLDecodeError as e:
        raise usage.UsageError("invalid config file {}: {}".format(path, e))


def _normalize_key(key):
    return key.replace("_", "-").lower()


def select_values(data, command, allowed):
    """
    Collect the configuration values which apply to a command.

    Top-level keys for options the command does not have are ignored, keys
    in the command's table must belong to the command.

    @param data: the parsed TOML document
    @type data: L{dict}
    @param command: the command name
    @type command: L{str}
    @param allowed: option names of the command
    @type allowed: L{set} of L{str}
    @rtype: L{dict}
    @raises usage.UsageError: on an unknown key
    """
    values = {}
    table = {}
    for key, value in data.items():
        if isinstance(value, dict):
            if key not in COMMANDS:
                raise usage.UsageError("unknown config table [{}]".format(key))
            if key == command:
                table = value
            continue
        name = _normalize_key(key)
        if name not in DEFAULTS:
            raise usage.UsageError("unknown config key {!r}".format(key))
        if name in allowed:
            values[name] = value
    for key, value in table.items():
        name = _normalize_key(key)
        if name not in allowed:
            raise usage.UsageError("unknown config key {!r} in [{}]".format(key, command))
        values[name] = value
    return values


def resolve(command, inputs, cli_values, allowed, config_path=None):
    """
    Merge defaults, the config file and the command line into a L{RunConfig}.

    @param command: the command name
    @type command: L{str}
    @param inputs: input paths
    @type inputs: L{tuple} of L{str}
    @param cli_values: option values given on the command line
    @type cli_values: L{dict}
    @param allowed: option names of the command
    @type allowed: L{set} of L{str}
    @param config_path: TOML file, if any
    @type config_path: L{str} or L{None}
    @rtype: L{RunConfig}
    @raises usage.UsageError: on invalid values
    """
    merged = dict(DEFAULTS)
    if config_path is not None:
        merged.update(select_values(load_toml(config_path), command, allowed))
    merged.update(cli_values)

    bpm = merged["beats-per-measure"]
    return RunConfig(
        command=command,
        inputs=tuple(inputs),
        beats_per_measure=None if bpm is None else _fraction("beats-per-measure", bpm, 0, strict=True),
        pickup_beats=_fraction("pickup-beats", merged["pickup-beats"], 0),
        epsilon_beats=_fraction("epsilon-beats", merged["epsilon-beats"], 0),
        mode=_choice("mode", merged["mode"], MODES),
        step_unit=_choice("step-unit", merged["step-unit"], STEP_UNITS),
        window=_integer("window", merged["window"], 1),
        stride=_integer("stride", merged["stride"], 1),
        curvature=_choice("curvature", merged["curvature"], sorted(VERTEX_CURVATURES)),
        tolerance=_positive_float("tolerance", merged["tolerance"]),
        cross_check=_boolean("cross-check", merged["cross-check"]),
        min_plateau=_integer("min-plateau", merged["min-plateau"], 2),
        model=_model(merged["model"]),
        pin_offset=_boolean("pin-offset", merged["pin-offset"]),
        x_column=str(merged["x-column"]),
        y_column=str(merged["y-column"]),
        out=str(merged["out"]),
        formats=DEFAULT_FORMATS[command] if merged["format"] is None else _formats(merged["format"]),
        jobs=_integer("jobs", merged["jobs"], 1),
    )
