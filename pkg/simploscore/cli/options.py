"""
Command line options.

Every command has its own L{usage.Options} subclass. Parameters default to
L{None} so that values missing on the command line can be taken from the
config file; the real defaults live in L{simploscore.config.DEFAULTS}.
"""
from twisted.python import usage

from .. import config


_MIDI = [
    ["beats-per-measure", None, None, "Beats (quarter notes) per measure, overrides the time signature."],
    ["pickup-beats", None, None, "Length of the pickup measure in beats. [default: 0]"],
    ["epsilon-beats", None, None, "Onsets closer than this form one chord. [default: 1/16]"],
]

_ANALYSIS = [
    ["curvature", None, None, "Vertex curvature: forman_sum, forman_mean or angle_deficit. [default: forman_sum]"],
    ["tolerance", None, None, "Relative zero threshold of the spectral Betti numbers. [default: 1e-8]"],
]

_EVOLUTION = [
    ["mode", None, None, "cumulative or sliding. [default: cumulative]"],
    ["step-unit", None, None, "measure or element. [default: measure]"],
    ["window", None, None, "Sliding window width in steps. [default: 2]"],
    ["stride", None, None, "Sliding window advance in steps. [default: 1]"],
    ["min-plateau", None, None, "Shortest reported plateau in steps. [default: 2]"],
]

_FIT = [
    ["model", None, None, "linear, exp or poly:N. [default: report linear, exp and poly:4]"],
    ["x-column", None, None, "Column of the abscissae. [default: t_norm]"],
    ["y-column", None, None, "Column of the ordinates. [default: euler_norm]"],
]

_OUTPUT = [
    ["out", "o", None, "Output directory. [default: .]"],
    ["format", None, None, "Comma separated output formats: csv, json, svg."],
    ["jobs", "j", None, "Number of inputs processed concurrently. [default: 1]"],
    ["config", "c", None, "TOML config file."],
]

_CROSS_CHECK = [
    ["no-cross-check", None, "Skip the spectral cross-check of the Betti numbers."],
]

_PIN_OFFSET = [
    ["pin-offset", None, "Fit the exponential without offset (C = 0)."],
]


class _CommandOptions(usage.Options):
    """
    Options shared by all commands: input files and config resolution.

    @ivar run_config: the resolved configuration, set by L{postOptions}
    @type run_config: L{simploscore.config.RunConfig}
    """
    command = None
    optFlags = []

    def parseArgs(self, *inputs):
        if not inputs:
            raise usage.UsageError("no input file given")
        self["inputs"] = inputs

    def _allowed(self):
        names = {p[0] for p in self.optParameters if p[0] != "config"}
        flags = {f[0] for f in self.optFlags}
        if "no-cross-check" in flags:
            names.add("cross-check")
        if "pin-offset" in flags:
            names.add("pin-offset")
        return names

    def _cli_values(self):
        values = {}
        for parameter in self.optParameters:
            name = parameter[0]
            if name != "config" and self[name] is not None:
                values[name] = self[name]
        if self.get("no-cross-check"):
            values["cross-check"] = False
        if self.get("pin-offset"):
            values["pin-offset"] = True
        return values

    def postOptions(self):
        self.run_config = config.resolve(
            self.command,
            self["inputs"],
            self._cli_values(),
            self._allowed(),
            config_path=self["config"],
        )


class AnalyzeOptions(_CommandOptions):
    command = "analyze"
    synopsis = "[options] <midi file> [<midi file> ...]"
    optParameters = _OUTPUT + _MIDI + _ANALYSIS
    optFlags = _CROSS_CHECK


class EvolveOptions(_CommandOptions):
    command = "evolve"
    synopsis = "[options] <midi file> [<midi file> ...]"
    optParameters = _OUTPUT + _MIDI + _ANALYSIS + _EVOLUTION
    optFlags = _CROSS_CHECK


class FitOptions(_CommandOptions):
    command = "fit"
    synopsis = "[options] <series csv> [<series csv> ...]"
    optParameters = _OUTPUT + _FIT
    optFlags = _PIN_OFFSET


class GaussBonnetOptions(_CommandOptions):
    command = "gauss-bonnet"
    synopsis = "[options] <midi file> [<midi file> ...]"
    optParameters = _OUTPUT + _MIDI + _ANALYSIS + _EVOLUTION
    optFlags = _CROSS_CHECK


class PlotOptions(_CommandOptions):
    command = "plot"
    synopsis = "[options] <series csv> [<series csv> ...]"
    optParameters = _OUTPUT


class Options(usage.Options):
    """
    Top level options, dispatching to one command.
    """
    synopsis = "Usage: simploscore <command> [options] <input> [<input> ...]"
    subCommands = [
        ["analyze", None, AnalyzeOptions, "Topology and curvature of a whole piece."],
        ["evolve", None, EvolveOptions, "Step by step topology and curvature."],
        ["fit", None, FitOptions, "Fit trend models to a series column."],
        ["gauss-bonnet", None, GaussBonnetOptions, "Total curvature against Euler characteristic."],
        ["plot", None, PlotOptions, "Render a series CSV as SVG."],
    ]

    def postOptions(self):
        if self.subCommand is None:
            raise usage.UsageError("no command given")

    @property
    def run_config(self):
        return self.subOptions.run_config
