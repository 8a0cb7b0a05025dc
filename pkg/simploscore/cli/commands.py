"""
Implementations of the commands.

Each command processes a single input file and returns the paths it
wrote. Commands are synchronous; L{simploscore.cli.runner} runs them in
threads.
"""
import os

from twisted.logger import Logger

from ..complex import build_complex
from ..curvature import gauss_bonnet_series
from ..errors import DomainError, EmptyPieceError
from ..evolution import MEASURE, analyze_complex, run_evolution
from ..export import dump_json, read_series_csv, write_csv
from ..fitting import DEGENERATE_R2, default_models, fit_all, model_from_spec
from ..ingest import assign_measures, read_midi, read_note_csv
from ..plotting import plot_fit, plot_gauss_bonnet, plot_series
from ..rational import format_fraction
from ..score import detect_simultaneities


log = Logger()


def load_events(path, run_config):
    """
    Read the notes of a MIDI file or of a note table CSV.

    @return: the events and the meter (the command line meter wins)
    @raises EmptyPieceError: if there are no notes
    """
    if path.lower().endswith(".csv"):
        with open(path, newline="") as fin:
            events = read_note_csv(fin, source=path)
        meter = None
    else:
        events, meter = read_midi(path)
    if not events:
        raise EmptyPieceError(path)
    override = run_config.meter_override()
    if override is not None:
        meter = override
    return events, meter


def load_sequence(path, run_config, need_measures=True):
    """
    Read a piece and group its notes into musical elements.

    @param need_measures: fail if the measures can not be determined
    @type need_measures: L{bool}
    @return: the elements and the meter
    """
    events, meter = load_events(path, run_config)
    if meter is not None:
        events = assign_measures(events, meter, run_config.pickup_beats)
    elif need_measures and any(e.measure is None for e in events):
        raise DomainError("{}: no time signature found, pass --beats-per-measure".format(path))
    seq = detect_simultaneities(events, run_config.epsilon_beats)
    log.info("{path}: {notes} notes, {elements} elements", path=path, notes=len(events), elements=len(seq))
    return seq, meter


def _stem(path):
    return os.path.splitext(os.path.basename(path))[0]


class _Outputs(object):
    """
    Writes the output files of one input.
    """
    def __init__(self, run_config, path, suffix=""):
        self.run_config = run_config
        self.base = os.path.join(run_config.out, _stem(path) + suffix)
        self.written = []

    def wants(self, fmt):
        return fmt in self.run_config.formats

    def open(self, extension, binary=False):
        os.makedirs(self.run_config.out, exist_ok=True)
        name = "{}.{}".format(self.base, extension)
        self.written.append(name)
        if binary:
            return open(name, "wb")
        return open(name, "w", encoding="utf-8", newline="")

    def json(self, data, extension="json"):
        with self.open(extension) as fout:
            dump_json(data, fout)

    def csv(self, result, extension="csv"):
        with self.open(extension) as fout:
            write_csv(result, fout)


def _meter_json(meter):
    if meter is None:
        return None
    return {"beats_per_measure": format_fraction(meter.beats_per_measure), "source": meter.source}


def cmd_analyze(run_config, path):
    """
    Analyse the complex of a whole piece.

    Writes the topology, the curvature summary and the complex as JSON,
    and the curvature of every simplex as CSV.
    """
    seq, meter = load_sequence(path, run_config, need_measures=False)
    complex_ = build_complex(seq)
    result = analyze_complex(complex_, 0, run_config.evolution_config())
    outputs = _Outputs(run_config, path, ".analysis")
    if outputs.wants("json"):
        outputs.json({
            "source": os.path.basename(path),
            "meter": _meter_json(meter),
            "elements": len(seq),
            "dimension": complex_.dimension,
            "topology": result.topology.to_json(),
            "curvature": result.curvature.to_json(),
            "complex": complex_.to_json(),
        })
    if outputs.wants("csv"):
        outputs.csv(result.curvature, "curvature.csv")
    return outputs.written


def cmd_evolve(run_config, path):
    """
    Run a cumulative or sliding analysis and write the series.
    """
    seq, _ = load_sequence(path, run_config, need_measures=run_config.step_unit == MEASURE)
    series = run_evolution(seq, run_config.evolution_config())
    outputs = _Outputs(run_config, path, "." + run_config.mode)
    if outputs.wants("csv"):
        outputs.csv(series)
    if outputs.wants("json"):
        data = series.to_json(run_config.min_plateau)
        data["source"] = os.path.basename(path)
        outputs.json(data)
    if outputs.wants("svg"):
        euler = series.euler_normalization()
        curvature = series.curvature_normalization()
        with outputs.open("svg", binary=True) as fout:
            plot_series(
                euler.t_norm,
                {"euler_norm": euler.values, "sumKv_norm": curvature.values},
                fout,
                title="{} ({})".format(_stem(path), run_config.mode),
            )
    return outputs.written


def _paired(columns, x_column, y_column):
    pairs = [(x, y) for x, y in zip(columns[x_column], columns[y_column]) if x is not None and y is not None]
    return [p[0] for p in pairs], [p[1] for p in pairs]


def cmd_fit(run_config, path):
    """
    Fit trend models to two columns of a series CSV.
    """
    with open(path, newline="") as fin:
        columns = read_series_csv(fin, required=(run_config.x_column, run_config.y_column), source=path)
    x, y = _paired(columns, run_config.x_column, run_config.y_column)
    if run_config.model is None:
        models = default_models(pin_offset=run_config.pin_offset)
    else:
        models = [model_from_spec(run_config.model, pin_offset=run_config.pin_offset)]
    fits = fit_all(x, y, models)
    for fit in fits:
        if fit.flags:
            log.warn("{path}: {model} fit flagged {flags}", path=path, model=fit.model, flags=", ".join(fit.flags))
    outputs = _Outputs(run_config, path, ".fit")
    if outputs.wants("json"):
        outputs.json({
            "source": os.path.basename(path),
            "x_column": run_config.x_column,
            "y_column": run_config.y_column,
            "fits": [f.to_json() for f in fits],
            "degenerate": any(DEGENERATE_R2 in f.flags for f in fits),
        })
    if outputs.wants("svg"):
        with outputs.open("svg", binary=True) as fout:
            plot_fit(
                x, y, fits, {m.name: m for m in models}, fout,
                xlabel=run_config.x_column, ylabel=run_config.y_column,
            )
    return outputs.written


def cmd_gauss_bonnet(run_config, path):
    """
    Relate total vertex curvature to the Euler characteristic over time.
    """
    seq, _ = load_sequence(path, run_config, need_measures=run_config.step_unit == MEASURE)
    series = run_evolution(seq, run_config.evolution_config())
    gauss_bonnet = gauss_bonnet_series(series)
    outputs = _Outputs(run_config, path, ".gauss_bonnet")
    if outputs.wants("json"):
        data = gauss_bonnet.to_json()
        data["source"] = os.path.basename(path)
        data["curvature_mode"] = run_config.curvature
        outputs.json(data)
    if outputs.wants("csv"):
        outputs.csv(gauss_bonnet)
    if outputs.wants("svg"):
        with outputs.open("svg", binary=True) as fout:
            plot_gauss_bonnet(gauss_bonnet, fout)
    return outputs.written


def cmd_plot(run_config, path):
    """
    Render a series CSV written by L{cmd_evolve}.

    Normalized chi and curvature go into one figure, the Betti numbers
    into a second one when the table has them.
    """
    with open(path, newline="") as fin:
        columns = read_series_csv(fin, required=("t_norm",), source=path)
    t = columns["t_norm"]
    outputs = _Outputs(run_config, path)
    curves = {name: columns[name] for name in ("euler_norm", "sumKv_norm") if name in columns}
    with outputs.open("svg", binary=True) as fout:
        plot_series(t, curves, fout, title=_stem(path))
    betti = {name: columns[name] for name in sorted(columns) if name.startswith("beta")}
    if betti:
        with outputs.open("betti.svg", binary=True) as fout:
            plot_series(t, betti, fout, ylabel="Betti number", title=_stem(path))
    return outputs.written


COMMANDS = {
    "analyze": cmd_analyze,
    "evolve": cmd_evolve,
    "fit": cmd_fit,
    "gauss-bonnet": cmd_gauss_bonnet,
    "plot": cmd_plot,
}
