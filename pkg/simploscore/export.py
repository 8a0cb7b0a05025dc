"""
CSV and JSON output of analysis results.

Results are written as CSV through the L{ITabular} interface; adapters
for the result types are registered here. JSON output is written with
sorted keys so identical results give identical bytes.
"""
import csv
import json
from fractions import Fraction

from twisted.python.components import registerAdapter
from zope.interface import implementer

from .curvature import CurvatureReport, GaussBonnetSeries
from .errors import SchemaError
from .evolution import EvolutionSeries
from .isimploscore import ITabular
from .rational import FRACTION_PATTERN, format_fraction, format_real, to_fraction


def format_number(value):
    """
    Encode a number for a CSV cell.

    Integers and fractions are written exactly, floats by their shortest
    round-tripping representation and L{None} as an empty cell.

    @rtype: L{str}
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        raise TypeError("Refusing to encode a bool as a number")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return format_fraction(value)
    return format_real(value)


def parse_number(text):
    """
    Decode a CSV cell written by L{format_number}.

    @return: the value, L{None} for an empty cell
    @rtype: L{float} or L{None}
    """
    text = text.strip()
    if not text:
        return None
    if FRACTION_PATTERN.match(text):
        return float(to_fraction(text))
    return float(text)


@implementer(ITabular)
class EvolutionTable(object):
    """
    One row per step: counts, Betti numbers, chi, curvature means and totals.
    """
    def __init__(self, series):
        self.series = series

    def header(self):
        orders = range(self.series.dimension + 1)
        return (
            ["step", "t_norm"]
            + ["N{}".format(k) for k in orders]
            + ["beta{}".format(k) for k in orders]
            + ["euler", "euler_norm"]
            + ["meanF{}".format(p) for p in orders if p > 0]
            + ["sumKv", "sumKv_norm"]
        )

    def rows(self):
        series = self.series
        size = series.dimension + 1
        euler = series.euler_normalization()
        curvature = series.curvature_normalization()
        for step, t, chi_norm, kappa_norm in zip(series.steps, euler.t_norm, euler.values, curvature.values):
            topology = step.topology
            counts = list(topology.simplex_counts) + [0] * (size - len(topology.simplex_counts))
            betti = list(topology.betti) + [0] * (size - len(topology.betti))
            means = step.curvature.means
            yield (
                [format_number(step.step), format_number(t)]
                + [format_number(n) for n in counts]
                + [format_number(b) for b in betti]
                + [format_number(topology.euler), format_number(chi_norm)]
                + [format_number(means.get(p)) for p in range(1, size)]
                + [format_number(step.total_vertex_curvature), format_number(kappa_norm)]
            )


@implementer(ITabular)
class CurvatureTable(object):
    """
    One row per simplex; order 0 rows hold the vertex curvatures.
    """
    def __init__(self, report):
        self.report = report

    def header(self):
        return ["order", "simplex", "curvature"]

    def rows(self):
        for node, value in self.report.vertex_curvatures.items():
            yield ["0", str(node), format_number(value)]
        for order, values in sorted(self.report.per_order.items()):
            for simplex, value in values.items():
                yield [str(order), simplex.label(), format_number(value)]


@implementer(ITabular)
class GaussBonnetTable(object):
    """
    Pairs of chi and total vertex curvature.
    """
    def __init__(self, series):
        self.series = series

    def header(self):
        return ["euler", "sumKv"]

    def rows(self):
        for chi, kappa in zip(self.series.euler, self.series.total_curvature):
            yield [format_number(chi), format_number(kappa)]


registerAdapter(EvolutionTable, EvolutionSeries, ITabular)
registerAdapter(CurvatureTable, CurvatureReport, ITabular)
registerAdapter(GaussBonnetTable, GaussBonnetSeries, ITabular)


def write_csv(result, fout):
    """
    Write a result as CSV.

    @param result: anything adaptable to L{ITabular}
    @param fout: text stream to write to
    @type fout: file-like
    """
    table = ITabular(result)
    writer = csv.writer(fout, lineterminator="\n")
    writer.writerow(table.header())
    writer.writerows(table.rows())


def dump_json(data, fout):
    """
    Write JSON data with sorted keys and a trailing newline.

    @param data: the data, results are serialized through their C{to_json}
    @param fout: text stream to write to
    @type fout: file-like
    """
    if hasattr(data, "to_json"):
        data = data.to_json()
    json.dump(data, fout, sort_keys=True, indent=2, allow_nan=False)
    fout.write("\n")


def read_series_csv(fin, required=(), source=None):
    """
    Read numeric columns of a series CSV.

    @param fin: text stream to read from
    @type fin: file-like
    @param required: columns which must be present
    @type required: iterable of L{str}
    @param source: name of the input, used in error messages
    @type source: L{str}
    @return: column name to values, empty cells as L{None}
    @rtype: L{dict} of L{str} to L{list}
    @raises SchemaError: if a required column is missing
    """
    reader = csv.reader(fin)
    header = next(reader, [])
    for column in required:
        if column not in header:
            raise SchemaError(column, source)
    columns = {name: [] for name in header}
    for row in reader:
        if not row:
            continue
        for name, cell in zip(header, row):
            columns[name].append(parse_number(cell))
    return columns
