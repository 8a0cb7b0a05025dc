"""
Tests for L{simploscore.export}.
"""
import io
from fractions import Fraction

from twisted.trial import unittest

from simploscore.complex import SimplicialComplex
from simploscore.curvature import GaussBonnetSeries, curvature_report
from simploscore.errors import SchemaError
from simploscore.evolution import run_cumulative
from simploscore.export import dump_json, format_number, parse_number, read_series_csv, write_csv
from simploscore.isimploscore import ITabular
from simploscore.tests import shapes


class NumberTests(unittest.TestCase):
    """
    Tests for L{simploscore.export.format_number} and L{simploscore.export.parse_number}.
    """

    def test_format(self):
        """
        Integers and fractions are exact, missing values are empty.
        """
        self.assertEqual(format_number(-3), "-3")
        self.assertEqual(format_number(Fraction(2, 3)), "2/3")
        self.assertEqual(format_number(0.5), "0.5")
        self.assertEqual(format_number(None), "")
        self.assertRaises(TypeError, format_number, True)

    def test_parse(self):
        """
        Cells are read as floats, n/d included.
        """
        self.assertEqual(parse_number("2/4"), 0.5)
        self.assertEqual(parse_number("-1.25"), -1.25)
        self.assertIsNone(parse_number(" "))


class TableTests(unittest.TestCase):
    """
    Tests for the L{ITabular} adapters and L{simploscore.export.write_csv}.
    """

    def test_evolution_header(self):
        """
        The evolution table has columns for every order up to the largest
        dimension and pads earlier steps with zeros.
        """
        series = run_cumulative(shapes.sequence(shapes.REPEATED_THEMES))
        fout = io.StringIO()
        write_csv(series, fout)
        lines = fout.getvalue().splitlines()
        self.assertEqual(
            lines[0],
            "step,t_norm,N0,N1,N2,beta0,beta1,beta2,euler,euler_norm,meanF1,meanF2,sumKv,sumKv_norm",
        )
        self.assertEqual(len(lines), 33)
        first = lines[1].split(",")
        self.assertEqual(first[:8], ["0", "0.0", "2", "1", "0", "1", "0", "0"])
        self.assertEqual(first[11], "")

    def test_curvature_table(self):
        """
        Vertices come first as order 0, then every simplex.
        """
        report = curvature_report(SimplicialComplex.from_simplices([(0, 1, 2)]))
        self.assertEqual(len(list(ITabular(report).rows())), 3 + 3 + 1)
        fout = io.StringIO()
        write_csv(report, fout)
        lines = fout.getvalue().splitlines()
        self.assertEqual(lines[0], "order,simplex,curvature")
        self.assertEqual(lines[1], "0,0,6")
        self.assertEqual(lines[-1], "2,0-1-2,3")

    def test_gauss_bonnet_table(self):
        """
        The Gauss-Bonnet table pairs chi with the total curvature.
        """
        series = GaussBonnetSeries.from_pairs([1, 0, -1], [2, 0, -2], 3)
        fout = io.StringIO()
        write_csv(series, fout)
        self.assertEqual(fout.getvalue(), "euler,sumKv\n1,2.0\n0,0.0\n-1,-2.0\n")


class JsonTests(unittest.TestCase):
    """
    Tests for L{simploscore.export.dump_json}.
    """

    def test_sorted(self):
        """
        Keys are sorted and the output ends with a newline.
        """
        fout = io.StringIO()
        dump_json({"b": 1, "a": [1, 2]}, fout)
        self.assertEqual(fout.getvalue(), '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n')

    def test_nan(self):
        """
        NaN is not valid JSON.
        """
        self.assertRaises(ValueError, dump_json, {"x": float("nan")}, io.StringIO())

    def test_results(self):
        """
        Results are written through their JSON form.
        """
        fout = io.StringIO()
        dump_json(GaussBonnetSeries.from_pairs([1, 0, -1], [2, 0, -2], 3), fout)
        self.assertIn('"slope": 2.0', fout.getvalue())


class ReadSeriesTests(unittest.TestCase):
    """
    Tests for L{simploscore.export.read_series_csv}.
    """

    def test_columns(self):
        """
        Columns are read as floats, empty cells as None.
        """
        columns = read_series_csv(io.StringIO("t_norm,meanF2\n0,\n0.5,1/4\n"), required=("t_norm",))
        self.assertEqual(columns, {"t_norm": [0.0, 0.5], "meanF2": [None, 0.25]})

    def test_missing(self):
        """
        A missing required column names the column and the source.
        """
        e = self.assertRaises(
            SchemaError, read_series_csv, io.StringIO("a,b\n1,2\n"), ("euler_norm",), "s.csv",
        )
        self.assertEqual(e.column, "euler_norm")
