"""
Tests for L{simploscore.cli}.
"""
import io
import json
import os

from twisted.internet import defer, reactor
from twisted.trial import unittest

from simploscore.cli import run
from simploscore.cli.runner import run_job
from simploscore.config import RunConfig
from simploscore.errors import ConsistencyError
from simploscore.ingest import assign_measures, parse_midi, write_note_csv
from simploscore.tests import shapes


class RunTests(unittest.TestCase):
    """
    Tests for L{simploscore.cli.run}.
    """

    def setUp(self):
        self.tmp = self.mktemp()
        os.makedirs(self.tmp)
        self.out = os.path.join(self.tmp, "out")
        self.stderr = io.StringIO()

    def _file(self, name, data):
        path = os.path.join(self.tmp, name)
        mode = "wb" if isinstance(data, bytes) else "w"
        with open(path, mode) as fout:
            fout.write(data)
        return path

    def _midi(self, name="themes.mid", measures=shapes.REPEATED_THEMES, **kwargs):
        return self._file(name, shapes.midi_bytes(shapes.measure_notes(measures), **kwargs))

    def _json(self, name):
        with open(os.path.join(self.out, name)) as fin:
            return json.load(fin)

    @defer.inlineCallbacks
    def _cli(self, *argv):
        code = yield run(reactor, list(argv), stderr=self.stderr)
        defer.returnValue(code)

    @defer.inlineCallbacks
    def test_analyze(self):
        """
        analyze writes the topology of the whole piece.
        """
        path = self._midi()
        code = yield self._cli("analyze", "-o", self.out, "--format", "json,csv", path)
        self.assertEqual(code, 0)
        data = self._json("themes.analysis.json")
        self.assertEqual(data["topology"]["euler"], -12)
        self.assertEqual(data["topology"]["counts"][0], 18)
        self.assertEqual(data["meter"], {"beats_per_measure": "4", "source": "midi_meta"})
        self.assertTrue(os.path.exists(os.path.join(self.out, "themes.analysis.curvature.csv")))

    @defer.inlineCallbacks
    def test_evolve(self):
        """
        evolve reports the normalized series and its plateaus.
        """
        path = self._midi()
        code = yield self._cli("evolve", "-o", self.out, "--format", "csv,json,svg", path)
        self.assertEqual(code, 0)
        data = self._json("themes.cumulative.json")
        self.assertEqual(data["plateaus"], [[8, 15], [24, 31]])
        self.assertEqual([s["euler"] for s in data["steps"]], shapes.REPEATED_THEMES_EULER)
        with open(os.path.join(self.out, "themes.cumulative.csv")) as fin:
            header = fin.readline().strip().split(",")
        self.assertEqual(header[:2], ["step", "t_norm"])
        self.assertIn("euler_norm", header)
        self.assertTrue(os.path.exists(os.path.join(self.out, "themes.cumulative.svg")))

    @defer.inlineCallbacks
    def test_evolve_then_fit_and_plot(self):
        """
        The series written by evolve can be fitted and plotted.
        """
        path = self._midi()
        yield self._cli("evolve", "-o", self.out, "--format", "csv", path)
        series = os.path.join(self.out, "themes.cumulative.csv")
        code = yield self._cli("fit", "-o", self.out, "--model", "linear", series)
        self.assertEqual(code, 0)
        data = self._json("themes.cumulative.fit.json")
        self.assertEqual([f["model"] for f in data["fits"]], ["linear"])
        self.assertTrue(data["fits"][0]["params"][0] < 0)
        code = yield self._cli("plot", "-o", self.out, series)
        self.assertEqual(code, 0)
        self.assertTrue(os.path.exists(os.path.join(self.out, "themes.cumulative.svg")))
        self.assertTrue(os.path.exists(os.path.join(self.out, "themes.cumulative.betti.svg")))

    @defer.inlineCallbacks
    def test_sliding(self):
        """
        Sliding windows give one step per window start.
        """
        path = self._midi()
        code = yield self._cli(
            "evolve", "-o", self.out, "--format", "json", "--mode", "sliding", "--window", "4", path,
        )
        self.assertEqual(code, 0)
        self.assertEqual(len(self._json("themes.sliding.json")["steps"]), 29)

    @defer.inlineCallbacks
    def test_invalid_window(self):
        """
        An invalid window is a usage error.
        """
        path = self._midi()
        code = yield self._cli("evolve", "--window", "0", path)
        self.assertEqual(code, 2)
        self.assertIn("error: --window", self.stderr.getvalue())

    @defer.inlineCallbacks
    def test_window_too_long(self):
        """
        A window longer than the piece is a data error.
        """
        path = self._midi()
        code = yield self._cli("evolve", "-o", self.out, "--mode", "sliding", "--window", "40", path)
        self.assertEqual(code, 1)

    @defer.inlineCallbacks
    def test_empty_midi(self):
        """
        A MIDI file without notes is a data error.
        """
        path = self._midi("empty.mid", measures=[])
        code = yield self._cli("analyze", "-o", self.out, path)
        self.assertEqual(code, 1)

    @defer.inlineCallbacks
    def test_missing_meter(self):
        """
        Without a time signature evolve needs --beats-per-measure.
        """
        path = self._midi(time_signature=None)
        code = yield self._cli("evolve", "-o", self.out, "--format", "json", path)
        self.assertEqual(code, 1)
        code = yield self._cli(
            "evolve", "-o", self.out, "--format", "json", "--beats-per-measure", "4", path,
        )
        self.assertEqual(code, 0)

    @defer.inlineCallbacks
    def test_not_midi(self):
        """
        A file which is not MIDI is a data error.
        """
        path = self._file("noise.mid", b"not a midi file at all")
        code = yield self._cli("analyze", "-o", self.out, path)
        self.assertEqual(code, 1)

    @defer.inlineCallbacks
    def test_fit_linear_series(self):
        """
        A noiseless linear series is fitted exactly.
        """
        rows = ["t_norm,euler_norm"]
        for i in range(11):
            t = i / 10.0
            rows.append("{!r},{!r}".format(t, -1.05 * t + 0.96))
        path = self._file("line.csv", "\n".join(rows) + "\n")
        code = yield self._cli("fit", "-o", self.out, "--format", "json,svg", path)
        self.assertEqual(code, 0)
        data = self._json("line.fit.json")
        self.assertEqual(
            [f["model"] for f in data["fits"]], ["linear", "exponential", "poly_4"],
        )
        slope, intercept = data["fits"][0]["params"]
        self.assertAlmostEqual(slope, -1.05, delta=1e-9)
        self.assertAlmostEqual(intercept, 0.96, delta=1e-9)
        self.assertFalse(data["degenerate"])
        self.assertTrue(os.path.exists(os.path.join(self.out, "line.fit.svg")))

    @defer.inlineCallbacks
    def test_fit_quartic(self):
        """
        poly:4 recovers the coefficients of a sampled quartic.
        """
        coefficients = (-12.87, 22.68, -10.56, -0.36, 1.02)
        rows = ["t_norm,euler_norm"]
        for i in range(21):
            t = i / 20.0
            y = sum(c * t ** (4 - k) for k, c in enumerate(coefficients))
            rows.append("{!r},{!r}".format(t, y))
        path = self._file("quartic.csv", "\n".join(rows) + "\n")
        code = yield self._cli("fit", "-o", self.out, "--model", "poly:4", path)
        self.assertEqual(code, 0)
        fit = self._json("quartic.fit.json")["fits"][0]
        self.assertEqual(fit["model"], "poly_4")
        for found, expected in zip(fit["params"], coefficients):
            self.assertAlmostEqual(found, expected, delta=1e-6)
        self.assertTrue(fit["r2"] >= 0.9999)

    @defer.inlineCallbacks
    def test_fit_missing_column(self):
        """
        A series without the requested column is a data error.
        """
        path = self._file("short.csv", "t_norm,other\n0,1\n1,2\n")
        code = yield self._cli("fit", "-o", self.out, path)
        self.assertEqual(code, 1)

    @defer.inlineCallbacks
    def test_gauss_bonnet(self):
        """
        With angle deficits the total curvature equals chi, slope 1.
        """
        path = self._midi()
        code = yield self._cli(
            "gauss-bonnet", "-o", self.out, "--format", "json,csv", "--curvature", "angle_deficit", path,
        )
        self.assertEqual(code, 0)
        data = self._json("themes.gauss_bonnet.json")
        self.assertTrue(data["slope_defined"])
        self.assertAlmostEqual(data["slope"], 1.0, delta=1e-9)
        self.assertEqual(data["node_count"], 18)
        self.assertAlmostEqual(data["alpha"], 1 / 18.0)
        self.assertEqual(data["curvature_mode"], "angle_deficit")

    @defer.inlineCallbacks
    def test_gauss_bonnet_constant(self):
        """
        A piece whose chi never changes has no defined slope.
        """
        path = self._midi("drone.mid", measures=[[(60,)]] * 4)
        code = yield self._cli("gauss-bonnet", "-o", self.out, "--format", "json", path)
        self.assertEqual(code, 0)
        data = self._json("drone.gauss_bonnet.json")
        self.assertFalse(data["slope_defined"])
        self.assertIsNone(data["slope"])

    @defer.inlineCallbacks
    def test_note_table_input(self):
        """
        A note table CSV is accepted in place of a MIDI file.
        """
        events, meter = parse_midi(shapes.midi_bytes(shapes.measure_notes(shapes.THEME_A)))
        fout = io.StringIO()
        write_note_csv(assign_measures(events, meter), fout)
        path = self._file("notes.csv", fout.getvalue())
        code = yield self._cli("evolve", "-o", self.out, "--format", "json", path)
        self.assertEqual(code, 0)
        data = self._json("notes.cumulative.json")
        self.assertEqual([s["euler"] for s in data["steps"]], shapes.REPEATED_THEMES_EULER[:8])

    @defer.inlineCallbacks
    def test_several_inputs(self):
        """
        The worst exit code of all inputs is returned.
        """
        good = self._midi()
        bad = self._midi("empty.mid", measures=[])
        code = yield self._cli("analyze", "-o", self.out, "-j", "2", good, bad)
        self.assertEqual(code, 1)
        self.assertTrue(os.path.exists(os.path.join(self.out, "themes.analysis.json")))

    @defer.inlineCallbacks
    def test_plot_series_csv(self):
        """
        plot draws a series CSV which was not written by evolve.
        """
        rows = ["step,t_norm,euler_norm"]
        for i in range(6):
            rows.append("{},{!r},{!r}".format(i, i / 5.0, 1.0 - i / 5.0))
        path = self._file("series.csv", "\n".join(rows) + "\n")
        code = yield self._cli("plot", "-o", self.out, path)
        self.assertEqual(code, 0)
        self.assertTrue(os.path.exists(os.path.join(self.out, "series.svg")))

    @defer.inlineCallbacks
    def test_reproducible(self):
        """
        Running a command twice on the same input writes identical bytes.
        """
        path = self._midi()
        outs = [os.path.join(self.tmp, "first"), os.path.join(self.tmp, "second")]
        for out in outs:
            code = yield self._cli("evolve", "-o", out, "--format", "csv,json,svg", path)
            self.assertEqual(code, 0)
            code = yield self._cli("gauss-bonnet", "-o", out, "--format", "csv,json", path)
            self.assertEqual(code, 0)
        names = sorted(os.listdir(outs[0]))
        self.assertEqual(names, sorted(os.listdir(outs[1])))
        self.assertIn("themes.cumulative.svg", names)
        for name in names:
            with open(os.path.join(outs[0], name), "rb") as first:
                with open(os.path.join(outs[1], name), "rb") as second:
                    self.assertEqual(first.read(), second.read(), name)


def _inconsistent(run_config, path):
    raise ConsistencyError("Betti numbers disagree at step 0")


def _broken(run_config, path):
    raise OSError("disk full")


class RunJobTests(unittest.TestCase):
    """
    Tests for L{simploscore.cli.runner.run_job}.
    """

    @defer.inlineCallbacks
    def test_consistency_error(self):
        """
        A failed consistency check exits with code 3.
        """
        code = yield run_job(_inconsistent, RunConfig(command="analyze", inputs=("x.mid",)), "x.mid")
        self.assertEqual(code, 3)

    @defer.inlineCallbacks
    def test_os_error(self):
        """
        An I/O error is a data error.
        """
        code = yield run_job(_broken, RunConfig(command="analyze", inputs=("x.mid",)), "x.mid")
        self.assertEqual(code, 1)
