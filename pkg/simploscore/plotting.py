"""
SVG figures of analysis results.

Figures are drawn on the headless Agg canvas. SVG ids are derived from a
fixed hash salt and the date metadata is left out, so equal data gives
equal files.

@var SVG_HASHSALT: salt of the SVG element ids
"""
import matplotlib
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure
import numpy as np


SVG_HASHSALT = "simploscore"

_SVG_METADATA = {"Date": None, "Creator": None}
_FIGSIZE = (6.4, 4.0)


def _new_figure():
    figure = Figure(figsize=_FIGSIZE)
    FigureCanvasAgg(figure)
    return figure, figure.add_subplot(1, 1, 1)


def _save(figure, fout):
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASHSALT, "svg.fonttype": "none"}):
        figure.savefig(fout, format="svg", metadata=_SVG_METADATA)


def plot_series(t, curves, fout, ylabel="normalized value", title=None):
    """
    Draw several series over normalized time.

    @param t: the time axis
    @type t: sequence of L{float}
    @param curves: label to values, drawn in the given order
    @type curves: L{dict}
    @param fout: binary or text stream receiving the SVG
    """
    figure, axes = _new_figure()
    for label, values in curves.items():
        points = [(x, y) for x, y in zip(t, values) if y is not None]
        if not points:
            continue
        xs, ys = zip(*points)
        axes.plot(xs, ys, marker="o", markersize=3, label=label)
    axes.set_xlabel("normalized time")
    axes.set_ylabel(ylabel)
    if title:
        axes.set_title(title)
    if curves:
        axes.legend()
    axes.grid(True, alpha=0.3)
    _save(figure, fout)


def plot_fit(x, y, fits, models, fout, xlabel="t_norm", ylabel="value"):
    """
    Draw data points with fitted model curves.

    @param fits: the fits to overlay
    @type fits: L{list} of L{simploscore.fitting.FitResult}
    @param models: model providers, by name, used to evaluate the fits
    @type models: L{dict} of L{str} to L{simploscore.isimploscore.ITrendModel}
    """
    x = np.asarray(x, dtype=float)
    figure, axes = _new_figure()
    axes.plot(x, y, "o", markersize=3, label="data")
    dense = np.linspace(x.min(), x.max(), 200)
    for fit in fits:
        curve = models[fit.model].evaluate(fit.parameters, dense)
        axes.plot(dense, curve, label="{} (R$^2$ = {:.4f})".format(fit.model, fit.r_squared))
    axes.set_xlabel(xlabel)
    axes.set_ylabel(ylabel)
    axes.legend()
    axes.grid(True, alpha=0.3)
    _save(figure, fout)


def plot_gauss_bonnet(series, fout):
    """
    Scatter total vertex curvature against chi with the fitted line.

    @param series: the series
    @type series: L{simploscore.curvature.GaussBonnetSeries}
    """
    figure, axes = _new_figure()
    axes.plot(series.euler, series.total_curvature, "o", markersize=4, label="steps")
    if series.slope_defined:
        xs = np.linspace(min(series.euler), max(series.euler), 50)
        axes.plot(
            xs, series.slope * xs + series.intercept,
            label="slope {:.4f}, alpha {:.4f}".format(series.slope, series.alpha),
        )
    else:
        axes.set_title("slope undefined (constant Euler characteristic)")
    axes.set_xlabel("Euler characteristic")
    axes.set_ylabel("total vertex curvature")
    axes.legend()
    axes.grid(True, alpha=0.3)
    _save(figure, fout)
