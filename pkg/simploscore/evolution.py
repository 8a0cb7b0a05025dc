"""
Temporal analysis of a piece.

A piece is analysed step by step, a step being one measure or one
musical element. In cumulative mode the complex grows with every step,
in sliding mode every step builds a fresh complex from a window of
consecutive steps. Each step records the topology and curvature of the
complex at that point.

@var DEFAULT_WINDOW: sliding window width in steps
@var DEFAULT_STRIDE: sliding window advance in steps
@var DEFAULT_MIN_PLATEAU: shortest run of unchanged values reported as plateau
@var NORMALIZED_BY_MAX: flag set when a series starts at zero and was scaled
    by its largest magnitude instead
"""
from dataclasses import dataclass, field
from typing import Tuple

from twisted.logger import Logger

from .complex import SimplicialComplex, ingest_elements, ingest_window
from .curvature import FORMAN_SUM, CurvatureReport, curvature_report, vertex_curvature_provider
from .errors import DomainError
from .homology import DEFAULT_TOLERANCE, TopologySnapshot, snapshot


log = Logger()

CUMULATIVE = "cumulative"
SLIDING = "sliding"
MODES = (CUMULATIVE, SLIDING)

MEASURE = "measure"
ELEMENT = "element"
STEP_UNITS = (MEASURE, ELEMENT)

DEFAULT_WINDOW = 2
DEFAULT_STRIDE = 1
DEFAULT_MIN_PLATEAU = 2

NORMALIZED_BY_MAX = "normalized_by_max"
ALL_ZERO = "all_zero"


@dataclass(frozen=True)
class EvolutionConfig:
    """
    Parameters of a temporal analysis.

    @ivar window: window width in steps, sliding mode only
    @ivar stride: window advance in steps, sliding mode only
    @ivar tolerance: spectral zero threshold of the Betti cross-check
    @ivar cross_check: compare exact and spectral Betti numbers at every step
    """
    mode: str = CUMULATIVE
    step_unit: str = MEASURE
    window: int = DEFAULT_WINDOW
    stride: int = DEFAULT_STRIDE
    curvature_mode: str = FORMAN_SUM
    tolerance: float = DEFAULT_TOLERANCE
    cross_check: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError("unknown evolution mode {!r}".format(self.mode))
        if self.step_unit not in STEP_UNITS:
            raise DomainError("unknown step unit {!r}".format(self.step_unit))
        if self.window < 1:
            raise DomainError("window must be at least 1, got {}".format(self.window))
        if self.stride < 1:
            raise DomainError("stride must be at least 1, got {}".format(self.stride))
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        vertex_curvature_provider(self.curvature_mode)


@dataclass(frozen=True)
class EvolutionStep:
    """
    Topology and curvature of the complex at one step.

    @ivar step: index of the step (first step of the window in sliding mode)
    """
    step: int
    topology: TopologySnapshot
    curvature: CurvatureReport

    @property
    def total_vertex_curvature(self):
        return self.curvature.total_vertex_curvature

    def to_json(self):
        data = self.topology.to_json()
        data["curvature"] = self.curvature.to_json()
        return data


@dataclass(frozen=True)
class Normalization:
    """
    Normalized time axis and values of a series.
    """
    t_norm: Tuple[float, ...]
    values: Tuple[float, ...]
    flags: Tuple[str, ...] = ()


@dataclass(frozen=True)
class EvolutionSeries:
    """
    The steps of a temporal analysis, in time order.
    """
    config: EvolutionConfig
    steps: Tuple[EvolutionStep, ...] = field(default_factory=tuple)

    def __len__(self):
        return len(self.steps)

    @property
    def dimension(self):
        """
        The largest complex dimension over all steps.
        """
        return max((len(s.topology.simplex_counts) - 1 for s in self.steps), default=-1)

    @property
    def step_indices(self):
        return [s.step for s in self.steps]

    @property
    def euler(self):
        return [s.topology.euler for s in self.steps]

    @property
    def total_curvature(self):
        return [s.total_vertex_curvature for s in self.steps]

    def t_norm(self):
        return _normalized_time(self.step_indices)

    def euler_normalization(self):
        """
        Normalize chi by the magnitude of its first value.

        @rtype: L{Normalization}
        """
        values, flags = _normalize_by_first(self.euler)
        return Normalization(self.t_norm(), values, flags)

    def curvature_normalization(self):
        """
        Normalize the total vertex curvature by its first nonzero magnitude.

        @rtype: L{Normalization}
        """
        values, flags = _normalize_by_first_nonzero(self.total_curvature)
        return Normalization(self.t_norm(), values, flags)

    def plateaus(self, min_len=DEFAULT_MIN_PLATEAU):
        """
        Return the plateaus of chi as intervals of step indices.

        @rtype: L{list} of L{tuple} of (L{int}, L{int})
        """
        indices = self.step_indices
        return [(indices[a], indices[b]) for a, b in detect_plateaus(self.euler, min_len)]

    def to_json(self, min_len=DEFAULT_MIN_PLATEAU):
        euler = self.euler_normalization()
        curvature = self.curvature_normalization()
        steps = []
        for step, t, chi, kappa in zip(self.steps, euler.t_norm, euler.values, curvature.values):
            data = step.to_json()
            data["t_norm"] = t
            data["euler_norm"] = chi
            data["sumKv_norm"] = kappa
            steps.append(data)
        return {
            "mode": self.config.mode,
            "step_unit": self.config.step_unit,
            "curvature_mode": self.config.curvature_mode,
            "steps": steps,
            "plateaus": [list(p) for p in self.plateaus(min_len)],
            "flags": sorted(set(euler.flags) | {"sumKv_" + f for f in curvature.flags}),
        }


def _normalized_time(indices):
    if len(indices) < 2:
        return tuple(0.0 for _ in indices)
    first, last = indices[0], indices[-1]
    return tuple((i - first) / (last - first) for i in indices)


def _normalize_by_first(values):
    values = [float(v) for v in values]
    if not values:
        return (), ()
    if values[0] != 0:
        scale = abs(values[0])
        return tuple(v / scale for v in values), ()
    scale = max(abs(v) for v in values)
    if scale == 0:
        return tuple(values), (NORMALIZED_BY_MAX, ALL_ZERO)
    log.warn("Series starts at zero, normalizing by its largest magnitude {scale}", scale=scale)
    return tuple(v / scale for v in values), (NORMALIZED_BY_MAX,)


def _normalize_by_first_nonzero(values):
    values = [float(v) for v in values]
    scale = next((abs(v) for v in values if v != 0), None)
    if scale is None:
        return tuple(values), (ALL_ZERO,) if values else ()
    return tuple(v / scale for v in values), ()


def normalize_series(series):
    """
    Normalize time and Euler characteristic of a series.

    t_norm = (step - first) / (last - first) and chi_norm = chi / |chi(first)|.
    A series starting at chi = 0 is divided by max |chi| and flagged with
    L{NORMALIZED_BY_MAX}.

    @param series: the evolution
    @type series: L{EvolutionSeries}
    @rtype: L{Normalization}
    @raises DomainError: if the series has fewer than 2 steps
    """
    if len(series.steps) < 2:
        raise DomainError("normalization needs at least 2 steps, got {}".format(len(series.steps)))
    return series.euler_normalization()


def detect_plateaus(values, min_len=DEFAULT_MIN_PLATEAU):
    """
    Find runs of unchanged values.

    Position t is flat when values[t] equals values[t - 1]. Maximal runs
    of at least C{min_len} consecutive flat positions are reported by their
    first and last flat position, except that a run starting at position 1
    also covers position 0. A constant series of length n is therefore the
    single plateau (0, n - 1).

    @param values: a series, e.g. chi per step
    @type values: sequence of numbers
    @param min_len: shortest reported run
    @type min_len: L{int}
    @return: (first, last) positions of each run, sorted by start
    @rtype: L{list} of L{tuple} of (L{int}, L{int})
    """
    if min_len < 2:
        raise DomainError("plateau length must be at least 2, got {}".format(min_len))
    plateaus = []
    start = None
    for t in range(1, len(values) + 1):
        flat = t < len(values) and values[t] == values[t - 1]
        if flat and start is None:
            start = t
        elif not flat and start is not None:
            if t - start >= min_len:
                plateaus.append((0 if start == 1 else start, t - 1))
            start = None
    return plateaus


def analyze_complex(complex_, step=0, config=None):
    """
    Compute topology and curvature of a complex.

    @param complex_: the complex
    @type complex_: L{simploscore.complex.SimplicialComplex}
    @param step: index recorded with the result
    @type step: L{int}
    @param config: curvature mode and Betti tolerance
    @type config: L{EvolutionConfig}
    @rtype: L{EvolutionStep}
    @raises ConsistencyError: if an algebraic identity fails
    """
    if config is None:
        config = EvolutionConfig()
    topology = snapshot(complex_, step, tol=config.tolerance, cross_check=config.cross_check)
    curvature = curvature_report(complex_, config.curvature_mode)
    return EvolutionStep(step, topology, curvature)


def _units(seq, config):
    if config.step_unit == ELEMENT:
        return range(len(seq))
    return seq.measures()


def _indices(seq, config, start, stop):
    if config.step_unit == ELEMENT:
        return list(range(start, stop))
    return seq.indices_in_measures(start, stop)


def _require_elements(seq):
    if len(seq) == 0:
        raise DomainError("the piece has no musical elements")


def run_cumulative(seq, config=None):
    """
    Grow the complex step by step, recording a snapshot after each step.

    Each element enters together with the transition from its predecessor,
    so the transition leaving a step is part of the next one. The last
    snapshot describes the complex of the whole piece.

    @param seq: the elements of the piece
    @type seq: L{simploscore.score.ElementSequence}
    @param config: the analysis parameters
    @type config: L{EvolutionConfig}
    @rtype: L{EvolutionSeries}
    @raises DomainError: on an empty piece or missing measures
    """
    if config is None:
        config = EvolutionConfig()
    _require_elements(seq)
    complex_ = SimplicialComplex()
    steps = []
    for t in _units(seq, config):
        ingest_elements(complex_, seq, _indices(seq, config, t, t + 1))
        steps.append(analyze_complex(complex_, t, config))
        log.debug("cumulative step {step}: chi = {euler}", step=t, euler=steps[-1].topology.euler)
    return EvolutionSeries(config, tuple(steps))


def run_sliding(seq, config=None):
    """
    Analyse windows of C{config.window} steps, advancing by C{config.stride}.

    Every window is built into a fresh complex. The transition into the
    first element of a window comes from outside of it and is left out.

    @param seq: the elements of the piece
    @type seq: L{simploscore.score.ElementSequence}
    @param config: the analysis parameters
    @type config: L{EvolutionConfig}
    @rtype: L{EvolutionSeries}
    @raises DomainError: if the window is longer than the piece
    """
    if config is None:
        config = EvolutionConfig(mode=SLIDING)
    _require_elements(seq)
    total = len(_units(seq, config))
    if config.window > total:
        raise DomainError("window of {} {}s exceeds the piece length of {}".format(
            config.window, config.step_unit, total,
        ))
    steps = []
    for start in range(0, total - config.window + 1, config.stride):
        indices = _indices(seq, config, start, start + config.window)
        complex_ = SimplicialComplex()
        if indices:
            ingest_window(complex_, seq, indices, first=indices[0])
        steps.append(analyze_complex(complex_, start, config))
        log.debug("window at {step}: chi = {euler}", step=start, euler=steps[-1].topology.euler)
    return EvolutionSeries(config, tuple(steps))


def run_evolution(seq, config):
    """
    Run the analysis selected by C{config.mode}.

    @rtype: L{EvolutionSeries}
    """
    if config.mode == SLIDING:
        return run_sliding(seq, config)
    return run_cumulative(seq, config)
