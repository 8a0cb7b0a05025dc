"""
Discrete curvature of simplicial complexes.

Forman-Ricci curvature is computed for every p-simplex (p >= 1) from the
number of its cofaces and of its parallel neighbours. Vertices get a
scalar curvature in one of several modes, see L{VERTEX_CURVATURES}.
Curvature values are exact (integers or fractions).

@var FORMAN_SUM: vertex curvature as the sum of the incident edge curvatures
@var FORMAN_MEAN: vertex curvature as the mean of the incident edge curvatures
@var ANGLE_DEFICIT: combinatorial angle deficit, sums to the Euler characteristic
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from twisted.logger import Logger
from zope.interface import implementer

from .complex import Simplex
from .errors import ConsistencyError, DomainError
from .fitting import FitResult, fit_linear
from .isimploscore import IVertexCurvature


log = Logger()

FORMAN_SUM = "forman_sum"
FORMAN_MEAN = "forman_mean"
ANGLE_DEFICIT = "angle_deficit"


def _require(complex_, simplex):
    if simplex not in complex_:
        raise DomainError("simplex {} is not part of the complex".format(simplex))


def parallel_neighbors(complex_, simplex):
    """
    Return the p-simplices parallel to a p-simplex.

    A parallel neighbour shares a (p-1)-face with the simplex but no
    (p+1)-coface.

    @rtype: L{set} of L{Simplex}
    """
    cofaces = set(complex_.cofaces(simplex))
    neighbors = set()
    for _, face in simplex.faces():
        for other in complex_.cofaces(face):
            if other == simplex or other in neighbors:
                continue
            if cofaces.isdisjoint(complex_.cofaces(other)):
                neighbors.add(other)
    return neighbors


def forman_p(complex_, simplex):
    """
    Compute the unweighted Forman-Ricci curvature of a p-simplex.

    F(s) = #cofaces(s) + (p + 1) - #parallel neighbours(s)

    @param complex_: the complex
    @type complex_: L{simploscore.complex.SimplicialComplex}
    @param simplex: a simplex of dimension p >= 1
    @type simplex: L{Simplex}
    @rtype: L{int}
    @raises DomainError: for vertices (see L{gaussian_vertex}) or missing simplices
    """
    if simplex.dimension == 0:
        raise DomainError("vertex curvature is computed by gaussian_vertex")
    _require(complex_, simplex)
    cofaces = complex_.cofaces(simplex)
    return len(cofaces) + simplex.dimension + 1 - len(parallel_neighbors(complex_, simplex))


def forman_edge(complex_, edge):
    """
    Compute the Forman-Ricci curvature of an edge.

    Without cofaces this is 4 - (deg(u) + deg(v)), degrees counted in the
    1-skeleton.

    @param edge: a 1-simplex
    @type edge: L{Simplex}
    @rtype: L{int}
    @raises ConsistencyError: if the general formula disagrees with the graph formula
    """
    if edge.dimension != 1:
        raise DomainError("{} is not an edge".format(edge))
    value = forman_p(complex_, edge)
    if not complex_.cofaces(edge):
        u, v = edge.vertices
        expected = 4 - (complex_.degree(u) + complex_.degree(v))
        if value != expected:
            raise ConsistencyError(
                "Forman curvature of {} is {}, graph formula gives {}".format(edge, value, expected)
            )
    return value


def _incident_edges(complex_, node):
    return complex_.cofaces(Simplex((node,)))


@implementer(IVertexCurvature)
class FormanSumCurvature(object):
    """
    Sum of the Forman curvatures of the incident edges.
    """
    name = FORMAN_SUM

    def curvature(self, complex_, node):
        return sum(forman_edge(complex_, e) for e in _incident_edges(complex_, node))


@implementer(IVertexCurvature)
class FormanMeanCurvature(object):
    """
    Mean of the Forman curvatures of the incident edges, 0 for isolated vertices.
    """
    name = FORMAN_MEAN

    def curvature(self, complex_, node):
        edges = _incident_edges(complex_, node)
        if not edges:
            return Fraction(0)
        return Fraction(sum(forman_edge(complex_, e) for e in edges), len(edges))


@implementer(IVertexCurvature)
class AngleDeficitCurvature(object):
    """
    K_v = 1 - deg(v)/2 + t(v)/3 with t(v) the number of triangles at v.

    The sum over all vertices is V - E + T, the Euler characteristic of
    any complex without 3-simplices.
    """
    name = ANGLE_DEFICIT

    def curvature(self, complex_, node):
        edges = _incident_edges(complex_, node)
        triangles = set()
        for edge in edges:
            triangles.update(complex_.cofaces(edge))
        return 1 - Fraction(len(edges), 2) + Fraction(len(triangles), 3)


VERTEX_CURVATURES = {
    provider.name: provider
    for provider in (FormanSumCurvature(), FormanMeanCurvature(), AngleDeficitCurvature())
}


def vertex_curvature_provider(mode):
    """
    Look up the provider of a vertex curvature mode.

    @rtype: L{IVertexCurvature} provider
    @raises DomainError: on an unknown mode
    """
    try:
        return VERTEX_CURVATURES[mode]
    except KeyError:
        raise DomainError("unknown curvature mode {!r}, expected one of {}".format(
            mode, ", ".join(sorted(VERTEX_CURVATURES)),
        ))


def gaussian_vertex(complex_, node, mode=FORMAN_SUM):
    """
    Compute the curvature at a vertex.

    @param node: the vertex
    @type node: L{int}
    @param mode: one of L{FORMAN_SUM}, L{FORMAN_MEAN}, L{ANGLE_DEFICIT}
    @type mode: L{str}
    @rtype: L{int} or L{fractions.Fraction}
    @raises DomainError: on an unknown mode or a missing vertex
    """
    provider = vertex_curvature_provider(mode)
    _require(complex_, Simplex((node,)))
    return provider.curvature(complex_, node)


def _mean(values):
    return float(Fraction(sum(values), len(values)))


@dataclass(frozen=True)
class CurvatureReport:
    """
    Curvature of every simplex of a complex.

    @ivar per_order: for each order p >= 1, the curvature of each p-simplex
    @ivar vertex_curvatures: curvature of each vertex under C{mode}
    """
    mode: str
    per_order: Dict[int, Dict[Simplex, int]] = field(default_factory=dict)
    vertex_curvatures: Dict[int, object] = field(default_factory=dict)

    @property
    def means(self):
        return {p: _mean(list(values.values())) for p, values in self.per_order.items() if values}

    @property
    def total_vertex_curvature(self):
        return sum(self.vertex_curvatures.values())

    def summary(self):
        """
        Return mean, min and max per order; order 0 describes the vertices.

        @rtype: L{list} of L{dict}
        """
        rows = []
        orders = [(0, self.vertex_curvatures)] + sorted(
            (p, {s.label(): v for s, v in values.items()}) for p, values in self.per_order.items()
        )
        for order, values in orders:
            values = list(values.values())
            if not values:
                continue
            rows.append({
                "order": order,
                "mean": _mean(values),
                "min": float(min(values)),
                "max": float(max(values)),
            })
        return rows

    def to_json(self):
        return {
            "mode": self.mode,
            "summary": self.summary(),
            "total_vertex_curvature": float(self.total_vertex_curvature),
        }


def curvature_report(complex_, mode=FORMAN_SUM):
    """
    Compute the curvature of every simplex and vertex.

    @param complex_: the complex
    @type complex_: L{simploscore.complex.SimplicialComplex}
    @param mode: vertex curvature mode
    @type mode: L{str}
    @rtype: L{CurvatureReport}
    """
    provider = vertex_curvature_provider(mode)
    per_order = {}
    for p in range(1, complex_.dimension + 1):
        if p == 1:
            per_order[p] = {e: forman_edge(complex_, e) for e in complex_.simplices(1)}
        else:
            per_order[p] = {s: forman_p(complex_, s) for s in complex_.simplices(p)}
    vertices = {v: provider.curvature(complex_, v) for v in complex_.nodes}
    return CurvatureReport(mode, per_order, vertices)


@dataclass(frozen=True)
class GaussBonnetSeries:
    """
    Total vertex curvature against Euler characteristic over time.

    @ivar node_count: number of vertices at the final step, alpha = 1/node_count
    @ivar fit: least squares line of total curvature over chi, L{None} when
        chi is constant and the slope is undefined
    """
    euler: Tuple[int, ...]
    total_curvature: Tuple[float, ...]
    node_count: int
    fit: Optional[FitResult] = None

    @classmethod
    def from_pairs(cls, euler, total_curvature, node_count):
        """
        Fit the series; a constant chi leaves the slope undefined.

        @param euler: chi per step
        @param total_curvature: sum of vertex curvatures per step
        @param node_count: vertices of the final complex
        @rtype: L{GaussBonnetSeries}
        """
        euler = tuple(int(e) for e in euler)
        total_curvature = tuple(float(k) for k in total_curvature)
        if len(euler) != len(total_curvature):
            raise DomainError("series lengths differ")
        if len(euler) < 3:
            raise DomainError("Gauss-Bonnet series needs at least 3 steps, got {}".format(len(euler)))
        if node_count < 1:
            raise DomainError("the final complex has no vertices")
        try:
            fit = fit_linear(euler, total_curvature)
        except DomainError:
            log.warn("Euler characteristic is constant, Gauss-Bonnet slope undefined")
            fit = None
        return cls(euler, total_curvature, node_count, fit)

    @property
    def slope_defined(self):
        return self.fit is not None

    @property
    def slope(self):
        return self.fit.parameters[0] if self.fit is not None else None

    @property
    def intercept(self):
        return self.fit.parameters[1] if self.fit is not None else None

    @property
    def alpha(self):
        return 1.0 / self.node_count

    @property
    def alpha_fit(self):
        """
        The prefactor which turns the fitted slope into 2 pi.
        """
        if not self.slope:
            return None
        return 2 * math.pi / self.slope

    @property
    def ratio(self):
        """
        alpha * slope / (2 pi), 1 for an exact Gauss-Bonnet relation.
        """
        if self.slope is None:
            return None
        return self.alpha * self.slope / (2 * math.pi)

    def to_json(self):
        return {
            "euler": list(self.euler),
            "total_curvature": list(self.total_curvature),
            "slope_defined": self.slope_defined,
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.fit.r_squared if self.fit is not None else None,
            "node_count": self.node_count,
            "alpha": self.alpha,
            "alpha_fit": self.alpha_fit,
            "ratio": self.ratio,
        }


def gauss_bonnet_series(series):
    """
    Build the Gauss-Bonnet series of an evolution.

    The node count N0 is taken from the last step whose complex is not
    empty.

    @param series: the evolution
    @type series: L{simploscore.evolution.EvolutionSeries}
    @rtype: L{GaussBonnetSeries}
    @raises DomainError: if the evolution has fewer than 3 steps or every
        step is empty
    """
    steps = series.steps
    if len(steps) < 3:
        raise DomainError("Gauss-Bonnet series needs at least 3 steps, got {}".format(len(steps)))
    node_counts = [s.topology.simplex_counts[0] for s in steps if s.topology.simplex_counts]
    if not node_counts:
        raise DomainError("Gauss-Bonnet series needs a non-empty complex")
    return GaussBonnetSeries.from_pairs(
        [s.topology.euler for s in steps],
        [s.total_vertex_curvature for s in steps],
        node_counts[-1],
    )
