"""
Interface declarations for L{simploscore}
"""
from zope.interface import Attribute, Interface


class IVertexCurvature(Interface):
    """
    A notion of curvature at the vertices of a simplicial complex.

    Implementations are registered in
    L{simploscore.curvature.VERTEX_CURVATURES} under their C{name}.
    """
    name = Attribute("Name used to select this curvature, e.g. C{'forman_sum'}.")

    def curvature(complex_, node):
        """
        Compute the curvature at a vertex.

        @param complex_: the complex containing the vertex
        @type complex_: L{simploscore.complex.SimplicialComplex}
        @param node: the vertex (a MIDI pitch)
        @type node: L{int}
        @return: the curvature, exact where the definition allows
        @rtype: L{int} or L{fractions.Fraction}
        """
        pass


class ITrendModel(Interface):
    """
    A model family fitted to a normalized time series.
    """
    name = Attribute("Name of the model as reported in fit results, e.g. C{'poly_4'}.")

    def fit(x, y):
        """
        Fit the model to the data by least squares.

        @param x: abscissae
        @type x: L{numpy.ndarray}
        @param y: ordinates, same length as C{x}
        @type y: L{numpy.ndarray}
        @return: the fit
        @rtype: L{simploscore.fitting.FitResult}
        """
        pass

    def evaluate(parameters, x):
        """
        Evaluate the model.

        @param parameters: parameters as stored in a fit result
        @type parameters: sequence of L{float}
        @param x: abscissae
        @type x: L{numpy.ndarray}
        @rtype: L{numpy.ndarray}
        """
        pass


class ITabular(Interface):
    """
    A result which can be written as a CSV table.

    Results are adapted to this interface in L{simploscore.export}.
    """

    def header():
        """
        Return the column names.

        @rtype: L{list} of L{str}
        """
        pass

    def rows():
        """
        Return the rows, cells already encoded as text.

        @rtype: iterable of L{list} of L{str}
        """
        pass
