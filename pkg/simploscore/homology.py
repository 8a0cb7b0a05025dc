"""
Incidence matrices, Hodge Laplacians and Betti numbers.

Betti numbers are computed twice: exactly, from the ranks of the
boundary matrices over the rationals, and spectrally, from the
multiplicity of the zero eigenvalue of the Hodge Laplacians. The exact
path is authoritative, the spectral path is the cross-check.

@var DEFAULT_TOLERANCE: relative threshold below which an eigenvalue is zero
@type DEFAULT_TOLERANCE: L{float}
"""
import csv
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg
from networkx.utils import UnionFind
from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from twisted.logger import Logger

from .errors import ComputationError, ConsistencyError, DomainError


log = Logger()

DEFAULT_TOLERANCE = 1e-8


class BoundaryMatrix(object):
    """
    The oriented incidence matrix B_k between (k-1)- and k-simplices.

    @ivar k: order of the boundary map
    @type k: L{int}
    @ivar matrix: N_{k-1} x N_k matrix with entries in {-1, 0, 1}
    @type matrix: L{numpy.ndarray}
    @ivar rows: the (k-1)-simplices indexing the rows
    @ivar columns: the k-simplices indexing the columns
    """
    def __init__(self, k, matrix, rows, columns):
        self.k = k
        self.matrix = matrix
        self.rows = rows
        self.columns = columns

    @property
    def shape(self):
        return self.matrix.shape


class HodgeLaplacian(object):
    """
    The Hodge Laplacian L_k = L_k_down + L_k_up.

    @ivar down: B_k^T B_k
    @type down: L{numpy.ndarray}
    @ivar up: B_{k+1} B_{k+1}^T
    @type up: L{numpy.ndarray}
    """
    def __init__(self, k, down, up):
        self.k = k
        self.down = down
        self.up = up

    @property
    def matrix(self):
        return self.down + self.up


@dataclass(frozen=True)
class TopologySnapshot:
    """
    Simplex counts, Betti numbers and Euler characteristic of one step.
    """
    step: int
    simplex_counts: Tuple[int, ...]
    betti: Tuple[int, ...]
    euler: int

    def to_json(self):
        return {
            "step": self.step,
            "counts": list(self.simplex_counts),
            "betti": list(self.betti),
            "euler": self.euler,
        }


def _boundary_array(complex_, k):
    """
    Return B_k as an array, with the empty B_0 and B_{d+1} included.
    """
    counts = complex_.simplex_counts()
    d = len(counts) - 1
    if k == 0:
        return np.zeros((0, counts[0] if counts else 0), dtype=np.int64)
    if k == d + 1:
        return np.zeros((counts[d] if counts else 0, 0), dtype=np.int64)
    columns = complex_.simplices(k)
    matrix = np.zeros((counts[k - 1], len(columns)), dtype=np.int64)
    for j, simplex in enumerate(columns):
        for p, face in simplex.faces():
            matrix[complex_.index(face), j] = -1 if p % 2 else 1
    return matrix


def _boundaries(complex_):
    return [_boundary_array(complex_, k) for k in range(complex_.dimension + 2)]


def boundary_matrix(complex_, k):
    """
    Build the incidence matrix B_k.

    The entry for a (k-1)-simplex obtained by removing the p-th vertex of a
    k-simplex is (-1)^p, all other entries are zero.

    @param complex_: the complex
    @type complex_: L{simploscore.complex.SimplicialComplex}
    @param k: order, 1 <= k <= d
    @type k: L{int}
    @rtype: L{BoundaryMatrix}
    @raises DomainError: if k is out of range
    """
    if not 1 <= k <= complex_.dimension:
        raise DomainError("boundary order {} out of range 1..{}".format(k, complex_.dimension))
    return BoundaryMatrix(
        k,
        _boundary_array(complex_, k),
        complex_.simplices(k - 1),
        complex_.simplices(k),
    )


def _laplacian(boundaries, k):
    lower, upper = boundaries[k], boundaries[k + 1]
    return HodgeLaplacian(k, lower.T @ lower, upper @ upper.T)


def hodge_laplacian(complex_, k):
    """
    Build the Hodge Laplacian L_k = B_k^T B_k + B_{k+1} B_{k+1}^T.

    @param complex_: the complex
    @type complex_: L{simploscore.complex.SimplicialComplex}
    @param k: order, 0 <= k <= d
    @type k: L{int}
    @rtype: L{HodgeLaplacian}
    @raises DomainError: if k is out of range
    """
    if not 0 <= k <= complex_.dimension:
        raise DomainError("Laplacian order {} out of range 0..{}".format(k, complex_.dimension))
    boundaries = {j: _boundary_array(complex_, j) for j in (k, k + 1)}
    return _laplacian(boundaries, k)


def integer_rank(matrix):
    """
    Compute the rank of an integer matrix exactly.

    The matrix is lifted to the rationals as a sympy L{DomainMatrix}, so
    the rank involves no tolerance.

    @param matrix: the matrix
    @type matrix: L{numpy.ndarray} or nested lists of L{int}
    @rtype: L{int}
    """
    rows = [[int(x) for x in row] for row in matrix]
    if not rows or not rows[0]:
        return 0
    return DomainMatrix.from_list(rows, ZZ).convert_to(QQ).rank()


def _betti_exact(boundaries, counts):
    ranks = [integer_rank(b) for b in boundaries]
    return tuple(n - ranks[k] - ranks[k + 1] for k, n in enumerate(counts))


def betti_exact(complex_):
    """
    Compute the Betti numbers from exact boundary ranks.

    beta_k = N_k - rank(B_k) - rank(B_{k+1}), with B_0 and B_{d+1} empty.

    @param complex_: the complex
    @type complex_: L{simploscore.complex.SimplicialComplex}
    @return: (beta_0, ..., beta_d), empty for the empty complex
    @rtype: L{tuple} of L{int}
    """
    return _betti_exact(_boundaries(complex_), complex_.simplex_counts())


def _betti_spectral(boundaries, counts, tol):
    betti = []
    for k in range(len(counts)):
        laplacian = _laplacian(boundaries, k).matrix.astype(float)
        try:
            eigenvalues = scipy.linalg.eigvalsh(laplacian)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise ComputationError("eigensolver failed for L_{}: {}".format(k, e), order=k)
        largest = max(float(eigenvalues.max()), 0.0) if len(eigenvalues) else 0.0
        betti.append(int(np.count_nonzero(eigenvalues <= tol * largest)))
    return tuple(betti)


def betti_spectral(complex_, tol=DEFAULT_TOLERANCE):
    """
    Compute the Betti numbers as the zero-eigenvalue multiplicity of L_k.

    @param complex_: the complex
    @type complex_: L{simploscore.complex.SimplicialComplex}
    @param tol: eigenvalues up to C{tol} times the largest one count as zero
    @type tol: L{float}
    @rtype: L{tuple} of L{int}
    @raises ComputationError: if the eigensolver fails, naming the order
    """
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    return _betti_spectral(_boundaries(complex_), complex_.simplex_counts(), tol)


def _alternating_sum(values):
    return sum(v if k % 2 == 0 else -v for k, v in enumerate(values))


def euler_characteristic(counts, betti):
    """
    Return the Euler characteristic, checking the Euler-Poincare formula.

    @param counts: (N_0, ..., N_d)
    @type counts: sequence of L{int}
    @param betti: (beta_0, ..., beta_d)
    @type betti: sequence of L{int}
    @return: sum of (-1)^k beta_k
    @rtype: L{int}
    @raises ConsistencyError: if the alternating sums of counts and Betti numbers differ
    """
    from_betti = _alternating_sum(betti)
    from_counts = _alternating_sum(counts)
    if from_betti != from_counts:
        raise ConsistencyError(
            "Euler-Poincare violated: counts {} give {}, Betti numbers {} give {}".format(
                tuple(counts), from_counts, tuple(betti), from_betti,
            )
        )
    return from_betti


def betti0_union_find(complex_):
    """
    Count the connected components of the 1-skeleton with a union-find.

    @rtype: L{int}
    """
    nodes = complex_.nodes
    components = UnionFind(nodes)
    for edge in complex_.simplices(1):
        components.union(*edge.vertices)
    return len({components[n] for n in nodes})


def _check_identities(boundaries):
    for k in range(1, len(boundaries) - 1):
        product = boundaries[k] @ boundaries[k + 1]
        if product.size and np.any(product):
            raise ConsistencyError("B_{} B_{} is not zero".format(k, k + 1))
    for k in range(len(boundaries) - 1):
        laplacian = _laplacian(boundaries, k)
        if np.any(laplacian.up @ laplacian.down) or np.any(laplacian.down @ laplacian.up):
            raise ConsistencyError("L_{0}_up and L_{0}_down do not annihilate each other".format(k))


def check_identities(complex_):
    """
    Verify B_k B_{k+1} = 0 and L_k_up L_k_down = L_k_down L_k_up = 0 exactly.

    @raises ConsistencyError: if an identity fails
    """
    _check_identities(_boundaries(complex_))


def snapshot(complex_, step=0, tol=DEFAULT_TOLERANCE, cross_check=True):
    """
    Compute the topology of a complex and verify all identities.

    @param complex_: the complex
    @type complex_: L{simploscore.complex.SimplicialComplex}
    @param step: time index of the snapshot
    @type step: L{int}
    @param tol: spectral zero threshold, see L{betti_spectral}
    @type tol: L{float}
    @param cross_check: also compute the spectral Betti numbers and compare
    @type cross_check: L{bool}
    @rtype: L{TopologySnapshot}
    @raises ConsistencyError: if an identity fails or the two Betti paths disagree
    """
    boundaries = _boundaries(complex_)
    counts = complex_.simplex_counts()
    _check_identities(boundaries)
    betti = _betti_exact(boundaries, counts)
    if cross_check:
        spectral = _betti_spectral(boundaries, counts, tol)
        if spectral != betti:
            raise ConsistencyError(
                "Betti numbers disagree at step {}: exact {}, spectral {}".format(step, betti, spectral)
            )
    euler = euler_characteristic(counts, betti)
    log.debug("step {step}: counts {counts}, betti {betti}", step=step, counts=counts, betti=betti)
    return TopologySnapshot(step, counts, betti, euler)


def write_matrix_csv(boundary, fout):
    """
    Write an incidence matrix as labelled integer CSV.

    The header holds the column simplices, each row starts with its simplex.
    Simplices are labelled by their vertices joined with C{-}.

    @param boundary: the matrix
    @type boundary: L{BoundaryMatrix}
    @param fout: text stream to write to
    @type fout: file-like
    """
    writer = csv.writer(fout, lineterminator="\n")
    writer.writerow(["simplex"] + [s.label() for s in boundary.columns])
    for simplex, row in zip(boundary.rows, boundary.matrix):
        writer.writerow([simplex.label()] + [int(x) for x in row])
