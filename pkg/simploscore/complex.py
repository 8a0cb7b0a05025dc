"""
Oriented simplicial complexes built from musical elements.

Vertices are MIDI pitches. Every simplex is stored in its canonical
orientation (ascending vertices); the complex is kept closed under taking
faces and remembers the order in which simplices first appeared.
"""
from dataclasses import dataclass
from itertools import combinations
from typing import Tuple

import networkx as nx

from .errors import ConsistencyError, DomainError
from .score import transition_pairs


@dataclass(frozen=True, order=True)
class Simplex:
    """
    An oriented simplex in canonical (ascending) orientation.

    @ivar vertices: strictly ascending node ids
    """
    vertices: Tuple[int, ...]

    def __post_init__(self):
        if not self.vertices:
            raise DomainError("a simplex needs at least one vertex")
        if any(a >= b for a, b in zip(self.vertices, self.vertices[1:])):
            raise DomainError("simplex vertices must be strictly ascending: {}".format(self.vertices))

    @classmethod
    def oriented(cls, vertices):
        """
        Reduce an arbitrarily ordered vertex list to canonical form.

        @param vertices: distinct node ids in any order
        @type vertices: iterable of L{int}
        @return: the canonical simplex and the parity sign of the sorting
            permutation, C{+1} or C{-1}
        @rtype: L{tuple} of (L{Simplex}, L{int})
        @raises DomainError: on repeated vertices
        """
        vertices = list(vertices)
        if len(set(vertices)) != len(vertices):
            raise DomainError("repeated vertex in {}".format(vertices))
        inversions = sum(
            1 for i, j in combinations(range(len(vertices)), 2) if vertices[i] > vertices[j]
        )
        return cls(tuple(sorted(vertices))), (-1) ** inversions

    @property
    def dimension(self):
        return len(self.vertices) - 1

    def faces(self):
        """
        Yield the codimension one faces.

        @return: pairs of the removed vertex position p and the face
        @rtype: iterator of (L{int}, L{Simplex})
        """
        if self.dimension == 0:
            return
        for p in range(len(self.vertices)):
            yield p, Simplex(self.vertices[:p] + self.vertices[p + 1:])

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def label(self):
        return "-".join(str(v) for v in self.vertices)


class SimplicialComplex(object):
    """
    A simplicial complex with insertion ordered simplex registries.

    Insertion is append-only. Registries are per dimension, mapping each
    simplex to its index within that dimension.
    """
    def __init__(self):
        self._registries = []
        self._cofaces = {}

    @classmethod
    def from_simplices(cls, simplices):
        """
        Build the closure of the given simplices.

        @param simplices: vertex collections, in insertion order
        @type simplices: iterable of iterables of L{int}
        @rtype: L{SimplicialComplex}
        """
        complex_ = cls()
        for vertices in simplices:
            complex_.add_simplex(vertices)
        return complex_

    def copy(self):
        other = SimplicialComplex()
        other._registries = [dict(r) for r in self._registries]
        other._cofaces = {s: list(c) for s, c in self._cofaces.items()}
        return other

    @property
    def dimension(self):
        """
        The maximal simplex dimension, C{-1} for the empty complex.
        """
        return len(self._registries) - 1

    @property
    def nodes(self):
        return [s.vertices[0] for s in self.simplices(0)]

    def __contains__(self, simplex):
        if not isinstance(simplex, Simplex):
            simplex = Simplex(tuple(sorted(simplex)))
        if simplex.dimension >= len(self._registries):
            return False
        return simplex in self._registries[simplex.dimension]

    def __len__(self):
        return sum(len(r) for r in self._registries)

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return [list(r) for r in self._registries] == [list(r) for r in other._registries]

    def simplices(self, k):
        """
        Return the k-simplices in insertion order.

        @rtype: L{list} of L{Simplex}
        """
        if not 0 <= k < len(self._registries):
            return []
        return list(self._registries[k])

    def index(self, simplex):
        """
        Return the index of a simplex within its dimension.

        @raises DomainError: if the simplex is not present
        """
        self._require(simplex)
        return self._registries[simplex.dimension][simplex]

    def simplex_counts(self):
        """
        Return the number of simplices per dimension, (N_0, ..., N_d).

        @rtype: L{tuple} of L{int}
        """
        return tuple(len(r) for r in self._registries)

    def add_simplex(self, vertices):
        """
        Insert a simplex with all of its faces.

        @param vertices: distinct node ids in any order
        @type vertices: iterable of L{int}
        @return: the simplices which were not present before, faces first
        @rtype: L{list} of L{Simplex}
        """
        top, _ = Simplex.oriented(vertices)
        if top in self:
            return []
        new = []
        for size in range(1, len(top) + 1):
            for subset in combinations(top.vertices, size):
                simplex = Simplex(subset)
                if self._register(simplex):
                    new.append(simplex)
        if __debug__:
            self._check_faces(new)
        return new

    def _register(self, simplex):
        k = simplex.dimension
        while len(self._registries) <= k:
            self._registries.append({})
        registry = self._registries[k]
        if simplex in registry:
            return False
        registry[simplex] = len(registry)
        self._cofaces[simplex] = []
        for _, face in simplex.faces():
            self._cofaces[face].append(simplex)
        return True

    def insert_element(self, element):
        """
        Insert the simplex spanned by a musical element and its faces.

        @param element: a note or chord
        @type element: L{simploscore.score.MusicalElement}
        @return: the newly created simplices
        @rtype: L{list} of L{Simplex}
        """
        return self.add_simplex(element.pitches)

    def insert_transition(self, pair):
        """
        Insert the edge of a transition; a degenerate pair only adds its vertex.

        @param pair: source and target pitch
        @type pair: L{simploscore.score.TransitionPair} or L{tuple}
        @return: the newly created simplices
        @rtype: L{list} of L{Simplex}
        """
        source, target = pair[0], pair[1]
        if source == target:
            return self.add_simplex((source,))
        return self.add_simplex((source, target))

    def _require(self, simplex):
        if simplex not in self:
            raise DomainError("simplex {} is not part of the complex".format(simplex))

    def star_and_faces(self, simplex):
        """
        Return the cofaces one dimension up and the faces one dimension down.

        @param simplex: a simplex of the complex
        @type simplex: L{Simplex}
        @return: (cofaces, faces), cofaces in insertion order
        @rtype: L{tuple} of (L{list} of L{Simplex}, L{list} of L{Simplex})
        @raises DomainError: if the simplex is not present
        """
        self._require(simplex)
        return list(self._cofaces[simplex]), [face for _, face in simplex.faces()]

    def cofaces(self, simplex):
        self._require(simplex)
        return list(self._cofaces[simplex])

    def degree(self, node):
        """
        Return the number of edges at a node.
        """
        return len(self.cofaces(Simplex((node,))))

    def skeleton_graph(self):
        """
        Return the 1-skeleton.

        @rtype: L{networkx.Graph}
        """
        graph = nx.Graph()
        graph.add_nodes_from(self.nodes)
        graph.add_edges_from(s.vertices for s in self.simplices(1))
        return graph

    def _check_faces(self, simplices):
        for simplex in simplices:
            for _, face in simplex.faces():
                if face not in self:
                    raise ConsistencyError("closure violated: {} lacks face {}".format(simplex, face))

    def check_closure(self):
        """
        Verify that every face of every stored simplex is stored.

        @raises ConsistencyError: if the complex is not closed
        """
        for registry in self._registries:
            self._check_faces(registry)

    def to_json(self):
        return {
            "nodes": self.nodes,
            "simplices": {
                str(k): [list(s.vertices) for s in registry]
                for k, registry in enumerate(self._registries)
            },
        }


def ingest_elements(complex_, seq, indices):
    """
    Add elements of a sequence together with their incoming transitions.

    Each element is inserted first, followed by the transition from its
    predecessor, when that predecessor is part of C{indices} or was ingested
    before. Repeated ingestion adds nothing.

    @param complex_: the complex to extend
    @type complex_: L{SimplicialComplex}
    @param seq: the elements of the piece
    @type seq: L{simploscore.score.ElementSequence}
    @param indices: ascending element indices to ingest
    @type indices: iterable of L{int}
    @return: the newly created simplices
    @rtype: L{list} of L{Simplex}
    """
    return ingest_window(complex_, seq, indices, first=0)


def ingest_window(complex_, seq, indices, first):
    """
    Like L{ingest_elements}, ignoring transitions into index C{first}.

    Sliding windows start at C{first}; the transition from the element
    before the window is not part of it.
    """
    indices = list(indices)
    if not indices:
        return []
    pairs = transition_pairs(seq)
    new = []
    for i in indices:
        new.extend(complex_.insert_element(seq[i]))
        if i > first:
            new.extend(complex_.insert_transition(pairs[i - 1]))
    return new


def build_complex(seq):
    """
    Build the complex of a whole piece.

    @param seq: the elements of the piece
    @type seq: L{simploscore.score.ElementSequence}
    @rtype: L{SimplicialComplex}
    """
    complex_ = SimplicialComplex()
    ingest_elements(complex_, seq, range(len(seq)))
    return complex_
