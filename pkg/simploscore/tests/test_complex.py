"""
Tests for L{simploscore.complex}.
"""
import random

from twisted.trial import unittest

from simploscore.complex import (
    Simplex,
    SimplicialComplex,
    build_complex,
    ingest_elements,
    ingest_window,
)
from simploscore.errors import DomainError
from simploscore.score import ElementSequence, MusicalElement, TransitionPair, transition_pairs
from simploscore.tests import shapes


class SimplexTests(unittest.TestCase):
    """
    Tests for L{simploscore.complex.Simplex}.
    """

    def test_canonical(self):
        """
        Vertices must be strictly ascending.
        """
        self.assertRaises(DomainError, Simplex, (2, 1))
        self.assertRaises(DomainError, Simplex, (1, 1))
        self.assertRaises(DomainError, Simplex, ())

    def test_oriented(self):
        """
        Reordering reports the parity of the sorting permutation.
        """
        self.assertEqual(Simplex.oriented([1, 2, 3]), (Simplex((1, 2, 3)), 1))
        self.assertEqual(Simplex.oriented([2, 1, 3]), (Simplex((1, 2, 3)), -1))
        self.assertEqual(Simplex.oriented([3, 1, 2]), (Simplex((1, 2, 3)), 1))
        self.assertEqual(Simplex.oriented([3, 2, 1]), (Simplex((1, 2, 3)), -1))

    def test_faces(self):
        """
        Face p drops the p-th vertex.
        """
        faces = list(Simplex((1, 2, 3)).faces())
        self.assertEqual(faces, [
            (0, Simplex((2, 3))),
            (1, Simplex((1, 3))),
            (2, Simplex((1, 2))),
        ])
        self.assertEqual(list(Simplex((5,)).faces()), [])
        self.assertEqual(Simplex((1, 2, 3)).dimension, 2)


class InsertionTests(unittest.TestCase):
    """
    Tests for element and transition insertion.
    """

    def test_triad(self):
        """
        A triad brings 3 vertices, 3 edges and 1 triangle.
        """
        complex_ = SimplicialComplex()
        new = complex_.insert_element(MusicalElement.from_pitches([67, 71, 74]))
        self.assertEqual(len(new), 7)
        self.assertEqual(complex_.simplex_counts(), (3, 3, 1))

    def test_idempotent(self):
        """
        Inserting the same chord again creates nothing.
        """
        complex_ = SimplicialComplex()
        chord = MusicalElement.from_pitches([67, 71, 74])
        complex_.insert_element(chord)
        self.assertEqual(complex_.insert_element(chord), [])

    def test_four_note_chord(self):
        """
        A four note chord closes to 15 simplices.
        """
        complex_ = SimplicialComplex()
        new = complex_.insert_element(MusicalElement.from_pitches([55, 62, 69, 76]))
        self.assertEqual(len(new), 15)
        self.assertEqual(complex_.simplex_counts(), (4, 6, 4, 1))

    def test_faces_first(self):
        """
        New simplices are listed faces first.
        """
        new = SimplicialComplex().add_simplex([3, 1, 2])
        self.assertEqual([s.dimension for s in new], [0, 0, 0, 1, 1, 1, 2])

    def test_transition(self):
        """
        A transition on an empty complex adds both vertices and the edge.
        """
        complex_ = SimplicialComplex()
        self.assertEqual(len(complex_.insert_transition(TransitionPair(67, 65, False))), 3)

    def test_transition_existing_vertices(self):
        """
        Between existing vertices only the edge is new.
        """
        complex_ = SimplicialComplex.from_simplices([(65,), (69,)])
        self.assertEqual(complex_.insert_transition((65, 69)), [Simplex((65, 69))])

    def test_degenerate_transition(self):
        """
        A repeated note adds at most its vertex.
        """
        complex_ = SimplicialComplex()
        self.assertEqual(complex_.insert_transition((69, 69)), [Simplex((69,))])
        self.assertEqual(complex_.insert_transition((69, 69)), [])
        self.assertEqual(complex_.simplex_counts(), (1,))


class CountsTests(unittest.TestCase):
    """
    Tests for L{simploscore.complex.SimplicialComplex.simplex_counts}.
    """

    def test_empty(self):
        """
        The empty complex has no counts and dimension -1.
        """
        complex_ = SimplicialComplex()
        self.assertEqual(complex_.simplex_counts(), ())
        self.assertEqual(complex_.dimension, -1)

    def test_triangle(self):
        """
        A filled triangle counts (3, 3, 1).
        """
        self.assertEqual(SimplicialComplex.from_simplices([(0, 1, 2)]).simplex_counts(), (3, 3, 1))

    def test_hollow_tetrahedron(self):
        """
        The hollow tetrahedron counts (4, 6, 4).
        """
        self.assertEqual(shapes.hollow_tetrahedron().simplex_counts(), (4, 6, 4))


class AdjacencyTests(unittest.TestCase):
    """
    Tests for cofaces, faces and degrees.
    """

    def test_triangle_edge(self):
        """
        An edge of a lone triangle has one coface and two faces.
        """
        complex_ = SimplicialComplex.from_simplices([(0, 1, 2)])
        cofaces, faces = complex_.star_and_faces(Simplex((0, 1)))
        self.assertEqual(cofaces, [Simplex((0, 1, 2))])
        self.assertEqual(sorted(faces), [Simplex((0,)), Simplex((1,))])

    def test_vertex(self):
        """
        A vertex has no faces.
        """
        complex_ = SimplicialComplex.from_simplices([(0, 1)])
        _, faces = complex_.star_and_faces(Simplex((0,)))
        self.assertEqual(faces, [])

    def test_shared_edge(self):
        """
        The edge shared by two triangles has two cofaces.
        """
        complex_ = SimplicialComplex.from_simplices([(0, 1, 2), (1, 2, 3)])
        cofaces, _ = complex_.star_and_faces(Simplex((1, 2)))
        self.assertEqual(len(cofaces), 2)

    def test_missing(self):
        """
        Asking for a simplex outside of the complex is a domain error.
        """
        complex_ = SimplicialComplex.from_simplices([(0, 1)])
        self.assertRaises(DomainError, complex_.star_and_faces, Simplex((0, 2)))
        self.assertRaises(DomainError, complex_.index, Simplex((7,)))

    def test_degree_and_skeleton(self):
        """
        Degrees count edges; the skeleton graph has the same edges.
        """
        complex_ = SimplicialComplex.from_simplices([(0, 1, 2), (2, 3), (4,)])
        self.assertEqual([complex_.degree(v) for v in range(5)], [2, 2, 3, 1, 0])
        graph = complex_.skeleton_graph()
        self.assertEqual(sorted(graph.nodes), [0, 1, 2, 3, 4])
        self.assertEqual(graph.number_of_edges(), 4)


class BuildTests(unittest.TestCase):
    """
    Tests for building complexes from element sequences.
    """

    def test_closure_random(self):
        """
        Random complexes are closed under taking faces.
        """
        rng = random.Random(11)
        for _ in range(50):
            shapes.random_complex(rng).check_closure()

    def test_deterministic(self):
        """
        The same sequence always yields identical registries.
        """
        seq = shapes.sequence(shapes.REPEATED_THEMES)
        first = build_complex(seq)
        second = build_complex(seq)
        self.assertEqual(first, second)
        self.assertEqual(first.to_json(), second.to_json())

    def test_incremental(self):
        """
        Ingesting a sequence in pieces equals building it at once.
        """
        seq = shapes.sequence(shapes.REPEATED_THEMES)
        complex_ = SimplicialComplex()
        for m in seq.measures():
            ingest_elements(complex_, seq, seq.indices_in_measures(m, m + 1))
        self.assertEqual(complex_, build_complex(seq))

    def test_repeat_adds_nothing(self):
        """
        Re-ingesting elements which are all present creates no simplices.
        """
        seq = shapes.sequence(shapes.THEME_A + shapes.THEME_A)
        complex_ = SimplicialComplex()
        ingest_elements(complex_, seq, range(8))
        self.assertEqual(ingest_elements(complex_, seq, range(8, 16)), [])

    def test_transitions(self):
        """
        A G chord, F4, then C4 A4 gives the edges G4-F4 and F4-A4.
        """
        seq = shapes.sequence([[(67, 71, 74), (65,), (60, 69)]])
        complex_ = build_complex(seq)
        self.assertIn(Simplex((65, 67)), complex_)
        self.assertIn(Simplex((65, 69)), complex_)
        self.assertNotIn(Simplex((60, 65)), complex_)

    def test_transition_edges(self):
        """
        Every transition between distinct roots is an edge of the complex.
        """
        seq = shapes.sequence(shapes.REPEATED_THEMES)
        complex_ = build_complex(seq)
        for pair in transition_pairs(seq):
            if pair.degenerate:
                self.assertIn(Simplex((pair.source,)), complex_)
            else:
                self.assertIn(Simplex(tuple(sorted((pair.source, pair.target)))), complex_)

    def test_window(self):
        """
        A window leaves out the transition into its first element.
        """
        seq = shapes.sequence([[(60,)], [(65,)], [(69,)]])
        complex_ = SimplicialComplex()
        ingest_window(complex_, seq, [1, 2], first=1)
        self.assertEqual(sorted(complex_.nodes), [65, 69])
        self.assertIn(Simplex((65, 69)), complex_)
        self.assertNotIn(Simplex((60, 65)), complex_)

    def test_no_indices(self):
        """
        Ingesting no elements of an empty sequence adds nothing.
        """
        complex_ = SimplicialComplex()
        self.assertEqual(ingest_elements(complex_, ElementSequence([]), []), [])
        self.assertEqual(complex_.simplex_counts(), ())

    def test_json(self):
        """
        The complex serializes nodes and simplices per dimension.
        """
        complex_ = SimplicialComplex.from_simplices([(2, 1)])
        self.assertEqual(complex_.to_json(), {
            "nodes": [1, 2],
            "simplices": {"0": [[1], [2]], "1": [[1, 2]]},
        })

    def test_copy(self):
        """
        Copies are independent.
        """
        complex_ = SimplicialComplex.from_simplices([(0, 1)])
        other = complex_.copy()
        other.add_simplex((1, 2))
        self.assertEqual(complex_.simplex_counts(), (2, 1))
        self.assertEqual(other.simplex_counts(), (3, 2))
