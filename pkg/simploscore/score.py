"""
Musical elements: simultaneities, chord roots and transitions.

Notes whose onsets coincide (within a tolerance) form a chord. Chords and
single notes are the musical elements of a piece, consecutive elements are
linked by a transition between their representatives (the root of a chord,
or the note itself).

@var DEFAULT_EPSILON_BEATS: default onset tolerance for simultaneities
@type DEFAULT_EPSILON_BEATS: L{fractions.Fraction}
@var NOTE: element kind of a single note
@var CHORD: element kind of a chord
"""
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .errors import DomainError
from .rational import format_fraction


DEFAULT_EPSILON_BEATS = Fraction(1, 16)

NOTE = "note"
CHORD = "chord"

# pitch class intervals (upper - lower) for which the upper note of a dyad is the root
_DYAD_UPPER_ROOT = frozenset((5, 8, 9, 1, 2))

# intervals above a root which count as chord tones in stacked thirds
_THIRD_STACK = frozenset((0, 3, 4, 7, 10, 11))


@dataclass(frozen=True)
class MusicalElement:
    """
    A note or chord at a position of the piece.

    @ivar pitches: strictly ascending MIDI pitches
    @ivar representative: the pitch used for transitions
    """
    kind: str
    pitches: Tuple[int, ...]
    onset_beats: Fraction
    measure: Optional[int]
    representative: int

    def __post_init__(self):
        if not self.pitches:
            raise DomainError("a musical element needs at least one pitch")
        if any(a >= b for a, b in zip(self.pitches, self.pitches[1:])):
            raise DomainError("pitches must be strictly ascending: {}".format(self.pitches))
        if self.representative not in self.pitches:
            raise DomainError("representative {} is not one of {}".format(self.representative, self.pitches))
        if self.kind not in (NOTE, CHORD):
            raise DomainError("unknown element kind {!r}".format(self.kind))

    @classmethod
    def from_pitches(cls, pitches, onset_beats=0, measure=None):
        """
        Create an element from its pitches, determining kind and root.

        @param pitches: the sounding pitches, duplicates are removed
        @type pitches: iterable of L{int}
        @param onset_beats: onset of the element
        @type onset_beats: L{fractions.Fraction}
        @param measure: measure index of the element
        @type measure: L{int} or L{None}
        @rtype: L{MusicalElement}
        """
        pitches = tuple(sorted(set(pitches)))
        return cls(
            kind=CHORD if len(pitches) > 1 else NOTE,
            pitches=pitches,
            onset_beats=Fraction(onset_beats),
            measure=measure,
            representative=chord_root(pitches),
        )

    def to_json(self):
        return {
            "onset": format_fraction(self.onset_beats),
            "measure": self.measure,
            "pitches": list(self.pitches),
            "root": self.representative,
        }


TransitionPair = namedtuple("TransitionPair", ("source", "target", "degenerate"))


class ElementSequence(object):
    """
    The musical elements of a piece in temporal order.

    @param elements: the elements, ordered by onset and lowest pitch
    @type elements: iterable of L{MusicalElement}
    """
    def __init__(self, elements=()):
        self._elements = tuple(elements)
        keys = [(e.onset_beats, e.pitches[0]) for e in self._elements]
        if any(a > b for a, b in zip(keys, keys[1:])):
            raise DomainError("elements are not in temporal order")

    def __len__(self):
        return len(self._elements)

    def __iter__(self):
        return iter(self._elements)

    def __getitem__(self, index):
        return self._elements[index]

    def __eq__(self, other):
        if not isinstance(other, ElementSequence):
            return NotImplemented
        return self._elements == other._elements

    def __repr__(self):
        return "ElementSequence({!r})".format(list(self._elements))

    def measures(self):
        """
        Return the measure range covered by the elements.

        @return: C{range(0, last measure + 1)}, measures without notes included
        @rtype: L{range}
        @raises DomainError: if an element has no measure
        """
        if any(e.measure is None for e in self._elements):
            raise DomainError("elements have no measures assigned")
        if not self._elements:
            return range(0)
        return range(max(e.measure for e in self._elements) + 1)

    def indices_in_measures(self, start, stop):
        """
        Return the indices of the elements in the measures C{[start, stop)}.

        @rtype: L{list} of L{int}
        """
        return [i for i, e in enumerate(self._elements) if start <= e.measure < stop]

    def to_json(self):
        return [e.to_json() for e in self._elements]


def detect_simultaneities(events, epsilon_beats=DEFAULT_EPSILON_BEATS):
    """
    Group time sorted note events into musical elements.

    Events whose onsets lie within C{epsilon_beats} of their predecessor
    are chained into one cluster. A cluster with more than one distinct
    pitch is a chord. Sustained notes do not join later onsets.

    @param events: events sorted by onset
    @type events: L{list} of L{simploscore.ingest.NoteEvent}
    @param epsilon_beats: onset tolerance
    @type epsilon_beats: L{fractions.Fraction}
    @return: the elements
    @rtype: L{ElementSequence}
    """
    epsilon_beats = Fraction(epsilon_beats)
    if epsilon_beats < 0:
        raise DomainError("epsilon must not be negative")
    clusters = []
    previous = None
    for event in events:
        if previous is None or event.onset_beats - previous > epsilon_beats:
            clusters.append([])
        clusters[-1].append(event)
        previous = event.onset_beats

    elements = [
        MusicalElement.from_pitches(
            (e.pitch for e in cluster),
            onset_beats=cluster[0].onset_beats,
            measure=cluster[0].measure,
        )
        for cluster in clusters
    ]
    elements.sort(key=lambda e: (e.onset_beats, e.pitches[0]))
    return ElementSequence(elements)


def chord_root(pitches):
    """
    Determine the root of a note or chord.

    Dyads follow the inversion of their interval class (a sixth inverts
    to a third above the upper note). Larger chords score each present
    pitch class by the number of chord tones lying a third-stack interval
    above it; ties go to the candidate sounding lowest.

    @param pitches: the pitches
    @type pitches: iterable of L{int}
    @return: the lowest sounding pitch having the root's pitch class
    @rtype: L{int}
    @raises DomainError: if no pitch is given
    """
    pitches = sorted(set(pitches))
    if not pitches:
        raise DomainError("chord_root needs at least one pitch")
    if len(pitches) == 1:
        return pitches[0]
    if len(pitches) == 2:
        lower, upper = pitches
        interval = (upper - lower) % 12
        return upper if interval in _DYAD_UPPER_ROOT else lower

    lowest = {}
    for p in pitches:
        lowest.setdefault(p % 12, p)
    best = None
    for pc, low in lowest.items():
        score = sum(1 for p in pitches if (p % 12 - pc) % 12 in _THIRD_STACK)
        key = (-score, low)
        if best is None or key < best:
            best = key
    return best[1]


def transition_pairs(seq):
    """
    Return the transitions between consecutive elements.

    @param seq: the elements
    @type seq: L{ElementSequence}
    @return: one pair of representatives per consecutive elements, pairs
        with equal endpoints are flagged as degenerate
    @rtype: L{list} of L{TransitionPair}
    """
    if len(seq) < 1:
        raise DomainError("transitions need at least one element")
    pairs = []
    for a, b in zip(seq, seq[1:]):
        source, target = a.representative, b.representative
        pairs.append(TransitionPair(source, target, source == target))
    return pairs
