"""
Shared fixtures for the tests: reference complexes, seeded random
complexes, small scores and a MIDI writer.
"""
import io
from fractions import Fraction

import mido

from simploscore.complex import SimplicialComplex
from simploscore.score import ElementSequence, MusicalElement


def hollow_tetrahedron():
    return SimplicialComplex.from_simplices([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


def filled_tetrahedron():
    return SimplicialComplex.from_simplices([(0, 1, 2, 3)])


def isolated_vertices(n=4):
    return SimplicialComplex.from_simplices([(v,) for v in range(n)])


def octahedron():
    """
    The boundary of the octahedron; (0, 1), (2, 3) and (4, 5) are the
    pairs of opposite vertices.
    """
    return SimplicialComplex.from_simplices(
        [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    )


def torus(offset=60):
    """
    The minimal 7-vertex triangulation of the torus.
    """
    triangles = []
    for i in range(7):
        triangles.append([offset + (i + d) % 7 for d in (0, 1, 3)])
        triangles.append([offset + (i + d) % 7 for d in (0, 2, 3)])
    return SimplicialComplex.from_simplices(triangles)


def random_complex(rng, max_vertices=12, max_dimension=3):
    """
    Random chords plus random transition edges on at most C{max_vertices} pitches.
    """
    n = rng.randint(1, max_vertices)
    vertices = rng.sample(range(40, 90), n)
    complex_ = SimplicialComplex()
    for _ in range(rng.randint(1, 2 * n)):
        size = rng.randint(1, min(max_dimension + 1, n))
        complex_.add_simplex(rng.sample(vertices, size))
    if n >= 2:
        for _ in range(rng.randint(0, n)):
            complex_.insert_transition(tuple(rng.sample(vertices, 2)))
    return complex_


def random_triangle_free_graph(rng, max_vertices=12):
    """
    A random bipartite graph, bipartite graphs have no triangles.
    """
    n = rng.randint(2, max_vertices)
    split = rng.randint(1, n - 1)
    complex_ = isolated_vertices(n)
    for u in range(split):
        for v in range(split, n):
            if rng.random() < 0.4:
                complex_.add_simplex((u, v))
    return complex_


def random_pure_2_complex(rng, max_vertices=8):
    n = rng.randint(3, max_vertices)
    triangles = [rng.sample(range(n), 3) for _ in range(rng.randint(1, 2 * n))]
    return SimplicialComplex.from_simplices(triangles)


def sequence(measures, beats_per_measure=4):
    """
    Build an element sequence, one list of chords per measure.

    Chords of a measure are spread evenly over it.
    """
    elements = []
    for m, chords in enumerate(measures):
        for j, pitches in enumerate(chords):
            onset = m * beats_per_measure + Fraction(beats_per_measure * j, len(chords))
            elements.append(MusicalElement.from_pitches(pitches, onset, m))
    return ElementSequence(elements)


def measure_notes(measures, beats_per_measure=4):
    """
    Convert measures as taken by L{sequence} to (onset, duration, pitch) notes.
    """
    notes = []
    for m, chords in enumerate(measures):
        duration = Fraction(beats_per_measure, len(chords)) if chords else 0
        for j, pitches in enumerate(chords):
            onset = m * beats_per_measure + duration * j
            notes.extend((onset, duration, p) for p in pitches)
    return notes


# A hub pitch with one new partner per measure. The partners of measures
# 1-7 are the dyad roots, so every new transition closes a cycle.
THEME_A = [[(60, 63)]] + [[(60, p)] for p in (61, 62, 65, 68, 69, 73, 74)]
# An F major triad sharing C4 with theme A, then a second hub.
THEME_B = [[(41, 45, 60)]] + [[(41, q)] for q in (42, 43, 46, 49, 50, 54, 55)]

# Both themes played twice, A A B B.
REPEATED_THEMES = THEME_A + THEME_A + THEME_B + THEME_B
REPEATED_THEMES_EULER = (
    [1, 1, 0, -1, -2, -3, -4, -5]
    + [-5] * 8
    + [-6, -6, -7, -8, -9, -10, -11, -12]
    + [-12] * 8
)
REPEATED_THEMES_PLATEAUS = [(8, 15), (24, 31)]


def _track(messages):
    track = mido.MidiTrack()
    now = 0
    for tick, _, msg in sorted(messages, key=lambda m: (m[0], m[1])):
        track.append(msg.copy(time=tick - now))
        now = tick
    track.append(mido.MetaMessage("end_of_track", time=0))
    return track


def _note_messages(notes, ticks_per_beat, channel=0, velocity=64):
    messages = []
    for onset, duration, pitch in notes:
        start = int(Fraction(onset) * ticks_per_beat)
        stop = int((Fraction(onset) + Fraction(duration)) * ticks_per_beat)
        messages.append((start, 1, mido.Message("note_on", channel=channel, note=pitch, velocity=velocity)))
        messages.append((stop, 0, mido.Message("note_off", channel=channel, note=pitch, velocity=0)))
    return messages


def _meta_messages(time_signature, tempo):
    messages = []
    if time_signature is not None:
        numerator, denominator = time_signature
        messages.append((0, -1, mido.MetaMessage(
            "time_signature", numerator=numerator, denominator=denominator,
        )))
    if tempo is not None:
        messages.append((0, -1, mido.MetaMessage("set_tempo", tempo=tempo)))
    return messages


def midi_bytes(notes, ticks_per_beat=480, time_signature=(4, 4), tempo=None, midi_format=0):
    """
    Encode notes as a standard MIDI file.

    Format 1 files get a meta track and spread the notes over two
    note tracks.

    @param notes: (onset beats, duration beats, pitch)
    @return: the file content
    @rtype: L{bytes}
    """
    meta = _meta_messages(time_signature, tempo)
    midi = mido.MidiFile(type=midi_format, ticks_per_beat=ticks_per_beat)
    if midi_format == 0:
        midi.tracks.append(_track(meta + _note_messages(notes, ticks_per_beat)))
    else:
        midi.tracks.append(_track(meta))
        midi.tracks.append(_track(_note_messages(notes[0::2], ticks_per_beat)))
        midi.tracks.append(_track(_note_messages(notes[1::2], ticks_per_beat)))
    fout = io.BytesIO()
    midi.save(file=fout)
    return fout.getvalue()
