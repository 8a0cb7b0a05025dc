"""
MIDI ingestion.

Reads standard MIDI files into a time ordered table of L{NoteEvent}s with
the columns onset (beats), duration (beats), channel, pitch, velocity,
onset (seconds) and duration (seconds), and segments the table into
measures.

Beat positions are exact fractions of the file's quarter note division,
seconds are derived from the tempo map.

@var DEFAULT_TEMPO: tempo in microseconds per quarter note (120 BPM)
@type DEFAULT_TEMPO: L{int}
@var NOTE_CSV_HEADER: columns of the note table CSV
@type NOTE_CSV_HEADER: L{tuple} of L{str}
@var MIDI_META: meter source, read from a time signature meta event
@var CLI_OVERRIDE: meter source, given by the user
"""
import bisect
import csv
import io
import math
import struct
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import accumulate
from typing import Optional

import mido
from twisted.logger import Logger

from .errors import DomainError, MidiParseError, SchemaError
from .rational import format_fraction, format_real, to_fraction


log = Logger()

DEFAULT_TEMPO = 500000
MIDI_META = "midi_meta"
CLI_OVERRIDE = "cli_override"

NOTE_CSV_HEADER = (
    "onset_beats",
    "duration_beats",
    "channel",
    "pitch",
    "velocity",
    "onset_seconds",
    "duration_seconds",
    "measure",
)

_PITCH_NAMES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")

# mido raises a mix of builtin exceptions on broken track data
_DECODE_ERRORS = (OSError, EOFError, ValueError, KeyError, IndexError, TypeError)


@dataclass(frozen=True)
class NoteEvent:
    """
    A single note of a MIDI file.

    @ivar measure: 0-based measure index, L{None} until L{assign_measures} ran
    """
    onset_beats: Fraction
    duration_beats: Fraction
    channel: int
    pitch: int
    velocity: int
    onset_seconds: float
    duration_seconds: float
    measure: Optional[int] = None

    def __post_init__(self):
        if self.duration_beats <= 0:
            raise DomainError("note duration must be positive, got {}".format(self.duration_beats))
        if self.duration_seconds < 0 or self.onset_seconds < 0:
            raise DomainError("note times in seconds must not be negative")
        if not 0 <= self.pitch <= 127:
            raise DomainError("pitch out of range: {}".format(self.pitch))
        if not 0 <= self.velocity <= 127:
            raise DomainError("velocity out of range: {}".format(self.velocity))

    def sort_key(self):
        return (self.onset_beats, self.pitch, self.channel, self.duration_beats, self.velocity)


@dataclass(frozen=True)
class MeterSpec:
    """
    Number of (quarter note) beats per measure and where it came from.
    """
    beats_per_measure: Fraction
    source: str = MIDI_META

    def __post_init__(self):
        if self.beats_per_measure <= 0:
            raise DomainError("beats per measure must be positive, got {}".format(self.beats_per_measure))
        if self.source not in (MIDI_META, CLI_OVERRIDE):
            raise DomainError("unknown meter source {!r}".format(self.source))

    @classmethod
    def from_time_signature(cls, numerator, denominator):
        """
        Create a meter from a time signature, counted in quarter notes.

        @param numerator: upper number of the time signature
        @type numerator: L{int}
        @param denominator: lower number of the time signature
        @type denominator: L{int}
        @return: the meter (6/8 yields 3 beats)
        @rtype: L{MeterSpec}
        """
        return cls(Fraction(4 * numerator, denominator), MIDI_META)


class _TempoMap(object):
    """
    Piecewise constant tempo, converts ticks to seconds exactly.
    """
    def __init__(self, changes, ppq):
        self._ticks = []
        self._tempos = []
        self._offsets = []
        self._ppq = ppq
        seconds = Fraction(0)
        for tick, tempo in changes:
            if self._ticks:
                seconds += self._span(tick - self._ticks[-1], self._tempos[-1])
            self._ticks.append(tick)
            self._tempos.append(tempo)
            self._offsets.append(seconds)

    def _span(self, ticks, tempo):
        return Fraction(ticks * tempo, self._ppq * 1000000)

    def seconds(self, tick):
        i = bisect.bisect_right(self._ticks, tick) - 1
        return self._offsets[i] + self._span(tick - self._ticks[i], self._tempos[i])


def _split_chunks(data):
    """
    Check the chunk framing of a MIDI file and return its track chunks.

    @param data: raw file content
    @type data: L{bytes}
    @return: the division and a list of (offset, chunk bytes) of the tracks
    @rtype: L{tuple} of (L{int}, L{list})
    @raises MidiParseError: if header or chunk framing is broken
    """
    if len(data) < 14 or data[:4] != b"MThd":
        raise MidiParseError("missing MThd header", 0)
    length = struct.unpack(">I", data[4:8])[0]
    if length < 6 or 8 + length > len(data):
        raise MidiParseError("invalid header length {}".format(length), 4)
    fmt, ntracks, division = struct.unpack(">HHH", data[8:14])
    if fmt not in (0, 1):
        raise MidiParseError("unsupported MIDI format {}".format(fmt), 8)
    if division & 0x8000:
        raise MidiParseError("SMPTE time division is not supported", 12)
    if division == 0:
        raise MidiParseError("time division must not be zero", 12)

    tracks = []
    pos = 8 + length
    while pos < len(data):
        if pos + 8 > len(data):
            raise MidiParseError("truncated chunk header", pos)
        kind = data[pos:pos + 4]
        size = struct.unpack(">I", data[pos + 4:pos + 8])[0]
        end = pos + 8 + size
        if end > len(data):
            raise MidiParseError("chunk {!r} exceeds the end of the file".format(kind), pos)
        if kind == b"MTrk":
            tracks.append((pos, data[pos:end]))
        else:
            log.debug("Skipping unknown chunk {kind!r} at {offset}", kind=kind, offset=pos)
        pos = end

    if len(tracks) != ntracks:
        log.warn(
            "Header announces {announced} tracks, found {found}",
            announced=ntracks,
            found=len(tracks),
        )
    return division, tracks


def _decode_track(offset, chunk, division):
    """
    Decode a single track chunk with L{mido}.
    """
    header = b"MThd" + struct.pack(">IHHH", 6, 0, 1, division)
    try:
        midi = mido.MidiFile(file=io.BytesIO(header + chunk))
    except _DECODE_ERRORS as e:
        raise MidiParseError("malformed track: {}".format(e), offset)
    return midi.tracks[0]


def _merge_tracks(tracks):
    """
    Merge tracks into (tick, track number, message) triples.

    The triples are ordered by absolute tick, then by track number, then by
    position within the track.

    @return: the merged triples and the end tick of every track
    @rtype: L{tuple} of (L{list}, L{list} of L{int})
    """
    merged = []
    ends = []
    for number, track in enumerate(tracks):
        ticks = list(accumulate(msg.time for msg in track))
        merged.extend((tick, number, msg) for tick, msg in zip(ticks, track))
        ends.append(ticks[-1] if ticks else 0)
    merged.sort(key=lambda entry: entry[:2])
    return merged, ends


def parse_midi(data):
    """
    Parse a standard MIDI file (format 0 or 1).

    Note-on and note-off events are matched per channel and pitch, first in
    first out. A note-on which is never closed ends with its own track.

    @param data: raw file content
    @type data: L{bytes}
    @return: the events sorted by onset and pitch, and the meter of the
        first time signature (L{None} if the file has none)
    @rtype: L{tuple} of (L{list} of L{NoteEvent}, L{MeterSpec} or L{None})
    @raises MidiParseError: if the data is not a valid MIDI file
    """
    if not isinstance(data, (bytes, bytearray)):
        raise TypeError("Expected MIDI data as bytes, not {}".format(type(data)))
    division, chunks = _split_chunks(bytes(data))
    tracks = [_decode_track(offset, chunk, division) for offset, chunk in chunks]

    merged, track_ends = _merge_tracks(tracks)
    tempo_changes = [(0, DEFAULT_TEMPO)]
    meter = None
    open_notes = defaultdict(deque)
    spans = []
    for tick, track, msg in merged:
        if msg.type == "set_tempo":
            if tempo_changes[-1][0] == tick:
                tempo_changes[-1] = (tick, msg.tempo)
            else:
                tempo_changes.append((tick, msg.tempo))
        elif msg.type == "time_signature":
            if meter is None:
                meter = MeterSpec.from_time_signature(msg.numerator, msg.denominator)
        elif msg.type == "note_on" and msg.velocity > 0:
            open_notes[(msg.channel, msg.note)].append((tick, msg.velocity, track))
        elif msg.type in ("note_on", "note_off"):
            pending = open_notes.get((msg.channel, msg.note))
            if pending:
                start, velocity, _ = pending.popleft()
                spans.append((start, tick, msg.channel, msg.note, velocity))
            else:
                log.debug(
                    "note-off without note-on (channel {channel}, pitch {pitch}) at tick {tick}",
                    channel=msg.channel,
                    pitch=msg.note,
                    tick=tick,
                )
    for (channel, pitch), pending in sorted(open_notes.items()):
        for start, velocity, track in pending:
            log.warn(
                "Dangling note-on (channel {channel}, pitch {pitch}) at tick {tick}, closed at track end",
                channel=channel,
                pitch=pitch,
                tick=start,
            )
            spans.append((start, track_ends[track], channel, pitch, velocity))

    tempo_map = _TempoMap(tempo_changes, division)
    events = []
    for start, stop, channel, pitch, velocity in spans:
        if stop <= start:
            log.warn(
                "Dropping zero-length note (channel {channel}, pitch {pitch}) at tick {tick}",
                channel=channel,
                pitch=pitch,
                tick=start,
            )
            continue
        onset_seconds = tempo_map.seconds(start)
        events.append(NoteEvent(
            onset_beats=Fraction(start, division),
            duration_beats=Fraction(stop - start, division),
            channel=channel,
            pitch=pitch,
            velocity=velocity,
            onset_seconds=float(onset_seconds),
            duration_seconds=float(tempo_map.seconds(stop) - onset_seconds),
        ))
    events.sort(key=NoteEvent.sort_key)
    if meter is None:
        log.info("No time signature found, measures require an explicit meter")
    return events, meter


def read_midi(path):
    """
    Read and parse a MIDI file.

    @param path: path of the file
    @type path: L{str}
    @return: see L{parse_midi}
    """
    with open(path, "rb") as fin:
        return parse_midi(fin.read())


def pitch_name(pitch):
    """
    Return the scientific pitch name of a MIDI pitch, preferring sharps.

    @param pitch: MIDI pitch number
    @type pitch: L{int}
    @return: the name, e.g. C{"A4"} for 69
    @rtype: L{str}
    @raises DomainError: if the pitch is outside of 0-127
    """
    if not 0 <= pitch <= 127:
        raise DomainError("pitch out of range: {}".format(pitch))
    return "{}{}".format(_PITCH_NAMES[pitch % 12], pitch // 12 - 1)


def assign_measures(events, meter, pickup_beats=0):
    """
    Annotate events with their 0-based measure index.

    Notes inside the pickup (before C{pickup_beats}) belong to the first
    measure.

    @param events: events to annotate
    @type events: L{list} of L{NoteEvent}
    @param meter: the meter of the piece
    @type meter: L{MeterSpec}
    @param pickup_beats: length of the anacrusis in beats
    @type pickup_beats: L{fractions.Fraction}
    @return: the annotated events, in the same order
    @rtype: L{list} of L{NoteEvent}
    """
    if meter is None:
        raise DomainError("measure segmentation requires the beats per measure (--beats-per-measure)")
    pickup_beats = Fraction(pickup_beats)
    if pickup_beats < 0:
        raise DomainError("pickup beats must not be negative")
    result = []
    for event in events:
        index = math.floor((event.onset_beats - pickup_beats) / meter.beats_per_measure)
        result.append(replace(event, measure=max(0, index)))
    return result


def measure_counts(events):
    """
    Count the events per measure.

    @param events: events annotated by L{assign_measures}
    @type events: L{list} of L{NoteEvent}
    @return: mapping of measure index to event count, ordered by index
    @rtype: L{dict}
    """
    counts = Counter(event.measure for event in events)
    return {measure: counts[measure] for measure in sorted(counts, key=lambda m: (m is None, m))}


def write_note_csv(events, fout):
    """
    Write the note table as CSV.

    @param events: events to write
    @type events: L{list} of L{NoteEvent}
    @param fout: text stream to write to
    @type fout: file-like
    """
    writer = csv.writer(fout, lineterminator="\n")
    writer.writerow(NOTE_CSV_HEADER)
    for e in events:
        writer.writerow((
            format_fraction(e.onset_beats),
            format_fraction(e.duration_beats),
            e.channel,
            e.pitch,
            e.velocity,
            format_real(e.onset_seconds),
            format_real(e.duration_seconds),
            "" if e.measure is None else e.measure,
        ))


def read_note_csv(fin, source=None):
    """
    Read a note table written by L{write_note_csv}.

    @param fin: text stream to read from
    @type fin: file-like
    @param source: name of the input, used in error messages
    @type source: L{str}
    @return: the events
    @rtype: L{list} of L{NoteEvent}
    @raises SchemaError: if a column is missing
    """
    reader = csv.DictReader(fin)
    fields = reader.fieldnames or []
    for column in NOTE_CSV_HEADER:
        if column not in fields:
            raise SchemaError(column, source)
    events = []
    for row in reader:
        measure = row["measure"]
        events.append(NoteEvent(
            onset_beats=to_fraction(row["onset_beats"]),
            duration_beats=to_fraction(row["duration_beats"]),
            channel=int(row["channel"]),
            pitch=int(row["pitch"]),
            velocity=int(row["velocity"]),
            onset_seconds=float(row["onset_seconds"]),
            duration_seconds=float(row["duration_seconds"]),
            measure=int(measure) if measure != "" else None,
        ))
    return events
