"""
Exact beat arithmetic and its text encoding.

Beat positions are kept as L{fractions.Fraction} so that equal onsets
compare equal. This module converts them from and to the textual forms
used on the command line and in CSV files.

@var FRACTION_PATTERN: pattern of the C{n/d} notation
@type FRACTION_PATTERN: compiled regex
"""
import re
from fractions import Fraction
from numbers import Rational


FRACTION_PATTERN = re.compile(r"\A\s*([+-]?\d+)\s*/\s*(\d+)\s*\Z")


def to_fraction(value):
    """
    Convert a value to an exact fraction.

    Accepted are integers, fractions, the C{n/d} notation and decimal
    strings (C{"7.5"}). Floats are rejected, they are not exact.

    @param value: value to convert
    @type value: L{int}, L{fractions.Fraction} or L{str}
    @return: the exact value
    @rtype: L{fractions.Fraction}
    @raises ValueError: if the value can not be converted exactly
    """
    if isinstance(value, bool):
        raise ValueError("Expected a number, got {!r}".format(value))
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, bytes):
        value = value.decode("ascii")
    if not isinstance(value, str):
        raise ValueError("Can not convert {!r} to an exact fraction".format(value))
    match = FRACTION_PATTERN.match(value)
    if match is not None:
        num, den = int(match.group(1)), int(match.group(2))
        if den == 0:
            raise ValueError("Zero denominator in {!r}".format(value))
        return Fraction(num, den)
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError("Not an exact number: {!r}".format(value))


def is_terminating(value):
    """
    Check whether a fraction has a finite decimal expansion.

    @param value: fraction to check
    @type value: L{fractions.Fraction}
    @return: whether the denominator only has the prime factors 2 and 5
    @rtype: L{bool}
    """
    den = value.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    return den == 1


def format_fraction(value):
    """
    Encode a fraction as text which L{to_fraction} reads back exactly.

    Terminating fractions are written as decimals (C{"7.5"}, C{"3"}),
    all others in the C{n/d} notation (C{"1/3"}).

    @param value: value to encode
    @type value: L{fractions.Fraction} or L{int}
    @return: the encoded value
    @rtype: L{str}
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    if not is_terminating(value):
        return "{}/{}".format(value.numerator, value.denominator)
    digits = 0
    scaled = value
    while scaled.denominator != 1:
        scaled *= 10
        digits += 1
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    return "{}{}.{}".format(sign, text[:-digits], text[-digits:])


def format_real(value):
    """
    Encode a real number as text which round-trips through L{float}.

    @param value: value to encode
    @type value: L{float}, L{int} or L{fractions.Fraction}
    @return: the shortest round-tripping representation
    @rtype: L{str}
    """
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, int):
        return str(value)
    return repr(float(value))
