"""Color names and parsers.

Component colors are (r, g, b) floats in [0, 1].  The named palette is
a small built-in table; `rgb:R/G/B` takes floats in [0, 1] and
`rgbi:R/G/B` integers in [0, 255].  Names are case and space
insensitive.
"""

import colorsys

from .errors import ParseError

NAMED = {
    "white": (1.0, 1.0, 1.0),
    "black": (0.0, 0.0, 0.0),
    "grey": (0.5, 0.5, 0.5),
    "gray": (0.5, 0.5, 0.5),
    "red": (1.0, 0.0, 0.0),
    "green": (0.0, 1.0, 0.0),
    "blue": (0.0, 0.0, 1.0),
    "yellow": (1.0, 1.0, 0.0),
    "cyan": (0.0, 1.0, 1.0),
    "magenta": (1.0, 0.0, 1.0),
    "orange": (1.0, 0.647, 0.0),
    "purple": (0.627, 0.125, 0.941),
    "pink": (1.0, 0.753, 0.796),
    "brown": (0.647, 0.165, 0.165),
    "navy": (0.0, 0.0, 0.5),
    "teal": (0.0, 0.5, 0.5),
    "olive": (0.5, 0.5, 0.0),
    "maroon": (0.5, 0.0, 0.0),
    "lime": (0.196, 0.804, 0.196),
    "gold": (1.0, 0.843, 0.0),
    "coral": (1.0, 0.498, 0.314),
    "salmon": (0.98, 0.5, 0.447),
    "violet": (0.933, 0.51, 0.933),
    "indigo": (0.294, 0.0, 0.51),
    "turquoise": (0.251, 0.878, 0.816),
    "silver": (0.753, 0.753, 0.753),
}


def parse_color(text):
    """Parse a color name, rgb:a/b/c, or rgbi:A/B/C."""
    raw = text.strip()
    low = raw.lower().replace(" ", "")
    if low.startswith("rgb:") or low.startswith("rgbi:"):
        integer = low.startswith("rgbi:")
        body = low.split(":", 1)[1]
        parts = body.split("/")
        if len(parts) != 3:
            raise ParseError("expected three / separated channels",
                             len(low.split(":", 1)[0]) + 1)
        vals = []
        for p in parts:
            try:
                v = float(p)
            except ValueError:
                raise ParseError("bad channel value %r" % p, raw.find(p))
            if integer:
                v = v / 255.0
            if not 0.0 <= v <= 1.0:
                raise ParseError("channel out of range: %s" % p,
                                 raw.find(p))
            vals.append(v)
        return tuple(vals)
    if low in NAMED:
        return NAMED[low]
    raise ParseError("unknown color %r" % raw, 0)


def auto_color(index, hstart=0.0, hincr=0.15, satur=0.7, value=0.9):
    """Default component coloring: hue walks from hstart by hincr."""
    h = (hstart + index * hincr) % 1.0
    return tuple(colorsys.hsv_to_rgb(h, satur, value))


def format_color(color):
    return "rgb:%.3f/%.3f/%.3f" % tuple(color)
