"""Typed parameter registry for the interpreter session."""

from .colors import format_color, parse_color
from .errors import KnotforgeError


class UnknownParameter(KnotforgeError):
    pass


class BadParameterValue(KnotforgeError):
    pass


_TRUE = {"true", "on", "yes", "1"}
_FALSE = {"false", "off", "no", "0"}

# name -> (type, default); types: real, int, bool, color
DEFAULTS = [
    ("close", "real", 0.12),
    ("max-dir", "real", 0.1),
    ("dt", "real", 0.05),
    ("stusplit", "int", 0),
    ("dbmin", "int", 3),
    ("dstep", "int", 1),
    ("beadlimit", "int", 4000),
    ("vscale", "real", 1.0),
    ("sradius", "real", 0.3),
    ("cradius", "real", 0.25),
    ("bradius", "real", 0.35),
    ("ncur", "int", 5),
    ("nseg", "int", 12),
    ("N-torus", "int", 50),
    ("R-torus", "real", 11.0),
    ("d-torus", "real", 2.0),
    ("psmode", "int", 40),
    ("pserase", "real", 1.5),
    ("background", "color", (0.5, 0.5, 0.5)),
    ("hstart", "real", 0.0),
    ("hincr", "real", 0.15),
    ("satur", "real", 0.7),
    ("value", "real", 0.9),
    ("charge", "real", 1.0),
    ("power", "real", 4.0),
    ("hooke", "real", 1.0),
    ("hooke_a", "real", 1.0),
    ("spring", "real", 1.0),
    ("velmag", "real", 0.1),
    ("gravmag", "real", 0.1),
    ("thermmag", "real", 0.01),
    ("tanmag", "real", 0.1),
    ("anchmag", "real", 1.0),
    ("duc", "bool", False),
    ("undamped", "bool", False),
    ("stuck_factor", "real", 1.5),
    ("stuck_eps", "real", 0.01),
    # force toggles, settable like any parameter (velfo = on)
    ("elec", "bool", True),
    ("mech", "bool", True),
    ("amech", "bool", False),
    ("velfo", "bool", False),
    ("grav", "bool", False),
    ("anch", "bool", False),
    ("therm", "bool", False),
    ("tanf", "bool", False),
]


class ParameterStore:
    """Name -> typed value map with string coercion on assignment."""

    def __init__(self):
        self.types = {name: kind for name, kind, _ in DEFAULTS}
        self.values = {name: default for name, _, default in DEFAULTS}

    def __contains__(self, name):
        return name in self.values

    def get(self, name):
        if name not in self.values:
            raise UnknownParameter("unknown parameter %r" % name)
        return self.values[name]

    def set(self, name, value):
        if name not in self.values:
            raise UnknownParameter("unknown parameter %r" % name)
        kind = self.types[name]
        self.values[name] = self._coerce(name, kind, value)

    def _coerce(self, name, kind, value):
        if kind == "real":
            try:
                return float(value)
            except (TypeError, ValueError):
                raise BadParameterValue("%s needs a number" % name)
        if kind == "int":
            try:
                f = float(value)
            except (TypeError, ValueError):
                raise BadParameterValue("%s needs an integer" % name)
            if f != int(f):
                raise BadParameterValue("%s needs an integer" % name)
            return int(f)
        if kind == "bool":
            if isinstance(value, bool):
                return value
            text = str(value).strip().lower()
            if text in _TRUE:
                return True
            if text in _FALSE:
                return False
            raise BadParameterValue("%s needs true or false" % name)
        if kind == "color":
            if isinstance(value, tuple):
                return value
            return parse_color(str(value))
        raise BadParameterValue("bad parameter kind %r" % kind)

    def reset(self):
        self.values = {name: default for name, _, default in DEFAULTS}

    def listing(self, prefix=""):
        lines = []
        for name in sorted(self.values):
            if prefix and not name.startswith(prefix):
                continue
            value = self.values[name]
            if self.types[name] == "color":
                value = format_color(value)
            elif self.types[name] == "bool":
                value = "true" if value else "false"
            lines.append("%s = %s" % (name, value))
        return lines
