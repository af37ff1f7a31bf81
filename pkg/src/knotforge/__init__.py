"""knotforge: a headless polygonal knot engine.

Type-preserving relaxation, exact invariants (average crossing number,
writhe, linking numbers), crossing codes, knot constructors, file and
diagram emitters, and a scriptable command language with a small
network service for the browser viewer.
"""

__version__ = "0.1.0"

from .polylink import Component, PolyLink, ViewTransform  # noqa: F401
from .dynamics import RelaxConfig, RelaxState, check_safe  # noqa: F401
