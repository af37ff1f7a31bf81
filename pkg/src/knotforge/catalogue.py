"""Bundled sample knots and links, addressable by load name.

A small generated stand-in for a full catalogue: names follow the
crossing.index convention (3.1 trefoil, 4.1 figure eight, 2.2.1 Hopf
link, ...).  Entries are built on demand and scaled to a safe size.
"""

import numpy as np

from . import construct
from .polylink import Component, PolyLink, fitto

# coordinates of the classic minimal Hopf link (two triangles)
_HOPF_ROWS = [
    [[0.10, -3.29, -0.49], [1.11, 0.69, 0.13], [-1.64, -0.27, 0.26]],
    [[0.01, 2.30, 0.44], [-0.07, 2.10, -0.87], [0.48, -1.55, 0.53]],
]


def _hopf():
    comps = [Component(np.array(rows), closed=True) for rows in _HOPF_ROWS]
    return PolyLink(comps)


def _scaled(link, mindist=0.5):
    return fitto(link, "mindist", mindist)


_BUILDERS = {
    "0.1": lambda: construct.unknot(50, 5),
    "unknot": lambda: construct.unknot(50, 5),
    "2.2.1": _hopf,
    "3.1": lambda: _scaled(construct.torus(2, 3, 60, 3.0, 1.2)),
    "4.1": lambda: _scaled(
        construct.braid_close(construct.parse_braid("(aB)^2"))),
    "5.1": lambda: _scaled(construct.torus(2, 5, 80, 3.0, 1.2)),
    "5.2": lambda: _scaled(construct.conway_pretzel("2,3")),
    "7.1": lambda: _scaled(construct.torus(2, 7, 100, 3.0, 1.2)),
    "8.19": lambda: _scaled(construct.torus(3, 4, 90, 3.0, 1.2)),
    "2.2.2": lambda: _scaled(construct.torus(2, 4, 60, 3.0, 1.2)),
    "4.2.1": lambda: _scaled(construct.torus(2, 4, 60, 3.0, 1.2)),
    "6.2.3": lambda: _scaled(construct.torus(2, 6, 90, 3.0, 1.2)),
    "6.3.3": lambda: _scaled(construct.torus(3, 3, 90, 3.0, 1.2)),
    "2.1": lambda: construct.chain(2),
    "chain3": lambda: construct.chain(3),
}


def names():
    return sorted(_BUILDERS)


def has(name):
    return name in _BUILDERS


def build(name):
    if name not in _BUILDERS:
        raise KeyError(name)
    return _BUILDERS[name]()


def component_count(name):
    return build(name).ncomponents


def random_name(rng_gen, ncomponents=None):
    """Uniform pick from the bundle, optionally by component count."""
    pool = names()
    if ncomponents is not None:
        pool = [n for n in pool if component_count(n) == ncomponents]
    if not pool:
        return None
    return pool[int(rng_gen.integers(0, len(pool)))]
