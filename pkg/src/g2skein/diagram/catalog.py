"""Ready-made closed diagrams used by tests, the self-test and the CLI."""

from __future__ import annotations

import random
from itertools import product

from . import maps
from .maps import Diagram, MapBuilder, PlanarityError

__all__ = [
    "loop",
    "theta",
    "k4",
    "prism",
    "random_cubic",
    "with_tadpole",
    "mirror",
    "standard_catalog",
]


def loop(n: int = 1) -> Diagram:
    return maps.identity(0).with_loops(n)


def theta() -> Diagram:
    return maps.trace_close(maps.compose(maps.split(1, 1), maps.merge(1, 1)))


def k4() -> Diagram:
    i = maps.compose(maps.split(1, 1), maps.merge(1, 1))
    return maps.trace_close(maps.compose(maps.rotate(i), i))


def prism(n: int) -> Diagram:
    """Two concentric n-cycles joined by n spokes (n = 4 is the cube)."""
    if n < 2:
        raise ValueError("a prism needs n >= 2")
    b = MapBuilder()
    # per vertex: (toward next, toward previous, spoke)
    outer = [(b.half(), b.half(), b.half()) for _ in range(n)]
    inner = [(b.half(), b.half(), b.half()) for _ in range(n)]
    for i in range(n):
        j = (i + 1) % n
        b.pair(outer[i][0], outer[j][1])
        b.pair(inner[i][0], inner[j][1])
        b.pair(outer[i][2], inner[i][2])
        nxt, prev, spoke = outer[i]
        b.vertex(nxt, spoke, prev)
        nxt, prev, spoke = inner[i]
        b.vertex(spoke, nxt, prev)
    return b.freeze()


def _builder(d: Diagram) -> MapBuilder:
    b = MapBuilder()
    ids = b.absorb(d)
    b.bottom = [ids[h] for h in d.bottom]
    b.top = [ids[h] for h in d.top]
    return b


def _subdivide(b: MapBuilder, h: int, flip: bool) -> int:
    """Put a new vertex in the middle of the edge at h; return its free half-edge."""
    e = b.inv[h]
    x, y, z = b.half(), b.half(), b.half()
    b.pair(h, x)
    b.pair(e, y)
    if flip:
        b.vertex(x, z, y)
    else:
        b.vertex(x, y, z)
    return z


def _first_planar(candidates) -> Diagram:
    for build in candidates:
        try:
            return build()
        except PlanarityError:
            continue
    raise RuntimeError("no planar way to insert the new edge")


def add_chord(d: Diagram, h1: int, h2: int) -> Diagram:
    """Join the midpoints of the edges at h1 and h2, which share a face."""

    def attempt(f1, f2):
        def build():
            b = _builder(d)
            z1 = _subdivide(b, h1, f1)
            z2 = _subdivide(b, h2, f2)
            b.pair(z1, z2)
            return b.freeze()

        return build

    return _first_planar(attempt(f1, f2) for f1, f2 in product((False, True), repeat=2))


def random_cubic(vertices: int, rng: random.Random) -> Diagram:
    """A random planar cubic graph grown from theta by inserting chords in faces."""
    if vertices < 2 or vertices % 2:
        raise ValueError("a cubic graph has an even number (>= 2) of vertices")
    d = theta()
    while d.num_vertices < vertices:
        face = rng.choice(maps.face_orbits(d))
        options = [
            (x, y)
            for i, x in enumerate(face)
            for y in face[i + 1 :]
            if y != d.inv[x]
        ]
        if not options:
            continue
        h1, h2 = rng.choice(options)
        d = add_chord(d, h1, h2)
    return d


def with_tadpole(d: Diagram, h: int = None) -> Diagram:
    """Hang a lollipop (an edge ending in a one-vertex loop) off the edge at h."""
    if h is None:
        h = d.k + d.m if d.size > d.k + d.m else None
    if h is None:
        raise ValueError("diagram has no edge to hang a tadpole from")

    def attempt(flip):
        def build():
            b = _builder(d)
            z = _subdivide(b, h, flip)
            s, l1, l2 = b.half(), b.half(), b.half()
            b.vertex(s, l1, l2)
            b.pair(l1, l2)
            b.pair(z, s)
            return b.freeze()

        return build

    return _first_planar(attempt(f) for f in (False, True))


def mirror(d: Diagram) -> Diagram:
    """Reflect a closed diagram (reverse every vertex rotation)."""
    if not d.is_closed:
        raise ValueError("mirror is only defined here for closed diagrams")
    return maps.adjoint(d)


def standard_catalog(seed: int = 0, count: int = 12, max_vertices: int = 12) -> list[tuple[str, Diagram]]:
    """Named closed diagrams with at most max_vertices vertices."""
    out = [("loop", loop()), ("theta", theta()), ("K4", k4())]
    for n in range(2, max_vertices // 2 + 1):
        out.append((f"prism{n}", prism(n)))
    rng = random.Random(seed)
    for i in range(count):
        v = rng.randrange(4, max_vertices + 1, 2)
        out.append((f"random{i}_v{v}", random_cubic(v, rng)))
    return out
