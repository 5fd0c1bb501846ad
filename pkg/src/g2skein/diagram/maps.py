"""Planar trivalent diagrams stored as combinatorial maps.

Half-edges are the integers ``0..n-1``.  ``rot`` sends each half-edge at an
internal vertex to the next one counterclockwise; boundary half-edges are the
fixed points of ``rot``.  ``inv`` is the fixed-point-free involution pairing
half-edges into edges.  The boundary of a ``Mor(k, m)`` diagram is read
counterclockwise around the rectangle: bottom left to right, then top right
to left.

Every Diagram is stored in canonical labelling: boundary half-edges are
``0..k+m-1`` (bottom, then top), the rest are numbered by a breadth-first walk
from the boundary, and closed components follow in a canonical order.  Two
diagrams are isotopic (rel boundary) exactly when their tuples coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

__all__ = [
    "Diagram",
    "DiagramError",
    "PlanarityError",
    "ArityError",
    "MapBuilder",
    "identity",
    "cup",
    "cap",
    "split",
    "merge",
    "compose",
    "tensor",
    "adjoint",
    "rotate",
    "trace_close",
    "faces",
    "internal_faces",
    "canonical",
    "has_tadpole",
    "vanishes_by_pop",
    "closed_components",
    "disjoint_union",
]


class DiagramError(ValueError):
    pass


class PlanarityError(DiagramError):
    pass


class ArityError(DiagramError):
    pass


@dataclass(frozen=True)
class Diagram:
    rot: tuple[int, ...]
    inv: tuple[int, ...]
    k: int
    m: int
    loops: int = 0

    @property
    def bottom(self) -> tuple[int, ...]:
        return tuple(range(self.k))

    @property
    def top(self) -> tuple[int, ...]:
        return tuple(range(self.k, self.k + self.m))

    @property
    def size(self) -> int:
        return len(self.rot)

    @cached_property
    def vertices(self) -> tuple[tuple[int, int, int], ...]:
        out = []
        for h in range(self.k + self.m, len(self.rot)):
            a = self.rot[h]
            if h < a and h < self.rot[a]:
                out.append((h, a, self.rot[a]))
        return tuple(out)

    @property
    def num_vertices(self) -> int:
        return (len(self.rot) - self.k - self.m) // 3

    @property
    def is_closed(self) -> bool:
        return self.k == 0 and self.m == 0

    def key(self) -> tuple:
        return (self.k, self.m, self.loops, self.rot, self.inv)

    def __lt__(self, other: "Diagram") -> bool:
        return _sort_key(self) < _sort_key(other)

    def with_loops(self, loops: int) -> "Diagram":
        return Diagram(self.rot, self.inv, self.k, self.m, loops)

    def __repr__(self) -> str:
        return (
            f"Diagram(k={self.k}, m={self.m}, vertices={self.num_vertices}, "
            f"loops={self.loops})"
        )


def _sort_key(d: Diagram) -> tuple:
    return (d.k, d.m, d.num_vertices, d.loops, d.rot, d.inv)


class MapBuilder:
    """Mutable scratch space for assembling and rewriting maps."""

    def __init__(self):
        self.rot: dict[int, int] = {}
        self.inv: dict[int, int] = {}
        self.bottom: list[int] = []
        self.top: list[int] = []
        self.loops = 0
        self._next = 0

    def half(self) -> int:
        h = self._next
        self._next += 1
        self.rot[h] = h
        return h

    def edge(self) -> tuple[int, int]:
        a, b = self.half(), self.half()
        self.inv[a] = b
        self.inv[b] = a
        return a, b

    def pair(self, a: int, b: int) -> None:
        self.inv[a] = b
        self.inv[b] = a

    def vertex(self, a: int, b: int, c: int) -> None:
        """Counterclockwise cycle a -> b -> c."""
        self.rot[a] = b
        self.rot[b] = c
        self.rot[c] = a

    def absorb(self, d: Diagram) -> list[int]:
        """Copy d in; returns the new name of each of d's half-edges."""
        base = self._next
        self._next += d.size
        for h in range(d.size):
            self.rot[base + h] = base + d.rot[h]
            self.inv[base + h] = base + d.inv[h]
        self.loops += d.loops
        return [base + h for h in range(d.size)]

    def delete(self, h: int) -> None:
        del self.rot[h]
        del self.inv[h]

    def detach(self, h: int) -> None:
        """Cut h out of its vertex, leaving it as a free stub."""
        a = self.rot[h]
        if a == h:
            return
        b = self.rot[a]
        if b == h:
            self.rot[a] = a
        else:
            # trivalent only: the remaining two become stubs as well, callers
            # detach whole vertices
            self.rot[b] = a
            self.rot[a] = b
        self.rot[h] = h

    def fuse(self, a: int, b: int) -> None:
        """Join the strands ending at stubs a and b, deleting both stubs."""
        pa, pb = self.inv[a], self.inv[b]
        if pa == b:
            self.loops += 1
        else:
            self.inv[pa] = pb
            self.inv[pb] = pa
        self.delete(a)
        self.delete(b)

    def freeze(self, check: bool = True) -> Diagram:
        d = _canonicalize(self.rot, self.inv, self.bottom, self.top, self.loops)
        if check:
            validate(d)
        return d


# ---- canonical labelling ------------------------------------------------


def _bfs(rot, inv, roots: Sequence[int]) -> tuple[list[int], tuple]:
    label = {}
    order = []
    for r in roots:
        label[r] = len(order)
        order.append(r)
    code = []
    i = 0
    while i < len(order):
        h = order[i]
        i += 1
        for nb in (inv[h], rot[h]):
            if nb not in label:
                label[nb] = len(order)
                order.append(nb)
        code.append(label[inv[h]])
        code.append(label[rot[h]])
    return order, tuple(code)


def _closed_component_order(rot, inv, comp: list[int]) -> tuple[list[int], tuple]:
    best = None
    for h in comp:
        order, code = _bfs(rot, inv, [h])
        if best is None or code < best[1]:
            best = (order, code)
    return best


def _canonicalize(rot, inv, bottom, top, loops) -> Diagram:
    roots = list(bottom) + list(top)
    order, _ = _bfs(rot, inv, roots) if roots else ([], ())
    seen = set(order)
    rest = [h for h in rot if h not in seen]
    if rest:
        comps = []
        while rest:
            start = rest[0]
            comp, _ = _bfs(rot, inv, [start])
            cs = set(comp)
            seen |= cs
            comps.append(_closed_component_order(rot, inv, comp))
            rest = [h for h in rest if h not in cs]
        comps.sort(key=lambda oc: (len(oc[1]), oc[1]))
        for o, _ in comps:
            order.extend(o)
    label = {h: i for i, h in enumerate(order)}
    new_rot = tuple(label[rot[h]] for h in order)
    new_inv = tuple(label[inv[h]] for h in order)
    return Diagram(new_rot, new_inv, len(bottom), len(top), loops)


def canonical(d: Diagram) -> tuple:
    """Canonical key; equal iff the maps are isomorphic rel boundary."""
    return d.key()


def relabel(d: Diagram, perm: Sequence[int]) -> tuple[dict, dict, list, list]:
    """Apply a half-edge renaming h -> perm[h]; returns raw builder data."""
    rot = {perm[h]: perm[d.rot[h]] for h in range(d.size)}
    inv = {perm[h]: perm[d.inv[h]] for h in range(d.size)}
    return rot, inv, [perm[h] for h in d.bottom], [perm[h] for h in d.top]


def from_raw(rot: dict, inv: dict, bottom: Sequence[int], top: Sequence[int], loops: int = 0,
             check: bool = True) -> Diagram:
    d = _canonicalize(rot, inv, list(bottom), list(top), loops)
    if check:
        validate(d)
    return d


# ---- structure ------------------------------------------------------------


def _boundary_cycle(d: Diagram) -> list[int]:
    # counterclockwise around the rectangle as seen from inside
    return list(d.bottom) + list(reversed(d.top))


def _orbits(perm: Sequence[int], domain: Iterable[int]) -> list[list[int]]:
    seen = set()
    out = []
    for h in domain:
        if h in seen:
            continue
        orb = []
        x = h
        while x not in seen:
            seen.add(x)
            orb.append(x)
            x = perm[x]
        out.append(orb)
    return out


def _closure_rot(d: Diagram) -> list[int]:
    rot = list(d.rot)
    cyc = _boundary_cycle(d)
    # the outer vertex sees the boundary in the opposite rotational sense
    for i, h in enumerate(cyc):
        rot[h] = cyc[i - 1]
    return rot


def validate(d: Diagram) -> None:
    """Check the map invariants, including planarity with the boundary outside."""
    n = d.size
    nb = d.k + d.m
    if sorted(d.rot) != list(range(n)) or sorted(d.inv) != list(range(n)):
        raise DiagramError("rot and inv must be permutations")
    for h in range(n):
        if d.inv[h] == h or d.inv[d.inv[h]] != h:
            raise DiagramError(f"inv is not a fixed-point-free involution at {h}")
        if h < nb:
            if d.rot[h] != h:
                raise DiagramError(f"boundary half-edge {h} is attached to a vertex")
        else:
            a = d.rot[h]
            if a == h or d.rot[d.rot[a]] != h or a < nb:
                raise DiagramError(f"half-edge {h} is not on a trivalent vertex")
    if d.loops < 0:
        raise DiagramError("negative loop count")
    euler = euler_characteristic(d)
    if euler != 2 * _num_components_closure(d):
        raise PlanarityError(f"map is not planar with the boundary outside (chi={euler})")


def euler_characteristic(d: Diagram) -> int:
    """V - E + F of the closure (boundary joined to one outer vertex)."""
    rot = _closure_rot(d)
    phi = [rot[d.inv[h]] for h in range(d.size)]
    nf = len(_orbits(phi, range(d.size)))
    nv = d.num_vertices + (1 if d.k + d.m else 0)
    return nv - d.size // 2 + nf


def _num_components_closure(d: Diagram) -> int:
    parent = list(range(d.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    rot = _closure_rot(d)
    for h in range(d.size):
        union(h, rot[h])
        union(h, d.inv[h])
    return len({find(h) for h in range(d.size)})


def faces(d: Diagram) -> list[int]:
    """Face sizes of a closed diagram, ascending; free loops are not faces."""
    if not d.is_closed:
        raise DiagramError("faces() needs a closed diagram")
    phi = [d.rot[d.inv[h]] for h in range(d.size)]
    return sorted(len(o) for o in _orbits(phi, range(d.size)))


def face_orbits(d: Diagram) -> list[list[int]]:
    """All orbits of rot∘inv (boundary stubs act as univalent vertices)."""
    phi = [d.rot[d.inv[h]] for h in range(d.size)]
    return _orbits(phi, range(d.size))


def internal_faces(d: Diagram) -> list[list[int]]:
    """Faces that do not touch the boundary, as half-edge orbits."""
    nb = d.k + d.m
    return [o for o in face_orbits(d) if min(o) >= nb]


def vertex_of(d: Diagram) -> list[int]:
    """Vertex id per half-edge: the smallest half-edge of its rot-cycle."""
    return [min(h, d.rot[h], d.rot[d.rot[h]]) for h in range(d.size)]


def has_tadpole(d: Diagram) -> bool:
    nb = d.k + d.m
    for h in range(nb, d.size):
        e = d.inv[h]
        if e == d.rot[h] or e == d.rot[d.rot[h]]:
            return True
    return False


def vanishes_by_pop(d: Diagram) -> bool:
    """True if some piece of d is attached by a single edge and has no boundary.

    Such a piece is a morphism 0 -> 1, and that space is zero; a tadpole is
    the smallest instance.
    """
    if has_tadpole(d):
        return True
    vid = vertex_of(d)
    nb = d.k + d.m
    adj: dict[int, list[tuple[int, int]]] = {}
    for h in range(d.size):
        adj.setdefault(vid[h], [])
    for h in range(d.size):
        e = d.inv[h]
        if h < e:
            adj[vid[h]].append((vid[e], h))
            adj[vid[e]].append((vid[h], h))
    is_boundary = {v: (v < nb) for v in adj}
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    below: dict[int, int] = {}
    counter = 0
    for root in adj:
        if root in disc:
            continue
        comp_start = counter
        # iterative Tarjan bridge search with boundary counts per subtree
        stack = [(root, -1, iter(adj[root]))]
        disc[root] = low[root] = counter
        counter += 1
        below[root] = int(is_boundary[root])
        bridges = []
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for w, eid in it:
                if eid == via:
                    continue
                if w in disc:
                    low[v] = min(low[v], disc[w])
                else:
                    disc[w] = low[w] = counter
                    counter += 1
                    below[w] = int(is_boundary[w])
                    stack.append((w, eid, iter(adj[w])))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            if stack:
                parent = stack[-1][0]
                low[parent] = min(low[parent], low[v])
                below[parent] += below[v]
                if low[v] > disc[parent]:
                    bridges.append(below[v])
        total = below[root]
        del comp_start
        for inside in bridges:
            if inside == 0 or inside == total:
                return True
    return False


def closed_components(d: Diagram) -> tuple[Diagram, list[Diagram]]:
    """Split off the components that do not touch the boundary.

    Returns the boundary part (carrying d's free loops) and the closed
    connected components, each without loops.
    """
    nb = d.k + d.m
    order, _ = _bfs(d.rot, d.inv, list(range(nb))) if nb else ([], ())
    reached = set(order)
    if len(reached) == d.size:
        return d, []
    comps = []
    rest = [h for h in range(d.size) if h not in reached]
    done = set()
    for h in rest:
        if h in done:
            continue
        comp, _ = _bfs(d.rot, d.inv, [h])
        done.update(comp)
        rot = {x: d.rot[x] for x in comp}
        inv = {x: d.inv[x] for x in comp}
        comps.append(_canonicalize(rot, inv, [], [], 0))
    rot = {x: d.rot[x] for x in order}
    inv = {x: d.inv[x] for x in order}
    main = _canonicalize(rot, inv, list(d.bottom), list(d.top), d.loops)
    return main, comps


# ---- generators -------------------------------------------------------------


def _strands(b: MapBuilder, n: int) -> tuple[list[int], list[int]]:
    bots, tops = [], []
    for _ in range(n):
        x, y = b.edge()
        bots.append(x)
        tops.append(y)
    return bots, tops


def _check_pos(n: int, i: int, width: int) -> None:
    if n < 0:
        raise ArityError(f"negative strand count {n}")
    if not 1 <= i <= width:
        raise ArityError(f"position {i} out of range 1..{width}")


def identity(n: int) -> Diagram:
    if n < 0:
        raise ArityError(f"negative strand count {n}")
    b = MapBuilder()
    bots, tops = _strands(b, n)
    b.bottom, b.top = bots, tops
    return b.freeze()


def cup(n: int, i: int) -> Diagram:
    """Mor(n, n+2): a new arc whose ends are top positions i, i+1."""
    _check_pos(n, i, n + 1)
    b = MapBuilder()
    bots, tops = _strands(b, n)
    x, y = b.edge()
    b.bottom = bots
    b.top = tops[: i - 1] + [x, y] + tops[i - 1 :]
    return b.freeze()


def cap(n: int, i: int) -> Diagram:
    """Mor(n+2, n): bottom positions i, i+1 joined by an arc."""
    _check_pos(n, i, n + 1)
    b = MapBuilder()
    bots, tops = _strands(b, n)
    x, y = b.edge()
    b.bottom = bots[: i - 1] + [x, y] + bots[i - 1 :]
    b.top = tops
    return b.freeze()


def split(n: int, i: int) -> Diagram:
    """Mor(n, n+1): strand i forks into top positions i, i+1."""
    _check_pos(n, i, n)
    b = MapBuilder()
    bots, tops = _strands(b, n - 1)
    down_end, down = b.edge()
    left, left_end = b.edge()
    right, right_end = b.edge()
    b.vertex(down, right, left)
    b.bottom = bots[: i - 1] + [down_end] + bots[i - 1 :]
    b.top = tops[: i - 1] + [left_end, right_end] + tops[i - 1 :]
    return b.freeze()


def merge(n: int, i: int) -> Diagram:
    """Mor(n+1, n): bottom positions i, i+1 meet and leave at top position i."""
    _check_pos(n, i, n)
    b = MapBuilder()
    bots, tops = _strands(b, n - 1)
    up, up_end = b.edge()
    left_end, left = b.edge()
    right_end, right = b.edge()
    b.vertex(up, left, right)
    b.bottom = bots[: i - 1] + [left_end, right_end] + bots[i - 1 :]
    b.top = tops[: i - 1] + [up_end] + tops[i - 1 :]
    return b.freeze()


# ---- combinators --------------------------------------------------------------


def compose(upper: Diagram, lower: Diagram) -> Diagram:
    """upper ∘ lower: lower first, upper stacked on top of it."""
    if lower.m != upper.k:
        raise ArityError(f"cannot compose Mor({upper.k},{upper.m}) after Mor({lower.k},{lower.m})")
    b = MapBuilder()
    lo = b.absorb(lower)
    up = b.absorb(upper)
    for x, y in zip(lower.top, upper.bottom):
        b.fuse(lo[x], up[y])
    b.bottom = [lo[h] for h in lower.bottom]
    b.top = [up[h] for h in upper.top]
    return b.freeze()


def tensor(left: Diagram, right: Diagram) -> Diagram:
    b = MapBuilder()
    lf = b.absorb(left)
    rt = b.absorb(right)
    b.bottom = [lf[h] for h in left.bottom] + [rt[h] for h in right.bottom]
    b.top = [lf[h] for h in left.top] + [rt[h] for h in right.top]
    return b.freeze()


disjoint_union = tensor


def adjoint(d: Diagram) -> Diagram:
    """Reflect across a horizontal line."""
    b = MapBuilder()
    ids = b.absorb(d)
    for h in range(d.size):
        # reversing every rotation cycle is the mirror image
        b.rot[ids[d.rot[h]]] = ids[h]
    b.bottom = [ids[h] for h in d.top]
    b.top = [ids[h] for h in d.bottom]
    return b.freeze()


def rotate(d: Diagram) -> Diagram:
    """One click: the leftmost bottom point moves to the leftmost top slot."""
    if d.k != d.m:
        raise ArityError(f"rotate needs k = m, got Mor({d.k},{d.m})")
    b = MapBuilder()
    ids = b.absorb(d)
    cyc = [ids[h] for h in _boundary_cycle(d)]
    cyc = cyc[1:] + cyc[:1]
    b.bottom = cyc[: d.k]
    b.top = list(reversed(cyc[d.k :]))
    return b.freeze()


def trace_close(d: Diagram) -> Diagram:
    """Join top i to bottom i around the right-hand side."""
    if d.k != d.m:
        raise ArityError(f"trace needs k = m, got Mor({d.k},{d.m})")
    b = MapBuilder()
    ids = b.absorb(d)
    for x, y in zip(d.top, d.bottom):
        b.fuse(ids[x], ids[y])
    return b.freeze()
