"""Ribbon graph models of closed oriented surfaces and curves on them.

A half-edge is a pair (edge, +1) for the tail end or (edge, -1) for the head
end.  Each vertex carries the counterclockwise cyclic order of its half-edges.
Faces are the cycles of h -> rot(iota(h)), where iota swaps the two ends of
an edge and rot is the successor in the rotation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .symplectic import UsageError

HalfEdge = tuple[int, int]
Letter = tuple[int, int]


@dataclass(frozen=True)
class RibbonGraph:
    n_vertices: int
    tails: tuple[int, ...]
    heads: tuple[int, ...]
    rotation: tuple[tuple[HalfEdge, ...], ...]

    @property
    def n_edges(self) -> int:
        return len(self.tails)

    def vertex_of(self, h: HalfEdge) -> int:
        e, s = h
        return self.tails[e] if s > 0 else self.heads[e]

    @cached_property
    def _position(self) -> dict[HalfEdge, tuple[int, int]]:
        return {h: (v, k) for v, rot in enumerate(self.rotation) for k, h in enumerate(rot)}

    def position(self, h: HalfEdge) -> tuple[int, int]:
        """(vertex, index in its rotation)."""
        return self._position[h]

    def next_ccw(self, h: HalfEdge) -> HalfEdge:
        v, k = self._position[h]
        rot = self.rotation[v]
        return rot[(k + 1) % len(rot)]

    def faces(self) -> list[list[HalfEdge]]:
        """Face boundaries; each half-edge h starts a traversal of its edge
        in the direction leaving h's vertex."""
        seen: set[HalfEdge] = set()
        out = []
        for rot in self.rotation:
            for h in rot:
                if h in seen:
                    continue
                cyc, cur = [], h
                while cur not in seen:
                    seen.add(cur)
                    cyc.append(cur)
                    cur = self.next_ccw((cur[0], -cur[1]))
                out.append(cyc)
        return out

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + len(self.faces())

    def genus(self) -> int:
        chi = self.euler_characteristic()
        if chi % 2:
            raise ValueError("odd Euler characteristic")
        return (2 - chi) // 2

    def boundary_matrix(self) -> np.ndarray:
        """V x E integer matrix of the cellular boundary d(e) = head - tail."""
        d = np.zeros((self.n_vertices, self.n_edges), dtype=object)
        for e in range(self.n_edges):
            d[self.heads[e], e] += 1
            d[self.tails[e], e] -= 1
        return d

    def face_chains(self) -> np.ndarray:
        """F x E matrix whose rows are the face boundary 1-chains."""
        faces = self.faces()
        out = np.zeros((len(faces), self.n_edges), dtype=object)
        for i, cyc in enumerate(faces):
            for e, s in cyc:
                out[i, e] += s
        return out

    def is_connected(self) -> bool:
        adj = {v: set() for v in range(self.n_vertices)}
        for e in range(self.n_edges):
            adj[self.tails[e]].add(self.heads[e])
            adj[self.heads[e]].add(self.tails[e])
        seen, stack = {0}, [0]
        while stack:
            v = stack.pop()
            for w in adj[v] - seen:
                seen.add(w)
                stack.append(w)
        return len(seen) == self.n_vertices

    def intersection(self, x, y) -> int:
        """Algebraic intersection of two 1-cycles given as edge vectors.

        y is pushed off the graph to one fixed side of every edge; the copy
        then meets x only inside vertex discs, where it runs between corners
        crossing half-edges.  Corner k lies between rotation entries k and
        k + 1.  A crossing of x's outward flow by a counterclockwise strand
        counts +1.
        """
        x = [int(t) for t in x]
        y = [int(t) for t in y]
        total = 0
        for rot in self.rotation:
            d = len(rot)
            out_flow = [0] * d
            for k, (e, s) in enumerate(rot):
                if y[e]:
                    if s > 0:
                        out_flow[k] += y[e]
                    else:
                        out_flow[(k - 1) % d] -= y[e]
            if sum(out_flow):
                raise ValueError("second argument is not a cycle")
            t = 0
            for k, (e, s) in enumerate(rot):
                if k:
                    t -= out_flow[k - 1]
                total += s * x[e] * t
        return total


# -- the one-vertex model of S_g ----------------------------------------------------

def edge_label(e: int) -> str:
    return ("a" if e % 2 == 0 else "b") + str(e // 2 + 1)


def letter_str(letter: Letter) -> str:
    e, s = letter
    return edge_label(e) + ("" if s > 0 else "^-1")


def start(letter: Letter) -> HalfEdge:
    e, s = letter
    return (e, 1) if s > 0 else (e, -1)


def end(letter: Letter) -> HalfEdge:
    e, s = letter
    return (e, -1) if s > 0 else (e, 1)


def polygon_word(g: int) -> tuple[Letter, ...]:
    """a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1 ..."""
    out = []
    for i in range(g):
        a, b = 2 * i, 2 * i + 1
        out += [(a, 1), (b, 1), (a, -1), (b, -1)]
    return tuple(out)


@dataclass(frozen=True)
class RibbonSurface:
    """One vertex, edges a1, b1, ..., ag, bg and a single polygon face.

    Edge index 2i is a_{i+1}, 2i+1 is b_{i+1}, matching the interleaved
    homology basis.  The rotation is oriented so that pair(a1, b1) = +1.
    """

    genus: int
    graph: RibbonGraph

    @property
    def n_edges(self) -> int:
        return 2 * self.genus

    @property
    def rotation(self) -> tuple[HalfEdge, ...]:
        return self.graph.rotation[0]

    def euler_characteristic(self) -> int:
        return self.graph.euler_characteristic()

    def homology_class(self, loop: "Loop") -> np.ndarray:
        out = np.zeros(self.n_edges, dtype=object)
        for e, s in loop.letters:
            out[e] += s
        return out

    def intersection(self, x, y) -> int:
        return self.graph.intersection(x, y)

    def parse(self, text: str) -> "Loop":
        return Loop.parse(text, self.genus)


def standard_surface(g: int) -> RibbonSurface:
    if g < 2:
        raise UsageError("genus must be at least 2")
    return _surface(g)


def _surface(g: int) -> RibbonSurface:
    word = polygon_word(g)
    n = len(word)
    succ: dict[HalfEdge, HalfEdge] = {}
    for k in range(n):
        succ[end(word[k])] = start(word[(k + 1) % n])
    # the successor map is a single 4g-cycle: read it off as the rotation
    h0 = (0, 1)
    rot, cur = [h0], succ[h0]
    while cur != h0:
        rot.append(cur)
        cur = succ[cur]
    if len(rot) != n:
        raise AssertionError("polygon does not close up to one vertex")
    graph = RibbonGraph(1, (0,) * (2 * g), (0,) * (2 * g), (tuple(rot),))
    a1 = [1 if e == 0 else 0 for e in range(2 * g)]
    b1 = [1 if e == 1 else 0 for e in range(2 * g)]
    if graph.intersection(a1, b1) < 0:
        graph = RibbonGraph(1, graph.tails, graph.heads, (tuple(reversed(rot)),))
    return RibbonSurface(g, graph)


# -- loops -----------------------------------------------------------------------------

_TOKEN = re.compile(r"^([ab])(\d+)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class Loop:
    """A cyclically reduced word in the edge letters."""

    letters: tuple[Letter, ...]

    def __post_init__(self):
        if not self.letters:
            raise UsageError("empty loop")
        w = self.letters
        for k in range(len(w)):
            a, b = w[k], w[(k + 1) % len(w)]
            if len(w) > 1 and a[0] == b[0] and a[1] == -b[1]:
                raise UsageError(f"loop {self} is not cyclically reduced")

    @classmethod
    def parse(cls, text: str, g: int | None = None) -> "Loop":
        out: list[Letter] = []
        for tok in text.split():
            m = _TOKEN.match(tok)
            if not m:
                raise UsageError(f"cannot parse letter {tok!r}")
            kind, idx, exp = m.group(1), int(m.group(2)), int(m.group(3) or 1)
            if idx < 1 or (g is not None and idx > g):
                raise UsageError(f"letter {tok!r} outside genus {g}")
            e = 2 * (idx - 1) + (0 if kind == "a" else 1)
            out += [(e, 1 if exp > 0 else -1)] * abs(exp)
        return cls(tuple(out))

    def inverse(self) -> "Loop":
        return Loop(tuple((e, -s) for e, s in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(letter_str(l) for l in self.letters)

    def rotations(self) -> list[tuple[Letter, ...]]:
        w = self.letters
        return [w[k:] + w[:k] for k in range(len(w))]

    def is_primitive(self) -> bool:
        w = self.letters
        return all(w[k:] + w[:k] != w for k in range(1, len(w)))


def cyclically_reduce(letters) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for l in letters:
        if out and out[-1][0] == l[0] and out[-1][1] == -l[1]:
            out.pop()
        else:
            out.append(l)
    while len(out) > 1 and out[0][0] == out[-1][0] and out[0][1] == -out[-1][1]:
        out = out[1:-1]
    return tuple(out)


# -- geometric intersection of curves carried by the ribbon graph ------------------------
#
# Linked-pair counting for cyclically reduced words in a one-vertex ribbon
# graph.  The counts are exact on the thickened graph (the surface minus a
# disc), hence upper bounds on the closed surface.  Zero self-crossings
# certify a simple curve; zero mutual crossings certify disjointness.

def _offset(surface: RibbonSurface, base: HalfEdge, h: HalfEdge) -> int:
    rot = surface.rotation
    n = len(rot)
    return (surface.graph.position(h)[1] - surface.graph.position(base)[1]) % n


def _chords_cross(surface: RibbonSurface, p: tuple[HalfEdge, HalfEdge], q: tuple[HalfEdge, HalfEdge]) -> bool:
    pos = surface.graph.position
    a, b = sorted((pos(p[0])[1], pos(p[1])[1]))
    c, d = pos(q[0])[1], pos(q[1])[1]
    return (a < c < b) != (a < d < b)


def _passages(w: tuple[Letter, ...]) -> list[tuple[HalfEdge, HalfEdge]]:
    n = len(w)
    return [(end(w[k]), start(w[(k + 1) % n])) for k in range(n)]


def _linked_segments(surface: RibbonSurface, w: tuple[Letter, ...], v: tuple[Letter, ...],
                     same: bool) -> int:
    """Linked maximal common segments between cyclic words w and v."""
    n, m = len(w), len(v)
    count = 0
    for i in range(n):
        for j in range(m):
            if same and i == j:
                continue
            if w[i] != v[j]:
                continue
            # only start at the beginning of a maximal segment
            if w[(i - 1) % n] == v[(j - 1) % m]:
                if all(w[(i - k) % n] == v[(j - k) % m] for k in range(max(n, m))):
                    return -1  # parallel copies: one word is a power/shift of the other
                continue
            length = 1
            while w[(i + length) % n] == v[(j + length) % m]:
                length += 1
                if length > n * m:
                    return -1
            hs = start(w[i])
            xin, yin = end(w[(i - 1) % n]), end(v[(j - 1) % m])
            he = end(w[(i + length - 1) % n])
            xout, yout = start(w[(i + length) % n]), start(v[(j + length) % m])
            left_start = _offset(surface, hs, xin) < _offset(surface, hs, yin)
            left_end_cmp = _offset(surface, he, xout) < _offset(surface, he, yout)
            if left_start == left_end_cmp:
                count += 1
    return count


def _crossing_passages(surface: RibbonSurface, w, v, same: bool) -> int:
    count = 0
    pw, pv = _passages(w), _passages(v)
    for i, p in enumerate(pw):
        for j, q in enumerate(pv):
            if same and j <= i:
                continue
            if len({p[0], p[1], q[0], q[1]}) < 4:
                continue
            if _chords_cross(surface, p, q):
                count += 1
    return count


def geometric_intersection(surface: RibbonSurface, x: Loop, y: Loop) -> int | None:
    """Minimal number of crossings between two distinct primitive loops on
    the thickened graph; None when the loops are parallel."""
    w, v = x.letters, y.letters
    seg1 = _linked_segments(surface, w, v, same=False)
    seg2 = _linked_segments(surface, w, y.inverse().letters, same=False)
    if seg1 < 0 or seg2 < 0:
        return None
    return _crossing_passages(surface, w, v, same=False) + seg1 + seg2


def self_intersection(surface: RibbonSurface, x: Loop) -> int:
    w = x.letters
    if not x.is_primitive():
        raise UsageError("loop is a proper power")
    seg1 = _linked_segments(surface, w, w, same=True)
    seg2 = _linked_segments(surface, w, x.inverse().letters, same=False)
    if seg1 % 2 or seg2 % 2:
        raise AssertionError("self-linking count is not symmetric")
    return _crossing_passages(surface, w, w, same=True) + seg1 // 2 + seg2 // 2


def is_simple(surface: RibbonSurface, x: Loop) -> bool:
    return x.is_primitive() and self_intersection(surface, x) == 0
