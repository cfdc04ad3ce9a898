"""Finite computations in Sp(2g, F_2) around a fixed nonzero class beta.

F_2 vectors are bitmasks: bit 2i is a_{i+1}, bit 2i+1 is b_{i+1}.  Orbit and
transitivity results on the shadow graph are necessary-condition checks only;
they say nothing about curves beyond their mod-2 classes.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .lattice import f2_pair
from .symplectic import UsageError, sp_order


class CapabilityError(RuntimeError):
    """The requested computation exceeds the documented budget."""


def f2_vector(text: str) -> int:
    """Parse a bitstring ``"0100"`` listed in (a1, b1, a2, b2, ...) order."""
    if not text or set(text) - {"0", "1"} or len(text) % 2:
        raise UsageError(f"expected an even-length bitstring, got {text!r}")
    return sum(1 << k for k, ch in enumerate(text) if ch == "1")


def f2_bitstring(v: int, g: int) -> str:
    return "".join("1" if v >> k & 1 else "0" for k in range(2 * g))


def default_beta(g: int) -> int:
    """The class b1."""
    return 1 << 1


def f2_transvect(v: int, c: int, g: int) -> int:
    return v ^ c if f2_pair(v, c, g) else v


# -- matrices as column bitmasks ---------------------------------------------------

def f2_transvection_columns(c: int, g: int) -> tuple[int, ...]:
    return tuple(f2_transvect(1 << k, c, g) for k in range(2 * g))


def columns_to_array(cols: Sequence[int], n: int) -> np.ndarray:
    return np.array([[(cols[j] >> i) & 1 for j in range(n)] for i in range(n)], dtype=np.uint8)


def stabilizer_generators(g: int, beta: int) -> list[int]:
    """Vectors c != 0 with pair(c, beta) = 0 mod 2; t_c then fixes beta."""
    _check(g, beta)
    return [c for c in range(1, 1 << (2 * g)) if f2_pair(c, beta, g) == 0]


def _check(g: int, beta: int):
    if g < 1:
        raise UsageError("genus must be positive")
    if beta == 0:
        raise UsageError("beta must be nonzero")
    if beta >> (2 * g):
        raise UsageError("beta does not fit the genus")


# -- orbits on vectors -------------------------------------------------------------

def orbit_partition(g: int, gens: Iterable[int], points: Iterable[int]) -> list[list[int]]:
    """Orbits of ``points`` under the transvections t_c, c in ``gens``.

    Orbits are sorted internally and listed by their smallest element.
    """
    gens = list(gens)
    todo = sorted(set(points))
    seen: set[int] = set()
    out = []
    for start in todo:
        if start in seen:
            continue
        orbit, queue = {start}, deque([start])
        while queue:
            v = queue.popleft()
            for c in gens:
                w = f2_transvect(v, c, g)
                if w not in orbit:
                    orbit.add(w)
                    queue.append(w)
        seen |= orbit
        out.append(sorted(orbit))
    return out


@dataclass(frozen=True)
class OrbitClassification:
    genus: int
    beta: int
    orbits: tuple[tuple[int, ...], ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        """Orbit sizes ordered as (pairing one, pairing zero, beta itself)."""
        key = {label: len(o) for label, o in zip(self.labels, self.orbits)}
        return tuple(key.get(k, 0) for k in ("odd", "even", "beta"))

    @property
    def labels(self) -> list[str]:
        out = []
        for o in self.orbits:
            v = o[0]
            if v == self.beta and len(o) == 1:
                out.append("beta")
            elif f2_pair(v, self.beta, self.genus):
                out.append("odd")
            else:
                out.append("even")
        return out

    def matches_predicate(self) -> bool:
        """Each orbit equals one class of the predicate partition."""
        g, beta = self.genus, self.beta
        predicted = {
            "odd": {v for v in range(1, 1 << 2 * g) if f2_pair(v, beta, g)},
            "even": {v for v in range(1, 1 << 2 * g) if not f2_pair(v, beta, g) and v != beta},
            "beta": {beta},
        }
        if len(self.orbits) != 3:
            return False
        return all(set(o) == predicted[label] for o, label in zip(self.orbits, self.labels))


def orbit_classify(g: int, beta: int | None = None) -> OrbitClassification:
    beta = default_beta(g) if beta is None else beta
    if g < 2:
        raise UsageError("genus must be at least 2")
    gens = stabilizer_generators(g, beta)
    orbits = orbit_partition(g, gens, range(1, 1 << (2 * g)))
    return OrbitClassification(g, beta, tuple(tuple(o) for o in orbits))


# -- group closures ------------------------------------------------------------------

@dataclass
class GroupClosure:
    """A finite matrix group given by generators, with its elements.

    ``elements`` is None when only the generators are kept (orbit-only use).
    """

    generators: list[np.ndarray]
    modulus: int
    dim: int
    elements: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        if self.elements is None:
            raise CapabilityError("closure was not enumerated")
        return len(self.elements)


def matrix_closure(gens: Sequence[np.ndarray], modulus: int, dim: int,
                   limit: int = 2_000_000) -> GroupClosure:
    """Breadth-first closure of a finite matrix group over Z/modulus.

    Every frontier is sorted by its byte encoding before expansion so the
    enumeration order does not depend on hashing.
    """
    gens = [np.asarray(g, dtype=np.int64) % modulus for g in gens]
    ident = np.eye(dim, dtype=np.int64)
    seen = {ident.astype(np.uint8).tobytes()}
    found = [ident[None]]
    frontier = ident[None]
    while len(frontier):
        new_blocks = []
        for g in gens:
            prod = np.matmul(frontier, g) % modulus
            new_blocks.append(prod)
        if not new_blocks:
            break
        cand = np.concatenate(new_blocks).astype(np.uint8)
        keys = [row.tobytes() for row in cand]
        fresh = {}
        for k, m in zip(keys, cand):
            if k not in seen and k not in fresh:
                fresh[k] = m
        if len(seen) + len(fresh) > limit:
            raise CapabilityError(f"closure exceeds the budget of {limit} elements")
        seen.update(fresh)
        order = sorted(fresh)
        frontier = np.array([fresh[k] for k in order], dtype=np.int64).reshape(-1, dim, dim)
        if len(frontier):
            found.append(frontier)
    elements = np.concatenate(found).astype(np.uint8)
    return GroupClosure(list(gens), modulus, dim, elements)


CLOSURE_MAX_GENUS = 3


def stabilizer_closure(g: int, beta: int | None = None, gens: Sequence[int] | None = None) -> GroupClosure:
    """Enumerate the group generated by t_c, c in ``gens`` (default: the
    transvections fixing beta)."""
    beta = default_beta(g) if beta is None else beta
    _check(g, beta)
    if g > CLOSURE_MAX_GENUS:
        raise CapabilityError(
            f"full enumeration is limited to genus <= {CLOSURE_MAX_GENUS}; use the orbit checks instead")
    vecs = stabilizer_generators(g, beta) if gens is None else list(gens)
    mats = [columns_to_array(f2_transvection_columns(c, g), 2 * g) for c in vecs]
    out = matrix_closure(mats, 2, 2 * g)
    out.meta.update(genus=g, beta=beta, generator_vectors=vecs)
    return out


def expected_stabilizer_order(g: int) -> int:
    """|Sp(2g, 2)| / (2^{2g} - 1): Sp acts transitively on nonzero vectors."""
    return sp_order(g, 2) // (2 ** (2 * g) - 1)


def fixes_vector(elements: np.ndarray, v: int, g: int) -> np.ndarray:
    """Boolean mask of elements M with M v = v (mod 2)."""
    vec = np.array([(v >> k) & 1 for k in range(2 * g)], dtype=np.int64)
    images = (elements.astype(np.int64) @ vec) % 2
    return np.all(images == vec, axis=1)


# -- the shadow of the nonseparating curve complex -------------------------------------

@dataclass(frozen=True)
class ShadowGraph:
    genus: int
    beta: int
    vertices: tuple[int, ...]

    def adjacent(self, u: int, v: int) -> bool:
        return f2_pair(u, v, self.genus) == 1 and (u ^ v) != self.beta

    def neighbours(self, u: int) -> list[int]:
        return [v for v in self.vertices if self.adjacent(u, v)]

    def edges(self) -> list[tuple[int, int]]:
        """Unordered edges as index pairs i < j."""
        vs = self.vertices
        return [(i, j) for i in range(len(vs)) for j in range(i + 1, len(vs)) if self.adjacent(vs[i], vs[j])]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen, queue = {self.vertices[0]}, deque([self.vertices[0]])
        while queue:
            u = queue.popleft()
            for v in self.neighbours(u):
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == len(self.vertices)

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "beta": f2_bitstring(self.beta, self.genus),
            "vertices": [f2_bitstring(v, self.genus) for v in self.vertices],
            "edges": [list(e) for e in self.edges()],
        }


def shadow_n1(g: int, beta: int | None = None) -> ShadowGraph:
    beta = default_beta(g) if beta is None else beta
    if g < 2:
        raise UsageError("genus must be at least 2")
    _check(g, beta)
    verts = tuple(v for v in range(1, 1 << (2 * g)) if f2_pair(v, beta, g) == 1)
    return ShadowGraph(g, beta, verts)


@dataclass(frozen=True)
class TransitivityReport:
    vertex_orbits: int
    edge_orbits: int
    n_vertices: int
    n_ordered_edges: int


def transitivity_report(graph: ShadowGraph, gens: Sequence[int]) -> TransitivityReport:
    """Orbit counts on vertices and ordered edges under the group
    generated by the transvections t_c, c in ``gens``.

    Every generator must fix beta.
    """
    g = graph.genus
    for c in gens:
        if f2_transvect(graph.beta, c, g) != graph.beta:
            raise UsageError("generator does not fix beta")
    vorb = orbit_partition(g, gens, graph.vertices)
    ordered = [(u, v) for u in graph.vertices for v in graph.neighbours(u)]
    seen: set[tuple[int, int]] = set()
    n_orbits = 0
    for start in ordered:
        if start in seen:
            continue
        n_orbits += 1
        seen.add(start)
        queue = deque([start])
        while queue:
            u, v = queue.popleft()
            for c in gens:
                e = (f2_transvect(u, c, g), f2_transvect(v, c, g))
                if e not in seen:
                    seen.add(e)
                    queue.append(e)
    return TransitivityReport(len(vorb), n_orbits, len(graph.vertices), len(ordered))
