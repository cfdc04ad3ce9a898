"""The double cover of S_g defined by a nonzero class beta in H_1(S_g; F_2).

Base edge e has monodromy m(e) = pair(e, beta) mod 2.  Its lift (e, s) runs
from sheet s to sheet s + m(e) and has cover edge id 2e + s.  All homology
computations are exact; every derived form is checked before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .lattice import (
    as_int_matrix, f2_pair, identity, imatmul, integer_kernel, lift_f2_symplectic,
    smith_normal_form, standard_form, symplectic_basis, inverse_unimodular,
)
from .orbits import GroupClosure, matrix_closure
from .surface import Loop, RibbonGraph, RibbonSurface, is_simple
from .symplectic import (
    ConsistencyError, Representation, UsageError, gram_pair, reduce_mod, transvection_matrix,
)


class ConfigurationError(ValueError):
    """A curve or word fails a realizability filter."""


@dataclass(frozen=True)
class CoverSurface:
    base: RibbonSurface
    beta: int
    monodromy: tuple[int, ...]
    graph: RibbonGraph

    @property
    def genus(self) -> int:
        return self.graph.genus()

    def edge_id(self, e: int, sheet: int) -> int:
        return 2 * e + sheet

    def deck_permutation(self) -> list[int]:
        return [k ^ 1 for k in range(self.graph.n_edges)]

    def loop_monodromy(self, loop: Loop) -> int:
        return sum(self.monodromy[e] for e, _ in loop.letters) % 2

    def to_json(self) -> dict:
        return {
            "vertices": [0, 1],
            "edges": [
                {"id": self.edge_id(e, s), "base_edge": e, "sheet": s,
                 "tail": self.graph.tails[self.edge_id(e, s)],
                 "head": self.graph.heads[self.edge_id(e, s)], "monodromy": self.monodromy[e]}
                for e in range(self.base.n_edges) for s in (0, 1)
            ],
            "faces": [[[e, sgn] for e, sgn in cyc] for cyc in self.graph.faces()],
        }


def build_cover(surface: RibbonSurface, beta: int) -> CoverSurface:
    g = surface.genus
    if beta == 0:
        raise UsageError("cover disconnected; beta must be nonzero")
    if beta >> (2 * g):
        raise UsageError("beta does not fit the genus")
    mono = tuple(f2_pair(1 << e, beta, g) for e in range(2 * g))
    n = 2 * g
    tails, heads = [0] * (2 * n), [0] * (2 * n)
    for e in range(n):
        for s in (0, 1):
            tails[2 * e + s] = s
            heads[2 * e + s] = s ^ mono[e]
    rotation = []
    for t in (0, 1):
        rot = []
        for e, sgn in surface.rotation:
            if sgn > 0:
                rot.append((2 * e + t, 1))
            else:
                rot.append((2 * e + (t ^ mono[e]), -1))
        rotation.append(tuple(rot))
    graph = RibbonGraph(2, tuple(tails), tuple(heads), tuple(rotation))
    cover = CoverSurface(surface, beta, mono, graph)
    if not graph.is_connected():
        raise ConsistencyError("cover is disconnected")
    if graph.euler_characteristic() != 2 * surface.euler_characteristic():
        raise ConsistencyError("Euler characteristic is not multiplicative")
    return cover


def lift_loop(cover: CoverSurface, loop: Loop) -> list[np.ndarray]:
    """Closed lifts of a loop as edge vectors on the cover.

    Monodromy 0: the lifts starting on sheet 0 and on sheet 1.  Monodromy 1:
    the single lift of the doubled loop, starting on sheet 0.
    """
    m = cover.loop_monodromy(loop)
    starts = (0, 1) if m == 0 else (0,)
    letters = loop.letters if m == 0 else loop.letters * 2
    out = []
    for s0 in starts:
        vec = np.zeros(cover.graph.n_edges, dtype=object)
        s = s0
        for e, sgn in letters:
            if sgn > 0:
                vec[2 * e + s] += 1
                s ^= cover.monodromy[e]
            else:
                s ^= cover.monodromy[e]
                vec[2 * e + s] -= 1
        if s != s0:
            raise ConsistencyError("lift did not close up")
        out.append(vec)
    return out


def transfer_chain(cover: CoverSurface, x) -> np.ndarray:
    """Full preimage of a base edge chain."""
    vec = np.zeros(cover.graph.n_edges, dtype=object)
    for e, c in enumerate(x):
        vec[2 * e] += int(c)
        vec[2 * e + 1] += int(c)
    return vec


def project_chain(cover: CoverSurface, z) -> np.ndarray:
    out = np.zeros(cover.base.n_edges, dtype=object)
    for k, c in enumerate(z):
        out[k // 2] += int(c)
    return out


@dataclass
class CoverHomology:
    """H_1 of the cover in a basis of edge cycles.

    ``project`` maps edge cycles to coordinates, ``cycles`` holds basis
    representatives.  ``minus_basis`` spans the saturated (-1)-eigenlattice of
    the deck map and ``prym_basis`` is a symplectic basis of it for half the
    intersection form.
    """

    cover: CoverSurface
    project: np.ndarray
    cycles: np.ndarray
    gram: np.ndarray
    sigma: np.ndarray
    minus_basis: np.ndarray
    minus_gram: np.ndarray
    prym_basis: np.ndarray
    checks: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.gram.shape[0]

    def coords(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=object)
        d = self.cover.graph.boundary_matrix()
        if any(d.dot(z)):
            raise UsageError("chain is not a cycle")
        return self.project.dot(z)

    def pair(self, x, y) -> int:
        return gram_pair(x, y, self.gram)

    def transvection(self, v, sign: int = 1) -> np.ndarray:
        return transvection_matrix(v, self.gram, sign)

    def inverse(self, m) -> np.ndarray:
        """Inverse of a matrix preserving the intersection form."""
        return imatmul(imatmul(self._gram_inv, as_int_matrix(m).T), self.gram)

    @cached_property
    def _gram_inv(self) -> np.ndarray:
        return inverse_unimodular(self.gram)

    def restrict(self, m, basis=None) -> np.ndarray:
        """Matrix of m on the minus lattice in a symplectic basis for the
        halved form (default: ``prym_basis``)."""
        e = self.prym_basis if basis is None else as_int_matrix(basis)
        m = as_int_matrix(m)
        img = imatmul(m, e)
        n = e.shape[1] // 2
        j = standard_form(n)
        raw = imatmul(imatmul(e.T, self.gram), img)
        if any(int(x) % 2 for x in raw.flat):
            raise ConsistencyError("image leaves the minus lattice")
        c = -imatmul(j, raw // 2)
        if not np.array_equal(imatmul(e, c), img):
            raise ConsistencyError("image is not in the span of the basis")
        return c

    def plus_basis(self) -> np.ndarray:
        return integer_kernel(self.sigma - identity(self.rank))


def cover_homology(cover: CoverSurface) -> CoverHomology:
    graph = cover.graph
    kernel = integer_kernel(graph.boundary_matrix())
    # left inverse of the cycle basis (it is saturated, so Smith form is [I; 0])
    u, d, v = smith_normal_form(kernel)
    r1 = kernel.shape[1]
    if any(d[i, i] != 1 for i in range(r1)):
        raise ConsistencyError("cycle lattice is not saturated")
    left = imatmul(v, u[:r1, :])
    faces = imatmul(left, graph.face_chains().T)
    u2, d2, _ = smith_normal_form(faces)
    rank_b = sum(1 for i in range(min(d2.shape)) if d2[i, i] != 0)
    if any(d2[i, i] != 1 for i in range(rank_b)):
        raise ConsistencyError("homology has torsion")
    project = imatmul(u2, left)[rank_b:, :]
    cycles = imatmul(kernel, inverse_unimodular(u2)[:, rank_b:])
    n = cycles.shape[1]
    expected = 2 * cover.genus
    if n != expected:
        raise ConsistencyError(f"H_1 has rank {n}, expected {expected}")
    gram = np.zeros((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            gram[i, j] = graph.intersection(cycles[:, i], cycles[:, j])
    checks = {}
    checks["skew"] = bool(np.array_equal(gram.T, -gram))
    _, dg, _ = smith_normal_form(gram)
    checks["unimodular"] = all(dg[i, i] == 1 for i in range(n))
    fc = graph.face_chains()
    checks["faces_null"] = all(graph.intersection(fc[f], cycles[:, j]) == 0
                               and graph.intersection(cycles[:, j], fc[f]) == 0
                               for f in range(fc.shape[0]) for j in range(n))
    if not all(checks.values()):
        raise ConsistencyError(f"intersection form failed its checks: {checks}")
    perm = cover.deck_permutation()
    sigma = np.zeros((n, n), dtype=object)
    for j in range(n):
        sigma[:, j] = project.dot(cycles[perm, j])
    checks["sigma_involution"] = bool(np.array_equal(imatmul(sigma, sigma), identity(n)))
    checks["sigma_preserves_form"] = bool(np.array_equal(imatmul(imatmul(sigma.T, gram), sigma), gram))
    checks["sigma_nontrivial"] = not (np.array_equal(sigma, identity(n)) or np.array_equal(sigma, -identity(n)))
    minus = integer_kernel(sigma + identity(n))
    mg = imatmul(imatmul(minus.T, gram), minus)
    checks["minus_rank"] = minus.shape[1] == 2 * (cover.base.genus - 1)
    checks["minus_even"] = all(int(x) % 2 == 0 for x in mg.flat)
    if not all(checks.values()):
        raise ConsistencyError(f"deck action failed its checks: {checks}")
    half = mg // 2
    _, dh, _ = smith_normal_form(half)
    checks["minus_unimodular"] = all(dh[i, i] == 1 for i in range(half.shape[0]))
    if not checks["minus_unimodular"]:
        raise ConsistencyError("halved form on the minus lattice is not unimodular")
    prym_basis = imatmul(minus, symplectic_basis(half))
    hom = CoverHomology(cover, project, cycles, gram, sigma, minus, half, prym_basis, checks)
    hom.checks["projection_formula"] = _projection_formula(hom)
    if not hom.checks["projection_formula"]:
        raise ConsistencyError("projection formula failed")
    return hom


def _projection_formula(hom: CoverHomology) -> bool:
    """pair_cover(z, transfer(y)) = pair_base(p_* z, y) on basis cycles."""
    cover = hom.cover
    base = cover.base
    for j in range(base.n_edges):
        y = np.zeros(base.n_edges, dtype=object)
        y[j] = 1
        ty = hom.coords(transfer_chain(cover, y))
        for i in range(hom.rank):
            z = hom.cycles[:, i]
            lhs = hom.pair(identity(hom.rank)[:, i], ty)
            rhs = base.intersection(project_chain(cover, z), y)
            if lhs != rhs:
                return False
    return True


# -- lifted twists -----------------------------------------------------------------------

@dataclass(frozen=True)
class LiftedTwist:
    loop: Loop
    monodromy: int
    lift_classes: tuple[np.ndarray, ...]
    matrix: np.ndarray

    @property
    def difference(self) -> np.ndarray | None:
        """lift0 - lift1 for monodromy 0, else None."""
        if self.monodromy:
            return None
        return self.lift_classes[0] - self.lift_classes[1]


def lifted_twist(hom: CoverHomology, loop: Loop, sign: int = 1, check_simple: bool = True) -> LiftedTwist:
    """Homology action of the distinguished lift of T_c (m = 0) or T_c^2 (m = 1)."""
    cover = hom.cover
    if check_simple and not is_simple(cover.base, loop):
        raise ConfigurationError(f"loop {loop} is not certified simple")
    classes = tuple(hom.coords(z) for z in lift_loop(cover, loop))
    m = cover.loop_monodromy(loop)
    if m == 0:
        l0, l1 = classes
        if hom.pair(l0, l1) != 0:
            raise ConfigurationError(f"lifts of {loop} intersect algebraically")
        if not np.array_equal(hom.sigma.dot(l0), l1):
            raise ConfigurationError(f"deck map does not swap the lifts of {loop}")
        mat = imatmul(hom.transvection(l0, sign), hom.transvection(l1, sign))
    else:
        (l,) = classes
        if not np.array_equal(hom.sigma.dot(l), l):
            raise ConfigurationError(f"connected lift of {loop} is not deck invariant")
        mat = hom.transvection(l, sign)
    if not np.array_equal(imatmul(mat, hom.sigma), imatmul(hom.sigma, mat)):
        raise ConsistencyError("lifted twist does not commute with the deck map")
    return LiftedTwist(loop, m, classes, mat)


def cover_representation(hom: CoverHomology, loops: dict[str, Loop], sign: int = 1,
                         check_simple: bool = True) -> Representation:
    """Lifted twists on H_1 of the cover plus the deck map as ``sigma``."""
    images = {name: lifted_twist(hom, loop, sign, check_simple).matrix for name, loop in loops.items()}
    images["sigma"] = hom.sigma
    return Representation(images, hom.rank, inverse=hom.inverse, name="cover")


def prym_representation(hom: CoverHomology, cover_rep: Representation, basis=None) -> Representation:
    images = {k: hom.restrict(v, basis) for k, v in cover_rep.images.items()}
    return Representation(images, (hom.prym_basis if basis is None else basis).shape[1], name="prym")


def mod_ell_closure(matrices, ell: int, limit: int = 200_000) -> GroupClosure:
    """Order of the group generated by the reductions mod ell."""
    mats = [reduce_mod(m, ell).astype(np.int64) for m in matrices]
    if not mats:
        return matrix_closure([], ell, 0)
    dim = mats[0].shape[0]
    return matrix_closure(mats, ell, dim, limit=limit)


# -- curves on the base ------------------------------------------------------------------

def basis_loop(label: str, g: int) -> Loop:
    return Loop.parse(label, g)


def class_word(x, g: int) -> Loop:
    """A loop reading each basis letter with its coefficient, in order."""
    letters = []
    for e, c in enumerate(x):
        c = int(c)
        letters += [(e, 1 if c > 0 else -1)] * abs(c)
    if not letters:
        raise UsageError("zero class has no loop")
    return Loop(tuple(letters))


def find_simple_loop(surface: RibbonSurface, monodromy: int, beta: int, max_length: int = 3) -> Loop:
    """Shortest certified-simple loop with the given monodromy, searched in
    a fixed order (by length, then letter sequence)."""
    from itertools import product

    g = surface.genus
    letters = [(e, s) for e in range(2 * g) for s in (1, -1)]
    for n in range(1, max_length + 1):
        for word in product(letters, repeat=n):
            if len({e for e, _ in word}) < n:
                continue
            try:
                loop = Loop(tuple(word))
            except UsageError:
                continue
            m = sum(f2_pair(1 << e, beta, g) for e, _ in word) % 2
            if m == monodromy and is_simple(surface, loop):
                return loop
    raise ConfigurationError(f"no simple loop of monodromy {monodromy} up to length {max_length}")


# -- the symmetric basis -----------------------------------------------------------------

@dataclass
class SymmetricBasis:
    """A symplectic basis (a_0, b_0, ..., a_{2g-2}, b_{2g-2}) of H_1(cover)
    with sigma(a_i) = a_{i+g-1} and sigma(b_i) = b_{i+g-1} for 1 <= i <= g-1.

    ``basis`` holds the vectors interleaved, as columns in homology
    coordinates; ``prym_basis`` is (a_i - a_{i+g-1}, b_i - b_{i+g-1}).
    """

    basis: np.ndarray
    sigma: np.ndarray
    prym_basis: np.ndarray
    base_pairs: list

    def to_symmetric(self, m, hom: CoverHomology) -> np.ndarray:
        """A matrix on H_1(cover) written in the symmetric basis."""
        b = self.basis
        inv = -imatmul(imatmul(standard_form(b.shape[1] // 2), b.T), hom.gram)
        return imatmul(imatmul(inv, as_int_matrix(m)), b)


def symmetric_basis(hom: CoverHomology) -> SymmetricBasis:
    cover = hom.cover
    g = cover.base.genus
    jb = standard_form(g)
    beta_hat = np.array([(cover.beta >> e) & 1 for e in range(2 * g)], dtype=object)
    k = next(e for e in range(2 * g) if beta_hat[e])
    x1 = np.zeros(2 * g, dtype=object)
    if k % 2 == 0:
        x1[k + 1] = -1
    else:
        x1[k - 1] = 1
    if gram_pair(x1, beta_hat, jb) != 1:
        raise ConsistencyError("dual vector does not pair to one with beta")
    comp = integer_kernel(np.vstack([jb.dot(x1), jb.dot(beta_hat)]))
    w = imatmul(comp, symplectic_basis(imatmul(imatmul(comp.T, jb), comp)))
    pairs = [(w[:, 2 * i], w[:, 2 * i + 1]) for i in range(g - 1)]

    def lift(x):
        loop = class_word(x, g)
        if cover.loop_monodromy(loop):
            raise ConsistencyError("complement class has odd monodromy")
        return hom.coords(lift_loop(cover, loop)[0])

    lifts = [lift(x) for pair in pairs for x in pair]
    diffs = [l - hom.sigma.dot(l) for l in lifts]
    e0 = hom.prym_basis
    n = g - 1
    images = []
    for dvec in diffs:
        c = minus_coords(hom, dvec, e0)
        images.append(sum((int(c[t]) % 2) << t for t in range(2 * n)))
    lifted = lift_f2_symplectic(images, n)
    e = imatmul(e0, lifted)
    new = []
    for t, (l, dvec) in enumerate(zip(lifts, diffs)):
        delta = e[:, t] - dvec
        if any(int(x) % 2 for x in delta):
            raise ConsistencyError("lifted basis is not congruent to the lift differences")
        new.append(l + delta // 2)
    a_half = [new[2 * i] for i in range(n)]
    b_half = [new[2 * i + 1] for i in range(n)]
    a_other = [hom.sigma.dot(v) for v in a_half]
    b_other = [hom.sigma.dot(v) for v in b_half]
    q = np.column_stack(a_half + b_half + a_other + b_other)
    perp = integer_kernel(imatmul(q.T, hom.gram))
    p0 = imatmul(perp, symplectic_basis(imatmul(imatmul(perp.T, hom.gram), perp)))
    a_all = [p0[:, 0]] + a_half + a_other
    b_all = [p0[:, 1]] + b_half + b_other
    cols = []
    for a, b in zip(a_all, b_all):
        cols += [a, b]
    basis = np.column_stack(cols)
    h = 2 * g - 1
    if not np.array_equal(imatmul(imatmul(basis.T, hom.gram), basis), standard_form(h)):
        raise ConsistencyError("symmetric basis is not symplectic")
    sym = SymmetricBasis(basis, hom.sigma, e, pairs)
    sym.sigma = sym.to_symmetric(hom.sigma, hom)
    return sym


def minus_coords(hom: CoverHomology, v, basis=None) -> np.ndarray:
    """Coordinates of a minus-lattice vector in a symplectic basis of it."""
    basis = hom.prym_basis if basis is None else basis
    n = basis.shape[1] // 2
    raw = imatmul(basis.T, hom.gram).dot(np.asarray(v, dtype=object))
    if any(int(x) % 2 for x in raw):
        raise ConsistencyError("vector is not in the minus lattice")
    c = -standard_form(n).dot(raw // 2)
    if not np.array_equal(basis.dot(c), v):
        raise ConsistencyError("vector is not in the span of the minus basis")
    return c
