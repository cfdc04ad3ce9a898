"""Chain relations under the base, cover and Prym representations.

Configurations are words in the one-vertex model.  Before a configuration is
used its intersection pattern is certified with the linked-pair counts from
``surface``: consecutive chain curves meet once, all other pairs are
disjoint, and b meets exactly a and a'.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cover import ConfigurationError, CoverHomology, cover_representation
from .lattice import identity, imatmul, integer_kernel
from .orbits import default_beta
from .surface import Loop, RibbonSurface, geometric_intersection, is_simple, standard_surface
from .symplectic import (
    Representation, SymplecticSpace, TwistWord, UsageError, base_representation, eval_word,
    gram_pair, transvection_matrix,
)


@dataclass
class ChainConfig:
    """Named curves, the chains they form, and their boundary classes."""

    genus: int
    beta: int
    loops: dict[str, Loop]
    chains: list[list[str]]
    boundary: dict[str, np.ndarray] = field(default_factory=dict)

    def surface(self) -> RibbonSurface:
        return standard_surface(self.genus) if self.genus >= 2 else None

    def classes(self) -> dict[str, np.ndarray]:
        return {name: loop_class(loop, self.genus) for name, loop in self.loops.items()}


def maximal_chain(g: int) -> list[Loop]:
    """Certified-simple words for a chain of 2g + 1 curves.

    Classes: a1, b1, -(a1 + a2), b2, a3 - a2, b3, ..., a_g - a_{g-1}, b_g, a_g
    (up to sign).  Found by :func:`search_chain` and re-certified by
    :func:`check_config`.
    """
    words = ["a1", "b1", "a1^-1 a2^-1", "b2"]
    for i in range(2, g):
        words += [f"a{i}^-1 b{i}^-1 a{i + 1} b{i}", f"b{i + 1}"]
    words.append(f"a{g}")
    return [Loop.parse(w, g) for w in words]


def shift_handles(loop: Loop, g: int, k: int) -> Loop:
    """Relabel handle i as handle i + k (mod g).

    Rotating the polygon by four letters is a homeomorphism of the model.
    """
    return Loop(tuple(((2 * ((e // 2 + k) % g) + e % 2), s) for e, s in loop.letters))


def standard_loops(g: int) -> dict[str, Loop]:
    """The maximal chain and its handle shifts, deduplicated: a fixed family
    of certified-simple loops used for cover and Prym images."""
    out: dict[str, Loop] = {}
    seen = set()
    for k in range(g):
        for loop in maximal_chain(g):
            loop = shift_handles(loop, g, k)
            key = min(min(loop.rotations()), min(loop.inverse().rotations()))
            if key not in seen:
                seen.add(key)
                out[f"t{len(out)}"] = loop
    return out


def complementary_chains(g: int) -> ChainConfig:
    """Two odd chains (a, c1, c2) and (a', c3, ..., c_{2g-2}) around b = b1.

    The maximal chain with its fourth curve moved onto b1: the three curves
    before b form the first chain (read backwards) and the 2g - 3 curves after
    it form the second.
    """
    if g < 4:
        raise UsageError("complementary chains need genus at least 4")
    chain = [shift_handles(l, g, -1) for l in maximal_chain(g)]
    names = ["c2", "c1", "a", "b", "a'"] + [f"c{i}" for i in range(3, 2 * g - 1)]
    cfg = ChainConfig(
        g, default_beta(g), dict(zip(names, chain)),
        [["a", "c1", "c2"], ["a'"] + [f"c{i}" for i in range(3, 2 * g - 1)]],
    )
    cls = cfg.classes()
    j = SymplecticSpace(g).form
    for d in (cls["a"] + cls["c2"], cls["a"] - cls["c2"]):
        if all(gram_pair(d, v, j) == 0 for v in cls.values() if v is not cls["b"]):
            cfg.boundary["d"] = d
            break
    else:
        raise ConfigurationError("no boundary class orthogonal to both chains")
    return cfg


def search_chain(g: int, max_length: int = 4) -> list[Loop] | None:
    """Backtracking search for a maximal chain with the classes of
    :func:`maximal_chain` (signs free), words of length <= max_length.

    Candidates are enumerated by length then letter order, deduplicated up to
    rotation and inversion; the first complete chain is returned.
    """
    from itertools import product

    surf = standard_surface(g)
    letters = [(e, s) for e in range(2 * g) for s in (1, -1)]
    targets = [loop_class(l, g) for l in maximal_chain(g)]
    want = [{tuple(t), tuple(-x for x in t)} | _alt(t, g) for t in targets]
    cands: list[list[Loop]] = [[] for _ in targets]
    for n in range(1, max_length + 1):
        for w in product(letters, repeat=n):
            try:
                loop = Loop(tuple(w))
            except UsageError:
                continue
            key = min(min(loop.rotations()), min(loop.inverse().rotations()))
            if key != loop.letters:
                continue
            h = tuple(int(x) for x in loop_class(loop, g))
            slots = [k for k, ws in enumerate(want) if h in ws]
            if slots and is_simple(surf, loop):
                for k in slots:
                    cands[k].append(loop)
    chosen: list[Loop] = []

    def extend(k: int) -> bool:
        if k == len(cands):
            return True
        for loop in cands[k]:
            if all(geometric_intersection(surf, loop, m) == (1 if k - i == 1 else 0)
                   for i, m in enumerate(chosen)):
                chosen.append(loop)
                if extend(k + 1):
                    return True
                chosen.pop()
        return False

    return chosen if extend(0) else None


def _alt(t, g):
    """Sign variants a_{i+1} +- a_i of the odd-position classes."""
    t = [int(x) for x in t]
    nz = [k for k, x in enumerate(t) if x]
    out = set()
    if len(nz) == 2:
        for s1 in (1, -1):
            for s2 in (1, -1):
                v = [0] * len(t)
                v[nz[0]], v[nz[1]] = s1, s2
                out.add(tuple(v))
    return out


def loop_class(loop: Loop, g: int) -> np.ndarray:
    """Homology class of a word: its letter-count vector."""
    vec = np.zeros(2 * g, dtype=object)
    for e, s in loop.letters:
        vec[e] += s
    return vec


def two_chain(g: int = 1) -> ChainConfig:
    """a = a1, b = b1; the boundary of their neighbourhood is null-homologous."""
    loops = {"a": Loop.parse("a1"), "b": Loop.parse("b1")}
    cfg = ChainConfig(g, default_beta(g), loops, [["a", "b"]])
    cfg.boundary["d"] = np.zeros(2 * g, dtype=object)
    return cfg


def check_config(cfg: ChainConfig, geometric: bool = True) -> dict[str, bool]:
    """Homological and (optionally) geometric chain-pattern checks."""
    g = cfg.genus
    j = SymplecticSpace(g).form
    cls = cfg.classes()
    out: dict[str, bool] = {}
    chain_names = [n for ch in cfg.chains for n in ch]

    def expected(x, y):
        for ch in cfg.chains:
            if x in ch and y in ch:
                return 1 if abs(ch.index(x) - ch.index(y)) == 1 else 0
        if "b" in (x, y):
            other = y if x == "b" else x
            return 1 if other in ("a", "a'") else 0
        return 0

    names = chain_names + (["b"] if "b" in cfg.loops and "b" not in chain_names else [])
    alg_ok = True
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            if abs(gram_pair(cls[x], cls[y], j)) != expected(x, y):
                alg_ok = False
    out["algebraic_pattern"] = alg_ok
    if "b" in cfg.loops and "b" not in chain_names:
        beta = cls["b"]
        mono_ok = all(
            gram_pair(cls[n], beta, j) % 2 == (1 if n in ("a", "a'") else 0) for n in chain_names)
        out["monodromy_pattern"] = mono_ok
    if geometric:
        surf = standard_surface(g)
        out["simple"] = all(is_simple(surf, cfg.loops[n]) for n in names)
        geo_ok = True
        for i, x in enumerate(names):
            for y in names[i + 1:]:
                if geometric_intersection(surf, cfg.loops[x], cfg.loops[y]) != expected(x, y):
                    geo_ok = False
        out["geometric_pattern"] = geo_ok
    return out


@dataclass
class RelationReport:
    name: str
    representation: str
    left: np.ndarray
    right: np.ndarray
    verdict: bool
    details: dict = field(default_factory=dict)

    @property
    def discrepancy(self) -> np.ndarray | None:
        return None if self.verdict else self.left - self.right

    def to_json(self) -> dict:
        out = {"relation": self.name, "representation": self.representation,
               "verdict": "pass" if self.verdict else "fail", **self.details}
        if not self.verdict:
            out["discrepancy"] = self.discrepancy.tolist()
        return out


def chain_words(cfg: ChainConfig) -> tuple[TwistWord, TwistWord]:
    """Left and right words of the complementary-chain identity."""
    first, second = cfg.chains
    left = (TwistWord((( first[0], 2),)) * TwistWord.of(*first[1:])) ** 3
    right = (TwistWord(((second[0], 2),)) * TwistWord.of(*second[1:])) ** (2 * cfg.genus - 3)
    return left, right


def base_rep_for(cfg: ChainConfig, sign: int = 1) -> Representation:
    space = SymplecticSpace(cfg.genus)
    rep = base_representation(space, {n: _hv(v) for n, v in cfg.classes().items()}, sign)
    for name, d in cfg.boundary.items():
        rep.images[name] = (transvection_matrix(d, space.form, sign) if any(d) else identity(space.dim))
    return rep


def _hv(v):
    from .symplectic import HomologyVector

    return HomologyVector(tuple(int(x) for x in v))


def verify_two_chain(cfg: ChainConfig, rep: Representation) -> RelationReport:
    if len(cfg.chains[0]) != 2:
        raise ConfigurationError("a 2-chain is required")
    a, b = cfg.chains[0]
    left = eval_word((TwistWord(((a, 2), (b, 1)))) ** 4, rep)
    right = eval_word(TwistWord.of("d"), rep)
    return RelationReport("two-chain", rep.name, left, right, bool(np.array_equal(left, right)))


def verify_complementary_chains(cfg: ChainConfig, rep: Representation) -> RelationReport:
    lw, rw = chain_words(cfg)
    left, right = eval_word(lw, rep), eval_word(rw, rep)
    return RelationReport("complementary-chains", rep.name, left, right,
                          bool(np.array_equal(left, right)), {"left_word": str(lw), "right_word": str(rw)})


def verify_boundary_twist(cfg: ChainConfig, rep: Representation) -> RelationReport:
    """The left word also equals the boundary multitwist T_d^2 on homology."""
    lw, _ = chain_words(cfg)
    left = eval_word(lw, rep)
    right = eval_word(TwistWord((("d", 2),)), rep)
    return RelationReport("boundary-multitwist", rep.name, left, right, bool(np.array_equal(left, right)))


def verify_minus_id_span(c1, c2, g: int, sign: int = 1) -> RelationReport:
    """(T_{c1} T_{c2})^3 is -Id on span(c1, c2) and Id on its complement."""
    space = SymplecticSpace(g)
    j = space.form
    c1 = np.asarray(c1, dtype=object)
    c2 = np.asarray(c2, dtype=object)
    if abs(gram_pair(c1, c2, j)) != 1:
        raise ConfigurationError("c1 and c2 must pair to +-1")
    t = imatmul(transvection_matrix(c1, j, sign), transvection_matrix(c2, j, sign))
    m = imatmul(imatmul(t, t), t)
    span_ok = np.array_equal(m.dot(c1), -c1) and np.array_equal(m.dot(c2), -c2)
    comp = integer_kernel(np.vstack([j.dot(c1), j.dot(c2)]))
    comp_ok = np.array_equal(imatmul(m, comp), comp)
    m6 = identity(2 * g)
    for _ in range(6):
        m6 = imatmul(m6, m)
    details = {"minus_on_span": bool(span_ok), "identity_on_complement": bool(comp_ok),
               "square_is_identity": bool(np.array_equal(imatmul(m, m), identity(2 * g))),
               "sixth_power_is_identity": bool(np.array_equal(m6, identity(2 * g)))}
    expected = -identity(2 * g) if g == 1 else None
    verdict = span_ok and comp_ok
    return RelationReport("minus-id-on-span", "base", m, expected if expected is not None else m, verdict, details)


@dataclass
class ObstructionReport:
    cover_left: np.ndarray
    cover_right: np.ndarray
    sigma: np.ndarray
    prym_left: np.ndarray
    prym_right: np.ndarray
    checks: dict

    @property
    def verdict(self) -> bool:
        return all(self.checks.values())


def verify_lifted_obstruction(cfg: ChainConfig, hom: CoverHomology, sign: int = 1) -> ObstructionReport:
    """Lifted chain words satisfy L = sigma R, L != R, Prym(L) = -Prym(R)."""
    loops = {n: cfg.loops[n] for ch in cfg.chains for n in ch}
    crep = cover_representation(hom, loops, sign)
    lw, rw = lifted_words(cfg)
    left, right = eval_word(lw, crep), eval_word(rw, crep)
    sigma_right = imatmul(hom.sigma, right)
    pl, pr = hom.restrict(left), hom.restrict(right)
    plus = hom.plus_basis()
    checks = {
        "left_is_sigma_right": bool(np.array_equal(left, sigma_right)),
        "left_differs_from_right": not np.array_equal(left, right),
        "prym_left_is_minus_prym_right": bool(np.array_equal(pl, -pr)),
        "agree_on_plus_lattice": bool(np.array_equal(imatmul(left, plus), imatmul(right, plus))),
    }
    return ObstructionReport(left, right, hom.sigma, pl, pr, checks)


def lifted_words(cfg: ChainConfig) -> tuple[TwistWord, TwistWord]:
    """Chain words with T_a^2 replaced by the single lifted twist the cover
    representation stores under the name of a (and likewise for a')."""
    lw, rw = chain_words(cfg)
    lw = TwistWord(tuple((n, 1 if n == cfg.chains[0][0] else e) for n, e in lw.letters))
    rw = TwistWord(tuple((n, 1 if n == cfg.chains[1][0] else e) for n, e in rw.letters))
    return lw, rw
