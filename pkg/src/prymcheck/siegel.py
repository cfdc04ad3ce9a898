"""Siegel upper half-space numerics: modular actions, Prym period extraction,
equivariance and the anti-holomorphic involution.

Period matrices are synthetic sigma-fixed points of the Siegel space of the
cover, written in the symmetric basis (a-block order a_0, ..., a_{2g-2}).
The Prym point is tau = B - C with B = Pi[1:g, 1:g] and C = Pi[g:, 1:g].
"""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .cover import (
    CoverHomology, SymmetricBasis, build_cover, cover_homology, cover_representation,
    prym_representation, symmetric_basis,
)
from .orbits import default_beta
from .surface import Loop, standard_surface
from .symplectic import (
    ConsistencyError, Representation, SymplecticSpace, TwistWord, UsageError, base_representation,
    block_form, classify_matrix, eval_word, random_word, to_block,
)

MEMBERSHIP_TOL = 1e-10
EQUIVARIANCE_TOL = 1e-9
FIXED_POINT_TOL = 1e-12
CONDITION_LIMIT = 1e12

CONVENTIONS = ("variant", "standard", "mixed")


class NumericError(ArithmeticError):
    """A numeric precondition failed (singular denominator, not Siegel, ...)."""


def is_siegel(tau, tol: float = MEMBERSHIP_TOL) -> bool:
    tau = np.asarray(tau, dtype=complex)
    if tau.ndim != 2 or tau.shape[0] != tau.shape[1]:
        return False
    if np.abs(tau - tau.T).max(initial=0.0) > tol:
        return False
    return bool(np.linalg.eigvalsh((tau.imag + tau.imag.T) / 2).min(initial=np.inf) > tol)


@dataclass(frozen=True)
class SiegelPoint:
    tau: np.ndarray
    tol: float = MEMBERSHIP_TOL

    def __post_init__(self):
        if not is_siegel(self.tau, self.tol):
            raise NumericError("matrix is not symmetric with positive definite imaginary part")

    @property
    def size(self) -> int:
        return self.tau.shape[0]


def _blocks(m) -> tuple[np.ndarray, ...]:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise UsageError("modular element must be a square matrix of even size")
    h = m.shape[0] // 2
    return m[:h, :h], m[:h, h:], m[h:, :h], m[h:, h:]


def z_conjugate(m) -> np.ndarray:
    """Z M Z with Z = diag(Id, -Id): negates the off-diagonal blocks."""
    m = np.array(m, dtype=object)
    h = m.shape[0] // 2
    m[:h, h:] *= -1
    m[h:, :h] *= -1
    return m


def act(m, tau) -> np.ndarray:
    """(A tau + B)(C tau + D)^{-1} for m = (A B; C D) in block order."""
    a, b, c, d = _blocks(m)
    tau = np.asarray(tau, dtype=complex)
    if tau.shape != a.shape:
        raise UsageError("point and modular element have different sizes")
    den = c @ tau + d
    cond = np.linalg.cond(den)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise NumericError(f"denominator is near singular (condition number {cond:.3g})")
    return (a @ tau + b) @ np.linalg.inv(den)


def act_variant(m, tau) -> np.ndarray:
    """(A tau - B)(-C tau + D)^{-1}, i.e. the standard action of Z M Z."""
    return act(z_conjugate(m), tau)


def G(tau) -> np.ndarray:
    """The anti-holomorphic involution tau -> -conj(tau)."""
    return -np.conj(np.asarray(tau, dtype=complex))


# -- period matrices ------------------------------------------------------------------

@dataclass
class PeriodMatrix:
    """A sigma-fixed point of the Siegel space of the cover, with the deck
    map in block order of the symmetric basis."""

    pi: np.ndarray
    sigma: np.ndarray
    genus: int

    @property
    def B(self) -> np.ndarray:
        return self.pi[1:self.genus, 1:self.genus]

    @property
    def C(self) -> np.ndarray:
        return self.pi[self.genus:, 1:self.genus]

    @property
    def D(self) -> np.ndarray:
        return self.pi[self.genus:, self.genus:]

    def fixed_residual(self) -> float:
        return float(np.abs(act(self.sigma, self.pi) - self.pi).max())


def sigma_permutation(sigma_block) -> np.ndarray:
    """The a-block P of a deck map of the form diag(P, P)."""
    s = np.asarray(sigma_block, dtype=object)
    h = s.shape[0] // 2
    if s[:h, h:].any() or s[h:, :h].any() or not np.array_equal(s[:h, :h], s[h:, h:]):
        raise ConsistencyError("deck map is not block diagonal in the symmetric basis")
    return s[:h, :h].astype(float)


def random_siegel(h: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.normal(size=(h, h))
    a = rng.normal(size=(h, h))
    return (x + x.T) / 2 + 1j * (a @ a.T + h * np.eye(h))


def random_symmetric_period(g: int, seed: int, sigma_block=None) -> PeriodMatrix:
    """Average a random Siegel point with its image under tau -> P tau P^T."""
    if g < 2:
        raise UsageError("genus must be at least 2")
    if sigma_block is None:
        sigma_block = PrymSetup.build(g).sigma_block
    p = sigma_permutation(sigma_block)
    if not np.allclose(p @ p, np.eye(len(p))):
        raise ConsistencyError("deck permutation is not an involution")
    pi0 = random_siegel(2 * g - 1, np.random.default_rng(seed))
    out = PeriodMatrix((pi0 + p @ pi0 @ p.T) / 2, np.asarray(sigma_block), g)
    SiegelPoint(out.pi)
    if out.fixed_residual() > FIXED_POINT_TOL:
        raise NumericError(f"period matrix is not sigma-fixed ({out.fixed_residual():.3g})")
    return out


def prym_extract(period: PeriodMatrix, tol: float = FIXED_POINT_TOL) -> np.ndarray:
    """tau = B - C, validated as a Siegel point."""
    res = period.fixed_residual()
    if res > tol:
        raise NumericError(f"period matrix is not sigma-fixed (residual {res:.3g})")
    tau = period.B - period.C
    SiegelPoint(tau)
    return tau


# -- cover data for equivariance ------------------------------------------------------

@dataclass
class PrymSetup:
    """Cover, symmetric basis and the lifted twists of a loop family."""

    genus: int
    beta: int
    hom: CoverHomology
    sym: SymmetricBasis
    cover_rep: Representation
    prym_rep: Representation
    sign: int = 1

    @classmethod
    def build(cls, g: int, beta: int | None = None, loops: dict[str, Loop] | None = None,
              sign: int = 1) -> "PrymSetup":
        beta = default_beta(g) if beta is None else beta
        hom = cover_homology(build_cover(standard_surface(g), beta))
        sym = symmetric_basis(hom)
        crep = cover_representation(hom, loops or {}, sign)
        prep = prym_representation(hom, crep, sym.prym_basis)
        return cls(g, beta, hom, sym, crep, prep, sign)

    @property
    def sigma_block(self) -> np.ndarray:
        return to_block(self.sym.sigma)

    def cover_block(self, word: TwistWord) -> np.ndarray:
        """Cover image of a word, in block order of the symmetric basis."""
        return to_block(self.sym.to_symmetric(eval_word(word, self.cover_rep), self.hom))

    def prym_block(self, word: TwistWord) -> np.ndarray:
        return to_block(eval_word(word, self.prym_rep))


def equivariance_check(word: TwistWord, period: PeriodMatrix, setup: PrymSetup,
                       convention: str = "variant") -> float:
    """max |prym_extract(M_w . Pi) - Prym(w) . prym_extract(Pi)|.

    ``variant`` and ``standard`` use that action on both sides; ``mixed``
    uses the standard action on the cover and the variant on the Prym side.
    """
    if convention not in CONVENTIONS:
        raise UsageError(f"unknown convention {convention!r}")
    cover_act = act_variant if convention == "variant" else act
    prym_act = act if convention == "standard" else act_variant
    moved = PeriodMatrix(cover_act(setup.cover_block(word), period.pi), period.sigma, period.genus)
    left = prym_extract(moved)
    right = prym_act(setup.prym_block(word), prym_extract(period))
    return float(np.abs(left - right).max())


def antiholomorphic_check(m, tau) -> float:
    """max |G(M . tau) - (Z M Z) . G(tau)| for symplectic M."""
    m = np.asarray(m, dtype=object)
    if classify_matrix(m, block_form(len(m) // 2)) != "symplectic":
        raise UsageError("antiholomorphic check needs a symplectic matrix (block order)")
    return float(np.abs(G(act(m, tau)) - act(z_conjugate(m), G(tau))).max())


def composition_residual(m, n, tau, variant: bool = False) -> float:
    """max |(MN) . tau - M . (N . tau)|."""
    f = act_variant if variant else act
    mn = np.asarray(m, dtype=object).dot(np.asarray(n, dtype=object))
    return float(np.abs(f(mn, tau) - f(m, f(n, tau))).max())


# -- seeded sweeps --------------------------------------------------------------------

def random_block_symplectic(h: int, rng: random.Random, length: int = 6) -> np.ndarray:
    """A random word in block-order transvections by basis vectors and sums."""
    space = SymplecticSpace(h)
    labels = space.labels
    classes = {lab: lab for lab in labels}
    classes.update({f"{x}+{y}": f"{x} + {y}" for x, y in zip(labels, labels[2:])})
    rep = base_representation(space, classes)
    return to_block(eval_word(random_word(sorted(classes), length, rng), rep))


@dataclass(frozen=True)
class SweepRow:
    seed: int
    genus: int
    word_length: int
    residual: float


def equivariance_sweep(setup: PrymSetup, seeds, word_length: int = 6,
                       convention: str = "variant") -> list[SweepRow]:
    names = sorted(k for k in setup.cover_rep.images if k != "sigma") + ["sigma"]
    rows = []
    for seed in seeds:
        rng = random.Random(seed)
        word = random_word(names, word_length, rng)
        period = random_symmetric_period(setup.genus, seed, setup.sigma_block)
        rows.append(SweepRow(seed, setup.genus, word_length,
                             equivariance_check(word, period, setup, convention)))
    return rows
