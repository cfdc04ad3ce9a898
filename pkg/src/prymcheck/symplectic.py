"""Symplectic linear algebra over Z, F_2 and Z/p.

Coordinates are interleaved, (a1, b1, ..., ag, bg), and the form has
pair(a_i, b_i) = 1.  Matrices act on column vectors.  The twist convention
is T_c(x) = x + eps * pair(x, c) * c with eps = +1 unless stated otherwise.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .lattice import (
    LatticeError, as_int_matrix, identity, imatmul, imatpow, inverse_unimodular, standard_form,
)


class UsageError(ValueError):
    """Inputs that violate a documented precondition."""


class ConsistencyError(AssertionError):
    """An internal identity failed; this always signals a bug."""


@dataclass(frozen=True)
class SymplecticSpace:
    genus: int

    def __post_init__(self):
        if self.genus < 1:
            raise UsageError("genus must be positive")

    @property
    def dim(self) -> int:
        return 2 * self.genus

    @property
    def form(self) -> np.ndarray:
        return standard_form(self.genus)

    @property
    def labels(self) -> list[str]:
        out = []
        for i in range(1, self.genus + 1):
            out += [f"a{i}", f"b{i}"]
        return out

    def basis(self, label: str) -> "HomologyVector":
        try:
            k = self.labels.index(label)
        except ValueError:
            raise UsageError(f"unknown basis label {label!r}") from None
        coords = [0] * self.dim
        coords[k] = 1
        return HomologyVector(tuple(coords))

    def parse(self, text: str, modulus: int | None = None) -> "HomologyVector":
        """Parse a class such as ``"a1 - 2b3 + b2"``."""
        coords = [0] * self.dim
        s = text.replace(" ", "")
        if not s:
            raise UsageError("empty class")
        for sign, coef, label in re.findall(r"([+-]?)(\d*)([ab]\d+)", s):
            k = self.labels.index(label) if label in self.labels else None
            if k is None:
                raise UsageError(f"unknown basis label {label!r}")
            coords[k] += (-1 if sign == "-" else 1) * int(coef or 1)
        if re.sub(r"([+-]?)(\d*)([ab]\d+)", "", s):
            raise UsageError(f"cannot parse class {text!r}")
        return HomologyVector(tuple(coords), modulus).reduced()


@dataclass(frozen=True)
class HomologyVector:
    """A vector in H_1 with a coefficient ring tag (None means Z)."""

    coords: tuple[int, ...]
    modulus: int | None = None

    def reduced(self) -> "HomologyVector":
        if self.modulus is None:
            return self
        return HomologyVector(tuple(int(x) % self.modulus for x in self.coords), self.modulus)

    def mod(self, p: int) -> "HomologyVector":
        return HomologyVector(self.coords, p).reduced()

    @property
    def array(self) -> np.ndarray:
        return np.array([int(x) for x in self.coords], dtype=object)

    def __add__(self, other):
        _check_compatible(self, other)
        return HomologyVector(tuple(x + y for x, y in zip(self.coords, other.coords)), self.modulus).reduced()

    def __neg__(self):
        return HomologyVector(tuple(-x for x in self.coords), self.modulus).reduced()

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(self.reduced().coords)


def _check_compatible(x: HomologyVector, y: HomologyVector, space: SymplecticSpace | None = None):
    if x.modulus != y.modulus:
        raise UsageError("coefficient rings differ")
    if len(x.coords) != len(y.coords):
        raise UsageError("dimension mismatch")
    if space is not None and len(x.coords) != space.dim:
        raise UsageError("dimension does not match the space")


def pair(x: HomologyVector, y: HomologyVector, space: SymplecticSpace) -> int:
    _check_compatible(x, y, space)
    value = int(x.array.dot(space.form.dot(y.array)))
    return value % x.modulus if x.modulus else value


def gram_pair(x, y, gram) -> int:
    """x^T G y for plain integer vectors."""
    return int(np.asarray(x, dtype=object).dot(np.asarray(gram, dtype=object).dot(np.asarray(y, dtype=object))))


def transvection_matrix(c, gram, sign: int = 1) -> np.ndarray:
    """Matrix of x -> x + sign * <x, c> c for the skew form ``gram``."""
    c = np.asarray(c, dtype=object).reshape(-1)
    g = as_int_matrix(gram)
    if not any(c):
        raise UsageError("transvection by the zero vector")
    return identity(len(c)) + sign * np.outer(c, g.dot(c))


def transvection(c: HomologyVector, space: SymplecticSpace, sign: int = 1) -> np.ndarray:
    if len(c.coords) != space.dim:
        raise UsageError("dimension does not match the space")
    if c.is_zero():
        raise UsageError("transvection by the zero vector")
    m = transvection_matrix(c.array, space.form, sign)
    return reduce_mod(m, c.modulus) if c.modulus else m


def gram_identity(m, gram) -> np.ndarray:
    m = as_int_matrix(m)
    return imatmul(imatmul(m.T, as_int_matrix(gram)), m)


def classify_matrix(m, form=None, modulus: int | None = None) -> str:
    """'symplectic', 'anti-symplectic' or 'neither' from M^T J M = +-J."""
    m = as_int_matrix(m)
    j = standard_form(m.shape[0] // 2) if form is None else as_int_matrix(form)
    if m.shape != j.shape:
        raise UsageError("matrix does not match the form dimension")
    lhs = gram_identity(m, j)
    if modulus:
        lhs, plus, minus = reduce_mod(lhs, modulus), reduce_mod(j, modulus), reduce_mod(-j, modulus)
    else:
        plus, minus = j, -j
    if np.array_equal(lhs, plus):
        return "symplectic"
    if np.array_equal(lhs, minus):
        return "anti-symplectic"
    return "neither"


def reduce_mod(m, p: int) -> np.ndarray:
    return np.vectorize(lambda x: int(x) % p, otypes=[object])(np.asarray(m, dtype=object))


def reduce_mod2(m) -> np.ndarray:
    return reduce_mod(m, 2)


def symplectic_inverse(m, form=None) -> np.ndarray:
    """Inverse of a matrix preserving ``form`` (default: the standard one).

    Uses M^{-1} = G^{-1} M^T G; G^{-1} = -G for the standard form.
    """
    m = as_int_matrix(m)
    if form is None:
        j = standard_form(m.shape[0] // 2)
        return -imatmul(imatmul(j, m.T), j)
    g = as_int_matrix(form)
    return imatmul(imatmul(inverse_unimodular(g), m.T), g)


# -- basis orderings ------------------------------------------------------------

def block_permutation(g: int) -> np.ndarray:
    """P with P @ x_interleaved = x_block, block order (a1..ag, b1..bg)."""
    p = np.zeros((2 * g, 2 * g), dtype=object)
    for i in range(g):
        p[i, 2 * i] = 1
        p[g + i, 2 * i + 1] = 1
    return p


def to_block(m) -> np.ndarray:
    m = as_int_matrix(m)
    p = block_permutation(m.shape[0] // 2)
    return imatmul(imatmul(p, m), p.T)


def from_block(m) -> np.ndarray:
    m = as_int_matrix(m)
    p = block_permutation(m.shape[0] // 2)
    return imatmul(imatmul(p.T, m), p)


def block_form(g: int) -> np.ndarray:
    return to_block(standard_form(g))


def z_matrix(g: int) -> np.ndarray:
    """Z = diag(Id, -Id) in block ordering."""
    z = identity(2 * g)
    for i in range(g, 2 * g):
        z[i, i] = -1
    return z


def sp_order(n: int, q: int) -> int:
    """|Sp(2n, q)| = q^{n^2} prod_{i=1..n} (q^{2i} - 1)."""
    out = q ** (n * n)
    for i in range(1, n + 1):
        out *= q ** (2 * i) - 1
    return out


# -- the congruence subgroup and its character ------------------------------------

def _e1(dim: int) -> np.ndarray:
    e = np.zeros(dim, dtype=object)
    e[0] = 1
    return e


def in_lambda_p(a, p: int, strict: bool = False, direction=None) -> bool:
    """Membership in the subgroup fixing e1 = a1 modulo p.

    With ``strict`` the displacement A e1 - e1 must lie in p Z v, where v
    defaults to b1 (the strict reading of the defining equation).
    """
    if p < 2:
        raise UsageError("p must be at least 2")
    a = as_int_matrix(a)
    e1 = _e1(a.shape[0])
    disp = a.dot(e1) - e1
    if any(int(x) % p for x in disp):
        return False
    if not strict:
        return True
    v = np.roll(e1, 1) if direction is None else np.asarray(direction, dtype=object)
    q = disp // p
    # q must be an integer multiple of v
    k = next((i for i in range(len(v)) if v[i] != 0), None)
    if k is None or q[k] % v[k]:
        return not any(q)
    return all(q[i] == (q[k] // v[k]) * v[i] for i in range(len(v)))


def phi_p(a, p: int) -> int:
    """The character A -> pair(A e1 - e1, e1) / p mod p on the subgroup."""
    a = as_int_matrix(a)
    if not in_lambda_p(a, p):
        raise UsageError("matrix does not fix e1 modulo p")
    e1 = _e1(a.shape[0])
    disp = a.dot(e1) - e1
    value = gram_pair(disp, e1, standard_form(a.shape[0] // 2))
    if value % p:
        raise ConsistencyError("pairing is not divisible by p")
    return (value // p) % p


def lambda_p_generators(space: SymplecticSpace, p: int) -> dict[str, np.ndarray]:
    """Named generators of a subgroup of the congruence subgroup.

    Transvections by basis vectors and by sums/differences of two basis
    vectors that pair trivially with e1, plus p-th powers of the rest.
    """
    labels = space.labels
    vecs: list[tuple[str, HomologyVector]] = [(l, space.basis(l)) for l in labels]
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            vecs.append((f"{labels[i]}+{labels[j]}", space.basis(labels[i]) + space.basis(labels[j])))
            vecs.append((f"{labels[i]}-{labels[j]}", space.basis(labels[i]) - space.basis(labels[j])))
    e1 = space.basis("a1")
    out = {}
    for name, c in vecs:
        t = transvection(c, space)
        if pair(e1, c, space) == 0:
            out[f"T({name})"] = t
        else:
            out[f"T({name})^{p}"] = imatpow(t, p)
    return out


# -- twist words ----------------------------------------------------------------

@dataclass(frozen=True)
class TwistWord:
    """An ordered product of named generators with integer exponents."""

    letters: tuple[tuple[str, int], ...] = ()

    @classmethod
    def parse(cls, text: str) -> "TwistWord":
        """Parse ``"a1^2 b1 c^-1"``; whitespace separates letters."""
        out = []
        for tok in text.split():
            name, _, exp = tok.partition("^")
            out.append((name, int(exp) if exp else 1))
        return cls(tuple(out))

    @classmethod
    def of(cls, *names: str) -> "TwistWord":
        return cls(tuple((n, 1) for n in names))

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        return TwistWord(self.letters + other.letters)

    def __pow__(self, k: int) -> "TwistWord":
        if k < 0:
            return self.inverse() ** (-k)
        return TwistWord(self.letters * k)

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((n, -e) for n, e in reversed(self.letters)))

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def __str__(self) -> str:
        return " ".join(n if e == 1 else f"{n}^{e}" for n, e in self.letters)


@dataclass
class Representation:
    """Images of named generators plus the ring they live over.

    ``inverse`` defaults to the inverse for the standard symplectic form.
    """

    images: Mapping[str, np.ndarray]
    dim: int
    modulus: int | None = None
    inverse: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = "rep"
    _inv_cache: dict = field(default_factory=dict, repr=False)

    def image(self, name: str, exponent: int = 1) -> np.ndarray:
        if name not in self.images:
            raise UsageError(f"generator {name!r} has no image under {self.name}")
        m = as_int_matrix(self.images[name])
        if exponent < 0:
            if name not in self._inv_cache:
                inv = (self.inverse or symplectic_inverse)(m)
                self._inv_cache[name] = self._reduce(inv)
            m, exponent = self._inv_cache[name], -exponent
        out = identity(self.dim)
        for _ in range(exponent):
            out = self._reduce(imatmul(out, m))
        return out

    def _reduce(self, m):
        return reduce_mod(m, self.modulus) if self.modulus else m

    def mod(self, p: int) -> "Representation":
        return Representation({k: reduce_mod(v, p) for k, v in self.images.items()}, self.dim, p,
                              self.inverse, f"{self.name} mod {p}")


def eval_word(word: TwistWord, rep: Representation) -> np.ndarray:
    out = identity(rep.dim)
    for name, exp in word.letters:
        out = rep._reduce(imatmul(out, rep.image(name, exp)))
    return out


def base_representation(space: SymplecticSpace, classes: Mapping[str, HomologyVector | str],
                        sign: int = 1) -> Representation:
    """Twists along the given homology classes acting on H_1(S_g, Z)."""
    images = {}
    for name, c in classes.items():
        vec = space.parse(c) if isinstance(c, str) else c
        images[name] = transvection(vec, space, sign) if not vec.is_zero() else identity(space.dim)
    return Representation(images, space.dim, name="base")


def random_word(names: Sequence[str], length: int, rng: random.Random,
                allow_inverse: bool = True) -> TwistWord:
    letters = []
    for _ in range(length):
        e = rng.choice((-1, 1)) if allow_inverse else 1
        letters.append((rng.choice(list(names)), e))
    return TwistWord(tuple(letters))


def random_element(rep: Representation, rng: random.Random, max_length: int = 12) -> tuple[TwistWord, np.ndarray]:
    w = random_word(sorted(rep.images), rng.randint(0, max_length), rng)
    return w, eval_word(w, rep)


def is_in_sp(m, form=None) -> bool:
    return classify_matrix(m, form) == "symplectic"


def column(vec: Iterable[int]) -> np.ndarray:
    return np.array([int(x) for x in vec], dtype=object)


__all__ = [
    "ConsistencyError", "HomologyVector", "LatticeError", "Representation", "SymplecticSpace",
    "TwistWord", "UsageError", "base_representation", "block_form", "block_permutation",
    "classify_matrix", "eval_word", "from_block", "gram_identity", "gram_pair", "in_lambda_p",
    "is_in_sp", "lambda_p_generators", "phi_p", "random_element", "random_word", "reduce_mod",
    "reduce_mod2", "sp_order", "symplectic_inverse", "to_block", "transvection",
    "transvection_matrix", "z_matrix",
]
