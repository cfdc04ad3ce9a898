"""Exact integer linear algebra used by the cover and Prym computations.

Everything here works on numpy ``object`` arrays of Python ints so that no
intermediate result can overflow.  The routines are small and written for
matrices of size at most a few dozen.
"""
from __future__ import annotations

import numpy as np


class LatticeError(ArithmeticError):
    """Raised when an integrality or unimodularity assumption fails."""


def as_int_matrix(a) -> np.ndarray:
    arr = np.array(a, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    return np.vectorize(int, otypes=[object])(arr) if arr.size else arr.astype(object)


def identity(n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def imatmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of integer matrices that never overflows.

    int64 is used when the entry bound makes it safe, Python ints otherwise.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.size == 0 or b.size == 0:
        return np.zeros((a.shape[0], b.shape[-1]), dtype=object)
    ma = max(abs(int(x)) for x in a.flat)
    mb = max(abs(int(x)) for x in b.flat)
    if ma * mb * a.shape[-1] < 2**62:
        return (a.astype(np.int64) @ b.astype(np.int64)).astype(object)
    return a.astype(object).dot(b.astype(object))


def imatpow(a: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        raise ValueError("negative power needs an explicit inverse")
    result = identity(a.shape[0])
    base = np.asarray(a, dtype=object)
    while k:
        if k & 1:
            result = imatmul(result, base)
        base = imatmul(base, base)
        k >>= 1
    return result


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def smith_normal_form(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (U, D, V) with U @ A @ V = D diagonal, U and V unimodular.

    The diagonal of D is non-negative and each entry divides the next.
    """
    d = as_int_matrix(a).copy()
    m, n = d.shape
    u = identity(m)
    v = identity(n)

    def row_comb(r1, r2, a11, a12, a21, a22):
        # (r1, r2) <- [[a11, a12], [a21, a22]] (r1, r2)
        for mat in (d, u):
            x, y = mat[r1].copy(), mat[r2].copy()
            mat[r1] = a11 * x + a12 * y
            mat[r2] = a21 * x + a22 * y

    def col_comb(c1, c2, a11, a12, a21, a22):
        for mat in (d, v):
            x, y = mat[:, c1].copy(), mat[:, c2].copy()
            mat[:, c1] = a11 * x + a21 * y
            mat[:, c2] = a12 * x + a22 * y

    for t in range(min(m, n)):
        nz = [(abs(d[i, j]), i, j) for i in range(t, m) for j in range(t, n) if d[i, j] != 0]
        if not nz:
            break
        _, i, j = min(nz)
        if i != t:
            row_comb(t, i, 0, 1, 1, 0)
        if j != t:
            col_comb(t, j, 0, 1, 1, 0)
        while True:
            done = True
            for i in range(t + 1, m):
                if d[i, t] != 0:
                    if d[i, t] % d[t, t] == 0:
                        row_comb(t, i, 1, 0, -(d[i, t] // d[t, t]), 1)
                        continue
                    g, x, y = _xgcd(d[t, t], d[i, t])
                    p, q = d[t, t] // g, d[i, t] // g
                    row_comb(t, i, x, y, -q, p)
                    done = False
            for j in range(t + 1, n):
                if d[t, j] != 0:
                    if d[t, j] % d[t, t] == 0:
                        col_comb(t, j, 1, -(d[t, j] // d[t, t]), 0, 1)
                        continue
                    g, x, y = _xgcd(d[t, t], d[t, j])
                    p, q = d[t, t] // g, d[t, j] // g
                    col_comb(t, j, x, -q, y, p)
                    done = False
            if done:
                # divisibility condition against the remaining block
                bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                       if d[i, j] % d[t, t] != 0]
                if not bad:
                    break
                i, _ = bad[0]
                row_comb(t, i, 1, 1, 0, 1)
        if d[t, t] < 0:
            d[t] = -d[t]
            u[t] = -u[t]
    return u, d, v


def integer_kernel(a) -> np.ndarray:
    """Columns form a Z-basis of {x in Z^n : A x = 0}.

    The kernel of an integer matrix is automatically saturated.
    """
    a = as_int_matrix(a)
    _, d, v = smith_normal_form(a)
    rank = sum(1 for i in range(min(d.shape)) if d[i, i] != 0)
    return v[:, rank:]


def inverse_unimodular(a) -> np.ndarray:
    a = as_int_matrix(a)
    n = a.shape[0]
    u, d, v = smith_normal_form(a)
    if any(d[i, i] != 1 for i in range(n)):
        raise LatticeError("matrix is not unimodular")
    inv = imatmul(v, u)
    if not np.array_equal(imatmul(a, inv), identity(n)):
        raise LatticeError("unimodular inverse check failed")
    return inv


def unimodular_determinant(a) -> int:
    """Absolute value of det(A), via Smith form."""
    _, d, _ = smith_normal_form(a)
    n = d.shape[0]
    if d.shape[0] != d.shape[1]:
        raise ValueError("square matrix expected")
    out = 1
    for i in range(n):
        out *= d[i, i]
    return out


def content(vec) -> int:
    g = 0
    for x in vec:
        g = _xgcd(g, int(x))[0]
    return g


def standard_form(n_pairs: int) -> np.ndarray:
    """Interleaved standard skew form: J[2i, 2i+1] = 1."""
    j = np.zeros((2 * n_pairs, 2 * n_pairs), dtype=object)
    for i in range(n_pairs):
        j[2 * i, 2 * i + 1] = 1
        j[2 * i + 1, 2 * i] = -1
    return j


def symplectic_basis(gram) -> np.ndarray:
    """Integer symplectic basis for a unimodular skew form.

    Returns B (columns are basis vectors, in the coordinates of ``gram``)
    with B^T G B equal to the interleaved standard form.  Pivot choice:
    the first basis vector, paired with the first partner of pairing +-1
    after a Euclidean reduction of its pairing row.
    """
    g = as_int_matrix(gram)
    n = g.shape[0]
    if n % 2:
        raise LatticeError("odd rank skew form")
    if not np.array_equal(g.T, -g):
        raise LatticeError("form is not skew")
    basis = [identity(n)[:, k] for k in range(n)]
    out = []

    def pair(x, y):
        return int(x.dot(g.dot(y)))

    while basis:
        u = basis[0]
        rest = basis[1:]
        # Euclid on the pairings <u, rest_k> using unimodular changes of rest
        while True:
            row = [pair(u, z) for z in rest]
            nz = [(abs(r), k) for k, r in enumerate(row) if r != 0]
            if not nz:
                raise LatticeError("form is degenerate or not unimodular")
            _, k = min(nz)
            if abs(row[k]) == 1:
                break
            reduced = False
            for t, r in enumerate(row):
                if t != k and r != 0:
                    rest[t] = rest[t] - (r // row[k]) * rest[k]
                    reduced = True
            if not reduced:
                raise LatticeError("form is not unimodular")
        w = rest.pop(k) * row[k]
        # project the remaining vectors onto the complement of span(u, w)
        basis = [z - pair(z, w) * u + pair(z, u) * w for z in rest]
        out.extend([u, w])
    result = np.column_stack(out) if out else np.zeros((n, 0), dtype=object)
    check = imatmul(imatmul(result.T, g), result)
    if not np.array_equal(check, standard_form(n // 2)):
        raise LatticeError("symplectic reduction failed")
    return result


# -- mod 2 symplectic algebra on bitmask vectors -------------------------------

def f2_pair(x: int, y: int, n_pairs: int) -> int:
    """Standard interleaved pairing of two bitmask vectors mod 2.

    Bit 2i is the e_i coordinate, bit 2i+1 the f_i coordinate.
    """
    ex, fx = x & _EVEN_MASK, (x >> 1) & _EVEN_MASK
    ey, fy = y & _EVEN_MASK, (y >> 1) & _EVEN_MASK
    return (bin(ex & fy).count("1") + bin(fx & ey).count("1")) & 1


_EVEN_MASK = int("01" * 64, 2)


def f2_transvection_word(images: list[int], n_pairs: int) -> list[int]:
    """Write a mod-2 symplectic map as a product of transvections.

    ``images[k]`` is the bitmask image of the k-th basis vector (interleaved
    e_1, f_1, ...).  Returns vectors c_1..c_r with
    A = t_{c_1} t_{c_2} ... t_{c_r}, where t_c(x) = x + <x, c> c.
    """
    dim = 2 * n_pairs
    cur = list(images)

    def apply(c, vecs):
        return [v ^ c if f2_pair(v, c, n_pairs) else v for v in vecs]

    applied = []  # transvections applied on the left, in order
    for k in range(n_pairs):
        e, f = 1 << (2 * k), 1 << (2 * k + 1)
        fixed = [1 << t for t in range(2 * k)]
        for target, extra in ((e, []), (f, [e])):
            idx = 2 * k if target == e else 2 * k + 1
            u = cur[idx]
            if u == target:
                continue
            keep = fixed + extra
            if f2_pair(u, target, n_pairs):
                steps = [u ^ target]
            else:
                steps = None
                for w in range(1, 1 << dim):
                    if not (f2_pair(u, w, n_pairs) and f2_pair(w, target, n_pairs)):
                        continue
                    c1, c2 = u ^ w, w ^ target
                    if all(f2_pair(c, z, n_pairs) == 0 for c in (c1, c2) for z in keep):
                        steps = [c1, c2]
                        break
                if steps is None:
                    raise LatticeError("transvection decomposition failed")
            for c in steps:
                cur = apply(c, cur)
                applied.append(c)
    if cur != [1 << t for t in range(dim)]:
        raise LatticeError("matrix is not symplectic mod 2")
    # t_r ... t_1 A = I  =>  A = t_1 ... t_r (transvections are involutions mod 2)
    return applied


def lift_f2_symplectic(images: list[int], n_pairs: int) -> np.ndarray:
    """An integer symplectic matrix reducing to the given mod-2 map."""
    dim = 2 * n_pairs
    j = standard_form(n_pairs)
    out = identity(dim)
    for c in f2_transvection_word(images, n_pairs):
        vec = np.array([(c >> t) & 1 for t in range(dim)], dtype=object)
        t = identity(dim) + np.outer(vec, j.dot(vec))
        out = imatmul(out, t)
    return out
