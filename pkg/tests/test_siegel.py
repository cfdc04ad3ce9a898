import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from prymcheck.relations import standard_loops
from prymcheck.siegel import (
    G, NumericError, PeriodMatrix, PrymSetup, SiegelPoint, act, act_variant, antiholomorphic_check,
    composition_residual, equivariance_check, equivariance_sweep, is_siegel, prym_extract,
    random_block_symplectic, random_siegel, random_symmetric_period, sigma_permutation,
)
from prymcheck.symplectic import TwistWord

SETUP3 = PrymSetup.build(3, loops=standard_loops(3))
SETUP4 = PrymSetup.build(4, loops=standard_loops(4))


def test_identity_and_translation():
    tau = random_siegel(3, np.random.default_rng(1))
    assert np.allclose(act(np.eye(6), tau), tau)
    t = np.array([[0.3 + 1.2j]])
    assert np.allclose(act([[1, 1], [0, 1]], t), t + 1)


def test_variant_matches_the_printed_formula():
    rng = random.Random(3)
    for _ in range(20):
        m = random_block_symplectic(3, rng).astype(float)
        tau = random_siegel(3, np.random.default_rng(rng.randrange(1 << 30)))
        a, b, c, d = m[:3, :3], m[:3, 3:], m[3:, :3], m[3:, 3:]
        brute = (a @ tau - b) @ np.linalg.inv(-c @ tau + d)
        assert np.abs(act_variant(m, tau) - brute).max() < 1e-10


@given(st.integers(0, 2 ** 32))
def test_actions_compose_and_preserve_siegel_space(seed):
    rng, nrng = random.Random(seed), np.random.default_rng(seed)
    m, n, tau = random_block_symplectic(3, rng), random_block_symplectic(3, rng), random_siegel(3, nrng)
    assert composition_residual(m, n, tau) <= 1e-10
    assert composition_residual(m, n, tau, variant=True) <= 1e-10
    assert is_siegel(act(m, tau)) and is_siegel(act_variant(m, tau))


def test_degenerate_inputs():
    with pytest.raises(NumericError):
        act([[1, 0], [0, 0]], np.array([[1j]]))
    with pytest.raises(NumericError):
        SiegelPoint(np.array([[1 - 1j]]))
    assert not is_siegel(np.array([[1j, 1], [0, 1j]]))


def test_involution_g():
    tau = random_siegel(3, np.random.default_rng(5))
    assert np.array_equal(G(G(tau)), tau)
    assert is_siegel(G(tau))


def test_antiholomorphic_examples():
    tau = random_siegel(1, np.random.default_rng(2))
    assert antiholomorphic_check(np.eye(2, dtype=int), tau) == 0
    m = np.array([[1, 1], [0, 1]])
    assert np.allclose(G(tau + 1), -np.conj(tau) - 1)
    assert np.allclose(G(act(m, tau)), act([[1, -1], [0, 1]], G(tau)))
    assert antiholomorphic_check(m, tau) < 1e-12


def test_antiholomorphic_random():
    worst = 0.0
    for seed in range(100):
        rng, nrng = random.Random(seed), np.random.default_rng(seed)
        worst = max(worst, antiholomorphic_check(random_block_symplectic(3, rng), random_siegel(3, nrng)))
    assert worst <= 1e-10


def _period(g, b, c, corner=1j):
    # (corner, 0, 0; 0, B, C^T; 0, C, B) is fixed by the swap of the two blocks
    n = g - 1
    pi = np.zeros((2 * g - 1, 2 * g - 1), dtype=complex)
    pi[0, 0] = corner
    pi[1:g, 1:g] = b
    pi[g:, g:] = b
    pi[g:, 1:g] = c
    pi[1:g, g:] = np.asarray(c).T
    assert pi.shape == (2 * n + 1, 2 * n + 1)
    return PeriodMatrix(pi, SETUP3.sigma_block, g)


def test_extraction_examples():
    eye = np.eye(2)
    assert np.allclose(prym_extract(_period(3, 1j * eye, 0 * eye)), 1j * eye)
    assert np.allclose(prym_extract(_period(3, 2j * eye, 1j * eye)), 1j * eye)


def test_extraction_requires_a_fixed_point():
    per = _period(3, 1j * np.eye(2), 0 * np.eye(2))
    per.pi[1, 2] = per.pi[2, 1] = 0.5
    with pytest.raises(NumericError):
        prym_extract(per)


@pytest.mark.parametrize("setup", [SETUP3, SETUP4], ids=["g3", "g4"])
def test_random_periods(setup):
    p = sigma_permutation(setup.sigma_block)
    for seed in range(100):
        per = random_symmetric_period(setup.genus, seed, setup.sigma_block)
        assert per.fixed_residual() <= 1e-12
        tau = prym_extract(per)
        assert np.linalg.eigvalsh(tau.imag).min() > 0
        # relabelling the sheets fixes the point, so the extraction is unchanged
        swapped = PeriodMatrix(p @ per.pi @ p.T, per.sigma, per.genus)
        assert np.allclose(prym_extract(swapped), tau)


def test_sigma_is_a_block_permutation():
    p = sigma_permutation(SETUP4.sigma_block)
    assert np.array_equal(p @ p, np.eye(7)) and p[0, 0] == 1


def test_equivariance_examples():
    per = random_symmetric_period(3, 0, SETUP3.sigma_block)
    assert equivariance_check(TwistWord(), per, SETUP3) == 0
    assert equivariance_check(TwistWord.of("sigma"), per, SETUP3) <= 1e-9
    names = [k for k in SETUP3.cover_rep.images if k != "sigma"]
    assert equivariance_check(TwistWord.of(*names[:3]), per, SETUP3) <= 1e-9


@pytest.mark.parametrize("setup", [SETUP3, SETUP4], ids=["g3", "g4"])
def test_equivariance_sweep(setup):
    for conv in ("variant", "standard"):
        rows = equivariance_sweep(setup, range(100), 6, conv)
        assert max(r.residual for r in rows) <= 1e-9
    # the standard action upstairs with the variant downstairs does not match
    rows = equivariance_sweep(setup, range(10), 6, "mixed")
    assert max(r.residual for r in rows) > 1e-3
