import numpy as np
import pytest

from prymcheck.cover import ConfigurationError, build_cover, cover_homology
from prymcheck.lattice import identity, imatmul
from prymcheck.relations import (
    base_rep_for, chain_words, check_config, complementary_chains, lifted_words, maximal_chain,
    search_chain, shift_handles, standard_loops, two_chain, verify_boundary_twist,
    verify_complementary_chains, verify_lifted_obstruction, verify_minus_id_span, verify_two_chain,
)
from prymcheck.surface import geometric_intersection, is_simple, standard_surface
from prymcheck.symplectic import Representation, SymplecticSpace, UsageError, symplectic_inverse


def test_two_chain_genus_one():
    cfg = two_chain(1)
    rep = base_rep_for(cfg)
    r = verify_two_chain(cfg, rep)
    assert r.verdict and r.left.tolist() == [[1, 0], [0, 1]]
    assert r.discrepancy is None and r.to_json()["verdict"] == "pass"


@pytest.mark.parametrize("g", [1, 2, 5])
@pytest.mark.parametrize("sign", [1, -1])
def test_two_chain_any_genus(g, sign):
    cfg = two_chain(g)
    rep = base_rep_for(cfg, sign)
    assert verify_two_chain(cfg, rep).verdict
    assert verify_two_chain(cfg, rep.mod(2)).verdict


def test_minus_id_genus_one():
    r = verify_minus_id_span([1, 0], [0, 1], 1)
    assert r.verdict and r.left.tolist() == [[-1, 0], [0, -1]]


def test_minus_id_genus_three():
    s = SymplecticSpace(3)
    r = verify_minus_id_span(s.basis("a1").array, s.basis("b1").array, 3)
    assert r.verdict
    m = r.left
    for lab in ("a2", "b2", "a3", "b3"):
        v = s.basis(lab).array
        assert np.array_equal(m.dot(v), v)
    # M is not the identity, but (-Id)^2 = Id on the span makes M^2 = Id
    assert not np.array_equal(m, identity(6))
    assert r.details["square_is_identity"] and r.details["sixth_power_is_identity"]


def test_minus_id_rejects_bad_pair():
    with pytest.raises(ConfigurationError):
        verify_minus_id_span([1, 0, 0, 0], [0, 0, 1, 0], 2)


def test_maximal_chain_is_certified():
    for g in (3, 4, 5):
        surf = standard_surface(g)
        chain = maximal_chain(g)
        assert len(chain) == 2 * g + 1
        for i, x in enumerate(chain):
            for j in range(i + 1, len(chain)):
                assert geometric_intersection(surf, x, chain[j]) == (1 if j == i + 1 else 0)


def test_search_oracle_reproduces_the_chain_up_to_orientation():
    found = search_chain(4, 4)
    assert found is not None
    for x, y in zip(found, maximal_chain(4)):
        assert x == y or x == y.inverse()


def test_handle_shift_is_a_symmetry():
    surf = standard_surface(4)
    chain = maximal_chain(4)
    shifted = [shift_handles(l, 4, 1) for l in chain]
    for i in range(len(chain)):
        for j in range(len(chain)):
            if i != j:
                assert geometric_intersection(surf, shifted[i], shifted[j]) == \
                    geometric_intersection(surf, chain[i], chain[j])


@pytest.mark.parametrize("g", [4, 5, 6])
def test_configuration_is_certified(g):
    cfg = complementary_chains(g)
    assert all(check_config(cfg).values())
    assert cfg.classes()["b"].tolist() == [0, 1] + [0] * (2 * g - 2)
    assert len(cfg.chains[0]) == 3 and len(cfg.chains[1]) == 2 * g - 3


def test_configuration_needs_genus_four():
    with pytest.raises(UsageError):
        complementary_chains(3)


@pytest.mark.parametrize("g", [4, 5, 6])
@pytest.mark.parametrize("sign", [1, -1])
def test_complementary_chains(g, sign):
    cfg = complementary_chains(g)
    rep = base_rep_for(cfg, sign)
    r = verify_complementary_chains(cfg, rep)
    assert r.verdict
    assert verify_boundary_twist(cfg, rep).verdict
    for q in (2, 3, 5):
        assert verify_complementary_chains(cfg, rep.mod(q)).verdict


def test_trivial_representation_satisfies_everything():
    cfg = complementary_chains(4)
    rep = Representation({k: identity(8) for k in list(cfg.loops) + ["d"]}, 8)
    assert verify_complementary_chains(cfg, rep).verdict


def test_report_shows_discrepancy_on_failure():
    cfg = complementary_chains(4)
    rep = base_rep_for(cfg)
    rep.images["c3"] = identity(8)
    r = verify_complementary_chains(cfg, rep)
    assert not r.verdict and r.discrepancy.any()
    assert "discrepancy" in r.to_json()


HOM4 = cover_homology(build_cover(standard_surface(4), 2))


@pytest.mark.parametrize("sign", [1, -1])
def test_lifted_obstruction(sign):
    cfg = complementary_chains(4)
    r = verify_lifted_obstruction(cfg, HOM4, sign)
    assert r.checks == {"left_is_sigma_right": True, "left_differs_from_right": True,
                        "prym_left_is_minus_prym_right": True, "agree_on_plus_lattice": True}
    assert r.cover_left.shape == (14, 14)
    assert np.array_equal(imatmul(r.prym_left, symplectic_inverse(r.prym_right)), -identity(6))


def test_lifted_words_replace_the_squares():
    cfg = complementary_chains(4)
    lw, rw = lifted_words(cfg)
    base_l, base_r = chain_words(cfg)
    assert len(lw) == len(base_l) - 3 and len(rw) == len(base_r) - 5


def test_standard_loops_are_distinct_and_simple():
    loops = standard_loops(4)
    surf = standard_surface(4)
    keys = {min(min(l.rotations()), min(l.inverse().rotations())) for l in loops.values()}
    assert len(keys) == len(loops)
    assert all(is_simple(surf, l) for l in loops.values())
