"""The ten acceptance criteria, one test each, at their stated tolerances.

Each test prints a single ``CRITERION n: PASS|FAIL ...`` line.
"""
import json
import random
import subprocess
import sys
import time

import numpy as np

from prymcheck.cover import (
    build_cover, cover_homology, cover_representation, find_simple_loop, lifted_twist, minus_coords,
    mod_ell_closure, prym_representation,
)
from prymcheck.lattice import identity, imatmul, standard_form, unimodular_determinant
from prymcheck.orbits import (
    orbit_classify, shadow_n1, stabilizer_closure, stabilizer_generators, transitivity_report,
)
from prymcheck.relations import (
    base_rep_for, complementary_chains, standard_loops, two_chain, verify_complementary_chains,
    verify_lifted_obstruction, verify_minus_id_span, verify_two_chain,
)
from prymcheck.siegel import (
    PrymSetup, antiholomorphic_check, composition_residual, equivariance_sweep,
    random_block_symplectic, random_siegel,
)
from prymcheck.surface import standard_surface
from prymcheck.symplectic import (
    Representation, SymplecticSpace, lambda_p_generators, phi_p, random_element, sp_order,
    transvection_matrix,
)


def report(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def test_criterion_1_orbit_classification(capsys):
    t0 = time.perf_counter()
    sizes, ok = {}, True
    for g in (2, 3, 4):
        t = time.perf_counter()
        cls = orbit_classify(g)
        sizes[g] = cls.sizes
        ok &= cls.matches_predicate() and cls.sizes == (2 ** (2 * g - 1), 2 ** (2 * g - 1) - 2, 1)
        if g == 4:
            ok &= time.perf_counter() - t < 60
    report(capsys, 1, ok, f"sizes {sizes} in {time.perf_counter() - t0:.1f}s")


def test_criterion_2_generation(capsys):
    orders, ok = {}, True
    for g, want in ((2, 48), (3, 23040)):
        t = time.perf_counter()
        order = stabilizer_closure(g).order
        orders[g] = order
        ok &= order == want == sp_order(g, 2) // (4 ** g - 1)
        if g == 3:
            ok &= time.perf_counter() - t < 120
    report(capsys, 2, ok, f"closure orders {orders}")


def test_criterion_3_shadow_complex(capsys):
    connected = {g: shadow_n1(g).is_connected() for g in (2, 3, 4, 5)}
    trans = {}
    for g in (2, 3):
        graph = shadow_n1(g)
        r = transitivity_report(graph, stabilizer_generators(g, graph.beta))
        trans[g] = (r.vertex_orbits, r.edge_orbits)
    ok = all(connected.values()) and all(v == (1, 1) for v in trans.values())
    report(capsys, 3, ok, f"connected {connected}, orbit counts {trans}")


def test_criterion_4_chain_relations(capsys):
    results = {}
    for g in (1, 2, 4, 5):
        cfg = two_chain(g)
        results[f"two-chain g={g}"] = verify_two_chain(cfg, base_rep_for(cfg)).verdict
    for g in (4, 5):
        cfg = complementary_chains(g)
        results[f"complementary g={g}"] = verify_complementary_chains(cfg, base_rep_for(cfg)).verdict
    s = SymplecticSpace(3)
    results["minus-id"] = verify_minus_id_span(s.basis("a1").array, s.basis("b1").array, 3).verdict
    report(capsys, 4, all(results.values()), str(results))


def _cover_pipeline(g, beta):
    surf = standard_surface(g)
    cover = build_cover(surf, beta)
    hom = cover_homology(cover)
    n = g - 1
    ident = identity(2 * n)
    mg = hom.minus_gram * 2
    checks = {
        "euler": cover.graph.euler_characteristic() == 2 * (2 - 2 * g) and cover.genus == 2 * g - 1,
        "sigma_involution": np.array_equal(imatmul(hom.sigma, hom.sigma), identity(hom.rank)),
        "minus_rank": hom.minus_basis.shape[1] == 2 * g - 2,
        "minus_even": all(int(x) % 2 == 0 for x in mg.flat),
        "minus_unimodular": unimodular_determinant(hom.minus_gram) == 1,
        "prym_sigma": np.array_equal(hom.restrict(hom.sigma), -ident),
    }
    loops = dict(standard_loops(g))
    loops["odd"] = find_simple_loop(surf, 1, beta)
    loops["even"] = find_simple_loop(surf, 0, beta)
    odd_ok, even_ok, n_even = True, True, 0
    for loop in loops.values():
        t = lifted_twist(hom, loop)
        image = hom.restrict(t.matrix)
        if t.monodromy:
            odd_ok &= np.array_equal(image, ident)
        else:
            d = minus_coords(hom, t.difference)
            n_even += bool(any(d))
            even_ok &= np.array_equal(image, transvection_matrix(d, standard_form(n)) if any(d) else ident)
    checks["prym_connected_lift"] = odd_ok
    checks["prym_multitwist"] = even_ok and n_even > 0
    return checks


def test_criterion_5_cover_pipeline(capsys):
    failures, times = [], {}
    for g in (3, 4, 5):
        t = time.perf_counter()
        top = 1 << (2 * g)
        for beta in (2, 1, 0b1001, top - 1):
            for name, ok in _cover_pipeline(g, beta).items():
                if not ok:
                    failures.append((g, beta, name))
        times[g] = round(time.perf_counter() - t, 2)
        if times[g] >= 10:
            failures.append((g, "time", times[g]))
    report(capsys, 5, not failures, f"4 betas per genus, seconds {times}, failures {failures}")


def test_criterion_6_sigma_obstruction(capsys):
    hom = cover_homology(build_cover(standard_surface(4), 2))
    r = verify_lifted_obstruction(complementary_chains(4), hom)
    ok = r.checks["left_is_sigma_right"] and r.checks["left_differs_from_right"] and \
        r.checks["prym_left_is_minus_prym_right"] and r.cover_left.shape == (14, 14)
    report(capsys, 6, ok, str(r.checks))


def test_criterion_7_surjectivity_shadow(capsys):
    t = time.perf_counter()
    hom = cover_homology(build_cover(standard_surface(3), 2))
    prym = prym_representation(hom, cover_representation(hom, standard_loops(3)))
    images = list(prym.images.values())
    orders = {ell: mod_ell_closure(images, ell).order for ell in (2, 3)}
    elapsed = time.perf_counter() - t
    ok = orders == {2: 720, 3: 51840} == {ell: sp_order(2, ell) for ell in (2, 3)} and elapsed < 120
    report(capsys, 7, ok, f"orders {orders} in {elapsed:.1f}s")


def test_criterion_8_abelianization(capsys):
    space = SymplecticSpace(2)
    summary, ok = {}, True
    for p in (2, 3, 5, 7):
        rep = Representation(lambda_p_generators(space, p), space.dim)
        rng = random.Random(p)
        bad, image = 0, set()
        for _ in range(1000):
            (_, a), (_, b) = random_element(rep, rng, 12), random_element(rep, rng, 12)
            pa, pb = phi_p(a, p), phi_p(b, p)
            bad += phi_p(imatmul(a, b), p) != (pa + pb) % p
            image |= {pa, pb}
        summary[p] = (bad, len(image))
        ok &= bad == 0 and image == set(range(p))
    report(capsys, 8, ok, f"(failures, image size) per p over 1000 pairs: {summary}")


def test_criterion_9_siegel(capsys):
    comp = anti = 0.0
    for seed in range(100):
        rng, nrng = random.Random(seed), np.random.default_rng(seed)
        m, n, tau = random_block_symplectic(3, rng), random_block_symplectic(3, rng), random_siegel(3, nrng)
        comp = max(comp, composition_residual(m, n, tau), composition_residual(m, n, tau, True))
        anti = max(anti, antiholomorphic_check(m, tau))
    equi = {}
    for g in (3, 4):
        setup = PrymSetup.build(g, loops=standard_loops(g))
        equi[g] = max(r.residual for r in equivariance_sweep(setup, range(100), 6))
    ok = comp <= 1e-10 and anti <= 1e-10 and all(v <= 1e-9 for v in equi.values())
    report(capsys, 9, ok, f"composition {comp:.2e}, equivariance {equi}, anti-holomorphic {anti:.2e}")


def test_criterion_10_determinism(capsys):
    cmd = [sys.executable, "-m", "prymcheck", "verify", "all", "--genus", "4", "--seed", "7", "--json"]
    t = time.perf_counter()
    first = subprocess.run(cmd, capture_output=True, check=False)
    elapsed = time.perf_counter() - t
    second = subprocess.run(cmd, capture_output=True, check=False)
    verdict = json.loads(first.stdout)["verdict"]
    ok = first.stdout == second.stdout and first.returncode == 0 and verdict == "pass" and elapsed <= 300
    report(capsys, 10, ok, f"identical={first.stdout == second.stdout}, verdict {verdict}, {elapsed:.1f}s")
