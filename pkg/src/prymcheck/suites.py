"""Verification suites behind the command-line front end.

Each suite returns a :class:`SuiteReport` of named checks.  Reports serialize
canonically (sorted keys, no timings unless requested) so equal inputs give
byte-identical JSON.
"""
from __future__ import annotations

import hashlib
import json
import math
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .cover import (
    build_cover, cover_homology, cover_representation, find_simple_loop, lift_loop, lifted_twist,
    minus_coords, mod_ell_closure, prym_representation, symmetric_basis,
)
from .lattice import identity, imatmul, standard_form
from .orbits import (
    CLOSURE_MAX_GENUS, CapabilityError, default_beta, expected_stabilizer_order, f2_bitstring,
    fixes_vector, orbit_classify, shadow_n1, stabilizer_closure, stabilizer_generators,
    transitivity_report,
)
from .relations import (
    base_rep_for, check_config, complementary_chains, standard_loops, two_chain,
    verify_boundary_twist, verify_complementary_chains, verify_lifted_obstruction,
    verify_minus_id_span, verify_two_chain,
)
from .siegel import (
    CONVENTIONS, EQUIVARIANCE_TOL, FIXED_POINT_TOL, MEMBERSHIP_TOL, PrymSetup, antiholomorphic_check,
    composition_residual, equivariance_sweep, is_siegel, prym_extract, random_block_symplectic,
    random_siegel, random_symmetric_period,
)
from .surface import standard_surface
from .symplectic import (
    Representation, SymplecticSpace, UsageError, eval_word, in_lambda_p, lambda_p_generators, phi_p,
    random_element, sp_order, transvection_matrix,
)

SCHEMA_VERSION = 1
ORBIT_MAX_GENUS = 6
COVER_MAX_GENUS = 7
PRYM_CLOSURE_MAX_GENUS = 3
SIGNS = (1, -1)


@dataclass
class Params:
    genus: int = 4
    beta: int | None = None
    p: list[int] | None = None
    ell: list[int] | None = None
    seed: int = 0
    trials: int | None = None
    tol: float | None = None

    def resolved_beta(self, g: int | None = None) -> int:
        return default_beta(g or self.genus) if self.beta is None else self.beta

    def to_json(self) -> dict:
        out = asdict(self)
        out["beta"] = f2_bitstring(self.resolved_beta(), self.genus)
        return out


@dataclass
class Check:
    name: str
    claim: str
    verdict: bool
    details: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0

    def to_json(self, timings: bool = False) -> dict:
        out = {"name": self.name, "claim": self.claim, "verdict": "pass" if self.verdict else "fail",
               "details": self.details}
        if timings:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


@dataclass
class SuiteReport:
    suite: str
    params: Params
    checks: list[Check] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(c.verdict for c in self.checks)

    def run(self, name: str, claim: str, fn: Callable[[], tuple[bool, dict]]) -> Check:
        t0 = time.perf_counter()
        ok, details = fn()
        check = Check(name, claim, bool(ok), _jsonable(details), (time.perf_counter() - t0) * 1e3)
        self.checks.append(check)
        return check

    def extend(self, other: "SuiteReport") -> None:
        for c in other.checks:
            self.checks.append(Check(f"{other.suite}/{c.name}", c.claim, c.verdict, c.details, c.elapsed_ms))

    def to_json(self, timings: bool = False) -> dict:
        params = self.params.to_json()
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": "prymcheck",
            "version": __version__,
            "suite": self.suite,
            "parameters": params,
            "input_digest": digest({"suite": self.suite, "parameters": params}),
            "checks": [c.to_json(timings) for c in self.checks],
            "verdict": "pass" if self.verdict else "fail",
        }

    def text(self) -> str:
        lines = [f"{self.suite}: {'PASS' if self.verdict else 'FAIL'}"]
        for c in self.checks:
            lines.append(f"  [{'pass' if c.verdict else 'FAIL'}] {c.name}: {c.claim}")
        return "\n".join(lines)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(f"{float(x):.6g}")
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def _beta_ok(g: int, beta: int) -> None:
    if beta == 0 or beta >> (2 * g):
        raise UsageError("beta must be a nonzero bitstring of length 2g")


# -- finite orbits ---------------------------------------------------------------

def suite_orbits(params: Params) -> SuiteReport:
    g = params.genus
    if g < 2:
        raise UsageError("genus must be at least 2")
    if g > ORBIT_MAX_GENUS:
        raise CapabilityError(f"orbit enumeration is limited to genus <= {ORBIT_MAX_GENUS}")
    beta = params.resolved_beta()
    _beta_ok(g, beta)
    rep = SuiteReport("orbits", params)

    def orbits():
        cls = orbit_classify(g, beta)
        expected = (2 ** (2 * g - 1), 2 ** (2 * g - 1) - 2, 1)
        return cls.matches_predicate() and cls.sizes == expected, {
            "sizes": list(cls.sizes), "expected_sizes": list(expected), "n_orbits": len(cls.orbits)}

    rep.run("orbit-partition", "orbits of nonzero mod-2 classes under the stabilizer of beta "
            "are the pairing-one class, the pairing-zero class minus beta, and beta", orbits)
    return rep


def suite_generation(params: Params) -> SuiteReport:
    g = params.genus
    beta = params.resolved_beta()
    _beta_ok(g, beta)
    if g > CLOSURE_MAX_GENUS:
        raise CapabilityError(f"full closure is limited to genus <= {CLOSURE_MAX_GENUS}; "
                              "run 'verify orbits' for an orbit-only check")
    rep = SuiteReport("generation", params)
    closure = stabilizer_closure(g, beta)

    def order():
        want = expected_stabilizer_order(g)
        return closure.order == want, {"order": closure.order, "expected": want,
                                       "sp_order": sp_order(g, 2), "n_generators": len(closure.generators)}

    def fixes():
        mask = fixes_vector(closure.elements, beta, g)
        return bool(mask.all()), {"elements_checked": int(mask.size)}

    rep.run("closure-order", "transvections t_c with pair(c, beta) = 0 generate the full "
            "stabilizer of beta in Sp(2g, 2)", order)
    rep.run("closure-fixes-beta", "every closure element fixes beta", fixes)
    return rep


def suite_shadow(params: Params) -> SuiteReport:
    g = params.genus
    beta = params.resolved_beta()
    _beta_ok(g, beta)
    if g > ORBIT_MAX_GENUS:
        raise CapabilityError(f"shadow graph is limited to genus <= {ORBIT_MAX_GENUS}")
    rep = SuiteReport("shadow-complex", params)
    graph = shadow_n1(g, beta)

    def connected():
        return graph.is_connected(), {"vertices": len(graph.vertices), "necessary_condition_only": True}

    rep.run("shadow-connected", "the homology shadow of N1 is connected", connected)
    if g <= CLOSURE_MAX_GENUS + 1:
        def transitive():
            r = transitivity_report(graph, stabilizer_generators(g, beta))
            return (r.vertex_orbits, r.edge_orbits) == (1, 1), {
                "vertex_orbits": r.vertex_orbits, "edge_orbits": r.edge_orbits,
                "ordered_edges": r.n_ordered_edges, "necessary_condition_only": True}

        rep.run("shadow-transitive", "the stabilizer acts transitively on shadow vertices "
                "and ordered shadow edges", transitive)
    return rep


# -- relations -------------------------------------------------------------------

def suite_chain_relations(params: Params) -> SuiteReport:
    g = params.genus
    if g < 1:
        raise UsageError("genus must be positive")
    rep = SuiteReport("chain-relations", params)
    space = SymplecticSpace(g)
    primes = params.p or [2, 3]
    for sign in SIGNS:
        tag = "" if sign == 1 else "/opposite-sign"
        cfg2 = two_chain(g)
        base2 = base_rep_for(cfg2, sign)

        def two():
            r = verify_two_chain(cfg2, base2)
            mods = {str(q): verify_two_chain(cfg2, base2.mod(q)).verdict for q in primes}
            return r.verdict and all(mods.values()), {"integral": r.verdict, "mod": mods}

        rep.run("two-chain" + tag, "(T_a^2 T_b)^4 = T_d for the 2-chain a1, b1", two)

        def minus_id():
            r = verify_minus_id_span(space.basis("a1").array, space.basis("b1").array, g, sign)
            return r.verdict and r.details["square_is_identity"], r.details

        rep.run("minus-id-on-span" + tag, "(T_c1 T_c2)^3 is -Id on span(c1, c2) and the identity "
                "on its orthogonal complement", minus_id)
        if g >= 4:
            cfg = complementary_chains(g)
            base = base_rep_for(cfg, sign)

            def chains():
                r = verify_complementary_chains(cfg, base)
                d = verify_boundary_twist(cfg, base)
                mods = {str(q): verify_complementary_chains(cfg, base.mod(q)).verdict for q in primes}
                return r.verdict and d.verdict and all(mods.values()), {
                    "integral": r.verdict, "boundary_twist": d.verdict, "mod": mods,
                    "left_word": r.details["left_word"], "right_word": r.details["right_word"]}

            rep.run("complementary-chains" + tag, "(T_a^2 T_c1 T_c2)^3 = (T_a'^2 T_c3 ... T_c(2g-2))^(2g-3)",
                    chains)

            def spans():
                cls = cfg.classes()
                r = verify_minus_id_span(cls["c1"], cls["c2"], g, sign)
                return r.verdict, r.details

            rep.run("minus-id-on-chain-span" + tag, "(T_c1 T_c2)^3 is -Id on span(c1, c2) for the "
                    "configuration curves", spans)
    if g >= 4:
        cfg = complementary_chains(g)
        rep.run("configuration-certified", "configuration curves are simple with the chain "
                "intersection pattern", lambda: (all(check_config(cfg).values()), {
                    **check_config(cfg), "curves": {k: str(v) for k, v in cfg.loops.items()}}))
    return rep


# -- cover and Prym ----------------------------------------------------------------

def _cover_setup(params: Params):
    g = params.genus
    if g < 2:
        raise UsageError("genus must be at least 2")
    if g > COVER_MAX_GENUS:
        raise CapabilityError(f"cover homology is limited to genus <= {COVER_MAX_GENUS}")
    beta = params.resolved_beta()
    _beta_ok(g, beta)
    surf = standard_surface(g)
    cover = build_cover(surf, beta)
    return g, beta, surf, cover


def suite_cover(params: Params) -> SuiteReport:
    g, beta, surf, cover = _cover_setup(params)
    rep = SuiteReport("cover", params)

    def euler():
        chi = cover.graph.euler_characteristic()
        return (chi == 2 * surf.euler_characteristic() and cover.genus == 2 * g - 1
                and cover.graph.is_connected()), {"euler": chi, "genus": cover.genus}

    rep.run("cover-euler", "the cover is connected of genus 2g - 1", euler)
    hom = cover_homology(cover)
    rep.run("cover-homology", "the cover intersection form is skew and unimodular, the deck map is a "
            "nontrivial symplectic involution, and the halved form on the minus lattice is even "
            "and unimodular of rank 2g - 2", lambda: (all(hom.checks.values()), hom.checks))

    def lifts():
        out = {}
        for m in (0, 1):
            loop = find_simple_loop(surf, m, beta)
            cls = [hom.coords(z) for z in lift_loop(cover, loop)]
            if m == 0:
                ok = len(cls) == 2 and np.array_equal(hom.sigma.dot(cls[0]), cls[1])
            else:
                ok = len(cls) == 1 and np.array_equal(hom.sigma.dot(cls[0]), cls[0])
            out[f"monodromy_{m}"] = {"loop": str(loop), "n_lifts": len(cls), "ok": bool(ok)}
        return all(v["ok"] for v in out.values()), out

    rep.run("lift-loops", "even loops have two lifts swapped by the deck map, odd loops one "
            "deck-invariant lift", lifts)

    def sym():
        s = symmetric_basis(hom)
        n, h = g - 1, 2 * g - 1
        perm = np.zeros((2 * h, 2 * h), dtype=object)
        for i in range(h):
            j = i if i == 0 else (i + n if i <= n else i - n)
            perm[2 * j, 2 * i] = perm[2 * j + 1, 2 * i + 1] = 1
        return np.array_equal(s.sigma, perm), {"sigma_symmetric_basis": s.sigma}

    rep.run("symmetric-basis", "a symplectic basis exists with sigma(a_i) = a_(i+g-1), "
            "sigma(b_i) = b_(i+g-1)", sym)
    return rep


def suite_prym(params: Params) -> SuiteReport:
    g, beta, surf, cover = _cover_setup(params)
    rep = SuiteReport("prym", params)
    hom = cover_homology(cover)
    n = g - 1
    ident = identity(2 * n)
    loops = standard_loops(g)
    crep = cover_representation(hom, loops)
    prep = prym_representation(hom, crep)
    rep.run("prym-sigma", "the deck map acts as -Id on the minus lattice",
            lambda: (np.array_equal(prep.images["sigma"], -ident), {}))

    def odd():
        loop = find_simple_loop(surf, 1, beta)
        t = lifted_twist(hom, loop)
        return np.array_equal(hom.restrict(t.matrix), ident), {"loop": str(loop)}

    rep.run("prym-connected-lift", "the lift of T_a^2 for an odd curve a acts trivially", odd)

    def even():
        out, ok = {}, True
        for name, loop in loops.items():
            t = lifted_twist(hom, loop)
            if t.monodromy:
                continue
            d = minus_coords(hom, t.difference)
            want = transvection_matrix(d, standard_form(n)) if any(d) else ident
            good = np.array_equal(hom.restrict(t.matrix), want)
            ok &= good
            out[str(loop)] = {"difference": d, "ok": good}
        return ok and bool(out), out

    rep.run("prym-multitwist", "the lift of T_c for an even curve c acts as the transvection by "
            "the lift difference for the halved form", even)

    def hom_check():
        rng = random.Random(params.seed)
        trials = params.trials or 50
        ok = True
        for _ in range(trials):
            (w1, _), (w2, _) = random_element(crep, rng, 6), random_element(crep, rng, 6)
            lhs = eval_word(w1 * w2, prep)
            rhs = imatmul(eval_word(w1, prep), eval_word(w2, prep))
            ok &= np.array_equal(lhs, rhs)
        return ok, {"trials": trials, "seed": params.seed, "max_word_length": 6}

    rep.run("prym-homomorphism", "restriction to the minus lattice is multiplicative", hom_check)
    if g <= PRYM_CLOSURE_MAX_GENUS:
        for ell in params.ell or [2, 3]:
            def closure(ell=ell):
                c = mod_ell_closure(list(prep.images.values()), ell)
                return c.order == sp_order(n, ell), {"order": c.order, "expected": sp_order(n, ell)}

            rep.run(f"prym-surjective-mod-{ell}", "Prym images reduce onto Sp(2g - 2, ell)", closure)
    if g >= 4 and beta == default_beta(g):
        cfg = complementary_chains(g)
        for sign in SIGNS:
            tag = "" if sign == 1 else "/opposite-sign"

            def obstruction(sign=sign):
                r = verify_lifted_obstruction(cfg, hom, sign)
                return r.verdict, r.checks

            rep.run("lifted-obstruction" + tag, "lifted complementary-chain words satisfy L = sigma R "
                    "with L != R, and Prym(L) = -Prym(R)", obstruction)
    return rep


# -- the congruence character --------------------------------------------------------

def suite_abelianization(params: Params) -> SuiteReport:
    g = params.genus
    if g < 1:
        raise UsageError("genus must be positive")
    primes = params.p or [2, 3, 5, 7]
    if any(q < 2 for q in primes):
        raise UsageError("p must be at least 2")
    trials = params.trials or 1000
    rep = SuiteReport("abelianization", params)
    space = SymplecticSpace(g)
    for q in primes:
        def additivity(q=q):
            gens = lambda_p_generators(space, q)
            grp = Representation(gens, space.dim, name=f"lambda[{q}]")
            rng = random.Random(params.seed * 1000 + q)
            bad = 0
            image = set()
            strict = True
            for _ in range(trials):
                _, a = random_element(grp, rng, 12)
                _, b = random_element(grp, rng, 12)
                pa, pb = phi_p(a, q), phi_p(b, q)
                bad += phi_p(imatmul(a, b), q) != (pa + pb) % q
                image |= {pa, pb}
                strict &= in_lambda_p(a, q) and in_lambda_p(b, q)
            # phi is additive, so its image is generated by the generator values
            values = sorted({phi_p(m, q) for m in gens.values()})
            surjective = math.gcd(q, *values) == 1
            return bad == 0 and surjective and strict, {
                "pairs": trials, "failures": bad, "sampled_image": sorted(image),
                "generator_values": values, "surjective": surjective, "seed": params.seed,
                "max_word_length": 12}

        rep.run(f"phi-{q}", "A -> pair(A e1 - e1, e1) / p mod p is a surjective homomorphism "
                "on the congruence subgroup", additivity)
    return rep


# -- Siegel numerics -----------------------------------------------------------------

def suite_siegel(params: Params) -> SuiteReport:
    g = params.genus
    if g < 2:
        raise UsageError("genus must be at least 2")
    if g > COVER_MAX_GENUS:
        raise CapabilityError(f"cover homology is limited to genus <= {COVER_MAX_GENUS}")
    trials = params.trials or 100
    tol = params.tol or EQUIVARIANCE_TOL
    beta = params.resolved_beta()
    _beta_ok(g, beta)
    rep = SuiteReport("siegel", params)
    setup = PrymSetup.build(g, beta, standard_loops(g))
    seeds = range(params.seed, params.seed + trials)
    h = 2 * g - 1

    def composition():
        res = 0.0
        for s in seeds:
            rng, nrng = random.Random(s), np.random.default_rng(s)
            m, n_, tau = random_block_symplectic(h, rng), random_block_symplectic(h, rng), random_siegel(h, nrng)
            res = max(res, composition_residual(m, n_, tau), composition_residual(m, n_, tau, True))
        return res <= MEMBERSHIP_TOL, {"max_residual": res, "tolerance": MEMBERSHIP_TOL, "size": h}

    rep.run("action-composition", "both modular actions are group actions", composition)

    def periods():
        worst, ok = 0.0, True
        for s in seeds:
            per = random_symmetric_period(g, s, setup.sigma_block)
            worst = max(worst, per.fixed_residual())
            ok &= is_siegel(prym_extract(per))
        return ok and worst <= FIXED_POINT_TOL, {"max_fixed_residual": worst, "tolerance": FIXED_POINT_TOL}

    rep.run("prym-extraction", "B - C of a sigma-fixed period matrix lies in the Siegel space", periods)
    for conv in CONVENTIONS:
        def equi(conv=conv):
            rows = equivariance_sweep(setup, seeds, 6, conv)
            res = max(r.residual for r in rows)
            return (res <= tol) == (conv != "mixed"), {"max_residual": res, "tolerance": tol,
                                                        "word_length": 6, "convention": conv}

        claim = ("the extraction is Prym-equivariant when both sides use the same action"
                 if conv != "mixed" else
                 "mixing the standard action upstairs with the variant downstairs breaks equivariance")
        rep.run(f"equivariance-{conv}", claim, equi)

    def anti():
        res = 0.0
        for s in seeds:
            rng, nrng = random.Random(s), np.random.default_rng(s)
            res = max(res, antiholomorphic_check(random_block_symplectic(h, rng), random_siegel(h, nrng)))
        return res <= MEMBERSHIP_TOL, {"max_residual": res, "tolerance": MEMBERSHIP_TOL}

    rep.run("antiholomorphic-z-equivariance", "G(tau) = -conj(tau) satisfies G(M tau) = (Z M Z) G(tau)",
            anti)
    return rep


SUITES = {
    "orbits": suite_orbits,
    "generation": suite_generation,
    "shadow-complex": suite_shadow,
    "chain-relations": suite_chain_relations,
    "cover": suite_cover,
    "prym": suite_prym,
    "abelianization": suite_abelianization,
    "siegel": suite_siegel,
}

FINITE_SUITES = ("orbits", "generation", "shadow-complex")


def suite_all(params: Params) -> SuiteReport:
    """Every suite; the finite closures run at genus min(g, 3)."""
    rep = SuiteReport("all", params)
    for name, fn in SUITES.items():
        p = params
        if name in FINITE_SUITES and params.genus > CLOSURE_MAX_GENUS:
            p = Params(**{**asdict(params), "genus": CLOSURE_MAX_GENUS})
            if params.beta is not None and params.beta >> (2 * CLOSURE_MAX_GENUS):
                p.beta = None
        rep.extend(fn(p))
    return rep


SUITES_ALL = {**SUITES, "all": suite_all}
