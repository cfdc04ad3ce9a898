"""Table of the finite mod-2 computations for beta = b1.

    python3 scripts/orbit_table.py --max-genus 5
"""
import argparse

from prymcheck.orbits import (
    CLOSURE_MAX_GENUS, expected_stabilizer_order, orbit_classify, shadow_n1, stabilizer_closure,
    stabilizer_generators, transitivity_report,
)


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-genus", type=int, default=5)
    args = parser.parse_args(argv)
    print(f"{'g':>2} {'orbit sizes':>16} {'closure':>8} {'expected':>15} {'connected':>9} {'orbits':>7}")
    for g in range(2, args.max_genus + 1):
        sizes = orbit_classify(g).sizes
        order = stabilizer_closure(g).order if g <= CLOSURE_MAX_GENUS else "-"
        graph = shadow_n1(g)
        trans = "-"
        if g <= CLOSURE_MAX_GENUS:
            r = transitivity_report(graph, stabilizer_generators(g, graph.beta))
            trans = f"{r.vertex_orbits},{r.edge_orbits}"
        print(f"{g:>2} {str(sizes):>16} {order:>8} {expected_stabilizer_order(g):>15} "
              f"{str(graph.is_connected()):>9} {trans:>7}")


if __name__ == "__main__":
    main()
