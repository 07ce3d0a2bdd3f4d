"""Short-horizon influence versus long-run influence.

How much of the network's final opinion a seed node shapes depends on when
the dynamic stops.  We track three structurally different sources in the
ring-with-petals graph: a ring node, the dead-end petal that only feeds its
sibling, and the return petal that feeds back into the ring.  The two
petals are indistinguishable at horizon one but diverge to a factor of two
in the long run — structure that a short-horizon measurement cannot see.
"""

import numpy as np

from netinfluence import (
    build_counterexample,
    diffusion_centrality_matrix,
    eigenvector_weights,
    influence_matrix,
)


def main() -> None:
    g = build_counterexample(2, 1)
    gamma = influence_matrix(g, alpha=0.5)
    n = g.node_count
    print(f"ring-with-petals graph: {n} nodes")
    print("node 0 sits on the ring; node 5 is its dead-end petal; node 6 is")
    print("its return petal (the one with an edge back to the ring)")
    print()

    sources = {"ring node 0": 0, "dead-end petal 5": 5, "return petal 6": 6}
    header = "".join(f"{name:>20s}" for name in sources)
    print(f"horizon  {header}")
    for horizon in (1, 2, 4, 8, 32, 128):
        table = diffusion_centrality_matrix(gamma, horizon)
        totals = table.sum(axis=0)  # summed share across all targets
        row = "".join(f"{totals[v]:20.4f}" for v in sources.values())
        print(f"{horizon:7d}  {row}")

    weights = eigenvector_weights(gamma).weights
    limits = "".join(f"{n * weights[v]:20.4f}" for v in sources.values())
    print(f"  limit  {limits}   (stationary weight x {n})")
    print()
    print("at horizon 1 both petals carry the same total influence; by the")
    print("long run the return petal is worth twice the dead-end petal,")
    print("because everything it emits re-enters the ring and circulates")


if __name__ == "__main__":
    main()
