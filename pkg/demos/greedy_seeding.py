"""Greedy seed selection against an entrenched opponent.

Choosing the best budget-k seed set is a combinatorial search, but the
payoff is monotone and has diminishing returns in a player's own seeds, so
a greedy scan that repeatedly adds the single most valuable node is both
fast and provably within a (1 - 1/e) factor of the exhaustive optimum.
This demo runs both searches on a fourteen-node graph and compares them.
"""

import math

from netinfluence import (
    GameConfig,
    exact_best_response,
    greedy_best_response,
    marginal_gain,
    random_graph,
)


def main() -> None:
    g = random_graph(14, 3, seed=21)
    cfg = GameConfig(graph=g, budgets=(3, 2), horizon=5)
    opponents = [{2, 11}]
    print("fourteen nodes; the opponent holds nodes 2 and 11; our budget is 3")
    print()

    chosen: set[int] = set()
    for round_number in (1, 2, 3):
        gains = {
            v: marginal_gain(cfg, 0, chosen, v, opponents)
            for v in range(cfg.n)
            if v not in chosen
        }
        v, gain = max(gains.items(), key=lambda item: (item[1], -item[0]))
        chosen.add(v)
        print(f"greedy round {round_number}: add node {v:2d}, payoff gain {gain:.6f}")
    print()

    greedy = greedy_best_response(cfg, 0, opponents)
    exact = exact_best_response(cfg, 0, opponents)
    assert greedy.strategy == frozenset(chosen)
    print(f"greedy picks {sorted(greedy.strategy)} -> payoff {greedy.payoff:.6f} "
          f"after {greedy.evaluations} evaluations")
    print(f"exact  picks {sorted(exact.strategy)} -> payoff {exact.payoff:.6f} "
          f"after {exact.evaluations} evaluations")
    ratio = greedy.payoff / exact.payoff
    print(f"ratio {ratio:.4f} (guaranteed at least {1 - 1/math.e:.4f})")
    print()
    print("note how the per-round gains shrink: each new seed overlaps more of")
    print("the influence the earlier seeds already captured")


if __name__ == "__main__":
    main()
