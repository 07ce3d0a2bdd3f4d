"""When does competitive seeding settle down?

Two contrasting experiments.  First, on the ring-with-petals graph with a
one-step horizon, best-response play never settles: each player keeps
hopping to the ring node that feeds on the other's audience, and the full
profile check confirms that no stable assignment exists at all.  Second,
under stationary (long-run) payoffs on a random graph, a simple
construction — strongest node first, then best responses — lands on a
verified equilibrium.
"""

from netinfluence import (
    GameConfig,
    best_response_dynamics,
    build_counterexample,
    consensus_equilibrium,
    exhaustive_nash_check,
    random_graph,
)


def main() -> None:
    g = build_counterexample(2, 1)
    cfg = GameConfig(graph=g, budgets=(1, 1), horizon=1)
    print("part 1: ring-with-petals graph, horizon 1, both players one seed")
    equilibria = exhaustive_nash_check(cfg)
    print(f"  exhaustive scan over {cfg.n ** 2} profiles: "
          f"{len(equilibria)} stable profiles")
    outcome = best_response_dynamics(cfg, [{0}, {0}])
    print(f"  best-response play from (0, 0): {outcome.kind} "
          f"after {len(outcome.trace)} moves")
    for move in outcome.trace[:6]:
        print(f"    player {move.player}: {sorted(move.old)} -> {sorted(move.new)} "
          f"(+{move.delta:.4f})")
    print("  the players chase each other around the ring forever")
    print()

    g = random_graph(9, 3, seed=15)
    cfg = GameConfig(graph=g, budgets=(2, 2), horizon=1)
    print("part 2: random nine-node graph, stationary payoffs, budgets (2, 2)")
    constructed = consensus_equilibrium(cfg)
    print(f"  constructed profile: {[sorted(s) for s in constructed.profile.strategies]}")
    print(f"  payoffs {constructed.payoffs.round(4)}, "
          f"deviation-checked: {constructed.verified}")
    equilibria = exhaustive_nash_check(cfg, regime="consensus")
    print(f"  independent exhaustive scan finds {len(equilibria)} equilibria; "
          f"constructed one included: {constructed.profile in equilibria}")
    print("  once opinions fully mix, relative strength no longer depends on")
    print("  where in the graph each audience sits, and play can settle")


if __name__ == "__main__":
    main()
