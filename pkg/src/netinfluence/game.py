"""The seeding game: configurations, strategy profiles, and payoff routes.

Each of ``m`` players plants their opinion at a budgeted set of seed nodes;
opinions then mix for a fixed horizon and a player's payoff is the population
average of the relative opinion toward them.  Payoffs can be obtained three
ways that agree to numerical precision: direct simulation, a closed form over
the horizon influence table, and the stationary-regime shortcut via the
consensus weights.  The game is constant-sum: payoffs always total one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .dynamics import (
    diffusion_centrality_matrix,
    eigenvector_weights,
    evolve,
    influence_matrix,
    initialize,
)
from .graph import Graph


@dataclass(frozen=True)
class GameConfig:
    """Everything that pins down one game instance.

    ``budgets`` gives each player's maximum seed-set size (player count is its
    length); ``horizon`` is the number of mixing steps before payoffs are
    read; ``epsilon`` is the background opinion implanted in unseeded nodes
    and must stay below ``1 / (2m)`` so it never rivals a real seed.
    """

    graph: Graph
    budgets: tuple[int, ...]
    horizon: int
    alpha: float = 0.5
    epsilon: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "budgets", tuple(int(b) for b in self.budgets))
        if len(self.budgets) < 2:
            raise ValueError("need at least two players")
        if any(b < 1 for b in self.budgets):
            raise ValueError("every budget must be at least one")
        if self.horizon < 1:
            raise ValueError("horizon must be at least one")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie strictly between 0 and 1")
        if not 0 < self.epsilon < 1.0 / (2 * len(self.budgets)):
            raise ValueError(
                f"epsilon must lie in (0, 1/(2m)) = (0, {1.0 / (2 * len(self.budgets))})"
            )

    @property
    def m(self) -> int:
        return len(self.budgets)

    @property
    def n(self) -> int:
        return self.graph.node_count


class StrategyProfile:
    """Per-player seed sets.

    Accepts any iterable of per-player node iterables; a player listing the
    same node twice is an input error rather than a double weight.  Profiles
    compare and hash by their canonical form, so they can key caches and
    cycle-detection tables.
    """

    __slots__ = ("strategies",)

    def __init__(self, seed_sets: Iterable[Iterable[int]]):
        strategies = []
        for i, s in enumerate(seed_sets):
            nodes = list(s)
            fs = frozenset(nodes)
            if len(fs) != len(nodes):
                raise ValueError(f"player {i} lists a seed node more than once")
            strategies.append(fs)
        self.strategies: tuple[frozenset[int], ...] = tuple(strategies)

    def __len__(self) -> int:
        return len(self.strategies)

    def __iter__(self):
        return iter(self.strategies)

    def __getitem__(self, i: int) -> frozenset[int]:
        return self.strategies[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, StrategyProfile) and self.strategies == other.strategies

    def __hash__(self) -> int:
        return hash(self.strategies)

    def __repr__(self) -> str:
        return f"StrategyProfile({[sorted(s) for s in self.strategies]})"

    def canonical(self) -> tuple[tuple[int, ...], ...]:
        """Hashable canonical form: per-player sorted node tuples."""
        return tuple(tuple(sorted(s)) for s in self.strategies)

    def replace(self, i: int, strategy: Iterable[int]) -> "StrategyProfile":
        """Copy of the profile with player ``i``'s seed set swapped out."""
        sets = list(self.strategies)
        sets[i] = frozenset(strategy)
        return StrategyProfile(sets)


def as_profile(profile) -> StrategyProfile:
    """Coerce raw per-player seed collections into a StrategyProfile."""
    if isinstance(profile, StrategyProfile):
        return profile
    return StrategyProfile(profile)


def check_profile(cfg: GameConfig, profile: StrategyProfile, require_nonempty: bool = True):
    """Validate a profile against a configuration.

    Raises ValueError on a player-count mismatch, an empty seed set (payoffs
    are defined for seeded players only), a busted budget, or an unknown
    node id.
    """
    if len(profile) != cfg.m:
        raise ValueError(f"profile has {len(profile)} players but the game has {cfg.m}")
    for i, (s, b) in enumerate(zip(profile, cfg.budgets)):
        if require_nonempty and not s:
            raise ValueError(f"player {i} has an empty seed set")
        if len(s) > b:
            raise ValueError(f"player {i} seeds {len(s)} nodes, over their budget {b}")
        for v in s:
            if not 0 <= v < cfg.n:
                raise ValueError(f"player {i} seeds unknown node id {v}")


@lru_cache(maxsize=64)
def _mixing_matrix(graph: Graph, alpha: float):
    return influence_matrix(graph, alpha)


@lru_cache(maxsize=64)
def _horizon_table(graph: Graph, alpha: float, horizon: int) -> np.ndarray:
    return diffusion_centrality_matrix(_mixing_matrix(graph, alpha), horizon)


@lru_cache(maxsize=64)
def _consensus_table(graph: Graph, alpha: float) -> np.ndarray:
    return eigenvector_weights(_mixing_matrix(graph, alpha)).weights[None, :]


def payoff_table(cfg: GameConfig, regime: str = "horizon") -> np.ndarray:
    """Influence table driving closed-form payoffs, cached per configuration.

    Rows are evaluation targets and columns are source nodes: ``"horizon"``
    yields the full finite-horizon table (one row per node), ``"consensus"``
    the single row of stationary weights.  Treat the result as read-only.
    """
    if regime == "horizon":
        return _horizon_table(cfg.graph, cfg.alpha, cfg.horizon)
    if regime == "consensus":
        return _consensus_table(cfg.graph, cfg.alpha)
    raise ValueError(f"unknown regime {regime!r}; expected 'horizon' or 'consensus'")


def table_payoffs(table: np.ndarray, seed_sets, epsilon: float) -> np.ndarray:
    """Closed-form payoffs over a precomputed influence table.

    Per target row, each player's strength gathers the table columns of their
    seeds (split equally when a node is seeded by several players) plus the
    shared ``epsilon`` mass of nodes seeded by nobody; the payoff is the mean
    over targets of each player's share of the total strength.  Empty seed
    sets are tolerated here, which the greedy solver relies on; the public
    payoff routes reject them up front.
    """
    n = table.shape[1]
    m = len(seed_sets)
    counts = np.zeros(n)
    for s in seed_sets:
        for v in s:
            counts[v] += 1
    share = np.zeros((n, m))
    for i, s in enumerate(seed_sets):
        if s:
            idx = list(s)
            share[idx, i] = 1.0 / counts[idx]
    unseeded = counts == 0
    background = epsilon * table[:, unseeded].sum(axis=1)
    strengths = table @ share + background[:, None]
    return np.asarray((strengths / strengths.sum(axis=1, keepdims=True)).mean(axis=0))


def utility(cfg: GameConfig, profile) -> np.ndarray:
    """Simulated payoffs: seed, mix for the horizon, read relative shares.

    Player ``i`` receives the average over nodes of the opinion toward ``i``
    divided by the node's total opinion mass.  Returns a length-``m`` vector
    summing to one.
    """
    profile = as_profile(profile)
    check_profile(cfg, profile)
    gamma = _mixing_matrix(cfg.graph, cfg.alpha)
    state = initialize(cfg.graph, profile, cfg.epsilon)
    final = evolve(state, gamma, cfg.horizon)
    totals = final.opinions.sum(axis=1)
    return (final.opinions / totals[:, None]).mean(axis=0)


def utility_closed_form(cfg: GameConfig, profile) -> np.ndarray:
    """Payoffs via the horizon influence table; agrees with ``utility`` to ~1e-10."""
    profile = as_profile(profile)
    check_profile(cfg, profile)
    return table_payoffs(payoff_table(cfg, "horizon"), profile.strategies, cfg.epsilon)


def consensus_utility(cfg: GameConfig, profile) -> np.ndarray:
    """Stationary-regime payoffs: each player's weighted initial opinion share.

    Uses the consensus weights instead of a finite horizon, which is the limit
    every long simulation approaches.
    """
    profile = as_profile(profile)
    check_profile(cfg, profile)
    return table_payoffs(payoff_table(cfg, "consensus"), profile.strategies, cfg.epsilon)


def assemble_profile(i: int, own, others) -> tuple[frozenset[int], ...]:
    """Insert player ``i``'s seed set into the opposing list.

    ``others`` holds the remaining players' seed sets in player order with
    player ``i`` skipped; the result is the full per-player tuple.
    """
    sets = [frozenset(s) for s in others]
    sets.insert(i, frozenset(own))
    return tuple(sets)


def marginal_gain(cfg: GameConfig, i: int, partial, v: int, s_minus_i) -> float:
    """Payoff increase for player ``i`` from adding node ``v`` to a partial seed set.

    ``s_minus_i`` lists the other players' seed sets in player order with
    player ``i`` skipped.  Evaluated in closed form over the cached influence
    table, so repeated calls inside a greedy scan stay cheap.
    """
    if not 0 <= i < cfg.m:
        raise ValueError(f"player index {i} out of range for {cfg.m} players")
    partial = frozenset(partial)
    if v in partial:
        raise ValueError(f"node {v} is already in the partial seed set")
    if not 0 <= v < cfg.n:
        raise ValueError(f"unknown node id {v}")
    if len(partial) >= cfg.budgets[i]:
        raise ValueError(f"player {i}'s budget {cfg.budgets[i]} is already exhausted")
    others = [frozenset(s) for s in s_minus_i]
    if len(others) != cfg.m - 1:
        raise ValueError(f"expected {cfg.m - 1} opposing seed sets, got {len(others)}")
    table = payoff_table(cfg, "horizon")
    before = table_payoffs(table, assemble_profile(i, partial, others), cfg.epsilon)[i]
    after = table_payoffs(table, assemble_profile(i, partial | {v}, others), cfg.epsilon)[i]
    return float(after - before)
