"""Generators for hard-instance families and seeded random test games."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvalidSpec
from .games import (
    BimatrixGame,
    CongestionGame,
    GraphicalGame,
    Network,
    parallel_links_game,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class GellSpec:
    """Parameters of the constant-sum hard family: an even ell >= 4."""

    ell: int

    def __post_init__(self) -> None:
        if self.ell < 4 or self.ell % 2:
            raise InvalidSpec(f"ell must be even and >= 4, got {self.ell}")


@dataclass(frozen=True)
class StepLinkSpec:
    """Parallel links with piecewise-constant nondecreasing cost levels.

    ``steps[i]`` lists (threshold, value) pairs for link i: the cost at load
    x is the value attached to the largest threshold <= x.  The first
    threshold of every link must be 0 and values must be nondecreasing.
    """

    links: int
    players: int
    steps: tuple[tuple[tuple[int, Fraction], ...], ...]

    def __post_init__(self) -> None:
        if self.links < 1 or self.players < 1:
            raise InvalidSpec("need at least one link and one player")
        if len(self.steps) != self.links:
            raise InvalidSpec("one step description per link required")
        for i, levels in enumerate(self.steps):
            if not levels or levels[0][0] != 0:
                raise InvalidSpec(f"link {i}: first threshold must be 0")
            thresholds = [t for t, _ in levels]
            values = [v for _, v in levels]
            if thresholds != sorted(set(thresholds)):
                raise InvalidSpec(f"link {i}: thresholds must strictly increase")
            if any(a > b for a, b in zip(values, values[1:])):
                raise InvalidSpec(f"link {i}: decreasing levels")
            if any(v < _ZERO for v in values):
                raise InvalidSpec(f"link {i}: negative level")


def gen_matching_pennies(k: int) -> BimatrixGame:
    """Generalised matching pennies, rescaled from +-1 into [0, 1].

    The row player gets 1 on the diagonal and 0 off it; column payoffs are
    one minus the row payoffs, keeping the game constant-sum.
    """
    if k < 2:
        raise InvalidSpec(f"matching pennies needs k >= 2, got {k}")
    row = tuple(
        tuple(_ONE if i == j else _ZERO for j in range(k)) for i in range(k)
    )
    col = tuple(tuple(_ONE - v for v in r) for r in row)
    return BimatrixGame(row, col)


def gen_G_ell(spec: GellSpec) -> BimatrixGame:
    """Win-lose constant-sum game whose rows are the ell-choose-ell/2 half-one vectors.

    Rows are emitted in lexicographic order of their one-positions; the
    column player's payoff is one minus the row player's.
    """
    ell = spec.ell
    rows = []
    for ones in itertools.combinations(range(ell), ell // 2):
        chosen = set(ones)
        rows.append(tuple(_ONE if j in chosen else _ZERO for j in range(ell)))
    row = tuple(rows)
    col = tuple(tuple(_ONE - v for v in r) for r in row)
    return BimatrixGame(row, col)


def rows_winning_in_column(game: BimatrixGame, col: int) -> list[int]:
    """Indices of rows that pay the row player 1 in the given column."""
    return [i for i in range(game.rows) if game.row_payoff[i][col] == _ONE]


def gen_R_ell(k: int, target_row: int) -> BimatrixGame:
    """Row matrix that pays 1 on one full row and 0 elsewhere; column all-zero.

    Any epsilon-equilibrium with epsilon < 1 - 1/k must put more than 1/k
    probability on the target row, so identifying it costs k queries.
    """
    if k < 2:
        raise InvalidSpec(f"need k >= 2, got {k}")
    if not 0 <= target_row < k:
        raise InvalidSpec(f"target row {target_row} out of range for k={k}")
    row = tuple(
        tuple(_ONE if i == target_row else _ZERO for _ in range(k)) for i in range(k)
    )
    col = tuple(tuple(_ZERO for _ in range(k)) for _ in range(k))
    return BimatrixGame(row, col)


def gen_modified_for_row(game: BimatrixGame, row: int, queried_cols: set[int]) -> BimatrixGame:
    """Copy of the game with the row's un-queried entries raised to payoff 1.

    Test helper for refuting low-query algorithms: the modified game agrees
    with the original on every queried profile of the chosen row.
    """
    new_row = tuple(
        tuple(
            v if (i != row or j in queried_cols) else _ONE
            for j, v in enumerate(r)
        )
        for i, r in enumerate(game.row_payoff)
    )
    return BimatrixGame(new_row, game.col_payoff)


def step_table(levels: Sequence[tuple[int, Fraction]], players: int) -> list[Fraction]:
    """Expand (threshold, value) pairs into a dense table for loads 0..players.

    Runs of equal values share one Fraction object, so tables stay cheap
    even for very large player counts.
    """
    table: list[Fraction] = []
    for idx, (threshold, value) in enumerate(levels):
        if threshold > players:
            break
        end = levels[idx + 1][0] if idx + 1 < len(levels) else players + 1
        table.extend([Fraction(value)] * (min(end, players + 1) - threshold))
    return table


def gen_step_links(spec: StepLinkSpec) -> CongestionGame:
    """Parallel-links game with the given per-link step tables."""
    tables = [step_table(levels, spec.players) for levels in spec.steps]
    return parallel_links_game(tables, spec.players)


def gen_random_step_links(links: int, players: int, seed: int) -> CongestionGame:
    """Seeded random multi-step parallel-links instance."""
    if links < 1 or players < 1:
        raise InvalidSpec("need at least one link and one player")
    rng = random.Random(seed)
    steps = []
    for _ in range(links):
        pieces = rng.randint(1, 4)
        thresholds = sorted(rng.sample(range(1, players + 1), min(pieces - 1, players)))
        value = Fraction(rng.randint(0, 4))
        levels = [(0, value)]
        for t in thresholds:
            value = value + Fraction(rng.randint(0, 5))
            levels.append((t, value))
        steps.append(tuple(levels))
    return gen_step_links(StepLinkSpec(links, players, tuple(steps)))


def _random_cost_table(rng: random.Random, players: int) -> list[Fraction]:
    den = rng.choice((1, 1, 2, 4))
    value = Fraction(rng.randint(0, 6), den)
    table = [value]
    for _ in range(players):
        value = value + Fraction(rng.randint(0, 3), den)
        table.append(value)
    return table


def gen_random_dag(
    vertices: int,
    edges: int,
    players: int,
    seed: int,
    subdivide: int = 0,
) -> CongestionGame:
    """Seeded random DAG congestion game; every vertex ends up on an o-d path.

    A random spine from origin to destination guarantees connectivity, extra
    edges are sampled forward-only, and stranded vertices are pruned.  With
    ``subdivide`` > 0, that many randomly chosen edges are split in two,
    deliberately planting dependent edge pairs.
    """
    if vertices < 2:
        raise InvalidSpec("need at least origin and destination")
    if edges < 1:
        raise InvalidSpec("need at least one edge")
    rng = random.Random(seed)
    o, d = 0, vertices - 1
    spine_len = rng.randint(0, min(max(0, vertices - 2), edges - 1))
    spine = sorted(rng.sample(range(1, vertices - 1), spine_len)) if spine_len else []
    chain = [o, *spine, d]
    pairs: list[tuple[int, int]] = list(zip(chain, chain[1:]))
    candidates = [(i, j) for i in range(vertices) for j in range(i + 1, vertices)]
    while len(pairs) < edges:
        pairs.append(rng.choice(candidates))
    net = Network.build(range(vertices), pairs[:edges], o, d)
    if subdivide:
        next_vertex = max(net.vertices) + 1
        next_edge = max(net.edges) + 1
        edge_map = dict(net.edges)
        for e in rng.sample(sorted(edge_map), min(subdivide, len(edge_map))):
            t, h = edge_map[e]
            edge_map[e] = (t, next_vertex)
            edge_map[next_edge] = (next_vertex, h)
            next_vertex += 1
            next_edge += 1
        net = Network.build(
            list(net.vertices) + list(range(max(net.vertices) + 1, next_vertex)),
            edge_map,
            o,
            d,
        )
    cost = {e: _random_cost_table(rng, players) for e in net.edges}
    return CongestionGame(net, players, cost)


def gen_random_graphical(
    players: int, strategies: int, degree: int, seed: int
) -> GraphicalGame:
    """Seeded random graphical game with in-degree at most ``degree``."""
    if players < 1 or strategies < 1 or degree < 0:
        raise InvalidSpec("players, strategies >= 1 and degree >= 0 required")
    if degree >= players:
        raise InvalidSpec("degree must be below the player count")
    rng = random.Random(seed)
    in_neighbors = []
    tables = []
    for p in range(players):
        others = [q for q in range(players) if q != p]
        nbrs = tuple(sorted(rng.sample(others, rng.randint(0, degree))))
        in_neighbors.append(nbrs)
        table = {}
        for own in range(strategies):
            for ctx in itertools.product(range(strategies), repeat=len(nbrs)):
                table[(own, ctx)] = Fraction(rng.randint(0, 16), 16)
        tables.append(table)
    return GraphicalGame(players, strategies, tuple(in_neighbors), tuple(tables))


def gen_random_bimatrix(k: int, seed: int, rows: int | None = None) -> BimatrixGame:
    """Seeded random bimatrix game with payoffs on a 1/16 grid in [0, 1]."""
    if k < 1 or (rows is not None and rows < 1):
        raise InvalidSpec("need at least one strategy per player")
    rng = random.Random(seed)
    nrows = rows if rows is not None else k
    rand = lambda: Fraction(rng.randint(0, 16), 16)  # noqa: E731
    row = tuple(tuple(rand() for _ in range(k)) for _ in range(nrows))
    col = tuple(tuple(rand() for _ in range(k)) for _ in range(nrows))
    return BimatrixGame(row, col)
