"""Learn an equivalent cost function of a DAG congestion game, then solve it.

True per-edge costs are unidentifiable (shifting cost between the two halves
of every route changes nothing observable), so the learner reconstructs an
*equivalent* cost function: one pricing every strategy of every profile
identically.  It spends exactly |E| queries per player level, n*|E| total.

Pipeline: contract dependent edge pairs (zero queries), learn all load-1
values by processing vertices in topological order, then lift level by level
using bridge queries and two-path queries whose loads are arranged so every
unknown quantity appears exactly once.  A pure equilibrium of the learned
game is found by potential descent and maps back through the contraction.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    AlgorithmInvariantViolated,
    InvalidSpec,
    PathSelectionFailed,
    PotentialNotDecreasing,
)
from .games import CongestionGame, Network, Path, edge_loads, enumerate_paths

_ZERO = Fraction(0)


class PartialCostFunction:
    """Per-edge, per-load optional cost values; once set, a value is final."""

    def __init__(self, edges: Iterable[int], players: int) -> None:
        self.players = players
        self._values: dict[int, dict[int, Fraction]] = {e: {} for e in edges}

    def define(self, edge: int, load: int, value: Fraction) -> None:
        if not 1 <= load <= self.players:
            raise AlgorithmInvariantViolated(f"load {load} outside 1..{self.players}")
        if load in self._values[edge]:
            raise AlgorithmInvariantViolated(
                f"edge {edge} already has a value at load {load}"
            )
        self._values[edge][load] = value

    def is_defined(self, edge: int, load: int) -> bool:
        return load in self._values[edge]

    def get(self, edge: int, load: int) -> Fraction | None:
        return self._values[edge].get(load)

    def value(self, edge: int, load: int) -> Fraction:
        try:
            return self._values[edge][load]
        except KeyError:
            raise AlgorithmInvariantViolated(
                f"edge {edge} has no learned value at load {load}"
            ) from None

    def defined_loads(self, edge: int) -> tuple[int, ...]:
        return tuple(sorted(self._values[edge]))

    def is_total(self) -> bool:
        return all(
            len(loads) == self.players for loads in self._values.values()
        )

    def as_tables(self) -> dict[int, tuple[Fraction, ...]]:
        """Dense tables over loads 0..n; the (never-charged) load-0 entry
        copies the load-1 value so the table stays nondecreasing."""
        if not self.is_total():
            raise AlgorithmInvariantViolated("cost function is not total yet")
        return {
            e: tuple([vals[1]] + [vals[j] for j in range(1, self.players + 1)])
            for e, vals in self._values.items()
        }

    def snapshot(self) -> dict[int, dict[int, Fraction]]:
        return {e: dict(vals) for e, vals in self._values.items()}


# ---------------------------------------------------------------------------
# Unit-capacity max flow and edge-disjoint path pairs (Menger).


def two_edge_disjoint_paths(net: Network, frm: int, to: int) -> tuple[Path, Path] | None:
    """Two edge-disjoint frm->to paths via augmenting paths, or None.

    Unit capacities on edge ids keep parallel edges independent; two
    augmentations succeed exactly when no frm-to bridge exists.
    """
    if frm == to:
        return (), ()
    flow: dict[int, int] = {e: 0 for e in net.edges}

    def augment() -> bool:
        parents: dict[int, tuple[int, int, bool]] = {}
        seen = {frm}
        queue = deque([frm])
        while queue:
            v = queue.popleft()
            if v == to:
                break
            for e in net.out_edges[v]:
                h = net.edges[e][1]
                if flow[e] == 0 and h not in seen:
                    seen.add(h)
                    parents[h] = (v, e, True)
                    queue.append(h)
            for e in net.in_edges[v]:
                t = net.edges[e][0]
                if flow[e] == 1 and t not in seen:
                    seen.add(t)
                    parents[t] = (v, e, False)
                    queue.append(t)
        if to not in seen:
            return False
        v = to
        while v != frm:
            prev, e, forward = parents[v]
            flow[e] = 1 if forward else 0
            v = prev
        return True

    if not (augment() and augment()):
        return None

    paths: list[Path] = []
    used: set[int] = set()
    for _ in range(2):
        v = frm
        path: list[int] = []
        while v != to:
            e = next(
                e for e in net.out_edges[v] if flow[e] == 1 and e not in used
            )
            used.add(e)
            path.append(e)
            v = net.edges[e][1]
        paths.append(tuple(path))
    return paths[0], paths[1]


# ---------------------------------------------------------------------------
# Preprocessing: contract dependent edge pairs.


@dataclass(frozen=True)
class ContractionStep:
    """One contraction: ``removed`` merged into ``absorber``'s cost table."""

    removed: int
    absorber: int


@dataclass
class ContractionMap:
    """Translation between a game and its dependent-pair-free contraction."""

    original: Network
    reduced: Network
    steps: list[ContractionStep]

    @cached_property
    def removed_edges(self) -> dict[int, tuple[int, int]]:
        return {s.removed: self.original.edges[s.removed] for s in self.steps}

    @cached_property
    def absorbed(self) -> dict[int, tuple[int, ...]]:
        """Surviving edge id -> original edges folded into its cost table."""
        acc: dict[int, list[int]] = {}
        for step in self.steps:
            chain = [step.removed] + acc.pop(step.removed, [])
            acc.setdefault(step.absorber, []).extend(chain)
        return {e: tuple(sorted(ids)) for e, ids in acc.items()}

    def map_path_back(self, path: Path) -> Path:
        """Original o-d path realising a reduced path (contracted edges reinserted)."""
        out: list[int] = []
        at = self.original.origin
        for e in path:
            tail, head = self.original.edges[e]
            if at != tail:
                out.extend(self._bridge(at, tail))
            out.append(e)
            at = head
        if at != self.original.destination:
            out.extend(self._bridge(at, self.original.destination))
        result = tuple(out)
        self.original.validate_path(result)
        return result

    def _bridge(self, frm: int, to: int) -> list[int]:
        """Chain of removed edges frm -> to (BFS, lowest edge ids first)."""
        parents: dict[int, tuple[int, int]] = {}
        seen = {frm}
        queue = deque([frm])
        while queue:
            v = queue.popleft()
            if v == to:
                break
            for e in sorted(self.removed_edges):
                t, h = self.removed_edges[e]
                if t == v and h not in seen:
                    seen.add(h)
                    parents[h] = (v, e)
                    queue.append(h)
        if to not in seen:
            raise AlgorithmInvariantViolated(
                f"no removed-edge chain from {frm} to {to}"
            )
        chain: list[int] = []
        v = to
        while v != frm:
            v, e = parents[v]
            chain.append(e)
        chain.reverse()
        return chain

    def map_profile_back(self, profile: Mapping[Path, int]) -> dict[Path, int]:
        mapped = {self.map_path_back(p): c for p, c in profile.items()}
        if len(mapped) != len(profile):
            raise AlgorithmInvariantViolated("path mapping is not injective")
        return mapped


def find_dependent_pair(net: Network) -> tuple[int, int] | None:
    """First edge pair (e, e') such that every o-d path uses both or neither.

    Detection is the two reachability checks: with e deleted the later tail
    is unreachable from the origin, and with e' deleted the destination is
    unreachable from e's head.
    """
    pos = net.topo_position
    ids = sorted(net.edges)
    for e in ids:
        t1, h1 = net.edges[e]
        for e2 in ids:
            if e2 == e:
                continue
            t2, _ = net.edges[e2]
            if pos[t1] >= pos[t2]:
                continue
            if net.reachable(net.origin, t2, {e}):
                continue
            if net.reachable(h1, net.destination, {e2}):
                continue
            return e, e2
    return None


def contract_network(net: Network) -> tuple[Network, ContractionMap]:
    """Contract away dependent pairs; zero queries, structure only."""
    original = net
    steps: list[ContractionStep] = []
    while True:
        pair = find_dependent_pair(net)
        if pair is None:
            break
        absorber, removed = pair
        merged_away = net.edges[removed][1]
        into = net.edges[removed][0]
        relabel = lambda v: into if v == merged_away else v  # noqa: E731
        new_edges = {
            g: (relabel(t), relabel(h))
            for g, (t, h) in net.edges.items()
            if g != removed
        }
        net = Network(
            (v for v in net.vertices if v != merged_away),
            new_edges,
            net.origin,
            relabel(net.destination),
        )
        steps.append(ContractionStep(removed=removed, absorber=absorber))
    return net, ContractionMap(original=original, reduced=net, steps=steps)


def preprocess_contract(game: CongestionGame) -> tuple[CongestionGame, ContractionMap]:
    """Contracted game whose equilibria translate back to the original's.

    The removed edge of each dependent pair always shares its load with the
    surviving partner, so adding its cost table onto the partner's preserves
    the cost of every strategy in every profile.
    """
    reduced_net, cmap = contract_network(game.network)
    cost = {e: list(game.cost[e]) for e in game.network.edges}
    for step in cmap.steps:
        cost[step.absorber] = [
            a + b for a, b in zip(cost[step.absorber], cost[step.removed])
        ]
    reduced = CongestionGame(
        reduced_net, game.players, {e: cost[e] for e in reduced_net.edges}
    )
    return reduced, cmap


class ContractedOracle:
    """Query view of the contracted game, simulated on the original oracle."""

    def __init__(self, inner, cmap: ContractionMap) -> None:
        self._inner = inner
        self._map = cmap
        self.players = inner.players
        self.network = cmap.reduced
        self.ledger = inner.ledger

    def query_loads(self, assignment: Mapping[Path, int]) -> dict[Path, Fraction]:
        forward = {p: self._map.map_path_back(tuple(p)) for p in assignment}
        response = self._inner.query_loads(
            {forward[p]: c for p, c in assignment.items()}
        )
        return {tuple(p): response[forward[p]] for p in assignment}


# ---------------------------------------------------------------------------
# Bridges and the path kits of the level-lifting queries.


def find_bridges(net: Network, kv: int) -> list[int]:
    """Edges lying on every kv-destination path, ordered along the topology."""
    if kv == net.destination:
        return []
    bridges = [
        e
        for e in sorted(net.edges)
        if not net.reachable(kv, net.destination, {e})
    ]
    bridges.sort(key=lambda e: net.topo_position[net.edges[e][0]])
    return bridges


def _disjoint_or_fail(net: Network, frm: int, to: int) -> tuple[Path, Path]:
    pair = two_edge_disjoint_paths(net, frm, to)
    if pair is None:
        raise PathSelectionFailed(f"no two edge-disjoint paths {frm} -> {to}")
    return pair


def choose_p4_p5(net: Network, bridges: Sequence[int], j: int) -> tuple[Path, Path]:
    """Two head(b_j)->destination paths meeting exactly in the later bridges.

    Between consecutive bridges (and after the last) no bridge exists, so
    each gap admits an edge-disjoint pair; concatenating the pairs through
    the bridges gives the required intersection.
    """
    frm = net.edges[bridges[j]][1]
    p4: list[int] = []
    p5: list[int] = []
    for b in bridges[j + 1 :]:
        seg_a, seg_b = _disjoint_or_fail(net, frm, net.edges[b][0])
        p4 += [*seg_a, b]
        p5 += [*seg_b, b]
        frm = net.edges[b][1]
    tail_a, tail_b = _disjoint_or_fail(net, frm, net.destination)
    p4 += tail_a
    p5 += tail_b
    if set(p4) & set(p5) != set(bridges[j + 1 :]):
        raise PathSelectionFailed("p4/p5 intersection is not the later bridges")
    return tuple(p4), tuple(p5)


def _reroute_along(p1: Path, q: Path, qq: Path) -> tuple[Path, Path]:
    """Make p1 avoid one of two disjoint connector paths, return (p1, connector).

    If p1 crosses both, it is spliced onto whichever it meets first and the
    other connector is returned.
    """
    sq, sqq = set(q), set(qq)
    if not set(p1) & sq:
        return p1, q
    if not set(p1) & sqq:
        return p1, qq
    for idx, e in enumerate(p1):
        if e in sq:
            return p1[:idx] + q[q.index(e) :], qq
        if e in sqq:
            return p1[:idx] + qq[qq.index(e) :], q
    raise PathSelectionFailed("splice failed")  # pragma: no cover


def choose_p1_p3(
    net: Network, kv: int, bridges: Sequence[int], j: int, p2: Path
) -> tuple[Path, Path]:
    """Edge-disjoint (origin->tail(b_j), kv->tail(b_j)) paths for the bridge query.

    If p1 reaches kv at all it must enter by a different edge than p2, so
    that the in-edge shared load stays decodable.
    """
    b = bridges[j]
    v = net.edges[b][0]
    if j > 0:
        prev = bridges[j - 1]
        prev_tail, prev_head = net.edges[prev]
        p1 = net.least_path(net.origin, v, {prev})
        if p1 is None:
            raise PathSelectionFailed(f"no origin path to {v} avoiding bridge {prev}")
        stem = net.least_path(kv, prev_tail)
        if stem is None:
            raise PathSelectionFailed(f"no path {kv} -> {prev_tail}")
        q, qq = _disjoint_or_fail(net, prev_head, v)
        p1, connector = _reroute_along(p1, q, qq)
        p3 = stem + (prev,) + connector
    elif kv == net.origin:
        r1, r2 = _disjoint_or_fail(net, kv, v) if kv != v else ((), ())
        p1, p3 = r2, r1
    elif len(net.in_edges[kv]) >= 2:
        g2 = p2[-1]
        g1 = min(e for e in net.in_edges[kv] if e != g2)
        r1, r2 = _disjoint_or_fail(net, kv, v) if kv != v else ((), ())
        stem = net.least_path(net.origin, net.edges[g1][0])
        if stem is None:  # pragma: no cover - tails are always reachable
            raise PathSelectionFailed(f"no origin path to edge {g1}")
        p1 = stem + (g1,) + r2
        p3 = r1
    else:
        sole = net.in_edges[kv][0]
        if kv == v:
            raise PathSelectionFailed(
                "first bridge leaves a single-in-edge vertex; preprocessing broken"
            )
        p1 = net.least_path(net.origin, v, {sole})
        if p1 is None:
            raise PathSelectionFailed(
                f"no origin path to {v} avoiding sole in-edge {sole}"
            )
        q, qq = _disjoint_or_fail(net, kv, v)
        p1, p3 = _reroute_along(p1, q, qq)
    if set(p1) & set(p3):
        raise PathSelectionFailed("p1 and p3 are not edge disjoint")
    return p1, p3


# ---------------------------------------------------------------------------
# The learner proper.


def _query_and_extract(
    oracle,
    net: Network,
    f: PartialCostFunction,
    target: int,
    target_load: int,
    one_path: Path,
    many_path: Path,
    many_load: int,
) -> None:
    """Issue one query and peel the target edge's cost out of the response.

    ``one_path`` carries a single player and contains the target edge; every
    other edge on it must already be priced at the load it ends up carrying.
    """
    net.validate_path(one_path)
    assignment: dict[Path, int] = {one_path: 1}
    if many_load:
        net.validate_path(many_path)
        if many_path == one_path:
            assignment = {one_path: 1 + many_load}
        else:
            assignment[many_path] = many_load
    loads = edge_loads(net, assignment)
    if loads[target] != target_load:
        raise AlgorithmInvariantViolated(
            f"edge {target} carries {loads[target]}, expected {target_load}"
        )
    known = _ZERO
    for e in one_path:
        if e == target:
            continue
        value = f.get(e, loads[e])
        if value is None:
            raise PathSelectionFailed(
                f"edge {e} at load {loads[e]} is still unknown; bad path kit"
            )
        known += value
    response = oracle.query_loads(assignment)
    f.define(target, target_load, response[one_path] - known)


def learn_one_player(oracle, net: Network | None = None) -> PartialCostFunction:
    """Partial equivalent cost function with every load-1 value defined.

    Vertices are processed in topological order.  At an interior vertex the
    cheapest in-edge (through a fixed continuation path) is declared free
    and the others are priced relative to it; the slack this hides is pushed
    onto the vertex's out-edges, which keeps all route costs intact.  At the
    destination the absolute values are pinned down.  One query per edge.
    """
    if net is None:
        net = oracle.network
    f = PartialCostFunction(net.edges, oracle.players)
    before = oracle.ledger.count
    for kv in net.topological_order():
        in_edges = net.in_edges[kv]
        if not in_edges:
            continue
        if kv == net.destination:
            for e in in_edges:
                stem = net.least_path(net.origin, net.edges[e][0])
                _query_and_extract(oracle, net, f, e, 1, stem + (e,), (), 0)
            continue
        continuation = net.least_path(kv, net.destination)
        if continuation is None:  # pragma: no cover - every vertex reaches d
            raise PathSelectionFailed(f"vertex {kv} cannot reach the destination")
        scores: dict[int, Fraction] = {}
        for e in in_edges:
            stem = net.least_path(net.origin, net.edges[e][0])
            path = stem + (e,) + continuation
            for e2 in stem:
                if not f.is_defined(e2, 1):
                    raise AlgorithmInvariantViolated(
                        f"stem edge {e2} unprocessed before vertex {kv}"
                    )
            cost = oracle.query_loads({path: 1})[path]
            scores[e] = cost - sum((f.value(e2, 1) for e2 in stem), _ZERO)
        pivot = min(in_edges, key=lambda e: (scores[e], e))
        f.define(pivot, 1, _ZERO)
        for e in in_edges:
            if e != pivot:
                f.define(e, 1, scores[e] - scores[pivot])
    used = oracle.ledger.count - before
    if used != len(net.edges):
        raise AlgorithmInvariantViolated(
            f"load-1 pass used {used} queries, expected {len(net.edges)}"
        )
    return f


def learn_level(
    oracle, net: Network, f: PartialCostFunction, level: int
) -> PartialCostFunction:
    """Extend f from loads <= level to loads <= level + 1 in |E| queries.

    For each vertex kv along the topology, the kv-bridges are priced first
    (in reverse bridge order, so each query's later bridges are known), then
    the remaining in-edges of kv.  Values discovered once are never queried
    again.
    """
    if not 1 <= level < oracle.players:
        raise InvalidSpec(f"level must be in 1..n-1, got {level}")
    before = oracle.ledger.count
    new_load = level + 1
    for kv in net.topological_order():
        bridges = find_bridges(net, kv)
        p2 = net.least_path(net.origin, kv)
        if p2 is None:  # pragma: no cover - kv is on an o-d path
            raise PathSelectionFailed(f"vertex {kv} unreachable from the origin")
        for j in range(len(bridges) - 1, -1, -1):
            b = bridges[j]
            if f.is_defined(b, new_load):
                continue
            p4, p5 = choose_p4_p5(net, bridges, j)
            p1, p3 = choose_p1_p3(net, kv, bridges, j, p2)
            later = set(bridges[j + 1 :])
            one_path = p1 + (b,) + p4
            many_path = p2 + p3 + (b,) + p5
            loads = edge_loads(net, _merge(one_path, 1, many_path, level))
            for e in p4:
                want = new_load if e in later else 1
                if loads[e] != want:
                    raise AlgorithmInvariantViolated(
                        f"bridge query load pattern broken at edge {e}"
                    )
            _query_and_extract(
                oracle, net, f, b, new_load, one_path, many_path, level
            )
        in_kit: tuple[Path, Path] | None = None
        for e in net.in_edges[kv]:
            if f.is_defined(e, new_load):
                continue
            if in_kit is None:
                in_kit = _two_paths_through_bridges(net, kv, bridges)
            pa, pb = in_kit
            stem = net.least_path(net.origin, net.edges[e][0])
            if stem is None:  # pragma: no cover
                raise PathSelectionFailed(f"no origin path to edge {e}")
            if e in pa or e in stem or set(stem) & set(pa):
                raise AlgorithmInvariantViolated(
                    "in-edge query paths overlap unexpectedly"
                )
            _query_and_extract(
                oracle,
                net,
                f,
                e,
                new_load,
                stem + (e,) + pa,
                stem + (e,) + pb,
                level,
            )
    used = oracle.ledger.count - before
    if used != len(net.edges):
        raise AlgorithmInvariantViolated(
            f"level {level} used {used} queries, expected {len(net.edges)}"
        )
    return f


def _merge(path_a: Path, count_a: int, path_b: Path, count_b: int) -> dict[Path, int]:
    if path_a == path_b:
        return {path_a: count_a + count_b}
    return {path_a: count_a, path_b: count_b}


def _two_paths_through_bridges(
    net: Network, kv: int, bridges: Sequence[int]
) -> tuple[Path, Path]:
    """Two kv->destination paths whose shared edges are exactly the kv-bridges."""
    if kv == net.destination:
        return (), ()
    if not bridges:
        return _disjoint_or_fail(net, kv, net.destination)
    first_tail = net.edges[bridges[0]][0]
    r1, r2 = (
        _disjoint_or_fail(net, kv, first_tail) if kv != first_tail else ((), ())
    )
    p4, p5 = choose_p4_p5(net, bridges, 0)
    pa = r1 + (bridges[0],) + p4
    pb = r2 + (bridges[0],) + p5
    if set(pa) & set(pb) != set(bridges):
        raise PathSelectionFailed("two-path kit does not meet exactly at bridges")
    return pa, pb


def learn_costs(oracle, net: Network | None = None) -> PartialCostFunction:
    """Full learning pass: |E| queries for load 1, then per level up to n.

    The network must already be free of dependent edge pairs (contract
    first); total ledger cost is exactly |E| * n.
    """
    if net is None:
        net = oracle.network
    if find_dependent_pair(net) is not None:
        raise InvalidSpec("network still contains a dependent edge pair")
    f = learn_one_player(oracle, net)
    for level in range(1, oracle.players):
        learn_level(oracle, net, f, level)
    if not f.is_total():
        raise AlgorithmInvariantViolated("learned cost function is not total")
    return f


# ---------------------------------------------------------------------------
# Solving the learned game.


def _rosenthal(f: PartialCostFunction, loads: Mapping[int, int]) -> Fraction:
    return sum(
        (f.value(e, j) for e, load in loads.items() for j in range(1, load + 1)),
        _ZERO,
    )


def _best_response(
    f: PartialCostFunction,
    net: Network,
    loads: Mapping[int, int],
    current_path: Path,
) -> tuple[Path, Fraction]:
    """Cheapest o-d path for one player currently on current_path.

    Edge weights are the learned costs at the load the edge would carry
    after the move; a DAG relaxation in topological order handles arbitrary
    (possibly non-monotone-looking) learned values.
    """
    on_path = set(current_path)
    dist: dict[int, Fraction | None] = {v: None for v in net.vertices}
    best_in: dict[int, Path] = {net.origin: ()}
    dist[net.origin] = _ZERO
    for v in net.topological_order():
        if dist[v] is None:
            continue
        for e in net.out_edges[v]:
            h = net.edges[e][1]
            weight = f.value(e, loads[e] + (0 if e in on_path else 1))
            cand = dist[v] + weight
            if dist[h] is None or cand < dist[h] or (
                cand == dist[h] and best_in[v] + (e,) < best_in[h]
            ):
                dist[h] = cand
                best_in[h] = best_in[v] + (e,)
    d = net.destination
    if dist[d] is None:  # pragma: no cover - destination always reachable
        raise PathSelectionFailed("destination unreachable")
    return best_in[d], dist[d]


def solve_learned_game(
    f: PartialCostFunction, net: Network, players: int
) -> dict[Path, int]:
    """Pure Nash equilibrium of the learned game by best-response descent.

    Players start stacked on the lexicographically least path; single
    players move to a cheapest alternative while one exists.  Each strict
    improvement lowers the Rosenthal potential, which guarantees (and
    guards) termination.
    """
    start = net.least_path(net.origin, net.destination)
    if start is None:  # pragma: no cover - validated network
        raise PathSelectionFailed("no origin-destination path")
    profile: dict[Path, int] = {start: players}
    loads = edge_loads(net, profile)
    potential = _rosenthal(f, loads)
    while True:
        for path in sorted(p for p, c in profile.items() if c > 0):
            current = sum((f.value(e, loads[e]) for e in path), _ZERO)
            best_path, best_cost = _best_response(f, net, loads, path)
            if best_cost < current and best_path != path:
                profile[path] -= 1
                profile[best_path] = profile.get(best_path, 0) + 1
                loads = edge_loads(net, profile)
                new_potential = _rosenthal(f, loads)
                if new_potential >= potential:
                    raise PotentialNotDecreasing(
                        "improving move did not lower the potential; "
                        "the learned cost function is inconsistent"
                    )
                potential = new_potential
                break
        else:
            return {p: c for p, c in profile.items() if c > 0}


@dataclass
class DagSolveResult:
    """End-to-end outcome: learned costs, equilibrium, and accounting."""

    profile: dict[Path, int]
    reduced_profile: dict[Path, int]
    learned: PartialCostFunction
    contraction: ContractionMap
    queries_used: int


def solve_dag_game(oracle) -> DagSolveResult:
    """Contract, learn an equivalent cost function, and compute a pure NE."""
    before = oracle.ledger.count
    reduced_net, cmap = contract_network(oracle.network)
    view = ContractedOracle(oracle, cmap) if cmap.steps else oracle
    f = learn_costs(view, reduced_net)
    reduced_profile = solve_learned_game(f, reduced_net, oracle.players)
    profile = cmap.map_profile_back(reduced_profile)
    return DagSolveResult(
        profile=profile,
        reduced_profile=reduced_profile,
        learned=f,
        contraction=cmap,
        queries_used=oracle.ledger.count - before,
    )
