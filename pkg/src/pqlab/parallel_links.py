"""Exact pure Nash equilibrium on m parallel links in few congestion queries.

The solver works in phases with shrinking group size delta.  Each phase
turns a (kf*delta)-equilibrium into a delta-equilibrium by moving whole
groups of delta players, locating the number of groups to move with a
binary search whose probes are batched so that one oracle call covers every
link at once.

Group moves are committed by pairing "removal slots" (the cost currently
paid by the r-th group from the top of a link) against "addition slots"
(the cost of the r-th group added to a link) and taking every pair in which
the removal strictly exceeds the addition.  The number of such pairs is
found by binary search on q with the threshold set to the q-th smallest
addition cost; a literal (q+1)-smallest threshold compared with equality
admits no fixed point once cost tables have flat stretches, so the commit
rule here is the tie-robust variant.  Probed values are cached and reused,
which can only lower the query count.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import AlgorithmInvariantViolated, InvalidSpec
from .games import Path, enumerate_paths


def default_group_factor(links: int) -> int:
    """kf = max(2, ceil(log2 m)): the Theta(log m) choice."""
    if links < 1:
        raise InvalidSpec("need at least one link")
    return max(2, (links - 1).bit_length())


@dataclass(frozen=True)
class LinkLoads:
    """Player counts per link plus the special link whose load may be ragged."""

    loads: tuple[int, ...]
    special: int

    def __post_init__(self) -> None:
        if not 0 <= self.special < len(self.loads):
            raise InvalidSpec("special link index out of range")
        if any(x < 0 for x in self.loads):
            raise InvalidSpec("negative link load")

    @property
    def total(self) -> int:
        return sum(self.loads)


@dataclass(frozen=True)
class PhasePlan:
    """Phase schedule: group sizes kf^T, ..., kf, 1."""

    group_factor: int
    players: int

    def __post_init__(self) -> None:
        if self.group_factor < 2:
            raise InvalidSpec("group factor must be at least 2")
        if self.players < 1:
            raise InvalidSpec("need at least one player")

    @property
    def phase_count_exponent(self) -> int:
        """Largest T with group_factor**T <= players."""
        t, power = 0, 1
        while power * self.group_factor <= self.players:
            power *= self.group_factor
            t += 1
        return t

    def deltas(self) -> list[int]:
        kf = self.group_factor
        return [kf**t for t in range(self.phase_count_exponent, -1, -1)]


@dataclass(frozen=True)
class RefineTrace:
    """Instrumentation of one successful refinement."""

    delta: int
    moved_groups: int
    removed: tuple[int, ...]
    added: tuple[int, ...]


@dataclass
class ParallelLinksResult:
    loads: LinkLoads
    queries_used: int
    query_bound: int
    group_factor: int
    checkpoints: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)
    traces: list[RefineTrace] = field(default_factory=list)


def is_delta_equilibrium(
    tables: Sequence[Sequence[Fraction]],
    loads: Sequence[int],
    delta: int,
    special: int,
) -> bool:
    """Ground-truth delta-equilibrium check against full cost tables.

    Requires delta | loads[i] off the special link, and that no group of
    delta players on a link with at least delta of them could pay less on
    any other link; loads above n count as infinitely expensive.
    """
    n = len(tables[0]) - 1
    m = len(tables)
    if len(loads) != m or sum(loads) > n * m:
        raise InvalidSpec("loads do not match the tables")
    for i in range(m):
        if i != special and loads[i] % delta:
            return False
    for i in range(m):
        if loads[i] < delta:
            continue
        cost_i = tables[i][loads[i]]
        for j in range(m):
            target = loads[j] + delta
            if j != i and target <= n and tables[j][target] < cost_i:
                return False
    return True


class _ProbeCache:
    """Solver-side cache of (link, load) -> cost with monotonicity auditing."""

    def __init__(self, oracle, links: Sequence[Path]) -> None:
        self._oracle = oracle
        self._links = list(links)
        self._known: list[dict[int, Fraction]] = [{} for _ in links]
        self._sorted_loads: list[list[int]] = [[] for _ in links]

    def probe_round(self, wanted: Mapping[int, int]) -> None:
        """Learn every requested (link, load) pair, issuing at most one query."""
        missing = {
            i: load for i, load in wanted.items() if load not in self._known[i]
        }
        if not missing:
            return
        assignment = {self._links[i]: load for i, load in missing.items()}
        response = self._oracle.query_loads(assignment)
        for i, load in missing.items():
            self._store(i, load, response[self._links[i]])

    def _store(self, link: int, load: int, cost: Fraction) -> None:
        loads = self._sorted_loads[link]
        pos = bisect.bisect_left(loads, load)
        if pos > 0 and self._known[link][loads[pos - 1]] > cost:
            raise AlgorithmInvariantViolated(
                f"link {link}: cost at load {load} below cost at {loads[pos - 1]}"
            )
        if pos < len(loads) and self._known[link][loads[pos]] < cost:
            raise AlgorithmInvariantViolated(
                f"link {link}: cost at load {load} above cost at {loads[pos]}"
            )
        loads.insert(pos, load)
        self._known[link][load] = cost

    def value(self, link: int, load: int) -> Fraction:
        return self._known[link][load]


@dataclass
class _PhaseContext:
    delta: int
    kf: int
    players: int
    loads: tuple[int, ...]
    special: int
    # Feasible addition slots (cost, link, r), sorted; r-th extra group on a link.
    additions: list[tuple[Fraction, int, int]]

    @property
    def links(self) -> int:
        return len(self.loads)

    @property
    def window(self) -> int:
        """Most groups one refinement can move.

        kf*m covers the usual case; a group factor above m+1 lets the ragged
        special link contribute up to kf-1 extra moves.
        """
        return max(self.kf * self.links, (self.kf - 1) * (self.links + 1))

    def removal_cap(self, link: int) -> int:
        return min(self.window, self.loads[link] // self.delta)


def _collect_additions(cache: _ProbeCache, ctx: _PhaseContext) -> None:
    """2*kf probe rounds: cost of adding r groups to every link, r = 1..2kf."""
    n = ctx.players
    for r in range(1, 2 * ctx.kf + 1):
        wanted = {
            i: ctx.loads[i] + r * ctx.delta
            for i in range(ctx.links)
            if ctx.loads[i] + r * ctx.delta <= n
        }
        cache.probe_round(wanted)
        for i in wanted:
            ctx.additions.append((cache.value(i, wanted[i]), i, r))
    ctx.additions.sort(key=lambda t: (t[0], t[1], t[2]))


def _removal_counts(cache: _ProbeCache, ctx: _PhaseContext, theta: Fraction) -> list[int]:
    """Per link, how many top groups currently pay strictly more than theta.

    Equals min{q : f_i(n_i - q*delta) <= theta} over q in [0, cap_i], or
    cap_i when even draining every countable group leaves the cost above
    theta (the guard case, which needs one batched probe round).
    """
    caps = [ctx.removal_cap(i) for i in range(ctx.links)]
    cache.probe_round(
        {
            i: ctx.loads[i] - caps[i] * ctx.delta
            for i in range(ctx.links)
            if caps[i] > 0
        }
    )
    counts: list[int | None] = [None] * ctx.links
    lo = [0] * ctx.links
    hi = [0] * ctx.links
    for i in range(ctx.links):
        if caps[i] == 0:
            counts[i] = 0
        elif cache.value(i, ctx.loads[i] - caps[i] * ctx.delta) > theta:
            counts[i] = caps[i]
        else:
            lo[i], hi[i] = 0, caps[i]
    # Batched binary searches: one probe round per iteration covers every
    # link still looking for the first drained-load whose cost is <= theta.
    while True:
        active = [i for i in range(ctx.links) if counts[i] is None and lo[i] < hi[i]]
        if not active:
            break
        mids = {i: (lo[i] + hi[i]) // 2 for i in active}
        cache.probe_round(
            {i: ctx.loads[i] - mids[i] * ctx.delta for i in active}
        )
        for i in active:
            if cache.value(i, ctx.loads[i] - mids[i] * ctx.delta) <= theta:
                hi[i] = mids[i]
            else:
                lo[i] = mids[i] + 1
    for i in range(ctx.links):
        if counts[i] is None:
            counts[i] = lo[i]
    return counts  # type: ignore[return-value]


def _movable_pairs_at_least(cache: _ProbeCache, ctx: _PhaseContext, q: int) -> bool:
    """Predicate of the binary search: do q strictly improving moves exist?

    True iff at least q removal slots cost strictly more than the q-th
    cheapest addition slot, i.e. the q-th best removal beats the q-th best
    addition.  Monotone decreasing in q.
    """
    if q == 0:
        return True
    if q > len(ctx.additions):
        return False
    theta = ctx.additions[q - 1][0]
    return sum(_removal_counts(cache, ctx, theta)) >= q


def _select_extras(
    cache: _ProbeCache,
    ctx: _PhaseContext,
    first_slot: list[int],
    avail: list[int],
    need: int,
) -> list[int]:
    """Take the `need` most expensive removal slots from per-link windows.

    Slot values are nonincreasing within a link, so the windows are consumed
    topmost-first; each iteration probes at most one new value because every
    other link's current top stays cached from the previous round.
    """
    taken = [0] * ctx.links
    pointers = {i: first_slot[i] for i in range(ctx.links) if avail[i] > 0}
    while need > 0:
        if not pointers:
            raise AlgorithmInvariantViolated("ran out of removal candidates")
        cache.probe_round(
            {i: ctx.loads[i] - (slot - 1) * ctx.delta for i, slot in pointers.items()}
        )
        best = max(
            pointers,
            key=lambda i: (
                cache.value(i, ctx.loads[i] - (pointers[i] - 1) * ctx.delta),
                -i,
            ),
        )
        taken[best] += 1
        need -= 1
        pointers[best] += 1
        if taken[best] == avail[best]:
            del pointers[best]
    return taken


def _commit(
    cache: _ProbeCache, ctx: _PhaseContext, moved: int
) -> tuple[tuple[int, ...], RefineTrace]:
    if moved == 0:
        return ctx.loads, RefineTrace(
            ctx.delta, 0, (0,) * ctx.links, (0,) * ctx.links
        )
    theta_low = ctx.additions[moved - 1][0]
    counts_low = _removal_counts(cache, ctx, theta_low)
    if moved < len(ctx.additions):
        counts_high = _removal_counts(cache, ctx, ctx.additions[moved][0])
    else:
        counts_high = [0] * ctx.links
    certain = sum(counts_high)
    if certain > moved or sum(counts_low) < moved:
        raise AlgorithmInvariantViolated("removal counts inconsistent with q*")
    avail = [counts_low[i] - counts_high[i] for i in range(ctx.links)]
    if certain + sum(avail) == moved:
        extras = avail
    else:
        extras = _select_extras(
            cache,
            ctx,
            [counts_high[i] + 1 for i in range(ctx.links)],
            avail,
            moved - certain,
        )
    removed = [counts_high[i] + extras[i] for i in range(ctx.links)]

    added = [0] * ctx.links
    for _, link, _ in ctx.additions[:moved]:
        added[link] += 1

    new_loads = list(ctx.loads)
    for i in range(ctx.links):
        if removed[i] and added[i]:
            raise AlgorithmInvariantViolated(f"link {i} both gives and receives")
        if added[i] > 2 * ctx.kf:
            raise AlgorithmInvariantViolated(f"link {i} receives more than 2k groups")
        new_loads[i] += (added[i] - removed[i]) * ctx.delta
        if new_loads[i] < 0:
            raise AlgorithmInvariantViolated(f"link {i} drained below zero")
        if i != ctx.special and new_loads[i] % ctx.delta:
            raise AlgorithmInvariantViolated(f"link {i} load not divisible by delta")
    if sum(new_loads) != sum(ctx.loads):
        raise AlgorithmInvariantViolated("player count changed by the move")
    return tuple(new_loads), RefineTrace(
        ctx.delta, moved, tuple(removed), tuple(added)
    )


def _refine(
    cache: _ProbeCache,
    ctx: _PhaseContext,
    qmin: int,
    qmax: int,
) -> tuple[tuple[int, ...], RefineTrace]:
    """Binary search for the number of groups to move, then commit.

    Invariant: moving qmin groups is known feasible, the answer lies in
    [qmin, qmax].  A crossed window means the predicate lost monotonicity,
    which only a non-monotone hidden cost function (or a bug) can cause.
    """
    if qmin > qmax:
        raise AlgorithmInvariantViolated("refinement window crossed")
    if qmin == qmax:
        return _commit(cache, ctx, qmin)
    mid = (qmin + qmax + 1) // 2
    if _movable_pairs_at_least(cache, ctx, mid):
        return _refine(cache, ctx, mid, qmax)
    return _refine(cache, ctx, qmin, mid - 1)


def refine_profile(
    oracle,
    loads: LinkLoads,
    delta: int,
    qmin: int = 0,
    qmax: int | None = None,
    group_factor: int | None = None,
) -> LinkLoads:
    """One refinement pass: turn a (kf*delta)-equilibrium into a delta-one."""
    links = _link_paths(oracle)
    kf = group_factor if group_factor is not None else default_group_factor(len(links))
    cache = _ProbeCache(oracle, links)
    new_loads, _ = _refine_phase(cache, loads, delta, kf, oracle.players, qmin, qmax)
    return LinkLoads(new_loads, loads.special)


def _refine_phase(
    cache: _ProbeCache,
    loads: LinkLoads,
    delta: int,
    kf: int,
    players: int,
    qmin: int = 0,
    qmax: int | None = None,
) -> tuple[tuple[int, ...], RefineTrace]:
    ctx = _PhaseContext(
        delta=delta,
        kf=kf,
        players=players,
        loads=loads.loads,
        special=loads.special,
        additions=[],
    )
    _collect_additions(cache, ctx)
    cap = min(ctx.window, len(ctx.additions))
    top = cap if qmax is None else min(qmax, cap)
    return _refine(cache, ctx, qmin, top)


def _link_paths(oracle) -> list[Path]:
    paths = sorted(enumerate_paths(oracle.network))
    if any(len(p) != 1 for p in paths):
        raise InvalidSpec("oracle is not a parallel-links game")
    return paths


def solve_parallel_links(oracle, group_factor: int | None = None) -> ParallelLinksResult:
    """Compute an exact pure Nash equilibrium through congestion queries.

    One query finds the link that is cheapest with all n players on it; all
    players start there, and each phase refines the profile at group size
    kf^t for t = T..0.  The final group size 1 makes the result a pure Nash
    equilibrium.  The measured query count is asserted against the closed
    form bound 1 + (T+1) * (L+1) * (2kf + 1 + L + 1), L = ceil(log2(kf*m+1)).
    """
    links = _link_paths(oracle)
    m = len(links)
    n = oracle.players
    kf = group_factor if group_factor is not None else default_group_factor(m)
    if kf < 2:
        raise InvalidSpec("group factor must be at least 2")
    cache = _ProbeCache(oracle, links)
    before = oracle.ledger.count

    cache.probe_round({i: n for i in range(m)})
    special = min(range(m), key=lambda i: (cache.value(i, n), i))
    loads = LinkLoads(
        tuple(n if i == special else 0 for i in range(m)), special
    )
    plan = PhasePlan(kf, n)
    result = ParallelLinksResult(
        loads=loads,
        queries_used=0,
        query_bound=_query_bound(plan.phase_count_exponent, kf, m),
        group_factor=kf,
    )
    if m > 1:
        for delta in plan.deltas():
            new_loads, trace = _refine_phase(cache, loads, delta, kf, n)
            loads = LinkLoads(new_loads, special)
            result.checkpoints.append((delta, new_loads))
            result.traces.append(trace)
    result.loads = loads
    result.queries_used = oracle.ledger.count - before
    if result.queries_used > result.query_bound:
        raise AlgorithmInvariantViolated(
            f"{result.queries_used} queries exceed the bound {result.query_bound}"
        )
    return result


def _query_bound(T: int, kf: int, m: int) -> int:
    L = (kf * m).bit_length()  # ceil(log2(kf*m + 1))
    return 1 + (T + 1) * (L + 1) * (2 * kf + 1 + L + 1)
