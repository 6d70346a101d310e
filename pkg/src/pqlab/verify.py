"""Independent ground-truth oracles the acceptance suite trusts.

Everything here is written against the game definitions directly, without
sharing logic with the solvers it cross-checks (beyond core evaluation).
Enumeration caps can be overridden with the PQLAB_CAP environment variable.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InvalidSpec, TooLarge
from .games import (
    BimatrixGame,
    CongestionGame,
    MixedProfile,
    Path,
    enumerate_paths,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)

DEFAULT_CAP = 10**6


def _cap() -> int:
    return int(os.environ.get("PQLAB_CAP", DEFAULT_CAP))


@dataclass(frozen=True)
class DeviationReport:
    """Outcome of a single-deviation sweep over a congestion profile.

    ``improvement`` is the best strict cost saving any player can realise;
    the profile is a pure Nash equilibrium iff it is <= 0.
    """

    profile: tuple[tuple[Path, int], ...]
    worst_path: Path | None
    worst_alternative: Path | None
    improvement: Fraction

    @property
    def is_equilibrium(self) -> bool:
        return self.improvement <= _ZERO


def _path_cost(game: CongestionGame, path: Path, loads: Mapping[int, int]) -> Fraction:
    return sum((game.cost[e][loads[e]] for e in path), _ZERO)


def deviation_report(game: CongestionGame, profile: Mapping[Path, int]) -> DeviationReport:
    """Best unilateral deviation over all players of a congestion profile."""
    from .games import edge_loads, validate_profile

    validate_profile(game, profile)
    loads = edge_loads(game, profile)
    paths = enumerate_paths(game)
    best = _ZERO
    worst_path = worst_alt = None
    for path, count in sorted(profile.items()):
        if count == 0:
            continue
        current = _path_cost(game, path, loads)
        on_path = set(path)
        for alt in paths:
            if alt == path:
                continue
            moved = sum(
                (game.cost[e][loads[e] + (0 if e in on_path else 1)] for e in alt),
                _ZERO,
            )
            gain = current - moved
            if gain > best:
                best, worst_path, worst_alt = gain, path, alt
    return DeviationReport(
        profile=tuple(sorted(profile.items())),
        worst_path=worst_path,
        worst_alternative=worst_alt,
        improvement=best,
    )


def all_profiles(game: CongestionGame, cap: int | None = None) -> list[dict[Path, int]]:
    """Every anonymous profile (multiset of n paths); guarded by the cap."""
    paths = enumerate_paths(game)
    n = game.players
    limit = cap if cap is not None else _cap()
    if len(paths) ** n > limit:
        raise TooLarge(
            f"{len(paths)}^{n} profiles exceed the cap of {limit}"
        )
    profiles = []
    for combo in itertools.combinations_with_replacement(paths, n):
        profile: dict[Path, int] = {}
        for p in combo:
            profile[p] = profile.get(p, 0) + 1
        profiles.append(profile)
    return profiles


def brute_force_pure_ne(
    game: CongestionGame, cap: int | None = None
) -> list[dict[Path, int]]:
    """All pure Nash equilibria by exhaustive enumeration and deviation checks."""
    return [
        profile
        for profile in all_profiles(game, cap)
        if deviation_report(game, profile).is_equilibrium
    ]


def greedy_parallel_ne(
    tables: Sequence[Sequence[Fraction]], players: int
) -> tuple[int, ...]:
    """Sequential best-response insertion onto parallel links.

    With nondecreasing link costs this classic greedy lands on a pure Nash
    equilibrium: each player takes a link minimising the cost after joining,
    ties to the least-loaded link, then to the lowest index.
    """
    if players < 0 or not tables:
        raise InvalidSpec("need links and a non-negative player count")
    loads = [0] * len(tables)
    for _ in range(players):
        best = min(
            range(len(tables)), key=lambda i: (tables[i][loads[i] + 1], loads[i], i)
        )
        loads[best] += 1
    return tuple(loads)


def check_equivalence(
    learned: Mapping[int, Sequence[Fraction]],
    truth: Mapping[int, Sequence[Fraction]],
    game: CongestionGame,
    players: int,
    mode: str = "exhaustive",
    samples: int = 200,
    seed: int = 0,
    cap: int | None = None,
) -> tuple[bool, dict | None]:
    """Do two cost functions price every player of every profile identically?

    Exhaustive mode enumerates all anonymous profiles (cap-guarded); sampled
    mode draws seeded random profiles.  Returns (equivalent, counterexample)
    where the counterexample names the profile and the disagreeing path.
    """
    from .games import edge_loads

    paths = enumerate_paths(game)
    if mode == "exhaustive":
        profiles = all_profiles(game, cap)
    elif mode == "sampled":
        rng = random.Random(seed)
        profiles = []
        for _ in range(samples):
            profile: dict[Path, int] = {}
            for p in rng.choices(paths, k=players):
                profile[p] = profile.get(p, 0) + 1
            profiles.append(profile)
    else:
        raise InvalidSpec(f"unknown mode {mode!r}")

    for profile in profiles:
        loads = edge_loads(game, profile)
        for path, count in profile.items():
            if count == 0:
                continue
            got = sum((Fraction(learned[e][loads[e]]) for e in path), _ZERO)
            want = sum((Fraction(truth[e][loads[e]]) for e in path), _ZERO)
            if got != want:
                return False, {"profile": profile, "path": path, "got": got, "want": want}
    return True, None


def exact_ne_2x2(game: BimatrixGame) -> MixedProfile:
    """Exact Nash equilibrium of a 2x2 game: pure scan, then indifference.

    Looks for a pure equilibrium first (lowest indices win ties); failing
    that, the unique fully-mixed equilibrium exists and the indifference
    formula is non-degenerate.
    """
    if game.rows != 2 or game.cols != 2:
        raise InvalidSpec("exact solver only handles 2x2 games")
    R, C = game.row_payoff, game.col_payoff
    for i in range(2):
        for j in range(2):
            if R[i][j] >= R[1 - i][j] and C[i][j] >= C[i][1 - j]:
                return MixedProfile.pure(i, j, 2, 2)
    x_den = C[0][0] - C[0][1] - C[1][0] + C[1][1]
    y_den = R[0][0] - R[1][0] - R[0][1] + R[1][1]
    x = (C[1][1] - C[1][0]) / x_den  # row's weight on row 0
    y = (R[1][1] - R[0][1]) / y_den  # col's weight on col 0
    return MixedProfile.of((x, 1 - x), (y, 1 - y))
