"""JSON encodings for games, profiles, and load assignments.

The wire formats are documented in docs/formats.md.  Rationals are encoded
as strings ("3/4", "2"); parse(emit(x)) == x is a hard requirement and is
enforced by tests.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping

from .errors import InvalidSpec
from .games import (
    BimatrixGame,
    CongestionGame,
    GraphicalGame,
    MixedProfile,
    Network,
    Path,
)


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def parse_rational(text: object) -> Fraction:
    if isinstance(text, bool):
        raise InvalidSpec(f"not a rational: {text!r}")
    if isinstance(text, (int, str)):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidSpec(f"not a rational: {text!r}") from exc
    raise InvalidSpec(f"not a rational: {text!r}")


def _table_out(table) -> list[list[str]]:
    return [[format_rational(v) for v in row] for row in table]


def game_to_dict(game: BimatrixGame | GraphicalGame | CongestionGame) -> dict[str, Any]:
    if isinstance(game, BimatrixGame):
        return {
            "type": "bimatrix",
            "rows": game.rows,
            "cols": game.cols,
            "row_payoff": _table_out(game.row_payoff),
            "col_payoff": _table_out(game.col_payoff),
        }
    if isinstance(game, GraphicalGame):
        tables = []
        for p in range(game.players):
            nbrs = game.in_neighbors[p]
            entries = [
                [own, list(ctx), format_rational(v)]
                for (own, ctx), v in sorted(game.payoff_tables[p].items())
            ]
            tables.append({"neighbors": list(nbrs), "entries": entries})
        return {
            "type": "graphical",
            "players": game.players,
            "strategies": game.strategies,
            "payoff_tables": tables,
        }
    if isinstance(game, CongestionGame):
        return {
            "type": "congestion",
            "players": game.players,
            "vertices": list(game.vertices),
            "origin": game.origin,
            "destination": game.destination,
            "edges": [[e, t, h] for e, (t, h) in sorted(game.edges.items())],
            "cost_tables": {
                str(e): [format_rational(v) for v in game.cost[e]]
                for e in sorted(game.edges)
            },
        }
    raise InvalidSpec(f"unknown game object {game!r}")


def game_from_dict(data: Mapping[str, Any]) -> BimatrixGame | GraphicalGame | CongestionGame:
    kind = data.get("type")
    if kind == "bimatrix":
        return BimatrixGame(
            tuple(tuple(parse_rational(v) for v in row) for row in data["row_payoff"]),
            tuple(tuple(parse_rational(v) for v in row) for row in data["col_payoff"]),
        )
    if kind == "graphical":
        in_neighbors = []
        tables = []
        for spec in data["payoff_tables"]:
            in_neighbors.append(tuple(spec["neighbors"]))
            tables.append(
                {
                    (own, tuple(ctx)): parse_rational(v)
                    for own, ctx, v in spec["entries"]
                }
            )
        return GraphicalGame(
            players=int(data["players"]),
            strategies=int(data["strategies"]),
            in_neighbors=tuple(in_neighbors),
            payoff_tables=tuple(tables),
        )
    if kind == "congestion":
        net = Network(
            data["vertices"],
            {int(e): (int(t), int(h)) for e, t, h in data["edges"]},
            int(data["origin"]),
            int(data["destination"]),
        )
        cost = {
            int(e): [parse_rational(v) for v in table]
            for e, table in data["cost_tables"].items()
        }
        return CongestionGame(net, int(data["players"]), cost)
    raise InvalidSpec(f"unknown game type {kind!r}")


def profile_to_dict(profile: object) -> dict[str, Any]:
    """Serialize a pure pair, pure tuple, mixed profile, or path multiset."""
    if isinstance(profile, MixedProfile):
        return {
            "type": "profile",
            "kind": "mixed",
            "row": [format_rational(p) for p in profile.row_dist],
            "col": [format_rational(p) for p in profile.col_dist],
        }
    if isinstance(profile, Mapping):
        return {
            "type": "profile",
            "kind": "congestion",
            "assignment": [
                {"path": list(path), "count": count}
                for path, count in sorted(profile.items())
            ],
        }
    if isinstance(profile, (tuple, list)):
        return {"type": "profile", "kind": "pure", "strategies": list(profile)}
    raise InvalidSpec(f"cannot serialize profile {profile!r}")


def profile_from_dict(data: Mapping[str, Any]) -> object:
    kind = data.get("kind")
    if kind == "mixed":
        return MixedProfile.of(
            [parse_rational(p) for p in data["row"]],
            [parse_rational(p) for p in data["col"]],
        )
    if kind == "congestion":
        return {
            tuple(entry["path"]): int(entry["count"])
            for entry in data["assignment"]
        }
    if kind == "pure":
        return tuple(int(s) for s in data["strategies"])
    raise InvalidSpec(f"unknown profile kind {kind!r}")


def loads_to_dict(loads: Mapping[Path, int]) -> dict[str, Any]:
    return {
        "type": "loads",
        "loads": [
            {"path": list(path), "count": count} for path, count in sorted(loads.items())
        ],
    }


def loads_from_dict(data: Mapping[str, Any]) -> dict[Path, int]:
    if data.get("type") != "loads":
        raise InvalidSpec("not a load-assignment document")
    return {tuple(entry["path"]): int(entry["count"]) for entry in data["loads"]}


def dump_game(game, fp) -> None:
    json.dump(game_to_dict(game), fp, indent=2)
    fp.write("\n")


def load_game(fp):
    return game_from_dict(json.load(fp))
