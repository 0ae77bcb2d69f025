"""Replay model and its line-oriented file format.

A replay file is one JSON record per line: the first line is the header
(match config, full ruleset, rosters, optional draft transcript), the last
line the footer (winner, duration, per-hero metrics), and everything between
is the timestamped event body in emission order. Records are serialized
canonically (sorted keys, no whitespace) so serialize -> parse -> serialize
is byte-identical and two identical runs produce identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any

from .events import Event, event_from_record

if TYPE_CHECKING:
    from .world import MatchConfig, WorldState

REPLAY_FORMAT = "mobasim-replay-v1"


@dataclass
class Replay:
    """Header + append-only event body + footer."""

    header: dict[str, Any]
    events: list[Event]
    footer: dict[str, Any]

    @property
    def duration_ticks(self) -> int:
        return int(self.footer["duration_ticks"])

    @property
    def winner(self) -> str | None:
        return self.footer.get("winner")

    def snapshots(self) -> list[Event]:
        return [e for e in self.events if e.kind == "snapshot"]


def canonical_line(record: dict[str, Any]) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def make_header(config: "MatchConfig", draft: list[dict[str, Any]] | None = None,
                subgame: dict[str, Any] | None = None) -> dict[str, Any]:
    header: dict[str, Any] = {
        "kind": "header",
        "format": REPLAY_FORMAT,
        "config": config.to_record(),
        "ruleset": config.ruleset,
    }
    if draft is not None:
        header["draft"] = draft
    if subgame is not None:
        header["subgame"] = subgame
    return header


def make_footer(world: "WorldState", extra: dict[str, Any] | None = None) -> dict[str, Any]:
    metrics = {
        h.id: {
            "hero": h.name,
            "team": h.team,
            "level": h.stats.level,
            "kills": h.kills,
            "deaths": h.deaths,
            "assists": h.assists,
            "last_hits": h.last_hits,
            "denies": h.denies,
            "gold_earned": h.wallet.earned,
            "gold_spent": h.wallet.spent,
            "damage_dealt": round(h.damage_dealt, 2),
            "damage_taken": round(h.damage_taken, 2),
            "structure_damage": round(h.structure_damage_dealt, 2),
        }
        for h in world.heroes
    }
    footer: dict[str, Any] = {
        "kind": "footer",
        "winner": world.winner,
        "duration_ticks": world.tick,
        "metrics": metrics,
    }
    if extra:
        footer.update(extra)
    return footer


def serialize_replay(replay: Replay) -> bytes:
    lines = [canonical_line(replay.header)]
    lines.extend(canonical_line(e.to_record()) for e in replay.events)
    lines.append(canonical_line(replay.footer))
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_replay(data: bytes | str) -> Replay:
    """Parse a serialized replay; validates framing and tick ordering."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = [ln for ln in text.split("\n") if ln]
    if len(lines) < 2:
        raise ValueError("replay must contain at least a header and a footer")
    header = json.loads(lines[0])
    footer = json.loads(lines[-1])
    if header.get("kind") != "header":
        raise ValueError("first record is not a header")
    if footer.get("kind") != "footer":
        raise ValueError("last record is not a footer")
    events = []
    last_tick = -1
    for ln in lines[1:-1]:
        rec = json.loads(ln)
        e = event_from_record(rec)
        if e.tick < last_tick:
            raise ValueError(f"events out of tick order at tick {e.tick}")
        last_tick = e.tick
        events.append(e)
    return Replay(header=header, events=events, footer=footer)


def write_replay(replay: Replay, path: str | Path) -> None:
    Path(path).write_bytes(serialize_replay(replay))


def read_replay(path: str | Path) -> Replay:
    return parse_replay(Path(path).read_bytes())
