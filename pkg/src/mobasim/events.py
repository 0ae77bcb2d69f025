"""Event stream emitted by the tick engine and consumed by analytics.

Events are lean (slotted dataclass, optional payload dict) because a full
match emits tens of thousands of them. Kinds and payload field names are part
of the versioned replay format; see replay.py for the on-disk encoding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

# Event kinds (spellings are part of the replay format)
DAMAGE = "damage"
KILL = "kill"
LEVEL_UP = "level_up"
PURCHASE = "purchase"
SELL = "sell"
STRUCTURE_DESTROYED = "structure_destroyed"
INVALID_ACTION = "invalid_action"
SPAWN_WAVE = "spawn_wave"
CREEPS_MEET = "creeps_meet"
RESPAWN = "respawn"
CAST = "cast"
STUN = "stun"
HEAL = "heal"
BUFF_GAIN = "buff_gain"
BUFF_EXPIRE = "buff_expire"
RECALL = "recall"
SNAPSHOT = "snapshot"
TERMINAL = "terminal"


@dataclass(slots=True)
class Event:
    """One observable occurrence at a tick.

    actor/target are unit or structure ids (None where not applicable);
    amount carries the primary magnitude (mitigated damage, bounty, xp...);
    data holds kind-specific extras.
    """

    tick: int
    kind: str
    actor: str | None = None
    target: str | None = None
    amount: float = 0.0
    data: dict[str, Any] | None = None

    def to_record(self) -> dict[str, Any]:
        rec: dict[str, Any] = {"kind": self.kind, "tick": self.tick}
        if self.actor is not None:
            rec["actor"] = self.actor
        if self.target is not None:
            rec["target"] = self.target
        if self.amount:
            rec["amount"] = self.amount
        if self.data is not None:
            rec["data"] = self.data
        return rec


def event_from_record(rec: dict[str, Any]) -> Event:
    return Event(
        tick=rec["tick"],
        kind=rec["kind"],
        actor=rec.get("actor"),
        target=rec.get("target"),
        amount=rec.get("amount", 0.0),
        data=rec.get("data"),
    )
