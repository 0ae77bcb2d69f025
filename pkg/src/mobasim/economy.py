"""Creep waves, jungle camps, gold, items, shopping and experience.

All currency and xp amounts are integers so the wallet ledger balances
exactly. The engine calls these helpers from inside the tick loop; the shop
operations are also the public API used by the item-building sub-game.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

from . import events as ev
from .combat import Stats
from .ruleset import xp_to_reach

if TYPE_CHECKING:
    from .world import HeroState, WorldState


@dataclass(slots=True)
class Wallet:
    """Gold ledger; the balance is derived so it always reconciles."""

    starting: int
    earned: int = 0
    spent: int = 0

    @property
    def gold(self) -> int:
        return self.starting + self.earned - self.spent

    def credit(self, amount: int) -> None:
        if amount < 0:
            raise ValueError("credit amount must be non-negative")
        self.earned += amount

    def debit(self, amount: int) -> None:
        if amount < 0:
            raise ValueError("debit amount must be non-negative")
        if amount > self.gold:
            raise InsufficientGold(f"need {amount} gold, have {self.gold}")
        self.spent += amount


@dataclass(frozen=True, slots=True)
class Item:
    id: str
    cost: int
    deltas: dict[str, float]
    tags: tuple[str, ...]


@dataclass(slots=True)
class ActiveBuff:
    source: str
    deltas: dict[str, float]
    expires_at: int


@dataclass(slots=True)
class CreepState:
    """A lane, jungle or neutral creep."""

    id: str
    team: str                  # BLUE, RED or NEUTRAL
    lane: str | None           # None for jungle creeps
    kind: str                  # melee | ranged | jungle
    stats: Stats
    x: float
    y: float
    bounty: int
    xp_value: int
    waypoints: list[tuple[float, float]] = field(default_factory=list)
    waypoint_index: int = 0
    alive: bool = True
    next_attack_tick: int = 0
    target_id: str | None = None
    camp_id: str | None = None
    home: tuple[float, float] | None = None   # leash anchor for jungle creeps
    last_hit_by: str | None = None
    stun_until: int = 0
    # incremental fog-of-war cache (engine-internal)
    vis_cell: int = -1
    vis_b: bool = False
    vis_r: bool = False
    vis_due_b: int = 0
    vis_due_r: int = 0

    def clone(self) -> "CreepState":
        return CreepState(
            self.id, self.team, self.lane, self.kind, self.stats.clone(),
            self.x, self.y, self.bounty, self.xp_value,
            list(self.waypoints), self.waypoint_index, self.alive,
            self.next_attack_tick, self.target_id, self.camp_id, self.home,
            self.last_hit_by, self.stun_until,
            self.vis_cell, self.vis_b, self.vis_r, self.vis_due_b, self.vis_due_r,
        )


@dataclass(slots=True)
class CampState:
    """A jungle camp: either its pack is alive or a respawn is pending."""

    id: str
    team: str
    x: float
    y: float
    buff: dict[str, Any] | None
    creep_ids: list[str] = field(default_factory=list)
    respawn_at: int | None = None

    @property
    def cleared(self) -> bool:
        return not self.creep_ids

    def clone(self) -> "CampState":
        return CampState(self.id, self.team, self.x, self.y, self.buff,
                         list(self.creep_ids), self.respawn_at)


class ShopError(Exception):
    """Base class for shop rule violations; no state changes on raise."""


class InsufficientGold(ShopError):
    pass


class InventoryFull(ShopError):
    pass


class NotInBase(ShopError):
    pass


class EmptySlot(ShopError):
    pass


class UnknownItem(ShopError):
    pass


def item_catalog(ruleset: dict[str, Any]) -> dict[str, Item]:
    return {
        name: Item(id=name, cost=int(cfg["cost"]), deltas=dict(cfg["deltas"]),
                   tags=tuple(cfg["tags"]))
        for name, cfg in ruleset["items"].items()
    }


def buy_item(world: "WorldState", hero: "HeroState", item_id: str, tick: int) -> ev.Event:
    """Purchase into a free slot while standing in the own base.

    Raises a typed ShopError (no state change) on any violated precondition.
    """
    item = world.catalog.get(item_id)
    if item is None:
        raise UnknownItem(item_id)
    if not world.geometry.region_of(hero.x, hero.y).is_base(hero.team):
        raise NotInBase(f"{hero.id} must be in the {hero.team} base to shop")
    if len(hero.items) >= world.inventory_slots:
        raise InventoryFull(f"{hero.id} has no free slot")
    hero.wallet.debit(item.cost)   # raises InsufficientGold before mutation
    hero.items.append(item)
    hero.recompute_stats()
    return ev.Event(tick, ev.PURCHASE, actor=hero.id, target=item.id, amount=item.cost)


def sell_item(world: "WorldState", hero: "HeroState", slot: int, tick: int) -> ev.Event:
    """Sell the item in a slot for a 70% refund; hp clamps to the new max."""
    if not world.geometry.region_of(hero.x, hero.y).is_base(hero.team):
        raise NotInBase(f"{hero.id} must be in the {hero.team} base to sell")
    if slot < 0 or slot >= len(hero.items):
        raise EmptySlot(f"slot {slot} is empty")
    item = hero.items.pop(slot)
    refund = math.floor(world.sell_refund * item.cost)
    hero.wallet.credit(refund)
    hero.recompute_stats()
    return ev.Event(tick, ev.SELL, actor=hero.id, target=item.id, amount=refund)


def grant_xp(hero: "HeroState", amount: int, tick: int, level_cap: int) -> list[ev.Event]:
    """Add xp and resolve level-ups; xp past the cap is discarded."""
    if amount <= 0:
        return []
    hero.xp = min(hero.xp + amount, xp_to_reach(level_cap))
    out: list[ev.Event] = []
    while hero.stats.level < level_cap and hero.xp >= xp_to_reach(hero.stats.level + 1):
        hero.stats.level += 1
        hero.recompute_stats()
        out.append(ev.Event(tick, ev.LEVEL_UP, actor=hero.id, amount=hero.stats.level))
    return out


def wave_creeps(world: "WorldState", lane: str, team: str, tick: int) -> list[CreepState]:
    """Build one creep wave at the base end of a lane (melee front, ranged behind)."""
    cfg = world.ruleset["creeps"]
    minutes = tick / (60.0 * world.tick_rate)
    hp_bonus = cfg["hp_growth_per_min"] * minutes
    dmg_bonus = cfg["damage_growth_per_min"] * minutes
    speed = cfg["move_speed"]
    waypoints = world.geometry.lane_waypoints(lane, team)
    lane_len = world.geometry.lane_length(lane)

    creeps: list[CreepState] = []

    def make(kind: str, offset: float) -> CreepState:
        spec = cfg[kind]
        frac = offset / lane_len
        fraction = frac if team == "BLUE" else 1.0 - frac
        x, y = world.geometry.point_along_lane(lane, fraction)
        world.creep_seq += 1
        hp = spec["hp"] + hp_bonus
        stats = Stats(
            hp=hp, max_hp=hp, mana=0.0, max_mana=0.0,
            attack_damage=spec["attack_damage"] + dmg_bonus,
            attack_speed=world.tick_rate / cfg["attack_interval_ticks"],
            attack_range=spec["attack_range"],
            armor=0.0, magic_resist=0.0, move_speed=speed,
            crit_chance=0.0, hp_regen=0.0, mana_regen=0.0,
        )
        return CreepState(
            id=f"C{world.creep_seq:06d}", team=team, lane=lane, kind=kind,
            stats=stats, x=x, y=y, bounty=int(spec["bounty"]), xp_value=int(spec["xp"]),
            waypoints=list(waypoints), waypoint_index=1,
        )

    for i in range(int(cfg["wave_melee"])):
        creeps.append(make("melee", 9.0 + 0.8 * i))
    for i in range(int(cfg["wave_ranged"])):
        creeps.append(make("ranged", 6.0 + 0.8 * i))
    return creeps


def camp_positions(ruleset: dict[str, Any]) -> dict[str, list[tuple[float, float]]]:
    """Jungle camp anchor points per team, mirrored across the map center."""
    s = ruleset["map"]["size"]
    blue = [(0.30 * s, 0.14 * s), (0.14 * s, 0.30 * s), (0.42 * s, 0.26 * s), (0.26 * s, 0.42 * s)]
    red = [(s - x, s - y) for x, y in blue]
    return {"BLUE": blue, "RED": red}


def spawn_camp_creeps(world: "WorldState", camp: CampState, tick: int) -> list[CreepState]:
    cfg = world.ruleset["jungle"]
    spec = cfg["creep"]
    out: list[CreepState] = []
    for i in range(int(cfg["camp_creeps"])):
        world.creep_seq += 1
        stats = Stats(
            hp=spec["hp"], max_hp=spec["hp"], mana=0.0, max_mana=0.0,
            attack_damage=spec["attack_damage"],
            attack_speed=world.tick_rate / world.ruleset["creeps"]["attack_interval_ticks"],
            attack_range=spec["attack_range"],
            armor=0.0, magic_resist=0.0,
            move_speed=world.ruleset["creeps"]["move_speed"],
            crit_chance=0.0, hp_regen=0.0, mana_regen=0.0,
        )
        creep = CreepState(
            id=f"C{world.creep_seq:06d}", team="NEUTRAL", lane=None, kind="jungle",
            stats=stats, x=camp.x + 0.8 * i, y=camp.y, bounty=int(spec["bounty"]),
            xp_value=int(spec["xp"]), camp_id=camp.id, home=(camp.x, camp.y),
        )
        camp.creep_ids.append(creep.id)
        out.append(creep)
    camp.respawn_at = None
    return out
