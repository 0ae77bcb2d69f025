"""Agent-facing API: observations under fog of war, the action vocabulary,
role allocation and cooperative target voting.

Agents never touch WorldState; they see an Observation assembled by
``observe``. Observations hold references into live engine state for speed —
agents must treat everything reachable from an Observation as read-only.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from .mapgraph import MapGeometry, StructureGraph

if TYPE_CHECKING:
    from .economy import CreepState, Item
    from .world import HeroState, WorldState

ROLES = ("TopLaner", "MidLaner", "Carry", "Support", "Jungler")


@dataclass(slots=True)
class Action:
    """One per-tick hero command."""

    kind: str                    # move|attack_unit|attack_structure|cast|buy|sell|recall|idle
    target_id: str | None = None
    x: float = 0.0
    y: float = 0.0
    slot: int = 0

    @staticmethod
    def move(x: float, y: float) -> "Action":
        return Action("move", x=x, y=y)

    @staticmethod
    def attack_unit(unit_id: str) -> "Action":
        return Action("attack_unit", target_id=unit_id)

    @staticmethod
    def attack_structure(structure_id: str) -> "Action":
        return Action("attack_structure", target_id=structure_id)

    @staticmethod
    def cast(slot: int, target_id: str | None = None,
             point: tuple[float, float] | None = None) -> "Action":
        x, y = point if point is not None else (0.0, 0.0)
        return Action("cast", target_id=target_id, x=x, y=y, slot=slot)

    @staticmethod
    def buy(item_id: str) -> "Action":
        return Action("buy", target_id=item_id)

    @staticmethod
    def sell(slot: int) -> "Action":
        return Action("sell", slot=slot)

    @staticmethod
    def recall() -> "Action":
        return Action("recall")

    @staticmethod
    def idle() -> "Action":
        return Action("idle")


@dataclass(slots=True)
class Observation:
    """A team-filtered view of the world for one hero.

    Enemy units appear only while inside the union of allied vision ranges;
    structures, map geometry, camp sites and the item catalog are public.
    ``last_seen`` remembers the latest known position/tick of enemy heroes
    that are currently hidden.
    """

    tick: int
    team: str
    hero: "HeroState"
    allied_heroes: list["HeroState"]
    allied_creeps: list["CreepState"]
    visible_enemy_heroes: list["HeroState"]
    visible_enemy_creeps: list["CreepState"]
    structures: StructureGraph
    geometry: MapGeometry
    catalog: dict[str, "Item"]
    camp_sites: tuple[tuple[str, float, float, str], ...]
    last_seen: dict[str, tuple[float, float, int]]
    team_gold: int
    team_kills: dict[str, int]
    deny_mode: bool
    max_ticks: int


def observe(world: "WorldState", hero_id: str) -> Observation:
    """Build the fog-filtered view for a hero (alive or awaiting respawn)."""
    hero = world.hero_by_id(hero_id)
    team = hero.team
    return Observation(
        tick=world.tick,
        team=team,
        hero=hero,
        allied_heroes=[h for h in world.heroes if h.team == team],
        allied_creeps=world.allied_creeps[team],
        visible_enemy_heroes=world.visible_enemy_heroes[team],
        visible_enemy_creeps=world.visible_creeps[team],
        structures=world.structures,
        geometry=world.geometry,
        catalog=world.catalog,
        camp_sites=world.camp_sites,
        last_seen=world.last_seen[team],
        team_gold=world.team_gold_earned(team),
        team_kills=world.team_kills,
        deny_mode=world.config.deny_mode,
        max_ticks=world.config.max_ticks,
    )


def allocate_roles(hero_ids: Sequence[str], suitability: Sequence[Sequence[float]]) -> dict[str, str]:
    """Optimal 5-hero role assignment by exhaustive search over 5! permutations.

    ``suitability[i][j]`` scores hero i (in sorted-id order) for ROLES[j].
    Ties break toward the lexicographically-first assignment, so a uniform
    matrix maps sorted heroes onto ROLES in order.
    """
    if len(hero_ids) != 5:
        raise ValueError("exactly 5 heroes required")
    if len(suitability) != 5 or any(len(row) != 5 for row in suitability):
        raise ValueError("suitability must be a 5x5 matrix")
    ordered = sorted(hero_ids)
    order_index = {hid: i for i, hid in enumerate(hero_ids)}
    best_perm: tuple[int, ...] | None = None
    best_score = -math.inf
    for perm in itertools.permutations(range(5)):
        score = 0.0
        for hero_pos, role_idx in enumerate(perm):
            score += suitability[order_index[ordered[hero_pos]]][role_idx]
        if score > best_score:
            best_score = score
            best_perm = perm
    assert best_perm is not None
    return {ordered[i]: ROLES[best_perm[i]] for i in range(5)}


DEFAULT_VOTE_WEIGHTS = {"hp": 0.5, "proximity": 0.2, "threat": 0.2, "disabled": 0.1}


def vote_target(observations: Iterable[Observation],
                weights: dict[str, float] | None = None) -> str | None:
    """Plurality vote over every ally's preferred kill target.

    Each ally scores its visible enemy heroes on low hp fraction, proximity,
    threat (basic-attack dps, normalized within view) and disabled status,
    then votes for its argmax. Ties between vote leaders break toward the
    lowest hp fraction, then the lowest unit id. Returns None when no ally
    sees an enemy. The tally is invariant to the order allies are polled.
    """
    w = weights or DEFAULT_VOTE_WEIGHTS
    tally: dict[str, int] = {}
    hp_frac: dict[str, float] = {}
    for obs in observations:
        enemies = obs.visible_enemy_heroes
        if not enemies:
            continue
        vision = obs.geometry.vision_radius
        max_dps = max(e.stats.attack_damage * e.stats.attack_speed for e in enemies)
        best_id: str | None = None
        best_score = -math.inf
        me = obs.hero
        for e in enemies:
            frac = e.stats.hp / e.stats.max_hp if e.stats.max_hp > 0 else 0.0
            hp_frac[e.id] = frac
            dist = math.hypot(e.x - me.x, e.y - me.y)
            dps = e.stats.attack_damage * e.stats.attack_speed
            score = (
                w["hp"] * (1.0 - frac)
                + w["proximity"] * max(0.0, 1.0 - dist / vision)
                + w["threat"] * (dps / max_dps if max_dps > 0 else 0.0)
                + w["disabled"] * (1.0 if e.stun_until > obs.tick else 0.0)
            )
            if score > best_score or (score == best_score and (best_id is None or e.id < best_id)):
                best_score = score
                best_id = e.id
        if best_id is not None:
            tally[best_id] = tally.get(best_id, 0) + 1
    if not tally:
        return None
    return min(tally, key=lambda uid: (-tally[uid], hp_frac[uid], uid))


class Agent:
    """Deterministic per-hero policy: a pure function of (Observation, state).

    Subclasses override ``act``; they must always return a legal Action
    (Idle is the universal fallback) within the per-tick compute budget.
    """

    name = "agent"

    def __init__(self, hero_id: str, seed: int = 0):
        self.hero_id = hero_id
        self.seed = seed

    def act(self, obs: Observation) -> Action:
        return Action.idle()
