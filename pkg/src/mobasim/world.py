"""The deterministic fixed-tick world engine.

One call to ``advance_tick`` resolves a tick in a fixed, documented order:

  1. movement (incl. attack-move approach, shopping, recall channelling)
  2. ability casts        (damage buffered, applied at end of the phase)
  3. basic attacks        (buffered)
  4. turret attacks       (buffered)
  5. creep AI             (buffered)
  6. deaths and bounties
  7. spawns and respawns
  8. passive income, regeneration, buff expiry
  9. bookkeeping (stale-id pruning, visibility refresh)
 10. terminal check

Actions are resolved in fixed hero-id order regardless of how the input map
is ordered. Damage within a phase is applied after every attacker in that
phase has acted, so perfectly mirrored set-ups stay perfectly mirrored
(simultaneous deaths instead of a first-strike advantage from id ordering).
A unit reduced to 0 hp stops acting in later phases of the same tick and is
removed from play in phase 6; heroes enter the respawn queue.

The engine mutates the given WorldState in place and returns it (copying the
full state every tick would dominate the runtime budget); ``clone()`` yields
an isolated snapshot for analyzers and Monte-Carlo rollouts. Nothing outside
``advance_tick`` mutates a world.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from random import Random
from typing import Any

from . import economy as eco
from . import events as ev
from .combat import (
    CRIT_MULTIPLIER,
    Ability,
    Stats,
    ability_from_config,
    death_timer,
    mitigate,
    turret_acquire_target,
)
from .economy import ActiveBuff, CampState, CreepState, Item, ShopError, Wallet
from .mapgraph import BLUE, LANES, RED, TEAMS, MapGeometry, build_map, enemy
from .rng import stream
from .ruleset import default_ruleset, validate_ruleset, xp_to_reach

DRAW = "DRAW"

_STALE_GRACE_TICKS = 30


def default_rosters(ruleset: dict[str, Any], agent: str = "idle") -> dict[str, list[tuple[str, str]]]:
    """A symmetric default 5v5 roster binding every hero to one agent name."""
    names = list(ruleset["heroes"])[:5]
    return {team: [(n, agent) for n in names] for team in TEAMS}


def make_hero(ruleset: dict[str, Any], name: str, hero_id: str, team: str,
              level: int = 1, starting_gold: int = 0, crit_enabled: bool = True,
              x: float = 0.0, y: float = 0.0) -> HeroState:
    """Build a standalone hero from its ruleset template at a given level."""
    template = ruleset["heroes"][name]
    abilities = [ability_from_config(ruleset["abilities"][a]) for a in template["abilities"]]
    hero = HeroState(
        id=hero_id, team=team, name=name, base=template,
        stats=Stats(hp=1.0, max_hp=1.0, mana=0.0, max_mana=0.0,
                    attack_damage=0.0, attack_speed=1.0, attack_range=1.0,
                    armor=0.0, magic_resist=0.0, move_speed=1.0,
                    crit_chance=0.0, hp_regen=0.0, mana_regen=0.0,
                    level=max(1, int(level))),
        abilities=abilities, x=x, y=y,
        wallet=Wallet(starting=starting_gold),
        ability_ready=[0] * len(abilities),
        crit_enabled=crit_enabled,
    )
    hero.xp = xp_to_reach(hero.stats.level)
    hero.recompute_stats()
    hero.stats.hp = hero.stats.max_hp
    hero.stats.mana = hero.stats.max_mana
    return hero


@dataclass
class MatchConfig:
    """Everything needed to reproduce a match bit-for-bit (with the agents)."""

    seed: int
    rosters: dict[str, list[tuple[str, str]]]
    max_ticks: int = 24000
    tick_rate: int = 10
    deny_mode: bool = False
    ruleset: dict[str, Any] = field(default_factory=default_ruleset)
    active_lanes: tuple[str, ...] = LANES
    spawn_waves: bool = True
    spawn_jungle: bool = True
    crit_enabled: bool = True
    respawns_enabled: bool = True
    hero_level: int = 1
    starting_gold: int | None = None
    positions: dict[str, tuple[float, float]] | None = None

    def __post_init__(self) -> None:
        if self.tick_rate <= 0:
            raise ValueError("tick_rate must be positive")
        if self.max_ticks <= 0:
            raise ValueError("max_ticks must be positive")
        validate_ruleset(self.ruleset)
        for team in TEAMS:
            if team not in self.rosters:
                raise ValueError(f"roster missing team {team}")
            for hero_name, _agent in self.rosters[team]:
                if hero_name not in self.ruleset["heroes"]:
                    raise ValueError(f"unknown hero template: {hero_name}")

    def to_record(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "rosters": {t: [list(pair) for pair in r] for t, r in self.rosters.items()},
            "max_ticks": self.max_ticks,
            "tick_rate": self.tick_rate,
            "deny_mode": self.deny_mode,
            "active_lanes": list(self.active_lanes),
            "spawn_waves": self.spawn_waves,
            "spawn_jungle": self.spawn_jungle,
            "crit_enabled": self.crit_enabled,
            "respawns_enabled": self.respawns_enabled,
            "hero_level": self.hero_level,
            "starting_gold": self.starting_gold,
            "positions": {k: list(v) for k, v in self.positions.items()} if self.positions else None,
        }

    @classmethod
    def from_record(cls, rec: dict[str, Any], ruleset: dict[str, Any]) -> "MatchConfig":
        return cls(
            seed=rec["seed"],
            rosters={t: [tuple(p) for p in r] for t, r in rec["rosters"].items()},
            max_ticks=rec["max_ticks"],
            tick_rate=rec["tick_rate"],
            deny_mode=rec["deny_mode"],
            ruleset=ruleset,
            active_lanes=tuple(rec["active_lanes"]),
            spawn_waves=rec["spawn_waves"],
            spawn_jungle=rec["spawn_jungle"],
            crit_enabled=rec["crit_enabled"],
            respawns_enabled=rec.get("respawns_enabled", True),
            hero_level=rec["hero_level"],
            starting_gold=rec["starting_gold"],
            positions={k: tuple(v) for k, v in rec["positions"].items()} if rec.get("positions") else None,
        )


@dataclass(slots=True)
class HeroState:
    """One hero: stats, inventory, timers and match bookkeeping."""

    id: str
    team: str
    name: str
    base: dict[str, Any]
    stats: Stats
    abilities: list[Ability]
    x: float
    y: float
    role: str | None = None
    alive: bool = True
    xp: int = 0
    wallet: Wallet = field(default_factory=lambda: Wallet(starting=0))
    items: list[Item] = field(default_factory=list)
    buffs: list[ActiveBuff] = field(default_factory=list)
    ability_ready: list[int] = field(default_factory=list)
    next_attack_tick: int = 0
    stun_until: int = 0
    respawn_at: int | None = None
    recall_at: int | None = None
    crit_enabled: bool = True
    last_hit_by: str | None = None
    recent_damagers: list[tuple[int, str]] = field(default_factory=list)
    kills: int = 0
    deaths: int = 0
    assists: int = 0
    last_hits: int = 0
    denies: int = 0
    damage_dealt: float = 0.0
    damage_taken: float = 0.0
    hero_damage_dealt: float = 0.0
    hero_damage_taken: float = 0.0
    structure_damage_dealt: float = 0.0

    def recompute_stats(self) -> None:
        """Rebuild stats from template + level growth + items + buffs.

        Max-pool increases carry over to current hp/mana; decreases clamp.
        Rebuilding (rather than incrementally patching) makes buff expiry
        restore pre-buff values exactly.
        """
        b = self.base
        g = self.stats.level - 1
        acc = {
            "max_hp": b["hp"] + b["hp_growth"] * g,
            "max_mana": b["mana"] + b["mana_growth"] * g,
            "attack_damage": b["attack_damage"] + b["attack_damage_growth"] * g,
            "attack_speed": b["attack_speed"] + b["attack_speed_growth"] * g,
            "attack_range": b["attack_range"],
            "armor": b["armor"] + b["armor_growth"] * g,
            "magic_resist": b["magic_resist"] + b["magic_resist_growth"] * g,
            "move_speed": b["move_speed"],
            "crit_chance": b["crit_chance"],
            "hp_regen": b["hp_regen"],
            "mana_regen": b["mana_regen"],
        }
        for item in self.items:
            for k, v in item.deltas.items():
                acc[k] += v
        for buff in self.buffs:
            for k, v in buff.deltas.items():
                acc["max_hp" if k == "hp" else k] += v
        s = self.stats
        old_hp_max, old_mana_max = s.max_hp, s.max_mana
        s.max_hp = acc["max_hp"]
        s.max_mana = acc["max_mana"]
        s.attack_damage = acc["attack_damage"]
        s.attack_speed = acc["attack_speed"]
        s.attack_range = acc["attack_range"]
        s.armor = acc["armor"]
        s.magic_resist = acc["magic_resist"]
        s.move_speed = acc["move_speed"]
        s.crit_chance = min(1.0, acc["crit_chance"]) if self.crit_enabled else 0.0
        s.hp_regen = acc["hp_regen"]
        s.mana_regen = acc["mana_regen"]
        if s.max_hp > old_hp_max:
            s.hp += s.max_hp - old_hp_max
        s.hp = min(s.hp, s.max_hp)
        if s.max_mana > old_mana_max:
            s.mana += s.max_mana - old_mana_max
        s.mana = min(s.mana, s.max_mana)

    def clone(self) -> "HeroState":
        return HeroState(
            id=self.id, team=self.team, name=self.name, base=self.base,
            stats=self.stats.clone(), abilities=self.abilities, x=self.x, y=self.y,
            role=self.role, alive=self.alive, xp=self.xp,
            wallet=Wallet(self.wallet.starting, self.wallet.earned, self.wallet.spent),
            items=list(self.items),
            buffs=[ActiveBuff(bf.source, bf.deltas, bf.expires_at) for bf in self.buffs],
            ability_ready=list(self.ability_ready),
            next_attack_tick=self.next_attack_tick, stun_until=self.stun_until,
            respawn_at=self.respawn_at, recall_at=self.recall_at,
            crit_enabled=self.crit_enabled, last_hit_by=self.last_hit_by,
            recent_damagers=list(self.recent_damagers),
            kills=self.kills, deaths=self.deaths, assists=self.assists,
            last_hits=self.last_hits, denies=self.denies,
            damage_dealt=self.damage_dealt, damage_taken=self.damage_taken,
            hero_damage_dealt=self.hero_damage_dealt,
            hero_damage_taken=self.hero_damage_taken,
            structure_damage_dealt=self.structure_damage_dealt,
        )


class WorldState:
    """Complete simulation state at a tick."""

    def __init__(self, config: MatchConfig):
        rs = config.ruleset
        self.config = config
        self.ruleset = rs
        self.tick = 0
        self.tick_rate = config.tick_rate
        self.winner: str | None = None
        self.geometry, self.structures = build_map(rs)
        self.catalog = eco.item_catalog(rs)
        self.inventory_slots = int(rs["economy"]["inventory_slots"])
        self.sell_refund = float(rs["economy"]["sell_refund"])
        self.creep_seq = 0
        self.creeps: list[CreepState] = []
        self.camps: list[CampState] = []
        self.heroes: list[HeroState] = []
        self.hero_index: dict[str, HeroState] = {}
        self.units: dict[str, Any] = {}
        self.recently_dead: dict[str, int] = {}
        self.visible: dict[str, set[str]] = {BLUE: set(), RED: set()}
        self.visible_enemy_heroes: dict[str, list[HeroState]] = {BLUE: [], RED: []}
        self.visible_creeps: dict[str, list[CreepState]] = {BLUE: [], RED: []}
        self.allied_creeps: dict[str, list[CreepState]] = {BLUE: [], RED: []}
        self.last_seen: dict[str, dict[str, tuple[float, float, int]]] = {BLUE: {}, RED: {}}
        self.lanes_met: dict[str, bool] = {lane: False for lane in LANES}
        self.structures_destroyed_by: dict[str, int] = {BLUE: 0, RED: 0}
        self.team_kills: dict[str, int] = {BLUE: 0, RED: 0}
        self._pending_structure_kills: list[tuple[Any, str]] = []
        self.rng: dict[str, Random] = {}
        self.reseed(config.seed)

        starting_gold = (config.starting_gold if config.starting_gold is not None
                         else int(rs["economy"]["starting_gold"]))
        prefix = {BLUE: "B", RED: "R"}
        for team in TEAMS:
            cx, cy = self.geometry.base_center[team]
            sign = 1.0 if team == BLUE else -1.0
            for idx, (hero_name, _agent) in enumerate(config.rosters[team]):
                hid = f"{prefix[team]}{idx}"
                hero = make_hero(rs, hero_name, hid, team,
                                 level=config.hero_level, starting_gold=starting_gold,
                                 crit_enabled=config.crit_enabled,
                                 x=cx + sign * (3.0 + 1.6 * idx), y=cy + sign * 3.0)
                if config.positions and hid in config.positions:
                    hero.x, hero.y = config.positions[hid]
                self.heroes.append(hero)
        self.heroes.sort(key=lambda h: h.id)
        for hero in self.heroes:
            self.hero_index[hero.id] = hero
            self.units[hero.id] = hero

        if config.spawn_jungle:
            positions = eco.camp_positions(rs)
            for team in TEAMS:
                for i, (x, y) in enumerate(positions[team], start=1):
                    buff = rs["jungle"]["buff"] if i <= int(rs["jungle"]["buff_camps"]) else None
                    camp = CampState(id=f"{team}/CAMP/{i}", team=team, x=x, y=y, buff=buff)
                    self.camps.append(camp)
                    for creep in eco.spawn_camp_creeps(self, camp, 0):
                        self.creeps.append(creep)
                        self.units[creep.id] = creep
        self.camp_sites = tuple((c.id, c.x, c.y, c.team) for c in self.camps)

        self._rebuild_caches()
        refresh_visibility(self)

    def _rebuild_caches(self) -> None:
        self._turret_list = sorted(
            (n for n in self.structures.nodes.values() if n.attack_range > 0),
            key=lambda n: n.id,
        )
        self._hero_id_set = frozenset(self.hero_index)
        # per (team, lane): enemy structures in the order a pushing creep
        # meets them — lane turrets outer to inner, then base, then main
        self._creep_obstacles: dict[tuple[str, str], list[Any]] = {}
        from .mapgraph import node_id
        for team in TEAMS:
            foe = enemy(team)
            for lane in LANES:
                chain = [self.structures.nodes[node_id(foe, lane, t)] for t in (1, 2, 3)]
                chain.append(self.structures.nodes[node_id(foe, "BASE", 1)])
                chain.append(self.structures.nodes[node_id(foe, "BASE", 2)])
                chain.append(self.structures.nodes[node_id(foe, "MAIN", 0)])
                self._creep_obstacles[(team, lane)] = chain
        geo = self.geometry
        self._vis_inv = 1.0 / geo.vision_radius
        self._vis_stride = int(geo.size * self._vis_inv) + 3
        self._refresh_structure_caches()

    def _refresh_structure_caches(self) -> None:
        """Attackability flags, next-obstacle pointers and structure vision
        cells; recomputed only when a structure falls (destruction is
        monotone), never per tick."""
        self._attackable = {nid: self.structures.is_attackable(nid)
                            for nid in self.structures.nodes}
        self._obstacle_idx: dict[tuple[str, str], int] = {}
        for key, chain in self._creep_obstacles.items():
            idx = 0
            while idx < len(chain) and chain[idx].hp <= 0:
                idx += 1
            self._obstacle_idx[key] = idx
        inv = self._vis_inv
        stride = self._vis_stride
        self._structure_cells: dict[str, dict[int, list[tuple[float, float]]]] = {}
        for team in TEAMS:
            cells: dict[int, list[tuple[float, float]]] = {}
            for n in self.structures.nodes.values():
                if n.team == team and not n.destroyed:
                    key = int(n.x * inv) * stride + int(n.y * inv)
                    cells.setdefault(key, []).append((n.x, n.y))
            self._structure_cells[team] = cells

    # -- lookups ---------------------------------------------------------

    def unit(self, unit_id: str):
        return self.units.get(unit_id)

    def hero_by_id(self, hero_id: str) -> HeroState:
        try:
            return self.hero_index[hero_id]
        except KeyError:
            raise KeyError(f"unknown hero id: {hero_id}") from None

    def heroes_of(self, team: str) -> list[HeroState]:
        return [h for h in self.heroes if h.team == team]

    def team_gold_earned(self, team: str) -> int:
        return sum(h.wallet.earned for h in self.heroes if h.team == team)

    def team_xp(self, team: str) -> int:
        return sum(h.xp for h in self.heroes if h.team == team)

    @property
    def phase_clock(self) -> float:
        return self.tick / self.tick_rate

    def reseed(self, seed: int) -> None:
        """Fan the seed out into named per-team, per-purpose streams."""
        self.rng = {}
        for team in (*TEAMS, "NEUTRAL"):
            self.rng[f"crit:{team}"] = stream(seed, f"crit:{team}")
            self.rng[f"creep:{team}"] = stream(seed, f"creep:{team}")

    def clone(self) -> "WorldState":
        w = WorldState.__new__(WorldState)
        w.config = self.config
        w.ruleset = self.ruleset
        w.tick = self.tick
        w.tick_rate = self.tick_rate
        w.winner = self.winner
        w.geometry = self.geometry
        w.structures = self.structures.clone()
        w.catalog = self.catalog
        w.inventory_slots = self.inventory_slots
        w.sell_refund = self.sell_refund
        w.creep_seq = self.creep_seq
        w.heroes = [h.clone() for h in self.heroes]
        w.creeps = [c.clone() for c in self.creeps]
        w.camps = [c.clone() for c in self.camps]
        w.camp_sites = self.camp_sites
        w.hero_index = {h.id: h for h in w.heroes}
        w.units = {}
        for h in w.heroes:
            if h.alive:
                w.units[h.id] = h
        for c in w.creeps:
            w.units[c.id] = c
        w.recently_dead = dict(self.recently_dead)
        w.visible = {t: set(s) for t, s in self.visible.items()}
        w.last_seen = {t: dict(d) for t, d in self.last_seen.items()}
        w.lanes_met = dict(self.lanes_met)
        w.structures_destroyed_by = dict(self.structures_destroyed_by)
        w.team_kills = dict(self.team_kills)
        w._pending_structure_kills = []
        w.rng = {}
        for name, r in self.rng.items():
            r2 = Random()
            r2.setstate(r.getstate())
            w.rng[name] = r2
        w._rebuild_caches()
        refresh_visibility(w)
        return w


def build_world(config: MatchConfig) -> WorldState:
    return WorldState(config)


# -- visibility ----------------------------------------------------------

def refresh_visibility(world: WorldState) -> None:
    """Recompute per-team visible enemy sets and last-seen hero memory.

    A unit is visible to a team iff it lies within the vision radius of any
    living allied unit or standing allied structure. Sources and candidates
    are bucketed on a grid sized to the vision radius; candidate units are
    processed per cell so the 3x3 neighborhood gather happens once per
    cluster instead of once per unit.
    """
    vr = world.geometry.vision_radius
    vr2 = vr * vr
    inv = world._vis_inv
    stride = world._vis_stride
    t = world.tick

    # one pass: every unit lands in its own team's source grid and in the
    # candidate groups of every team that might see it
    src: dict[str, dict[int, list[tuple[float, float]]]] = {BLUE: {}, RED: {}}
    groups: dict[str, dict[int, list[Any]]] = {BLUE: {}, RED: {}}
    allied: dict[str, list[CreepState]] = {BLUE: [], RED: []}
    for h in world.heroes:
        if not h.alive:
            continue
        key = int(h.x * inv) * stride + int(h.y * inv)
        mine = src[h.team]
        cell = mine.get(key)
        if cell is None:
            mine[key] = [(h.x, h.y)]
        else:
            cell.append((h.x, h.y))
        foe_groups = groups[RED if h.team == BLUE else BLUE]
        g = foe_groups.get(key)
        if g is None:
            foe_groups[key] = [h]
        else:
            g.append(h)
    for c in world.creeps:
        if not c.alive:
            continue
        key = int(c.x * inv) * stride + int(c.y * inv)
        team = c.team
        if team == "NEUTRAL":
            for side in TEAMS:
                g = groups[side].get(key)
                if g is None:
                    groups[side][key] = [c]
                else:
                    g.append(c)
            continue
        allied[team].append(c)
        mine = src[team]
        cell = mine.get(key)
        if cell is None:
            mine[key] = [(c.x, c.y)]
        else:
            cell.append((c.x, c.y))
        foe_groups = groups[RED if team == BLUE else BLUE]
        g = foe_groups.get(key)
        if g is None:
            foe_groups[key] = [c]
        else:
            g.append(c)

    offsets = (0, -stride, stride, -1, 1, -stride - 1, -stride + 1, stride - 1, stride + 1)
    for team in TEAMS:
        unit_get = src[team].get
        struct_get = world._structure_cells[team].get
        visible: set[str] = set()
        vis_heroes: list[HeroState] = []
        vis_creeps: list[CreepState] = []
        seen = world.last_seen[team]
        for key, members in groups[team].items():
            candidates: list[tuple[float, float]] = []
            for off in offsets:
                cell = unit_get(key + off)
                if cell:
                    candidates.extend(cell)
                cell = struct_get(key + off)
                if cell:
                    candidates.extend(cell)
            if not candidates:
                continue
            for u in members:
                ux, uy = u.x, u.y
                for sx, sy in candidates:
                    dx = ux - sx
                    dy = uy - sy
                    if dx * dx + dy * dy <= vr2:
                        visible.add(u.id)
                        if isinstance(u, HeroState):
                            vis_heroes.append(u)
                            seen[u.id] = (ux, uy, t)
                        else:
                            vis_creeps.append(u)
                        break
        # hero/creep lists keep stable unit-id order for determinism
        vis_heroes.sort(key=lambda h: h.id)
        vis_creeps.sort(key=lambda c: c.id)
        world.visible[team] = visible
        world.visible_enemy_heroes[team] = vis_heroes
        world.visible_creeps[team] = vis_creeps
        world.allied_creeps[team] = allied[team]


# -- terminal ------------------------------------------------------------

def is_terminal(world: WorldState) -> str | None:
    """Winner team id, DRAW, or None while the match is live."""
    blue_down = world.structures.main_destroyed(BLUE)
    red_down = world.structures.main_destroyed(RED)
    if blue_down and red_down:
        return DRAW
    if blue_down:
        return RED
    if red_down:
        return BLUE
    if world.tick >= world.config.max_ticks:
        blue_alive = world.structures.alive_count(BLUE)
        red_alive = world.structures.alive_count(RED)
        if blue_alive == red_alive:
            return DRAW
        return BLUE if blue_alive > red_alive else RED
    return None


def _attack_cooldown(tick_rate: int, attack_speed: float) -> int:
    return max(1, round(tick_rate / attack_speed))


def _step_toward(unit, tx: float, ty: float, step: float, geo: MapGeometry) -> None:
    dx = tx - unit.x
    dy = ty - unit.y
    d2 = dx * dx + dy * dy
    if d2 <= step * step:
        unit.x, unit.y = geo.clamp(tx, ty)
        return
    d = math.sqrt(d2)
    unit.x, unit.y = geo.clamp(unit.x + dx / d * step, unit.y + dy / d * step)


def advance_tick(world: WorldState, actions: dict[str, Any]) -> tuple[WorldState, list[ev.Event]]:
    """Advance one tick, resolving the submitted per-hero actions.

    Returns the (mutated) successor world and the events emitted this tick.
    Malformed actions degrade to Idle with an InvalidAction event; the
    simulation itself never aborts mid-match.
    """
    if world.winner is not None:
        raise RuntimeError("match already decided; advance_tick on terminal world")
    from .agents import Action  # agents layers on top of world

    t = world.tick + 1
    rs = world.ruleset
    geo = world.geometry
    out: list[ev.Event] = []
    units = world.units

    # -- intake: normalize to (hero, action) in fixed hero-id order --------
    ordered: list[tuple[HeroState, Any]] = []
    idle = Action.idle()
    for hero in world.heroes:
        act = actions.get(hero.id)
        if not hero.alive:
            if act is not None and act.kind != "idle":
                out.append(ev.Event(t, ev.INVALID_ACTION, actor=hero.id,
                                    data={"reason": "actor_dead", "action": act.kind}))
            continue
        if act is None:
            act = idle
        elif act.kind == "attack_unit":
            tid = act.target_id
            if tid not in units:
                if tid in world.recently_dead:
                    act = idle   # stale target from last tick's observation
                else:
                    out.append(ev.Event(t, ev.INVALID_ACTION, actor=hero.id, target=tid,
                                        data={"reason": "unknown_unit", "action": act.kind}))
                    act = idle
        elif act.kind == "attack_structure":
            if act.target_id not in world.structures.nodes:
                out.append(ev.Event(t, ev.INVALID_ACTION, actor=hero.id, target=act.target_id,
                                    data={"reason": "unknown_structure", "action": act.kind}))
                act = idle
        elif act.kind == "move" and not geo.in_bounds(act.x, act.y):
            out.append(ev.Event(t, ev.INVALID_ACTION, actor=hero.id,
                                data={"reason": "out_of_bounds", "action": act.kind}))
            act = idle
        ordered.append((hero, act))
    if actions:
        hero_ids = world._hero_id_set
        extras = sorted(k for k in actions if k not in hero_ids)
        for extra in extras:
            out.append(ev.Event(t, ev.INVALID_ACTION, actor=extra,
                                data={"reason": "unknown_unit", "action": actions[extra].kind}))

    # -- damage buffers ----------------------------------------------------
    unit_damage: list[tuple[Any, Any, float, float, str, bool]] = []
    structure_damage: list[tuple[Any, Any, float]] = []

    def flush_unit_damage() -> None:
        turrets = world._turret_list
        for attacker, target, raw, mitig, dtype, crit in unit_damage:
            ts = target.stats
            lost = ts.hp if mitig > ts.hp else mitig
            ts.hp -= lost
            data = {"raw": raw, "dtype": dtype}
            if crit:
                data["crit"] = True
            out.append(ev.Event(t, ev.DAMAGE, actor=attacker.id, target=target.id,
                                amount=mitig, data=data))
            target_is_hero = isinstance(target, HeroState)
            attacker_is_hero = isinstance(attacker, HeroState)
            if lost > 0.0:
                target.last_hit_by = attacker.id
            if target_is_hero:
                target.recall_at = None
                target.damage_taken += mitig
                if attacker_is_hero:
                    target.hero_damage_taken += mitig
                    target.recent_damagers.append((t, attacker.id))
                    # aggro: turrets protect allied heroes inside their radius
                    for node in turrets:
                        if node.team == target.team and node.hp > 0:
                            dx = target.x - node.x
                            dy = target.y - node.y
                            if dx * dx + dy * dy <= node.attack_range * node.attack_range:
                                node.aggro_id = attacker.id
                                node.scan_at = t
            elif target.kind == "jungle" and attacker.team != "NEUTRAL":
                target.target_id = attacker.id
            if attacker_is_hero:
                attacker.damage_dealt += mitig
                if target_is_hero:
                    attacker.hero_damage_dealt += mitig
        unit_damage.clear()

    def flush_structure_damage() -> None:
        for attacker, node, dmg in structure_damage:
            applied = node.hp if dmg > node.hp else dmg
            was_alive = node.hp > 0
            node.hp -= applied
            out.append(ev.Event(t, ev.DAMAGE, actor=attacker.id, target=node.id,
                                amount=applied, data={"raw": dmg, "dtype": "structure"}))
            if isinstance(attacker, HeroState):
                attacker.damage_dealt += applied
                attacker.structure_damage_dealt += applied
            if was_alive and node.hp <= 0:
                world._pending_structure_kills.append((node, attacker.team))
        structure_damage.clear()

    # ======================= phase 1: movement ============================
    recall_ticks = int(rs["combat"]["recall_channel_ticks"])
    struct_radius = rs["combat"]["structure_hit_radius"]
    for hero, act in ordered:
        if hero.stun_until > t:   # stunned: everything idles
            continue
        kind = act.kind
        if kind != "recall" and hero.recall_at is not None:
            hero.recall_at = None   # any other action cancels the channel
        if kind == "move":
            _step_toward(hero, act.x, act.y, hero.stats.move_speed / world.tick_rate, geo)
        elif kind == "attack_unit":
            target = units.get(act.target_id)
            if target is not None and target.alive:
                dx = target.x - hero.x
                dy = target.y - hero.y
                r = hero.stats.attack_range
                if dx * dx + dy * dy > r * r:
                    _step_toward(hero, target.x, target.y,
                                 hero.stats.move_speed / world.tick_rate, geo)
        elif kind == "attack_structure":
            node = world.structures.nodes[act.target_id]
            if not node.destroyed:
                dx = node.x - hero.x
                dy = node.y - hero.y
                r = hero.stats.attack_range + struct_radius
                if dx * dx + dy * dy > r * r:
                    _step_toward(hero, node.x, node.y,
                                 hero.stats.move_speed / world.tick_rate, geo)
        elif kind == "recall":
            if hero.recall_at is None:
                hero.recall_at = t + recall_ticks
            elif t >= hero.recall_at:
                bx, by = geo.base_center[hero.team]
                sign = 3.0 if hero.team == BLUE else -3.0
                hero.x, hero.y = geo.clamp(bx + sign, by + sign)
                hero.recall_at = None
                out.append(ev.Event(t, ev.RECALL, actor=hero.id))
        elif kind == "buy":
            try:
                out.append(eco.buy_item(world, hero, act.target_id, t))
            except ShopError as exc:
                out.append(ev.Event(t, ev.INVALID_ACTION, actor=hero.id, target=act.target_id,
                                    data={"reason": type(exc).__name__, "action": "buy"}))
        elif kind == "sell":
            try:
                out.append(eco.sell_item(world, hero, act.slot, t))
            except ShopError as exc:
                out.append(ev.Event(t, ev.INVALID_ACTION, actor=hero.id,
                                    data={"reason": type(exc).__name__, "action": "sell"}))

    # ======================= phase 2: ability casts =======================
    pending_stuns: list[tuple[Any, int]] = []
    pending_heals: list[tuple[HeroState, Any, float]] = []
    pending_dashes: list[tuple[HeroState, float, float, float]] = []
    for hero, act in ordered:
        if act.kind != "cast" or hero.stats.hp <= 0 or hero.stun_until > t:
            continue

        def invalid(reason: str) -> None:
            out.append(ev.Event(t, ev.INVALID_ACTION, actor=hero.id,
                                data={"reason": reason, "action": "cast", "slot": act.slot}))

        if act.slot < 0 or act.slot >= len(hero.abilities):
            invalid("bad_slot")
            continue
        ability = hero.abilities[act.slot]
        if hero.ability_ready[act.slot] > t:
            invalid("on_cooldown")
            continue
        if hero.stats.mana < ability.mana_cost:
            invalid("insufficient_mana")
            continue
        arch = ability.archetype
        if arch in ("Nuke", "Stun"):
            target = units.get(act.target_id) if act.target_id else None
            if target is None or not target.alive or target.stats.hp <= 0:
                invalid("bad_target")
                continue
            if target.team == hero.team:
                invalid("target_allied")
                continue
            dx = target.x - hero.x
            dy = target.y - hero.y
            if dx * dx + dy * dy > ability.range * ability.range:
                invalid("out_of_range")
                continue
            unit_damage.append((hero, target, ability.power,
                                mitigate(ability.power, target.stats.magic_resist),
                                "magic", False))
            if arch == "Stun":
                pending_stuns.append((target, t + round(ability.stun_duration * world.tick_rate)))
        elif arch == "AoE":
            px, py = act.x, act.y
            if not geo.in_bounds(px, py):
                invalid("out_of_bounds")
                continue
            dx = px - hero.x
            dy = py - hero.y
            if dx * dx + dy * dy > ability.range * ability.range:
                invalid("out_of_range")
                continue
            rad2 = ability.radius * ability.radius
            for other in world.heroes:
                if other.team != hero.team and other.alive and other.stats.hp > 0:
                    ddx = other.x - px
                    ddy = other.y - py
                    if ddx * ddx + ddy * ddy <= rad2:
                        unit_damage.append((hero, other, ability.power,
                                            mitigate(ability.power, other.stats.magic_resist),
                                            "magic", False))
            for creep in world.creeps:
                if creep.team != hero.team and creep.alive and creep.stats.hp > 0:
                    ddx = creep.x - px
                    ddy = creep.y - py
                    if ddx * ddx + ddy * ddy <= rad2:
                        unit_damage.append((hero, creep, ability.power,
                                            mitigate(ability.power, creep.stats.magic_resist),
                                            "magic", False))
        elif arch == "Heal":
            target = units.get(act.target_id) if act.target_id else hero
            if target is None or not target.alive or target.stats.hp <= 0:
                invalid("bad_target")
                continue
            if target.team != hero.team:
                invalid("target_hostile")
                continue
            dx = target.x - hero.x
            dy = target.y - hero.y
            if dx * dx + dy * dy > ability.range * ability.range:
                invalid("out_of_range")
                continue
            pending_heals.append((hero, target, ability.power))
        elif arch == "Dash":
            px, py = act.x, act.y
            if not geo.in_bounds(px, py):
                invalid("out_of_bounds")
                continue
            pending_dashes.append((hero, px, py, ability.range))
        hero.stats.mana -= ability.mana_cost
        hero.ability_ready[act.slot] = t + ability.cooldown_ticks
        out.append(ev.Event(t, ev.CAST, actor=hero.id, target=act.target_id,
                            data={"slot": act.slot, "archetype": arch}))
    flush_unit_damage()
    for target, until in pending_stuns:
        target.stun_until = max(target.stun_until, until)
        out.append(ev.Event(t, ev.STUN, target=target.id, amount=until))
    for healer, target, power in pending_heals:
        ts = target.stats
        healed = min(power, ts.max_hp - ts.hp)
        ts.hp += healed
        out.append(ev.Event(t, ev.HEAL, actor=healer.id, target=target.id, amount=healed))
    for hero, px, py, max_range in pending_dashes:
        dx = px - hero.x
        dy = py - hero.y
        d = math.hypot(dx, dy)
        if d > max_range:
            px = hero.x + dx / d * max_range
            py = hero.y + dy / d * max_range
        hero.x, hero.y = geo.clamp(px, py)

    # ======================= phase 3: basic attacks =======================
    deny_mode = world.config.deny_mode
    for hero, act in ordered:
        kind = act.kind
        if hero.stats.hp <= 0 or hero.stun_until > t:
            continue
        if kind == "attack_unit":
            target = units.get(act.target_id)
            if target is None or not target.alive:
                continue
            if target.team == hero.team:
                if not (deny_mode and isinstance(target, CreepState)):
                    out.append(ev.Event(t, ev.INVALID_ACTION, actor=hero.id, target=target.id,
                                        data={"reason": "friendly_fire", "action": "attack_unit"}))
                    continue
            if hero.next_attack_tick > t:
                continue
            dx = target.x - hero.x
            dy = target.y - hero.y
            r = hero.stats.attack_range
            if dx * dx + dy * dy > r * r:
                continue
            crit = False
            cc = hero.stats.crit_chance
            if cc > 0.0:
                crit = world.rng[f"crit:{hero.team}"].random() < cc
            raw = hero.stats.attack_damage * (CRIT_MULTIPLIER if crit else 1.0)
            unit_damage.append((hero, target, raw, mitigate(raw, target.stats.armor),
                                "physical", crit))
            hero.next_attack_tick = t + _attack_cooldown(world.tick_rate, hero.stats.attack_speed)
        elif kind == "attack_structure":
            node = world.structures.nodes[act.target_id]
            if node.destroyed:
                continue
            if node.team == hero.team:
                out.append(ev.Event(t, ev.INVALID_ACTION, actor=hero.id, target=node.id,
                                    data={"reason": "friendly_fire", "action": "attack_structure"}))
                continue
            if not world._attackable[node.id]:
                out.append(ev.Event(t, ev.INVALID_ACTION, actor=hero.id, target=node.id,
                                    data={"reason": "not_attackable", "action": "attack_structure"}))
                continue
            if hero.next_attack_tick > t:
                continue
            dx = node.x - hero.x
            dy = node.y - hero.y
            r = hero.stats.attack_range + struct_radius
            if dx * dx + dy * dy > r * r:
                continue
            structure_damage.append((hero, node, hero.stats.attack_damage))
            hero.next_attack_tick = t + _attack_cooldown(world.tick_rate, hero.stats.attack_speed)
    flush_unit_damage()
    flush_structure_damage()

    # ======================= phase 4: turret attacks ======================
    for node in world._turret_list:
        if node.hp <= 0 or node.next_attack_tick > t or node.scan_at > t:
            continue
        target_id = turret_acquire_target(node, world)
        if target_id is None:
            node.scan_at = t + 5   # idle turret: rescan at half-second cadence
            continue
        node.target_id = target_id
        target = units[target_id]
        raw = node.attack_damage
        unit_damage.append((node, target, raw, mitigate(raw, target.stats.armor),
                            "physical", False))
        node.next_attack_tick = t + node.attack_interval
    flush_unit_damage()

    # ======================= phase 5: creep AI ============================
    creep_cfg = rs["creeps"]
    aggro = creep_cfg["aggro_radius"]
    aggro2 = aggro * aggro
    jitter = creep_cfg["damage_jitter"]
    chase2 = (aggro + 4.0) * (aggro + 4.0)
    step = creep_cfg["move_speed"] / world.tick_rate
    attack_interval = creep_cfg["attack_interval_ticks"]
    # x+y grows monotonically along every lane path, so it serves as a cheap
    # progress proxy: marching creeps skip target scans while the opposing
    # front is provably out of aggro range.
    lane_units: dict[tuple[str, str], list[CreepState]] = {}
    front: dict[tuple[str, str], float] = {}
    for c in world.creeps:
        if c.alive and c.stats.hp > 0 and c.lane is not None:
            key = (c.lane, c.team)
            lst = lane_units.get(key)
            if lst is None:
                lane_units[key] = [c]
            else:
                lst.append(c)
            p = c.x + c.y
            cur = front.get(key)
            if c.team == BLUE:
                if cur is None or p > cur:
                    front[key] = p
            else:
                if cur is None or p < cur:
                    front[key] = p
    hero_lanes: dict[str, list[HeroState]] = {}
    for h in world.heroes:
        if h.alive and h.stats.hp > 0:
            region = geo.region_of(h.x, h.y)
            if region.kind == "lane":
                hero_lanes.setdefault(region.lane, []).append(h)
    scan_margin = aggro * 1.5

    creep_rng = {BLUE: world.rng["creep:BLUE"].random,
                 RED: world.rng["creep:RED"].random,
                 "NEUTRAL": world.rng["creep:NEUTRAL"].random}
    units_get = units.get
    lanes_met = world.lanes_met
    obstacles = world._creep_obstacles
    obstacle_idx = world._obstacle_idx
    attackable = world._attackable
    reach2 = (aggro + 2.0) * (aggro + 2.0)
    step2 = step * step
    for creep in world.creeps:
        cs = creep.stats
        if not creep.alive or cs.hp <= 0 or creep.stun_until > t:
            continue
        if creep.kind == "jungle":
            _jungle_creep_ai(world, creep, t, step, unit_damage, jitter, attack_interval)
            continue
        cx, cy = creep.x, creep.y
        foe = RED if creep.team == BLUE else BLUE
        target = units_get(creep.target_id) if creep.target_id else None
        if target is not None:
            if not target.alive or target.stats.hp <= 0:
                target = None
            else:
                dx = target.x - cx
                dy = target.y - cy
                if dx * dx + dy * dy > chase2:
                    target = None
        if target is None:
            creep.target_id = None
            best_d2 = aggro2
            heroes_here = hero_lanes.get(creep.lane)
            foe_front = front.get((creep.lane, foe))
            if foe_front is not None and (
                (foe_front - (cx + cy)) if creep.team == BLUE else ((cx + cy) - foe_front)
            ) <= scan_margin:
                for cand in lane_units.get((creep.lane, foe), ()):
                    dx = cand.x - cx
                    dy = cand.y - cy
                    d2 = dx * dx + dy * dy
                    if d2 < best_d2:
                        best_d2 = d2
                        target = cand
            if heroes_here:
                for cand in heroes_here:
                    if cand.team != foe:
                        continue
                    dx = cand.x - cx
                    dy = cand.y - cy
                    d2 = dx * dx + dy * dy
                    if d2 < best_d2:
                        best_d2 = d2
                        target = cand
            if target is not None:
                creep.target_id = target.id
        if target is not None:
            dx = target.x - cx
            dy = target.y - cy
            r = cs.attack_range
            if dx * dx + dy * dy <= r * r:
                if creep.next_attack_tick <= t:
                    u = creep_rng[creep.team]()
                    raw = cs.attack_damage * (1.0 + jitter * (2.0 * u - 1.0))
                    unit_damage.append((creep, target, raw,
                                        mitigate(raw, target.stats.armor), "physical", False))
                    creep.next_attack_tick = t + attack_interval
                if not lanes_met[creep.lane] and isinstance(target, CreepState):
                    lanes_met[creep.lane] = True
                    out.append(ev.Event(t, ev.CREEPS_MEET, data={"lane": creep.lane}))
            else:
                _step_toward(creep, target.x, target.y, step, geo)
            continue
        # nothing to fight: siege the next obstacle structure or march on
        okey = (creep.team, creep.lane)
        chain = obstacles[okey]
        idx = obstacle_idx[okey]
        node = chain[idx] if idx < len(chain) else None
        if node is not None:
            dx = node.x - cx
            dy = node.y - cy
            d2 = dx * dx + dy * dy
            if d2 > reach2 or not attackable[node.id]:
                node = None
        if node is not None:
            r = cs.attack_range + struct_radius
            if d2 <= r * r:
                if creep.next_attack_tick <= t:
                    u = creep_rng[creep.team]()
                    raw = cs.attack_damage * (1.0 + jitter * (2.0 * u - 1.0))
                    structure_damage.append((creep, node, raw))
                    creep.next_attack_tick = t + attack_interval
            else:
                _step_toward(creep, node.x, node.y, step, geo)
            continue
        wp = creep.waypoints
        if creep.waypoint_index < len(wp):
            tx, ty = wp[creep.waypoint_index]
            dx = tx - cx
            dy = ty - cy
            d2 = dx * dx + dy * dy
            if d2 <= step2:
                creep.x, creep.y = tx, ty
                creep.waypoint_index += 1
            else:
                d = math.sqrt(d2)
                creep.x = cx + dx / d * step
                creep.y = cy + dy / d * step
    flush_unit_damage()
    flush_structure_damage()

    # ======================= phase 6: deaths and bounties =================
    structures_fell = bool(world._pending_structure_kills)
    _resolve_deaths(world, t, out)
    if structures_fell:
        world._refresh_structure_caches()

    # ======================= phase 7: spawns and respawns =================
    cfg = world.config
    if cfg.spawn_waves and t % creep_cfg["wave_period_ticks"] == 1:
        for lane in cfg.active_lanes:
            for team in TEAMS:
                creeps = eco.wave_creeps(world, lane, team, t)
                for c in creeps:
                    world.creeps.append(c)
                    world.units[c.id] = c
                out.append(ev.Event(t, ev.SPAWN_WAVE, data={"lane": lane, "team": team,
                                                            "count": len(creeps)}))
    for camp in world.camps:
        if camp.respawn_at is not None and t >= camp.respawn_at:
            for c in eco.spawn_camp_creeps(world, camp, t):
                world.creeps.append(c)
                world.units[c.id] = c
    for hero in world.heroes:
        if not cfg.respawns_enabled:
            break
        if not hero.alive and hero.respawn_at is not None and t >= hero.respawn_at:
            hero.alive = True
            hero.respawn_at = None
            hero.stats.hp = hero.stats.max_hp
            hero.stats.mana = hero.stats.max_mana
            bx, by = geo.base_center[hero.team]
            sign = 1.0 if hero.team == BLUE else -1.0
            idx = int(hero.id[1:])
            hero.x, hero.y = geo.clamp(bx + sign * (3.0 + 1.6 * idx), by + sign * 3.0)
            world.units[hero.id] = hero
            out.append(ev.Event(t, ev.RESPAWN, actor=hero.id))

    # ============== phase 8: income, regeneration, buff expiry ============
    eco_cfg = rs["economy"]
    if t >= eco_cfg["passive_income_start_ticks"] and t % eco_cfg["passive_income_period_ticks"] == 0:
        for hero in world.heroes:
            hero.wallet.credit(1)
    fountain = rs["combat"]["fountain_regen_multiplier"]
    base_r2 = geo.base_radius * geo.base_radius
    dt = 1.0 / world.tick_rate
    for hero in world.heroes:
        if not hero.alive:
            continue
        s = hero.stats
        if s.hp < s.max_hp or s.mana < s.max_mana:
            bx, by = geo.base_center[hero.team]
            dx = hero.x - bx
            dy = hero.y - by
            mult = fountain if dx * dx + dy * dy <= base_r2 else 1.0
            if s.hp < s.max_hp:
                s.hp = min(s.max_hp, s.hp + s.hp_regen * mult * dt)
            if s.mana < s.max_mana:
                s.mana = min(s.max_mana, s.mana + s.mana_regen * mult * dt)
        if hero.buffs:
            expired = [b for b in hero.buffs if b.expires_at <= t]
            if expired:
                hero.buffs = [b for b in hero.buffs if b.expires_at > t]
                hero.recompute_stats()
                for b in expired:
                    out.append(ev.Event(t, ev.BUFF_EXPIRE, actor=hero.id, target=b.source))

    # ======================= phase 9: bookkeeping =========================
    if t % 20 == 0 and world.recently_dead:
        cutoff = t - _STALE_GRACE_TICKS
        world.recently_dead = {k: v for k, v in world.recently_dead.items() if v >= cutoff}
    world.tick = t
    refresh_visibility(world)

    # ======================= phase 10: terminal check =====================
    winner = is_terminal(world)
    if t % rs["ticks"]["snapshot_period"] == 0 or winner is not None:
        out.append(make_snapshot_event(world))
    if winner is not None:
        world.winner = winner
        out.append(ev.Event(t, ev.TERMINAL, data={
            "winner": winner,
            "structures": {team: world.structures.alive_count(team) for team in TEAMS},
        }))
    return world, out


def _jungle_creep_ai(world, creep, t, step, unit_damage, jitter, attack_interval) -> None:
    """Neutral camp behavior: hold home, retaliate, leash back and reset."""
    cs = creep.stats
    hx, hy = creep.home
    dx_home = creep.x - hx
    dy_home = creep.y - hy
    if dx_home * dx_home + dy_home * dy_home > 144.0:   # leashed: walk home, reset
        creep.target_id = None
        _step_toward(creep, hx, hy, step, world.geometry)
        if abs(creep.x - hx) < 0.5 and abs(creep.y - hy) < 0.5:
            cs.hp = cs.max_hp
        return
    target = world.units.get(creep.target_id) if creep.target_id else None
    if target is None or not target.alive or target.stats.hp <= 0:
        creep.target_id = None
        return
    dx = target.x - creep.x
    dy = target.y - creep.y
    r = cs.attack_range
    if dx * dx + dy * dy <= r * r:
        if creep.next_attack_tick <= t:
            u = world.rng["creep:NEUTRAL"].random()
            raw = cs.attack_damage * (1.0 + jitter * (2.0 * u - 1.0))
            unit_damage.append((creep, target, raw, mitigate(raw, target.stats.armor),
                                "physical", False))
            creep.next_attack_tick = t + attack_interval
    else:
        _step_toward(creep, target.x, target.y, step, world.geometry)


def _resolve_deaths(world: WorldState, t: int, out: list[ev.Event]) -> None:
    rs = world.ruleset
    eco_cfg = rs["economy"]
    share_radius2 = eco_cfg["xp_share_radius"] ** 2
    level_cap = int(eco_cfg["level_cap"])

    # structures were flagged during damage application
    if world._pending_structure_kills:
        s_cfg = rs["structures"]
        for node, killer_team in world._pending_structure_kills:
            node.target_id = None
            node.aggro_id = None
            world.structures_destroyed_by[killer_team] += 1
            out.append(ev.Event(t, ev.STRUCTURE_DESTROYED, target=node.id,
                                data={"by": killer_team, "kind": node.kind}))
            if node.kind == "LaneTurret":
                bounty = int(s_cfg["lane_turret_bounty"])
            elif node.kind == "BaseTurret":
                bounty = int(s_cfg["base_turret_bounty"])
            else:
                bounty = 0
            if bounty and killer_team in TEAMS:
                team_heroes = world.heroes_of(killer_team)
                share = bounty // len(team_heroes)
                rem = bounty - share * len(team_heroes)
                for i, h in enumerate(team_heroes):
                    h.wallet.credit(share + (rem if i == 0 else 0))
        world._pending_structure_kills.clear()

    def killer_of(victim) -> Any:
        src = victim.last_hit_by
        if src is None:
            return None
        unit = world.units.get(src)
        if unit is None:
            unit = world.hero_index.get(src)   # may have died the same tick
        return unit

    dead_creeps = [c for c in world.creeps if c.alive and c.stats.hp <= 0]
    for creep in dead_creeps:
        creep.alive = False
        killer = killer_of(creep)
        killer_is_hero = isinstance(killer, HeroState)
        denied = killer_is_hero and killer.team == creep.team
        bounty = 0
        if killer_is_hero and not denied:
            bounty = creep.bounty
            killer.wallet.credit(bounty)
            killer.last_hits += 1
        data: dict[str, Any] = {"victim_kind": creep.kind}
        if denied:
            killer.denies += 1
            data["denied"] = True
        out.append(ev.Event(t, ev.KILL, actor=creep.last_hit_by, target=creep.id,
                            amount=bounty, data=data))
        # xp flows to the creep's enemies near the death spot (neutral camps
        # pay the killer's team); denies suppress gold only
        if creep.team == "NEUTRAL":
            xp_team = killer.team if killer_is_hero else None
        else:
            xp_team = enemy(creep.team)
        if xp_team is not None:
            nearby = [h for h in world.heroes
                      if h.team == xp_team and h.alive
                      and (h.x - creep.x) ** 2 + (h.y - creep.y) ** 2 <= share_radius2]
            if nearby:
                share = creep.xp_value // len(nearby)
                if share:
                    for h in nearby:
                        out.extend(eco.grant_xp(h, share, t, level_cap))
        if creep.camp_id is not None:
            for camp in world.camps:
                if camp.id == creep.camp_id:
                    camp.creep_ids.remove(creep.id)
                    if camp.cleared:
                        camp.respawn_at = t + int(rs["jungle"]["respawn_ticks"])
                        if camp.buff is not None and killer_is_hero and killer.alive:
                            killer.buffs.append(ActiveBuff(
                                source=camp.id, deltas=camp.buff["deltas"],
                                expires_at=t + int(camp.buff["duration_ticks"])))
                            killer.recompute_stats()
                            out.append(ev.Event(t, ev.BUFF_GAIN, actor=killer.id,
                                                target=camp.id,
                                                data={"deltas": camp.buff["deltas"]}))
                    break
        del world.units[creep.id]
        world.recently_dead[creep.id] = t
    if dead_creeps:
        world.creeps = [c for c in world.creeps if c.alive]

    for hero in world.heroes:
        if not hero.alive or hero.stats.hp > 0:
            continue
        hero.alive = False
        killer = killer_of(hero)
        killer_is_hero = isinstance(killer, HeroState) and killer.team != hero.team
        bounty = 0
        assists: list[str] = []
        if killer_is_hero:
            window = t - int(eco_cfg["assist_window_ticks"])
            seen: set[str] = set()
            for tick_hit, hid in hero.recent_damagers:
                if tick_hit >= window and hid != killer.id and hid not in seen:
                    helper = world.hero_index.get(hid)
                    if helper is not None and helper.team == killer.team:
                        seen.add(hid)
                        assists.append(hid)
            bounty = int(eco_cfg["hero_kill_bounty"])
            killer.wallet.credit(bounty)
            killer.kills += 1
            world.team_kills[killer.team] += 1
            if assists:
                pool = math.floor(eco_cfg["assist_share"] * bounty)
                each = pool // len(assists)
                for hid in assists:
                    helper = world.hero_index[hid]
                    helper.assists += 1
                    if each:
                        helper.wallet.credit(each)
            xp_amount = int(eco_cfg["hero_kill_xp_base"]
                            + eco_cfg["hero_kill_xp_per_level"] * hero.stats.level)
            nearby = [h for h in world.heroes
                      if h.team == killer.team and h.alive
                      and (h.x - hero.x) ** 2 + (h.y - hero.y) ** 2 <= share_radius2]
            if nearby:
                share = xp_amount // len(nearby)
                if share:
                    for h in nearby:
                        out.extend(eco.grant_xp(h, share, t, level_cap))
        hero.deaths += 1
        delay = death_timer(hero.stats.level, t / world.tick_rate, rs["combat"])
        hero.respawn_at = t + int(round(delay * world.tick_rate))
        hero.recent_damagers.clear()
        hero.recall_at = None
        hero.stun_until = 0
        if hero.buffs:
            for b in hero.buffs:
                out.append(ev.Event(t, ev.BUFF_EXPIRE, actor=hero.id, target=b.source))
            hero.buffs = []
            hero.recompute_stats()
        world.units.pop(hero.id, None)
        world.recently_dead[hero.id] = t
        out.append(ev.Event(t, ev.KILL, actor=hero.last_hit_by, target=hero.id,
                            amount=bounty,
                            data={"victim_kind": "hero", "assists": assists,
                                  "respawn_at": hero.respawn_at}))


def make_snapshot_event(world: WorldState) -> ev.Event:
    """Periodic telemetry record; hero columns are
    [id, alive, level, items, x, y, hp, gold, xp]."""
    heroes = [
        [h.id, 1 if h.alive else 0, h.stats.level, len(h.items),
         round(h.x, 2), round(h.y, 2), round(h.stats.hp, 1),
         h.wallet.gold, h.xp]
        for h in world.heroes
    ]
    return ev.Event(world.tick, ev.SNAPSHOT, data={
        "team_gold": {team: world.team_gold_earned(team) for team in TEAMS},
        "team_xp": {team: world.team_xp(team) for team in TEAMS},
        "team_kills": dict(world.team_kills),
        "structures_alive": {team: world.structures.alive_count(team) for team in TEAMS},
        "structures_destroyed_by": dict(world.structures_destroyed_by),
        "heroes": heroes,
    })
