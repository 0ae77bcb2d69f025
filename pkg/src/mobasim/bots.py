"""Baseline scripted agents.

Every bot is a deterministic policy over Observations: laning/jungling bots
exercise farming and buffs, the five strategy bots (team fight, pickoff,
split push, sieging, team push) generate the labelled mid-game corpora the
strategy classifier is validated against. OracleLastHitter is test
instrumentation: it reads engine state directly (the one sanctioned fog
exception) to compute exact killing-blow windows.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

from .agents import Action, Agent, Observation
from .mapgraph import LANES, enemy, node_id

if TYPE_CHECKING:
    from .world import WorldState

# lane assignment by role, with an index fallback when roles are unset
ROLE_LANES = {"TopLaner": "TOP", "MidLaner": "MID", "Carry": "BOT",
              "Support": "BOT", "Jungler": "MID"}
INDEX_LANES = ("TOP", "MID", "BOT", "BOT", "MID")

# priority order for the simple shopping routine
SHOP_PRIORITY = ("longsword", "chainmail", "swiftblade", "vital_pendant",
                 "warhammer", "bulwark", "stormbow", "heart_of_oak")


def _assigned_lane(obs: Observation) -> str:
    hero = obs.hero
    if hero.role in ROLE_LANES:
        return ROLE_LANES[hero.role]
    return INDEX_LANES[int(hero.id[1:]) % len(INDEX_LANES)]


def _in_own_base(obs: Observation) -> bool:
    bx, by = obs.geometry.base_center[obs.team]
    return math.hypot(obs.hero.x - bx, obs.hero.y - by) <= obs.geometry.base_radius


def _shop_action(obs: Observation) -> Action | None:
    hero = obs.hero
    if len(hero.items) >= 6:
        return None
    owned = {it.id for it in hero.items}
    for name in SHOP_PRIORITY:
        if name in owned:
            continue
        item = obs.catalog[name]
        if hero.wallet.gold >= item.cost:
            return Action.buy(name)
    return None


def _cast_on(obs: Observation, target_id: str, tx: float, ty: float) -> Action | None:
    """First ready damaging ability that reaches the target, if any."""
    hero = obs.hero
    for slot, ability in enumerate(hero.abilities):
        if ability.archetype not in ("Nuke", "Stun"):
            continue
        if hero.ability_ready[slot] > obs.tick + 1 or hero.stats.mana < ability.mana_cost:
            continue
        if math.hypot(tx - hero.x, ty - hero.y) <= ability.range:
            return Action.cast(slot, target_id=target_id)
    return None


def _next_enemy_structure(obs: Observation, lane: str) -> str | None:
    """The next standing, attackable structure along a push path."""
    foe = enemy(obs.team)
    chain = [node_id(foe, lane, t) for t in (1, 2, 3)]
    chain += [node_id(foe, "BASE", 1), node_id(foe, "BASE", 2), node_id(foe, "MAIN", 0)]
    for sid in chain:
        node = obs.structures.nodes[sid]
        if not node.destroyed:
            return sid if obs.structures.is_attackable(sid) else None
    return None


class IdleBot(Agent):
    name = "idle"


class LanerBot(Agent):
    """Holds its lane, last-hits creeps, shops and retreats when low.

    Attacks a creep only when one basic attack would finish it, the
    classic last-hit rule.
    """

    name = "laner"

    def act(self, obs: Observation) -> Action:
        hero = obs.hero
        if _in_own_base(obs):
            buy = _shop_action(obs)
            if buy is not None:
                return buy
        if hero.stats.hp < 0.3 * hero.stats.max_hp and not _in_own_base(obs):
            return Action.recall()
        lane = _assigned_lane(obs)
        geo = obs.geometry
        my_damage = hero.stats.attack_damage
        rng = hero.stats.attack_range
        best = None
        best_hp = math.inf
        for creep in obs.visible_enemy_creeps:
            if creep.lane != lane:
                continue
            hp = creep.stats.hp
            if hp <= my_damage and hp < best_hp:
                if math.hypot(creep.x - hero.x, creep.y - hero.y) <= rng:
                    best, best_hp = creep, hp
        if best is not None and hero.next_attack_tick <= obs.tick + 1:
            return Action.attack_unit(best.id)
        # hold just behind the allied creep front
        front = None
        for creep in obs.allied_creeps:
            if creep.lane != lane:
                continue
            p = geo.lane_progress(lane, creep.x, creep.y)
            rel = p if obs.team == "BLUE" else 1.0 - p
            if front is None or rel > front:
                front = rel
        hold = 0.32 if front is None else max(0.05, front - 0.02)
        frac = hold if obs.team == "BLUE" else 1.0 - hold
        hx, hy = geo.point_along_lane(lane, frac)
        if math.hypot(hx - hero.x, hy - hero.y) > 1.5:
            return Action.move(hx, hy)
        return Action.idle()


class JunglerBot(Agent):
    """Farms neutral camps on a fixed circuit and opportunistically attacks
    low visible enemy heroes."""

    name = "jungler"

    def act(self, obs: Observation) -> Action:
        hero = obs.hero
        if _in_own_base(obs):
            buy = _shop_action(obs)
            if buy is not None:
                return buy
        if hero.stats.hp < 0.3 * hero.stats.max_hp:
            return Action.recall() if not _in_own_base(obs) else Action.idle()
        # gank anything weak that wanders into sight
        for e in obs.visible_enemy_heroes:
            if e.stats.hp < 0.45 * e.stats.max_hp and math.hypot(e.x - hero.x, e.y - hero.y) < 20:
                cast = _cast_on(obs, e.id, e.x, e.y)
                if cast is not None:
                    return cast
                return Action.attack_unit(e.id)
        target = None
        best_d = math.inf
        for creep in obs.visible_enemy_creeps:
            if creep.team != "NEUTRAL":
                continue
            d = math.hypot(creep.x - hero.x, creep.y - hero.y)
            if d < best_d:
                target, best_d = creep, d
        if target is not None:
            return Action.attack_unit(target.id)
        own_sites = [s for s in obs.camp_sites if s[3] == obs.team]
        if not own_sites:
            return Action.idle()
        idx = (obs.tick // 400) % len(own_sites)
        _sid, sx, sy, _team = own_sites[idx]
        if math.hypot(sx - hero.x, sy - hero.y) > 1.0:
            return Action.move(sx, sy)
        return Action.idle()


def _push_action(obs: Observation, lane: str) -> Action:
    hero = obs.hero
    sid = _next_enemy_structure(obs, lane)
    rng = hero.stats.attack_range
    if sid is not None:
        node = obs.structures.nodes[sid]
        if math.hypot(node.x - hero.x, node.y - hero.y) <= rng + 1.5:
            return Action.attack_structure(sid)
    # clear whatever creeps stand in the way
    best = None
    best_d = rng
    for creep in obs.visible_enemy_creeps:
        if creep.team == "NEUTRAL":
            continue
        d = math.hypot(creep.x - hero.x, creep.y - hero.y)
        if d <= best_d:
            best, best_d = creep, d
    if best is not None:
        return Action.attack_unit(best.id)
    if sid is not None:
        node = obs.structures.nodes[sid]
        return Action.move(node.x, node.y)
    # lane cleared to the main but it is still locked: wait at its gates
    foe = enemy(obs.team)
    main = obs.structures.nodes[node_id(foe, "MAIN", 0)]
    return Action.move(main.x, main.y)


class PusherBot(Agent):
    """Team push: the whole team rushes one lane and razes structures."""

    name = "pusher"
    push_lane = "MID"

    def act(self, obs: Observation) -> Action:
        return _push_action(obs, self.push_lane)


class SplitPushBot(Agent):
    """Four heroes push mid together while one splits to the top lane."""

    name = "splitpush"

    def act(self, obs: Observation) -> Action:
        lane = "TOP" if int(obs.hero.id[1:]) == 4 else "MID"
        return _push_action(obs, lane)


class SiegeBot(Agent):
    """Structure-focused pressure that rotates lanes and refuses fights."""

    name = "siege"

    def act(self, obs: Observation) -> Action:
        hero = obs.hero
        lane = LANES[(obs.tick // 900) % 3]
        threats = [e for e in obs.visible_enemy_heroes
                   if math.hypot(e.x - hero.x, e.y - hero.y) <= 10.0]
        if len(threats) >= 2:
            bx, by = obs.geometry.base_center[obs.team]
            return Action.move(
                hero.x + (bx - hero.x) * 0.2, hero.y + (by - hero.y) * 0.2)
        sid = _next_enemy_structure(obs, lane)
        rng = hero.stats.attack_range
        if sid is not None:
            node = obs.structures.nodes[sid]
            if math.hypot(node.x - hero.x, node.y - hero.y) <= rng + 1.5:
                return Action.attack_structure(sid)
            best = None
            best_d = rng
            for creep in obs.visible_enemy_creeps:
                if creep.team == "NEUTRAL":
                    continue
                d = math.hypot(creep.x - hero.x, creep.y - hero.y)
                if d <= best_d:
                    best, best_d = creep, d
            if best is not None:
                return Action.attack_unit(best.id)
            return Action.move(node.x, node.y)
        frac = 0.45 if obs.team == "BLUE" else 0.55
        hx, hy = obs.geometry.point_along_lane(lane, frac)
        return Action.move(hx, hy)


class TeamFightBot(Agent):
    """Groups with allies and fights enemy heroes as a unit."""

    name = "teamfight"

    def act(self, obs: Observation) -> Action:
        hero = obs.hero
        enemies = obs.visible_enemy_heroes
        if enemies:
            # the same weighted features the team vote uses
            best = None
            best_score = -math.inf
            vision = obs.geometry.vision_radius
            max_dps = max(e.stats.attack_damage * e.stats.attack_speed for e in enemies)
            for e in enemies:
                frac = e.stats.hp / e.stats.max_hp
                dist = math.hypot(e.x - hero.x, e.y - hero.y)
                dps = e.stats.attack_damage * e.stats.attack_speed
                score = (0.5 * (1.0 - frac)
                         + 0.2 * max(0.0, 1.0 - dist / vision)
                         + 0.2 * (dps / max_dps if max_dps > 0 else 0.0)
                         + 0.1 * (1.0 if e.stun_until > obs.tick else 0.0))
                if score > best_score or (score == best_score and (best is None or e.id < best.id)):
                    best, best_score = e, score
            cast = _cast_on(obs, best.id, best.x, best.y)
            if cast is not None:
                return cast
            if math.hypot(best.x - hero.x, best.y - hero.y) <= hero.stats.attack_range:
                return Action.attack_unit(best.id)
            return Action.move(best.x, best.y)
        allies = [h for h in obs.allied_heroes if h.alive]
        if len(allies) > 1:
            cx = sum(h.x for h in allies) / len(allies)
            cy = sum(h.y for h in allies) / len(allies)
            if math.hypot(cx - hero.x, cy - hero.y) > 6.0:
                return Action.move(cx, cy)
        mx, my = obs.geometry.point_along_lane("MID", 0.5)
        if math.hypot(mx - hero.x, my - hero.y) > 2.0:
            return Action.move(mx, my)
        return Action.idle()


class PickoffBot(Agent):
    """Hunts isolated enemies in pairs; disengages from grouped opponents."""

    name = "pickoff"

    _patrol = ((0.35, 0.65), (0.5, 0.5), (0.65, 0.35), (0.5, 0.5))

    def act(self, obs: Observation) -> Action:
        hero = obs.hero
        idx = int(hero.id[1:])
        enemies = obs.visible_enemy_heroes
        crowd = [e for e in enemies if math.hypot(e.x - hero.x, e.y - hero.y) <= 10.0]
        if len(crowd) >= 3:
            bx, by = obs.geometry.base_center[obs.team]
            return Action.move(hero.x + (bx - hero.x) * 0.25, hero.y + (by - hero.y) * 0.25)
        # a target is isolated when at most one other enemy stands near it
        best = None
        best_key = None
        for e in enemies:
            near = sum(1 for o in enemies
                       if o.id != e.id and math.hypot(o.x - e.x, o.y - e.y) <= 12.0)
            if near <= 1:
                key = (e.stats.hp / e.stats.max_hp, e.id)
                if best_key is None or key < best_key:
                    best, best_key = e, key
        if best is not None:
            cast = _cast_on(obs, best.id, best.x, best.y)
            if cast is not None:
                return cast
            if math.hypot(best.x - hero.x, best.y - hero.y) <= hero.stats.attack_range:
                return Action.attack_unit(best.id)
            return Action.move(best.x, best.y)
        pair = idx // 2
        s = obs.geometry.size
        px, py = self._patrol[(obs.tick // 300 + pair) % len(self._patrol)]
        tx, ty = px * s, py * s
        if obs.team == "RED":
            tx, ty = s - tx, s - ty
        if math.hypot(tx - hero.x, ty - hero.y) > 2.0:
            return Action.move(tx, ty)
        return Action.idle()


class OracleLastHitter(Agent):
    """Engine-state oracle that secures every killing blow in its lane.

    Test instrumentation only: the match runner injects the live world so
    the bot can read exact creep hp instead of a fog-filtered view.
    """

    name = "oracle_laner"
    needs_world = True

    def __init__(self, hero_id: str, seed: int = 0):
        super().__init__(hero_id, seed)
        self.world: "WorldState | None" = None

    def bind_world(self, world: "WorldState") -> None:
        self.world = world

    def act(self, obs: Observation) -> Action:
        hero = obs.hero
        world = self.world
        assert world is not None, "runner must bind_world() first"
        lane = _assigned_lane(obs)
        foe = enemy(obs.team)
        rng = hero.stats.attack_range
        can_fire = hero.next_attack_tick <= obs.tick + 1
        best = None
        best_hp = math.inf
        nearest = None
        nearest_d = math.inf
        for creep in world.creeps:
            if creep.team != foe or creep.lane != lane or not creep.alive:
                continue
            d = math.hypot(creep.x - hero.x, creep.y - hero.y)
            if d < nearest_d:
                nearest, nearest_d = creep, d
            if creep.stats.hp < best_hp and d <= rng:
                best, best_hp = creep, creep.stats.hp
        if best is not None and can_fire:
            return Action.attack_unit(best.id)
        if nearest is not None and nearest_d > rng * 0.8:
            return Action.move(nearest.x, nearest.y)
        if nearest is None:
            frac = 0.40 if obs.team == "BLUE" else 0.60
            hx, hy = obs.geometry.point_along_lane(lane, frac)
            if math.hypot(hx - hero.x, hy - hero.y) > 1.5:
                return Action.move(hx, hy)
        return Action.idle()


REGISTRY: dict[str, type[Agent]] = {
    bot.name: bot
    for bot in (IdleBot, LanerBot, JunglerBot, PusherBot, SplitPushBot,
                SiegeBot, TeamFightBot, PickoffBot, OracleLastHitter)
}


def make_agent(name: str, hero_id: str, seed: int = 0) -> Agent:
    try:
        cls = REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(REGISTRY))
        raise KeyError(f"unknown agent {name!r}; registered agents: {known}") from None
    return cls(hero_id, seed)
