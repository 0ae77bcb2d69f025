"""Isolated sub-game environments and full-match composition.

Each sub-game runs the real engine on a reduced world so a skill can be
studied alone: item building (a pure optimization over the catalog), laning
(one lane, waves and turrets), team fights (an arena with no structures in
play) and the composed full match. Results depend only on the SubgameSpec,
so rerunning a spec reproduces its outcome exactly.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from . import events as ev
from .agents import Agent, allocate_roles, observe
from .bots import make_agent
from .combat import Stats
from .economy import Item, item_catalog
from .mapgraph import BLUE, RED, TEAMS
from .replay import Replay, make_footer, make_header
from .rng import derive_seed
from .ruleset import default_ruleset
from .world import (
    MatchConfig,
    WorldState,
    advance_tick,
    build_world,
    make_hero,
    make_snapshot_event,
)

PHASE_PROFILES = ("opening", "mid", "late")


@dataclass
class SubgameSpec:
    """Declarative description of one isolated run."""

    kind: str                       # ItemBuild | Laning | TeamFight | FullMatch
    seed: int
    duration_ticks: int | None = None
    phase_profile: str = "opening"
    rosters: dict[str, list[tuple[str, str]]] | None = None
    flags: dict[str, Any] = field(default_factory=dict)
    ruleset: dict[str, Any] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("ItemBuild", "Laning", "TeamFight", "FullMatch"):
            raise ValueError(f"unknown subgame kind: {self.kind}")
        if self.duration_ticks is not None and self.duration_ticks <= 0:
            raise ValueError("duration_ticks must be positive")
        if self.phase_profile not in PHASE_PROFILES:
            raise ValueError(f"unknown phase profile: {self.phase_profile}")

    def to_record(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "duration_ticks": self.duration_ticks,
            "phase_profile": self.phase_profile,
            "rosters": self.rosters,
            "flags": self.flags,
        }

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "SubgameSpec":
        return cls(
            kind=rec["kind"], seed=rec["seed"],
            duration_ticks=rec.get("duration_ticks"),
            phase_profile=rec.get("phase_profile", "opening"),
            rosters={t: [tuple(p) for p in r] for t, r in rec["rosters"].items()}
            if rec.get("rosters") else None,
            flags=rec.get("flags", {}),
        )


@dataclass
class SubgameResult:
    kind: str
    score: float
    metrics: dict[str, float]
    replay: Replay


# -- match runner ----------------------------------------------------------

def agents_from_config(config: MatchConfig) -> dict[str, Agent]:
    """Instantiate the roster's named agents with per-hero derived seeds."""
    agents: dict[str, Agent] = {}
    prefix = {BLUE: "B", RED: "R"}
    for team in TEAMS:
        for idx, (_hero, agent_name) in enumerate(config.rosters[team]):
            hid = f"{prefix[team]}{idx}"
            agents[hid] = make_agent(agent_name, hid, derive_seed(config.seed, f"agent:{hid}"))
    return agents


def continue_match(
    world: WorldState,
    agents: dict[str, Agent],
    events: list[ev.Event],
    stop: Callable[[WorldState], bool] | None = None,
    max_ticks: int | None = None,
    timing: dict[str, list[float]] | None = None,
) -> None:
    """Drive the observe/act/advance loop until terminal, stop() or tick cap."""
    limit = max_ticks if max_ticks is not None else world.config.max_ticks
    while world.winner is None and world.tick < limit:
        if stop is not None and stop(world):
            break
        actions = {}
        for hero in world.heroes:
            if not hero.alive:
                continue
            agent = agents.get(hero.id)
            if agent is None:
                continue
            obs = observe(world, hero.id)
            if timing is not None:
                t0 = time.perf_counter()
                actions[hero.id] = agent.act(obs)
                rec = timing.setdefault(hero.id, [0.0, 0.0])
                rec[0] += time.perf_counter() - t0
                rec[1] += 1.0
            else:
                actions[hero.id] = agent.act(obs)
        _, evs = advance_tick(world, actions)
        events.extend(evs)


def run_match(
    config: MatchConfig,
    agents: dict[str, Agent] | None = None,
    stop: Callable[[WorldState], bool] | None = None,
    draft: list[dict[str, Any]] | None = None,
    subgame: dict[str, Any] | None = None,
    footer_extra: dict[str, Any] | None = None,
    timing: dict[str, list[float]] | None = None,
) -> Replay:
    """Build a world from the config and run it to completion."""
    if agents is None:
        agents = agents_from_config(config)
    world = build_world(config)
    for agent in agents.values():
        if getattr(agent, "needs_world", False):
            agent.bind_world(world)
    events: list[ev.Event] = [make_snapshot_event(world)]
    continue_match(world, agents, events, stop=stop, timing=timing)
    return Replay(
        header=make_header(config, draft=draft, subgame=subgame),
        events=events,
        footer=make_footer(world, extra=footer_extra),
    )


# -- item building sub-game -------------------------------------------------

@dataclass(frozen=True)
class EnemyProfile:
    """Aggregate damage-type mix of the expected opposition."""

    physical_mix: float = 0.5
    magic_mix: float = 0.5

    def __post_init__(self) -> None:
        total = self.physical_mix + self.magic_mix
        if not math.isclose(total, 1.0, rel_tol=1e-9):
            raise ValueError("damage mix must sum to 1")


class BuildBudgetError(ValueError):
    """A build policy spent past its gold budget."""


def effective_power(stats: Stats, profile: EnemyProfile, crit_multiplier: float = 2.0) -> float:
    """EHP x DPS: the scalar power proxy used to score item builds.

    EHP weighs armor and magic resist by the enemy damage mix; DPS uses the
    deterministic expected crit contribution.
    """
    weighted_resist = profile.physical_mix * stats.armor + profile.magic_mix * stats.magic_resist
    ehp = stats.max_hp * (1.0 + weighted_resist / 100.0)
    dps = stats.attack_damage * stats.attack_speed * (1.0 + stats.crit_chance * (crit_multiplier - 1.0))
    return ehp * dps


def _power_of_build(ruleset: dict[str, Any], hero_name: str, level: int,
                    items: Sequence[Item], profile: EnemyProfile) -> float:
    hero = make_hero(ruleset, hero_name, "B0", BLUE, level=level)
    for item in items:
        hero.items.append(item)
    hero.recompute_stats()
    return effective_power(hero.stats, profile, ruleset["combat"]["crit_multiplier"])


def greedy_build(catalog: dict[str, Item], budget: int, profile: EnemyProfile,
                 ruleset: dict[str, Any], hero_name: str, level: int,
                 slots: int = 6) -> list[str]:
    """Buy the distinct item with the best marginal power gain until nothing fits."""
    chosen: list[Item] = []
    remaining = budget
    current = _power_of_build(ruleset, hero_name, level, chosen, profile)
    while len(chosen) < slots:
        best_name = None
        best_power = current
        for name in sorted(catalog):
            item = catalog[name]
            if item.cost > remaining or any(it.id == name for it in chosen):
                continue
            power = _power_of_build(ruleset, hero_name, level, [*chosen, item], profile)
            if power > best_power:
                best_power = power
                best_name = name
        if best_name is None:
            break
        chosen.append(catalog[best_name])
        remaining -= catalog[best_name].cost
        current = best_power
    return [it.id for it in chosen]


def exhaustive_build(catalog: dict[str, Item], budget: int, profile: EnemyProfile,
                     ruleset: dict[str, Any], hero_name: str, level: int,
                     slots: int = 6) -> list[str]:
    """Search every affordable distinct-item subset up to the slot limit."""
    import itertools

    names = sorted(catalog)
    best: tuple[float, tuple[str, ...]] = (
        _power_of_build(ruleset, hero_name, level, [], profile), ())
    for r in range(1, slots + 1):
        for combo in itertools.combinations(names, r):
            cost = sum(catalog[n].cost for n in combo)
            if cost > budget:
                continue
            power = _power_of_build(ruleset, hero_name, level,
                                    [catalog[n] for n in combo], profile)
            if power > best[0]:
                best = (power, combo)
    return list(best[1])


BuildPolicy = Callable[..., list[str]]


def run_item_subgame(spec: SubgameSpec, policy: BuildPolicy,
                     profile: EnemyProfile) -> SubgameResult:
    """Let a build policy spend the phase budget, then score the result.

    The policy receives (catalog, budget, profile, ruleset, hero_name, level)
    and returns item ids; spending past the budget raises BuildBudgetError
    naming the violating purchase.
    """
    rs = spec.ruleset if spec.ruleset is not None else default_ruleset()
    prof_cfg = rs["subgames"]["phase_profiles"][spec.phase_profile]
    budget = int(prof_cfg["budget"])
    level = int(prof_cfg["level"])
    hero_name = spec.flags.get("hero", "ranger")
    catalog = item_catalog(rs)
    slots = int(rs["economy"]["inventory_slots"])

    item_ids = policy(catalog, budget, profile, rs, hero_name, level)
    if len(item_ids) > slots:
        raise BuildBudgetError(f"build uses {len(item_ids)} items; only {slots} slots")
    remaining = budget
    events: list[ev.Event] = []
    hero = make_hero(rs, hero_name, "B0", BLUE, level=level, starting_gold=budget)
    for i, name in enumerate(item_ids):
        item = catalog[name]
        if item.cost > remaining:
            raise BuildBudgetError(
                f"purchase {i + 1} ({name}, {item.cost}g) exceeds the remaining "
                f"budget of {remaining}g")
        remaining -= item.cost
        hero.wallet.debit(item.cost)
        hero.items.append(item)
        hero.recompute_stats()
        events.append(ev.Event(0, ev.PURCHASE, actor=hero.id, target=name, amount=item.cost))

    score = effective_power(hero.stats, profile, rs["combat"]["crit_multiplier"])
    header = {
        "kind": "header",
        "format": "mobasim-replay-v1",
        "subgame": spec.to_record(),
        "profile": {"physical_mix": profile.physical_mix, "magic_mix": profile.magic_mix},
        "hero": hero_name,
        "level": level,
        "budget": budget,
        "ruleset": rs,
    }
    footer = {"kind": "footer", "winner": None, "duration_ticks": 0,
              "score": score, "items": list(item_ids)}
    replay = Replay(header=header, events=events, footer=footer)
    metrics = {
        "gold_spent": float(budget - remaining),
        "items": float(len(item_ids)),
        "ehp": hero.stats.max_hp * (1.0 + (profile.physical_mix * hero.stats.armor
                                           + profile.magic_mix * hero.stats.magic_resist) / 100.0),
        "dps": hero.stats.attack_damage * hero.stats.attack_speed
        * (1.0 + hero.stats.crit_chance * (rs["combat"]["crit_multiplier"] - 1.0)),
    }
    return SubgameResult(kind="ItemBuild", score=score, metrics=metrics, replay=replay)


def item_score_from_replay(replay: Replay) -> float:
    """Recompute an ItemBuild score from its purchase log alone."""
    rs = replay.header["ruleset"]
    catalog = item_catalog(rs)
    prof = replay.header["profile"]
    profile = EnemyProfile(prof["physical_mix"], prof["magic_mix"])
    items = [catalog[e.target] for e in replay.events if e.kind == ev.PURCHASE]
    return _power_of_build(rs, replay.header["hero"], replay.header["level"], items, profile)


# -- laning sub-game ---------------------------------------------------------

def run_laning_subgame(spec: SubgameSpec, agent: str | Agent = "laner",
                       opponent: str | Agent | None = None) -> SubgameResult:
    """A single mid-lane world: waves, turrets, one hero per side at most."""
    rs = spec.ruleset if spec.ruleset is not None else default_ruleset()
    hero_name = spec.flags.get("hero", "ranger")
    opp_name = spec.flags.get("opponent_hero", hero_name)
    duration = spec.duration_ticks or int(rs["subgames"]["laning_duration_ticks"])
    rosters = {
        BLUE: [(hero_name, agent if isinstance(agent, str) else agent.name)],
        RED: [(opp_name, opponent if isinstance(opponent, str) else opponent.name)]
        if opponent is not None else [],
    }
    config = MatchConfig(
        seed=spec.seed, rosters=rosters, max_ticks=duration,
        deny_mode=bool(spec.flags.get("deny_mode", False)),
        ruleset=rs, active_lanes=("MID",), spawn_jungle=False,
    )
    agents: dict[str, Agent] = {}
    agents["B0"] = agent if isinstance(agent, Agent) else make_agent(
        agent, "B0", derive_seed(spec.seed, "agent:B0"))
    if opponent is not None:
        agents["R0"] = opponent if isinstance(opponent, Agent) else make_agent(
            opponent, "R0", derive_seed(spec.seed, "agent:R0"))
    replay = run_match(config, agents, subgame=spec.to_record())

    last_hits = denies = 0
    harass_dealt = harass_taken = turret_damage = 0.0
    enemy_creep_deaths = 0
    gold = 0
    for e in replay.events:
        if e.kind == ev.KILL and e.data and e.data.get("victim_kind") in ("melee", "ranged"):
            if e.data.get("team") == RED:
                enemy_creep_deaths += 1
                if e.actor == "B0":
                    last_hits += 1
            if e.data.get("denied") and e.actor == "B0":
                denies += 1
        elif e.kind == ev.DAMAGE:
            if e.actor == "B0" and e.target is not None and e.target.startswith("R") and "/" not in e.target:
                harass_dealt += e.amount
            elif e.target == "B0" and e.actor is not None and e.actor.startswith("R") and "/" not in e.actor:
                harass_taken += e.amount
            if e.actor == "B0" and e.data and e.data.get("dtype") == "structure":
                turret_damage += e.amount
    gold = replay.footer["metrics"]["B0"]["gold_earned"]
    metrics = {
        "last_hits": float(last_hits),
        "denies": float(denies),
        "gold": float(gold),
        "harass_dealt": round(harass_dealt, 2),
        "harass_taken": round(harass_taken, 2),
        "turret_damage": round(turret_damage, 2),
        "enemy_creep_deaths": float(enemy_creep_deaths),
    }
    return SubgameResult(kind="Laning", score=float(gold), metrics=metrics, replay=replay)


# -- team-fight sub-game ------------------------------------------------------

def _arena_positions(center: tuple[float, float], n_blue: int, n_red: int,
                     gap: float = 20.0, spacing: float = 4.0) -> dict[str, tuple[float, float]]:
    """Mirror-exact integer offsets around the arena center."""
    cx, cy = center
    positions: dict[str, tuple[float, float]] = {}
    for k in range(n_blue):
        positions[f"B{k}"] = (cx - gap / 2, cy - spacing * (n_blue - 1) / 2 + spacing * k)
    for k in range(n_red):
        positions[f"R{k}"] = (cx + gap / 2, cy + spacing * (n_red - 1) / 2 - spacing * k)
    return positions


def run_teamfight_subgame(
    spec: SubgameSpec,
    team_a: Sequence[str | Agent],
    team_b: Sequence[str | Agent],
) -> tuple[SubgameResult, "TemporalInteractionGraph"]:
    """Fight to elimination or timeout on a short lane segment.

    Heroes arrive at the phase profile's level with a deterministic greedy
    build of its gold budget already applied. The returned interaction graph
    covers the whole fight.
    """
    from .analytics import extract_interaction_graph

    if not team_a or not team_b:
        raise ValueError("both teams need at least one hero")
    if len(team_a) > 5 or len(team_b) > 5:
        raise ValueError("at most five heroes per side")
    rs = spec.ruleset if spec.ruleset is not None else default_ruleset()
    prof_cfg = rs["subgames"]["phase_profiles"][spec.phase_profile]
    level = int(prof_cfg["level"])
    budget = int(prof_cfg["budget"])
    timeout = spec.duration_ticks or int(rs["subgames"]["teamfight_timeout_ticks"])

    hero_names = {
        BLUE: spec.flags.get("heroes_blue") or [spec.flags.get("hero", "berserker")] * len(team_a),
        RED: spec.flags.get("heroes_red") or [spec.flags.get("hero", "berserker")] * len(team_b),
    }
    include_turret = bool(spec.flags.get("include_turret", False))
    crit_enabled = bool(spec.flags.get("crit_enabled", True))

    def agent_name(policy: str | Agent) -> str:
        return policy if isinstance(policy, str) else policy.name

    rosters = {
        BLUE: [(hero_names[BLUE][i], agent_name(p)) for i, p in enumerate(team_a)],
        RED: [(hero_names[RED][i], agent_name(p)) for i, p in enumerate(team_b)],
    }
    s = rs["map"]["size"]
    if include_turret:
        # fight under the red mid tier-1 turret instead of open ground
        from .mapgraph import build_map, node_id
        _, probe_graph = build_map(rs)
        node = probe_graph.nodes[node_id(RED, "MID", 1)]
        center = (node.x, node.y)
    else:
        center = (s / 2, s / 2)
    positions = _arena_positions(center, len(team_a), len(team_b))
    config = MatchConfig(
        seed=spec.seed, rosters=rosters, max_ticks=timeout, ruleset=rs,
        spawn_waves=False, spawn_jungle=False, crit_enabled=crit_enabled,
        respawns_enabled=False, hero_level=level, starting_gold=0,
        positions=positions,
    )
    agents: dict[str, Agent] = {}
    for team, policies in ((BLUE, team_a), (RED, team_b)):
        prefix = "B" if team == BLUE else "R"
        for i, p in enumerate(policies):
            hid = f"{prefix}{i}"
            agents[hid] = p if isinstance(p, Agent) else make_agent(
                p, hid, derive_seed(spec.seed, f"agent:{hid}"))

    world = build_world(config)
    if budget > 0:
        catalog = item_catalog(rs)
        neutral = EnemyProfile(0.5, 0.5)
        builds: dict[str, list[str]] = {}
        for hero in world.heroes:
            if hero.name not in builds:
                builds[hero.name] = greedy_build(catalog, budget, neutral, rs, hero.name, level)
            for name in builds[hero.name]:
                hero.items.append(catalog[name])
            hero.recompute_stats()
            hero.stats.hp = hero.stats.max_hp
            hero.stats.mana = hero.stats.max_mana
    for agent in agents.values():
        if getattr(agent, "needs_world", False):
            agent.bind_world(world)

    def wiped(w: WorldState) -> bool:
        blue_alive = any(h.alive for h in w.heroes if h.team == BLUE)
        red_alive = any(h.alive for h in w.heroes if h.team == RED)
        return not blue_alive or not red_alive

    events: list[ev.Event] = [make_snapshot_event(world)]
    continue_match(world, agents, events, stop=wiped)

    blue_alive = [h for h in world.heroes if h.team == BLUE and h.alive]
    red_alive = [h for h in world.heroes if h.team == RED and h.alive]
    if blue_alive and not red_alive:
        outcome = BLUE
    elif red_alive and not blue_alive:
        outcome = RED
    else:
        outcome = "DRAW"
    blue_hp = sum(h.stats.hp / h.stats.max_hp for h in blue_alive)
    red_hp = sum(h.stats.hp / h.stats.max_hp for h in red_alive)
    footer_extra = {
        "subgame_outcome": outcome,
        "survivors": {BLUE: len(blue_alive), RED: len(red_alive)},
        "survivor_hp": {BLUE: round(blue_hp, 4), RED: round(red_hp, 4)},
    }
    replay = Replay(
        header=make_header(config, subgame=spec.to_record()),
        events=events,
        footer=make_footer(world, extra=footer_extra),
    )
    metrics = {
        "duration_ticks": float(world.tick),
        "blue_survivors": float(len(blue_alive)),
        "red_survivors": float(len(red_alive)),
        "blue_survivor_hp": round(blue_hp, 4),
        "red_survivor_hp": round(red_hp, 4),
    }
    score = blue_hp - red_hp
    graph = extract_interaction_graph(replay, (0, world.tick))
    result = SubgameResult(kind="TeamFight", score=score, metrics=metrics, replay=replay)
    return result, graph


# -- full match ---------------------------------------------------------------

def run_full_match(spec: SubgameSpec, agents: dict[str, Agent] | None = None,
                   draft_transcript: list[dict[str, Any]] | None = None,
                   timing: dict[str, list[float]] | None = None) -> Replay:
    """Compose opening (role allocation) and the full simulation to a winner."""
    if spec.kind != "FullMatch":
        raise ValueError("spec.kind must be FullMatch")
    rs = spec.ruleset if spec.ruleset is not None else default_ruleset()
    rosters = spec.rosters or {
        t: [(n, "idle") for n in list(rs["heroes"])[:5]] for t in TEAMS
    }
    config = MatchConfig(
        seed=spec.seed, rosters=rosters,
        max_ticks=spec.duration_ticks or int(rs["ticks"]["max_ticks"]),
        deny_mode=bool(spec.flags.get("deny_mode", False)),
        ruleset=rs,
    )
    if agents is None:
        agents = agents_from_config(config)
    world = build_world(config)
    for team in TEAMS:
        team_heroes = [h for h in world.heroes if h.team == team]
        if len(team_heroes) == 5:
            ordered = sorted(team_heroes, key=lambda h: h.id)
            matrix = [h.base["role_affinity"] for h in ordered]
            assignment = allocate_roles([h.id for h in ordered], matrix)
            for h in ordered:
                h.role = assignment[h.id]
    for agent in agents.values():
        if getattr(agent, "needs_world", False):
            agent.bind_world(world)
    events: list[ev.Event] = [make_snapshot_event(world)]
    continue_match(world, agents, events, timing=timing)
    return Replay(
        header=make_header(config, draft=draft_transcript, subgame=spec.to_record()),
        events=events,
        footer=make_footer(world),
    )


def resimulate(replay: Replay) -> Replay:
    """Re-run a replay's header config with its named agents."""
    config = MatchConfig.from_record(replay.header["config"], replay.header["ruleset"])
    agents = agents_from_config(config)
    world = build_world(config)
    sub = replay.header.get("subgame")
    if sub is not None and sub.get("kind") == "FullMatch":
        return run_full_match(SubgameSpec.from_record({**sub, "rosters": config.rosters}),
                              draft_transcript=replay.header.get("draft"))
    for agent in agents.values():
        if getattr(agent, "needs_world", False):
            agent.bind_world(world)
    events: list[ev.Event] = [make_snapshot_event(world)]
    continue_match(world, agents, events)
    return Replay(
        header=make_header(config, draft=replay.header.get("draft"), subgame=sub),
        events=events,
        footer=make_footer(world),
    )
