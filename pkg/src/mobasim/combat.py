"""Damage model, abilities, turret targeting, death timers and the combat
analyzers (tower-dive forecast, combo lethality check).

Damage pipeline: physical damage is mitigated by armor, magic by magic
resist, both as ``raw * 100 / (100 + resist)``. Crits double raw damage and
are drawn from the attacker's team crit stream so mirrored set-ups consume
independent randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Sequence

if TYPE_CHECKING:
    from .world import WorldState
    from .mapgraph import StructureNode

PHYSICAL = "physical"
MAGIC = "magic"
STRUCTURE = "structure"

CRIT_MULTIPLIER = 2.0


@dataclass(slots=True)
class Stats:
    """A unit's combat attributes. hp/mana are current values."""

    hp: float
    max_hp: float
    mana: float
    max_mana: float
    attack_damage: float
    attack_speed: float      # attacks per second
    attack_range: float
    armor: float
    magic_resist: float
    move_speed: float        # units per second
    crit_chance: float
    hp_regen: float          # per second
    mana_regen: float
    level: int = 1

    def clone(self) -> "Stats":
        return Stats(
            self.hp, self.max_hp, self.mana, self.max_mana, self.attack_damage,
            self.attack_speed, self.attack_range, self.armor, self.magic_resist,
            self.move_speed, self.crit_chance, self.hp_regen, self.mana_regen,
            self.level,
        )


@dataclass(slots=True)
class Ability:
    """One castable ability built from a small archetype vocabulary."""

    archetype: str           # Nuke | AoE | Stun | Heal | Dash
    power: float
    range: float
    mana_cost: float
    cooldown_ticks: int
    radius: float = 0.0      # AoE only
    stun_duration: float = 0.0  # Stun only, seconds

    def __post_init__(self) -> None:
        if self.cooldown_ticks < 1:
            raise ValueError("ability cooldown must be >= 1 tick")
        if self.archetype == "Stun" and self.stun_duration <= 0:
            raise ValueError("stun ability needs positive stun_duration")


def ability_from_config(cfg: dict[str, Any]) -> Ability:
    return Ability(
        archetype=cfg["archetype"],
        power=float(cfg["power"]),
        range=float(cfg["range"]),
        mana_cost=float(cfg["mana_cost"]),
        cooldown_ticks=int(cfg["cooldown_ticks"]),
        radius=float(cfg.get("radius", 0.0)),
        stun_duration=float(cfg.get("stun_duration", 0.0)),
    )


@dataclass(slots=True)
class DamageEvent:
    """One resolved instance of damage, pre- and post-mitigation."""

    source: str
    target: str
    raw: float
    mitigated: float
    kind: str
    crit: bool
    tick: int


def mitigate(raw: float, resist: float) -> float:
    """Genre-standard multiplicative mitigation; monotone in resist."""
    return raw * 100.0 / (100.0 + resist)


def roll_crit(crit_chance: float, stream) -> bool:
    """Draw a crit; skips the stream entirely at zero chance."""
    if crit_chance <= 0.0:
        return False
    return stream.random() < crit_chance


def basic_attack_event(attacker, target, crit: bool, tick: int) -> DamageEvent:
    """Compute (without applying) a basic-attack damage event."""
    raw = attacker.stats.attack_damage * (CRIT_MULTIPLIER if crit else 1.0)
    return DamageEvent(
        source=attacker.id, target=target.id, raw=raw,
        mitigated=mitigate(raw, target.stats.armor),
        kind=PHYSICAL, crit=crit, tick=tick,
    )


def apply_damage(target, mitigated: float) -> float:
    """Reduce target hp, floored at zero; returns hp actually removed."""
    lost = min(target.stats.hp, mitigated)
    target.stats.hp -= lost
    return lost


def resolve_basic_attack(attacker, target, crit_stream, tick: int = 0) -> DamageEvent | None:
    """Resolve one basic attack: range gate, crit roll, mitigation, hp loss.

    Returns None when the target is out of range (callers turn that into an
    attack-move step).
    """
    if math.hypot(target.x - attacker.x, target.y - attacker.y) > attacker.stats.attack_range:
        return None
    crit = roll_crit(attacker.stats.crit_chance, crit_stream)
    ev = basic_attack_event(attacker, target, crit, tick)
    apply_damage(target, ev.mitigated)
    return ev


def death_timer(level: int, game_seconds: float, cfg: dict[str, Any] | None = None) -> float:
    """Respawn delay in seconds; non-decreasing in level and game time."""
    if cfg is None:
        cfg = {"death_timer_base": 6.0, "death_timer_per_level": 2.0, "death_timer_slope": 0.5}
    base = cfg["death_timer_base"] + cfg["death_timer_per_level"] * level
    return base + cfg["death_timer_slope"] * (game_seconds / 60.0)


def turret_acquire_target(turret: "StructureNode", world: "WorldState") -> str | None:
    """Pick the turret's target for this tick.

    Priority: (0) the aggro override — an enemy hero who recently damaged an
    allied hero inside the radius — while it stays alive and in range;
    (1) the current target while alive and in range; (2) nearest enemy creep;
    (3) nearest enemy hero. Distance ties break toward the lowest unit id.
    """
    tx, ty, rng = turret.x, turret.y, turret.attack_range

    def in_range(u) -> bool:
        return math.hypot(u.x - tx, u.y - ty) <= rng

    if turret.aggro_id is not None:
        unit = world.unit(turret.aggro_id)
        if unit is not None and unit.alive and in_range(unit):
            return turret.aggro_id
        turret.aggro_id = None

    if turret.target_id is not None:
        unit = world.unit(turret.target_id)
        if unit is not None and unit.alive and in_range(unit):
            return turret.target_id
        turret.target_id = None

    from .mapgraph import LANES, enemy

    foe = enemy(turret.team)
    # lane turrets are too far from other lanes for cross-lane creeps to
    # ever be in range; skipping them cheaply is distance-equivalent
    lane_filter = turret.lane if turret.lane in LANES else None
    best: tuple[float, str] | None = None
    for creep in world.creeps:
        if creep.team != foe or not creep.alive:
            continue
        if lane_filter is not None and creep.lane != lane_filter:
            continue
        d = math.hypot(creep.x - tx, creep.y - ty)
        if d <= rng:
            key = (d, creep.id)
            if best is None or key < best:
                best = key
    if best is not None:
        return best[1]
    for hero in world.heroes:
        if hero.team != foe or not hero.alive:
            continue
        d = math.hypot(hero.x - tx, hero.y - ty)
        if d <= rng:
            key = (d, hero.id)
            if best is None or key < best:
                best = key
    return best[1] if best is not None else None


@dataclass(slots=True)
class DiveAnalysis:
    verdict: str                 # kill_and_escape | kill_and_die | abort
    hp_trace: list[float]        # diver hp per simulated tick


def dive_script_action(world: "WorldState", diver_id: str, victim_id: str, turret: "StructureNode"):
    """The scripted dive policy: approach, focus the victim, then retreat.

    Shared by the analyzer and by live-engine executions so both follow the
    identical script.
    """
    from .agents import Action

    diver = world.hero_by_id(diver_id)
    victim = world.hero_by_id(victim_id)
    if victim is not None and victim.alive:
        d = math.hypot(victim.x - diver.x, victim.y - diver.y)
        if d <= diver.stats.attack_range:
            return Action.attack_unit(victim_id)
        return Action.move(victim.x, victim.y)
    # victim down: leave the turret's area toward own base
    bx, by = world.geometry.base_center[diver.team]
    return Action.move(bx, by)


def _nearest_covering_turret(world: "WorldState", victim) -> "StructureNode | None":
    best = None
    best_key = None
    for node in world.structures.nodes.values():
        if node.destroyed or node.team != victim.team or node.attack_range <= 0:
            continue
        d = math.hypot(victim.x - node.x, victim.y - node.y)
        if d <= node.attack_range:
            key = (d, node.id)
            if best_key is None or key < best_key:
                best, best_key = node, key
    return best


def analyze_tower_dive(
    world: "WorldState", diver_id: str, victim_id: str, horizon_ticks: int
) -> DiveAnalysis:
    """Forward-simulate a scripted tower dive on a cloned world.

    The clone runs the real tick engine, so verdicts coincide with actually
    executing the same script live. Non-scripted heroes idle; the victim is
    assumed not to fight back.
    """
    from .world import advance_tick

    if horizon_ticks <= 0:
        return DiveAnalysis(verdict="abort", hp_trace=[])

    sim = world.clone()
    victim = sim.hero_by_id(victim_id)
    turret = _nearest_covering_turret(sim, victim)
    if turret is None:
        raise ValueError("victim is not inside any allied turret radius")
    turret_id = turret.id

    trace: list[float] = []
    for _ in range(horizon_ticks):
        diver = sim.hero_by_id(diver_id)
        victim = sim.hero_by_id(victim_id)
        if not diver.alive:
            verdict = "kill_and_die" if not victim.alive else "abort"
            return DiveAnalysis(verdict, trace)
        turret = sim.structures.nodes[turret_id]
        if not victim.alive:
            if math.hypot(diver.x - turret.x, diver.y - turret.y) > turret.attack_range:
                return DiveAnalysis("kill_and_escape", trace)
        actions = {diver_id: dive_script_action(sim, diver_id, victim_id, turret)}
        advance_tick(sim, actions)
        trace.append(sim.hero_by_id(diver_id).stats.hp)
    return DiveAnalysis("abort", trace)


class IllegalComboError(ValueError):
    """A combo sequence violates a cooldown or mana precondition."""

    def __init__(self, step: int, reason: str):
        super().__init__(f"step {step}: {reason}")
        self.step = step
        self.reason = reason


def combo_kill_check(
    attacker, target, sequence: Sequence[int], tick_seconds: float = 0.1
) -> tuple[bool, float]:
    """Deterministic worst-case lethality of an ability sequence.

    Casts land on consecutive ticks; the target regenerates between casts
    exactly as the engine would, and crits are excluded. Returns
    (lethal, total mitigated damage). Raises IllegalComboError naming the
    first step that violates cooldown or mana constraints.
    """
    if not sequence:
        return (False, 0.0)

    abilities = attacker.abilities
    mana = attacker.stats.mana
    mana_regen = attacker.stats.mana_regen * tick_seconds
    max_mana = attacker.stats.max_mana
    hp = target.stats.hp
    max_hp = target.stats.max_hp
    regen = target.stats.hp_regen * tick_seconds
    resist = target.stats.magic_resist

    last_cast: dict[int, int] = {}
    total = 0.0
    for step, slot in enumerate(sequence):
        if slot < 0 or slot >= len(abilities):
            raise IllegalComboError(step, f"no ability in slot {slot}")
        ability = abilities[slot]
        if slot in last_cast and step - last_cast[slot] < ability.cooldown_ticks:
            raise IllegalComboError(step, f"slot {slot} still on cooldown")
        if mana < ability.mana_cost:
            raise IllegalComboError(step, f"insufficient mana for slot {slot}")
        mana -= ability.mana_cost
        last_cast[slot] = step

        if ability.archetype in ("Nuke", "AoE", "Stun"):
            dealt = mitigate(ability.power, resist)
            total += dealt
            hp -= dealt
            if hp <= 0.0:
                return (True, total)
        # Heal/Dash contribute no damage to the target.
        # One tick elapses before the next cast: both units regenerate.
        hp = min(max_hp, hp + regen)
        mana = min(max_mana, mana + mana_regen)
    return (False, total)
