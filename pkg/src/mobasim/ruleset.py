"""Versioned ruleset: every tunable number in the simulation lives here.

The engine never hard-codes balance values. A ruleset is a plain dict so it
can be loaded from JSON, embedded verbatim in replay headers, and diffed
between experiments. ``default_ruleset()`` returns "moba-ruleset-v1", the
documented default used by all tests.
"""

from __future__ import annotations

import copy
import json
from pathlib import Path
from typing import Any

RULESET_VERSION = "moba-ruleset-v1"

# Ability archetypes. power = damage (or heal amount), range/radius in map
# units, stun_duration in seconds, cooldown in ticks, mana cost flat.
_ABILITIES = {
    "nuke": {"archetype": "Nuke", "power": 140.0, "range": 8.0, "mana_cost": 50, "cooldown_ticks": 60},
    "heavy_nuke": {"archetype": "Nuke", "power": 220.0, "range": 7.0, "mana_cost": 70, "cooldown_ticks": 90},
    "blast": {"archetype": "AoE", "power": 100.0, "range": 8.0, "radius": 4.0, "mana_cost": 60, "cooldown_ticks": 80},
    "shock": {"archetype": "Stun", "power": 60.0, "range": 6.0, "stun_duration": 1.5, "mana_cost": 60, "cooldown_ticks": 100},
    "mend": {"archetype": "Heal", "power": 120.0, "range": 7.0, "mana_cost": 55, "cooldown_ticks": 80},
    "lunge": {"archetype": "Dash", "power": 0.0, "range": 9.0, "mana_cost": 40, "cooldown_ticks": 70},
}


def _hero(hp, hp_g, mana, ad, ad_g, aspd, rng, armor, armor_g, mr, crit, ms, hp_regen, abilities, affinity):
    return {
        "hp": hp, "hp_growth": hp_g,
        "mana": mana, "mana_growth": 15.0, "mana_regen": 1.0,
        "attack_damage": ad, "attack_damage_growth": ad_g,
        "attack_speed": aspd, "attack_speed_growth": 0.015,
        "attack_range": rng,
        "armor": armor, "armor_growth": armor_g,
        "magic_resist": mr, "magic_resist_growth": 1.0,
        "crit_chance": crit,
        "move_speed": ms,
        "hp_regen": hp_regen,
        "abilities": abilities,
        # suitability for (TopLaner, MidLaner, Carry, Support, Jungler)
        "role_affinity": affinity,
    }


# 16 generic hero templates. Names describe the stat/kit profile, not any
# licensed roster. Affinity rows feed the role allocator.
_HEROES = {
    "knight":    _hero(720, 90, 260, 62, 3.5, 0.75, 2.0, 30, 3.0, 32, 0.00, 3.45, 2.0, ["shock", "lunge", "mend"], [9, 4, 2, 5, 6]),
    "berserker": _hero(680, 85, 240, 68, 4.0, 0.85, 2.0, 26, 2.6, 30, 0.05, 3.55, 1.8, ["nuke", "lunge"], [8, 5, 4, 2, 7]),
    "ranger":    _hero(560, 68, 280, 60, 3.8, 1.00, 7.0, 22, 2.0, 30, 0.15, 3.50, 1.2, ["nuke", "lunge"], [3, 6, 9, 3, 4]),
    "sniper":    _hero(520, 62, 260, 64, 4.2, 0.90, 8.5, 20, 1.8, 30, 0.20, 3.40, 1.0, ["heavy_nuke"], [2, 6, 9, 3, 2]),
    "mage":      _hero(540, 64, 380, 52, 2.8, 0.80, 7.0, 20, 1.8, 34, 0.00, 3.45, 1.2, ["heavy_nuke", "blast", "shock"], [3, 9, 5, 5, 3]),
    "warlock":   _hero(560, 66, 360, 50, 2.6, 0.78, 7.0, 21, 1.9, 34, 0.00, 3.40, 1.3, ["blast", "nuke"], [3, 8, 4, 6, 3]),
    "cleric":    _hero(600, 70, 360, 48, 2.4, 0.72, 6.0, 22, 2.0, 36, 0.00, 3.45, 1.8, ["mend", "shock"], [2, 4, 2, 9, 3]),
    "bard":      _hero(580, 66, 360, 46, 2.2, 0.74, 6.5, 21, 1.9, 34, 0.00, 3.55, 1.5, ["mend", "blast"], [2, 5, 2, 9, 3]),
    "assassin":  _hero(580, 70, 280, 70, 4.4, 0.95, 2.0, 22, 2.0, 30, 0.15, 3.70, 1.4, ["nuke", "lunge"], [4, 7, 6, 2, 8]),
    "brawler":   _hero(660, 82, 260, 64, 3.6, 0.82, 2.0, 27, 2.7, 31, 0.05, 3.50, 1.9, ["shock", "nuke"], [8, 5, 3, 4, 7]),
    "guardian":  _hero(740, 95, 280, 54, 2.8, 0.70, 2.0, 32, 3.2, 36, 0.00, 3.40, 2.2, ["shock", "mend"], [8, 3, 2, 8, 5]),
    "sentinel":  _hero(700, 88, 300, 56, 3.0, 0.74, 2.0, 29, 2.9, 34, 0.00, 3.45, 2.0, ["blast", "shock"], [8, 4, 3, 6, 6]),
    "monk":      _hero(640, 78, 300, 60, 3.4, 0.88, 2.0, 25, 2.4, 33, 0.05, 3.65, 1.7, ["lunge", "mend"], [6, 6, 4, 5, 8]),
    "druid":     _hero(620, 74, 340, 52, 2.6, 0.76, 6.5, 23, 2.1, 34, 0.00, 3.45, 1.6, ["blast", "mend"], [4, 7, 4, 7, 5]),
    "rogue":     _hero(560, 68, 260, 66, 4.0, 1.00, 2.0, 21, 1.9, 29, 0.20, 3.70, 1.3, ["nuke", "lunge"], [4, 6, 7, 2, 8]),
    "templar":   _hero(680, 84, 320, 58, 3.2, 0.78, 2.0, 28, 2.8, 35, 0.00, 3.45, 1.9, ["blast", "shock", "mend"], [7, 6, 3, 6, 5]),
}

# 16-item catalog: offensive / defensive / hybrid. Deltas are additive onto
# hero stats; max_hp deltas also raise current hp on purchase.
_ITEMS = {
    "shortsword":   {"cost": 400,  "tags": ["offensive"], "deltas": {"attack_damage": 12}},
    "longsword":    {"cost": 900,  "tags": ["offensive"], "deltas": {"attack_damage": 28}},
    "warhammer":    {"cost": 2200, "tags": ["offensive"], "deltas": {"attack_damage": 65}},
    "swiftblade":   {"cost": 1100, "tags": ["offensive"], "deltas": {"attack_speed": 0.25}},
    "stormbow":     {"cost": 2400, "tags": ["offensive"], "deltas": {"attack_damage": 35, "attack_speed": 0.30}},
    "duelist_edge": {"cost": 1600, "tags": ["offensive"], "deltas": {"crit_chance": 0.15, "attack_damage": 15}},
    "buckler":      {"cost": 450,  "tags": ["defensive"], "deltas": {"armor": 15}},
    "chainmail":    {"cost": 1000, "tags": ["defensive"], "deltas": {"armor": 35}},
    "bulwark":      {"cost": 2300, "tags": ["defensive"], "deltas": {"armor": 60, "max_hp": 200}},
    "null_cloak":   {"cost": 900,  "tags": ["defensive"], "deltas": {"magic_resist": 30}},
    "aegis_mantle": {"cost": 2100, "tags": ["defensive"], "deltas": {"magic_resist": 55, "max_hp": 180}},
    "vital_pendant": {"cost": 800, "tags": ["defensive"], "deltas": {"max_hp": 180}},
    "heart_of_oak": {"cost": 2500, "tags": ["defensive"], "deltas": {"max_hp": 500, "hp_regen": 2.0}},
    "war_banner":   {"cost": 1500, "tags": ["offensive", "defensive"], "deltas": {"attack_damage": 20, "armor": 20}},
    "spell_sigil":  {"cost": 1400, "tags": ["offensive", "defensive"], "deltas": {"attack_damage": 18, "magic_resist": 25}},
    "wind_greaves": {"cost": 700,  "tags": ["defensive"], "deltas": {"move_speed": 0.45}},
}

_DEFAULT: dict[str, Any] = {
    "version": RULESET_VERSION,
    "map": {
        "size": 150.0,
        "lane_margin": 7.5,        # lane centerline offset from map edge
        "lane_half_width": 6.0,
        "base_radius": 18.0,       # corner-distance that counts as a team base
        "vision_radius": 12.0,
    },
    "structures": {
        # lane turret hp by tier (tier 1 = outermost, attacked first)
        "lane_turret_hp": [1800.0, 2200.0, 2600.0],
        "base_turret_hp": 2800.0,
        "main_hp": 3500.0,
        "turret_damage": 120.0,
        "turret_interval_ticks": 10,
        "turret_range": 9.0,
        # path fraction from the owning base for tiers 1..3 (outer -> inner)
        "lane_turret_fractions": [0.38, 0.26, 0.15],
        "base_turret_unlock_lanes": 1,   # fully destroyed lanes needed to open the base
        "lane_turret_bounty": 200,
        "base_turret_bounty": 250,
    },
    "ticks": {
        "tick_rate": 10,           # ticks per simulated second
        "max_ticks": 24000,        # 40 simulated minutes
        "snapshot_period": 10,     # telemetry snapshot cadence (ticks)
    },
    "creeps": {
        "wave_period_ticks": 300,
        "wave_melee": 3,
        "wave_ranged": 3,
        "melee": {"hp": 450.0, "attack_damage": 20.0, "attack_range": 1.5, "bounty": 20, "xp": 30},
        "ranged": {"hp": 300.0, "attack_damage": 23.0, "attack_range": 6.0, "bounty": 25, "xp": 25},
        "move_speed": 3.25,
        "attack_interval_ticks": 10,
        "aggro_radius": 8.0,
        # per-minute growth applied at spawn; keeps late waves strong enough
        # to break open a stalemated agentless match
        "hp_growth_per_min": 14.0,
        "damage_growth_per_min": 1.5,
        "damage_jitter": 0.10,     # +-10% per attack, drawn per-team
    },
    "jungle": {
        "camps_per_side": 4,
        "camp_creeps": 2,
        "creep": {"hp": 350.0, "attack_damage": 16.0, "attack_range": 1.5, "bounty": 30, "xp": 35},
        "respawn_ticks": 600,
        "buff_camps": 2,           # first N camps per side carry a buff
        "buff": {"deltas": {"attack_damage": 15.0, "armor": 10.0}, "duration_ticks": 600},
    },
    "economy": {
        "starting_gold": 500,
        "passive_income_start_ticks": 900,  # 90 s
        "passive_income_period_ticks": 10,  # +1 gold per second
        "hero_kill_bounty": 300,
        "hero_kill_xp_base": 50,
        "hero_kill_xp_per_level": 25,
        "assist_share": 0.5,       # fraction of bounty split among assisters
        "assist_window_ticks": 100,
        "inventory_slots": 6,
        "sell_refund": 0.7,
        "xp_share_radius": 15.0,
        "level_cap": 18,
    },
    "combat": {
        "crit_multiplier": 2.0,
        "death_timer_base": 6.0,      # + 2 * level seconds
        "death_timer_per_level": 2.0,
        "death_timer_slope": 0.5,     # seconds per game minute
        "recall_channel_ticks": 40,
        "fountain_regen_multiplier": 20.0,
        "structure_hit_radius": 1.5,
    },
    "agents": {
        "vote_weights": {"hp": 0.5, "proximity": 0.2, "threat": 0.2, "disabled": 0.1},
        "tick_budget_ms": 1.0,
    },
    "draft": {
        # (team, kind) steps; Dota-inspired default
        "tournament_sequence": [
            ["BLUE", "ban"], ["RED", "ban"], ["BLUE", "ban"], ["RED", "ban"],
            ["BLUE", "pick"], ["RED", "pick"], ["RED", "pick"], ["BLUE", "pick"],
            ["BLUE", "pick"], ["RED", "pick"],
            ["RED", "ban"], ["BLUE", "ban"],
            ["RED", "pick"], ["BLUE", "pick"], ["BLUE", "pick"], ["RED", "pick"],
        ],
        # pool-of-12 variant used by the exhaustive draft verification
        "compact_sequence": [
            ["BLUE", "ban"], ["RED", "ban"],
            ["BLUE", "pick"], ["RED", "pick"], ["RED", "pick"], ["BLUE", "pick"],
            ["BLUE", "pick"], ["RED", "pick"], ["RED", "pick"], ["BLUE", "pick"],
            ["BLUE", "pick"], ["RED", "pick"],
        ],
        "team_size": 5,
    },
    "subgames": {
        "phase_profiles": {
            "opening": {"budget": 500, "level": 1},
            "mid": {"budget": 6000, "level": 9},
            "late": {"budget": 14000, "level": 16},
        },
        "teamfight_arena_length": 40.0,
        "teamfight_timeout_ticks": 1200,
        "laning_duration_ticks": 3000,
    },
    "analytics": {
        "phase_level_threshold": 9,
        "phase_gold_lead": 1500,
        "phase_item_slots": 4,
        "phase_item_heroes": 8,
        "winner_gold_weight": 1.0,
        "winner_xp_weight": 0.5,
        "winner_structure_weight": 300.0,
        "winner_draw_band": 100.0,
        "classifier": {
            "split_distance": 30.0,
            "split_fraction": 0.5,
            "structure_share": 0.45,
            "push_entropy": 0.35,
            "pickoff_max_participants": 2.5,
            "teamfight_min_participants": 3.5,
        },
    },
    "heroes": _HEROES,
    "items": _ITEMS,
    "abilities": _ABILITIES,
}


def default_ruleset() -> dict[str, Any]:
    """A deep copy of the canonical default ruleset."""
    return copy.deepcopy(_DEFAULT)


def xp_to_reach(level: int) -> int:
    """Cumulative xp required to reach a level (level 1 costs 0)."""
    if level <= 1:
        return 0
    n = level
    return (n - 1) * 100 + 25 * (n - 2) * (n - 1)


def validate_ruleset(rs: dict[str, Any]) -> None:
    """Raise ValueError on structurally broken rulesets."""
    if rs.get("map", {}).get("size", 0) <= 0:
        raise ValueError("map.size must be positive")
    if rs.get("ticks", {}).get("tick_rate", 0) <= 0:
        raise ValueError("ticks.tick_rate must be positive")
    if rs.get("ticks", {}).get("max_ticks", 0) <= 0:
        raise ValueError("ticks.max_ticks must be positive")
    if len(rs.get("structures", {}).get("lane_turret_hp", [])) != 3:
        raise ValueError("structures.lane_turret_hp must list 3 tiers")
    for name, item in rs.get("items", {}).items():
        if item["cost"] <= 0:
            raise ValueError(f"item {name} must have positive cost")
    for name, hero in rs.get("heroes", {}).items():
        if len(hero["role_affinity"]) != 5:
            raise ValueError(f"hero {name} needs a 5-entry role_affinity")


def load_ruleset(path: str | Path) -> dict[str, Any]:
    """Load and validate a ruleset JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        rs = json.load(fh)
    validate_ruleset(rs)
    return rs


def save_ruleset(rs: dict[str, Any], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rs, fh, indent=2, sort_keys=True)
        fh.write("\n")
