"""Match analytics over replays: phase detection, phase winners, temporal
interaction graphs, strategy classification and Monte-Carlo combat-outcome
prediction.

Everything here is a pure function of the replay (or of a world snapshot for
the rollout predictor): recomputing any analytic on the same input yields the
same answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import events as ev
from .mapgraph import BLUE, RED, TEAMS, build_map
from .replay import Replay
from .rng import derive_seed

PHASE_NAMES = ("PickBan", "Opening", "Laning", "MidGame", "LateGame")


@dataclass(frozen=True)
class PhaseLabel:
    """One phase span; spans partition [0, duration] in listed order, and a
    span may be empty (start == end)."""

    name: str
    start: int
    end: int
    partial: bool = False

    @property
    def empty(self) -> bool:
        return self.start >= self.end


@dataclass(frozen=True)
class InteractionEdge:
    tick: int
    source: str
    target: str
    kind: str            # damage | heal | stun | kill | assist
    magnitude: float


@dataclass
class TemporalInteractionGraph:
    nodes: tuple[str, ...]
    edges: list[InteractionEdge] = field(default_factory=list)

    def edges_of_kind(self, kind: str) -> list[InteractionEdge]:
        return [e for e in self.edges if e.kind == kind]


def _thresholds(replay: Replay) -> dict[str, Any]:
    return replay.header["ruleset"]["analytics"]


def replay_is_partial(replay: Replay) -> bool:
    """True when the match ended without a terminal verdict."""
    return replay.footer.get("winner") is None


def detect_phases(replay: Replay) -> list[PhaseLabel]:
    """Split the timeline into PickBan/Opening/Laning/MidGame/LateGame.

    Opening ends at the first tick opposing creep waves meet; Laning ends
    when any hero reaches the level threshold or either team opens the
    configured gold lead; LateGame starts when enough living heroes have
    filled most of their item slots (snapshot-period granularity). Truncated
    replays yield spans up to the truncation, flagged partial.
    """
    cfg = _thresholds(replay)
    duration = replay.duration_ticks
    partial = replay_is_partial(replay)

    meet_tick = None
    for e in replay.events:
        if e.kind == ev.CREEPS_MEET:
            meet_tick = e.tick
            break
    opening_end = min(meet_tick, duration) if meet_tick is not None else duration

    level_thresh = int(cfg["phase_level_threshold"])
    gold_lead = int(cfg["phase_gold_lead"])
    slots_needed = int(cfg["phase_item_slots"])
    heroes_needed = int(cfg["phase_item_heroes"])

    laning_end = None
    late_start = None
    for e in replay.events:
        if e.kind != ev.SNAPSHOT:
            continue
        data = e.data
        if laning_end is None:
            gold = data["team_gold"]
            if abs(gold[BLUE] - gold[RED]) >= gold_lead:
                laning_end = e.tick
            elif any(row[2] >= level_thresh for row in data["heroes"]):
                laning_end = e.tick
        if laning_end is not None and late_start is None:
            stacked = sum(1 for row in data["heroes"] if row[1] and row[3] >= slots_needed)
            if stacked >= heroes_needed:
                late_start = e.tick
        if laning_end is not None and late_start is not None:
            break

    laning_end = duration if laning_end is None else max(opening_end, min(laning_end, duration))
    late_start = duration if late_start is None else max(laning_end, min(late_start, duration))

    return [
        PhaseLabel("PickBan", 0, 0, partial),
        PhaseLabel("Opening", 0, opening_end, partial),
        PhaseLabel("Laning", opening_end, laning_end, partial),
        PhaseLabel("MidGame", laning_end, late_start, partial),
        PhaseLabel("LateGame", late_start, duration, partial),
    ]


def _snapshot_at_or_before(replay: Replay, tick: int) -> ev.Event | None:
    best = None
    for e in replay.events:
        if e.kind == ev.SNAPSHOT:
            if e.tick <= tick:
                best = e
            else:
                break
    return best


def phase_winner(replay: Replay, phase: str | PhaseLabel) -> str:
    """Which team won a phase, by weighted gold/xp/structure swing.

    Returns BLUE, RED or DRAW. Raises ValueError for an absent (empty) phase.
    """
    if isinstance(phase, str):
        matches = [p for p in detect_phases(replay) if p.name == phase]
        if not matches:
            raise ValueError(f"unknown phase name: {phase}")
        span = matches[0]
    else:
        span = phase
    if span.empty:
        raise ValueError(f"phase {span.name} is absent from this replay")
    cfg = _thresholds(replay)
    start = _snapshot_at_or_before(replay, span.start)
    end = _snapshot_at_or_before(replay, span.end)
    if start is None or end is None:
        raise ValueError("replay lacks snapshots covering the phase span")

    def delta(key: str, team: str) -> float:
        return float(end.data[key][team]) - float(start.data[key][team])

    score = (
        cfg["winner_gold_weight"] * (delta("team_gold", BLUE) - delta("team_gold", RED))
        + cfg["winner_xp_weight"] * (delta("team_xp", BLUE) - delta("team_xp", RED))
        + cfg["winner_structure_weight"]
        * (delta("structures_destroyed_by", BLUE) - delta("structures_destroyed_by", RED))
    )
    if abs(score) < cfg["winner_draw_band"]:
        return "DRAW"
    return BLUE if score > 0 else RED


def extract_interaction_graph(replay: Replay, window: tuple[int, int]) -> TemporalInteractionGraph:
    """One edge per combat event (damage, heal, stun, kill, assist) in the
    inclusive tick window."""
    start, end = window
    if start > end:
        raise ValueError(f"inverted window: {window}")
    if start < 0 or end > replay.duration_ticks:
        raise ValueError(f"window {window} outside replay duration {replay.duration_ticks}")
    nodes: dict[str, None] = {}
    edges: list[InteractionEdge] = []

    def add(tick: int, src: str | None, dst: str | None, kind: str, magnitude: float) -> None:
        if src is None or dst is None:
            return
        nodes.setdefault(src)
        nodes.setdefault(dst)
        edges.append(InteractionEdge(tick, src, dst, kind, magnitude))

    for e in replay.events:
        if e.tick < start or e.tick > end:
            continue
        if e.kind == ev.DAMAGE:
            add(e.tick, e.actor, e.target, "damage", e.amount)
        elif e.kind == ev.HEAL:
            add(e.tick, e.actor, e.target, "heal", e.amount)
        elif e.kind == ev.STUN:
            add(e.tick, e.actor, e.target, "stun", e.amount - e.tick)
        elif e.kind == ev.KILL:
            add(e.tick, e.actor, e.target, "kill", e.amount)
            if e.data and e.data.get("assists"):
                for helper in e.data["assists"]:
                    add(e.tick, helper, e.target, "assist", 0.0)
    return TemporalInteractionGraph(nodes=tuple(nodes), edges=edges)


STRATEGY_LABELS = ("TeamFight", "Pickoff", "SplitPush", "Sieging", "TeamPush")


def strategy_features(replay: Replay, span: tuple[int, int], team: str) -> dict[str, float]:
    """Per-team behavioral features over a tick span.

    spread: mean pairwise hero distance; split_fraction: share of snapshots
    with one hero far from the rest; lane_entropy: Shannon entropy (bits) of
    lane occupancy; structure_share: structure damage over all damage dealt;
    kills and mean kill participants (killer + assists).
    """
    start, end = span
    prefix = "B" if team == BLUE else "R"
    geo, _graph = build_map(replay.header["ruleset"])
    cfg = _thresholds(replay)["classifier"]
    split_dist = float(cfg["split_distance"])

    spreads: list[float] = []
    split_hits = 0
    snap_count = 0
    lane_counts = {"TOP": 0, "MID": 0, "BOT": 0}
    for e in replay.events:
        if e.kind != ev.SNAPSHOT or e.tick < start or e.tick > end:
            continue
        rows = [r for r in e.data["heroes"] if r[0].startswith(prefix) and r[1]]
        if len(rows) < 2:
            continue
        snap_count += 1
        pts = [(r[4], r[5]) for r in rows]
        dists = [math.hypot(ax - bx, ay - by)
                 for i, (ax, ay) in enumerate(pts) for (bx, by) in pts[i + 1:]]
        spreads.append(sum(dists) / len(dists))
        max_away = 0.0
        for i, (x, y) in enumerate(pts):
            others = [p for j, p in enumerate(pts) if j != i]
            cx = sum(p[0] for p in others) / len(others)
            cy = sum(p[1] for p in others) / len(others)
            max_away = max(max_away, math.hypot(x - cx, y - cy))
        if max_away > split_dist:
            split_hits += 1
        for x, y in pts:
            region = geo.region_of(x, y)
            if region.kind == "lane":
                lane_counts[region.lane] += 1

    total_damage = 0.0
    structure_damage = 0.0
    kills = 0
    participants = 0
    for e in replay.events:
        if e.tick < start or e.tick > end:
            continue
        if e.kind == ev.DAMAGE and e.actor and e.actor.startswith(prefix) and "/" not in e.actor:
            total_damage += e.amount
            if e.data and e.data.get("dtype") == "structure":
                structure_damage += e.amount
        elif (e.kind == ev.KILL and e.data and e.data.get("victim_kind") == "hero"
              and e.actor and e.actor.startswith(prefix) and "/" not in e.actor):
            kills += 1
            participants += 1 + len(e.data.get("assists", ()))

    lane_total = sum(lane_counts.values())
    entropy = 0.0
    if lane_total:
        for count in lane_counts.values():
            if count:
                p = count / lane_total
                entropy -= p * math.log2(p)
    return {
        "spread": sum(spreads) / len(spreads) if spreads else 0.0,
        "split_fraction": split_hits / snap_count if snap_count else 0.0,
        "lane_entropy": entropy,
        "structure_share": structure_damage / total_damage if total_damage else 0.0,
        "kills": float(kills),
        "kill_participants_mean": participants / kills if kills else 0.0,
    }


def classify_strategy(replay: Replay, span: tuple[int, int] | None = None,
                      team: str = BLUE) -> str:
    """Label a team's mid-game strategy with documented threshold rules.

    Deterministic: the same replay always yields the same label. Raises
    ValueError when the (detected or given) span is empty.
    """
    if span is None:
        mid = [p for p in detect_phases(replay) if p.name == "MidGame"][0]
        if mid.empty:
            raise ValueError("mid-game span is empty; nothing to classify")
        span = (mid.start, mid.end)
    if span[0] >= span[1]:
        raise ValueError("empty classification span")
    cfg = _thresholds(replay)["classifier"]
    f = strategy_features(replay, span, team)
    if f["split_fraction"] >= cfg["split_fraction"] and f["structure_share"] >= 0.2:
        return "SplitPush"
    if f["structure_share"] >= cfg["structure_share"]:
        return "TeamPush" if f["lane_entropy"] <= cfg["push_entropy"] else "Sieging"
    if f["kills"] >= 1:
        if f["kill_participants_mean"] <= cfg["pickoff_max_participants"]:
            return "Pickoff"
        if f["kill_participants_mean"] >= cfg["teamfight_min_participants"]:
            return "TeamFight"
        return "TeamFight"
    return "TeamFight" if f["spread"] <= 12.0 else "Pickoff"


def predict_combat_outcome(world, policies: dict[str, str], n_rollouts: int,
                           seed: int, horizon_ticks: int = 1200) -> dict[str, float]:
    """Win probability per team from n seeded forward simulations.

    Each rollout clones the snapshot, re-derives every RNG stream from a
    per-rollout seed and plays both teams with the named policies until one
    side is eliminated or the horizon lapses; unresolved rollouts count half
    to each side. Deterministic in (snapshot, policies, n, seed).
    """
    from .bots import make_agent
    from .subgames import continue_match

    if n_rollouts < 1:
        raise ValueError("n_rollouts must be >= 1")
    wins = {BLUE: 0.0, RED: 0.0}
    for i in range(n_rollouts):
        roll_seed = derive_seed(seed, f"rollout:{i}")
        sim = world.clone()
        sim.reseed(roll_seed)
        agents = {}
        for hero in sim.heroes:
            name = policies[hero.team]
            agents[hero.id] = make_agent(name, hero.id,
                                         derive_seed(roll_seed, f"agent:{hero.id}"))
            if getattr(agents[hero.id], "needs_world", False):
                agents[hero.id].bind_world(sim)

        def wiped(w) -> bool:
            blue_alive = any(h.alive for h in w.heroes if h.team == BLUE)
            red_alive = any(h.alive for h in w.heroes if h.team == RED)
            return not blue_alive or not red_alive

        sink: list[ev.Event] = []
        continue_match(sim, agents, sink, stop=wiped,
                       max_ticks=min(sim.config.max_ticks, sim.tick + horizon_ticks))
        blue_alive = any(h.alive for h in sim.heroes if h.team == BLUE)
        red_alive = any(h.alive for h in sim.heroes if h.team == RED)
        if blue_alive and not red_alive:
            wins[BLUE] += 1.0
        elif red_alive and not blue_alive:
            wins[RED] += 1.0
        else:
            wins[BLUE] += 0.5
            wins[RED] += 0.5
    return {team: wins[team] / n_rollouts for team in TEAMS}
