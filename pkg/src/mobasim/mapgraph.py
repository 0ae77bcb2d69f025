"""Map geometry and the structure dependency graph.

The map is a square with two bases in opposite corners, three lanes joining
them (two along the edges, one diagonal), and jungle everywhere else. Each
team fields 12 structures: 3 turrets per lane, 2 base turrets and 1 main
structure. Turrets unlock strictly outer to inner within a lane; clearing any
full lane opens both base turrets; clearing both base turrets opens the main
structure, whose destruction ends the game. Lanes are independent of each
other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

BLUE = "BLUE"
RED = "RED"
TEAMS = (BLUE, RED)
LANES = ("TOP", "MID", "BOT")

LANE_TURRET = "LaneTurret"
BASE_TURRET = "BaseTurret"
MAIN_STRUCTURE = "MainStructure"


def enemy(team: str) -> str:
    return RED if team == BLUE else BLUE


@dataclass(frozen=True, slots=True)
class Region:
    """Classification of a map point: Lane(top|mid|bot), Jungle or Base(team)."""

    kind: str              # "lane" | "jungle" | "base"
    lane: str | None = None
    team: str | None = None

    def is_base(self, team: str | None = None) -> bool:
        return self.kind == "base" and (team is None or self.team == team)


@dataclass(slots=True)
class StructureNode:
    """One turret or main structure, with live combat state."""

    id: str
    team: str
    lane: str               # TOP/MID/BOT for lane turrets, "BASE" or "MAIN"
    kind: str
    tier: int               # 1..3 for lane turrets (1 = outermost), 0 otherwise
    x: float
    y: float
    hp: float
    max_hp: float
    attack_damage: float
    attack_range: float
    attack_interval: int    # ticks between shots
    next_attack_tick: int = 0
    target_id: str | None = None
    aggro_id: str | None = None
    scan_at: int = 0        # idle turrets defer their next full target scan

    @property
    def destroyed(self) -> bool:
        return self.hp <= 0.0

    def clone(self) -> "StructureNode":
        return StructureNode(
            self.id, self.team, self.lane, self.kind, self.tier, self.x, self.y,
            self.hp, self.max_hp, self.attack_damage, self.attack_range,
            self.attack_interval, self.next_attack_tick, self.target_id, self.aggro_id,
            self.scan_at,
        )


def _dist_point_segment(px: float, py: float, ax: float, ay: float, bx: float, by: float) -> float:
    vx, vy = bx - ax, by - ay
    wx, wy = px - ax, py - ay
    seg_len2 = vx * vx + vy * vy
    if seg_len2 <= 0.0:
        return math.hypot(wx, wy)
    t = (wx * vx + wy * vy) / seg_len2
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return math.hypot(px - (ax + t * vx), py - (ay + t * vy))


class MapGeometry:
    """Lane polylines, bases and region classification for one map size."""

    def __init__(self, cfg: dict[str, Any]):
        self.size: float = float(cfg["size"])
        self.lane_half_width: float = float(cfg["lane_half_width"])
        self.base_radius: float = float(cfg["base_radius"])
        self.vision_radius: float = float(cfg["vision_radius"])
        m = float(cfg["lane_margin"])
        s = self.size
        lo, hi = m, s - m
        # Polylines run from the BLUE corner to the RED corner.
        self.lanes: dict[str, list[tuple[float, float]]] = {
            "TOP": [(lo, lo), (lo, hi), (hi, hi)],
            "MID": [(lo, lo), (hi, hi)],
            "BOT": [(lo, lo), (hi, lo), (hi, hi)],
        }
        self.base_center: dict[str, tuple[float, float]] = {BLUE: (0.0, 0.0), RED: (s, s)}
        self._lane_lengths = {lane: self._polyline_length(pts) for lane, pts in self.lanes.items()}

    @staticmethod
    def _polyline_length(pts: list[tuple[float, float]]) -> float:
        return sum(math.hypot(bx - ax, by - ay) for (ax, ay), (bx, by) in zip(pts, pts[1:]))

    def lane_length(self, lane: str) -> float:
        return self._lane_lengths[lane]

    def point_along_lane(self, lane: str, fraction: float) -> tuple[float, float]:
        """Point at `fraction` of the lane path measured from the BLUE end."""
        pts = self.lanes[lane]
        remaining = max(0.0, min(1.0, fraction)) * self._lane_lengths[lane]
        for (ax, ay), (bx, by) in zip(pts, pts[1:]):
            seg = math.hypot(bx - ax, by - ay)
            if remaining <= seg:
                t = remaining / seg if seg > 0 else 0.0
                return (ax + t * (bx - ax), ay + t * (by - ay))
            remaining -= seg
        return pts[-1]

    def lane_waypoints(self, lane: str, team: str) -> list[tuple[float, float]]:
        """Waypoints from `team`'s base toward the enemy base."""
        pts = list(self.lanes[lane])
        return pts if team == BLUE else list(reversed(pts))

    def dist_to_lane(self, lane: str, x: float, y: float) -> float:
        pts = self.lanes[lane]
        return min(
            _dist_point_segment(x, y, ax, ay, bx, by)
            for (ax, ay), (bx, by) in zip(pts, pts[1:])
        )

    def lane_progress(self, lane: str, x: float, y: float) -> float:
        """Path fraction (from the BLUE end) of the nearest lane point."""
        pts = self.lanes[lane]
        total = self._lane_lengths[lane]
        best_d = math.inf
        best_frac = 0.0
        walked = 0.0
        for (ax, ay), (bx, by) in zip(pts, pts[1:]):
            vx, vy = bx - ax, by - ay
            seg2 = vx * vx + vy * vy
            seg = math.sqrt(seg2)
            t = 0.0 if seg2 == 0 else max(0.0, min(1.0, ((x - ax) * vx + (y - ay) * vy) / seg2))
            d = math.hypot(x - (ax + t * vx), y - (ay + t * vy))
            if d < best_d:
                best_d = d
                best_frac = (walked + t * seg) / total
            walked += seg
        return best_frac

    def region_of(self, x: float, y: float) -> Region:
        """Classify a point; base beats lane beats jungle, lanes in TOP/MID/BOT priority."""
        for team in TEAMS:
            cx, cy = self.base_center[team]
            if math.hypot(x - cx, y - cy) <= self.base_radius:
                return Region("base", team=team)
        for lane in LANES:
            if self.dist_to_lane(lane, x, y) <= self.lane_half_width:
                return Region("lane", lane=lane)
        return Region("jungle")

    def in_bounds(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.size and 0.0 <= y <= self.size

    def clamp(self, x: float, y: float) -> tuple[float, float]:
        s = self.size
        return (min(max(x, 0.0), s), min(max(y, 0.0), s))


class StructureGraph:
    """The 24-node dependency DAG of turrets and main structures."""

    def __init__(self, nodes: list[StructureNode], unlock_lanes_needed: int = 1):
        self.nodes: dict[str, StructureNode] = {n.id: n for n in nodes}
        self.unlock_lanes_needed = unlock_lanes_needed
        # prerequisite pairs (a, b): a must fall before b is attackable
        self.edges: list[tuple[str, str]] = []
        for team in TEAMS:
            for lane in LANES:
                for tier in (1, 2):
                    self.edges.append((node_id(team, lane, tier), node_id(team, lane, tier + 1)))
                self.edges.append((node_id(team, lane, 3), node_id(team, "BASE", 1)))
                self.edges.append((node_id(team, lane, 3), node_id(team, "BASE", 2)))
            for idx in (1, 2):
                self.edges.append((node_id(team, "BASE", idx), node_id(team, "MAIN", 0)))

    @property
    def destroyed(self) -> set[str]:
        return {nid for nid, n in self.nodes.items() if n.destroyed}

    def node(self, structure_id: str) -> StructureNode:
        try:
            return self.nodes[structure_id]
        except KeyError:
            raise KeyError(f"unknown structure id: {structure_id}") from None

    def team_nodes(self, team: str) -> list[StructureNode]:
        return [n for n in self.nodes.values() if n.team == team]

    def alive_count(self, team: str) -> int:
        return sum(1 for n in self.nodes.values() if n.team == team and not n.destroyed)

    def lane_destroyed(self, team: str, lane: str) -> bool:
        return all(self.nodes[node_id(team, lane, t)].destroyed for t in (1, 2, 3))

    def is_attackable(self, structure_id: str) -> bool:
        """Whether the prerequisite structures protecting this one have fallen."""
        n = self.node(structure_id)
        if n.destroyed:
            return False
        if n.kind == LANE_TURRET:
            if n.tier == 1:
                return True
            return self.nodes[node_id(n.team, n.lane, n.tier - 1)].destroyed
        if n.kind == BASE_TURRET:
            open_lanes = sum(1 for lane in LANES if self.lane_destroyed(n.team, lane))
            return open_lanes >= self.unlock_lanes_needed
        # main structure: both base turrets must be down
        return (
            self.nodes[node_id(n.team, "BASE", 1)].destroyed
            and self.nodes[node_id(n.team, "BASE", 2)].destroyed
        )

    def apply_damage(self, structure_id: str, amount: float) -> float:
        """Reduce hp (floor 0) if attackable; returns damage actually applied.

        Damage to a non-attackable structure is a no-op returning 0.0 — the
        caller is responsible for emitting the InvalidAction event.
        """
        n = self.node(structure_id)
        if not self.is_attackable(structure_id):
            return 0.0
        applied = min(n.hp, max(0.0, amount))
        n.hp -= applied
        return applied

    def main_destroyed(self, team: str) -> bool:
        return self.nodes[node_id(team, "MAIN", 0)].destroyed

    def clone(self) -> "StructureGraph":
        g = StructureGraph.__new__(StructureGraph)
        g.nodes = {nid: n.clone() for nid, n in self.nodes.items()}
        g.unlock_lanes_needed = self.unlock_lanes_needed
        g.edges = list(self.edges)
        return g

    def state_records(self) -> list[dict[str, Any]]:
        return [
            {"id": n.id, "hp": n.hp, "max_hp": n.max_hp, "destroyed": n.destroyed}
            for n in sorted(self.nodes.values(), key=lambda s: s.id)
        ]


def node_id(team: str, lane: str, tier: int) -> str:
    if lane == "MAIN":
        return f"{team}/MAIN"
    if lane == "BASE":
        return f"{team}/BASE/{tier}"
    return f"{team}/{lane}/T{tier}"


def build_map(ruleset: dict[str, Any]) -> tuple[MapGeometry, StructureGraph]:
    """Build geometry plus the 24-structure graph from a ruleset.

    Rejects non-positive map dimensions at load.
    """
    map_cfg = ruleset["map"]
    if map_cfg["size"] <= 0 or map_cfg["lane_half_width"] <= 0:
        raise ValueError("map dimensions must be positive")
    geo = MapGeometry(map_cfg)
    s_cfg = ruleset["structures"]
    interval = int(s_cfg["turret_interval_ticks"])
    dmg = float(s_cfg["turret_damage"])
    rng_ = float(s_cfg["turret_range"])

    nodes: list[StructureNode] = []
    for team in TEAMS:
        for lane in LANES:
            for tier, frac in zip((1, 2, 3), s_cfg["lane_turret_fractions"]):
                fraction = frac if team == BLUE else 1.0 - frac
                x, y = geo.point_along_lane(lane, fraction)
                hp = float(s_cfg["lane_turret_hp"][tier - 1])
                nodes.append(StructureNode(
                    id=node_id(team, lane, tier), team=team, lane=lane,
                    kind=LANE_TURRET, tier=tier, x=x, y=y, hp=hp, max_hp=hp,
                    attack_damage=dmg, attack_range=rng_, attack_interval=interval,
                ))
        cx, cy = geo.base_center[team]
        sign = 1.0 if team == BLUE else -1.0
        base_hp = float(s_cfg["base_turret_hp"])
        for idx, (ox, oy) in enumerate(((4.0, 12.0), (12.0, 4.0)), start=1):
            nodes.append(StructureNode(
                id=node_id(team, "BASE", idx), team=team, lane="BASE",
                kind=BASE_TURRET, tier=idx, x=cx + sign * ox, y=cy + sign * oy,
                hp=base_hp, max_hp=base_hp,
                attack_damage=dmg, attack_range=rng_, attack_interval=interval,
            ))
        main_hp = float(s_cfg["main_hp"])
        nodes.append(StructureNode(
            id=node_id(team, "MAIN", 0), team=team, lane="MAIN",
            kind=MAIN_STRUCTURE, tier=0, x=cx + sign * 6.0, y=cy + sign * 6.0,
            hp=main_hp, max_hp=main_hp,
            attack_damage=0.0, attack_range=0.0, attack_interval=interval,
        ))
    graph = StructureGraph(nodes, unlock_lanes_needed=int(s_cfg["base_turret_unlock_lanes"]))
    return geo, graph


def is_attackable(graph: StructureGraph, structure_id: str) -> bool:
    return graph.is_attackable(structure_id)


def apply_structure_damage(graph: StructureGraph, structure_id: str, amount: float) -> float:
    return graph.apply_damage(structure_id, amount)
