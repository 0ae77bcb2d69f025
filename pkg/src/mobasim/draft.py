"""Pick-and-ban state machine (blind and tournament modes) and a greedy
counter-pick recommender.

Tournament mode walks an alternating pick/ban sequence with global
exclusivity: a hero picked or banned by anyone is gone for everyone, so the
sequence needs a pool of at least picks+bans heroes. Blind mode is five
hidden picks per team; the same hero may appear once on each side.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Sequence

import numpy as np

from .mapgraph import BLUE, RED, enemy
from .ruleset import default_ruleset

BLIND = "blind"
TOURNAMENT = "tournament"


class DraftError(Exception):
    pass


class IllegalHero(DraftError):
    """Hero unavailable: unknown, already taken, or duplicated in-team."""


class NotYourTurn(DraftError):
    pass


class WrongActionKind(DraftError):
    """A pick was submitted on a ban step or vice versa."""


class DraftComplete(DraftError):
    pass


class PoolTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class DraftAction:
    kind: str            # "pick" | "ban"
    hero: str

    @staticmethod
    def pick(hero: str) -> "DraftAction":
        return DraftAction("pick", hero)

    @staticmethod
    def ban(hero: str) -> "DraftAction":
        return DraftAction("ban", hero)


@dataclass(frozen=True)
class DraftState:
    """Immutable draft snapshot; apply_action returns the successor."""

    mode: str
    pool: tuple[str, ...]
    sequence: tuple[tuple[str, str], ...]
    step: int = 0
    picks_blue: tuple[str, ...] = ()
    picks_red: tuple[str, ...] = ()
    bans_blue: tuple[str, ...] = ()
    bans_red: tuple[str, ...] = ()
    team_size: int = 5

    def picks(self, team: str) -> tuple[str, ...]:
        return self.picks_blue if team == BLUE else self.picks_red

    def bans(self, team: str) -> tuple[str, ...]:
        return self.bans_blue if team == BLUE else self.bans_red

    @property
    def all_taken(self) -> frozenset[str]:
        return frozenset(self.picks_blue + self.picks_red + self.bans_blue + self.bans_red)

    @property
    def complete(self) -> bool:
        if self.mode == TOURNAMENT:
            return self.step >= len(self.sequence)
        return len(self.picks_blue) >= self.team_size and len(self.picks_red) >= self.team_size

    def turn(self) -> tuple[str, str] | None:
        """(team, kind) due next in tournament mode; None when done or blind."""
        if self.mode == TOURNAMENT and self.step < len(self.sequence):
            return self.sequence[self.step]
        return None

    def rosters(self) -> dict[str, tuple[str, ...]]:
        if not self.complete:
            raise DraftError("draft not complete")
        return {BLUE: self.picks_blue, RED: self.picks_red}


def new_draft(mode: str, pool: Sequence[str],
              sequence: Sequence[Sequence[str]] | None = None,
              team_size: int = 5) -> DraftState:
    """Start a draft over a hero pool.

    Tournament requires enough heroes for every pick and ban in the sequence
    (they are globally exclusive); blind requires a full team per side.
    """
    if mode not in (BLIND, TOURNAMENT):
        raise ValueError(f"unknown draft mode: {mode}")
    pool_t = tuple(pool)
    if len(set(pool_t)) != len(pool_t):
        raise ValueError("hero pool contains duplicates")
    if len(pool_t) < 2 * team_size:
        raise PoolTooSmall(
            f"pool of {len(pool_t)} cannot support a {team_size}v{team_size} draft")
    if mode == TOURNAMENT:
        if sequence is None:
            sequence = default_ruleset()["draft"]["tournament_sequence"]
        seq = tuple((str(t), str(k)) for t, k in sequence)
        for team, kind in seq:
            if team not in (BLUE, RED) or kind not in ("pick", "ban"):
                raise ValueError(f"bad sequence step: {(team, kind)}")
        for team in (BLUE, RED):
            if sum(1 for s_team, k in seq if s_team == team and k == "pick") != team_size:
                raise ValueError(f"sequence must give {team} exactly {team_size} picks")
        needed = len(seq)   # every step consumes one distinct hero
        if len(pool_t) < needed:
            raise PoolTooSmall(
                f"tournament sequence needs {needed} distinct heroes, pool has {len(pool_t)}")
    else:
        seq = ()
    return DraftState(mode=mode, pool=pool_t, sequence=seq, team_size=team_size)


def legal_actions(draft: DraftState, team: str) -> list[DraftAction]:
    """Every action `team` may legally submit right now."""
    if draft.complete:
        return []
    if draft.mode == TOURNAMENT:
        turn_team, kind = draft.sequence[draft.step]
        if team != turn_team:
            return []
        taken = draft.all_taken
        return [DraftAction(kind, h) for h in draft.pool if h not in taken]
    if len(draft.picks(team)) >= draft.team_size:
        return []
    own = set(draft.picks(team))
    return [DraftAction.pick(h) for h in draft.pool if h not in own]


def apply_action(draft: DraftState, team: str, action: DraftAction) -> DraftState:
    """Advance the state machine by one action; raises typed errors."""
    if draft.complete:
        raise DraftComplete("draft already complete")
    if team not in (BLUE, RED):
        raise ValueError(f"unknown team: {team}")
    if action.hero not in draft.pool:
        raise IllegalHero(f"{action.hero} is not in the hero pool")

    if draft.mode == TOURNAMENT:
        turn_team, kind = draft.sequence[draft.step]
        if team != turn_team:
            raise NotYourTurn(f"step {draft.step} belongs to {turn_team}")
        if action.kind != kind:
            raise WrongActionKind(f"step {draft.step} expects a {kind}")
        if action.hero in draft.all_taken:
            raise IllegalHero(f"{action.hero} already picked or banned")
        updates: dict[str, Any] = {"step": draft.step + 1}
        if kind == "pick":
            key = "picks_blue" if team == BLUE else "picks_red"
        else:
            key = "bans_blue" if team == BLUE else "bans_red"
        updates[key] = getattr(draft, key) + (action.hero,)
        return replace(draft, **updates)

    # blind: simultaneous hidden picks, no bans
    if action.kind != "pick":
        raise WrongActionKind("blind mode has no bans")
    if len(draft.picks(team)) >= draft.team_size:
        raise NotYourTurn(f"{team} roster already complete")
    if action.hero in draft.picks(team):
        raise IllegalHero(f"{action.hero} already picked by {team}")
    key = "picks_blue" if team == BLUE else "picks_red"
    return replace(draft, **{key: getattr(draft, key) + (action.hero,)})


def public_view(draft: DraftState, viewer: str) -> dict[str, Any]:
    """What `viewer` may see: everything in tournament, own side in blind."""
    if draft.mode == TOURNAMENT:
        return {
            "mode": draft.mode,
            "step": draft.step,
            "picks": {BLUE: list(draft.picks_blue), RED: list(draft.picks_red)},
            "bans": {BLUE: list(draft.bans_blue), RED: list(draft.bans_red)},
            "complete": draft.complete,
        }
    foe = enemy(viewer)
    view: dict[str, Any] = {
        "mode": draft.mode,
        "picks": {viewer: list(draft.picks(viewer))},
        "enemy_pick_count": len(draft.picks(foe)),
        "complete": draft.complete,
    }
    if draft.complete:
        view["picks"][foe] = list(draft.picks(foe))
    return view


@dataclass
class CounterMatrix:
    """Antisymmetric advantage scores between heroes, entries in [-1, 1]."""

    heroes: tuple[str, ...]
    values: np.ndarray
    tolerance: float = 1e-6

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        n = len(self.heroes)
        if self.values.shape != (n, n):
            raise ValueError(f"matrix shape {self.values.shape} != ({n}, {n})")
        if np.max(np.abs(self.values + self.values.T)) > self.tolerance:
            raise ValueError("matrix is not antisymmetric within tolerance")
        if np.max(np.abs(np.diag(self.values))) > self.tolerance:
            raise ValueError("matrix diagonal must be zero")
        if np.max(np.abs(self.values)) > 1.0 + self.tolerance:
            raise ValueError("entries must lie in [-1, 1]")
        self._index = {h: i for i, h in enumerate(self.heroes)}

    def advantage(self, hero: str, versus: str) -> float:
        return float(self.values[self._index[hero], self._index[versus]])

    def to_record(self) -> dict[str, Any]:
        return {"heroes": list(self.heroes),
                "values": [[round(v, 6) for v in row] for row in self.values.tolist()]}

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "CounterMatrix":
        return cls(heroes=tuple(rec["heroes"]), values=np.array(rec["values"], dtype=float))


def recommend_action(draft: DraftState, matrix: CounterMatrix,
                     team: str | None = None) -> DraftAction:
    """Greedy one-ply baseline: picks maximize summed advantage versus known
    enemy picks, bans remove the hero most dangerous to the own roster.

    With no reference picks the score falls back to the hero's mean advantage
    over the whole pool. Ties break toward the lowest hero id.
    """
    if team is None:
        turn = draft.turn()
        if turn is not None:
            team = turn[0]
        else:
            team = BLUE if len(draft.picks_blue) < draft.team_size else RED
    actions = legal_actions(draft, team)
    if not actions:
        raise DraftError(f"no legal actions for {team}")
    kind = actions[0].kind
    foe = enemy(team)
    if kind == "pick":
        reference = draft.picks(foe) if draft.mode == TOURNAMENT else ()
    else:
        reference = draft.picks(team)

    def score(hero: str) -> float:
        if reference:
            return sum(matrix.advantage(hero, r) for r in reference)
        idx = matrix._index[hero]
        return float(np.mean(matrix.values[idx]))

    best = min(actions, key=lambda a: (-score(a.hero), a.hero))
    return DraftAction(kind, best.hero)
