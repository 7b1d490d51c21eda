"""Replay recorded input traces through the core task logic.

The browser task runner records every effective click (a world-space ray for
ray techniques, a world-space touch point for hand/portal selection) and
every manipulation pose. Replaying the same trace here must reproduce the
runner's selection outcomes and docking errors exactly; that equivalence is
what licenses the runner's own in-browser math.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import Pose, Ray, Sphere, Tetrahedron, ray_sphere_intersect
from .tasks import (
    DOCK_TOLERANCE,
    TrialLog,
    advance_selection,
    build_selection_layout,
    docking_error,
    is_docked,
    start_selection_trial,
)

TRACE_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SelectionReplay:
    log: TrialLog
    hits: tuple[int | None, ...]     # sphere id per click, None for air clicks


@dataclass(frozen=True)
class DockingReplay:
    log: TrialLog
    error_m: float
    docked: bool


def pick_sphere_by_ray(spheres, origin, direction) -> int | None:
    """Nearest sphere the ray hits, or None."""
    ray = Ray(np.asarray(origin, dtype=float), np.asarray(direction, dtype=float))
    best_t, best_id = None, None
    for i, s in enumerate(spheres):
        t = ray_sphere_intersect(ray, s)
        if t is not None and (best_t is None or t < best_t):
            best_t, best_id = t, i
    return best_id


def pick_sphere_by_point(spheres, point) -> int | None:
    """Sphere containing the touch point (nearest center when overlapping)."""
    p = np.asarray(point, dtype=float)
    best_d, best_id = None, None
    for i, s in enumerate(spheres):
        d = float(np.linalg.norm(p - s.center))
        if d <= s.radius and (best_d is None or d < best_d):
            best_d, best_id = d, i
    return best_id


def replay_selection_trial(trial: dict, participant: int, technique: str,
                           trial_index: int = 0) -> SelectionReplay:
    layout = build_selection_layout(float(trial["distance_m"]))
    log = TrialLog(participant=participant, technique=technique,
                   distance_m=float(trial["distance_m"]), trial=trial_index,
                   task="selection")
    state = start_selection_trial(layout, log, 0.0)
    hits: list[int | None] = []
    for click in trial["clicks"]:
        if "ray" in click:
            hit = pick_sphere_by_ray(layout.spheres, click["ray"]["origin"],
                                     click["ray"]["direction"])
        else:
            hit = pick_sphere_by_point(layout.spheres, click["point"])
        hits.append(hit)
        state = advance_selection(state, hit, float(click["t"]), log)
    return SelectionReplay(log=log, hits=tuple(hits))


def _tetra(position, orientation_wxyz, edge: float) -> Tetrahedron:
    pose = Pose(np.asarray(position, dtype=float),
                np.asarray(orientation_wxyz, dtype=float))
    return Tetrahedron.regular(edge, pose)


def replay_docking_trial(trial: dict, participant: int, technique: str,
                         trial_index: int = 0) -> DockingReplay:
    edge = float(trial.get("edge_m", 0.5))
    tolerance = float(trial.get("tolerance_m", DOCK_TOLERANCE))
    target = _tetra(trial["target_position"], trial["target_orientation_wxyz"], edge)
    log = TrialLog(participant=participant, technique=technique,
                   distance_m=float(trial["distance_m"]), trial=trial_index,
                   task="docking")
    log.add_event(0.0, "trial_start", f"distance={float(trial['distance_m']):g}")
    dock = _tetra(trial["dock_position"], trial["dock_orientation_wxyz"], edge)
    for move in trial["moves"]:
        dock = _tetra(move["position"], move["orientation_wxyz"], edge)
        log.add_event(float(move["t"]), "move", "")
    confirm_t = float(trial["confirm_t"])
    error = docking_error(dock, target)
    docked = is_docked(dock, target, tolerance)
    log.add_event(confirm_t, "docked" if docked else "dock_failed", "confirm")
    log.docking_time_s = confirm_t
    log.error_distance_m = error
    log.success = docked
    return DockingReplay(log=log, error_m=error, docked=docked)


def load_trace(path: str | Path) -> dict:
    trace = json.loads(Path(path).read_text())
    if trace.get("schema_version") != TRACE_SCHEMA_VERSION:
        raise ValueError(f"unsupported trace schema {trace.get('schema_version')!r}")
    return trace


def replay_trace(trace: dict):
    """Replay every trial in a recorded trace; returns the per-trial replays
    in order."""
    participant = int(trace.get("participant", 0))
    technique = trace.get("technique", "portal")
    out = []
    for i, trial in enumerate(trace["trials"]):
        if trial["task"] == "selection":
            out.append(replay_selection_trial(trial, participant, technique, i))
        elif trial["task"] == "docking":
            out.append(replay_docking_trial(trial, participant, technique, i))
        else:
            raise ValueError(f"unknown task {trial['task']!r}")
    return out
