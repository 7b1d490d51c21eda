"""Experiment harness: configuration ingestion and validation, Latin-square
counterbalancing, batch execution of simulated sessions, trial-log
persistence, importing human (browser-runner) logs, and report generation.

Everything downstream of a (config, master seed) pair is deterministic:
per-trial RNG streams derive from (master_seed, participant, trial index) and
CSV cells are serialized with round-trippable float repr.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import agent, stats, tasks
from .tasks import TrialEvent, TrialLog
from .techniques import HOMER, LINEAR_OFFSET, PORTAL, TECHNIQUES, TELEPORT

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "PORTALBENCH_OUT"

PRESETS = ("study1_task1", "study1_task2", "study2", "custom")

TRIAL_LOG_COLUMNS = (
    "schema_version", "participant", "technique", "distance_m", "trial", "task",
    "row_type", "event_t_s", "event_kind", "event_detail",
    "selection_time_s", "docking_time_s", "clicks", "scored_selections",
    "error_distance_m", "success",
)

TRIAL_SUMMARY_COLUMNS = (
    "participant", "technique", "distance_m", "trial",
    "selection_time_s", "docking_time_s", "clicks", "error_distance_m", "success",
)


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    preset: str = "custom"
    task: str = "selection"                  # selection | docking | selection+docking
    techniques: tuple[str, ...] = (PORTAL, HOMER, LINEAR_OFFSET)
    distances_m: tuple[float, ...] = (3.0, 6.0, 9.0)
    trials_per_cell: int = 3
    participants: int = 21
    room_half_extent_m: float = 9.0
    arm_reach_m: float | tuple[float, ...] = 0.6143   # scalar or per participant
    controller_distance_m: float = 0.5
    master_seed: int = 7
    agent_params: agent.AgentParams = field(default_factory=agent.AgentParams)
    portal_relocation_enabled: bool = False
    portal_passthrough_enabled: bool = False

    def conditions(self) -> list[tuple[str, float]]:
        return [(t, d) for t in self.techniques for d in self.distances_m]

    def reach_for(self, participant: int) -> float:
        """Calibrated arm reach of a 1-based participant id."""
        if isinstance(self.arm_reach_m, tuple):
            return self.arm_reach_m[(participant - 1) % len(self.arm_reach_m)]
        return self.arm_reach_m

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "preset": self.preset,
            "task": self.task,
            "techniques": list(self.techniques),
            "distances_m": list(self.distances_m),
            "trials_per_cell": self.trials_per_cell,
            "participants": self.participants,
            "room_half_extent_m": self.room_half_extent_m,
            "arm_reach_m": list(self.arm_reach_m)
                if isinstance(self.arm_reach_m, tuple) else self.arm_reach_m,
            "controller_distance_m": self.controller_distance_m,
            "master_seed": self.master_seed,
            "agent": {
                "fitts_a_s": self.agent_params.fitts_a,
                "fitts_b_s_per_bit": self.agent_params.fitts_b,
                "angular_jitter_sigma_rad": self.agent_params.angular_jitter_sigma,
                "hand_tremor_sigma_m": self.agent_params.hand_tremor_sigma,
                "reaction_time_s": self.agent_params.reaction_time,
            },
            "flags": {
                "portal_relocation_enabled": self.portal_relocation_enabled,
                "portal_passthrough_enabled": self.portal_passthrough_enabled,
            },
        }

    def config_hash(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


_PRESET_OVERRIDES: dict[str, dict] = {
    # Study 1 tapping task: 3 techniques x 3 distances x 3 trials, 21 agents.
    "study1_task1": dict(task="selection", techniques=(PORTAL, HOMER, LINEAR_OFFSET),
                         distances_m=(3.0, 6.0, 9.0), trials_per_cell=3,
                         participants=21, arm_reach_m=0.6143),
    # Study 1 docking task: same cells, 27 docking trials per participant.
    "study1_task2": dict(task="docking", techniques=(PORTAL, HOMER, LINEAR_OFFSET),
                         distances_m=(3.0, 6.0, 9.0), trials_per_cell=3,
                         participants=21, arm_reach_m=0.6143),
    # Study 2: portal vs teleportation, selection + docking, 9 trials per cell.
    "study2": dict(task="selection+docking", techniques=(PORTAL, TELEPORT),
                   distances_m=(3.0, 6.0, 9.0), trials_per_cell=9,
                   participants=22, arm_reach_m=0.5453),
    "custom": {},
}


def preset_config(name: str, **overrides) -> ExperimentConfig:
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}")
    merged = dict(_PRESET_OVERRIDES[name])
    merged.update(overrides)
    return ExperimentConfig(preset=name, **merged)


def config_from_dict(raw: dict) -> tuple[ExperimentConfig | None, list[str]]:
    """Parse and validate a config mapping; returns (config, errors) where
    errors carry field paths."""
    errors: list[str] = []

    def fail(path, msg):
        errors.append(f"{path}: {msg}")

    if not isinstance(raw, dict):
        return None, ["<root>: config must be a JSON object"]
    if raw.get("schema_version") != SCHEMA_VERSION:
        fail("schema_version", f"expected {SCHEMA_VERSION}, got {raw.get('schema_version')!r}")
    preset = raw.get("preset", "custom")
    if preset not in PRESETS:
        fail("preset", f"must be one of {PRESETS}")
        preset = "custom"
    base = preset_config(preset) if not errors else ExperimentConfig()

    def number(path, value, default, minimum=None, maximum=None, integer=False):
        if value is None:
            return default
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            fail(path, f"must be a number, got {value!r}")
            return default
        if integer and int(value) != value:
            fail(path, f"must be an integer, got {value!r}")
            return default
        if minimum is not None and value < minimum:
            fail(path, f"must be >= {minimum}")
            return default
        if maximum is not None and value > maximum:
            fail(path, f"must be <= {maximum}")
            return default
        return int(value) if integer else float(value)

    task = raw.get("task", base.task)
    if task not in ("selection", "docking", "selection+docking"):
        fail("task", "must be selection, docking, or selection+docking")
        task = base.task

    techniques = raw.get("techniques", list(base.techniques))
    if (not isinstance(techniques, list) or not techniques
            or any(t not in TECHNIQUES for t in techniques)):
        fail("techniques", f"must be a non-empty list drawn from {TECHNIQUES}")
        techniques = list(base.techniques)

    distances = raw.get("distances_m", list(base.distances_m))
    if not isinstance(distances, list) or not distances:
        fail("distances_m", "must be a non-empty list of positive numbers")
        distances = list(base.distances_m)
    else:
        bad = False
        for i, d in enumerate(distances):
            if isinstance(d, bool) or not isinstance(d, (int, float)) or d <= 0:
                fail(f"distances_m[{i}]", f"must be a positive number, got {d!r}")
                bad = True
        if bad:
            distances = list(base.distances_m)

    agent_raw = raw.get("agent", {})
    if not isinstance(agent_raw, dict):
        fail("agent", "must be an object")
        agent_raw = {}
    params = agent.AgentParams(
        fitts_a=number("agent.fitts_a_s", agent_raw.get("fitts_a_s"),
                       base.agent_params.fitts_a, minimum=0.0),
        fitts_b=number("agent.fitts_b_s_per_bit", agent_raw.get("fitts_b_s_per_bit"),
                       base.agent_params.fitts_b, minimum=0.0),
        angular_jitter_sigma=number("agent.angular_jitter_sigma_rad",
                                    agent_raw.get("angular_jitter_sigma_rad"),
                                    base.agent_params.angular_jitter_sigma,
                                    minimum=0.0, maximum=0.0999),
        hand_tremor_sigma=number("agent.hand_tremor_sigma_m",
                                 agent_raw.get("hand_tremor_sigma_m"),
                                 base.agent_params.hand_tremor_sigma,
                                 minimum=0.0, maximum=0.0999),
        reaction_time=number("agent.reaction_time_s", agent_raw.get("reaction_time_s"),
                             base.agent_params.reaction_time, minimum=0.0),
        seed=0,
    )

    flags = raw.get("flags", {})
    if not isinstance(flags, dict):
        fail("flags", "must be an object")
        flags = {}

    reach_raw = raw.get("arm_reach_m")
    if isinstance(reach_raw, list):
        reach = base.arm_reach_m
        if not reach_raw:
            fail("arm_reach_m", "per-participant list must be non-empty")
        else:
            bad_reach = False
            for i, r in enumerate(reach_raw):
                if isinstance(r, bool) or not isinstance(r, (int, float)) \
                        or not 0.3 <= r <= 1.2:
                    fail(f"arm_reach_m[{i}]", f"must be in [0.3, 1.2], got {r!r}")
                    bad_reach = True
            if not bad_reach:
                reach = tuple(float(r) for r in reach_raw)
    else:
        reach = number("arm_reach_m", reach_raw,
                       base.arm_reach_m if isinstance(base.arm_reach_m, float)
                       else 0.6143, minimum=0.3, maximum=1.2)

    config = replace(
        base,
        preset=preset,
        task=task,
        techniques=tuple(techniques),
        distances_m=tuple(float(d) for d in distances),
        trials_per_cell=number("trials_per_cell", raw.get("trials_per_cell"),
                               base.trials_per_cell, minimum=1, integer=True),
        participants=number("participants", raw.get("participants"),
                            base.participants, minimum=1, integer=True),
        room_half_extent_m=number("room_half_extent_m", raw.get("room_half_extent_m"),
                                  base.room_half_extent_m, minimum=0.5),
        arm_reach_m=reach,
        controller_distance_m=number("controller_distance_m",
                                     raw.get("controller_distance_m"),
                                     base.controller_distance_m, minimum=0.05),
        master_seed=number("master_seed", raw.get("master_seed"),
                           base.master_seed, minimum=0, integer=True),
        agent_params=params,
        portal_relocation_enabled=bool(flags.get("portal_relocation_enabled",
                                                 base.portal_relocation_enabled)),
        portal_passthrough_enabled=bool(flags.get("portal_passthrough_enabled",
                                                  base.portal_passthrough_enabled)),
    )
    return (config if not errors else None), errors


def load_config(path: str | Path) -> tuple[ExperimentConfig | None, list[str]]:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        return None, [f"<file>: {exc}"]
    return config_from_dict(raw)


def save_config(config: ExperimentConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), indent=2) + "\n")


# ---------------------------------------------------------------------------
# Latin-square counterbalancing
# ---------------------------------------------------------------------------

def williams_square(n: int) -> list[list[int]]:
    """Williams row-balanced Latin square (even n): every condition directly
    follows every other exactly once."""
    first = []
    lo, hi = 0, n - 1
    for i in range(n):
        first.append(lo if i % 2 == 0 else hi)
        if i % 2 == 0:
            lo += 1
        else:
            hi -= 1
    return [[(c + r) % n for c in first] for r in range(n)]


def cyclic_square(n: int) -> list[list[int]]:
    return [[(c + r) % n for c in range(n)] for r in range(n)]


def latin_square_orders(n_conditions: int, n_participants: int,
                        seed: int = 0) -> list[list[int]]:
    """Per-participant condition orderings: rows of a Williams square (even n)
    or cyclic Latin square (odd n), cycling when participants exceed n. The
    seed relabels conditions, preserving the Latin structure."""
    if n_conditions < 1:
        raise ValueError("need at least one condition")
    if n_conditions == 1:
        return [[0] for _ in range(n_participants)]
    square = williams_square(n_conditions) if n_conditions % 2 == 0 \
        else cyclic_square(n_conditions)
    relabel = np.random.default_rng(np.random.SeedSequence((seed, n_conditions)))\
        .permutation(n_conditions)
    return [[int(relabel[c]) for c in square[p % n_conditions]]
            for p in range(n_participants)]


# ---------------------------------------------------------------------------
# Session execution
# ---------------------------------------------------------------------------

@dataclass
class SessionRecord:
    participant: int
    config_hash: str
    condition_order: list[tuple[str, float]]
    logs: list[TrialLog]


def _run_trial(config: ExperimentConfig, participant: int, technique: str,
               distance: float, trial_in_cell: int, global_trial: int) -> list[TrialLog]:
    params = replace(config.agent_params, seed=config.master_seed)
    rng = agent.rng_for(params, participant, global_trial)
    kwargs = dict(reach=config.reach_for(participant),
                  room_half_extent=config.room_half_extent_m,
                  controller_distance=config.controller_distance_m)
    logs = []
    if config.task in ("selection",):
        layout = tasks.build_selection_layout(distance)
        logs.append(agent.simulate_selection_trial(
            technique, layout, params, participant=participant,
            trial=trial_in_cell, rng=rng, **kwargs))
    if config.task in ("docking", "selection+docking"):
        docking = tasks.build_docking_trial(distance, rng)
        logs.append(agent.simulate_docking_trial(
            technique, docking, params, participant=participant,
            trial_index=trial_in_cell, rng=rng, **kwargs))
    return logs


def run_participant(config: ExperimentConfig, participant: int) -> SessionRecord:
    """Simulate one participant's full session in their counterbalanced
    condition order."""
    conditions = config.conditions()
    orders = latin_square_orders(len(conditions), config.participants,
                                 seed=config.master_seed)
    order = [conditions[i] for i in orders[participant - 1]]
    logs: list[TrialLog] = []
    global_trial = 0
    for technique, distance in order:
        for trial_in_cell in range(1, config.trials_per_cell + 1):
            logs.extend(_run_trial(config, participant, technique, distance,
                                   trial_in_cell, global_trial))
            global_trial += 1
    return SessionRecord(participant=participant, config_hash=config.config_hash(),
                         condition_order=order, logs=logs)


def run_sessions(config: ExperimentConfig, parallel: int = 1) -> list[SessionRecord]:
    ids = list(range(1, config.participants + 1))
    if parallel <= 1:
        return [run_participant(config, p) for p in ids]
    with ProcessPoolExecutor(max_workers=parallel) as pool:
        sessions = list(pool.map(run_participant, [config] * len(ids), ids))
    return sorted(sessions, key=lambda s: s.participant)


# ---------------------------------------------------------------------------
# CSV persistence (the TrialLog interchange schema)
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_trial_logs_csv(path: str | Path, sessions: list[SessionRecord]) -> None:
    """One row per event plus one summary row per trial, schema-versioned."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRIAL_LOG_COLUMNS)
        for session in sessions:
            for log in session.logs:
                head = [SCHEMA_VERSION, log.participant, log.technique,
                        _fmt(log.distance_m), log.trial, log.task]
                for e in log.events:
                    writer.writerow(head + ["event", _fmt(e.t), e.kind, e.detail,
                                            "", "", "", "", "", ""])
                writer.writerow(head + ["summary", "", "", "",
                                        _fmt(log.selection_time_s),
                                        _fmt(log.docking_time_s),
                                        log.clicks, log.scored_selections,
                                        _fmt(log.error_distance_m),
                                        _fmt(log.success)])


class TrialLogImportError(ValueError):
    """Trial-log import failure (schema or integrity), with the row number."""


def read_trial_logs_csv(path: str | Path) -> list[SessionRecord]:
    """Parse a trial-log CSV back into session records, validating the schema
    version and per-trial timestamp monotonicity; failures name the row."""
    logs_by_key: dict[tuple, TrialLog] = {}
    participants: dict[int, list[TrialLog]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != TRIAL_LOG_COLUMNS:
            raise TrialLogImportError(f"row 1: unexpected header {header!r}")
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(TRIAL_LOG_COLUMNS):
                raise TrialLogImportError(f"row {row_no}: expected {len(TRIAL_LOG_COLUMNS)} columns")
            rec = dict(zip(TRIAL_LOG_COLUMNS, row))
            if rec["schema_version"] != str(SCHEMA_VERSION):
                raise TrialLogImportError(
                    f"row {row_no}: schema_version {rec['schema_version']!r}, "
                    f"expected {SCHEMA_VERSION}")
            try:
                participant = int(rec["participant"])
                distance = float(rec["distance_m"])
                trial = int(rec["trial"])
            except ValueError as exc:
                raise TrialLogImportError(f"row {row_no}: {exc}") from exc
            key = (participant, rec["technique"], distance, trial, rec["task"])
            log = logs_by_key.get(key)
            if log is None:
                log = TrialLog(participant=participant, technique=rec["technique"],
                               distance_m=distance, trial=trial, task=rec["task"])
                logs_by_key[key] = log
                participants.setdefault(participant, []).append(log)
            if rec["row_type"] == "event":
                try:
                    log.add_event(float(rec["event_t_s"]), rec["event_kind"],
                                  rec["event_detail"])
                except ValueError as exc:
                    raise TrialLogImportError(f"row {row_no}: {exc}") from exc
            elif rec["row_type"] == "summary":
                log.selection_time_s = float(rec["selection_time_s"]) \
                    if rec["selection_time_s"] else None
                log.docking_time_s = float(rec["docking_time_s"]) \
                    if rec["docking_time_s"] else None
                log.clicks = int(rec["clicks"] or 0)
                log.scored_selections = int(rec["scored_selections"] or 0)
                log.error_distance_m = float(rec["error_distance_m"]) \
                    if rec["error_distance_m"] else None
                log.success = rec["success"] == "1"
            else:
                raise TrialLogImportError(f"row {row_no}: unknown row_type {rec['row_type']!r}")
    return [SessionRecord(participant=p, config_hash="", condition_order=[],
                          logs=logs)
            for p, logs in sorted(participants.items())]


def import_human_logs(path: str | Path) -> list[SessionRecord]:
    """Alias with the external-interface name: imported sessions feed the same
    analysis pipeline as simulated ones."""
    return read_trial_logs_csv(path)


# ---------------------------------------------------------------------------
# Summaries and reports
# ---------------------------------------------------------------------------

def _cells(sessions: list[SessionRecord]):
    """(participant, technique, distance) -> list of TrialLogs."""
    cells: dict[tuple[int, str, float], list[TrialLog]] = {}
    for session in sessions:
        for log in session.logs:
            cells.setdefault((log.participant, log.technique, log.distance_m),
                             []).append(log)
    return cells


def _participant_cell_value(logs: list[TrialLog], dv: str) -> float | None:
    if dv == "selection_time_s":
        vals = [log.selection_time_s for log in logs
                if log.task == "selection" and log.selection_time_s is not None]
    elif dv == "grab_time_s":
        vals = [log.selection_time_s for log in logs
                if log.task == "docking" and log.selection_time_s is not None]
    elif dv == "docking_time_s":
        vals = [log.docking_time_s for log in logs if log.docking_time_s is not None]
    elif dv == "error_distance_m":
        vals = [log.error_distance_m for log in logs if log.error_distance_m is not None]
    elif dv == "error_rate":
        sel = [log for log in logs if log.task == "selection" and log.scored_selections]
        return stats.error_rate(sel) if sel else None
    elif dv == "throughput_bps":
        times = [log.selection_time_s for log in logs
                 if log.task == "selection" and log.selection_time_s is not None]
        return stats.throughput(times, tasks.compute_id(
            tasks.RING_DIAMETER, tasks.TARGET_WIDTH)) if times else None
    else:
        raise ValueError(f"unknown dependent variable {dv!r}")
    return float(np.mean(vals)) if vals else None


def dv_matrix(sessions: list[SessionRecord], techniques: list[str],
              distances: list[float], dv: str) -> np.ndarray | None:
    """(participants, technique, distance) cell-mean array, or None when any
    cell is empty (incomplete design)."""
    cells = _cells(sessions)
    participants = sorted({s.participant for s in sessions})
    out = np.full((len(participants), len(techniques), len(distances)), np.nan)
    for i, p in enumerate(participants):
        for j, tech in enumerate(techniques):
            for k, d in enumerate(distances):
                logs = cells.get((p, tech, d))
                if logs:
                    value = _participant_cell_value(logs, dv)
                    if value is not None:
                        out[i, j, k] = value
    return None if np.isnan(out).any() else out


def condition_summaries(sessions: list[SessionRecord], dv: str
                        ) -> list[stats.ConditionSummary]:
    cells = _cells(sessions)
    grouped: dict[tuple[str, float], list[float]] = {}
    rates: dict[tuple[str, float], list[TrialLog]] = {}
    for (participant, tech, d), logs in cells.items():
        value = _participant_cell_value(logs, dv)
        if value is not None:
            grouped.setdefault((tech, d), []).append(value)
        rates.setdefault((tech, d), []).extend(
            log for log in logs if log.task == "selection" and log.scored_selections)
    out = []
    for (tech, d) in sorted(grouped):
        values = grouped[(tech, d)]
        mean, ci = stats.mean_ci95(values)
        tp = err = None
        if dv == "selection_time_s" and rates.get((tech, d)):
            sel_logs = rates[(tech, d)]
            err = stats.error_rate(sel_logs)
            times = [log.selection_time_s for log in sel_logs
                     if log.selection_time_s is not None]
            if times:
                tp = stats.throughput(times, tasks.compute_id(
                    tasks.RING_DIAMETER, tasks.TARGET_WIDTH))
        out.append(stats.ConditionSummary(technique=tech, distance_m=d, n=len(values),
                                          mean=mean, ci95=ci, throughput_bps=tp,
                                          error_rate=err))
    return out


_DVS_BY_TASK = {
    "selection": ("selection_time_s", "error_rate", "throughput_bps"),
    "docking": ("grab_time_s", "docking_time_s", "error_distance_m"),
    "selection+docking": ("grab_time_s", "docking_time_s", "error_distance_m"),
}


@dataclass
class BatchResult:
    sessions: list[SessionRecord]
    out_dir: Path
    files: list[Path]
    notes: list[str]


def generate_report(sessions: list[SessionRecord], out_dir: str | Path,
                    dvs: tuple[str, ...] | None = None) -> tuple[list[Path], list[str]]:
    """Condition-summary and ANOVA CSVs plus a plain-text report; returns the
    written paths and informational notes."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files: list[Path] = []
    notes: list[str] = []
    techniques = sorted({log.technique for s in sessions for log in s.logs})
    distances = sorted({log.distance_m for s in sessions for log in s.logs})
    all_tasks = {log.task for s in sessions for log in s.logs}
    if dvs is None:
        dvs = ()
        if "selection" in all_tasks:
            dvs += _DVS_BY_TASK["selection"]
        if "docking" in all_tasks:
            dvs += _DVS_BY_TASK["docking"]

    report_lines = [f"participants: {len({s.participant for s in sessions})}",
                    f"techniques: {', '.join(techniques)}",
                    f"distances_m: {', '.join(_fmt(d) for d in distances)}", ""]

    summary_path = out_dir / "condition_summary.csv"
    with open(summary_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("dv", "technique", "distance_m", "n", "mean", "ci95",
                         "throughput_bps", "error_rate"))
        for dv in dvs:
            for s in condition_summaries(sessions, dv):
                writer.writerow((dv, s.technique, _fmt(s.distance_m), s.n,
                                 _fmt(s.mean), _fmt(s.ci95),
                                 _fmt(s.throughput_bps), _fmt(s.error_rate)))
    files.append(summary_path)

    n_participants = len({s.participant for s in sessions})
    for dv in dvs:
        matrix = dv_matrix(sessions, techniques, distances, dv)
        if matrix is None:
            notes.append(f"anova[{dv}]: skipped (incomplete cells)")
            continue
        if n_participants < 3 or len(techniques) < 2 or len(distances) < 2:
            notes.append(f"anova[{dv}]: skipped (needs >= 3 participants and "
                         ">= 2 levels per factor)")
            continue
        result = stats.rm_anova_two_way(matrix)
        anova_path = out_dir / f"anova_{dv}.csv"
        with open(anova_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(stats.ANOVA_CSV_HEADER)
            for row in stats.anova_csv_rows(result):
                writer.writerow(tuple(_fmt(v) for v in row))
        files.append(anova_path)
        report_lines.append(f"[{dv}]")
        for row in result.rows:
            report_lines.append(
                f"  {row.effect}: F({_fmt(row.df_effect)}, {_fmt(row.df_error)}) = "
                f"{row.f_value:.3f}, p = {row.p_value:.4g}, "
                f"gg_eps = {row.gg_epsilon:.3f}, eta_p2 = {row.partial_eta_sq:.3f}")
        # Tukey on the technique marginals, against the technique error term.
        tech_cells = matrix.mean(axis=2)
        n, a = tech_cells.shape
        subj = tech_cells.mean(axis=1)
        ss_err = float(((tech_cells - tech_cells.mean(axis=0)[None, :]
                         - subj[:, None] + tech_cells.mean()) ** 2).sum())
        df_err = (a - 1) * (n - 1)
        ms_err = ss_err / df_err
        for cmp_ in stats.tukey_hsd(tech_cells.mean(axis=0), ms_err, df_err, n):
            report_lines.append(
                f"  tukey {techniques[cmp_.level_a]} vs {techniques[cmp_.level_b]}: "
                f"diff = {cmp_.difference:.4g}, p = {cmp_.p_value:.4g}")
        report_lines.append("")

    for note in notes:
        report_lines.append(f"note: {note}")
    report_path = out_dir / "report.txt"
    report_path.write_text("\n".join(report_lines) + "\n")
    files.append(report_path)
    return files, notes


def write_trial_summary_csv(path: str | Path, sessions: list[SessionRecord]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRIAL_SUMMARY_COLUMNS)
        for session in sessions:
            for log in session.logs:
                writer.writerow((log.participant, log.technique, _fmt(log.distance_m),
                                 log.trial, _fmt(log.selection_time_s),
                                 _fmt(log.docking_time_s), log.clicks,
                                 _fmt(log.error_distance_m), _fmt(log.success)))


def default_out_dir(explicit: str | None = None) -> Path:
    if explicit:
        return Path(explicit)
    return Path(os.environ.get(OUTPUT_DIR_ENV, "portalbench_out"))


def run_batch(config: ExperimentConfig, out_dir: str | Path,
              parallel: int = 1) -> BatchResult:
    """Execute the configured batch and write trial logs, trial summaries,
    condition summaries, ANOVA tables, and the text report."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    sessions = run_sessions(config, parallel=parallel)
    logs_path = out_dir / "trial_logs.csv"
    write_trial_logs_csv(logs_path, sessions)
    summary_path = out_dir / "trial_summary.csv"
    write_trial_summary_csv(summary_path, sessions)
    save_config(config, out_dir / "config.json")
    files, notes = generate_report(sessions, out_dir)
    return BatchResult(sessions=sessions,
                       out_dir=out_dir,
                       files=[logs_path, summary_path, out_dir / "config.json"] + files,
                       notes=notes)
