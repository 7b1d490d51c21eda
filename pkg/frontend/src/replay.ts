/** Deterministic trace replay: the runner records every effective click and
 * manipulation pose; replaying a trace re-derives all outcomes from the task
 * math alone. The host toolkit replays the same JSON, and the two must agree
 * (golden-trace equivalence). */

import { Pose, Quat, Vec3, dist, raySphere } from "./math.js";
import { TrialLog } from "./logging.js";
import {
  SelectionTrial,
  buildSelectionLayout,
  dockingError,
  isDocked,
  regularTetrahedron,
  DOCK_TOLERANCE,
} from "./tasks.js";

export const TRACE_SCHEMA_VERSION = 1;

export interface TraceRay {
  origin: Vec3;
  direction: Vec3;
}

export interface TraceClick {
  t: number;
  ray?: TraceRay;
  point?: Vec3;
}

export interface SelectionTraceTrial {
  task: "selection";
  distance_m: number;
  clicks: TraceClick[];
}

export interface TraceMove {
  t: number;
  position: Vec3;
  orientation_wxyz: Quat;
}

export interface DockingTraceTrial {
  task: "docking";
  distance_m: number;
  edge_m?: number;
  tolerance_m?: number;
  dock_position: Vec3;
  dock_orientation_wxyz: Quat;
  target_position: Vec3;
  target_orientation_wxyz: Quat;
  moves: TraceMove[];
  confirm_t: number;
}

export type TraceTrial = SelectionTraceTrial | DockingTraceTrial;

export interface Trace {
  schema_version: number;
  participant: number;
  technique: string;
  trials: TraceTrial[];
}

export interface SelectionOutcome {
  task: "selection";
  hits: (number | null)[];
  scored_selections: number;
  scored_clicks: number;
  complete: boolean;
}

export interface DockingOutcome {
  task: "docking";
  error_m: number;
  docked: boolean;
}

export type Outcome = SelectionOutcome | DockingOutcome;

export function pickSphereByRay(
  spheres: { center: Vec3; radius: number }[], origin: Vec3, direction: Vec3,
): number | null {
  let bestT: number | null = null;
  let bestId: number | null = null;
  spheres.forEach((s, i) => {
    const t = raySphere(origin, direction, s.center, s.radius);
    if (t !== null && (bestT === null || t < bestT)) {
      bestT = t;
      bestId = i;
    }
  });
  return bestId;
}

export function pickSphereByPoint(
  spheres: { center: Vec3; radius: number }[], point: Vec3,
): number | null {
  let bestD: number | null = null;
  let bestId: number | null = null;
  spheres.forEach((s, i) => {
    const d = dist(point, s.center);
    if (d <= s.radius && (bestD === null || d < bestD)) {
      bestD = d;
      bestId = i;
    }
  });
  return bestId;
}

export function replaySelectionTrial(
  trial: SelectionTraceTrial, participant: number, technique: string, index = 0,
): { log: TrialLog; outcome: SelectionOutcome } {
  const layout = buildSelectionLayout(trial.distance_m);
  const log = new TrialLog(participant, technique, trial.distance_m, index, "selection");
  const state = new SelectionTrial(layout, 0);
  log.addEvent(0, "trial_start", `distance=${trial.distance_m}`);
  const hits: (number | null)[] = [];
  for (const click of trial.clicks) {
    const hit = click.ray
      ? pickSphereByRay(layout.spheres, click.ray.origin, click.ray.direction)
      : pickSphereByPoint(layout.spheres, click.point as Vec3);
    hits.push(hit);
    const target = state.currentTarget();
    const advanced = state.advance(hit, click.t);
    log.addEvent(click.t, "click", advanced ? `hit target=${target}` : `miss target=${target} hit=${hit}`);
    if (advanced && state.phase !== "await_center" && target !== 0) {
      log.addEvent(click.t, "selection", `sphere=${target}`);
    } else if (advanced && target === 0) {
      log.addEvent(click.t, "center_selected", "clicks=1");
    }
  }
  log.clicks = state.scoredClicks;
  log.scoredSelections = state.scoredSelections;
  log.success = state.phase === "complete";
  if (state.scoredTimes.length > 0) {
    log.selectionTimeS =
      state.scoredTimes.reduce((a, b) => a + b, 0) / state.scoredTimes.length;
  }
  if (log.success) log.addEvent(state.lastSelectionT, "trial_complete", "");
  return {
    log,
    outcome: {
      task: "selection",
      hits,
      scored_selections: state.scoredSelections,
      scored_clicks: state.scoredClicks,
      complete: state.phase === "complete",
    },
  };
}

export function replayDockingTrial(
  trial: DockingTraceTrial, participant: number, technique: string, index = 0,
): { log: TrialLog; outcome: DockingOutcome } {
  const edge = trial.edge_m ?? 0.5;
  const tolerance = trial.tolerance_m ?? DOCK_TOLERANCE;
  const targetPose: Pose = { position: trial.target_position, orientation: trial.target_orientation_wxyz };
  const target = regularTetrahedron(edge, targetPose);
  let dockPose: Pose = { position: trial.dock_position, orientation: trial.dock_orientation_wxyz };
  const log = new TrialLog(participant, technique, trial.distance_m, index, "docking");
  log.addEvent(0, "trial_start", `distance=${trial.distance_m}`);
  for (const move of trial.moves) {
    dockPose = { position: move.position, orientation: move.orientation_wxyz };
    log.addEvent(move.t, "move", "");
  }
  const dock = regularTetrahedron(edge, dockPose);
  const error = dockingError(dock, target);
  const docked = isDocked(dock, target, tolerance);
  log.addEvent(trial.confirm_t, docked ? "docked" : "dock_failed", "confirm");
  log.dockingTimeS = trial.confirm_t;
  log.errorDistanceM = error;
  log.success = docked;
  return { log, outcome: { task: "docking", error_m: error, docked } };
}

export function replayTrace(trace: Trace): { logs: TrialLog[]; outcomes: Outcome[] } {
  if (trace.schema_version !== TRACE_SCHEMA_VERSION) {
    throw new Error(`unsupported trace schema ${trace.schema_version}`);
  }
  const logs: TrialLog[] = [];
  const outcomes: Outcome[] = [];
  trace.trials.forEach((trial, i) => {
    const result = trial.task === "selection"
      ? replaySelectionTrial(trial, trace.participant, trace.technique, i)
      : replayDockingTrial(trial, trace.participant, trace.technique, i);
    logs.push(result.log);
    outcomes.push(result.outcome);
  });
  return { logs, outcomes };
}
