/** Browser task-runner app: a human performs the tapping and docking trials
 * with mouse/keyboard-mapped controller input; trial logs download in the
 * harness CSV schema. URL parameters: ?preset=study1_task1&participant=1
 * (presets: study1_task1, study1_task2, study2; techniques portal, homer,
 * linear_offset, teleport). */

import {
  Pose, Quat, Vec3, add, dist, normalize, quatMul, scale, sub,
  raySphere, teleportArcGroundHit,
} from "./math.js";
import {
  ControllerState, MAPPING_HELP, applyKeyRotation, applyPointerDelta, applyWheel,
  controllerPosition, initialController, rayDirection,
} from "./input.js";
import { Condition, conditionOrder, PRESET_ORDERS } from "./latin.js";
import { customConditionOrder, parseConfig } from "./config.js";
import { TrialLog, downloadCsv, fromCsv } from "./logging.js";
import {
  SelectionTrial, buildSelectionLayout, dockingError, isDocked,
  regularTetrahedron, DOCK_EDGE, DOCK_TOLERANCE,
} from "./tasks.js";
import {
  HomerGrab, PortalPlacement, homerGrab, homerTrack, linearOffsetCursor,
  linearOffsetGain, placePortal, portalRemotePoint,
} from "./techniques.js";
import { Trace, TraceClick, TraceMove } from "./replay.js";
import { TaskScene, dockVertices } from "./scene.js";

const params = new URLSearchParams(window.location.search);
const preset = params.get("preset") ?? "study1_task1";
const participant = Number(params.get("participant") ?? "1");
const reach = Number(params.get("reach") ?? "0.6");
const ROOM_HALF_EXTENT = 9;
const BODY: Vec3 = [0, 1.4, 0];
const HEAD: Vec3 = [0, 1.7, 0];

const canvas = document.getElementById("view") as HTMLCanvasElement;
const hud = document.getElementById("hud") as HTMLDivElement;
const help = document.getElementById("help") as HTMLDivElement;
help.innerHTML = MAPPING_HELP.map((l) => `<div>${l}</div>`).join("");

const scene = new TaskScene(canvas);

interface SessionState {
  order: Condition[];
  conditionIndex: number;
  trialInCell: number;
  trialsPerCell: number;
  task: "selection" | "docking";
  logs: TrialLog[];
  trace: Trace;
  running: boolean;
  startT: number;
}

const table = PRESET_ORDERS[preset];
const session: SessionState = {
  order: conditionOrder(preset, participant),
  conditionIndex: 0,
  trialInCell: 0,
  trialsPerCell: table?.trials_per_cell ?? 3,
  task: preset === "study1_task1" ? "selection" : "docking",
  logs: [],
  trace: { schema_version: 1, participant, technique: "", trials: [] },
  running: false,
  startT: 0,
};

let controller = initialController();
let userPosition: Vec3 = [...HEAD];
let portal: PortalPlacement | null = null;
let selection: SelectionTrial | null = null;
let currentLog: TrialLog | null = null;
let clicksForTrace: TraceClick[] = [];
let movesForTrace: TraceMove[] = [];
let homer: HomerGrab | null = null;
let dockPose: Pose | null = null;
let targetPose: Pose | null = null;
let grabbed = false;

const nowS = () => performance.now() / 1000;

function condition(): Condition {
  return session.order[session.conditionIndex];
}

function showHud(): void {
  const c = condition();
  const total = session.order.length * session.trialsPerCell;
  const done = session.conditionIndex * session.trialsPerCell + session.trialInCell;
  hud.innerHTML = `technique: <b>${c.technique}</b> &middot; distance ${c.distance_m} m`
    + ` &middot; trial ${done + 1}/${total}`
    + (session.running ? "" : " &mdash; click the green box to start");
}

function beginTrial(): void {
  const c = condition();
  session.running = true;
  session.startT = nowS();
  scene.clearStartBox();
  clicksForTrace = [];
  movesForTrace = [];
  portal = null;
  homer = null;
  grabbed = false;
  if (session.task === "selection") {
    const layout = buildSelectionLayout(c.distance_m);
    selection = new SelectionTrial(layout, 0);
    currentLog = new TrialLog(participant, c.technique, c.distance_m,
                              session.trialInCell + 1, "selection");
    currentLog.addEvent(0, "trial_start", `distance=${c.distance_m}`);
    scene.setSpheres(layout.spheres);
  } else {
    dockPose = { position: [0, 1.2, c.distance_m], orientation: [1, 0, 0, 0] };
    const angle = (participant * 37 + session.trialInCell * 61) % 360;
    const off = 0.35;
    targetPose = {
      position: add(dockPose.position,
        [off * Math.cos(angle), 0.1, off * Math.sin(angle)]),
      orientation: normalize4(quatMul([Math.cos(angle / 2), 0, Math.sin(angle / 2), 0],
                                      [1, 0, 0, 0])),
    };
    currentLog = new TrialLog(participant, c.technique, c.distance_m,
                              session.trialInCell + 1, "docking");
    currentLog.addEvent(0, "trial_start", `distance=${c.distance_m}`);
  }
  showHud();
}

function normalize4(q: Quat): Quat {
  const n = Math.hypot(q[0], q[1], q[2], q[3]);
  return q[0] < 0 ? [-q[0] / n, -q[1] / n, -q[2] / n, -q[3] / n]
                  : [q[0] / n, q[1] / n, q[2] / n, q[3] / n];
}

function endTrial(): void {
  const c = condition();
  if (currentLog) session.logs.push(currentLog);
  if (session.task === "selection" && selection) {
    session.trace.technique = c.technique;
    session.trace.trials.push({ task: "selection", distance_m: c.distance_m,
                                clicks: clicksForTrace });
  } else if (dockPose && targetPose) {
    session.trace.technique = c.technique;
    session.trace.trials.push({
      task: "docking", distance_m: c.distance_m,
      dock_position: [0, 1.2, c.distance_m], dock_orientation_wxyz: [1, 0, 0, 0],
      target_position: targetPose.position,
      target_orientation_wxyz: targetPose.orientation,
      moves: movesForTrace, confirm_t: nowS() - session.startT,
    });
  }
  selection = null;
  currentLog = null;
  session.running = false;
  session.trialInCell += 1;
  if (session.trialInCell >= session.trialsPerCell) {
    session.trialInCell = 0;
    session.conditionIndex += 1;
  }
  scene.clearSpheres();
  scene.clearDocking();
  scene.clearPortalDisc();
  if (session.conditionIndex >= session.order.length) {
    finishSession();
  } else {
    scene.showStartBox([0, 1.4, 1.2]);
    showHud();
  }
}

function finishSession(): void {
  hud.innerHTML = "session complete &mdash; downloading logs";
  downloadCsv(session.logs, `session_p${participant}_${preset}.csv`);
  const blob = new Blob([JSON.stringify(session.trace, null, 1)],
                        { type: "application/json" });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = `trace_p${participant}_${preset}.json`;
  a.click();
  URL.revokeObjectURL(url);
}

/** The world-space pick for the current technique, or null. */
function effectiveClick(t: number): { hit: number | null; click: TraceClick } | null {
  if (!selection) return null;
  const c = condition();
  const origin = controllerPosition(controller, BODY);
  const dir = rayDirection(controller);
  if (c.technique === "portal") {
    if (!portal) {
      // ray click to open the portal on the center sphere
      const hit = pickByRay(origin, dir);
      if (hit === 0) {
        const target = selection.layout.spheres[0].center;
        portal = placePortal(userPosition, dir, target, reach);
        scene.showPortalDisc(portal.primaryCenter, 0.6);
      }
      return { hit, click: { t, ray: { origin, direction: dir } } };
    }
    const handPoint = portalRemotePoint(portal, origin);
    return { hit: pickByPoint(handPoint), click: { t, point: handPoint } };
  }
  if (c.technique === "linear_offset") {
    const cursor = linearOffsetCursor(BODY, origin, linearOffsetGain(ROOM_HALF_EXTENT, reach));
    return { hit: pickByPoint(cursor), click: { t, point: cursor } };
  }
  // homer / teleport: ray pick
  return { hit: pickByRay(origin, dir), click: { t, ray: { origin, direction: dir } } };
}

function pickByRay(origin: Vec3, dir: Vec3): number | null {
  if (!selection) return null;
  let best: number | null = null;
  let bestT = Infinity;
  selection.layout.spheres.forEach((s, i) => {
    const t = raySphere(origin, dir, s.center, s.radius);
    if (t !== null && t < bestT) { bestT = t; best = i; }
  });
  return best;
}

function pickByPoint(p: Vec3): number | null {
  if (!selection) return null;
  let best: number | null = null;
  let bestD = Infinity;
  selection.layout.spheres.forEach((s, i) => {
    const d = dist(p, s.center);
    if (d <= s.radius && d < bestD) { bestD = d; best = i; }
  });
  return best;
}

function onClick(): void {
  const t = nowS() - session.startT;
  if (!session.running) {
    beginTrial();
    return;
  }
  if (session.task === "selection" && selection && currentLog) {
    const result = effectiveClick(t);
    if (!result) return;
    clicksForTrace.push(result.click);
    const target = selection.currentTarget();
    const advanced = selection.advance(result.hit, t);
    currentLog.addEvent(t, "click",
      advanced ? `hit target=${target}` : `miss target=${target} hit=${result.hit}`);
    if (advanced && target === 0) currentLog.addEvent(t, "center_selected", "clicks=1");
    if (selection.phase === "complete") {
      currentLog.clicks = selection.scoredClicks;
      currentLog.scoredSelections = selection.scoredSelections;
      currentLog.selectionTimeS = selection.scoredTimes.length
        ? selection.scoredTimes.reduce((a, b) => a + b, 0) / selection.scoredTimes.length
        : null;
      currentLog.success = true;
      currentLog.addEvent(t, "trial_complete", "");
      endTrial();
    }
  } else if (session.task === "docking" && dockPose && targetPose && currentLog) {
    if (!grabbed) {
      grabbed = true;
      currentLog.selectionTimeS = t;
      currentLog.addEvent(t, "grab", condition().technique);
      return;
    }
    const dock = regularTetrahedron(DOCK_EDGE, dockPose);
    const target = regularTetrahedron(DOCK_EDGE, targetPose);
    if (isDocked(dock, target, DOCK_TOLERANCE)) {
      currentLog.errorDistanceM = dockingError(dock, target);
      currentLog.dockingTimeS = t - (currentLog.selectionTimeS ?? 0);
      currentLog.success = true;
      currentLog.addEvent(t, "docked", "confirm");
      endTrial();
    } else {
      currentLog.addEvent(t, "dock_attempt", "outside tolerance");
    }
  }
}

function moveGrabbedDock(t: number): void {
  if (!grabbed || !dockPose || !currentLog) return;
  const c = condition();
  const hand = controllerPosition(controller, BODY);
  let position: Vec3;
  if (c.technique === "portal" && portal) {
    position = portalRemotePoint(portal, hand);
  } else if (c.technique === "linear_offset") {
    position = linearOffsetCursor(BODY, hand, linearOffsetGain(ROOM_HALF_EXTENT, reach));
  } else if (c.technique === "homer") {
    if (!homer) homer = homerGrab(BODY, hand, dockPose.position);
    position = homerTrack(homer, hand);
  } else {
    position = add(hand, scale(rayDirection(controller), 0.4));
  }
  dockPose = { position, orientation: quatMul(controller.gripRotation, [1, 0, 0, 0]) };
  movesForTrace.push({ t, position, orientation_wxyz: dockPose.orientation });
  currentLog.addEvent(t, "move", "");
}

canvas.addEventListener("click", () => {
  canvas.requestPointerLock?.();
  onClick();
});
window.addEventListener("mousemove", (e) => {
  controller = applyPointerDelta(controller, e.movementX ?? 0, e.movementY ?? 0);
  if (session.running && session.task === "docking") {
    moveGrabbedDock(nowS() - session.startT);
  }
});
window.addEventListener("wheel", (e) => {
  controller = applyWheel(controller, e.deltaY);
});
window.addEventListener("keydown", (e) => {
  if (e.key === "Shift") controller = { ...controller, trackpadHeld: true };
  else controller = applyKeyRotation(controller, e.key);
});
window.addEventListener("keyup", (e) => {
  if (e.key === "Shift") controller = { ...controller, trackpadHeld: false };
});

// Config/log upload: a harness config JSON reconfigures the session; a
// previously exported session CSV merges back in (resume).
const configInput = document.getElementById("config-file") as HTMLInputElement | null;
configInput?.addEventListener("change", async () => {
  const file = configInput.files?.[0];
  if (!file) return;
  try {
    const config = parseConfig(await file.text());
    session.order = customConditionOrder(config, participant);
    session.task = config.task === "selection" ? "selection" : "docking";
    session.trialsPerCell = config.trialsPerCell;
    session.conditionIndex = 0;
    session.trialInCell = 0;
    session.running = false;
    scene.clearSpheres();
    scene.clearDocking();
    scene.clearPortalDisc();
    scene.showStartBox([0, 1.4, 1.2]);
    showHud();
  } catch (err) {
    hud.textContent = `config rejected: ${(err as Error).message}`;
  }
});

const logsInput = document.getElementById("logs-file") as HTMLInputElement | null;
logsInput?.addEventListener("change", async () => {
  const file = logsInput.files?.[0];
  if (!file) return;
  try {
    const merged = fromCsv(await file.text());
    session.logs.unshift(...merged);
    hud.textContent = `merged ${merged.length} previous trials`;
  } catch (err) {
    hud.textContent = `logs rejected: ${(err as Error).message}`;
  }
});

scene.showStartBox([0, 1.4, 1.2]);
showHud();

function frame(): void {
  const origin = controllerPosition(controller, BODY);
  const dir = rayDirection(controller);
  if (controller.trackpadHeld) {
    if (condition()?.technique === "teleport") {
      const landing = teleportArcGroundHit(origin, dir, 6, 0);
      scene.showRay(origin, landing ? [landing] : [add(origin, scale(dir, 3))]);
    } else {
      scene.showRay(origin, [add(origin, scale(dir, 12))]);
    }
  } else {
    scene.clearRay();
  }
  if (session.running && session.task === "selection" && selection) {
    const pick = effectiveClick(0);
    scene.updateHighlights((i) => selection!.highlightOf(i, pick?.hit ?? null));
  }
  if (session.running && session.task === "docking" && dockPose && targetPose) {
    const dock = regularTetrahedron(DOCK_EDGE, dockPose);
    const target = regularTetrahedron(DOCK_EDGE, targetPose);
    scene.setDocking({ position: dockPose.position, vertices: dock }, target,
                     isDocked(dock, target, DOCK_TOLERANCE));
  }
  if (portal) {
    scene.render(portal.cameraPosition, portal.targetPoint);
  } else {
    scene.render();
  }
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
