/** Generate the committed fixtures:
 *
 *  - fixtures/golden_trace.json: a recorded portal-session input trace
 *    (ray click opening the portal on the center sphere, touch clicks for the
 *    ring, two docking trials) plus the outcomes the runner's own math
 *    produces for it. The host toolkit replays the same file and must agree.
 *  - fixtures/sample_session.csv: a full exported session in the harness
 *    CSV schema (one participant, 2 techniques x 2 distances, selection and
 *    docking trials) used to verify the import/report contract.
 *
 * Run: npm run fixtures
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { Quat, Vec3, add, normalize, quatFromAxisAngle, scale, sub } from "../src/math.js";
import { buildSelectionLayout, regularTetrahedron, DOCK_EDGE } from "../src/tasks.js";
import { toCsv } from "../src/logging.js";
import {
  DockingTraceTrial, SelectionTraceTrial, Trace, TraceClick, TraceMove, replayTrace,
} from "../src/replay.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixturesDir = join(here, "..", "..", "fixtures");
mkdirSync(fixturesDir, { recursive: true });

const HAND: Vec3 = [0.05, 1.45, 0.4];

function rayTo(point: Vec3): TraceClick["ray"] {
  return { origin: HAND, direction: normalize(sub(point, HAND)) };
}

/** Portal-style selection: a ray click acquires the center sphere (portal
 * placement), then the ring targets are touched directly; a few deliberate
 * misses exercise the error-click path. */
function portalSelectionTrial(distance: number, missAt: number[]): SelectionTraceTrial {
  const layout = buildSelectionLayout(distance);
  const clicks: TraceClick[] = [];
  let t = 0;
  t += 1.2;
  clicks.push({ t, ray: rayTo(layout.spheres[0].center) });
  layout.visitOrder.forEach((sphereId, i) => {
    if (missAt.includes(i)) {
      t += 0.4;
      const c = layout.spheres[sphereId].center;
      clicks.push({ t, point: add(c, [0.05, 0.03, 0]) });   // just off the surface
    }
    t += 0.8 + 0.01 * i;
    clicks.push({ t, point: layout.spheres[sphereId].center });
  });
  return { task: "selection", distance_m: distance, clicks };
}

function dockingTrial(distance: number, finalOffset: number, spin: number): DockingTraceTrial {
  const dockPosition: Vec3 = [0, 1.2, distance];
  const targetOrientation: Quat = quatFromAxisAngle(normalize([0.3, 1, 0.2]), spin);
  const targetPosition: Vec3 = add(dockPosition, [0.28, 0.12, -0.15]);
  const moves: TraceMove[] = [];
  const offsetDir: Vec3 = normalize([1, 0.4, -0.2]);
  const finalPosition = add(targetPosition, scale(offsetDir, finalOffset));
  for (let i = 1; i <= 6; i++) {
    const f = i / 6;
    const position: Vec3 = [
      dockPosition[0] + (finalPosition[0] - dockPosition[0]) * f,
      dockPosition[1] + (finalPosition[1] - dockPosition[1]) * f,
      dockPosition[2] + (finalPosition[2] - dockPosition[2]) * f,
    ];
    const orientation = quatFromAxisAngle(normalize([0.3, 1, 0.2]), spin * f);
    moves.push({ t: 1.5 + i * 0.9, position, orientation_wxyz: orientation });
  }
  return {
    task: "docking",
    distance_m: distance,
    dock_position: dockPosition,
    dock_orientation_wxyz: [1, 0, 0, 0],
    target_position: targetPosition,
    target_orientation_wxyz: targetOrientation,
    moves,
    confirm_t: 1.5 + 6 * 0.9 + 0.6,
  };
}

const trace: Trace = {
  schema_version: 1,
  participant: 7,
  technique: "portal",
  trials: [
    portalSelectionTrial(6.0, [3, 9]),
    portalSelectionTrial(9.0, [5]),
    dockingTrial(6.0, 0.012, 0.9),     // docked: per-vertex error 12 mm
    dockingTrial(9.0, 0.09, 0.4),      // outside tolerance at confirm
  ],
};

const { logs, outcomes } = replayTrace(trace);
const golden = { ...trace, expected: outcomes };
writeFileSync(join(fixturesDir, "golden_trace.json"), JSON.stringify(golden, null, 1) + "\n");
console.log("wrote fixtures/golden_trace.json");
outcomes.forEach((o, i) => console.log(`  trial ${i}:`, JSON.stringify(o).slice(0, 100)));

// Sample session: 2 techniques x 2 distances, one selection + one docking
// trial per cell, all recorded through the same replay machinery.
const sessionLogs = [];
let trialCounter = 0;
for (const technique of ["portal", "homer"]) {
  for (const distance of [3.0, 6.0]) {
    const sel = portalSelectionTrial(distance, trialCounter % 2 === 0 ? [4] : []);
    const selTrace: Trace = { schema_version: 1, participant: 7, technique,
                              trials: [sel] };
    const selReplay = replayTrace(selTrace);
    const dock = dockingTrial(distance, 0.01 + 0.005 * trialCounter, 0.5);
    const dockTrace: Trace = { schema_version: 1, participant: 7, technique,
                               trials: [dock] };
    const dockReplay = replayTrace(dockTrace);
    sessionLogs.push(...selReplay.logs, ...dockReplay.logs);
    trialCounter += 1;
  }
}
writeFileSync(join(fixturesDir, "sample_session.csv"), toCsv(sessionLogs));
console.log(`wrote fixtures/sample_session.csv (${sessionLogs.length} trials)`);
