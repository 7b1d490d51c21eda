/** Task generation and scoring, kept numerically identical to the host
 * toolkit: the multi-directional tapping layout (17-sphere ring plus a center
 * sphere, depth-staggered halves) and tetrahedron docking with label-matched
 * vertex error. */

import { Pose, Vec3, dist, poseTransformPoint } from "./math.js";

export const RING_DIAMETER = 0.6;
export const RING_COUNT = 17;
export const TARGET_WIDTH = 0.07;
export const DEPTH_OFFSET = 0.07;
export const DOCK_EDGE = 0.5;
export const DOCK_TOLERANCE = 0.045;

function diametricOrder(count: number, skip: number): number[] {
  const order = [1];
  for (let i = 1; i < count; i++) {
    order.push(((order[i - 1] - 1 + skip) % count) + 1);
  }
  return order;
}

/** ISO 9241-9 diametric pattern, clockwise, covering 1..17 exactly once. */
export const ISO_VISIT_ORDER: readonly number[] = diametricOrder(RING_COUNT, 9);

export function computeId(amplitude: number, width: number): number {
  if (amplitude <= 0 || width <= 0) throw new Error("amplitude and width must be positive");
  return Math.log2(amplitude / width + 1);
}

export interface LayoutSphere {
  center: Vec3;
  radius: number;
}

export interface SelectionLayout {
  distance: number;
  spheres: LayoutSphere[]; // index 0 = center, 1..17 = ring
  visitOrder: readonly number[];
  targetWidth: number;
  indexOfDifficulty: number;
}

export function buildSelectionLayout(distance: number): SelectionLayout {
  if (distance <= 0) throw new Error("distance must be positive");
  const center: Vec3 = [0, 0, distance];
  const radius = RING_DIAMETER / 2;
  const spheres: LayoutSphere[] = [{ center, radius: TARGET_WIDTH / 2 }];
  for (let i = 1; i <= RING_COUNT; i++) {
    const theta = (2 * Math.PI * (i - 1)) / RING_COUNT;
    const x = radius * Math.sin(theta);
    const y = radius * Math.cos(theta);
    const depth = x > 1e-12 ? DEPTH_OFFSET : -DEPTH_OFFSET;
    spheres.push({
      center: [center[0] + x, center[1] + y, center[2] + depth],
      radius: TARGET_WIDTH / 2,
    });
  }
  return {
    distance,
    spheres,
    visitOrder: ISO_VISIT_ORDER,
    targetWidth: TARGET_WIDTH,
    indexOfDifficulty: computeId(RING_DIAMETER, TARGET_WIDTH),
  };
}

export type HighlightState = "neutral" | "target" | "hover";

/** Single-trial selection state machine: center sphere first, then the ring
 * in the visit order; the first ring selection is logged but unscored. */
export class SelectionTrial {
  readonly layout: SelectionLayout;
  phase: "await_center" | "running" | "complete" = "await_center";
  orderPos = -1;
  lastSelectionT = 0;
  pendingClicks = 0;
  scoredSelections = 0;
  scoredClicks = 0;
  scoredTimes: number[] = [];
  centerSelections = 0;

  constructor(layout: SelectionLayout, startT = 0) {
    this.layout = layout;
    this.lastSelectionT = startT;
  }

  currentTarget(): number | null {
    if (this.phase === "await_center") return 0;
    if (this.phase === "running") return this.layout.visitOrder[this.orderPos];
    return null;
  }

  highlightOf(sphereId: number, hover: number | null): HighlightState {
    if (sphereId === hover) return "hover";
    return sphereId === this.currentTarget() ? "target" : "neutral";
  }

  /** Returns true when the click advanced the trial. */
  advance(clickHit: number | null, t: number): boolean {
    if (this.phase === "complete") throw new Error("trial already complete");
    const target = this.currentTarget();
    if (clickHit !== target) {
      this.pendingClicks += 1;
      return false;
    }
    const clicks = this.pendingClicks + 1;
    const elapsed = t - this.lastSelectionT;
    if (this.phase === "await_center") {
      this.centerSelections += 1;
      this.phase = "running";
      this.orderPos = 0;
    } else {
      const scored = this.orderPos >= 1;
      if (scored) {
        this.scoredClicks += clicks;
        this.scoredSelections += 1;
        this.scoredTimes.push(elapsed);
      }
      if (this.orderPos + 1 >= this.layout.visitOrder.length) {
        this.phase = "complete";
        this.orderPos = -1;
      } else {
        this.orderPos += 1;
      }
    }
    this.lastSelectionT = t;
    this.pendingClicks = 0;
    return true;
  }
}

/** Regular tetrahedron vertices (labels red, green, blue, yellow in order),
 * centroid at the pose origin. */
export const DOCK_LABELS = ["red", "green", "blue", "yellow"] as const;

export function regularTetrahedron(edge: number, pose: Pose): Vec3[] {
  const s = edge / (2 * Math.sqrt(2));
  const base: Vec3[] = [
    [s, s, s],
    [s, -s, -s],
    [-s, s, -s],
    [-s, -s, s],
  ];
  return base.map((v) => poseTransformPoint(pose, v));
}

/** Sum of distances between label-corresponding vertex pairs, meters. */
export function dockingError(dock: Vec3[], target: Vec3[]): number {
  if (dock.length !== 4 || target.length !== 4) throw new Error("need 4 vertices each");
  let total = 0;
  for (let i = 0; i < 4; i++) total += dist(dock[i], target[i]);
  return total;
}

/** Every corresponding vertex pair within tolerance. */
export function isDocked(dock: Vec3[], target: Vec3[], tolerance = DOCK_TOLERANCE): boolean {
  for (let i = 0; i < 4; i++) {
    if (dist(dock[i], target[i]) > tolerance) return false;
  }
  return true;
}
