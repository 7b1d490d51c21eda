import { describe, expect, it } from "vitest";

import {
  ISO_VISIT_ORDER, SelectionTrial, buildSelectionLayout, computeId,
  dockingError, isDocked, regularTetrahedron,
} from "../src/tasks.js";
import { placePortal, portalRemotePoint, homerGrab, homerTrack,
         linearOffsetCursor, linearOffsetGain } from "../src/techniques.js";

describe("selection layout", () => {
  it("has 18 spheres with the documented index of difficulty", () => {
    const layout = buildSelectionLayout(6);
    expect(layout.spheres).toHaveLength(18);
    expect(Math.abs(layout.indexOfDifficulty - 3.26)).toBeLessThan(0.005);
    expect(computeId(0.6, 0.07)).toBeCloseTo(Math.log2(0.6 / 0.07 + 1), 12);
  });

  it("staggers nine left spheres nearer and eight right spheres farther", () => {
    const layout = buildSelectionLayout(6);
    const left = layout.spheres.slice(1).filter((s) => s.center[0] <= 1e-12);
    const right = layout.spheres.slice(1).filter((s) => s.center[0] > 1e-12);
    expect(left).toHaveLength(9);
    expect(right).toHaveLength(8);
    left.forEach((s) => expect(s.center[2]).toBeCloseTo(5.93, 12));
    right.forEach((s) => expect(s.center[2]).toBeCloseTo(6.07, 12));
  });

  it("visit order permutes 1..17 starting at sphere 1", () => {
    expect([...ISO_VISIT_ORDER].sort((a, b) => a - b))
      .toEqual(Array.from({ length: 17 }, (_, i) => i + 1));
    expect(ISO_VISIT_ORDER[0]).toBe(1);
  });
});

describe("selection trial state machine", () => {
  it("scores 16 of 17 ring selections", () => {
    const layout = buildSelectionLayout(6);
    const trial = new SelectionTrial(layout, 0);
    let t = 1;
    expect(trial.advance(0, t)).toBe(true);
    while (trial.phase === "running") {
      t += 1;
      expect(trial.advance(trial.currentTarget(), t)).toBe(true);
    }
    expect(trial.scoredSelections).toBe(16);
    expect(trial.scoredClicks).toBe(16);
    expect(trial.centerSelections).toBe(1);
  });

  it("keeps the target on a miss and accumulates clicks", () => {
    const layout = buildSelectionLayout(6);
    const trial = new SelectionTrial(layout, 0);
    trial.advance(0, 1);
    trial.advance(1, 2);          // unscored first ring selection
    const target = trial.currentTarget();
    expect(trial.advance(null, 2.5)).toBe(false);
    expect(trial.currentTarget()).toBe(target);
    expect(trial.advance(target, 3)).toBe(true);
    expect(trial.scoredClicks).toBe(2);
    expect(trial.scoredSelections).toBe(1);
  });

  it("exposes highlight states with one target and a hover", () => {
    const trial = new SelectionTrial(buildSelectionLayout(6), 0);
    expect(trial.highlightOf(0, null)).toBe("target");
    expect(trial.highlightOf(4, 4)).toBe("hover");
    expect(trial.highlightOf(5, 4)).toBe("neutral");
  });
});

describe("docking", () => {
  it("sums label-matched vertex distances", () => {
    const a = regularTetrahedron(0.5, { position: [0, 0, 0], orientation: [1, 0, 0, 0] });
    const b = regularTetrahedron(0.5, { position: [0.01, 0, 0], orientation: [1, 0, 0, 0] });
    expect(dockingError(a, b)).toBeCloseTo(0.04, 12);
    expect(isDocked(a, b)).toBe(true);
    expect(isDocked(a, b, 0.005)).toBe(false);
  });

  it("uses a per-vertex tolerance rule", () => {
    const a = regularTetrahedron(0.5, { position: [0, 0, 0], orientation: [1, 0, 0, 0] });
    const c = regularTetrahedron(0.5, { position: [0.046, 0, 0], orientation: [1, 0, 0, 0] });
    expect(isDocked(a, c)).toBe(false);   // 0.046 > 0.045 on every vertex
  });
});

describe("technique mappings", () => {
  it("places the portal with the 0.5/0.25/0.75 reach fractions", () => {
    const p = placePortal([0, 0, 0], [0, 0, 1], [0, 0, 6], 0.6);
    expect(p.primaryCenter[2]).toBeCloseTo(0.3, 12);
    expect(p.secondaryCenter[2]).toBeCloseTo(5.85, 12);
    expect(p.cameraPosition[2]).toBeCloseTo(5.55, 12);
    expect(() => placePortal([0, 0, 0], [0, 0, 1], [0, 0, 0.4], 0.6)).toThrow();
  });

  it("maps hands through the portal 1:1", () => {
    const p = placePortal([0, 0, 0], [0, 0, 1], [0, 0, 6], 0.6);
    const a = portalRemotePoint(p, [0.0, 0, 0.35]);
    const b = portalRemotePoint(p, [0.05, 0, 0.35]);
    expect(Math.hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2])).toBeCloseTo(0.05, 12);
    expect(a[2]).toBeCloseTo(5.9, 12);
  });

  it("computes the HOMER grab scale and scaled tracking", () => {
    const grab = homerGrab([0, 0, 0], [0, 0, 0.5], [0, 0, 5]);
    expect(grab.grabScale).toBeCloseTo(10, 12);
    const hand = homerTrack(grab, [0, 0, 0.6]);
    expect(hand[2]).toBeCloseTo(6, 12);
  });

  it("calibrates linear offset so full extension reaches the wall", () => {
    const k = linearOffsetGain(9, 0.6);
    expect(k).toBeCloseTo(15, 12);
    const cursor = linearOffsetCursor([0, 0, 0], [0, 0, 0.6], k);
    expect(cursor[2]).toBeCloseTo(9, 12);
  });
});
