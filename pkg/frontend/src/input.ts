/** Mouse/keyboard stand-in for a tracked 6-DOF controller.
 *
 * Mapping (shown on screen by the app):
 *   pointer move   -> controller ray yaw/pitch
 *   wheel          -> controller depth (arm extension) / grabbed-object depth
 *   left click     -> trigger (select / grab / confirm)
 *   Shift          -> trackpad press (hold to show the ray or teleport arc)
 *   Q/E, A/D, W/S  -> grabbed-object roll / yaw / pitch
 *
 * The state is pure and pixel-in, pose-out so the mapping is testable
 * without a DOM.
 */

import { Quat, Vec3, normalize, quatFromAxisAngle, quatMul, quatRotate } from "./math.js";

export interface ControllerState {
  yaw: number;        // rad, mouse x
  pitch: number;      // rad, mouse y
  extension: number;  // m, hand distance from the body anchor
  gripRotation: Quat; // extra rotation applied to a grabbed object
  trackpadHeld: boolean;
}

export const POINTER_GAIN = 0.0025;  // rad per pixel
export const WHEEL_GAIN = 0.0005;    // m per wheel delta unit
export const KEY_ROTATION_STEP = Math.PI / 36; // 5 degrees
export const MIN_EXTENSION = 0.05;
export const MAX_EXTENSION = 0.7;

export function initialController(extension = 0.5): ControllerState {
  return { yaw: 0, pitch: 0, extension, gripRotation: [1, 0, 0, 0], trackpadHeld: false };
}

export function applyPointerDelta(s: ControllerState, dxPx: number, dyPx: number): ControllerState {
  const pitch = Math.max(-1.4, Math.min(1.4, s.pitch - dyPx * POINTER_GAIN));
  return { ...s, yaw: s.yaw + dxPx * POINTER_GAIN, pitch };
}

export function applyWheel(s: ControllerState, delta: number): ControllerState {
  const extension = Math.max(MIN_EXTENSION,
    Math.min(MAX_EXTENSION, s.extension - delta * WHEEL_GAIN));
  return { ...s, extension };
}

const KEY_AXES: Record<string, [Vec3, number]> = {
  q: [[0, 0, 1], 1], e: [[0, 0, 1], -1],
  a: [[0, 1, 0], 1], d: [[0, 1, 0], -1],
  w: [[1, 0, 0], 1], s: [[1, 0, 0], -1],
};

export function applyKeyRotation(s: ControllerState, key: string): ControllerState {
  const spec = KEY_AXES[key.toLowerCase()];
  if (!spec) return s;
  const step = quatFromAxisAngle(spec[0], spec[1] * KEY_ROTATION_STEP);
  return { ...s, gripRotation: quatMul(step, s.gripRotation) };
}

/** World-space aim direction of the controller ray. */
export function rayDirection(s: ControllerState): Vec3 {
  const cy = Math.cos(s.yaw);
  const sy = Math.sin(s.yaw);
  const cp = Math.cos(s.pitch);
  const sp = Math.sin(s.pitch);
  return normalize([sy * cp, sp, cy * cp]);
}

/** Controller (hand) position: body anchor plus the extended arm along the ray. */
export function controllerPosition(s: ControllerState, bodyAnchor: Vec3): Vec3 {
  const d = rayDirection(s);
  return [bodyAnchor[0] + d[0] * s.extension,
          bodyAnchor[1] + d[1] * s.extension,
          bodyAnchor[2] + d[2] * s.extension];
}

export function rotateGrabbed(s: ControllerState, v: Vec3): Vec3 {
  return quatRotate(s.gripRotation, v);
}

/** Every technique's required inputs and the on-screen help text. */
export const MAPPING_HELP: readonly string[] = [
  "move mouse: aim the controller ray",
  "wheel: extend/retract the hand (depth)",
  "click: trigger (select / grab / confirm)",
  "hold Shift: trackpad (show ray or teleport arc)",
  "Q/E A/D W/S: rotate a grabbed object",
];
