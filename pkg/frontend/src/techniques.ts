/** Interaction techniques used by the runner: portal clutching (frame
 * transfer through the disc pair), direct HOMER (grab-time scale), Linear
 * Offset (fixed gain), and the teleport arc (in math.ts). Orientation maps
 * 1:1 everywhere. */

import {
  Pose,
  Quat,
  Vec3,
  add,
  dist,
  normalize,
  poseCompose,
  poseInverse,
  scale,
  sub,
  transformPointBetweenFrames,
} from "./math.js";

export const PRIMARY_DISC_RADIUS = 0.6;
export const PRIMARY_OFFSET_FRACTION = 0.5;
export const SECONDARY_OFFSET_FRACTION = 0.25;
export const CAMERA_OFFSET_FRACTION = 0.75;

export interface PortalPlacement {
  primaryCenter: Vec3;
  secondaryCenter: Vec3;
  cameraPosition: Vec3;
  rayDirection: Vec3;
  targetPoint: Vec3;
  reach: number;
}

export function placePortal(
  userPosition: Vec3, rayDirection: Vec3, targetHit: Vec3, reach: number,
): PortalPlacement {
  if (dist(userPosition, targetHit) < CAMERA_OFFSET_FRACTION * reach) {
    throw new Error("target already within reach");
  }
  const d = normalize(rayDirection);
  return {
    primaryCenter: add(userPosition, scale(d, PRIMARY_OFFSET_FRACTION * reach)),
    secondaryCenter: sub(targetHit, scale(d, SECONDARY_OFFSET_FRACTION * reach)),
    cameraPosition: sub(targetHit, scale(d, CAMERA_OFFSET_FRACTION * reach)),
    rayDirection: d,
    targetPoint: targetHit,
    reach,
  };
}

/** World-space point a hand at `handPoint` acts at when pushed through the
 * primary disc (control-display ratio 1). Frames share the creation-ray
 * orientation, so the map is the rigid offset between the disc centers. */
export function portalRemotePoint(p: PortalPlacement, handPoint: Vec3): Vec3 {
  return add(handPoint, sub(p.secondaryCenter, p.primaryCenter));
}

export interface HomerGrab {
  grabScale: number;
  controllerAnchor: Vec3;
  objectAnchor: Vec3;
}

export function homerGrab(
  userPosition: Vec3, controllerPosition: Vec3, objectCenter: Vec3,
): HomerGrab {
  const dController = dist(userPosition, controllerPosition);
  if (dController < 1e-9) throw new Error("controller coincides with the user anchor");
  return {
    grabScale: dist(userPosition, objectCenter) / dController,
    controllerAnchor: controllerPosition,
    objectAnchor: objectCenter,
  };
}

export function homerTrack(grab: HomerGrab, controllerPosition: Vec3): Vec3 {
  const offset = sub(controllerPosition, grab.controllerAnchor);
  return add(grab.objectAnchor, scale(offset, grab.grabScale));
}

export function linearOffsetGain(roomHalfExtent: number, reach: number): number {
  if (roomHalfExtent <= 0 || reach <= 0) throw new Error("calibration inputs must be positive");
  return roomHalfExtent / reach;
}

export function linearOffsetCursor(userPosition: Vec3, controllerPosition: Vec3, k: number): Vec3 {
  return add(userPosition, scale(sub(controllerPosition, userPosition), k));
}

/** Rigid pose transfer between two frames (used for manipulated objects). */
export function mapPoseBetweenFrames(p: Pose, from: Pose, to: Pose): Pose {
  return poseCompose(poseCompose(to, poseInverse(from)), p);
}

export type { Pose, Quat, Vec3 };
