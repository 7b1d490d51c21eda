/** Minimal 3D math for the task runner: vectors, quaternions [w,x,y,z]
 * canonicalized to w >= 0, rigid poses, and ray intersections. Mirrors the
 * host toolkit's conventions (right-handed, +y up, meters) so recorded traces
 * replay identically on either side. */

export type Vec3 = [number, number, number];
export type Quat = [number, number, number, number]; // w, x, y, z

export const add = (a: Vec3, b: Vec3): Vec3 => [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
export const sub = (a: Vec3, b: Vec3): Vec3 => [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
export const scale = (v: Vec3, s: number): Vec3 => [v[0] * s, v[1] * s, v[2] * s];
export const dot = (a: Vec3, b: Vec3): number => a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
export const cross = (a: Vec3, b: Vec3): Vec3 => [
  a[1] * b[2] - a[2] * b[1],
  a[2] * b[0] - a[0] * b[2],
  a[0] * b[1] - a[1] * b[0],
];
export const norm = (v: Vec3): number => Math.hypot(v[0], v[1], v[2]);
export const dist = (a: Vec3, b: Vec3): number => norm(sub(a, b));

export function normalize(v: Vec3): Vec3 {
  const n = norm(v);
  if (n < 1e-12) throw new Error("cannot normalize a near-zero vector");
  return [v[0] / n, v[1] / n, v[2] / n];
}

export const quatIdentity = (): Quat => [1, 0, 0, 0];

export function quatNormalize(q: Quat): Quat {
  const n = Math.hypot(q[0], q[1], q[2], q[3]);
  if (n < 1e-12) throw new Error("cannot normalize a near-zero quaternion");
  const out: Quat = [q[0] / n, q[1] / n, q[2] / n, q[3] / n];
  return out[0] < 0 ? [-out[0], -out[1], -out[2], -out[3]] : out;
}

export function quatFromAxisAngle(axis: Vec3, angle: number): Quat {
  const a = normalize(axis);
  const s = Math.sin(angle / 2);
  return quatNormalize([Math.cos(angle / 2), a[0] * s, a[1] * s, a[2] * s]);
}

export function quatMul(a: Quat, b: Quat): Quat {
  const [aw, ax, ay, az] = a;
  const [bw, bx, by, bz] = b;
  return quatNormalize([
    aw * bw - ax * bx - ay * by - az * bz,
    aw * bx + ax * bw + ay * bz - az * by,
    aw * by - ax * bz + ay * bw + az * bx,
    aw * bz + ax * by - ay * bx + az * bw,
  ]);
}

export const quatConj = (q: Quat): Quat => quatNormalize([q[0], -q[1], -q[2], -q[3]]);

export function quatRotate(q: Quat, v: Vec3): Vec3 {
  const u: Vec3 = [q[1], q[2], q[3]];
  const uv = cross(u, v);
  const t = add(scale(uv, q[0]), cross(u, uv));
  return add(v, scale(t, 2));
}

export interface Pose {
  position: Vec3;
  orientation: Quat;
}

export const poseIdentity = (): Pose => ({ position: [0, 0, 0], orientation: quatIdentity() });

export const poseTransformPoint = (p: Pose, v: Vec3): Vec3 =>
  add(quatRotate(p.orientation, v), p.position);

export function poseCompose(a: Pose, b: Pose): Pose {
  return {
    position: poseTransformPoint(a, b.position),
    orientation: quatMul(a.orientation, b.orientation),
  };
}

export function poseInverse(p: Pose): Pose {
  const invQ = quatConj(p.orientation);
  return { position: quatRotate(invQ, scale(p.position, -1)), orientation: invQ };
}

/** Re-express a point near `from` at the equivalent spot near `to`. */
export function transformPointBetweenFrames(point: Vec3, from: Pose, to: Pose): Vec3 {
  return poseTransformPoint(to, poseTransformPoint(poseInverse(from), point));
}

/** Smallest non-negative ray parameter hitting the sphere surface, or null. */
export function raySphere(origin: Vec3, direction: Vec3, center: Vec3, radius: number): number | null {
  const oc = sub(origin, center);
  const b = dot(oc, direction);
  const c = dot(oc, oc) - radius * radius;
  const disc = b * b - c;
  if (disc < 0) return null;
  const sq = Math.sqrt(disc);
  let t = -b - sq;
  if (t < 0) t = -b + sq;
  return t >= 0 ? t : null;
}

/** Intersection point with a disc (plane hit within radius), or null. */
export function rayDisc(
  origin: Vec3, direction: Vec3, center: Vec3, normal: Vec3, radius: number,
): Vec3 | null {
  const denom = dot(direction, normal);
  if (Math.abs(denom) < 1e-12) return null;
  const t = dot(sub(center, origin), normal) / denom;
  if (t < 0) return null;
  const hit = add(origin, scale(direction, t));
  return dist(hit, center) <= radius + 1e-9 ? hit : null;
}

const GRAVITY = 9.81;

/** Landing point of the ballistic teleport arc on the plane y = floorHeight. */
export function teleportArcGroundHit(
  origin: Vec3, aimDirection: Vec3, arcStrength: number, floorHeight: number,
): Vec3 | null {
  const v = scale(aimDirection, arcStrength);
  const a = -0.5 * GRAVITY;
  const b = v[1];
  const c = origin[1] - floorHeight;
  const disc = b * b - 4 * a * c;
  if (disc < 0) return null;
  const sq = Math.sqrt(disc);
  const roots = [(-b - sq) / (2 * a), (-b + sq) / (2 * a)].sort((x, y) => x - y);
  const t = roots.find((r) => r >= -1e-12);
  if (t === undefined) return null;
  const tt = Math.max(t, 0);
  return [origin[0] + v[0] * tt, floorHeight, origin[2] + v[2] * tt];
}
