"""Deterministic 3D math kernel: vectors, quaternion rotations, rigid poses,
rays, and the intersection tests the interaction techniques build on.

Conventions (used everywhere in this package): right-handed coordinates,
+y up, meters. Vectors are float64 numpy arrays of shape (3,); rotations are
unit quaternions stored as [w, x, y, z] arrays canonicalized to w >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Vec3 = np.ndarray
Quat = np.ndarray

EXACT_TOL = 1e-9    # exact algebra
GEOM_TOL = 1e-6     # constructed geometry
GRAVITY = 9.81      # m/s^2, teleport arc parabola

WORLD_UP = np.array([0.0, 1.0, 0.0])


def vec3(x: float, y: float, z: float) -> Vec3:
    """Build a float64 3-vector; rejects non-finite components."""
    v = np.array([x, y, z], dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector components: {v}")
    return v


def norm(v: Vec3) -> float:
    return float(np.linalg.norm(v))


def dist(a: Vec3, b: Vec3) -> float:
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))


def normalize(v: Vec3) -> Vec3:
    """Unit vector along *v*; rejects near-zero input."""
    n = np.linalg.norm(v)
    if n < 1e-12:
        raise ValueError("cannot normalize a near-zero vector")
    return np.asarray(v, dtype=float) / n


def is_unit(v: Vec3, tol: float = EXACT_TOL) -> bool:
    return abs(np.linalg.norm(v) - 1.0) <= tol


# ---------------------------------------------------------------------------
# Quaternions [w, x, y, z]
# ---------------------------------------------------------------------------

def quat_identity() -> Quat:
    return np.array([1.0, 0.0, 0.0, 0.0])


def rotation_quat(w: float, x: float, y: float, z: float) -> Quat:
    """Validated unit quaternion, canonicalized to w >= 0."""
    q = np.array([w, x, y, z], dtype=float)
    if abs(np.linalg.norm(q) - 1.0) > EXACT_TOL:
        raise ValueError(f"quaternion is not unit length: {q}")
    return quat_normalize(q)


def quat_normalize(q: Quat) -> Quat:
    """Unit-normalize and canonicalize the double cover to w >= 0."""
    q = np.asarray(q, dtype=float)
    n = np.linalg.norm(q)
    if n < 1e-12:
        raise ValueError("cannot normalize a near-zero quaternion")
    q = q / n
    if q[0] < 0.0:
        q = -q
    return q


def quat_from_axis_angle(axis: Vec3, angle: float) -> Quat:
    axis = normalize(axis)
    half = 0.5 * angle
    s = math.sin(half)
    return quat_normalize(np.array([math.cos(half), axis[0] * s, axis[1] * s, axis[2] * s]))


def quat_multiply(a: Quat, b: Quat) -> Quat:
    """Hamilton product a*b (apply b first, then a), canonicalized."""
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return quat_normalize(np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ]))


def quat_conjugate(q: Quat) -> Quat:
    return quat_normalize(np.array([q[0], -q[1], -q[2], -q[3]]))


def quat_rotate(q: Quat, v: Vec3) -> Vec3:
    """Rotate vector v by quaternion q."""
    w = q[0]
    u = q[1:]
    uv = np.cross(u, v)
    return np.asarray(v, dtype=float) + 2.0 * (w * uv + np.cross(u, uv))


def quat_angle_between(a: Quat, b: Quat) -> float:
    """Rotation angle (radians) taking a to b, double-cover aware."""
    d = min(1.0, abs(float(np.dot(a, b))))
    return 2.0 * math.acos(d)


def quat_to_matrix(q: Quat) -> np.ndarray:
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def quat_from_matrix(m: np.ndarray) -> Quat:
    """Rotation matrix (3x3, orthonormal) to quaternion, Shepperd's method."""
    m = np.asarray(m, dtype=float)
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    if tr > 0.0:
        s = math.sqrt(tr + 1.0) * 2.0
        q = np.array([0.25 * s,
                      (m[2, 1] - m[1, 2]) / s,
                      (m[0, 2] - m[2, 0]) / s,
                      (m[1, 0] - m[0, 1]) / s])
    elif m[0, 0] > m[1, 1] and m[0, 0] > m[2, 2]:
        s = math.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2]) * 2.0
        q = np.array([(m[2, 1] - m[1, 2]) / s,
                      0.25 * s,
                      (m[0, 1] + m[1, 0]) / s,
                      (m[0, 2] + m[2, 0]) / s])
    elif m[1, 1] > m[2, 2]:
        s = math.sqrt(1.0 + m[1, 1] - m[0, 0] - m[2, 2]) * 2.0
        q = np.array([(m[0, 2] - m[2, 0]) / s,
                      (m[0, 1] + m[1, 0]) / s,
                      0.25 * s,
                      (m[1, 2] + m[2, 1]) / s])
    else:
        s = math.sqrt(1.0 + m[2, 2] - m[0, 0] - m[1, 1]) * 2.0
        q = np.array([(m[1, 0] - m[0, 1]) / s,
                      (m[0, 2] + m[2, 0]) / s,
                      (m[1, 2] + m[2, 1]) / s,
                      0.25 * s])
    return quat_normalize(q)


def look_rotation(forward: Vec3, up: Vec3 = WORLD_UP) -> Quat:
    """Rotation whose local +z axis points along *forward*, roll-stabilized
    against *up* (falls back to +x when forward is parallel to up)."""
    f = normalize(forward)
    if abs(float(np.dot(f, up))) > 1.0 - 1e-9:
        up = np.array([1.0, 0.0, 0.0])
    right = normalize(np.cross(up, f))
    true_up = np.cross(f, right)
    m = np.column_stack([right, true_up, f])
    return quat_from_matrix(m)


# ---------------------------------------------------------------------------
# Poses (rigid transforms)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Pose:
    """Rigid transform / frame: position plus unit-quaternion orientation."""

    position: Vec3
    orientation: Quat

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float))
        object.__setattr__(self, "orientation", quat_normalize(self.orientation))
        if not np.all(np.isfinite(self.position)):
            raise ValueError("non-finite pose position")

    @staticmethod
    def identity() -> "Pose":
        return Pose(np.zeros(3), quat_identity())

    def compose(self, other: "Pose") -> "Pose":
        """self o other: apply *other* first, then *self*."""
        return Pose(self.transform_point(other.position),
                    quat_multiply(self.orientation, other.orientation))

    def inverse(self) -> "Pose":
        inv_q = quat_conjugate(self.orientation)
        return Pose(quat_rotate(inv_q, -self.position), inv_q)

    def transform_point(self, p: Vec3) -> Vec3:
        return quat_rotate(self.orientation, p) + self.position

    def transform_direction(self, d: Vec3) -> Vec3:
        return quat_rotate(self.orientation, d)

    def axis(self, index: int) -> Vec3:
        """Local basis axis (0=x, 1=y, 2=z) expressed in world coordinates."""
        e = np.zeros(3)
        e[index] = 1.0
        return quat_rotate(self.orientation, e)

    def translated(self, offset: Vec3) -> "Pose":
        return Pose(self.position + np.asarray(offset, dtype=float), self.orientation)


def transform_between_frames(p: Pose, from_frame: Pose, to_frame: Pose) -> Pose:
    """Re-express pose *p* given in/near *from_frame* at the equivalent
    location relative to *to_frame*: to_frame o from_frame^-1 o p."""
    return to_frame.compose(from_frame.inverse()).compose(p)


def transform_point_between_frames(point: Vec3, from_frame: Pose, to_frame: Pose) -> Vec3:
    return to_frame.transform_point(from_frame.inverse().transform_point(point))


# ---------------------------------------------------------------------------
# Shapes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ray:
    """Origin plus unit direction."""

    origin: Vec3
    direction: Vec3

    def __post_init__(self):
        object.__setattr__(self, "origin", np.asarray(self.origin, dtype=float))
        object.__setattr__(self, "direction", np.asarray(self.direction, dtype=float))
        if not is_unit(self.direction):
            raise ValueError("ray direction must be unit length")

    @classmethod
    def aimed(cls, origin: Vec3, toward: Vec3) -> "Ray":
        return cls(np.asarray(origin, dtype=float),
                   normalize(np.asarray(toward, dtype=float) - np.asarray(origin, dtype=float)))

    def point_at(self, t: float) -> Vec3:
        return self.origin + t * self.direction


@dataclass(frozen=True)
class Disc:
    center: Vec3
    normal: Vec3
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        object.__setattr__(self, "normal", np.asarray(self.normal, dtype=float))
        if not is_unit(self.normal):
            raise ValueError("disc normal must be unit length")
        if self.radius <= 0.0:
            raise ValueError("disc radius must be positive")


@dataclass(frozen=True)
class Sphere:
    center: Vec3
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.radius <= 0.0:
            raise ValueError("sphere radius must be positive")


@dataclass(frozen=True)
class Tetrahedron:
    """Regular tetrahedron with per-vertex color labels fixing correspondence."""

    vertices: np.ndarray                      # (4, 3)
    labels: tuple[str, str, str, str] = ("red", "green", "blue", "yellow")

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.shape != (4, 3):
            raise ValueError("tetrahedron needs four 3D vertices")
        object.__setattr__(self, "vertices", v)
        if len(set(self.labels)) != 4:
            raise ValueError("vertex labels must be distinct")
        edges = [np.linalg.norm(v[i] - v[j]) for i in range(4) for j in range(i + 1, 4)]
        if max(edges) - min(edges) > GEOM_TOL:
            raise ValueError("tetrahedron is not regular")
        if self.volume() <= 0.0:
            raise ValueError("degenerate tetrahedron")

    @classmethod
    def regular(cls, edge: float, pose: Pose | None = None,
                labels: tuple[str, str, str, str] = ("red", "green", "blue", "yellow")) -> "Tetrahedron":
        """Regular tetrahedron of the given edge length, centroid at the pose origin."""
        if edge <= 0.0:
            raise ValueError("edge length must be positive")
        s = edge / (2.0 * math.sqrt(2.0))
        base = np.array([[1.0, 1.0, 1.0],
                         [1.0, -1.0, -1.0],
                         [-1.0, 1.0, -1.0],
                         [-1.0, -1.0, 1.0]]) * s
        tet = cls(base, labels)
        return tet.transformed(pose) if pose is not None else tet

    def centroid(self) -> Vec3:
        return self.vertices.mean(axis=0)

    def volume(self) -> float:
        a, b, c, d = self.vertices
        return abs(float(np.dot(b - a, np.cross(c - a, d - a)))) / 6.0

    def edge_length(self) -> float:
        return float(np.linalg.norm(self.vertices[0] - self.vertices[1]))

    def transformed(self, pose: Pose) -> "Tetrahedron":
        moved = np.array([pose.transform_point(v) for v in self.vertices])
        return Tetrahedron(moved, self.labels)

    def vertex(self, label: str) -> Vec3:
        return self.vertices[self.labels.index(label)]


# ---------------------------------------------------------------------------
# Intersections and the teleport arc
# ---------------------------------------------------------------------------

def ray_sphere_intersect(ray: Ray, s: Sphere) -> float | None:
    """Smallest non-negative ray parameter t hitting the sphere surface, or None."""
    oc = ray.origin - s.center
    b = float(np.dot(oc, ray.direction))
    c = float(np.dot(oc, oc)) - s.radius * s.radius
    disc = b * b - c
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    t = -b - sq
    if t < 0.0:
        t = -b + sq
    return t if t >= 0.0 else None


def ray_disc_intersect(ray: Ray, d: Disc) -> Vec3 | None:
    """Intersection point with the disc (plane hit within radius), or None.

    A ray parallel to the disc plane counts as a miss even when the origin
    lies exactly in the plane.
    """
    denom = float(np.dot(ray.direction, d.normal))
    if abs(denom) < 1e-12:
        return None
    t = float(np.dot(d.center - ray.origin, d.normal)) / denom
    if t < 0.0:
        return None
    hit = ray.point_at(t)
    if np.linalg.norm(hit - d.center) > d.radius + EXACT_TOL:
        return None
    return hit


def teleport_arc_ground_hit(origin: Vec3, aim_direction: Vec3, arc_strength: float,
                            floor_height: float) -> Vec3 | None:
    """Landing point of a ballistic aiming arc on the plane y = floor_height.

    The arc is a parabola launched from *origin* with velocity
    arc_strength * aim_direction under gravity GRAVITY. Returns None when the
    arc never reaches the floor plane going forward in time (possible only
    when the floor lies above the launch point).
    """
    origin = np.asarray(origin, dtype=float)
    if not is_unit(aim_direction):
        raise ValueError("aim direction must be unit length")
    if arc_strength < 0.0:
        raise ValueError("arc strength must be non-negative")
    v = arc_strength * np.asarray(aim_direction, dtype=float)
    # y(t) = y0 + vy t - g/2 t^2 = floor_height
    a = -0.5 * GRAVITY
    b = v[1]
    c = origin[1] - floor_height
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    roots = sorted(((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)))
    t = next((r for r in roots if r >= -1e-12), None)
    if t is None:
        return None
    t = max(t, 0.0)
    landing = origin + v * t
    landing[1] += a * t * t
    landing[1] = floor_height  # exact by construction, pin against roundoff
    return landing
