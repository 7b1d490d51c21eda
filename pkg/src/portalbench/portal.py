"""Portal-widget mechanism: a visible primary disc near the user linked to an
invisible secondary disc near a remote target, rendered from a portal camera.
Hands crossing the primary disc act at the remote location with a 1:1
control-display mapping (clutching).

All operations are state-in/state-out on immutable values: the PortalPair
carries both disc frames, the portal camera, and the anchor poses that define
the camera follow law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .geometry import (
    Disc,
    Pose,
    Ray,
    Vec3,
    dist,
    look_rotation,
    transform_between_frames,
)

PRIMARY_DISC_RADIUS = 0.6      # m
PRIMARY_OFFSET_FRACTION = 0.5  # of arm reach, from the user along the ray
SECONDARY_OFFSET_FRACTION = 0.25  # of arm reach, back from the target
CAMERA_OFFSET_FRACTION = 0.75  # of arm reach, back from the target
DEFAULT_HAND_LENGTH = 0.18     # m; "halfway through" grab band is 0.4..0.6 of this
GRAB_BAND = (0.4, 0.6)


@dataclass(frozen=True)
class ArmReach:
    """Calibrated arm reach R in meters (shoulder to dominant hand)."""

    meters: float

    def __post_init__(self):
        if not 0.3 <= self.meters <= 1.2:
            raise ValueError(f"arm reach {self.meters} m outside sanity bounds [0.3, 1.2]")


@dataclass(frozen=True)
class Frustum:
    """Off-axis frustum extents at the near plane."""

    left: float
    right: float
    bottom: float
    top: float
    near: float
    far: float

    def __post_init__(self):
        if not (self.near < self.far and self.left < self.right and self.bottom < self.top):
            raise ValueError("degenerate frustum")


@dataclass(frozen=True)
class StereoProjection:
    left_eye: Frustum
    right_eye: Frustum
    ipd: float


@dataclass(frozen=True)
class RemoteHand:
    """Result of pushing a local hand pose through the portal."""

    local_hand: Pose
    remote_pose: Pose | None
    penetration_depth: float   # signed m past the primary disc plane; >0 = through


@dataclass(frozen=True)
class PortalPair:
    primary_disc: Disc
    secondary_disc: Disc
    primary_frame: Pose
    secondary_frame: Pose
    portal_camera: Pose
    target_point: Vec3
    creation_ray: Ray
    arm_reach: ArmReach
    is_open: bool
    anchor_head: Pose
    anchor_camera: Pose

    def portal_map(self) -> Pose:
        """Rigid map taking near-side (primary) space to remote (secondary) space."""
        return self.secondary_frame.compose(self.primary_frame.inverse())


def _require_open(pair: PortalPair) -> None:
    if not pair.is_open:
        raise ValueError("portal not open")


def place_portal(user: Pose, hand_ray: Ray, target_hit: Vec3, reach: ArmReach) -> PortalPair:
    """Create a portal pair from a ray-cast hit on a remote target.

    The primary disc sits 0.5 R in front of the user along the ray, the
    secondary disc 0.25 R in front of the target (toward the user), and the
    portal camera 0.75 R in front of the target, looking at it. Targets
    closer than 0.75 R are already within reach and are rejected.
    """
    r = reach.meters
    target_hit = np.asarray(target_hit, dtype=float)
    if dist(user.position, target_hit) < CAMERA_OFFSET_FRACTION * r:
        raise ValueError("target already within reach")
    d = hand_ray.direction
    frame_rot = look_rotation(d)
    primary_center = user.position + PRIMARY_OFFSET_FRACTION * r * d
    secondary_center = target_hit - SECONDARY_OFFSET_FRACTION * r * d
    camera = Pose(target_hit - CAMERA_OFFSET_FRACTION * r * d, frame_rot)
    return PortalPair(
        primary_disc=Disc(primary_center, d, PRIMARY_DISC_RADIUS),
        secondary_disc=Disc(secondary_center, -d, PRIMARY_DISC_RADIUS),
        primary_frame=Pose(primary_center, frame_rot),
        secondary_frame=Pose(secondary_center, frame_rot),
        portal_camera=camera,
        target_point=target_hit,
        creation_ray=hand_ray,
        arm_reach=reach,
        is_open=True,
        anchor_head=user,
        anchor_camera=camera,
    )


def update_portal_camera(pair: PortalPair, head: Pose) -> PortalPair:
    """Follow the head rigidly: the camera is displaced from its anchor pose by
    the head's displacement from its own anchor, conjugated through the portal
    frame pair."""
    _require_open(pair)
    m = pair.portal_map()
    delta = head.compose(pair.anchor_head.inverse())
    mapped_delta = m.compose(delta).compose(m.inverse())
    return replace(pair, portal_camera=mapped_delta.compose(pair.anchor_camera))


class PerceivedDistance(NamedTuple):
    through_portal: float    # head to the target's illusion behind the primary disc
    camera_to_target: float  # portal camera (mapped head) to the real target

    @property
    def meters(self) -> float:
        return self.camera_to_target


def perceived_target_distance(pair: PortalPair, head: Pose) -> PerceivedDistance:
    """Both sides of the portal depth identity, computed independently.

    The illusion side pulls the target back through the inverse portal map and
    measures from the head; the camera side pushes the head forward through
    the map and measures to the real target. For a rigid map the two agree.
    """
    _require_open(pair)
    m = pair.portal_map()
    illusion = m.inverse().transform_point(pair.target_point)
    through = dist(head.position, illusion)
    camera_pos = m.transform_point(head.position)
    return PerceivedDistance(through, dist(camera_pos, pair.target_point))


def window_frustum(eye: Vec3, frame: Pose, radius: float, near: float, far: float) -> Frustum:
    """Off-axis frustum from *eye* exactly framing the bounding square of a
    disc-shaped window given by *frame* (local +z = window normal)."""
    right = frame.axis(0)
    up = frame.axis(1)
    forward = frame.axis(2)
    to_center = frame.position - np.asarray(eye, dtype=float)
    plane_dist = float(np.dot(to_center, forward))
    if plane_dist <= 0.0:
        raise ValueError("viewer behind portal")
    scale = near / plane_dist
    cx = float(np.dot(to_center, right))
    cy = float(np.dot(to_center, up))
    return Frustum(left=(cx - radius) * scale, right=(cx + radius) * scale,
                   bottom=(cy - radius) * scale, top=(cy + radius) * scale,
                   near=near, far=far)


def stereo_projection_for_portal(pair: PortalPair, head: Pose, ipd: float,
                                 near: float, far: float) -> StereoProjection:
    """Per-eye off-axis frusta framing the primary disc from the head's eyes.

    ipd is the interpupillary distance (human range roughly 0.05-0.08 m; 0 is
    accepted and yields identical frusta). Because the portal camera is the
    head mapped rigidly through the frame pair, the same frusta frame the
    secondary disc from the mapped eye positions.
    """
    _require_open(pair)
    if not 0.0 <= ipd <= 0.12:
        raise ValueError(f"implausible ipd {ipd}")
    if not 0.0 < near < far:
        raise ValueError("need 0 < near < far")
    head_right = head.axis(0)
    eyes = (head.position - 0.5 * ipd * head_right,
            head.position + 0.5 * ipd * head_right)
    left, right = (window_frustum(eye, pair.primary_frame, pair.primary_disc.radius, near, far)
                   for eye in eyes)
    return StereoProjection(left_eye=left, right_eye=right, ipd=ipd)


def map_hand_through_portal(pair: PortalPair, hand: Pose) -> RemoteHand:
    """Signed penetration of the hand past the primary disc plane, plus its
    remote image when it actually crosses the disc (within the rim).

    The remote image is the rigid frame transfer (CD ratio exactly 1); hands
    on or before the plane, or beyond the plane but outside the disc radius,
    get no remote pose.
    """
    _require_open(pair)
    forward = pair.primary_frame.axis(2)
    rel = hand.position - pair.primary_frame.position
    depth = float(np.dot(rel, forward))
    lateral = math.sqrt(max(float(np.dot(rel, rel)) - depth * depth, 0.0))
    inside_rim = lateral <= pair.primary_disc.radius
    crossing = depth > 0.0 and inside_rim
    remote = (transform_between_frames(hand, pair.primary_frame, pair.secondary_frame)
              if crossing else None)
    reported_depth = depth if (depth <= 0.0 or inside_rim) else 0.0
    return RemoteHand(local_hand=hand, remote_pose=remote, penetration_depth=reported_depth)


def grab_marker_active(pair: PortalPair, hand: Pose,
                       hand_length: float = DEFAULT_HAND_LENGTH) -> bool:
    """True when the hand is halfway through the primary disc (the relocation
    grab band, 0.4-0.6 of the hand length past the plane, inside the rim)."""
    crossed = map_hand_through_portal(pair, hand)
    lo, hi = GRAB_BAND
    return (crossed.remote_pose is not None
            and lo * hand_length <= crossed.penetration_depth <= hi * hand_length)


def relocate_portal(pair: PortalPair, grab_delta: Pose) -> PortalPair:
    """Rigidly move the primary disc by *grab_delta*; the secondary disc and
    the portal camera receive the frame-mapped equivalent motion, keeping the
    pair rigidly linked (the composite portal map is unchanged)."""
    _require_open(pair)
    m = pair.portal_map()
    mapped = m.compose(grab_delta).compose(m.inverse())
    new_primary = grab_delta.compose(pair.primary_frame)
    new_secondary = mapped.compose(pair.secondary_frame)
    return replace(
        pair,
        primary_frame=new_primary,
        secondary_frame=new_secondary,
        primary_disc=Disc(new_primary.position, new_primary.axis(2), pair.primary_disc.radius),
        secondary_disc=Disc(new_secondary.position, -new_secondary.axis(2),
                            pair.secondary_disc.radius),
        portal_camera=mapped.compose(pair.portal_camera),
        anchor_camera=mapped.compose(pair.anchor_camera),
    )


def retarget_or_close(pair: PortalPair, hand_ray: Ray, scene_hit: Vec3 | None,
                      hit_was_inside_portal_view: bool) -> PortalPair:
    """Re-aim the remote end at a new target seen through the portal, or close
    the pair when the operation was performed outside it.

    Retargeting re-places only the secondary disc and the camera around the
    new target with the 0.25 R / 0.75 R placement rules along the original
    creation ray; the primary disc stays put.
    """
    _require_open(pair)
    if not (hit_was_inside_portal_view and scene_hit is not None):
        return replace(pair, is_open=False)
    r = pair.arm_reach.meters
    d = pair.creation_ray.direction
    new_target = np.asarray(scene_hit, dtype=float)
    frame_rot = look_rotation(d)
    secondary_center = new_target - SECONDARY_OFFSET_FRACTION * r * d
    camera = Pose(new_target - CAMERA_OFFSET_FRACTION * r * d, frame_rot)
    return replace(
        pair,
        secondary_frame=Pose(secondary_center, frame_rot),
        secondary_disc=Disc(secondary_center, -d, pair.secondary_disc.radius),
        portal_camera=camera,
        anchor_camera=camera,
        target_point=new_target,
    )
