"""Walk through the portal widget: placement, the depth illusion, clutched
hands, relocation, and retargeting.

Run: python demos/01_portal_geometry.py
"""

import numpy as np

from portalbench.geometry import Pose, Ray, quat_from_axis_angle, quat_identity, vec3
from portalbench.portal import (
    ArmReach,
    map_hand_through_portal,
    perceived_target_distance,
    place_portal,
    relocate_portal,
    retarget_or_close,
    update_portal_camera,
)

# A user standing at the origin aims a ray at a target 6 m ahead. The arm
# reach R controls every placement offset.
user = Pose(vec3(0, 1.7, 0), quat_identity())
ray = Ray(user.position, vec3(0, 0, 1))
target = vec3(0, 1.7, 6)
pair = place_portal(user, ray, target, ArmReach(0.6))

print("placement (R = 0.6 m)")
print("  primary disc  ", pair.primary_disc.center, "  <- user + 0.5 R")
print("  secondary disc", pair.secondary_disc.center, "  <- target - 0.25 R")
print("  portal camera ", pair.portal_camera.position, "  <- target - 0.75 R")

# The illusion: looking through the primary disc, the target appears at the
# same distance the portal camera has to the real target.
d = perceived_target_distance(pair, user)
print("\ndepth illusion")
print(f"  head -> illusion        {d.through_portal:.6f} m")
print(f"  camera -> real target   {d.camera_to_target:.6f} m")

# Walk to the side; the camera follows rigidly and the identity still holds.
head = Pose(vec3(0.3, 1.75, 0.1), quat_identity())
pair = update_portal_camera(pair, head)
d = perceived_target_distance(pair, head)
print(f"  after stepping aside: {d.through_portal:.6f} == {d.camera_to_target:.6f}")

# Push a hand through the primary disc: it acts at the remote side, 1:1.
hand_a = Pose(pair.primary_disc.center + vec3(0.02, 0.00, 0.08), quat_identity())
hand_b = Pose(pair.primary_disc.center + vec3(0.07, 0.00, 0.08), quat_identity())
ra = map_hand_through_portal(pair, hand_a)
rb = map_hand_through_portal(pair, hand_b)
print("\nclutched hands (control-display ratio 1)")
print(f"  local gap  {np.linalg.norm(hand_a.position - hand_b.position):.4f} m")
print(f"  remote gap {np.linalg.norm(ra.remote_pose.position - rb.remote_pose.position):.4f} m")
print(f"  penetration depth {ra.penetration_depth:.3f} m past the disc plane")

# Grab the primary disc and move it: the secondary end moves in lockstep.
delta = Pose(vec3(0.2, 0, 0), quat_from_axis_angle(vec3(0, 1, 0), 0.2))
moved = relocate_portal(pair, delta)
print("\nrelocation (rigid linkage)")
print("  primary   ->", moved.primary_disc.center)
print("  secondary ->", moved.secondary_disc.center)

# Re-aim at a new object seen inside the portal: only the remote end jumps.
retargeted = retarget_or_close(moved, ray, vec3(1.2, 1.7, 6.5), True)
print("\nretarget inside the portal view")
print("  primary unchanged:", retargeted.primary_disc.center)
print("  secondary now    :", retargeted.secondary_disc.center)

# The same operation aimed outside the portal closes it.
closed = retarget_or_close(retargeted, ray, vec3(-3, 1.7, 2), False)
print("  aimed outside -> open =", closed.is_open)
