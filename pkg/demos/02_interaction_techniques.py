"""Compare the arm-extension techniques' control-display behavior: direct
HOMER's grab-time scale, Linear Offset's fixed gain, and the teleport fades.

Run: python demos/02_interaction_techniques.py
"""

import numpy as np

from portalbench.geometry import Pose, quat_identity, teleport_arc_ground_hit, vec3
from portalbench.techniques import (
    HomerState,
    LinearOffsetState,
    TeleportState,
    effective_cd_ratio,
    homer_grab,
    homer_track,
    linear_offset_map,
    teleport_execute,
    teleport_phase_at,
)

user = Pose(vec3(0, 1.4, 0), quat_identity())
controller = Pose(vec3(0, 1.4, 0.5), quat_identity())

print("direct HOMER: scale fixed at grab from user-object / user-controller")
for depth in (2.0, 5.0, 9.0):
    state = homer_grab(HomerState.idle().start_aiming(), user, controller,
                       vec3(0, 1.4, depth))
    hand = homer_track(state, user, Pose(vec3(0, 1.4, 0.52), quat_identity()))
    cd = effective_cd_ratio("homer", state).value
    print(f"  object at {depth:4.1f} m: scale {state.grab_scale:5.1f}, "
          f"CD ratio {cd:.4f}, 2 cm of hand -> {hand.position[2] - depth:.3f} m")

print("\nLinear Offset: one gain for the whole session")
lo = LinearOffsetState.calibrate(room_half_extent=9.0, reach_m=0.6)
print(f"  k = {lo.k:.1f} (reach 0.6 m spans a 9 m half-room)")
for extension in (0.15, 0.3, 0.6):
    cursor = linear_offset_map(lo, user, Pose(vec3(0, 1.4, extension), quat_identity()))
    print(f"  arm at {extension:.2f} m -> cursor {cursor.position[2]:.2f} m")
print(f"  CD ratio {effective_cd_ratio('linear_offset', lo).value:.4f} at any distance")

print("\nteleportation: ballistic arc to the floor, then fade out/in")
aim = vec3(0, 0.45, 0.89)
aim = aim / np.linalg.norm(aim)
landing = teleport_arc_ground_hit(vec3(0, 1.4, 0), aim, 6.0, 0.0)
print(f"  arc lands at {landing}")
state, arrived = teleport_execute(TeleportState().start_aiming(), user, landing, now=0.0)
for t in (0.1, 0.3, 0.5):
    print(f"  t = {t:.1f} s: phase {teleport_phase_at(state, t):10s} "
          f"(move applies at {state.switch_time:.1f} s)")
print(f"  arrived pose {arrived.position} (height preserved)")
