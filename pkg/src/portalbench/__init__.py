"""portalbench: headless simulator and experiment harness for remote 3D
object selection and manipulation techniques.

Submodules map one-to-one onto the artifact's parts:

- geometry: vectors, quaternion rotations, poses, rays, intersections
- portal: the portal-widget mechanism (placement, camera, clutched hands)
- techniques: virtual hand, direct HOMER, Linear Offset, teleportation
- tasks: ISO 9241-9 tapping and tetrahedron docking, trial logging
- agent: simulated participants (Fitts timing, jitter/tremor noise)
- stats: throughput, error rate, RM-ANOVA/GG, Tukey HSD, Kruskal-Wallis, VRSQ
- harness: configs, Latin squares, batch runs, CSV persistence, reports
- cli: `portalbench run|report|import|validate`
"""

from .geometry import (
    Disc,
    Pose,
    Ray,
    Sphere,
    Tetrahedron,
    ray_disc_intersect,
    ray_sphere_intersect,
    teleport_arc_ground_hit,
    transform_between_frames,
)
from .portal import (
    ArmReach,
    PortalPair,
    map_hand_through_portal,
    perceived_target_distance,
    place_portal,
    relocate_portal,
    retarget_or_close,
    stereo_projection_for_portal,
    update_portal_camera,
)
from .tasks import (
    DockingTrial,
    SelectionLayout,
    TrialLog,
    build_docking_trial,
    build_selection_layout,
    compute_id,
    docking_error,
    is_docked,
)
from .techniques import (
    CdRatio,
    HomerState,
    LinearOffsetState,
    TeleportState,
    effective_cd_ratio,
    homer_grab,
    homer_track,
    linear_offset_map,
    teleport_execute,
)

__version__ = "0.1.0"

__all__ = [
    "ArmReach", "CdRatio", "Disc", "DockingTrial", "HomerState",
    "LinearOffsetState", "PortalPair", "Pose", "Ray", "SelectionLayout",
    "Sphere", "TeleportState", "Tetrahedron", "TrialLog",
    "build_docking_trial", "build_selection_layout", "compute_id",
    "docking_error", "effective_cd_ratio", "homer_grab", "homer_track",
    "is_docked", "linear_offset_map", "map_hand_through_portal",
    "perceived_target_distance", "place_portal", "ray_disc_intersect",
    "ray_sphere_intersect", "relocate_portal", "retarget_or_close",
    "stereo_projection_for_portal", "teleport_arc_ground_hit",
    "teleport_execute", "transform_between_frames", "update_portal_camera",
]
