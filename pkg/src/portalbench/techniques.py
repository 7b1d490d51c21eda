"""State machines and mappings for the remote-interaction techniques:
simple virtual hand, direct HOMER, Linear Offset, portal clutching, and
teleportation.

Orientation mapping is exactly 1:1 for every technique (angular
control-display ratio 1); only positions are scaled or clutched.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .geometry import Pose, Vec3, dist

VIRTUAL_HAND = "virtual_hand"
HOMER = "homer"
LINEAR_OFFSET = "linear_offset"
PORTAL = "portal"
TELEPORT = "teleport"

TECHNIQUES = (PORTAL, HOMER, LINEAR_OFFSET, VIRTUAL_HAND, TELEPORT)

DEFAULT_CHEST_HEIGHT = 1.4  # m, body anchor height for arm-extension techniques
DEFAULT_FADE_DURATION = 0.4  # s, teleport fade out + in


def torso_anchor(head: Pose, chest_height: float = DEFAULT_CHEST_HEIGHT) -> Pose:
    """Body anchor pose: the head pose projected down to chest height."""
    p = np.array(head.position, dtype=float)
    p[1] = chest_height
    return Pose(p, head.orientation)


@dataclass(frozen=True)
class CdRatio:
    """Control-display ratio: input displacement over cursor displacement."""

    value: float

    def __post_init__(self):
        if not self.value > 0.0:
            raise ValueError("CD ratio must be positive")


# ---------------------------------------------------------------------------
# Direct HOMER
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomerState:
    """Ray selection, then scaled hand manipulation.

    The scale is fixed at grab time from the user-object over user-controller
    distances; manipulation applies the scaled controller displacement from
    the grab anchors, rotating 1:1 with the controller. The object pivots
    about the virtual hand (which lands on the object center at grab).
    """

    phase: str = "idle"                 # idle | aiming | grabbing
    grab_scale: float | None = None
    user_anchor: Pose | None = None
    controller_anchor: Pose | None = None
    object_anchor: Vec3 | None = None

    @staticmethod
    def idle() -> "HomerState":
        return HomerState()

    def start_aiming(self) -> "HomerState":
        return replace(self, phase="aiming")

    def release(self) -> "HomerState":
        """Interaction done: the virtual hand returns instantly (idempotent)."""
        return HomerState()


def homer_grab(state: HomerState, user: Pose, controller: Pose,
               ray_hit_object_center: Vec3 | None) -> HomerState:
    if ray_hit_object_center is None:
        raise ValueError("nothing selected")
    d_object = dist(user.position, ray_hit_object_center)
    d_controller = dist(user.position, controller.position)
    if d_controller < 1e-9:
        raise ValueError("controller coincides with the user anchor")
    return HomerState(
        phase="grabbing",
        grab_scale=d_object / d_controller,
        user_anchor=user,
        controller_anchor=controller,
        object_anchor=np.asarray(ray_hit_object_center, dtype=float),
    )


def homer_track(state: HomerState, user: Pose, controller: Pose) -> Pose:
    """Virtual-hand pose while grabbing: object anchor plus the scaled
    controller displacement, orientation 1:1 with the controller."""
    if state.phase != "grabbing":
        raise ValueError("not grabbing")
    offset = controller.position - state.controller_anchor.position
    return Pose(state.object_anchor + state.grab_scale * offset, controller.orientation)


# ---------------------------------------------------------------------------
# Linear Offset
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearOffsetState:
    """Fixed-gain linear mapping: cursor = user + k * (controller - user).

    k is calibrated once per session so a fully extended arm reaches the room
    walls from the room center, and does not vary with target distance.
    """

    k: float
    room_half_extent: float
    reach_m: float

    def __post_init__(self):
        if self.k <= 0.0:
            raise ValueError("gain must be positive")

    @classmethod
    def calibrate(cls, room_half_extent: float, reach_m: float) -> "LinearOffsetState":
        if room_half_extent <= 0.0 or reach_m <= 0.0:
            raise ValueError("calibration inputs must be positive")
        return cls(k=room_half_extent / reach_m, room_half_extent=room_half_extent,
                   reach_m=reach_m)


def linear_offset_map(state: LinearOffsetState, user: Pose, controller: Pose) -> Pose:
    pos = user.position + state.k * (controller.position - user.position)
    return Pose(pos, controller.orientation)


# ---------------------------------------------------------------------------
# Teleportation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TeleportState:
    """Arc-aimed relocation with a fade out then fade in, each half the fade
    duration; the position change lands at the midpoint."""

    phase: str = "idle"                 # idle | aiming | fading_out | fading_in
    fade_duration: float = DEFAULT_FADE_DURATION
    pending_destination: Vec3 | None = None
    fade_out_start: float | None = None

    @property
    def switch_time(self) -> float | None:
        if self.fade_out_start is None:
            return None
        return self.fade_out_start + 0.5 * self.fade_duration

    @property
    def fade_in_end(self) -> float | None:
        if self.fade_out_start is None:
            return None
        return self.fade_out_start + self.fade_duration

    def start_aiming(self) -> "TeleportState":
        return replace(self, phase="aiming")


def teleport_execute(state: TeleportState, user: Pose, landing: Vec3 | None,
                     now: float) -> tuple[TeleportState, Pose]:
    """Commit a teleport to *landing*: returns the fading state and the user
    pose that applies once the fades complete (x/z from the landing, height
    preserved)."""
    if landing is None:
        raise ValueError("no floor hit")
    landing = np.asarray(landing, dtype=float)
    arrived = Pose(np.array([landing[0], user.position[1], landing[2]]), user.orientation)
    new_state = replace(state, phase="fading_out", pending_destination=landing,
                        fade_out_start=float(now))
    return new_state, arrived


def teleport_pose_at(state: TeleportState, original: Pose, arrived: Pose, t: float) -> Pose:
    """User pose during a committed teleport: the move applies at the fade
    midpoint."""
    if state.fade_out_start is None:
        raise ValueError("no teleport in progress")
    return original if t < state.switch_time else arrived


def teleport_phase_at(state: TeleportState, t: float) -> str:
    if state.fade_out_start is None:
        return state.phase
    if t < state.switch_time:
        return "fading_out"
    if t < state.fade_in_end:
        return "fading_in"
    return "idle"


# ---------------------------------------------------------------------------
# Control-display ratios
# ---------------------------------------------------------------------------

def effective_cd_ratio(technique: str, configuration: object | None = None,
                       distance_to_target: float | None = None) -> CdRatio:
    """Control-display ratio of a technique in its current phase.

    virtual hand and the portal inner space are 1; Linear Offset is 1/k;
    HOMER while grabbing is 1/grab_scale. Techniques/phases without a defined
    ratio (teleport, HOMER outside a grab) raise.
    """
    if technique in (VIRTUAL_HAND, PORTAL):
        return CdRatio(1.0)
    if technique == LINEAR_OFFSET:
        if not isinstance(configuration, LinearOffsetState):
            raise ValueError("linear offset requires a calibrated state")
        return CdRatio(1.0 / configuration.k)
    if technique == HOMER:
        if not (isinstance(configuration, HomerState) and configuration.phase == "grabbing"):
            raise ValueError("HOMER has a defined CD ratio only while grabbing")
        return CdRatio(1.0 / configuration.grab_scale)
    raise ValueError(f"no defined CD ratio for technique {technique!r}")
