"""Simulated participants: Fitts-law movement times, Gaussian angular ray
jitter (the click-amplified jitter that degrades ray pointing with distance),
and hand tremor amplified by each technique's control-display ratio.

The agents reproduce qualitative orderings and invariances (portal clutching
is distance-invariant; offset techniques degrade with distance), not human
means. Same seed and parameters give byte-identical trial logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tasks
from .geometry import Pose
from .tasks import DockingTrial, SelectionLayout, TrialLog, advance_selection, docking_error, \
    start_selection_trial
from .techniques import HOMER, LINEAR_OFFSET, PORTAL, TELEPORT, VIRTUAL_HAND

DOCK_STEP_SECONDS = 0.5        # one align-check iteration
DOCK_STEP_GAIN = 0.5           # error reduction per iteration before the noise floor
DOCK_STEP_CAP = 10_000
GRAB_HALF_WIDTH = 0.15         # m, graspable half-extent of the docking object
TELEPORT_LANDING_HALF_WIDTH = 0.3  # m, acceptable arc-landing zone
TELEPORT_WALK_SPEED = 1.0      # m/s, post-teleport adjustment speed
DEFAULT_CONTROLLER_DISTANCE = 0.5  # m, hand-to-body distance while ray selecting
DEFAULT_REACH = 0.6
DEFAULT_ROOM_HALF_EXTENT = 9.0
ATTEMPT_CAP = 10_000


@dataclass(frozen=True)
class AgentParams:
    fitts_a: float = 0.2                 # s
    fitts_b: float = 0.3                 # s/bit
    angular_jitter_sigma: float = 0.0035  # rad, ray direction at click
    hand_tremor_sigma: float = 0.0015     # m
    reaction_time: float = 0.15           # s
    seed: int = 0

    def __post_init__(self):
        for name in ("fitts_a", "fitts_b", "angular_jitter_sigma",
                     "hand_tremor_sigma", "reaction_time"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")
        if self.angular_jitter_sigma >= 0.1 or self.hand_tremor_sigma >= 0.1:
            raise ValueError("jitter/tremor sigma out of range (< 0.1)")


def rng_for(params: AgentParams, participant: int = 0, trial: int = 0) -> np.random.Generator:
    """Independent stream per (seed, participant, trial)."""
    return np.random.default_rng(np.random.SeedSequence((params.seed, participant, trial)))


def technique_cd_ratio(technique: str, distance: float, *,
                       reach: float = DEFAULT_REACH,
                       room_half_extent: float = DEFAULT_ROOM_HALF_EXTENT,
                       controller_distance: float = DEFAULT_CONTROLLER_DISTANCE) -> float:
    """Control-display ratio the agent operates at for targets at *distance*."""
    if technique in (PORTAL, VIRTUAL_HAND, TELEPORT):
        return 1.0
    if technique == HOMER:
        return controller_distance / distance
    if technique == LINEAR_OFFSET:
        return reach / room_half_extent
    raise ValueError(f"unknown technique {technique!r}")


def ray_hit_probability(sigma: float, width: float, distance: float) -> float:
    """Hit probability of one ray click with Gaussian angular jitter *sigma*
    against the target's angular half-size width/(2 distance)."""
    if sigma == 0.0:
        return 1.0
    theta = width / (2.0 * distance)
    return 1.0 - math.exp(-theta * theta / (2.0 * sigma * sigma))


def hand_hit_probability(sigma_eff: float, width: float) -> float:
    """Hit probability of one positional click with effective lateral tremor
    *sigma_eff* against the half-width tolerance."""
    if sigma_eff == 0.0:
        return 1.0
    half = width / 2.0
    return 1.0 - math.exp(-half * half / (2.0 * sigma_eff * sigma_eff))


def selection_hit_probability(technique: str, distance: float, width: float,
                              params: AgentParams, *,
                              reach: float = DEFAULT_REACH,
                              room_half_extent: float = DEFAULT_ROOM_HALF_EXTENT,
                              controller_distance: float = DEFAULT_CONTROLLER_DISTANCE,
                              through_portal: bool = False) -> float:
    """Per-click success probability for selecting a width-sized target.

    Ray techniques miss from angular jitter (shrinking angular size with
    distance); hand/cursor techniques from tremor amplified by 1/CD-ratio.
    Inside an open portal the mapping is 1:1, so tremor applies unamplified.
    """
    if technique == HOMER:
        return ray_hit_probability(params.angular_jitter_sigma, width, distance)
    if technique == LINEAR_OFFSET:
        cd = technique_cd_ratio(LINEAR_OFFSET, distance, reach=reach,
                                room_half_extent=room_half_extent)
        return hand_hit_probability(params.hand_tremor_sigma / cd, width)
    if technique in (PORTAL, VIRTUAL_HAND) or (technique == TELEPORT and through_portal is False):
        return hand_hit_probability(params.hand_tremor_sigma, width)
    raise ValueError(f"unknown technique {technique!r}")


def effective_pointing_id(technique: str, distance: float, amplitude: float,
                          width: float, *, reach: float = DEFAULT_REACH,
                          room_half_extent: float = DEFAULT_ROOM_HALF_EXTENT,
                          controller_distance: float = DEFAULT_CONTROLLER_DISTANCE) -> float:
    """Fitts index of difficulty in motor space: amplitude and width both map
    through the technique's CD ratio (identical by construction for portal
    clutching at every distance)."""
    cd = technique_cd_ratio(technique, distance, reach=reach,
                            room_half_extent=room_half_extent,
                            controller_distance=controller_distance)
    return tasks.compute_id(amplitude * cd, width * cd)


def _attempts_until_hit(p: float, rng: np.random.Generator) -> int:
    if p >= 1.0:
        return 1
    if p <= 0.0:
        return ATTEMPT_CAP
    return int(min(rng.geometric(p), ATTEMPT_CAP))


def _attempt_cost(params: AgentParams, id_bits: float) -> float:
    return params.fitts_a + params.fitts_b * id_bits


def simulate_portal_opening(params: AgentParams, target_distance: float, *,
                            target_width: float = tasks.TARGET_WIDTH,
                            id_bits: float | None = None,
                            rng: np.random.Generator | None = None
                            ) -> tuple[int, float]:
    """Ray-aimed portal placement: geometric number of attempts with the
    per-attempt success from the angular jitter model; every attempt costs a
    Fitts ray-aim time (one reaction, then re-aims)."""
    if rng is None:
        rng = rng_for(params)
    if id_bits is None:
        id_bits = tasks.compute_id(tasks.RING_DIAMETER, tasks.TARGET_WIDTH)
    p = ray_hit_probability(params.angular_jitter_sigma, target_width, target_distance)
    attempts = _attempts_until_hit(p, rng)
    open_time = params.reaction_time + attempts * _attempt_cost(params, id_bits)
    return attempts, open_time


def simulate_selection_trial(technique: str, layout: SelectionLayout, params: AgentParams,
                             *, participant: int = 0, trial: int = 0,
                             reach: float = DEFAULT_REACH,
                             room_half_extent: float = DEFAULT_ROOM_HALF_EXTENT,
                             controller_distance: float = DEFAULT_CONTROLLER_DISTANCE,
                             rng: np.random.Generator | None = None) -> TrialLog:
    """One tapping trial: acquire the center sphere (portal placement for the
    portal technique), then the 17 ring targets in the visit order. Each
    target costs one reaction plus a Fitts aim per attempt; misses accumulate
    clicks and time until the target is hit."""
    if rng is None:
        rng = rng_for(params, participant, trial)
    log = TrialLog(participant=participant, technique=technique,
                   distance_m=layout.distance, trial=trial, task="selection")
    state = start_selection_trial(layout, log, 0.0)
    id_bits = effective_pointing_id(
        technique, layout.distance, tasks.RING_DIAMETER, layout.target_width,
        reach=reach, room_half_extent=room_half_extent,
        controller_distance=controller_distance)
    t = 0.0

    # Center sphere: for the portal technique this is the portal placement.
    if technique == PORTAL:
        attempts, open_time = simulate_portal_opening(
            params, layout.distance, target_width=layout.target_width,
            id_bits=id_bits, rng=rng)
        for k in range(attempts - 1):
            t += _attempt_cost(params, id_bits) + (params.reaction_time if k == 0 else 0.0)
            log.add_event(t, "portal_open_attempt", "fail")
            state = advance_selection(state, None, t, log)
        t = open_time
        log.add_event(t, "portal_open", f"attempts={attempts}")
        state = advance_selection(state, 0, t, log)
    else:
        p_center = selection_hit_probability(
            technique, layout.distance, layout.target_width, params, reach=reach,
            room_half_extent=room_half_extent, controller_distance=controller_distance)
        attempts = _attempts_until_hit(p_center, rng)
        for k in range(attempts - 1):
            t += _attempt_cost(params, id_bits) + (params.reaction_time if k == 0 else 0.0)
            state = advance_selection(state, None, t, log)
        t = params.reaction_time + attempts * _attempt_cost(params, id_bits)
        state = advance_selection(state, 0, t, log)

    # Ring targets: portal selections happen through the open portal (1:1).
    p_ring = selection_hit_probability(
        technique, layout.distance, layout.target_width, params, reach=reach,
        room_half_extent=room_half_extent, controller_distance=controller_distance)
    for _ in layout.visit_order:
        target = state.current_target
        attempts = _attempts_until_hit(p_ring, rng)
        for k in range(attempts - 1):
            t += _attempt_cost(params, id_bits) + (params.reaction_time if k == 0 else 0.0)
            state = advance_selection(state, None, t, log)
        t += params.reaction_time if attempts == 1 else 0.0
        t += _attempt_cost(params, id_bits)
        state = advance_selection(state, target, t, log)

    times = tasks.scored_selection_times(log)
    log.selection_time_s = float(np.mean(times))
    return log


def _grab_time(technique: str, distance: float, params: AgentParams,
               rng: np.random.Generator, log: TrialLog, *,
               reach: float, room_half_extent: float, controller_distance: float) -> float:
    """Time to first grab of the docking object (portal placement + reach-in
    for the portal technique; arc aim + fades + walk for teleportation)."""
    id_bits = effective_pointing_id(technique if technique != TELEPORT else VIRTUAL_HAND,
                                    distance, tasks.RING_DIAMETER, tasks.TARGET_WIDTH,
                                    reach=reach, room_half_extent=room_half_extent,
                                    controller_distance=controller_distance)
    if technique == PORTAL:
        attempts, open_time = simulate_portal_opening(
            params, distance, target_width=2 * GRAB_HALF_WIDTH, id_bits=id_bits, rng=rng)
        for k in range(max(attempts - 1, 0)):
            log.add_event((k + 1) * _attempt_cost(params, id_bits), "portal_open_attempt", "fail")
        t = open_time
        log.add_event(t, "portal_open", f"attempts={attempts}")
        t += params.reaction_time + _attempt_cost(params, id_bits)  # reach in and grasp
        log.add_event(t, "grab", "through portal")
        return t
    if technique == TELEPORT:
        p_land = ray_hit_probability(params.angular_jitter_sigma,
                                     2 * TELEPORT_LANDING_HALF_WIDTH, distance)
        attempts = _attempts_until_hit(p_land, rng)
        t = params.reaction_time + attempts * _attempt_cost(params, id_bits)
        log.add_event(t, "teleport", f"attempts={attempts}")
        t += 0.4  # fade out + in
        walk = params.angular_jitter_sigma * distance / TELEPORT_WALK_SPEED
        t += walk + params.reaction_time + _attempt_cost(params, id_bits)
        log.add_event(t, "grab", "after teleport")
        return t
    p_grab = selection_hit_probability(
        technique, distance, 2 * GRAB_HALF_WIDTH, params, reach=reach,
        room_half_extent=room_half_extent, controller_distance=controller_distance)
    attempts = _attempts_until_hit(p_grab, rng)
    t = params.reaction_time + attempts * _attempt_cost(params, id_bits)
    log.add_event(t, "grab", f"attempts={attempts}")
    return t


def simulate_docking_trial(technique: str, trial: DockingTrial, params: AgentParams,
                           *, participant: int = 0, trial_index: int = 0,
                           reach: float = DEFAULT_REACH,
                           room_half_extent: float = DEFAULT_ROOM_HALF_EXTENT,
                           controller_distance: float = DEFAULT_CONTROLLER_DISTANCE,
                           rng: np.random.Generator | None = None) -> TrialLog:
    """One docking trial: grab the object, then iteratively align it.

    Each half-second step halves the per-vertex misalignment down to the
    noise floor tremor / CD-ratio; the trial completes once every vertex is
    within tolerance and further refinement has stalled at the floor. A trial
    that cannot reach tolerance (floor above tolerance) fails at the step cap.
    """
    if rng is None:
        rng = rng_for(params, participant, trial_index)
    log = TrialLog(participant=participant, technique=technique,
                   distance_m=trial.distance_m, trial=trial_index, task="docking")
    log.add_event(0.0, "trial_start", f"distance={trial.distance_m:g}")
    grab_t = _grab_time(technique, trial.distance_m, params, rng, log,
                        reach=reach, room_half_extent=room_half_extent,
                        controller_distance=controller_distance)
    log.selection_time_s = grab_t

    cd = technique_cd_ratio(technique, trial.distance_m, reach=reach,
                            room_half_extent=room_half_extent,
                            controller_distance=controller_distance)
    floor = params.hand_tremor_sigma / cd
    # Alignment can only be held (click-while-green) when the stable noise
    # floor itself fits within the tolerance; momentary lucky dips don't count.
    holdable = floor <= trial.tolerance
    error = docking_error(trial.dock, trial.target) / 4.0   # per-vertex misalignment
    t = grab_t
    steps = 0
    docked = False
    while steps < DOCK_STEP_CAP:
        steps += 1
        t += DOCK_STEP_SECONDS
        decayed = error * DOCK_STEP_GAIN
        noise = floor * abs(rng.standard_normal()) if floor > 0.0 else 0.0
        new_error = max(decayed, noise)
        stalled = new_error >= error * 0.75 or new_error <= 1e-12
        error = new_error
        if holdable and error <= trial.tolerance and stalled:
            docked = True
            break
    if not docked:
        error = max(error, floor)
    log.add_event(t, "docked" if docked else "dock_failed", f"steps={steps}")

    # Realize the final pose: the dock ends on the target offset by the
    # residual per-vertex error in a random direction.
    if error > 0.0:
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
    else:
        direction = np.zeros(3)
    final_dock = trial.target.transformed(
        Pose(direction * error, np.array([1.0, 0.0, 0.0, 0.0])))
    log.error_distance_m = docking_error(final_dock, trial.target)
    log.docking_time_s = t - grab_t
    log.success = docked
    return log
