"""Task generation and scoring: the ISO 9241-9 multi-directional tapping task
with depth-varied targets, and the tetrahedron docking task.

Trial state is single-owner per (simulated or human) participant session;
trial logs are append-only event lists plus a summary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .geometry import Pose, Sphere, Tetrahedron, Vec3

RING_DIAMETER = 0.60       # m, tapping circle
RING_COUNT = 17            # targets on the ring, plus the center sphere 0
TARGET_WIDTH = 0.07        # m; Fitts width W (sphere diameter for hit scoring)
DEPTH_OFFSET = 0.07        # m; left half -, right half + relative to the center
STANDARD_DISTANCES = (3.0, 6.0, 9.0)

DOCK_EDGE = 0.5            # m, regular tetrahedron edge
DOCK_TOLERANCE = 0.045     # m, per-vertex alignment tolerance
DOCK_SPAWN_RADIUS = 0.5    # m, target pose within this ball of the dock
DOCK_HEIGHT = 1.2          # m, centroid height of the spawned dock


def _diametric_order(count: int, skip: int) -> tuple[int, ...]:
    order = [1]
    for _ in range(count - 1):
        order.append((order[-1] - 1 + skip) % count + 1)
    return tuple(order)


# ISO 9241-9 diametric pattern, clockwise: jump (count +- 1)/2 positions so
# consecutive targets sit nearly opposite on the ring. Covers 1..17 once.
ISO_VISIT_ORDER: tuple[int, ...] = _diametric_order(RING_COUNT, 9)


def compute_id(movement_amplitude: float, width: float) -> float:
    """Shannon index of difficulty log2(A/W + 1) in bits."""
    if movement_amplitude <= 0.0 or width <= 0.0:
        raise ValueError("amplitude and width must be positive")
    return math.log2(movement_amplitude / width + 1.0)


@dataclass(frozen=True)
class SelectionLayout:
    """Center sphere plus a 17-sphere ring at the task distance.

    Sphere 0 is the center; ring spheres 1..17 start at 12 o'clock and run
    clockwise as seen by the user. The nine left-half spheres sit 7 cm nearer
    than the center, the eight right-half spheres 7 cm farther. The first
    ring target after the center (sphere 1) is excluded from scored metrics.
    """

    distance: float
    spheres: tuple[Sphere, ...]          # index 0 = center, 1..17 = ring
    depth_offsets: tuple[float, ...]
    visit_order: tuple[int, ...]
    target_width: float
    index_of_difficulty: float

    @property
    def scored_selections_per_trial(self) -> int:
        return len(self.visit_order) - 1


def build_selection_layout(distance: float, seed: int | None = None,
                           visit_order: tuple[int, ...] = ISO_VISIT_ORDER) -> SelectionLayout:
    """Tapping layout facing a user at the origin looking along +z.

    *seed* is reserved for randomized variants; the standard layout is fully
    deterministic. The visit order must be a permutation of 1..17 starting
    at sphere 1.
    """
    if distance <= 0.0:
        raise ValueError("distance must be positive")
    if sorted(visit_order) != list(range(1, RING_COUNT + 1)) or visit_order[0] != 1:
        raise ValueError("visit order must permute 1..17 and start at sphere 1")
    center = np.array([0.0, 0.0, distance])
    radius = RING_DIAMETER / 2.0
    spheres = [Sphere(center, TARGET_WIDTH / 2.0)]
    offsets = [0.0]
    for i in range(1, RING_COUNT + 1):
        theta = 2.0 * math.pi * (i - 1) / RING_COUNT
        x = radius * math.sin(theta)
        y = radius * math.cos(theta)
        depth = DEPTH_OFFSET if x > 1e-12 else -DEPTH_OFFSET
        spheres.append(Sphere(center + np.array([x, y, depth]), TARGET_WIDTH / 2.0))
        offsets.append(depth)
    return SelectionLayout(
        distance=distance,
        spheres=tuple(spheres),
        depth_offsets=tuple(offsets),
        visit_order=tuple(visit_order),
        target_width=TARGET_WIDTH,
        index_of_difficulty=compute_id(RING_DIAMETER, TARGET_WIDTH),
    )


# ---------------------------------------------------------------------------
# Trial logging (shared schema with the harness CSV and the browser runner)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrialEvent:
    t: float
    kind: str
    detail: str = ""


@dataclass
class TrialLog:
    """One selection or docking trial: events plus the summary fields that the
    harness serializes. Event timestamps must be monotone."""

    participant: int
    technique: str
    distance_m: float
    trial: int
    task: str                                 # selection | docking
    events: list[TrialEvent] = field(default_factory=list)
    selection_time_s: float | None = None     # mean scored selection / grab time
    docking_time_s: float | None = None
    clicks: int = 0                           # scored clicks
    scored_selections: int = 0
    error_distance_m: float | None = None
    success: bool = False

    def add_event(self, t: float, kind: str, detail: str = "") -> None:
        if self.events and t < self.events[-1].t - 1e-12:
            raise ValueError(f"non-monotone event timestamp {t} after {self.events[-1].t}")
        self.events.append(TrialEvent(float(t), kind, detail))

    @property
    def center_selections(self) -> int:
        return sum(1 for e in self.events if e.kind == "center_selected")


# ---------------------------------------------------------------------------
# Selection trial state machine
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SphereHighlight:
    """Render state per sphere: exactly one target at a time; hover follows
    the ray/hand."""

    target: int
    hover: int | None = None

    def state_of(self, sphere_id: int) -> str:
        if sphere_id == self.hover:
            return "hover"
        return "target" if sphere_id == self.target else "neutral"


@dataclass(frozen=True)
class SelectionTrialState:
    layout: SelectionLayout
    phase: str = "await_center"      # await_center | running | complete
    order_pos: int = -1              # index into visit_order once running
    last_selection_t: float | None = None
    pending_clicks: int = 0          # misses since the previous selection

    @property
    def current_target(self) -> int | None:
        if self.phase == "await_center":
            return 0
        if self.phase == "running":
            return self.layout.visit_order[self.order_pos]
        return None

    def highlight(self, hover: int | None = None) -> SphereHighlight:
        if self.current_target is None:
            raise ValueError("trial complete; no target")
        return SphereHighlight(target=self.current_target, hover=hover)


def start_selection_trial(layout: SelectionLayout, log: TrialLog, t: float = 0.0
                          ) -> SelectionTrialState:
    log.add_event(t, "trial_start", f"distance={layout.distance:g}")
    return SelectionTrialState(layout=layout, last_selection_t=t)


def advance_selection(state: SelectionTrialState, click_hit: int | None, t: float,
                      log: TrialLog) -> SelectionTrialState:
    """Process one click: a hit on the current target advances the visit
    order (recording its time and click count); anything else counts as an
    error click against the current target.

    The center selection and the first ring selection (sphere 1) are logged
    but excluded from scored metrics.
    """
    if state.phase == "complete":
        raise ValueError("trial already complete")
    target = state.current_target
    if click_hit != target:
        log.add_event(t, "click", f"miss target={target} hit={click_hit}")
        return replace(state, pending_clicks=state.pending_clicks + 1)

    clicks_for_target = state.pending_clicks + 1
    elapsed = t - state.last_selection_t
    log.add_event(t, "click", f"hit target={target}")
    if state.phase == "await_center":
        log.add_event(t, "center_selected", f"clicks={clicks_for_target}")
        next_state = replace(state, phase="running", order_pos=0,
                             last_selection_t=t, pending_clicks=0)
        log.add_event(t, "target_advance", f"next={next_state.current_target}")
        return next_state

    scored = state.order_pos >= 1
    log.add_event(t, "selection",
                  f"sphere={target} clicks={clicks_for_target} time={elapsed!r}"
                  f" scored={int(scored)}")
    if scored:
        log.clicks += clicks_for_target
        log.scored_selections += 1
    if state.order_pos + 1 >= len(state.layout.visit_order):
        log.add_event(t, "trial_complete", "")
        log.success = True
        return replace(state, phase="complete", order_pos=-1,
                       last_selection_t=t, pending_clicks=0)
    next_state = replace(state, order_pos=state.order_pos + 1,
                         last_selection_t=t, pending_clicks=0)
    log.add_event(t, "target_advance", f"next={next_state.current_target}")
    return next_state


def scored_selection_times(log: TrialLog) -> list[float]:
    """Per-selection times of the scored ring selections, from the event log."""
    times = []
    for e in log.events:
        if e.kind == "selection" and "scored=1" in e.detail:
            token = next(p for p in e.detail.split() if p.startswith("time="))
            times.append(float(token[len("time="):]))
    return times


# ---------------------------------------------------------------------------
# Docking task
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DockingTrial:
    dock: Tetrahedron          # opaque object the participant repositions
    target: Tetrahedron        # semi-transparent goal pose
    tolerance: float           # per-vertex alignment tolerance, m
    distance_m: float

    def __post_init__(self):
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")
        centroid_gap = float(np.linalg.norm(self.dock.centroid() - self.target.centroid()))
        if centroid_gap > DOCK_SPAWN_RADIUS + 1e-9:
            raise ValueError("target spawned outside the 0.5 m ball")


def _random_unit_quat(rng: np.random.Generator) -> np.ndarray:
    q = rng.normal(size=4)
    return q / np.linalg.norm(q)


def build_docking_trial(distance: float, rng: np.random.Generator,
                        edge: float = DOCK_EDGE,
                        tolerance: float = DOCK_TOLERANCE) -> DockingTrial:
    """Dock at the task distance; target pose uniform in the 0.5 m ball with a
    uniform random orientation."""
    if distance <= 0.0:
        raise ValueError("distance must be positive")
    dock_pose = Pose(np.array([0.0, DOCK_HEIGHT, distance]), np.array([1.0, 0.0, 0.0, 0.0]))
    dock = Tetrahedron.regular(edge, dock_pose)
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    radius = DOCK_SPAWN_RADIUS * rng.random() ** (1.0 / 3.0)
    target_pose = Pose(dock_pose.position + radius * direction, _random_unit_quat(rng))
    target = Tetrahedron.regular(edge, target_pose)
    return DockingTrial(dock=dock, target=target, tolerance=tolerance, distance_m=distance)


def _paired_vertices(dock: Tetrahedron, target: Tetrahedron):
    if set(dock.labels) != set(target.labels):
        raise ValueError("mismatched vertex labels")
    return [(dock.vertex(label), target.vertex(label)) for label in dock.labels]


def docking_error(dock: Tetrahedron, target: Tetrahedron) -> float:
    """Sum of distances between color-corresponding vertex pairs, meters."""
    return float(sum(np.linalg.norm(a - b) for a, b in _paired_vertices(dock, target)))


def is_docked(dock: Tetrahedron, target: Tetrahedron,
              tolerance: float = DOCK_TOLERANCE) -> bool:
    """True iff every corresponding vertex pair is within *tolerance* (the
    summed error is recorded separately via docking_error)."""
    return all(np.linalg.norm(a - b) <= tolerance for a, b in _paired_vertices(dock, target))
