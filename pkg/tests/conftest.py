from __future__ import annotations

import numpy as np

from portalbench.geometry import Pose, quat_from_axis_angle, quat_normalize


def random_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_quat(rng: np.random.Generator) -> np.ndarray:
    return quat_normalize(rng.normal(size=4))


def random_pose(rng: np.random.Generator, span: float = 5.0) -> Pose:
    return Pose(rng.uniform(-span, span, size=3), random_quat(rng))


def rot_y(angle: float) -> np.ndarray:
    return quat_from_axis_angle(np.array([0.0, 1.0, 0.0]), angle)
