import numpy as np

from relcycles import SE2Element


def random_se2(rng, angle_scale=np.pi, trans_scale=2.0) -> SE2Element:
    return SE2Element(
        rng.uniform(-angle_scale, angle_scale),
        rng.uniform(-trans_scale, trans_scale),
        rng.uniform(-trans_scale, trans_scale),
    )


def se2_matrix(g: SE2Element) -> np.ndarray:
    # Homogeneous-matrix oracle; production code never stores matrices.
    c, s = np.cos(g.theta), np.sin(g.theta)
    return np.array([[c, -s, g.tx], [s, c, g.ty], [0.0, 0.0, 1.0]])


def angle_diff(a, b) -> float:
    return abs((a - b + np.pi) % (2.0 * np.pi) - np.pi)
