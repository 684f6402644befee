import numpy as np


def action(h):
    """L_T(h) = 1/2 sum_k |hdot_k|^2 step for a :class:`~neutralldp.skeleton.ControlPath`."""
    return 0.5 * float(np.sum(np.square(h.hdot))) * h.mesh.step


def action_flat(flat, step):
    return 0.5 * float(np.dot(flat, flat)) * step
