import os

import numpy as np
import pytest
import torch

from pinnfem.network import init_network
from pinnfem.network.jets import as_points

slow = pytest.mark.skipif(
    os.getenv("PINNFEM_SLOW_TESTS", "") != "1",
    reason="set PINNFEM_SLOW_TESTS=1 to run full training and fine-mesh checks",
)


def clear_envvars(monkeypatch):
    """
    If we have envvars set, the test will pick them up and fail,
    so let's make sure they're empty.
    """
    monkeypatch.setenv("PINNFEM_THREADS", "")
    monkeypatch.setenv("PINNFEM_LOGLEVEL", "")


def seeded_network(layer_sizes=(1, 6, 1), seed=0, boundary_mode="none"):
    return init_network(layer_sizes, seed, boundary_mode=boundary_mode)


def finite_difference(fn, x, axis, step=1e-5):
    """Central difference of a field along ``axis``, at each point of ``x``."""
    points = np.asarray(x, dtype=np.float64)
    offset = np.zeros(points.shape[-1])
    offset[axis] = step
    with torch.no_grad():
        plus = fn(as_points(points + offset)).numpy()
        minus = fn(as_points(points - offset)).numpy()
    return (plus - minus) / (2 * step)


def sine_field(x):
    """sin(πx)·sin(πy)·..., one factor per coordinate."""
    return torch.prod(torch.sin(torch.pi * x), dim=-1)
