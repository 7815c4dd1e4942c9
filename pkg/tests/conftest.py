from __future__ import annotations

import numpy as np
import pytest

import qnoise as qn

from oracles import mixed_kappa


def grid_and_eps(n_points, step):
    grid = qn.make_grid(n_points, step)
    return grid, 1.0 / (n_points * step)


@pytest.fixture
def planck_setup():
    grid, eps = grid_and_eps(65, 0.25)
    return grid, qn.planck_density(1.0, 1.0, grid), eps


@pytest.fixture
def flat_setup():
    grid, eps = grid_and_eps(33, 0.25)
    return grid, qn.flat_density(1.0, grid), eps


@pytest.fixture
def mixed_setup():
    grid, eps = grid_and_eps(17, 0.5)
    return grid, qn.tabulated_density(mixed_kappa(grid), grid), eps


@pytest.fixture
def vacuum_setup():
    grid, eps = grid_and_eps(9, 0.5)
    return grid, qn.tabulated_density((grid.points < 0).astype(float), grid), eps


def build_chain(pair, eps):
    seq = qn.correlation_sequence(pair, eps)
    model = qn.build_model(seq)
    return seq, model


def nu_index(grid, nu):
    matches = np.nonzero(grid.points == nu)[0]
    assert matches.size == 1, f"frequency {nu} not on grid"
    return int(matches[0])
