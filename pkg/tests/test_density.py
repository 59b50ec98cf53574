"""Hua-Pickrell density: Cauchy law, mass, moments, correlation kernel."""

import math

import numpy as np
import pytest

from cuemoments import density


@pytest.fixture(scope="module")
def grid_s0(table_s0):
    return density.density_eval(0.0, table=table_s0)


@pytest.fixture(scope="module")
def grid_s1(table_s1):
    return density.density_eval(1.0, table=table_s1)


def test_cauchy_law(grid_s0):
    x = grid_s0.x_grid
    ref = 1.0 / (math.pi * (1.0 + x * x))
    assert np.max(np.abs(grid_s0.rho - ref)) <= 1e-8


def test_symmetry_structural(grid_s1):
    assert np.allclose(grid_s1.rho, grid_s1.rho[::-1], rtol=0, atol=0)


def test_mass_and_positivity(grid_s1):
    assert grid_s1.mass_defect <= 1e-6
    rho0 = float(grid_s1.rho[np.argmin(np.abs(grid_s1.x_grid))])
    assert grid_s1.min_value >= -1e-8 * rho0


def test_negative_s_mass():
    g = density.density_eval(-0.3)
    assert g.mass_defect <= 1e-6
    assert g.min_value >= 0.0


def test_cauchy_fractional_moment(grid_s0):
    # E|X|^{1/2} = sqrt(2) for the standard Cauchy law
    val = density.density_moment(grid_s0, 0.5)
    assert abs(val - math.sqrt(2.0)) <= 1e-8


def test_moment_cross_module(table_s1, grid_s1):
    from cuemoments import moments
    a = density.density_moment(grid_s1, 1.4)
    b = moments.hua_pickrell_moment(1.0, 0.7, table_s1)
    assert abs(a / b - 1.0) <= 1e-4


def test_moment_range_validation(grid_s1):
    with pytest.raises(ValueError):
        density.density_moment(grid_s1, 3.0)    # 2h >= 2s+1
    with pytest.raises(ValueError):
        density.density_moment(grid_s1, -1.0)


def test_kernel_antisymmetry_and_oddness():
    s, x, y = 1.0, 0.5, 1.3
    num = (density._kernel_G(s, x) * density._kernel_H(s, y)
           - density._kernel_G(s, y) * density._kernel_H(s, x))
    swap = (density._kernel_G(s, y) * density._kernel_H(s, x)
            - density._kernel_G(s, x) * density._kernel_H(s, y))
    assert num == -swap
    assert density._kernel_H(s, -x) == -density._kernel_H(s, x)
    assert density._kernel_G(s, -x) == density._kernel_G(s, x)
    # kernel symmetry K(x,y) = K(y,x)
    assert abs(density.hp_kernel(s, x, y)
               - density.hp_kernel(s, y, x)) <= 1e-14


def test_kernel_diagonal_continuity():
    s, x = 1.0, 0.5
    off = density.hp_kernel(s, x, x + 1e-7)
    diag = density.hp_kernel(s, x, x)
    assert abs(off - diag) <= 1e-5


def test_kernel_domain():
    with pytest.raises(ValueError):
        density.hp_kernel(1.0, 0.0, 1.0)
