# Copyright 2026 The fnslab Authors
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License. You may obtain a copy at
# http://www.apache.org/licenses/LICENSE-2.0

import math

import numpy as np
import pytest

import fnslab


def test_taylor_green_matches_closed_form():
    grid = fnslab.GridSpec(2, 32)
    cfg = fnslab.SolverConfig(grid, alpha=2.0, dt=1e-3, t_end=0.05, snapshots=5)
    rec = fnslab.solve_ns(fnslab.make_preset(grid, "taylor_green"), cfg)
    assert len(rec.times) == 6
    exact = fnslab.taylor_green_exact(grid, rec.times[-1])
    assert fnslab.norm(rec.velocity[-1] - exact, "sup") < 1e-10
    energies = [d["energy_kin"] for d in rec.diagnostics]
    assert all(b <= a for a, b in zip(energies, energies[1:]))


def test_physical_roundtrip_and_projection():
    grid = fnslab.GridSpec(2, 16)
    x = np.arange(16) * (2 * math.pi / 16)
    X, Y = np.meshgrid(x, x, indexing="ij")
    values = np.stack([np.cos(Y), np.cos(X) + np.sin(X)])
    field = fnslab.SpectralField.from_physical(grid, values)
    np.testing.assert_allclose(field.to_physical(), values, atol=1e-14)
    assert fnslab.divergence_residual(fnslab.leray_project(field)) < 1e-14
    assert fnslab.norm(field, "l2") == pytest.approx(math.sqrt(0.5 + 1.0), rel=1e-12)


def test_kernel_distance_rate():
    report = fnslab.certify_two_sided_bound(2.0, 1.0, [1.9, 1.95, 1.99])
    assert 0.9 <= report.slope <= 1.1
    assert report.passed
    d = fnslab.kernel_distance_hms(1.95, 2.0, 1.0)
    assert d.value == pytest.approx(report.distances[1], rel=1e-12)


def test_existence_times_and_fit():
    assert fnslab.existence_time(2.0, 1.0) == pytest.approx(0.0078125, rel=1e-12)
    floor = fnslab.uniform_time_floor(0.5, 1.0)
    assert floor.small_branch and floor.verified
    alphas = [1.9, 1.95, 1.99]
    fit = fnslab.fit_rate(alphas, [2.0 * (2 - a) for a in alphas], 1.0)
    assert fit.slope == pytest.approx(1.0, abs=1e-12)


def test_errors_map_to_python_exceptions(tmp_path):
    with pytest.raises(fnslab.DomainError):
        fnslab.GridSpec(2, 12)
    with pytest.raises(ValueError):
        fnslab.existence_time(0.9, 1.0)
    code, _, err = fnslab.run_cli(["converge", "--kappa", "1"])
    assert code == 2 and "--out" in err
    code, out, _ = fnslab.run_cli(["kernel-distance", "--alphas", "1.9,1.95,1.99",
                                   "--out", str(tmp_path / "k")])
    assert code == 0 and "kernel slope" in out
    assert (tmp_path / "k" / "manifest.txt").exists()
