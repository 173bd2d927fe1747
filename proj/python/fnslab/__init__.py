# Copyright 2026 The fnslab Authors
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License. You may obtain a copy at
# http://www.apache.org/licenses/LICENSE-2.0

"""Python interface to the fractional Navier-Stokes convergence laboratory."""

from ._fnslab import (
    DomainError,
    EnergyViolation,
    GridSpec,
    IoError,
    KernelDistance,
    KernelDistanceReport,
    NumericalError,
    PicardDivergence,
    RateFitResult,
    SolveRecord,
    SolverConfig,
    SpectralField,
    UniformTimeFloor,
    __version__,
    bmo_discrete,
    certify_two_sided_bound,
    divergence_residual,
    existence_time,
    existence_time_mhd,
    fit_rate,
    grad_kernel_distance_hms,
    kernel_distance_hms,
    leray_project,
    make_preset,
    norm,
    run_cli,
    solve_mhd,
    solve_ns,
    taylor_green_exact,
    trajectory_norm,
    uniform_time_floor,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
