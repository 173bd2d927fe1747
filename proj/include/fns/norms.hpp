// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <limits>
#include <string>

#include "fns/spectral_field.hpp"

namespace fns {

struct SolveRecord;

enum class NormKind { sup, l2, hs, hminus, bmo, lplq };

// All spatial norms use the volume-normalized convention: |f|_{L^2}^2 is the
// grid mean of |f|^2, which equals sum_k |c_k|^2 by Parseval.
struct NormSpec {
  NormKind kind = NormKind::sup;
  double s = 2.0;                                      // hs / hminus
  double p = std::numeric_limits<double>::infinity();  // lplq time exponent
  double q = 4.0;                                      // lplq space exponent
  int bmo_level = 4;

  void validate() const;
  std::string name() const;
  // "sup", "l2", "hs:2", "hminus:1.5", "bmo", "bmo:5", "lplq:inf:4", "lplq:2:4"
  static NormSpec parse(const std::string& text);
};

double norm_sup(const SpectralField& f);
double norm_l2(const SpectralField& f);
double norm_hs(const SpectralField& f, double s);
double norm_hminus(const SpectralField& f, double s);
double norm_lq(const SpectralField& f, double q);
double norm_lq(const PhysicalField& f, double q);

// sup over dyadic subcubes Q at levels 0..max_level (level l splits every axis
// into 2^l cells) of the grid mean of |f - mean_Q f| over Q. Vector fields
// take the largest component value.
double bmo_discrete(const PhysicalField& f, int max_level);
double bmo_discrete(const SpectralField& f, int max_level);

// Single-snapshot norm. Throws DomainError for lplq, which needs a trajectory.
double norm(const SpectralField& f, const NormSpec& spec);

enum class TrajectoryPart { velocity, pressure, magnetic };

// Norm of rec_a - rec_b along the shared snapshot times: max over snapshots
// for spatial kinds; for lplq the composite-trapezoid L^p time integral of
// the spatial L^q norms (p = inf gives the max).
double trajectory_norm(const SolveRecord& a, const SolveRecord& b, const NormSpec& spec,
                       TrajectoryPart part = TrajectoryPart::velocity);

}  // namespace fns
