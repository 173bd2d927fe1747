// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fns/convergence_lab.hpp"
#include "fns/fractional_kernels.hpp"
#include "fns/mild_solver.hpp"

namespace fns {

// 17 significant digits, "inf" / "-inf" / "nan" for non-finite values.
std::string format_double(double v);

// Writes through a sibling temporary file and renames it into place.
// Refuses to replace an existing file unless overwrite is set.
void atomic_write(const std::filesystem::path& path, const std::string& content,
                  bool overwrite = false);

// Creates out_dir if needed. Unless force is set, refuses a directory that
// already holds a manifest from an earlier run.
void prepare_output_dir(const std::filesystem::path& out_dir, bool force);

struct ResultRow {
  double alpha = 2.0;
  std::optional<double> beta;
  double kappa = 1.0;
  std::string norm_kind;
  double error = 0.0;
  bool excluded = false;
};

std::vector<ResultRow> result_rows(const ErrorSeries& series, double kappa);
// Header alpha[,beta],kappa,norm_kind,error,excluded_flag.
std::string results_csv(const std::vector<ResultRow>& rows, bool with_beta);
std::vector<ResultRow> parse_results_csv(const std::string& text);

// Header log2ma,logerr.
std::string plot_csv(const std::vector<double>& alphas, const std::vector<double>& errors);
// Header t,energy_kin,energy_mag,div_residual,picard_iters.
std::string diagnostics_csv(const SolveRecord& rec);

struct KernelRow {
  double alpha = 2.0, s = 2.0, T = 1.0;
  int dim = 3;
  KernelDistance value;
};
// Header alpha,s,T,dim,value,t_star,err_bound.
std::string kernel_csv(const std::vector<KernelRow>& rows);

struct FitRecord {
  std::string norm_kind;
  double kappa = 1.0;
  RateFitResult fit;
};

std::string fits_json(const std::vector<FitRecord>& fits);
std::vector<FitRecord> parse_fits_json(const std::string& text);

}  // namespace fns
