// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include "fns/results_io.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fns/error.hpp"
#include "json.hpp"

namespace fns {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void atomic_write(const fs::path& path, const std::string& content, bool overwrite) {
  std::error_code ec;
  if (!overwrite && fs::exists(path, ec)) {
    throw IoError("refusing to overwrite '" + path.string() + "' (use --force)");
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw IoError("write failed for '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

void prepare_output_dir(const fs::path& out_dir, bool force) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw IoError("cannot create output directory '" + out_dir.string() + "'");
  }
  if (!force && fs::exists(out_dir / "manifest.txt")) {
    throw IoError("output directory '" + out_dir.string() +
                  "' already holds results (use --force to overwrite)");
  }
}

std::vector<ResultRow> result_rows(const ErrorSeries& series, double kappa) {
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < series.errors.size(); ++i) {
    ResultRow r;
    r.alpha = series.alphas[i];
    if (!series.betas.empty()) r.beta = series.betas[i];
    r.kappa = kappa;
    r.norm_kind = series.norm_kind;
    r.error = series.errors[i];
    r.excluded = series.excluded[i];
    rows.push_back(r);
  }
  return rows;
}

std::string results_csv(const std::vector<ResultRow>& rows, bool with_beta) {
  std::ostringstream os;
  os << (with_beta ? "alpha,beta,kappa,norm_kind,error,excluded_flag\n"
                   : "alpha,kappa,norm_kind,error,excluded_flag\n");
  for (const auto& r : rows) {
    os << format_double(r.alpha) << ",";
    if (with_beta) os << format_double(r.beta.value_or(2.0)) << ",";
    os << format_double(r.kappa) << "," << r.norm_kind << "," << format_double(r.error) << ","
       << (r.excluded ? 1 : 0) << "\n";
  }
  return os.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, int lineno) {
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw DomainError("results line " + std::to_string(lineno) + ": bad number '" + s + "'");
}

}  // namespace

std::vector<ResultRow> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DomainError("results file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool with_beta = false;
  if (line == "alpha,beta,kappa,norm_kind,error,excluded_flag") {
    with_beta = true;
  } else if (line != "alpha,kappa,norm_kind,error,excluded_flag") {
    throw DomainError("unrecognized results header '" + line + "'");
  }
  std::vector<ResultRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    const std::size_t want = with_beta ? 6 : 5;
    if (cells.size() != want) {
      throw DomainError("results line " + std::to_string(lineno) + ": expected " +
                        std::to_string(want) + " columns");
    }
    std::size_t c = 0;
    ResultRow r;
    r.alpha = parse_double(cells[c++], lineno);
    if (with_beta) r.beta = parse_double(cells[c++], lineno);
    r.kappa = parse_double(cells[c++], lineno);
    r.norm_kind = cells[c++];
    r.error = parse_double(cells[c++], lineno);
    const std::string& flag = cells[c++];
    if (flag != "0" && flag != "1") {
      throw DomainError("results line " + std::to_string(lineno) + ": excluded_flag must be 0 or 1");
    }
    r.excluded = flag == "1";
    rows.push_back(r);
  }
  return rows;
}

std::string plot_csv(const std::vector<double>& alphas, const std::vector<double>& errors) {
  std::ostringstream os;
  os << "log2ma,logerr\n";
  for (std::size_t i = 0; i < alphas.size() && i < errors.size(); ++i) {
    if (!(alphas[i] < 2.0) || !(errors[i] > 0.0)) continue;
    os << format_double(std::log(2.0 - alphas[i])) << "," << format_double(std::log(errors[i]))
       << "\n";
  }
  return os.str();
}

std::string diagnostics_csv(const SolveRecord& rec) {
  std::ostringstream os;
  os << "t,energy_kin,energy_mag,div_residual,picard_iters\n";
  for (const auto& d : rec.diagnostics) {
    os << format_double(d.t) << "," << format_double(d.energy_kin) << ","
       << format_double(d.energy_mag) << "," << format_double(d.div_residual) << ","
       << d.picard_iters << "\n";
  }
  return os.str();
}

std::string kernel_csv(const std::vector<KernelRow>& rows) {
  std::ostringstream os;
  os << "alpha,s,T,dim,value,t_star,err_bound\n";
  for (const auto& r : rows) {
    os << format_double(r.alpha) << "," << format_double(r.s) << "," << format_double(r.T) << ","
       << r.dim << "," << format_double(r.value.value) << "," << format_double(r.value.t_star)
       << "," << format_double(r.value.err_bound) << "\n";
  }
  return os.str();
}

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double read_number(const json& j) {
  if (j.is_string()) return parse_double(j.get<std::string>(), 0);
  return j.get<double>();
}

}  // namespace

std::string fits_json(const std::vector<FitRecord>& fits) {
  json arr = json::array();
  for (const auto& f : fits) {
    json alphas = json::array(), errors = json::array(), excluded = json::array();
    for (double a : f.fit.alphas) alphas.push_back(number(a));
    for (double e : f.fit.errors) errors.push_back(number(e));
    for (bool x : f.fit.excluded) excluded.push_back(x);
    arr.push_back({{"norm_kind", f.norm_kind},
                   {"kappa", number(f.kappa)},
                   {"slope", number(f.fit.slope)},
                   {"intercept", number(f.fit.intercept)},
                   {"r_squared", number(f.fit.r_squared)},
                   {"predicted", number(f.fit.predicted_slope)},
                   {"tolerance", number(f.fit.tolerance)},
                   {"pass", f.fit.passed},
                   {"alphas", alphas},
                   {"errors", errors},
                   {"excluded", excluded}});
  }
  return json{{"fits", arr}}.dump(2) + "\n";
}

std::vector<FitRecord> parse_fits_json(const std::string& text) {
  std::vector<FitRecord> out;
  try {
    const json doc = json::parse(text);
    for (const auto& j : doc.at("fits")) {
      FitRecord f;
      f.norm_kind = j.at("norm_kind").get<std::string>();
      f.kappa = read_number(j.at("kappa"));
      f.fit.norm_kind = f.norm_kind;
      f.fit.slope = read_number(j.at("slope"));
      f.fit.intercept = read_number(j.at("intercept"));
      f.fit.r_squared = read_number(j.at("r_squared"));
      f.fit.predicted_slope = read_number(j.at("predicted"));
      f.fit.tolerance = read_number(j.at("tolerance"));
      f.fit.passed = j.at("pass").get<bool>();
      for (const auto& a : j.at("alphas")) f.fit.alphas.push_back(read_number(a));
      for (const auto& e : j.at("errors")) f.fit.errors.push_back(read_number(e));
      for (const auto& x : j.at("excluded")) f.fit.excluded.push_back(x.get<bool>());
      out.push_back(std::move(f));
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed fit JSON: ") + e.what());
  }
  return out;
}

}  // namespace fns
