// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include "fns/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "fns/error.hpp"
#include "fns/mild_solver.hpp"

namespace fns {

void NormSpec::validate() const {
  if ((kind == NormKind::hs || kind == NormKind::hminus) && !(s > 0.0)) {
    throw DomainError("Sobolev index must be positive");
  }
  if (kind == NormKind::bmo && bmo_level < 1) throw DomainError("bmo level must be >= 1");
  if (kind == NormKind::lplq) {
    if (!(p >= 1.0)) throw DomainError("time exponent p must satisfy 1 <= p <= inf");
    if (!(q > 2.0) || !std::isfinite(q)) {
      throw DomainError("space exponent q must satisfy 2 < q < inf");
    }
  }
}

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os << v;
  return os.str();
}

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw DomainError("malformed number '" + s + "'");
  return v;
}

}  // namespace

std::string NormSpec::name() const {
  switch (kind) {
    case NormKind::sup: return "sup";
    case NormKind::l2: return "l2";
    case NormKind::hs: return "hs:" + fmt(s);
    case NormKind::hminus: return "hminus:" + fmt(s);
    case NormKind::bmo: return "bmo";
    case NormKind::lplq: return "lplq:" + fmt(p) + ":" + fmt(q);
  }
  return "?";
}

NormSpec NormSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.empty()) throw DomainError("empty norm specification");
  NormSpec spec;
  const std::string& k = parts[0];
  try {
    if (k == "sup" && parts.size() == 1) {
      spec.kind = NormKind::sup;
    } else if (k == "l2" && parts.size() == 1) {
      spec.kind = NormKind::l2;
    } else if ((k == "hs" || k == "hminus") && parts.size() <= 2) {
      spec.kind = k == "hs" ? NormKind::hs : NormKind::hminus;
      if (parts.size() == 2) spec.s = parse_exponent(parts[1]);
    } else if (k == "bmo" && parts.size() <= 2) {
      spec.kind = NormKind::bmo;
      if (parts.size() == 2) spec.bmo_level = std::stoi(parts[1]);
    } else if (k == "lplq" && parts.size() == 3) {
      spec.kind = NormKind::lplq;
      spec.p = parse_exponent(parts[1]);
      spec.q = parse_exponent(parts[2]);
    } else {
      throw DomainError("unknown norm specification '" + text + "'");
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const DomainError*>(&e)) throw;
    throw DomainError("malformed norm specification '" + text + "'");
  }
  spec.validate();
  return spec;
}

double norm_sup(const SpectralField& f) {
  const PhysicalField phys = f.to_physical();
  double worst = 0.0;
  for (std::size_t p = 0; p < phys.points(); ++p) worst = std::max(worst, phys.magnitude(p));
  return worst;
}

double norm_l2(const SpectralField& f) {
  double acc = 0.0;
  for (const auto& c : f.coeffs()) acc += std::norm(c);
  return std::sqrt(acc);
}

namespace {

double weighted_norm(const SpectralField& f, double power) {
  auto table = wave_table(f.grid());
  double acc = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    auto v = f.component(c);
    for (std::size_t m = 0; m < v.size(); ++m) {
      acc += std::pow(1.0 + table->k2(m), power) * std::norm(v[m]);
    }
  }
  return std::sqrt(acc);
}

}  // namespace

double norm_hs(const SpectralField& f, double s) { return weighted_norm(f, s); }
double norm_hminus(const SpectralField& f, double s) { return weighted_norm(f, -s); }

double norm_lq(const PhysicalField& f, double q) {
  if (!(q >= 1.0)) throw DomainError("L^q needs q >= 1");
  double acc = 0.0;
  for (std::size_t p = 0; p < f.points(); ++p) acc += std::pow(f.magnitude(p), q);
  return std::pow(acc / static_cast<double>(f.points()), 1.0 / q);
}

double norm_lq(const SpectralField& f, double q) { return norm_lq(f.to_physical(), q); }

double bmo_discrete(const PhysicalField& f, int max_level) {
  const GridSpec& grid = f.grid();
  if (max_level < 1) throw DomainError("bmo needs max_level >= 1");
  if ((1 << max_level) > grid.n) throw DomainError("bmo level finer than the grid");
  const int n = grid.n;
  const int dim = grid.dim;
  double worst = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    auto v = f.component(c);
    for (int level = 0; level <= max_level; ++level) {
      const int cells = 1 << level;
      const int side = n / cells;
      std::size_t ncubes = 1;
      for (int d = 0; d < dim; ++d) ncubes *= cells;
      std::vector<std::size_t> owner(v.size());
      for (std::size_t p = 0; p < v.size(); ++p) {
        std::size_t rest = p, id = 0, stride = 1;
        for (int a = dim - 1; a >= 0; --a) {
          const int i = static_cast<int>(rest % n);
          rest /= n;
          id += stride * static_cast<std::size_t>(i / side);
          stride *= cells;
        }
        owner[p] = id;
      }
      std::vector<double> mean(ncubes, 0.0), osc(ncubes, 0.0);
      for (std::size_t p = 0; p < v.size(); ++p) mean[owner[p]] += v[p];
      const double count = static_cast<double>(v.size() / ncubes);
      for (auto& m : mean) m /= count;
      for (std::size_t p = 0; p < v.size(); ++p) osc[owner[p]] += std::abs(v[p] - mean[owner[p]]);
      for (double o : osc) worst = std::max(worst, o / count);
    }
  }
  return worst;
}

double bmo_discrete(const SpectralField& f, int max_level) {
  return bmo_discrete(f.to_physical(), max_level);
}

double norm(const SpectralField& f, const NormSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case NormKind::sup: return norm_sup(f);
    case NormKind::l2: return norm_l2(f);
    case NormKind::hs: return norm_hs(f, spec.s);
    case NormKind::hminus: return norm_hminus(f, spec.s);
    case NormKind::bmo: return bmo_discrete(f, spec.bmo_level);
    case NormKind::lplq:
      throw DomainError("lplq is a space-time norm; use trajectory_norm on a solve record");
  }
  return 0.0;
}

double trajectory_norm(const SolveRecord& a, const SolveRecord& b, const NormSpec& spec,
                       TrajectoryPart part) {
  spec.validate();
  if (a.times.size() != b.times.size()) throw DomainError("records have different snapshot counts");
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    if (std::abs(a.times[i] - b.times[i]) > 1e-12 * std::max(1.0, std::abs(a.times[i]))) {
      throw DomainError("records have mismatched snapshot times");
    }
  }
  auto pick = [&](const SolveRecord& r) -> const std::vector<SpectralField>& {
    switch (part) {
      case TrajectoryPart::velocity: return r.velocity;
      case TrajectoryPart::pressure: return r.pressure;
      case TrajectoryPart::magnetic: return r.magnetic;
    }
    return r.velocity;
  };
  const auto& fa = pick(a);
  const auto& fb = pick(b);
  if (fa.size() != a.times.size() || fb.size() != b.times.size()) {
    throw DomainError("record is missing the requested trajectory part");
  }
  if (!fa.empty() && !fa[0].compatible(fb[0])) throw DomainError("records live on different grids");

  std::vector<double> pointwise(fa.size());
  for (std::size_t i = 0; i < fa.size(); ++i) {
    const SpectralField d = fa[i] - fb[i];
    pointwise[i] = spec.kind == NormKind::lplq ? norm_lq(d, spec.q) : norm(d, spec);
  }
  if (spec.kind != NormKind::lplq || std::isinf(spec.p)) {
    return pointwise.empty() ? 0.0 : *std::max_element(pointwise.begin(), pointwise.end());
  }
  if (pointwise.size() < 2) throw DomainError("time integral needs >= 2 snapshots");
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < pointwise.size(); ++i) {
    const double h = a.times[i + 1] - a.times[i];
    acc += 0.5 * h * (std::pow(pointwise[i], spec.p) + std::pow(pointwise[i + 1], spec.p));
  }
  return std::pow(acc, 1.0 / spec.p);
}

}  // namespace fns
