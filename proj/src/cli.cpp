// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include "fns/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "fns/convergence_lab.hpp"
#include "fns/error.hpp"
#include "fns/fractional_kernels.hpp"
#include "fns/norms.hpp"
#include "fns/presets.hpp"
#include "fns/results_io.hpp"
#include "fns/snapshot_io.hpp"

namespace fns {

namespace fs = std::filesystem;

namespace {

struct ParamDef {
  std::string key;
  std::string flag;
  std::string fallback;
  std::string help;
  bool is_flag = false;
  bool required = false;
};

const char* kTwoPi = "6.2831853071795862";

std::vector<ParamDef> solver_params(const std::string& n_default, bool with_t_end) {
  std::vector<ParamDef> defs{
      {"grid.dim", "--dim", "2", "spatial dimension (2 or 3)"},
      {"grid.n", "--n", n_default, "grid points per axis (power of two >= 8)"},
      {"grid.L", "--length", kTwoPi, "periodic box length"},
      {"dt", "--dt", "0.001", "time step"},
      {"scheme", "--scheme", "picard", "time stepper: picard | etd"},
      {"snapshots", "--snapshots", "32", "number of equal snapshot intervals"},
      {"picard.tol", "--picard-tol", "1e-10", "relative L2 Picard tolerance"},
      {"picard.max_iter", "--picard-max-iter", "50", "Picard sweeps per step"},
      {"energy.tol", "--energy-tol", "1e-6", "per-step relative energy growth allowed"},
      {"sobolev.s", "--sobolev-s", "0", "H^s index for horizon checks (0: dimension default)"},
      {"existence.C", "--C", "1", "constant in the existence-time formula"},
      {"seed", "--seed", "20240611", "seed of random data presets"},
      {"data.preset", "--preset", "taylor_green", "taylor_green | random_smooth | shear | zero"},
      {"data.amplitude", "--amplitude", "1", "preset amplitude"},
      {"data.wavenumber", "--wavenumber", "1", "preset wavenumber"},
      {"data.kmax", "--kmax", "6", "random preset cutoff |k_j| <= kmax"},
      {"data.decay", "--decay", "4", "random preset spectrum decay exponent"},
      {"out", "--out", "", "output directory", false, true},
  };
  if (with_t_end) defs.push_back({"t_end", "--t-end", "0.1", "final time"});
  return defs;
}

std::vector<ParamDef> magnetic_params() {
  return {
      {"beta", "--beta", "2", "magnetic dissipation order"},
      {"magnetic.preset", "--b-preset", "shear", "magnetic data preset"},
      {"magnetic.amplitude", "--b-amplitude", "0.5", "magnetic preset amplitude"},
      {"magnetic.wavenumber", "--b-wavenumber", "2", "magnetic preset wavenumber"},
      {"magnetic.seed", "--b-seed", "1511", "seed of a random magnetic preset"},
  };
}

std::vector<ParamDef> sweep_params() {
  return {
      {"alpha_grid", "--alpha-grid", "1.9,1.925,1.95,1.975,1.99,1.995", "comma-separated alphas"},
      {"kappa", "--kappa", "1", "data convergence rate(s), comma-separated"},
      {"c_pert", "--c-pert", "0", "data perturbation size"},
      {"epsilon", "--epsilon", "0.05", "alphas must exceed 1 + epsilon"},
      {"horizon", "--horizon", "0.02", "time horizon of every solve"},
      {"allow_long_horizon", "--allow-long-horizon", "false",
       "run past the uniform time floor T0", true},
      {"pert.seed", "--pert-seed", "977", "seed of the perturbation profile"},
      {"pert.kmax", "--pert-kmax", "6", "perturbation cutoff"},
      {"pert.decay", "--pert-decay", "4", "perturbation spectrum decay"},
      {"refine_floor", "--refine-floor", "true", "estimate the floor with a 2n reference"},
      {"floor_factor", "--floor-factor", "100", "exclude errors below this multiple of the floor"},
      {"bmo.level", "--bmo-level", "4", "finest dyadic level of the BMO norm"},
      {"tolerance", "--tolerance", "0.15", "slope pass tolerance"},
  };
}

std::vector<ParamDef> defs_for(const std::string& command) {
  std::vector<ParamDef> defs;
  auto add = [&](const std::vector<ParamDef>& more) { defs.insert(defs.end(), more.begin(), more.end()); };
  if (command == "kernel-distance") {
    add({{"s", "--s", "2", "Sobolev index of the H^-s distance"},
         {"horizon", "--horizon", "1", "time horizon T"},
         {"grid.dim", "--dim", "3", "spatial dimension"},
         {"alphas", "--alphas", "1.85,1.9,1.95,1.99,1.995", "comma-separated alphas in (1, 2)"},
         {"integrand", "--integrand", "both", "kernel | gradient | both"},
         {"grad_s", "--grad-s", "0", "Sobolev index for the gradient distance (0: s + 1)"},
         {"out", "--out", "", "output directory", false, true}});
  } else if (command == "solve") {
    add(solver_params("64", true));
    add({{"alpha", "--alpha", "2", "fractional order"},
         {"classical", "--classical", "false", "use the classical Laplacian symbol", true}});
  } else if (command == "solve-mhd") {
    add(solver_params("64", true));
    add({{"alpha", "--alpha", "2", "fractional order"}});
    add(magnetic_params());
  } else if (command == "norm") {
    add({{"input", "--input", "", "snapshot file", false, true},
         {"kind", "--kind", "sup", "sup | l2 | hs:S | hminus:S | bmo[:LEVEL]"},
         {"grid.L", "--length", kTwoPi, "box length of the snapshot"},
         {"out", "--out", "", "optional output directory"}});
  } else if (command == "converge") {
    add(solver_params("128", false));
    add(sweep_params());
    add({{"norms", "--norms", "velocity_sup,pressure_bmo",
          "comma-separated: velocity_sup, pressure_bmo, velocity_lplq:P:Q"}});
  } else if (command == "converge-mhd") {
    add(solver_params("128", false));
    add(sweep_params());
    add(magnetic_params());
    add({{"betas", "--betas", "", "comma-separated betas (empty: beta = alpha)"},
         {"kappa_mag", "--kappa-mag", "", "magnetic data rate (empty: kappa)"},
         {"c_pert_mag", "--c-pert-mag", "", "magnetic perturbation size (empty: c_pert)"},
         {"bpert.seed", "--b-pert-seed", "1511", "seed of the magnetic perturbation"}});
  } else if (command == "fit") {
    add({{"results", "--results", "", "results CSV to fit", false, true},
         {"predicted", "--predicted", "", "predicted slope (empty: min(1, kappa))"},
         {"tolerance", "--tolerance", "0.15", "slope pass tolerance"},
         {"out", "--out", "", "output directory", false, true}});
  }
  return defs;
}

std::string description(const std::string& command) {
  if (command == "kernel-distance") return "H^-s distance between fractional and classical heat kernels";
  if (command == "solve") return "fractional Navier-Stokes mild solve";
  if (command == "solve-mhd") return "fractional MHD mild solve";
  if (command == "norm") return "norm of a snapshot file";
  if (command == "converge") return "alpha sweep against the alpha = 2 reference";
  if (command == "converge-mhd") return "(alpha, beta) sweep of the MHD system";
  if (command == "fit") return "refit rates from a results CSV";
  return "";
}

// Typed views on the effective parameters; malformed values are usage errors
// naming the flag.
class Params {
 public:
  Params(const ParamMap& map, std::vector<ParamDef> defs) : map_(map), defs_(std::move(defs)) {}

  std::string str(const std::string& key) const { return map_.get(key).value_or(""); }

  double num(const std::string& key) const { return to_double(key, str(key)); }

  int integer(const std::string& key) const {
    const std::string v = str(key);
    try {
      std::size_t used = 0;
      const long long x = std::stoll(v, &used);
      if (used == v.size()) return static_cast<int>(x);
    } catch (const std::exception&) {
    }
    throw bad(key, v);
  }

  std::uint64_t u64(const std::string& key) const {
    const std::string v = str(key);
    try {
      std::size_t used = 0;
      const unsigned long long x = std::stoull(v, &used);
      if (used == v.size() && v.find('-') == std::string::npos) return x;
    } catch (const std::exception&) {
    }
    throw bad(key, v);
  }

  bool boolean(const std::string& key) const {
    const std::string v = str(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw bad(key, v);
  }

  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(str(key));
    for (std::string item; std::getline(ss, item, ',');) out.push_back(to_double(key, item));
    return out;
  }

  std::vector<std::string> words(const std::string& key) const {
    std::vector<std::string> out;
    std::stringstream ss(str(key));
    for (std::string item; std::getline(ss, item, ',');) {
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  std::string flag(const std::string& key) const {
    for (const auto& d : defs_) {
      if (d.key == key) return d.flag;
    }
    return key;
  }

 private:
  double to_double(const std::string& key, const std::string& v) const {
    if (v == "inf") return INFINITY;
    try {
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw bad(key, v);
  }

  DomainError bad(const std::string& key, const std::string& v) const {
    return DomainError("malformed value for " + flag(key) + ": '" + v + "'");
  }

  const ParamMap& map_;
  std::vector<ParamDef> defs_;
};

ParamMap load_config(const fs::path& path) {
  const std::string text = read_text_file(path);
  if (text.rfind("fnslab-manifest 1", 0) == 0) return Manifest::parse(text).parameters;
  return parse_config_text(text);
}

std::string find_command(const std::vector<std::string>& args) {
  for (const auto& a : args) {
    if (std::find(cli_commands().begin(), cli_commands().end(), a) != cli_commands().end()) return a;
  }
  return {};
}

struct AppState {
  std::unique_ptr<CLI::App> app;
  std::map<std::string, CLI::App*> subs;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::string> config;
  bool force = false;
};

AppState build_app() {
  AppState st;
  st.app = std::make_unique<CLI::App>("fnslab: fractional Navier-Stokes convergence laboratory",
                                      "fnslab");
  st.app->require_subcommand(1);
  st.app->set_version_flag("--version", tool_version());
  for (const auto& name : cli_commands()) {
    CLI::App* sub = st.app->add_subcommand(name, description(name));
    sub->add_option("--config", st.config[name], "key = value config file (flags win)");
    sub->add_flag("--force", st.force, "overwrite an existing output directory");
    auto& vals = st.values[name];
    for (const auto& d : defs_for(name)) {
      std::string help = d.help;
      if (!d.fallback.empty()) help += " [" + d.fallback + "]";
      if (d.is_flag) {
        sub->add_flag(d.flag)->description(help);
      } else {
        sub->add_option(d.flag, vals[d.key], help);
      }
    }
    st.subs[name] = sub;
  }
  return st;
}

ParsedCommand parse_with(AppState& st, const std::vector<std::string>& args) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  st.app->parse(reversed);

  ParsedCommand pc;
  for (const auto& name : cli_commands()) {
    if (st.subs[name]->parsed()) pc.command = name;
  }
  if (pc.command.empty()) throw DomainError("no subcommand given");
  pc.force = st.force;
  CLI::App* sub = st.subs[pc.command];
  const auto defs = defs_for(pc.command);

  ParamMap params;
  for (const auto& d : defs) params.set(d.key, d.fallback);
  Manifest& m = pc.manifest;
  const std::string& config_path = st.config[pc.command];
  if (!config_path.empty()) {
    const ParamMap cfg = load_config(config_path);
    for (const auto& [k, v] : cfg.entries()) {
      const bool known = std::any_of(defs.begin(), defs.end(), [&](const ParamDef& d) { return d.key == k; });
      if (!known) throw DomainError("unknown config key '" + k + "' for " + pc.command);
    }
    params.merge(cfg);
    m.input_hashes[config_path] = sha256_file(config_path);
  }
  for (const auto& d : defs) {
    if (sub->count(d.flag) == 0) continue;
    params.set(d.key, d.is_flag ? "true" : st.values[pc.command][d.key]);
  }
  for (const auto& d : defs) {
    if (d.required && params.get(d.key).value_or("").empty()) {
      throw DomainError("missing required option " + d.flag);
    }
  }

  m.command = pc.command;
  m.parameters = params;
  m.tool_version = tool_version();
  m.timestamp = utc_timestamp();
  if (params.contains("seed")) m.seed = Params(params, defs).u64("seed");
  for (const char* key : {"input", "results"}) {
    const auto path = params.get(key);
    if (path && !path->empty()) m.input_hashes[*path] = sha256_file(*path);
  }
  return pc;
}

SolverConfig solver_config(const Params& p, bool has_t_end) {
  SolverConfig cfg;
  cfg.grid.dim = p.integer("grid.dim");
  cfg.grid.n = p.integer("grid.n");
  cfg.grid.length = p.num("grid.L");
  cfg.dt = p.num("dt");
  if (has_t_end) cfg.t_end = p.num("t_end");
  cfg.scheme = parse_scheme(p.str("scheme"));
  cfg.snapshots = p.integer("snapshots");
  cfg.picard_tol = p.num("picard.tol");
  cfg.picard_max_iter = p.integer("picard.max_iter");
  cfg.energy_tol = p.num("energy.tol");
  cfg.sobolev_s = p.num("sobolev.s");
  cfg.existence_C = p.num("existence.C");
  cfg.grid.validate();
  return cfg;
}

PresetSpec preset(const Params& p, const std::string& prefix, const std::string& seed_key) {
  PresetSpec spec;
  spec.kind = parse_preset(p.str(prefix + ".preset"));
  spec.amplitude = p.num(prefix + ".amplitude");
  spec.wavenumber = p.integer(prefix + ".wavenumber");
  spec.seed = p.u64(seed_key);
  if (prefix == "data") {
    spec.kmax = p.integer("data.kmax");
    spec.spectrum_decay = p.num("data.decay");
  }
  return spec;
}

std::string snapshot_name(const std::string& part, std::size_t i) {
  std::ostringstream os;
  os << part << "_" << std::setw(4) << std::setfill('0') << i << ".fnsf";
  return os.str();
}

std::string tag(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void write_manifest(const fs::path& dir, const ParsedCommand& pc) {
  atomic_write(dir / "manifest.txt", pc.manifest.serialize(), true);
}

void write_record(const fs::path& dir, const SolveRecord& rec, bool force) {
  fs::create_directories(dir / "snapshots");
  atomic_write(dir / "diagnostics.csv", diagnostics_csv(rec), force);
  std::ostringstream times;
  times << "index,t\n";
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    times << i << "," << format_double(rec.times[i]) << "\n";
    auto put = [&](const std::string& part, const SpectralField& f, double order) {
      const auto bytes = encode_snapshot(f.to_physical(), order);
      atomic_write(dir / "snapshots" / snapshot_name(part, i), std::string(bytes.begin(), bytes.end()),
                   force);
    };
    put("velocity", rec.velocity[i], rec.config.alpha);
    put("pressure", rec.pressure[i], rec.config.alpha);
    if (rec.has_magnetic()) put("magnetic", rec.magnetic[i], rec.config.beta);
  }
  atomic_write(dir / "times.csv", times.str(), force);
}

void report_warnings(const SolveRecord& rec, std::ostream& err) {
  for (const auto& w : rec.warnings) err << "warning: " << w << "\n";
}

int cmd_kernel(const ParsedCommand& pc, std::ostream& out) {
  const Params p(pc.manifest.parameters, defs_for(pc.command));
  const double s = p.num("s");
  const double T = p.num("horizon");
  const int dim = p.integer("grid.dim");
  const auto alphas = p.list("alphas");
  const std::string integrand = p.str("integrand");
  if (integrand != "kernel" && integrand != "gradient" && integrand != "both") {
    throw DomainError("malformed value for --integrand: '" + integrand + "'");
  }
  const double grad_s = p.num("grad_s") > 0.0 ? p.num("grad_s") : s + 1.0;
  const bool want_kernel = integrand != "gradient";
  const bool want_grad = integrand != "kernel";
  const fs::path dir = p.str("out");
  prepare_output_dir(dir, pc.force);

  std::vector<KernelRow> rows, grad_rows;
  KernelDistanceReport report;
  report.dim = dim;
  report.s = s;
  report.grad_s = grad_s;
  report.horizon = T;
  report.alphas = alphas;
  for (double a : alphas) {
    if (want_kernel) {
      rows.push_back({a, s, T, dim, kernel_distance_hms(a, s, T, dim)});
      report.distances.push_back(rows.back().value.value);
      report.t_stars.push_back(rows.back().value.t_star);
      report.quadrature_error_bound = std::max(report.quadrature_error_bound, rows.back().value.err_bound);
    }
    if (want_grad) {
      grad_rows.push_back({a, grad_s, T, dim, grad_kernel_distance_hms(a, grad_s, T, dim)});
      report.grad_distances.push_back(grad_rows.back().value.value);
      report.quadrature_error_bound =
          std::max(report.quadrature_error_bound, grad_rows.back().value.err_bound);
    }
  }
  std::vector<FitRecord> fits;
  auto values = [](const std::vector<KernelRow>& r) {
    std::vector<double> v;
    for (const auto& x : r) v.push_back(x.value.value);
    return v;
  };
  if (want_kernel) {
    atomic_write(dir / "kernel.csv", kernel_csv(rows), pc.force);
    fits.push_back({"kernel", 1.0, fit_rate(alphas, values(rows), 1.0, {}, 0.1)});
    atomic_write(dir / "plot_kernel.csv", plot_csv(alphas, values(rows)), pc.force);
  }
  if (want_grad) {
    atomic_write(dir / "kernel_grad.csv", kernel_csv(grad_rows), pc.force);
    fits.push_back({"gradient", 1.0, fit_rate(alphas, values(grad_rows), 1.0, {}, 0.1)});
    atomic_write(dir / "plot_gradient.csv", plot_csv(alphas, values(grad_rows)), pc.force);
  }
  atomic_write(dir / "fit.json", fits_json(fits), pc.force);
  if (want_kernel && alphas.size() >= 2) {
    fit_two_sided_constants(report);
    std::ostringstream os;
    os << "{\n  \"fitted_upper_C\": " << format_double(report.fitted_upper_C)
       << ",\n  \"fitted_lower_c\": " << format_double(report.fitted_lower_c)
       << ",\n  \"quadrature_error_bound\": " << format_double(report.quadrature_error_bound)
       << ",\n  \"pass\": " << (report.passed ? "true" : "false") << "\n}\n";
    atomic_write(dir / "bounds.json", os.str(), pc.force);
    out << "C = " << format_double(report.fitted_upper_C)
        << "  c = " << format_double(report.fitted_lower_c) << "\n";
  }
  for (const auto& f : fits) {
    out << f.norm_kind << " slope = " << format_double(f.fit.slope)
        << (f.fit.passed ? "  (pass)" : "  (fail)") << "\n";
  }
  write_manifest(dir, pc);
  return kExitOk;
}

int cmd_solve(const ParsedCommand& pc, std::ostream& out, std::ostream& err, bool mhd) {
  const Params p(pc.manifest.parameters, defs_for(pc.command));
  SolverConfig cfg = solver_config(p, true);
  cfg.alpha = p.num("alpha");
  if (!mhd) cfg.classical_laplacian = p.boolean("classical");
  if (mhd) cfg.beta = p.num("beta");
  const fs::path dir = p.str("out");
  prepare_output_dir(dir, pc.force);
  const SpectralField u0 = make_preset(cfg.grid, preset(p, "data", "seed"));
  SolveRecord rec;
  if (mhd) {
    const SpectralField b0 = make_preset(cfg.grid, preset(p, "magnetic", "magnetic.seed"));
    rec = solve_mhd(u0, b0, cfg);
  } else {
    rec = solve_ns(u0, cfg);
  }
  report_warnings(rec, err);
  write_record(dir, rec, pc.force);
  write_manifest(dir, pc);
  const auto& last = rec.diagnostics.back();
  out << "t = " << format_double(last.t) << "  energy_kin = " << format_double(last.energy_kin);
  if (mhd) out << "  energy_mag = " << format_double(last.energy_mag);
  out << "\n";
  return kExitOk;
}

int cmd_norm(const ParsedCommand& pc, std::ostream& out) {
  const Params p(pc.manifest.parameters, defs_for(pc.command));
  const NormSpec spec = NormSpec::parse(p.str("kind"));
  const Snapshot snap = read_snapshot(p.str("input"), p.num("grid.L"));
  const double value = norm(SpectralField::from_physical(snap.field), spec);
  out << format_double(value) << "\n";
  const std::string dir = p.str("out");
  if (!dir.empty()) {
    prepare_output_dir(dir, pc.force);
    atomic_write(fs::path(dir) / "norm.csv",
                 "input,norm_kind,value\n" + p.str("input") + "," + spec.name() + "," +
                     format_double(value) + "\n",
                 pc.force);
    write_manifest(dir, pc);
  }
  return kExitOk;
}

DataFamilySpec family_spec(const Params& p) {
  DataFamilySpec spec;
  spec.base = preset(p, "data", "seed");
  spec.perturbation = PresetSpec{PresetKind::random_smooth, 1.0, 1, p.u64("pert.seed"),
                                 p.num("pert.decay"), p.integer("pert.kmax")};
  spec.c_pert = p.num("c_pert");
  spec.alphas = p.list("alpha_grid");
  spec.epsilon = p.num("epsilon");
  return spec;
}

SweepOptions sweep_options(const Params& p) {
  SweepOptions opt;
  opt.horizon = p.num("horizon");
  opt.allow_long_horizon = p.boolean("allow_long_horizon");
  opt.refine_floor = p.boolean("refine_floor");
  opt.floor_factor = p.num("floor_factor");
  return opt;
}

ErrorMeasure parse_measure(const std::string& name, int bmo_level) {
  if (name == "velocity_sup") return velocity_sup();
  if (name == "pressure_bmo") return pressure_bmo(bmo_level);
  if (name == "magnetic_sup") return magnetic_sup();
  if (name.rfind("velocity_lplq:", 0) == 0) {
    const NormSpec spec = NormSpec::parse(name.substr(9));
    return velocity_lplq(spec.p, spec.q);
  }
  throw DomainError("unknown error norm '" + name + "' for --norms");
}

void write_sweep_diagnostics(const fs::path& dir, const SweepResult& sweep, double kappa, bool force) {
  fs::create_directories(dir / "diagnostics");
  for (std::size_t i = 0; i < sweep.records.size(); ++i) {
    std::string name = "alpha_" + tag(sweep.alphas[i]);
    if (sweep.mhd) name += "_beta_" + tag(sweep.betas[i]);
    name += "_kappa_" + tag(kappa) + ".csv";
    atomic_write(dir / "diagnostics" / name, diagnostics_csv(sweep.records[i]), force);
  }
  atomic_write(dir / "diagnostics" / ("reference_kappa_" + tag(kappa) + ".csv"),
               diagnostics_csv(sweep.reference), force);
}

void finish_fits(const fs::path& dir, const std::vector<FitRecord>& fits, bool force, std::ostream& out) {
  for (const auto& f : fits) {
    atomic_write(dir / ("plot_" + f.norm_kind + "_kappa_" + tag(f.kappa) + ".csv"),
                 plot_csv(f.fit.alphas, f.fit.errors), force);
    out << "kappa = " << tag(f.kappa) << "  " << f.norm_kind << "  slope = " << format_double(f.fit.slope)
        << "  predicted = " << format_double(f.fit.predicted_slope)
        << (f.fit.passed ? "  (pass)" : "  (fail)") << "\n";
  }
  atomic_write(dir / "fit.json", fits_json(fits), force);
}

// Fits only when enough usable points remain; otherwise the slope is NaN and
// the record reports a failure.
RateFitResult try_fit(const ErrorSeries& series, double predicted, double tol, std::ostream& err) {
  try {
    return fit_rate(series, predicted, tol);
  } catch (const DomainError& e) {
    err << "warning: " << series.norm_kind << ": " << e.what() << "\n";
    RateFitResult r;
    r.norm_kind = series.norm_kind;
    r.alphas = series.alphas;
    r.errors = series.errors;
    r.excluded = series.excluded;
    r.slope = r.intercept = r.r_squared = NAN;
    r.predicted_slope = predicted;
    r.tolerance = tol;
    return r;
  }
}

int cmd_converge(const ParsedCommand& pc, std::ostream& out, std::ostream& err) {
  const Params p(pc.manifest.parameters, defs_for(pc.command));
  const SolverConfig cfg = solver_config(p, false);
  DataFamilySpec spec = family_spec(p);
  const SweepOptions opt = sweep_options(p);
  const double tol = p.num("tolerance");
  std::vector<ErrorMeasure> measures;
  for (const auto& w : p.words("norms")) measures.push_back(parse_measure(w, p.integer("bmo.level")));
  const fs::path dir = p.str("out");
  prepare_output_dir(dir, pc.force);

  std::vector<ResultRow> rows;
  std::vector<FitRecord> fits;
  for (double kappa : p.list("kappa")) {
    spec.kappa = kappa;
    const SweepResult sweep = run_sweep(spec, cfg, opt);
    if (sweep.horizon_override) {
      err << "warning: horizon " << sweep.horizon << " exceeds T0 = " << sweep.T0 << "\n";
    }
    write_sweep_diagnostics(dir, sweep, kappa, pc.force);
    for (const auto& m : measures) {
      const ErrorSeries series = measure_errors(sweep, m, opt.floor_factor);
      const auto r = result_rows(series, kappa);
      rows.insert(rows.end(), r.begin(), r.end());
      double predicted = std::min(1.0, kappa);
      if (m.spec.kind == NormKind::lplq) predicted *= 1.0 - 1.0 / m.spec.q;
      fits.push_back({m.label, kappa, try_fit(series, predicted, tol, err)});
    }
  }
  atomic_write(dir / "results.csv", results_csv(rows, false), pc.force);
  finish_fits(dir, fits, pc.force, out);
  write_manifest(dir, pc);
  return kExitOk;
}

int cmd_converge_mhd(const ParsedCommand& pc, std::ostream& out, std::ostream& err) {
  const Params p(pc.manifest.parameters, defs_for(pc.command));
  const SolverConfig cfg = solver_config(p, false);
  MhdFamilySpec spec;
  spec.velocity = family_spec(p);
  spec.magnetic_base = preset(p, "magnetic", "magnetic.seed");
  spec.magnetic_perturbation.seed = p.u64("bpert.seed");
  spec.magnetic_perturbation.kmax = p.integer("pert.kmax");
  spec.magnetic_perturbation.spectrum_decay = p.num("pert.decay");
  spec.c_pert_mag = p.str("c_pert_mag").empty() ? spec.velocity.c_pert : p.num("c_pert_mag");
  spec.betas = p.list("betas");
  const SweepOptions opt = sweep_options(p);
  const double tol = p.num("tolerance");
  const int level = p.integer("bmo.level");
  const fs::path dir = p.str("out");
  prepare_output_dir(dir, pc.force);

  std::vector<ResultRow> rows;
  std::vector<FitRecord> fits;
  for (double kappa : p.list("kappa")) {
    spec.velocity.kappa = kappa;
    spec.kappa_mag = p.str("kappa_mag").empty() ? kappa : p.num("kappa_mag");
    const SweepResult sweep = run_mhd_sweep(spec, cfg, opt);
    write_sweep_diagnostics(dir, sweep, kappa, pc.force);
    for (const auto& m : {velocity_sup(), magnetic_sup(), pressure_bmo(level)}) {
      const auto r = result_rows(measure_errors(sweep, m, opt.floor_factor), kappa);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    const ErrorSeries combined = mhd_combined_errors(sweep, level, opt.floor_factor);
    const auto r = result_rows(combined, kappa);
    rows.insert(rows.end(), r.begin(), r.end());
    const double predicted = std::min({1.0, kappa, spec.kappa_mag});
    fits.push_back({combined.norm_kind, kappa, try_fit(combined, predicted, tol, err)});
  }
  atomic_write(dir / "results.csv", results_csv(rows, true), pc.force);
  finish_fits(dir, fits, pc.force, out);
  write_manifest(dir, pc);
  return kExitOk;
}

int cmd_fit(const ParsedCommand& pc, std::ostream& out, std::ostream& err) {
  const Params p(pc.manifest.parameters, defs_for(pc.command));
  const auto rows = parse_results_csv(read_text_file(p.str("results")));
  const double tol = p.num("tolerance");
  const fs::path dir = p.str("out");
  prepare_output_dir(dir, pc.force);
  // Group by (kappa, norm_kind) in order of first appearance.
  std::vector<std::pair<double, std::string>> keys;
  for (const auto& r : rows) {
    const std::pair<double, std::string> k{r.kappa, r.norm_kind};
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  std::vector<FitRecord> fits;
  for (const auto& [kappa, kind] : keys) {
    ErrorSeries s;
    s.norm_kind = kind;
    for (const auto& r : rows) {
      if (r.kappa != kappa || r.norm_kind != kind) continue;
      s.alphas.push_back(r.alpha);
      s.errors.push_back(r.error);
      s.excluded.push_back(r.excluded);
    }
    const double predicted = p.str("predicted").empty() ? std::min(1.0, kappa) : p.num("predicted");
    fits.push_back({kind, kappa, try_fit(s, predicted, tol, err)});
  }
  finish_fits(dir, fits, pc.force, out);
  write_manifest(dir, pc);
  return kExitOk;
}

}  // namespace

ParsedCommand parse_cli(const std::vector<std::string>& args) {
  if (!args.empty() && !args[0].empty() && args[0][0] != '-' && find_command({args[0]}).empty()) {
    throw DomainError("unknown subcommand '" + args[0] + "'");
  }
  AppState st = build_app();
  try {
    return parse_with(st, args);
  } catch (const CLI::CallForHelp&) {
    ParsedCommand pc;
    pc.help = true;
    pc.command = find_command(args);
    pc.help_text = pc.command.empty() ? st.app->help() : st.subs[pc.command]->help();
    return pc;
  } catch (const CLI::CallForVersion&) {
    ParsedCommand pc;
    pc.help = true;
    pc.help_text = tool_version() + "\n";
    return pc;
  } catch (const CLI::ParseError& e) {
    throw DomainError(e.what());
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const ParsedCommand pc = parse_cli(args);
    if (pc.help) {
      out << pc.help_text;
      return kExitOk;
    }
    if (pc.command == "kernel-distance") return cmd_kernel(pc, out);
    if (pc.command == "solve") return cmd_solve(pc, out, err, false);
    if (pc.command == "solve-mhd") return cmd_solve(pc, out, err, true);
    if (pc.command == "norm") return cmd_norm(pc, out);
    if (pc.command == "converge") return cmd_converge(pc, out, err);
    if (pc.command == "converge-mhd") return cmd_converge_mhd(pc, out, err);
    if (pc.command == "fit") return cmd_fit(pc, out, err);
    throw DomainError("unknown command");
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace fns
