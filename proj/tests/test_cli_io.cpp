// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fns/cli.hpp"
#include "fns/error.hpp"
#include "fns/manifest.hpp"
#include "fns/presets.hpp"
#include "fns/results_io.hpp"
#include "fns/snapshot_io.hpp"

namespace fs = std::filesystem;

namespace fns {
namespace {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = fs::temp_directory_path() /
            ("fnslab_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string operator/(const std::string& leaf) const { return (path_ / leaf).string(); }

 private:
  fs::path path_;
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

int run(const std::vector<std::string>& args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(FNSLAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Manifest, RoundTripsLosslessly) {
  Manifest m;
  m.command = "converge";
  m.parameters.set("alpha_grid", "1.9,1.95");
  m.parameters.set("note", "a = b # not a comment\nsecond line");
  m.parameters.set("empty", "");
  m.seed = 18446744073709551615ull;
  m.tool_version = tool_version();
  m.timestamp = "2026-01-31T12:34:56Z";
  m.input_hashes["dir with space/cfg.txt"] = sha256_hex("x");
  const std::string text = m.serialize();
  EXPECT_EQ(text.rfind("fnslab-manifest 1\n", 0), 0u);
  const Manifest back = Manifest::parse(text);
  EXPECT_TRUE(back == m);
  EXPECT_EQ(back.serialize(), text);
  EXPECT_THROW(Manifest::parse("not a manifest\n"), DomainError);
}

TEST(Manifest, Sha256KnownAnswer) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  TempDir dir("sha");
  write_file(dir.path() / "f.txt", "abc");
  EXPECT_EQ(sha256_file(dir.path() / "f.txt"), sha256_hex("abc"));
  EXPECT_THROW(sha256_file(dir.path() / "missing"), IoError);
}

TEST(Manifest, TimestampShape) {
  const std::string ts = utc_timestamp();
  ASSERT_EQ(ts.size(), 20u);
  EXPECT_EQ(ts[4], '-');
  EXPECT_EQ(ts[10], 'T');
  EXPECT_EQ(ts.back(), 'Z');
}

TEST(ConfigText, ParsesCommentsAndRejectsGarbage) {
  const ParamMap m = parse_config_text("# header\n\ngrid.n = 64\n  alpha=1.9  # trailing\n");
  EXPECT_EQ(m.get("grid.n").value(), "64");
  EXPECT_EQ(m.get("alpha").value(), "1.9");
  EXPECT_FALSE(m.contains("beta"));
  try {
    parse_config_text("grid.n = 64\njust words\n");
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
  }
  ParamMap a = m;
  ParamMap b;
  b.set("alpha", "1.95");
  a.merge(b);
  EXPECT_EQ(a.get("alpha").value(), "1.95");
  EXPECT_EQ(a.entries().front().first, "grid.n");
}

TEST(ParseCli, ConvergeEchoesFlagsIntoManifest) {
  const ParsedCommand pc = parse_cli({"converge", "--alpha-grid", "1.9,1.95,1.99", "--kappa", "0.5",
                                      "--dim", "2", "--n", "128", "--out", "/tmp/x"});
  EXPECT_EQ(pc.command, "converge");
  const ParamMap& p = pc.manifest.parameters;
  EXPECT_EQ(p.get("alpha_grid").value(), "1.9,1.95,1.99");
  EXPECT_EQ(p.get("kappa").value(), "0.5");
  EXPECT_EQ(p.get("grid.dim").value(), "2");
  EXPECT_EQ(p.get("grid.n").value(), "128");
  EXPECT_EQ(pc.manifest.tool_version, tool_version());
}

TEST(ParseCli, UsageErrors) {
  std::string err;
  EXPECT_EQ(run({"converge", "--kappa", "1"}, &err), kExitUsage);
  EXPECT_NE(err.find("--out"), std::string::npos) << err;
  EXPECT_EQ(run({"bogus"}, &err), kExitUsage);
  EXPECT_NE(err.find("bogus"), std::string::npos);
  EXPECT_EQ(run({"solve", "--out", "/tmp/x", "--no-such-flag", "1"}), kExitUsage);
  EXPECT_EQ(run({}), kExitUsage);
  EXPECT_THROW(parse_cli({"fit"}), DomainError);
}

TEST(ParseCli, FlagsOverrideConfig) {
  TempDir dir("cfg");
  write_file(dir.path() / "c.txt", "grid.n = 64\nkappa = 2\n# comment\n");
  const ParsedCommand pc =
      parse_cli({"converge", "--config", dir / "c.txt", "--kappa", "0.5", "--out", dir / "o"});
  EXPECT_EQ(pc.manifest.parameters.get("kappa").value(), "0.5");
  EXPECT_EQ(pc.manifest.parameters.get("grid.n").value(), "64");
  EXPECT_EQ(pc.manifest.input_hashes.count(dir / "c.txt"), 1u);
  write_file(dir.path() / "bad.txt", "grid.nn = 64\n");
  EXPECT_THROW(parse_cli({"converge", "--config", dir / "bad.txt", "--out", dir / "o"}),
               DomainError);
}

TEST(ParseCli, HelpIsNotAnError) {
  std::ostringstream out, err;
  EXPECT_EQ(run_cli({"converge", "--help"}, out, err), kExitOk);
  EXPECT_NE(out.str().find("--alpha-grid"), std::string::npos);
}

TEST(ResultsIo, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(format_double(INFINITY), "inf");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
  EXPECT_EQ(format_double(NAN), "nan");
}

TEST(ResultsIo, EmptySweepOutputs) {
  const std::string csv = results_csv({}, false);
  EXPECT_EQ(csv, "alpha,kappa,norm_kind,error,excluded_flag\n");
  EXPECT_EQ(results_csv({}, true), "alpha,beta,kappa,norm_kind,error,excluded_flag\n");
  EXPECT_TRUE(parse_results_csv(csv).empty());
  EXPECT_EQ(plot_csv({}, {}), "log2ma,logerr\n");
  EXPECT_TRUE(parse_fits_json(fits_json({})).empty());
  EXPECT_NE(fits_json({}).find("\"fits\""), std::string::npos);
}

TEST(ResultsIo, CsvRoundTrip) {
  std::vector<ResultRow> rows{{1.9, std::nullopt, 0.5, "velocity_sup", 0.1234567890123456789, false},
                              {1.95, std::nullopt, 0.5, "velocity_sup", 1e-300, true}};
  const auto back = parse_results_csv(results_csv(rows, false));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].error, rows[0].error);
  EXPECT_EQ(back[1].error, rows[1].error);
  EXPECT_TRUE(back[1].excluded);
  EXPECT_FALSE(back[0].beta.has_value());
  rows[0].beta = 1.8;
  rows[1].beta = 1.85;
  const auto with_beta = parse_results_csv(results_csv(rows, true));
  EXPECT_EQ(with_beta[1].beta.value(), 1.85);
  EXPECT_THROW(parse_results_csv("alpha,kappa\n1,2\n"), DomainError);
}

TEST(ResultsIo, FitJsonRoundTrip) {
  RateFitResult r = fit_rate({1.9, 1.95, 1.99}, {0.1, 0.05, 0.0101}, 1.0);
  r.norm_kind = "pressure_bmo";
  r.excluded = {false, false, false};
  const std::vector<FitRecord> fits{{"pressure_bmo", 0.5, r}};
  const auto back = parse_fits_json(fits_json(fits));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].norm_kind, "pressure_bmo");
  EXPECT_EQ(back[0].kappa, 0.5);
  EXPECT_EQ(back[0].fit.slope, r.slope);
  EXPECT_EQ(back[0].fit.intercept, r.intercept);
  EXPECT_EQ(back[0].fit.r_squared, r.r_squared);
  EXPECT_EQ(back[0].fit.passed, r.passed);
  EXPECT_EQ(back[0].fit.errors, r.errors);
  EXPECT_EQ(back[0].fit.alphas, r.alphas);
  EXPECT_EQ(back[0].fit.excluded, r.excluded);
  EXPECT_EQ(fits_json(back), fits_json(fits));
}

TEST(ResultsIo, AtomicWriteAndOverwriteGuard) {
  TempDir dir("atomic");
  const fs::path p = dir.path() / "a.csv";
  atomic_write(p, "one\n");
  EXPECT_EQ(read_text_file(p), "one\n");
  EXPECT_THROW(atomic_write(p, "two\n"), IoError);
  atomic_write(p, "two\n", true);
  EXPECT_EQ(read_text_file(p), "two\n");
  for (const auto& e : fs::directory_iterator(dir.path())) {
    EXPECT_EQ(e.path().filename(), "a.csv");
  }
  EXPECT_THROW(atomic_write(dir.path() / "no" / "such" / "dir" / "x", "y"), IoError);
  EXPECT_THROW(read_text_file(dir.path() / "missing"), IoError);
}

TEST(ResultsIo, KernelCsvHeader) {
  const std::string csv = kernel_csv({{1.9, 2.0, 1.0, 3, {0.5, 0.01, 1e-12}}});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "alpha,s,T,dim,value,t_star,err_bound");
  EXPECT_NE(csv.find("1.8999999999999999,2,1,3,0.5,0.01,9.9999999999999998e-13"), std::string::npos)
      << csv;
}

std::vector<std::string> small_converge(const std::string& out) {
  return {"converge",       "--dim",        "2",    "--n",           "32",   "--alpha-grid",
          "1.9,1.95,1.99",  "--kappa",      "0.5,2", "--c-pert",     "0.1",  "--horizon",
          "0.01",           "--allow-long-horizon", "--refine-floor", "false", "--snapshots",
          "4",              "--norms",      "velocity_sup,pressure_bmo,velocity_lplq:2:4", "--out", out};
}

TEST(Cli, ConvergeWritesDeclaredFilesAndRefusesRerun) {
  TempDir dir("converge");
  const std::string out = dir / "run";
  std::string err;
  ASSERT_EQ(run(small_converge(out), &err), kExitOk) << err;
  for (const char* f : {"results.csv", "fit.json", "manifest.txt", "plot_velocity_sup_kappa_0.5.csv"}) {
    EXPECT_TRUE(fs::exists(fs::path(out) / f)) << f;
  }
  const auto rows = parse_results_csv(read_text_file(fs::path(out) / "results.csv"));
  EXPECT_EQ(rows.size(), 18u);
  const auto fits = parse_fits_json(read_text_file(fs::path(out) / "fit.json"));
  EXPECT_EQ(fits.size(), 6u);
  const std::string first = read_text_file(fs::path(out) / "results.csv");

  EXPECT_EQ(run(small_converge(out), &err), kExitIo);
  EXPECT_NE(err.find("--force"), std::string::npos) << err;

  auto forced = small_converge(out);
  forced.push_back("--force");
  ASSERT_EQ(run(forced), kExitOk);
  EXPECT_EQ(read_text_file(fs::path(out) / "results.csv"), first);
}

TEST(Cli, ManifestReproducesResultsByteForByte) {
  TempDir dir("replay");
  const std::string a = dir / "a";
  const std::string b = dir / "b";
  ASSERT_EQ(run(small_converge(a)), kExitOk);
  const Manifest m = Manifest::parse(read_text_file(fs::path(a) / "manifest.txt"));
  EXPECT_EQ(m.command, "converge");
  EXPECT_EQ(m.parameters.get("kappa").value(), "0.5,2");
  std::string err;
  ASSERT_EQ(run({"converge", "--config", (fs::path(a) / "manifest.txt").string(), "--out", b}, &err),
            kExitOk)
      << err;
  for (const char* f : {"results.csv", "fit.json", "plot_pressure_bmo_kappa_2.csv"}) {
    EXPECT_EQ(read_text_file(fs::path(a) / f), read_text_file(fs::path(b) / f)) << f;
  }
}

TEST(Cli, SolveThenNormThenFit) {
  TempDir dir("solve");
  const std::string out = dir / "s";
  std::string err;
  ASSERT_EQ(run({"solve", "--dim", "2", "--n", "16", "--t-end", "0.01", "--snapshots", "2",
                 "--alpha", "1.8", "--out", out},
                &err),
            kExitOk)
      << err;
  EXPECT_TRUE(fs::exists(fs::path(out) / "diagnostics.csv"));
  const fs::path snap = fs::path(out) / "snapshots" / "velocity_0002.fnsf";
  ASSERT_TRUE(fs::exists(snap));
  std::ostringstream norm_out, norm_err;
  ASSERT_EQ(run_cli({"norm", "--input", snap.string(), "--kind", "sup"}, norm_out, norm_err),
            kExitOk)
      << norm_err.str();
  const double expected =
      std::exp(-0.01 * std::pow(2.0, 0.9));  // Taylor-Green amplitude after decay
  EXPECT_NEAR(std::stod(norm_out.str()), expected, 1e-9);

  const std::string conv = dir / "c";
  ASSERT_EQ(run(small_converge(conv)), kExitOk);
  ASSERT_EQ(run({"fit", "--results", (fs::path(conv) / "results.csv").string(), "--out", dir / "f"},
                &err),
            kExitOk)
      << err;
  EXPECT_EQ(parse_fits_json(read_text_file(fs::path(dir / "f") / "fit.json")).size(), 6u);
}

TEST(Cli, KernelDistanceOutputs) {
  TempDir dir("kernel");
  const std::string out = dir / "k";
  std::string err;
  ASSERT_EQ(run({"kernel-distance", "--alphas", "1.9,1.95,1.99", "--out", out}, &err), kExitOk) << err;
  const std::string csv = read_text_file(fs::path(out) / "kernel.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  const auto fits = parse_fits_json(read_text_file(fs::path(out) / "fit.json"));
  ASSERT_EQ(fits.size(), 2u);
  EXPECT_NEAR(fits[0].fit.slope, 1.0, 0.1);
  EXPECT_TRUE(fs::exists(fs::path(out) / "bounds.json"));
}

TEST(CliBinary, ExitCodes) {
  TempDir dir("exit");
  EXPECT_EQ(run_binary("--version"), 0);
  EXPECT_EQ(run_binary("converge --kappa 1"), 2);
  EXPECT_EQ(run_binary("nonsense"), 2);
  EXPECT_EQ(run_binary("norm --input " + (dir / "missing.fnsf")), 3);
  EXPECT_EQ(run_binary("solve --dim 2 --n 32 --preset random_smooth --amplitude 400 --kmax 4 "
                       "--dt 0.005 --t-end 0.01 --picard-max-iter 2 --alpha 1.9 --out " +
                       (dir / "div")),
            1);
}

}  // namespace
}  // namespace fns
