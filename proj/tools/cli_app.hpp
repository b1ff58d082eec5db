#ifndef GRASSINV_TOOLS_CLI_APP_HPP
#define GRASSINV_TOOLS_CLI_APP_HPP

// Command-line front end. run_cli parses argv, runs one library call and
// writes a JSON or CSV report; exit code 0 = pass, 1 = fail, 2 = usage.

#include <CLI11.hpp>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "grassinv/grassinv.hpp"

namespace grassinv::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

using Json = nlohmann::ordered_json;

struct CommandSpec {
  std::string command;  ///< e.g. "verify theorem2"
  int n = 0, i = 0, l = 0, m = 0, k = 0;
  std::size_t samples = 100000;
  int q = kDefaultQuadOrder;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  Convention convention = kDefaultConvention;
  Normalization normalization = kDefaultNormalization;
  std::string f0 = "sum";
  std::string fv = "topgram";
  std::string fxi = "lift:sum";
  int bins = 50;
  std::size_t trials = 1000;
  double tol = 1e-9;
  double a = 2.0, b = 3.0;
  std::string format = "json";
  std::string output;
  bool timing = false;
};

/// Bad or inconsistent arguments detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- formatting ---------------------------------------------------------

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// Integral values print as integers, non-finite ones as strings.
inline Json json_number(double x) {
  if (!std::isfinite(x)) return format_number(x);
  if (x == std::floor(x) && std::abs(x) < 9.0e15) return static_cast<std::int64_t>(x);
  return x;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os) const {
    auto line = [&os](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) os << (c ? "," : "") << cells[c];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

struct Outcome {
  Json json;
  CsvTable csv;
  int code = kPass;
};

// ---- parsing helpers ----------------------------------------------------

inline Convention parse_convention(const std::string& s) {
  if (s == "as_stated") return Convention::AsStated;
  if (s == "complement_swapped") return Convention::ComplementSwapped;
  throw UsageError("--convention must be as_stated or complement_swapped, got '" + s + "'");
}

inline Normalization parse_normalization(const std::string& s) {
  if (s == "as_printed") return Normalization::AsPrinted;
  if (s == "ordered_chamber") return Normalization::OrderedChamber;
  throw UsageError("--normalization must be as_printed or ordered_chamber, got '" + s + "'");
}

inline InvariantFn parse_fxi(const std::string& desc, int n, int i, int l) {
  constexpr std::string_view kLift = "lift:";
  if (desc.rfind(kLift, 0) == 0) return lift(parse_f0(desc.substr(kLift.size())), n, i, l);
  if (desc == "trace_ref") return trace_with_reference(l);
  if (desc == "e1") return first_axis_weight();
  if (desc == "one") return constant_fn(1.0);
  throw UsageError("--fxi must be lift:<f0>|trace_ref|e1|one, got '" + desc + "'");
}

inline void require(bool ok, const std::string& flag, const std::string& what) {
  if (!ok) throw UsageError(flag + ": " + what);
}

// ---- reports ------------------------------------------------------------

inline Json report_json(const CommandSpec& spec, const VerifyReport& r, const Json& extra_params) {
  Json params = Json::object();
  for (const auto& [key, v] : r.params) params[key] = json_number(v);
  for (const auto& [key, v] : extra_params.items()) params[key] = v;
  Json j;
  j["command"] = spec.command;
  j["params"] = params;
  j["seed"] = spec.seed;
  j["samples"] = r.samples;
  j["quad_order"] = r.quad_order;
  j["convention"] = r.convention;
  j["normalization"] = r.normalization;
  j["lhs"] = json_number(r.lhs);
  j["rhs"] = json_number(r.rhs);
  j["stderr"] = json_number(r.std_error);
  j["z"] = json_number(r.z);
  j["pass"] = r.pass;
  j["redraws"] = r.redraws;
  j["threads"] = spec.threads;
  Json extras = Json::object();
  for (const auto& [key, v] : r.extras) extras[key] = json_number(v);
  j["extras"] = extras;
  return j;
}

inline CsvTable report_csv(const CommandSpec& spec, const VerifyReport& r) {
  CsvTable t;
  t.header = {"command", "seed", "samples", "quad_order", "convention", "normalization",
              "lhs",     "rhs",  "stderr",  "z",          "pass",       "redraws"};
  t.rows.push_back({spec.command, std::to_string(spec.seed), std::to_string(r.samples), std::to_string(r.quad_order),
                    r.convention, r.normalization, format_number(r.lhs), format_number(r.rhs),
                    format_number(r.std_error), format_number(r.z), r.pass ? "true" : "false",
                    std::to_string(r.redraws)});
  return t;
}

inline Outcome from_report(const CommandSpec& spec, const VerifyReport& r, const Json& extra_params = Json::object()) {
  return {report_json(spec, r, extra_params), report_csv(spec, r), r.pass ? kPass : kFail};
}

inline McOptions mc_options(const CommandSpec& s) {
  McOptions o;
  o.seed = s.seed;
  o.samples = s.samples;
  o.threads = s.threads;
  return o;
}

// ---- commands -----------------------------------------------------------

inline Outcome cmd_constants(const CommandSpec& s) {
  const ThmConstants k = theorem2_constants(s.n, s.i, s.l);
  Outcome o;
  o.json["command"] = s.command;
  o.json["params"] = {{"n", s.n}, {"i", s.i}, {"l", s.l}};
  o.json["m"] = k.m;
  o.json["alpha"] = json_number(k.alpha.value());
  o.json["beta"] = json_number(k.beta.value());
  o.json["c_m"] = k.c_m;
  o.json["c"] = k.c;
  o.json["normalization"] = to_string(s.normalization);
  o.json["normalizer"] = k.normalizer(s.normalization);
  o.json["c_theorem1"] = theorem1_constant(s.n, s.l);
  o.json["pass"] = true;
  o.csv.header = {"key", "value"};
  o.csv.rows = {{"n", std::to_string(s.n)},
                {"i", std::to_string(s.i)},
                {"l", std::to_string(s.l)},
                {"m", std::to_string(k.m)},
                {"alpha", format_number(k.alpha.value())},
                {"beta", format_number(k.beta.value())},
                {"c_m", format_number(k.c_m)},
                {"c", format_number(k.c)},
                {"normalizer", format_number(k.normalizer(s.normalization))},
                {"c_theorem1", format_number(theorem1_constant(s.n, s.l))}};
  return o;
}

inline Outcome cmd_volume(const CommandSpec& s) {
  require(s.m >= 1 && s.m <= s.n, "--m", "need 1 <= m <= n");
  Outcome o;
  o.json["command"] = s.command;
  o.json["params"] = {{"n", s.n}, {"m", s.m}};
  o.json["stiefel_volume"] = stiefel_volume(s.n, s.m);
  o.json["sphere_area"] = sphere_area(s.n);
  o.json["pass"] = true;
  o.csv.header = {"n", "m", "stiefel_volume", "sphere_area"};
  o.csv.rows = {{std::to_string(s.n), std::to_string(s.m), format_number(stiefel_volume(s.n, s.m)),
                 format_number(sphere_area(s.n))}};
  return o;
}

inline Outcome cmd_sample(const CommandSpec& s, bool grassmann) {
  const int cols = grassmann ? s.i : s.m;
  require(cols >= 1 && cols <= s.n, grassmann ? "--i" : "--m", "need 1 <= value <= n");
  Rng rng(s.seed, 1);
  Outcome o;
  o.json["command"] = s.command;
  o.json["params"] = {{"n", s.n}, {grassmann ? "i" : "m", cols}};
  o.json["seed"] = s.seed;
  o.json["samples"] = s.samples;
  Json all = Json::array();
  o.csv.header = {"sample", "row", "col", "value"};
  for (std::size_t t = 0; t < s.samples; ++t) {
    const DenseMatrix mat = grassmann ? haar_grassmann(s.n, cols, rng).projection().dense()
                                      : haar_stiefel(s.n, cols, rng).matrix();
    Json rows = Json::array();
    for (std::size_t r = 0; r < mat.rows(); ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < mat.cols(); ++c) {
        row.push_back(mat(r, c));
        o.csv.rows.push_back({std::to_string(t), std::to_string(r), std::to_string(c), format_number(mat(r, c))});
      }
      rows.push_back(row);
    }
    all.push_back(rows);
  }
  o.json[grassmann ? "projections" : "frames"] = all;
  o.json["pass"] = true;
  return o;
}

inline Outcome cmd_angles(const CommandSpec& s) {
  check_grassmann_indices(s.n, s.i, s.l);
  const int m = std::min(s.i, s.l);
  Rng rng(s.seed, 1);
  Outcome o;
  o.json["command"] = s.command;
  o.json["params"] = {{"n", s.n}, {"i", s.i}, {"l", s.l}, {"m", m}};
  o.json["seed"] = s.seed;
  o.json["samples"] = s.samples;
  o.csv.header = {"sample"};
  for (int j = 1; j <= m; ++j) o.csv.header.push_back("lambda_" + std::to_string(j));
  for (int j = 1; j <= m; ++j) o.csv.header.push_back("omega_" + std::to_string(j));
  Json lam = Json::array(), omg = Json::array();
  for (std::size_t t = 0; t < s.samples; ++t) {
    const SpectralPoint p = spectral_coords(haar_grassmann(s.n, s.i, rng), s.l);
    const std::vector<double> w = p.angles();
    std::vector<std::string> row{std::to_string(t)};
    Json lj = Json::array(), wj = Json::array();
    for (std::size_t j = 0; j < p.m(); ++j) {
      row.push_back(format_number(p[j]));
      lj.push_back(p[j]);
    }
    for (double x : w) {
      row.push_back(format_number(x));
      wj.push_back(x);
    }
    o.csv.rows.push_back(std::move(row));
    lam.push_back(lj);
    omg.push_back(wj);
  }
  o.json["lambda"] = lam;
  o.json["omega"] = omg;
  o.json["pass"] = true;
  return o;
}

inline Outcome cmd_density(const CommandSpec& s) {
  const DensityReport d = density_report(s.n, s.i, s.l, s.bins, mc_options(s));
  Outcome o;
  o.json["command"] = s.command;
  o.json["params"] = {{"n", s.n}, {"i", s.i}, {"l", s.l}, {"m", d.m}, {"bins", s.bins}};
  o.json["seed"] = s.seed;
  o.json["samples"] = s.samples;
  o.json["convention"] = to_string(s.convention);
  o.json["redraws"] = d.redraws;

  o.csv.header = {"bin", "lo", "hi"};
  for (int j = 1; j <= d.m; ++j) o.csv.header.push_back("count_" + std::to_string(j));
  if (d.m == 1) {
    o.csv.header.push_back("expected_as_stated");
    o.csv.header.push_back("expected_complement_swapped");
  }
  Json counts = Json::array();
  for (int bin = 0; bin < d.bins; ++bin) {
    std::vector<std::string> row{std::to_string(bin), format_number(double(bin) / d.bins),
                                 format_number(double(bin + 1) / d.bins)};
    Json cj = Json::array();
    for (std::size_t c : d.counts[bin]) {
      row.push_back(std::to_string(c));
      cj.push_back(c);
    }
    if (d.m == 1) {
      row.push_back(format_number(d.expected_as_stated[bin]));
      row.push_back(format_number(d.expected_swapped[bin]));
    }
    o.csv.rows.push_back(std::move(row));
    counts.push_back(cj);
  }
  o.json["counts"] = counts;
  if (d.m == 1) {
    const double threshold = std::max(0.01, 1.63 / std::sqrt(double(s.samples)));
    const double ks = d.ks(s.convention);
    o.json["ks_as_stated"] = d.ks_as_stated;
    o.json["ks_complement_swapped"] = d.ks_swapped;
    o.json["ks_threshold"] = threshold;
    o.json["pass"] = ks < threshold;
    o.code = ks < threshold ? kPass : kFail;
  } else {
    o.json["pass"] = true;
  }
  return o;
}

inline Outcome cmd_verify(const CommandSpec& s, const std::string& which) {
  const McOptions opts = mc_options(s);
  if (which == "theorem1")
    return from_report(s, verify_theorem1(s.n, s.l, parse_f0(s.f0), opts, s.q), {{"f0", s.f0}});
  if (which == "theorem2")
    return from_report(s, verify_theorem2(s.n, s.i, s.l, parse_f0(s.f0), opts, s.q, s.convention, s.normalization),
                       {{"f0", s.f0}});
  if (which == "bistiefel")
    return from_report(s, verify_bistiefel(s.n, s.m, s.k, parse_stiefel_fn(s.fv, s.n, s.k), opts), {{"fv", s.fv}});
  if (which == "zhang") return from_report(s, verify_zhang(s.m, s.a, s.b, opts, s.q));
  if (which == "invariance") {
    check_grassmann_indices(s.n, s.i, s.l);
    Rng rng(s.seed, 1);
    VerifyReport r = invariance_test(parse_fxi(s.fxi, s.n, s.i, s.l), s.n, s.i, s.l, s.trials, rng, s.tol);
    return from_report(s, r, {{"fxi", s.fxi}});
  }
  throw UsageError("unknown verify target '" + which + "'");
}

// ---- entry point --------------------------------------------------------

inline void emit(const CommandSpec& s, const Outcome& o, std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (s.format == "csv")
      o.csv.write(os);
    else
      os << o.json.dump(2) << '\n';
  };
  if (s.output.empty()) {
    write(out);
    return;
  }
  std::ofstream f(s.output, std::ios::binary);
  if (!f) throw UsageError("--output: cannot open '" + s.output + "'");
  write(f);
}

inline Json error_json(const std::string& command, const std::string& kind, const std::string& message) {
  Json j;
  j["command"] = command;
  j["error"] = kind;
  j["message"] = message;
  j["pass"] = false;
  j["version"] = kVersion;
  return j;
}

/// Parses argv and runs the command. Reports go to `out` (or --output),
/// diagnostics to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CommandSpec s;
  std::string convention = to_string(kDefaultConvention);
  std::string normalization = to_string(kDefaultNormalization);

  CLI::App app{"Invariant-measure toolkit for Stiefel and Grassmann manifolds", "grassinv"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--n", s.n, "ambient dimension")->check(CLI::PositiveNumber);
  app.add_option("--i", s.i, "subspace dimension")->check(CLI::PositiveNumber);
  app.add_option("--l", s.l, "reference dimension")->check(CLI::PositiveNumber);
  app.add_option("--m", s.m, "frame width / matrix size")->check(CLI::PositiveNumber);
  app.add_option("--k", s.k, "bi-Stiefel split")->check(CLI::PositiveNumber);
  app.add_option("--samples", s.samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
  app.add_option("--q", s.q, "quadrature order")->check(CLI::PositiveNumber);
  app.add_option("--seed", s.seed, "RNG seed");
  app.add_option("--threads", s.threads, "Monte Carlo workers")->check(CLI::PositiveNumber);
  app.add_option("--convention", convention, "as_stated|complement_swapped");
  app.add_option("--normalization", normalization, "as_printed|ordered_chamber");
  app.add_option("--f0", s.f0, "one|sum|prod|max|poly:c0,c1,...");
  app.add_option("--fv", s.fv, "one|topgram|v11sq");
  app.add_option("--fxi", s.fxi, "lift:<f0>|trace_ref|e1|one");
  app.add_option("--bins", s.bins, "histogram bins")->check(CLI::PositiveNumber);
  app.add_option("--trials", s.trials, "invariance trials")->check(CLI::PositiveNumber);
  app.add_option("--tol", s.tol, "invariance tolerance")->check(CLI::PositiveNumber);
  app.add_option("--a", s.a, "Zhang exponent a");
  app.add_option("--b", s.b, "Zhang exponent b");
  app.add_option("--format", s.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", s.output, "write the report to this file");
  app.add_flag("--timing", s.timing, "record wall time in elapsed_ms");

  auto* constants = app.add_subcommand("constants", "constants for (n, i, l)");
  auto* volume = app.add_subcommand("volume", "Stiefel volume for (n, m)");
  auto* sample = app.add_subcommand("sample", "Haar samples");
  sample->require_subcommand(1);
  sample->add_subcommand("stiefel", "frames in V_{n,m}");
  auto* sample_grassmann = sample->add_subcommand("grassmann", "projections in G_{n,i}");
  auto* angles = app.add_subcommand("angles", "spectral coordinates of Haar subspaces");
  auto* density = app.add_subcommand("density", "histogram of spectral coordinates");
  auto* verify = app.add_subcommand("verify", "Monte Carlo vs quadrature checks");
  verify->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> targets;
  for (const char* name : {"theorem1", "theorem2", "bistiefel", "zhang", "invariance"})
    targets.emplace_back(name, verify->add_subcommand(name));

  std::string command = "grassinv";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    out << error_json(command, "UsageError", e.what()).dump(2) << '\n';
    return kUsage;
  }

  // Flags that default to 0 must be supplied by the commands that use them.
  auto need = [](int v, const char* flag) { require(v > 0, flag, "required"); };
  const auto t0 = std::chrono::steady_clock::now();
  try {
    s.convention = parse_convention(convention);
    s.normalization = parse_normalization(normalization);
    Outcome o;
    if (*constants) {
      s.command = command = "constants";
      need(s.n, "--n"), need(s.i, "--i"), need(s.l, "--l");
      o = cmd_constants(s);
    } else if (*volume) {
      s.command = command = "volume";
      need(s.n, "--n"), need(s.m, "--m");
      o = cmd_volume(s);
    } else if (*sample) {
      const bool g = static_cast<bool>(*sample_grassmann);
      s.command = command = g ? "sample grassmann" : "sample stiefel";
      need(s.n, "--n"), need(g ? s.i : s.m, g ? "--i" : "--m");
      o = cmd_sample(s, g);
    } else if (*angles) {
      s.command = command = "angles";
      need(s.n, "--n"), need(s.i, "--i"), need(s.l, "--l");
      o = cmd_angles(s);
    } else if (*density) {
      s.command = command = "density";
      need(s.n, "--n"), need(s.i, "--i"), need(s.l, "--l");
      o = cmd_density(s);
    } else {
      std::string which;
      for (const auto& [name, sub] : targets)
        if (*sub) which = name;
      s.command = command = "verify " + which;
      if (which != "zhang") need(s.n, "--n");
      if (which == "theorem1") need(s.l, "--l");
      if (which == "theorem2" || which == "invariance") need(s.i, "--i"), need(s.l, "--l");
      if (which == "bistiefel") need(s.m, "--m"), need(s.k, "--k");
      if (which == "zhang") need(s.m, "--m");
      o = cmd_verify(s, which);
    }
    const double elapsed =
        s.timing ? std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() : 0.0;
    o.json["elapsed_ms"] = elapsed;
    o.json["version"] = kVersion;
    emit(s, o, out);
    return o.code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    out << error_json(command, "UsageError", e.what()).dump(2) << '\n';
    return kUsage;
  } catch (const HypothesisViolated& e) {
    err << "usage error: " << e.what() << '\n';
    out << error_json(command, "HypothesisViolated", e.what()).dump(2) << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    out << error_json(command, "DomainError", e.what()).dump(2) << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    out << error_json(command, "Error", e.what()).dump(2) << '\n';
    return kFail;
  }
}

}  // namespace grassinv::cli

#endif  // GRASSINV_TOOLS_CLI_APP_HPP
