// Copyright 2026 The qst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qst/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qst/estimation.hpp"
#include "qst/spectral_model.hpp"

namespace qst::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kOverlayPoints = 401;

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string machine(double v) { return fmt(v, 17); }

void check_qubits(int n, int max, const char* flag = "--qubits") {
  if (n < 1 || n > max) {
    throw UsageError(std::string(flag) + " must lie in [1, " + std::to_string(max) + "]");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

/// Model the analysis overlays for a given experiment.
struct OverlayModel {
  std::string kind;
  std::function<double(double)> pdf;
  std::function<double(double)> cdf;
  json params;
  /// Eigenvalues per replica described by the model (the smallest ones).
  Eigen::Index noise_count = 0;
  double lo = 0.0;
  double hi = 0.0;
};

OverlayModel overlay_model(const ExperimentConfig& config) {
  const int n = config.state.n;
  const auto dim = static_cast<Eigen::Index>(dimension(n));
  OverlayModel m;
  if (config.scheme == Scheme::kComplete) {
    const auto lap = laplace_model(n, static_cast<double>(config.total_counts));
    m.kind = "laplace";
    m.pdf = [lap](double l) { return laplace_pdf(lap, l); };
    m.cdf = [lap](double l) { return laplace_cdf(lap, l); };
    m.params = {{"center", lap.center}, {"alpha", lap.alpha}};
    m.noise_count = dim;
    m.lo = lap.center - 12.0 / lap.alpha;
    m.hi = lap.center + 12.0 / lap.alpha;
    return m;
  }
  const auto events = static_cast<double>(config.counts.events_per_setting);
  if (n == 1 && config.state.kind == StateKind::kWhiteNoise) {
    const auto density = single_qubit_density(events);
    m.kind = "single_qubit";
    m.pdf = density;
    m.cdf = [density](double l) { return density.cdf(l); };
    m.params = {{"center", 0.5}, {"N", events}, {"normalization", density.normalization()}};
    m.noise_count = dim;
    m.lo = 0.5 - density.support_half_width();
    m.hi = 0.5 + density.support_half_width();
    return m;
  }
  const int r = signal_rank(config.state);
  // A rank-one signal leaves the noise radius essentially at its r = 0 value.
  const SemicircleModel<double> sc{semicircle_center(n, config.state.q, r),
                                   semicircle_radius(n, events, r == 1 ? 0 : r)};
  m.kind = "semicircle";
  m.pdf = [sc](double l) { return semicircle_pdf(sc, l); };
  m.cdf = [sc](double l) { return semicircle_cdf(sc, l); };
  m.params = {{"center", sc.center}, {"radius", sc.radius}, {"rank", r}};
  m.noise_count = dim - r;
  m.lo = sc.center - sc.radius;
  m.hi = sc.center + sc.radius;
  return m;
}

std::vector<double> noise_eigenvalues(const SpectrumRows& rows, Eigen::Index count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(rows.rows() * count));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < count; ++j) out.push_back(rows(i, j));
  }
  return out;
}

Spectrum spectrum_from_values(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  Spectrum s;
  s.eigenvalues = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  s.trace = s.eigenvalues.sum();
  return s;
}

StateKind parse_state_flag(const std::string& name) {
  if (name == "wn") return StateKind::kWhiteNoise;
  if (name == "pure") return StateKind::kPurePlusNoise;
  if (name == "rank") return StateKind::kRankPlusNoise;
  if (name == "ghz") return StateKind::kGhzPlusNoise;
  if (name == "dicke") return StateKind::kDickePlusNoise;
  try {
    return state_kind_from_string(name);
  } catch (const std::exception&) {
    throw UsageError("--state must be one of wn, pure, rank, ghz, dicke");
  }
}

std::string json_or_table(const json& j, bool table) {
  if (!table) return j.dump(2) + "\n";
  std::ostringstream out;
  std::size_t width = 0;
  for (const auto& [key, _] : j.items()) width = std::max(width, key.size());
  for (const auto& [key, value] : j.items()) {
    out << key << std::string(width - key.size() + 2, ' ');
    if (value.is_number_float()) {
      out << fmt(value.get<double>(), 6);
    } else if (value.is_string()) {
      out << value.get<std::string>();
    } else {
      out << value.dump();
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

json cmd_predict(const PredictOptions& opts) {
  check_qubits(opts.qubits, kMaxAnalyticQubits);
  if (!(opts.counts >= 1.0)) throw UsageError("--counts must be >= 1");
  const double q = opts.q.value_or(0.0);
  if (!(q >= 0.0 && q <= 1.0)) throw UsageError("--q must lie in [0, 1]");
  const int r = opts.rank.value_or(q > 0.0 ? 1 : 0);
  if (r < 0 || static_cast<std::size_t>(r) >= dimension(opts.qubits)) {
    throw UsageError("--rank must lie in [0, 2^n)");
  }
  const SemicircleModel<double> model{semicircle_center(opts.qubits, q, r),
                                      semicircle_radius(opts.qubits, opts.counts, r)};
  json out = {
      {"n", opts.qubits},
      {"N", opts.counts},
      {"q", q},
      {"r", r},
      {"center", model.center},
      {"radius", model.radius},
      {"width", 2.0 * model.radius},
      {"physicality_probability", physicality_probability(model, opts.qubits)},
      {"N0_if_q_given", nullptr},
  };
  if (opts.q && q < 1.0) out["N0_if_q_given"] = min_counts(opts.qubits, q);
  return out;
}

std::int64_t cmd_min_counts(int qubits, double q) {
  check_qubits(qubits, kMaxAnalyticQubits);
  if (!(q >= 0.0 && q <= 1.0)) throw UsageError("--q must lie in [0, 1]");
  return min_counts(qubits, q);
}

json ensemble_summary_json(const SpectrumEnsemble& ensemble) {
  const auto& s = ensemble.summary;
  const auto& c = ensemble.config;
  json out = {
      {"n", c.state.n},
      {"state", to_string(c.state.kind)},
      {"scheme", to_string(c.scheme)},
      {"replicas", ensemble.replicas()},
      {"master_seed", c.master_seed},
      {"unphysical_fraction", s.unphysical_fraction},
      {"physical_fraction", 1.0 - s.unphysical_fraction},
      {"pooled_mean", s.pooled_mean},
      {"m2", s.m2},
      {"m4", s.m4},
      {"m6", s.m6},
      {"m4_over_m2_squared", s.m4 / (s.m2 * s.m2)},
      {"m6_over_m2_cubed", s.m6 / (s.m2 * s.m2 * s.m2)},
      {"largest_eigenvalue_mean", ensemble.rows.col(ensemble.rows.cols() - 1).mean()},
  };
  if (c.scheme == Scheme::kComplete) {
    out["total_counts"] = c.total_counts;
  } else {
    out["N"] = c.counts.events_per_setting;
    out["count_mode"] = to_string(c.counts.mode);
  }
  return out;
}

json cmd_simulate(const SimulateOptions& opts, std::ostream* progress) {
  try {
    validate(opts.config);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (opts.out.empty()) throw UsageError("--out is required");
  std::error_code ec;
  fs::create_directories(opts.out, ec);
  if (ec || !fs::is_directory(opts.out)) throw Error("cannot create output directory " + opts.out.string());

  RunOptions run;
  run.threads = std::max(1u, opts.threads);
  if (progress != nullptr) {
    const std::size_t step = std::max<std::size_t>(1, opts.config.replicas / 20);
    run.progress = [progress, step](std::size_t done, std::size_t total) {
      if (done % step == 0 || done == total) *progress << "replicas " << done << "/" << total << "\n";
    };
  }
  const SpectrumEnsemble ensemble = run_ensemble(opts.config, run);
  save_ensemble(ensemble, opts.out);
  json summary = ensemble_summary_json(ensemble);
  write_text(opts.out / "summary.json", summary.dump(2) + "\n");
  return summary;
}

json cmd_analyze(const AnalyzeOptions& opts) {
  if (opts.in.empty()) throw UsageError("--in is required");
  if (opts.bins < 1) throw UsageError("--bins must be >= 1");
  const SpectrumEnsemble ensemble = load_ensemble(opts.in);
  const fs::path out_dir = opts.out.value_or(opts.in);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory " + out_dir.string());

  const OverlayModel model = overlay_model(ensemble.config);
  const auto dim = ensemble.rows.cols();
  const double weight = static_cast<double>(model.noise_count) / static_cast<double>(dim);

  const double lo = ensemble.rows.minCoeff();
  const double hi = ensemble.rows.maxCoeff();
  const double width = hi > lo ? (hi - lo) / opts.bins : 1.0;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(opts.bins), 0);
  for (Eigen::Index i = 0; i < ensemble.rows.size(); ++i) {
    auto b = static_cast<std::int64_t>((ensemble.rows.reshaped()(i) - lo) / width);
    b = std::clamp<std::int64_t>(b, 0, opts.bins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  const double total = static_cast<double>(ensemble.rows.size());
  std::string hist = "bin_left,bin_right,count,density\n";
  for (int b = 0; b < opts.bins; ++b) {
    const double left = lo + b * width;
    const auto c = counts[static_cast<std::size_t>(b)];
    hist += machine(left) + "," + machine(left + width) + "," + std::to_string(c) + "," +
            machine(static_cast<double>(c) / (total * width)) + "\n";
  }
  write_text(out_dir / "histogram.csv", hist);

  // The overlay spans both the data and the model support; it integrates to
  // the fraction of eigenvalues the model describes.
  const double a = std::min(lo, model.lo);
  const double z = std::max(hi, model.hi);
  std::string overlay = "lambda,density\n";
  for (int i = 0; i < kOverlayPoints; ++i) {
    const double l = a + (z - a) * i / (kOverlayPoints - 1);
    overlay += machine(l) + "," + machine(weight * model.pdf(l)) + "\n";
  }
  write_text(out_dir / "overlay.csv", overlay);

  json summary = ensemble_summary_json(ensemble);
  const auto noise = noise_eigenvalues(ensemble.rows, model.noise_count);
  summary["model"] = model.params;
  summary["model"]["kind"] = model.kind;
  summary["sup_cdf_distance"] = sup_cdf_distance(noise, model.cdf);
  if (ensemble.config.scheme == Scheme::kComplete) {
    const double variance = static_cast<double>(num_paulis(ensemble.qubits())) /
                            static_cast<double>(ensemble.config.total_counts);
    const auto sc = moment_matched_semicircle(1.0 / static_cast<double>(dim), variance);
    summary["semicircle_sup_cdf_distance"] =
        sup_cdf_distance(noise, [sc](double l) { return semicircle_cdf(sc, l); });
  }
  summary["bins"] = opts.bins;
  write_text(out_dir / "analysis.json", summary.dump(2) + "\n");
  return summary;
}

std::vector<double> read_eigenvalue_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line.erase(std::min(line.find('#'), line.size()));
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::istringstream ss(line);
    double v = 0.0;
    std::string rest;
    if (!(ss >> v) || (ss >> rest)) {
      throw Error(path.string() + " line " + std::to_string(line_no) + ": expected one number");
    }
    values.push_back(v);
  }
  return values;
}

RankTestReport cmd_rank_test(const RankTestOptions& opts) {
  if (opts.eigenvalues.has_value() == opts.ensemble.has_value()) {
    throw UsageError("give exactly one of --eigenvalues or --in");
  }
  if (!(opts.significance > 0.0 && opts.significance < 1.0)) {
    throw UsageError("--significance must lie in (0, 1)");
  }
  if (opts.max_rank < 0) throw UsageError("--max-rank must be >= 0");

  int n = 0;
  double events = 0.0;
  std::vector<double> values;
  if (opts.eigenvalues) {
    if (!opts.qubits) throw UsageError("--qubits is required with --eigenvalues");
    if (!opts.counts) throw UsageError("--counts is required with --eigenvalues");
    n = *opts.qubits;
    events = *opts.counts;
    check_qubits(n, kMaxAnalyticQubits);
    values = read_eigenvalue_file(*opts.eigenvalues);
  } else {
    if (!opts.replica) throw UsageError("--replica is required with --in");
    const SpectrumEnsemble ensemble = load_ensemble(*opts.ensemble);
    if (*opts.replica >= ensemble.replicas()) throw UsageError("--replica is out of range");
    n = ensemble.qubits();
    if (opts.qubits && *opts.qubits != n) throw UsageError("--qubits does not match the ensemble");
    if (opts.counts) {
      events = *opts.counts;
    } else if (ensemble.config.scheme == Scheme::kOvercomplete) {
      events = static_cast<double>(ensemble.config.counts.events_per_setting);
    } else {
      throw UsageError("--counts is required for complete-scheme ensembles");
    }
    const auto row = ensemble.rows.row(static_cast<Eigen::Index>(*opts.replica));
    values.assign(row.begin(), row.end());
  }
  if (!(events >= 1.0)) throw UsageError("--counts must be >= 1");
  if (values.size() != dimension(n)) {
    throw DimensionError("expected " + std::to_string(dimension(n)) + " eigenvalues, got " +
                         std::to_string(values.size()));
  }
  return estimate_rank(spectrum_from_values(std::move(values)), n, events, opts.significance, opts.max_rank);
}

json rank_report_json(const RankTestReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"rank", r.rank},
                    {"center", r.center},
                    {"radius", r.radius},
                    {"statistic", r.statistic},
                    {"p_value", r.p_value},
                    {"p_eff", r.p_eff},
                    {"support_violation", r.support_violation},
                    {"clamped", r.clamped},
                    {"screened_signal_count", r.screened_signal_count}});
  }
  json out = {{"n", report.n},
              {"N", report.events_per_setting},
              {"significance", report.significance},
              {"rows", rows},
              {"chosen_rank", nullptr}};
  if (report.chosen_rank) out["chosen_rank"] = *report.chosen_rank;
  return out;
}

std::string format_rank_table(const RankTestReport& report) {
  const std::vector<std::string> headers = {"rank r", "center c", "radius R", "A2", "P-value", "P_eff"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : report.rows) {
    cells.push_back({std::to_string(r.rank), fmt(r.center, 6), fmt(r.radius, 6), fmt(r.statistic, 6),
                     fmt(r.p_value, 6), fmt(r.p_eff, 6)});
  }
  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    width[c] = headers[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << "  ";
      out << std::string(width[c] - row[c].size(), ' ') << row[c];
    }
    out << '\n';
  };
  emit(headers);
  for (const auto& row : cells) emit(row);
  out << "chosen rank: " << (report.chosen_rank ? std::to_string(*report.chosen_rank) : "none") << '\n';
  return out.str();
}

namespace {

/// Validated here rather than by the parser so a bad value is reported.
unsigned threads_from_environment(unsigned fallback) {
  const char* value = std::getenv("QST_THREADS");
  if (value == nullptr || *value == '\0') return fallback;
  const std::string_view text(value);
  unsigned parsed = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), parsed);
  if (ec != std::errc() || end != text.data() + text.size() || parsed == 0) {
    throw UsageError("QST_THREADS must be a positive integer");
  }
  return parsed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral analysis of linear quantum state tomography estimates", "qst"};
  app.set_version_flag("--version", std::string(code_version()));
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string format = "json";
  app.add_option("--seed", seed, "Master seed for random streams");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (default: $QST_THREADS, else 1)")
                          ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "table"}));

  PredictOptions predict;
  int predict_rank = -1;
  auto* p = app.add_subcommand("predict", "Semicircle center, radius and physicality probability");
  p->add_option("--qubits,-n", predict.qubits, "Number of qubits")->required();
  p->add_option("--counts,-N", predict.counts, "Events per setting")->required();
  p->add_option("--q", predict.q, "Signal weight");
  p->add_option("--rank,-r", predict_rank, "Signal rank (default 1 if q > 0, else 0)");

  int mc_qubits = 0;
  double mc_q = 0.0;
  auto* mc = app.add_subcommand("min-counts", "Minimum events per setting for a nonnegative noise support");
  mc->add_option("--qubits,-n", mc_qubits, "Number of qubits")->required();
  mc->add_option("--q", mc_q, "Signal weight")->required();

  SimulateOptions sim;
  std::string sim_state = "wn", sim_scheme = "overcomplete", sim_mode = "multinomial";
  std::string sim_out;
  int sim_qubits = 0, sim_rank = -1, sim_k = -1;
  double sim_q = 0.0;
  std::int64_t sim_counts = 0, sim_total = 0;
  std::uint64_t sim_state_seed = 1;
  std::size_t sim_reps = 1;
  bool sim_progress = false;
  auto* s = app.add_subcommand("simulate", "Simulate an ensemble of tomography runs");
  s->add_option("--qubits,-n", sim_qubits, "Number of qubits")->required();
  s->add_option("--counts,-N", sim_counts, "Events per setting (overcomplete scheme)");
  s->add_option("--state", sim_state, "wn, pure, rank, ghz or dicke");
  s->add_option("--q", sim_q, "Signal weight");
  s->add_option("--rank,-r", sim_rank, "Signal rank for --state rank");
  s->add_option("--k", sim_k, "Excitations for --state dicke");
  s->add_option("--state-seed", sim_state_seed, "Seed for random signal frames");
  s->add_option("--scheme", sim_scheme, "overcomplete or complete")->check(CLI::IsMember({"overcomplete", "complete"}));
  s->add_option("--total-counts", sim_total, "Event budget (complete scheme)");
  s->add_option("--mode", sim_mode, "multinomial or poisson")->check(CLI::IsMember({"multinomial", "poisson"}));
  s->add_option("--reps", sim_reps, "Number of replicas")->required();
  s->add_option("--out,-o", sim_out, "Output directory")->required();
  s->add_flag("--progress", sim_progress, "Report progress on stderr");

  AnalyzeOptions an;
  std::string an_out;
  auto* a = app.add_subcommand("analyze", "Histogram, model overlay and summary of an ensemble");
  a->add_option("--in,-i", an.in, "Ensemble directory")->required();
  a->add_option("--bins", an.bins, "Histogram bins");
  a->add_option("--out,-o", an_out, "Output directory (default: the ensemble directory)");

  RankTestOptions rt;
  std::string rt_eigen, rt_in;
  auto* t = app.add_subcommand("rank-test", "Estimate the signal rank of a spectrum");
  t->add_option("--eigenvalues", rt_eigen, "File with one eigenvalue per line");
  t->add_option("--in,-i", rt_in, "Ensemble directory");
  t->add_option("--replica", rt.replica, "Replica index within --in");
  t->add_option("--counts,-N", rt.counts, "Events per setting");
  t->add_option("--qubits,-n", rt.qubits, "Number of qubits");
  t->add_option("--significance", rt.significance, "Significance level");
  t->add_option("--max-rank", rt.max_rank, "Largest candidate rank");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const bool table = format == "table";
  try {
    if (p->parsed()) {
      if (predict_rank >= 0) predict.rank = predict_rank;
      out << json_or_table(cmd_predict(predict), table);
    } else if (mc->parsed()) {
      const auto n0 = cmd_min_counts(mc_qubits, mc_q);
      if (table) {
        out << n0 << '\n';
      } else {
        out << json{{"n", mc_qubits}, {"q", mc_q}, {"min_counts", n0}}.dump(2) << '\n';
      }
    } else if (s->parsed()) {
      check_qubits(sim_qubits, kMaxDenseQubits);
      auto& c = sim.config;
      c.state.kind = parse_state_flag(sim_state);
      c.state.n = sim_qubits;
      c.state.q = sim_q;
      c.state.r = sim_rank >= 0 ? sim_rank : (c.state.kind == StateKind::kRankPlusNoise ? 1 : 0);
      if (sim_k >= 0) c.state.k = sim_k;
      c.state.seed = sim_state_seed;
      c.scheme = scheme_from_string(sim_scheme);
      c.counts.mode = count_mode_from_string(sim_mode);
      c.counts.events_per_setting = sim_counts;
      c.total_counts = sim_total;
      if (c.scheme == Scheme::kOvercomplete && sim_counts < 1) throw UsageError("--counts must be >= 1");
      if (c.scheme == Scheme::kComplete && sim_total < 1) throw UsageError("--total-counts must be >= 1");
      c.replicas = sim_reps;
      c.master_seed = seed;
      sim.out = sim_out;
      sim.threads = threads_opt->count() > 0 ? threads : threads_from_environment(threads);
      out << json_or_table(cmd_simulate(sim, sim_progress ? &err : nullptr), table);
    } else if (a->parsed()) {
      if (!an_out.empty()) an.out = an_out;
      json summary = cmd_analyze(an);
      if (table) summary.erase("model");
      out << json_or_table(summary, table);
    } else if (t->parsed()) {
      if (!rt_eigen.empty()) rt.eigenvalues = rt_eigen;
      if (!rt_in.empty()) rt.ensemble = rt_in;
      const auto report = cmd_rank_test(rt);
      out << (table ? format_rank_table(report) : rank_report_json(report).dump(2) + "\n");
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace qst::cli
