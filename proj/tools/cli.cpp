#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <CLI11.hpp>

#include "chshfid/fidelity.hpp"
#include "chshfid/kernels.hpp"
#include "report.hpp"

namespace chshfid::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

TargetState resolve_target(const RunConfig& cfg) {
  if (cfg.target_path.empty()) return TargetState::builtin();
  try {
    return report::load_target(cfg.target_path);
  } catch (const Error& e) {
    throw UsageError(std::string("invalid --target: ") + e.what());
  }
}

void emit(const std::string& json, const RunConfig& cfg, std::ostream& out) {
  if (cfg.out_json.empty()) {
    out << json;
  } else {
    report::write_file_atomic(cfg.out_json, json);
  }
}

int cmd_typicality(const RunConfig& cfg, std::ostream& out) {
  require(cfg.count >= 1, "--count must be at least 1");
  const TypicalityResult r = run_typicality(cfg.count, cfg.starts, cfg.seed, cfg.bins, cfg.workers);
  const std::string json = report::stats_json("typicality", cfg.seed, r.stats, true, [&](report::JsonWriter& w) {
    w.key("starts").value(static_cast<std::uint64_t>(cfg.starts));
    w.key("oracle_mean").value(stable_sum(r.oracle) / static_cast<double>(r.oracle.size()));
    w.key("oracle_max_gap").value(r.max_oracle_gap);
  });
  const std::string csv = report::histogram_csv(r.stats.histogram);
  if (!cfg.out_csv.empty()) report::write_file_atomic(cfg.out_csv, csv);
  emit(json, cfg, out);
  return kExitOk;
}

int cmd_neighborhood(const RunConfig& cfg, std::ostream& out) {
  require(cfg.alpha.has_value(), "--alpha is required for neighborhood");
  require(*cfg.alpha > 0.0 && *cfg.alpha < 1.0, "--alpha must lie in (0, 1)");
  require(cfg.count >= 1, "--count must be at least 1");
  require(cfg.budget >= 1, "--budget must be at least 1");
  const TargetState target = resolve_target(cfg);
  const NeighborhoodSpec spec{*cfg.alpha, cfg.count, cfg.budget};
  const NeighborhoodResult r = sample_neighborhood(target, spec, cfg.seed, cfg.bins, cfg.workers);
  const std::string json = report::stats_json("neighborhood", cfg.seed, r.stats, true, [&](report::JsonWriter& w) {
    w.key("alpha").value(*cfg.alpha);
    w.key("min_hits").value(static_cast<std::uint64_t>(cfg.count));
    w.key("budget").value(static_cast<std::uint64_t>(cfg.budget));
    w.key("hit_count").value(static_cast<std::uint64_t>(r.hit_count));
    w.key("generated_count").value(static_cast<std::uint64_t>(r.generated_count));
    w.key("budget_exhausted").value(r.budget_exhausted);
    w.key("target_value").value(bell_value(target.rho, target.settings));
  });
  if (!cfg.out_csv.empty()) report::write_file_atomic(cfg.out_csv, report::histogram_csv(r.stats.histogram));
  emit(json, cfg, out);
  return kExitOk;
}

int cmd_scatter(const RunConfig& cfg, std::ostream& out) {
  require(cfg.count >= 1, "--count must be at least 1");
  const TargetState target = resolve_target(cfg);
  const std::vector<ScatterPoint> points = run_scatter(target, cfg.count, cfg.seed, cfg.workers);
  std::vector<double> values(points.size());
  std::size_t far_violators = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    values[i] = points[i].bell_value;
    if (points[i].fidelity < 0.2 && points[i].bell_value > kClassicalBound) ++far_violators;
  }
  const EnsembleStats stats = summarize(values, 0.0, kTsirelsonBound, cfg.bins);
  const std::array<double, 3> thresholds{0.75, 0.85, 0.95};
  const auto quadrants = scatter_quadrants(points, thresholds);
  const std::string json = report::stats_json("scatter", cfg.seed, stats, true, [&](report::JsonWriter& w) {
    w.key("quadrants").begin_array();
    for (const QuadrantCounts& q : quadrants) {
      w.begin_object();
      w.key("fidelity_threshold").value(q.fidelity_threshold);
      w.key("high_fidelity_violating").value(static_cast<std::uint64_t>(q.high_fidelity_violating));
      w.key("high_fidelity_local").value(static_cast<std::uint64_t>(q.high_fidelity_local));
      w.key("low_fidelity_violating").value(static_cast<std::uint64_t>(q.low_fidelity_violating));
      w.key("low_fidelity_local").value(static_cast<std::uint64_t>(q.low_fidelity_local));
      w.end_object();
    }
    w.end_array();
    w.key("low_fidelity_violators").value(static_cast<std::uint64_t>(far_violators));
  });
  if (!cfg.out_csv.empty()) report::write_file_atomic(cfg.out_csv, report::scatter_csv(points));
  emit(json, cfg, out);
  return kExitOk;
}

int cmd_fid_pdf(const RunConfig& cfg, std::ostream& out) {
  require(cfg.count >= 1, "--count must be at least 1");
  const auto kind = parse_ensemble(cfg.ensemble);
  require(kind.has_value(), "--ensemble must be one of filtered, hs, bures");
  const TargetState target = resolve_target(cfg);
  const std::vector<double> values = fidelity_samples(target, *kind, cfg.count, cfg.seed, cfg.workers);
  const EnsembleStats stats = summarize(values, 0.0, 1.0, cfg.bins);
  const std::string json = report::stats_json("fid-pdf", cfg.seed, stats, false, [&](report::JsonWriter& w) {
    w.key("ensemble").value(to_string(*kind));
  });
  if (!cfg.out_csv.empty()) report::write_file_atomic(cfg.out_csv, report::histogram_csv(stats.histogram));
  emit(json, cfg, out);
  return kExitOk;
}

struct CheckLine {
  bool pass;
  std::string text;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  require(cfg.count >= 1, "--count must be at least 1");
  require(cfg.target_tol >= 0.0 && cfg.oracle_tol >= 0.0, "tolerances must be non-negative");
  const TargetState target = resolve_target(cfg);
  std::vector<CheckLine> lines;

  const double value = bell_value(target.rho, target.settings);
  lines.push_back({std::abs(value - target.reference_value) <= cfg.target_tol,
                   fmt("target_bell=%.3f±%.3g measured=%.6f", target.reference_value, cfg.target_tol, value)});
  const double gap = 1.0 - value / kTsirelsonBound;
  const double ref_gap = 1.0 - target.reference_value / kTsirelsonBound;
  lines.push_back({std::abs(gap - ref_gap) <= 0.002, fmt("target_tsirelson_gap=%.4f±0.002 measured=%.6f", ref_gap, gap)});
  const double oracle = horodecki_max(target.rho);
  lines.push_back({oracle >= value - 1e-6, fmt("target_oracle_dominates oracle=%.6f value=%.6f", oracle, value)});
  const double target_marg = marginal_residual(target.rho);
  lines.push_back({target_marg <= 1e-3, fmt("target_marginals=I/2±1e-3 residual=%.3g", target_marg)});

  // Oracle agreement and marginals over seeded filtered states.
  double max_gap = 0.0;
  double max_marg = 0.0;
  for (std::size_t i = 0; i < cfg.count; ++i) {
    RngStream rng(cfg.seed, i);
    const DensityMatrix rho = filtered_state(rng);
    const BellResult r = optimize_bell(rho, cfg.starts, rng.substream(kOptimizerSalt));
    max_gap = std::max(max_gap, std::abs(r.value - *r.oracle_value));
    max_marg = std::max(max_marg, marginal_residual(rho));
  }
  lines.push_back({max_gap <= cfg.oracle_tol,
                   fmt("oracle_agreement states=%.0f max_gap=%.3g tol=%.3g", static_cast<double>(cfg.count), max_gap,
                       cfg.oracle_tol)});
  lines.push_back({max_marg <= 1e-10, fmt("filtered_marginals states=%.0f residual=%.3g", static_cast<double>(cfg.count), max_marg)});

  // Fuchs-van de Graaf sandwich on pairs from each ensemble.
  for (EnsembleKind kind : {EnsembleKind::Filtered, EnsembleKind::HilbertSchmidt, EnsembleKind::Bures}) {
    std::size_t violations = 0;
    for (std::size_t i = 0; i < cfg.count; ++i) {
      RngStream rng(cfg.seed ^ 0x66766700ull, i);
      const DensityMatrix r1 = sample_state(kind, rng);
      const DensityMatrix r2 = sample_state(kind, rng);
      try {
        check_fvg(r1, r2);
      } catch (const Error&) {
        ++violations;
      }
    }
    lines.push_back({violations == 0, "fvg_sandwich ensemble=" + std::string(to_string(kind)) +
                                          " pairs=" + std::to_string(cfg.count) +
                                          " violations=" + std::to_string(violations)});
  }

  bool all = true;
  for (const CheckLine& l : lines) {
    out << (l.pass ? "PASS  " : "FAIL  ") << l.text << '\n';
    all = all && l.pass;
  }
  out << (all ? "verify: all checks passed\n" : "verify: FAILED\n");
  return all ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Random two-qubit states, CHSH maximization and fidelity-robustness experiments", "chshfid"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> count;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    sub->add_option("--count", count, "Number of samples (minimum hits for neighborhood)");
    sub->add_option("--workers", cfg.workers, "Worker threads (0 = all cores); never changes output");
    sub->add_option("--bins", cfg.bins, "Histogram bins")->capture_default_str();
    sub->add_option("--starts", cfg.starts, "Random starts per optimization")->capture_default_str();
    sub->add_option("--alpha", cfg.alpha, "Fidelity threshold in (0, 1)");
    sub->add_option("--budget", cfg.budget, "Maximum number of generated states")->capture_default_str();
    sub->add_option("--ensemble", cfg.ensemble, "filtered | hs | bures")->capture_default_str();
    sub->add_option("--target", cfg.target_path, "Alternative target state JSON");
    sub->add_option("--out-json", cfg.out_json, "JSON output path (stdout when omitted)");
    sub->add_option("--out-csv", cfg.out_csv, "CSV output path");
  };

  // Default --count per subcommand.
  const std::pair<CLI::App*, std::uint64_t> commands[] = {
      {app.add_subcommand("typicality", "Distribution of the optimized CHSH value over filtered states"), 5000},
      {app.add_subcommand("neighborhood", "Fixed-settings CHSH values of states close to the target"), 300},
      {app.add_subcommand("scatter", "Fidelity vs fixed-settings CHSH value for filtered states"), 1000000},
      {app.add_subcommand("fid-pdf", "Distribution of the fidelity with the target for one ensemble"), 1000000},
      {app.add_subcommand("verify", "Self-checks: target reproduction, oracle agreement, bounds"), 200},
  };
  for (const auto& [sub, n] : commands) common(sub);
  CLI::App* ver = commands[4].first;
  ver->add_option("--target-tol", cfg.target_tol, "Allowed |B_target - reference|")->capture_default_str();
  ver->add_option("--oracle-tol", cfg.oracle_tol, "Allowed |B_opt - oracle|")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  std::size_t chosen = 0;
  for (std::size_t k = 0; k < std::size(commands); ++k) {
    if (commands[k].first->parsed()) chosen = k;
  }
  cfg.count = count.value_or(commands[chosen].second);

  try {
    require(cfg.bins >= 1, "--bins must be at least 1");
    require(cfg.starts >= 1, "--starts must be at least 1");
    require(parse_ensemble(cfg.ensemble).has_value(), "--ensemble must be one of filtered, hs, bures");
    switch (chosen) {
      case 0: return cmd_typicality(cfg, out);
      case 1: return cmd_neighborhood(cfg, out);
      case 2: return cmd_scatter(cfg, out);
      case 3: return cmd_fid_pdf(cfg, out);
      default: return cmd_verify(cfg, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << commands[chosen].first->help();
    return kExitUsage;
  } catch (const report::IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    const bool bad_input = e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::InvalidState;
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return bad_input ? kExitUsage : kExitVerifyFailed;
  }
}

}  // namespace chshfid::cli
