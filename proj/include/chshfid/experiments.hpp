#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "chshfid/chsh.hpp"
#include "chshfid/linalg.hpp"
#include "chshfid/randgen.hpp"
#include "chshfid/stats.hpp"

namespace chshfid {

/// Reference state with the measurement settings that are optimal for it.
struct TargetState {
  DensityMatrix rho;
  SettingsQuad settings;
  double reference_value = 0.0;

  /// The built-in two-qubit target: entries to three decimals, PSD-clamped, with its
  /// optimal angles and the reported CHSH value 2.733.
  static TargetState builtin();
};

inline constexpr std::size_t kDefaultBins = 40;
inline constexpr std::size_t kDefaultStarts = 50;

/// Salt for the optimizer's start-point stream of sample i (sample i's state uses
/// RngStream(seed, i) directly).
inline constexpr std::uint64_t kOptimizerSalt = 0x6f7074696d697a65ull;

/// Number of worker threads when the caller passes 0.
std::size_t default_workers() noexcept;

/// Runs fn(begin, end) over [0, count) in fixed-size chunks on `workers` threads.
/// Chunk boundaries do not depend on the worker count.
void parallel_chunks(std::size_t count, std::size_t workers, const std::function<void(std::size_t, std::size_t)>& fn);

struct TypicalityResult {
  EnsembleStats stats;            // over the optimized values, histogram on [0, 2 sqrt 2]
  std::vector<double> values;     // optimize_bell value per sample
  std::vector<double> oracle;     // horodecki_max per sample
  double max_oracle_gap = 0.0;    // max |value - oracle|
  double max_oracle_excess = 0.0; // max (value - oracle), should stay <= 1e-6
};

TypicalityResult run_typicality(std::size_t n, std::size_t starts, std::uint64_t seed, std::size_t bins,
                                std::size_t workers = 0);

struct NeighborhoodSpec {
  double alpha = 0.75;
  std::size_t min_hits = 300;
  std::size_t budget = 1'000'000;

  void validate() const;  // throws InvalidArgument
};

struct NeighborhoodHit {
  std::uint64_t index;  // sample index; injected states use their position in `injected`
  bool injected;
  double fidelity;
  double bell_value;    // |Tr(B rho)| at the target's settings
};

struct NeighborhoodResult {
  EnsembleStats stats;  // over hit bell values, histogram on [0, 2 sqrt 2]
  std::vector<NeighborhoodHit> hits;
  std::size_t hit_count = 0;
  std::size_t generated_count = 0;
  bool budget_exhausted = false;
};

/// Draws filtered states until min_hits satisfy fidelity(rho, target) >= alpha or
/// the budget is spent, and evaluates each hit at the target's fixed settings.
/// The hits are the first min_hits in sample-index order; generated_count is the
/// index of the last hit plus one (the budget when exhausted). Injected states are
/// tested before any generated one and count toward generated_count.
NeighborhoodResult sample_neighborhood(const TargetState& target, const NeighborhoodSpec& spec, std::uint64_t seed,
                                       std::size_t bins = kDefaultBins, std::size_t workers = 0,
                                       std::span<const DensityMatrix> injected = {});

struct ScatterPoint {
  double fidelity;
  double bell_value;
};

std::vector<ScatterPoint> run_scatter(const TargetState& target, std::size_t n, std::uint64_t seed,
                                      std::size_t workers = 0);

struct QuadrantCounts {
  double fidelity_threshold;
  std::size_t high_fidelity_violating = 0;  // F >= t, B > 2
  std::size_t high_fidelity_local = 0;      // F >= t, B <= 2
  std::size_t low_fidelity_violating = 0;   // F < t, B > 2
  std::size_t low_fidelity_local = 0;       // F < t, B <= 2
};

std::vector<QuadrantCounts> scatter_quadrants(std::span<const ScatterPoint> points,
                                              std::span<const double> thresholds);

/// Fidelity of n samples of `kind` against the target, in sample order.
std::vector<double> fidelity_samples(const TargetState& target, EnsembleKind kind, std::size_t n, std::uint64_t seed,
                                     std::size_t workers = 0);

Histogram fidelity_pdf(const TargetState& target, EnsembleKind kind, std::size_t n, std::uint64_t seed,
                       std::size_t bins = kDefaultBins, std::size_t workers = 0);

}  // namespace chshfid
