#include "chshfid/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "chshfid/fidelity.hpp"

namespace chshfid {

namespace {

constexpr std::size_t kChunk = 64;
constexpr std::size_t kNeighborhoodBatch = 1 << 15;

}  // namespace

TargetState TargetState::builtin() {
  const ComplexMatrix printed(4, 4,
                              {
                                  {0.275, 0.0}, {0.187, -0.150}, {0.134, 0.197}, {-0.24, -0.079},
                                  {0.187, 0.150}, {0.225, 0.0}, {-0.023, 0.22}, {-0.134, -0.197},
                                  {0.134, -0.197}, {-0.023, -0.22}, {0.225, 0.0}, {-0.187, 0.150},
                                  {-0.24, 0.079}, {-0.134, 0.197}, {-0.187, -0.150}, {0.275, 0.0},
                              });
  const std::array<double, 8> angles{0.470262, 4.4278, 1.7903, 6.03714, 1.67123, 2.99268, 0.759639, 1.0833};
  return {DensityMatrix::clamped(printed), SettingsQuad::from_angles(angles), 2.733};
}

std::size_t default_workers() noexcept { return std::max(1u, std::thread::hardware_concurrency()); }

void parallel_chunks(std::size_t count, std::size_t workers, const std::function<void(std::size_t, std::size_t)>& fn) {
  if (workers == 0) workers = default_workers();
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  workers = std::min(workers, std::max<std::size_t>(chunks, 1));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
      try {
        fn(c * kChunk, std::min(count, (c + 1) * kChunk));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
      }
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  }
  if (failure) std::rethrow_exception(failure);
}

TypicalityResult run_typicality(std::size_t n, std::size_t starts, std::uint64_t seed, std::size_t bins,
                                std::size_t workers) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "typicality needs n >= 1");
  TypicalityResult out;
  out.values.resize(n);
  out.oracle.resize(n);
  parallel_chunks(n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RngStream rng(seed, i);
      const DensityMatrix rho = filtered_state(rng);
      const BellResult r = optimize_bell(rho, starts, rng.substream(kOptimizerSalt));
      out.values[i] = r.value;
      out.oracle[i] = *r.oracle_value;
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    out.max_oracle_gap = std::max(out.max_oracle_gap, std::abs(out.values[i] - out.oracle[i]));
    out.max_oracle_excess = std::max(out.max_oracle_excess, out.values[i] - out.oracle[i]);
  }
  out.stats = summarize(out.values, 0.0, kTsirelsonBound, bins);
  return out;
}

void NeighborhoodSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  if (min_hits == 0) throw Error(ErrorCode::InvalidArgument, "min_hits must be positive");
  if (budget == 0) throw Error(ErrorCode::InvalidArgument, "budget must be positive");
}

NeighborhoodResult sample_neighborhood(const TargetState& target, const NeighborhoodSpec& spec, std::uint64_t seed,
                                       std::size_t bins, std::size_t workers,
                                       std::span<const DensityMatrix> injected) {
  spec.validate();
  const FidelityReference fid(target.rho);
  NeighborhoodResult out;

  for (std::size_t k = 0; k < injected.size() && out.hits.size() < spec.min_hits; ++k) {
    const double f = fid(injected[k]);
    ++out.generated_count;
    if (f >= spec.alpha) out.hits.push_back({k, true, f, bell_value(injected[k], target.settings)});
  }

  std::size_t next_index = 0;
  while (out.hits.size() < spec.min_hits && out.generated_count < spec.budget) {
    const std::size_t batch = std::min(kNeighborhoodBatch, spec.budget - out.generated_count);
    const std::size_t chunks = (batch + kChunk - 1) / kChunk;
    std::vector<std::vector<NeighborhoodHit>> per_chunk(chunks);
    const std::size_t base = next_index;
    parallel_chunks(batch, workers, [&](std::size_t begin, std::size_t end) {
      auto& found = per_chunk[begin / kChunk];
      for (std::size_t j = begin; j < end; ++j) {
        RngStream rng(seed, base + j);
        const DensityMatrix rho = filtered_state(rng);
        const double f = fid(rho);
        if (f >= spec.alpha) found.push_back({base + j, false, f, bell_value(rho, target.settings)});
      }
    });
    std::size_t consumed = batch;
    for (const auto& chunk : per_chunk) {
      for (const NeighborhoodHit& h : chunk) {
        if (out.hits.size() == spec.min_hits) break;
        out.hits.push_back(h);
        if (out.hits.size() == spec.min_hits) consumed = h.index - base + 1;
      }
    }
    out.generated_count += consumed;
    next_index += batch;
  }

  out.hit_count = out.hits.size();
  out.budget_exhausted = out.hit_count < spec.min_hits;
  std::vector<double> values(out.hits.size());
  std::transform(out.hits.begin(), out.hits.end(), values.begin(), [](const NeighborhoodHit& h) { return h.bell_value; });
  out.stats = summarize(values, 0.0, kTsirelsonBound, bins);
  return out;
}

std::vector<ScatterPoint> run_scatter(const TargetState& target, std::size_t n, std::uint64_t seed,
                                      std::size_t workers) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "scatter needs n >= 1");
  const FidelityReference fid(target.rho);
  std::vector<ScatterPoint> points(n);
  parallel_chunks(n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RngStream rng(seed, i);
      const DensityMatrix rho = filtered_state(rng);
      points[i] = {fid(rho), bell_value(rho, target.settings)};
    }
  });
  return points;
}

std::vector<QuadrantCounts> scatter_quadrants(std::span<const ScatterPoint> points, std::span<const double> thresholds) {
  std::vector<QuadrantCounts> out;
  for (double t : thresholds) {
    QuadrantCounts q{t};
    for (const ScatterPoint& p : points) {
      const bool high = p.fidelity >= t;
      const bool violating = p.bell_value > kClassicalBound;
      if (high && violating) ++q.high_fidelity_violating;
      else if (high) ++q.high_fidelity_local;
      else if (violating) ++q.low_fidelity_violating;
      else ++q.low_fidelity_local;
    }
    out.push_back(q);
  }
  return out;
}

std::vector<double> fidelity_samples(const TargetState& target, EnsembleKind kind, std::size_t n, std::uint64_t seed,
                                     std::size_t workers) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "fidelity_pdf needs n >= 1");
  const FidelityReference fid(target.rho);
  std::vector<double> values(n);
  parallel_chunks(n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RngStream rng(seed, i);
      values[i] = fid(sample_state(kind, rng));
    }
  });
  return values;
}

Histogram fidelity_pdf(const TargetState& target, EnsembleKind kind, std::size_t n, std::uint64_t seed,
                       std::size_t bins, std::size_t workers) {
  const std::vector<double> values = fidelity_samples(target, kind, n, seed, workers);
  return Histogram::uniform(0.0, 1.0, bins, values);
}

}  // namespace chshfid
