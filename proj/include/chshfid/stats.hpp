#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace chshfid {

/// Population moments: mean, m2, m3 / m2^{3/2}, m4 / m2^2 (non-excess kurtosis).
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

/// Throws DegenerateSample when fewer than two samples or zero variance.
Moments central_moments(std::span<const double> samples);

/// Compensated (Neumaier) sum; the result depends only on the order of the input.
double stable_sum(std::span<const double> values) noexcept;

class Histogram {
 public:
  /// `bins` equal-width bins on [lo, hi]. Values outside the support are counted in
  /// the nearest edge bin; hi itself falls in the last bin.
  static Histogram uniform(double lo, double hi, std::size_t bins, std::span<const double> samples);

  const std::vector<double>& edges() const noexcept { return edges_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept { return total_; }
  std::size_t bins() const noexcept { return counts_.size(); }

  /// count / (total * width); zero everywhere for an empty histogram.
  std::vector<double> density() const;

  /// Sum of density * width over all bins.
  double integral() const;

 private:
  std::vector<double> edges_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

struct EnsembleStats {
  std::size_t n = 0;
  std::optional<Moments> moments;  // empty for degenerate samples
  double p_violation = 0.0;        // fraction of samples strictly above the threshold
  Histogram histogram;
};

EnsembleStats summarize(std::span<const double> samples, double lo, double hi, std::size_t bins,
                        double violation_threshold = 2.0);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// One-sample KS statistic against Uniform[0, 1].
double ks_uniform(std::vector<double> samples);

/// Asymptotic two-sample critical value c(alpha) sqrt((n + m) / (n m)) at alpha = 0.001.
double ks_critical_999(std::size_t n, std::size_t m);

/// One-sample critical value c(alpha) / sqrt(n) at alpha = 0.001.
double ks_critical_999(std::size_t n);

}  // namespace chshfid
