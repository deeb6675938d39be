#include "chshfid/stats.hpp"

#include <algorithm>
#include <cmath>

#include "chshfid/error.hpp"

namespace chshfid {

double stable_sum(std::span<const double> values) noexcept {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

Moments central_moments(std::span<const double> samples) {
  if (samples.size() < 2) throw Error(ErrorCode::DegenerateSample, "need at least two samples");
  const double n = static_cast<double>(samples.size());
  const double mean = stable_sum(samples) / n;
  std::vector<double> d2(samples.size()), d3(samples.size()), d4(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = samples[i] - mean;
    d2[i] = d * d;
    d3[i] = d2[i] * d;
    d4[i] = d2[i] * d2[i];
  }
  const double m2 = stable_sum(d2) / n;
  if (!(m2 > 0.0)) throw Error(ErrorCode::DegenerateSample, "zero variance");
  const double m3 = stable_sum(d3) / n;
  const double m4 = stable_sum(d4) / n;
  return {mean, m2, m3 / std::pow(m2, 1.5), m4 / (m2 * m2)};
}

Histogram Histogram::uniform(double lo, double hi, std::size_t bins, std::span<const double> samples) {
  if (bins == 0 || !(hi > lo)) throw Error(ErrorCode::InvalidArgument, "histogram needs bins > 0 and hi > lo");
  Histogram h;
  h.edges_.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t k = 0; k <= bins; ++k) h.edges_[k] = lo + width * static_cast<double>(k);
  h.edges_[bins] = hi;
  h.counts_.assign(bins, 0);
  for (double v : samples) {
    const double pos = std::floor((v - lo) / width);
    const std::size_t k = pos < 0.0 ? 0 : std::min(static_cast<std::size_t>(pos), bins - 1);
    ++h.counts_[k];
  }
  h.total_ = samples.size();
  return h;
}

std::vector<double> Histogram::density() const {
  std::vector<double> d(counts_.size(), 0.0);
  if (total_ == 0) return d;
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    d[k] = static_cast<double>(counts_[k]) / (static_cast<double>(total_) * (edges_[k + 1] - edges_[k]));
  }
  return d;
}

double Histogram::integral() const {
  const std::vector<double> d = density();
  std::vector<double> mass(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) mass[k] = d[k] * (edges_[k + 1] - edges_[k]);
  return stable_sum(mass);
}

EnsembleStats summarize(std::span<const double> samples, double lo, double hi, std::size_t bins,
                        double violation_threshold) {
  EnsembleStats s;
  s.n = samples.size();
  try {
    s.moments = central_moments(samples);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateSample) throw;
  }
  const auto above = std::count_if(samples.begin(), samples.end(), [&](double v) { return v > violation_threshold; });
  s.p_violation = samples.empty() ? 0.0 : static_cast<double>(above) / static_cast<double>(samples.size());
  s.histogram = Histogram::uniform(lo, hi, bins, samples);
  return s;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "KS test needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_uniform(std::vector<double> samples) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "KS test needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double u = std::clamp(samples[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - u, u - static_cast<double>(i) / n});
  }
  return d;
}

namespace {
// Kolmogorov distribution 0.999 quantile.
constexpr double kKolmogorov999 = 1.9494746;
}  // namespace

double ks_critical_999(std::size_t n) { return kKolmogorov999 / std::sqrt(static_cast<double>(n)); }

double ks_critical_999(std::size_t n, std::size_t m) {
  constexpr double c = kKolmogorov999;
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return c * std::sqrt((dn + dm) / (dn * dm));
}

}  // namespace chshfid
