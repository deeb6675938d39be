#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>

#include "chshfid/linalg.hpp"
#include "chshfid/nelder_mead.hpp"
#include "chshfid/rng.hpp"

namespace chshfid {

inline constexpr double kClassicalBound = 2.0;
inline constexpr double kTsirelsonBound = 2.0 * std::numbers::sqrt2;

/// Spin measurement direction (polar theta in [0, pi], azimuth phi in [0, 2 pi)).
struct MeasurementSetting {
  double theta = 0.0;
  double phi = 0.0;

  /// Clamps theta into [0, pi] and wraps phi into [0, 2 pi). Throws on non-finite angles.
  static MeasurementSetting make(double theta, double phi);

  /// Unit Bloch vector (sin t cos p, sin t sin p, cos t).
  std::array<double, 3> direction() const noexcept;
};

/// Directions a, a' (Alice) and b, b' (Bob).
struct SettingsQuad {
  MeasurementSetting a, a_prime, b, b_prime;

  /// Angle order: theta_a, phi_a, theta_b, phi_b, theta_a', phi_a', theta_b', phi_b'
  /// (Alice 1, Bob 1, Alice 2, Bob 2).
  static SettingsQuad from_angles(std::span<const double, 8> angles);
  std::array<double, 8> to_angles() const noexcept;
};

/// p(a, b | x, y) with outcomes a, b in {-1, +1} and settings x, y in {1, 2}.
class ProbabilityTable {
 public:
  double operator()(int a, int b, int x, int y) const;
  double& at(int a, int b, int x, int y);

 private:
  static std::size_t index(int a, int b, int x, int y);
  std::array<double, 16> p_{};
};

struct BellResult {
  double value = 0.0;
  SettingsQuad settings;
  std::optional<double> oracle_value;
  double classical_bound = kClassicalBound;
  double quantum_bound = kTsirelsonBound;
  std::size_t evaluations = 0;
};

/// w . sigma = [[cos t, e^{-i p} sin t], [e^{i p} sin t, -cos t]].
ComplexMatrix observable(const MeasurementSetting& s);

ProbabilityTable born_probabilities(const DensityMatrix& rho, const SettingsQuad& q);

/// <(a . sigma) x (b . sigma)> = Tr(rho (a . sigma) x (b . sigma)).
double correlation(const DensityMatrix& rho, const MeasurementSetting& sa, const MeasurementSetting& sb);

/// a.sigma x (b + b').sigma + a'.sigma x (b - b').sigma.
ComplexMatrix bell_operator(const SettingsQuad& q);

/// Tr(B rho), without the absolute value.
double bell_value_signed(const DensityMatrix& rho, const SettingsQuad& q);

/// |Tr(B rho)|.
double bell_value(const DensityMatrix& rho, const SettingsQuad& q);

/// Real Pauli correlation tensor T_ij = Tr(rho sigma_i x sigma_j), row-major 3x3.
using CorrelationTensor = std::array<double, 9>;
CorrelationTensor correlation_tensor(const DensityMatrix& rho);

/// T as a 3x3 ComplexMatrix with zero imaginary parts.
ComplexMatrix correlation_matrix(const DensityMatrix& rho);

/// |Tr(B rho)| evaluated through the correlation tensor: |a.T(b + b') + a'.T(b - b')|.
double bell_value_from_tensor(const CorrelationTensor& t, const SettingsQuad& q);

/// Closed-form CHSH maximum 2 sqrt(m1 + m2), m1 >= m2 the two largest eigenvalues of T^T T.
double horodecki_max(const DensityMatrix& rho);

struct BellOptimizerOptions {
  std::size_t starts = 50;
  NelderMeadOptions local{0.5, 1e-10, 2000};
};

/// Multistart maximization of bell_value over the eight angles. Each start draws
/// theta ~ U[0, pi], phi ~ U[0, 2 pi) for all four directions and is refined by
/// Nelder-Mead. The first start reaching the best value wins ties. oracle_value is
/// filled with horodecki_max(rho).
BellResult optimize_bell(const DensityMatrix& rho, std::size_t starts, RngStream rng);
BellResult optimize_bell(const DensityMatrix& rho, RngStream rng, const BellOptimizerOptions& options);

}  // namespace chshfid
