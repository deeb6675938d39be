#include "chshfid/chsh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chshfid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const std::array<ComplexMatrix, 3>& paulis() {
  static const std::array<ComplexMatrix, 3> p{
      ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0}),
      ComplexMatrix(2, 2, {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}),
      ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0}),
  };
  return p;
}

const std::array<ComplexMatrix, 9>& pauli_products() {
  static const std::array<ComplexMatrix, 9> products = [] {
    std::array<ComplexMatrix, 9> out;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) out[3 * i + j] = kron(paulis()[i], paulis()[j]);
    return out;
  }();
  return products;
}

using Vec3 = std::array<double, 3>;

Vec3 unit_vector(double theta, double phi) noexcept {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

// u . T v
double bilinear(const CorrelationTensor& t, const Vec3& u, const Vec3& v) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i) s += u[i] * (t[3 * i] * v[0] + t[3 * i + 1] * v[1] + t[3 * i + 2] * v[2]);
  return s;
}

double signed_value_from_angles(const CorrelationTensor& t, const std::array<double, 8>& x) noexcept {
  const Vec3 a = unit_vector(x[0], x[1]);
  const Vec3 b = unit_vector(x[2], x[3]);
  const Vec3 ap = unit_vector(x[4], x[5]);
  const Vec3 bp = unit_vector(x[6], x[7]);
  const Vec3 sum{b[0] + bp[0], b[1] + bp[1], b[2] + bp[2]};
  const Vec3 diff{b[0] - bp[0], b[1] - bp[1], b[2] - bp[2]};
  return bilinear(t, a, sum) + bilinear(t, ap, diff);
}

ComplexMatrix projector(const MeasurementSetting& s, int outcome) {
  ComplexMatrix m = observable(s) * cplx(0.5 * outcome);
  m(0, 0) += 0.5;
  m(1, 1) += 0.5;
  return m;
}

}  // namespace

MeasurementSetting MeasurementSetting::make(double theta, double phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi)) {
    throw Error(ErrorCode::InvalidArgument, "measurement angles must be finite");
  }
  // Fold theta into [0, pi] without changing the direction: theta -> -theta or
  // 2 pi - theta is compensated by phi -> phi + pi.
  theta = std::fmod(theta, kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  if (theta > std::numbers::pi) {
    theta = kTwoPi - theta;
    phi += std::numbers::pi;
  }
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi = 0.0;
  return {std::clamp(theta, 0.0, std::numbers::pi), phi};
}

std::array<double, 3> MeasurementSetting::direction() const noexcept { return unit_vector(theta, phi); }

SettingsQuad SettingsQuad::from_angles(std::span<const double, 8> x) {
  return {MeasurementSetting::make(x[0], x[1]), MeasurementSetting::make(x[4], x[5]),
          MeasurementSetting::make(x[2], x[3]), MeasurementSetting::make(x[6], x[7])};
}

std::array<double, 8> SettingsQuad::to_angles() const noexcept {
  return {a.theta, a.phi, b.theta, b.phi, a_prime.theta, a_prime.phi, b_prime.theta, b_prime.phi};
}

std::size_t ProbabilityTable::index(int a, int b, int x, int y) {
  if ((a != 1 && a != -1) || (b != 1 && b != -1) || (x != 1 && x != 2) || (y != 1 && y != 2)) {
    throw Error(ErrorCode::InvalidArgument, "outcomes are +-1 and settings 1 or 2");
  }
  return static_cast<std::size_t>(((a > 0) << 3) | ((b > 0) << 2) | ((x - 1) << 1) | (y - 1));
}

double ProbabilityTable::operator()(int a, int b, int x, int y) const { return p_[index(a, b, x, y)]; }
double& ProbabilityTable::at(int a, int b, int x, int y) { return p_[index(a, b, x, y)]; }

ComplexMatrix observable(const MeasurementSetting& s) {
  const double c = std::cos(s.theta);
  const double sn = std::sin(s.theta);
  return ComplexMatrix(2, 2, {c, std::polar(sn, -s.phi), std::polar(sn, s.phi), -c});
}

ProbabilityTable born_probabilities(const DensityMatrix& rho, const SettingsQuad& q) {
  if (rho.dim() != 4) throw Error(ErrorCode::BadDimension, "Born probabilities need a two-qubit state");
  const std::array<const MeasurementSetting*, 2> alice{&q.a, &q.a_prime};
  const std::array<const MeasurementSetting*, 2> bob{&q.b, &q.b_prime};
  ProbabilityTable table;
  for (int x = 1; x <= 2; ++x) {
    for (int y = 1; y <= 2; ++y) {
      for (int a : {-1, 1}) {
        const ComplexMatrix pa = projector(*alice[x - 1], a);
        for (int b : {-1, 1}) {
          table.at(a, b, x, y) = frobenius_re(kron(pa, projector(*bob[y - 1], b)), rho.mat());
        }
      }
    }
  }
  return table;
}

double correlation(const DensityMatrix& rho, const MeasurementSetting& sa, const MeasurementSetting& sb) {
  if (rho.dim() != 4) throw Error(ErrorCode::BadDimension, "correlation needs a two-qubit state");
  return frobenius_re(kron(observable(sa), observable(sb)), rho.mat());
}

ComplexMatrix bell_operator(const SettingsQuad& q) {
  const ComplexMatrix b = observable(q.b);
  const ComplexMatrix bp = observable(q.b_prime);
  return kron(observable(q.a), b + bp) + kron(observable(q.a_prime), b - bp);
}

double bell_value_signed(const DensityMatrix& rho, const SettingsQuad& q) {
  if (rho.dim() != 4) throw Error(ErrorCode::BadDimension, "Bell value needs a two-qubit state");
  return frobenius_re(bell_operator(q), rho.mat());
}

double bell_value(const DensityMatrix& rho, const SettingsQuad& q) { return std::abs(bell_value_signed(rho, q)); }

CorrelationTensor correlation_tensor(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw Error(ErrorCode::BadDimension, "correlation tensor needs a two-qubit state");
  CorrelationTensor t{};
  for (std::size_t k = 0; k < 9; ++k) t[k] = frobenius_re(pauli_products()[k], rho.mat());
  return t;
}

ComplexMatrix correlation_matrix(const DensityMatrix& rho) {
  const CorrelationTensor t = correlation_tensor(rho);
  ComplexMatrix m(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = t[3 * i + j];
  return m;
}

double bell_value_from_tensor(const CorrelationTensor& t, const SettingsQuad& q) {
  return std::abs(signed_value_from_angles(t, q.to_angles()));
}

double horodecki_max(const DensityMatrix& rho) {
  const CorrelationTensor t = correlation_tensor(rho);
  ComplexMatrix tt(3, 3);  // T^T T
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += t[3 * k + i] * t[3 * k + j];
      tt(i, j) = s;
    }
  }
  const auto m = herm_eigvals(tt);
  return 2.0 * std::sqrt(std::max(m[1] + m[2], 0.0));
}

BellResult optimize_bell(const DensityMatrix& rho, std::size_t starts, RngStream rng) {
  BellOptimizerOptions options;
  options.starts = starts;
  return optimize_bell(rho, rng, options);
}

BellResult optimize_bell(const DensityMatrix& rho, RngStream rng, const BellOptimizerOptions& options) {
  if (options.starts == 0) throw Error(ErrorCode::InvalidArgument, "optimize_bell needs at least one start");
  const CorrelationTensor t = correlation_tensor(rho);
  auto objective = [&t](const std::array<double, 8>& x) { return -std::abs(signed_value_from_angles(t, x)); };

  BellResult result;
  result.value = -1.0;
  for (std::size_t s = 0; s < options.starts; ++s) {
    std::array<double, 8> x0;
    for (std::size_t k = 0; k < 8; k += 2) {
      x0[k] = rng.uniform(0.0, std::numbers::pi);
      x0[k + 1] = rng.uniform(0.0, kTwoPi);
    }
    const auto local = nelder_mead(objective, x0, options.local);
    result.evaluations += local.evaluations;
    if (-local.value > result.value) {
      result.value = -local.value;
      result.settings = SettingsQuad::from_angles(local.x);
    }
  }
  result.oracle_value = horodecki_max(rho);
  return result;
}

}  // namespace chshfid
