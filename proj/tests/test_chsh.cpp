#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "chshfid/chsh.hpp"
#include "chshfid/experiments.hpp"
#include "helpers.hpp"

using namespace chshfid;
using std::numbers::pi;

namespace {

const ComplexMatrix kSigmaX(2, 2, {0.0, 1.0, 1.0, 0.0});
const ComplexMatrix kSigmaY(2, 2, {0.0, cplx(0, -1), cplx(0, 1), 0.0});
const ComplexMatrix kSigmaZ(2, 2, {1.0, 0.0, 0.0, -1.0});

SettingsQuad tsirelson_settings() {
  return {MeasurementSetting::make(0.0, 0.0), MeasurementSetting::make(pi / 2, 0.0),
          MeasurementSetting::make(pi / 4, 0.0), MeasurementSetting::make(3 * pi / 4, 0.0)};
}

// b + b' along z and b - b' along x, the optimum for |Phi+>.
SettingsQuad phi_plus_settings() {
  return {MeasurementSetting::make(0.0, 0.0), MeasurementSetting::make(pi / 2, 0.0),
          MeasurementSetting::make(pi / 4, 0.0), MeasurementSetting::make(-pi / 4, 0.0)};
}

SettingsQuad random_settings(RngStream& rng) {
  std::array<double, 8> x;
  for (std::size_t k = 0; k < 8; k += 2) {
    x[k] = rng.uniform(0.0, pi);
    x[k + 1] = rng.uniform(0.0, 2 * pi);
  }
  return SettingsQuad::from_angles(x);
}

DensityMatrix werner(double p) {
  return DensityMatrix::validated(testing::phi_plus().mat() * cplx(p) +
                                  ComplexMatrix::identity(4) * cplx((1.0 - p) / 4.0));
}

}  // namespace

TEST_CASE("observable") {
  CHECK(max_abs_diff(observable(MeasurementSetting::make(0, 0)), kSigmaZ) < 1e-15);
  CHECK(max_abs_diff(observable(MeasurementSetting::make(pi / 2, 0)), kSigmaX) < 1e-15);
  CHECK(max_abs_diff(observable(MeasurementSetting::make(pi / 2, pi / 2)), kSigmaY) < 1e-15);

  RngStream rng(51, 0);
  for (int t = 0; t < 100; ++t) {
    const auto s = MeasurementSetting::make(rng.uniform(0, pi), rng.uniform(0, 2 * pi));
    const ComplexMatrix o = observable(s);
    CHECK(is_hermitian(o, 0.0));
    CHECK(std::abs(o.trace()) < 1e-15);
    const Spectrum e = herm_eig(o);
    CHECK(std::abs(e.values[0] + 1.0) <= 1e-12);
    CHECK(std::abs(e.values[1] - 1.0) <= 1e-12);
  }
}

TEST_CASE("MeasurementSetting folding keeps the direction") {
  RngStream rng(52, 0);
  for (int t = 0; t < 200; ++t) {
    const double th = rng.uniform(-20, 20), ph = rng.uniform(-20, 20);
    const auto s = MeasurementSetting::make(th, ph);
    CHECK(s.theta >= 0.0);
    CHECK(s.theta <= pi);
    CHECK(s.phi >= 0.0);
    CHECK(s.phi < 2 * pi);
    const auto d = s.direction();
    CHECK(std::abs(d[0] - std::sin(th) * std::cos(ph)) < 1e-12);
    CHECK(std::abs(d[1] - std::sin(th) * std::sin(ph)) < 1e-12);
    CHECK(std::abs(d[2] - std::cos(th)) < 1e-12);
  }
  CHECK_THROWS_AS(MeasurementSetting::make(NAN, 0.0), Error);
  CHECK_THROWS_AS(MeasurementSetting::make(0.0, INFINITY), Error);
}

TEST_CASE("SettingsQuad angle order") {
  const std::array<double, 8> x{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  const SettingsQuad q = SettingsQuad::from_angles(x);
  CHECK(q.a.theta == 0.1);
  CHECK(q.b.theta == 0.3);
  CHECK(q.a_prime.theta == 0.5);
  CHECK(q.b_prime.phi == 0.8);
  CHECK(q.to_angles() == x);
}

TEST_CASE("born_probabilities") {
  RngStream rng(53, 0);
  const ProbabilityTable mixed = born_probabilities(DensityMatrix::maximally_mixed(4), random_settings(rng));
  for (int a : {-1, 1})
    for (int b : {-1, 1})
      for (int x : {1, 2})
        for (int y : {1, 2}) CHECK(std::abs(mixed(a, b, x, y) - 0.25) < 1e-15);

  const SettingsQuad zz{MeasurementSetting::make(0, 0), MeasurementSetting::make(pi / 2, 0),
                        MeasurementSetting::make(0, 0), MeasurementSetting::make(pi / 2, 0)};
  const ProbabilityTable bell = born_probabilities(testing::phi_plus(), zz);
  CHECK(std::abs(bell(1, 1, 1, 1) - 0.5) < 1e-15);
  CHECK(std::abs(bell(-1, -1, 1, 1) - 0.5) < 1e-15);
  CHECK(std::abs(bell(1, -1, 1, 1)) < 1e-15);
  CHECK(std::abs(bell(-1, 1, 1, 1)) < 1e-15);

  for (int t = 0; t < 100; ++t) {
    const DensityMatrix rho = hs_state(rng);
    const SettingsQuad q = random_settings(rng);
    const ProbabilityTable p = born_probabilities(rho, q);
    const MeasurementSetting* alice[] = {&q.a, &q.a_prime};
    const MeasurementSetting* bob[] = {&q.b, &q.b_prime};
    for (int x : {1, 2}) {
      for (int y : {1, 2}) {
        double sum = 0.0, corr = 0.0;
        for (int a : {-1, 1}) {
          for (int b : {-1, 1}) {
            CHECK(p(a, b, x, y) >= -1e-12);
            CHECK(p(a, b, x, y) <= 1 + 1e-12);
            sum += p(a, b, x, y);
            corr += a * b * p(a, b, x, y);
          }
        }
        CHECK(std::abs(sum - 1.0) <= 1e-10);
        CHECK(std::abs(corr - correlation(rho, *alice[x - 1], *bob[y - 1])) <= 1e-10);
      }
    }
  }
  CHECK_THROWS_AS((void)mixed(0, 1, 1, 1), Error);
}

TEST_CASE("correlation") {
  const auto z = MeasurementSetting::make(0, 0);
  CHECK(correlation(testing::phi_plus(), z, z) == doctest::Approx(1.0).epsilon(1e-15));
  RngStream rng(54, 0);
  for (int t = 0; t < 20; ++t) {
    const auto q = random_settings(rng);
    CHECK(std::abs(correlation(DensityMatrix::maximally_mixed(4), q.a, q.b)) < 1e-15);
  }
  CHECK_THROWS_AS(correlation(DensityMatrix::maximally_mixed(2), z, z), Error);
}

TEST_CASE("bell_operator") {
  const Spectrum canonical = herm_eig(bell_operator(tsirelson_settings()));
  CHECK(std::abs(canonical.values[0] + kTsirelsonBound) < 1e-12);
  CHECK(std::abs(canonical.values[3] - kTsirelsonBound) < 1e-12);

  RngStream rng(55, 0);
  for (int t = 0; t < 100; ++t) {
    SettingsQuad q = random_settings(rng);
    const ComplexMatrix b = bell_operator(q);
    CHECK(max_abs_diff(b, b.adjoint()) <= 1e-12);
    const Spectrum s = herm_eig(b);
    CHECK(s.values[0] >= -kTsirelsonBound - 1e-10);
    CHECK(s.values[3] <= kTsirelsonBound + 1e-10);

    q.b_prime = q.b;
    const ComplexMatrix same = bell_operator(q);
    CHECK(max_abs_diff(same, kron(observable(q.a), observable(q.b)) * cplx(2.0)) < 1e-14);
    const Spectrum s2 = herm_eig(same);
    CHECK(std::abs(s2.values[0] + 2.0) < 1e-12);
    CHECK(std::abs(s2.values[3] - 2.0) < 1e-12);
  }
}

TEST_CASE("bell_value") {
  const TargetState target = TargetState::builtin();
  CHECK(std::abs(bell_value(target.rho, target.settings) - 2.733) <= 5e-3);

  RngStream rng(56, 0);
  CHECK(bell_value(DensityMatrix::maximally_mixed(4), random_settings(rng)) < 1e-15);
  CHECK(std::abs(bell_value(testing::phi_plus(), phi_plus_settings()) - kTsirelsonBound) <= 1e-10);
  CHECK(bell_value(testing::phi_plus(), tsirelson_settings()) < 1e-15);

  for (int t = 0; t < 200; ++t) {
    const DensityMatrix rho = t % 2 ? filtered_state(rng) : hs_state(rng);
    const SettingsQuad q = random_settings(rng);
    const double v = bell_value(rho, q);
    const double combo = correlation(rho, q.a, q.b) + correlation(rho, q.a, q.b_prime) +
                         correlation(rho, q.a_prime, q.b) - correlation(rho, q.a_prime, q.b_prime);
    CHECK(std::abs(v - std::abs(combo)) <= 1e-10);
    CHECK(std::abs(v - bell_value_from_tensor(correlation_tensor(rho), q)) <= 1e-10);
    CHECK(v <= horodecki_max(rho) + 1e-6);
  }
}

TEST_CASE("correlation_matrix") {
  const ComplexMatrix t = correlation_matrix(testing::phi_plus());
  const double d[] = {1.0, -1.0, 1.0};
  CHECK(max_abs_diff(t, ComplexMatrix::diagonal(d)) < 1e-15);
  CHECK(max_abs_diff(correlation_matrix(DensityMatrix::maximally_mixed(4)), ComplexMatrix(3, 3)) < 1e-15);

  RngStream rng(57, 0);
  for (int k = 0; k < 20; ++k) {
    const DensityMatrix ra = testing::random_qubit_state(rng), rb = testing::random_qubit_state(rng);
    const ComplexMatrix tp = correlation_matrix(DensityMatrix::validated(kron(ra.mat(), rb.mat())));
    const auto s = herm_eigvals(tp * tp.adjoint());
    CHECK(std::abs(s[0]) < 1e-12);  // rank one
    CHECK(std::abs(s[1]) < 1e-12);
    const ComplexMatrix tr = correlation_matrix(hs_state(rng));
    for (const cplx& z : tr.entries()) {
      CHECK(z.imag() == 0.0);
      CHECK(std::abs(z.real()) <= 1.0);
    }
  }
}

TEST_CASE("horodecki_max") {
  CHECK(std::abs(horodecki_max(testing::phi_plus()) - kTsirelsonBound) < 1e-12);
  CHECK(horodecki_max(DensityMatrix::maximally_mixed(4)) < 1e-15);
  CHECK(std::abs(horodecki_max(werner(0.5)) - std::sqrt(2.0)) < 1e-12);

  RngStream rng(58, 0);
  for (int t = 0; t < 200; ++t) {
    const DensityMatrix rho = t % 2 ? filtered_state(rng) : bures_state(rng);
    const double h = horodecki_max(rho);
    CHECK(h <= kTsirelsonBound + 1e-10);
    for (int k = 0; k < 100; ++k) CHECK(h >= bell_value(rho, random_settings(rng)) - 1e-12);

    const ComplexMatrix u = kron(haar_unitary(2, rng), haar_unitary(2, rng));
    CHECK(std::abs(horodecki_max(testing::conjugate(rho, u)) - h) <= 1e-9);
  }
}

TEST_CASE("Werner p = 0.5 by grid search over the x-z plane") {
  // Independent of the closed form: exhaustive search on a 64-step angle grid that
  // contains the optimal settings.
  const DensityMatrix rho = werner(0.5);
  const CorrelationTensor t = correlation_tensor(rho);
  const int steps = 64;
  std::vector<std::array<double, 3>> dirs;
  for (int k = 0; k < steps; ++k) {
    const double a = 2 * pi * k / steps;
    dirs.push_back({std::sin(a), 0.0, std::cos(a)});
  }
  auto tv = [&](const std::array<double, 3>& u, const std::array<double, 3>& v) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += u[i] * t[3 * i + j] * v[j];
    return s;
  };
  double best = 0.0;
  for (const auto& b : dirs) {
    for (const auto& bp : dirs) {
      const std::array<double, 3> sum{b[0] + bp[0], 0.0, b[2] + bp[2]};
      const std::array<double, 3> diff{b[0] - bp[0], 0.0, b[2] - bp[2]};
      for (const auto& a : dirs) {
        const double first = tv(a, sum);
        for (const auto& ap : dirs) best = std::max(best, std::abs(first + tv(ap, diff)));
      }
    }
  }
  CHECK(std::abs(best - std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(best - horodecki_max(rho)) < 1e-12);
}

TEST_CASE("optimize_bell") {
  const BellResult mixed = optimize_bell(DensityMatrix::maximally_mixed(4), 10, RngStream(59, 0));
  CHECK(mixed.value <= 1e-8);

  const BellResult phi = optimize_bell(testing::phi_plus(), 50, RngStream(59, 1));
  CHECK(std::abs(phi.value - kTsirelsonBound) <= 1e-6);
  REQUIRE(phi.oracle_value.has_value());
  CHECK(std::abs(*phi.oracle_value - kTsirelsonBound) < 1e-12);
  CHECK(std::abs(bell_value(testing::phi_plus(), phi.settings) - phi.value) < 1e-12);
  CHECK(phi.classical_bound == 2.0);
  CHECK(phi.quantum_bound == kTsirelsonBound);
  CHECK(phi.evaluations > 0);

  for (std::uint64_t i = 0; i < 40; ++i) {
    RngStream rng(60, i);
    const DensityMatrix rho = filtered_state(rng);
    const BellResult r = optimize_bell(rho, 50, rng.substream(kOptimizerSalt));
    CHECK(std::abs(r.value - *r.oracle_value) <= 1e-5);
    CHECK(r.value <= *r.oracle_value + 1e-6);
    CHECK(r.value >= 0.0);
  }

  // Same stream, same answer.
  const DensityMatrix rho = TargetState::builtin().rho;
  const BellResult r1 = optimize_bell(rho, 5, RngStream(61, 0));
  const BellResult r2 = optimize_bell(rho, 5, RngStream(61, 0));
  CHECK(r1.value == r2.value);
  CHECK(r1.settings.to_angles() == r2.settings.to_angles());

  CHECK_THROWS_AS(optimize_bell(rho, 0, RngStream(61, 0)), Error);
}
