#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "chshfid/randgen.hpp"
#include "chshfid/stats.hpp"
#include "helpers.hpp"

using namespace chshfid;

namespace {

cplx determinant(ComplexMatrix m) {
  const std::size_t n = m.rows();
  cplx det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      det = -det;
    }
    det *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

// U is normal, so the eigenvectors of its Hermitian part diagonalize it (distinct
// eigenvalues almost surely).
std::vector<double> eigenphases(const ComplexMatrix& u) {
  const Spectrum s = herm_eig((u + u.adjoint()) * cplx(0.5));
  std::vector<double> phases;
  for (std::size_t k = 0; k < u.rows(); ++k) {
    cplx z = 0.0;
    for (std::size_t i = 0; i < u.rows(); ++i)
      for (std::size_t j = 0; j < u.rows(); ++j) z += std::conj(s.vectors(i, k)) * u(i, j) * s.vectors(j, k);
    phases.push_back(std::arg(z));
  }
  return phases;
}

double purity(const DensityMatrix& rho) { return frobenius_re(rho.mat(), rho.mat()); }

void check_valid_state(const DensityMatrix& rho) {
  CHECK(std::abs(rho.mat().trace() - 1.0) <= 1e-12);
  CHECK(herm_eigvals(rho.mat())[0] >= -1e-12);
  CHECK(is_hermitian(rho.mat(), 1e-14));
}

}  // namespace

TEST_CASE("ginibre moments") {
  RngStream rng(31, 0);
  const int draws = 100000 / 4;  // 4 entries per 2x2 draw
  double sum_re = 0.0, sum_im = 0.0, sum_re2 = 0.0;
  int count = 0;
  for (int t = 0; t < draws; ++t) {
    const ComplexMatrix g = ginibre(2, rng);
    for (const cplx& z : g.entries()) {
      sum_re += z.real();
      sum_im += z.imag();
      sum_re2 += z.real() * z.real();
      ++count;
    }
  }
  CHECK(std::abs(sum_re / count) < 0.02);
  CHECK(std::abs(sum_im / count) < 0.02);
  CHECK(std::abs(sum_re2 / count - 1.0) < 0.02);

  RngStream a(31, 5), b(31, 5);
  CHECK(ginibre(4, a) == ginibre(4, b));
  CHECK_THROWS_AS(ginibre(3, a), Error);
}

TEST_CASE("haar_unitary is unitary with unit determinant") {
  RngStream rng(32, 0);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = t % 2 ? 4 : 2;
    const ComplexMatrix u = haar_unitary(n, rng);
    CHECK(unitarity_defect(u) <= 1e-12);
    CHECK(std::abs(std::abs(determinant(u)) - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(haar_unitary(3, rng), Error);
}

TEST_CASE("haar_unitary eigenphases are uniform (chi-square, 16 bins)") {
  const int samples = 10000;
  std::vector<double> counts(16, 0.0);
  for (int t = 0; t < samples; ++t) {
    RngStream rng(33, t);
    for (double ph : eigenphases(haar_unitary(4, rng))) {
      auto bin = static_cast<std::size_t>((ph + std::numbers::pi) / (2 * std::numbers::pi) * 16);
      counts[std::min<std::size_t>(bin, 15)] += 1.0;
    }
  }
  const double expected = samples * 4.0 / 16.0;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 37.6973);  // chi-square(15) 0.999 quantile
}

TEST_CASE("haar_unitary |U11|^2 is uniform at n = 2") {
  const std::size_t n = 100000;
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) {
    RngStream rng(34, t);
    x[t] = std::norm(haar_unitary(2, rng)(0, 0));
  }
  CHECK(ks_uniform(x) < ks_critical_999(n));
}

TEST_CASE("filtered_state") {
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    RngStream rng(35, t);
    const DensityMatrix rho = filtered_state(rng);
    check_valid_state(rho);
    worst = std::max(worst, marginal_residual(rho));
  }
  CHECK(worst <= 1e-10);

  // Spectrum equals the operator-Schmidt spectrum of the unitary it was built from.
  for (int t = 0; t < 50; ++t) {
    RngStream a(36, t), b(36, t);
    const ComplexMatrix u = haar_unitary(4, a);
    const auto vals = herm_eigvals(filtered_state(b).mat());
    const Spectrum s = operator_schmidt_spectrum(u);
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(vals[k] - s.values[k]) < 1e-12);
  }
}

TEST_CASE("operator_schmidt_spectrum") {
  const Spectrum id = operator_schmidt_spectrum(ComplexMatrix::identity(4));
  CHECK(std::abs(id.values[0]) < 1e-14);
  CHECK(std::abs(id.values[1]) < 1e-14);
  CHECK(std::abs(id.values[2]) < 1e-14);
  CHECK(std::abs(id.values[3] - 1.0) < 1e-14);

  const ComplexMatrix swap(4, 4, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1});
  for (double v : operator_schmidt_spectrum(swap).eigenvalues()) CHECK(std::abs(v - 0.25) < 1e-14);

  RngStream rng(37, 0);
  for (int t = 0; t < 100; ++t) {
    double sum = 0.0;
    for (double v : operator_schmidt_spectrum(haar_unitary(4, rng)).eigenvalues()) sum += v;
    CHECK(std::abs(sum - 1.0) <= 1e-10);
  }
  CHECK_THROWS_AS(operator_schmidt_spectrum(ComplexMatrix::identity(4) * cplx(2.0)), Error);
}

TEST_CASE("HS and Bures purity") {
  const int n = 100000;
  double hs = 0.0, bures = 0.0;
  for (int t = 0; t < n; ++t) {
    RngStream r1(38, t), r2(39, t);
    const DensityMatrix a = hs_state(r1), b = bures_state(r2);
    if (t < 200) {
      check_valid_state(a);
      check_valid_state(b);
    }
    hs += purity(a);
    bures += purity(b);
  }
  hs /= n;
  bures /= n;
  CHECK(std::abs(hs - 8.0 / 17.0) < 0.005);
  CHECK(bures > hs);

  RngStream a(40, 3), b(40, 3);
  CHECK(hs_state(a).mat() == hs_state(b).mat());
  CHECK(bures_state(a).mat() == bures_state(b).mat());
}

TEST_CASE("ensemble names") {
  CHECK(parse_ensemble("filtered") == EnsembleKind::Filtered);
  CHECK(parse_ensemble("hs") == EnsembleKind::HilbertSchmidt);
  CHECK(parse_ensemble("bures") == EnsembleKind::Bures);
  CHECK_FALSE(parse_ensemble("bogus").has_value());
  for (auto k : {EnsembleKind::Filtered, EnsembleKind::HilbertSchmidt, EnsembleKind::Bures})
    CHECK(parse_ensemble(to_string(k)) == k);
}

TEST_CASE("filter_normal_form") {
  RngStream rng(41, 0);
  const DensityMatrix already = filtered_state(rng);
  const FilterResult fixed = filter_normal_form_detailed(already);
  CHECK(fixed.iterations == 0);
  CHECK(max_abs_diff(fixed.state.mat(), already.mat()) <= 1e-10);

  const double d[] = {0.9, 0.1};
  const ComplexMatrix skewed = kron(ComplexMatrix::diagonal(d), ComplexMatrix::diagonal(d));
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix noise = hs_state(rng).mat();
    const DensityMatrix rho = DensityMatrix::validated(skewed * cplx(0.97) + noise * cplx(0.03));
    const FilterResult r = filter_normal_form_detailed(rho);
    CHECK(r.residual <= 1e-10);
    CHECK(marginal_residual(r.state) <= 1e-10);
    check_valid_state(r.state);
    REQUIRE(r.history.size() == r.iterations + 1);
    for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k] <= r.history[k - 1] + 1e-12);
  }

  const DensityMatrix rho = DensityMatrix::validated(skewed * cplx(0.97) + hs_state(rng).mat() * cplx(0.03));
  CHECK_THROWS_AS(filter_normal_form(rho, 1e-10, 1), Error);
  CHECK_THROWS_AS(filter_normal_form(testing::phi_plus()), Error);
  try {
    filter_normal_form(testing::basis_state(0));
    FAIL("rank-deficient input accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMarginal);
  }
}
