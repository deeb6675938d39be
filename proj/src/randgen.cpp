#include "chshfid/randgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chshfid {

std::string_view to_string(EnsembleKind kind) noexcept {
  switch (kind) {
    case EnsembleKind::Filtered: return "filtered";
    case EnsembleKind::HilbertSchmidt: return "hs";
    case EnsembleKind::Bures: return "bures";
  }
  return "unknown";
}

std::optional<EnsembleKind> parse_ensemble(std::string_view name) noexcept {
  if (name == "filtered") return EnsembleKind::Filtered;
  if (name == "hs") return EnsembleKind::HilbertSchmidt;
  if (name == "bures") return EnsembleKind::Bures;
  return std::nullopt;
}

namespace {

void require_generator_size(std::size_t n) {
  if (n != 2 && n != 4) throw Error(ErrorCode::BadDimension, "generators support n = 2 or 4, got " + std::to_string(n));
}

DensityMatrix normalized_gram(const ComplexMatrix& g) {
  ComplexMatrix w = mul_adj(g, g);
  w *= cplx(1.0 / w.trace().real());
  return DensityMatrix::trusted(w);
}

}  // namespace

ComplexMatrix ginibre(std::size_t n, RngStream& rng) {
  require_generator_size(n);
  ComplexMatrix g(n, n);
  for (cplx& z : g.entries()) {
    const double re = rng.normal();
    const double im = rng.normal();
    z = {re, im};
  }
  return g;
}

ComplexMatrix haar_unitary(std::size_t n, RngStream& rng) {
  ComplexMatrix r = ginibre(n, rng);
  ComplexMatrix q = ComplexMatrix::identity(n);
  std::array<cplx, ComplexMatrix::kMaxDim> diag{};

  for (std::size_t k = 0; k < n; ++k) {
    double norm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) norm2 += std::norm(r(i, k));
    const double norm = std::sqrt(norm2);
    const cplx x0 = r(k, k);
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0);
    const cplx alpha = -phase * norm;  // R_kk after reflection

    // v = x - alpha e_k; H = I - 2 v v^dagger / (v^dagger v)
    std::array<cplx, ComplexMatrix::kMaxDim> v{};
    for (std::size_t i = k; i < n; ++i) v[i] = r(i, k);
    v[k] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) vnorm2 += std::norm(v[i]);

    if (vnorm2 > 0.0) {
      const double beta = 2.0 / vnorm2;
      for (std::size_t j = k; j < n; ++j) {  // R <- H R
        cplx dot = 0.0;
        for (std::size_t i = k; i < n; ++i) dot += std::conj(v[i]) * r(i, j);
        dot *= beta;
        for (std::size_t i = k; i < n; ++i) r(i, j) -= v[i] * dot;
      }
      for (std::size_t i = 0; i < n; ++i) {  // Q <- Q H
        cplx dot = 0.0;
        for (std::size_t l = k; l < n; ++l) dot += q(i, l) * v[l];
        dot *= beta;
        for (std::size_t l = k; l < n; ++l) q(i, l) -= dot * std::conj(v[l]);
      }
    }
    diag[k] = r(k, k);
  }

  for (std::size_t j = 0; j < n; ++j) {
    const double mag = std::abs(diag[j]);
    const cplx lambda = mag > 0.0 ? diag[j] / mag : cplx(1.0);
    for (std::size_t i = 0; i < n; ++i) q(i, j) *= lambda;
  }
  return q;
}

DensityMatrix filtered_state(RngStream& rng) {
  const ComplexMatrix ur = realign(haar_unitary(4, rng));
  ComplexMatrix rho = mul_adj(ur, ur);
  rho *= cplx(0.25);
  return DensityMatrix::trusted(rho);
}

Spectrum operator_schmidt_spectrum(const ComplexMatrix& u, const Tolerances& tol) {
  if (u.rows() != 4 || u.cols() != 4) throw Error(ErrorCode::BadDimension, "operator Schmidt spectrum needs 4x4");
  if (unitarity_defect(u) > tol.unitary) throw Error(ErrorCode::NotUnitary, "input is not unitary");
  const ComplexMatrix ur = realign(u);
  ComplexMatrix w = mul_adj(ur, ur);
  w *= cplx(0.25);
  return herm_eig(w, tol);
}

DensityMatrix hs_state(RngStream& rng) { return normalized_gram(ginibre(4, rng)); }

DensityMatrix bures_state(RngStream& rng) {
  const ComplexMatrix g = ginibre(4, rng);
  const ComplexMatrix u = haar_unitary(4, rng);
  return normalized_gram((ComplexMatrix::identity(4) + u) * g);
}

DensityMatrix sample_state(EnsembleKind kind, RngStream& rng) {
  switch (kind) {
    case EnsembleKind::Filtered: return filtered_state(rng);
    case EnsembleKind::HilbertSchmidt: return hs_state(rng);
    case EnsembleKind::Bures: return bures_state(rng);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown ensemble kind");
}

double marginal_residual(const DensityMatrix& rho) {
  const ComplexMatrix half = ComplexMatrix::identity(2) * cplx(0.5);
  return std::max(max_abs_diff(partial_trace(rho, Subsystem::A).mat(), half),
                  max_abs_diff(partial_trace(rho, Subsystem::B).mat(), half));
}

namespace {

// (2 * marginal)^{-1/2}
ComplexMatrix local_filter(const ComplexMatrix& marginal) {
  const Spectrum spec = herm_eig(marginal);
  if (spec.values[0] <= 1e-12) throw Error(ErrorCode::SingularMarginal, "marginal is rank deficient");
  ComplexMatrix scaled = spec.vectors;
  for (std::size_t k = 0; k < 2; ++k) {
    const double f = 1.0 / std::sqrt(2.0 * spec.values[k]);
    for (std::size_t r = 0; r < 2; ++r) scaled(r, k) *= f;
  }
  return mul_adj(scaled, spec.vectors);
}

ComplexMatrix apply_local(const ComplexMatrix& rho, const ComplexMatrix& op) {
  ComplexMatrix next = op * mul_adj(rho, op);  // op rho op^dagger (rho Hermitian)
  next = (next + next.adjoint()) * cplx(0.5);
  next *= cplx(1.0 / next.trace().real());
  return next;
}

}  // namespace

FilterResult filter_normal_form_detailed(const DensityMatrix& rho, const FilterOptions& options) {
  if (rho.dim() != 4) throw Error(ErrorCode::BadDimension, "filtering needs a two-qubit state");
  if (herm_eigvals(rho.mat())[0] <= 1e-9) throw Error(ErrorCode::SingularMarginal, "input state is not full rank");

  const ComplexMatrix id2 = ComplexMatrix::identity(2);
  ComplexMatrix current = rho.mat();
  double residual = marginal_residual(rho);
  std::vector<double> history{residual};
  std::size_t iter = 0;
  while (residual > options.tol) {
    if (iter == options.max_iter) {
      throw Error(ErrorCode::NotConverged, "marginal residual " + std::to_string(residual) + " after " +
                                               std::to_string(iter) + " iterations");
    }
    const ComplexMatrix fa = local_filter(partial_trace(DensityMatrix::trusted(current), Subsystem::A).mat());
    current = apply_local(current, kron(fa, id2));
    const ComplexMatrix fb = local_filter(partial_trace(DensityMatrix::trusted(current), Subsystem::B).mat());
    current = apply_local(current, kron(id2, fb));
    residual = marginal_residual(DensityMatrix::trusted(current));
    history.push_back(residual);
    ++iter;
  }
  return {DensityMatrix::trusted(current), iter, residual, std::move(history)};
}

DensityMatrix filter_normal_form(const DensityMatrix& rho, double tol, std::size_t max_iter) {
  return filter_normal_form_detailed(rho, FilterOptions{tol, max_iter}).state;
}

}  // namespace chshfid
