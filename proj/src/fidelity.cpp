#include "chshfid/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chshfid {

namespace {

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "states of dimension " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
}

}  // namespace

FidelityReference::FidelityReference(const DensityMatrix& rho1) : rho1_(rho1), sqrt_rho1_(sqrtm_psd(rho1.mat())) {}

double FidelityReference::raw(const DensityMatrix& rho2) const {
  require_same_dim(rho1_, rho2);
  ComplexMatrix m = sqrt_rho1_ * rho2.mat() * sqrt_rho1_;
  m = (m + m.adjoint()) * cplx(0.5);
  const auto values = herm_eigvals(m);
  const double floor = spectral_floor(std::span(values.data(), m.rows()));
  double root_sum = 0.0;
  for (std::size_t k = 0; k < m.rows(); ++k)
    if (values[k] > floor) root_sum += std::sqrt(values[k]);
  return root_sum * root_sum;
}

double FidelityReference::operator()(const DensityMatrix& rho2) const {
  const double f = raw(rho2);
  if (!(f >= -1e-10 && f <= 1.0 + 1e-10)) {
    throw Error(ErrorCode::BoundViolation, "fidelity " + std::to_string(f) + " outside [0, 1]");
  }
  return std::clamp(f, 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  require_same_dim(rho1, rho2);
  return FidelityReference(rho1)(rho2);
}

double bures_distance_from_fidelity(double f) { return std::sqrt(std::max(2.0 * (1.0 - std::sqrt(f)), 0.0)); }

double bures_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  return bures_distance_from_fidelity(fidelity(rho1, rho2));
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  require_same_dim(rho1, rho2);
  return std::clamp(0.5 * trace_norm(rho1.mat() - rho2.mat()), 0.0, 1.0);
}

FidelityRecord check_fvg(const DensityMatrix& rho1, const DensityMatrix& rho2, double slack) {
  FidelityRecord rec;
  rec.fidelity = fidelity(rho1, rho2);
  rec.bures_distance = bures_distance_from_fidelity(rec.fidelity);
  rec.trace_distance = trace_distance(rho1, rho2);
  const double lower = 1.0 - std::sqrt(rec.fidelity);
  const double upper = std::sqrt(1.0 - rec.fidelity);
  if (rec.trace_distance < lower - slack || rec.trace_distance > upper + slack) {
    throw Error(ErrorCode::BoundViolation, "trace distance " + std::to_string(rec.trace_distance) +
                                               " outside [" + std::to_string(lower) + ", " + std::to_string(upper) + "]");
  }
  return rec;
}

}  // namespace chshfid
