#pragma once

#include <cmath>

#include "chshfid/linalg.hpp"
#include "chshfid/randgen.hpp"
#include "chshfid/rng.hpp"

namespace testing {

using namespace chshfid;

inline ComplexMatrix random_matrix(std::size_t n, RngStream& rng) { return ginibre(n, rng); }

inline ComplexMatrix random_hermitian(std::size_t n, RngStream& rng) {
  const ComplexMatrix g = ginibre(n, rng);
  return (g + g.adjoint()) * cplx(0.5);
}

// G G^dagger, rank-deficient when rank < n.
inline ComplexMatrix random_psd(std::size_t n, RngStream& rng, std::size_t rank = 0) {
  ComplexMatrix g = ginibre(n, rng);
  if (rank != 0)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = rank; j < n; ++j) g(i, j) = 0.0;
  return mul_adj(g, g);
}

inline ComplexMatrix ket(std::initializer_list<cplx> amps) { return ComplexMatrix(amps.size(), 1, amps); }

inline DensityMatrix phi_plus() {
  const double r = 1.0 / std::sqrt(2.0);
  return DensityMatrix::pure(ket({r, 0.0, 0.0, r}));
}

inline DensityMatrix basis_state(std::size_t k) {
  ComplexMatrix v(4, 1);
  v(k, 0) = 1.0;
  return DensityMatrix::pure(v);
}

inline DensityMatrix random_qubit_state(RngStream& rng) {
  const ComplexMatrix p = random_psd(2, rng);
  return DensityMatrix::validated(p * cplx(1.0 / p.trace().real()));
}

inline DensityMatrix conjugate(const DensityMatrix& rho, const ComplexMatrix& u) {
  return DensityMatrix::clamped(mul_adj(u * rho.mat(), u));
}

}  // namespace testing
