#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "chshfid/linalg.hpp"
#include "chshfid/rng.hpp"

namespace chshfid {

enum class EnsembleKind { Filtered, HilbertSchmidt, Bures };

std::string_view to_string(EnsembleKind kind) noexcept;
/// Accepts the CLI spellings "filtered", "hs" and "bures".
std::optional<EnsembleKind> parse_ensemble(std::string_view name) noexcept;

/// n x n matrix of independent entries with standard normal real and imaginary parts.
ComplexMatrix ginibre(std::size_t n, RngStream& rng);

/// Haar-distributed unitary: Householder QR of a Ginibre matrix, with column j of Q
/// multiplied by R_jj / |R_jj| so that the factorization has a positive R diagonal.
ComplexMatrix haar_unitary(std::size_t n, RngStream& rng);

/// rho = U^R (U^R)^dagger / 4 for a Haar 4x4 unitary U. Both marginals are I/2.
DensityMatrix filtered_state(RngStream& rng);

/// Eigenvalues of U^R (U^R)^dagger / 4: the squared operator-Schmidt coefficients of U.
Spectrum operator_schmidt_spectrum(const ComplexMatrix& u, const Tolerances& tol = kDefaultTolerances);

/// G G^dagger / Tr(G G^dagger), G 4x4 Ginibre.
DensityMatrix hs_state(RngStream& rng);

/// (I + U) G G^dagger (I + U)^dagger, normalized; U Haar, G Ginibre (both 4x4).
DensityMatrix bures_state(RngStream& rng);

DensityMatrix sample_state(EnsembleKind kind, RngStream& rng);

struct FilterOptions {
  double tol = 1e-10;
  std::size_t max_iter = 1000;
};

struct FilterResult {
  DensityMatrix state;
  std::size_t iterations;
  double residual;  // max-entry deviation of both marginals from I/2
  std::vector<double> history;  // residual before the first step and after each step
};

/// Alternating local filtering (F_A x F_B) rho (F_A x F_B)^dagger with F = (2 rho_X)^{-1/2}
/// until both marginals are within tol of I/2.
/// Throws SingularMarginal for rank-deficient input, NotConverged after max_iter steps.
FilterResult filter_normal_form_detailed(const DensityMatrix& rho, const FilterOptions& options = {});

DensityMatrix filter_normal_form(const DensityMatrix& rho, double tol = 1e-10, std::size_t max_iter = 1000);

/// max |marginal - I/2| over both subsystems.
double marginal_residual(const DensityMatrix& rho);

}  // namespace chshfid
