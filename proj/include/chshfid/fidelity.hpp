#pragma once

#include "chshfid/linalg.hpp"

namespace chshfid {

struct FidelityRecord {
  double fidelity = 0.0;
  double bures_distance = 0.0;
  double trace_distance = 0.0;
};

/// Uhlmann fidelity against a fixed first argument. Caches sqrt(rho1), which
/// dominates the cost when one target is compared with many states.
class FidelityReference {
 public:
  explicit FidelityReference(const DensityMatrix& rho1);

  /// (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2 before clamping to [0, 1].
  double raw(const DensityMatrix& rho2) const;

  /// raw() clamped to [0, 1]. Throws BoundViolation if raw() leaves [-1e-10, 1 + 1e-10].
  double operator()(const DensityMatrix& rho2) const;

  const DensityMatrix& reference() const noexcept { return rho1_; }

 private:
  DensityMatrix rho1_;
  ComplexMatrix sqrt_rho1_;
};

double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// sqrt(2 (1 - sqrt F)).
double bures_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);
double bures_distance_from_fidelity(double fidelity);

/// ||rho1 - rho2||_1 / 2.
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// Fills all three quantities and checks 1 - sqrt F <= D_tr <= sqrt(1 - F) with
/// slack; throws BoundViolation when the sandwich fails.
FidelityRecord check_fvg(const DensityMatrix& rho1, const DensityMatrix& rho2, double slack = 1e-9);

}  // namespace chshfid
