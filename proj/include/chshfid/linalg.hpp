#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>

#include "chshfid/error.hpp"

namespace chshfid {

using cplx = std::complex<double>;

/// Numerical thresholds shared by the linear-algebra and state-validation code.
/// Acceptance tests pin these values; change them only together with the tests.
struct Tolerances {
  double hermitian = 1e-10;       // max |M - M^dagger| for a density matrix
  double trace = 1e-10;           // |Tr rho - 1|
  double min_eigenvalue = -1e-10; // smallest admissible eigenvalue of a state
  double psd_clamp = 1e-10;       // eigenvalues in [-psd_clamp, 0) are treated as zero
  double eig_hermitian = 1e-8;    // herm_eig precondition
  double not_psd = 1e-8;          // sqrtm_psd rejects min eigenvalue below -not_psd
  double unitary = 1e-8;          // max |U^dagger U - I|
};

inline constexpr Tolerances kDefaultTolerances{};

/// Dense complex matrix of at most 4x4, stored row-major in a fixed buffer.
///
/// Sizes 1..4 in each dimension are accepted so that kets (4x1) and the
/// 3x3 correlation matrices fit the same type. The first rows*cols entries of
/// the buffer are meaningful; the rest stay zero.
class ComplexMatrix {
 public:
  static constexpr std::size_t kMaxDim = 4;
  static constexpr std::size_t kCapacity = kMaxDim * kMaxDim;

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::initializer_list<cplx> row_major);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return rows_ * cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<cplx> entries() noexcept { return {data_.data(), size()}; }
  std::span<const cplx> entries() const noexcept { return {data_.data(), size()}; }

  // Interleaved (re, im) view of a 4x4 matrix, the layout the SIMD kernels consume.
  std::span<const double, 32> as_doubles4() const;
  std::span<double, 32> as_doubles4();

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  cplx trace() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx scale);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::array<cplx, kCapacity> data_{};
};

/// a * b^dagger.
ComplexMatrix mul_adj(const ComplexMatrix& a, const ComplexMatrix& b);

/// Re Tr(a^dagger b); equals Re Tr(a b) when a is Hermitian.
double frobenius_re(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool is_hermitian(const ComplexMatrix& m, double tol);
double unitarity_defect(const ComplexMatrix& u);  // max |U^dagger U - I|

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
struct Spectrum {
  std::array<double, ComplexMatrix::kMaxDim> values{};
  std::size_t count = 0;
  ComplexMatrix vectors;  // columns are eigenvectors

  std::span<const double> eigenvalues() const noexcept { return {values.data(), count}; }
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

Spectrum herm_eig(const ComplexMatrix& m, const Tolerances& tol = kDefaultTolerances);

/// Eigenvalues only (no eigenvector accumulation); ascending.
std::array<double, ComplexMatrix::kMaxDim> herm_eigvals(const ComplexMatrix& m,
                                                        const Tolerances& tol = kDefaultTolerances);

/// 8 eps max|lambda|: eigenvalues at or below this are roundoff and treated as zero.
double spectral_floor(std::span<const double> eigenvalues) noexcept;

/// Eigenvalues in [-tol.not_psd, spectral_floor] map to zero before the root is taken.
ComplexMatrix sqrtm_psd(const ComplexMatrix& m, const Tolerances& tol = kDefaultTolerances);

ComplexMatrix realign(const ComplexMatrix& m);

double trace_norm(const ComplexMatrix& m);

enum class Subsystem { A, B };

class DensityMatrix;

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep);

/// Unit-trace positive semidefinite Hermitian matrix (2x2 or 4x4).
class DensityMatrix {
 public:
  /// Checks hermiticity, trace and spectrum; throws Error{InvalidState} otherwise.
  static DensityMatrix validated(const ComplexMatrix& m, const Tolerances& tol = kDefaultTolerances);

  /// Hermitizes, clamps eigenvalues in [-tol.psd_clamp, 0) to zero and renormalizes the
  /// trace. Larger violations are still rejected.
  static DensityMatrix clamped(const ComplexMatrix& m, const Tolerances& tol = kDefaultTolerances);

  /// For generators whose construction already guarantees a valid state.
  static DensityMatrix trusted(const ComplexMatrix& m) { return DensityMatrix(m); }

  static DensityMatrix maximally_mixed(std::size_t n);

  /// |psi><psi| from an unnormalized column vector.
  static DensityMatrix pure(const ComplexMatrix& ket);

  const ComplexMatrix& mat() const noexcept { return mat_; }
  std::size_t dim() const noexcept { return mat_.rows(); }

 private:
  explicit DensityMatrix(const ComplexMatrix& m) : mat_(m) {}
  ComplexMatrix mat_;
};

}  // namespace chshfid
