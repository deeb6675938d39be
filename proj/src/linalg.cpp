#include "chshfid/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "chshfid/kernels.hpp"

namespace chshfid {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::SingularMarginal: return "SingularMarginal";
    case ErrorCode::BoundViolation: return "BoundViolation";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

void check_dims(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0 || rows > ComplexMatrix::kMaxDim || cols > ComplexMatrix::kMaxDim) {
    throw Error(ErrorCode::BadDimension,
                "matrix dimensions " + std::to_string(rows) + "x" + std::to_string(cols) + " unsupported");
  }
}

void require_square(const ComplexMatrix& m, const char* op) {
  if (!m.is_square() || m.rows() == 0) throw Error(ErrorCode::BadDimension, std::string(op) + " needs a square matrix");
}

bool is4x4(const ComplexMatrix& m) { return m.rows() == 4 && m.cols() == 4; }

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  check_dims(rows, cols);
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::initializer_list<cplx> row_major)
    : ComplexMatrix(rows, cols) {
  if (row_major.size() != rows * cols) {
    throw Error(ErrorCode::BadDimension, "initializer has " + std::to_string(row_major.size()) + " entries");
  }
  std::copy(row_major.begin(), row_major.end(), data_.begin());
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

std::span<const double, 32> ComplexMatrix::as_doubles4() const {
  if (!is4x4(*this)) throw Error(ErrorCode::BadDimension, "4x4 view of a non-4x4 matrix");
  return std::span<const double, 32>(reinterpret_cast<const double*>(data_.data()), 32);
}

std::span<double, 32> ComplexMatrix::as_doubles4() {
  if (!is4x4(*this)) throw Error(ErrorCode::BadDimension, "4x4 view of a non-4x4 matrix");
  return std::span<double, 32>(reinterpret_cast<double*>(data_.data()), 32);
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

cplx ComplexMatrix::trace() const {
  require_square(*this, "trace");
  cplx t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix sum");
  for (std::size_t k = 0; k < size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix difference");
  for (std::size_t k = 0; k < size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) {
  for (std::size_t k = 0; k < size(); ++k) data_[k] *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product");
  ComplexMatrix out(a.rows(), b.cols());
  if (is4x4(a) && is4x4(b)) {
    kernels::active().mul4(a.as_doubles4(), b.as_doubles4(), out.as_doubles4());
    return out;
  }
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
  return out;
}

bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::equal(a.entries().begin(), a.entries().end(), b.entries().begin());
}

ComplexMatrix mul_adj(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "product with adjoint");
  ComplexMatrix out(a.rows(), b.rows());
  if (is4x4(a) && is4x4(b)) {
    kernels::active().mul4_adj(a.as_doubles4(), b.as_doubles4(), out.as_doubles4());
    return out;
  }
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j)
      for (std::size_t k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * std::conj(b(j, k));
  return out;
}

double frobenius_re(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "inner product");
  if (is4x4(a)) return kernels::active().frobenius_re4(a.as_doubles4(), b.as_doubles4());
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    s += a.entries()[k].real() * b.entries()[k].real() + a.entries()[k].imag() * b.entries()[k].imag();
  }
  return s;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "max_abs_diff");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a.entries()[k] - b.entries()[k]));
  return d;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
  return true;
}

double unitarity_defect(const ComplexMatrix& u) {
  require_square(u, "unitarity_defect");
  return max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.rows()));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// ---------------------------------------------------------------------------
// Hermitian eigensolver: cyclic Jacobi with complex rotations.

namespace {

constexpr int kMaxSweeps = 64;

template <bool WithVectors>
void jacobi(ComplexMatrix& a, ComplexMatrix* v) {
  const std::size_t n = a.rows();
  double scale = 0.0;
  for (const cplx& z : a.entries()) scale += std::norm(z);
  if (scale == 0.0) return;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off <= 1e-34 * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx phase = apq / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane; A <- G^dagger A G.
        const cplx gqp = -s * std::conj(phase);
        const cplx gqq = c * std::conj(phase);
        for (std::size_t r = 0; r < n; ++r) {
          const cplx x = a(r, p);
          const cplx y = a(r, q);
          a(r, p) = c * x + gqp * y;
          a(r, q) = s * x + gqq * y;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const cplx x = a(p, r);
          const cplx y = a(q, r);
          a(p, r) = c * x + std::conj(gqp) * y;
          a(q, r) = s * x + std::conj(gqq) * y;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if constexpr (WithVectors) {
          ComplexMatrix& vm = *v;
          for (std::size_t r = 0; r < n; ++r) {
            const cplx x = vm(r, p);
            const cplx y = vm(r, q);
            vm(r, p) = c * x + gqp * y;
            vm(r, q) = s * x + gqq * y;
          }
        }
      }
    }
  }
}

void check_hermitian_input(const ComplexMatrix& m, const Tolerances& tol) {
  require_square(m, "herm_eig");
  if (!is_hermitian(m, tol.eig_hermitian)) throw Error(ErrorCode::NotHermitian, "herm_eig input is not Hermitian");
}

}  // namespace

Spectrum herm_eig(const ComplexMatrix& m, const Tolerances& tol) {
  check_hermitian_input(m, tol);
  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  ComplexMatrix v = ComplexMatrix::identity(n);
  jacobi<true>(a, &v);

  std::array<std::size_t, ComplexMatrix::kMaxDim> order{};
  std::iota(order.begin(), order.begin() + n, 0);
  std::sort(order.begin(), order.begin() + n, [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  Spectrum out;
  out.count = n;
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

std::array<double, ComplexMatrix::kMaxDim> herm_eigvals(const ComplexMatrix& m, const Tolerances& tol) {
  check_hermitian_input(m, tol);
  ComplexMatrix a = m;
  jacobi<false>(a, nullptr);
  std::array<double, ComplexMatrix::kMaxDim> values{};
  for (std::size_t k = 0; k < m.rows(); ++k) values[k] = a(k, k).real();
  std::sort(values.begin(), values.begin() + m.rows());
  return values;
}

double spectral_floor(std::span<const double> eigenvalues) noexcept {
  double scale = 0.0;
  for (double v : eigenvalues) scale = std::max(scale, std::abs(v));
  return 8.0 * std::numeric_limits<double>::epsilon() * scale;
}

ComplexMatrix sqrtm_psd(const ComplexMatrix& m, const Tolerances& tol) {
  const Spectrum spec = herm_eig(m, tol);
  if (spec.values[0] < -tol.not_psd) {
    throw Error(ErrorCode::NotPSD, "minimum eigenvalue " + std::to_string(spec.values[0]));
  }
  const std::size_t n = spec.count;
  // Eigenvalues below the solver's resolution are zeros; their roots would be ~1e-8.
  const double floor = spectral_floor(spec.eigenvalues());
  ComplexMatrix scaled = spec.vectors;
  for (std::size_t k = 0; k < n; ++k) {
    const double root = spec.values[k] > floor ? std::sqrt(spec.values[k]) : 0.0;
    for (std::size_t r = 0; r < n; ++r) scaled(r, k) *= root;
  }
  return mul_adj(scaled, spec.vectors);
}

ComplexMatrix realign(const ComplexMatrix& m) {
  if (!is4x4(m)) throw Error(ErrorCode::BadDimension, "realign needs a 4x4 matrix");
  // Block (bi, bj) of the input becomes row 2*bi + bj of the output.
  ComplexMatrix out(4, 4);
  for (std::size_t bi = 0; bi < 2; ++bi)
    for (std::size_t bj = 0; bj < 2; ++bj)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) out(2 * bi + bj, 2 * i + j) = m(2 * bi + i, 2 * bj + j);
  return out;
}

double trace_norm(const ComplexMatrix& m) {
  require_square(m, "trace_norm");
  double scale = 0.0;
  for (const cplx& z : m.entries()) scale = std::max(scale, std::abs(z));
  if (is_hermitian(m, 1e-13 * std::max(scale, 1.0))) {
    ComplexMatrix h = m;
    // Symmetrize so that round-off asymmetry does not bias the spectrum.
    h = (h + h.adjoint()) * cplx(0.5);
    const auto values = herm_eigvals(h);
    double s = 0.0;
    for (std::size_t k = 0; k < m.rows(); ++k) s += std::abs(values[k]);
    return s;
  }
  const auto values = herm_eigvals(m.adjoint() * m);
  double s = 0.0;
  for (std::size_t k = 0; k < m.rows(); ++k) s += std::sqrt(std::max(values[k], 0.0));
  return s;
}

// ---------------------------------------------------------------------------
// DensityMatrix

namespace {

void require_state_shape(const ComplexMatrix& m) {
  if (!m.is_square() || (m.rows() != 2 && m.rows() != 4)) {
    throw Error(ErrorCode::BadDimension, "density matrices are 2x2 or 4x4");
  }
}

}  // namespace

DensityMatrix DensityMatrix::validated(const ComplexMatrix& m, const Tolerances& tol) {
  require_state_shape(m);
  if (!is_hermitian(m, tol.hermitian)) throw Error(ErrorCode::InvalidState, "not Hermitian");
  const cplx tr = m.trace();
  if (std::abs(tr - 1.0) > tol.trace) throw Error(ErrorCode::InvalidState, "trace " + std::to_string(tr.real()));
  const auto values = herm_eigvals(m, tol);
  if (values[0] < tol.min_eigenvalue) {
    throw Error(ErrorCode::InvalidState, "minimum eigenvalue " + std::to_string(values[0]));
  }
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::clamped(const ComplexMatrix& m, const Tolerances& tol) {
  require_state_shape(m);
  if (!is_hermitian(m, tol.eig_hermitian)) throw Error(ErrorCode::InvalidState, "not Hermitian");
  ComplexMatrix h = (m + m.adjoint()) * cplx(0.5);
  const Spectrum spec = herm_eig(h, tol);
  if (spec.values[0] < -tol.psd_clamp) {
    throw Error(ErrorCode::InvalidState, "minimum eigenvalue " + std::to_string(spec.values[0]) + " beyond clamp");
  }
  if (spec.values[0] < 0.0) {
    ComplexMatrix scaled = spec.vectors;
    for (std::size_t k = 0; k < spec.count; ++k) {
      const double w = std::max(spec.values[k], 0.0);
      for (std::size_t r = 0; r < spec.count; ++r) scaled(r, k) *= w;
    }
    h = mul_adj(scaled, spec.vectors);
  }
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw Error(ErrorCode::InvalidState, "non-positive trace");
  h *= cplx(1.0 / tr);
  return validated(h, tol);
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n) {
  if (n != 2 && n != 4) throw Error(ErrorCode::BadDimension, "maximally_mixed size");
  return DensityMatrix(ComplexMatrix::identity(n) * cplx(1.0 / static_cast<double>(n)));
}

DensityMatrix DensityMatrix::pure(const ComplexMatrix& ket) {
  if (ket.cols() != 1 || (ket.rows() != 2 && ket.rows() != 4)) {
    throw Error(ErrorCode::BadDimension, "ket must be a 2x1 or 4x1 column");
  }
  ComplexMatrix outer = mul_adj(ket, ket);
  const double norm = outer.trace().real();
  if (!(norm > 0.0)) throw Error(ErrorCode::InvalidState, "zero ket");
  outer *= cplx(1.0 / norm);
  return DensityMatrix(outer);
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  const ComplexMatrix& m = rho.mat();
  if (m.rows() != 4) throw Error(ErrorCode::BadDimension, "partial_trace needs a 4x4 state");
  ComplexMatrix out(2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        out(i, j) += keep == Subsystem::A ? m(2 * i + k, 2 * j + k) : m(2 * k + i, 2 * k + j);
      }
    }
  }
  return DensityMatrix::trusted(out);
}

}  // namespace chshfid
