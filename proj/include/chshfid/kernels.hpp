#pragma once

// Inner-loop kernels on 4x4 complex matrices in interleaved (re, im) row-major
// layout. Every variant performs the same floating-point operations in the same
// order (no fused multiply-add), so all variants are bit-identical to the scalar
// reference and the active choice never changes program output.

#include <span>
#include <string_view>

namespace chshfid::kernels {

enum class Isa { Scalar, Avx2 };

using Mat4 = std::span<const double, 32>;
using Mat4Out = std::span<double, 32>;

struct KernelTable {
  Isa isa;
  std::string_view name;
  // out = a * b
  void (*mul4)(Mat4 a, Mat4 b, Mat4Out out);
  // out = a * b^dagger
  void (*mul4_adj)(Mat4 a, Mat4 b, Mat4Out out);
  // sum over all 32 doubles of a[i] * b[i], i.e. Re Tr(a^dagger b)
  double (*frobenius_re4)(Mat4 a, Mat4 b);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the build has no AVX2 variant or the CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;

/// The table used by the library. Chosen once at first use: AVX2 when available,
/// unless the environment variable CHSHFID_ISA=scalar forces the reference path.
const KernelTable& active() noexcept;

/// Overrides the active table; throws Error{InvalidArgument} when the ISA is unavailable.
void select(Isa isa);

namespace detail {
// Scalar building blocks, shared with the equivalence tests.
void mul4_scalar(Mat4 a, Mat4 b, Mat4Out out);
void mul4_adj_scalar(Mat4 a, Mat4 b, Mat4Out out);
double frobenius_re4_scalar(Mat4 a, Mat4 b);
void adjoint4(Mat4 b, Mat4Out out);

#if defined(__x86_64__) || defined(__i386__)
void mul4_avx2(Mat4 a, Mat4 b, Mat4Out out);
void mul4_adj_avx2(Mat4 a, Mat4 b, Mat4Out out);
double frobenius_re4_avx2(Mat4 a, Mat4 b);
#define CHSHFID_HAVE_AVX2_KERNELS 1
#endif
}  // namespace detail

}  // namespace chshfid::kernels
