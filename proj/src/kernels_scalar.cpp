#include "chshfid/kernels.hpp"

namespace chshfid::kernels::detail {

void mul4_scalar(Mat4 a, Mat4 b, Mat4Out out) {
  for (int i = 0; i < 4; ++i) {
    double acc[8];
    for (int k = 0; k < 4; ++k) {
      const double ar = a[2 * (4 * i + k)];
      const double ai = a[2 * (4 * i + k) + 1];
      for (int j = 0; j < 4; ++j) {
        const double br = b[2 * (4 * k + j)];
        const double bi = b[2 * (4 * k + j) + 1];
        const double re = ar * br - ai * bi;
        const double im = ar * bi + ai * br;
        if (k == 0) {
          acc[2 * j] = re;
          acc[2 * j + 1] = im;
        } else {
          acc[2 * j] = acc[2 * j] + re;
          acc[2 * j + 1] = acc[2 * j + 1] + im;
        }
      }
    }
    for (int j = 0; j < 8; ++j) out[8 * i + j] = acc[j];
  }
}

void adjoint4(Mat4 b, Mat4Out out) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out[2 * (4 * j + i)] = b[2 * (4 * i + j)];
      out[2 * (4 * j + i) + 1] = -b[2 * (4 * i + j) + 1];
    }
  }
}

void mul4_adj_scalar(Mat4 a, Mat4 b, Mat4Out out) {
  double bt[32];
  adjoint4(b, Mat4Out(bt));
  mul4_scalar(a, Mat4(bt), out);
}

double frobenius_re4_scalar(Mat4 a, Mat4 b) {
  // Four lane accumulators reduced as (l0 + l2) + (l1 + l3), matching the AVX2 variant.
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < 8; ++i) {
    for (int l = 0; l < 4; ++l) lane[l] = lane[l] + a[4 * i + l] * b[4 * i + l];
  }
  return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

}  // namespace chshfid::kernels::detail
