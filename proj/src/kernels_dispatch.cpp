#include <atomic>
#include <cstdlib>
#include <string_view>

#include "chshfid/error.hpp"
#include "chshfid/kernels.hpp"

namespace chshfid::kernels {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, "scalar", detail::mul4_scalar, detail::mul4_adj_scalar,
                              detail::frobenius_re4_scalar};

#ifdef CHSHFID_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2{Isa::Avx2, "avx2", detail::mul4_avx2, detail::mul4_adj_avx2,
                            detail::frobenius_re4_avx2};
#endif

const KernelTable* initial_table() noexcept {
  if (const char* forced = std::getenv("CHSHFID_ISA"); forced && std::string_view(forced) == "scalar") {
    return &kScalar;
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &kScalar;
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#ifdef CHSHFID_HAVE_AVX2_KERNELS
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
  const KernelTable* table = isa == Isa::Scalar ? &kScalar : avx2_table();
  if (!table) throw Error(ErrorCode::InvalidArgument, "requested kernel ISA is not available on this CPU");
  current().store(table, std::memory_order_release);
}

}  // namespace chshfid::kernels
