#pragma once

#include <array>
#include <cstdint>

namespace chshfid {

/// Philox4x32-10 block function (Salmon et al. counter-based generator).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) noexcept;

/// Deterministic random stream identified by (master_seed, stream_index).
///
/// Draw k of the stream is a pure function of (master_seed, stream_index, k): the key
/// is the seed, the counter holds the stream index and the block number. Ensemble
/// sample i uses stream i, so results do not depend on how samples are scheduled.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept;

  std::uint64_t master_seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return index_; }

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes exactly two uniforms per pair of normals.
  double normal() noexcept;

  /// A statistically independent stream for the same index (e.g. optimizer starts
  /// for a sample whose state was drawn from this stream).
  RngStream substream(std::uint64_t salt) const noexcept;

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t index_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace chshfid
