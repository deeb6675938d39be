#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace chshfid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

struct RunConfig {
  std::uint64_t seed = 1;
  std::uint64_t count = 0;
  std::optional<double> alpha;
  std::uint64_t budget = 10'000'000;
  std::size_t starts = 50;
  std::size_t bins = 40;
  std::string ensemble = "filtered";
  std::string target_path;
  std::string out_json;
  std::string out_csv;
  std::size_t workers = 0;  // 0: all cores
  double target_tol = 0.005;
  double oracle_tol = 1e-5;
};

/// Entry point shared by the executable and the tests. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chshfid::cli
