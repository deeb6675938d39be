#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chshfid/experiments.hpp"
#include "chshfid/stats.hpp"

namespace chshfid::report {

/// Raised for unreadable or unwritable files; the CLI maps it to exit code 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 17 significant digits; non-finite values become null.
std::string number(double v);

/// Minimal streaming JSON writer with insertion-ordered keys, so output bytes are a
/// pure function of the values written.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(double v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(std::optional<double> v);
  JsonWriter& null();

  const std::string& str() const noexcept { return out_; }

 private:
  void separator();
  std::string out_;
  std::vector<bool> first_;  // per open container: no element written yet
  bool after_key_ = false;
};

/// Writes the common stats document. `extras` is called inside the "extras" object.
template <class Extras>
std::string stats_json(std::string_view command, std::uint64_t seed, const EnsembleStats& stats,
                       bool has_violation, Extras&& extras);

std::string histogram_csv(const Histogram& h);
std::string scatter_csv(const std::vector<ScatterPoint>& points);

/// Writes to `<path>.tmp` and renames on success, so failed runs leave no partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// {"rho": 4x4 of [re, im], "angles": [8 numbers], "reference_value": optional}.
/// Throws IoError when unreadable, chshfid::Error{InvalidArgument | InvalidState} when malformed.
TargetState load_target(const std::filesystem::path& path);
TargetState parse_target(std::string_view json_text);

// ---------------------------------------------------------------------------

template <class Extras>
std::string stats_json(std::string_view command, std::uint64_t seed, const EnsembleStats& stats,
                       bool has_violation, Extras&& extras) {
  JsonWriter w;
  w.begin_object();
  w.key("command").value(command);
  w.key("seed").value(seed);
  w.key("n").value(static_cast<std::uint64_t>(stats.n));
  const auto m = stats.moments;
  w.key("mean").value(m ? std::optional(m->mean) : std::nullopt);
  w.key("variance").value(m ? std::optional(m->variance) : std::nullopt);
  w.key("skewness").value(m ? std::optional(m->skewness) : std::nullopt);
  w.key("kurtosis").value(m ? std::optional(m->kurtosis) : std::nullopt);
  w.key("p_violation").value(has_violation ? std::optional(stats.p_violation) : std::nullopt);
  w.key("histogram").begin_object();
  w.key("edges").begin_array();
  for (double e : stats.histogram.edges()) w.value(e);
  w.end_array();
  w.key("counts").begin_array();
  for (std::uint64_t c : stats.histogram.counts()) w.value(c);
  w.end_array();
  w.end_object();
  w.key("extras").begin_object();
  extras(w);
  w.end_object();
  w.end_object();
  return w.str() + "\n";
}

}  // namespace chshfid::report
