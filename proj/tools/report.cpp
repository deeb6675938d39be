#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace chshfid::report {

std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void JsonWriter::separator() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!first_.empty()) {
    if (!first_.back()) out_ += ',';
    first_.back() = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separator();
  out_ += '{';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separator();
  out_ += '[';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
  separator();
  out_ += nlohmann::json(std::string(k)).dump();
  out_ += ':';
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separator();
  out_ += number(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separator();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
  separator();
  out_ += nlohmann::json(std::string(v)).dump();
  return *this;
}

JsonWriter& JsonWriter::value(std::optional<double> v) { return v ? value(*v) : null(); }

JsonWriter& JsonWriter::null() {
  separator();
  out_ += "null";
  return *this;
}

std::string histogram_csv(const Histogram& h) {
  std::string out = "bin_left,bin_right,count,density\n";
  const std::vector<double> density = h.density();
  for (std::size_t k = 0; k < h.bins(); ++k) {
    out += number(h.edges()[k]) + ',' + number(h.edges()[k + 1]) + ',' + std::to_string(h.counts()[k]) + ',' +
           number(density[k]) + '\n';
  }
  return out;
}

std::string scatter_csv(const std::vector<ScatterPoint>& points) {
  std::string out = "fidelity,bell_value\n";
  out.reserve(out.size() + points.size() * 40);
  for (const ScatterPoint& p : points) out += number(p.fidelity) + ',' + number(p.bell_value) + '\n';
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.close();
    if (!f) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

TargetState parse_target(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("target JSON: ") + e.what());
  }
  const auto& rho = doc.value("rho", nlohmann::json());
  if (!rho.is_array() || rho.size() != 4) throw Error(ErrorCode::InvalidArgument, "target 'rho' must be 4 rows");
  ComplexMatrix m(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    if (!rho[i].is_array() || rho[i].size() != 4) throw Error(ErrorCode::InvalidArgument, "target row must have 4 entries");
    for (std::size_t j = 0; j < 4; ++j) {
      const auto& z = rho[i][j];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw Error(ErrorCode::InvalidArgument, "target entries are [re, im] pairs");
      }
      m(i, j) = {z[0].get<double>(), z[1].get<double>()};
    }
  }
  const auto& angles = doc.value("angles", nlohmann::json());
  if (!angles.is_array() || angles.size() != 8) throw Error(ErrorCode::InvalidArgument, "target 'angles' needs 8 numbers");
  std::array<double, 8> a{};
  for (std::size_t k = 0; k < 8; ++k) {
    if (!angles[k].is_number()) throw Error(ErrorCode::InvalidArgument, "target angles must be numbers");
    a[k] = angles[k].get<double>();
  }
  TargetState t{DensityMatrix::clamped(m), SettingsQuad::from_angles(a), 0.0};
  if (doc.contains("reference_value") && doc["reference_value"].is_number()) {
    t.reference_value = doc["reference_value"].get<double>();
  } else {
    t.reference_value = bell_value(t.rho, t.settings);
  }
  return t;
}

TargetState load_target(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read target file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_target(ss.str());
}

}  // namespace chshfid::report
