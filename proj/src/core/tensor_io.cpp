#include "kahler/tensor_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kahler/error.hpp"

namespace kahler {

namespace {

std::string format_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

}  // namespace

std::string write_tensor(const CurvatureTensor& r, double symmetry_tolerance) {
  std::string out = "{\n";
  out += "  \"format_version\": " + std::to_string(kTensorFormatVersion) + ",\n";
  out += "  \"n\": " + std::to_string(r.space().n()) + ",\n";
  out += std::string("  \"layout\": \"") + kTensorLayout + "\",\n";
  out += "  \"symmetry_tolerance\": " + format_double(symmetry_tolerance) + ",\n";
  out += "  \"entries\": [";
  const auto entries = r.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i % 8 == 0) out += "\n    ";
    out += format_double(entries[i]);
    if (i + 1 < entries.size()) out += ", ";
  }
  out += "\n  ]\n}\n";
  return out;
}

TensorFile read_tensor(const std::string& text) {
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("tensor file is not valid JSON: ") + e.what());
  }
  int version = 0;
  int n = 0;
  std::string layout;
  std::vector<double> entries;
  double tolerance = kSymmetryTolerance;
  try {
    version = json.at("format_version").get<int>();
    n = json.at("n").get<int>();
    layout = json.at("layout").get<std::string>();
    entries = json.at("entries").get<std::vector<double>>();
    tolerance = json.at("symmetry_tolerance").get<double>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("tensor file is missing a field: ") + e.what());
  }
  if (version != kTensorFormatVersion)
    fail(ErrorCode::Parse, "unsupported tensor format_version " + std::to_string(version));
  if (layout != kTensorLayout) fail(ErrorCode::Parse, "unsupported tensor layout '" + layout + "'");
  const HermitianSpace space = make_space(n);
  const std::size_t expected = static_cast<std::size_t>(space.dim()) * space.dim() *
                               space.dim() * space.dim();
  if (entries.size() != expected)
    fail(ErrorCode::Parse, "tensor file has " + std::to_string(entries.size()) +
                               " entries, expected " + std::to_string(expected));
  if (!(tolerance >= 0.0)) fail(ErrorCode::Parse, "symmetry_tolerance must be >= 0");
  return {CurvatureTensor(space, std::move(entries)), tolerance};
}

void save_tensor(const std::string& path, const CurvatureTensor& r, double symmetry_tolerance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << write_tensor(r, symmetry_tolerance);
  if (!out) fail(ErrorCode::Io, "failed writing '" + path + "'");
}

TensorFile load_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return read_tensor(buffer.str());
}

}  // namespace kahler
