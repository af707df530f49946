#pragma once

// Field serialization: bare CSV (one line per grid row j, row-major) and the
// field file, a one-line JSON header followed by the CSV body. Values are
// written in shortest round-trip form, so files re-parse bit-identically.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "plimit/error.hpp"
#include "plimit/field.hpp"
#include "plimit/grid.hpp"

namespace plimit {

inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t'))
    s.remove_suffix(1);
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    fail(ErrorKind::io, "malformed number '" + std::string(s) + "'");
  return v;
}

inline void write_csv(std::ostream& os, const Grid& g,
                      const std::vector<double>& values) {
  require(values.size() == g.size(), ErrorKind::invalid_argument,
          "value count does not match grid");
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i) os << ',';
      os << format_double(values[g.index(i, j)]);
    }
    os << '\n';
  }
}

/// Reads a CSV body of ny rows with nx values each.
inline std::vector<double> read_csv(std::istream& is, int nx, int ny) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(nx) * ny);
  std::string line;
  for (int j = 0; j < ny; ++j) {
    if (!std::getline(is, line))
      fail(ErrorKind::io, "field body has fewer rows than the header states");
    std::size_t start = 0;
    int count = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      out.push_back(parse_double(std::string_view(line).substr(
          start, comma == std::string::npos ? std::string::npos : comma - start)));
      ++count;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (count != nx)
      fail(ErrorKind::io, "row " + std::to_string(j) + " has " +
                              std::to_string(count) + " values, expected " +
                              std::to_string(nx));
  }
  return out;
}

inline nlohmann::json grid_json(const Grid& g) {
  return {{"nx", g.nx}, {"ny", g.ny}, {"h", g.h}, {"x0", g.x0}, {"y0", g.y0}};
}

inline void write_field(std::ostream& os, const Grid& g,
                        const std::vector<double>& values,
                        const std::string& kind = "scalar") {
  nlohmann::json header = grid_json(g);
  header["format"] = "plimit-field";
  header["kind"] = kind;
  os << header.dump() << '\n';
  write_csv(os, g, values);
}

struct FieldFile {
  Grid grid;
  std::string kind;
  std::vector<double> values;
};

inline FieldFile read_field(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail(ErrorKind::io, "empty field file");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io, std::string("bad field header: ") + e.what());
  }
  if (header.value("format", "") != "plimit-field")
    fail(ErrorKind::io, "not a plimit field file");
  FieldFile f;
  try {
    f.grid = Grid(header.at("nx").get<int>(), header.at("ny").get<int>(),
                  header.at("h").get<double>(), header.at("x0").get<double>(),
                  header.at("y0").get<double>());
    f.kind = header.value("kind", "scalar");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io, std::string("bad field header: ") + e.what());
  }
  f.values = read_csv(is, f.grid.nx, f.grid.ny);
  return f;
}

inline void save_field(const std::string& path, const ScalarField& f,
                       const std::string& kind = "scalar") {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::io, "cannot write " + path);
  write_field(os, f.grid, f.u, kind);
}

inline void save_mask(const std::string& path, const DomainMask& m) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::io, "cannot write " + path);
  std::vector<double> v(m.values().begin(), m.values().end());
  write_field(os, m.grid(), v, "mask");
}

inline ScalarField load_field(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::io, "cannot read " + path);
  FieldFile f = read_field(is);
  return ScalarField(f.grid, std::move(f.values));
}

}  // namespace plimit
