// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include "limabs/io/writers.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace limabs::io {

namespace {

void write_text(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}
std::string num(int v) { return fmt::format("{}", v); }
std::string num(bool v) { return v ? "true" : "false"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_csv(const CsvTable& t, const std::string& hash) {
  std::string out;
  auto line = [&](const std::vector<std::string>& row, const std::string& last) {
    for (const auto& f : row) out += csv_field(f) + ",";
    out += csv_field(last) + "\r\n";
  };
  line(t.header, "config_sha256");
  for (const auto& r : t.rows) {
    if (r.size() != t.header.size()) throw std::logic_error("csv row width differs from header");
    line(r, hash);
  }
  return out;
}

void write_csv(const std::string& path, const CsvTable& t, const std::string& hash) {
  write_text(path, format_csv(t, hash));
}

std::string format_json(const Json& record, const std::string& hash) {
  Json j;
  j["config_sha256"] = hash;
  for (const auto& [k, v] : record.items()) j[k] = v;
  return j.dump(2) + "\n";
}

void write_json(const std::string& path, const Json& record, const std::string& hash) {
  write_text(path, format_json(record, hash));
}

void write_vtk(const std::string& path, const StaggeredGrid& g, const std::string& hash,
               const std::vector<VtkVectors>& vectors, const std::vector<VtkScalars>& scalars) {
  const int n = g.n();
  std::string out;
  out += "# vtk DataFile Version 3.0\n";
  out += fmt::format("limabs config_sha256={}\n", hash);
  out += "ASCII\nDATASET STRUCTURED_POINTS\n";
  out += fmt::format("DIMENSIONS {} {} {}\n", n + 1, n + 1, n + 1);
  const double lo = -0.5 * g.length();
  out += fmt::format("ORIGIN {} {} {}\nSPACING {} {} {}\n", lo, lo, lo, g.h(), g.h(), g.h());
  out += fmt::format("CELL_DATA {}\n", g.n_cells());
  out += "SCALARS obstacle int 1\nLOOKUP_TABLE default\n";
  for (Id c = 0; c < g.n_cells(); ++c) out += g.masked(c) ? "1\n" : "0\n";
  for (const auto& v : vectors) {
    if (v.values.rows() != g.n_cells()) throw std::logic_error("vtk field size differs from the grid");
    for (int part = 0; part < 2; ++part) {
      out += fmt::format("VECTORS {}_{} double\n", v.name, part == 0 ? "re" : "im");
      for (Id c = 0; c < g.n_cells(); ++c) {
        for (int d = 0; d < 3; ++d) {
          const cplx z = v.values(c, d);
          out += fmt::format("{:.9e}{}", part == 0 ? z.real() : z.imag(), d < 2 ? " " : "\n");
        }
      }
    }
  }
  for (const auto& s : scalars) {
    if (s.values.size() != g.n_cells()) throw std::logic_error("vtk field size differs from the grid");
    for (int part = 0; part < 2; ++part) {
      out += fmt::format("SCALARS {}_{} double 1\nLOOKUP_TABLE default\n", s.name, part == 0 ? "re" : "im");
      for (Id c = 0; c < g.n_cells(); ++c)
        out += fmt::format("{:.9e}\n", part == 0 ? s.values[c].real() : s.values[c].imag());
    }
  }
  write_text(path, out);
}

}  // namespace limabs::io
