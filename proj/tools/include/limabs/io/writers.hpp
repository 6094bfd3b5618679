// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "limabs/grid.hpp"
#include "limabs/helmholtz.hpp"
#include "limabs/operators.hpp"

namespace limabs::io {

using Json = nlohmann::ordered_json;

// RFC 4180 table; write_csv appends a config_sha256 column to every record.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

// Shortest text that reads back to the same double.
std::string num(double v);
std::string num(int v);
std::string num(bool v);

std::string csv_field(const std::string& s);
std::string format_csv(const CsvTable& table, const std::string& config_hash);
void write_csv(const std::string& path, const CsvTable& table, const std::string& config_hash);

// Adds "config_sha256" as the first key.
std::string format_json(const Json& record, const std::string& config_hash);
void write_json(const std::string& path, const Json& record, const std::string& config_hash);

struct VtkVectors {
  std::string name;
  CellVectors values;  // real and imaginary parts written as name_re, name_im
};
struct VtkScalars {
  std::string name;
  CVec values;
};

// Legacy structured points, one value per cell of the box.
void write_vtk(const std::string& path, const StaggeredGrid& grid, const std::string& config_hash,
               const std::vector<VtkVectors>& vectors, const std::vector<VtkScalars>& scalars = {});

}  // namespace limabs::io
