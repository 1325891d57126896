// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace cfpn {

/// Minimal CSV table: a header row plus string cells. Numeric parsing is
/// left to the call sites that know the schema.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column, -1 if absent.
  int column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Formats with 9 significant digits ("%.9g"), the precision used for all
/// emitted data files so determinism checks can compare bytes.
std::string format_g9(double value);

double parse_double(const std::string& cell, const std::string& context);

}  // namespace cfpn
