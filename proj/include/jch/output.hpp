#pragma once

// CSV artifacts. Each file starts with `#` comment lines (tool, mode, units),
// then a header row, then one row per record. Numbers are written with 17
// significant digits so reading them back is exact.

#include <filesystem>
#include <string>
#include <vector>

#include "jch/ensemble.hpp"

namespace jch {

std::string format_number(double value);

void write_msd_trace_csv(const std::filesystem::path& path, const EnsembleResult& result);
void write_snapshots_csv(const std::filesystem::path& path, const EnsembleResult& result);
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result, double measure_time);

struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace jch
