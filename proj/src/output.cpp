#include "jch/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "jch/error.hpp"
#include "jch/version.hpp"

namespace jch {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_msd_trace_csv(const std::filesystem::path& path, const EnsembleResult& result) {
  auto out = open_for_write(path);
  out << "# " << tool_name << ' ' << tool_version << " msd-trace, " << result.samples << " samples\n"
      << "# units: time [1/kappa]; msd_mean, msd_stderr [site spacing^2]; exponent [1] = d log<x^2> / d log t\n"
      << "time,msd_mean,msd_stderr,exponent\n";
  std::size_t e = 0;
  for (std::size_t i = 0; i < result.msd.times.size(); ++i) {
    const double t = result.msd.times[i];
    double exponent = std::nan("");
    if (e < result.exponent.times.size() && result.exponent.times[e] == t) exponent = result.exponent.values[e++];
    out << format_number(t) << ',' << format_number(result.msd.values[i]) << ','
        << format_number(result.msd.standard_error[i]) << ',' << format_number(exponent) << '\n';
  }
  finish(out, path);
}

void write_snapshots_csv(const std::filesystem::path& path, const EnsembleResult& result) {
  auto out = open_for_write(path);
  out << "# " << tool_name << ' ' << tool_version << " snapshot, " << result.samples << " samples\n"
      << "# units: time [1/kappa]; site [index]; population_mean [1]\n"
      << "time,site,population_mean\n";
  for (const auto& snap : result.snapshots)
    for (std::size_t r = 0; r < snap.population.size(); ++r)
      out << format_number(snap.time) << ',' << r << ',' << format_number(snap.population[r]) << '\n';
  finish(out, path);
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result, double measure_time) {
  auto out = open_for_write(path);
  out << "# " << tool_name << ' ' << tool_version << " dcf-sweep, MSD read at T = " << format_number(measure_time)
      << " [1/kappa]\n"
      << "# units: f_D [kappa]; msd_at_T, stderr, reference_dispersive, reference_localized [site spacing^2]\n"
      << "f_D,msd_at_T,stderr,reference_dispersive,reference_localized\n";
  for (const auto& p : result.points)
    out << format_number(p.dcf) << ',' << format_number(p.msd) << ',' << format_number(p.standard_error) << ','
        << format_number(result.reference_dispersive.msd) << ',' << format_number(result.reference_localized.msd)
        << '\n';
  finish(out, path);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      table.comments.push_back(line);
      continue;
    }
    if (table.columns.empty()) {
      table.columns = split(line, ',');
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) {
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw IoError("malformed number '" + cell + "' in " + path.string());
      row.push_back(v);
    }
    if (row.size() != table.columns.size()) throw IoError("ragged row in " + path.string());
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace jch
