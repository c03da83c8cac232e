#include <array>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "vie/bench.hpp"
#include "vie/error.hpp"

namespace vie::bench {
namespace {

std::string format_real(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

double parse_real(const std::string& field, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size()) {
    throw Error(ErrorKind::SpecError, "line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

long parse_integer(const std::string& field, std::size_t line) {
  char* end = nullptr;
  const long v = std::strtol(field.c_str(), &end, 10);
  if (field.empty() || end != field.c_str() + field.size()) {
    throw Error(ErrorKind::SpecError, "line " + std::to_string(line) + ": bad integer '" + field + "'");
  }
  return v;
}

}  // namespace

void write_csv(std::ostream& out, std::span<const ErrorRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.experiment << ',' << r.problem << ',' << format_real(r.T) << ',' << r.N << ',' << r.M << ',' << r.Mc
        << ',' << r.k << ',' << format_real(r.linf_error) << ',' << format_real(r.increment) << ','
        << format_real(r.wall_ms) << ',' << r.fine_sweeps << ',' << r.coarse_sweeps << '\n';
  }
}

std::vector<ErrorRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw Error(ErrorKind::SpecError, "missing or wrong CSV header");
  std::vector<ErrorRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 12) throw Error(ErrorKind::SpecError, "line " + std::to_string(lineno) + ": expected 12 fields");
    ErrorRecord r;
    r.experiment = f[0];
    r.problem = f[1];
    r.T = parse_real(f[2], lineno);
    r.N = static_cast<int>(parse_integer(f[3], lineno));
    r.M = static_cast<int>(parse_integer(f[4], lineno));
    r.Mc = static_cast<int>(parse_integer(f[5], lineno));
    r.k = static_cast<int>(parse_integer(f[6], lineno));
    r.linf_error = parse_real(f[7], lineno);
    r.increment = parse_real(f[8], lineno);
    r.wall_ms = parse_real(f[9], lineno);
    r.fine_sweeps = parse_integer(f[10], lineno);
    r.coarse_sweeps = parse_integer(f[11], lineno);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace vie::bench
