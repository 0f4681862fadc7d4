// Machine-readable output helpers: CSV tables and JSON reports with a
// resolved-config header, plus the deterministic uniform draw used by
// every sampler in the project.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace dynheat {

// FNV-1a over the resolved configuration string; embedded in output
// headers so reruns are checkable byte-for-byte.
std::uint64_t config_hash(const std::string& resolved);

// 53-bit uniform draw in [0,1); independent of libstdc++ distribution
// internals so seeded streams are stable across toolchains.
double uniform01(std::mt19937_64& rng);

class CsvWriter {
 public:
  // `config` lines are echoed as "# key=value" with the hash appended.
  CsvWriter(std::vector<std::string> config, std::vector<std::string> columns);
  void add_row(const std::vector<double>& values);
  void add_row_mixed(const std::vector<std::string>& values);
  std::string str() const;
  void write_file(const std::string& path) const;

 private:
  std::string header_;
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
};

// Small incremental JSON object writer (flat or nested via raw snippets).
class JsonReport {
 public:
  explicit JsonReport(const std::string& config);
  void add(const std::string& key, double value);
  void add(const std::string& key, long value);
  void add(const std::string& key, const std::string& value);
  void add_bool(const std::string& key, bool value);
  void add_raw(const std::string& key, const std::string& json_snippet);
  std::string str() const;
  void write_file(const std::string& path) const;

 private:
  std::vector<std::string> items_;
};

std::string format_double(double v);  // shortest round-trip-stable form

}  // namespace dynheat
