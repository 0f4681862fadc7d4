#include "dynheat/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dynheat {

std::uint64_t config_hash(const std::string& resolved) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : resolved) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> config, std::vector<std::string> columns)
    : columns_(std::move(columns)) {
  std::ostringstream os;
  std::string all;
  for (const auto& line : config) all += line + "\n";
  for (const auto& line : config) os << "# " << line << "\n";
  os << "# config_hash=" << std::hex << config_hash(all) << std::dec << "\n";
  for (size_t i = 0; i < columns_.size(); ++i) {
    os << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
  }
  header_ = os.str();
}

void CsvWriter::add_row(const std::vector<double>& values) {
  if (values.size() != columns_.size()) throw std::invalid_argument("CsvWriter: column mismatch");
  std::string row;
  for (size_t i = 0; i < values.size(); ++i) {
    row += format_double(values[i]);
    row += (i + 1 < values.size() ? "," : "");
  }
  rows_.push_back(row);
}

void CsvWriter::add_row_mixed(const std::vector<std::string>& values) {
  if (values.size() != columns_.size()) throw std::invalid_argument("CsvWriter: column mismatch");
  std::string row;
  for (size_t i = 0; i < values.size(); ++i) {
    row += values[i];
    row += (i + 1 < values.size() ? "," : "");
  }
  rows_.push_back(row);
}

std::string CsvWriter::str() const {
  std::string out = header_;
  for (const auto& r : rows_) {
    out += r;
    out += "\n";
  }
  return out;
}

void CsvWriter::write_file(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("CsvWriter: cannot open " + path);
  f << str();
}

JsonReport::JsonReport(const std::string& config) {
  items_.push_back("\"config\":\"" + config + "\"");
  std::ostringstream os;
  os << "\"config_hash\":\"" << std::hex << config_hash(config) << "\"";
  items_.push_back(os.str());
}

void JsonReport::add(const std::string& key, double value) {
  items_.push_back("\"" + key + "\":" + format_double(value));
}

void JsonReport::add(const std::string& key, long value) {
  items_.push_back("\"" + key + "\":" + std::to_string(value));
}

void JsonReport::add(const std::string& key, const std::string& value) {
  items_.push_back("\"" + key + "\":\"" + value + "\"");
}

void JsonReport::add_bool(const std::string& key, bool value) {
  items_.push_back("\"" + key + "\":" + (value ? "true" : "false"));
}

void JsonReport::add_raw(const std::string& key, const std::string& json_snippet) {
  items_.push_back("\"" + key + "\":" + json_snippet);
}

std::string JsonReport::str() const {
  std::string out = "{";
  for (size_t i = 0; i < items_.size(); ++i) {
    out += items_[i];
    if (i + 1 < items_.size()) out += ",";
  }
  out += "}";
  return out;
}

void JsonReport::write_file(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("JsonReport: cannot open " + path);
  f << str() << "\n";
}

}  // namespace dynheat
