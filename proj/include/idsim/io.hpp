#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "idsim/harness.hpp"

namespace idsim {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kCsvSchemaVersion = "1";

// Shortest round-trip decimal representation, so equal doubles always
// print identically and reproduce exactly on parse.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline constexpr const char* kRawCsvHeader =
    "replication,gen,prop_zero,prop_one,prop_nonbinary,match_prob,unmatched,mean_fitness";
inline constexpr const char* kMedianCsvHeader =
    "gen,prop_zero,prop_one,prop_nonbinary,match_prob,unmatched,mean_fitness";

inline void append_metrics_row(std::string& out, const GenerationMetrics& m) {
  out += std::to_string(m.gen);
  out += ',';
  out += format_double(m.prop_zero);
  out += ',';
  out += format_double(m.prop_one);
  out += ',';
  out += format_double(m.prop_nonbinary);
  out += ',';
  out += format_double(m.match_prob);
  out += ',';
  out += format_double(m.unmatched);
  out += ',';
  out += format_double(m.mean_fitness);
  out += '\n';
}

inline std::string raw_csv(const ReplicationSet& result) {
  std::string out = kRawCsvHeader;
  out += '\n';
  for (std::size_t r = 0; r < result.raw.size(); ++r) {
    for (const auto& m : result.raw[r]) {
      out += std::to_string(r);
      out += ',';
      append_metrics_row(out, m);
    }
  }
  return out;
}

inline std::string median_csv(const ReplicationSet& result) {
  std::string out = kMedianCsvHeader;
  out += '\n';
  for (const auto& m : result.median) append_metrics_row(out, m);
  return out;
}

// Flat key=value config files, '#' starts a comment.
inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string{};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value, got '" + line + "'");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

namespace detail {

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  std::istringstream ss(value);
  ss >> out;
  if (ss.fail() || !(ss >> std::ws).eof())
    throw std::invalid_argument("config key '" + key + "': cannot parse '" +
                                value + "'");
  return out;
}

}  // namespace detail

// Applies a parsed key=value map onto a config; unknown keys are errors
// naming the key.
inline void apply_config_entries(SimConfig& config,
                                 const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "agents") config.agents = detail::parse_number<int>(key, value);
    else if (key == "segment_length") config.segment_length = detail::parse_number<int>(key, value);
    else if (key == "periods") config.periods = detail::parse_number<int>(key, value);
    else if (key == "replications") config.replications = detail::parse_number<int>(key, value);
    else if (key == "pmut") config.p_mut = detail::parse_number<double>(key, value);
    else if (key == "pcross") config.p_cross = detail::parse_number<double>(key, value);
    else if (key == "bin_size") config.bin_size = detail::parse_number<double>(key, value);
    else if (key == "eps_class") config.eps_class = detail::parse_number<double>(key, value);
    else if (key == "rounds") config.rounds = detail::parse_number<int>(key, value);
    else if (key == "seed") config.master_seed = detail::parse_number<std::uint64_t>(key, value);
    else if (key == "init") {
      if (value == "binary_origin") config.init_policy = InitPolicy::binary_origin;
      else if (value == "uniform_random") config.init_policy = InitPolicy::uniform_random;
      else throw std::invalid_argument("config key 'init': expected binary_origin or uniform_random, got '" + value + "'");
    } else if (key == "mode") {
      if (value == "analytic") config.fitness_mode = FitnessMode::analytic_binary;
      else if (value == "montecarlo") config.fitness_mode = FitnessMode::monte_carlo;
      else throw std::invalid_argument("config key 'mode': expected analytic or montecarlo, got '" + value + "'");
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

inline SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  SimConfig config;
  apply_config_entries(config, parse_key_values(in));
  return config;
}

// Run manifest: the fully resolved configuration plus tool metadata,
// written in the same key=value format the config loader reads.
inline std::string manifest_text(const SimConfig& config,
                                 const std::string& timestamp) {
  std::string out;
  out += "tool_version=" + std::string(kToolVersion) + "\n";
  out += "csv_schema_version=" + std::string(kCsvSchemaVersion) + "\n";
  out += "timestamp=" + timestamp + "\n";
  out += "agents=" + std::to_string(config.agents) + "\n";
  out += "segment_length=" + std::to_string(config.segment_length) + "\n";
  out += "periods=" + std::to_string(config.periods) + "\n";
  out += "replications=" + std::to_string(config.replications) + "\n";
  out += "pmut=" + format_double(config.p_mut) + "\n";
  out += "pcross=" + format_double(config.p_cross) + "\n";
  out += "bin_size=" + format_double(config.bin_size) + "\n";
  out += "eps_class=" + format_double(config.eps_class) + "\n";
  out += "rounds=" + std::to_string(config.rounds) + "\n";
  out += "init=" + std::string(config.init_policy == InitPolicy::binary_origin
                                   ? "binary_origin"
                                   : "uniform_random") + "\n";
  out += "mode=" + std::string(config.fitness_mode == FitnessMode::monte_carlo
                                   ? "montecarlo"
                                   : "analytic") + "\n";
  out += "seed=" + std::to_string(config.master_seed) + "\n";
  return out;
}

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return static_cast<int>(i);
    return -1;
  }
};

inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (header) {
      table.columns = std::move(cells);
      header = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace idsim
