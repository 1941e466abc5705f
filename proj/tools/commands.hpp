#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace tmlab::cli {

inline constexpr const char* kSchemaVersion = "1.0";

/// Every flag of every subcommand; each subcommand reads its own subset.
struct RunConfig {
  std::string command;
  double p = 2.0;
  int N = 3;
  std::string R = "1";
  double alpha = 0.0;
  double beta = 0.0;
  double alpha0 = 0.0;  // constants: c_bar when > 0
  double alpha_ratio = 1.0;
  int k_max = 10;
  int restarts = 2;
  std::uint64_t seed = 1;
  int nodes = 2000;
  double horizon = 40.0;
  double tol = 1e-6;
  int grid = 100;
  std::string weight = "vp";
  double weight_value = 0.0;
  std::string mode = "harmonic";
  int m = 3;
  int count = 20;
  double h = 1e-2;
  std::string nl = "f1";
  double nl_k = 1.0, nl_beta = 3.0, nl_alpha = 1.0, nl_gamma = 1.0, nl_threshold = 0.0, nl_delta = 0.0;
  std::string bracket = "2,5";
  bool mp_level = false;
  int iterations = 4000;
  std::vector<int> only;
  std::string self_path;  // report: path used for the determinism criterion
  std::string out, csv;
  bool timing = false;
  std::string sweep;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct Output {
  nlohmann::ordered_json config;
  nlohmann::ordered_json result;
  nlohmann::ordered_json flags = nlohmann::ordered_json::object();
  CsvTable csv;
  int exit_code = 0;  // 0 ok, 2 flagged but completed
};

/// Runs one subcommand; throws on invalid input.
Output run_command(const RunConfig& cfg);

/// Top-level document {schema_version, command, config, result, flags, timing}.
nlohmann::ordered_json document(const RunConfig& cfg, const Output& out, double seconds);

/// Finite doubles as numbers, non-finite ones as "inf", "-inf" or "nan".
nlohmann::ordered_json num(double x);

std::string to_csv(const CsvTable& t);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::string& path, const std::string& content);

/// Sweep spec "key=a:step:b" (inclusive end) or "key=v1,v2,...".
struct Sweep {
  std::string key;
  std::vector<double> values;
};
Sweep parse_sweep(const std::string& spec);

/// Sets a numeric field by flag name (p, N, R, alpha, beta, alpha-ratio, ...).
void set_field(RunConfig& cfg, const std::string& key, double value);

/// "out.json" with key p and value 1.5 becomes "out_p1.5.json".
std::string sweep_path(const std::string& path, const std::string& key, double value);

}  // namespace tmlab::cli
