#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "randboot/mc.hpp"

namespace randboot::cli {

// Any defect in user-supplied configuration (bad JSON, unknown keys, values
// out of range, incompatible pairings). The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PowerSettings {
  std::vector<double> b_values{-2.0, -5.0, -10.0};
  double level = 0.05;
  int oracle_paths = 100000;
  int oracle_steps = 1000;
};

struct RunConfig {
  mc::Experiment experiment;
  int reps = 1000;         // unconditional replications
  int outer_paths = 200;   // double-layer outer regressor paths
  int inner_reps = 2000;   // conditional replications per outer path
  int grid_size = 101;
  double band_lo = 0.05;
  double band_hi = 0.95;
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0 = resolve from RANDBOOT_THREADS / hardware
  std::string output_dir = ".";
  PowerSettings power;
};

// Strict parse: unknown keys, missing required fields (n, dgp, scheme),
// wrong types, out-of-range values, and incompatible statistic/scheme/design
// pairings all throw ConfigError naming the offending field.
RunConfig parse_config(const nlohmann::json& j);

RunConfig load_config(const std::string& path);

// Fully normalized echo of the effective configuration; defaults filled in,
// keys sorted. Hashing this makes reruns reproducible byte-for-byte.
nlohmann::json to_json(const RunConfig& config);

// FNV-1a 64-bit hash of the canonical serialization, as fixed-width hex.
std::string config_hash(const nlohmann::json& normalized);

inline constexpr int kSchemaVersion = 1;

}  // namespace randboot::cli
