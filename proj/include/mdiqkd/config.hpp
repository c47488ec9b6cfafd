#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mdiqkd/keyrate.hpp"
#include "mdiqkd/states.hpp"

namespace mdiqkd {

/// Everything a CLI run needs. Built from defaults, then a preset, then a
/// config file, then command-line overrides, each layer validated.
struct RunConfig {
  double p_d = 1e-8;
  std::vector<double> loss_db{0.0};
  std::vector<double> epsilon{0.0};
  std::optional<PairTable<double>> epsilon_pairs;  // overrides `epsilon` when set
  std::vector<double> gamma_sq{0.0};
  std::optional<double> alpha;                     // empty: optimize
  KeyRateOptions keyrate;
  SearchConfig search;
  std::optional<std::size_t> n_max;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format;  // empty: command default (sweep csv, keyrate text)
  unsigned jobs = 1;
};

/// Names accepted by --preset.
std::vector<std::string> preset_names();

/// Throws ConfigError for an unknown preset.
nlohmann::json preset_json(std::string_view name);

/// Applies a JSON document onto `cfg`. Unknown keys and out-of-range values
/// throw ConfigError naming the offending field.
void apply_config(RunConfig& cfg, const nlohmann::json& doc);

/// Reads and applies a config file. Throws ConfigError on I/O or parse errors.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Range checks shared by every layer.
void validate_config(const RunConfig& cfg);

}  // namespace mdiqkd
