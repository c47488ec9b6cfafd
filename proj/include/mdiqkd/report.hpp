#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdiqkd/keyrate.hpp"

namespace mdiqkd {

/// 17 significant digits: parses back to the identical double.
std::string format_double(double x);

inline constexpr const char* kSweepCsvHeader =
    "loss_db,epsilon,gamma_sq,alpha_opt,R,e_ph_U,e_bit,Q,gamma_obs,flag";

std::string csv_row(const KeyRatePoint& pt);
std::string sweep_csv(const SweepResult& result);

/// One parsed data row of a sweep CSV.
struct SweepCsvRow {
  double loss_db = 0.0;
  double epsilon = 0.0;
  double gamma_sq = 0.0;
  double alpha_opt = 0.0;
  double R = 0.0;
  double e_ph_U = 0.0;
  double e_bit = 0.0;
  double Q = 0.0;
  double gamma_obs = 0.0;
  std::string flag;
};

/// Throws std::runtime_error on a header or column-count mismatch.
std::vector<SweepCsvRow> parse_sweep_csv(std::istream& in);

nlohmann::json point_json(const KeyRatePoint& pt);
nlohmann::json point_json(const OptimizedPoint& pt);
nlohmann::json sweep_json(const SweepResult& result);

/// Writes through a temporary sibling file and renames it into place, so a
/// reader never observes a partial file.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace mdiqkd
