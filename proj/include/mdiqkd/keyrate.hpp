#pragma once

#include <array>
#include <string>
#include <vector>

#include "mdiqkd/bounds.hpp"
#include "mdiqkd/channel.hpp"
#include "mdiqkd/states.hpp"

namespace mdiqkd {

/// Which detection events feed the deviation bounds.
///  per_outcome: each announced outcome (c or d) is bounded on its own with
///               its single-detector yields, and the two bounds are summed.
///  success:     one bound over the union of both outcomes.
enum class YieldMode { per_outcome, success };

std::string yield_mode_name(YieldMode mode);

struct KeyRateOptions {
  double f_e = 1.16;
  double p_key = 1.0;
  YieldMode yield_mode = YieldMode::per_outcome;
};

enum class PointFlag {
  ok,
  zero_rate,
  degenerate_embedding,
  degenerate_state,
  singular_system,
  zero_gamma,
};

std::string flag_name(PointFlag flag);

struct KeyRatePoint {
  double loss_db = 0.0;
  double epsilon = 0.0;   // largest per-pair weight (the uniform value when uniform)
  double alpha = 0.0;
  double gamma_sq = 0.0;
  double R = 0.0;
  double e_ph_U = 1.0;
  double e_bit = 0.0;
  double Q = 0.0;
  double gamma_obs = 0.0;
  double f_e = 1.16;
  PointFlag flag = PointFlag::ok;
  std::string reason;

  // intermediates
  double raw_rate = 0.0;  // Q[1 - h(e_ph) - f_e h(e_bit)] before flooring
  double gamma_ref_U = 0.0;
  double gamma_U = 0.0;
  double kappa = 0.0;
  double xi = 0.0;
  double delta_vir_L = 0.0;
  YieldMode yield_mode = YieldMode::per_outcome;
  PairTable<double> epsilon_pairs{};
  YieldTable yields;
  PairTable<double> deltas{};
  PairTable<double> f_obj{};
  std::array<PhaseErrorBound, 2> outcome_bounds{};  // c, d (per_outcome mode)
};

double binary_entropy(double x);

/// max(0, Q [1 - h(min(e_ph, 1/2)) - f_e h(e_bit)])
double secret_key_rate(double q, double e_ph_U, double e_bit, double f_e);

/// Full pipeline at a fixed amplitude. Throws the pipeline's domain errors.
KeyRatePoint key_rate(double alpha, double gamma, const PairTable<double>& epsilon,
                      const ChannelModel& ch, const KeyRateOptions& opts = {});

/// As key_rate, but pipeline errors become an R = 0 point with a flag.
KeyRatePoint evaluate_point(double alpha, double gamma, const PairTable<double>& epsilon,
                            const ChannelModel& ch, const KeyRateOptions& opts = {});

struct SearchConfig {
  double alpha_min = 0.01;
  double alpha_max = 1.5;
  int grid_points = 60;
  double tolerance = 1e-4;
  int max_iterations = 200;

  void validate() const;
};

struct OptimizerTrace {
  int evaluations = 0;
  double bracket_width = 0.0;
  double grid_best_alpha = 0.0;
};

struct OptimizedPoint {
  KeyRatePoint point;
  OptimizerTrace trace;
};

/// Log-spaced coarse grid over [alpha_min, alpha_max].
std::vector<double> alpha_grid(const SearchConfig& search);

/// Maximizes the key rate over alpha: coarse grid scan, then golden-section
/// refinement between the neighbours of the best grid point. Deterministic.
OptimizedPoint optimize_alpha(double loss_db, const PairTable<double>& epsilon, double gamma,
                              double p_d, const KeyRateOptions& opts = {},
                              const SearchConfig& search = {});

struct SweepConfig {
  std::vector<double> loss_grid;
  std::vector<double> epsilon_list;
  std::vector<double> gamma_sq_list{0.0};
  double p_d = 1e-8;
  KeyRateOptions options;
  SearchConfig search;
  unsigned jobs = 1;
};

struct SweepResult {
  // epsilon-major, gamma_sq-middle, loss-minor
  std::vector<OptimizedPoint> points;
};

SweepResult sweep(const SweepConfig& config);

/// start, start + step, ... up to stop (inclusive within half a step).
std::vector<double> loss_range(double start, double stop, double step);

}  // namespace mdiqkd
