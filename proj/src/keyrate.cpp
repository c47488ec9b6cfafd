#include "mdiqkd/keyrate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "mdiqkd/errors.hpp"
#include "mdiqkd/virtual_bloch.hpp"

namespace mdiqkd {

std::string yield_mode_name(YieldMode mode) {
  return mode == YieldMode::per_outcome ? "per_outcome" : "success";
}

std::string flag_name(PointFlag flag) {
  switch (flag) {
    case PointFlag::ok:
      return "ok";
    case PointFlag::zero_rate:
      return "zero_rate";
    case PointFlag::degenerate_embedding:
      return "degenerate_embedding";
    case PointFlag::degenerate_state:
      return "degenerate_state";
    case PointFlag::singular_system:
      return "singular_system";
    case PointFlag::zero_gamma:
      return "zero_gamma";
  }
  return "unknown";
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) {
    return 0.0;
  }
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

namespace {

double unfloored_rate(double q, double e_ph_U, double e_bit, double f_e) {
  return q * (1.0 - binary_entropy(std::min(e_ph_U, 0.5)) - f_e * binary_entropy(e_bit));
}

}  // namespace

double secret_key_rate(double q, double e_ph_U, double e_bit, double f_e) {
  return std::max(0.0, unfloored_rate(q, e_ph_U, e_bit, f_e));
}

KeyRatePoint key_rate(double alpha, double gamma, const PairTable<double>& epsilon,
                      const ChannelModel& ch, const KeyRateOptions& opts) {
  ch.validate();
  KeyRatePoint pt;
  pt.loss_db = ch.loss_db();
  pt.alpha = alpha;
  pt.gamma_sq = gamma * gamma;
  pt.f_e = opts.f_e;
  pt.yield_mode = opts.yield_mode;
  pt.epsilon_pairs = epsilon;
  pt.epsilon = *std::max_element(epsilon.begin(), epsilon.end());

  SourceModel src;
  src.alpha = alpha;
  src.gamma = gamma;
  src.epsilon = epsilon;
  src.p = {opts.p_key / 2.0, opts.p_key / 2.0, 1.0 - opts.p_key};
  src.validate();

  const QubitEmbedding emb = build_embedding(alpha, gamma);
  pt.kappa = emb.kappa;
  pt.xi = emb.xi;

  const BlochSystem sys = build_bloch_system(emb);
  pt.f_obj = sys.f_obj;

  pt.yields = yield_table(src.amplitudes(), ch);
  pt.deltas = delta_table(epsilon, emb);
  pt.delta_vir_L = delta_vir_lower(epsilon);

  const Gain gain = gain_and_gamma_obs(src, ch);
  pt.Q = gain.q;
  pt.gamma_obs = gain.gamma_obs;
  pt.e_bit = bit_error_rate(alpha, ch);

  BoundInputs inp;
  inp.deltas = pt.deltas;
  inp.delta_vir_L = pt.delta_vir_L;
  inp.f_obj = pt.f_obj;

  if (opts.yield_mode == YieldMode::success) {
    inp.yields = pt.yields.y_success;
    inp.gamma_obs = gain.gamma_obs;
    const PhaseErrorBound b = phase_error_upper(inp);
    pt.gamma_ref_U = b.gamma_ref_U;
    pt.gamma_U = b.gamma_U;
  } else {
    inp.yields = pt.yields.y_c;
    inp.gamma_obs = gain.gamma_obs_c;
    pt.outcome_bounds[0] = phase_error_upper(inp);
    inp.yields = pt.yields.y_d;
    inp.gamma_obs = gain.gamma_obs_d;
    pt.outcome_bounds[1] = phase_error_upper(inp);
    pt.gamma_ref_U = pt.outcome_bounds[0].gamma_ref_U + pt.outcome_bounds[1].gamma_ref_U;
    pt.gamma_U = pt.outcome_bounds[0].gamma_U + pt.outcome_bounds[1].gamma_U;
  }
  if (!(pt.gamma_obs > 0.0)) {
    throw ZeroGammaError("no successful key rounds; phase-error rate undefined");
  }
  pt.e_ph_U = std::min(1.0, pt.gamma_U / pt.gamma_obs);

  pt.raw_rate = unfloored_rate(pt.Q, pt.e_ph_U, pt.e_bit, pt.f_e);
  pt.R = std::max(0.0, pt.raw_rate);
  pt.flag = pt.R > 0.0 ? PointFlag::ok : PointFlag::zero_rate;
  return pt;
}

KeyRatePoint evaluate_point(double alpha, double gamma, const PairTable<double>& epsilon,
                            const ChannelModel& ch, const KeyRateOptions& opts) {
  auto failed = [&](PointFlag flag, const char* why) {
    KeyRatePoint pt;
    pt.loss_db = ch.loss_db();
    pt.alpha = alpha;
    pt.gamma_sq = gamma * gamma;
    pt.f_e = opts.f_e;
    pt.yield_mode = opts.yield_mode;
    pt.epsilon_pairs = epsilon;
    pt.epsilon = *std::max_element(epsilon.begin(), epsilon.end());
    pt.e_bit = bit_error_rate(alpha, ch);
    pt.raw_rate = -std::numeric_limits<double>::infinity();
    pt.flag = flag;
    pt.reason = why;
    return pt;
  };
  try {
    return key_rate(alpha, gamma, epsilon, ch, opts);
  } catch (const DegenerateEmbeddingError& e) {
    return failed(PointFlag::degenerate_embedding, e.what());
  } catch (const DegenerateStateError& e) {
    return failed(PointFlag::degenerate_state, e.what());
  } catch (const SingularSystemError& e) {
    return failed(PointFlag::singular_system, e.what());
  } catch (const ZeroGammaError& e) {
    return failed(PointFlag::zero_gamma, e.what());
  }
}

void SearchConfig::validate() const {
  if (!(alpha_min > 0.0 && alpha_max > alpha_min)) {
    throw std::invalid_argument("search range must satisfy 0 < alpha_min < alpha_max");
  }
  if (grid_points < 3) {
    throw std::invalid_argument("search grid needs at least 3 points");
  }
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("search tolerance must be positive");
  }
}

std::vector<double> alpha_grid(const SearchConfig& search) {
  std::vector<double> grid(static_cast<std::size_t>(search.grid_points));
  const double log_lo = std::log(search.alpha_min);
  const double log_hi = std::log(search.alpha_max);
  const double n = static_cast<double>(search.grid_points - 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) / n);
  }
  grid.front() = search.alpha_min;
  grid.back() = search.alpha_max;
  return grid;
}

OptimizedPoint optimize_alpha(double loss_db, const PairTable<double>& epsilon, double gamma,
                              double p_d, const KeyRateOptions& opts,
                              const SearchConfig& search) {
  search.validate();
  const ChannelModel ch = ChannelModel::from_loss_db(loss_db, p_d);

  OptimizedPoint best;
  best.point.raw_rate = -std::numeric_limits<double>::infinity();
  bool have_best = false;
  int evaluations = 0;

  auto evaluate = [&](double alpha) {
    KeyRatePoint pt = evaluate_point(alpha, gamma, epsilon, ch, opts);
    ++evaluations;
    if (!have_best || pt.raw_rate > best.point.raw_rate) {
      best.point = pt;
      have_best = true;
    }
    return pt.raw_rate;
  };

  const std::vector<double> grid = alpha_grid(search);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = evaluate(grid[i]);
  }
  const std::size_t arg =
      static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
  best.trace.grid_best_alpha = grid[arg];

  double lo = grid[arg == 0 ? 0 : arg - 1];
  double hi = grid[std::min(arg + 1, grid.size() - 1)];

  // golden-section maximization
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = evaluate(x1);
  double f2 = evaluate(x2);
  for (int it = 0; it < search.max_iterations && (hi - lo) > search.tolerance; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = evaluate(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = evaluate(x2);
    }
  }

  best.trace.evaluations = evaluations;
  best.trace.bracket_width = hi - lo;
  // Report the requested loss exactly rather than the round trip through eta.
  best.point.loss_db = loss_db;
  return best;
}

SweepResult sweep(const SweepConfig& config) {
  if (config.loss_grid.empty() || config.epsilon_list.empty() || config.gamma_sq_list.empty()) {
    throw std::invalid_argument("sweep grids must be non-empty");
  }
  struct Task {
    double loss_db;
    double epsilon;
    double gamma_sq;
  };
  std::vector<Task> tasks;
  for (double eps : config.epsilon_list) {
    for (double gsq : config.gamma_sq_list) {
      std::vector<double> losses = config.loss_grid;
      std::sort(losses.begin(), losses.end());
      for (double loss : losses) {
        tasks.push_back({loss, eps, gsq});
      }
    }
  }

  SweepResult result;
  result.points.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      PairTable<double> eps{};
      eps.fill(tasks[i].epsilon);
      result.points[i] = optimize_alpha(tasks[i].loss_db, eps, std::sqrt(tasks[i].gamma_sq),
                                        config.p_d, config.options, config.search);
      result.points[i].point.gamma_sq = tasks[i].gamma_sq;
    }
  };

  const unsigned jobs = std::max(1u, config.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) {
      pool.emplace_back(worker);
    }
  }
  return result;
}

std::vector<double> loss_range(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) {
    throw std::invalid_argument("loss range requires step > 0 and stop >= start");
  }
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long i = 0; i <= n; ++i) {
    out.push_back(start + step * static_cast<double>(i));
  }
  return out;
}

}  // namespace mdiqkd
