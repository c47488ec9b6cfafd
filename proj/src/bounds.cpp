#include "mdiqkd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mdiqkd/errors.hpp"

namespace mdiqkd {
namespace {

double guarded_sqrt(double x) {
  if (x < 0.0 && x >= -1e-14) {
    return 0.0;
  }
  return std::sqrt(x);
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

double deviation_branch(double y, double delta, Branch branch) {
  const double loss = 1.0 - delta * delta;
  const double spread = 2.0 * delta * guarded_sqrt(loss * y * (1.0 - y));
  const double base = y + loss * (1.0 - 2.0 * y);
  const double value = branch == Branch::upper ? base + spread : base - spread;
  return std::clamp(value, 0.0, 1.0);
}

double deviation_upper(double y_ref, double delta) {
  if (y_ref < delta * delta) {
    return deviation_branch(y_ref, delta, Branch::upper);
  }
  return 1.0;
}

double deviation_lower(double y_ref, double delta) {
  if (y_ref > 1.0 - delta * delta) {
    return deviation_branch(y_ref, delta, Branch::lower);
  }
  return 0.0;
}

double delta_vir_lower(const std::array<double, 4>& epsilon_keys) {
  double sum = 0.0;
  for (double eps : epsilon_keys) {
    sum += std::sqrt(1.0 - eps);
  }
  return sum / 4.0;
}

double delta_vir_lower(const PairTable<double>& epsilon) {
  std::array<double, 4> keys{};
  std::size_t n = 0;
  for (Setting nu : kKeySettings) {
    for (Setting omega : kKeySettings) {
      keys[n++] = epsilon[pair_index(nu, omega)];
    }
  }
  return delta_vir_lower(keys);
}

void BoundInputs::validate() const {
  for (std::size_t i = 0; i < 9; ++i) {
    if (!in_unit(yields[i])) {
      throw std::invalid_argument("yield " + pair_label(i) + " outside [0,1]");
    }
    if (!in_unit(deltas[i])) {
      throw std::invalid_argument("delta " + pair_label(i) + " outside [0,1]");
    }
    if (!std::isfinite(f_obj[i])) {
      throw std::invalid_argument("f_obj entry " + pair_label(i) + " is not finite");
    }
  }
  if (!in_unit(delta_vir_L)) {
    throw std::invalid_argument("delta_vir_L outside [0,1]");
  }
}

double gamma_ref_upper(const PairTable<double>& yields, const PairTable<double>& deltas,
                       const PairTable<double>& f_obj) {
  double total = 0.0;
  for (std::size_t i = 0; i < 9; ++i) {
    const double f = f_obj[i];
    if (f > 0.0) {
      total += f * deviation_upper(yields[i], deltas[i]);
    } else if (f < 0.0) {
      total += f * deviation_lower(yields[i], deltas[i]);
    }
  }
  return total;
}

double gamma_ref_upper(const BoundInputs& inp) {
  return gamma_ref_upper(inp.yields, inp.deltas, inp.f_obj);
}

PhaseErrorBound phase_error_upper(const BoundInputs& inp) {
  if (!(inp.gamma_obs > 0.0)) {
    throw ZeroGammaError("no successful key rounds; phase-error rate undefined");
  }
  PhaseErrorBound out;
  out.gamma_ref_U = gamma_ref_upper(inp);
  out.gamma_U = deviation_upper(std::clamp(out.gamma_ref_U, 0.0, 1.0), inp.delta_vir_L);
  out.e_ph_U = std::min(1.0, out.gamma_U / inp.gamma_obs);
  return out;
}

double aggregated_gamma_upper(const AggregatedInputs& inp) {
  if (!(inp.rounds > 0.0)) {
    throw InvalidProbabilityError("round count must be positive");
  }
  double ref = 0.0;
  for (std::size_t i = 0; i < 9; ++i) {
    const double f = inp.f_obj[i];
    const double weight = inp.p_pair[i] * inp.p_test[i];
    double upper = 1.0;
    double lower = 0.0;
    if (weight > 0.0) {
      const double mean_yield = std::clamp(inp.counts[i] / (inp.rounds * weight), 0.0, 1.0);
      upper = deviation_upper(mean_yield, inp.deltas[i]);
      lower = deviation_lower(mean_yield, inp.deltas[i]);
    } else if (inp.counts[i] > 0.0) {
      throw InvalidProbabilityError("pair " + pair_label(i) +
                                    " has counts but zero test probability");
    }
    if (f > 0.0) {
      ref += f * upper;
    } else if (f < 0.0) {
      ref += f * lower;
    }
  }
  return inp.rounds * inp.p_key_round *
         deviation_upper(std::clamp(ref, 0.0, 1.0), inp.delta_vir_L);
}

}  // namespace mdiqkd
