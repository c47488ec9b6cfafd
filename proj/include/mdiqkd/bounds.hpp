#pragma once

#include <array>

#include "mdiqkd/states.hpp"

namespace mdiqkd {

enum class Branch { upper, lower };

/// Closed-form branch of the deviation bound:
///   Y + (1 - d^2)(1 - 2Y) +/- 2 d sqrt((1 - d^2) Y (1 - Y)), clamped to [0,1].
double deviation_branch(double y, double delta, Branch branch);

/// Largest expectation a state can have given the expectation `y_ref` of the
/// same operator on a state with overlap modulus `delta`.
double deviation_upper(double y_ref, double delta);

/// Smallest such expectation.
double deviation_lower(double y_ref, double delta);

/// Overlap floor for the key-round virtual states from the four key-pair
/// side-channel weights (nu-major over {+a, -a}).
double delta_vir_lower(const std::array<double, 4>& epsilon_keys);
double delta_vir_lower(const PairTable<double>& epsilon);

struct BoundInputs {
  PairTable<double> yields{};
  PairTable<double> deltas{};
  double delta_vir_L = 1.0;
  PairTable<double> f_obj{};
  double gamma_obs = 0.0;

  void validate() const;
};

struct PhaseErrorBound {
  double gamma_ref_U = 0.0;
  double gamma_U = 0.0;
  double e_ph_U = 0.0;
};

double gamma_ref_upper(const PairTable<double>& yields, const PairTable<double>& deltas,
                       const PairTable<double>& f_obj);
double gamma_ref_upper(const BoundInputs& inp);

/// Throws ZeroGammaError when gamma_obs <= 0.
PhaseErrorBound phase_error_upper(const BoundInputs& inp);

/// Coherent-attack bound over N rounds in the asymptotic regime, fed with the
/// observed counts of successful test rounds per setting pair.
struct AggregatedInputs {
  PairTable<double> counts{};     // N~_{nu,omega,T}
  double rounds = 0.0;            // N
  PairTable<double> p_pair{};     // p_nu p_omega
  PairTable<double> p_test{};     // p_{T|nu,omega}
  double p_key_round = 0.0;       // p_K
  PairTable<double> deltas{};
  double delta_vir_L = 1.0;
  PairTable<double> f_obj{};
};

/// Upper bound on the expected number of phase errors among key rounds.
/// A pair with zero selection probability and no counts carries no
/// information and is bounded at the worst case. Throws
/// InvalidProbabilityError if such a pair has counts.
double aggregated_gamma_upper(const AggregatedInputs& inp);

}  // namespace mdiqkd
