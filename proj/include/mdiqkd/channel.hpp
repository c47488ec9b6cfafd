#pragma once

#include "mdiqkd/states.hpp"

namespace mdiqkd {

/// Symmetric untrusted-node channel. Each arm has intensity transmittance
/// sqrt(eta), so the end-to-end loss is 10 log10(1/eta) dB.
struct ChannelModel {
  double eta = 1.0;
  double p_d = 0.0;

  static ChannelModel from_loss_db(double loss_db, double p_d);

  double loss_db() const;
  double arm_transmittance() const;
  void validate() const;
};

/// Yields for the nine setting pairs. y_c and y_d are the single-detector
/// outcomes (Bob's bit flip on the destructive port already applied to the
/// phase convention, i.e. y_d(nu, omega) = y_c(nu, -omega)).
struct YieldTable {
  PairTable<double> y_success{};
  PairTable<double> y_c{};
  PairTable<double> y_d{};
};

struct Gain {
  double q = 0.0;          // p_key^2 * gamma_obs
  double gamma_obs = 0.0;  // success probability given both send key states
  double gamma_obs_c = 0.0;
  double gamma_obs_d = 0.0;
};

/// Probability of a click in the constructive detector only.
double yield_omega_c(Amplitude nu, Amplitude omega, const ChannelModel& ch);

/// Probability that exactly one detector clicks.
double yield_success(Amplitude nu, Amplitude omega, const ChannelModel& ch);

double bit_error_rate(double alpha, const ChannelModel& ch);

YieldTable yield_table(const std::array<Amplitude, 3>& amplitudes, const ChannelModel& ch);

Gain gain_and_gamma_obs(const SourceModel& src, const ChannelModel& ch);

}  // namespace mdiqkd
