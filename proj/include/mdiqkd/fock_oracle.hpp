#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mdiqkd/channel.hpp"
#include "mdiqkd/states.hpp"

namespace mdiqkd {

/// Pure state on one or two optical modes truncated at `cutoff` photons per
/// mode. The probability dropped by truncation is tracked, never
/// renormalized away.
class FockState {
 public:
  static FockState single_mode(std::size_t cutoff);
  static FockState two_mode(std::size_t cutoff);

  std::size_t cutoff() const { return cutoff_; }
  std::size_t modes() const { return modes_; }
  double tail_bound() const { return tail_; }
  void set_tail_bound(double tail) { tail_ = tail; }

  complex& at(std::size_t n) { return amps_[n]; }
  complex at(std::size_t n) const { return amps_[n]; }
  complex& at(std::size_t n, std::size_t m) { return amps_[n * (cutoff_ + 1) + m]; }
  complex at(std::size_t n, std::size_t m) const { return amps_[n * (cutoff_ + 1) + m]; }

  std::span<const complex> amplitudes() const { return amps_; }
  double norm_squared() const;
  complex inner(const FockState& other) const;  // <this|other>

 private:
  FockState(std::size_t cutoff, std::size_t modes);

  std::size_t cutoff_ = 0;
  std::size_t modes_ = 1;
  double tail_ = 0.0;
  std::vector<complex> amps_;
};

struct ClickDistribution {
  double p_c_only = 0.0;
  double p_d_only = 0.0;
  double p_both = 0.0;
  double p_none = 0.0;

  double success() const { return p_c_only + p_d_only; }
};

/// Probability mass of a coherent state above `cutoff` photons.
double coherent_tail(Amplitude beta, std::size_t cutoff);

/// max(20, ceil(8 |alpha_eff|^2 + 15)).
std::size_t default_cutoff(double alpha_eff);

/// Truncated number-basis expansion of |beta>. Throws CutoffError when the
/// truncation tail exceeds 1e-12.
FockState coherent_fock(Amplitude beta, std::size_t n_max);

FockState tensor(const FockState& a, const FockState& b);

/// a^dag -> (c^dag + d^dag)/sqrt2, b^dag -> (c^dag - d^dag)/sqrt2. Output
/// modes are (c, d) with cutoff 2 * input cutoff so no amplitude is dropped.
FockState beamsplitter_5050(const FockState& in);

/// Threshold detection on modes (c, d) with independent dark counts.
ClickDistribution threshold_click_distribution(const FockState& state, double p_d);

/// Coherent amplitude after an arm of intensity transmittance `arm_transmittance`.
Amplitude apply_loss(Amplitude beta, double arm_transmittance);

/// Click statistics for coherent inputs nu (Alice) and omega (Bob).
ClickDistribution oracle_clicks(Amplitude nu, Amplitude omega, const ChannelModel& ch,
                                std::size_t n_max);

struct PhaseErrorOracle {
  double p_identical_x_given_success = 0.0;  // the true phase-error rate
  double smallness_witness = 0.0;            // fidelity with (|0x1x> + |1x0x>)/sqrt2 given c
  double p_success = 0.0;
  double p_identical_c = 0.0;                // joint with outcome c
  double p_identical_d = 0.0;
};

/// Ideal (side-channel free) key-round virtual protocol simulated in the
/// number basis. Loss environments are carried exactly through their
/// coherent-state overlaps.
PhaseErrorOracle virtual_phase_error_oracle(double alpha, const ChannelModel& ch,
                                            std::size_t n_max);

}  // namespace mdiqkd
