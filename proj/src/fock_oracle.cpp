#include "mdiqkd/fock_oracle.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "mdiqkd/errors.hpp"

namespace mdiqkd {
namespace {

constexpr double kMaxTail = 1e-12;

double log_factorial(std::size_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double binomial(std::size_t n, std::size_t k) {
  return std::round(std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k)));
}

}  // namespace

FockState::FockState(std::size_t cutoff, std::size_t modes)
    : cutoff_(cutoff), modes_(modes) {
  std::size_t dim = cutoff + 1;
  if (modes == 2) {
    dim *= cutoff + 1;
  }
  amps_.assign(dim, complex{0.0, 0.0});
}

FockState FockState::single_mode(std::size_t cutoff) { return FockState(cutoff, 1); }

FockState FockState::two_mode(std::size_t cutoff) { return FockState(cutoff, 2); }

double FockState::norm_squared() const {
  double total = 0.0;
  for (const complex& a : amps_) {
    total += std::norm(a);
  }
  return total;
}

complex FockState::inner(const FockState& other) const {
  if (other.cutoff_ != cutoff_ || other.modes_ != modes_) {
    throw std::invalid_argument("Fock states live in different truncated spaces");
  }
  complex total{0.0, 0.0};
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    total += std::conj(amps_[i]) * other.amps_[i];
  }
  return total;
}

double coherent_tail(Amplitude beta, std::size_t cutoff) {
  const double mean = beta.intensity();
  if (mean == 0.0) {
    return 0.0;
  }
  // Sum the Poisson terms above the cutoff directly; 1 - head cancels badly.
  double tail = 0.0;
  const double log_mean = std::log(mean);
  for (std::size_t n = cutoff + 1; n < cutoff + 400; ++n) {
    const double term =
        std::exp(-mean + static_cast<double>(n) * log_mean - log_factorial(n));
    tail += term;
    if (term < 1e-300 || (static_cast<double>(n) > mean && term < tail * 1e-17)) {
      break;
    }
  }
  return tail;
}

std::size_t default_cutoff(double alpha_eff) {
  const auto rule = static_cast<std::size_t>(std::ceil(8.0 * alpha_eff * alpha_eff + 15.0));
  return std::max<std::size_t>(20, rule);
}

FockState coherent_fock(Amplitude beta, std::size_t n_max) {
  if (n_max < 1) {
    throw std::invalid_argument("cutoff must be at least 1");
  }
  const double tail = coherent_tail(beta, n_max);
  if (tail > kMaxTail) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "cutoff %zu too small for |beta|^2 = %.6g (tail %.3e > %.0e)",
                  n_max, beta.intensity(), tail, kMaxTail);
    throw CutoffError(buf);
  }
  FockState state = FockState::single_mode(n_max);
  const double envelope = std::exp(-beta.intensity() / 2.0);
  complex power{1.0, 0.0};
  for (std::size_t n = 0; n <= n_max; ++n) {
    state.at(n) = envelope * power / std::exp(0.5 * log_factorial(n));
    power *= beta.value;
  }
  state.set_tail_bound(tail);
  return state;
}

FockState tensor(const FockState& a, const FockState& b) {
  if (a.modes() != 1 || b.modes() != 1 || a.cutoff() != b.cutoff()) {
    throw std::invalid_argument("tensor expects two single-mode states with equal cutoff");
  }
  FockState out = FockState::two_mode(a.cutoff());
  for (std::size_t n = 0; n <= a.cutoff(); ++n) {
    for (std::size_t m = 0; m <= b.cutoff(); ++m) {
      out.at(n, m) = a.at(n) * b.at(m);
    }
  }
  out.set_tail_bound(a.tail_bound() + b.tail_bound());
  return out;
}

FockState beamsplitter_5050(const FockState& in) {
  if (in.modes() != 2) {
    throw std::invalid_argument("beamsplitter acts on a two-mode state");
  }
  const std::size_t cut = in.cutoff();
  FockState out = FockState::two_mode(2 * cut);
  // |n,m> = a^dag^n b^dag^m |0> / sqrt(n! m!)
  //       -> 2^{-(n+m)/2} (c+d)^n (c-d)^m |0> / sqrt(n! m!)
  for (std::size_t n = 0; n <= cut; ++n) {
    for (std::size_t m = 0; m <= cut; ++m) {
      const complex amp = in.at(n, m);
      if (amp == complex{0.0, 0.0}) {
        continue;
      }
      const double prefactor =
          std::exp(-0.5 * static_cast<double>(n + m) * std::log(2.0) -
                   0.5 * (log_factorial(n) + log_factorial(m)));
      for (std::size_t k = 0; k <= n; ++k) {
        const double ck = binomial(n, k);
        for (std::size_t l = 0; l <= m; ++l) {
          const double sign = ((m - l) % 2 == 0) ? 1.0 : -1.0;
          const std::size_t p = k + l;
          const std::size_t q = n + m - p;
          const double norm = std::exp(0.5 * (log_factorial(p) + log_factorial(q)));
          out.at(p, q) += amp * (prefactor * ck * binomial(m, l) * sign * norm);
        }
      }
    }
  }
  out.set_tail_bound(in.tail_bound());
  return out;
}

ClickDistribution threshold_click_distribution(const FockState& state, double p_d) {
  if (state.modes() != 2) {
    throw std::invalid_argument("click statistics need a two-mode state");
  }
  ClickDistribution dist;
  for (std::size_t p = 0; p <= state.cutoff(); ++p) {
    for (std::size_t q = 0; q <= state.cutoff(); ++q) {
      const double w = std::norm(state.at(p, q));
      const double click_c = p > 0 ? 1.0 : p_d;
      const double click_d = q > 0 ? 1.0 : p_d;
      dist.p_c_only += w * click_c * (1.0 - click_d);
      dist.p_d_only += w * (1.0 - click_c) * click_d;
      dist.p_both += w * click_c * click_d;
      dist.p_none += w * (1.0 - click_c) * (1.0 - click_d);
    }
  }
  return dist;
}

Amplitude apply_loss(Amplitude beta, double arm_transmittance) {
  if (!(arm_transmittance > 0.0 && arm_transmittance <= 1.0)) {
    throw std::invalid_argument("arm transmittance must lie in (0,1]");
  }
  return Amplitude{beta.value * std::sqrt(arm_transmittance)};
}

ClickDistribution oracle_clicks(Amplitude nu, Amplitude omega, const ChannelModel& ch,
                                std::size_t n_max) {
  const double t = ch.arm_transmittance();
  const FockState a = coherent_fock(apply_loss(nu, t), n_max);
  const FockState b = coherent_fock(apply_loss(omega, t), n_max);
  return threshold_click_distribution(beamsplitter_5050(tensor(a, b)), ch.p_d);
}

PhaseErrorOracle virtual_phase_error_oracle(double alpha, const ChannelModel& ch,
                                            std::size_t n_max) {
  if (ch.p_d != 0.0) {
    throw std::invalid_argument("phase-error oracle models the dark-count-free channel");
  }
  const double t = ch.arm_transmittance();
  const double leak = std::sqrt(1.0 - t);

  // Branch (j, s): Alice sends (-1)^j alpha, Bob (-1)^s alpha.
  std::array<FockState, 4> optical{FockState::two_mode(0), FockState::two_mode(0),
                                   FockState::two_mode(0), FockState::two_mode(0)};
  std::array<std::array<double, 2>, 4> env{};
  for (int j = 0; j < 2; ++j) {
    for (int s = 0; s < 2; ++s) {
      const double a = (j == 0 ? 1.0 : -1.0) * alpha;
      const double b = (s == 0 ? 1.0 : -1.0) * alpha;
      optical[2 * j + s] = beamsplitter_5050(tensor(coherent_fock(apply_loss(Amplitude{a}, t), n_max),
                                                    coherent_fock(apply_loss(Amplitude{b}, t), n_max)));
      env[2 * j + s] = {a * leak, b * leak};
    }
  }

  // Unnormalized ancilla state (z basis) conditioned on each outcome:
  // rho[x][y] = <x|rho|y> = 1/4 <psi_y|Pi|psi_x> <e_y|e_x>.
  auto conditional = [&](bool constructive) {
    std::array<std::array<complex, 4>, 4> rho{};
    const std::size_t cut = optical[0].cutoff();
    for (int x = 0; x < 4; ++x) {
      for (int y = 0; y < 4; ++y) {
        complex proj{0.0, 0.0};
        for (std::size_t n = 1; n <= cut; ++n) {
          if (constructive) {
            proj += std::conj(optical[y].at(n, 0)) * optical[x].at(n, 0);
          } else {
            proj += std::conj(optical[y].at(0, n)) * optical[x].at(0, n);
          }
        }
        const complex env_overlap = coherent_overlap(Amplitude{env[y][0]}, Amplitude{env[x][0]}) *
                                    coherent_overlap(Amplitude{env[y][1]}, Amplitude{env[x][1]});
        rho[x][y] = 0.25 * proj * env_overlap;
      }
    }
    return rho;
  };

  // x-basis ancilla vectors in the z basis, index 2*j+s.
  auto x_vector = [](int j, int s) {
    std::array<double, 4> v{};
    for (int jz = 0; jz < 2; ++jz) {
      for (int sz = 0; sz < 2; ++sz) {
        const double sign = ((j * jz + s * sz) % 2 == 0) ? 1.0 : -1.0;
        v[2 * jz + sz] = sign / 2.0;
      }
    }
    return v;
  };
  auto expectation = [](const std::array<std::array<complex, 4>, 4>& rho,
                        const std::array<double, 4>& v) {
    complex total{0.0, 0.0};
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        total += v[a] * rho[a][b] * v[b];
      }
    }
    return total.real();
  };
  auto trace = [](const std::array<std::array<complex, 4>, 4>& rho) {
    return (rho[0][0] + rho[1][1] + rho[2][2] + rho[3][3]).real();
  };

  const auto rho_c = conditional(true);
  const auto rho_d = conditional(false);

  PhaseErrorOracle out;
  out.p_identical_c = expectation(rho_c, x_vector(0, 0)) + expectation(rho_c, x_vector(1, 1));
  out.p_identical_d = expectation(rho_d, x_vector(0, 0)) + expectation(rho_d, x_vector(1, 1));
  out.p_success = trace(rho_c) + trace(rho_d);
  out.p_identical_x_given_success = (out.p_identical_c + out.p_identical_d) / out.p_success;

  std::array<double, 4> witness{};
  const auto v01 = x_vector(0, 1);
  const auto v10 = x_vector(1, 0);
  for (int i = 0; i < 4; ++i) {
    witness[i] = (v01[i] + v10[i]) / std::sqrt(2.0);
  }
  out.smallness_witness = expectation(rho_c, witness) / trace(rho_c);
  return out;
}

}  // namespace mdiqkd
