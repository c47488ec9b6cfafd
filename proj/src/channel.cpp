#include "mdiqkd/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace mdiqkd {

ChannelModel ChannelModel::from_loss_db(double loss_db, double p_d) {
  return ChannelModel{std::pow(10.0, -loss_db / 10.0), p_d};
}

double ChannelModel::loss_db() const { return 10.0 * std::log10(1.0 / eta); }

double ChannelModel::arm_transmittance() const { return std::sqrt(eta); }

void ChannelModel::validate() const {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("channel.eta must lie in (0,1]");
  }
  if (!(p_d >= 0.0 && p_d < 1.0)) {
    throw std::invalid_argument("channel.p_d must lie in [0,1)");
  }
}

double yield_omega_c(Amplitude nu, Amplitude omega, const ChannelModel& ch) {
  const double t = ch.arm_transmittance();
  const double mean = (nu.intensity() + omega.intensity()) / 2.0;
  const double cross = nu.modulus() * omega.modulus() * std::cos(nu.phase() - omega.phase());
  const double dark_port = t * (mean - cross);
  const double bright_port = t * (mean + cross);
  const double no_dark = 1.0 - ch.p_d;
  return no_dark * no_dark * std::exp(-dark_port) * -std::expm1(-bright_port) +
         ch.p_d * no_dark;
}

double yield_success(Amplitude nu, Amplitude omega, const ChannelModel& ch) {
  return yield_omega_c(nu, omega, ch) + yield_omega_c(nu, -omega, ch);
}

double bit_error_rate(double alpha, const ChannelModel& ch) {
  const double signal = std::expm1(2.0 * ch.arm_transmittance() * alpha * alpha);
  return ch.p_d / (2.0 * ch.p_d + signal);
}

YieldTable yield_table(const std::array<Amplitude, 3>& amplitudes, const ChannelModel& ch) {
  YieldTable table;
  for (std::size_t i = 0; i < 9; ++i) {
    const Amplitude nu = amplitudes[setting_index(pair_first(i))];
    const Amplitude omega = amplitudes[setting_index(pair_second(i))];
    table.y_c[i] = yield_omega_c(nu, omega, ch);
    table.y_d[i] = yield_omega_c(nu, -omega, ch);
    table.y_success[i] = table.y_c[i] + table.y_d[i];
  }
  return table;
}

Gain gain_and_gamma_obs(const SourceModel& src, const ChannelModel& ch) {
  Gain g;
  for (Setting nu : kKeySettings) {
    for (Setting omega : kKeySettings) {
      const double yc = yield_omega_c(src.amplitude(nu), src.amplitude(omega), ch);
      const double yd = yield_omega_c(src.amplitude(nu), -src.amplitude(omega), ch);
      g.gamma_obs_c += yc / 4.0;
      g.gamma_obs_d += yd / 4.0;
    }
  }
  g.gamma_obs = g.gamma_obs_c + g.gamma_obs_d;
  g.q = src.p_key() * src.p_key() * g.gamma_obs;
  return g;
}

}  // namespace mdiqkd
