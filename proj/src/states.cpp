#include "mdiqkd/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mdiqkd/errors.hpp"

namespace mdiqkd {

std::string setting_label(Setting s) {
  switch (s) {
    case Setting::plus_alpha:
      return "+a";
    case Setting::minus_alpha:
      return "-a";
    case Setting::third:
      return "g";
  }
  return "?";
}

std::string pair_label(std::size_t idx) {
  return setting_label(pair_first(idx)) + "," + setting_label(pair_second(idx));
}

Amplitude QubitEmbedding::amplitude(Setting s) const {
  switch (s) {
    case Setting::plus_alpha:
      return Amplitude{alpha};
    case Setting::minus_alpha:
      return Amplitude{-alpha};
    case Setting::third:
      return Amplitude{gamma};
  }
  return {};
}

SourceModel SourceModel::uniform(double alpha, double gamma, double epsilon, double p_key) {
  SourceModel src;
  src.alpha = alpha;
  src.gamma = gamma;
  src.epsilon.fill(epsilon);
  src.p = {p_key / 2.0, p_key / 2.0, 1.0 - p_key};
  return src;
}

Amplitude SourceModel::amplitude(Setting s) const {
  switch (s) {
    case Setting::plus_alpha:
      return Amplitude{alpha};
    case Setting::minus_alpha:
      return Amplitude{-alpha};
    case Setting::third:
      return Amplitude{gamma};
  }
  return {};
}

std::array<Amplitude, 3> SourceModel::amplitudes() const {
  return {amplitude(Setting::plus_alpha), amplitude(Setting::minus_alpha),
          amplitude(Setting::third)};
}

void SourceModel::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("source.alpha must be a finite positive number");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("source.gamma must be a finite non-negative number");
  }
  for (std::size_t i = 0; i < epsilon.size(); ++i) {
    if (!(epsilon[i] >= 0.0 && epsilon[i] <= 1.0)) {
      throw std::invalid_argument("source.epsilon[" + pair_label(i) + "] must lie in [0,1]");
    }
  }
  double total = 0.0;
  for (double pi : p) {
    if (!(pi >= 0.0)) {
      throw std::invalid_argument("source.p entries must be non-negative");
    }
    total += pi;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("source.p must sum to 1");
  }
}

complex coherent_overlap(Amplitude nu, Amplitude omega) {
  const complex exponent =
      -(nu.intensity() + omega.intensity()) / 2.0 + std::conj(nu.value) * omega.value;
  return std::exp(exponent);
}

QubitEmbedding build_embedding(double alpha, double gamma) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DegenerateEmbeddingError("alpha must be positive");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw DegenerateEmbeddingError("gamma must be non-negative");
  }
  if (std::abs(gamma - alpha) < 1e-12) {
    throw DegenerateEmbeddingError("third state coincides with a key state");
  }

  QubitEmbedding emb;
  emb.alpha = alpha;
  emb.gamma = gamma;

  const Amplitude plus{alpha};
  const Amplitude minus{-alpha};
  const Amplitude third{gamma};

  emb.kappa = coherent_overlap(plus, minus).real();
  const double span = 1.0 - emb.kappa * emb.kappa;
  if (span < 1e-15) {
    throw DegenerateEmbeddingError("key states too close to span a qubit (alpha too small)");
  }
  const double s = std::sqrt(span);

  emb.overlap_third = coherent_overlap(plus, third);
  // <-a|g> = <-a|a><a|g> + c1 sqrt(1 - kappa^2)
  emb.c1 = (coherent_overlap(minus, third) - emb.kappa * emb.overlap_third) / s;
  emb.xi = std::norm(emb.overlap_third) + std::norm(emb.c1);

  double radicand = 1.0 - emb.xi;
  if (radicand < 0.0 && radicand >= -1e-12) {
    radicand = 0.0;
  }
  if (radicand < 0.0) {
    throw std::logic_error("third-state decomposition exceeds unit norm");
  }
  emb.c2 = std::sqrt(radicand);

  const double root_xi = std::sqrt(emb.xi);
  emb.ref_coords[setting_index(Setting::plus_alpha)] = {complex{1.0}, complex{0.0}};
  emb.ref_coords[setting_index(Setting::minus_alpha)] = {complex{emb.kappa}, complex{s}};
  emb.ref_coords[setting_index(Setting::third)] = {emb.overlap_third / root_xi,
                                                   emb.c1 / root_xi};
  return emb;
}

double varsigma(Setting nu, Setting omega, const QubitEmbedding& emb) {
  const int thirds = (nu == Setting::third ? 1 : 0) + (omega == Setting::third ? 1 : 0);
  switch (thirds) {
    case 2:
      return emb.xi;
    case 1:
      return std::sqrt(emb.xi);
    default:
      return 1.0;
  }
}

double delta_pair_lower(Setting nu, Setting omega, double epsilon, const QubitEmbedding& emb) {
  const double sc = varsigma(nu, omega, emb);
  const double orth = std::sqrt(std::max(0.0, 1.0 - sc * sc));
  const double value = std::sqrt(1.0 - epsilon) * sc - std::sqrt(epsilon) * orth;
  return std::clamp(value, 0.0, 1.0);
}

PairTable<double> delta_table(const PairTable<double>& epsilon, const QubitEmbedding& emb) {
  PairTable<double> out{};
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = delta_pair_lower(pair_first(i), pair_second(i), epsilon[i], emb);
  }
  return out;
}

}  // namespace mdiqkd
