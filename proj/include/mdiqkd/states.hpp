#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>

namespace mdiqkd {

using complex = std::complex<double>;

/// Coherent-state field amplitude. Intensity (mean photon number) is |value|^2.
struct Amplitude {
  complex value{0.0, 0.0};

  constexpr Amplitude() = default;
  constexpr Amplitude(double re) : value(re, 0.0) {}
  constexpr Amplitude(complex v) : value(v) {}

  double intensity() const { return std::norm(value); }
  double modulus() const { return std::abs(value); }
  double phase() const { return std::arg(value); }
  Amplitude operator-() const { return Amplitude{-value}; }
};

/// State choices of one party: the two key states and the third (test) state.
enum class Setting : std::uint8_t { plus_alpha = 0, minus_alpha = 1, third = 2 };

inline constexpr std::array<Setting, 3> kSettings{Setting::plus_alpha, Setting::minus_alpha,
                                                  Setting::third};
inline constexpr std::array<Setting, 2> kKeySettings{Setting::plus_alpha, Setting::minus_alpha};

/// Values indexed by a (nu, omega) setting pair, nu-major.
template <class T>
using PairTable = std::array<T, 9>;

constexpr std::size_t setting_index(Setting s) { return static_cast<std::size_t>(s); }
constexpr std::size_t pair_index(Setting nu, Setting omega) {
  return 3 * setting_index(nu) + setting_index(omega);
}
constexpr Setting pair_first(std::size_t idx) { return static_cast<Setting>(idx / 3); }
constexpr Setting pair_second(std::size_t idx) { return static_cast<Setting>(idx % 3); }

/// Short labels "+a", "-a", "g" and pair labels such as "+a,g".
std::string setting_label(Setting s);
std::string pair_label(std::size_t idx);

/// A single-party qubit state in the {|0_o>, |1_o>} basis.
using QubitState = std::array<complex, 2>;

/// Coordinates of {|alpha>, |-alpha>, |gamma>} inside the qubit spanned by the
/// key states. |alpha> is |0_o>; the third state is represented by its
/// normalized projection |gamma'>.
struct QubitEmbedding {
  double alpha = 0.0;
  double gamma = 0.0;
  double kappa = 0.0;           // <alpha|-alpha>
  complex overlap_third{};      // <alpha|gamma>
  complex c1{};
  double c2 = 0.0;
  double xi = 0.0;              // |<alpha|gamma>|^2 + |c1|^2
  std::array<QubitState, 3> ref_coords{};  // indexed by Setting

  const QubitState& coords(Setting s) const { return ref_coords[setting_index(s)]; }
  Amplitude amplitude(Setting s) const;
};

/// Emitted-state model. Side-channel states never appear explicitly; only
/// their weight epsilon in each joint setting pair enters the analysis.
struct SourceModel {
  double alpha = 0.0;
  double gamma = 0.0;
  PairTable<double> epsilon{};
  std::array<double, 3> p{0.5, 0.5, 0.0};  // per-party selection probability

  static SourceModel uniform(double alpha, double gamma, double epsilon,
                             double p_key = 1.0);

  double p_key() const { return p[0] + p[1]; }
  Amplitude amplitude(Setting s) const;
  std::array<Amplitude, 3> amplitudes() const;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// <nu|omega> for coherent states.
complex coherent_overlap(Amplitude nu, Amplitude omega);

/// Throws DegenerateEmbeddingError when the key states cannot span a qubit or
/// when gamma = +/-alpha.
QubitEmbedding build_embedding(double alpha, double gamma);

/// Overlap between a product of emitted coherent states and its reference.
double varsigma(Setting nu, Setting omega, const QubitEmbedding& emb);

/// Lower bound on |<Psi_{nu,omega}|Phi_{nu,omega}>| given the side-channel
/// weight epsilon, clamped at zero.
double delta_pair_lower(Setting nu, Setting omega, double epsilon, const QubitEmbedding& emb);

PairTable<double> delta_table(const PairTable<double>& epsilon, const QubitEmbedding& emb);

}  // namespace mdiqkd
