#include <doctest.h>

#include <cmath>

#include "mdiqkd/channel.hpp"
#include "mdiqkd/errors.hpp"
#include "mdiqkd/fock_oracle.hpp"

using namespace mdiqkd;

TEST_CASE("coherent states in the number basis") {
  const FockState vac = coherent_fock(Amplitude{0.0}, 10);
  CHECK(vac.at(0) == complex{1.0, 0.0});
  for (std::size_t n = 1; n <= 10; ++n) CHECK(vac.at(n) == complex{0.0, 0.0});

  CHECK_THROWS_AS(coherent_fock(Amplitude{1.0}, 10), CutoffError);
  for (std::size_t n_max : {20u, 40u}) {
    const FockState s = coherent_fock(Amplitude{1.0}, n_max);
    CHECK(std::abs(s.norm_squared() - 1.0) <= s.tail_bound() + 1e-15);
  }
  CHECK(coherent_fock(Amplitude{1.0}, 40).tail_bound() < coherent_fock(Amplitude{1.0}, 20).tail_bound());

  const FockState a = coherent_fock(Amplitude{0.8}, 30);
  const FockState b = coherent_fock(Amplitude{complex{0.1, -0.5}}, 30);
  CHECK(std::abs(a.inner(b) - coherent_overlap(Amplitude{0.8}, Amplitude{complex{0.1, -0.5}})) <
        1e-12);
}

TEST_CASE("cutoff rule") {
  CHECK(default_cutoff(0.0) == 20);
  CHECK(default_cutoff(2.0) == 47);
  for (double alpha : {0.1, 1.0, 2.0, 3.0}) {
    CHECK_NOTHROW(coherent_fock(Amplitude{alpha}, default_cutoff(alpha)));
  }
  CHECK(coherent_tail(Amplitude{0.0}, 3) == 0.0);
  // P(n > 1) for mean 0.5
  CHECK(coherent_tail(Amplitude{std::sqrt(0.5)}, 1) ==
        doctest::Approx(1.0 - std::exp(-0.5) * 1.5).epsilon(1e-13));
}

TEST_CASE("balanced beamsplitter") {
  FockState one = FockState::two_mode(2);
  one.at(1, 0) = 1.0;
  const FockState out = beamsplitter_5050(one);
  CHECK(out.at(1, 0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(out.at(0, 1).real() == doctest::Approx(1.0 / std::sqrt(2.0)));

  FockState other = FockState::two_mode(2);
  other.at(0, 1) = 1.0;
  const FockState out2 = beamsplitter_5050(other);
  CHECK(out2.at(1, 0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(out2.at(0, 1).real() == doctest::Approx(-1.0 / std::sqrt(2.0)));

  // Hong-Ou-Mandel: |1,1> leaves no coincidences
  FockState pair = FockState::two_mode(2);
  pair.at(1, 1) = 1.0;
  const FockState hom = beamsplitter_5050(pair);
  CHECK(std::abs(hom.at(1, 1)) < 1e-15);
  CHECK(std::norm(hom.at(2, 0)) == doctest::Approx(0.5));
  CHECK(std::norm(hom.at(0, 2)) == doctest::Approx(0.5));

  const double beta = 0.7;
  const FockState in = tensor(coherent_fock(Amplitude{beta}, 30), coherent_fock(Amplitude{beta}, 30));
  const FockState mixed = beamsplitter_5050(in);
  const FockState expected = tensor(coherent_fock(Amplitude{std::sqrt(2.0) * beta}, 60),
                                    coherent_fock(Amplitude{0.0}, 60));
  CHECK(std::abs(mixed.inner(expected) - 1.0) < 1e-12);
  CHECK(mixed.norm_squared() == doctest::Approx(in.norm_squared()).epsilon(1e-13));
}

TEST_CASE("threshold clicks") {
  FockState vac = FockState::two_mode(3);
  vac.at(0, 0) = 1.0;
  const ClickDistribution none = threshold_click_distribution(vac, 0.0);
  CHECK(none.p_none == 1.0);
  CHECK(none.success() == 0.0);

  const ClickDistribution dark = threshold_click_distribution(vac, 0.01);
  CHECK(dark.p_c_only == doctest::Approx(0.01 * 0.99));
  CHECK(dark.p_both == doctest::Approx(1e-4));

  const double alpha = 0.4;
  const FockState c = tensor(coherent_fock(Amplitude{std::sqrt(2.0) * alpha}, 30),
                             coherent_fock(Amplitude{0.0}, 30));
  const ClickDistribution d = threshold_click_distribution(c, 0.0);
  CHECK(d.p_c_only == doctest::Approx(1.0 - std::exp(-2 * alpha * alpha)).epsilon(1e-13));
  CHECK(d.p_d_only == 0.0);
  CHECK(d.p_c_only + d.p_d_only + d.p_both + d.p_none == doctest::Approx(1.0));
}

TEST_CASE("loss in the amplitude domain") {
  CHECK(apply_loss(Amplitude{0.6}, 1.0).value == complex{0.6, 0.0});
  const ChannelModel ch{0.01, 0.0};
  const Amplitude lossy = apply_loss(Amplitude{1.0}, ch.arm_transmittance());
  CHECK(lossy.intensity() == doctest::Approx(0.1));
  CHECK_THROWS_AS(apply_loss(Amplitude{1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("number-basis clicks agree with the analytic yields") {
  for (double eta : {1.0, 0.1}) {
    const ChannelModel ch{eta, 0.0};
    const Amplitude nu{0.5};
    for (double w : {0.5, -0.5, 0.0, 0.2}) {
      const ClickDistribution d = oracle_clicks(nu, Amplitude{w}, ch, 30);
      CHECK(std::abs(d.p_c_only - yield_omega_c(nu, Amplitude{w}, ch)) < 1e-12);
      CHECK(std::abs(d.p_d_only - yield_omega_c(nu, Amplitude{-w}, ch)) < 1e-12);
      CHECK(std::abs(d.success() - yield_success(nu, Amplitude{w}, ch)) < 1e-12);
    }
  }
}

TEST_CASE("virtual phase-error oracle") {
  CHECK_THROWS_AS(virtual_phase_error_oracle(0.3, ChannelModel{1.0, 1e-8}, 20),
                  std::invalid_argument);

  // Without loss the ancillas see only the photon-number parity of the
  // constructive port: odd photons give the anti-correlated x outcomes.
  for (double alpha : {0.05, 0.3}) {
    const PhaseErrorOracle o = virtual_phase_error_oracle(alpha, ChannelModel{1.0, 0.0}, 25);
    const double x = 2 * alpha * alpha;
    const double odd = std::sinh(x);
    const double even = std::cosh(x) - 1.0;
    CHECK(o.smallness_witness == doctest::Approx(odd / (odd + even)).epsilon(1e-12));
    CHECK(o.p_identical_x_given_success == doctest::Approx(even / (odd + even)).epsilon(1e-12));
    CHECK(o.p_identical_c == doctest::Approx(o.p_identical_d).epsilon(1e-12));
    CHECK(o.p_success == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
  }
  CHECK(virtual_phase_error_oracle(0.05, ChannelModel{1.0, 0.0}, 25).smallness_witness ==
        doctest::Approx(0.9975062396).epsilon(1e-9));

  // Loss leaks which-path information and can only raise the error rate.
  const PhaseErrorOracle lossless = virtual_phase_error_oracle(0.3, ChannelModel{1.0, 0.0}, 25);
  const PhaseErrorOracle lossy = virtual_phase_error_oracle(0.3, ChannelModel{0.1, 0.0}, 25);
  CHECK(lossy.p_identical_x_given_success > lossless.p_identical_x_given_success);
  CHECK(lossy.p_identical_x_given_success < 0.5);
  CHECK(lossy.p_success == doctest::Approx(1.0 - std::exp(-2 * 0.09 * std::sqrt(0.1))).epsilon(1e-12));
}
