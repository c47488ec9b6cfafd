#include <doctest.h>

#include <cmath>

#include "mdiqkd/errors.hpp"
#include "mdiqkd/fock_oracle.hpp"
#include "mdiqkd/states.hpp"

using namespace mdiqkd;

TEST_CASE("coherent overlap") {
  CHECK(std::abs(coherent_overlap(Amplitude{0.7}, Amplitude{0.7}) - 1.0) < 1e-15);
  CHECK(std::abs(coherent_overlap(Amplitude{0.0}, Amplitude{0.0}) - 1.0) < 1e-15);
  const complex z = coherent_overlap(Amplitude{0.3}, Amplitude{-0.3});
  CHECK(z.real() == doctest::Approx(0.835270211411272).epsilon(1e-14));
  CHECK(std::abs(z.imag()) < 1e-16);

  // number-basis series
  const FockState a = coherent_fock(Amplitude{0.3}, 40);
  const FockState b = coherent_fock(Amplitude{-0.3}, 40);
  CHECK(std::abs(a.inner(b) - z) < 1e-14);

  // complex amplitudes: <nu|omega> = conj(<omega|nu>)
  const Amplitude nu{complex{0.2, 0.4}};
  const Amplitude om{complex{-0.5, 0.1}};
  CHECK(std::abs(coherent_overlap(nu, om) - std::conj(coherent_overlap(om, nu))) < 1e-15);
  const FockState fn = coherent_fock(nu, 40);
  const FockState fo = coherent_fock(om, 40);
  CHECK(std::abs(fn.inner(fo) - coherent_overlap(nu, om)) < 1e-14);
}

TEST_CASE("embedding at alpha 0.5 with vacuum third state") {
  const QubitEmbedding emb = build_embedding(0.5, 0.0);
  CHECK(emb.kappa == doctest::Approx(0.6065306597126334).epsilon(1e-15));
  CHECK(emb.c1.real() == doctest::Approx(0.436741165988288).epsilon(1e-13));
  CHECK(emb.xi == doctest::Approx(0.969543629140214585).epsilon(1e-14));
  CHECK(emb.c2 * emb.c2 == doctest::Approx(0.030456370859785).epsilon(1e-11));
  CHECK(std::norm(emb.overlap_third) + std::norm(emb.c1) + emb.c2 * emb.c2 ==
        doctest::Approx(1.0).epsilon(1e-12));
  for (Setting s : kSettings) {
    const QubitState& q = emb.coords(s);
    CHECK(std::norm(q[0]) + std::norm(q[1]) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const QubitState& minus = emb.coords(Setting::minus_alpha);
  CHECK(minus[0].real() == doctest::Approx(emb.kappa));
  CHECK(minus[1].real() == doctest::Approx(std::sqrt(1.0 - emb.kappa * emb.kappa)));
}

TEST_CASE("embedding reproduces the coherent-state Gram matrix on the key span") {
  for (double alpha : {0.05, 0.3, 1.0}) {
    for (double gamma : {0.0, 0.01, 0.2}) {
      const QubitEmbedding emb = build_embedding(alpha, gamma);
      const QubitState& a = emb.coords(Setting::plus_alpha);
      const QubitState& m = emb.coords(Setting::minus_alpha);
      const QubitState& g = emb.coords(Setting::third);
      auto dot = [](const QubitState& x, const QubitState& y) {
        return std::conj(x[0]) * y[0] + std::conj(x[1]) * y[1];
      };
      CHECK(std::abs(dot(a, m) - coherent_overlap(Amplitude{alpha}, Amplitude{-alpha})) < 1e-14);
      // the projected third state, rescaled by sqrt(xi), keeps the true overlaps
      const double root_xi = std::sqrt(emb.xi);
      CHECK(std::abs(root_xi * dot(a, g) - coherent_overlap(Amplitude{alpha}, Amplitude{gamma})) <
            1e-12);
      CHECK(std::abs(root_xi * dot(m, g) - coherent_overlap(Amplitude{-alpha}, Amplitude{gamma})) <
            1e-12);
    }
  }
}

TEST_CASE("small alpha keeps vacuum inside the key span") {
  CHECK(build_embedding(0.01, 0.0).xi > 0.999);
  CHECK(build_embedding(0.05, 0.0).xi > build_embedding(0.5, 0.0).xi);
}

TEST_CASE("degenerate embeddings") {
  CHECK_THROWS_AS(build_embedding(0.3, 0.3), DegenerateEmbeddingError);
  CHECK_THROWS_AS(build_embedding(0.0, 0.0), DegenerateEmbeddingError);
  CHECK_THROWS_AS(build_embedding(-0.1, 0.0), DegenerateEmbeddingError);
  CHECK_THROWS_AS(build_embedding(1e-9, 0.0), DegenerateEmbeddingError);
  CHECK_NOTHROW(build_embedding(0.3, 0.3 + 1e-6));
}

TEST_CASE("varsigma by number of third-state members") {
  const QubitEmbedding emb = build_embedding(0.5, 0.0);
  CHECK(varsigma(Setting::third, Setting::third, emb) == emb.xi);
  CHECK(varsigma(Setting::plus_alpha, Setting::minus_alpha, emb) == 1.0);
  CHECK(varsigma(Setting::plus_alpha, Setting::third, emb) == doctest::Approx(std::sqrt(emb.xi)));
  CHECK(varsigma(Setting::third, Setting::minus_alpha, emb) == doctest::Approx(std::sqrt(emb.xi)));
}

TEST_CASE("pair fidelity floors") {
  const QubitEmbedding emb = build_embedding(0.5, 0.0);
  for (std::size_t i = 0; i < 9; ++i) {
    const Setting nu = pair_first(i);
    const Setting om = pair_second(i);
    CHECK(delta_pair_lower(nu, om, 1.0, emb) == 0.0);
    if (varsigma(nu, om, emb) == 1.0) {
      CHECK(delta_pair_lower(nu, om, 0.0, emb) == 1.0);
    } else {
      CHECK(delta_pair_lower(nu, om, 0.0, emb) == doctest::Approx(varsigma(nu, om, emb)));
    }
  }
  CHECK(delta_pair_lower(Setting::plus_alpha, Setting::plus_alpha, 1e-6, emb) ==
        doctest::Approx(0.9999994999998750).epsilon(1e-15));

  // the orthogonal term lowers the floor when varsigma < 1
  const double sc = emb.xi;
  const double expected = std::sqrt(1 - 1e-3) * sc - std::sqrt(1e-3) * std::sqrt(1 - sc * sc);
  CHECK(delta_pair_lower(Setting::third, Setting::third, 1e-3, emb) == doctest::Approx(expected));

  PairTable<double> eps{};
  eps.fill(1e-6);
  const PairTable<double> table = delta_table(eps, emb);
  CHECK(table[pair_index(Setting::plus_alpha, Setting::third)] ==
        doctest::Approx(delta_pair_lower(Setting::plus_alpha, Setting::third, 1e-6, emb)));
}

TEST_CASE("pair indexing and labels") {
  CHECK(pair_index(Setting::plus_alpha, Setting::plus_alpha) == 0);
  CHECK(pair_index(Setting::minus_alpha, Setting::third) == 5);
  CHECK(pair_first(7) == Setting::third);
  CHECK(pair_second(7) == Setting::minus_alpha);
  CHECK(pair_label(2) == "+a,g");
  CHECK(pair_label(8) == "g,g");
}

TEST_CASE("source model validation") {
  SourceModel src = SourceModel::uniform(0.3, 0.0, 1e-6);
  CHECK_NOTHROW(src.validate());
  CHECK(src.p_key() == doctest::Approx(1.0));
  src.epsilon[4] = -1e-9;
  CHECK_THROWS_AS(src.validate(), std::invalid_argument);
  src = SourceModel::uniform(0.3, 0.0, 0.0, 0.8);
  CHECK(src.p[2] == doctest::Approx(0.2));
  src.p[0] = 0.9;
  CHECK_THROWS_AS(src.validate(), std::invalid_argument);
  CHECK_THROWS_AS(SourceModel::uniform(0.0, 0.0, 0.0).validate(), std::invalid_argument);
}
