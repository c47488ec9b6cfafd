#include "mdiqkd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "mdiqkd/bounds.hpp"
#include "mdiqkd/channel.hpp"
#include "mdiqkd/errors.hpp"
#include "mdiqkd/fock_oracle.hpp"
#include "mdiqkd/keyrate.hpp"
#include "mdiqkd/virtual_bloch.hpp"

namespace mdiqkd {
namespace {

using Rng = std::mt19937_64;

void record(SuiteResult& r, double deviation, bool violated, const std::string& tuple) {
  ++r.trials;
  r.max_deviation = std::max(r.max_deviation, deviation);
  if (violated) {
    if (r.violations == 0) r.detail = tuple;
    ++r.violations;
  }
}

void finish(SuiteResult& r) {
  if (r.status == SuiteStatus::skip) return;
  r.status = r.violations == 0 ? SuiteStatus::pass : SuiteStatus::fail;
}

Eigen::VectorXcd random_state(Rng& rng, int dim) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = {g(rng), g(rng)};
  return v.normalized();
}

// 0 <= O <= 1: random unitary frame, random spectrum with occasional
// projector eigenvalues.
Eigen::MatrixXcd random_effect(Rng& rng, int dim) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) m(i, k) = {g(rng), g(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  const Eigen::MatrixXcd q = qr.householderQ();
  Eigen::VectorXd spec(dim);
  const bool projector = u(rng) < 0.2;
  for (int i = 0; i < dim; ++i) spec(i) = projector ? (u(rng) < 0.5 ? 0.0 : 1.0) : u(rng);
  return q * spec.cast<std::complex<double>>().asDiagonal() * q.adjoint();
}

Eigen::Matrix4d random_real_effect(Rng& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) m(i, k) = g(rng);
  Eigen::HouseholderQR<Eigen::Matrix4d> qr(m);
  const Eigen::Matrix4d q = qr.householderQ();
  Eigen::Vector4d spec;
  for (int i = 0; i < 4; ++i) spec(i) = u(rng);
  return q * spec.asDiagonal() * q.transpose();
}

std::string describe(std::initializer_list<std::pair<const char*, double>> fields) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [k, v] : fields) {
    os << (first ? "" : " ") << k << "=" << v;
    first = false;
  }
  return os.str();
}

}  // namespace

std::string status_name(SuiteStatus status) {
  switch (status) {
    case SuiteStatus::pass:
      return "PASS";
    case SuiteStatus::fail:
      return "FAIL";
    case SuiteStatus::skip:
      return "SKIP";
  }
  return "?";
}

std::vector<std::string> suite_names() {
  return {"oracle", "gpm", "reconstruction", "concavity", "jensen", "soundness"};
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& opts) {
  if (name == "oracle") return run_oracle_suite(opts);
  if (name == "gpm") return run_gpm_suite(opts);
  if (name == "reconstruction") return run_reconstruction_suite(opts);
  if (name == "concavity") return run_concavity_suite(opts);
  if (name == "jensen") return run_jensen_suite(opts);
  if (name == "soundness") return run_soundness_suite(opts);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

SuiteResult run_oracle_suite(const VerifyOptions& opts) {
  SuiteResult r;
  r.name = "oracle";
  const std::size_t n_max = opts.n_max.value_or(30);
  for (double alpha : {0.1, 0.3, 0.7, 1.0}) {
    for (double eta : {1.0, 0.1, 0.01}) {
      const ChannelModel ch{eta, 0.0};
      const std::array<Amplitude, 3> amps{Amplitude{alpha}, Amplitude{-alpha}, Amplitude{0.0}};
      for (std::size_t i = 0; i < 9; ++i) {
        const Amplitude nu = amps[setting_index(pair_first(i))];
        const Amplitude omega = amps[setting_index(pair_second(i))];
        ClickDistribution clicks;
        try {
          clicks = oracle_clicks(nu, omega, ch, n_max);
        } catch (const CutoffError& e) {
          r.status = SuiteStatus::skip;
          r.detail = std::string(e.what()) + " at " +
                     describe({{"alpha", alpha}, {"eta", eta}, {"n_max", double(n_max)}});
          return r;
        }
        const double dev_success = std::abs(clicks.success() - yield_success(nu, omega, ch));
        const double dev_c = std::abs(clicks.p_c_only - yield_omega_c(nu, omega, ch));
        const double dev = std::max(dev_success, dev_c);
        record(r, dev, dev > 1e-8,
               "pair " + pair_label(i) + " " + describe({{"alpha", alpha}, {"eta", eta}, {"dev", dev}}));
      }
    }
  }
  finish(r);
  return r;
}

SuiteResult run_gpm_suite(const VerifyOptions& opts) {
  SuiteResult r;
  r.name = "gpm";
  Rng rng(opts.seed);
  std::uniform_int_distribution<int> dim_dist(2, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const int dim = dim_dist(rng);
    const Eigen::VectorXcd a = random_state(rng, dim);
    Eigen::VectorXcd ref = random_state(rng, dim);
    if (trial % 2 == 0) {
      // near-identical pairs exercise the tight regime of the bound
      const double scale = std::pow(10.0, -3.0 * u(rng));
      ref = (a + scale * ref).normalized();
    }
    const Eigen::MatrixXcd effect = random_effect(rng, dim);
    const double y_a = a.dot(effect * a).real();
    const double y_r = ref.dot(effect * ref).real();
    const double delta = std::min(1.0, std::abs(a.dot(ref)));
    const double lo = deviation_lower(y_r, delta);
    const double hi = deviation_upper(y_r, delta);
    const double excess = std::max(lo - y_a, y_a - hi);
    record(r, std::max(0.0, excess), excess > 1e-12,
           describe({{"trial", double(trial)}, {"dim", double(dim)}, {"Y_A", y_a},
                     {"Y_R", y_r}, {"delta", delta}}));
  }
  finish(r);
  return r;
}

SuiteResult run_reconstruction_suite(const VerifyOptions& opts) {
  SuiteResult r;
  r.name = "reconstruction";
  Rng rng(opts.seed + 1);
  const std::array<double, 5> alphas{0.05, 0.2, 0.5, 1.0, 1.5};
  const std::array<double, 2> gammas{0.0, 1e-3};
  const int per_embedding = 100;
  for (double alpha : alphas) {
    for (double gamma : gammas) {
      const QubitEmbedding emb = build_embedding(alpha, gamma);
      const BlochSystem sys = build_bloch_system(emb);
      const VirtualEnsemble ens = virtual_states(emb);
      std::array<TwoQubitVector, 9> refs;
      for (std::size_t i = 0; i < 9; ++i) {
        refs[i] = reference_pair_state(emb, pair_first(i), pair_second(i));
      }
      for (int t = 0; t < per_embedding; ++t) {
        const Eigen::Matrix4d effect = random_real_effect(rng);
        double lhs = 0.0;
        for (std::size_t i = 0; i < 9; ++i) {
          lhs += sys.f_obj[i] * refs[i].dot(effect * refs[i]);
        }
        const double rhs =
            ens.probability(0, 0) * ens.state(0, 0).dot(effect * ens.state(0, 0)) +
            ens.probability(1, 1) * ens.state(1, 1).dot(effect * ens.state(1, 1));
        const double dev = std::abs(lhs - rhs);
        record(r, dev, dev > 1e-10, describe({{"alpha", alpha}, {"gamma", gamma}, {"dev", dev}}));
      }
    }
  }
  finish(r);
  return r;
}

SuiteResult run_concavity_suite(const VerifyOptions& opts) {
  SuiteResult r;
  r.name = "concavity";
  constexpr double kTol = 1e-12;
  constexpr int kGrid = 41;
  for (int di = 0; di <= 20; ++di) {
    const double delta = di / 20.0;
    for (int ia = 0; ia < kGrid; ++ia) {
      for (int ib = ia; ib < kGrid; ++ib) {
        const double a = ia / double(kGrid - 1);
        const double b = ib / double(kGrid - 1);
        const double m = 0.5 * (a + b);
        const double up_gap =
            0.5 * (deviation_upper(a, delta) + deviation_upper(b, delta)) - deviation_upper(m, delta);
        const double lo_gap =
            deviation_lower(m, delta) - 0.5 * (deviation_lower(a, delta) + deviation_lower(b, delta));
        const double mono = std::max(deviation_upper(a, delta) - deviation_upper(b, delta),
                                     deviation_lower(a, delta) - deviation_lower(b, delta));
        const double dev = std::max({up_gap, lo_gap, mono});
        record(r, std::max(0.0, dev), dev > kTol,
               describe({{"delta", delta}, {"a", a}, {"b", b}, {"gap", dev}}));
      }
      // looser overlap floor can only raise the upper bound
      for (int dj = 0; dj < di; ++dj) {
        const double a = ia / double(kGrid - 1);
        const double gap = deviation_upper(a, delta) - deviation_upper(a, dj / 20.0);
        record(r, std::max(0.0, gap), gap > kTol,
               describe({{"delta", delta}, {"delta_lower", dj / 20.0}, {"Y", a}}));
      }
    }
  }

  // Gamma_ref^U is concave in the nine yields.
  Rng rng(opts.seed + 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double alpha : {0.1, 0.3, 0.8}) {
    for (double eps : {0.0, 1e-6, 1e-3}) {
      const QubitEmbedding emb = build_embedding(alpha, 0.0);
      const BlochSystem sys = build_bloch_system(emb);
      PairTable<double> eps_pairs{};
      eps_pairs.fill(eps);
      const PairTable<double> deltas = delta_table(eps_pairs, emb);
      for (int t = 0; t < 300; ++t) {
        PairTable<double> ya{}, yb{}, ym{};
        for (std::size_t i = 0; i < 9; ++i) {
          ya[i] = u(rng);
          yb[i] = u(rng);
          ym[i] = 0.5 * (ya[i] + yb[i]);
        }
        const double gap = 0.5 * (gamma_ref_upper(ya, deltas, sys.f_obj) +
                                  gamma_ref_upper(yb, deltas, sys.f_obj)) -
                           gamma_ref_upper(ym, deltas, sys.f_obj);
        const double scale = std::max(1.0, std::abs(gamma_ref_upper(ym, deltas, sys.f_obj)));
        record(r, std::max(0.0, gap), gap > kTol * scale,
               describe({{"alpha", alpha}, {"eps", eps}, {"gap", gap}}));
      }
    }
  }
  finish(r);
  return r;
}

SuiteResult run_jensen_suite(const VerifyOptions& opts) {
  SuiteResult r;
  r.name = "jensen";
  Rng rng(opts.seed + 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr int kSequences = 100;
  constexpr int kRounds = 40;

  for (int seq = 0; seq <= kSequences; ++seq) {
    const bool constant = seq == kSequences;
    const double alpha = 0.05 + 0.5 * u(rng);
    const double eps = std::pow(10.0, -7.0 + 3.0 * u(rng));
    const QubitEmbedding emb = build_embedding(alpha, 0.0);
    const BlochSystem sys = build_bloch_system(emb);
    PairTable<double> eps_pairs{};
    eps_pairs.fill(eps);

    AggregatedInputs agg;
    agg.rounds = kRounds;
    agg.deltas = delta_table(eps_pairs, emb);
    agg.delta_vir_L = delta_vir_lower(eps_pairs);
    agg.f_obj = sys.f_obj;
    const std::array<double, 3> p{0.4, 0.4, 0.2};
    double test_mass = 0.0;
    for (std::size_t i = 0; i < 9; ++i) {
      agg.p_pair[i] = p[setting_index(pair_first(i))] * p[setting_index(pair_second(i))];
      const bool key = pair_first(i) != Setting::third && pair_second(i) != Setting::third;
      agg.p_test[i] = key ? 0.1 : 1.0;
      test_mass += agg.p_pair[i] * agg.p_test[i];
    }
    agg.p_key_round = 1.0 - test_mass;

    const std::array<Amplitude, 3> amps{Amplitude{alpha}, Amplitude{-alpha}, Amplitude{0.0}};
    const double base_loss = 20.0 * u(rng);
    double per_round_sum = 0.0;
    for (int n = 0; n < kRounds; ++n) {
      const double loss = constant ? base_loss : base_loss + 10.0 * u(rng);
      const ChannelModel ch = ChannelModel::from_loss_db(loss, 1e-8);
      const YieldTable yt = yield_table(amps, ch);
      const double ref = gamma_ref_upper(yt.y_c, agg.deltas, agg.f_obj);
      per_round_sum +=
          agg.p_key_round * deviation_upper(std::clamp(ref, 0.0, 1.0), agg.delta_vir_L);
      for (std::size_t i = 0; i < 9; ++i) {
        agg.counts[i] += yt.y_c[i] * agg.p_pair[i] * agg.p_test[i];
      }
    }
    const double aggregated = aggregated_gamma_upper(agg);
    if (constant) {
      const double dev = std::abs(aggregated - per_round_sum);
      record(r, dev, dev > 1e-10, describe({{"constant", 1}, {"dev", dev}}));
    } else {
      const double shortfall = per_round_sum / kRounds - aggregated / kRounds;
      record(r, std::max(0.0, shortfall), shortfall > 1e-10,
             describe({{"alpha", alpha}, {"eps", eps}, {"shortfall", shortfall}}));
    }
  }
  finish(r);
  return r;
}

SuiteResult run_soundness_suite(const VerifyOptions& opts) {
  SuiteResult r;
  r.name = "soundness";
  const double alpha = 0.3;
  PairTable<double> eps{};
  for (double eta : {1.0, 0.1}) {
    const ChannelModel ch{eta, 0.0};
    PhaseErrorOracle oracle;
    try {
      oracle = virtual_phase_error_oracle(alpha, ch, opts.n_max.value_or(default_cutoff(std::sqrt(2.0) * alpha)));
    } catch (const CutoffError& e) {
      r.status = SuiteStatus::skip;
      r.detail = e.what();
      return r;
    }
    for (YieldMode mode : {YieldMode::per_outcome, YieldMode::success}) {
      KeyRateOptions kopts;
      kopts.yield_mode = mode;
      const KeyRatePoint pt = key_rate(alpha, 0.0, eps, ch, kopts);
      const double shortfall = oracle.p_identical_x_given_success - pt.e_ph_U;
      record(r, std::max(0.0, shortfall), shortfall > 0.0,
             describe({{"eta", eta}, {"e_ph_U", pt.e_ph_U},
                       {"e_ph_true", oracle.p_identical_x_given_success}}));
    }
  }
  finish(r);
  return r;
}

}  // namespace mdiqkd
