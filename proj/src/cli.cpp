#include "mdiqkd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdiqkd/config.hpp"
#include "mdiqkd/errors.hpp"
#include "mdiqkd/keyrate.hpp"
#include "mdiqkd/report.hpp"
#include "mdiqkd/verify.hpp"

namespace mdiqkd {
namespace {

using nlohmann::json;

// Raw flag values, folded into a RunConfig after parsing.
struct Flags {
  std::string config_path;
  std::string preset;
  std::string out_path;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> suites;
  std::optional<unsigned> jobs;
  std::vector<double> loss_db;
  std::vector<double> epsilon;
  std::vector<double> gamma_sq;
  std::string alpha;
  std::optional<double> p_d;
  std::optional<double> f_e;
  std::optional<std::size_t> n_max;
  std::string yield_mode;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON config file");
  sub->add_option("--preset", f.preset, "fig2, fig_a3 or fig_a4");
  sub->add_option("--out", f.out_path, "output path (default stdout)");
  sub->add_option("--format", f.format, "csv or json");
  sub->add_option("--jobs", f.jobs, "worker threads for sweeps");
  sub->add_option("--loss-db", f.loss_db, "overall loss in dB (list allowed)")->delimiter(',');
  sub->add_option("--epsilon", f.epsilon, "uniform side-channel weight (list allowed)")
      ->delimiter(',');
  sub->add_option("--gamma-sq", f.gamma_sq, "third-state intensity |gamma|^2 (list allowed)")
      ->delimiter(',');
  sub->add_option("--alpha", f.alpha, "signal amplitude, or 'optimize'");
  sub->add_option("--p-d", f.p_d, "dark-count probability");
  sub->add_option("--f-e", f.f_e, "error-correction efficiency");
  sub->add_option("--yield-mode", f.yield_mode, "per_outcome or success");
}

json json_list(const std::vector<double>& xs) {
  json arr = json::array();
  for (double x : xs) arr.push_back(x);
  return arr;
}

RunConfig build_config(const Flags& f, bool default_preset) {
  RunConfig cfg;
  if (!f.preset.empty()) {
    apply_config(cfg, preset_json(f.preset));
  } else if (default_preset && f.config_path.empty()) {
    apply_config(cfg, preset_json("fig2"));
  }
  if (!f.config_path.empty()) {
    apply_config_file(cfg, f.config_path);
  }

  json over = json::object();
  if (!f.loss_db.empty()) over["channel"]["loss_db"] = json_list(f.loss_db);
  if (f.p_d) over["channel"]["p_d"] = *f.p_d;
  if (!f.epsilon.empty()) over["source"]["epsilon"] = json_list(f.epsilon);
  if (!f.gamma_sq.empty()) over["source"]["gamma_sq"] = json_list(f.gamma_sq);
  if (!f.alpha.empty()) {
    if (f.alpha == "optimize") {
      over["source"]["alpha"] = "optimize";
    } else {
      try {
        std::size_t used = 0;
        const double a = std::stod(f.alpha, &used);
        if (used != f.alpha.size()) throw std::invalid_argument("trailing characters");
        over["source"]["alpha"] = a;
      } catch (const std::exception&) {
        throw ConfigError("source.alpha", "expected a number or \"optimize\"");
      }
    }
  }
  if (f.f_e) over["keyrate"]["f_e"] = *f.f_e;
  if (!f.yield_mode.empty()) over["keyrate"]["yield_mode"] = f.yield_mode;
  if (f.n_max) over["oracle"]["n_max"] = *f.n_max;
  if (f.seed) over["verify"]["seed"] = *f.seed;
  if (!f.out_path.empty()) over["output"]["path"] = f.out_path;
  if (!f.format.empty()) over["output"]["format"] = f.format;
  if (f.jobs) over["jobs"] = *f.jobs;
  apply_config(cfg, over);
  return cfg;
}

void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << content;
  } else {
    atomic_write(cfg.out_path, content);
  }
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string keyrate_text(const KeyRatePoint& pt, const std::optional<OptimizerTrace>& trace) {
  std::ostringstream os;
  auto line = [&](const char* key, const std::string& value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%-13s", key);
    os << buf << value << '\n';
  };
  line("loss_db", fmt(pt.loss_db));
  line("epsilon", fmt(pt.epsilon));
  line("gamma_sq", fmt(pt.gamma_sq));
  if (trace) {
    line("alpha", fmt(pt.alpha) + " (optimized, " + std::to_string(trace->evaluations) +
                      " evaluations)");
  } else {
    line("alpha", fmt(pt.alpha) + " (fixed)");
  }
  line("yield_mode", yield_mode_name(pt.yield_mode));
  line("Q", fmt(pt.Q));
  line("gamma_obs", fmt(pt.gamma_obs));
  line("e_bit", fmt(pt.e_bit));
  line("Gamma_ref_U", fmt(pt.gamma_ref_U));
  line("Gamma_U", fmt(pt.gamma_U));
  line("e_ph_U", fmt(pt.e_ph_U));
  line("R", fmt(pt.R));
  line("flag", flag_name(pt.flag));
  if (!pt.reason.empty()) line("reason", pt.reason);
  return os.str();
}

int cmd_keyrate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.loss_db.size() != 1) {
    throw ConfigError("channel.loss_db", "keyrate takes a single loss value");
  }
  if (cfg.gamma_sq.size() != 1) {
    throw ConfigError("source.gamma_sq", "keyrate takes a single value");
  }
  PairTable<double> eps{};
  if (cfg.epsilon_pairs) {
    eps = *cfg.epsilon_pairs;
  } else if (cfg.epsilon.size() == 1) {
    eps.fill(cfg.epsilon.front());
  } else {
    throw ConfigError("source.epsilon", "keyrate takes a single value or a per-pair map");
  }
  const double loss = cfg.loss_db.front();
  const double gamma_sq = cfg.gamma_sq.front();
  const double gamma = std::sqrt(gamma_sq);

  std::string content;
  if (cfg.alpha) {
    KeyRatePoint pt =
        evaluate_point(*cfg.alpha, gamma, eps, ChannelModel::from_loss_db(loss, cfg.p_d), cfg.keyrate);
    pt.loss_db = loss;
    pt.gamma_sq = gamma_sq;
    if (cfg.format == "json") {
      content = point_json(pt).dump(2) + "\n";
    } else if (cfg.format == "csv") {
      content = std::string(kSweepCsvHeader) + "\n" + csv_row(pt) + "\n";
    } else {
      content = keyrate_text(pt, std::nullopt);
    }
  } else {
    OptimizedPoint opt = optimize_alpha(loss, eps, gamma, cfg.p_d, cfg.keyrate, cfg.search);
    opt.point.gamma_sq = gamma_sq;
    if (cfg.format == "json") {
      content = point_json(opt).dump(2) + "\n";
    } else if (cfg.format == "csv") {
      content = std::string(kSweepCsvHeader) + "\n" + csv_row(opt.point) + "\n";
    } else {
      content = keyrate_text(opt.point, opt.trace);
    }
  }
  emit(cfg, content, out);
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.epsilon_pairs) {
    throw ConfigError("source.epsilon", "sweep takes uniform values; per-pair maps need keyrate");
  }
  SweepConfig sc;
  sc.loss_grid = cfg.loss_db;
  sc.epsilon_list = cfg.epsilon;
  sc.gamma_sq_list = cfg.gamma_sq;
  sc.p_d = cfg.p_d;
  sc.options = cfg.keyrate;
  sc.search = cfg.search;
  sc.jobs = cfg.jobs;

  SweepResult result;
  if (cfg.alpha) {
    // fixed amplitude: same ordering as the optimizing sweep
    std::vector<double> losses = sc.loss_grid;
    std::sort(losses.begin(), losses.end());
    for (double eps_value : sc.epsilon_list) {
      PairTable<double> eps{};
      eps.fill(eps_value);
      for (double gsq : sc.gamma_sq_list) {
        for (double loss : losses) {
          OptimizedPoint op;
          op.point = evaluate_point(*cfg.alpha, std::sqrt(gsq), eps,
                                    ChannelModel::from_loss_db(loss, cfg.p_d), cfg.keyrate);
          op.point.loss_db = loss;
          op.point.gamma_sq = gsq;
          op.trace.evaluations = 1;
          op.trace.grid_best_alpha = *cfg.alpha;
          result.points.push_back(std::move(op));
        }
      }
    }
  } else {
    result = sweep(sc);
  }

  const std::string content =
      cfg.format == "json" ? sweep_json(result).dump(2) + "\n" : sweep_csv(result);
  emit(cfg, content, out);
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& suites, std::ostream& out) {
  const std::vector<std::string> all = suite_names();
  for (const std::string& name : suites) {
    if (std::find(all.begin(), all.end(), name) == all.end()) {
      throw ConfigError("--suite", "unknown suite '" + name + "'");
    }
  }
  VerifyOptions opts;
  opts.seed = cfg.seed;
  opts.n_max = cfg.n_max;

  bool ok = true;
  std::ostringstream os;
  for (const std::string& name : suites.empty() ? all : suites) {
    const SuiteResult r = run_suite(name, opts);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-15s %s  trials=%zu violations=%zu max_deviation=%.3e",
                  r.name.c_str(), status_name(r.status).c_str(), r.trials, r.violations,
                  r.max_deviation);
    os << buf << '\n';
    if (r.status != SuiteStatus::pass) {
      ok = false;
      os << "  " << (r.status == SuiteStatus::skip ? "skipped: " : "first violation: ")
         << r.detail << '\n';
    }
  }
  os << (ok ? "verify: all suites passed\n" : "verify: FAILED\n");
  out << os.str();
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Side-channel secure MDI-QKD key-rate engine"};
  app.name("mdiqkd");
  app.require_subcommand(1);

  Flags keyrate_flags, sweep_flags, verify_flags;
  CLI::App* keyrate = app.add_subcommand("keyrate", "key rate at a single loss point");
  add_common(keyrate, keyrate_flags);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "optimized key rate over loss and epsilon grids");
  add_common(sweep_cmd, sweep_flags);
  CLI::App* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("--config", verify_flags.config_path, "JSON config file");
  verify->add_option("--seed", verify_flags.seed, "random seed (default 0)");
  verify->add_option("--suite", verify_flags.suites,
                     "oracle, gpm, reconstruction, concavity, jensen, soundness (repeatable)");
  verify->add_option("--n-max", verify_flags.n_max, "photon-number cutoff for the oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (keyrate->parsed()) {
      return cmd_keyrate(build_config(keyrate_flags, false), out);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(build_config(sweep_flags, true), out);
    }
    return cmd_verify(build_config(verify_flags, false), verify_flags.suites, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace mdiqkd
