#include "mdiqkd/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "mdiqkd/errors.hpp"

namespace mdiqkd {
namespace {

using nlohmann::json;

constexpr std::string_view kFig2 = R"({
  "channel": {"p_d": 1e-8, "loss_db": {"start": 0, "stop": 30, "step": 0.5}},
  "source": {"epsilon": [0, 1e-7, 1e-6, 1e-5, 1e-4], "gamma_sq": 0, "alpha": "optimize"}
})";

constexpr std::string_view kFigA4 = R"({
  "channel": {"p_d": 1e-8, "loss_db": {"start": 0, "stop": 30, "step": 0.5}},
  "source": {"epsilon": [1e-6], "gamma_sq": [0, 1e-5], "alpha": "optimize"}
})";

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    throw ConfigError(where.empty() ? "<root>" : where, "expected an object");
  }
  std::set<std::string_view> ok(allowed);
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) {
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) {
    throw ConfigError(field, "expected a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    throw ConfigError(field, "must be finite");
  }
  return x;
}

std::vector<double> number_list(const json& v, const std::string& field) {
  std::vector<double> out;
  if (v.is_array()) {
    if (v.empty()) {
      throw ConfigError(field, "list must not be empty");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
    }
  } else {
    out.push_back(number(v, field));
  }
  return out;
}

std::vector<double> loss_spec(const json& v, const std::string& field) {
  if (v.is_object()) {
    reject_unknown(v, field, {"start", "stop", "step"});
    for (const char* key : {"start", "stop", "step"}) {
      if (!v.contains(key)) {
        throw ConfigError(field + "." + key, "missing");
      }
    }
    const double start = number(v["start"], field + ".start");
    const double stop = number(v["stop"], field + ".stop");
    const double step = number(v["step"], field + ".step");
    if (!(step > 0.0) || stop < start) {
      throw ConfigError(field, "range needs step > 0 and stop >= start");
    }
    return loss_range(start, stop, step);
  }
  return number_list(v, field);
}

PairTable<double> epsilon_pairs(const json& v, const std::string& field) {
  PairTable<double> out{};
  std::array<bool, 9> seen{};
  for (const auto& [key, value] : v.items()) {
    bool matched = false;
    for (std::size_t i = 0; i < 9; ++i) {
      if (key == pair_label(i)) {
        out[i] = number(value, field + "." + key);
        seen[i] = true;
        matched = true;
      }
    }
    if (!matched) {
      throw ConfigError(field + "." + key, "unknown setting pair (expected e.g. \"+a,g\")");
    }
  }
  for (std::size_t i = 0; i < 9; ++i) {
    if (!seen[i]) {
      throw ConfigError(field + "." + pair_label(i), "missing");
    }
  }
  return out;
}

std::size_t positive_int(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ConfigError(field, "expected a positive integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig2", "fig_a3", "fig_a4"}; }

nlohmann::json preset_json(std::string_view name) {
  if (name == "fig2" || name == "fig_a3") {
    return json::parse(kFig2);
  }
  if (name == "fig_a4") {
    return json::parse(kFigA4);
  }
  throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

void apply_config(RunConfig& cfg, const nlohmann::json& doc) {
  reject_unknown(doc, "", {"channel", "source", "keyrate", "search", "oracle", "verify",
                           "output", "jobs"});

  if (doc.contains("channel")) {
    const json& ch = doc["channel"];
    reject_unknown(ch, "channel", {"p_d", "loss_db"});
    if (ch.contains("p_d")) cfg.p_d = number(ch["p_d"], "channel.p_d");
    if (ch.contains("loss_db")) cfg.loss_db = loss_spec(ch["loss_db"], "channel.loss_db");
  }
  if (doc.contains("source")) {
    const json& src = doc["source"];
    reject_unknown(src, "source", {"epsilon", "gamma_sq", "alpha"});
    if (src.contains("epsilon")) {
      const json& eps = src["epsilon"];
      if (eps.is_object()) {
        cfg.epsilon_pairs = epsilon_pairs(eps, "source.epsilon");
      } else {
        cfg.epsilon = number_list(eps, "source.epsilon");
        cfg.epsilon_pairs.reset();
      }
    }
    if (src.contains("gamma_sq")) cfg.gamma_sq = number_list(src["gamma_sq"], "source.gamma_sq");
    if (src.contains("alpha")) {
      const json& a = src["alpha"];
      if (a.is_string()) {
        if (a.get<std::string>() != "optimize") {
          throw ConfigError("source.alpha", "expected a number or \"optimize\"");
        }
        cfg.alpha.reset();
      } else {
        cfg.alpha = number(a, "source.alpha");
      }
    }
  }
  if (doc.contains("keyrate")) {
    const json& kr = doc["keyrate"];
    reject_unknown(kr, "keyrate", {"f_e", "p_key", "yield_mode"});
    if (kr.contains("f_e")) cfg.keyrate.f_e = number(kr["f_e"], "keyrate.f_e");
    if (kr.contains("p_key")) cfg.keyrate.p_key = number(kr["p_key"], "keyrate.p_key");
    if (kr.contains("yield_mode")) {
      const json& m = kr["yield_mode"];
      const std::string mode = m.is_string() ? m.get<std::string>() : "";
      if (mode == "per_outcome") {
        cfg.keyrate.yield_mode = YieldMode::per_outcome;
      } else if (mode == "success") {
        cfg.keyrate.yield_mode = YieldMode::success;
      } else {
        throw ConfigError("keyrate.yield_mode", "expected \"per_outcome\" or \"success\"");
      }
    }
  }
  if (doc.contains("search")) {
    const json& s = doc["search"];
    reject_unknown(s, "search",
                   {"alpha_min", "alpha_max", "grid_points", "tolerance", "max_iterations"});
    if (s.contains("alpha_min")) cfg.search.alpha_min = number(s["alpha_min"], "search.alpha_min");
    if (s.contains("alpha_max")) cfg.search.alpha_max = number(s["alpha_max"], "search.alpha_max");
    if (s.contains("grid_points")) {
      cfg.search.grid_points = static_cast<int>(positive_int(s["grid_points"], "search.grid_points"));
    }
    if (s.contains("tolerance")) cfg.search.tolerance = number(s["tolerance"], "search.tolerance");
    if (s.contains("max_iterations")) {
      cfg.search.max_iterations =
          static_cast<int>(positive_int(s["max_iterations"], "search.max_iterations"));
    }
  }
  if (doc.contains("oracle")) {
    const json& o = doc["oracle"];
    reject_unknown(o, "oracle", {"n_max"});
    if (o.contains("n_max")) cfg.n_max = positive_int(o["n_max"], "oracle.n_max");
  }
  if (doc.contains("verify")) {
    const json& v = doc["verify"];
    reject_unknown(v, "verify", {"seed"});
    if (v.contains("seed")) {
      if (!v["seed"].is_number_unsigned()) {
        throw ConfigError("verify.seed", "expected a non-negative integer");
      }
      cfg.seed = v["seed"].get<std::uint64_t>();
    }
  }
  if (doc.contains("output")) {
    const json& o = doc["output"];
    reject_unknown(o, "output", {"path", "format"});
    if (o.contains("path")) {
      if (!o["path"].is_string()) throw ConfigError("output.path", "expected a string");
      cfg.out_path = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      if (!o["format"].is_string()) throw ConfigError("output.format", "expected a string");
      cfg.format = o["format"].get<std::string>();
    }
  }
  if (doc.contains("jobs")) {
    cfg.jobs = static_cast<unsigned>(positive_int(doc["jobs"], "jobs"));
  }
  validate_config(cfg);
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("--config", "cannot open '" + path + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  apply_config(cfg, doc);
}

void validate_config(const RunConfig& cfg) {
  if (!(cfg.p_d >= 0.0 && cfg.p_d < 1.0)) {
    throw ConfigError("channel.p_d", "must lie in [0,1)");
  }
  for (double loss : cfg.loss_db) {
    if (!(loss >= 0.0) || !std::isfinite(loss)) {
      throw ConfigError("channel.loss_db", "must be finite and >= 0");
    }
  }
  for (double eps : cfg.epsilon) {
    if (!(eps >= 0.0 && eps <= 1.0)) {
      throw ConfigError("source.epsilon", "must lie in [0,1]");
    }
  }
  if (cfg.epsilon_pairs) {
    for (std::size_t i = 0; i < 9; ++i) {
      const double eps = (*cfg.epsilon_pairs)[i];
      if (!(eps >= 0.0 && eps <= 1.0)) {
        throw ConfigError("source.epsilon." + pair_label(i), "must lie in [0,1]");
      }
    }
  }
  for (double g : cfg.gamma_sq) {
    if (!(g >= 0.0) || !std::isfinite(g)) {
      throw ConfigError("source.gamma_sq", "must be finite and >= 0");
    }
  }
  if (cfg.alpha && !(*cfg.alpha > 0.0)) {
    throw ConfigError("source.alpha", "must be positive");
  }
  if (!(cfg.keyrate.f_e >= 1.0)) {
    throw ConfigError("keyrate.f_e", "must be >= 1");
  }
  if (!(cfg.keyrate.p_key > 0.0 && cfg.keyrate.p_key <= 1.0)) {
    throw ConfigError("keyrate.p_key", "must lie in (0,1]");
  }
  try {
    cfg.search.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("search", e.what());
  }
  if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "json") {
    throw ConfigError("output.format", "expected \"csv\" or \"json\"");
  }
  if (cfg.jobs < 1) {
    throw ConfigError("jobs", "must be >= 1");
  }
}

}  // namespace mdiqkd
