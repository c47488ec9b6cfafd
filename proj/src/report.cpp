#include "mdiqkd/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace mdiqkd {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_row(const KeyRatePoint& pt) {
  std::string row;
  for (double v : {pt.loss_db, pt.epsilon, pt.gamma_sq, pt.alpha, pt.R, pt.e_ph_U, pt.e_bit,
                   pt.Q, pt.gamma_obs}) {
    row += format_double(v);
    row += ',';
  }
  row += flag_name(pt.flag);
  return row;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const OptimizedPoint& p : result.points) {
    out += csv_row(p.point);
    out += '\n';
  }
  return out;
}

std::vector<SweepCsvRow> parse_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader) {
    throw std::runtime_error("sweep CSV header mismatch");
  }
  std::vector<SweepCsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) {
      throw std::runtime_error("sweep CSV row has " + std::to_string(cells.size()) + " columns");
    }
    SweepCsvRow r;
    double* fields[] = {&r.loss_db, &r.epsilon, &r.gamma_sq, &r.alpha_opt, &r.R,
                        &r.e_ph_U,  &r.e_bit,   &r.Q,        &r.gamma_obs};
    for (std::size_t i = 0; i < 9; ++i) *fields[i] = std::stod(cells[i]);
    r.flag = cells[9];
    rows.push_back(std::move(r));
  }
  return rows;
}

nlohmann::json point_json(const KeyRatePoint& pt) {
  using nlohmann::json;
  json j;
  j["loss_db"] = pt.loss_db;
  j["epsilon"] = pt.epsilon;
  j["alpha"] = pt.alpha;
  j["gamma_sq"] = pt.gamma_sq;
  j["R"] = pt.R;
  j["e_ph_U"] = pt.e_ph_U;
  j["e_bit"] = pt.e_bit;
  j["Q"] = pt.Q;
  j["gamma_obs"] = pt.gamma_obs;
  j["f_e"] = pt.f_e;
  j["flag"] = flag_name(pt.flag);
  if (!pt.reason.empty()) j["reason"] = pt.reason;
  if (pt.flag == PointFlag::ok || pt.flag == PointFlag::zero_rate) {
    json inter;
    inter["yield_mode"] = yield_mode_name(pt.yield_mode);
    inter["kappa"] = pt.kappa;
    inter["xi"] = pt.xi;
    inter["delta_vir_L"] = pt.delta_vir_L;
    inter["gamma_ref_U"] = pt.gamma_ref_U;
    inter["gamma_U"] = pt.gamma_U;
    json y_success, y_c, y_d, deltas, f_obj, eps;
    for (std::size_t i = 0; i < 9; ++i) {
      const std::string key = pair_label(i);
      y_success[key] = pt.yields.y_success[i];
      y_c[key] = pt.yields.y_c[i];
      y_d[key] = pt.yields.y_d[i];
      deltas[key] = pt.deltas[i];
      f_obj[key] = pt.f_obj[i];
      eps[key] = pt.epsilon_pairs[i];
    }
    inter["epsilon"] = eps;
    inter["yields"] = {{"success", y_success}, {"c", y_c}, {"d", y_d}};
    inter["delta_L"] = deltas;
    inter["f_obj"] = f_obj;
    if (pt.yield_mode == YieldMode::per_outcome) {
      json outcomes = json::array();
      for (const PhaseErrorBound& b : pt.outcome_bounds) {
        outcomes.push_back(
            {{"gamma_ref_U", b.gamma_ref_U}, {"gamma_U", b.gamma_U}, {"e_ph_U", b.e_ph_U}});
      }
      inter["outcomes"] = outcomes;
    }
    j["intermediates"] = inter;
  }
  return j;
}

nlohmann::json point_json(const OptimizedPoint& pt) {
  nlohmann::json j = point_json(pt.point);
  j["optimizer"] = {{"evaluations", pt.trace.evaluations},
                    {"bracket_width", pt.trace.bracket_width},
                    {"grid_best_alpha", pt.trace.grid_best_alpha}};
  return j;
}

nlohmann::json sweep_json(const SweepResult& result) {
  nlohmann::json arr = nlohmann::json::array();
  for (const OptimizedPoint& p : result.points) {
    arr.push_back(point_json(p));
  }
  return arr;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  fs::rename(tmp, target);
}

}  // namespace mdiqkd
