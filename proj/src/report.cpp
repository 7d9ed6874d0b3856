#include "aptk/report.hpp"

#include <fstream>

namespace aptk {

nlohmann::ordered_json to_json(const ClassReport& r) {
  nlohmann::ordered_json j;
  j["class"] = to_string(r.tested);
  j["verdict"] = to_string(r.verdict);
  j["epsilon"] = r.epsilon;
  j["resolution"] = {{"grid_step", r.grid_step},
                     {"window", {r.window.first, r.window.second}}};
  if (r.chosen_L) j["chosen_L"] = *r.chosen_L;
  j["accepted_taus"] = r.accepted_taus;
  auto taus = nlohmann::ordered_json::array();
  for (const auto& ev : r.per_tau) {
    nlohmann::ordered_json t;
    t["tau"] = ev.tau;
    auto curve = nlohmann::ordered_json::array();
    for (const auto& pt : ev.curve) {
      nlohmann::ordered_json c;
      c["M"] = pt.M;
      if (pt.value) {
        c["residual"] = *pt.value;
        c["witness_t"] = pt.witness_t;
      } else {
        c["residual"] = nullptr;
      }
      curve.push_back(std::move(c));
    }
    t["curve"] = std::move(curve);
    if (ev.accepted_M) t["accepted_M"] = *ev.accepted_M;
    t["rejected"] = ev.rejected;
    if (ev.anchor_scan) t["anchor_scan"] = true;
    taus.push_back(std::move(t));
  }
  j["per_tau"] = std::move(taus);
  auto ws = nlohmann::ordered_json::array();
  for (const auto& w : r.witnesses)
    ws.push_back({{"tau", w.tau}, {"t", w.t}, {"value", w.value}});
  j["witnesses"] = std::move(ws);
  return j;
}

nlohmann::ordered_json to_json(const InvarianceReport& r) {
  nlohmann::ordered_json j;
  j["diagnostic_ok"] = r.diagnostic_ok;
  j["kernel_summability"] = r.kernel_summability;
  j["T_cut"] = r.T_cut;
  j["tail_bound"] = r.tail_bound;
  j["transfer_ok"] = r.transfer_ok;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& t : r.transfer)
    checks.push_back({{"tau", t.tau},
                      {"M", t.M},
                      {"output_residual", t.output_residual},
                      {"bound", t.bound},
                      {"ok", t.ok}});
  j["transfer"] = std::move(checks);
  j["output_report"] = to_json(r.output_report);
  return j;
}

void write_residual_csv(const ClassReport& report, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << "tau,M,residual\n";
  for (const auto& ev : report.per_tau)
    for (const auto& pt : ev.curve) {
      os << ev.tau << ',' << pt.M << ',';
      if (pt.value) os << *pt.value;
      else os << "nan";
      os << '\n';
    }
}

}  // namespace aptk
