// Command-line front end: renders catalog entries, evaluates Stepanov/Weyl
// norms, runs class membership scans, convolves against decaying kernels,
// solves the dichotomy/heat models, and replays the verification battery.
// Exit codes: 0 success (or expected verdict), 2 verdict mismatch, 1 error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aptk/catalog.hpp"
#include "aptk/classify.hpp"
#include "aptk/convolution.hpp"
#include "aptk/evolution.hpp"
#include "aptk/heat.hpp"
#include "aptk/report.hpp"
#include "aptk/signal.hpp"
#include "aptk/stepanov.hpp"
#include "aptk/suite.hpp"

namespace {

using nlohmann::ordered_json;

struct WindowOpt {
  double lo = 0.0;
  double hi = 0.0;
  bool set = false;
};

void add_window_option(CLI::App* cmd, WindowOpt& w, const std::string& name) {
  cmd->add_option_function<std::string>(
      name,
      [&w](const std::string& s) {
        const auto colon = s.find(':');
        if (colon == std::string::npos)
          throw CLI::ValidationError("window must be lo:hi");
        w.lo = std::stod(s.substr(0, colon));
        w.hi = std::stod(s.substr(colon + 1));
        w.set = true;
      },
      "analysis window lo:hi");
}

aptk::SampledSignal load_signal(const std::string& signal_csv,
                                const std::string& entry, const WindowOpt& w,
                                double step, std::size_t dim) {
  if (!signal_csv.empty()) return aptk::read_csv(signal_csv);
  if (entry.empty())
    throw std::runtime_error("need --signal or --entry");
  if (!w.set) throw std::runtime_error("--entry needs --window lo:hi");
  return aptk::catalog::render(entry, aptk::make_grid(w.lo, w.hi, step), dim);
}

void write_json(const ordered_json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << j.dump(2) << "\n";
}

aptk::KernelFamily parse_kernel(const std::string& spec) {
  if (spec.rfind("exp:", 0) == 0) return aptk::exp_kernel(std::stod(spec.substr(4)));
  if (spec.rfind("matexp:", 0) == 0) {
    std::ifstream is(spec.substr(7));
    if (!is) throw std::runtime_error("cannot open kernel file: " + spec.substr(7));
    ordered_json j;
    is >> j;
    const auto& rows = j.at("matrix");
    const std::size_t n = rows.size();
    aptk::Operator A = aptk::Operator::zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) A.at(i, k) = rows[i][k].get<double>();
    std::optional<aptk::KernelFamily::Decay> hint;
    if (j.contains("decay"))
      hint = aptk::KernelFamily::Decay{j["decay"][0].get<double>(),
                                       j["decay"][1].get<double>()};
    return aptk::matrix_exp_kernel(std::move(A), hint);
  }
  throw std::runtime_error("kernel must be exp:LAMBDA or matexp:FILE");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::string cur;
  for (char ch : s + ",") {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(std::stod(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"almost-periodicity toolkit"};
  app.require_subcommand(1);

  // ---- catalog ----
  auto* cat = app.add_subcommand("catalog", "list entries or render one to CSV");
  bool cat_list = false;
  std::string cat_entry, cat_out;
  double cat_step = 0.01;
  std::size_t cat_dim = 0;
  WindowOpt cat_window;
  cat->add_flag("--list", cat_list, "list catalog entries");
  cat->add_option("--entry", cat_entry, "entry name");
  add_window_option(cat, cat_window, "--window");
  cat->add_option("--step", cat_step, "grid step");
  cat->add_option("--dim", cat_dim, "truncation dimension (c0 entry)");
  cat->add_option("--out", cat_out, "output CSV path");

  // ---- norm ----
  auto* nrm = app.add_subcommand("norm", "stepanov/weyl metrics of a signal");
  std::string nrm_signal, nrm_entry, nrm_metric = "stepanov", nrm_out, nrm_llist;
  double nrm_p = 1.0, nrm_l = 1.0, nrm_tau = 0.0, nrm_step = 0.01;
  WindowOpt nrm_window;
  nrm->add_option("--signal", nrm_signal, "signal CSV");
  nrm->add_option("--entry", nrm_entry, "catalog entry instead of CSV");
  add_window_option(nrm, nrm_window, "--window");
  nrm->add_option("--step", nrm_step, "grid step for --entry");
  nrm->add_option("--p", nrm_p, "exponent");
  nrm->add_option("--l", nrm_l, "window length");
  nrm->add_option("--l-list", nrm_llist, "comma list of weyl windows");
  nrm->add_option("--metric", nrm_metric)->check(CLI::IsMember({"stepanov", "weyl"}));
  nrm->add_option("--tau", nrm_tau, "shift for the weyl metric");
  nrm->add_option("--out", nrm_out, "output JSON path");

  // ---- classify ----
  auto* cls = app.add_subcommand("classify", "membership scan for a signal");
  std::string cls_signal, cls_entry, cls_class = "QAAP", cls_out, cls_curve;
  std::string cls_expect = "supported", cls_anchors;
  double cls_eps = 0.1, cls_step = 0.01, cls_omega = 0.0;
  double cls_p = 0.0;
  std::size_t cls_dim = 0;
  WindowOpt cls_window;
  cls->add_option("--signal", cls_signal, "signal CSV");
  cls->add_option("--entry", cls_entry, "catalog entry instead of CSV");
  cls->add_option("--class", cls_class,
                  "AP|QAAP|SP_QAAP|QAAP_H|SP_QAAP_H|ANTI_QAAP|SAP|SP_SAP");
  cls->add_option("--epsilon", cls_eps, "tolerance");
  add_window_option(cls, cls_window, "--window");
  cls->add_option("--step", cls_step, "grid step for --entry");
  cls->add_option("--p", cls_p, "stepanov exponent");
  cls->add_option("--omega", cls_omega, "period for SAP tests / L=2w hint");
  cls->add_option("--dim", cls_dim, "truncation dimension (c0 entry)");
  cls->add_option("--anchors", cls_anchors, "odd_integers|plateau_starts");
  cls->add_option("--expect", cls_expect)
      ->check(CLI::IsMember({"supported", "falsified", "inconclusive", "any"}));
  cls->add_option("--out", cls_out, "report JSON path");
  cls->add_option("--curve-out", cls_curve, "residual curve CSV path");

  // ---- convolve ----
  auto* cnv = app.add_subcommand("convolve", "kernel convolution with certificate");
  std::string cnv_kernel = "exp:1", cnv_signal, cnv_entry, cnv_mode = "finite";
  std::string cnv_out, cnv_cert;
  double cnv_tail = 1e-6, cnv_step = 0.01;
  WindowOpt cnv_window;
  cnv->add_option("--kernel", cnv_kernel, "exp:LAMBDA or matexp:FILE");
  cnv->add_option("--mode", cnv_mode)->check(CLI::IsMember({"finite", "infinite"}));
  cnv->add_option("--signal", cnv_signal, "signal CSV");
  cnv->add_option("--entry", cnv_entry, "catalog entry instead of CSV");
  add_window_option(cnv, cnv_window, "--window");
  cnv->add_option("--step", cnv_step, "grid step for --entry");
  cnv->add_option("--tail-tol", cnv_tail, "tail tolerance (infinite mode)");
  cnv->add_option("--out", cnv_out, "output signal CSV");
  cnv->add_option("--certificate", cnv_cert, "certificate JSON path");

  // ---- evolve ----
  auto* evo = app.add_subcommand("evolve", "dichotomy / heat mild solutions");
  std::string evo_system = "heat", evo_forcing, evo_out, evo_cert;
  double evo_gamma0 = 0.5, evo_tend = 10.0, evo_dt = 0.01, evo_lip = 0.0;
  std::size_t evo_modes = 64;
  bool evo_semilinear = false;
  evo->add_option("--system", evo_system, "heat or diag:FILE (json {\"rates\": [...]})");
  evo->add_option("--gamma0", evo_gamma0, "heat damping");
  evo->add_option("--modes", evo_modes, "heat mode truncation");
  evo->add_option("--forcing", evo_forcing, "catalog:NAME (in time) or csv:FILE");
  evo->add_option("--t-end", evo_tend, "final time");
  evo->add_option("--dt", evo_dt, "time step");
  evo->add_flag("--semilinear", evo_semilinear, "picard fixed point");
  evo->add_option("--lipschitz", evo_lip, "semilinear Lipschitz constant");
  evo->add_option("--out", evo_out, "trajectory CSV");
  evo->add_option("--certificate", evo_cert, "certificate JSON");

  // ---- suite ----
  auto* ste = app.add_subcommand("suite", "run the verification battery");
  std::string ste_what = "paper-checks", ste_out;
  unsigned ste_seed = 20240811;
  ste->add_option("what", ste_what, "battery name")->expected(0, 1);
  ste->add_option("--seed", ste_seed, "randomized-check seed");
  ste->add_option("--out", ste_out, "summary JSON path");

  CLI11_PARSE(app, argc, argv);

  if (cat->parsed()) {
    if (cat_list || cat_entry.empty()) {
      for (const auto& e : aptk::catalog::entries()) {
        std::cout << e.name << "  [" << (e.domain == aptk::DomainKind::HalfLine
                                             ? "half-line"
                                             : "line")
                  << "]  " << e.description << "\n";
        for (const auto& [k, v] : e.labels)
          std::cout << "    " << k << ": " << (v ? "yes" : "no") << "\n";
      }
      return 0;
    }
    const auto sig = aptk::catalog::render(
        cat_entry, aptk::make_grid(cat_window.lo, cat_window.hi, cat_step), cat_dim);
    if (cat_out.empty()) throw std::runtime_error("catalog render needs --out");
    aptk::write_csv(sig, cat_out);
    return 0;
  }

  if (nrm->parsed()) {
    const auto sig = load_signal(nrm_signal, nrm_entry, nrm_window, nrm_step, 0);
    ordered_json j;
    j["p"] = nrm_p;
    j["grid_step"] = sig.grid().step;
    j["window"] = {sig.grid().start, sig.grid().end()};
    if (nrm_metric == "stepanov") {
      aptk::SampledSignal zero(sig.grid(), sig.dim(), sig.domain(), sig.norm_tag());
      j["metric"] = "stepanov";
      j["l"] = nrm_l;
      j["value"] = aptk::stepanov_metric(sig, zero, {nrm_p, nrm_l});
    } else {
      std::vector<double> ls = nrm_llist.empty() ? std::vector<double>{nrm_l}
                                                 : parse_list(nrm_llist);
      const auto est = aptk::weyl_distance(sig, nrm_tau, nrm_p, ls);
      j["metric"] = "weyl";
      j["tau"] = nrm_tau;
      auto seq = ordered_json::array();
      for (const auto& [l, v] : est.window_sequence) seq.push_back({{"l", l}, {"value", v}});
      j["window_sequence"] = std::move(seq);
      j["value"] = est.value;
    }
    write_json(j, nrm_out);
    return 0;
  }

  if (cls->parsed()) {
    const auto sig = load_signal(cls_signal, cls_entry, cls_window, cls_step, cls_dim);
    aptk::ClassReport report;
    if (cls_class == "SAP" || cls_class == "SP_SAP") {
      if (!(cls_omega > 0)) throw std::runtime_error("SAP tests need --omega");
      auto cfg = aptk::default_scan(sig, cls_eps, cls_omega);
      report = cls_class == "SAP"
                   ? aptk::test_sap_omega(sig, cls_omega, cls_eps, cfg.M_grid)
                   : aptk::test_sp_sap_omega(sig, cls_omega,
                                             cls_p > 0 ? cls_p : 1.0, cls_eps,
                                             cfg.M_grid);
    } else {
      auto cfg = aptk::default_scan(
          sig, cls_eps,
          cls_omega > 0 ? std::optional<double>(cls_omega) : std::nullopt);
      if (cls_p > 0) cfg.p = cls_p;
      if (!cls_anchors.empty()) {
        const double lo = sig.grid().start, hi = sig.grid().end();
        cfg.witness_times = cls_anchors == "odd_integers"
                                ? aptk::catalog::odd_integer_anchors(lo, hi)
                                : aptk::catalog::plateau_start_anchors(lo, hi);
      }
      report = aptk::classify(sig, cfg, aptk::ap_class_from_string(cls_class));
    }
    write_json(aptk::to_json(report), cls_out);
    if (!cls_curve.empty()) aptk::write_residual_csv(report, cls_curve);
    if (cls_expect == "any") return 0;
    return to_string(report.verdict) == cls_expect ? 0 : 2;
  }

  if (cnv->parsed()) {
    const auto sig = load_signal(cnv_signal, cnv_entry, cnv_window, cnv_step, 0);
    const auto kernel = parse_kernel(cnv_kernel);
    ordered_json cert;
    cert["kernel"] = cnv_kernel;
    const auto l1 = aptk::kernel_l1_norm(kernel, 64.0);
    cert["kernel_l1"] = {{"value", l1.value},
                         {"verified", l1.verified},
                         {"tail_bound", l1.tail_bound}};
    aptk::SampledSignal out(aptk::Grid{0, 1, 2}, 1, aptk::DomainKind::HalfLine);
    if (cnv_mode == "finite") {
      out = aptk::finite_convolution(kernel, sig);
      cert["mode"] = "finite";
    } else {
      auto conv = aptk::infinite_convolution(kernel, sig, cnv_tail);
      out = std::move(conv.output);
      cert["mode"] = "infinite";
      cert["T_cut"] = conv.T_cut;
      cert["tail_bound"] = conv.tail_bound;
    }
    cert["sup_norm_output"] = aptk::sup_norm(out);
    cert["sup_norm_bound"] = aptk::sup_norm(sig) * l1.value + cnv_tail;
    if (cnv_out.empty()) throw std::runtime_error("convolve needs --out");
    aptk::write_csv(out, cnv_out);
    if (!cnv_cert.empty()) write_json(cert, cnv_cert);
    return 0;
  }

  if (evo->parsed()) {
    ordered_json cert;
    if (evo_system.rfind("diag:", 0) == 0) {
      std::ifstream is(evo_system.substr(5));
      if (!is) throw std::runtime_error("cannot open system file");
      ordered_json j;
      is >> j;
      std::vector<double> rates = j.at("rates").get<std::vector<double>>();
      const auto sys = aptk::make_diagonal_system(rates);
      cert["system"] = "diag";
      cert["M_prime"] = sys.M_prime;
      cert["omega"] = sys.omega;
      if (evo_forcing.rfind("csv:", 0) != 0)
        throw std::runtime_error("diag system needs --forcing csv:FILE");
      const auto f = aptk::read_csv(evo_forcing.substr(4));
      if (evo_semilinear) {
        if (!(evo_lip > 0)) throw std::runtime_error("--semilinear needs --lipschitz");
        aptk::TwoParamFn F = [&f](double t, std::span<const double>,
                                  std::span<double> out2) {
          const auto v = f.value_at(t);
          std::copy(v.begin(), v.end(), out2.begin());
        };
        auto res = aptk::picard_semilinear(sys, F, evo_lip, f.domain(), f.grid(),
                                           std::nullopt);
        cert["iterations"] = res.iterations;
        cert["contraction_estimate"] = res.contraction_estimate;
        cert["final_change"] = res.final_change;
        if (!evo_out.empty()) aptk::write_csv(res.u, evo_out);
      } else if (f.domain() == aptk::DomainKind::FullLine) {
        auto sol = aptk::mild_solution_line(sys, f, 1e-6);
        cert["T_cut"] = sol.T_cut;
        cert["tail_bound"] = sol.tail_bound;
        if (!evo_out.empty()) aptk::write_csv(sol.u, evo_out);
      } else {
        auto sol = aptk::mild_solution_halfline(sys, aptk::Vec(sys.dim, 0.0), f);
        cert["x0_in_stable_range"] = sol.x0_in_stable_range;
        if (!evo_out.empty()) aptk::write_csv(sol.u, evo_out);
      }
    } else if (evo_system == "heat") {
      aptk::heat::HeatSystem sys(evo_gamma0, nullptr, evo_modes, 257, true);
      cert["system"] = "heat";
      cert["M_prime"] = 1.0;
      cert["omega"] = 1.0 + evo_gamma0;
      std::function<double(double, double)> forcing =
          [](double, double) { return 0.0; };
      if (evo_forcing.rfind("catalog:", 0) == 0) {
        const std::string name = evo_forcing.substr(8);
        forcing = [name](double t, double x) {
          const auto& e = aptk::catalog::entry(name);
          (void)e;
          if (name == "step") return aptk::catalog::step_fn(t) * std::sin(x);
          if (name == "sin_log") return aptk::catalog::sin_log(t) * std::sin(x);
          if (name == "xie_zhang_ramp")
            return aptk::catalog::xie_zhang_ramp(t) * std::sin(x);
          if (name == "sap4_plateau")
            return aptk::catalog::sap4_plateau(t) * std::sin(x);
          throw std::runtime_error("unsupported forcing entry: " + name);
        };
      }
      std::vector<double> u0(sys.n_x(), 0.0);
      auto sol = aptk::heat_solve(sys, forcing, u0, evo_tend, evo_dt, 2);
      cert["cross_check_sup"] = sol.cross_check_sup;
      cert["clamped_exponents"] = sys.clamp_count();
      if (!evo_out.empty()) {
        // trajectory CSV: t then spatial samples
        std::ofstream os(evo_out);
        os << "t";
        for (std::size_t j = 0; j < sys.n_x(); ++j) os << ",x" << j;
        os << "\n";
        char buf[32];
        for (std::size_t i = 0; i < sol.trajectory.time_grid.count; ++i) {
          std::snprintf(buf, sizeof buf, "%.17g", sol.trajectory.time_grid.t(i));
          os << buf;
          const auto samples = sys.samples_from_modes(sol.trajectory.modes[i]);
          for (double v : samples) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << ',' << buf;
          }
          os << "\n";
        }
      }
    } else {
      throw std::runtime_error("unknown system: " + evo_system);
    }
    if (!evo_cert.empty()) write_json(cert, evo_cert);
    return 0;
  }

  if (ste->parsed()) {
    if (ste_what != "paper-checks")
      throw std::runtime_error("unknown battery: " + ste_what);
    const auto results = aptk::suite::run_paper_checks(ste_seed);
    ordered_json j;
    j["battery"] = "paper-checks";
    j["seed"] = ste_seed;
    int supported = 0, failed = 0;
    auto arr = ordered_json::array();
    for (const auto& r : results) {
      (r.pass ? supported : failed)++;
      arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass},
                     {"detail", r.detail}});
      std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << r.id
                << ": " << r.name << "\n";
    }
    j["counts"] = {{"pass", supported}, {"fail", failed}};
    j["criteria"] = std::move(arr);
    write_json(j, ste_out);
    return failed == 0 ? 0 : 2;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
