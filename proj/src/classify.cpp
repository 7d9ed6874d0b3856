#include "aptk/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aptk {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Supported: return "supported";
    case Verdict::Falsified: return "falsified";
    default: return "inconclusive";
  }
}

std::string to_string(ApClass c) {
  switch (c) {
    case ApClass::AP: return "AP";
    case ApClass::QAAP: return "QAAP";
    case ApClass::SP_QAAP: return "SP_QAAP";
    case ApClass::QAAP_H: return "QAAP_H";
    case ApClass::SP_QAAP_H: return "SP_QAAP_H";
    default: return "ANTI_QAAP";
  }
}

ApClass ap_class_from_string(const std::string& s) {
  if (s == "AP") return ApClass::AP;
  if (s == "QAAP") return ApClass::QAAP;
  if (s == "SP_QAAP") return ApClass::SP_QAAP;
  if (s == "QAAP_H") return ApClass::QAAP_H;
  if (s == "SP_QAAP_H") return ApClass::SP_QAAP_H;
  if (s == "ANTI_QAAP") return ApClass::ANTI_QAAP;
  throw std::invalid_argument("unknown class: " + s);
}

namespace {

struct EvalPoint {
  double t;
  double value;
};

std::pair<double, double> effective_window(
    const SampledSignal& f, std::optional<std::pair<double, double>> window) {
  const double lo = window ? std::max(window->first, f.grid().start) : f.grid().start;
  const double hi = window ? std::min(window->second, f.grid().end()) : f.grid().end();
  return {lo, hi};
}

// ||f(t+tau) op f(t)|| at every admissible node t in [lo, hi], ascending.
std::vector<EvalPoint> difference_samples(const SampledSignal& f, double tau,
                                          bool anti,
                                          std::pair<double, double> w) {
  const Grid& g = f.grid();
  const double h = g.step;
  const double slack = 1e-9 * std::max(1.0, std::abs(g.span()));
  const double t_lo = std::max(w.first, w.first - tau);
  const double t_hi = std::min(w.second, w.second - tau);
  auto i0 = static_cast<long>(std::ceil((t_lo - g.start) / h - 1e-9));
  auto i1 = static_cast<long>(std::floor((t_hi - g.start) / h + 1e-9));
  i0 = std::max(i0, 0L);
  i1 = std::min(i1, static_cast<long>(g.count) - 1);
  std::vector<EvalPoint> out;
  if (i1 < i0) return out;
  out.reserve(static_cast<std::size_t>(i1 - i0 + 1));
  const long k = std::lround(tau / h);
  const bool lattice_tau =
      std::abs(static_cast<double>(k) * h - tau) <= 1e-9 * std::max(1.0, std::abs(tau));
  const double sgn = anti ? 1.0 : -1.0;
  Vec tmp(f.dim());
  for (long i = i0; i <= i1; ++i) {
    const double t = g.t(static_cast<std::size_t>(i));
    if (t + tau > g.end() + slack || t + tau < g.start - slack) continue;
    const auto base = f.node(static_cast<std::size_t>(i));
    if (lattice_tau) {
      const long j = i + k;
      if (j < 0 || j >= static_cast<long>(g.count)) continue;
      const auto sh = f.node(static_cast<std::size_t>(j));
      for (std::size_t d = 0; d < tmp.size(); ++d) tmp[d] = sh[d] + sgn * base[d];
    } else {
      f.value_at(t + tau, tmp);
      for (std::size_t d = 0; d < tmp.size(); ++d) tmp[d] += sgn * base[d];
    }
    out.push_back({t, vec_norm(tmp, f.norm_tag())});
  }
  return out;
}

// Unit-window Stepanov samples: value(t) = (int_t^{t+1} ||diff||^p)^{1/p} by
// trapezoid over the node lattice.
std::vector<EvalPoint> stepanov_samples(const SampledSignal& f, double tau,
                                        double p, std::pair<double, double> w) {
  auto diffs = difference_samples(f, tau, false, w);
  std::vector<EvalPoint> out;
  if (diffs.size() < 2) return out;
  const Grid& g = f.grid();
  // difference_samples yields a contiguous lattice run
  const std::size_t cells = lattice_cells(g, 1.0);
  if (diffs.size() <= cells) return out;
  std::vector<double> z(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i)
    z[i] = std::pow(diffs[i].value, p);
  std::vector<double> prefix(z.size() + 1, 0.0);
  for (std::size_t i = 0; i < z.size(); ++i) prefix[i + 1] = prefix[i] + z[i];
  out.reserve(diffs.size() - cells);
  for (std::size_t s = 0; s + cells < diffs.size(); ++s) {
    const double integral =
        g.step * (prefix[s + cells + 1] - prefix[s] - 0.5 * z[s] - 0.5 * z[s + cells]);
    out.push_back({diffs[s].t, std::pow(std::max(integral, 0.0), 1.0 / p)});
  }
  return out;
}

std::vector<EvalPoint> residual_samples(const SampledSignal& f, double tau,
                                        ResidualKind kind, double p,
                                        std::pair<double, double> w) {
  switch (kind) {
    case ResidualKind::Difference: return difference_samples(f, tau, false, w);
    case ResidualKind::AntiSum: return difference_samples(f, tau, true, w);
    default: return stepanov_samples(f, tau, p, w);
  }
}

// residual(M) = sup over |t| >= M; suffix/prefix maxima give every cutoff in
// one pass. Deterministic: ties keep the smaller |t|.
std::vector<ResidualPoint> curve_over_M(const std::vector<EvalPoint>& pts,
                                        const std::vector<double>& M_grid) {
  const std::size_t n = pts.size();
  std::vector<ResidualPoint> curve;
  curve.reserve(M_grid.size());
  if (n == 0) {
    for (double M : M_grid) curve.push_back({M, std::nullopt, 0.0});
    return curve;
  }
  std::vector<double> sufmax(n);
  std::vector<std::size_t> sufarg(n);
  sufmax[n - 1] = pts[n - 1].value;
  sufarg[n - 1] = n - 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    if (pts[i].value >= sufmax[i + 1]) {
      sufmax[i] = pts[i].value;
      sufarg[i] = i;
    } else {
      sufmax[i] = sufmax[i + 1];
      sufarg[i] = sufarg[i + 1];
    }
  }
  std::vector<double> premax(n);
  std::vector<std::size_t> prearg(n);
  premax[0] = pts[0].value;
  prearg[0] = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (pts[i].value > premax[i - 1]) {
      premax[i] = pts[i].value;
      prearg[i] = i;
    } else {
      premax[i] = premax[i - 1];
      prearg[i] = prearg[i - 1];
    }
  }
  for (double M : M_grid) {
    // right part: first index with t >= M
    const auto rit = std::lower_bound(
        pts.begin(), pts.end(), M - 1e-12,
        [](const EvalPoint& a, double m) { return a.t < m; });
    // left part: last index with t <= -M
    const auto lit = std::upper_bound(
        pts.begin(), pts.end(), -M + 1e-12,
        [](double m, const EvalPoint& a) { return m < a.t; });
    std::optional<double> best;
    double wt = 0.0;
    if (rit != pts.end()) {
      const auto i = static_cast<std::size_t>(rit - pts.begin());
      best = sufmax[i];
      wt = pts[sufarg[i]].t;
    }
    if (lit != pts.begin()) {
      const auto i = static_cast<std::size_t>(lit - pts.begin()) - 1;
      if (!best || premax[i] > *best) {
        best = premax[i];
        wt = pts[prearg[i]].t;
      }
    }
    curve.push_back({M, best, wt});
  }
  return curve;
}

std::optional<double> single_residual(const SampledSignal& f, double tau,
                                      ResidualKind kind, double M, double p,
                                      std::optional<std::pair<double, double>> window) {
  const auto pts = residual_samples(f, tau, kind, p, effective_window(f, window));
  const auto curve = curve_over_M(pts, {M});
  return curve.front().value;
}

}  // namespace

std::optional<double> qaap_residual(const SampledSignal& f, double tau, double M,
                                    std::optional<std::pair<double, double>> window) {
  return single_residual(f, tau, ResidualKind::Difference, M, 1.0, window);
}

std::optional<double> sp_qaap_residual(const SampledSignal& f, double tau,
                                       double M, double p,
                                       std::optional<std::pair<double, double>> window) {
  if (p < 1.0) throw std::invalid_argument("stepanov exponent needs p >= 1");
  return single_residual(f, tau, ResidualKind::StepanovDifference, M, p, window);
}

std::optional<double> anti_residual(const SampledSignal& f, double tau, double M,
                                    std::optional<std::pair<double, double>> window) {
  return single_residual(f, tau, ResidualKind::AntiSum, M, 1.0, window);
}

std::vector<ResidualPoint> residual_curve(
    const SampledSignal& f, double tau, ResidualKind kind,
    const std::vector<double>& M_grid, double p,
    std::optional<std::pair<double, double>> window) {
  return curve_over_M(residual_samples(f, tau, kind, p, effective_window(f, window)),
                      M_grid);
}

bool relative_density(std::vector<double> accepted, double L,
                      std::pair<double, double> range) {
  if (accepted.empty()) return false;
  std::sort(accepted.begin(), accepted.end());
  const double slack = 1e-12 * std::max(1.0, std::abs(range.second));
  if (accepted.front() > range.first + L + slack) return false;
  for (std::size_t i = 0; i + 1 < accepted.size(); ++i)
    if (accepted[i + 1] - accepted[i] > L + slack) return false;
  return accepted.back() >= range.second - L - slack;
}

ScanConfig default_scan(const SampledSignal& f, double epsilon,
                        std::optional<double> omega) {
  ScanConfig cfg;
  cfg.epsilon = epsilon;
  const Grid& g = f.grid();
  const double quarter = g.span() / 4.0;
  const std::size_t max_taus = 200;
  std::size_t stride = (g.count / 4) / max_taus;
  if (stride == 0) stride = 1;
  for (std::size_t k = stride; static_cast<double>(k) * g.step <= quarter; k += stride)
    cfg.tau_grid.push_back(static_cast<double>(k) * g.step);
  for (double M = 1.0; M <= quarter; M *= 2.0) cfg.M_grid.push_back(M);
  if (cfg.M_grid.empty()) cfg.M_grid.push_back(1.0);
  cfg.L_grid = {1.0, 2.0, 5.0, 10.0};
  if (omega) {
    cfg.L_grid.push_back(2.0 * *omega);
    std::sort(cfg.L_grid.begin(), cfg.L_grid.end());
  }
  return cfg;
}

namespace {

// Anchor scan: residual restricted to the configured witness times; this
// lower-bounds the full sup, so exceeding epsilon for every cutoff rejects
// the shift without a full sweep.
std::vector<ResidualPoint> anchor_curve(const SampledSignal& f, double tau,
                                        ResidualKind kind, double p,
                                        const std::vector<double>& M_grid,
                                        const std::vector<double>& anchors,
                                        std::pair<double, double> w) {
  const Grid& g = f.grid();
  const double slack = 1e-9 * std::max(1.0, std::abs(g.span()));
  std::vector<EvalPoint> pts;
  Vec a(f.dim()), b(f.dim());
  for (double t : anchors) {
    if (t < w.first - slack || t > w.second + slack) continue;
    if (kind == ResidualKind::StepanovDifference) {
      if (t + 1.0 + tau > w.second + slack || t + 1.0 > w.second + slack) continue;
      // trapezoid over [t, t+1] on the lattice
      const long i0 = lattice_index(g, t);
      if (i0 < 0) continue;
      const std::size_t cells = lattice_cells(g, 1.0);
      if (static_cast<std::size_t>(i0) + cells >= g.count) continue;
      double integral = 0.0;
      for (std::size_t j = 0; j <= cells; ++j) {
        const auto i = static_cast<std::size_t>(i0) + j;
        const double s = g.t(i);
        f.value_at(s + tau, a);
        const auto base = f.node(i);
        for (std::size_t d = 0; d < a.size(); ++d) a[d] -= base[d];
        const double v = std::pow(vec_norm(a, f.norm_tag()), p);
        integral += (j == 0 || j == cells) ? 0.5 * v : v;
      }
      pts.push_back({t, std::pow(integral * g.step, 1.0 / p)});
    } else {
      if (t + tau > w.second + slack || t + tau < w.first - slack) continue;
      f.value_at(t + tau, a);
      f.value_at(t, b);
      const double sgn = kind == ResidualKind::AntiSum ? 1.0 : -1.0;
      for (std::size_t d = 0; d < a.size(); ++d) a[d] += sgn * b[d];
      pts.push_back({t, vec_norm(a, f.norm_tag())});
    }
  }
  std::sort(pts.begin(), pts.end(),
            [](const EvalPoint& x, const EvalPoint& y) { return x.t < y.t; });
  return curve_over_M(pts, M_grid);
}

bool all_above(const std::vector<ResidualPoint>& curve, double eps) {
  if (curve.empty()) return false;
  for (const auto& pt : curve)
    if (!pt.value || *pt.value <= eps) return false;
  return true;
}

}  // namespace

ClassReport classify(const SampledSignal& f, const ScanConfig& config,
                     ApClass cls) {
  if (config.tau_grid.empty())
    throw std::invalid_argument("classify needs a non-empty tau grid");
  const bool stepanov = cls == ApClass::SP_QAAP || cls == ApClass::SP_QAAP_H;
  const bool hybrid = cls == ApClass::QAAP_H || cls == ApClass::SP_QAAP_H;
  if (stepanov && !config.p)
    throw std::invalid_argument("Stepanov classes need the exponent p");
  if (cls != ApClass::AP && config.M_grid.empty())
    throw std::invalid_argument("classify needs a non-empty M grid");
  if (!hybrid && config.L_grid.empty())
    throw std::invalid_argument("classify needs a non-empty L grid");

  const auto w = effective_window(f, config.window);
  const double p = config.p.value_or(1.0);
  const ResidualKind kind = cls == ApClass::ANTI_QAAP ? ResidualKind::AntiSum
                            : stepanov ? ResidualKind::StepanovDifference
                                       : ResidualKind::Difference;
  const std::vector<double> M_eff =
      cls == ApClass::AP ? std::vector<double>{0.0} : config.M_grid;

  ClassReport report;
  report.tested = cls;
  report.epsilon = config.epsilon;
  report.grid_step = f.grid().step;
  report.window = w;

  std::vector<double> rejected_taus;
  for (double tau : config.tau_grid) {
    TauEvidence ev;
    ev.tau = tau;
    if (!config.witness_times.empty()) {
      auto curve = anchor_curve(f, tau, kind, p, M_eff, config.witness_times, w);
      if (all_above(curve, config.epsilon)) {
        ev.curve = std::move(curve);
        ev.rejected = true;
        ev.anchor_scan = true;
      }
    }
    if (!ev.rejected && ev.curve.empty()) {
      ev.curve = residual_curve(f, tau, kind, M_eff, p, w);
      for (const auto& pt : ev.curve) {
        if (pt.value && *pt.value <= config.epsilon) {
          ev.accepted_M = pt.M;
          break;
        }
      }
      if (!ev.accepted_M) ev.rejected = all_above(ev.curve, config.epsilon);
    }
    if (ev.accepted_M) {
      report.accepted_taus.push_back(tau);
    } else if (ev.rejected) {
      rejected_taus.push_back(tau);
      const auto& last = ev.curve.back();
      report.witnesses.push_back({tau, last.witness_t, last.value.value_or(0.0)});
    }
    report.per_tau.push_back(std::move(ev));
  }

  if (hybrid) {
    if (report.accepted_taus.size() == config.tau_grid.size())
      report.verdict = Verdict::Supported;
    else if (!rejected_taus.empty())
      report.verdict = Verdict::Falsified;
    else
      report.verdict = Verdict::Inconclusive;
    return report;
  }

  const std::pair<double, double> tau_range{config.tau_grid.front(),
                                            config.tau_grid.back()};
  for (double L : config.L_grid) {
    if (relative_density(report.accepted_taus, L, tau_range)) {
      report.verdict = Verdict::Supported;
      report.chosen_L = L;
      return report;
    }
  }

  // Falsified: some interval of length max(L) inside the tau range where
  // every scanned shift is persistently rejected.
  const double Lmax = *std::max_element(config.L_grid.begin(), config.L_grid.end());
  std::sort(rejected_taus.begin(), rejected_taus.end());
  auto rejected_filled = [&](double a) {
    if (a < tau_range.first - 1e-12 || a + Lmax > tau_range.second + 1e-12)
      return false;
    bool any = false;
    for (double tau : config.tau_grid) {
      if (tau < a - 1e-12 || tau > a + Lmax + 1e-12) continue;
      any = true;
      if (!std::binary_search(rejected_taus.begin(), rejected_taus.end(), tau))
        return false;
    }
    return any;
  };
  bool falsified = rejected_filled(tau_range.first);
  for (double tau : rejected_taus) {
    if (falsified) break;
    falsified = rejected_filled(tau);
  }
  report.verdict = falsified ? Verdict::Falsified : Verdict::Inconclusive;
  if (report.verdict != Verdict::Falsified) report.witnesses.clear();
  return report;
}

namespace {

ClassReport sap_report(const SampledSignal& f, double omega, double epsilon,
                       const std::vector<double>& M_grid, ResidualKind kind,
                       double p) {
  if (M_grid.empty()) throw std::invalid_argument("M grid must be non-empty");
  if (omega > f.grid().span())
    throw std::invalid_argument("omega exceeds the signal window");
  ClassReport report;
  report.tested = kind == ResidualKind::StepanovDifference ? ApClass::SP_QAAP
                                                           : ApClass::QAAP;
  report.epsilon = epsilon;
  report.grid_step = f.grid().step;
  report.window = {f.grid().start, f.grid().end()};

  TauEvidence ev;
  ev.tau = omega;
  ev.curve = residual_curve(f, omega, kind, M_grid, p);
  const double M_max = M_grid.back();
  bool tail_defined = false;
  bool non_increasing = true;
  double prev = 0.0;
  bool have_prev = false;
  double last_value = 0.0;
  for (const auto& pt : ev.curve) {
    if (pt.M < M_max / 10.0 - 1e-12) continue;
    if (!pt.value) { non_increasing = false; continue; }
    tail_defined = true;
    if (have_prev && *pt.value > prev + std::max(1e-12, 1e-9 * prev))
      non_increasing = false;
    prev = *pt.value;
    have_prev = true;
    last_value = *pt.value;
  }
  const bool ends_low = tail_defined && last_value <= epsilon;
  if (ends_low && non_increasing) {
    report.verdict = Verdict::Supported;
    for (const auto& pt : ev.curve)
      if (pt.value && *pt.value <= epsilon) { ev.accepted_M = pt.M; break; }
  } else {
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& pt : ev.curve)
      if (pt.value) { any = true; best = std::min(best, *pt.value); }
    if (any && best > epsilon) {
      report.verdict = Verdict::Falsified;
      const auto& last = ev.curve.back();
      report.witnesses.push_back({omega, last.witness_t, last.value.value_or(0.0)});
      ev.rejected = true;
    } else {
      report.verdict = Verdict::Inconclusive;
    }
  }
  report.per_tau.push_back(std::move(ev));
  return report;
}

}  // namespace

ClassReport test_sap_omega(const SampledSignal& f, double omega, double epsilon,
                           const std::vector<double>& M_grid) {
  return sap_report(f, omega, epsilon, M_grid, ResidualKind::Difference, 1.0);
}

ClassReport test_sp_sap_omega(const SampledSignal& f, double omega, double p,
                              double epsilon, const std::vector<double>& M_grid) {
  return sap_report(f, omega, epsilon, M_grid, ResidualKind::StepanovDifference, p);
}

PeriodicLimit extract_periodic_limit(const SampledSignal& f, double omega) {
  const Grid& g = f.grid();
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  const double tail_start = g.start + 2.0 * g.span() / 3.0;
  const long m0 = static_cast<long>(std::ceil(tail_start / omega - 1e-9));
  const long m1 = static_cast<long>(std::floor(g.end() / omega + 1e-9));
  const long periods = m1 - m0;
  if (periods < 3)
    throw std::domain_error("tail third must contain at least 3 whole periods");

  const auto cells = static_cast<std::size_t>(std::floor(omega / g.step + 1e-9));
  if (cells < 2) throw std::invalid_argument("omega must span at least 2 grid steps");
  Grid pg{0.0, g.step, cells};
  SampledSignal period(pg, f.dim(), DomainKind::HalfLine, f.norm_tag());
  Vec tmp(f.dim());
  for (std::size_t j = 0; j < cells; ++j) {
    auto acc = period.node(j);
    for (long m = m0; m < m1; ++m) {
      const double t = static_cast<double>(m) * omega + pg.t(j);
      f.value_at(t, tmp);
      for (std::size_t d = 0; d < tmp.size(); ++d) acc[d] += tmp[d];
    }
    for (double& x : acc) x /= static_cast<double>(periods);
  }

  PeriodicLimit out{std::move(period), 0.0, {}};
  Vec pv(f.dim());
  for (long m = m0; m < m1; ++m) {
    double period_sup = 0.0;
    const double base = static_cast<double>(m) * omega;
    for (std::size_t j = 0; j < cells; ++j) {
      const double t = base + pg.t(j);
      f.value_at(t, tmp);
      const auto ref = out.periodic.node(j);
      for (std::size_t d = 0; d < tmp.size(); ++d) pv[d] = tmp[d] - ref[d];
      period_sup = std::max(period_sup, vec_norm(pv, f.norm_tag()));
    }
    out.residual_by_period.emplace_back(base, period_sup);
    out.q_residual = std::max(out.q_residual, period_sup);
  }
  return out;
}

SampledSignal compose_two_parameter(const TwoParamFn& F, std::size_t out_dim,
                                    const SampledSignal& x) {
  SampledSignal out(x.grid(), out_dim, x.domain(), x.norm_tag());
  for (std::size_t i = 0; i < x.count(); ++i)
    F(x.grid().t(i), x.node(i), out.node(i));
  return out;
}

bool lipschitz_check(const TwoParamFn& F, std::size_t out_dim, double L,
                     std::span<const double> t_samples,
                     const std::vector<std::pair<Vec, Vec>>& pairs, NormTag tag) {
  Vec fx(out_dim), fy(out_dim), dx;
  for (double t : t_samples) {
    for (const auto& [x, y] : pairs) {
      F(t, x, fx);
      F(t, y, fy);
      dx.resize(x.size());
      for (std::size_t d = 0; d < x.size(); ++d) dx[d] = x[d] - y[d];
      for (std::size_t d = 0; d < out_dim; ++d) fx[d] -= fy[d];
      const double lhs = vec_norm(fx, tag);
      const double rhs = L * vec_norm(dx, tag);
      if (lhs > rhs * (1.0 + 1e-12) + 1e-15) return false;
    }
  }
  return true;
}

double composition_exponent(double p, double r) {
  if (!(p > 1.0))
    throw std::invalid_argument("composition exponent needs p > 1");
  const double r_min = std::max(p, p / (p - 1.0));
  if (r < r_min - 1e-12)
    throw std::invalid_argument("composition exponent needs r >= max(p, p/(p-1))");
  return p * r / (p + r);
}

}  // namespace aptk
