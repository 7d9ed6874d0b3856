#include "aptk/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aptk {

DichotomySystem make_diagonal_system(const std::vector<double>& rates) {
  if (rates.empty()) throw std::invalid_argument("diagonal system needs rates");
  for (double a : rates)
    if (a == 0.0)
      throw std::invalid_argument("dichotomy excludes neutral (zero) rates");
  DichotomySystem sys;
  sys.dim = rates.size();
  sys.M_prime = 1.0;
  sys.omega = std::abs(rates[0]);
  for (double a : rates) sys.omega = std::min(sys.omega, std::abs(a));
  sys.exponentially_stable =
      std::all_of(rates.begin(), rates.end(), [](double a) { return a < 0.0; });

  sys.apply_U = [rates](double t, double s, std::span<const double> x,
                        std::span<double> out) {
    for (std::size_t i = 0; i < rates.size(); ++i)
      out[i] = std::exp(rates[i] * (t - s)) * x[i];
  };
  sys.proj_P = [rates](double) {
    Operator p = Operator::zero(rates.size(), rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i)
      if (rates[i] < 0.0) p.at(i, i) = 1.0;
    return p;
  };
  sys.apply_UQ_back = [rates](double s, double t, std::span<const double> x,
                              std::span<double> out) {
    for (std::size_t i = 0; i < rates.size(); ++i)
      out[i] = rates[i] > 0.0 ? std::exp(rates[i] * (s - t)) * x[i] : 0.0;
  };
  sys.gamma_matrix = [rates](double t, double s) {
    Operator g = Operator::zero(rates.size(), rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i) {
      if (t >= s && rates[i] < 0.0) g.at(i, i) = std::exp(rates[i] * (t - s));
      if (t < s && rates[i] > 0.0) g.at(i, i) = -std::exp(rates[i] * (t - s));
    }
    return g;
  };
  return sys;
}

DichotomySystem make_scalar_stable(double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("stable rate must be positive");
  return make_diagonal_system({-lambda});
}

void apply_gamma(const DichotomySystem& sys, double t, double s,
                 std::span<const double> x, std::span<double> out) {
  if (t >= s) {
    Vec px(sys.dim);
    sys.proj_P(s).apply(x, px);
    sys.apply_U(t, s, px, out);
  } else {
    Vec qx(sys.dim);
    const Operator P = sys.proj_P(s);
    for (std::size_t i = 0; i < sys.dim; ++i) {
      double pi = 0.0;
      for (std::size_t j = 0; j < sys.dim; ++j) pi += P.at(i, j) * x[j];
      qx[i] = x[i] - pi;
    }
    sys.apply_UQ_back(t, s, qx, out);
    for (double& v : out) v = -v;
  }
}

Operator greens_function(const DichotomySystem& sys, double t, double s) {
  if (sys.gamma_matrix) return sys.gamma_matrix(t, s);
  Operator g = Operator::zero(sys.dim, sys.dim);
  Vec e(sys.dim, 0.0), col(sys.dim);
  for (std::size_t j = 0; j < sys.dim; ++j) {
    e[j] = 1.0;
    apply_gamma(sys, t, s, e, col);
    for (std::size_t i = 0; i < sys.dim; ++i) g.at(i, j) = col[i];
    e[j] = 0.0;
  }
  return g;
}

namespace {

double gamma_T_cut(const DichotomySystem& sys, double amplitude, double tail_tol) {
  const double arg = 2.0 * sys.M_prime * amplitude / (sys.omega * tail_tol);
  return arg <= 1.0 ? 0.0 : std::log(arg) / sys.omega;
}

}  // namespace

MildLineSolution mild_solution_line(const DichotomySystem& sys,
                                    const SampledSignal& f, double tail_tol) {
  if (f.dim() != sys.dim) throw std::invalid_argument("dimension mismatch");
  const Grid& g = f.grid();
  const double h = g.step;
  const double amp = sup_norm(f);
  double T = gamma_T_cut(sys, amp, tail_tol);
  if (T <= 0.0) T = h;
  const auto k = static_cast<std::size_t>(std::ceil(T / h - 1e-9));
  if (2 * k + 2 > g.count)
    throw std::domain_error("signal window too short for the Gamma tail cut");

  Grid og{g.t(k), h, g.count - 2 * k};
  SampledSignal u(og, sys.dim, DomainKind::FullLine, f.norm_tag());
  Vec tmp(sys.dim);
  for (std::size_t i = 0; i < og.count; ++i) {
    const std::size_t c = i + k;  // index in f's grid
    const double t = g.t(c);
    auto out = u.node(i);
    std::fill(out.begin(), out.end(), 0.0);
    // forward branch over [t-T, t], backward branch over [t, t+T]; the
    // shared node s == t gets h/2 from each branch
    for (std::size_t j = c - k; j <= c + k; ++j) {
      const double w = (j == c - k || j == c || j == c + k) ? 0.5 * h : h;
      apply_gamma(sys, t, g.t(j), f.node(j), tmp);
      for (std::size_t d = 0; d < sys.dim; ++d) out[d] += w * tmp[d];
    }
    // backward-branch endpoint value at s == t is -Q(t) f(t)
    {
      const Operator P = sys.proj_P(t);
      const auto x = f.node(c);
      for (std::size_t d = 0; d < sys.dim; ++d) {
        double pd = 0.0;
        for (std::size_t j2 = 0; j2 < sys.dim; ++j2) pd += P.at(d, j2) * x[j2];
        out[d] += 0.5 * h * (pd - x[d]);  // -Q(t) x = P x - x
      }
    }
  }
  return {std::move(u), static_cast<double>(k) * h,
          std::min(tail_tol, amp * 2.0 * sys.M_prime *
                                 std::exp(-sys.omega * static_cast<double>(k) * h) /
                                 sys.omega)};
}

MildHalflineSolution mild_solution_halfline(const DichotomySystem& sys,
                                            const Vec& x0,
                                            const SampledSignal& f) {
  if (f.dim() != sys.dim || x0.size() != sys.dim)
    throw std::invalid_argument("dimension mismatch");
  if (f.domain() != DomainKind::HalfLine || f.grid().start > 1e-9)
    throw std::invalid_argument("half-line mild solution needs f on [0, T]");
  const Grid& g = f.grid();
  const double h = g.step;

  MildHalflineSolution sol{SampledSignal(g, sys.dim, DomainKind::HalfLine, f.norm_tag()),
                           true};
  {
    Vec px(sys.dim);
    sys.proj_P(0.0).apply(x0, px);
    double diff = 0.0;
    for (std::size_t d = 0; d < sys.dim; ++d)
      diff = std::max(diff, std::abs(px[d] - x0[d]));
    sol.x0_in_stable_range = diff <= 1e-9 * (1.0 + vec_norm(x0, NormTag::Sup));
  }

  Vec cur(x0);
  std::copy(cur.begin(), cur.end(), sol.u.node(0).begin());
  Vec stepped(sys.dim), forced(sys.dim);
  for (std::size_t i = 0; i + 1 < g.count; ++i) {
    const double t0 = g.t(i);
    const double t1 = g.t(i + 1);
    // u(t1) = U(t1,t0) (u(t0) + h/2 f(t0)) + h/2 f(t1): per-cell trapezoid
    for (std::size_t d = 0; d < sys.dim; ++d)
      forced[d] = cur[d] + 0.5 * h * f.node(i)[d];
    sys.apply_U(t1, t0, forced, stepped);
    for (std::size_t d = 0; d < sys.dim; ++d)
      cur[d] = stepped[d] + 0.5 * h * f.node(i + 1)[d];
    std::copy(cur.begin(), cur.end(), sol.u.node(i + 1).begin());
  }
  return sol;
}

GammaShiftCurve gamma_shift_condition(const DichotomySystem& sys, double tau,
                                      const std::vector<double>& M_grid,
                                      double q, std::pair<double, double> t_window,
                                      bool two_sided, double t_step,
                                      std::size_t k_max, double s_step) {
  const bool qinf = std::isinf(q);
  GammaShiftCurve out;
  out.tail_bound = (two_sided ? 2.0 : 1.0) * 2.0 * sys.M_prime *
                   std::exp(-sys.omega * static_cast<double>(k_max + 1)) /
                   (1.0 - std::exp(-sys.omega));
  const auto cells = static_cast<std::size_t>(std::lround(1.0 / s_step));
  const long k_lo = two_sided ? -static_cast<long>(k_max) : 0;
  for (double t = t_window.first; t <= t_window.second + 1e-12; t += t_step) {
    double sum = 0.0;
    for (long k = k_lo; k <= static_cast<long>(k_max); ++k) {
      double block_sup = 0.0;
      double integral = 0.0;
      for (std::size_t j = 0; j <= cells; ++j) {
        const double s = static_cast<double>(k) + static_cast<double>(j) * s_step;
        const Operator d = greens_function(sys, t + tau, t + tau - s) -
                           greens_function(sys, t, t - s);
        const double v = d.norm();
        if (qinf) {
          block_sup = std::max(block_sup, v);
        } else {
          const double w = (j == 0 || j == cells) ? 0.5 * s_step : s_step;
          integral += w * std::pow(v, q);
        }
      }
      sum += qinf ? block_sup : std::pow(integral, 1.0 / q);
    }
    out.by_t.emplace_back(t, sum + out.tail_bound);
  }
  for (double M : M_grid) {
    double sup = 0.0;
    bool any = false;
    for (const auto& [t, v] : out.by_t) {
      if (std::abs(t) < M - 1e-12) continue;
      sup = std::max(sup, v);
      any = true;
    }
    if (any) out.by_M.emplace_back(M, sup);
  }
  return out;
}

PicardResult picard_semilinear(const DichotomySystem& sys, const TwoParamFn& F,
                               double lipschitz, DomainKind domain,
                               const Grid& grid, std::optional<Vec> x0,
                               const PicardOptions& opts) {
  const double factor = domain == DomainKind::FullLine
                            ? 2.0 * lipschitz * sys.M_prime / sys.omega
                            : lipschitz * sys.M_prime / sys.omega;
  if (!(factor < 1.0))
    throw std::invalid_argument(
        "contraction precondition violated: need L M'/omega < 1 (half-line) "
        "or 2 L M'/omega < 1 (line)");

  SampledSignal u(grid, sys.dim, domain, NormTag::Sup);
  SampledSignal forcing(grid, sys.dim, domain, NormTag::Sup);
  const Vec start = x0.value_or(Vec(sys.dim, 0.0));

  PicardResult res{u, 0, 0.0, 0.0, {}};
  double prev_change = -1.0;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    for (std::size_t i = 0; i < grid.count; ++i)
      F(grid.t(i), u.node(i), forcing.node(i));

    SampledSignal next = u;
    if (domain == DomainKind::FullLine) {
      // truncated Gamma integral clipped at the window ends
      const double amp = sup_norm(forcing) + 1.0;
      double T = gamma_T_cut(sys, amp / (1.0 - factor), opts.tail_tol);
      if (T <= 0.0) T = grid.step;
      const auto k = static_cast<std::size_t>(std::ceil(T / grid.step - 1e-9));
      Vec tmp(sys.dim);
      for (std::size_t i = 0; i < grid.count; ++i) {
        const double t = grid.t(i);
        auto out = next.node(i);
        std::fill(out.begin(), out.end(), 0.0);
        const std::size_t j0 = i > k ? i - k : 0;
        const std::size_t j1 = std::min(grid.count - 1, i + k);
        for (std::size_t j = j0; j <= j1; ++j) {
          double w = (j == j0 || j == j1 || j == i) ? 0.5 * grid.step : grid.step;
          apply_gamma(sys, t, grid.t(j), forcing.node(j), tmp);
          for (std::size_t d = 0; d < sys.dim; ++d) out[d] += w * tmp[d];
        }
        const Operator P = sys.proj_P(t);
        const auto x = forcing.node(i);
        for (std::size_t d = 0; d < sys.dim; ++d) {
          double pd = 0.0;
          for (std::size_t j2 = 0; j2 < sys.dim; ++j2) pd += P.at(d, j2) * x[j2];
          out[d] += 0.5 * grid.step * (pd - x[d]);
        }
      }
    } else {
      next = mild_solution_halfline(sys, start, forcing).u;
    }

    double change = 0.0;
    Vec dv(sys.dim);
    for (std::size_t i = 0; i < grid.count; ++i) {
      const auto a = next.node(i);
      const auto b = u.node(i);
      for (std::size_t d = 0; d < sys.dim; ++d) dv[d] = a[d] - b[d];
      change = std::max(change, vec_norm(dv, NormTag::Sup));
    }
    u = std::move(next);
    res.change_history.push_back(change);
    res.iterations = it;
    res.final_change = change;
    if (prev_change > 0.0 && it > 1)
      res.contraction_estimate = std::max(res.contraction_estimate, change / prev_change);
    prev_change = change;
    if (change <= opts.tol) {
      res.u = u;
      return res;
    }
  }
  throw std::runtime_error(
      "picard iteration did not converge: last change " +
      std::to_string(res.final_change) + " after " +
      std::to_string(res.iterations) + " iterations");
}

}  // namespace aptk
