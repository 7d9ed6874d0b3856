#include "aptk/stepanov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aptk {

namespace {

// Integrand samples for the window sweep: y[i] = ||f_i - g_i||^p at nodes
// (trapezoid) or at cell midpoints of the interpolated difference (midpoint).
std::vector<double> power_samples(const SampledSignal& f, const SampledSignal& g,
                                  double p, Quadrature quad) {
  const std::size_t n = f.count();
  const std::size_t d = f.dim();
  std::vector<double> y;
  Vec diff(d);
  if (quad == Quadrature::Trapezoid) {
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = f.node(i);
      const auto b = g.node(i);
      for (std::size_t k = 0; k < d; ++k) diff[k] = a[k] - b[k];
      y[i] = std::pow(vec_norm(diff, f.norm_tag()), p);
    }
  } else {
    y.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto a0 = f.node(i);
      const auto a1 = f.node(i + 1);
      const auto b0 = g.node(i);
      const auto b1 = g.node(i + 1);
      for (std::size_t k = 0; k < d; ++k)
        diff[k] = 0.5 * (a0[k] + a1[k]) - 0.5 * (b0[k] + b1[k]);
      y[i] = std::pow(vec_norm(diff, f.norm_tag()), p);
    }
  }
  return y;
}

double window_sup(const std::vector<double>& y, const Grid& grid,
                  std::size_t cells, double l, double p, Quadrature quad) {
  const double h = grid.step;
  double best = 0.0;
  if (quad == Quadrature::Trapezoid) {
    // prefix[i] = sum of y[0..i-1]
    std::vector<double> prefix(y.size() + 1, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) prefix[i + 1] = prefix[i] + y[i];
    for (std::size_t s = 0; s + cells < y.size(); ++s) {
      const double integral =
          h * (prefix[s + cells + 1] - prefix[s] - 0.5 * y[s] - 0.5 * y[s + cells]);
      best = std::max(best, integral);
    }
  } else {
    std::vector<double> prefix(y.size() + 1, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) prefix[i + 1] = prefix[i] + y[i];
    for (std::size_t s = 0; s + cells <= y.size(); ++s) {
      const double integral = h * (prefix[s + cells] - prefix[s]);
      best = std::max(best, integral);
    }
  }
  return std::pow(best / l, 1.0 / p);
}

}  // namespace

double stepanov_metric(const SampledSignal& f, const SampledSignal& g,
                       const StepanovParams& params) {
  if (!(f.grid() == g.grid()))
    throw std::invalid_argument("stepanov_metric needs a shared grid");
  if (f.dim() != g.dim())
    throw std::invalid_argument("stepanov_metric needs equal dimensions");
  if (params.p < 1.0) throw std::invalid_argument("stepanov exponent needs p >= 1");
  const std::size_t cells = lattice_cells(f.grid(), params.l);
  if (cells > f.count() - 1)
    throw std::domain_error("stepanov window is longer than the grid");
  const auto y = power_samples(f, g, params.p, params.quadrature);
  return window_sup(y, f.grid(), cells, params.l, params.p, params.quadrature);
}

double stepanov_norm(const SampledSignal& f, double p, Quadrature quadrature) {
  if (p < 1.0) throw std::invalid_argument("stepanov exponent needs p >= 1");
  if (f.grid().span() < 1.0 - 1e-12)
    throw std::domain_error("stepanov_norm needs a grid spanning >= 1");
  SampledSignal zero(f.grid(), f.dim(), f.domain(), f.norm_tag());
  return stepanov_metric(f, zero, {p, 1.0, quadrature});
}

WeylEstimate weyl_distance(const SampledSignal& f, double tau, double p,
                           const std::vector<double>& l_list,
                           Quadrature quadrature) {
  if (l_list.empty()) throw std::invalid_argument("weyl_distance needs windows");
  auto [shifted, base] = shifted_overlap(f, tau);
  WeylEstimate est;
  est.window_sequence.reserve(l_list.size());
  for (double l : l_list) {
    const double v = stepanov_metric(shifted, base, {p, l, quadrature});
    est.window_sequence.emplace_back(l, v);
  }
  est.value = est.window_sequence.back().second;
  return est;
}

}  // namespace aptk
