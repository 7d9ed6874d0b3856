#include "aptk/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aptk::catalog {

double step_fn(double t) {
  if (t <= -1.0) return 0.0;
  if (t >= 0.0) return 1.0;
  return t + 1.0;
}

double sin_log(double t) {
  if (t < 0.0) throw std::domain_error("sin_log is defined for t >= 0");
  return std::sin(std::log1p(t));
}

void c0_sequence(double t, std::span<double> out) {
  const double t2 = t * t;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double d = t2 + n * n;
    out[i] = 4.0 * n * n * t2 / (d * d);
  }
}

std::size_t c0_default_dim(double t_end, double tol) {
  return static_cast<std::size_t>(std::ceil(2.0 * t_end / std::sqrt(tol)));
}

namespace {
double reciprocal_arg(double t, double alpha, double beta) {
  return 1.0 / (2.0 + std::cos(alpha * t) + std::cos(beta * t));
}
}  // namespace

double reciprocal_cos(double t, double alpha, double beta) {
  return std::cos(reciprocal_arg(t, alpha, beta));
}

double reciprocal_sin(double t, double alpha, double beta) {
  return std::sin(reciprocal_arg(t, alpha, beta));
}

double xie_zhang_ramp(double t) {
  if (t <= 0.0) return 0.0;
  const double n = std::max(0.0, std::round((t - 1.0) / 2.0));
  const double center = 2.0 * n + 1.0;
  const double width = 1.0 / (n + 1.0);
  return std::max(0.0, 1.0 - std::abs(t - center) / width);
}

double sign_sin(double t) {
  const double s = std::sin(t);
  return (s > 0.0) - (s < 0.0);
}

double sap4_plateau(double t) {
  if (t <= 4.0) return 0.0;
  const double n = std::max(1.0, std::round((t - 1.0) / 4.0));
  const double lo = 4.0 * n + 0.5;
  const double hi = 4.0 * n + 1.5;
  const double w = 1.0 / (4.0 * n + 1.0);
  if (t >= lo && t <= hi) return 1.0;
  if (t > lo - w && t < lo) return (t - (lo - w)) / w;
  if (t > hi && t < hi + w) return ((hi + w) - t) / w;
  return 0.0;
}

namespace {

std::vector<CatalogEntry> build_entries() {
  return {
      {"step", DomainKind::FullLine, 1,
       {{"q-aap", true}, {"ap", false}, {"aap", false}, {"equi-weyl-p-ap", false}},
       "bounded ramp: 0 below -1, 1 above 0"},
      {"sin_log", DomainKind::HalfLine, 1,
       {{"q-aap", true}, {"aap", false}},
       "sin(ln(1+t)); derivative decays like 1/(1+t)"},
      {"c0_sequence", DomainKind::HalfLine, 0,
       {{"bounded", true}, {"uniformly-continuous", true},
        {"relatively-compact-range", false}},
       "sequence-valued entry with non-compact range, sup norm"},
      {"reciprocal_cos", DomainKind::FullLine, 1,
       {{"stepanov-p-ap", true}, {"ap", false}, {"q-aap", false}},
       "cos(1/(2+cos(alpha t)+cos(beta t))), alpha=pi, beta=sqrt(2)pi"},
      {"reciprocal_sin", DomainKind::FullLine, 1,
       {{"stepanov-p-ap", true}, {"ap", false}, {"q-aap", false}},
       "sin(1/(2+cos(alpha t)+cos(beta t)))"},
      {"xie_zhang_ramp", DomainKind::HalfLine, 1,
       {{"sap2", true}, {"q-aap", true}, {"uniformly-continuous", false}},
       "unit spikes at odd integers with width 2/(n+1)"},
      {"sign_sin", DomainKind::HalfLine, 1,
       {{"stepanov-p-ap", true}},
       "sign(sin t)"},
      {"sap4_plateau", DomainKind::HalfLine, 1,
       {{"sap4", true}, {"q-aap", true}},
       "unit plateaus on [4n+1/2, 4n+3/2] with ramps of width 1/(4n+1)"},
      {"sign_sin_times_plateau", DomainKind::HalfLine, 1,
       {{"sp-q-aap", false}},
       "pointwise product sign(sin t) * sap4_plateau"},
      {"sign_sin_plus_plateau", DomainKind::HalfLine, 1,
       {{"sp-q-aap", false}},
       "pointwise sum sign(sin t) + sap4_plateau"},
  };
}

}  // namespace

const std::vector<CatalogEntry>& entries() {
  static const std::vector<CatalogEntry> all = build_entries();
  return all;
}

const CatalogEntry& entry(const std::string& name) {
  for (const auto& e : entries())
    if (e.name == name) return e;
  throw std::invalid_argument("unknown catalog entry: " + name);
}

SampledSignal render(const std::string& name, const Grid& grid,
                     std::size_t dim) {
  const CatalogEntry& e = entry(name);
  SampledSignal out = [&]() -> SampledSignal {
    if (name == "step")
      return SampledSignal::from_rule(grid, e.domain, step_fn);
    if (name == "sin_log")
      return SampledSignal::from_rule(grid, e.domain, [](double t) { return sin_log(t); });
    if (name == "c0_sequence") {
      const std::size_t d = dim > 0 ? dim : c0_default_dim(grid.end());
      return SampledSignal::from_vector_rule(
          grid, e.domain, d,
          [](double t, std::span<double> v) { c0_sequence(t, v); },
          NormTag::Sup);
    }
    if (name == "reciprocal_cos")
      return SampledSignal::from_rule(grid, e.domain, [](double t) { return reciprocal_cos(t); });
    if (name == "reciprocal_sin")
      return SampledSignal::from_rule(grid, e.domain, [](double t) { return reciprocal_sin(t); });
    if (name == "xie_zhang_ramp")
      return SampledSignal::from_rule(grid, e.domain, xie_zhang_ramp);
    if (name == "sign_sin")
      return SampledSignal::from_rule(grid, e.domain, sign_sin);
    if (name == "sap4_plateau")
      return SampledSignal::from_rule(grid, e.domain, sap4_plateau);
    if (name == "sign_sin_times_plateau")
      return SampledSignal::from_rule(grid, e.domain, [](double t) {
        return sign_sin(t) * sap4_plateau(t);
      });
    if (name == "sign_sin_plus_plateau")
      return SampledSignal::from_rule(grid, e.domain, [](double t) {
        return sign_sin(t) + sap4_plateau(t);
      });
    throw std::invalid_argument("unknown catalog entry: " + name);
  }();
  std::vector<std::string> labels;
  labels.reserve(e.labels.size());
  for (const auto& [k, v] : e.labels) labels.push_back(k + (v ? ":yes" : ":no"));
  out.set_labels(std::move(labels));
  return out;
}

std::vector<double> odd_integer_anchors(double lo, double hi) {
  std::vector<double> out;
  double t = 2.0 * std::ceil((std::max(lo, 1.0) - 1.0) / 2.0) + 1.0;
  for (; t <= hi; t += 2.0) out.push_back(t);
  return out;
}

std::vector<double> plateau_start_anchors(double lo, double hi) {
  std::vector<double> out;
  long n = std::max(1L, static_cast<long>(std::ceil((lo - 0.5) / 4.0)));
  for (; 4.0 * static_cast<double>(n) + 0.5 <= hi; ++n)
    out.push_back(4.0 * static_cast<double>(n) + 0.5);
  return out;
}

}  // namespace aptk::catalog
