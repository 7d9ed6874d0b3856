#include "aptk/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aptk {

namespace {

constexpr double kRelTol = 1e-9;

bool near(double a, double b, double scale) {
  return std::abs(a - b) <= kRelTol * std::max(1.0, std::abs(scale));
}

}  // namespace

double vec_norm(std::span<const double> v, NormTag tag) {
  if (tag == NormTag::Sup) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Grid make_grid(double t_start, double t_end, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(t_end > t_start)) throw std::invalid_argument("grid needs t_end > t_start");
  const double n = (t_end - t_start) / step;
  const auto count = static_cast<std::size_t>(std::llround(n)) + 1;
  if (count < 2) throw std::invalid_argument("grid needs at least two nodes");
  Grid g{t_start, step, count};
  if (!near(g.end(), t_end, t_end - t_start))
    throw std::invalid_argument("t_end is not on the step lattice");
  return g;
}

long lattice_index(const Grid& g, double x) {
  const double r = (x - g.start) / g.step;
  const long k = std::lround(r);
  if (std::abs(static_cast<double>(k) - r) * g.step >
      kRelTol * std::max(1.0, std::abs(x)))
    return -1;
  return k;
}

std::size_t lattice_cells(const Grid& g, double len) {
  if (!(len > 0.0)) throw std::invalid_argument("window length must be positive");
  const double r = len / g.step;
  const long k = std::lround(r);
  if (k < 1 || std::abs(static_cast<double>(k) * g.step - len) >
                   kRelTol * std::max(1.0, len))
    throw std::invalid_argument("length is not a lattice multiple of the grid step");
  return static_cast<std::size_t>(k);
}

SampledSignal::SampledSignal(Grid grid, std::size_t dim, DomainKind domain,
                             NormTag norm)
    : grid_(grid), dim_(dim), domain_(domain), norm_(norm),
      data_(grid.count * dim, 0.0) {
  if (grid_.count < 2) throw std::invalid_argument("signal grid needs count >= 2");
  if (dim_ < 1) throw std::invalid_argument("signal dimension must be >= 1");
  if (domain_ == DomainKind::HalfLine && grid_.start < -kRelTol)
    throw std::invalid_argument("half-line signal needs t_start >= 0");
}

SampledSignal SampledSignal::from_rule(const Grid& grid, DomainKind domain,
                                       const std::function<double(double)>& rule,
                                       NormTag norm) {
  SampledSignal s(grid, 1, domain, norm);
  for (std::size_t i = 0; i < grid.count; ++i) s.raw()[i] = rule(grid.t(i));
  return s;
}

SampledSignal SampledSignal::from_vector_rule(
    const Grid& grid, DomainKind domain, std::size_t dim,
    const std::function<void(double, std::span<double>)>& rule, NormTag norm) {
  SampledSignal s(grid, dim, domain, norm);
  for (std::size_t i = 0; i < grid.count; ++i) rule(grid.t(i), s.node(i));
  return s;
}

void SampledSignal::value_at(double t, std::span<double> out) const {
  const double slack = kRelTol * std::max(1.0, std::abs(grid_.span()));
  if (t < grid_.start - slack || t > grid_.end() + slack)
    throw std::domain_error("evaluation point outside the signal grid");
  double r = (t - grid_.start) / grid_.step;
  r = std::clamp(r, 0.0, static_cast<double>(grid_.count - 1));
  auto i = static_cast<std::size_t>(r);
  if (i >= grid_.count - 1) i = grid_.count - 2;
  const double theta = r - static_cast<double>(i);
  const auto a = node(i);
  const auto b = node(i + 1);
  for (std::size_t k = 0; k < dim_; ++k)
    out[k] = a[k] + theta * (b[k] - a[k]);
}

Vec SampledSignal::value_at(double t) const {
  Vec out(dim_);
  value_at(t, out);
  return out;
}

double SampledSignal::scalar_at(double t) const {
  double out;
  value_at(t, std::span<double>(&out, 1));
  return out;
}

double sup_norm(const SampledSignal& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.count(); ++i) m = std::max(m, f.node_norm(i));
  return m;
}

SampledSignal scale(const SampledSignal& f, double c) {
  SampledSignal g = f;
  for (double& x : g.raw()) x *= c;
  return g;
}

namespace {

// Sub-lattice of f's grid whose shift by `a` stays inside the domain.
Grid shifted_sub_grid(const SampledSignal& f, double a) {
  const Grid& g = f.grid();
  const double lo = g.start - a;
  const double hi = g.end() - a;
  const double slack = kRelTol * std::max(1.0, std::abs(g.span()));
  auto i_lo = static_cast<long>(std::ceil((std::max(lo, g.start) - g.start) / g.step - kRelTol));
  auto i_hi = static_cast<long>(std::floor((std::min(hi, g.end()) - g.start) / g.step + kRelTol));
  (void)slack;
  if (i_lo < 0) i_lo = 0;
  if (i_hi > static_cast<long>(g.count) - 1) i_hi = static_cast<long>(g.count) - 1;
  if (i_hi - i_lo + 1 < 2)
    throw std::domain_error("empty overlap grid for the requested shift");
  return Grid{g.t(static_cast<std::size_t>(i_lo)), g.step,
              static_cast<std::size_t>(i_hi - i_lo + 1)};
}

DomainKind sub_domain(const SampledSignal& f, const Grid& sub) {
  if (f.domain() == DomainKind::HalfLine && sub.start >= -kRelTol)
    return DomainKind::HalfLine;
  return sub.start >= -kRelTol ? f.domain() : DomainKind::FullLine;
}

}  // namespace

SampledSignal translate(const SampledSignal& f, double a) {
  const Grid sub = shifted_sub_grid(f, a);
  SampledSignal g(sub, f.dim(), sub_domain(f, sub), f.norm_tag());
  const long k = lattice_index(f.grid(), f.grid().start + a);
  const long base = lattice_index(f.grid(), sub.start);
  for (std::size_t i = 0; i < sub.count; ++i) {
    if (k >= 0) {
      const auto src = f.node(static_cast<std::size_t>(base + static_cast<long>(i) + k));
      std::copy(src.begin(), src.end(), g.node(i).begin());
    } else {
      f.value_at(sub.t(i) + a, g.node(i));
    }
  }
  return g;
}

SampledSignal dilate(const SampledSignal& f, double b) {
  if (b == 0.0) throw std::invalid_argument("dilate needs b != 0");
  const Grid& g = f.grid();
  const double s0 = g.start / b;
  const double s1 = g.end() / b;
  Grid ng{std::min(s0, s1), g.step / std::abs(b), g.count};
  SampledSignal out(ng, f.dim(),
                    ng.start >= -kRelTol ? f.domain() : DomainKind::FullLine,
                    f.norm_tag());
  for (std::size_t i = 0; i < ng.count; ++i) {
    const std::size_t j = b > 0 ? i : g.count - 1 - i;
    const auto src = f.node(j);
    std::copy(src.begin(), src.end(), out.node(i).begin());
  }
  return out;
}

SampledSignal reciprocal(const SampledSignal& f, double min_modulus) {
  if (f.dim() != 1)
    throw std::invalid_argument("reciprocal is defined for scalar signals");
  double m = std::abs(f.scalar(0));
  for (std::size_t i = 1; i < f.count(); ++i)
    m = std::min(m, std::abs(f.scalar(i)));
  if (m <= min_modulus)
    throw std::invalid_argument("reciprocal needs min |f| above tolerance");
  SampledSignal g = f;
  for (double& x : g.raw()) x = 1.0 / x;
  return g;
}

ShiftedPair shifted_overlap(const SampledSignal& f, double tau) {
  SampledSignal shifted = translate(f, tau);
  const Grid& sub = shifted.grid();
  SampledSignal base(sub, f.dim(), shifted.domain(), f.norm_tag());
  const long b0 = lattice_index(f.grid(), sub.start);
  for (std::size_t i = 0; i < sub.count; ++i) {
    const auto src = f.node(static_cast<std::size_t>(b0 + static_cast<long>(i)));
    std::copy(src.begin(), src.end(), base.node(i).begin());
  }
  return {std::move(shifted), std::move(base)};
}

SampledSignal shift_difference(const SampledSignal& f, double tau) {
  auto [shifted, base] = shifted_overlap(f, tau);
  for (std::size_t i = 0; i < shifted.raw().size(); ++i)
    shifted.raw()[i] -= base.raw()[i];
  return shifted;
}

SampledSignal anti_sum(const SampledSignal& f, double tau) {
  auto [shifted, base] = shifted_overlap(f, tau);
  for (std::size_t i = 0; i < shifted.raw().size(); ++i)
    shifted.raw()[i] += base.raw()[i];
  return shifted;
}

SampledSignal transform(const SampledSignal& f, const TransformSpec& spec) {
  return std::visit(
      [&](const auto& s) -> SampledSignal {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Scale>) return scale(f, s.c);
        else if constexpr (std::is_same_v<T, Translate>) return translate(f, s.a);
        else if constexpr (std::is_same_v<T, Dilate>) return dilate(f, s.b);
        else if constexpr (std::is_same_v<T, Reciprocal>) return reciprocal(f, s.min_modulus);
        else if constexpr (std::is_same_v<T, ShiftDifference>) return shift_difference(f, s.tau);
        else return anti_sum(f, s.tau);
      },
      spec);
}

namespace {

void require_same_grid(const SampledSignal& a, const SampledSignal& b) {
  if (!(a.grid() == b.grid()))
    throw std::invalid_argument("signals must share an identical grid");
}

}  // namespace

SampledSignal pointwise_product(const SampledSignal& f_scalar,
                                const SampledSignal& g) {
  require_same_grid(f_scalar, g);
  if (f_scalar.dim() != 1)
    throw std::invalid_argument("pointwise_product needs a scalar first factor");
  SampledSignal out = g;
  for (std::size_t i = 0; i < g.count(); ++i) {
    const double c = f_scalar.scalar(i);
    for (double& x : out.node(i)) x *= c;
  }
  return out;
}

SampledSignal pointwise_add(const SampledSignal& f, const SampledSignal& g) {
  require_same_grid(f, g);
  if (f.dim() != g.dim())
    throw std::invalid_argument("signals must share the dimension");
  SampledSignal out = f;
  for (std::size_t i = 0; i < out.raw().size(); ++i) out.raw()[i] += g.raw()[i];
  return out;
}

SampledSignal pointwise_subtract(const SampledSignal& f, const SampledSignal& g) {
  require_same_grid(f, g);
  if (f.dim() != g.dim())
    throw std::invalid_argument("signals must share the dimension");
  SampledSignal out = f;
  for (std::size_t i = 0; i < out.raw().size(); ++i) out.raw()[i] -= g.raw()[i];
  return out;
}

SampledSignal downsample(const SampledSignal& f, std::size_t stride) {
  if (stride < 1) throw std::invalid_argument("downsample stride must be >= 1");
  const std::size_t n = (f.count() - 1) / stride + 1;
  if (n < 2) throw std::invalid_argument("downsample leaves fewer than 2 nodes");
  Grid g{f.grid().start, f.grid().step * static_cast<double>(stride), n};
  SampledSignal out(g, f.dim(), f.domain(), f.norm_tag());
  for (std::size_t i = 0; i < n; ++i) {
    const auto src = f.node(i * stride);
    std::copy(src.begin(), src.end(), out.node(i).begin());
  }
  out.set_labels(f.labels());
  return out;
}

void write_csv(const SampledSignal& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << "t";
  for (std::size_t k = 0; k < f.dim(); ++k) os << ",v" << k;
  os << "\n";
  char buf[32];
  for (std::size_t i = 0; i < f.count(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", f.grid().t(i));
    os << buf;
    for (double x : f.node(i)) {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      os << ',' << buf;
    }
    os << "\n";
  }
}

SampledSignal read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line) || line.empty())
    throw std::runtime_error("empty signal CSV: " + path);
  std::size_t dim = 0;
  for (char c : line)
    if (c == ',') ++dim;
  if (dim < 1 || line.substr(0, 1) != "t")
    throw std::runtime_error("malformed signal CSV header: " + path);

  std::vector<double> ts;
  std::vector<double> vals;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      const double x = std::stod(cell);
      if (col == 0) ts.push_back(x);
      else vals.push_back(x);
      ++col;
    }
    if (col != dim + 1)
      throw std::runtime_error("ragged row in signal CSV: " + path);
  }
  if (ts.size() < 2) throw std::runtime_error("signal CSV needs >= 2 rows: " + path);

  const double step = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
  if (!(step > 0)) throw std::runtime_error("signal CSV t must increase: " + path);
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double gap = ts[i + 1] - ts[i];
    if (std::abs(gap - step) > kRelTol * std::max(1.0, std::abs(ts.back())))
      throw std::runtime_error("signal CSV is not equispaced: " + path);
  }
  Grid g{ts.front(), step, ts.size()};
  SampledSignal s(g, dim,
                  g.start >= 0.0 ? DomainKind::HalfLine : DomainKind::FullLine);
  s.raw() = std::move(vals);
  return s;
}

}  // namespace aptk
