#include "aptk/heat.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aptk::heat {

namespace {
constexpr double kClampExponent = -700.0;

double clamped_exp(double e, std::size_t& clamps) {
  if (e < kClampExponent) {
    ++clamps;
    return 0.0;
  }
  return std::exp(e);
}
}  // namespace

// DST-I via FFTW's RODFT00; applying the transform twice multiplies by
// 2(m+1), where m is the interior point count.
struct HeatSystem::Dst {
  std::size_t m;
  double* buf;
  fftw_plan plan;

  explicit Dst(std::size_t m_) : m(m_) {
    buf = fftw_alloc_real(m);
    plan = fftw_plan_r2r_1d(static_cast<int>(m), buf, buf, FFTW_RODFT00,
                            FFTW_ESTIMATE);
  }
  ~Dst() {
    fftw_destroy_plan(plan);
    fftw_free(buf);
  }
  // y_k = 2 sum_j x_j sin(pi (j+1)(k+1) / (m+1)), in place on buf
  void run() const { fftw_execute(plan); }
};

HeatSystem::HeatSystem(double gamma0, std::function<double(double)> potential,
                       std::size_t n_modes, std::size_t n_x,
                       bool include_quadratic_decay)
    : gamma0_(gamma0), potential_(std::move(potential)), n_modes_(n_modes),
      n_x_(n_x), quadratic_decay_(include_quadratic_decay) {
  if (!(gamma0_ > 0)) throw std::invalid_argument("heat model needs gamma0 > 0");
  if (n_x_ < 8 || n_modes_ < 1 || n_modes_ > n_x_ - 2)
    throw std::invalid_argument("heat model needs 1 <= n_modes <= n_x - 2");
  const std::size_t m = n_x_ - 2;
  x_.resize(n_x_);
  for (std::size_t j = 0; j < n_x_; ++j)
    x_[j] = std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_x_ - 1);
  pot_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    pot_[j] = potential_ ? potential_(x_[j + 1]) : 0.0;
    if (pot_[j] < 0.0)
      throw std::invalid_argument("heat potential must be non-negative");
  }
  dst_ = std::make_unique<Dst>(m);
}

HeatSystem::~HeatSystem() = default;

double HeatSystem::min_potential() const {
  double m = pot_.empty() ? 0.0 : pot_.front();
  for (double v : pot_) m = std::min(m, v);
  return m;
}

std::vector<double> HeatSystem::modes_from_samples(
    std::span<const double> samples) const {
  const std::size_t m = n_x_ - 2;
  if (samples.size() != n_x_)
    throw std::invalid_argument("expected n_x spatial samples");
  for (std::size_t j = 0; j < m; ++j) dst_->buf[j] = samples[j + 1];
  dst_->run();
  std::vector<double> modes(n_modes_);
  const double scale = 1.0 / static_cast<double>(m + 1);
  for (std::size_t n = 0; n < n_modes_; ++n) modes[n] = dst_->buf[n] * scale;
  return modes;
}

std::vector<double> HeatSystem::samples_from_modes(
    std::span<const double> modes) const {
  const std::size_t m = n_x_ - 2;
  if (modes.size() > m) throw std::invalid_argument("too many mode coefficients");
  std::fill(dst_->buf, dst_->buf + m, 0.0);
  for (std::size_t n = 0; n < modes.size(); ++n) dst_->buf[n] = modes[n];
  dst_->run();
  std::vector<double> samples(n_x_, 0.0);
  for (std::size_t j = 0; j < m; ++j) samples[j + 1] = 0.5 * dst_->buf[j];
  return samples;
}

SpectralField HeatSystem::field_from_samples(std::span<const double> samples) const {
  SpectralField f;
  f.modes = modes_from_samples(samples);
  f.samples = samples_from_modes(f.modes);
  return f;
}

SpectralField HeatSystem::field_from_modes(std::span<const double> modes) const {
  SpectralField f;
  f.modes.assign(modes.begin(), modes.end());
  f.modes.resize(n_modes_, 0.0);
  f.samples = samples_from_modes(f.modes);
  return f;
}

void HeatSystem::apply_U(double t, double s, std::span<const double> modes_in,
                         std::span<double> modes_out) const {
  if (t < s) throw std::invalid_argument("apply_U needs t >= s");
  const std::size_t m = n_x_ - 2;
  const double dt = t - s;
  // multiplication by exp(int_s^t q(r, x) dr) on the spatial grid
  std::fill(dst_->buf, dst_->buf + m, 0.0);
  for (std::size_t n = 0; n < n_modes_; ++n) dst_->buf[n] = modes_in[n];
  dst_->run();
  const double cubic = quadratic_decay_ ? t * t * t - s * s * s : 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double e = -gamma0_ * dt - cubic - dt * pot_[j];
    dst_->buf[j] *= 0.5 * clamped_exp(e, clamps_);
  }
  dst_->run();
  const double scale = 1.0 / static_cast<double>(m + 1);
  // diagonal semigroup on the leading modes
  for (std::size_t n = 0; n < n_modes_; ++n) {
    const double lam = static_cast<double>(n + 1) * static_cast<double>(n + 1);
    modes_out[n] = dst_->buf[n] * scale * clamped_exp(-lam * dt, clamps_);
  }
}

double HeatSystem::semigroup_norm(double dt) const {
  double best = 0.0;
  for (std::size_t n = 1; n <= n_modes_; ++n)
    best = std::max(best, std::exp(-static_cast<double>(n * n) * dt));
  return best;
}

double HeatSystem::l2_norm(std::span<const double> modes) const {
  double s = 0.0;
  for (double a : modes) s += a * a;
  return std::sqrt(0.5 * std::numbers::pi * s);
}

DichotomySystem HeatSystem::dichotomy() const {
  DichotomySystem sys;
  sys.dim = n_modes_;
  sys.M_prime = 1.0;
  sys.omega = 1.0 + gamma0_;
  sys.exponentially_stable = true;
  const HeatSystem* self = this;
  sys.apply_U = [self](double t, double s, std::span<const double> x,
                       std::span<double> out) { self->apply_U(t, s, x, out); };
  sys.proj_P = [n = n_modes_](double) { return Operator::identity(n); };
  sys.apply_UQ_back = [](double, double, std::span<const double>,
                         std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
  };
  return sys;
}

ZagrebinCheck heat_zagrebin_check(const HeatSystem& sys, double tau,
                                  const std::vector<double>& m_grid, double q,
                                  double c, double fit_t_max, std::size_t k_max,
                                  double s_step) {
  if (!(c > 0.75 && c < 1.0))
    throw std::invalid_argument("zagrebin check needs c in (3/4, 1)");
  const bool qinf = std::isinf(q);
  const double gamma0 = sys.gamma0();
  // the x-sup of the multiplier difference is attained where the potential
  // is smallest; both integrands share exp(-(gamma0 + min f) s)
  const double min_pot = sys.min_potential();

  auto multiplier_diff = [&](double t, double s) {
    // |exp(int_{t+tau-s}^{t+tau} q) - exp(int_{t-s}^t q)| with the common
    // factor exp(-(gamma0+min f) s); q(r,x) = -gamma0 - 3r^2 - f(x)
    const double common = -(gamma0 + min_pot) * s;
    const double a = -(std::pow(t + tau, 3) - std::pow(t + tau - s, 3));
    const double b = -(std::pow(t, 3) - std::pow(t - s, 3));
    std::size_t scratch = 0;
    return clamped_exp(common, scratch) *
           std::abs(clamped_exp(a, scratch) - clamped_exp(b, scratch));
  };

  ZagrebinCheck out;
  const auto cells = static_cast<std::size_t>(std::lround(1.0 / s_step));
  bool first_t = true;
  for (double t : m_grid) {
    double sum = 0.0;
    for (std::size_t k = 0; k <= k_max; ++k) {
      double block_sup = 0.0, integral = 0.0;
      for (std::size_t j = 0; j <= cells; ++j) {
        const double s = static_cast<double>(k) + static_cast<double>(j) * s_step;
        const double v = std::exp(-s) * multiplier_diff(t, s);
        if (qinf) {
          block_sup = std::max(block_sup, v);
        } else {
          const double w = (j == 0 || j == cells) ? 0.5 * s_step : s_step;
          integral += w * std::pow(v, q);
        }
      }
      const double block = qinf ? block_sup : std::pow(integral, 1.0 / q);
      sum += block;
      if (first_t) {
        // endpoint-exponential chain bound (four terms, polynomial factor)
        const double kk = static_cast<double>(k);
        const double poly = 3.0 * (kk + 1.0) * (kk + 1.0) +
                            6.0 * (kk + 1.0) * (t + tau);
        auto endpoint = [&](double ss, double tt) {
          return std::exp(std::min(700.0, 3.0 * ss * tt * (ss - tt)));
        };
        const double four = endpoint(kk, t) + endpoint(kk + 1.0, t) +
                            endpoint(kk, t + tau) + endpoint(kk + 1.0, t + tau);
        out.blocks_at_first_t.push_back({k, block, std::abs(tau) * four * poly});
      }
    }
    first_t = false;
    out.residual_by_t.emplace_back(t, sum);
  }

  for (double M : m_grid) {
    double sup = 0.0;
    for (const auto& [t, v] : out.residual_by_t)
      if (t >= M - 1e-12) sup = std::max(sup, v);
    out.by_M.emplace_back(M, sup);
  }

  auto dominator = [&](double t) {
    return std::abs(tau) * std::exp(-3.0 * c * t * t) * (1.0 + t + tau);
  };
  double fit = 0.0;
  for (const auto& [t, v] : out.residual_by_t)
    if (t <= fit_t_max + 1e-12 && dominator(t) > 0.0)
      fit = std::max(fit, v / dominator(t));
  out.fitted_const = fit;
  out.dominated = true;
  for (const auto& [t, v] : out.residual_by_t)
    if (v > fit * dominator(t) * (1.0 + 1e-9) + 1e-300) out.dominated = false;

  double bfit = 0.0;
  for (const auto& b : out.blocks_at_first_t)
    if (b.chain_bound > 0.0) bfit = std::max(bfit, b.value / b.chain_bound);
  out.block_fit_const = bfit;
  out.blocks_bounded = true;
  for (const auto& b : out.blocks_at_first_t)
    if (b.value > std::max(bfit, 1.0) * b.chain_bound * (1.0 + 1e-9) + 1e-300)
      out.blocks_bounded = false;
  return out;
}

SampledSignal HeatTrajectory::mode_signal() const {
  const std::size_t dim = modes.empty() ? 1 : modes.front().size();
  SampledSignal s(time_grid, dim, DomainKind::HalfLine, NormTag::Euclidean);
  const double scale = std::sqrt(0.5 * std::numbers::pi);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    auto out = s.node(i);
    for (std::size_t d = 0; d < dim; ++d) out[d] = scale * modes[i][d];
  }
  return s;
}

HeatSolveResult heat_solve(const HeatSystem& sys,
                           const std::function<double(double, double)>& forcing,
                           std::span<const double> u0_samples, double t_end,
                           double dt, std::size_t substeps) {
  if (substeps < 1) throw std::invalid_argument("substeps must be >= 1");
  const Grid tg = make_grid(0.0, t_end, dt);
  const std::size_t N = sys.n_modes();

  auto forcing_modes = [&](double t) {
    std::vector<double> fx(sys.n_x(), 0.0);
    for (std::size_t j = 1; j + 1 < sys.n_x(); ++j)
      fx[j] = forcing(t, sys.x_grid()[j]);
    return sys.modes_from_samples(fx);
  };

  HeatSolveResult res;
  res.trajectory.time_grid = tg;
  res.trajectory.modes.resize(tg.count);
  res.substeps = substeps;

  std::vector<double> a = sys.modes_from_samples(u0_samples);
  std::vector<double> b = a;  // splitting path
  res.trajectory.modes[0] = a;

  std::vector<double> tmp(N), f0 = forcing_modes(0.0), f1(N);
  double cross = 0.0;
  for (std::size_t i = 0; i + 1 < tg.count; ++i) {
    const double t0 = tg.t(i);
    const double t1 = tg.t(i + 1);
    // path A: exact-U step with trapezoid forcing
    f1 = forcing_modes(t1);
    for (std::size_t n = 0; n < N; ++n) tmp[n] = a[n] + 0.5 * dt * f0[n];
    sys.apply_U(t1, t0, tmp, a);
    for (std::size_t n = 0; n < N; ++n) a[n] += 0.5 * dt * f1[n];
    // path B: substeps with midpoint forcing
    const double sub = dt / static_cast<double>(substeps);
    for (std::size_t s = 0; s < substeps; ++s) {
      const double a0 = t0 + static_cast<double>(s) * sub;
      const double a1 = a0 + sub;
      const double mid = 0.5 * (a0 + a1);
      sys.apply_U(a1, a0, b, tmp);
      const auto fm = forcing_modes(mid);
      std::vector<double> fm2(N);
      sys.apply_U(a1, mid, fm, fm2);
      for (std::size_t n = 0; n < N; ++n) b[n] = tmp[n] + sub * fm2[n];
    }
    res.trajectory.modes[i + 1] = a;
    std::vector<double> diff(N);
    for (std::size_t n = 0; n < N; ++n) diff[n] = a[n] - b[n];
    cross = std::max(cross, sys.l2_norm(diff));
    f0 = f1;
  }
  res.cross_check_sup = cross;
  return res;
}

}  // namespace aptk::heat
