#include "aptk/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aptk/stepanov.hpp"

namespace aptk {

Operator Operator::identity(std::size_t n) {
  Operator m = zero(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

void Operator::apply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    const double* row = a.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

double Operator::norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += std::abs(at(i, j));
    best = std::max(best, s);
  }
  return best;
}

Operator Operator::operator-(const Operator& o) const {
  Operator r = *this;
  for (std::size_t i = 0; i < a.size(); ++i) r.a[i] -= o.a[i];
  return r;
}

Operator Operator::operator*(const Operator& o) const {
  Operator r = zero(rows, o.cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k) {
      const double v = at(i, k);
      for (std::size_t j = 0; j < o.cols; ++j) r.at(i, j) += v * o.at(k, j);
    }
  return r;
}

Operator matrix_exponential(const Operator& A, double t) {
  if (A.rows != A.cols) throw std::invalid_argument("matrix exponential needs a square matrix");
  Operator B = A;
  for (double& x : B.a) x *= t;
  int s = 0;
  double nrm = B.norm();
  while (nrm > 0.5) {
    nrm *= 0.5;
    ++s;
  }
  const double f = std::ldexp(1.0, -s);
  for (double& x : B.a) x *= f;
  // Taylor series; ||B|| <= 1/2 keeps 20 terms well below round-off.
  Operator result = Operator::identity(A.rows);
  Operator term = Operator::identity(A.rows);
  for (int k = 1; k <= 20; ++k) {
    term = term * B;
    for (double& x : term.a) x /= static_cast<double>(k);
    for (std::size_t i = 0; i < result.a.size(); ++i) result.a[i] += term.a[i];
  }
  for (int k = 0; k < s; ++k) result = result * result;
  return result;
}

KernelFamily exp_kernel(double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("exp kernel needs lambda > 0");
  KernelFamily k;
  k.eval = [lambda](double t) { return Operator::scalar(std::exp(-lambda * t)); };
  k.in_dim = k.out_dim = 1;
  k.closed_form_l1 = 1.0 / lambda;
  k.decay_hint = KernelFamily::Decay{1.0, lambda};
  return k;
}

KernelFamily matrix_exp_kernel(Operator A, std::optional<KernelFamily::Decay> hint) {
  if (A.rows != A.cols) throw std::invalid_argument("kernel generator must be square");
  KernelFamily k;
  k.in_dim = k.out_dim = A.rows;
  k.eval = [A = std::move(A)](double t) { return matrix_exponential(A, t); };
  k.decay_hint = hint;
  return k;
}

namespace {

constexpr double kTinyTail = 1e-10;

double hint_tail(const KernelFamily& R, double T) {
  if (!R.decay_hint) return 0.0;
  return R.decay_hint->C * std::exp(-R.decay_hint->lambda * T) / R.decay_hint->lambda;
}

// u-length beyond which the kernel contribution is below `tol` per unit of
// input amplitude; 0 means no certificate (integrate everything).
double support_cut(const KernelFamily& R, double amplitude, double tol) {
  if (!R.decay_hint || amplitude <= 0.0) return 0.0;
  const auto& d = *R.decay_hint;
  const double arg = d.C * amplitude / (d.lambda * tol);
  return arg <= 1.0 ? 0.0 : std::log(arg) / d.lambda;
}

struct KernelCache {
  bool scalar = false;
  std::vector<double> sval;     // scalar values at j*h (index 0 = midpoint h/2)
  std::vector<Operator> oval;
};

KernelCache cache_kernel(const KernelFamily& R, double h, std::size_t j_max) {
  KernelCache c;
  const Operator probe = R.eval(h / 2.0);
  c.scalar = probe.rows == 1 && probe.cols == 1;
  if (c.scalar) {
    c.sval.resize(j_max + 1);
    c.sval[0] = probe.a[0];
    for (std::size_t j = 1; j <= j_max; ++j)
      c.sval[j] = R.eval(static_cast<double>(j) * h).a[0];
  } else {
    c.oval.reserve(j_max + 1);
    c.oval.push_back(probe);
    for (std::size_t j = 1; j <= j_max; ++j)
      c.oval.push_back(R.eval(static_cast<double>(j) * h));
  }
  return c;
}

// F(t_i) = int over u in [0, min(t_i - t_lo, J h)] of R(u) f(t_i - u) du.
// First cell by open midpoint (kernel never sampled at 0), rest trapezoid.
void accumulate_node(const KernelCache& kc, const SampledSignal& f,
                     std::size_t i, std::size_t J, double h,
                     std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (i == 0) return;
  const std::size_t jmax = std::min(i, J);
  Vec mid(f.dim());
  {
    const auto a = f.node(i);
    const auto b = f.node(i - 1);
    for (std::size_t d = 0; d < mid.size(); ++d) mid[d] = 0.5 * (a[d] + b[d]);
  }
  if (kc.scalar) {
    double acc = h * kc.sval[0] * mid[0];
    if (jmax >= 2) {
      for (std::size_t j = 1; j <= jmax; ++j) {
        const double w = (j == 1 || j == jmax) ? 0.5 : 1.0;
        acc += w * h * kc.sval[j] * f.scalar(i - j);
      }
    }
    out[0] = acc;
    return;
  }
  Vec tmp(out.size());
  kc.oval[0].apply(mid, tmp);
  for (std::size_t d = 0; d < out.size(); ++d) out[d] += h * tmp[d];
  if (jmax >= 2) {
    for (std::size_t j = 1; j <= jmax; ++j) {
      const double w = (j == 1 || j == jmax) ? 0.5 * h : h;
      kc.oval[j].apply(f.node(i - j), tmp);
      for (std::size_t d = 0; d < out.size(); ++d) out[d] += w * tmp[d];
    }
  }
}

}  // namespace

SampledSignal finite_convolution(const KernelFamily& R, const SampledSignal& f) {
  const Grid& g = f.grid();
  if (g.start < -1e-9 || f.domain() != DomainKind::HalfLine)
    throw std::invalid_argument("finite convolution needs a half-line signal on [0, T]");
  if (g.start > 1e-9)
    throw std::invalid_argument("finite convolution needs the grid to start at 0");
  if (R.in_dim != f.dim())
    throw std::invalid_argument("kernel input dimension mismatch");
  const double h = g.step;
  const double cut = support_cut(R, sup_norm(f), kTinyTail);
  const std::size_t J =
      cut > 0.0 ? std::min<std::size_t>(g.count - 1,
                                        static_cast<std::size_t>(std::ceil(cut / h)))
                : g.count - 1;
  const KernelCache kc = cache_kernel(R, h, J);
  SampledSignal out(g, R.out_dim, DomainKind::HalfLine, f.norm_tag());
  for (std::size_t i = 0; i < g.count; ++i)
    accumulate_node(kc, f, i, J, h, out.node(i));
  return out;
}

InfiniteConvolution infinite_convolution(const KernelFamily& R,
                                         const SampledSignal& f,
                                         double tail_tol) {
  if (R.in_dim != f.dim())
    throw std::invalid_argument("kernel input dimension mismatch");
  const Grid& g = f.grid();
  const double h = g.step;
  const double amp = sup_norm(f);
  double T_cut = support_cut(R, amp, tail_tol);
  if (!R.decay_hint) {
    // doubling until the Cauchy increment falls below tail_tol/2
    double T = 1.0;
    double prev = kernel_l1_norm(R, T).value;
    for (int it = 0; it < 40; ++it) {
      const double next = kernel_l1_norm(R, 2.0 * T).value;
      if ((next - prev) * amp <= tail_tol / 2.0) break;
      prev = next;
      T *= 2.0;
    }
    T_cut = 2.0 * T;
  }
  if (T_cut <= 0.0) T_cut = h;
  const auto J = static_cast<std::size_t>(std::ceil(T_cut / h - 1e-9));
  if (J + 1 >= g.count)
    throw std::domain_error("signal window too short for the required T_cut");
  const KernelCache kc = cache_kernel(R, h, J);
  Grid og{g.t(J), h, g.count - J};
  SampledSignal out(og, R.out_dim,
                    og.start >= 0.0 ? DomainKind::HalfLine : DomainKind::FullLine,
                    f.norm_tag());
  for (std::size_t i = 0; i < og.count; ++i)
    accumulate_node(kc, f, i + J, J, h, out.node(i));
  const double certified = R.decay_hint
                               ? amp * hint_tail(R, static_cast<double>(J) * h)
                               : tail_tol;
  return {std::move(out), static_cast<double>(J) * h, std::min(tail_tol, certified)};
}

L1Estimate kernel_l1_norm(const KernelFamily& R, double t_max, double quad_step) {
  if (!(t_max > 0)) throw std::invalid_argument("t_max must be positive");
  const double h = quad_step;
  const auto n = static_cast<std::size_t>(std::ceil(t_max / h - 1e-9));
  double integral = h * R.eval(h / 2.0).norm();
  double last_block = 0.0, prev_block = 0.0;
  double block_edge = t_max / 2.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double u = static_cast<double>(j) * h;
    const double w = (j == 1 || j == n) ? 0.5 * h : h;
    const double v = w * R.eval(std::min(u, t_max)).norm();
    integral += v;
    (u > block_edge ? last_block : prev_block) += v;
  }
  L1Estimate est;
  est.value = integral;
  est.tail_bound = hint_tail(R, t_max);
  est.value += est.tail_bound;
  // Cauchy test: the second half-block must shrink against the first.
  est.verified = R.decay_hint.has_value() || last_block <= 0.5 * prev_block;
  return est;
}

double kernel_l1_tail(const KernelFamily& R, double T) { return hint_tail(R, T); }

BlockSum kernel_lq_block_sum(const KernelFamily& R, double q, std::size_t k_max,
                             double quad_step) {
  if (!(q >= 1.0)) throw std::invalid_argument("block sum needs q >= 1 (inf allowed)");
  const bool qinf = std::isinf(q);
  const double h = quad_step;
  const auto cells = static_cast<std::size_t>(std::lround(1.0 / h));
  BlockSum out;
  double prev_block = 0.0;
  for (std::size_t k = 0; k <= k_max; ++k) {
    const double base = static_cast<double>(k);
    double block;
    if (qinf) {
      block = k == 0 ? R.eval(h / 2.0).norm() : R.eval(base).norm();
      for (std::size_t j = 1; j <= cells; ++j)
        block = std::max(block, R.eval(base + static_cast<double>(j) * h).norm());
    } else {
      double integral = 0.0;
      if (k == 0) {
        integral += h * std::pow(R.eval(h / 2.0).norm(), q);
        for (std::size_t j = 1; j <= cells; ++j) {
          const double w = (j == 1 || j == cells) ? 0.5 * h : h;
          integral += w * std::pow(R.eval(static_cast<double>(j) * h).norm(), q);
        }
      } else {
        for (std::size_t j = 0; j <= cells; ++j) {
          const double w = (j == 0 || j == cells) ? 0.5 * h : h;
          integral += w * std::pow(R.eval(base + static_cast<double>(j) * h).norm(), q);
        }
      }
      block = std::pow(integral, 1.0 / q);
    }
    out.value += block;
    if (k + 1 == k_max) prev_block = block;
    if (k == k_max && prev_block > 0.0)
      out.verified = R.decay_hint.has_value() || block <= 0.9 * prev_block;
  }
  if (R.decay_hint) {
    const auto& d = *R.decay_hint;
    out.tail_bound = d.C * std::exp(-d.lambda * static_cast<double>(k_max + 1)) /
                     (1.0 - std::exp(-d.lambda));
    out.value += out.tail_bound;
    out.verified = true;
  }
  return out;
}

InvarianceReport invariance_check(const KernelFamily& R, const SampledSignal& f,
                                  InvarianceRoute route, const ScanConfig& config,
                                  double tail_tol) {
  const bool block_route = route == InvarianceRoute::StepanovBlock;
  double p = 1.0, q = 1.0;
  if (block_route) {
    if (!config.p) throw std::invalid_argument("Stepanov route needs the exponent p");
    p = *config.p;
    q = p > 1.0 ? p / (p - 1.0) : std::numeric_limits<double>::infinity();
  }

  InvarianceReport rep{false, 0.0, 0.0, 0.0, {}, {}, false,
                       SampledSignal(Grid{0, 1, 2}, 1, DomainKind::HalfLine)};
  double t_max = 64.0;
  if (R.decay_hint)
    t_max = std::max(8.0, support_cut(R, 1.0, 1e-9));
  const L1Estimate l1 = kernel_l1_norm(R, t_max);
  BlockSum block;
  if (block_route) {
    block = kernel_lq_block_sum(R, q, static_cast<std::size_t>(t_max) + 1);
    rep.diagnostic_ok = block.verified;
    rep.kernel_summability = block.value;
  } else {
    rep.diagnostic_ok = l1.verified;
    rep.kernel_summability = l1.value;
  }
  if (!rep.diagnostic_ok)
    throw std::runtime_error("kernel summability diagnostic failed; refusing to certify");

  if (f.domain() == DomainKind::HalfLine) {
    rep.output = finite_convolution(R, f);
    rep.T_cut = 0.0;
  } else {
    auto conv = infinite_convolution(R, f, tail_tol);
    rep.output = std::move(conv.output);
    rep.T_cut = conv.T_cut;
    rep.tail_bound = conv.tail_bound;
  }

  rep.output_report = classify(rep.output, config, ApClass::QAAP);

  const double supf = sup_norm(f);
  const double in_bound = block_route ? stepanov_norm(f, p) : supf;
  const double slack =
      tail_tol + 4.0 * f.grid().step * supf * R.eval(f.grid().step / 2.0).norm() + 1e-9;
  for (double tau : config.tau_grid) {
    for (double M : config.M_grid) {
      const double M0 = M / 2.0;
      const auto out_res = qaap_residual(rep.output, tau, M, config.window);
      if (!out_res) continue;
      std::optional<double> in_res =
          block_route ? sp_qaap_residual(f, tau, M0, p) : qaap_residual(f, tau, M0);
      if (!in_res) continue;
      double tail_term;
      if (block_route) {
        const auto k0 = static_cast<std::size_t>(std::max(0.0, std::floor(M0)));
        tail_term = R.decay_hint
                        ? R.decay_hint->C *
                              std::exp(-R.decay_hint->lambda * static_cast<double>(k0)) /
                              (1.0 - std::exp(-R.decay_hint->lambda))
                        : 0.0;
      } else {
        tail_term = kernel_l1_tail(R, M0);
      }
      TransferCheck tc;
      tc.tau = tau;
      tc.M = M;
      tc.output_residual = *out_res;
      tc.bound = rep.kernel_summability * *in_res + 2.0 * in_bound * tail_term + slack;
      tc.ok = tc.output_residual <= tc.bound;
      rep.transfer.push_back(tc);
    }
  }
  rep.transfer_ok = !rep.transfer.empty() &&
                    std::all_of(rep.transfer.begin(), rep.transfer.end(),
                                [](const TransferCheck& t) { return t.ok; });
  return rep;
}

}  // namespace aptk
