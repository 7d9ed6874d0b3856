#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "aptk/classify.hpp"
#include "aptk/signal.hpp"

namespace aptk {

/// Dense operator value (d_out x d_in, row-major). Operator norms here are
/// the ones induced by the sup vector norm (max absolute row sum).
struct Operator {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  static Operator zero(std::size_t r, std::size_t c) { return {r, c, std::vector<double>(r * c, 0.0)}; }
  static Operator identity(std::size_t n);
  static Operator scalar(double v) { return {1, 1, {v}}; }

  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  void apply(std::span<const double> x, std::span<double> y) const;
  double norm() const;  // max abs row sum

  Operator operator-(const Operator& o) const;
  Operator operator*(const Operator& o) const;
};

/// e^{tA} by scaling and squaring with a Taylor core; adequate for the small
/// dense generators used here.
Operator matrix_exponential(const Operator& A, double t);

/// Operator kernel R(t) on (0, infinity) with optional decay certificate
/// ||R(t)|| <= C e^{-lambda t}.
struct KernelFamily {
  std::function<Operator(double)> eval;
  std::size_t in_dim = 1;
  std::size_t out_dim = 1;
  std::optional<double> closed_form_l1;
  struct Decay {
    double C = 1.0;
    double lambda = 1.0;
  };
  std::optional<Decay> decay_hint;
};

KernelFamily exp_kernel(double lambda);          // R(t) = e^{-lambda t}, scalar
KernelFamily matrix_exp_kernel(Operator A, std::optional<KernelFamily::Decay> hint = std::nullopt);

/// F(t) = int_0^t R(t-s) f(s) ds on f's grid; the first cell (kernel argument
/// near zero) uses the open midpoint rule, the rest composite trapezoid.
SampledSignal finite_convolution(const KernelFamily& R, const SampledSignal& f);

struct InfiniteConvolution {
  SampledSignal output;
  double T_cut = 0.0;
  double tail_bound = 0.0;
};

/// F(t) = int_{-infty}^t R(t-s) f(s) ds truncated at T_cut with certified
/// tail <= tail_tol; f must cover [start - T_cut, end].
InfiniteConvolution infinite_convolution(const KernelFamily& R,
                                         const SampledSignal& f,
                                         double tail_tol);

struct L1Estimate {
  double value = 0.0;
  bool verified = false;  // decay hint present or Cauchy increments pass
  double tail_bound = 0.0;
};

/// Quadrature of ||R|| over (0, t_max] plus the decay-hint tail. Without a
/// hint, doubling blocks must shrink (Cauchy test) or the result is flagged
/// unverified.
L1Estimate kernel_l1_norm(const KernelFamily& R, double t_max,
                          double quad_step = 1.0 / 256.0);

/// int_T^infty ||R|| estimated from the decay hint (0 when absent).
double kernel_l1_tail(const KernelFamily& R, double T);

struct BlockSum {
  double value = 0.0;
  bool verified = false;
  double tail_bound = 0.0;
};

/// sum_k ||R||_{L^q[k,k+1]} for k = 0..k_max plus geometric tail; q = inf
/// uses per-block grid sups.
BlockSum kernel_lq_block_sum(const KernelFamily& R, double q, std::size_t k_max,
                             double quad_step = 1.0 / 256.0);

enum class InvarianceRoute { BoundedL1, StepanovBlock };

struct TransferCheck {
  double tau = 0.0;
  double M = 0.0;
  double output_residual = 0.0;
  double bound = 0.0;
  bool ok = false;
};

struct InvarianceReport {
  bool diagnostic_ok = false;
  double kernel_summability = 0.0;  // l1 norm or block sum, per route
  double T_cut = 0.0;
  double tail_bound = 0.0;
  ClassReport output_report;
  std::vector<TransferCheck> transfer;
  bool transfer_ok = false;
  SampledSignal output;
};

/// Runs the summability diagnostic, convolves (finite on the half-line,
/// infinite on the line), classifies the output as QAAP, and checks the
/// residual transfer inequality
///   out_res(tau, M) <= K * in_res(tau, M/2) + 2 B tail(M/2) + slack
/// at every (tau, M) in the scan, where K and B are the route's kernel sum
/// and input bound. Throws if the diagnostic fails.
InvarianceReport invariance_check(const KernelFamily& R, const SampledSignal& f,
                                  InvarianceRoute route, const ScanConfig& config,
                                  double tail_tol = 1e-6);

}  // namespace aptk
