#pragma once

#include <utility>
#include <vector>

#include "aptk/signal.hpp"

namespace aptk {

enum class Quadrature { Trapezoid, Midpoint };

struct StepanovParams {
  double p = 1.0;          // exponent, >= 1
  double l = 1.0;          // window length, a positive lattice multiple of the step
  Quadrature quadrature = Quadrature::Trapezoid;
};

/// Sliding-window L^p distance
///   sup_x ( (1/l) int_x^{x+l} ||f - g||^p )^{1/p}
/// with x ranging over grid nodes admitting a full window. Windows share
/// quadrature weights, so the metric axioms hold at quadrature level.
double stepanov_metric(const SampledSignal& f, const SampledSignal& g,
                       const StepanovParams& params);

/// sup_t ( int_t^{t+1} ||f||^p )^{1/p}; requires the grid to span >= 1.
double stepanov_norm(const SampledSignal& f, double p,
                     Quadrature quadrature = Quadrature::Trapezoid);

struct WeylEstimate {
  std::vector<std::pair<double, double>> window_sequence;  // (l, value)
  double value = 0.0;  // at the largest window; never extrapolated
};

/// D^p_{S_l}[f(.+tau), f] for each window length in l_list (ascending).
WeylEstimate weyl_distance(const SampledSignal& f, double tau, double p,
                           const std::vector<double>& l_list,
                           Quadrature quadrature = Quadrature::Trapezoid);

}  // namespace aptk
