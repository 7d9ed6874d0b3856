#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "aptk/signal.hpp"

namespace aptk::catalog {

// Exact generators for the benchmark functions. Each carries class-membership
// labels as inert metadata; the classifiers are tested against them.

/// Smooth monotone step: 0 for t <= -1, 1 for t >= 0, linear on [-1, 0].
double step_fn(double t);

/// sin(ln(1+t)) for t >= 0; |f'(t)| <= 1/(1+t). Throws for t < 0.
double sin_log(double t);

/// Truncated zero-sequence entry: coordinate n (1-based) is
/// 4 n^2 t^2 / (t^2 + n^2)^2, sup norm. Bounded by 1, coordinate n peaks at
/// t = n.
void c0_sequence(double t, std::span<double> out);

/// Truncation dimension keeping the dropped-coordinate sup below tol on
/// [0, t_end]: coordinate n at time t is <= 4 t^2 / n^2.
std::size_t c0_default_dim(double t_end, double tol = 1e-6);

inline constexpr double kAlphaDefault = 3.141592653589793238462643383279502884;
inline constexpr double kBetaDefault = 4.442882938158366247015880990060693698;  // sqrt(2)*pi

double reciprocal_cos(double t, double alpha = kAlphaDefault,
                      double beta = kBetaDefault);
double reciprocal_sin(double t, double alpha = kAlphaDefault,
                      double beta = kBetaDefault);

/// Piecewise-linear spike train: value 1 at odd integers 2n+1, zero at
/// 2n+1 +- 1/(n+1) and outside; spike width shrinks like 2/(n+1). Zero for
/// t <= 0 (extension of the half-line function by zero).
double xie_zhang_ramp(double t);

/// sign(sin t) with sign(0) = 0.
double sign_sin(double t);

/// Plateau train: 1 on [4n+1/2, 4n+3/2] (n >= 1), zero at
/// 4n+1/2-1/(4n+1) and 4n+3/2+1/(4n+1), linear ramps between, zero outside.
double sap4_plateau(double t);

struct CatalogEntry {
  std::string name;
  DomainKind domain;
  std::size_t dim;  // 0: chosen at render time (c0 entry)
  std::map<std::string, bool> labels;  // class membership ground truth
  std::string description;
};

const std::vector<CatalogEntry>& entries();
const CatalogEntry& entry(const std::string& name);

/// Renders a catalog entry on the given grid; labels are attached to the
/// signal. `dim` is only consulted for the c0 entry (0 = default formula).
SampledSignal render(const std::string& name, const Grid& grid,
                     std::size_t dim = 0);

// Anchor points used by the counterexample falsification scans.
std::vector<double> odd_integer_anchors(double lo, double hi);
std::vector<double> plateau_start_anchors(double lo, double hi);  // 4n + 1/2

}  // namespace aptk::catalog
