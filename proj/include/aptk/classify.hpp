#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aptk/signal.hpp"

namespace aptk {

enum class Verdict { Supported, Falsified, Inconclusive };
enum class ApClass { AP, QAAP, SP_QAAP, QAAP_H, SP_QAAP_H, ANTI_QAAP };

std::string to_string(Verdict v);
std::string to_string(ApClass c);
ApClass ap_class_from_string(const std::string& s);

/// Scan parameters for a membership test. All verdicts are evidence at the
/// stated grid resolution and window, never proofs.
struct ScanConfig {
  double epsilon = 0.1;
  std::vector<double> tau_grid;   // candidate shifts, ascending
  std::vector<double> L_grid;     // candidate inclusion lengths, ascending
  std::vector<double> M_grid;     // candidate cutoffs, ascending
  std::optional<double> p;        // Stepanov exponent for SP_* classes
  std::optional<std::pair<double, double>> window;  // default: signal span
  std::vector<double> witness_times;  // anchor t's for falsification scans
};

/// Defaults: tau lattice multiples up to span/4 (at most ~200 of them),
/// geometric M covering [1, span/4], L in {1, 2, 5, 10} plus 2*omega.
ScanConfig default_scan(const SampledSignal& f, double epsilon,
                        std::optional<double> omega = std::nullopt);

struct ResidualPoint {
  double M = 0.0;
  std::optional<double> value;  // empty: no admissible evaluation points
  double witness_t = 0.0;       // argmax location when value is present
};

struct TauEvidence {
  double tau = 0.0;
  std::vector<ResidualPoint> curve;   // residual(M) over the M grid
  std::optional<double> accepted_M;   // first cutoff achieving <= epsilon
  bool rejected = false;              // residual above epsilon for every M
  bool anchor_scan = false;           // rejection came from the anchor scan
};

struct Witness {
  double tau = 0.0;
  double t = 0.0;
  double value = 0.0;
};

struct ClassReport {
  Verdict verdict = Verdict::Inconclusive;
  ApClass tested = ApClass::QAAP;
  double epsilon = 0.0;
  std::vector<TauEvidence> per_tau;
  std::optional<double> chosen_L;
  std::vector<Witness> witnesses;
  double grid_step = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  std::vector<double> accepted_taus;
};

// -- residuals ----------------------------------------------------------

/// sup over grid t with |t| >= M (t and t+tau inside window/domain) of
/// ||f(t+tau) - f(t)||. Empty evaluation set -> nullopt.
std::optional<double> qaap_residual(
    const SampledSignal& f, double tau, double M,
    std::optional<std::pair<double, double>> window = std::nullopt);

/// Unit-window Stepanov version:
/// sup over admissible t of ( int_t^{t+1} ||f(s+tau)-f(s)||^p ds )^{1/p}.
std::optional<double> sp_qaap_residual(
    const SampledSignal& f, double tau, double M, double p,
    std::optional<std::pair<double, double>> window = std::nullopt);

/// Anti-periodic residual: sup ||f(t+tau) + f(t)||.
std::optional<double> anti_residual(
    const SampledSignal& f, double tau, double M,
    std::optional<std::pair<double, double>> window = std::nullopt);

enum class ResidualKind { Difference, AntiSum, StepanovDifference };

/// residual(M) over an ascending M grid, sharing one pass over the signal.
std::vector<ResidualPoint> residual_curve(
    const SampledSignal& f, double tau, ResidualKind kind,
    const std::vector<double>& M_grid, double p = 1.0,
    std::optional<std::pair<double, double>> window = std::nullopt);

// -- verdicts -----------------------------------------------------------

/// True iff every closed sub-interval of `range` of length L contains an
/// accepted point.
bool relative_density(std::vector<double> accepted, double L,
                      std::pair<double, double> range);

ClassReport classify(const SampledSignal& f, const ScanConfig& config,
                     ApClass cls);

/// S-asymptotic omega-periodicity: supported when the residual curve is
/// non-increasing across the last decade of the M grid and ends <= epsilon.
ClassReport test_sap_omega(const SampledSignal& f, double omega, double epsilon,
                           const std::vector<double>& M_grid);
ClassReport test_sp_sap_omega(const SampledSignal& f, double omega, double p,
                              double epsilon, const std::vector<double>& M_grid);

// -- periodic limit extraction ------------------------------------------

struct PeriodicLimit {
  SampledSignal periodic;  // one period on [0, omega)
  double q_residual = 0.0;  // sup over the averaged tail of ||f - periodic ext||
  std::vector<std::pair<double, double>> residual_by_period;  // (period start, sup)
};

/// Averages f over whole periods in the tail third of its window; needs at
/// least 3 of them.
PeriodicLimit extract_periodic_limit(const SampledSignal& f, double omega);

// -- two-parameter functions --------------------------------------------

using TwoParamFn =
    std::function<void(double t, std::span<const double> x, std::span<double> out)>;

SampledSignal compose_two_parameter(const TwoParamFn& F, std::size_t out_dim,
                                    const SampledSignal& x);

bool lipschitz_check(const TwoParamFn& F, std::size_t out_dim, double L,
                     std::span<const double> t_samples,
                     const std::vector<std::pair<Vec, Vec>>& pairs,
                     NormTag tag = NormTag::Sup);

/// q = p r / (p + r), valid for p > 1 and r >= max(p, p/(p-1)); q lies in [1, p).
double composition_exponent(double p, double r);

}  // namespace aptk
