#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace aptk {

/// Vector value: ordered real coordinates of a point in the state space.
using Vec = std::vector<double>;

enum class NormTag { Sup, Euclidean };

double vec_norm(std::span<const double> v, NormTag tag);

/// Uniform time grid t_i = start + i*step, i = 0..count-1.
struct Grid {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 2;

  double t(std::size_t i) const { return start + static_cast<double>(i) * step; }
  double end() const { return t(count - 1); }
  double span() const { return end() - start; }

  bool operator==(const Grid&) const = default;
};

/// Builds a grid covering [t_start, t_end]; t_end must sit on the step
/// lattice to relative tolerance 1e-9.
Grid make_grid(double t_start, double t_end, double step);

/// Nearest lattice index of `x` relative to `g.start`, or -1 when `x` is
/// off-lattice beyond relative tolerance 1e-9.
long lattice_index(const Grid& g, double x);

/// Number of grid cells spanned by a duration `len` (len must be a positive
/// lattice multiple of the step).
std::size_t lattice_cells(const Grid& g, double len);

enum class DomainKind { HalfLine, FullLine };

/// Uniformly sampled vector-valued function on an interval of the half-line
/// or the real line. Immutable after construction; values are stored
/// node-major (count x dim).
class SampledSignal {
 public:
  SampledSignal(Grid grid, std::size_t dim, DomainKind domain,
                NormTag norm = NormTag::Sup);

  static SampledSignal from_rule(const Grid& grid, DomainKind domain,
                                 const std::function<double(double)>& rule,
                                 NormTag norm = NormTag::Sup);
  static SampledSignal from_vector_rule(
      const Grid& grid, DomainKind domain, std::size_t dim,
      const std::function<void(double, std::span<double>)>& rule,
      NormTag norm = NormTag::Sup);

  const Grid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  std::size_t count() const { return grid_.count; }
  DomainKind domain() const { return domain_; }
  NormTag norm_tag() const { return norm_; }

  std::span<const double> node(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<double> node(std::size_t i) {
    return {data_.data() + i * dim_, dim_};
  }
  double scalar(std::size_t i) const { return data_[i * dim_]; }
  double node_norm(std::size_t i) const { return vec_norm(node(i), norm_); }

  /// Linear interpolation between adjacent nodes; exact at grid nodes.
  /// Throws std::domain_error for t outside [start, end] (1e-9 slack).
  Vec value_at(double t) const;
  double scalar_at(double t) const;
  void value_at(double t, std::span<double> out) const;

  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels) { labels_ = std::move(labels); }

  const std::vector<double>& raw() const { return data_; }
  std::vector<double>& raw() { return data_; }

 private:
  Grid grid_;
  std::size_t dim_;
  DomainKind domain_;
  NormTag norm_;
  std::vector<double> data_;
  std::vector<std::string> labels_;
};

double sup_norm(const SampledSignal& f);

// -- transforms --------------------------------------------------------

struct Scale { double c; };
struct Translate { double a; };
struct Dilate { double b; };
struct Reciprocal { double min_modulus = 1e-12; };
struct ShiftDifference { double tau; };
struct AntiSum { double tau; };
using TransformSpec =
    std::variant<Scale, Translate, Dilate, Reciprocal, ShiftDifference, AntiSum>;

SampledSignal transform(const SampledSignal& f, const TransformSpec& spec);

SampledSignal scale(const SampledSignal& f, double c);
/// g(t) = f(t + a) on the sub-lattice of f's grid where t + a stays in
/// domain. Exact when a is a lattice multiple, O(step * Lip f) otherwise.
SampledSignal translate(const SampledSignal& f, double a);
/// g(t) = f(b t), b != 0; node-exact re-grid with step |step/b|.
SampledSignal dilate(const SampledSignal& f, double b);
/// 1/f for scalar signals with min |f| > min_modulus.
SampledSignal reciprocal(const SampledSignal& f, double min_modulus = 1e-12);
/// t -> f(t+tau) - f(t) on the overlap grid.
SampledSignal shift_difference(const SampledSignal& f, double tau);
/// t -> f(t+tau) + f(t) on the overlap grid.
SampledSignal anti_sum(const SampledSignal& f, double tau);

/// f(.+tau) and f restricted to the common overlap grid.
struct ShiftedPair {
  SampledSignal shifted;
  SampledSignal base;
};
ShiftedPair shifted_overlap(const SampledSignal& f, double tau);

/// Node-wise product of a scalar signal with a (possibly vector) signal on
/// the identical grid.
SampledSignal pointwise_product(const SampledSignal& f_scalar,
                                const SampledSignal& g);
SampledSignal pointwise_add(const SampledSignal& f, const SampledSignal& g);
SampledSignal pointwise_subtract(const SampledSignal& f, const SampledSignal& g);

/// Every stride-th node; the grid step grows accordingly.
SampledSignal downsample(const SampledSignal& f, std::size_t stride);

// -- CSV ---------------------------------------------------------------

/// Header `t,v0,...,v{d-1}`, one row per node, strictly increasing
/// equispaced t (validated to relative tolerance 1e-9 on read).
void write_csv(const SampledSignal& f, const std::string& path);
SampledSignal read_csv(const std::string& path);

}  // namespace aptk
