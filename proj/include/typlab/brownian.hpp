#pragma once

// Rescaled random walks as piecewise-linear paths on [0,1], crossing-time
// sign extraction, and path regularity statistics.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "typlab/core.hpp"

namespace typlab::brownian {

using SignString = std::vector<int>;  // entries in {-1, +1}

/// Values at t = k/N, k = 0..N, linear in between; value[0] == 0.
class PiecewiseLinearPath {
 public:
  /// Throws InvalidArgument unless values has at least two finite entries
  /// and starts at 0.
  explicit PiecewiseLinearPath(std::vector<double> values);

  std::size_t grid_size() const noexcept { return values_.size() - 1; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  /// B(t) for t in [0,1] by linear interpolation.
  double at(double t) const;

 private:
  std::vector<double> values_;
};

/// value[n] = (1/sqrt N) sum_{k<=n} signs_k. Throws EmptyInput on no signs
/// and InvalidArgument on an entry other than +-1.
PiecewiseLinearPath random_walk_path(std::span<const int> signs);

/// N i.i.d. fair signs, 64 per generator output.
SignString sample_signs(std::size_t n, RngStream& rng);
PiecewiseLinearPath sample_path(std::size_t n, RngStream& rng);

struct Crossings {
  SignString signs;
  std::vector<double> times;  // t_1 < t_2 < ...
  bool exhausted = false;     // fewer than M crossings before t = 1
};

/// t_k = first time after t_{k-1} with |B(t) - B(t_{k-1})| = 1/sqrt M, sign
/// of that increment. Levels are tracked as integer multiples of 1/sqrt M,
/// and a level counts as reached within a relative 1e-9 of the step.
Crossings crossing_signs(const PiecewiseLinearPath& path, std::size_t m);

struct DonskerDistance {
  double distance = 0.0;
  std::size_t crossings = 0;
  bool exhausted = false;
};

/// sup-norm distance between the path and R_M of its first M crossing signs,
/// over the union of both grids. On exhaustion after K < M crossings the
/// reconstruction is held at its value at K/M.
DonskerDistance donsker_distance(const PiecewiseLinearPath& fine, std::size_t m);

struct ModulusPoint {
  double h = 0.0;
  double ratio = 0.0;               // max_t |B(t+h) - B(t)| / sqrt(2h ln(1/h))
  double violation_fraction = 0.0;  // share of grid t with ratio above 1
};

struct DividedDifference {
  double h0 = 0.0;
  /// min over grid t of max over h in {h0/8, h0/4, h0/2, h0} of
  /// |B(t+h) - B(t)| / h.
  double value = 0.0;
};

struct RegularityStats {
  std::vector<ModulusPoint> modulus;
  double alpha = 0.0;
  double holder_constant = 0.0;  // max over dyadic lags 1..N/2 grid steps and all t
  std::vector<DividedDifference> divided;
};

/// Modulus ratios for each h in h_list, the Holder constant of index alpha
/// and divided-difference growth for each h0 in h_list. Throws OutOfRange
/// for h outside (0,1) or alpha outside (0,1).
RegularityStats regularity_stats(const PiecewiseLinearPath& path, std::span<const double> h_list,
                                 double alpha);

/// Modulus ratio for a single h.
ModulusPoint modulus_ratio(const PiecewiseLinearPath& path, double h);
double holder_constant(const PiecewiseLinearPath& path, double alpha);

/// t, value
void write_path_csv(std::ostream& out, const PiecewiseLinearPath& path);
/// h, ratio, violation_fraction
void write_modulus_csv(std::ostream& out, std::span<const ModulusPoint> points);

}  // namespace typlab::brownian
