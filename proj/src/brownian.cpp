#include "typlab/brownian.hpp"

#include <algorithm>
#include <cmath>

#include "typlab/csv.hpp"

namespace typlab::brownian {

namespace {

void check_unit_open(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) throw Error(ErrorCode::out_of_range, std::string(what) + " must lie in (0,1)");
}

}  // namespace

PiecewiseLinearPath::PiecewiseLinearPath(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw Error(ErrorCode::invalid_argument, "a path needs at least one step");
  if (values_[0] != 0.0) throw Error(ErrorCode::invalid_argument, "a path must start at 0");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "non-finite path value");
}

double PiecewiseLinearPath::at(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::out_of_range, "t outside [0,1]");
  const double n = static_cast<double>(grid_size());
  const double x = t * n;
  const auto k = std::min(static_cast<std::size_t>(x), grid_size() - 1);
  const double frac = x - static_cast<double>(k);
  return values_[k] + frac * (values_[k + 1] - values_[k]);
}

PiecewiseLinearPath random_walk_path(std::span<const int> signs) {
  if (signs.empty()) throw Error(ErrorCode::empty_input, "no signs");
  const double scale = 1.0 / std::sqrt(static_cast<double>(signs.size()));
  std::vector<double> v(signs.size() + 1, 0.0);
  long long sum = 0;
  for (std::size_t k = 0; k < signs.size(); ++k) {
    if (signs[k] != 1 && signs[k] != -1) throw Error(ErrorCode::invalid_argument, "signs must be +-1");
    sum += signs[k];
    v[k + 1] = static_cast<double>(sum) * scale;
  }
  return PiecewiseLinearPath(std::move(v));
}

SignString sample_signs(std::size_t n, RngStream& rng) {
  SignString s(n);
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) bits = rng.next_u64();
    s[i] = (bits >> (i % 64)) & 1u ? 1 : -1;
  }
  return s;
}

PiecewiseLinearPath sample_path(std::size_t n, RngStream& rng) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "N must be positive");
  return random_walk_path(sample_signs(n, rng));
}

Crossings crossing_signs(const PiecewiseLinearPath& path, std::size_t m) {
  if (m == 0) throw Error(ErrorCode::invalid_argument, "M must be positive");
  if (path[0] != 0.0) throw Error(ErrorCode::invalid_argument, "path must start at 0");
  Crossings out;
  const double delta = 1.0 / std::sqrt(static_cast<double>(m));
  const double tol = 1e-9 * delta;
  const std::size_t n = path.grid_size();
  const double dt = 1.0 / static_cast<double>(n);
  long long level = 0;  // reference value = level * delta
  double t_cur = 0.0, v_cur = 0.0;
  std::size_t seg = 0;
  while (out.signs.size() < m && seg < n) {
    const double v_end = path[seg + 1];
    const double t_end = static_cast<double>(seg + 1) * dt;
    const double up = static_cast<double>(level + 1) * delta;
    const double down = static_cast<double>(level - 1) * delta;
    int sign = 0;
    double target = 0.0;
    if (v_end > v_cur && v_end >= up - tol) {
      sign = 1;
      target = up;
    } else if (v_end < v_cur && v_end <= down + tol) {
      sign = -1;
      target = down;
    }
    if (sign == 0) {
      ++seg;
      t_cur = t_end;
      v_cur = v_end;
      continue;
    }
    const double frac = std::clamp((target - v_cur) / (v_end - v_cur), 0.0, 1.0);
    t_cur = t_cur + frac * (t_end - t_cur);
    v_cur = target;
    level += sign;
    out.signs.push_back(sign);
    out.times.push_back(t_cur);
    if (frac >= 1.0) {
      ++seg;
      t_cur = t_end;
      v_cur = v_end;
    }
  }
  out.exhausted = out.signs.size() < m;
  return out;
}

DonskerDistance donsker_distance(const PiecewiseLinearPath& fine, std::size_t m) {
  const Crossings c = crossing_signs(fine, m);
  DonskerDistance d;
  d.crossings = c.signs.size();
  d.exhausted = c.exhausted;
  // Reconstruction values at k/M, held after the last extracted sign.
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<double> coarse(m + 1, 0.0);
  long long sum = 0;
  for (std::size_t k = 1; k <= m; ++k) {
    if (k <= c.signs.size()) sum += c.signs[k - 1];
    coarse[k] = static_cast<double>(sum) * scale;
  }
  const PiecewiseLinearPath reconstruction(std::move(coarse));
  const std::size_t n = fine.grid_size();
  // Both paths are linear between points of the merged grid, so the
  // difference peaks at a grid point of one of them.
  double worst = 0.0;
  for (std::size_t i = 0; i <= n; ++i)
    worst = std::max(worst, std::abs(fine[i] - reconstruction.at(static_cast<double>(i) / static_cast<double>(n))));
  for (std::size_t k = 0; k <= m; ++k)
    worst = std::max(worst, std::abs(reconstruction[k] - fine.at(static_cast<double>(k) / static_cast<double>(m))));
  d.distance = worst;
  return d;
}

ModulusPoint modulus_ratio(const PiecewiseLinearPath& path, double h) {
  check_unit_open(h, "h");
  const std::size_t n = path.grid_size();
  const double norm = std::sqrt(2.0 * h * std::log(1.0 / h));
  const double lag = h * static_cast<double>(n);
  const double rounded = std::round(lag);
  const bool on_grid = std::abs(lag - rounded) < 1e-9;
  ModulusPoint p;
  p.h = h;
  std::size_t count = 0, violations = 0;
  for (std::size_t i = 0; static_cast<double>(i) + lag <= static_cast<double>(n) + 1e-9; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    const double later = on_grid ? path[i + static_cast<std::size_t>(rounded)] : path.at(std::min(1.0, t + h));
    const double r = std::abs(later - path[i]) / norm;
    p.ratio = std::max(p.ratio, r);
    ++count;
    if (r > 1.0) ++violations;
  }
  p.violation_fraction = count ? static_cast<double>(violations) / static_cast<double>(count) : 0.0;
  return p;
}

double holder_constant(const PiecewiseLinearPath& path, double alpha) {
  check_unit_open(alpha, "alpha");
  const std::size_t n = path.grid_size();
  double best = 0.0;
  for (std::size_t lag = 1; lag <= std::max<std::size_t>(1, n / 2); lag *= 2) {
    double widest = 0.0;
    for (std::size_t i = 0; i + lag <= n; ++i) widest = std::max(widest, std::abs(path[i + lag] - path[i]));
    best = std::max(best, widest / std::pow(static_cast<double>(lag) / static_cast<double>(n), alpha));
  }
  return best;
}

RegularityStats regularity_stats(const PiecewiseLinearPath& path, std::span<const double> h_list,
                                 double alpha) {
  RegularityStats stats;
  stats.alpha = alpha;
  stats.holder_constant = holder_constant(path, alpha);
  const std::size_t n = path.grid_size();
  for (double h : h_list) {
    stats.modulus.push_back(modulus_ratio(path, h));
    const auto top = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(h * static_cast<double>(n))));
    std::vector<std::size_t> lags;
    for (std::size_t div = 8; div >= 1; div /= 2) lags.push_back(std::max<std::size_t>(1, top / div));
    double lowest = kInf;
    for (std::size_t i = 0; i + top <= n; ++i) {
      double steepest = 0.0;
      for (std::size_t lag : lags)
        steepest = std::max(steepest, std::abs(path[i + lag] - path[i]) * static_cast<double>(n) /
                                          static_cast<double>(lag));
      lowest = std::min(lowest, steepest);
    }
    stats.divided.push_back({h, std::isinf(lowest) ? 0.0 : lowest});
  }
  return stats;
}

void write_path_csv(std::ostream& out, const PiecewiseLinearPath& path) {
  CsvWriter csv(out);
  csv.header({"t", "value"});
  const double n = static_cast<double>(path.grid_size());
  for (std::size_t k = 0; k <= path.grid_size(); ++k) csv.row(static_cast<double>(k) / n, path[k]);
}

void write_modulus_csv(std::ostream& out, std::span<const ModulusPoint> points) {
  CsvWriter csv(out);
  csv.header({"h", "ratio", "violation_fraction"});
  for (const auto& p : points) csv.row(p.h, p.ratio, p.violation_fraction);
}

}  // namespace typlab::brownian
