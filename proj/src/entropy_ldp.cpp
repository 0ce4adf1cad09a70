#include "typlab/entropy_ldp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "typlab/csv.hpp"

namespace typlab::ldp {

namespace {

void require_same_alphabet(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::alphabet_mismatch, "distributions on different alphabets");
}

double log_sum_exp(std::span<const double> xs) {
  double top = -kInf;
  for (double x : xs) top = std::max(top, x);
  if (top == -kInf) return -kInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - top);
  return top + std::log(s);
}

// ln p(a) - beta E(a) for each symbol with p(a) > 0, -inf otherwise.
std::vector<double> gibbs_log_weights(double beta, const DiscreteDistribution& p,
                                      std::span<const double> energies) {
  std::vector<double> lw(p.size());
  for (Symbol a = 0; a < p.size(); ++a)
    lw[a] = p[a] > 0.0 ? std::log(p[a]) - beta * energies[a] : -kInf;
  return lw;
}

double gibbs_mean(double beta, const DiscreteDistribution& p, std::span<const double> energies) {
  const auto lw = gibbs_log_weights(beta, p, energies);
  const double lz = log_sum_exp(lw);
  double mean = 0.0;
  for (Symbol a = 0; a < p.size(); ++a)
    if (lw[a] > -kInf) mean += std::exp(lw[a] - lz) * energies[a];
  return mean;
}

}  // namespace

double shannon_entropy(const DiscreteDistribution& mu, LogBase base) {
  double h = 0.0;
  for (double w : mu.weights())
    if (w > 0.0) h -= w * log_in(base, w);
  return h;
}

double kl_divergence(const DiscreteDistribution& mu, const DiscreteDistribution& p, LogBase base) {
  require_same_alphabet(mu, p);
  double d = 0.0;
  for (Symbol a = 0; a < mu.size(); ++a) {
    if (mu[a] == 0.0) continue;
    if (p[a] == 0.0) return kInf;
    d += mu[a] * log_in(base, mu[a] / p[a]);
  }
  // Rounding can push an exact zero slightly negative.
  return std::max(d, 0.0);
}

TypeVector::TypeVector(std::vector<std::size_t> counts) : counts_(std::move(counts)) {
  if (counts_.size() < 2) throw Error(ErrorCode::invalid_argument, "type vector needs q >= 2");
  total_ = std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
  if (total_ == 0) throw Error(ErrorCode::empty_input, "type vector with N = 0");
}

TypeVector TypeVector::of(const SymbolString& s) { return TypeVector(symbol_counts(s)); }

TypeVector TypeVector::nearest(const DiscreteDistribution& mu, std::size_t n) {
  std::vector<std::size_t> counts(mu.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    const double exact = mu[static_cast<Symbol>(a)] * static_cast<double>(n);
    counts[a] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[a];
    remainders.emplace_back(exact - std::floor(exact), a);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[remainders[i % remainders.size()].second];
  return TypeVector(std::move(counts));
}

DiscreteDistribution TypeVector::measure() const {
  std::vector<double> w(counts_.begin(), counts_.end());
  return make_distribution(Alphabet(counts_.size()), w);
}

BigInt multinomial(std::span<const std::size_t> counts) {
  // Product of binomials keeps intermediates no larger than the result.
  BigInt result = 1;
  std::size_t running = 0;
  for (std::size_t k : counts) {
    for (std::size_t i = 1; i <= k; ++i) {
      ++running;
      result *= running;
      result /= i;
    }
  }
  return result;
}

double log_big(const BigInt& x) {
  if (x <= 0) return -kInf;
  const std::size_t bits = boost::multiprecision::msb(x) + 1;
  if (bits <= 60) return std::log(static_cast<double>(x.convert_to<std::uint64_t>()));
  const std::size_t shift = bits - 60;
  const BigInt top = x >> shift;
  return std::log(static_cast<double>(top.convert_to<std::uint64_t>())) +
         static_cast<double>(shift) * std::log(2.0);
}

double log_multinomial_lgamma(std::span<const std::size_t> counts) {
  const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  double r = std::lgamma(n + 1.0);
  for (std::size_t k : counts) r -= std::lgamma(static_cast<double>(k) + 1.0);
  return r;
}

BoltzmannCount boltzmann_counting(const TypeVector& type, const DiscreteDistribution& p, LogBase base) {
  if (type.size() != p.size()) throw Error(ErrorCode::alphabet_mismatch, "type and prior on different alphabets");
  BoltzmannCount out;
  const auto counts = type.counts();
  double ln_mult;
  if (type.total() <= kExactMultinomialLimit) {
    out.multiplicity = multinomial(counts);
    ln_mult = log_big(*out.multiplicity);
  } else {
    ln_mult = log_multinomial_lgamma(counts);
  }
  const double unit = base == LogBase::two ? 1.0 / std::log(2.0) : 1.0;
  out.log_multiplicity = ln_mult * unit;

  double ln_w = ln_mult;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (counts[a] == 0) continue;
    const double pa = p[static_cast<Symbol>(a)];
    if (pa == 0.0) {
      ln_w = -kInf;
      break;
    }
    ln_w += static_cast<double>(counts[a]) * std::log(pa);
  }
  out.log_probability = ln_w * unit;
  out.finite_rate = out.log_probability / static_cast<double>(type.total());
  out.limit_rate = -kl_divergence(type.measure(), p, base);
  return out;
}

std::vector<DiscreteDistribution> simplex_grid(std::size_t q, double step) {
  if (q < 2) throw Error(ErrorCode::invalid_argument, "simplex grid needs q >= 2");
  const double k_real = 1.0 / step;
  const auto k = static_cast<std::size_t>(std::llround(k_real));
  if (k == 0 || std::abs(k_real - static_cast<double>(k)) > 1e-6)
    throw Error(ErrorCode::invalid_argument, "grid step must be 1/K for a positive integer K");

  const Alphabet alphabet(q);
  std::vector<DiscreteDistribution> grid;
  std::vector<std::size_t> counts(q, 0);
  // Odometer over compositions of k into q parts, first coordinate slowest.
  auto emit = [&] {
    std::vector<double> w(q);
    for (std::size_t a = 0; a < q; ++a) w[a] = static_cast<double>(counts[a]) / static_cast<double>(k);
    grid.push_back(make_distribution(alphabet, w));
  };
  auto recurse = [&](auto&& self, std::size_t index, std::size_t remaining) -> void {
    if (index + 1 == q) {
      counts[index] = remaining;
      emit();
      return;
    }
    for (std::size_t c = 0; c <= remaining; ++c) {
      counts[index] = c;
      self(self, index + 1, remaining - c);
    }
  };
  recurse(recurse, 0, k);
  return grid;
}

SanovResult sanov_rate(std::span<const DiscreteDistribution> gamma, const DiscreteDistribution& p, LogBase base) {
  if (gamma.empty()) throw Error(ErrorCode::empty_input, "empty measure set");
  std::size_t best = 0;
  double best_rate = kInf;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const double r = kl_divergence(gamma[i], p, base);
    if (r < best_rate) {
      best_rate = r;
      best = i;
    }
  }
  return {best_rate, best, gamma[best]};
}

double free_energy(double beta, const DiscreteDistribution& p, std::span<const double> energies) {
  if (energies.size() != p.size()) throw Error(ErrorCode::alphabet_mismatch, "one energy per symbol required");
  return log_sum_exp(gibbs_log_weights(beta, p, energies));
}

DiscreteDistribution gibbs_measure(double beta, const DiscreteDistribution& p, std::span<const double> energies) {
  const auto lw = gibbs_log_weights(beta, p, energies);
  const double lz = log_sum_exp(lw);
  std::vector<double> w(p.size());
  for (std::size_t a = 0; a < w.size(); ++a) w[a] = lw[a] > -kInf ? std::exp(lw[a] - lz) : 0.0;
  return make_distribution(p.alphabet(), w);
}

CramerResult cramer_profile(double u, const DiscreteDistribution& p, std::span<const double> energies) {
  if (energies.size() != p.size()) throw Error(ErrorCode::alphabet_mismatch, "one energy per symbol required");
  // The reachable hull is spanned by the energies of symbols with p(a) > 0.
  double lo = kInf, hi = -kInf;
  for (Symbol a = 0; a < p.size(); ++a)
    if (p[a] > 0.0) {
      lo = std::min(lo, energies[a]);
      hi = std::max(hi, energies[a]);
    }
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  const double edge_tol = 1e-12 * scale;
  if (u < lo - edge_tol || u > hi + edge_tol) throw Error(ErrorCode::out_of_range, "u outside the energy hull");

  CramerResult r;
  r.u = u;

  const bool at_lo = std::abs(u - lo) <= edge_tol;
  const bool at_hi = std::abs(u - hi) <= edge_tol;
  if (at_lo || at_hi) {
    // Point-mass limit: mu is p conditioned on the extremal level set.
    const double target = at_lo ? lo : hi;
    double mass = 0.0;
    std::vector<double> w(p.size(), 0.0);
    for (Symbol a = 0; a < p.size(); ++a)
      if (p[a] > 0.0 && std::abs(energies[a] - target) <= edge_tol) {
        w[a] = p[a];
        mass += p[a];
      }
    for (double& x : w) x /= mass;
    r.boundary = true;
    r.entropy = std::log(mass);
    r.dual_entropy = r.entropy;
    r.duality_gap = 0.0;
    r.beta = r.dual_beta = (lo == hi) ? 0.0 : (at_lo ? kInf : -kInf);
    r.witness = std::move(w);
    return r;
  }

  // Primal: the constrained maximizer lies in the Gibbs family; solve the
  // mean constraint for beta (the Gibbs mean decreases in beta) and score
  // the witness by its relative entropy.
  double b_lo = -1.0, b_hi = 1.0;
  while (gibbs_mean(b_lo, p, energies) < u && b_lo > -1e300) b_lo *= 2.0;
  while (gibbs_mean(b_hi, p, energies) > u && b_hi < 1e300) b_hi *= 2.0;
  for (int it = 0; it < 400 && b_hi - b_lo > 1e-15 * std::max(1.0, std::abs(b_lo)); ++it) {
    const double mid = 0.5 * (b_lo + b_hi);
    if (gibbs_mean(mid, p, energies) > u) b_lo = mid; else b_hi = mid;
  }
  r.beta = 0.5 * (b_lo + b_hi);
  const auto witness = gibbs_measure(r.beta, p, energies);
  r.entropy = -kl_divergence(witness, p, LogBase::e);
  r.witness.assign(witness.weights().begin(), witness.weights().end());

  // Dual: golden-section on the convex g(beta) = beta u + f(beta|p), bracket
  // [-50, 50], widened when the minimizer sits on the bracket edge.
  auto g = [&](double beta) { return beta * u + free_energy(beta, p, energies); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double half_width = 50.0;
  double beta_star = 0.0;
  for (;;) {
    double a = -half_width, b = half_width;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double gc = g(c), gd = g(d);
    while (b - a > 1e-10) {
      if (gc < gd) {
        b = d; d = c; gd = gc;
        c = b - inv_phi * (b - a); gc = g(c);
      } else {
        a = c; c = d; gc = gd;
        d = a + inv_phi * (b - a); gd = g(d);
      }
    }
    beta_star = 0.5 * (a + b);
    if (half_width - std::abs(beta_star) > 1e-6 || half_width >= 1e8) break;
    half_width *= 4.0;
  }
  r.dual_beta = beta_star;
  r.dual_entropy = g(beta_star);
  r.duality_gap = std::abs(r.entropy - r.dual_entropy);
  return r;
}

void RateProfile::write_csv(std::ostream& out) const {
  CsvWriter csv(out);
  std::vector<std::string> cols{"u_or_measure_id", "rate"};
  const std::size_t width = points.empty() ? 0 : points.front().witness.size();
  for (std::size_t a = 0; a < width; ++a) cols.push_back("witness_" + std::to_string(a));
  csv.header(cols);
  for (const auto& pt : points) {
    std::vector<double> row{pt.coordinate, pt.rate};
    row.insert(row.end(), pt.witness.begin(), pt.witness.end());
    csv.row(row);
  }
}

RateProfile cramer_rate_profile(const DiscreteDistribution& p, std::span<const double> energies,
                                std::span<const double> us) {
  RateProfile profile;
  for (double u : us) {
    const auto r = cramer_profile(u, p, energies);
    profile.points.push_back({u, -r.entropy, r.witness});
  }
  return profile;
}

RateProfile sanov_rate_profile(std::span<const DiscreteDistribution> grid, const DiscreteDistribution& p) {
  RateProfile profile;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto w = grid[i].weights();
    profile.points.push_back({static_cast<double>(i), kl_divergence(grid[i], p, LogBase::e),
                              std::vector<double>(w.begin(), w.end())});
  }
  return profile;
}

HoeffdingResult hoeffding_test(const SymbolString& s, const DiscreteDistribution& mu0, double eta) {
  if (!(eta > 0.0)) throw Error(ErrorCode::invalid_argument, "eta must be positive");
  const double stat = kl_divergence(empirical_measure(s), mu0, LogBase::e);
  return {stat, stat < eta};
}

}  // namespace typlab::ldp
