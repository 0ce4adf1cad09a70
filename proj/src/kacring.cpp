#include "typlab/kacring.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <tuple>

#include "typlab/csv.hpp"
#include "typlab/parallel.hpp"

namespace typlab::kac {

namespace {

void check_ring(std::size_t n) {
  if (n < 3 || n % 2 == 0) throw Error(ErrorCode::invalid_argument, "ring size must be odd and >= 3");
}

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::out_of_range, std::string(what) + " outside [0,1]");
}

std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

std::uint64_t tail_mask(std::size_t n) {
  const std::size_t r = n % 64;
  return r == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;
}

// Cyclic shift by one site within n bits: bit i moves to i+1 (up) or i-1.
void rotate_up(std::span<std::uint64_t> w, std::size_t n) {
  const std::size_t last = n - 1;
  const std::uint64_t wrap = (w[last / 64] >> (last % 64)) & 1u;
  std::uint64_t carry = wrap;
  for (auto& word : w) {
    const std::uint64_t out = word >> 63;
    word = (word << 1) | carry;
    carry = out;
  }
  w.back() &= tail_mask(n);
}

void rotate_down(std::span<std::uint64_t> w, std::size_t n) {
  const std::uint64_t wrap = w[0] & 1u;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::uint64_t next = i + 1 < w.size() ? w[i + 1] & 1u : 0;
    w[i] = (w[i] >> 1) | (next << 63);
  }
  const std::size_t last = n - 1;
  w[last / 64] |= wrap << (last % 64);
  w.back() &= tail_mask(n);
}

}  // namespace

KacState::KacState(std::size_t ring_size)
    : size_(ring_size), x_(word_count(ring_size), 0), y_(word_count(ring_size), 0) {
  check_ring(ring_size);
}

KacState::KacState(std::span<const int> x, std::span<const int> y) : KacState(x.size()) {
  if (y.size() != x.size()) throw Error(ErrorCode::invalid_argument, "spin and scatterer arrays differ in length");
  for (std::size_t i = 0; i < size_; ++i) {
    set_spin(i, x[i] != 0);
    set_scatterer(i, y[i] != 0);
  }
}

void KacState::set(std::vector<std::uint64_t>& v, std::size_t i, bool b) {
  if (i >= size_) throw Error(ErrorCode::out_of_range, "site index outside the ring");
  const std::uint64_t bit = std::uint64_t{1} << (i % 64);
  v[i / 64] = b ? (v[i / 64] | bit) : (v[i / 64] & ~bit);
}

std::size_t KacState::spins_up() const {
  std::size_t c = 0;
  for (auto w : x_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::size_t KacState::scatterers() const {
  std::size_t c = 0;
  for (auto w : y_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::vector<int> KacState::spins() const {
  std::vector<int> v(size_);
  for (std::size_t i = 0; i < size_; ++i) v[i] = spin(i);
  return v;
}

std::vector<int> KacState::scatterer_field() const {
  std::vector<int> v(size_);
  for (std::size_t i = 0; i < size_; ++i) v[i] = scatterer(i);
  return v;
}

Macrostate macro_of_micro(const KacState& state) {
  const double n = static_cast<double>(state.ring_size());
  return {static_cast<double>(state.spins_up()) / n, static_cast<double>(state.scatterers()) / n};
}

KacState micro_step(const KacState& state) {
  KacState next = state;
  auto x = next.spin_words();
  const auto y = next.scatterer_words();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] ^= y[i];
  rotate_up(x, next.ring_size());
  return next;
}

KacState inverse_step(const KacState& state) {
  KacState prev = state;
  auto x = prev.spin_words();
  rotate_down(x, prev.ring_size());
  const auto y = prev.scatterer_words();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] ^= y[i];
  return prev;
}

void evolve(KacState& state, std::size_t t) {
  auto x = state.spin_words();
  const auto y = state.scatterer_words();
  for (std::size_t step = 0; step < t; ++step) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] ^= y[i];
    rotate_up(x, state.ring_size());
  }
}

KacState time_reverse(const KacState& state) {
  const std::size_t n = state.ring_size();
  KacState r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.set_spin(i, state.spin((n - i) % n));
    r.set_scatterer(i, state.scatterer((2 * n - i - 1) % n));
  }
  return r;
}

Macrostate macro_step(Macrostate ms) { return macro_evolve(ms, 1); }

Macrostate macro_evolve(Macrostate ms, std::size_t t) {
  check_unit(ms.m, "m");
  check_unit(ms.s, "s");
  const double factor = std::pow(1.0 - 2.0 * ms.s, static_cast<double>(t));
  return {factor * (ms.m - 0.5) + 0.5, ms.s};
}

StosszahlResidual stosszahl_residual(const KacState& state) {
  const Macrostate ms = macro_of_micro(state);
  const double up = static_cast<double>(state.spins_up());
  const double down = static_cast<double>(state.ring_size()) - up;
  StosszahlResidual r;
  r.predicted = (1.0 - ms.s) * up + ms.s * down;
  r.actual = static_cast<double>(micro_step(state).spins_up());
  r.residual = r.actual - r.predicted;
  return r;
}

KacState sample_microstate(double m, double s, std::size_t ring_size, RngStream& rng) {
  check_unit(m, "m");
  check_unit(s, "s");
  KacState state(ring_size);
  for (std::size_t i = 0; i < ring_size; ++i) state.set_spin(i, rng.bernoulli(m));
  for (std::size_t i = 0; i < ring_size; ++i) state.set_scatterer(i, rng.bernoulli(s));
  return state;
}

Entropies entropies(double m, double s, LogBase base) {
  check_unit(m, "m");
  check_unit(s, "s");
  auto h = [base](double p) {
    double r = 0.0;
    if (p > 0.0) r -= p * log_in(base, p);
    if (p < 1.0) r -= (1.0 - p) * log_in(base, 1.0 - p);
    return r;
  };
  const double fine = h(m) + h(s);
  return {fine, fine - 2.0 * log2_unit(base)};
}

std::vector<TypicalityRow> typicality_experiment(const TypicalityConfig& c) {
  check_ring(c.ring_size);
  check_unit(c.m, "m");
  check_unit(c.s, "s");
  if (c.trials == 0) throw Error(ErrorCode::invalid_argument, "need at least one trial");
  const std::size_t times = c.t_max + 1;
  const double n = static_cast<double>(c.ring_size);
  std::vector<std::vector<double>> m(c.trials, std::vector<double>(times));
  std::vector<std::vector<double>> resid(c.trials, std::vector<double>(times));
  parallel_for(c.trials, c.workers, [&](std::size_t trial) {
    RngStream rng(c.seed, trial);
    KacState state = sample_microstate(c.m, c.s, c.ring_size, rng);
    for (std::size_t t = 0; t < times; ++t) {
      const auto sz = stosszahl_residual(state);
      m[trial][t] = static_cast<double>(state.spins_up()) / n;
      resid[trial][t] = sz.residual / n;
      if (t + 1 < times) evolve(state, 1);
    }
  });

  auto mean_std = [&](const std::vector<std::vector<double>>& v, std::size_t t) {
    double sum = 0.0;
    for (const auto& row : v) sum += row[t];
    const double mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (const auto& row : v) ss += (row[t] - mean) * (row[t] - mean);
    const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    return std::pair{mean, sd};
  };

  std::vector<TypicalityRow> rows(times);
  for (std::size_t t = 0; t < times; ++t) {
    TypicalityRow& r = rows[t];
    r.t = t;
    r.m_pred = macro_evolve({c.m, c.s}, t).m;
    std::tie(r.m_mean, r.m_std) = mean_std(m, t);
    for (const auto& trial : m) r.m_max_abs_dev = std::max(r.m_max_abs_dev, std::abs(trial[t] - r.m_pred));
    std::tie(r.szansatz_resid_mean, r.szansatz_resid_std) = mean_std(resid, t);
  }
  return rows;
}

void write_typicality_csv(std::ostream& out, std::span<const TypicalityRow> rows) {
  CsvWriter csv(out);
  csv.header({"t", "m_pred", "m_mean", "m_std", "m_max_abs_dev", "szansatz_resid_mean",
              "szansatz_resid_std"});
  for (const auto& r : rows)
    csv.row(r.t, r.m_pred, r.m_mean, r.m_std, r.m_max_abs_dev, r.szansatz_resid_mean,
            r.szansatz_resid_std);
}

bool recurrence_holds(const KacState& state) {
  KacState s = state;
  evolve(s, 2 * state.ring_size());
  return s == state;
}

bool reversal_roundtrip(const KacState& state, std::size_t t) {
  KacState s = state;
  evolve(s, t);
  s = time_reverse(s);
  evolve(s, t);
  return s == time_reverse(state);
}

}  // namespace typlab::kac
