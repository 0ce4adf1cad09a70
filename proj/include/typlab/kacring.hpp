#pragma once

// Kac ring: 2N+1 sites on a circle, spins x_n and static scatterers y_n.
// One step moves every spin one site up and flips it when it leaves a site
// holding a scatterer: x'_{n+1} = x_n XOR y_n (indices mod 2N+1).

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "typlab/core.hpp"

namespace typlab::kac {

/// Bit-packed microstate, 64 sites per word. Bits past ring_size stay zero.
class KacState {
 public:
  /// All spins down, no scatterers. ring_size must be odd and >= 3.
  explicit KacState(std::size_t ring_size);
  /// From 0/1 vectors of equal, odd length >= 3.
  KacState(std::span<const int> x, std::span<const int> y);

  std::size_t ring_size() const noexcept { return size_; }
  bool spin(std::size_t i) const { return get(x_, i); }
  bool scatterer(std::size_t i) const { return get(y_, i); }
  void set_spin(std::size_t i, bool v) { set(x_, i, v); }
  void set_scatterer(std::size_t i, bool v) { set(y_, i, v); }
  std::size_t spins_up() const;
  std::size_t scatterers() const;

  std::vector<int> spins() const;
  std::vector<int> scatterer_field() const;

  bool operator==(const KacState&) const = default;

  // Word access for the step kernels.
  std::span<std::uint64_t> spin_words() { return x_; }
  std::span<const std::uint64_t> spin_words() const { return x_; }
  std::span<const std::uint64_t> scatterer_words() const { return y_; }

 private:
  static bool get(const std::vector<std::uint64_t>& v, std::size_t i) { return (v[i / 64] >> (i % 64)) & 1u; }
  void set(std::vector<std::uint64_t>& v, std::size_t i, bool b);

  std::size_t size_;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> y_;
};

struct Macrostate {
  double m = 0.0;  // spin-up density
  double s = 0.0;  // scatterer density
};

Macrostate macro_of_micro(const KacState& state);

KacState micro_step(const KacState& state);
/// T^-1: x_n = x'_{n+1} XOR y_n.
KacState inverse_step(const KacState& state);
/// T^t, applied in place.
void evolve(KacState& state, std::size_t t);

/// (x~_n, y~_n) = (x_{-n}, y_{-n-1}), indices mod 2N+1. An involution with
/// tau T = T^-1 tau.
KacState time_reverse(const KacState& state);

/// Phi(m, s) = ((1 - 2s)(m - 1/2) + 1/2, s). Throws OutOfRange outside [0,1].
Macrostate macro_step(Macrostate ms);
/// Phi^t in closed form: (1 - 2s)^t (m - 1/2) + 1/2.
Macrostate macro_evolve(Macrostate ms, std::size_t t);

struct StosszahlResidual {
  double predicted = 0.0;  // (1 - s) #up + s #down
  double actual = 0.0;     // #up after one micro step
  double residual = 0.0;   // actual - predicted
};

StosszahlResidual stosszahl_residual(const KacState& state);

/// i.i.d. Bernoulli(m) spins then Bernoulli(s) scatterers, drawn from rng in
/// site order.
KacState sample_microstate(double m, double s, std::size_t ring_size, RngStream& rng);

struct Entropies {
  double fine = 0.0;    // h(m) + h(s)
  double coarse = 0.0;  // fine - 2 log 2
};

Entropies entropies(double m, double s, LogBase base);

struct TypicalityRow {
  std::size_t t = 0;
  double m_pred = 0.0;
  double m_mean = 0.0;
  double m_std = 0.0;            // sample standard deviation across trials
  double m_max_abs_dev = 0.0;    // max over trials of |m(t) - m_pred|
  double szansatz_resid_mean = 0.0;  // residual / ring_size
  double szansatz_resid_std = 0.0;
};

struct TypicalityConfig {
  double m = 0.9;
  double s = 0.2;
  std::size_t ring_size = 100001;
  std::size_t t_max = 30;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

/// Trial i samples its state from stream i of the seed, so results do not
/// depend on the worker count.
std::vector<TypicalityRow> typicality_experiment(const TypicalityConfig& config);

/// t, m_pred, m_mean, m_std, m_max_abs_dev, szansatz_resid_mean, szansatz_resid_std
void write_typicality_csv(std::ostream& out, std::span<const TypicalityRow> rows);

/// T^{2(2N+1)} x == x.
bool recurrence_holds(const KacState& state);
/// Evolve t steps, reverse, evolve t steps: equals the reversed initial state.
bool reversal_roundtrip(const KacState& state, std::size_t t);

}  // namespace typlab::kac
