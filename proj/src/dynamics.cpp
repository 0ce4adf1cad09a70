#include "typlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "typlab/csv.hpp"

namespace typlab::dynamics {

namespace {

std::size_t cell_count(std::size_t q, std::size_t n) {
  if (std::pow(static_cast<double>(q), static_cast<double>(n)) > kMaxExactCells)
    throw Error(ErrorCode::too_large_for_exact, "q^N exceeds 2^24 cells");
  std::size_t c = 1;
  for (std::size_t i = 0; i < n; ++i) c *= q;
  return c;
}

std::vector<double> flat_masses(std::size_t n) {
  const std::size_t cells = cell_count(2, n);
  return std::vector<double>(cells, std::ldexp(1.0, -static_cast<int>(n)));
}

double flat_log2_mass(std::span<const Symbol> w) {
  for (Symbol a : w)
    if (a > 1) throw Error(ErrorCode::out_of_range, "binary cell index expected");
  return -static_cast<double>(w.size());
}

SymbolStream fair_bits(std::uint64_t seed, std::uint64_t stream) {
  return SymbolStream(Alphabet::binary(), [seed, stream](std::uint64_t n) {
    return static_cast<Symbol>(RngStream::value_at(seed, stream, n) >> 63);
  });
}

SymbolStream digits_of(double x) {
  std::vector<Symbol> digits;
  for (int i = 0; i < 53; ++i) {
    x *= 2.0;
    const Symbol d = x >= 1.0 ? 1 : 0;
    x -= d;
    digits.push_back(d);
  }
  return SymbolStream(Alphabet::binary(), [digits](std::uint64_t n) {
    return n < digits.size() ? digits[n] : Symbol{0};
  });
}

}  // namespace

double entropy_of_masses(std::span<const double> masses) {
  double h = 0.0;
  for (double m : masses)
    if (m > 0.0) h -= m * std::log2(m);
  return h;
}

EntropyRate finish_entropy_rate(std::vector<BlockEntropy> curve) {
  EntropyRate r;
  const std::size_t n_max = curve.size();
  r.estimate = curve[n_max - 1].bits - curve[n_max - 2].bits;
  for (std::size_t m = 1; m < n_max; ++m)
    for (std::size_t n = 1; m + n <= n_max; ++n)
      if (curve[m + n - 1].bits > curve[m - 1].bits + curve[n - 1].bits + 1e-9) r.subadditive = false;
  r.curve = std::move(curve);
  return r;
}

// --- Bernoulli shift

BernoulliShift::state_type BernoulliShift::sample(RngStream& rng) const {
  const std::uint64_t seed = rng.next_u64();
  return point(SymbolStream::bernoulli(p_, seed, rng.stream_id()));
}

double BernoulliShift::cylinder_log2_mass(std::span<const Symbol> w) const {
  double total = 0.0;
  for (Symbol a : w) {
    if (a >= p_.size()) throw Error(ErrorCode::out_of_range, "cell index exceeds alphabet");
    if (p_[a] == 0.0) return -kInf;
    total += std::log2(p_[a]);
  }
  return total;
}

std::vector<double> BernoulliShift::block_masses(std::size_t n) const {
  const std::size_t q = p_.size();
  std::vector<double> masses(cell_count(q, n));
  // masses[code] for words of length k, built up one symbol at a time.
  masses[0] = 1.0;
  std::size_t size = 1;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t code = size; code-- > 0;)
      for (std::size_t a = q; a-- > 0;) masses[code * q + a] = masses[code] * p_[static_cast<Symbol>(a)];
    size *= q;
  }
  std::erase_if(masses, [](double m) { return m == 0.0; });
  return masses;
}

// --- Doubling map

DoublingMap::state_type DoublingMap::rational(std::uint64_t num, std::uint64_t den) {
  if (den == 0 || num >= den) throw Error(ErrorCode::out_of_range, "need 0 <= num/den < 1");
  return Rational{num, den};
}

DoublingMap::state_type DoublingMap::step(const state_type& x) const {
  if (const auto* r = std::get_if<Rational>(&x)) {
    // 2 num mod den without overflow.
    const std::uint64_t gap = r->den - r->num;
    return Rational{r->num >= gap ? r->num - gap : 2 * r->num, r->den};
  }
  const auto& e = std::get<Expansion>(x);
  return Expansion{e.bits, e.offset + 1};
}

Symbol DoublingMap::cell(const state_type& x) const {
  if (const auto* r = std::get_if<Rational>(&x)) return r->num >= r->den - r->num ? 1 : 0;
  const auto& e = std::get<Expansion>(x);
  return e.bits->at(e.offset);
}

DoublingMap::state_type DoublingMap::sample(RngStream& rng) const {
  return expansion(fair_bits(rng.next_u64(), rng.stream_id()));
}

double DoublingMap::cylinder_log2_mass(std::span<const Symbol> w) const { return flat_log2_mass(w); }
std::vector<double> DoublingMap::block_masses(std::size_t n) const { return flat_masses(n); }

// --- Baker's map

BakersMap::state_type BakersMap::point(double x, double y) {
  if (!(x >= 0.0 && x < 1.0 && y >= 0.0 && y < 1.0))
    throw Error(ErrorCode::out_of_range, "point outside the unit square");
  return {std::make_shared<const SymbolStream>(digits_of(x)),
          std::make_shared<const SymbolStream>(digits_of(y)), 0};
}

BakersMap::state_type BakersMap::sample(RngStream& rng) const {
  const std::uint64_t seed = rng.next_u64();
  return {std::make_shared<const SymbolStream>(fair_bits(seed, 2 * rng.stream_id())),
          std::make_shared<const SymbolStream>(fair_bits(seed, 2 * rng.stream_id() + 1)), 0};
}

Symbol BakersMap::bit(const state_type& s, std::int64_t index) {
  return index >= 0 ? s.forward->at(static_cast<std::uint64_t>(index))
                    : s.backward->at(static_cast<std::uint64_t>(-index - 1));
}

std::pair<double, double> BakersMap::coordinates(const state_type& s, std::size_t digits) const {
  double x = 0.0, y = 0.0;
  for (std::size_t i = digits; i-- > 0;) {
    x = (x + bit(s, s.position + static_cast<std::int64_t>(i))) / 2.0;
    y = (y + bit(s, s.position - 1 - static_cast<std::int64_t>(i))) / 2.0;
  }
  return {x, y};
}

double BakersMap::cylinder_log2_mass(std::span<const Symbol> w) const { return flat_log2_mass(w); }
std::vector<double> BakersMap::block_masses(std::size_t n) const { return flat_masses(n); }

std::pair<double, double> baker_reconstruct(std::span<const Symbol> forward,
                                            std::span<const Symbol> backward) {
  double x = 0.0, y = 0.0;
  for (std::size_t i = forward.size(); i-- > 0;) x = (x + forward[i]) / 2.0;
  for (std::size_t i = backward.size(); i-- > 0;) y = (y + backward[i]) / 2.0;
  return {x, y};
}

// --- Rotation

Rotation::Rotation(double alpha) : alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error(ErrorCode::out_of_range, "alpha must lie in [0,1)");
}

std::vector<std::pair<std::vector<Symbol>, double>> Rotation::arcs(std::size_t n) const {
  // x lies in the cylinder w iff x + k alpha mod 1 is in cell w_k for every
  // k < N; the cell boundaries pulled back by k steps are -k alpha and
  // 1/2 - k alpha. Between consecutive cut points the code is constant.
  auto frac = [](long double v) { return v - std::floor(v); };
  const long double a = alpha_;
  std::vector<long double> cuts;
  cuts.reserve(2 * n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    cuts.push_back(frac(-static_cast<long double>(k) * a));
    cuts.push_back(frac(0.5L - static_cast<long double>(k) * a));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<std::pair<std::vector<Symbol>, double>> out;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const long double lo = cuts[i];
    const long double hi = i + 1 < cuts.size() ? cuts[i + 1] : cuts[0] + 1.0L;
    if (!(hi > lo)) continue;
    const long double mid = frac((lo + hi) / 2);
    std::vector<Symbol> code(n);
    for (std::size_t k = 0; k < n; ++k)
      code[k] = frac(mid + static_cast<long double>(k) * a) < 0.5L ? 0 : 1;
    out.emplace_back(std::move(code), static_cast<double>(hi - lo));
  }
  return out;
}

double Rotation::cylinder_log2_mass(std::span<const Symbol> w) const {
  if (w.empty()) return 0.0;
  double mass = 0.0;
  for (const auto& [code, length] : arcs(w.size()))
    if (std::equal(code.begin(), code.end(), w.begin(), w.end())) mass += length;
  return mass > 0.0 ? std::log2(mass) : -kInf;
}

std::vector<double> Rotation::block_masses(std::size_t n) const {
  std::map<std::vector<Symbol>, double> cells;
  for (auto& [code, length] : arcs(n)) cells[std::move(code)] += length;
  std::vector<double> masses;
  masses.reserve(cells.size());
  for (const auto& [code, mass] : cells) masses.push_back(mass);
  return masses;
}

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> points) {
  CsvWriter csv(out);
  csv.header({"N", "value", "target", "band"});
  for (const auto& p : points) csv.row(p.n, p.value, p.target, p.band);
}

}  // namespace typlab::dynamics
