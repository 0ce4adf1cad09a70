// typlab command-line front end. One subcommand per module plus `suite`.
//
// Exit status: 0 when every enabled assertion holds, 1 when one fails, 2 on
// usage errors (bad flags, config, parameter values, unwritable output).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance.hpp"
#include "config.hpp"
#include "typlab/brownian.hpp"
#include "typlab/coding.hpp"
#include "typlab/csv.hpp"
#include "typlab/dynamics.hpp"
#include "typlab/entropy_ldp.hpp"
#include "typlab/kacring.hpp"
#include "typlab/parallel.hpp"
#include "typlab/randomness.hpp"

namespace typlab::cli {
namespace {

using nlohmann::json;

struct Assertion {
  std::string name;
  bool pass;
  double value;
  double bound;
};

struct Run {
  const Params& params;
  std::ostringstream table;  // CSV body, header row first
  std::vector<Assertion> assertions;

  std::uint64_t seed() const { return params.whole("seed"); }
  std::size_t workers() const {
    const auto w = params.whole("workers");
    return w == 0 ? default_workers() : w;
  }
  void check(std::string name, bool pass, double value, double bound) {
    assertions.push_back({std::move(name), pass, value, bound});
  }
};

struct Command {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
  std::function<void(Run&)> body;
};

DiscreteDistribution distribution_param(const Params& p, const std::string& key) {
  const auto w = p.reals(key);
  return make_distribution(Alphabet(w.size()), w);
}

std::string optional_text(const std::optional<ldp::BigInt>& x) { return x ? x->str() : std::string("na"); }

// --- subcommands

void run_entropy(Run& r) {
  const auto p = distribution_param(r.params, "p");
  const double eps = r.params.real("epsilon");
  const bool exact = r.params.choice("mode", {"exact", "mc"}) == "exact";
  RngStream rng(r.seed(), 0);
  CsvWriter csv(r.table);
  csv.header({"N", "epsilon", "entropy_bits", "probability", "ci_half_width", "log2_cardinality_bound",
              "cardinality", "exact"});
  for (auto n : r.params.wholes("n")) {
    const auto t = coding::typical_set(p, n, eps, exact ? coding::TypicalSetMode::exact : coding::TypicalSetMode::monte_carlo,
                                       &rng, r.params.whole("samples"));
    csv.row(n, eps, t.entropy_bits, t.probability, t.ci_half_width, t.log2_cardinality_bound,
            optional_text(t.cardinality), t.exact ? 1 : 0);
    if (t.cardinality) {
      const double log2_card = ldp::log_big(*t.cardinality) / std::log(2.0);
      r.check("log2 |T| <= N(h+eps) at N=" + std::to_string(n), log2_card <= t.log2_cardinality_bound + 1e-9,
              log2_card, t.log2_cardinality_bound);
    }
  }
}

void run_ldp(Run& r) {
  const auto p = distribution_param(r.params, "p");
  const auto e = r.params.reals("energies");
  const auto points = r.params.whole("points");
  const double tol = r.params.real("gap_tol");
  if (points == 0) throw UsageError("points must be positive");
  const double lo = *std::min_element(e.begin(), e.end()), hi = *std::max_element(e.begin(), e.end());
  CsvWriter csv(r.table);
  csv.header({"u", "entropy", "dual_entropy", "gap", "beta"});
  double worst = 0.0;
  for (std::uint64_t i = 0; i < points; ++i) {
    const double u = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(points);
    const auto c = ldp::cramer_profile(u, p, e);
    csv.row(u, c.entropy, c.dual_entropy, c.duality_gap, c.beta);
    worst = std::max(worst, c.duality_gap);
  }
  r.check("max duality gap", worst <= tol, worst, tol);
}

void run_coding(Run& r) {
  const auto p = distribution_param(r.params, "p");
  const auto method = r.params.choice("method", {"optimal", "shannon"}) == "optimal" ? coding::CodeMethod::optimal
                                                                                   : coding::CodeMethod::shannon;
  const auto code = coding::build_code(p, method);
  coding::write_code_table(r.table, code, p);
  const double h = ldp::shannon_entropy(p, LogBase::two);
  const double len = coding::expected_length(code, p);
  const auto v = coding::validate_code(code);
  r.check("h2(p) <= L", h <= len + 1e-12, len, h);
  r.check("L <= h2(p) + 1", len <= h + 1.0 + 1e-12, len, h + 1.0);
  r.check("Kraft sum <= 1", v.kraft.at_most_one() && v.prefix_free, v.kraft.value(), 1.0);
}

void run_randomness(Run& r) {
  const auto& source = r.params.choice("source", {"fair", "biased", "zeros", "alternating", "third", "file"});
  const auto n = r.params.whole("n");
  SymbolString s(Alphabet(2));
  if (source == "file") {
    std::ifstream in(r.params.text("input"));
    if (!in) throw UsageError("cannot read input '" + r.params.text("input") + "'");
    std::string bits;
    for (char c; in.get(c);)
      if (c == '0' || c == '1') bits += c;
      else if (!std::isspace(static_cast<unsigned char>(c))) throw UsageError("input must contain only 0 and 1");
    s = bits_from_string(bits);
  } else if (source == "fair" || source == "biased") {
    RngStream rng(r.seed(), 0);
    const auto p = source == "fair" ? DiscreteDistribution::flat(2) : DiscreteDistribution::bernoulli(r.params.real("p1"));
    s = sample_string(p, n, rng);
  } else if (source == "third") {
    s = dynamics::coarse_grain(dynamics::DoublingMap{}, dynamics::DoublingMap::rational(1, 3), n);
  } else {
    std::vector<Symbol> v(n);
    if (source == "alternating")
      for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<Symbol>(i % 2);
    s = SymbolString(Alphabet(2), v);
  }
  randomness::BatteryOptions opt;
  opt.min_prefix = r.params.whole("min_prefix");
  opt.threshold = r.params.whole("threshold");
  opt.workers = r.workers();
  const auto reports = randomness::builtin_battery(s, opt);
  randomness::write_battery_csv(r.table, reports);
  std::size_t rejected = 0;
  for (const auto& rep : reports) rejected += rep.rejected();
  const auto& expect = r.params.choice("expect", {"none", "pass", "reject"});
  if (expect == "pass") r.check("no test rejects", rejected == 0, static_cast<double>(rejected), 0);
  if (expect == "reject") r.check("some test rejects", rejected > 0, static_cast<double>(rejected), 1);
}

template <dynamics::SymbolicSystem S>
void dynamics_curve(Run& r, const S& sys, double target) {
  std::vector<dynamics::CurvePoint> curve;
  const auto& estimator = r.params.choice("estimator", {"block", "lz78"});
  if (estimator == "block") {
    dynamics::EntropyMode mode = dynamics::ExactMode{};
    if (r.params.choice("mode", {"exact", "mc"}) == "mc")
      mode = dynamics::MonteCarloMode{r.params.whole("samples"), r.seed(), 0};
    const auto rate = dynamics::entropy_rate(sys, r.params.whole("nmax"), mode);
    for (const auto& b : rate.curve)
      curve.push_back({static_cast<double>(b.n), b.bits / static_cast<double>(b.n), target, 0.0});
    curve.push_back({static_cast<double>(rate.curve.size()), rate.estimate, target, 0.0});
    if (r.params.text("tol") != "off")
      r.check("|H(N) - H(N-1) - h_KS|", std::abs(rate.estimate - target) <= r.params.real("tol"),
              std::abs(rate.estimate - target), r.params.real("tol"));
  } else {
    RngStream rng(r.seed(), 0);
    const auto x = sys.sample(rng);
    const auto length = r.params.whole("length");
    double last = 0.0;
    for (std::uint64_t n = 1024;; n = std::min<std::uint64_t>(2 * n, length)) {
      last = dynamics::brudno_rate(sys, x, n);
      curve.push_back({static_cast<double>(n), last, target, 0.0});
      if (n >= length) break;
    }
    if (r.params.text("tol") != "off")
      r.check("|LZ78 rate - h_KS|", std::abs(last - target) <= r.params.real("tol"), std::abs(last - target),
              r.params.real("tol"));
  }
  dynamics::write_curve_csv(r.table, curve);
}

void run_dynamics(Run& r) {
  const auto& system = r.params.choice("system", {"bernoulli", "doubling", "baker", "rotation"});
  if (system == "bernoulli") {
    const double p1 = r.params.real("p1");
    const auto p = DiscreteDistribution::bernoulli(p1);
    dynamics_curve(r, dynamics::BernoulliShift(p), ldp::shannon_entropy(p, LogBase::two));
  } else if (system == "doubling") {
    dynamics_curve(r, dynamics::DoublingMap{}, 1.0);
  } else if (system == "baker") {
    dynamics_curve(r, dynamics::BakersMap{}, 1.0);
  } else {
    dynamics_curve(r, dynamics::Rotation(r.params.real("alpha")), 0.0);
  }
}

void run_kacring(Run& r) {
  kac::TypicalityConfig c;
  c.ring_size = r.params.whole("ring");
  if (c.ring_size < 3 || c.ring_size % 2 == 0) throw UsageError("ring must be odd and at least 3");
  c.m = r.params.real("m0");
  c.s = r.params.real("s");
  c.t_max = r.params.whole("steps");
  c.trials = r.params.whole("trials");
  c.seed = r.seed();
  c.workers = r.workers();
  const auto rows = kac::typicality_experiment(c);
  kac::write_typicality_csv(r.table, rows);
  const double tol = r.params.text("tol") == "auto" ? 3.0 / std::sqrt(static_cast<double>(c.ring_size))
                                                    : r.params.real("tol");
  double worst = 0.0;
  for (const auto& row : rows) worst = std::max(worst, std::abs(row.m_mean - row.m_pred));
  r.check("max_t |mean m(t) - m_pred(t)|", worst <= tol, worst, tol);
}

void run_brownian(Run& r) {
  const auto n = r.params.whole("n");
  const auto& what = r.params.choice("what", {"path", "modulus", "variance"});
  if (what == "variance") {
    const auto trials = r.params.whole("trials");
    if (trials < 2) throw UsageError("trials must be at least 2");
    std::vector<double> ends(trials);
    parallel_for(trials, r.workers(), [&](std::size_t t) {
      RngStream rng(r.seed(), t);
      ends[t] = brownian::sample_path(n, rng)[n];
    });
    double mean = 0.0, var = 0.0;
    for (double e : ends) mean += e;
    mean /= static_cast<double>(trials);
    for (double e : ends) var += (e - mean) * (e - mean);
    var /= static_cast<double>(trials - 1);
    CsvWriter csv(r.table);
    csv.header({"N", "trials", "mean", "variance"});
    csv.row(n, trials, mean, var);
    r.check("endpoint variance >= var_lo", var >= r.params.real("var_lo"), var, r.params.real("var_lo"));
    r.check("endpoint variance <= var_hi", var <= r.params.real("var_hi"), var, r.params.real("var_hi"));
    return;
  }
  RngStream rng(r.seed(), 0);
  const auto path = brownian::sample_path(n, rng);
  if (what == "path") {
    brownian::write_path_csv(r.table, path);
    return;
  }
  std::vector<brownian::ModulusPoint> points;
  for (double h : r.params.reals("lags")) {
    if (!(h > 0.0 && h < 1.0)) throw UsageError("h values must lie in (0, 1)");
    points.push_back(brownian::modulus_ratio(path, h));
  }
  brownian::write_modulus_csv(r.table, points);
}

void run_suite(Run& r) {
  acceptance::Options opt;
  opt.seed = r.seed();
  opt.workers = r.workers();
  opt.scale = r.params.choice("scale", {"quick", "full"}) == "quick" ? acceptance::Scale::quick : acceptance::Scale::full;
  std::vector<std::uint64_t> ids;
  if (r.params.text("criteria") == "all")
    for (int i = 1; i <= acceptance::kCriteria; ++i) ids.push_back(static_cast<std::uint64_t>(i));
  else
    ids = r.params.wholes("criteria");
  CsvWriter csv(r.table);
  csv.header({"criterion", "title", "pass", "seconds"});
  for (auto id : ids) {
    if (id < 1 || id > static_cast<std::uint64_t>(acceptance::kCriteria))
      throw UsageError("criteria must lie in 1.." + std::to_string(acceptance::kCriteria));
    const auto res = acceptance::run_criterion(static_cast<int>(id), opt);
    std::cerr << acceptance::summary_line(res) << '\n';
    csv.row(res.id, res.title, res.pass ? 1 : 0, res.seconds);
    r.check("criterion " + std::to_string(id), res.pass, res.pass ? 1.0 : 0.0, 1.0);
  }
}

// --- plumbing

std::vector<ParamSpec> common(std::vector<ParamSpec> own) {
  own.insert(own.begin(), {{"seed", "20240601", "master seed"},
                           {"workers", "0", "worker threads, 0 for all cores"},
                           {"format", "csv", "csv or json"},
                           {"out", "-", "output file, - for stdout"}});
  return own;
}

std::vector<Command> commands() {
  return {
      {"entropy", "typical-set probability and size",
       common({{"p", "0.9,0.1", "symbol weights"},
               {"n", "10,20,30", "string lengths"},
               {"epsilon", "0.1", "typicality width in bits"},
               {"mode", "exact", "exact or mc"},
               {"samples", "100000", "Monte Carlo sample count"}}),
       run_entropy},
      {"ldp", "Cramer entropy on an energy grid, primal vs dual",
       common({{"p", "0.5,0.5", "reference weights"},
               {"energies", "0,1", "energy per symbol"},
               {"points", "50", "interior grid points"},
               {"gap_tol", "1e-6", "max duality gap in nats"}}),
       run_ldp},
      {"coding", "prefix code table",
       common({{"p", "0.5,0.25,0.125,0.125", "symbol weights"}, {"method", "optimal", "optimal or shannon"}}),
       run_coding},
      {"randomness", "sequential-test battery on a bit string",
       common({{"source", "fair", "fair|biased|zeros|alternating|third|file"},
               {"n", "10000", "length for generated sources"},
               {"p1", "0.1", "P(1) for the biased source"},
               {"input", "", "0/1 text file for source=file"},
               {"threshold", "20", "rejection level"},
               {"min_prefix", "64", "first checkpoint length"},
               {"expect", "none", "none|pass|reject"}}),
       run_randomness},
      {"dynamics", "entropy-rate curve of a symbolic system",
       common({{"system", "bernoulli", "bernoulli|doubling|baker|rotation"},
               {"p1", "0.5", "P(1) for bernoulli"},
               {"alpha", "0.41421356237309503", "rotation number"},
               {"estimator", "block", "block or lz78"},
               {"nmax", "12", "largest block length"},
               {"mode", "exact", "exact or mc block entropies"},
               {"samples", "10000", "Monte Carlo orbits"},
               {"length", "1000000", "orbit length for lz78"},
               {"tol", "off", "allowed distance to h_KS, or off"}}),
       run_dynamics},
      {"kacring", "Kac ring typicality experiment",
       common({{"ring", "100001", "ring size, odd"},
               {"m0", "0.9", "initial spin-up density"},
               {"s", "0.2", "scatterer density"},
               {"steps", "30", "last time step"},
               {"trials", "100", "independent rings"},
               {"tol", "auto", "max mean deviation, auto = 3/sqrt(ring)"}}),
       run_kacring},
      {"brownian", "random-walk paths and statistics",
       common({{"n", "10000", "grid steps"},
               {"what", "path", "path|modulus|variance"},
               {"lags", "0.01,0.001,0.0001", "lags h for the modulus"},
               {"trials", "10000", "paths for the variance"},
               {"var_lo", "0.94", "lower variance bound"},
               {"var_hi", "1.06", "upper variance bound"}}),
       run_brownian},
      {"suite", "acceptance criteria",
       common({{"scale", "full", "quick or full"}, {"criteria", "all", "ids, comma separated"}}), run_suite},
  };
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json csv_to_json(const std::string& text) {
  json columns = json::array(), rows = json::array();
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    json cells = json::array();
    std::istringstream fields(line);
    for (std::string f; std::getline(fields, f, ',');) {
      char* end = nullptr;
      const double x = std::strtod(f.c_str(), &end);
      if (!header && !f.empty() && *end == '\0' && std::isfinite(x)) cells.push_back(x);
      else cells.push_back(f);
    }
    if (header) columns = cells;
    else rows.push_back(cells);
    header = false;
  }
  return {{"columns", columns}, {"rows", rows}};
}

int execute(const Command& cmd, Params& params, bool stamp) {
  const auto& format = params.choice("format", {"csv", "json"});
  std::ofstream file;
  const bool to_stdout = params.text("out") == "-";
  if (!to_stdout) {
    file.open(params.text("out"), std::ios::binary);
    if (!file) throw UsageError("cannot write '" + params.text("out") + "'");
  }
  std::ostream& out = to_stdout ? std::cout : file;

  Run run{params, {}, {}};
  cmd.body(run);

  bool ok = true;
  json report = json::array();
  for (const auto& a : run.assertions) {
    ok = ok && a.pass;
    std::cerr << (a.pass ? "PASS " : "FAIL ") << a.name << ": " << format_number(a.value) << " vs "
              << format_number(a.bound) << '\n';
    report.push_back({{"assertion", a.name}, {"pass", a.pass}, {"value", a.value}, {"bound", a.bound}});
  }
  const std::string timestamp = stamp ? iso_timestamp() : "none";
  if (format == "csv") {
    out << "# typlab " << TYPLAB_VERSION << ' ' << cmd.name << " seed=" << params.text("seed")
        << " timestamp=" << timestamp << " | " << params.echo() << '\n'
        << run.table.str();
  } else {
    json doc = csv_to_json(run.table.str());
    doc["header"] = {{"version", TYPLAB_VERSION}, {"subcommand", cmd.name}, {"seed", params.whole("seed")},
                     {"timestamp", timestamp}, {"params", params.values()}};
    doc["assertions"] = report;
    doc["pass"] = ok;
    out << doc.dump(2) << '\n';
  }
  out.flush();
  if (!out) throw UsageError("write to '" + params.text("out") + "' failed");
  return ok ? 0 : 1;
}

}  // namespace
}  // namespace typlab::cli

int main(int argc, char** argv) {
  using namespace typlab::cli;
  const auto cmds = commands();
  CLI::App app{"typlab: typicality, large deviations and randomness experiments"};
  app.set_version_flag("--version", TYPLAB_VERSION);
  app.require_subcommand(1);

  struct Bound {
    CLI::App* sub;
    std::string config;
    bool no_timestamp = false;
    bool quick = false, full = false;
    std::map<std::string, std::string> flags;
  };
  std::vector<Bound> bound(cmds.size());
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    auto& b = bound[i];
    b.sub = app.add_subcommand(cmds[i].name, cmds[i].description);
    b.sub->add_option("--config", b.config, "key = value file");
    b.sub->add_flag("--no-timestamp", b.no_timestamp, "omit the timestamp from the header");
    for (const auto& spec : cmds[i].params)
      b.sub->add_option("--" + spec.key, b.flags[spec.key], spec.help + " [" + spec.fallback + "]");
    if (cmds[i].name == "suite") {
      auto* q = b.sub->add_flag("--quick", b.quick, "reduced sample sizes");
      b.sub->add_flag("--full", b.full, "full sample sizes")->excludes(q);
    }
  }

  if (argc > 1 && argv[1][0] != '-' &&
      std::none_of(cmds.begin(), cmds.end(), [&](const Command& c) { return c.name == argv[1]; })) {
    std::cerr << "error: unknown subcommand '" << argv[1] << "'\n\n" << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  for (std::size_t i = 0; i < cmds.size(); ++i) {
    auto& b = bound[i];
    if (!b.sub->parsed()) continue;
    try {
      Params params(cmds[i].params);
      if (const char* env = std::getenv("TYPLAB_SEED"); env && *env) params.set("seed", env);
      if (!b.config.empty()) {
        std::ifstream in(b.config);
        if (!in) throw UsageError("cannot read config '" + b.config + "'");
        params.merge(parse_config(in, b.config), b.config);
      }
      for (const auto& spec : cmds[i].params)
        if (b.sub->count("--" + spec.key) > 0) params.set(spec.key, b.flags[spec.key]);
      if (b.quick) params.set("scale", "quick");
      if (b.full) params.set("scale", "full");
      params.whole("seed");
      return execute(cmds[i], params, !b.no_timestamp);
    } catch (const UsageError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    } catch (const typlab::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return 2;
}
