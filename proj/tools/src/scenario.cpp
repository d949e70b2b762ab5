#include "corrint_cli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <cctype>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <corrint/correspondence.hpp>
#include <corrint/errors.hpp>
#include <corrint/game.hpp>
#include <corrint/rcd.hpp>
#include <corrint/set_integration.hpp>
#include <corrint/walsh.hpp>

namespace corrint::cli {

namespace {

// ---------------------------------------------------------------------------
// Config access with range checks and unknown-key rejection.

class Section {
 public:
  Section(const Json* node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_->is_object()) fail("", "must be an object");
  }

  bool has(const char* key) const { return node_ && node_->contains(key); }

  std::int64_t integer(const char* key, std::optional<std::int64_t> def, std::int64_t lo, std::int64_t hi) {
    const Json* v = lookup(key);
    if (!v) return required(key, def);
    if (!v->is_number_integer()) fail(key, "must be an integer");
    const auto x = v->get<std::int64_t>();
    if (x < lo || x > hi) fail(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
  }

  double real(const char* key, std::optional<double> def, double lo, double hi) {
    const Json* v = lookup(key);
    if (!v) return required(key, def);
    if (!v->is_number()) fail(key, "must be a number");
    const double x = v->get<double>();
    if (!(x >= lo && x <= hi)) fail(key, "out of range");
    return x;
  }

  bool boolean(const char* key, std::optional<bool> def) {
    const Json* v = lookup(key);
    if (!v) return required(key, def);
    if (!v->is_boolean()) fail(key, "must be true or false");
    return v->get<bool>();
  }

  Rational rational(const char* key, std::optional<Rational> def) {
    const Json* v = lookup(key);
    if (!v) return required(key, def);
    try {
      return rational_from_json(*v);
    } catch (const std::exception& e) {
      fail(key, std::string("must be a rational \"p/q\": ") + e.what());
    }
  }

  std::string choice(const char* key, std::optional<std::string> def, const std::vector<std::string>& allowed) {
    const Json* v = lookup(key);
    if (!v) return required(key, def);
    if (!v->is_string()) fail(key, "must be a string");
    auto s = v->get<std::string>();
    if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(key, "must be one of " + list);
    }
    return s;
  }

  /// Accepts [a, b, ...] or the string "a..b".
  std::vector<int> int_range(const char* key, std::optional<std::vector<int>> def, int lo, int hi) {
    const Json* v = lookup(key);
    if (!v) return required(key, def);
    std::vector<int> out;
    if (v->is_string()) {
      const auto s = v->get<std::string>();
      const auto dots = s.find("..");
      try {
        if (dots == std::string::npos) throw std::invalid_argument(s);
        const int a = std::stoi(s.substr(0, dots));
        const int b = std::stoi(s.substr(dots + 2));
        for (int x = a; x <= b; ++x) out.push_back(x);
      } catch (const std::exception&) {
        fail(key, "must be a list of integers or a range \"a..b\"");
      }
    } else if (v->is_array()) {
      for (const auto& x : *v) {
        if (!x.is_number_integer()) fail(key, "must be a list of integers");
        out.push_back(x.get<int>());
      }
    } else {
      fail(key, "must be a list of integers or a range \"a..b\"");
    }
    if (out.empty()) fail(key, "must not be empty");
    for (int x : out) {
      if (x < lo || x > hi) fail(key, "entries must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return out;
  }

  const Json& raw(const char* key) {
    const Json* v = lookup(key);
    if (!v) fail(key, "is required");
    return *v;
  }

  /// Rejects keys that were never read.
  void finish() const {
    if (!node_) return;
    for (const auto& [key, value] : node_->items()) {
      if (!used_.count(key)) fail(key.c_str(), "is not a recognised field");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    std::string where = path_;
    if (!key.empty()) where += (where.empty() ? "" : ".") + key;
    throw ConfigError("field '" + where + "' " + what);
  }

 private:
  const Json* lookup(const char* key) {
    used_.insert(key);
    if (!node_ || !node_->contains(key)) return nullptr;
    return &(*node_)[key];
  }

  template <class T>
  T required(const char* key, const std::optional<T>& def) {
    if (!def) fail(key, "is required");
    return *def;
  }

  const Json* node_;
  std::string path_;
  std::set<std::string> used_;
};

const Json* child(const Json& config, const char* key) {
  return config.contains(key) ? &config.at(key) : nullptr;
}

struct Common {
  Workspace ws;
  std::uint64_t seed = 1;
  SetOptions set_options;
};

struct Construction {
  int k = 2;
  Rational gamma;
  int L = 3;
  int N = 0;
  int per_block = 1;
};

Construction read_construction(const Json& config, int default_per_block) {
  Section space(child(config, "space"), "space");
  Section cons(child(config, "construction"), "construction");
  Construction c;
  c.k = static_cast<int>(cons.integer("k", 2, 1, 8));
  c.N = static_cast<int>(cons.integer("N", 0, 0, 30));
  c.gamma = space.rational("gamma", Rational(0));
  c.L = static_cast<int>(space.integer("L", 3, 0, 16));
  c.per_block = static_cast<int>(space.integer("per_block", default_per_block, 1, 4096));
  if (c.gamma < Rational(0) || !(c.gamma < Rational(1))) space.fail("gamma", "must lie in [0, 1)");
  if (c.L < bit_length(static_cast<std::uint64_t>(c.N))) {
    cons.fail("N", "needs space.L >= bit length of N");
  }
  space.finish();
  cons.finish();
  return c;
}

Workspace read_workspace(const Json& config, std::size_t default_dim) {
  Section s(child(config, "workspace"), "workspace");
  Workspace ws;
  ws.dim = static_cast<std::size_t>(s.integer("d", static_cast<std::int64_t>(default_dim), 1, 4096));
  ws.flavor = parse_norm_flavor(s.choice("norm", "EUCLID", {"SUM", "EUCLID", "MAX"}));
  ws.topology = parse_topology(s.choice("topology", "NORM", {"NORM", "WEAK", "WEAK_STAR"}));
  s.finish();
  return ws;
}

std::size_t default_dim(const Json& config) {
  std::int64_t k = 2;
  std::int64_t N = 0;
  if (const Json* c = child(config, "construction")) {
    if (c->contains("k") && c->at("k").is_number_integer()) k = c->at("k").get<std::int64_t>();
    if (c->contains("N") && c->at("N").is_number_integer()) N = c->at("N").get<std::int64_t>();
  }
  return static_cast<std::size_t>(std::clamp<std::int64_t>(k * (N + 1), 1, 4096));
}

SetOptions read_set_options(Section& top, const char* default_mode) {
  SetOptions o;
  o.cap = static_cast<std::uint64_t>(top.integer("cap", 1'000'000, 1, std::int64_t{1} << 40));
  o.mode = top.choice("mode", std::string(default_mode), {"ENUMERATE", "MINKOWSKI"}) == "ENUMERATE"
               ? SetMode::Enumerate
               : SetMode::Minkowski;
  return o;
}

double max_abs_diff(const TruncVector& a, const TruncVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

Json vector_list(const std::vector<TruncVector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

CounterexampleBundle make_bundle(const Workspace& ws, const Construction& c) {
  return build_counterexample(ws, c.k, c.gamma, c.N, c.L, c.per_block);
}

// ---------------------------------------------------------------------------
// Operations. Each reads its parameters, runs, and fills the result.

using Op = std::function<void(const Json&, Section&, Common&, ScenarioResult&)>;

void op_walsh(const Json& config, Section&, Common&, ScenarioResult& r) {
  Section p(child(config, "params"), "params");
  const int L = static_cast<int>(p.integer("L", 8, 0, 20));
  const int max_index = static_cast<int>(p.integer("max_index", 16, 1, 1 << 20));
  p.finish();
  if (bit_length(static_cast<std::uint64_t>(max_index - 1)) > L) p.fail("max_index", "needs 2^L >= max_index");
  const std::int64_t cells = std::int64_t{1} << L;
  bool ok = true;
  std::int64_t worst = 0;
  for (int m = 0; m < max_index; ++m) {
    for (int n = 0; n < max_index; ++n) {
      std::int64_t sum = 0;
      for (std::int64_t c = 0; c < cells; ++c) {
        sum += walsh_cell_sign(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(c), L) *
               walsh_cell_sign(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(c), L);
      }
      const std::int64_t expected = m == n ? cells : 0;
      if (sum != expected) ok = false;
      worst = std::max(worst, std::abs(sum - expected));
    }
  }
  r.result = Json{{"L", L}, {"max_index", max_index}, {"max_deviation_cells", worst}};
  r.verdicts.push_back({"orthonormal", ok});
  r.summary = std::string("Walsh system ") + (ok ? "orthonormal" : "NOT orthonormal") + " at L = " + std::to_string(L);
}

void op_counterexample_integrals(const Json& config, Section&, Common& common, ScenarioResult& r) {
  Section p(child(config, "params"), "params");
  std::vector<Rational> gammas;
  if (p.has("gammas")) {
    const Json& list = p.raw("gammas");
    if (!list.is_array() || list.empty()) p.fail("gammas", "must be a non-empty list");
    for (const auto& g : list) gammas.push_back(rational_from_json(g));
  } else {
    gammas = {Rational(0), Rational(1, 4)};
  }
  p.finish();
  Construction c = read_construction(config, 1);
  bool norm_ok = true;
  bool basis_ok = true;
  Json rows = Json::array();
  for (const auto& gamma : gammas) {
    c.gamma = gamma;
    const auto b = make_bundle(common.ws, c);
    const double t1 = (Rational(1) - gamma).to_double();
    const double n1 = norm(b.e_list.front(), common.ws.flavor);
    double dev = 0.0;
    for (int j = 1; j <= c.k; ++j) {
      dev = std::max(dev, max_abs_diff(b.e_list[static_cast<std::size_t>(j - 1)],
                                       t1 * common.ws.basis(static_cast<std::size_t>(j - 1))));
    }
    norm_ok = norm_ok && std::fabs(n1 - t1) <= 1e-12;
    basis_ok = basis_ok && dev <= 1e-12;
    rows.push_back(Json{{"gamma", gamma.str()}, {"norm_e1", n1}, {"max_basis_deviation", dev},
                        {"e", vector_list(b.e_list)}});
  }
  r.result = Json{{"k", c.k}, {"N", c.N}, {"L", c.L}, {"cases", rows}};
  r.verdicts.push_back({"norm_e1", norm_ok});
  r.verdicts.push_back({"e_basis", basis_ok});
  r.summary = std::string("e_j = (1-gamma) x_{j-1}: ") + (norm_ok && basis_ok ? "confirmed" : "violated");
}

void op_necessity(const Json& config, Section&, Common& common, ScenarioResult& r) {
  Construction c = read_construction(config, 1);
  Section alg(child(config, "algebras"), "algebras");
  const bool coincide = alg.choice("t_alg", "f_alg", {"f_alg", "atoms"}) == "f_alg";
  alg.finish();
  Section tol(child(config, "tolerances"), "tolerances");
  const double member_tol = tol.real("member", kMemberTol, 0.0, 1.0);
  tol.finish();
  const auto b = make_bundle(common.ws, c);
  const SigmaPartition& t_alg = coincide ? b.model.f_alg : b.model.t_alg;
  const Metric metric = Metric::from(common.ws);
  const TruncVector midpoint = b.e_mean();

  const PointCloudSet cloud = aumann_integral_set(*b.corr, t_alg, common.set_options);
  const double gap = cloud.distance_to(midpoint, metric);

  // Brute force: every selection integrated one by one.
  auto stream = enumerate_selections(b.corr, t_alg, common.set_options.cap);
  double oracle = std::numeric_limits<double>::infinity();
  std::uint64_t selections = 0;
  while (auto s = stream.next()) {
    oracle = std::min(oracle, metric.distance(integrate_selection(*s), midpoint));
    ++selections;
  }
  const bool absent = gap > member_tol;
  const bool agree = std::fabs(gap - oracle) <= 1e-12;
  r.result = Json{{"k", c.k},
                  {"gamma", c.gamma.str()},
                  {"L", c.L},
                  {"N", c.N},
                  {"per_block", c.per_block},
                  {"t_alg", coincide ? "f_alg" : "atoms"},
                  {"nowhere_equivalent", is_nowhere_equivalent(t_alg, b.model.f_alg)},
                  {"selections", selections},
                  {"cloud_size", cloud.size()},
                  {"midpoint", to_json(midpoint)},
                  {"gap", gap},
                  {"delta_star", oracle}};
  r.verdicts.push_back({"midpoint_absent", absent});
  r.verdicts.push_back({"gap_matches_oracle", agree});
  r.summary = std::string("midpoint ") + (absent ? "absent" : "present") + ", gap = " + format_double(gap) +
              ", delta* = " + format_double(oracle);
}

void op_lyapunov(const Json& config, Section&, Common& common, ScenarioResult& r) {
  Construction c = read_construction(config, 3);
  const auto b = make_bundle(common.ws, c);
  const auto sels = b.pure_selections();
  std::vector<Rational> weights(sels.size(), Rational(1, c.k + 1));
  const Selection g = lyapunov_mix(sels, weights, b.model.f_alg, b.model.t_alg);
  const BlockFunction eg = conditional_expectation(g, b.model.f_alg);
  double dev = 0.0;
  for (std::size_t blk = 0; blk < b.model.f_alg.block_count(); ++blk) {
    TruncVector target(common.ws.dim);
    for (std::size_t j = 0; j < sels.size(); ++j) {
      target += weights[j].to_double() * conditional_expectation(sels[j], b.model.f_alg).values[blk];
    }
    dev = std::max(dev, max_abs_diff(eg.values[blk], target));
  }
  const double integral_dev = max_abs_diff(integrate_selection(g), b.e_mean());
  const ConditionalSet cset = conditional_set(*b.corr, b.model.t_alg, b.model.f_alg, common.set_options);
  const double member = cset.distance_to(eg, Metric::from(common.ws));
  r.result = Json{{"k", c.k},
                  {"per_block", c.per_block},
                  {"max_block_deviation", dev},
                  {"integral_deviation", integral_dev},
                  {"conditional_set_members", cset.size()},
                  {"distance_to_conditional_set", member}};
  r.verdicts.push_back({"exact_mixture", dev <= 1e-12});
  r.verdicts.push_back({"integral_is_mean", integral_dev <= 1e-12});
  r.verdicts.push_back({"in_conditional_set", member <= kMemberTol});
  r.summary = "Lyapunov mixture deviation " + format_double(dev);
}

void op_convexity(const Json& config, Section&, Common& common, ScenarioResult& r) {
  Construction c = read_construction(config, 1);
  Section p(child(config, "params"), "params");
  const auto levels = p.int_range("levels", std::vector<int>{1, 2, 3, 4, 5, 6}, 0, 12);
  const int samples = static_cast<int>(p.integer("samples", 4000, 0, 10'000'000));
  const double threshold = p.real("threshold", 1e-3, 0.0, 1e9);
  p.finish();
  const Metric metric = Metric::from(common.ws);
  Series s{"gap", {"level", "points", "gap"}, {}};
  std::vector<std::pair<int, double>> gaps;
  for (int m : levels) {
    c.per_block = 1 << m;
    const auto b = make_bundle(common.ws, c);
    const PointCloudSet cloud = aumann_integral_set(*b.corr, b.model.t_alg, common.set_options);
    const double gap = convexity_gap(cloud, samples, metric, common.seed);
    gaps.emplace_back(m, gap);
    s.rows.push_back({static_cast<double>(m), static_cast<double>(cloud.size()), gap});
  }
  bool monotone = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) monotone = monotone && gaps[i].second <= gaps[i - 1].second;
  const bool below = gaps.back().second < threshold;
  r.result = Json{{"gaps", gap_series_json(gaps)}, {"samples", samples}, {"threshold", threshold}};
  r.series.push_back(std::move(s));
  r.verdicts.push_back({"monotone", monotone});
  r.verdicts.push_back({"below_threshold", below});
  r.summary = "convexity gap at level " + std::to_string(gaps.back().first) + " = " + format_double(gaps.back().second);
}

void op_tower(const Json& config, Section&, Common& common, ScenarioResult& r) {
  Section p(child(config, "params"), "params");
  const int instances = static_cast<int>(p.integer("instances", 200, 1, 1'000'000));
  const int max_atoms = static_cast<int>(p.integer("max_atoms", 12, 2, 64));
  const int dim = static_cast<int>(p.integer("dim", 3, 1, 64));
  p.finish();
  std::mt19937_64 rng(common.seed);
  auto uniform = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  double worst_tower = 0.0;
  double worst_bary = 0.0;
  for (int it = 0; it < instances; ++it) {
    const int n = uniform(2, max_atoms);
    std::vector<std::int64_t> w(static_cast<std::size_t>(n));
    std::int64_t total = 0;
    for (auto& x : w) total += (x = uniform(1, 9));
    std::vector<Rational> masses;
    for (auto x : w) masses.push_back(Rational(x, total));
    auto space = std::make_shared<const DiscreteSpace>(masses);
    std::vector<int> f_labels(static_cast<std::size_t>(n));
    const int f_blocks = uniform(1, n);
    for (auto& l : f_labels) l = uniform(0, f_blocks - 1);
    const SigmaPartition f_alg = SigmaPartition::from_labels(f_labels);
    const int g_blocks = uniform(1, static_cast<int>(f_alg.block_count()));
    std::vector<int> merge(f_alg.block_count());
    for (auto& m : merge) m = uniform(0, g_blocks - 1);
    std::vector<int> g_labels(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) g_labels[static_cast<std::size_t>(t)] = merge[static_cast<std::size_t>(f_alg.block_of(t))];
    const SigmaPartition g_alg = SigmaPartition::from_labels(g_labels);
    std::vector<TruncVector> values;
    for (int t = 0; t < n; ++t) {
      TruncVector v(static_cast<std::size_t>(dim));
      for (int m = 0; m < dim; ++m) v[static_cast<std::size_t>(m)] = static_cast<double>(uniform(-1000, 1000)) / 256.0;
      values.push_back(std::move(v));
    }
    const Selection f(space, SigmaPartition::singletons(n), values);
    const BlockFunction inner = conditional_expectation(f, f_alg);
    const BlockFunction tower = conditional_expectation(inner, *space, g_alg);
    const BlockFunction direct = conditional_expectation(f, g_alg);
    const BlockFunction bary = barycenter(rcd_of_selection(f, g_alg));
    for (std::size_t blk = 0; blk < g_alg.block_count(); ++blk) {
      worst_tower = std::max(worst_tower, max_abs_diff(tower.values[blk], direct.values[blk]));
      worst_bary = std::max(worst_bary, max_abs_diff(bary.values[blk], direct.values[blk]));
    }
  }
  r.result = Json{{"instances", instances}, {"max_tower_deviation", worst_tower}, {"max_barycenter_deviation", worst_bary}};
  r.verdicts.push_back({"tower", worst_tower <= 1e-12});
  r.verdicts.push_back({"barycenter", worst_bary <= 1e-12});
  r.summary = "tower deviation " + format_double(worst_tower) + ", barycenter deviation " + format_double(worst_bary);
}

void op_uhc(const Json& config, Section&, Common& common, ScenarioResult& r) {
  Construction c = read_construction(config, 2);
  Section alg(child(config, "algebras"), "algebras");
  const bool conditional = alg.choice("g_alg", "trivial", {"trivial", "f_alg"}) == "f_alg";
  alg.finish();
  Section tol(child(config, "tolerances"), "tolerances");
  const double vanish = tol.real("vanish", 1e-6, 0.0, 1.0);
  tol.finish();
  const auto limit = make_bundle(common.ws, c);
  std::vector<std::shared_ptr<const Correspondence>> family;
  for (int m = 0; m <= c.N; ++m) {
    Construction cm = c;
    cm.N = m;
    family.push_back(make_bundle(common.ws, cm).corr);
  }
  const SigmaPartition g_alg = conditional ? limit.model.f_alg : SigmaPartition::trivial(limit.model.space->size());
  const auto sigma = uhc_diagnostic(family, *limit.corr, limit.model.t_alg, g_alg, Metric::from(common.ws),
                                    common.set_options);
  Series s{"semidistance", {"m", "sigma"}, {}};
  bool monotone = true;
  for (std::size_t m = 0; m < sigma.size(); ++m) {
    s.rows.push_back({static_cast<double>(m), sigma[m]});
    if (m > 0 && sigma[m] > sigma[m - 1]) monotone = false;
  }
  Json values = Json::array();
  for (double x : sigma) values.push_back(x);
  r.result = Json{{"sigma", values}, {"g_alg", conditional ? "f_alg" : "trivial"}, {"N", c.N}};
  r.series.push_back(std::move(s));
  r.verdicts.push_back({"monotone", monotone});
  r.verdicts.push_back({"vanishes_at_N", sigma.back() < vanish});
  r.summary = "sigma at m = N: " + format_double(sigma.back());
}

void op_game(const Json& config, Section& top, Common& common, ScenarioResult& r) {
  Construction c = read_construction(config, -1);
  Section p(child(config, "params"), "params");
  const bool coincide = p.boolean("coincide", false);
  if (c.per_block < 0) c.per_block = coincide ? 1 : c.k + 1;
  EquilibriumOptions o;
  o.mode = parse_equilibrium_mode(p.choice("mode", "BR_ITERATE", {"BR_ITERATE", "EXHAUSTIVE"}));
  const auto ext = p.choice("externality", "INTEGRAL", {"INTEGRAL", "CONDITIONAL"});
  if (ext != "INTEGRAL") p.fail("externality", "must be INTEGRAL for the counterexample game");
  o.tol = p.real("tol", 1e-9, 0.0, 1.0);
  o.max_iter = static_cast<int>(p.integer("max_iter", 50, 1, 1'000'000));
  o.damping = p.real("damping", 1.0, 1e-9, 1.0);
  const auto init = p.choice("initial", "DEFAULT", {"DEFAULT", "ZERO", "MEAN"});
  o.initial = init == "ZERO" ? InitialAggregate::Zero : init == "MEAN" ? InitialAggregate::Mean : InitialAggregate::Default;
  o.cap = static_cast<std::uint64_t>(top.integer("profile_cap", 20'000'000, 1, std::int64_t{1} << 40));
  const bool verify = p.boolean("verify_partition", o.mode == EquilibriumMode::BrIterate);
  std::vector<TruncVector> extra;
  if (p.has("actions_extra")) {
    const Json& list = p.raw("actions_extra");
    if (!list.is_array()) p.fail("actions_extra", "must be a list of vectors");
    for (const auto& v : list) {
      if (!v.is_array() || v.size() != common.ws.dim) p.fail("actions_extra", "vectors must have workspace.d entries");
      extra.push_back(vector_from_json(v));
    }
  }
  p.finish();

  const auto b = make_bundle(common.ws, c);
  const LargeGame game = LargeGame::counterexample(b, common.ws.flavor, extra, coincide);
  const EquilibriumResult eq = find_equilibrium(game, o);
  EquilibriumReport report = verify ? verify_equilibrium_partition(game, eq.profile) : eq.report;
  if (verify) {
    report.iterations = eq.report.iterations;
    report.converged = eq.report.converged;
    report.trace = eq.report.trace;
  }
  Series s{"residual", {"iteration", "residual", "distance_to_mean"}, {}};
  for (const auto& step : report.trace) {
    s.rows.push_back({static_cast<double>(step.iteration), step.residual, step.distance});
  }
  r.result = Json{{"k", c.k},
                  {"gamma", c.gamma.str()},
                  {"L", c.L},
                  {"N", c.N},
                  {"per_block", c.per_block},
                  {"coincide", coincide},
                  {"mode", to_string(o.mode)},
                  {"actions", game.action_count()},
                  {"M", game.M()},
                  {"beta", game.beta()},
                  {"profile", to_json(eq.profile)},
                  {"report", to_json(report)}};
  r.series.push_back(std::move(s));
  r.verdicts.push_back({"equilibrium_found", report.residual <= o.tol});
  r.verdicts.push_back({"aggregate_is_mean", report.distance_to_mean <= o.tol});
  if (verify) {
    r.verdicts.push_back({"masses_exact", !report.not_applicable && report.masses_pass});
    r.verdicts.push_back({"independent", !report.not_applicable && report.independence_pass});
  }
  std::string masses;
  for (const auto& m : report.partition_masses) masses += (masses.empty() ? "" : ", ") + m.str();
  r.summary = "residual " + format_double(report.residual) + (verify ? ", masses (" + masses + ")" : "");
}

/// Mesh labels made of consecutive random permutations of 0..k.
QSystem random_q_system(int k, const Rational& gamma, const Rational& d0, std::mt19937_64& rng) {
  std::vector<int> labels(q_mesh_count(gamma, d0));
  std::vector<int> period(static_cast<std::size_t>(k + 1));
  for (std::size_t c = 0; c < labels.size(); ++c) {
    const std::size_t pos = c % period.size();
    if (pos == 0) {
      for (std::size_t i = 0; i < period.size(); ++i) period[i] = static_cast<int>(i);
      for (std::size_t i = period.size() - 1; i > 0; --i) std::swap(period[i], period[rng() % (i + 1)]);
    }
    labels[c] = period[pos];
  }
  return q_system_from_labels(k, gamma, d0, labels);
}

void op_lemma(const Json& config, Section&, Common& common, ScenarioResult& r) {
  Section p(child(config, "params"), "params");
  const int L = static_cast<int>(p.integer("L", 10, 1, 16));
  const auto exps = p.int_range("d0_exponents", std::vector<int>{3, 4, 5, 6, 7, 8}, 1, 12);
  const int trials = static_cast<int>(p.integer("trials", 1000, 0, 1'000'000));
  const int k_max = static_cast<int>(p.integer("k_max", 4, 1, 8));
  const int permuted_trials = static_cast<int>(p.integer("permuted_trials", 200, 0, 1'000'000));
  p.finish();
  std::mt19937_64 rng(common.seed);
  const std::vector<Rational> fixed_gammas{Rational(0), Rational(1, 4), Rational(1, 3)};
  auto draw_gamma = [&] {
    const std::uint64_t pick = rng() % 13;
    return pick < 3 ? fixed_gammas[pick] : Rational(static_cast<std::int64_t>(pick - 3), 10);
  };
  Series s{"lemma_bound", {"d0_exponent", "canonical_ratio", "random_max_ratio", "permuted_max_ratio"}, {}};
  bool all = true;
  Json rows = Json::array();
  for (int e : exps) {
    const Rational d0(1, std::int64_t{1} << e);
    const LemmaBound canon = lemma_bound_check(canonical_q_system(2, Rational(0), d0), L);
    all = all && canon.pass;
    // Case 1 systems with random k, gamma and label phase.
    double worst = 0.0;
    int failures = 0;
    for (int t = 0; t < trials; ++t) {
      const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(k_max));
      const Rational gamma = draw_gamma();
      const int phase = static_cast<int>(rng() % static_cast<std::uint64_t>(k + 1));
      const LemmaBound lb = lemma_bound_check(canonical_q_system(k, gamma, d0, phase), L);
      worst = std::max(worst, lb.sum / lb.bound);
      if (!lb.pass) ++failures;
    }
    all = all && failures == 0;
    // Labels permuted at random inside every period; reported only.
    double permuted = 0.0;
    int permuted_failures = 0;
    for (int t = 0; t < permuted_trials; ++t) {
      const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(k_max));
      const Rational gamma = draw_gamma();
      const LemmaBound lb = lemma_bound_check(random_q_system(k, gamma, d0, rng), L);
      permuted = std::max(permuted, lb.sum / lb.bound);
      if (!lb.pass) ++permuted_failures;
    }
    s.rows.push_back({static_cast<double>(e), canon.sum / canon.bound, worst, permuted});
    rows.push_back(Json{{"d0", d0.str()},
                        {"canonical", to_json(canon)},
                        {"random_max_ratio", worst},
                        {"random_failures", failures},
                        {"permuted_max_ratio", permuted},
                        {"permuted_failures", permuted_failures}});
  }
  r.result = Json{{"L", L}, {"trials", trials}, {"permuted_trials", permuted_trials}, {"rows", rows}};
  r.series.push_back(std::move(s));
  r.verdicts.push_back({"bound_holds", all});
  r.summary = std::string("weighted Walsh sum ") + (all ? "below" : "NOT below") + " 4 d0 in every trial";
}

void op_rcd(const Json& config, Section&, Common&, ScenarioResult& r) {
  Section p(child(config, "params"), "params");
  const int resolution = static_cast<int>(p.integer("resolution", 4, 1, 64));
  const int per_block = static_cast<int>(p.integer("atoms_per_block", 4, 1, 64));
  p.finish();
  const int atoms = 2 * per_block;
  auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(atoms));
  std::vector<int> labels(static_cast<std::size_t>(atoms));
  for (int t = 0; t < atoms; ++t) labels[static_cast<std::size_t>(t)] = t / per_block;
  const SigmaPartition f_alg = SigmaPartition::from_labels(labels);
  const SigmaPartition t_alg = SigmaPartition::singletons(atoms);
  const TruncVector v(std::vector<double>{1.0, 0.0});
  const TruncVector w(std::vector<double>{0.0, 1.0});
  auto corr = std::make_shared<const Correspondence>(space, std::vector<std::vector<TruncVector>>(
                                                                static_cast<std::size_t>(atoms), {v, w}));
  auto f_sels = enumerate_selections(corr, f_alg, 1'000'000);
  std::vector<Selection> pure;
  while (auto s = f_sels.next()) pure.push_back(*s);

  // Kernels of every atom-measurable selection.
  std::vector<TransitionKernel> reachable;
  auto all = enumerate_selections(corr, t_alg, 1'000'000);
  while (auto s = all.next()) reachable.push_back(rcd_of_selection(*s, f_alg));

  int checked = 0;
  int realized = 0;
  int constructed = 0;
  double worst_bary = 0.0;
  for (const auto& f1 : pure) {
    for (const auto& f2 : pure) {
      for (int j = 0; j <= resolution; ++j) {
        const Rational alpha(j, resolution);
        const TransitionKernel target =
            kernel_mix(rcd_of_selection(f1, f_alg), rcd_of_selection(f2, f_alg), alpha);
        ++checked;
        try {
          const Selection g = lyapunov_mix({f1, f2}, {alpha, Rational(1) - alpha}, f_alg, t_alg);
          const TransitionKernel kg = rcd_of_selection(g, f_alg);
          if (kg == target) ++constructed;
          const BlockFunction bary = barycenter(kg);
          const BlockFunction direct = conditional_expectation(g, f_alg);
          for (std::size_t blk = 0; blk < f_alg.block_count(); ++blk) {
            worst_bary = std::max(worst_bary, max_abs_diff(bary.values[blk], direct.values[blk]));
          }
        } catch (const DivisibilityError&) {
        }
        if (std::any_of(reachable.begin(), reachable.end(), [&](const TransitionKernel& k) { return k == target; })) {
          ++realized;
        }
      }
    }
  }
  r.result = Json{{"mixtures", checked}, {"constructed", constructed}, {"brute_force_realized", realized},
                  {"selections_enumerated", reachable.size()}, {"max_barycenter_deviation", worst_bary}};
  r.verdicts.push_back({"all_mixtures_realized", constructed == checked && realized == checked});
  r.verdicts.push_back({"barycenter_identity", worst_bary <= 1e-12});
  r.summary = std::to_string(constructed) + " of " + std::to_string(checked) + " kernel mixtures constructed";
}

ScenarioResult execute_inner(const Json& config, int depth);

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

void op_determinism(const Json& config, Section&, Common&, ScenarioResult& r, int depth) {
  Section p(child(config, "params"), "params");
  const Json& nested = p.raw("scenario");
  p.finish();
  if (depth > 0) p.fail("scenario", "cannot nest another determinism check");
  const ScenarioResult a = execute_inner(nested, depth + 1);
  const ScenarioResult b = execute_inner(nested, depth + 1);
  const std::string da = report_json(nested, a).dump(2);
  const std::string db = report_json(nested, b).dump(2);
  bool same = da == db && a.series.size() == b.series.size();
  for (std::size_t i = 0; same && i < a.series.size(); ++i) same = series_csv(a.series[i]) == series_csv(b.series[i]);
  r.result = Json{{"nested", a.name}, {"report_bytes", da.size()}, {"fnv1a", hex64(fnv1a(da))}};
  r.verdicts.push_back({"byte_identical", same});
  r.summary = std::string("rerun of '") + a.name + "' " + (same ? "byte-identical" : "DIFFERS");
}

const std::map<std::string, Op>& operations() {
  static const std::map<std::string, Op> ops{
      {"walsh-orthogonality", op_walsh},
      {"counterexample-integrals", op_counterexample_integrals},
      {"necessity", op_necessity},
      {"lyapunov-mix", op_lyapunov},
      {"convexity", op_convexity},
      {"tower", op_tower},
      {"uhc", op_uhc},
      {"game-equilibrium", op_game},
      {"lemma-bound", op_lemma},
      {"rcd-check", op_rcd},
  };
  return ops;
}

ScenarioResult execute_inner(const Json& config, int depth) {
  if (!config.is_object()) throw ConfigError("scenario must be a JSON object");
  Section top(&config, "");
  const auto schema = top.integer("schema", std::nullopt, 0, 1000);
  if (schema != 1) top.fail("schema", "must be 1");
  ScenarioResult r;
  const Json& name = top.raw("name");
  if (!name.is_string() || name.get<std::string>().empty()) top.fail("name", "must be a non-empty string");
  r.name = name.get<std::string>();
  for (char ch : r.name) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_')) {
      top.fail("name", "may only contain letters, digits, '-' and '_'");
    }
  }
  std::vector<std::string> names{"determinism"};
  for (const auto& [key, op] : operations()) names.push_back(key);
  r.operation = top.choice("operation", std::nullopt, names);

  Common common;
  common.seed = static_cast<std::uint64_t>(top.integer("seed", 1, 0, std::numeric_limits<std::int64_t>::max()));
  common.set_options = read_set_options(top, r.operation == "convexity" ? "MINKOWSKI" : "ENUMERATE");
  if (config.contains("expect")) {
    const Json& e = top.raw("expect");
    if (!e.is_object()) top.fail("expect", "must map verdict names to booleans");
    for (const auto& [key, value] : e.items()) {
      if (!value.is_boolean()) top.fail("expect." + key, "must be true or false");
    }
  }
  common.ws = read_workspace(config, default_dim(config));

  try {
    if (r.operation == "determinism") {
      op_determinism(config, top, common, r, depth);
    } else {
      operations().at(r.operation)(config, top, common, r);
    }
  } catch (const CapacityError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("scenario rejected: ") + e.what());
  }
  // Sections used by the operation have been validated; anything else at the
  // top level is unknown.
  static const std::set<std::string> known{"schema", "name", "operation", "seed", "cap", "mode", "expect", "workspace",
                                           "space", "construction", "algebras", "tolerances", "params", "profile_cap"};
  for (const auto& [key, value] : config.items()) {
    if (!known.count(key)) top.fail(key, "is not a recognised field");
  }
  if (config.contains("expect")) {
    for (const auto& [key, value] : config.at("expect").items()) {
      const bool found = std::any_of(r.verdicts.begin(), r.verdicts.end(), [&](const Verdict& v) { return v.name == key; });
      if (!found) top.fail("expect." + key, "names no verdict of operation '" + r.operation + "'");
    }
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

Json parse_config_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    const auto pos = what.find("syntax error");
    if (pos != std::string::npos) what = what.substr(pos);
    throw ConfigError("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                      what);
  }
}

ScenarioResult execute(const Json& config) { return execute_inner(config, 0); }

std::vector<std::string> failed_expectations(const Json& config, const ScenarioResult& result) {
  std::vector<std::string> failed;
  for (const auto& v : result.verdicts) {
    bool expected = true;
    if (config.contains("expect") && config.at("expect").contains(v.name)) expected = config.at("expect").at(v.name).get<bool>();
    if (v.pass != expected) failed.push_back(v.name);
  }
  return failed;
}

Json report_json(const Json& config, const ScenarioResult& result) {
  const auto failed = failed_expectations(config, result);
  Json verdicts = Json::array();
  for (const auto& v : result.verdicts) {
    const bool ok = std::find(failed.begin(), failed.end(), v.name) == failed.end();
    verdicts.push_back(Json{{"name", v.name}, {"pass", v.pass}, {"as_expected", ok}});
  }
  return Json{{"schema", 1},
              {"scenario", result.name},
              {"operation", result.operation},
              {"config", config},
              {"result", result.result},
              {"verdicts", verdicts},
              {"pass", failed.empty()}};
}

std::string series_csv(const Series& series) {
  std::string out;
  for (std::size_t i = 0; i < series.header.size(); ++i) out += (i ? "," : "") + series.header[i];
  out += '\n';
  for (const auto& row : series.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
    out += '\n';
  }
  return out;
}

int run_config(const Json& config, const RunOptions& options, std::ostream& out, std::ostream& err) {
  ScenarioResult result;
  try {
    result = execute(config);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CapacityError& e) {
    err << "capacity exceeded: " << e.what() << " (count " << e.count() << ")\n";
    return kExitCapacity;
  }
  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  const auto report_path = options.out_dir / (result.name + ".report.json");
  {
    std::ofstream f(report_path, std::ios::binary);
    f << report_json(config, result).dump(2) << '\n';
    if (!f) {
      err << "cannot write " << report_path.string() << '\n';
      return kExitConfig;
    }
  }
  if (options.emit_plot_data) {
    for (const auto& s : result.series) {
      std::ofstream f(options.out_dir / (result.name + "." + s.name + ".csv"), std::ios::binary);
      f << series_csv(s);
    }
  }
  const auto failed = failed_expectations(config, result);
  out << result.name << ": " << result.summary << '\n';
  for (const auto& v : result.verdicts) {
    const bool ok = std::find(failed.begin(), failed.end(), v.name) == failed.end();
    out << "  " << (ok ? "ok   " : "FAIL ") << v.name << " = " << (v.pass ? "true" : "false") << '\n';
  }
  return failed.empty() ? kExitPass : kExitVerdict;
}

int run_scenario(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& out,
                 std::ostream& err) {
  std::ifstream f(config_path, std::ios::binary);
  if (!f) {
    err << "config error: cannot read " << config_path.string() << '\n';
    return kExitConfig;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  Json config;
  try {
    config = parse_config_text(buf.str());
  } catch (const ConfigError& e) {
    err << config_path.string() << ": " << e.what() << '\n';
    return kExitConfig;
  }
  return run_config(config, options, out, err);
}

}  // namespace corrint::cli
