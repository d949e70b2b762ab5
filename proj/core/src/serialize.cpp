#include "corrint/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "corrint/errors.hpp"

namespace corrint {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw PreconditionError("expected a rational written as \"p/q\"");
}

Json to_json(const DiscreteSpace& space) {
  Json masses = Json::array();
  for (const auto& m : space.masses()) masses.push_back(to_json(m));
  return Json{{"label", space.label()}, {"masses", masses}};
}

DiscreteSpace space_from_json(const Json& j) {
  std::vector<Rational> masses;
  for (const auto& m : j.at("masses")) masses.push_back(rational_from_json(m));
  return DiscreteSpace(std::move(masses), j.value("label", std::string{}));
}

Json to_json(const SigmaPartition& alg) {
  Json blocks = Json::array();
  for (const auto& b : alg.blocks()) blocks.push_back(b);
  return blocks;
}

SigmaPartition partition_from_json(const Json& j, int atom_count) {
  std::vector<AtomSet> blocks;
  for (const auto& b : j) blocks.push_back(b.get<AtomSet>());
  return SigmaPartition(atom_count, std::move(blocks));
}

Json to_json(const TruncVector& v) {
  Json out = Json::array();
  for (double x : v.coeffs()) out.push_back(x);
  return out;
}

TruncVector vector_from_json(const Json& j) { return TruncVector(j.get<std::vector<double>>()); }

Json to_json(const Correspondence& corr) {
  Json values = Json::array();
  for (int t = 0; t < corr.space().size(); ++t) {
    Json set = Json::array();
    for (const auto& v : corr.values(t)) set.push_back(to_json(v));
    values.push_back(std::move(set));
  }
  return Json{{"space", to_json(corr.space())}, {"values", values}};
}

Correspondence correspondence_from_json(const Json& j) {
  auto space = std::make_shared<const DiscreteSpace>(space_from_json(j.at("space")));
  std::vector<std::vector<TruncVector>> values;
  for (const auto& set : j.at("values")) {
    std::vector<TruncVector> row;
    for (const auto& v : set) row.push_back(vector_from_json(v));
    values.push_back(std::move(row));
  }
  return Correspondence(std::move(space), std::move(values));
}

Json to_json(const PointCloudSet& cloud) {
  Json pts = Json::array();
  for (const auto& p : cloud.points()) pts.push_back(to_json(p));
  return Json{{"dim", cloud.dim()}, {"points", pts}};
}

Json to_json(const BlockFunction& f) {
  Json values = Json::array();
  for (const auto& v : f.values) values.push_back(to_json(v));
  return Json{{"blocks", to_json(f.alg)}, {"values", values}};
}

Json to_json(const ConditionalSet& set) {
  Json blocks = Json::array();
  for (std::size_t b = 0; b < set.block_count(); ++b) {
    blocks.push_back(Json{{"block", b},
                          {"mass", to_json(set.block_masses()[b])},
                          {"points", to_json(set.block_set(b))["points"]}});
  }
  return Json{{"g_alg", to_json(set.g_alg())}, {"members", set.size()}, {"per_block", blocks}};
}

std::string cloud_csv(const PointCloudSet& cloud) {
  std::string out;
  for (std::size_t m = 0; m < cloud.dim(); ++m) {
    if (m) out += ',';
    out += "c" + std::to_string(m);
  }
  out += '\n';
  for (const auto& p : cloud.points()) {
    for (std::size_t m = 0; m < p.dim(); ++m) {
      if (m) out += ',';
      out += format_double(p[m]);
    }
    out += '\n';
  }
  return out;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string correspondence_hash(const Correspondence& corr) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(to_json(corr).dump())));
  return buf;
}

Json cloud_metadata(const Correspondence& corr, const SigmaPartition& alg, const SetOptions& options,
                    const PointCloudSet& cloud) {
  return Json{{"corr_hash", correspondence_hash(corr)},
              {"atoms", corr.space().size()},
              {"alg", to_json(alg)},
              {"cap", options.cap},
              {"mode", options.mode == SetMode::Enumerate ? "ENUMERATE" : "MINKOWSKI"},
              {"dim", cloud.dim()},
              {"points", cloud.size()}};
}

Json gap_series_json(const std::vector<std::pair<int, double>>& series) {
  Json out = Json::array();
  for (const auto& [level, gap] : series) out.push_back(Json{{"level", level}, {"gap", gap}});
  return out;
}

Json to_json(const TransitionKernel& kernel) {
  Json out = Json::array();
  for (std::size_t b = 0; b < kernel.blocks().size(); ++b) {
    Json support = Json::array();
    Json weights = Json::array();
    for (const auto& v : kernel.block(b).support) support.push_back(to_json(v));
    for (const auto& w : kernel.block(b).weights) weights.push_back(to_json(w));
    out.push_back(Json{{"block", b}, {"support", support}, {"weights", weights}});
  }
  return out;
}

TransitionKernel kernel_from_json(const Json& j, const DiscreteSpace& space, const SigmaPartition& g_alg) {
  std::vector<KernelBlock> blocks(g_alg.block_count());
  std::vector<bool> seen(g_alg.block_count(), false);
  for (const auto& entry : j) {
    const auto b = entry.at("block").get<std::size_t>();
    if (b >= blocks.size() || seen[b]) throw StructuralError("kernel block id out of range or repeated");
    seen[b] = true;
    for (const auto& v : entry.at("support")) blocks[b].support.push_back(vector_from_json(v));
    for (const auto& w : entry.at("weights")) blocks[b].weights.push_back(rational_from_json(w));
  }
  std::vector<Rational> masses;
  for (const auto& block : g_alg.blocks()) masses.push_back(space.mass_of(block));
  return TransitionKernel(g_alg, std::move(masses), std::move(blocks));
}

Json to_json(const StrategyProfile& profile) { return profile.play; }

Json to_json(const LemmaBound& bound) {
  return Json{{"sum", bound.sum}, {"bound", bound.bound}, {"pass", bound.pass}};
}

Json to_json(const EquilibriumReport& r) {
  Json aggregate = Json::array();
  for (const auto& v : r.aggregate.values) aggregate.push_back(to_json(v));
  Json trace = Json::array();
  for (const auto& s : r.trace) {
    trace.push_back(Json{{"iteration", s.iteration}, {"residual", s.residual}, {"distance", s.distance}});
  }
  Json out{{"residual", r.residual},
           {"aggregate_kind", to_string(r.aggregate.kind)},
           {"aggregate", aggregate},
           {"iterations", r.iterations},
           {"converged", r.converged},
           {"distance_to_mean", r.distance_to_mean},
           {"exact_case2", r.exact_case2},
           {"trace", trace}};
  if (r.partition_checked) {
    Json masses = Json::array();
    for (const auto& m : r.partition_masses) masses.push_back(to_json(m));
    Json rows = Json::array();
    for (const auto& row : r.independence_table) {
      rows.push_back(Json{{"i", row.part},
                          {"n", row.walsh_index},
                          {"lhs", to_json(row.lhs)},
                          {"rhs", to_json(row.rhs)},
                          {"pass", row.pass}});
    }
    out["not_applicable"] = r.not_applicable;
    out["partition_masses"] = masses;
    out["masses_pass"] = r.masses_pass;
    out["independence_table"] = rows;
    out["independence_pass"] = r.independence_pass;
  }
  if (r.lemma_bound) out["lemma_bound"] = to_json(*r.lemma_bound);
  return out;
}

}  // namespace corrint
