#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "corrint/correspondence.hpp"
#include "corrint/game.hpp"
#include "corrint/measure_space.hpp"
#include "corrint/rcd.hpp"
#include "corrint/set_integration.hpp"

namespace corrint {

using Json = nlohmann::json;

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json to_json(const DiscreteSpace& space);
DiscreteSpace space_from_json(const Json& j);

Json to_json(const SigmaPartition& alg);
SigmaPartition partition_from_json(const Json& j, int atom_count);

Json to_json(const TruncVector& v);
TruncVector vector_from_json(const Json& j);

/// {"space": ..., "values": [[vector, ...] per atom]}.
Json to_json(const Correspondence& corr);
Correspondence correspondence_from_json(const Json& j);

Json to_json(const PointCloudSet& cloud);
Json to_json(const BlockFunction& f);
Json to_json(const ConditionalSet& set);

/// One point per row, coordinates comma separated.
std::string cloud_csv(const PointCloudSet& cloud);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
/// Hex FNV-1a of the correspondence's compact JSON.
std::string correspondence_hash(const Correspondence& corr);

Json cloud_metadata(const Correspondence& corr, const SigmaPartition& alg, const SetOptions& options,
                    const PointCloudSet& cloud);

/// [{"level": m, "gap": g}, ...].
Json gap_series_json(const std::vector<std::pair<int, double>>& series);

/// [{"block": id, "support": [...], "weights": ["p/q", ...]}, ...].
Json to_json(const TransitionKernel& kernel);
TransitionKernel kernel_from_json(const Json& j, const DiscreteSpace& space, const SigmaPartition& g_alg);

Json to_json(const StrategyProfile& profile);
Json to_json(const LemmaBound& bound);
Json to_json(const EquilibriumReport& report);

}  // namespace corrint
