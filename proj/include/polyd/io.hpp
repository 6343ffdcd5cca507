#pragma once

#include <json.hpp>
#include <string>

#include "polyd/dynamics.hpp"
#include "polyd/invariance.hpp"
#include "polyd/lattice.hpp"
#include "polyd/network.hpp"
#include "polyd/partition.hpp"
#include "polyd/quotient.hpp"

namespace polyd {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Accepted forms:
///   {"n": 4, "weights": [["3","1","1","1"], ...]}
///   {"n": 4, "edges": [{"to": 1, "from": 2, "weight": "1"}, ...]}
/// Weight strings may be integers, fractions "p/q", or finite decimals;
/// plain JSON integers are accepted too. Cells are 1-indexed, and the edge
/// {to: i, from: j, weight: w} sets W[i][j] = w. Duplicate (to, from) pairs
/// are an error.
Network network_from_json(const Json& j);
Network load_network(const std::string& path);
Json to_json(const Network& net);

TaggedPartition partition_from_json(const Json& j);  // {"labels":[1,1,2,-2]}
Json to_json(const TaggedPartition& P);

Json to_json(const BlockConditionReport& rep);
Json to_json(const ClassificationFlags& f);
Json classes_to_json(const std::set<SystemClass>& classes);

Json classification_report_json(const Network& net, const TaggedPartition& P);

Json to_json(const QuotientNetwork& q);
Json to_json(const InvariantLattice& lat, const Network& net);
Json to_json(const SynchronyReport& rep);
Json to_json(const InvarianceCertificate& cert);
Json to_json(const FalsificationResult& res);
Json to_json(const RestrictionReport& rep);

}  // namespace polyd
