#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "lanet/cpt.hpp"
#include "lanet/dag.hpp"
#include "lanet/matrix.hpp"

namespace lanet {

/// A conditional-probability question: P(target = value | evidence).
/// The target resource must not also appear as evidence.
struct Query {
    ResourceId target;
    int target_value = 1;
    std::map<ResourceId, int> evidence;

    std::string to_string() const;
};

/// Parse the CLI query grammar: "P(sub_6=1 | sub_5=1, vid_7=1)".
/// Whitespace-insensitive; evidence is optional; values are 0 or 1.
/// Throws QueryError on malformed text, duplicate variables, or a target
/// listed as evidence.
Query parse_query(const std::string& text);

/// Exact P(target | evidence) under the model, by enumeration over the
/// ancestral set of the query variables. Throws QueryError when a query
/// variable is not a dag node, the evidence has probability zero, or the
/// ancestral set exceeds 25 variables.
double model_query(const Dag& dag, const CptSet& cpts, const Query& query);

struct EmpiricalResult {
    double probability = 0.0;
    std::size_t support = 0;  // students matching the evidence
};

/// Conditional relative frequency in the engagement matrix:
/// #(evidence & target) / #(evidence). Throws QueryError when a query
/// resource is not a matrix column or no student matches the evidence.
EmpiricalResult empirical_conditional(const EngagementMatrix& matrix, const Query& query);

}  // namespace lanet
