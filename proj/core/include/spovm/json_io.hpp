#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "spovm/codes.hpp"
#include "spovm/cq_state.hpp"
#include "spovm/lab.hpp"
#include "spovm/linalg.hpp"
#include "spovm/rates.hpp"

namespace spovm {

using Json = nlohmann::json;

// Every *_from_json throws ArgumentError on malformed input.

/// Rows of [re, im] pairs. A bare number is accepted as a real entry.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// {"labels": [...], "elements": [matrix, ...]}; a bare array of matrices is
/// also accepted.
Json povm_to_json(const Povm& povm);
Povm povm_from_json(const Json& j);

/// {"inputs": [alphabets], "output": alphabet, "rows": [[...], ...]}
Json stochastic_map_to_json(const StochasticMap& map);
StochasticMap stochastic_map_from_json(const Json& j);

/// {"classical": [{name, alphabet}], "quantum": [{name, dim}],
///  "blocks": [{"label": [...], "matrix": ...}]}
Json cq_state_to_json(const CqState& cq);
CqState cq_state_from_json(const Json& j);

/// {p, n, k, l, G, h}
Json code_to_json(const UccCode& code);
UccCode code_from_json(const Json& j);

/// {"variables": [...], "inequalities": [{"coeffs": {...}, "const": c}]}
Json region_to_json(const RateRegion& region);
RateRegion region_from_json(const Json& j);

/// {"rho_ab", "dims", "m_a", "m_b", "p_zst", "p", "f_s", "f_t", "p_zw"}
DistributedProblem problem_from_json(const Json& j);
Json problem_to_json(const DistributedProblem& problem);

Json quantities_to_json(const InfoQuantities& q);

/// Reports share the keys bound, empirical_mean, stderr, trials, seed, pass.
Json covering_report_to_json(const CoveringReport& r);
Json pruning_report_to_json(const PruningReport& r);
Json pairwise_report_to_json(const PairwiseReport& r);
Json witness_to_json(const DependenceWitness& w);

Json read_json_file(const std::string& path);
/// Writes `text` to `path`, or to stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& text);

}  // namespace spovm
