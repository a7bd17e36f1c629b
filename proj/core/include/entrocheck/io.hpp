#pragma once

// JSON encodings for inputs (states, classical joints, convex sets) and for optimizer
// results, so reported optima can be re-verified independently.
//
// State:         {"dims": [..], "re": [[..], ..], "im": [[..], ..]}
// Joint:         {"nx": n, "ny": n, "ne": n, "p": [..]} with p indexed (x * ny + y) * ne + e
// Convex set:    {"generators": [state, ..], "append_maximally_mixed": bool}
// POVM:          {"elements": [{"re": .., "im": ..}, ..]}
// Channel:       {"rows": n, "cols": n, "p": [..]} row-major
// Ensemble:      {"members": [{"weight": w, "state": state}, ..]}, plus "value" per
//                member for valued ensembles

#include "entrocheck/arrowing.hpp"
#include "entrocheck/caratheodory.hpp"
#include "entrocheck/qmat.hpp"
#include "entrocheck/reldist.hpp"
#include "entrocheck/roof.hpp"

#include <string>

namespace entrocheck::io {

/// Thrown for malformed documents; the message names the offending field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_json(const DensityMatrix& rho);
std::string to_json(const Povm& povm);
std::string to_json(const StochasticChannel& channel);
std::string to_json(const Ensemble& ensemble);
std::string to_json(const ClassicalJoint& joint);
std::string to_json(const RelDistResult& result);
std::string to_json(const ArrowResult& result);
std::string to_json(const RoofResult& result);
std::string to_json(const IntrinsicResult& result);
std::string to_json(const ValuedEnsemble& ve);

/// Parsers validate through the domain constructors: ParseError for structural problems,
/// std::invalid_argument when the data does not describe a valid object.
DensityMatrix state_from_json(const std::string& text);
Povm povm_from_json(const std::string& text);
Ensemble ensemble_from_json(const std::string& text);
ValuedEnsemble valued_ensemble_from_json(const std::string& text);
ClassicalJoint joint_from_json(const std::string& text);
ConvexSetSpec convex_set_from_json(const std::string& text);

/// Whole file as a string; ParseError when it cannot be read.
std::string read_file(const std::string& path);

}  // namespace entrocheck::io
