#pragma once

#include "dtflow/dt.hpp"
#include "dtflow/quiver.hpp"
#include "dtflow/tropical.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace dtflow {

using Json = nlohmann::ordered_json;

// Integers cross the JSON boundary as numbers only when < 2^53 in magnitude,
// otherwise as strings; rationals always as canonical "p/q" strings.
Json int_to_json(const Int& x);
Json rat_to_json(const Rat& x);
Json int_vec_to_json(const IntVec& v);
Json rat_vec_to_json(const RatVec& v);

// {"vertices": [...], "arrows": d x d} or {"skew_form": d x d}, exclusive.
SkewForm parse_quiver(const Json& j);

// {"invariants": [{"gamma": [..], "omega_star": int}, ...]}
AttractorData parse_attractor(const Json& j);

// {"tree": nested arrays of 1-based leaf indices, "parts": [[..]],
//  "skew_form": d x d}
FaceType parse_face(const Json& j);

// Flag-string parsers: "1,0" -> vector; "1,0;0,1" -> parts; "2,-1" -> theta.
IntVec parse_int_vec(const std::string& s);
RatVec parse_rat_vec(const std::string& s);
std::vector<DimVec> parse_parts(const std::string& s);

Json load_json_file(const std::string& path);

}  // namespace dtflow
