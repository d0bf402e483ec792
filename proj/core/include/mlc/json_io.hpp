#pragma once

#include "mlc/group.hpp"
#include "mlc/modulus.hpp"
#include "mlc/structure.hpp"
#include "mlc/unitary.hpp"

#include <json.hpp>

#include <string>

namespace mlc {

// Object keys serialize sorted (std::map-backed), so dumps are deterministic.
using Json = nlohmann::json;

// Rationals travel as strings "p/q" (or "p"); integers are also accepted on
// input.
Json rat_to_json(const Rat& r);
Rat rat_from_json(const Json& j);

// "identity" | {"points": [["eps","delta"], ...], "tail_slope": "s"}
Json modulus_to_json(const Modulus& m);
Modulus modulus_from_json(const Json& j);

// {"bound", "sorts": [{"name", "elements", "metric": "discrete"|[[...]]}, ...],
//  "predicates": [...], "functions": [...]} — sorts referenced by name.
Json structure_to_json(const Structure& st);
Structure structure_from_json(const Json& j);

// {"kind": "table", "labels", "identity", "mul": [[int row], ...],
//  "metric": "discrete"|[[...]], "bound", "assertions": {...}}
// or {"kind": "enumerated", "family": "free"|"zpow"|"matrix", "rank"|"dim"|
//  "generators", "radius", "cap"}. Serialization supports table groups only
// (enumerated groups are defined by their spec file).
Json group_to_json(const MetricGroup& g);
MetricGroup group_from_json(const Json& j);

// {"group": <opaque reference>, "dim", "matrices": {label: [[[re,im],...],...]}
//  or "generators": {...}, "modulus": ...}. The "group" field is not resolved
// here — callers load the group and pass it in.
Json rep_to_json(const UnitaryRep& rep, const std::string& group_ref = "");
UnitaryRep rep_from_json(const Json& j, const MetricGroup& group);

Json load_json_file(const std::string& path); // Error on I/O or parse failure
void save_json_file(const std::string& path, const Json& j);

} // namespace mlc
