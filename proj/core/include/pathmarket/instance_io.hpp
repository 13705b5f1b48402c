#pragma once

#include <string>

#include "pathmarket/model.hpp"

namespace pm {

// Wire format, one JSON object per instance:
//   {"topology": {"line": N} | {"tree": {"parents": [...]}},
//    "items": [{"capacity": B, "costs": [...]} ...],
//    "buyers": [{"scenarios": [{"prob": q, "jobs": [{"bundle": ..., "value": v} ...]} ...]} ...]}
// Line bundles are [first, last]; tree bundles list the path's edge ids.
// Decimal literals are additionally captured exactly into the Rat fields, so
// a value written as 0.1 is carried as 1/10 and not as its double rounding.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);
std::string serialize_instance(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace pm
