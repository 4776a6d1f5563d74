#ifndef HTN_JSON_IO_HPP
#define HTN_JSON_IO_HPP

#include <string>

#include "htn/solvers.hpp"

namespace htn {

// Versioned JSON instance format. Top level:
//   {"format": "htn-instance", "version": 1,
//    "domain": {"propositions": [...], "actions": [{"name", "pre", "del", "add"}],
//               "compounds": [...], "methods": [{"compound", "network"}]},
//    "network": {"tasks": [{"id", "label"}], "order": [["t1","t2"], ...],
//                "order_kind": "cover" | "closure"},
//    "s0": [...],
//    "query": {"type": "verify" | "exists" | "executable" | "reach",
//              "plan": [...] | "demand": {...} | "goal": [...]}}
// "compounds", "methods", and "order_kind" are optional; every unknown field
// raises ParseError. Order pairs reference task ids; "order_kind" documents
// whether the list is the cover relation or the full closure — both rebuild
// the same partial order.
PrimitiveInstance load_instance(const std::string& json_text);
PrimitiveInstance load_instance_file(const std::string& path);

// Canonical serialization (cover arcs, sorted keys, two-space indent).
std::string save_instance(const PrimitiveInstance& inst);
void save_instance_file(const PrimitiveInstance& inst, const std::string& path);

} // namespace htn

#endif
