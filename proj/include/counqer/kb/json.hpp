#pragma once

#include <json.hpp>

#include "counqer/kb/triple.hpp"

namespace counqer::kb {

// ObjectValue: {"type": "integer", "value": 7}; csv_list values are arrays,
// dates are strings ("1969" or "1969-07-20").
nlohmann::json to_json(const ObjectValue& v);
ObjectValue object_value_from_json(const nlohmann::json& j);

// PredicateId: {"iri", "label", "inverted", "kb"}
nlohmann::json to_json(const PredicateId& p);
PredicateId predicate_from_json(const nlohmann::json& j);

}  // namespace counqer::kb
