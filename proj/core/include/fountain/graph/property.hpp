#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

namespace fountain::graph {

// Alternative order is part of the snapshot contract: text, number, integer, flag.
using PropertyValue = std::variant<std::string, double, std::int64_t, bool>;
using PropertyMap = std::map<std::string, PropertyValue>;

enum class PropertyKind { kText = 0, kNumber = 1, kInteger = 2, kFlag = 3 };

inline PropertyKind kind_of(const PropertyValue& v) {
  return static_cast<PropertyKind>(v.index());
}

// Same-kind ordering. Returns nullopt when the kinds differ; callers treat
// that as "comparison is false".
std::optional<std::partial_ordering> compare_values(const PropertyValue& a,
                                                    const PropertyValue& b);

nlohmann::json to_json_value(const PropertyValue& v);
// Throws fountain::Error(kInvalidArgument) for null, arrays, objects.
PropertyValue from_json_value(const nlohmann::json& j);

nlohmann::json to_json(const PropertyMap& props);
PropertyMap props_from_json(const nlohmann::json& j);

// Convenience accessors; return nullopt when absent or of another kind.
std::optional<std::string> text_prop(const PropertyMap& props, const std::string& key);
std::optional<double> number_prop(const PropertyMap& props, const std::string& key);
std::optional<std::int64_t> integer_prop(const PropertyMap& props, const std::string& key);

}  // namespace fountain::graph
