#include "fountain/graph/property.hpp"

#include <limits>

#include "fountain/error.hpp"

namespace fountain::graph {

std::optional<std::partial_ordering> compare_values(const PropertyValue& a,
                                                    const PropertyValue& b) {
  if (a.index() != b.index()) {
    return std::nullopt;
  }
  return std::visit(
      [&](const auto& lhs) -> std::partial_ordering {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b);
        if constexpr (std::is_same_v<T, std::string>) {
          const int c = lhs.compare(rhs);
          return c < 0 ? std::partial_ordering::less
                       : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
        } else {
          return lhs <=> rhs;
        }
      },
      a);
}

nlohmann::json to_json_value(const PropertyValue& v) {
  return std::visit([](const auto& x) { return nlohmann::json(x); }, v);
}

PropertyValue from_json_value(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::string:
      return j.get<std::string>();
    case nlohmann::json::value_t::boolean:
      return j.get<bool>();
    case nlohmann::json::value_t::number_integer:
      return j.get<std::int64_t>();
    case nlohmann::json::value_t::number_unsigned: {
      const auto u = j.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        throw Error(ErrorCode::kInvalidArgument, "integer property out of range");
      }
      return static_cast<std::int64_t>(u);
    }
    case nlohmann::json::value_t::number_float:
      return j.get<double>();
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("unsupported property value type: ") + j.type_name());
  }
}

nlohmann::json to_json(const PropertyMap& props) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, value] : props) {
    out[key] = to_json_value(value);
  }
  return out;
}

PropertyMap props_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "props must be a JSON object");
  }
  PropertyMap props;
  for (const auto& [key, value] : j.items()) {
    props.emplace(key, from_json_value(value));
  }
  return props;
}

namespace {

template <typename T>
std::optional<T> typed_prop(const PropertyMap& props, const std::string& key) {
  const auto it = props.find(key);
  if (it == props.end()) {
    return std::nullopt;
  }
  if (const auto* v = std::get_if<T>(&it->second)) {
    return *v;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> text_prop(const PropertyMap& props, const std::string& key) {
  return typed_prop<std::string>(props, key);
}

std::optional<double> number_prop(const PropertyMap& props, const std::string& key) {
  return typed_prop<double>(props, key);
}

std::optional<std::int64_t> integer_prop(const PropertyMap& props, const std::string& key) {
  return typed_prop<std::int64_t>(props, key);
}

}  // namespace fountain::graph
