#pragma once

// nlohmann/json bindings for the public config types. Internal to the core
// library; the public headers expose only string-based entry points.

#include <initializer_list>
#include <string>
#include <type_traits>

#include <json.hpp>

#include "risem/error.hpp"
#include "risem/scenario.hpp"

namespace risem::detail {

using Json = nlohmann::json;

/// Throws ConfigError if `object` is not an object or has keys outside
/// `allowed`, or lacks any key in `required`.
void check_keys(const Json& object, std::string_view where,
                std::initializer_list<std::string_view> allowed,
                std::initializer_list<std::string_view> required);

template <typename T>
T read(const Json& object, std::string_view where, const char* key) {
    try {
        const Json& value = object.at(key);
        if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
            if (!value.is_number_unsigned()) {
                throw ConfigError(std::string(where) + "." + key +
                                  ": expected a non-negative integer");
            }
        }
        if constexpr (std::is_floating_point_v<T>) {
            if (!value.is_number()) {
                throw ConfigError(std::string(where) + "." + key + ": expected a number");
            }
        }
        return value.get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string(where) + "." + key + ": " + e.what());
    }
}

Json to_json(const RisGeometry& g);
Json to_json(const LinkBudget& b);
Json to_json(const SpecularSpec& s);
Json to_json(const ScenarioConfig& c);

RisGeometry geometry_from_json(const Json& j);
LinkBudget budget_from_json(const Json& j);
SpecularSpec specular_from_json(const Json& j, std::string_view where);
ScenarioConfig scenario_from_json(const Json& j);

}  // namespace risem::detail
