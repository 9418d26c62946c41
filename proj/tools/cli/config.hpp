#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace pqd::cli {

using Json = nlohmann::ordered_json;

// Exit-code classes.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class FieldType { number, optional_number, required_number, integer, boolean, string, int_list, string_list, object };

struct Field {
    std::string key;
    FieldType type;
    Json def;  // null for optional/required fields
    std::string help;
};

const std::vector<std::string>& command_names();
const std::vector<Field>& schema(const std::string& command);

// Parses a flag string into the JSON value the field expects.
Json parse_flag(const Field& f, const std::string& text);

// Defaults, then the file (a plain config or a sidecar of the same command), then flag overrides.
// Unknown keys and ill-typed values raise ConfigError.
Json resolve_config(const std::string& command, const std::string& config_path,
                    const std::map<std::string, std::string>& overrides);

}  // namespace pqd::cli
