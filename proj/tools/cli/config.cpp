#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace pqd::cli {

namespace {

using F = FieldType;

std::vector<Field> common()
{
    return {
        {"output_dir", F::string, ".", "directory for CSV, SVG and sidecar files"},
        {"svg", F::boolean, false, "also write an SVG rendering"},
    };
}

std::vector<Field> material()
{
    return {
        {"eps_inf", F::number, 9.6, "high-frequency permittivity of the wire"},
        {"omega_p_ev", F::number, 3.76, "plasma energy of the wire (eV)"},
        {"tau", F::optional_number, nullptr, "Drude relaxation time in 1/omega_p (null = lossless)"},
        {"eps_O", F::number, 5.3, "outer permittivity"},
        {"R", F::number, 0.1, "effective radius omega_p a/c"},
        {"hbar_omega_p_ev", F::number, 3.76, "energy of the frequency unit (eV)"},
        {"unit_length_nm", F::number, 53.8, "length unit c/omega_p (nm)"},
        {"light_line", F::string, "vacuum", "bound flag convention: vacuum or outer_medium"},
    };
}

std::vector<Field> trace(double k_max)
{
    return {
        {"k_min", F::number, 0.05, "first k_z (omega_p/c)"},
        {"k_max", F::number, k_max, "last k_z"},
        {"k_points", F::integer, 400, "k_z samples per branch"},
    };
}

std::vector<Field> reservoir(double delta, double gamma)
{
    return {
        {"delta", F::number, delta, "detuning from the band edge (beta)"},
        {"A", F::number, 1.0, "band curvature"},
        {"C", F::number, 1.0, "band-edge coupling (beta^{3/2})"},
        {"gamma", F::number, gamma, "background rate (beta)"},
        {"kind", F::string, "minimum", "edge kind: minimum or maximum"},
    };
}

std::vector<Field> junction(double gl, double gr)
{
    return {
        {"gammaL", F::number, gl, "electron injection rate (beta)"},
        {"gammaR", F::number, gr, "hole injection rate (beta)"},
    };
}

template <typename... V>
std::vector<Field> join(V... parts)
{
    std::vector<Field> out;
    (out.insert(out.end(), parts.begin(), parts.end()), ...);
    return out;
}

std::map<std::string, std::vector<Field>> build()
{
    std::map<std::string, std::vector<Field>> s;
    s["dispersion"] = join(common(), material(), trace(30.0),
                           std::vector<Field>{{"modes", F::int_list, Json::array({0, 1, 2, 3}), "mode orders"}});
    s["se-rate"] = join(common(), material(), trace(30.0),
                        std::vector<Field>{
                            {"modes", F::int_list, Json::array({0, 1, 2, 3}), "mode orders"},
                            {"coupling_scale", F::number, 1.0, "uniform spectral weight (beta)"},
                            {"coupling_table", F::object, nullptr, "per-mode tables {\"n\": {\"k\": [...], \"weight\": [...]}}"},
                            {"omega0_min", F::optional_number, nullptr, "first exciton frequency (default: bound span)"},
                            {"omega0_max", F::optional_number, nullptr, "last exciton frequency (default: bound span)"},
                            {"omega0_points", F::integer, 2001, "exciton frequency samples"},
                        });
    s["decay"] = join(common(), reservoir(0.2, 0.1),
                      std::vector<Field>{
                          {"dt", F::number, 0.01, "time step (1/beta)"},
                          {"t_max", F::number, 10.0, "end time (1/beta)"},
                          {"cross_check", F::boolean, true, "compare against the Volterra solution"},
                          {"cross_tol", F::number, 1e-5, "allowed sup-norm disagreement"},
                      });
    s["noise"] = join(common(), reservoir(-0.01, 0.0), junction(0.01, 0.1),
                      std::vector<Field>{
                          {"omega_max", F::number, 0.05, "half width of the symmetric omega grid (beta)"},
                          {"omega_points", F::integer, 201, "omega samples"},
                          {"kernel_form", F::string, "hermitian", "hermitian or literal"},
                      });
    s["noise-map"] = join(common(), reservoir(0.0, 0.0), junction(0.01, 0.1), material(), trace(40.0),
                          std::vector<Field>{
                              {"omega_max", F::number, 0.05, "half width of the omega grid (beta)"},
                              {"omega_points", F::integer, 201, "omega samples"},
                              {"delta_max", F::number, 0.05, "half width of the detuning grid (beta)"},
                              {"delta_points", F::integer, 201, "detuning samples"},
                              {"kernel_form", F::string, "hermitian", "hermitian or literal"},
                              {"backend", F::string, "quadratic", "quadratic or numeric"},
                              {"mode", F::integer, 1, "plasmon mode of the numeric backend"},
                              {"edge_index", F::integer, 0, "index among band edges of the chosen kind"},
                              {"omega_p_over_beta", F::number, 1e6, "omega_p in beta units"},
                          });
    // "delta" is the row variable of the map
    auto& nm = s["noise-map"];
    nm.erase(std::remove_if(nm.begin(), nm.end(), [](const Field& f) { return f.key == "delta"; }), nm.end());
    s["retard"] = join(common(), junction(1.0, 1.0),
                       std::vector<Field>{
                           {"gamma_0", F::number, 1.0, "single-dot decay constant (beta)"},
                           {"r", F::number, 6.283185307179586, "dot separation"},
                           {"v", F::number, 1.0, "plasmon group velocity"},
                           {"theta", F::optional_number, nullptr, "propagation phase k0 r"},
                           {"omega0_over_gamma0", F::optional_number, nullptr, "sets theta when theta is null (one of the two is required)"},
                           {"convention", F::string, "amplitude", "gamma_0 as amplitude or population rate"},
                           {"coupled", F::boolean, true, "false removes the second dot"},
                           {"omega_max", F::number, 4.0, "half width of the omega grid (beta)"},
                           {"omega_points", F::integer, 801, "omega samples"},
                           {"amplitudes_dt", F::number, 0.05, "time step of the amplitude table"},
                           {"amplitudes_t_max", F::number, 30.0, "end of the amplitude table"},
                       });
    s["phonon"] = join(common(),
                       std::vector<Field>{
                           {"w", F::number, 130.0, "slab width"},
                           {"c_l", F::required_number, nullptr, "longitudinal velocity"},
                           {"c_t", F::required_number, nullptr, "transverse velocity"},
                           {"families", F::string_list, Json::array({"dilatational", "flexural"}), "families"},
                           {"branches", F::integer, 6, "branches per family (at most 12)"},
                           {"q_max_w", F::number, 8.0, "largest q_parallel w"},
                           {"q_points", F::integer, 401, "q_parallel samples"},
                       });
    return s;
}

const std::map<std::string, std::vector<Field>>& all()
{
    static const auto s = build();
    return s;
}

const char* type_name(FieldType t)
{
    switch (t) {
    case F::number: return "a number";
    case F::optional_number: return "a number or null";
    case F::required_number: return "a number";
    case F::integer: return "an integer";
    case F::boolean: return "a boolean";
    case F::string: return "a string";
    case F::int_list: return "a list of integers";
    case F::string_list: return "a list of strings";
    case F::object: return "an object or null";
    }
    return "?";
}

bool type_ok(FieldType t, const Json& v)
{
    switch (t) {
    case F::number:
    case F::required_number: return v.is_number();
    case F::optional_number: return v.is_null() || v.is_number();
    case F::integer: return v.is_number_integer();
    case F::boolean: return v.is_boolean();
    case F::string: return v.is_string();
    case F::int_list:
        return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_number_integer(); });
    case F::string_list:
        return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_string(); });
    case F::object: return v.is_null() || v.is_object();
    }
    return false;
}

double to_number(const std::string& key, const std::string& s)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto r = std::from_chars(s.data(), end, v);
    if (r.ec != std::errc() || r.ptr != end) throw ConfigError("--" + key + ": '" + s + "' is not a number");
    return v;
}

long long to_integer(const std::string& key, const std::string& s)
{
    long long v = 0;
    const auto* end = s.data() + s.size();
    const auto r = std::from_chars(s.data(), end, v);
    if (r.ec != std::errc() || r.ptr != end) throw ConfigError("--" + key + ": '" + s + "' is not an integer");
    return v;
}

std::vector<std::string> split(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(item);
    return out;
}

}  // namespace

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"dispersion", "se-rate", "decay", "noise", "noise-map", "retard", "phonon"};
    return names;
}

const std::vector<Field>& schema(const std::string& command)
{
    const auto it = all().find(command);
    if (it == all().end()) throw ConfigError("unknown command '" + command + "'");
    return it->second;
}

Json parse_flag(const Field& f, const std::string& text)
{
    switch (f.type) {
    case F::number:
    case F::required_number: return to_number(f.key, text);
    case F::optional_number: return text == "null" ? Json(nullptr) : Json(to_number(f.key, text));
    case F::integer: return to_integer(f.key, text);
    case F::boolean:
        if (text == "true" || text == "1") return true;
        if (text == "false" || text == "0") return false;
        throw ConfigError("--" + f.key + ": expected true or false");
    case F::string: return text;
    case F::int_list: {
        Json a = Json::array();
        for (const auto& p : split(text)) a.push_back(to_integer(f.key, p));
        return a;
    }
    case F::string_list: {
        Json a = Json::array();
        for (const auto& p : split(text)) a.push_back(p);
        return a;
    }
    case F::object:
        try {
            return text == "null" ? Json(nullptr) : Json::parse(text);
        } catch (const Json::parse_error& e) {
            throw ConfigError("--" + f.key + ": " + e.what());
        }
    }
    throw ConfigError("--" + f.key + ": unsupported field");
}

Json resolve_config(const std::string& command, const std::string& config_path,
                    const std::map<std::string, std::string>& overrides)
{
    const auto& fields = schema(command);
    Json cfg = Json::object();
    for (const auto& f : fields) cfg[f.key] = f.def;

    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw IoError("cannot read config file '" + config_path + "'");
        Json file;
        try {
            file = Json::parse(in);
        } catch (const Json::parse_error& e) {
            throw ConfigError("config file '" + config_path + "': " + e.what());
        }
        if (!file.is_object()) throw ConfigError("config file must hold a JSON object");
        // a sidecar carries the resolved configuration of the run that wrote it
        if (file.contains("resolved_config")) {
            if (!file.contains("command") || file["command"] != command)
                throw ConfigError("sidecar was written by command '" + file.value("command", std::string("?")) +
                                  "', not '" + command + "'");
            file = file["resolved_config"];
            if (!file.is_object()) throw ConfigError("resolved_config must be an object");
        }
        for (const auto& [key, value] : file.items()) {
            const auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) { return f.key == key; });
            if (it == fields.end()) throw ConfigError("unknown key '" + key + "' for command '" + command + "'");
            if (!type_ok(it->type, value)) throw ConfigError("key '" + key + "' must be " + type_name(it->type));
            cfg[key] = value;
        }
    }

    for (const auto& [key, text] : overrides) {
        const auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) { return f.key == key; });
        if (it == fields.end()) throw ConfigError("unknown option --" + key);
        cfg[key] = parse_flag(*it, text);
    }

    for (const auto& f : fields)
        if (f.type == F::required_number && !cfg[f.key].is_number())
            throw ConfigError("missing required key '" + f.key + "'");
    return cfg;
}

}  // namespace pqd::cli
