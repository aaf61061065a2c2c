#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "gyroless/errors.hpp"
#include "gyroless/scenario.hpp"

namespace gyroless {

using nlohmann::json;

InertiaDiag cubesat_inertia() {
    constexpr double mass = 2.0;
    constexpr double l = 0.2;
    constexpr double w = 0.1;
    constexpr double h = 0.1;
    return {mass / 12.0 * (w * w + h * h), mass / 12.0 * (l * l + h * h), mass / 12.0 * (l * l + w * w)};
}

Vector3 default_omega0() {
    constexpr double deg = 3.14159265358979323846 / 180.0;
    return {{30.0 * deg, 10.0 * deg, 50.0 * deg}};
}

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(where + ": expected a finite number");
    return v;
}

Vector3 vector3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(where + ": expected an array of 3 numbers");
    return {{number(j[0], where), number(j[1], where), number(j[2], where)}};
}

RotationMatrix rotation(const json& j, const std::string& where) {
    if (j.is_string() && j.get<std::string>() == "identity") return {};
    if (!j.is_array() || j.size() != 3) throw ConfigError(where + ": expected \"identity\" or 3 rows of 3 numbers");
    Matrix3 m;
    for (std::size_t r = 0; r < 3; ++r) {
        const Vector3 row = vector3(j[r], where);
        for (std::size_t c = 0; c < 3; ++c) m(r, c) = row[c];
    }
    try {
        return RotationMatrix::from_matrix(m);
    } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

bool is_auto(const json& j) { return j.is_string() && j.get<std::string>() == "auto"; }

GainSpec gains(const json& j) {
    GainSpec g;
    if (is_auto(j)) return g;
    check_keys(j, {"alpha", "k", "k_factor"}, "gains");
    if (j.contains("alpha") && !is_auto(j["alpha"])) g.alpha = number(j["alpha"], "gains.alpha");
    if (j.contains("k") && !is_auto(j["k"])) g.k = number(j["k"], "gains.k");
    if (j.contains("k_factor")) {
        if (g.k) throw ConfigError("gains: give either k or k_factor, not both");
        g.k_factor = number(j["k_factor"], "gains.k_factor");
        if (!(g.k_factor > 0.0)) throw ConfigError("gains.k_factor must be positive");
    }
    return g;
}

TorqueProfile torque(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw ConfigError("torque: expected an object with a string 'type'");
    }
    const std::string type = j["type"].get<std::string>();
    if (type == "zero") {
        check_keys(j, {"type"}, "torque");
        return TorqueProfile::zero();
    }
    if (type == "constant") {
        check_keys(j, {"type", "value"}, "torque");
        if (!j.contains("value")) throw ConfigError("torque: constant profile needs 'value'");
        return TorqueProfile::constant(vector3(j["value"], "torque.value"));
    }
    if (type == "sinusoidal") {
        check_keys(j, {"type", "amplitude", "angular_frequency", "phase", "offset"}, "torque");
        if (!j.contains("amplitude") || !j.contains("angular_frequency")) {
            throw ConfigError("torque: sinusoidal profile needs 'amplitude' and 'angular_frequency'");
        }
        return TorqueProfile::sinusoidal(vector3(j["amplitude"], "torque.amplitude"),
                                         number(j["angular_frequency"], "torque.angular_frequency"),
                                         j.contains("phase") ? number(j["phase"], "torque.phase") : 0.0,
                                         j.contains("offset") ? vector3(j["offset"], "torque.offset") : Vector3{});
    }
    throw ConfigError("torque: unknown type '" + type + "'");
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(doc,
               {"inertia", "omega0", "attitude0", "refs", "sensor", "gains", "dt_sensor", "t_end", "torque",
                "omega_max", "truth_substeps", "omega_hat0", "fit_window"},
               "config");

    ScenarioConfig cfg;
    if (doc.contains("inertia")) {
        const json& j = doc["inertia"];
        if (j.is_string() && j.get<std::string>() == "cubesat") {
            cfg.inertia = cubesat_inertia();
        } else {
            const Vector3 v = vector3(j, "inertia");
            cfg.inertia = InertiaDiag(v[0], v[1], v[2]);
        }
    }
    if (doc.contains("omega0")) cfg.omega0 = vector3(doc["omega0"], "omega0");
    if (doc.contains("attitude0")) cfg.attitude0 = rotation(doc["attitude0"], "attitude0");
    if (doc.contains("refs")) {
        const json& j = doc["refs"];
        check_keys(j, {"a", "b"}, "refs");
        if (!j.contains("a") || !j.contains("b")) throw ConfigError("refs: needs both 'a' and 'b'");
        cfg.refs = canonicalize(UnitVector3::normalized(vector3(j["a"], "refs.a")),
                                UnitVector3::normalized(vector3(j["b"], "refs.b")));
    }
    if (doc.contains("sensor")) {
        const json& j = doc["sensor"];
        check_keys(j, {"R_mb", "R_sb", "noise_sigma", "seed"}, "sensor");
        if (j.contains("R_mb")) cfg.sensor.R_mb = rotation(j["R_mb"], "sensor.R_mb");
        if (j.contains("R_sb")) cfg.sensor.R_sb = rotation(j["R_sb"], "sensor.R_sb");
        if (j.contains("noise_sigma")) {
            cfg.sensor.noise_sigma = number(j["noise_sigma"], "sensor.noise_sigma");
            if (cfg.sensor.noise_sigma < 0.0) throw ConfigError("sensor.noise_sigma must be non-negative");
        }
        if (j.contains("seed")) {
            if (!j["seed"].is_number_unsigned()) throw ConfigError("sensor.seed: expected a non-negative integer");
            cfg.sensor.seed = j["seed"].get<std::uint64_t>();
        }
    }
    if (doc.contains("gains")) cfg.gains = gains(doc["gains"]);
    if (doc.contains("dt_sensor")) cfg.dt_sensor = number(doc["dt_sensor"], "dt_sensor");
    if (doc.contains("t_end")) cfg.t_end = number(doc["t_end"], "t_end");
    if (doc.contains("torque")) cfg.torque = torque(doc["torque"]);
    if (doc.contains("omega_max") && !is_auto(doc["omega_max"])) {
        cfg.omega_max = number(doc["omega_max"], "omega_max");
    }
    if (doc.contains("truth_substeps") && !is_auto(doc["truth_substeps"])) {
        const json& j = doc["truth_substeps"];
        if (!j.is_number_integer() || j.get<long long>() < 1) {
            throw ConfigError("truth_substeps: expected a positive integer or \"auto\"");
        }
        cfg.truth_substeps = static_cast<int>(j.get<long long>());
    }
    if (doc.contains("omega_hat0")) cfg.omega_hat0 = vector3(doc["omega_hat0"], "omega_hat0");
    if (doc.contains("fit_window")) {
        const json& j = doc["fit_window"];
        if (!j.is_array() || j.size() != 2) throw ConfigError("fit_window: expected [t_begin, t_end]");
        cfg.fit_window = std::pair{number(j[0], "fit_window"), number(j[1], "fit_window")};
        if (!(cfg.fit_window->second > cfg.fit_window->first)) throw ConfigError("fit_window: empty interval");
    }

    if (!(cfg.dt_sensor > 0.0)) throw ConfigError("dt_sensor must be positive");
    if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be positive");
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::uint64_t resolve_seed(std::uint64_t config_seed, const char* env_value, std::optional<std::uint64_t> cli_value) {
    if (cli_value) return *cli_value;
    if (env_value != nullptr && *env_value != '\0') {
        const std::string s(env_value);
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw ConfigError("GYROLESS_SEED must be a non-negative integer, got '" + s + "'");
        }
        return v;
    }
    return config_seed;
}

}  // namespace gyroless
