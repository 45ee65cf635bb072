#include "polypin/run_config.hpp"

#include "polypin/errors.hpp"
#include "polypin/report_io.hpp"

#include <fstream>

namespace polypin {

nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["command"] = c.command;
    j["a"] = c.a;
    j["b"] = c.b;
    j["beta"] = c.beta;
    j["N"] = c.N;
    j["T"] = c.T;
    j["delta"] = c.delta;
    j["horizon"] = c.horizon;
    j["dump"] = c.dump;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["out"] = c.out;
    j["format"] = c.format;
    j["t_values"] = c.t_values;
    j["k_max"] = c.k_max;
    j["criteria"] = c.criteria;
    return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParameterError("run config must be a JSON object");
    RunConfig c;
    // Missing keys keep their defaults; wrongly typed ones are parameter errors.
    auto get = [&](const char* key, auto& field) {
        if (!j.contains(key)) return;
        try {
            j.at(key).get_to(field);
        } catch (const nlohmann::json::exception& e) {
            throw ParameterError(std::string("run config field '") + key + "': " + e.what());
        }
    };
    get("command", c.command);
    get("a", c.a);
    get("b", c.b);
    get("beta", c.beta);
    get("N", c.N);
    get("T", c.T);
    get("delta", c.delta);
    get("horizon", c.horizon);
    get("dump", c.dump);
    get("samples", c.samples);
    get("seed", c.seed);
    get("threads", c.threads);
    get("out", c.out);
    get("format", c.format);
    get("t_values", c.t_values);
    get("k_max", c.k_max);
    get("criteria", c.criteria);
    if (!c.format.empty() && c.format != "json" && c.format != "csv") throw ParameterError("format must be csv or json");
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParameterError("cannot read config " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError("config " + path + " is not valid JSON: " + e.what());
    }
    return run_config_from_json(j);
}

void save_run_config(const std::string& path, const RunConfig& c) {
    write_atomically(path, [&](std::ostream& os) { os << to_json(c).dump(2) << '\n'; });
}

} // namespace polypin
