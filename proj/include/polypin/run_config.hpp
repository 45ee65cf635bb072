#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace polypin {

/// Everything a CLI run depends on. Serializes losslessly to JSON.
struct RunConfig {
    std::string command;
    std::string a;        ///< exponent text, kept verbatim so exactness survives a round trip
    std::string b;
    double beta = 1.0;
    long N = 0;
    long T = 0;
    double delta = 0.0;
    long horizon = 0;     ///< 0 picks a horizon from the tail rule
    bool dump = false;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out;
    std::string format; ///< csv or json; empty picks the command default
    std::vector<long> t_values;
    int k_max = 20;
    std::vector<std::string> criteria;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::ordered_json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

RunConfig load_run_config(const std::string& path);
void save_run_config(const std::string& path, const RunConfig& c);

} // namespace polypin
