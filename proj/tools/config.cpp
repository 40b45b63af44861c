#include "config.hpp"

#include <fstream>
#include <sstream>

namespace freegrass::cli {

using nlohmann::json;

json RunConfig::to_json() const {
    json j;
    j["command"] = command;
    j["target"] = target;
    j["algebra"] = algebra ? json(*algebra) : json(nullptr);
    j["seed"] = seed;
    j["E"] = E;
    j["N"] = ladder;
    j["samples"] = samples;
    j["instances"] = instances;
    j["poly"] = poly ? json(*poly) : json(nullptr);
    j["degree"] = degree;
    j["depth"] = depth;
    j["points"] = points;
    j["format"] = format;
    j["tolerances"] = tolerances;
    return j;
}

std::vector<std::size_t> parse_ladder(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
            throw ConfigError("bad N-ladder entry '" + item + "'");
        out.push_back(std::stoul(item));
    }
    if (out.empty()) throw ConfigError("empty N-ladder");
    return out;
}

namespace {

template <typename T>
T get_as(const json& j, const std::string& key) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

std::size_t get_count(const json& j, const std::string& key) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw ConfigError("config key '" + key + "' must be a non-negative integer");
    return j.get<std::size_t>();
}

}  // namespace

void apply_json(RunConfig& cfg, const json& j) {
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const json& v = it.value();
        if (k == "algebra") cfg.algebra = get_as<std::string>(v, k);
        else if (k == "seed") cfg.seed = get_count(v, k);
        else if (k == "E") cfg.E = get_count(v, k);
        else if (k == "N") {
            if (v.is_string()) cfg.ladder = parse_ladder(v.get<std::string>());
            else if (v.is_array()) {
                cfg.ladder.clear();
                for (const auto& e : v) cfg.ladder.push_back(get_count(e, k));
            } else throw ConfigError("config key 'N' must be a list or a comma-separated string");
        } else if (k == "samples") cfg.samples = get_count(v, k);
        else if (k == "instances") cfg.instances = get_count(v, k);
        else if (k == "poly") cfg.poly = get_as<std::string>(v, k);
        else if (k == "degree") cfg.degree = get_count(v, k);
        else if (k == "depth") cfg.depth = get_count(v, k);
        else if (k == "points") cfg.points = get_count(v, k);
        else if (k == "output") cfg.output = get_as<std::string>(v, k);
        else if (k == "format") cfg.format = get_as<std::string>(v, k);
        else if (k == "tolerances") {
            if (!v.is_object()) throw ConfigError("config key 'tolerances' must be an object");
            cfg.tolerances = v;
        } else throw ConfigError("unknown config key '" + k + "'");
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace freegrass::cli
