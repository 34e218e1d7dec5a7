#include "starq/config.hpp"

#include <fstream>
#include <json.hpp>

namespace starq {

namespace {

using nlohmann::json;

json noise_to_json(const NoiseSpec& n) {
    return json{{"sigma", n.sigma}, {"tau_n", n.tau_n}};
}

NoiseSpec noise_from_json(const json& j) {
    NoiseSpec n;
    n.sigma = j.at("sigma").get<double>();
    n.tau_n = j.at("tau_n").get<double>();
    return n;
}

}  // namespace

ExperimentFile parse_experiments(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    ExperimentFile file;
    try {
        for (const auto& [name, j] : root.at("experiments").items()) {
            ExperimentSpec spec;
            spec.cfg.noise = noise_from_json(j.at("noise"));
            if (j.contains("noise2")) spec.cfg.noise2 = noise_from_json(j.at("noise2"));
            spec.cfg.mode = mode_from_name(j.at("mode").get<std::string>());
            spec.cfg.n_cycles = j.at("n_cycles").get<int>();
            spec.cfg.n_rep = j.value("n_rep", 5);
            spec.cfg.steps_per_tau_p = j.value("steps_per_tau_p", 1024);
            spec.cfg.seed = j.at("seed").get<std::uint64_t>();
            spec.n_realizations = j.at("n_realizations").get<int>();
            spec.exclusion = j.value("exclusion", true);
            spec.output = j.value("output", name + ".csv");
            if (spec.cfg.n_cycles < 1 || spec.n_realizations < 1 ||
                spec.cfg.n_rep < 1 || spec.cfg.steps_per_tau_p < 256)
                throw config_error("config validation: " + name +
                                   ": counts must be positive, steps_per_tau_p >= 256");
            file.experiments.emplace(name, std::move(spec));
        }
    } catch (const json::exception& e) {
        throw config_error(std::string("config field error: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("config field error: ") + e.what());
    }
    if (file.experiments.empty()) throw config_error("config has no experiments");
    return file;
}

ExperimentFile load_experiments(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return parse_experiments(text);
}

std::string serialize_experiments(const ExperimentFile& file) {
    json exps = json::object();
    for (const auto& [name, spec] : file.experiments) {
        json j;
        j["noise"] = noise_to_json(spec.cfg.noise);
        if (spec.cfg.noise2) j["noise2"] = noise_to_json(*spec.cfg.noise2);
        j["mode"] = mode_name(spec.cfg.mode);
        j["n_cycles"] = spec.cfg.n_cycles;
        j["n_rep"] = spec.cfg.n_rep;
        j["steps_per_tau_p"] = spec.cfg.steps_per_tau_p;
        j["seed"] = spec.cfg.seed;
        j["n_realizations"] = spec.n_realizations;
        j["exclusion"] = spec.exclusion;
        j["output"] = spec.output;
        exps[name] = std::move(j);
    }
    return json{{"experiments", std::move(exps)}}.dump(2) + "\n";
}

}  // namespace starq
