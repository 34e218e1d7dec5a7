#pragma once

#include <map>
#include <string>

#include "starq/protocol.hpp"

namespace starq {

class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
    RunConfig cfg;
    int n_realizations = 1;
    bool exclusion = true;
    std::string output;  // CSV path, relative to the output directory
};

// Named experiments parsed from a JSON file:
//   { "experiments": { "<name>": {
//       "noise": {"sigma": .., "tau_n": ..}, "noise2": {..} (optional),
//       "mode": "zeno|qec|dd_only|free", "n_cycles": N, "n_rep": N,
//       "steps_per_tau_p": N, "seed": N, "n_realizations": N,
//       "exclusion": bool, "output": "file.csv" } } }
struct ExperimentFile {
    std::map<std::string, ExperimentSpec> experiments;
};

ExperimentFile load_experiments(const std::string& path);
ExperimentFile parse_experiments(const std::string& text);
std::string serialize_experiments(const ExperimentFile& file);

}  // namespace starq
