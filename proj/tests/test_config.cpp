#include <doctest.h>

#include "starq/config.hpp"

using namespace starq;

namespace {

const char* kSample = R"({
  "experiments": {
    "slow_qec": {
      "noise": {"sigma": 0.02, "tau_n": 128.0},
      "mode": "qec",
      "n_cycles": 4,
      "seed": 7,
      "n_realizations": 25,
      "output": "slow_qec.csv"
    },
    "bimodal_zeno": {
      "noise": {"sigma": 0.02, "tau_n": 128.0},
      "noise2": {"sigma": 0.002, "tau_n": 1.0},
      "mode": "zeno",
      "n_cycles": 2,
      "n_rep": 5,
      "steps_per_tau_p": 512,
      "seed": 9,
      "n_realizations": 10,
      "exclusion": false
    }
  }
})";

}  // namespace

TEST_CASE("parsing fills fields and defaults") {
    ExperimentFile f = parse_experiments(kSample);
    REQUIRE(f.experiments.size() == 2);

    const ExperimentSpec& a = f.experiments.at("slow_qec");
    CHECK(a.cfg.noise.sigma == 0.02);
    CHECK(a.cfg.noise.tau_n == 128.0);
    CHECK(!a.cfg.noise2.has_value());
    CHECK(a.cfg.mode == RunMode::qec);
    CHECK(a.cfg.n_cycles == 4);
    CHECK(a.cfg.n_rep == 5);               // default
    CHECK(a.cfg.steps_per_tau_p == 1024);  // default
    CHECK(a.cfg.seed == 7);
    CHECK(a.n_realizations == 25);
    CHECK(a.exclusion);  // default
    CHECK(a.output == "slow_qec.csv");

    const ExperimentSpec& b = f.experiments.at("bimodal_zeno");
    REQUIRE(b.cfg.noise2.has_value());
    CHECK(b.cfg.noise2->tau_n == 1.0);
    CHECK(b.cfg.mode == RunMode::zeno);
    CHECK(b.cfg.steps_per_tau_p == 512);
    CHECK(!b.exclusion);
    CHECK(b.output == "bimodal_zeno.csv");  // defaulted from the name
}

TEST_CASE("round-trip parse -> serialize -> parse is identical") {
    ExperimentFile f = parse_experiments(kSample);
    std::string text = serialize_experiments(f);
    ExperimentFile g = parse_experiments(text);
    CHECK(serialize_experiments(g) == text);
    REQUIRE(g.experiments.size() == f.experiments.size());
    const ExperimentSpec& a = f.experiments.at("bimodal_zeno");
    const ExperimentSpec& b = g.experiments.at("bimodal_zeno");
    CHECK(a.cfg.noise.sigma == b.cfg.noise.sigma);
    CHECK(a.cfg.noise2->sigma == b.cfg.noise2->sigma);
    CHECK(a.cfg.seed == b.cfg.seed);
    CHECK(a.exclusion == b.exclusion);
}

TEST_CASE("malformed input is rejected") {
    CHECK_THROWS_AS(parse_experiments("{not json"), config_error);
    CHECK_THROWS_AS(parse_experiments("{}"), config_error);
    CHECK_THROWS_AS(parse_experiments(R"({"experiments": {}})"), config_error);
    // missing required field
    CHECK_THROWS_AS(parse_experiments(R"({"experiments": {"x": {
        "noise": {"sigma": 0.02, "tau_n": 128.0}, "mode": "qec",
        "n_cycles": 4, "seed": 7}}})"),
                    config_error);
    // unknown mode
    CHECK_THROWS_AS(parse_experiments(R"({"experiments": {"x": {
        "noise": {"sigma": 0.02, "tau_n": 128.0}, "mode": "warp",
        "n_cycles": 4, "seed": 7, "n_realizations": 1}}})"),
                    config_error);
    // invalid counts
    CHECK_THROWS_AS(parse_experiments(R"({"experiments": {"x": {
        "noise": {"sigma": 0.02, "tau_n": 128.0}, "mode": "qec",
        "n_cycles": 0, "seed": 7, "n_realizations": 1}}})"),
                    config_error);
    CHECK_THROWS_AS(parse_experiments(R"({"experiments": {"x": {
        "noise": {"sigma": 0.02, "tau_n": 128.0}, "mode": "qec",
        "n_cycles": 4, "seed": 7, "n_realizations": 1,
        "steps_per_tau_p": 64}}})"),
                    config_error);
}

TEST_CASE("missing file reports a config error") {
    CHECK_THROWS_AS(load_experiments("/nonexistent/starq.json"), config_error);
}
