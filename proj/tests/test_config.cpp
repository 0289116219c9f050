#include <catch2/catch_amalgamated.hpp>

#include "smoothcut/config.hpp"

using namespace smoothcut;
using Catch::Approx;

namespace {
const char* kSample = R"(
# warmup experiment
learner.kind = john_linear
learner.dim = 3
adversary.kind = eps_ball
adversary.epsilon = 0.1
adversary.center = boundary
oracle.kind = linear
run.horizon = 10000
run.delta = 0.05
run.seed = 42
run.trials = 20
)";
}

TEST_CASE("parse and defaults") {
    ConfigFile cf = ConfigFile::parse_string(kSample);
    ExperimentConfig cfg = cf.to_experiment_config();
    CHECK(cfg.learner_kind == "john_linear");
    CHECK(cfg.dim == 3);
    CHECK(cfg.epsilon == Approx(0.1));
    CHECK(cfg.horizon == 10000);
    CHECK(cfg.trials == 20);
    CHECK(cfg.master_seed == 42);
    // untouched keys keep their defaults
    CHECK(cfg.k_classes == 2);
    CHECK(cfg.delta == Approx(0.05));
    CHECK(cfg.prune_factor == 8);
}

TEST_CASE("unknown keys are hard errors") {
    CHECK_THROWS_AS(ConfigFile::parse_string("adversary.epsilom = 0.1").to_experiment_config(),
                    ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_string("learner.kin = john_linear").to_experiment_config(),
                    ConfigError);
}

TEST_CASE("malformed values are rejected") {
    CHECK_THROWS_AS(ConfigFile::parse_string("run.horizon = soon").to_experiment_config(),
                    ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_string("learner.lift_affine = yes").to_experiment_config(),
                    ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_string("run.delta = 1.5").to_experiment_config(), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_string("no equals sign here"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_string("run.seed = 1\nrun.seed = 2"), ConfigError);
}

TEST_CASE("lists parse") {
    ConfigFile cf = ConfigFile::parse_string("sweep.horizons = 100, 1000, 10000\n"
                                             "corruption.flips = 5, 17\n"
                                             "sweep.sigmas = 0.1,0.01");
    ExperimentConfig cfg = cf.to_experiment_config();
    CHECK(cfg.sweep_horizons == std::vector<std::int64_t>{100, 1000, 10000});
    CHECK(cfg.corruption_flips == std::vector<std::int64_t>{5, 17});
    REQUIRE(cfg.sweep_sigmas.size() == 2);
    CHECK(cfg.sweep_sigmas[1] == Approx(0.01));
}

TEST_CASE("config echo round-trips semantically") {
    ConfigFile cf = ConfigFile::parse_string(kSample);
    nlohmann::json echo = cf.echo();
    // re-serialize the echoed tree to key=value lines and reparse
    std::string text;
    std::function<void(const nlohmann::json&, const std::string&)> flatten =
        [&](const nlohmann::json& node, const std::string& prefix) {
            for (auto it = node.begin(); it != node.end(); ++it) {
                std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
                if (it->is_object()) flatten(*it, key);
                else text += key + " = " + it->get<std::string>() + "\n";
            }
        };
    flatten(echo, "");
    ExperimentConfig a = cf.to_experiment_config();
    ExperimentConfig b = ConfigFile::parse_string(text).to_experiment_config();
    CHECK(a.learner_kind == b.learner_kind);
    CHECK(a.dim == b.dim);
    CHECK(a.epsilon == b.epsilon);
    CHECK(a.horizon == b.horizon);
    CHECK(a.master_seed == b.master_seed);
    CHECK(a.trials == b.trials);
    CHECK(a.delta == b.delta);
}

TEST_CASE("comments and blank lines are ignored") {
    ConfigFile cf = ConfigFile::parse_string("\n# full line comment\nrun.horizon = 5 # trailing\n\n");
    CHECK(cf.to_experiment_config().horizon == 5);
}
