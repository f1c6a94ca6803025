// Copyright 2026 The Fairgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "fairgame/experiments.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> trials;
};

void add_common_flags(CLI::App* sub, CommonFlags& flags) {
    sub->add_option("--config", flags.config_path, "experiment config JSON")->required();
    sub->add_option("--seed", flags.seed, "override the config seed");
    sub->add_option("--out", flags.out_dir, "override the output directory");
    sub->add_option("--trials", flags.trials, "override the trial count (synthetic only)");
}

int run(const std::string& expected_kind, const CommonFlags& flags) {
    fairgame::harness::ExperimentConfig config;
    try {
        config = fairgame::harness::load_config(flags.config_path);
        if (config.experiment != expected_kind) {
            throw fairgame::harness::ConfigError("config declares experiment '" +
                                                 config.experiment + "' but the '" +
                                                 expected_kind + "' subcommand was invoked");
        }
        if (flags.seed) config.seed = *flags.seed;
        if (flags.out_dir) config.output_dir = *flags.out_dir;
        if (flags.trials) {
            if (config.experiment != "synthetic-convergence") {
                throw fairgame::harness::ConfigError("--trials only applies to synthetic runs");
            }
            if (*flags.trials < 1) {
                throw fairgame::harness::ConfigError("--trials must be >= 1");
            }
            config.trials = *flags.trials;
        }
    } catch (const fairgame::harness::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        fairgame::harness::run_experiment(config, config.output_dir);
    } catch (const fairgame::harness::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericalError;
    }
    std::cout << "wrote results to " << config.output_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian learning games: valuation, convergence, and fair data sharing"};
    app.require_subcommand(1);

    CommonFlags synthetic_flags;
    CommonFlags fairshare_flags;
    CommonFlags valuate_flags;
    CLI::App* synthetic =
        app.add_subcommand("synthetic", "reproduce the synthetic convergence experiment");
    CLI::App* fairshare = app.add_subcommand("fairshare", "run the online fair-sharing loop");
    CLI::App* valuate = app.add_subcommand("valuate", "one-shot game valuation and attribution");
    add_common_flags(synthetic, synthetic_flags);
    add_common_flags(fairshare, fairshare_flags);
    add_common_flags(valuate, valuate_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    if (synthetic->parsed()) return run("synthetic-convergence", synthetic_flags);
    if (fairshare->parsed()) return run("fairshare", fairshare_flags);
    return run("valuate", valuate_flags);
}
