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

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fairgame/feature_table.hpp"
#include "fairgame/game.hpp"

namespace fairgame::harness {

/// Schema or validation failure; the message carries the offending path.
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Feature table reference: an on-disk CSV or a seeded synthetic regression
/// table generated in process.
struct TableSpec {
    std::string csv_path;  // empty means synthetic
    std::int64_t rows = 0;
    Eigen::VectorXd beta;
    double noise_sd = 0.0;
    std::uint64_t seed = 0;

    bool synthetic() const { return csv_path.empty(); }
};

enum class PlayerKind { kLinear, kDirect, kTwoMode, kBundle, kNoisyTable, kLinearRows };

struct PlayerSpec {
    std::string name;
    PlayerKind kind = PlayerKind::kLinear;
    // linear / direct / two_mode
    int k = 0;
    double noise_sd = 0.0;
    bool noise_known = true;
    double noise_var = 0.0;
    int latent_dim = 0;
    double mode0_prob = 0.5;
    // table-backed kinds
    std::optional<TableSpec> table;
    std::int64_t subset_size = 0;
    RowSampling sampling = RowSampling::kIid;
    double ratio = 0.0;
    double nan_fraction = 0.0;
};

struct PriorSpec {
    bool normal = true;
    Eigen::VectorXd mean;       // normal
    Eigen::MatrixXd covariance; // normal
    Eigen::VectorXd lower;      // box
    Eigen::VectorXd upper;      // box
};

struct FairShareSettings {
    std::vector<std::int64_t> initial_counts;  // expanded from a scalar when given as one
    std::int64_t r_base = 10;
    std::int64_t min_rate = 1;
    std::int64_t max_rate = 1000;
    int iterations = 40;
    int burn_in = 5;
    double delta_threshold = 0.1;
    int consecutive_window = 5;
};

struct ExperimentConfig {
    std::string experiment;  // synthetic-convergence | fairshare | valuate
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    std::vector<PlayerSpec> players;
    PriorSpec prior;
    std::optional<Eigen::VectorXd> theta_star;
    std::int64_t box_samples = 200000;

    // synthetic-convergence
    std::vector<std::int64_t> m_grid;
    int trials = 10;

    // fairshare
    std::optional<FairShareSettings> fairshare;

    // valuate
    std::vector<std::int64_t> counts;  // expanded from scalar "m"
    game::SolutionConcept concept_tag = game::SolutionConcept::kShapley;

    // provenance, for the manifest
    std::string config_path;
    std::string config_bytes;
};

/// Parses and validates a config file. Unknown keys anywhere fail with
/// their path; every experiment kind gets its required blocks checked.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Same, from raw JSON bytes (config_path recorded as given).
ExperimentConfig parse_config(const std::string& json_bytes, const std::string& config_path);

}  // namespace fairgame::harness
