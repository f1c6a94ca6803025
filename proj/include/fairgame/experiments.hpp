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

#include <filesystem>

#include "fairgame/config.hpp"
#include "fairgame/csvio.hpp"
#include "fairgame/inference.hpp"

namespace fairgame::harness {

struct SyntheticResult {
    std::vector<DifferenceRow> rows;
    std::vector<LimitRow> limits;
};

/// The convergence experiment: for each grid size and trial, sample every
/// player's data, build the posterior-prior KL game, and record all pairwise
/// Shapley differences next to the limiting-game values from analytic
/// Fishers. Trials run as independent seeded jobs; outputs are byte-stable
/// under any worker count. Writes differences.csv, limits.csv,
/// convergence.svg, and manifest.json under out_dir.
SyntheticResult run_synthetic_convergence(const ExperimentConfig& config,
                                          const std::filesystem::path& out_dir);

struct FairshareResult {
    std::vector<fairshare::RunRecord> records;
    std::vector<SummaryRow> summary;
};

/// Drives the online fair-sharing loop and emits run_records.csv,
/// summary.csv (delta statistics per pair with the `*` sentinel),
/// shapley.svg, counts.svg, and manifest.json under out_dir.
FairshareResult run_fairshare_experiment(const ExperimentConfig& config,
                                         const std::filesystem::path& out_dir);

struct ValuateResult {
    infer::BuiltGame built;
    game::Attribution attribution;
    std::vector<double> attribution_noise;  // from per-coalition MC errors
};

/// One-shot valuation: draw the configured counts, build the game, and
/// attribute it. Writes game_values.csv, attributions.csv, and
/// manifest.json under out_dir.
ValuateResult run_valuate(const ExperimentConfig& config,
                          const std::filesystem::path& out_dir);

/// Dispatches on config.experiment; the CLI entry point.
void run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace fairgame::harness
