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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fairgame/game.hpp"
#include "fairgame/inference.hpp"
#include "fairgame/sources.hpp"

namespace fairgame::fairshare {

/// Knobs of the online fair-sharing loop. Initial counts must be at least
/// k + 4 so the first sampled Fisher matrices are invertible.
struct FairShareConfig {
    std::vector<std::string> player_ids;  // optional labels; defaults P0..P{n-1}
    infer::Prior prior;
    std::vector<std::int64_t> initial_counts;
    std::int64_t r_base = 10;
    std::int64_t min_rate = 1;
    std::int64_t max_rate = 1000;
    int iterations = 1;
    int burn_in = 5;
    double delta_threshold = 0.1;
    int consecutive_window = 5;
    std::uint64_t seed = 0;
    std::int64_t box_samples = 200000;  // per-coalition draws for box priors

    /// When set, rate_step consumes these instead of sampled Fishers
    /// (diagnostic injection; removes estimation noise from the rate rule).
    std::optional<std::vector<fisher::FisherMatrix>> fisher_override;
};

/// One iteration's snapshot. Counts are cumulative after the iteration's
/// collection; Shapley values come from the game over that cumulative data;
/// log-determinants come from the Fisher estimates that set the rates.
struct RunRecord {
    int iteration = 0;
    std::vector<std::int64_t> counts;
    std::vector<double> shapley;
    std::vector<double> deltas;  // pairs (i, j), i < j, row-major; NaN = undefined
    std::vector<double> logdet_fisher;
    Eigen::VectorXd theta_bar;
};

struct DeltaStats {
    double lowest = 0.0;
    double average = 0.0;
    double stdev = 0.0;               // sample stdev; 0 with fewer than 2 values
    std::optional<int> iter;          // 1-based post-burn-in window start; empty = never
};

/// Relative Shapley gap |(phi_i - phi_j) / (phi_i + phi_j)|; NaN marks the
/// undefined zero-denominator case, which downstream stats skip.
double delta_stat(const game::Attribution& attribution, int i, int j);

/// Per-player collection counts for the next iteration. Two players use the
/// exact cumulative-proportion rule, more use the per-step heuristic
/// r_i = r_base * (|I_best| / |I_i|)^(1/k); both round half-up and clamp to
/// [min_rate, max_rate]. Ties for the best determinant go to the lowest
/// player index.
std::vector<std::int64_t> rate_step(const std::vector<std::int64_t>& counts,
                                    const std::vector<fisher::FisherMatrix>& fishers,
                                    const FairShareConfig& config);

/// Stats over the post-burn-in delta series plus the first 1-based index at
/// which `window` consecutive values stay below `threshold`. NaN entries are
/// excluded from the stats and break windows.
DeltaStats iter_metric(const std::vector<double>& delta_series, double threshold, int window,
                       int burn_in);

/// Drives the online loop: estimate theta_bar, refresh noise plug-ins,
/// estimate Fishers, set rates, collect, then value the full game exactly.
/// Deterministic per config seed.
std::vector<RunRecord> run(const FairShareConfig& config,
                           std::vector<std::unique_ptr<sources::DataSource>>& data_sources);

/// Number of (i, j), i < j pairs and the flat index of a pair in RunRecord
/// delta storage.
int pair_count(int n);
int pair_index(int n, int i, int j);

}  // namespace fairgame::fairshare
