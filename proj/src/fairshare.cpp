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

#include "fairgame/fairshare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fairgame/util.hpp"

namespace fairgame::fairshare {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t clamp_rate(double raw, const FairShareConfig& config) {
    const double rounded = std::floor(raw + 0.5);  // round half-up, reproducibly
    const double clamped =
        std::min(static_cast<double>(config.max_rate),
                 std::max(static_cast<double>(config.min_rate), rounded));
    return static_cast<std::int64_t>(clamped);
}

void validate_config(const FairShareConfig& config, int n, int k) {
    if (config.iterations < 1) {
        throw std::invalid_argument("fairshare: iterations must be >= 1");
    }
    if (!(config.min_rate >= 1 && config.min_rate <= config.r_base &&
          config.r_base <= config.max_rate)) {
        throw std::invalid_argument(
            "fairshare: rates must satisfy 1 <= min_rate <= r_base <= max_rate");
    }
    if (config.burn_in < 0 || config.consecutive_window < 1 || !(config.delta_threshold > 0.0)) {
        throw std::invalid_argument("fairshare: bad burn-in, window, or threshold");
    }
    if (static_cast<int>(config.initial_counts.size()) != n) {
        throw std::invalid_argument("fairshare: one initial count per player required");
    }
    for (std::int64_t m0 : config.initial_counts) {
        if (m0 < k + 4) {
            throw std::invalid_argument("fairshare: initial counts must be >= k + 4 = " +
                                        std::to_string(k + 4) +
                                        " so Fisher estimates start invertible");
        }
    }
    if (config.fisher_override && static_cast<int>(config.fisher_override->size()) != n) {
        throw std::invalid_argument("fairshare: fisher_override must have one matrix per player");
    }
}

}  // namespace

int pair_count(int n) { return n * (n - 1) / 2; }

int pair_index(int n, int i, int j) {
    if (i < 0 || j <= i || j >= n) throw std::invalid_argument("pair_index: bad pair");
    return i * n - i * (i + 3) / 2 + j - 1;
}

double delta_stat(const game::Attribution& attribution, int i, int j) {
    const int n = static_cast<int>(attribution.values.size());
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
        throw std::invalid_argument("delta_stat: invalid player pair");
    }
    const double num = attribution.values[i] - attribution.values[j];
    const double den = attribution.values[i] + attribution.values[j];
    if (den == 0.0) return kNaN;  // undefined sentinel, excluded from stats
    return std::abs(num / den);
}

std::vector<std::int64_t> rate_step(const std::vector<std::int64_t>& counts,
                                    const std::vector<fisher::FisherMatrix>& fishers,
                                    const FairShareConfig& config) {
    const int n = static_cast<int>(counts.size());
    if (n < 1 || fishers.size() != counts.size()) {
        throw std::invalid_argument("rate_step: counts and fishers must align");
    }
    const int k = fishers.front().dim();
    std::vector<double> log_dets(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        log_dets[i] = fisher::log_det_fisher(fishers[i]);
    }
    int best = 0;
    for (int i = 1; i < n; ++i) {
        if (log_dets[i] > log_dets[best]) best = i;  // ties keep the lowest index
    }

    std::vector<std::int64_t> rates(static_cast<std::size_t>(n));
    rates[best] = clamp_rate(static_cast<double>(config.r_base), config);

    if (n == 2) {
        // Exact cumulative-proportion rule: after collection the counts hit
        // m_best + r_base : m_other + r_other = 1 : (|I_best| / |I_other|)^(1/k),
        // falling back to the clamps when the solution violates them.
        const int other = 1 - best;
        const double ratio = std::exp((log_dets[best] - log_dets[other]) / k);
        const double target = ratio * static_cast<double>(counts[best] + rates[best]);
        rates[other] = clamp_rate(target - static_cast<double>(counts[other]), config);
        return rates;
    }

    // Per-step heuristic for n != 2: r_i = r_base * (|I_best| / |I_i|)^(1/k).
    for (int i = 0; i < n; ++i) {
        if (i == best) continue;
        const double ratio = std::exp((log_dets[best] - log_dets[i]) / k);
        rates[i] = clamp_rate(static_cast<double>(config.r_base) * ratio, config);
    }
    return rates;
}

DeltaStats iter_metric(const std::vector<double>& delta_series, double threshold, int window,
                       int burn_in) {
    if (burn_in < 0 || window < 1 || !(threshold > 0.0)) {
        throw std::invalid_argument("iter_metric: bad threshold, window, or burn-in");
    }
    if (static_cast<int>(delta_series.size()) < burn_in + window) {
        throw std::invalid_argument("iter_metric: series of length " +
                                    std::to_string(delta_series.size()) +
                                    " is shorter than burn_in + window = " +
                                    std::to_string(burn_in + window));
    }
    const std::vector<double> post(delta_series.begin() + burn_in, delta_series.end());

    DeltaStats stats;
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t valid = 0;
    double lowest = std::numeric_limits<double>::infinity();
    for (double d : post) {
        if (std::isnan(d)) continue;  // undefined deltas never enter the stats
        lowest = std::min(lowest, d);
        sum += d;
        sum_sq += d * d;
        ++valid;
    }
    if (valid == 0) {
        stats.lowest = stats.average = stats.stdev = kNaN;
    } else {
        stats.lowest = lowest;
        stats.average = sum / static_cast<double>(valid);
        stats.stdev = valid < 2
                          ? 0.0
                          : std::sqrt(std::max(0.0, (sum_sq - valid * stats.average *
                                                                   stats.average) /
                                                        static_cast<double>(valid - 1)));
    }

    for (std::size_t t = 0; t + static_cast<std::size_t>(window) <= post.size(); ++t) {
        bool all_below = true;
        for (int w = 0; w < window; ++w) {
            const double d = post[t + static_cast<std::size_t>(w)];
            if (std::isnan(d) || !(d < threshold)) {
                all_below = false;
                break;
            }
        }
        if (all_below) {
            stats.iter = static_cast<int>(t) + 1;  // 1-based post-burn-in indexing
            break;
        }
    }
    return stats;
}

std::vector<RunRecord> run(const FairShareConfig& config,
                           std::vector<std::unique_ptr<sources::DataSource>>& data_sources) {
    const int n = static_cast<int>(data_sources.size());
    if (n < 1 || n > game::CharacteristicFunction::kMaxPlayers) {
        throw std::invalid_argument("fairshare::run: bad player count");
    }
    const int k = models::param_dim(data_sources.front()->model());
    for (const auto& src : data_sources) {
        if (models::param_dim(src->model()) != k) {
            throw std::invalid_argument("fairshare::run: players disagree on parameter dimension");
        }
    }
    if (infer::prior_dim(config.prior) != k) {
        throw std::invalid_argument("fairshare::run: prior dimension does not match the models");
    }
    validate_config(config, n, k);

    std::vector<infer::PlayerData> players;
    players.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        models::DataSet data;
        data.player = i;
        players.push_back(infer::PlayerData{data_sources[static_cast<std::size_t>(i)]->model(),
                                            std::move(data), std::nullopt});
    }

    std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
    auto collect = [&](int player, std::int64_t count, int iteration) {
        try {
            data_sources[static_cast<std::size_t>(player)]->draw(
                count, players[static_cast<std::size_t>(player)].data);
        } catch (const sources::SourceExhausted& e) {
            throw sources::SourceExhausted("fairshare::run: player " + std::to_string(player) +
                                           " exhausted at iteration " + std::to_string(iteration) +
                                           ": " + e.what());
        }
        counts[static_cast<std::size_t>(player)] += count;
    };
    for (int i = 0; i < n; ++i) collect(i, config.initial_counts[static_cast<std::size_t>(i)], -1);

    auto refresh_sigma = [&](infer::PlayerData& p, const Eigen::VectorXd& theta_bar) {
        if (const auto* linear = std::get_if<models::LinearGaussianModel>(&p.model)) {
            if (!linear->noise_known()) {
                p.sigma_hat = models::estimate_noise_sd(*linear, p.data, theta_bar).sigma_hat;
            }
        }
    };
    // Bootstrap plug-in sigmas from each unknown-noise player's own data so
    // the first joint posterior is computable.
    for (auto& p : players) {
        if (const auto* linear = std::get_if<models::LinearGaussianModel>(&p.model)) {
            if (!linear->noise_known()) {
                refresh_sigma(p, infer::joint_mle({&p, 1}));
            }
        }
    }

    auto estimate_theta_bar = [&]() -> Eigen::VectorXd {
        if (const auto* normal = std::get_if<gauss::Gaussian>(&config.prior)) {
            return infer::conjugate_posterior(*normal, players).mean();
        }
        return infer::joint_mle(players);
    };

    std::vector<RunRecord> records;
    records.reserve(static_cast<std::size_t>(config.iterations));
    for (int t = 0; t < config.iterations; ++t) {
        RunRecord rec;
        rec.iteration = t;
        rec.theta_bar = estimate_theta_bar();
        for (auto& p : players) refresh_sigma(p, rec.theta_bar);

        std::vector<fisher::FisherMatrix> fishers;
        fishers.reserve(static_cast<std::size_t>(n));
        rec.logdet_fisher.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            auto& p = players[static_cast<std::size_t>(i)];
            fishers.push_back(config.fisher_override
                                  ? (*config.fisher_override)[static_cast<std::size_t>(i)]
                                  : fisher::sample_fisher(p.model, rec.theta_bar, p.data,
                                                          p.sigma_hat));
            try {
                rec.logdet_fisher[static_cast<std::size_t>(i)] =
                    fisher::log_det_fisher(fishers.back());
            } catch (const std::invalid_argument& e) {
                throw std::runtime_error("fairshare::run: Fisher estimate of player " +
                                         std::to_string(i) + " is singular at iteration " +
                                         std::to_string(t) +
                                         "; raise the initial counts m_i0 (" + e.what() + ")");
            }
        }

        const std::vector<std::int64_t> rates = rate_step(counts, fishers, config);
        for (int i = 0; i < n; ++i) collect(i, rates[static_cast<std::size_t>(i)], t);
        rec.counts = counts;

        infer::GameOptions opts;
        opts.box_samples = config.box_samples;
        opts.seed = derive_seed(config.seed, 0x67616d65ULL, static_cast<std::uint64_t>(t));
        const infer::BuiltGame built = infer::build_game(players, config.prior, opts);
        const game::Attribution att = game::shapley_exact(built.values);
        rec.shapley = att.values;

        rec.deltas.resize(static_cast<std::size_t>(pair_count(n)));
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                rec.deltas[static_cast<std::size_t>(pair_index(n, i, j))] = delta_stat(att, i, j);
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace fairgame::fairshare
