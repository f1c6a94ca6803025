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

#include "fairgame/experiments.hpp"

#include <cmath>
#include <map>

#include "fairgame/manifest.hpp"
#include "fairgame/svg.hpp"
#include "fairgame/util.hpp"

namespace fairgame::harness {

namespace {

constexpr std::uint64_t kSourceStream = 0x736f7572ULL;   // per-player source seeds
constexpr std::uint64_t kJobStream = 0x6a6f6273ULL;      // per-(m, trial) job seeds
constexpr std::uint64_t kGameStream = 0x67616d65ULL;     // per-game box-KL seeds

infer::Prior make_prior(const PriorSpec& spec, int k) {
    if (spec.normal) {
        if (spec.mean.size() != k) {
            throw ConfigError("prior mean dimension " + std::to_string(spec.mean.size()) +
                              " does not match player parameter dimension " + std::to_string(k));
        }
        return gauss::Gaussian(spec.mean, spec.covariance);
    }
    if (spec.lower.size() != k) {
        throw ConfigError("prior box dimension " + std::to_string(spec.lower.size()) +
                          " does not match player parameter dimension " + std::to_string(k));
    }
    return gauss::BoxUniform(spec.lower, spec.upper);
}

models::PlayerModel make_synthetic_model(const PlayerSpec& spec) {
    switch (spec.kind) {
        case PlayerKind::kLinear:
            return models::LinearGaussianModel(spec.k, spec.noise_sd, spec.noise_known);
        case PlayerKind::kDirect:
            return models::DirectObservationModel::isotropic(spec.k, spec.noise_var);
        case PlayerKind::kTwoMode:
            return models::TwoModeLatentModel(spec.latent_dim, spec.mode0_prob, spec.noise_sd);
        default:
            throw std::logic_error("make_synthetic_model: not a synthetic player kind");
    }
}

bool is_synthetic_kind(PlayerKind kind) {
    return kind == PlayerKind::kLinear || kind == PlayerKind::kDirect ||
           kind == PlayerKind::kTwoMode;
}

/// Loads tables, fixes player parameter dimensions, and builds sources.
/// Table files consumed along the way are collected for the manifest.
class PlayerResolver {
  public:
    explicit PlayerResolver(const ExperimentConfig& config) : config_(config) {
        for (const PlayerSpec& spec : config.players) {
            if (spec.table) {
                tables_.push_back(load_table(*spec.table));
                dims_.push_back(tables_.back().dim());
            } else {
                tables_.emplace_back();
                dims_.push_back(spec.kind == PlayerKind::kTwoMode ? 2 * spec.latent_dim : spec.k);
            }
        }
        k_ = dims_.front();
        for (std::size_t i = 1; i < dims_.size(); ++i) {
            if (dims_[i] != k_) {
                throw ConfigError("players[" + std::to_string(i) + "] parameter dimension " +
                                  std::to_string(dims_[i]) + " differs from players[0]'s " +
                                  std::to_string(k_));
            }
        }
        const bool any_synthetic =
            std::any_of(config.players.begin(), config.players.end(),
                        [](const PlayerSpec& s) { return is_synthetic_kind(s.kind); });
        if (any_synthetic) {
            if (!config.theta_star) {
                throw ConfigError("theta_star is required when model-backed players are present");
            }
            if (config.theta_star->size() != k_) {
                throw ConfigError("theta_star dimension " +
                                  std::to_string(config.theta_star->size()) +
                                  " does not match player parameter dimension " +
                                  std::to_string(k_));
            }
        }
    }

    int param_dim() const { return k_; }
    const std::map<std::string, std::string>& input_hashes() const { return input_hashes_; }

    std::unique_ptr<sources::DataSource> make_source(std::size_t i, std::uint64_t seed) const {
        const PlayerSpec& spec = config_.players[i];
        switch (spec.kind) {
            case PlayerKind::kLinear:
            case PlayerKind::kDirect:
            case PlayerKind::kTwoMode:
                return std::make_unique<sources::SyntheticSource>(make_synthetic_model(spec),
                                                                  *config_.theta_star, seed);
            case PlayerKind::kBundle:
                return std::make_unique<BundleSource>(tables_[i], spec.subset_size, spec.sampling,
                                                      seed);
            case PlayerKind::kNoisyTable:
                return std::make_unique<NoisyObserverSource>(tables_[i], spec.ratio,
                                                             spec.nan_fraction, spec.noise_sd,
                                                             seed);
            case PlayerKind::kLinearRows:
                return std::make_unique<LinearRowsSource>(tables_[i], spec.noise_sd);
        }
        throw std::logic_error("make_source: unreachable");
    }

  private:
    FeatureTable load_table(const TableSpec& spec) {
        if (spec.synthetic()) {
            return synthetic_feature_table(spec.rows, spec.beta, spec.noise_sd, spec.seed);
        }
        input_hashes_[spec.csv_path] = git_blob_sha1(read_text_file(spec.csv_path));
        return load_feature_csv(spec.csv_path);
    }

    const ExperimentConfig& config_;
    std::vector<FeatureTable> tables_;
    std::vector<int> dims_;
    std::map<std::string, std::string> input_hashes_;
    int k_ = 0;
};

/// Plug-in noise for unknown-noise players outside the fair-share loop:
/// residual MLE against the player's own least-squares fit.
void assign_plug_in_sigmas(std::vector<infer::PlayerData>& players) {
    for (infer::PlayerData& p : players) {
        if (const auto* linear = std::get_if<models::LinearGaussianModel>(&p.model)) {
            if (!linear->noise_known()) {
                const Eigen::VectorXd own = infer::joint_mle({&p, 1});
                p.sigma_hat = models::estimate_noise_sd(*linear, p.data, own).sigma_hat;
            }
        }
    }
}

Manifest base_manifest(const ExperimentConfig& config, const PlayerResolver& resolver) {
    Manifest m;
    m.command = config.experiment;
    m.config_path = config.config_path;
    m.config_sha1 = git_blob_sha1(config.config_bytes);
    m.seed = config.seed;
    m.input_sha1 = resolver.input_hashes();
    return m;
}

std::string pair_label(int i, int j) {
    return std::to_string(i) + "-" + std::to_string(j);
}

}  // namespace

SyntheticResult run_synthetic_convergence(const ExperimentConfig& config,
                                          const std::filesystem::path& out_dir) {
    for (std::size_t i = 0; i < config.players.size(); ++i) {
        if (!is_synthetic_kind(config.players[i].kind)) {
            throw ConfigError("players[" + std::to_string(i) +
                              "]: the convergence experiment samples from models at theta_star; "
                              "table-backed players are not supported here");
        }
    }
    PlayerResolver resolver(config);
    const int n = static_cast<int>(config.players.size());
    const int k = resolver.param_dim();
    const infer::Prior prior = make_prior(config.prior, k);

    std::vector<models::PlayerModel> player_models;
    for (const PlayerSpec& spec : config.players) {
        player_models.push_back(make_synthetic_model(spec));
    }

    // Limiting game from analytic Fishers: the dashed lines.
    std::vector<fisher::FisherMatrix> fishers;
    for (const auto& m : player_models) fishers.push_back(fisher::analytic_fisher(m));
    const game::Attribution limit_att = game::shapley_exact(game::limiting_game(fishers));

    SyntheticResult result;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            result.limits.push_back({i, j, limit_att.values[i] - limit_att.values[j]});
        }
    }

    const std::size_t jobs = config.m_grid.size() * static_cast<std::size_t>(config.trials);
    std::vector<std::vector<double>> job_deltas(jobs);
    parallel_for(jobs, [&](std::size_t job) {
        const std::size_t m_index = job / static_cast<std::size_t>(config.trials);
        const int trial = static_cast<int>(job % static_cast<std::size_t>(config.trials));
        const std::int64_t m = config.m_grid[m_index];
        const std::uint64_t job_seed = derive_seed(config.seed, kJobStream, job);

        std::vector<infer::PlayerData> players;
        players.reserve(static_cast<std::size_t>(n));
        for (int p = 0; p < n; ++p) {
            models::DataSet data =
                models::sample(player_models[static_cast<std::size_t>(p)], *config.theta_star, m,
                               derive_seed(job_seed, static_cast<std::uint64_t>(p)));
            data.player = p;
            players.push_back(infer::PlayerData{player_models[static_cast<std::size_t>(p)],
                                                std::move(data), std::nullopt});
        }
        assign_plug_in_sigmas(players);

        infer::GameOptions opts;
        opts.box_samples = config.box_samples;
        opts.seed = derive_seed(job_seed, kGameStream);
        const infer::BuiltGame built = infer::build_game(players, prior, opts);
        const game::Attribution att = game::shapley_exact(built.values);

        std::vector<double>& deltas = job_deltas[job];
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                deltas.push_back(att.values[i] - att.values[j]);
            }
        }
        (void)trial;
    });

    for (std::size_t job = 0; job < jobs; ++job) {
        const std::size_t m_index = job / static_cast<std::size_t>(config.trials);
        const int trial = static_cast<int>(job % static_cast<std::size_t>(config.trials));
        std::size_t pair = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j, ++pair) {
                result.rows.push_back(
                    {config.m_grid[m_index], trial, i, j, job_deltas[job][pair]});
            }
        }
    }

    // Scatter per pair on a log2(m) axis with the limiting value dashed.
    std::vector<SvgSeries> series;
    const double x_lo = std::log2(static_cast<double>(config.m_grid.front()));
    const double x_hi = std::log2(static_cast<double>(config.m_grid.back()));
    for (const LimitRow& limit : result.limits) {
        SvgSeries scatter;
        scatter.label = "pair " + pair_label(limit.i, limit.j);
        scatter.scatter = true;
        for (const DifferenceRow& row : result.rows) {
            if (row.i == limit.i && row.j == limit.j) {
                scatter.xs.push_back(std::log2(static_cast<double>(row.m)));
                scatter.ys.push_back(row.delta_hat);
            }
        }
        series.push_back(std::move(scatter));
        SvgSeries dashed;
        dashed.label = "limit " + pair_label(limit.i, limit.j);
        dashed.dashed = true;
        dashed.xs = {x_lo, x_hi};
        dashed.ys = {limit.delta_limit, limit.delta_limit};
        series.push_back(std::move(dashed));
    }

    write_text_file(out_dir / "differences.csv", differences_to_csv(result.rows));
    write_text_file(out_dir / "limits.csv", limits_to_csv(result.limits));
    write_text_file(out_dir / "convergence.svg",
                    render_chart_svg("Shapley differences vs limiting game", "log2 m",
                                     "difference", series));
    Manifest manifest = base_manifest(config, resolver);
    manifest.outputs = {"differences.csv", "limits.csv", "convergence.svg"};
    write_manifest(out_dir, manifest);
    return result;
}

FairshareResult run_fairshare_experiment(const ExperimentConfig& config,
                                         const std::filesystem::path& out_dir) {
    if (!config.fairshare) throw ConfigError("fairshare block missing");
    PlayerResolver resolver(config);
    const int n = static_cast<int>(config.players.size());
    const int k = resolver.param_dim();

    std::vector<std::unique_ptr<sources::DataSource>> data_sources;
    for (int i = 0; i < n; ++i) {
        data_sources.push_back(resolver.make_source(
            static_cast<std::size_t>(i),
            derive_seed(config.seed, kSourceStream, static_cast<std::uint64_t>(i))));
    }

    const FairShareSettings& s = *config.fairshare;
    fairshare::FairShareConfig run_config{.player_ids = {},
                                          .prior = make_prior(config.prior, k),
                                          .initial_counts = s.initial_counts,
                                          .r_base = s.r_base,
                                          .min_rate = s.min_rate,
                                          .max_rate = s.max_rate,
                                          .iterations = s.iterations,
                                          .burn_in = s.burn_in,
                                          .delta_threshold = s.delta_threshold,
                                          .consecutive_window = s.consecutive_window,
                                          .seed = config.seed,
                                          .box_samples = config.box_samples,
                                          .fisher_override = std::nullopt};
    for (const PlayerSpec& spec : config.players) run_config.player_ids.push_back(spec.name);

    FairshareResult result;
    result.records = fairshare::run(run_config, data_sources);

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            std::vector<double> series;
            for (const auto& rec : result.records) {
                series.push_back(rec.deltas[static_cast<std::size_t>(
                    fairshare::pair_index(n, i, j))]);
            }
            SummaryRow row;
            row.i = i;
            row.j = j;
            row.stats = fairshare::iter_metric(series, s.delta_threshold, s.consecutive_window,
                                               s.burn_in);
            result.summary.push_back(row);
        }
    }

    std::vector<SvgSeries> shapley_series(static_cast<std::size_t>(n));
    std::vector<SvgSeries> count_series(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) {
        shapley_series[static_cast<std::size_t>(p)].label = run_config.player_ids[p];
        count_series[static_cast<std::size_t>(p)].label = run_config.player_ids[p];
    }
    for (const auto& rec : result.records) {
        for (int p = 0; p < n; ++p) {
            shapley_series[static_cast<std::size_t>(p)].xs.push_back(rec.iteration);
            shapley_series[static_cast<std::size_t>(p)].ys.push_back(
                rec.shapley[static_cast<std::size_t>(p)]);
            count_series[static_cast<std::size_t>(p)].xs.push_back(rec.iteration);
            count_series[static_cast<std::size_t>(p)].ys.push_back(
                static_cast<double>(rec.counts[static_cast<std::size_t>(p)]));
        }
    }

    write_text_file(out_dir / "run_records.csv", run_records_to_csv(result.records, n));
    write_text_file(out_dir / "summary.csv", summary_to_csv(result.summary));
    write_text_file(out_dir / "shapley.svg",
                    render_chart_svg("Shapley values", "iteration", "value", shapley_series));
    write_text_file(out_dir / "counts.svg",
                    render_chart_svg("Cumulative counts", "iteration", "data points",
                                     count_series));
    Manifest manifest = base_manifest(config, resolver);
    manifest.outputs = {"run_records.csv", "summary.csv", "shapley.svg", "counts.svg"};
    write_manifest(out_dir, manifest);
    return result;
}

ValuateResult run_valuate(const ExperimentConfig& config,
                          const std::filesystem::path& out_dir) {
    PlayerResolver resolver(config);
    const int n = static_cast<int>(config.players.size());
    const int k = resolver.param_dim();
    const infer::Prior prior = make_prior(config.prior, k);

    std::vector<infer::PlayerData> players;
    players.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto source = resolver.make_source(
            static_cast<std::size_t>(i),
            derive_seed(config.seed, kSourceStream, static_cast<std::uint64_t>(i)));
        models::DataSet data;
        data.player = i;
        source->draw(config.counts[static_cast<std::size_t>(i)], data);
        players.push_back(infer::PlayerData{source->model(), std::move(data), std::nullopt});
    }
    assign_plug_in_sigmas(players);

    infer::GameOptions opts;
    opts.box_samples = config.box_samples;
    opts.seed = derive_seed(config.seed, kGameStream);
    ValuateResult result{infer::build_game(players, prior, opts), {}, {}};
    result.attribution = config.concept_tag == game::SolutionConcept::kShapley
                             ? game::shapley_exact(result.built.values)
                             : game::banzhaf(result.built.values);
    result.attribution_noise =
        game::propagated_attribution_errors(n, result.built.std_errors, config.concept_tag);

    std::string game_csv = "mask,value,std_error\n";
    for (game::Coalition s = 0; s < result.built.values.coalitions(); ++s) {
        game_csv += std::to_string(s) + "," + format_double(result.built.values.value(s)) + "," +
                    format_double(result.built.std_errors[s]) + "\n";
    }
    std::string att_csv = "player,name,phi,std_error\n";
    for (int i = 0; i < n; ++i) {
        att_csv += std::to_string(i) + "," + config.players[static_cast<std::size_t>(i)].name +
                   "," + format_double(result.attribution.values[static_cast<std::size_t>(i)]) +
                   "," + format_double(result.attribution_noise[static_cast<std::size_t>(i)]) +
                   "\n";
    }
    write_text_file(out_dir / "game_values.csv", game_csv);
    write_text_file(out_dir / "attributions.csv", att_csv);
    Manifest manifest = base_manifest(config, resolver);
    manifest.outputs = {"game_values.csv", "attributions.csv"};
    write_manifest(out_dir, manifest);
    return result;
}

void run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    if (config.experiment == "synthetic-convergence") {
        run_synthetic_convergence(config, out_dir);
    } else if (config.experiment == "fairshare") {
        run_fairshare_experiment(config, out_dir);
    } else {
        run_valuate(config, out_dir);
    }
}

}  // namespace fairgame::harness
