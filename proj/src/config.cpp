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

#include "fairgame/config.hpp"

#include <json.hpp>
#include <set>

#include "fairgame/csvio.hpp"

namespace fairgame::harness {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& path) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) {
            throw ConfigError(path + "/" + key + ": unknown field");
        }
    }
}

const json& require_field(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw ConfigError(path + "/" + key + ": required field missing");
    return j.at(key);
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

std::int64_t get_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
    return j.get<std::int64_t>();
}

std::uint64_t get_seed(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        throw ConfigError(path + ": expected a non-negative integer seed");
    }
    return j.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path + ": expected a boolean");
    return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path + ": expected a string");
    return j.get<std::string>();
}

Eigen::VectorXd get_vector(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path + ": expected a non-empty array");
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = get_number(j[i], path + "[" + std::to_string(i) + "]");
    }
    return v;
}

std::vector<std::int64_t> get_int_vector(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path + ": expected a non-empty array");
    std::vector<std::int64_t> v;
    for (std::size_t i = 0; i < j.size(); ++i) {
        v.push_back(get_integer(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return v;
}

TableSpec parse_table(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown_keys(j, {"csv", "synthetic"}, path);
    TableSpec spec;
    if (j.contains("csv") == j.contains("synthetic")) {
        throw ConfigError(path + ": give exactly one of 'csv' or 'synthetic'");
    }
    if (j.contains("csv")) {
        spec.csv_path = get_string(j.at("csv"), path + "/csv");
        return spec;
    }
    const json& s = j.at("synthetic");
    const std::string spath = path + "/synthetic";
    require_object(s, spath);
    reject_unknown_keys(s, {"rows", "beta", "noise_sd", "seed"}, spath);
    spec.rows = get_integer(require_field(s, "rows", spath), spath + "/rows");
    spec.beta = get_vector(require_field(s, "beta", spath), spath + "/beta");
    spec.noise_sd = get_number(require_field(s, "noise_sd", spath), spath + "/noise_sd");
    spec.seed = get_seed(require_field(s, "seed", spath), spath + "/seed");
    if (spec.rows < 1) throw ConfigError(spath + "/rows: must be >= 1");
    if (!(spec.noise_sd >= 0.0)) throw ConfigError(spath + "/noise_sd: must be >= 0");
    return spec;
}

PlayerSpec parse_player(const json& j, const std::string& path, std::size_t index) {
    require_object(j, path);
    PlayerSpec spec;
    spec.name = "P" + std::to_string(index);
    const std::string kind = get_string(require_field(j, "kind", path), path + "/kind");
    if (kind == "linear") {
        spec.kind = PlayerKind::kLinear;
        reject_unknown_keys(j, {"kind", "name", "k", "noise_sd", "noise_known"}, path);
        spec.k = static_cast<int>(get_integer(require_field(j, "k", path), path + "/k"));
        spec.noise_sd = get_number(require_field(j, "noise_sd", path), path + "/noise_sd");
        spec.noise_known = j.contains("noise_known")
                               ? get_bool(j.at("noise_known"), path + "/noise_known")
                               : true;
        if (spec.k < 1) throw ConfigError(path + "/k: must be >= 1");
        if (!(spec.noise_sd > 0.0)) throw ConfigError(path + "/noise_sd: must be > 0");
    } else if (kind == "direct") {
        spec.kind = PlayerKind::kDirect;
        reject_unknown_keys(j, {"kind", "name", "k", "noise_var"}, path);
        spec.k = static_cast<int>(get_integer(require_field(j, "k", path), path + "/k"));
        spec.noise_var = get_number(require_field(j, "noise_var", path), path + "/noise_var");
        if (spec.k < 1) throw ConfigError(path + "/k: must be >= 1");
        if (!(spec.noise_var > 0.0)) throw ConfigError(path + "/noise_var: must be > 0");
    } else if (kind == "two_mode") {
        spec.kind = PlayerKind::kTwoMode;
        reject_unknown_keys(j, {"kind", "name", "latent_dim", "mode0_prob", "noise_sd"}, path);
        spec.latent_dim = static_cast<int>(
            get_integer(require_field(j, "latent_dim", path), path + "/latent_dim"));
        spec.mode0_prob =
            get_number(require_field(j, "mode0_prob", path), path + "/mode0_prob");
        spec.noise_sd = get_number(require_field(j, "noise_sd", path), path + "/noise_sd");
        if (spec.latent_dim < 1) throw ConfigError(path + "/latent_dim: must be >= 1");
        if (!(spec.mode0_prob > 0.0 && spec.mode0_prob < 1.0)) {
            throw ConfigError(path + "/mode0_prob: must lie in (0, 1)");
        }
        if (!(spec.noise_sd > 0.0)) throw ConfigError(path + "/noise_sd: must be > 0");
    } else if (kind == "bundle") {
        spec.kind = PlayerKind::kBundle;
        reject_unknown_keys(j, {"kind", "name", "table", "subset_size", "sampling"}, path);
        spec.table = parse_table(require_field(j, "table", path), path + "/table");
        spec.subset_size =
            get_integer(require_field(j, "subset_size", path), path + "/subset_size");
        const std::string sampling =
            get_string(require_field(j, "sampling", path), path + "/sampling");
        if (sampling == "iid") {
            spec.sampling = RowSampling::kIid;
        } else if (sampling == "leverage") {
            spec.sampling = RowSampling::kLeverage;
        } else {
            throw ConfigError(path + "/sampling: expected 'iid' or 'leverage'");
        }
        if (spec.subset_size < 1) throw ConfigError(path + "/subset_size: must be >= 1");
    } else if (kind == "noisy_table") {
        spec.kind = PlayerKind::kNoisyTable;
        reject_unknown_keys(j, {"kind", "name", "table", "ratio", "nan_fraction", "noise_sd"},
                            path);
        spec.table = parse_table(require_field(j, "table", path), path + "/table");
        spec.ratio = get_number(require_field(j, "ratio", path), path + "/ratio");
        spec.nan_fraction =
            get_number(require_field(j, "nan_fraction", path), path + "/nan_fraction");
        spec.noise_sd = get_number(require_field(j, "noise_sd", path), path + "/noise_sd");
        if (!(spec.ratio > 0.0 && spec.ratio <= 1.0)) {
            throw ConfigError(path + "/ratio: must lie in (0, 1]");
        }
        if (!(spec.nan_fraction >= 0.0 && spec.nan_fraction < 1.0)) {
            throw ConfigError(path + "/nan_fraction: must lie in [0, 1)");
        }
        if (!(spec.noise_sd > 0.0)) throw ConfigError(path + "/noise_sd: must be > 0");
    } else if (kind == "linear_rows") {
        spec.kind = PlayerKind::kLinearRows;
        reject_unknown_keys(j, {"kind", "name", "table", "noise_sd"}, path);
        spec.table = parse_table(require_field(j, "table", path), path + "/table");
        spec.noise_sd = get_number(require_field(j, "noise_sd", path), path + "/noise_sd");
        if (!(spec.noise_sd > 0.0)) throw ConfigError(path + "/noise_sd: must be > 0");
    } else {
        throw ConfigError(path + "/kind: unknown player kind '" + kind + "'");
    }
    if (j.contains("name")) spec.name = get_string(j.at("name"), path + "/name");
    return spec;
}

PriorSpec parse_prior(const json& j, const std::string& path) {
    require_object(j, path);
    PriorSpec spec;
    const std::string kind = get_string(require_field(j, "kind", path), path + "/kind");
    if (kind == "normal") {
        spec.normal = true;
        reject_unknown_keys(j, {"kind", "mean", "cov", "cov_diag", "cov_scale"}, path);
        spec.mean = get_vector(require_field(j, "mean", path), path + "/mean");
        const int k = static_cast<int>(spec.mean.size());
        const int given = int(j.contains("cov")) + int(j.contains("cov_diag")) +
                          int(j.contains("cov_scale"));
        if (given > 1) {
            throw ConfigError(path + ": give at most one of cov, cov_diag, cov_scale");
        }
        if (j.contains("cov")) {
            const json& c = j.at("cov");
            if (!c.is_array() || static_cast<int>(c.size()) != k) {
                throw ConfigError(path + "/cov: expected a k x k array of rows");
            }
            spec.covariance.resize(k, k);
            for (int r = 0; r < k; ++r) {
                const Eigen::VectorXd row =
                    get_vector(c[static_cast<std::size_t>(r)],
                               path + "/cov[" + std::to_string(r) + "]");
                if (row.size() != k) {
                    throw ConfigError(path + "/cov[" + std::to_string(r) + "]: expected " +
                                      std::to_string(k) + " entries");
                }
                spec.covariance.row(r) = row;
            }
        } else if (j.contains("cov_diag")) {
            const Eigen::VectorXd diag = get_vector(j.at("cov_diag"), path + "/cov_diag");
            if (diag.size() != k) throw ConfigError(path + "/cov_diag: expected k entries");
            spec.covariance = diag.asDiagonal();
        } else {
            const double scale =
                j.contains("cov_scale") ? get_number(j.at("cov_scale"), path + "/cov_scale") : 1.0;
            if (!(scale > 0.0)) throw ConfigError(path + "/cov_scale: must be > 0");
            spec.covariance = scale * Eigen::MatrixXd::Identity(k, k);
        }
    } else if (kind == "box") {
        spec.normal = false;
        reject_unknown_keys(j, {"kind", "lower", "upper"}, path);
        spec.lower = get_vector(require_field(j, "lower", path), path + "/lower");
        spec.upper = get_vector(require_field(j, "upper", path), path + "/upper");
        if (spec.lower.size() != spec.upper.size()) {
            throw ConfigError(path + ": lower and upper must have equal length");
        }
        for (int d = 0; d < spec.lower.size(); ++d) {
            if (!(spec.upper[d] > spec.lower[d])) {
                throw ConfigError(path + ": upper[" + std::to_string(d) +
                                  "] must exceed lower[" + std::to_string(d) + "]");
            }
        }
    } else {
        throw ConfigError(path + "/kind: expected 'normal' or 'box'");
    }
    return spec;
}

FairShareSettings parse_fairshare(const json& j, const std::string& path, int players) {
    require_object(j, path);
    reject_unknown_keys(j,
                        {"initial_counts", "r_base", "min_rate", "max_rate", "iterations",
                         "burn_in", "delta_threshold", "consecutive_window"},
                        path);
    FairShareSettings s;
    const json& counts = require_field(j, "initial_counts", path);
    if (counts.is_array()) {
        s.initial_counts = get_int_vector(counts, path + "/initial_counts");
        if (static_cast<int>(s.initial_counts.size()) != players) {
            throw ConfigError(path + "/initial_counts: expected one entry per player");
        }
    } else {
        s.initial_counts.assign(static_cast<std::size_t>(players),
                                get_integer(counts, path + "/initial_counts"));
    }
    s.r_base = get_integer(require_field(j, "r_base", path), path + "/r_base");
    if (j.contains("min_rate")) s.min_rate = get_integer(j.at("min_rate"), path + "/min_rate");
    if (j.contains("max_rate")) s.max_rate = get_integer(j.at("max_rate"), path + "/max_rate");
    s.iterations = static_cast<int>(
        get_integer(require_field(j, "iterations", path), path + "/iterations"));
    if (j.contains("burn_in")) {
        s.burn_in = static_cast<int>(get_integer(j.at("burn_in"), path + "/burn_in"));
    }
    if (j.contains("delta_threshold")) {
        s.delta_threshold = get_number(j.at("delta_threshold"), path + "/delta_threshold");
    }
    if (j.contains("consecutive_window")) {
        s.consecutive_window = static_cast<int>(
            get_integer(j.at("consecutive_window"), path + "/consecutive_window"));
    }
    if (!(s.min_rate >= 1 && s.min_rate <= s.r_base && s.r_base <= s.max_rate)) {
        throw ConfigError(path + ": need 1 <= min_rate <= r_base <= max_rate");
    }
    if (s.iterations < 1) throw ConfigError(path + "/iterations: must be >= 1");
    if (s.burn_in < 0) throw ConfigError(path + "/burn_in: must be >= 0");
    if (!(s.delta_threshold > 0.0)) throw ConfigError(path + "/delta_threshold: must be > 0");
    if (s.consecutive_window < 1) throw ConfigError(path + "/consecutive_window: must be >= 1");
    return s;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_bytes, const std::string& config_path) {
    json j;
    try {
        j = json::parse(json_bytes);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    require_object(j, "");
    reject_unknown_keys(j,
                        {"experiment", "seed", "output_dir", "players", "prior", "theta_star",
                         "box_samples", "m_grid", "trials", "fairshare", "counts", "m",
                         "concept"},
                        "");

    ExperimentConfig cfg;
    cfg.config_path = config_path;
    cfg.config_bytes = json_bytes;
    cfg.experiment = get_string(require_field(j, "experiment", ""), "/experiment");
    if (cfg.experiment != "synthetic-convergence" && cfg.experiment != "fairshare" &&
        cfg.experiment != "valuate") {
        throw ConfigError(
            "/experiment: expected 'synthetic-convergence', 'fairshare', or 'valuate'");
    }
    cfg.seed = get_seed(require_field(j, "seed", ""), "/seed");
    if (j.contains("output_dir")) cfg.output_dir = get_string(j.at("output_dir"), "/output_dir");

    const json& players = require_field(j, "players", "");
    if (!players.is_array() || players.empty()) {
        throw ConfigError("/players: expected a non-empty array");
    }
    for (std::size_t i = 0; i < players.size(); ++i) {
        cfg.players.push_back(
            parse_player(players[i], "/players[" + std::to_string(i) + "]", i));
    }
    if (cfg.players.size() > game::CharacteristicFunction::kMaxPlayers) {
        throw ConfigError("/players: at most " +
                          std::to_string(game::CharacteristicFunction::kMaxPlayers) +
                          " players supported");
    }

    cfg.prior = parse_prior(require_field(j, "prior", ""), "/prior");
    if (j.contains("theta_star")) {
        cfg.theta_star = get_vector(j.at("theta_star"), "/theta_star");
    }
    if (j.contains("box_samples")) {
        cfg.box_samples = get_integer(j.at("box_samples"), "/box_samples");
        if (cfg.box_samples < 1000) throw ConfigError("/box_samples: must be >= 1000");
    }

    if (cfg.experiment == "synthetic-convergence") {
        cfg.m_grid = j.contains("m_grid")
                         ? get_int_vector(j.at("m_grid"), "/m_grid")
                         : std::vector<std::int64_t>{16, 64, 256, 1024, 4096};
        for (std::int64_t m : cfg.m_grid) {
            if (m < 1) throw ConfigError("/m_grid: entries must be >= 1");
        }
        if (j.contains("trials")) {
            cfg.trials = static_cast<int>(get_integer(j.at("trials"), "/trials"));
            if (cfg.trials < 1) throw ConfigError("/trials: must be >= 1");
        }
        if (j.contains("fairshare") || j.contains("counts") || j.contains("m")) {
            throw ConfigError("synthetic-convergence config has no fairshare/counts/m blocks");
        }
    } else if (cfg.experiment == "fairshare") {
        cfg.fairshare = parse_fairshare(require_field(j, "fairshare", ""), "/fairshare",
                                        static_cast<int>(cfg.players.size()));
        if (j.contains("m_grid") || j.contains("trials") || j.contains("counts") ||
            j.contains("m")) {
            throw ConfigError("fairshare config has no m_grid/trials/counts/m fields");
        }
    } else {  // valuate
        if (j.contains("counts") == j.contains("m")) {
            throw ConfigError("valuate config needs exactly one of 'counts' or 'm'");
        }
        if (j.contains("counts")) {
            cfg.counts = get_int_vector(j.at("counts"), "/counts");
            if (cfg.counts.size() != cfg.players.size()) {
                throw ConfigError("/counts: expected one entry per player");
            }
        } else {
            const std::int64_t m = get_integer(j.at("m"), "/m");
            cfg.counts.assign(cfg.players.size(), m);
        }
        for (std::int64_t c : cfg.counts) {
            if (c < 1) throw ConfigError("/counts: entries must be >= 1");
        }
        if (j.contains("concept")) {
            const std::string c = get_string(j.at("concept"), "/concept");
            if (c == "shapley") {
                cfg.concept_tag = game::SolutionConcept::kShapley;
            } else if (c == "banzhaf") {
                cfg.concept_tag = game::SolutionConcept::kBanzhaf;
            } else {
                throw ConfigError("/concept: expected 'shapley' or 'banzhaf'");
            }
        }
        if (j.contains("m_grid") || j.contains("trials") || j.contains("fairshare")) {
            throw ConfigError("valuate config has no m_grid/trials/fairshare fields");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::string bytes;
    try {
        bytes = read_text_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return parse_config(bytes, path.string());
}

}  // namespace fairgame::harness
