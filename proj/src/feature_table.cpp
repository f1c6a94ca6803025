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

#include "fairgame/feature_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fairgame/gauss.hpp"

namespace fairgame::harness {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& field, const std::filesystem::path& path,
                    std::int64_t line_no) {
    std::size_t consumed = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != field.size() || field.empty()) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": cannot parse numeric field '" + field + "'");
    }
    return v;
}

// Complete (imputed if needed) feature matrix for least-squares work.
Eigen::MatrixXd complete_features(const FeatureTable& table) {
    return table.has_missing() ? impute_mean(table).features : table.features;
}

Eigen::VectorXd solve_ls(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, int* rank_out) {
    const Eigen::MatrixXd gram = a.transpose() * a;
    const gauss::Cholesky chol = gauss::cholesky(0.5 * (gram + gram.transpose()));
    if (!chol.ok()) {
        if (rank_out) {
            *rank_out = static_cast<int>(Eigen::FullPivLU<Eigen::MatrixXd>(gram).rank());
        }
        return Eigen::VectorXd();
    }
    Eigen::VectorXd rhs = a.transpose() * y;
    Eigen::VectorXd sol = chol.lower.triangularView<Eigen::Lower>().solve(rhs);
    return chol.lower.transpose().triangularView<Eigen::Upper>().solve(sol);
}

}  // namespace

bool FeatureTable::has_missing() const {
    return std::any_of(missing.begin(), missing.end(), [](std::uint8_t m) { return m != 0; });
}

FeatureTable load_feature_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open feature CSV: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 2 || header.back() != "y") {
        throw std::runtime_error(path.string() + ": header must be x0,..,x{d-1},y");
    }
    const int dim = static_cast<int>(header.size()) - 1;
    for (int c = 0; c < dim; ++c) {
        if (header[static_cast<std::size_t>(c)] != "x" + std::to_string(c)) {
            throw std::runtime_error(path.string() + ": feature column " + std::to_string(c) +
                                     " must be named x" + std::to_string(c) + ", got '" +
                                     header[static_cast<std::size_t>(c)] + "'");
        }
    }

    std::vector<double> feats;
    std::vector<std::uint8_t> missing;
    std::vector<double> targets;
    std::int64_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(header.size()) +
                                     " fields, got " + std::to_string(fields.size()));
        }
        for (int c = 0; c < dim; ++c) {
            const std::string& f = fields[static_cast<std::size_t>(c)];
            if (f.empty()) {
                feats.push_back(0.0);
                missing.push_back(1);
            } else {
                feats.push_back(parse_number(f, path, line_no));
                missing.push_back(0);
            }
        }
        if (fields.back().empty()) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": target column may not be missing");
        }
        targets.push_back(parse_number(fields.back(), path, line_no));
    }
    const std::int64_t rows = static_cast<std::int64_t>(targets.size());
    if (rows == 0) throw std::runtime_error(path.string() + ": no data rows");

    FeatureTable table;
    table.features = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                              Eigen::RowMajor>>(feats.data(), rows, dim);
    table.target = Eigen::Map<Eigen::VectorXd>(targets.data(), rows);
    table.missing = std::move(missing);
    return table;
}

void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write feature CSV: " + path.string());
    for (int c = 0; c < table.dim(); ++c) out << "x" << c << ",";
    out << "y\n";
    char buf[64];
    for (std::int64_t r = 0; r < table.rows(); ++r) {
        for (int c = 0; c < table.dim(); ++c) {
            if (!table.is_missing(r, c)) {
                std::snprintf(buf, sizeof(buf), "%.17g", table.features(r, c));
                out << buf;
            }
            out << ",";
        }
        std::snprintf(buf, sizeof(buf), "%.17g", table.target[r]);
        out << buf << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

FeatureTable synthetic_feature_table(std::int64_t rows, const Eigen::VectorXd& beta,
                                     double noise_sd, std::uint64_t seed) {
    if (rows < 1 || beta.size() < 1 || !(noise_sd >= 0.0)) {
        throw std::invalid_argument("synthetic_feature_table: bad rows, beta, or noise_sd");
    }
    const int dim = static_cast<int>(beta.size());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    FeatureTable table;
    table.features.resize(rows, dim);
    table.target.resize(rows);
    table.missing.assign(static_cast<std::size_t>(rows) * dim, 0);
    for (std::int64_t r = 0; r < rows; ++r) {
        for (int c = 0; c < dim; ++c) table.features(r, c) = normal(rng);
        table.target[r] = table.features.row(r).dot(beta) + noise_sd * normal(rng);
    }
    return table;
}

FeatureTable impute_mean(const FeatureTable& table) {
    FeatureTable out = table;
    for (int c = 0; c < table.dim(); ++c) {
        double sum = 0.0;
        std::int64_t observed = 0;
        for (std::int64_t r = 0; r < table.rows(); ++r) {
            if (!table.is_missing(r, c)) {
                sum += table.features(r, c);
                ++observed;
            }
        }
        if (observed == 0) {
            throw std::runtime_error("impute_mean: column x" + std::to_string(c) +
                                     " has no observed entries");
        }
        const double mean = sum / static_cast<double>(observed);
        for (std::int64_t r = 0; r < table.rows(); ++r) {
            if (table.is_missing(r, c)) out.features(r, c) = mean;
        }
    }
    std::fill(out.missing.begin(), out.missing.end(), 0);
    return out;
}

Eigen::VectorXd leverage_scores(const FeatureTable& table) {
    if (table.has_missing()) {
        throw std::invalid_argument("leverage_scores: impute missing entries first");
    }
    const Eigen::MatrixXd& x = table.features;
    const Eigen::MatrixXd gram = x.transpose() * x;
    const gauss::Cholesky chol = gauss::cholesky(0.5 * (gram + gram.transpose()));
    if (!chol.ok()) {
        throw std::runtime_error("leverage_scores: X^T X is singular");
    }
    // h_j = || L^-1 x_j ||^2 row by row.
    const Eigen::MatrixXd half =
        chol.lower.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd(x.transpose()));
    return half.array().square().colwise().sum();
}

LsBundle ls_bundle(const FeatureTable& table, std::int64_t subset_size, RowSampling sampling,
                   std::mt19937_64& rng) {
    const int dim = table.dim();
    if (subset_size < dim) {
        throw std::invalid_argument("ls_bundle: subset_size " + std::to_string(subset_size) +
                                    " below feature dimension " + std::to_string(dim));
    }
    if (table.rows() < 1) throw std::invalid_argument("ls_bundle: empty table");

    const Eigen::MatrixXd x = complete_features(table);
    std::vector<double> probs;
    if (sampling == RowSampling::kLeverage) {
        FeatureTable complete = table;
        complete.features = x;
        std::fill(complete.missing.begin(), complete.missing.end(), 0);
        const Eigen::VectorXd h = leverage_scores(complete);
        probs.assign(h.data(), h.data() + h.size());
    }

    // Rank-deficient subsets are resampled a bounded number of times.
    for (int attempt = 0; attempt < 10; ++attempt) {
        Eigen::MatrixXd a(subset_size, dim);
        Eigen::VectorXd y(subset_size);
        if (sampling == RowSampling::kIid) {
            std::uniform_int_distribution<std::int64_t> pick(0, table.rows() - 1);
            for (std::int64_t i = 0; i < subset_size; ++i) {
                const std::int64_t r = pick(rng);
                a.row(i) = x.row(r);
                y[i] = table.target[r];
            }
        } else {
            std::discrete_distribution<std::int64_t> pick(probs.begin(), probs.end());
            for (std::int64_t i = 0; i < subset_size; ++i) {
                const std::int64_t r = pick(rng);
                a.row(i) = x.row(r);
                y[i] = table.target[r];
            }
        }
        int rank = 0;
        const Eigen::VectorXd sol = solve_ls(a, y, &rank);
        if (sol.size() == 0) continue;

        LsBundle bundle;
        bundle.solution = sol;
        const double dof = static_cast<double>(std::max<std::int64_t>(subset_size - dim, 1));
        bundle.sigma2 = std::max((y - a * sol).squaredNorm() / dof, 1e-12);
        const Eigen::MatrixXd gram = a.transpose() * a;
        const gauss::Cholesky chol = gauss::cholesky(0.5 * (gram + gram.transpose()));
        const Eigen::MatrixXd inv_l = chol.lower.triangularView<Eigen::Lower>().solve(
            Eigen::MatrixXd::Identity(dim, dim));
        bundle.covariance = bundle.sigma2 * (inv_l.transpose() * inv_l);
        return bundle;
    }
    throw std::runtime_error("ls_bundle: sampled subset rank-deficient after 10 attempts");
}

LsBundle ls_bundle(const FeatureTable& table, std::int64_t subset_size, RowSampling sampling,
                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return ls_bundle(table, subset_size, sampling, rng);
}

BundleSource::BundleSource(FeatureTable table, std::int64_t subset_size, RowSampling sampling,
                           std::uint64_t seed)
    : table_(std::move(table)),
      subset_size_(subset_size),
      sampling_(sampling),
      model_(models::DirectObservationModel::isotropic(1, 1.0)),  // replaced below
      rng_(seed) {
    const LsBundle calibration = ls_bundle(table_, subset_size_, sampling_, rng_);
    model_ = models::DirectObservationModel(calibration.covariance);
}

void BundleSource::draw(std::int64_t count, models::DataSet& out) {
    if (count < 0) throw std::invalid_argument("BundleSource: count must be >= 0");
    const int dim = table_.dim();
    for (std::int64_t i = 0; i < count; ++i) {
        const LsBundle bundle = ls_bundle(table_, subset_size_, sampling_, rng_);
        models::DataPoint d;
        d.design = Eigen::MatrixXd::Identity(dim, dim);
        d.value = bundle.solution;
        out.points.push_back(std::move(d));
    }
}

NoisyObserverSource::NoisyObserverSource(const FeatureTable& table, double ratio,
                                         double nan_fraction, double noise_sd, std::uint64_t seed)
    : model_(models::DirectObservationModel::isotropic(std::max(table.dim(), 1), noise_sd * noise_sd)),
      rng_(seed) {
    if (!(ratio > 0.0) || ratio > 1.0) {
        throw std::invalid_argument("NoisyObserverSource: ratio must lie in (0, 1]");
    }
    if (!(nan_fraction >= 0.0) || nan_fraction >= 1.0) {
        throw std::invalid_argument("NoisyObserverSource: nan_fraction must lie in [0, 1)");
    }
    if (!(noise_sd > 0.0)) {
        throw std::invalid_argument("NoisyObserverSource: noise_sd must be > 0");
    }

    const std::int64_t keep =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(ratio * table.rows())));
    std::vector<std::int64_t> order(static_cast<std::size_t>(table.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng_);

    FeatureTable subset;
    const int dim = table.dim();
    subset.features.resize(keep, dim);
    subset.target.resize(keep);
    subset.missing.assign(static_cast<std::size_t>(keep) * dim, 0);
    for (std::int64_t r = 0; r < keep; ++r) {
        subset.features.row(r) = table.features.row(order[static_cast<std::size_t>(r)]);
        subset.target[r] = table.target[order[static_cast<std::size_t>(r)]];
    }
    std::bernoulli_distribution mask(nan_fraction);
    if (nan_fraction > 0.0) {
        for (std::int64_t r = 0; r < keep; ++r) {
            for (int c = 0; c < dim; ++c) {
                if (mask(rng_)) subset.missing[static_cast<std::size_t>(r) * dim + c] = 1;
            }
        }
    }
    const FeatureTable imputed = impute_mean(subset);
    int rank = 0;
    center_ = solve_ls(imputed.features, imputed.target, &rank);
    if (center_.size() == 0) {
        throw std::runtime_error("NoisyObserverSource: subset design is rank-deficient (rank " +
                                 std::to_string(rank) + " of " + std::to_string(dim) + ")");
    }
}

void NoisyObserverSource::draw(std::int64_t count, models::DataSet& out) {
    if (count < 0) throw std::invalid_argument("NoisyObserverSource: count must be >= 0");
    const auto& direct = std::get<models::DirectObservationModel>(model_);
    for (std::int64_t i = 0; i < count; ++i) {
        out.points.push_back(direct.draw(center_, rng_));
    }
}

LinearRowsSource::LinearRowsSource(FeatureTable table, double noise_sd)
    : table_(table.has_missing() ? impute_mean(table) : std::move(table)),
      model_(models::LinearGaussianModel(table_.dim(), noise_sd, /*noise_known=*/true)) {}

void LinearRowsSource::draw(std::int64_t count, models::DataSet& out) {
    if (count < 0) throw std::invalid_argument("LinearRowsSource: count must be >= 0");
    if (cursor_ + count > table_.rows()) {
        throw sources::SourceExhausted("LinearRowsSource: requested " + std::to_string(count) +
                                       " rows with only " + std::to_string(table_.rows() - cursor_) +
                                       " of " + std::to_string(table_.rows()) + " left");
    }
    for (std::int64_t i = 0; i < count; ++i, ++cursor_) {
        models::DataPoint d;
        d.design = table_.features.row(cursor_);
        d.value = Eigen::VectorXd::Constant(1, table_.target[cursor_]);
        out.points.push_back(std::move(d));
    }
}

}  // namespace fairgame::harness
