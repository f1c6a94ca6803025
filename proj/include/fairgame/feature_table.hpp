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
#include <string>
#include <vector>

#include "fairgame/sources.hpp"

namespace fairgame::harness {

/// Rectangular table of real features plus a target column. Missing feature
/// entries are tracked in a mask; targets must always be present.
struct FeatureTable {
    Eigen::MatrixXd features;            // rows x dim
    Eigen::VectorXd target;              // rows
    std::vector<std::uint8_t> missing;   // row-major rows x dim, 1 = missing

    std::int64_t rows() const { return features.rows(); }
    int dim() const { return static_cast<int>(features.cols()); }
    bool is_missing(std::int64_t row, int col) const {
        return missing[static_cast<std::size_t>(row) * dim() + col] != 0;
    }
    bool has_missing() const;
};

/// Reads the documented CSV contract: header `x0,..,x{d-1},y`, one numeric
/// row per record, empty feature cells meaning missing.
FeatureTable load_feature_csv(const std::filesystem::path& path);

/// Writes the same contract; missing entries become empty cells.
void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table);

/// Regression table with standard-normal rows, y = X beta + noise.
FeatureTable synthetic_feature_table(std::int64_t rows, const Eigen::VectorXd& beta,
                                     double noise_sd, std::uint64_t seed);

/// Replaces missing entries by their column means over observed entries;
/// errors on an all-missing column.
FeatureTable impute_mean(const FeatureTable& table);

/// Diagonal of the hat matrix X (X^T X)^-1 X^T; sums to the feature
/// dimension. Requires complete features and full column rank.
Eigen::VectorXd leverage_scores(const FeatureTable& table);

enum class RowSampling { kIid, kLeverage };

/// One least-squares bundle: subset_size rows drawn with replacement
/// (uniformly or proportionally to leverage), solved for the coefficient
/// vector. The solution is one direct-observation datum; the covariance is
/// the bundle's sigma_hat^2 (A^T A)^-1 with the residual variance floored at
/// 1e-12 for degenerate noiseless tables.
struct LsBundle {
    Eigen::VectorXd solution;
    Eigen::MatrixXd covariance;
    double sigma2 = 0.0;
};

LsBundle ls_bundle(const FeatureTable& table, std::int64_t subset_size, RowSampling sampling,
                   std::mt19937_64& rng);
LsBundle ls_bundle(const FeatureTable& table, std::int64_t subset_size, RowSampling sampling,
                   std::uint64_t seed);

/// Unbounded source whose data points are least-squares bundle solutions.
/// The player's direct-observation model is calibrated from one bundle drawn
/// at construction, so the model is fixed across the run.
class BundleSource final : public sources::DataSource {
  public:
    BundleSource(FeatureTable table, std::int64_t subset_size, RowSampling sampling,
                 std::uint64_t seed);

    const models::PlayerModel& model() const override { return model_; }
    void draw(std::int64_t count, models::DataSet& out) override;

  private:
    FeatureTable table_;
    std::int64_t subset_size_;
    RowSampling sampling_;
    models::PlayerModel model_;
    std::mt19937_64 rng_;
};

/// The defective direct observer: fits least squares on a `ratio` fraction
/// of rows after masking `nan_fraction` of feature entries and imputing,
/// then serves i.i.d. draws from N(theta_hat, sigma^2 I). Note the draws are
/// centered at the fitted theta_hat, not at the table's true coefficients.
class NoisyObserverSource final : public sources::DataSource {
  public:
    NoisyObserverSource(const FeatureTable& table, double ratio, double nan_fraction,
                        double noise_sd, std::uint64_t seed);

    const models::PlayerModel& model() const override { return model_; }
    void draw(std::int64_t count, models::DataSet& out) override;
    const Eigen::VectorXd& center() const { return center_; }

  private:
    models::PlayerModel model_;
    Eigen::VectorXd center_;
    std::mt19937_64 rng_;
};

/// Serves table rows in order as scalar regression observations with a
/// known noise level; exhausts when the table runs out.
class LinearRowsSource final : public sources::DataSource {
  public:
    LinearRowsSource(FeatureTable table, double noise_sd);

    const models::PlayerModel& model() const override { return model_; }
    void draw(std::int64_t count, models::DataSet& out) override;

  private:
    FeatureTable table_;
    models::PlayerModel model_;
    std::int64_t cursor_ = 0;
};

}  // namespace fairgame::harness
