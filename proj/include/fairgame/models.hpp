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
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace fairgame::models {

/// One observation in canonical linear-Gaussian form: value = design * theta
/// + noise. Direct observations carry an identity design, scalar regression
/// rows a 1 x k design.
struct DataPoint {
    Eigen::MatrixXd design;
    Eigen::VectorXd value;
};

struct DataSet {
    int player = 0;
    std::uint64_t seed = 0;  // generating seed when known, 0 otherwise
    std::vector<DataPoint> points;

    std::int64_t size() const { return static_cast<std::int64_t>(points.size()); }
};

/// Observes theta directly through additive Gaussian noise with a fixed SPD
/// covariance.
class DirectObservationModel {
  public:
    explicit DirectObservationModel(const Eigen::MatrixXd& noise_cov);
    static DirectObservationModel isotropic(int k, double noise_var);

    int param_dim() const { return static_cast<int>(noise_cov_.rows()); }
    int obs_dim() const { return param_dim(); }
    const Eigen::MatrixXd& noise_cov() const { return noise_cov_; }
    const Eigen::MatrixXd& noise_precision() const { return precision_; }
    double noise_precision_log_det() const { return precision_log_det_; }

    DataPoint draw(const Eigen::VectorXd& theta_star, std::mt19937_64& rng) const;

  private:
    Eigen::MatrixXd noise_cov_;
    Eigen::MatrixXd noise_chol_;
    Eigen::MatrixXd precision_;
    double precision_log_det_ = 0.0;
};

/// Scalar regression y = a . theta + eps with a fresh design row per datum,
/// a ~ N(0, design_cov). When noise_known is false the generating sigma is
/// kept private: inference paths must pass a plug-in estimate, and only
/// estimate_noise_sd may produce one outside of test oracles.
class LinearGaussianModel {
  public:
    LinearGaussianModel(int k, double noise_sd, bool noise_known,
                        Eigen::MatrixXd design_cov = Eigen::MatrixXd());

    int param_dim() const { return k_; }
    int obs_dim() const { return 1; }
    bool noise_known() const { return noise_known_; }
    const Eigen::MatrixXd& design_cov() const { return design_cov_; }

    /// Generating sigma; only exposed for known-noise models.
    double known_noise_sd() const;
    /// Sigma used by inference: the known sigma, or the supplied plug-in.
    double effective_noise_sd(std::optional<double> sigma_hat) const;

    DataPoint draw(const Eigen::VectorXd& theta_star, std::mt19937_64& rng) const;

    /// Generating sigma regardless of the known/unknown flag. Reference
    /// value for analytic Fisher oracles and limiting games; inference code
    /// paths must not call this.
    double generating_noise_sd() const { return noise_sd_; }

  private:
    int k_;
    double noise_sd_;
    bool noise_known_;
    Eigen::MatrixXd design_cov_;
    Eigen::MatrixXd design_chol_;
};

/// Two-mode latent mean estimation: theta stacks the two mode means, each
/// draw picks mode 0 with probability mode0_prob and observes that mode's
/// mean through isotropic noise. The datum's design is the block selector,
/// so inference and scores reduce to the canonical linear-Gaussian form.
class TwoModeLatentModel {
  public:
    TwoModeLatentModel(int latent_dim, double mode0_prob, double noise_sd);

    int param_dim() const { return 2 * latent_dim_; }
    int obs_dim() const { return latent_dim_; }
    int latent_dim() const { return latent_dim_; }
    double mode0_prob() const { return mode0_prob_; }
    double noise_sd() const { return noise_sd_; }

    DataPoint draw(const Eigen::VectorXd& theta_star, std::mt19937_64& rng) const;

  private:
    int latent_dim_;
    double mode0_prob_;
    double noise_sd_;
};

using PlayerModel =
    std::variant<DirectObservationModel, LinearGaussianModel, TwoModeLatentModel>;

int param_dim(const PlayerModel& model);
int obs_dim(const PlayerModel& model);

/// m i.i.d. draws from the model at theta_star; deterministic per seed.
DataSet sample(const PlayerModel& model, const Eigen::VectorXd& theta_star, std::int64_t m,
               std::uint64_t seed);

/// Noise precision applied to a datum's residual (obs_dim x obs_dim), and
/// its log-determinant. Unknown-noise models require sigma_hat.
Eigen::MatrixXd noise_precision(const PlayerModel& model,
                                std::optional<double> sigma_hat = std::nullopt);
double noise_precision_log_det(const PlayerModel& model,
                               std::optional<double> sigma_hat = std::nullopt);

double log_likelihood(const PlayerModel& model, const Eigen::VectorXd& theta,
                      const DataPoint& datum, std::optional<double> sigma_hat = std::nullopt);

/// Gradient of the log-likelihood in theta: design^T W (value - design*theta).
Eigen::VectorXd score(const PlayerModel& model, const Eigen::VectorXd& theta,
                      const DataPoint& datum, std::optional<double> sigma_hat = std::nullopt);

/// Fisher information per datum as a plain matrix. For unknown-noise linear
/// models the generating sigma is used unless a plug-in is supplied; the
/// no-plug-in form is a reference value for oracles and limiting games.
Eigen::MatrixXd analytic_fisher_matrix(const PlayerModel& model,
                                       std::optional<double> sigma_hat = std::nullopt);

struct NoiseEstimate {
    double sigma_hat = 0.0;
    bool floored = false;  // residuals degenerate, value clamped at 1e-8
};

/// Residual MLE sigma_hat^2 = (1/m) sum (y_j - a_j . theta_bar)^2 for an
/// unknown-noise linear model; requires at least two data points.
NoiseEstimate estimate_noise_sd(const LinearGaussianModel& model, const DataSet& data,
                                const Eigen::VectorXd& theta_bar);

}  // namespace fairgame::models
