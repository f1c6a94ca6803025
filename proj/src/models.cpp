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

#include "fairgame/models.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fairgame/gauss.hpp"

namespace fairgame::models {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

Eigen::VectorXd standard_normal_vector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = normal(rng);
    return z;
}

void check_theta_dim(const PlayerModel& model, const Eigen::VectorXd& theta, const char* what) {
    if (theta.size() != param_dim(model)) {
        throw std::invalid_argument(std::string(what) + ": parameter dimension " +
                                    std::to_string(theta.size()) + " does not match model's " +
                                    std::to_string(param_dim(model)));
    }
}

}  // namespace

DirectObservationModel::DirectObservationModel(const Eigen::MatrixXd& noise_cov) {
    const gauss::Cholesky chol = gauss::cholesky(0.5 * (noise_cov + noise_cov.transpose()));
    if (noise_cov.rows() != noise_cov.cols() || !chol.ok()) {
        throw std::invalid_argument("DirectObservationModel: noise covariance must be SPD");
    }
    noise_cov_ = 0.5 * (noise_cov + noise_cov.transpose());
    noise_chol_ = chol.lower;
    // Sigma^-1 via the factor; formed once, the model is immutable.
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(noise_cov_.rows(), noise_cov_.cols());
    const Eigen::MatrixXd inv_l = noise_chol_.triangularView<Eigen::Lower>().solve(identity);
    precision_ = inv_l.transpose() * inv_l;
    precision_log_det_ = -2.0 * noise_chol_.diagonal().array().log().sum();
}

DirectObservationModel DirectObservationModel::isotropic(int k, double noise_var) {
    if (k < 1 || !(noise_var > 0.0)) {
        throw std::invalid_argument("DirectObservationModel::isotropic: need k >= 1 and variance > 0");
    }
    return DirectObservationModel(noise_var * Eigen::MatrixXd::Identity(k, k));
}

DataPoint DirectObservationModel::draw(const Eigen::VectorXd& theta_star,
                                       std::mt19937_64& rng) const {
    DataPoint d;
    d.design = Eigen::MatrixXd::Identity(param_dim(), param_dim());
    d.value = theta_star + noise_chol_ * standard_normal_vector(param_dim(), rng);
    return d;
}

LinearGaussianModel::LinearGaussianModel(int k, double noise_sd, bool noise_known,
                                         Eigen::MatrixXd design_cov)
    : k_(k), noise_sd_(noise_sd), noise_known_(noise_known) {
    if (k < 1) throw std::invalid_argument("LinearGaussianModel: k must be >= 1");
    if (!(noise_sd > 0.0)) throw std::invalid_argument("LinearGaussianModel: noise_sd must be > 0");
    design_cov_ = design_cov.size() == 0 ? Eigen::MatrixXd::Identity(k, k) : std::move(design_cov);
    const gauss::Cholesky chol = gauss::cholesky(0.5 * (design_cov_ + design_cov_.transpose()));
    if (design_cov_.rows() != k || design_cov_.cols() != k || !chol.ok()) {
        throw std::invalid_argument("LinearGaussianModel: design covariance must be k x k SPD");
    }
    design_cov_ = 0.5 * (design_cov_ + design_cov_.transpose());
    design_chol_ = chol.lower;
}

double LinearGaussianModel::known_noise_sd() const {
    if (!noise_known_) {
        throw std::logic_error(
            "LinearGaussianModel: noise sigma is unknown to inference; use estimate_noise_sd");
    }
    return noise_sd_;
}

double LinearGaussianModel::effective_noise_sd(std::optional<double> sigma_hat) const {
    if (noise_known_) return noise_sd_;
    if (!sigma_hat) {
        throw std::invalid_argument(
            "LinearGaussianModel: unknown-noise model requires a plug-in sigma_hat");
    }
    if (!(*sigma_hat > 0.0)) {
        throw std::invalid_argument("LinearGaussianModel: plug-in sigma_hat must be > 0");
    }
    return *sigma_hat;
}

DataPoint LinearGaussianModel::draw(const Eigen::VectorXd& theta_star,
                                    std::mt19937_64& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    const Eigen::VectorXd a = design_chol_ * standard_normal_vector(k_, rng);
    DataPoint d;
    d.design = a.transpose();
    d.value = Eigen::VectorXd::Constant(1, a.dot(theta_star) + noise_sd_ * normal(rng));
    return d;
}

TwoModeLatentModel::TwoModeLatentModel(int latent_dim, double mode0_prob, double noise_sd)
    : latent_dim_(latent_dim), mode0_prob_(mode0_prob), noise_sd_(noise_sd) {
    if (latent_dim < 1) throw std::invalid_argument("TwoModeLatentModel: latent_dim must be >= 1");
    if (!(mode0_prob > 0.0) || !(mode0_prob < 1.0)) {
        throw std::invalid_argument("TwoModeLatentModel: mode0_prob must lie in (0, 1)");
    }
    if (!(noise_sd > 0.0)) throw std::invalid_argument("TwoModeLatentModel: noise_sd must be > 0");
}

DataPoint TwoModeLatentModel::draw(const Eigen::VectorXd& theta_star,
                                   std::mt19937_64& rng) const {
    std::bernoulli_distribution pick_mode0(mode0_prob_);
    const int mode = pick_mode0(rng) ? 0 : 1;
    DataPoint d;
    d.design = Eigen::MatrixXd::Zero(latent_dim_, 2 * latent_dim_);
    d.design.block(0, mode * latent_dim_, latent_dim_, latent_dim_) =
        Eigen::MatrixXd::Identity(latent_dim_, latent_dim_);
    d.value = d.design * theta_star + noise_sd_ * standard_normal_vector(latent_dim_, rng);
    return d;
}

int param_dim(const PlayerModel& model) {
    return std::visit([](const auto& m) { return m.param_dim(); }, model);
}

int obs_dim(const PlayerModel& model) {
    return std::visit([](const auto& m) { return m.obs_dim(); }, model);
}

DataSet sample(const PlayerModel& model, const Eigen::VectorXd& theta_star, std::int64_t m,
               std::uint64_t seed) {
    check_theta_dim(model, theta_star, "sample");
    if (m < 0) throw std::invalid_argument("sample: m must be >= 0");
    DataSet out;
    out.seed = seed;
    out.points.reserve(static_cast<std::size_t>(m));
    std::mt19937_64 rng(seed);
    for (std::int64_t i = 0; i < m; ++i) {
        out.points.push_back(
            std::visit([&](const auto& mm) { return mm.draw(theta_star, rng); }, model));
    }
    return out;
}

Eigen::MatrixXd noise_precision(const PlayerModel& model, std::optional<double> sigma_hat) {
    if (const auto* direct = std::get_if<DirectObservationModel>(&model)) {
        return direct->noise_precision();
    }
    if (const auto* linear = std::get_if<LinearGaussianModel>(&model)) {
        const double sd = linear->effective_noise_sd(sigma_hat);
        return Eigen::MatrixXd::Constant(1, 1, 1.0 / (sd * sd));
    }
    const auto& two_mode = std::get<TwoModeLatentModel>(model);
    const double sd = two_mode.noise_sd();
    return Eigen::MatrixXd::Identity(two_mode.latent_dim(), two_mode.latent_dim()) / (sd * sd);
}

double noise_precision_log_det(const PlayerModel& model, std::optional<double> sigma_hat) {
    if (const auto* direct = std::get_if<DirectObservationModel>(&model)) {
        return direct->noise_precision_log_det();
    }
    if (const auto* linear = std::get_if<LinearGaussianModel>(&model)) {
        const double sd = linear->effective_noise_sd(sigma_hat);
        return -2.0 * std::log(sd);
    }
    const auto& two_mode = std::get<TwoModeLatentModel>(model);
    return -2.0 * two_mode.latent_dim() * std::log(two_mode.noise_sd());
}

double log_likelihood(const PlayerModel& model, const Eigen::VectorXd& theta,
                      const DataPoint& datum, std::optional<double> sigma_hat) {
    check_theta_dim(model, theta, "log_likelihood");
    const Eigen::MatrixXd w = noise_precision(model, sigma_hat);
    const Eigen::VectorXd r = datum.value - datum.design * theta;
    const double p = static_cast<double>(datum.value.size());
    return -0.5 * r.dot(w * r) + 0.5 * noise_precision_log_det(model, sigma_hat) -
           0.5 * p * kLogTwoPi;
}

Eigen::VectorXd score(const PlayerModel& model, const Eigen::VectorXd& theta,
                      const DataPoint& datum, std::optional<double> sigma_hat) {
    check_theta_dim(model, theta, "score");
    const Eigen::MatrixXd w = noise_precision(model, sigma_hat);
    const Eigen::VectorXd r = datum.value - datum.design * theta;
    return datum.design.transpose() * (w * r);
}

Eigen::MatrixXd analytic_fisher_matrix(const PlayerModel& model, std::optional<double> sigma_hat) {
    if (const auto* direct = std::get_if<DirectObservationModel>(&model)) {
        return direct->noise_precision();
    }
    if (const auto* linear = std::get_if<LinearGaussianModel>(&model)) {
        const double sd = (linear->noise_known() || sigma_hat)
                              ? linear->effective_noise_sd(sigma_hat)
                              : linear->generating_noise_sd();
        return linear->design_cov() / (sd * sd);
    }
    const auto& two_mode = std::get<TwoModeLatentModel>(model);
    const int d = two_mode.latent_dim();
    const double inv_var = 1.0 / (two_mode.noise_sd() * two_mode.noise_sd());
    Eigen::MatrixXd fisher = Eigen::MatrixXd::Zero(2 * d, 2 * d);
    fisher.topLeftCorner(d, d) =
        two_mode.mode0_prob() * inv_var * Eigen::MatrixXd::Identity(d, d);
    fisher.bottomRightCorner(d, d) =
        (1.0 - two_mode.mode0_prob()) * inv_var * Eigen::MatrixXd::Identity(d, d);
    return fisher;
}

NoiseEstimate estimate_noise_sd(const LinearGaussianModel& model, const DataSet& data,
                                const Eigen::VectorXd& theta_bar) {
    if (model.noise_known()) {
        throw std::invalid_argument("estimate_noise_sd: model noise is already known");
    }
    if (theta_bar.size() != model.param_dim()) {
        throw std::invalid_argument("estimate_noise_sd: theta_bar dimension mismatch");
    }
    if (data.size() < 2) {
        throw std::invalid_argument("estimate_noise_sd: need at least 2 data points, got " +
                                    std::to_string(data.size()));
    }
    double rss = 0.0;
    for (const DataPoint& d : data.points) {
        const Eigen::VectorXd r = d.value - d.design * theta_bar;
        rss += r.squaredNorm();
    }
    const double sigma2 = rss / static_cast<double>(data.size());
    NoiseEstimate est;
    est.sigma_hat = std::sqrt(sigma2);
    if (est.sigma_hat < 1e-8) {
        est.sigma_hat = 1e-8;
        est.floored = true;
    }
    return est;
}

}  // namespace fairgame::models
