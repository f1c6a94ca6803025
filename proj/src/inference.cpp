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

#include "fairgame/inference.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fairgame/util.hpp"

namespace fairgame::infer {

namespace {

constexpr double kLogTwoPiE = 2.8378770664093454835606594728112;  // ln(2 pi e)

int common_param_dim(std::span<const PlayerData> players, const char* what) {
    if (players.empty()) {
        throw std::invalid_argument(std::string(what) + ": no players given");
    }
    const int k = models::param_dim(players.front().model);
    for (const PlayerData& p : players) {
        if (models::param_dim(p.model) != k) {
            throw std::invalid_argument(std::string(what) +
                                        ": players disagree on parameter dimension");
        }
    }
    return k;
}

// Accumulates design^T W design into lambda and design^T W value into info
// over every datum of every coalition member.
void accumulate_information(std::span<const PlayerData> coalition, Eigen::MatrixXd& lambda,
                            Eigen::VectorXd& info) {
    for (const PlayerData& p : coalition) {
        const Eigen::MatrixXd w = models::noise_precision(p.model, p.sigma_hat);
        for (const models::DataPoint& d : p.data.points) {
            const Eigen::MatrixXd wd = w * d.design;
            lambda.noalias() += d.design.transpose() * wd;
            info.noalias() += d.design.transpose() * (w * d.value);
        }
    }
}

int matrix_rank(const Eigen::MatrixXd& m) {
    return static_cast<int>(Eigen::FullPivLU<Eigen::MatrixXd>(m).rank());
}

}  // namespace

int prior_dim(const Prior& prior) {
    if (const auto* normal = std::get_if<gauss::Gaussian>(&prior)) return normal->dim();
    return std::get<gauss::BoxUniform>(prior).dim();
}

gauss::Gaussian conjugate_posterior(const gauss::Gaussian& prior,
                                    std::span<const PlayerData> coalition) {
    const int k = prior.dim();
    for (const PlayerData& p : coalition) {
        if (models::param_dim(p.model) != k) {
            throw std::invalid_argument("conjugate_posterior: player parameter dimension "
                                        "does not match the prior");
        }
    }
    // Prior precision and information vector from the factor.
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(k, k);
    const Eigen::MatrixXd inv_l = prior.chol_lower().triangularView<Eigen::Lower>().solve(identity);
    Eigen::MatrixXd lambda = inv_l.transpose() * inv_l;
    Eigen::VectorXd info = lambda * prior.mean();
    accumulate_information(coalition, lambda, info);

    lambda = 0.5 * (lambda + lambda.transpose());
    const gauss::Cholesky chol = gauss::cholesky(lambda);
    if (!chol.ok()) {
        throw std::runtime_error("conjugate_posterior: posterior precision is not SPD");
    }
    const Eigen::MatrixXd inv_f =
        chol.lower.triangularView<Eigen::Lower>().solve(identity);
    const Eigen::MatrixXd cov = inv_f.transpose() * inv_f;
    Eigen::VectorXd mean = chol.lower.triangularView<Eigen::Lower>().solve(info);
    mean = chol.lower.transpose().triangularView<Eigen::Upper>().solve(mean);
    return gauss::Gaussian(std::move(mean), cov);
}

Eigen::VectorXd joint_mle(std::span<const PlayerData> coalition) {
    const int k = common_param_dim(coalition, "joint_mle");
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd info = Eigen::VectorXd::Zero(k);
    accumulate_information(coalition, gram, info);
    gram = 0.5 * (gram + gram.transpose());
    const gauss::Cholesky chol = gauss::cholesky(gram);
    if (!chol.ok()) {
        throw std::runtime_error("joint_mle: Gram matrix is rank-deficient (rank " +
                                 std::to_string(matrix_rank(gram)) + " of " + std::to_string(k) +
                                 ")");
    }
    Eigen::VectorXd theta = chol.lower.triangularView<Eigen::Lower>().solve(info);
    return chol.lower.transpose().triangularView<Eigen::Upper>().solve(theta);
}

gauss::Gaussian bvm_approx(const Eigen::VectorXd& theta_hat, const fisher::FisherMatrix& fisher,
                           std::int64_t m) {
    if (m < 1) throw std::invalid_argument("bvm_approx: m must be >= 1");
    if (theta_hat.size() != fisher.dim()) {
        throw std::invalid_argument("bvm_approx: theta_hat and Fisher dimensions differ");
    }
    const Eigen::MatrixXd scaled = static_cast<double>(m) * fisher.matrix;
    const gauss::Cholesky chol = gauss::cholesky(0.5 * (scaled + scaled.transpose()));
    if (!chol.ok()) {
        throw std::invalid_argument("bvm_approx: Fisher information is singular (leading minor " +
                                    std::to_string(chol.failed_minor) + ")");
    }
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(fisher.dim(), fisher.dim());
    const Eigen::MatrixXd inv_l = chol.lower.triangularView<Eigen::Lower>().solve(identity);
    return gauss::Gaussian(theta_hat, inv_l.transpose() * inv_l);
}

ValueEstimate characteristic_value(game::Coalition s, std::span<const PlayerData> players,
                                   const Prior& prior, const GameOptions& opts) {
    const int n = static_cast<int>(players.size());
    if (n < 1 || n > game::CharacteristicFunction::kMaxPlayers) {
        throw std::invalid_argument("characteristic_value: bad player count");
    }
    if (s >= (1u << n)) {
        throw std::invalid_argument("characteristic_value: coalition mask out of range");
    }
    if (s == 0) return {0.0, 0.0};

    std::vector<PlayerData> members;
    for (int i = 0; i < n; ++i) {
        if (s & (1u << i)) members.push_back(players[static_cast<std::size_t>(i)]);
    }

    if (const auto* normal = std::get_if<gauss::Gaussian>(&prior)) {
        const gauss::Gaussian posterior = conjugate_posterior(*normal, members);
        return {gauss::kl_gauss(posterior, *normal), 0.0};
    }

    // Box-uniform route: extended KL of the BvM approximation. Counts can
    // differ across members, so the joint Fisher folds each player's count
    // into the sum, which is the exact conjugate precision for these
    // families at the analytic level.
    const auto& box = std::get<gauss::BoxUniform>(prior);
    const Eigen::VectorXd theta_hat = joint_mle(members);
    std::vector<std::pair<fisher::FisherMatrix, double>> parts;
    parts.reserve(members.size());
    for (const PlayerData& p : members) {
        parts.emplace_back(fisher::analytic_fisher(p.model, p.sigma_hat),
                           static_cast<double>(p.data.size()));
    }
    const gauss::Gaussian approx = bvm_approx(theta_hat, fisher::joint_fisher(parts), 1);
    const gauss::McEstimate est =
        gauss::extended_kl_gauss_box(approx, box, opts.box_samples, derive_seed(opts.seed, s));
    return {est.estimate, est.std_error};
}

BuiltGame build_game(std::span<const PlayerData> players, const Prior& prior,
                     const GameOptions& opts) {
    const int n = static_cast<int>(players.size());
    if (n < 1) throw std::invalid_argument("build_game: need at least one player");
    game::CharacteristicFunction v(n);
    std::vector<double> errors(v.coalitions(), 0.0);
    for (game::Coalition s = 1; s < v.coalitions(); ++s) {
        const ValueEstimate est = characteristic_value(s, players, prior, opts);
        v.set_value(s, est.value);
        errors[s] = est.std_error;
    }
    return {std::move(v), std::move(errors)};
}

double uniform_prior_asymptote(std::int64_t m, int k, const gauss::BoxUniform& box,
                               const fisher::FisherMatrix& joint_fisher) {
    if (m < 1) throw std::invalid_argument("uniform_prior_asymptote: m must be >= 1");
    if (box.dim() != k || joint_fisher.dim() != k) {
        throw std::invalid_argument("uniform_prior_asymptote: dimension mismatch");
    }
    return 0.5 * k * (std::log(static_cast<double>(m)) - kLogTwoPiE) + box.log_volume() +
           0.5 * fisher::log_det_fisher(joint_fisher);
}

double normal_prior_asymptote(std::int64_t m, int k, double xi,
                              const fisher::FisherMatrix& joint_fisher) {
    if (m < 1) throw std::invalid_argument("normal_prior_asymptote: m must be >= 1");
    if (joint_fisher.dim() != k) {
        throw std::invalid_argument("normal_prior_asymptote: dimension mismatch");
    }
    return 0.5 * k * std::log(static_cast<double>(m)) + xi +
           0.5 * fisher::log_det_fisher(joint_fisher);
}

double xi(const Eigen::VectorXd& theta0, const Eigen::MatrixXd& sigma0,
          const Eigen::VectorXd& theta_star, int k) {
    if (theta0.size() != k || theta_star.size() != k || sigma0.rows() != k || sigma0.cols() != k) {
        throw std::invalid_argument("xi: dimension mismatch");
    }
    const gauss::Cholesky chol = gauss::cholesky(0.5 * (sigma0 + sigma0.transpose()));
    if (!chol.ok()) {
        throw std::invalid_argument("xi: Sigma0 is singular (leading minor " +
                                    std::to_string(chol.failed_minor) + ")");
    }
    const Eigen::VectorXd z = chol.lower.triangularView<Eigen::Lower>().solve(theta0 - theta_star);
    const double log_det_sigma0 = 2.0 * chol.lower.diagonal().array().log().sum();
    return 0.5 * (z.squaredNorm() - k + log_det_sigma0);
}

}  // namespace fairgame::infer
