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
#include <span>
#include <variant>
#include <vector>

#include "fairgame/fisher.hpp"
#include "fairgame/game.hpp"
#include "fairgame/gauss.hpp"
#include "fairgame/models.hpp"

namespace fairgame::infer {

/// Common prior: a proper normal, or a box uniform handled through the
/// BvM-plus-extended-KL route.
using Prior = std::variant<gauss::Gaussian, gauss::BoxUniform>;

int prior_dim(const Prior& prior);

/// One player's slice of the game: observation family, realized data, and a
/// plug-in noise estimate for unknown-noise models.
struct PlayerData {
    models::PlayerModel model;
    models::DataSet data;
    std::optional<double> sigma_hat;
};

/// Exact conjugate posterior for a normal prior: precision accumulates
/// design^T W design over every datum, the mean solves against the
/// accumulated information vector. Empty data returns the prior.
gauss::Gaussian conjugate_posterior(const gauss::Gaussian& prior,
                                    std::span<const PlayerData> coalition);

/// Weighted least-squares joint MLE over the coalition's data; errors with
/// the observed rank when the accumulated Gram matrix is singular.
Eigen::VectorXd joint_mle(std::span<const PlayerData> coalition);

/// N(theta_hat, (m * fisher)^-1); m is the common per-player count. Callers
/// with unequal counts pre-fold them into the Fisher sum and pass m = 1.
gauss::Gaussian bvm_approx(const Eigen::VectorXd& theta_hat, const fisher::FisherMatrix& fisher,
                           std::int64_t m);

struct ValueEstimate {
    double value = 0.0;
    double std_error = 0.0;  // Monte-Carlo error for the box-prior route, 0 otherwise
};

struct GameOptions {
    std::int64_t box_samples = 200000;  // extended-KL draws per coalition
    std::uint64_t seed = 0;             // base seed; each coalition derives a substream
};

/// Characteristic value of a coalition: the posterior-prior KL divergence.
/// Normal priors use the exact conjugate closed form; box priors use the
/// extended KL of the BvM approximation with per-player analytic Fishers
/// weighted by their counts. The empty coalition is 0 by definition.
ValueEstimate characteristic_value(game::Coalition s, std::span<const PlayerData> players,
                                   const Prior& prior, const GameOptions& opts = {});

struct BuiltGame {
    game::CharacteristicFunction values;
    std::vector<double> std_errors;  // per coalition, zeros for the exact route
};

/// Evaluates the characteristic function over all 2^n coalitions with
/// deterministic per-coalition seeds.
BuiltGame build_game(std::span<const PlayerData> players, const Prior& prior,
                     const GameOptions& opts = {});

/// Closed-form large-m value under a box-uniform prior:
///   (k/2) ln(m / 2 pi e) + ln vol(box) + (1/2) ln|I_S|.
double uniform_prior_asymptote(std::int64_t m, int k, const gauss::BoxUniform& box,
                               const fisher::FisherMatrix& joint_fisher);

/// Closed-form large-m value under a normal prior:
///   (k/2) ln m + xi + (1/2) ln|I_S|.
double normal_prior_asymptote(std::int64_t m, int k, double xi,
                              const fisher::FisherMatrix& joint_fisher);

/// Prior-dependent constant of the normal-prior expansion:
///   0.5 (||theta0 - theta*||^2 in Sigma0^-1 norm - k + ln|Sigma0|).
double xi(const Eigen::VectorXd& theta0, const Eigen::MatrixXd& sigma0,
          const Eigen::VectorXd& theta_star, int k);

}  // namespace fairgame::infer
