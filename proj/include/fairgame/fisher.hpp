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
#include <utility>
#include <vector>

#include "fairgame/models.hpp"

namespace fairgame::fisher {

/// Symmetric PSD information matrix with provenance. Rank-deficient
/// matrices are legal to hold; inversion and log-determinants check SPD at
/// the use site and fail loudly rather than regularize.
struct FisherMatrix {
    enum class Provenance { kAnalytic, kSampled };

    Eigen::MatrixXd matrix;
    Provenance provenance = Provenance::kAnalytic;
    std::int64_t sample_count = 0;   // sampled only
    Eigen::VectorXd theta_bar;       // sampled only: plug-in used for the scores
    std::uint64_t data_seed = 0;     // sampled only, 0 when unknown

    int dim() const { return static_cast<int>(matrix.rows()); }
};

/// Wraps a matrix as a FisherMatrix after validating symmetry and PSD-ness
/// (smallest eigenvalue >= -1e-10).
FisherMatrix make_fisher(const Eigen::MatrixXd& m,
                         FisherMatrix::Provenance provenance = FisherMatrix::Provenance::kAnalytic);

/// Model-based per-datum Fisher information. Unknown-noise models use the
/// plug-in sigma when given, otherwise the generating sigma (oracle use).
FisherMatrix analytic_fisher(const models::PlayerModel& model,
                             std::optional<double> sigma_hat = std::nullopt);

/// Score outer-product estimate (1/m) sum s_j s_j^T at the plug-in
/// theta_bar. PSD by construction; errors on empty data.
FisherMatrix sample_fisher(const models::PlayerModel& model, const Eigen::VectorXd& theta_bar,
                           const models::DataSet& data,
                           std::optional<double> sigma_hat = std::nullopt);

/// Weighted sum of information matrices; weights carry per-player counts or
/// bundling rates and must be non-negative.
FisherMatrix joint_fisher(const std::vector<std::pair<FisherMatrix, double>>& parts);

/// ln|F|; requires F to be SPD, not merely PSD.
double log_det_fisher(const FisherMatrix& f);

/// Generalized determinant-root ratio (|F_a| / |F_b|)^(1/k).
double gen_fisher_ratio(const FisherMatrix& f_a, const FisherMatrix& f_b, int k);

}  // namespace fairgame::fisher
