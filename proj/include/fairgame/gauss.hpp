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
#include <random>

namespace fairgame::gauss {

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
/// On failure `failed_minor` is the 1-based index of the first leading
/// principal minor that is not positive.
struct Cholesky {
    Eigen::MatrixXd lower;
    int failed_minor = 0;

    bool ok() const { return failed_minor == 0; }
};

Cholesky cholesky(const Eigen::MatrixXd& m);

/// ln|M| via the Cholesky pivots; throws std::invalid_argument naming the
/// offending leading minor when M is not SPD. The determinant itself is
/// never formed.
double log_det(const Eigen::MatrixXd& m);

/// Multivariate normal with SPD covariance. Construction symmetrizes the
/// covariance as (M + M^T)/2 and factorizes it once; asymmetry beyond 1e-8
/// relative or a failed factorization is an error, not silently repaired.
class Gaussian {
  public:
    Gaussian(Eigen::VectorXd mean, const Eigen::MatrixXd& covariance);

    int dim() const { return static_cast<int>(mean_.size()); }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& covariance() const { return cov_; }
    const Eigen::MatrixXd& chol_lower() const { return chol_; }
    double log_det_cov() const { return log_det_cov_; }

    double log_density(const Eigen::VectorXd& x) const;
    Eigen::VectorXd sample(std::mt19937_64& rng) const;

  private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
    Eigen::MatrixXd chol_;
    double log_det_cov_ = 0.0;
};

/// Uniform distribution on an axis-aligned box with componentwise
/// lower < upper.
class BoxUniform {
  public:
    BoxUniform(Eigen::VectorXd lower, Eigen::VectorXd upper);

    int dim() const { return static_cast<int>(lower_.size()); }
    const Eigen::VectorXd& lower() const { return lower_; }
    const Eigen::VectorXd& upper() const { return upper_; }
    double log_volume() const { return log_volume_; }
    bool contains(const Eigen::VectorXd& x) const;

  private:
    Eigen::VectorXd lower_;
    Eigen::VectorXd upper_;
    double log_volume_ = 0.0;
};

/// Differential entropy (k/2) ln(2*pi*e) + (1/2) ln|Sigma|.
double entropy(const Gaussian& p);

/// Closed-form KL(P || Q) between Gaussians of equal dimension.
double kl_gauss(const Gaussian& p, const Gaussian& q);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Monte-Carlo estimate of the KL divergence of the absolutely continuous
/// component of P w.r.t. the box uniform:
///   integral over the box of p(t) [ln p(t) + ln vol(box)] dt,
/// sampled from P with an indicator restriction to the box. Deterministic
/// per seed; requires samples >= 1000.
McEstimate extended_kl_gauss_box(const Gaussian& p, const BoxUniform& box,
                                 std::int64_t samples, std::uint64_t seed);

/// Monte-Carlo total-variation estimate between two Gaussians, sampling
/// from the even mixture. Each term is tanh(|ln p - ln q| / 2), so the
/// estimate is in [0, 1] by construction. Deterministic per seed.
double tv_estimate_mc(const Gaussian& p, const Gaussian& q, std::int64_t samples,
                      std::uint64_t seed);

}  // namespace fairgame::gauss
