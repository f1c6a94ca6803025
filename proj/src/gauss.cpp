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

#include "fairgame/gauss.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fairgame::gauss {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_square(const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
    }
}

// Symmetrize after validating that the asymmetry is small; large asymmetry
// indicates an upstream bug and is reported instead of being absorbed.
Eigen::MatrixXd validated_symmetric(const Eigen::MatrixXd& m, const char* what) {
    check_square(m, what);
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * scale) {
        throw std::invalid_argument(std::string(what) + ": matrix asymmetry " +
                                    std::to_string(asym / scale) + " exceeds 1e-8 relative");
    }
    return 0.5 * (m + m.transpose());
}

}  // namespace

Cholesky cholesky(const Eigen::MatrixXd& m) {
    check_square(m, "cholesky");
    const int n = static_cast<int>(m.rows());
    Cholesky out;
    out.lower = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        double d = m(j, j) - out.lower.row(j).head(j).squaredNorm();
        if (!(d > 0.0) || !std::isfinite(d)) {
            out.failed_minor = j + 1;
            return out;
        }
        const double ljj = std::sqrt(d);
        out.lower(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            out.lower(i, j) =
                (m(i, j) - out.lower.row(i).head(j).dot(out.lower.row(j).head(j))) / ljj;
        }
    }
    return out;
}

double log_det(const Eigen::MatrixXd& m) {
    const Eigen::MatrixXd sym = validated_symmetric(m, "log_det");
    const Cholesky chol = cholesky(sym);
    if (!chol.ok()) {
        throw std::invalid_argument("log_det: matrix is not positive definite (leading minor " +
                                    std::to_string(chol.failed_minor) + " not positive)");
    }
    return 2.0 * chol.lower.diagonal().array().log().sum();
}

Gaussian::Gaussian(Eigen::VectorXd mean, const Eigen::MatrixXd& covariance)
    : mean_(std::move(mean)) {
    cov_ = validated_symmetric(covariance, "Gaussian covariance");
    if (mean_.size() != cov_.rows()) {
        throw std::invalid_argument("Gaussian: mean dimension " + std::to_string(mean_.size()) +
                                    " does not match covariance dimension " +
                                    std::to_string(cov_.rows()));
    }
    const Cholesky chol = cholesky(cov_);
    if (!chol.ok()) {
        throw std::invalid_argument(
            "Gaussian: covariance is not positive definite (leading minor " +
            std::to_string(chol.failed_minor) + " not positive)");
    }
    chol_ = chol.lower;
    log_det_cov_ = 2.0 * chol_.diagonal().array().log().sum();
}

double Gaussian::log_density(const Eigen::VectorXd& x) const {
    if (x.size() != mean_.size()) {
        throw std::invalid_argument("Gaussian::log_density: dimension mismatch");
    }
    const Eigen::VectorXd z = chol_.triangularView<Eigen::Lower>().solve(x - mean_);
    return -0.5 * (dim() * std::log(kTwoPi) + log_det_cov_ + z.squaredNorm());
}

Eigen::VectorXd Gaussian::sample(std::mt19937_64& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(dim());
    for (int i = 0; i < dim(); ++i) z[i] = normal(rng);
    return mean_ + chol_ * z;
}

BoxUniform::BoxUniform(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size() || lower_.size() == 0) {
        throw std::invalid_argument("BoxUniform: bound dimensions mismatch or empty");
    }
    for (int d = 0; d < lower_.size(); ++d) {
        if (!(upper_[d] > lower_[d])) {
            throw std::invalid_argument("BoxUniform: zero or negative width in component " +
                                        std::to_string(d));
        }
    }
    log_volume_ = (upper_ - lower_).array().log().sum();
}

bool BoxUniform::contains(const Eigen::VectorXd& x) const {
    return (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
}

double entropy(const Gaussian& p) {
    return 0.5 * p.dim() * std::log(kTwoPi * std::exp(1.0)) + 0.5 * p.log_det_cov();
}

double kl_gauss(const Gaussian& p, const Gaussian& q) {
    if (p.dim() != q.dim()) {
        throw std::invalid_argument("kl_gauss: dimension mismatch (" + std::to_string(p.dim()) +
                                    " vs " + std::to_string(q.dim()) + ")");
    }
    const auto& lq = q.chol_lower();
    // tr(Sigma_q^-1 Sigma_p) = tr(L^-1 Sigma_p L^-T)
    const Eigen::MatrixXd a = lq.triangularView<Eigen::Lower>().solve(p.covariance());
    const Eigen::MatrixXd b =
        lq.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd(a.transpose()));
    const double trace_term = b.trace();
    const Eigen::VectorXd z = lq.triangularView<Eigen::Lower>().solve(q.mean() - p.mean());
    const double maha = z.squaredNorm();
    return 0.5 * (trace_term + maha - p.dim() + q.log_det_cov() - p.log_det_cov());
}

McEstimate extended_kl_gauss_box(const Gaussian& p, const BoxUniform& box, std::int64_t samples,
                                 std::uint64_t seed) {
    if (p.dim() != box.dim()) {
        throw std::invalid_argument("extended_kl_gauss_box: dimension mismatch");
    }
    if (samples < 1000) {
        throw std::invalid_argument("extended_kl_gauss_box: need at least 1000 samples, got " +
                                    std::to_string(samples));
    }
    std::mt19937_64 rng(seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        const Eigen::VectorXd x = p.sample(rng);
        const double f = box.contains(x) ? p.log_density(x) + box.log_volume() : 0.0;
        sum += f;
        sum_sq += f * f;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

double tv_estimate_mc(const Gaussian& p, const Gaussian& q, std::int64_t samples,
                      std::uint64_t seed) {
    if (p.dim() != q.dim()) {
        throw std::invalid_argument("tv_estimate_mc: dimension mismatch");
    }
    if (samples < 1) {
        throw std::invalid_argument("tv_estimate_mc: samples must be positive");
    }
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    double sum = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        const Eigen::VectorXd x = coin(rng) ? p.sample(rng) : q.sample(rng);
        // |p - q| / (p + q) evaluated in log space.
        sum += std::tanh(0.5 * std::abs(p.log_density(x) - q.log_density(x)));
    }
    return sum / static_cast<double>(samples);
}

}  // namespace fairgame::gauss
