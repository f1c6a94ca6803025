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

#include "fairgame/fisher.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fairgame/gauss.hpp"

namespace fairgame::fisher {

namespace {

void check_psd(const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
        throw std::invalid_argument(std::string(what) + ": matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigs(0.5 * (m + m.transpose()),
                                                        Eigen::EigenvaluesOnly);
    if (eigs.eigenvalues().minCoeff() < -1e-10 * scale) {
        throw std::invalid_argument(std::string(what) + ": matrix is not PSD (min eigenvalue " +
                                    std::to_string(eigs.eigenvalues().minCoeff()) + ")");
    }
}

}  // namespace

FisherMatrix make_fisher(const Eigen::MatrixXd& m, FisherMatrix::Provenance provenance) {
    check_psd(m, "make_fisher");
    FisherMatrix f;
    f.matrix = 0.5 * (m + m.transpose());
    f.provenance = provenance;
    return f;
}

FisherMatrix analytic_fisher(const models::PlayerModel& model, std::optional<double> sigma_hat) {
    FisherMatrix f;
    f.matrix = models::analytic_fisher_matrix(model, sigma_hat);
    f.provenance = FisherMatrix::Provenance::kAnalytic;
    return f;
}

FisherMatrix sample_fisher(const models::PlayerModel& model, const Eigen::VectorXd& theta_bar,
                           const models::DataSet& data, std::optional<double> sigma_hat) {
    if (data.points.empty()) {
        throw std::invalid_argument("sample_fisher: data set is empty");
    }
    if (!theta_bar.allFinite()) {
        throw std::invalid_argument("sample_fisher: theta_bar has non-finite entries");
    }
    const int k = models::param_dim(model);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k, k);
    for (const models::DataPoint& d : data.points) {
        const Eigen::VectorXd s = models::score(model, theta_bar, d, sigma_hat);
        acc.noalias() += s * s.transpose();
    }
    FisherMatrix f;
    f.matrix = acc / static_cast<double>(data.size());
    f.provenance = FisherMatrix::Provenance::kSampled;
    f.sample_count = data.size();
    f.theta_bar = theta_bar;
    f.data_seed = data.seed;
    return f;
}

FisherMatrix joint_fisher(const std::vector<std::pair<FisherMatrix, double>>& parts) {
    if (parts.empty()) {
        throw std::invalid_argument("joint_fisher: no parts given");
    }
    const int k = parts.front().first.dim();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k, k);
    for (const auto& [part, weight] : parts) {
        if (part.dim() != k) {
            throw std::invalid_argument("joint_fisher: dimension mismatch (" +
                                        std::to_string(part.dim()) + " vs " + std::to_string(k) +
                                        ")");
        }
        if (!(weight >= 0.0)) {
            throw std::invalid_argument("joint_fisher: weights must be non-negative");
        }
        acc += weight * part.matrix;
    }
    FisherMatrix f;
    f.matrix = std::move(acc);
    f.provenance = FisherMatrix::Provenance::kAnalytic;
    for (const auto& [part, weight] : parts) {
        if (part.provenance == FisherMatrix::Provenance::kSampled) {
            f.provenance = FisherMatrix::Provenance::kSampled;
            break;
        }
    }
    return f;
}

double log_det_fisher(const FisherMatrix& f) {
    return gauss::log_det(f.matrix);
}

double gen_fisher_ratio(const FisherMatrix& f_a, const FisherMatrix& f_b, int k) {
    if (f_a.dim() != k || f_b.dim() != k) {
        throw std::invalid_argument("gen_fisher_ratio: k does not match matrix dimensions");
    }
    return std::exp((log_det_fisher(f_a) - log_det_fisher(f_b)) / static_cast<double>(k));
}

}  // namespace fairgame::fisher
