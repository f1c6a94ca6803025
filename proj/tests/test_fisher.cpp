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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fairgame/fisher.hpp"
#include "oracles.hpp"

using namespace fairgame;
using fisher::FisherMatrix;

namespace {

Eigen::VectorXd theta4() {
    Eigen::VectorXd t(4);
    t << 1.0, -1.0, 0.5, 2.0;
    return t;
}

double rel_frobenius_error(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth) {
    return (estimate - truth).norm() / truth.norm();
}

}  // namespace

TEST_CASE("single datum gives the rank-one outer product") {
    const models::PlayerModel model = models::DirectObservationModel::isotropic(3, 1.5);
    const models::DataSet data = models::sample(model, Eigen::VectorXd::Zero(3), 1, 42);
    const Eigen::VectorXd s = models::score(model, Eigen::VectorXd::Zero(3), data.points[0]);
    const FisherMatrix f = fisher::sample_fisher(model, Eigen::VectorXd::Zero(3), data);
    CHECK(f.matrix.isApprox(s * s.transpose(), 1e-12));
    CHECK(f.provenance == FisherMatrix::Provenance::kSampled);
    CHECK(f.sample_count == 1);
    CHECK(f.data_seed == 42);
}

TEST_CASE("sample_fisher errors on empty data") {
    const models::PlayerModel model = models::DirectObservationModel::isotropic(2, 1.0);
    models::DataSet empty;
    CHECK_THROWS_AS(fisher::sample_fisher(model, Eigen::VectorXd::Zero(2), empty),
                    std::invalid_argument);
}

TEST_CASE("sample_fisher is consistent for both model kinds") {
    const std::vector<models::PlayerModel> kinds = {
        models::DirectObservationModel::isotropic(4, 2.5),
        models::LinearGaussianModel(4, 1.0, true),
    };
    std::uint64_t seed = 5;
    for (const auto& model : kinds) {
        const models::DataSet data = models::sample(model, theta4(), 50000, seed++);
        const FisherMatrix f = fisher::sample_fisher(model, theta4(), data);
        CHECK(rel_frobenius_error(f.matrix, models::analytic_fisher_matrix(model)) < 0.02);
    }
}

TEST_CASE("sample_fisher error decays like m^-1/2") {
    const std::vector<models::PlayerModel> kinds = {
        models::DirectObservationModel::isotropic(4, 2.5),
        models::LinearGaussianModel(4, 1.0, true),
    };
    for (const auto& model : kinds) {
        const Eigen::MatrixXd truth = models::analytic_fisher_matrix(model);
        double err_small = 0.0;
        double err_large = 0.0;
        for (std::uint64_t seed = 200; seed < 205; ++seed) {
            const models::DataSet small = models::sample(model, theta4(), 10000, seed);
            const models::DataSet large = models::sample(model, theta4(), 40000, seed + 50);
            err_small += rel_frobenius_error(
                fisher::sample_fisher(model, theta4(), small).matrix, truth);
            err_large += rel_frobenius_error(
                fisher::sample_fisher(model, theta4(), large).matrix, truth);
        }
        CHECK(err_large < 0.6 * err_small);
    }
}

TEST_CASE("sample_fisher stays near the analytic value under a perturbed plug-in") {
    const models::PlayerModel model = models::DirectObservationModel::isotropic(4, 2.5);
    const models::DataSet data = models::sample(model, theta4(), 50000, 909);
    Eigen::VectorXd nudged = theta4();
    nudged.array() += 0.01;
    const FisherMatrix f = fisher::sample_fisher(model, nudged, data);
    CHECK(rel_frobenius_error(f.matrix, models::analytic_fisher_matrix(model)) < 0.05);
}

TEST_CASE("sample_fisher output is PSD for arbitrary data") {
    std::mt19937_64 rng(31);
    const models::PlayerModel model = models::LinearGaussianModel(3, 0.5, true);
    for (int rep = 0; rep < 25; ++rep) {
        const models::DataSet data =
            models::sample(model, oracles::random_vector(3, rng, 3.0), 1 + rep, rng());
        const FisherMatrix f =
            fisher::sample_fisher(model, oracles::random_vector(3, rng, 3.0), data);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(f.matrix);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("joint_fisher sums with weights") {
    const FisherMatrix a = fisher::make_fisher(Eigen::MatrixXd::Identity(2, 2));
    const FisherMatrix single = fisher::joint_fisher({{a, 1.0}});
    CHECK(single.matrix.isApprox(a.matrix, 1e-15));

    // Bundling rate r scales the determinant by r^k: |4 I_2| = 16.
    const FisherMatrix scaled = fisher::joint_fisher({{a, 4.0}});
    CHECK(std::exp(fisher::log_det_fisher(scaled)) == doctest::Approx(16.0).epsilon(1e-12));

    // Synthetic 3-player sum: 1, 0.4, and 1/1.21 times I_4.
    const FisherMatrix p1 =
        fisher::analytic_fisher(models::LinearGaussianModel(4, 1.0, true));
    const FisherMatrix p2 =
        fisher::analytic_fisher(models::DirectObservationModel::isotropic(4, 2.5));
    const FisherMatrix p3 =
        fisher::analytic_fisher(models::LinearGaussianModel(4, 1.1, false));
    const FisherMatrix joint = fisher::joint_fisher({{p1, 1.0}, {p2, 1.0}, {p3, 1.0}});
    const double scale = 1.0 + 0.4 + 1.0 / 1.21;
    CHECK(joint.matrix.isApprox(scale * Eigen::MatrixXd::Identity(4, 4), 1e-12));

    CHECK_THROWS_AS(
        fisher::joint_fisher({{a, 1.0}, {fisher::make_fisher(Eigen::MatrixXd::Identity(3, 3)), 1.0}}),
        std::invalid_argument);
    CHECK_THROWS_AS(fisher::joint_fisher({{a, -1.0}}), std::invalid_argument);
}

TEST_CASE("determinant grows when PSD mass is added") {
    std::mt19937_64 rng(47);
    for (int rep = 0; rep < 30; ++rep) {
        const FisherMatrix a = fisher::make_fisher(oracles::random_spd(3, rng));
        Eigen::MatrixXd low = Eigen::MatrixXd::Zero(3, 3);
        const Eigen::VectorXd dir = oracles::random_vector(3, rng);
        low += dir * dir.transpose();  // PSD, rank one
        const FisherMatrix sum = fisher::joint_fisher({{a, 1.0}, {fisher::make_fisher(low), 1.0}});
        CHECK(fisher::log_det_fisher(sum) >= fisher::log_det_fisher(a) - 1e-12);
    }
}

TEST_CASE("gen_fisher_ratio") {
    const FisherMatrix a = fisher::make_fisher(Eigen::MatrixXd::Constant(1, 1, 8.0));
    const FisherMatrix b = fisher::make_fisher(Eigen::MatrixXd::Constant(1, 1, 2.0));
    CHECK(fisher::gen_fisher_ratio(a, a, 1) == doctest::Approx(1.0));
    CHECK(fisher::gen_fisher_ratio(a, b, 1) == doctest::Approx(4.0));

    const FisherMatrix c = fisher::make_fisher(4.0 * Eigen::MatrixXd::Identity(2, 2));
    const FisherMatrix d = fisher::make_fisher(Eigen::MatrixXd::Identity(2, 2));
    CHECK(fisher::gen_fisher_ratio(c, d, 2) == doctest::Approx(4.0));

    std::mt19937_64 rng(53);
    for (int rep = 0; rep < 20; ++rep) {
        const FisherMatrix x = fisher::make_fisher(oracles::random_spd(3, rng));
        const FisherMatrix y = fisher::make_fisher(oracles::random_spd(3, rng));
        CHECK(fisher::gen_fisher_ratio(x, y, 3) * fisher::gen_fisher_ratio(y, x, 3) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("rank-deficient Fisher is legal to hold, illegal to log-det") {
    const Eigen::VectorXd dir = Eigen::VectorXd::Ones(3);
    const FisherMatrix rank_one = fisher::make_fisher(dir * dir.transpose());
    CHECK(rank_one.dim() == 3);
    CHECK_THROWS_AS(fisher::log_det_fisher(rank_one), std::invalid_argument);

    Eigen::MatrixXd indefinite = Eigen::MatrixXd::Identity(2, 2);
    indefinite(1, 1) = -0.5;
    CHECK_THROWS_AS(fisher::make_fisher(indefinite), std::invalid_argument);
}
