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

#include "fairgame/gauss.hpp"
#include "oracles.hpp"

using fairgame::gauss::BoxUniform;
using fairgame::gauss::Gaussian;

namespace {

Gaussian gauss1d(double mean, double var) {
    return Gaussian(Eigen::VectorXd::Constant(1, mean), Eigen::MatrixXd::Constant(1, 1, var));
}

double kl_quadrature_1d(const Gaussian& p, const Gaussian& q) {
    const double mu = p.mean()[0];
    const double sd = std::sqrt(p.covariance()(0, 0));
    return oracles::adaptive_simpson(
        [&](double x) {
            Eigen::VectorXd v = Eigen::VectorXd::Constant(1, x);
            const double lp = p.log_density(v);
            return std::exp(lp) * (lp - q.log_density(v));
        },
        mu - 14.0 * sd, mu + 14.0 * sd, 1e-10);
}

double kl_quadrature_2d(const Gaussian& p, const Gaussian& q) {
    const double s0 = std::sqrt(p.covariance()(0, 0));
    const double s1 = std::sqrt(p.covariance()(1, 1));
    return oracles::adaptive_quad_2d(
        [&](double x, double y) {
            Eigen::VectorXd v(2);
            v << x, y;
            const double lp = p.log_density(v);
            return std::exp(lp) * (lp - q.log_density(v));
        },
        p.mean()[0] - 10.0 * s0, p.mean()[0] + 10.0 * s0, p.mean()[1] - 10.0 * s1,
        p.mean()[1] + 10.0 * s1, 1e-8);
}

}  // namespace

TEST_CASE("log_det basics") {
    CHECK(fairgame::gauss::log_det(Eigen::MatrixXd::Identity(2, 2)) == doctest::Approx(0.0));
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 8.0;
    CHECK(fairgame::gauss::log_det(d) == doctest::Approx(std::log(16.0)).epsilon(1e-12));
}

TEST_CASE("log_det matches cofactor expansion on random SPD matrices") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        const Eigen::MatrixXd m = oracles::random_spd(4, rng);
        const double expected = std::log(oracles::cofactor_det(m));
        CHECK(fairgame::gauss::log_det(m) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("log_det rejects non-SPD input naming the failing minor") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
    m(2, 2) = -1.0;
    CHECK_THROWS_WITH_AS(fairgame::gauss::log_det(m),
                         doctest::Contains("leading minor 3"), std::invalid_argument);
}

TEST_CASE("log_det is additive on commuting SPD pairs") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::MatrixXd m = oracles::random_spd(3, rng);
        // Polynomials in one matrix commute; products of SPD polynomial
        // values with positive coefficients stay SPD.
        const Eigen::MatrixXd a = m * m + 2.0 * m + Eigen::MatrixXd::Identity(3, 3);
        const Eigen::MatrixXd b = 0.5 * m + 3.0 * Eigen::MatrixXd::Identity(3, 3);
        Eigen::MatrixXd ab = a * b;
        ab = 0.5 * (ab + ab.transpose());
        CHECK(fairgame::gauss::log_det(ab) ==
              doctest::Approx(fairgame::gauss::log_det(a) + fairgame::gauss::log_det(b))
                  .epsilon(1e-9));
    }
}

TEST_CASE("Gaussian construction validates symmetry and positivity") {
    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, 0.1, 1.0;
    CHECK_THROWS_AS(Gaussian(Eigen::VectorXd::Zero(2), asym), std::invalid_argument);

    Eigen::MatrixXd indef(2, 2);
    indef << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(Gaussian(Eigen::VectorXd::Zero(2), indef), std::invalid_argument);

    CHECK_THROWS_AS(Gaussian(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(2, 2)),
                    std::invalid_argument);
}

TEST_CASE("entropy closed forms") {
    CHECK(fairgame::gauss::entropy(gauss1d(0.0, 1.0)) ==
          doctest::Approx(0.5 * std::log(2.0 * M_PI * std::exp(1.0))).epsilon(1e-12));

    // Mean invariance.
    std::mt19937_64 rng(3);
    const Eigen::MatrixXd cov = oracles::random_spd(3, rng);
    const Gaussian centered(Eigen::VectorXd::Zero(3), cov);
    const Gaussian shifted(oracles::random_vector(3, rng, 5.0), cov);
    CHECK(fairgame::gauss::entropy(centered) == fairgame::gauss::entropy(shifted));

    // -H(N(theta, I^-1/m)) = (k/2) ln(m / 2 pi e) + (1/2) ln|I| at k=1.
    const double m = 100.0;
    const double fisher = 4.0;
    const Gaussian bvm = gauss1d(0.7, 1.0 / (fisher * m));
    const double lhs = -fairgame::gauss::entropy(bvm);
    const double rhs = 0.5 * std::log(m / (2.0 * M_PI * std::exp(1.0))) + 0.5 * std::log(fisher);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("entropy shifts by (k/2) ln c under covariance scaling") {
    std::mt19937_64 rng(11);
    const Eigen::MatrixXd cov = oracles::random_spd(4, rng);
    const Gaussian p(Eigen::VectorXd::Zero(4), cov);
    for (double c : {0.3, 2.0, 17.5}) {
        const Gaussian scaled(Eigen::VectorXd::Zero(4), c * cov);
        CHECK(fairgame::gauss::entropy(scaled) - fairgame::gauss::entropy(p) ==
              doctest::Approx(0.5 * 4 * std::log(c)).epsilon(1e-10));
    }
}

TEST_CASE("kl_gauss closed form") {
    const Gaussian p = gauss1d(1.0, 1.0);
    const Gaussian q = gauss1d(0.0, 1.0);
    CHECK(fairgame::gauss::kl_gauss(p, p) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(fairgame::gauss::kl_gauss(p, p)) < 1e-12);
    CHECK(fairgame::gauss::kl_gauss(p, q) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(
        fairgame::gauss::kl_gauss(p, Gaussian(Eigen::VectorXd::Zero(2),
                                              Eigen::MatrixXd::Identity(2, 2))),
        std::invalid_argument);
}

TEST_CASE("kl_gauss is non-negative on random pairs") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 200; ++rep) {
        const int k = 1 + static_cast<int>(rng() % 4);
        const Gaussian p(oracles::random_vector(k, rng), oracles::random_spd(k, rng));
        const Gaussian q(oracles::random_vector(k, rng), oracles::random_spd(k, rng));
        CHECK(fairgame::gauss::kl_gauss(p, q) >= -1e-12);
    }
}

TEST_CASE("kl_gauss matches 2-d tensor quadrature on the spec pair") {
    Eigen::MatrixXd cov_p = Eigen::MatrixXd::Zero(2, 2);
    cov_p(0, 0) = 0.5;
    cov_p(1, 1) = 2.0;
    Eigen::VectorXd mu_p(2);
    mu_p << 1.0, 0.0;
    const Gaussian p(mu_p, cov_p);
    const Gaussian q(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
    CHECK(fairgame::gauss::kl_gauss(p, q) ==
          doctest::Approx(kl_quadrature_2d(p, q)).epsilon(1e-5));
}

TEST_CASE("kl_gauss matches adaptive quadrature on seeded cases") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> unif(0.4, 2.5);
    for (int rep = 0; rep < 10; ++rep) {
        const Gaussian p = gauss1d(unif(rng) - 1.5, unif(rng));
        const Gaussian q = gauss1d(unif(rng) - 1.5, unif(rng));
        const double quad = kl_quadrature_1d(p, q);
        CHECK(fairgame::gauss::kl_gauss(p, q) == doctest::Approx(quad).epsilon(1e-6));
    }
    for (int rep = 0; rep < 10; ++rep) {
        Eigen::MatrixXd cov_p = Eigen::MatrixXd::Zero(2, 2);
        cov_p(0, 0) = unif(rng);
        cov_p(1, 1) = unif(rng);
        cov_p(0, 1) = cov_p(1, 0) = 0.2 * std::min(cov_p(0, 0), cov_p(1, 1));
        const Gaussian p(oracles::random_vector(2, rng, 0.8), cov_p);
        const Gaussian q(Eigen::VectorXd::Zero(2), unif(rng) * Eigen::MatrixXd::Identity(2, 2));
        const double quad = kl_quadrature_2d(p, q);
        CHECK(std::abs(fairgame::gauss::kl_gauss(p, q) - quad) < 1e-4);
    }
}

TEST_CASE("BoxUniform validation and membership") {
    Eigen::VectorXd lo(2);
    Eigen::VectorXd hi(2);
    lo << -1.0, 0.0;
    hi << 1.0, 0.5;
    const BoxUniform box(lo, hi);
    CHECK(box.log_volume() == doctest::Approx(std::log(2.0 * 0.5)));
    Eigen::VectorXd inside(2);
    inside << 0.0, 0.25;
    CHECK(box.contains(inside));
    inside << 0.0, 0.75;
    CHECK_FALSE(box.contains(inside));

    CHECK_THROWS_AS(BoxUniform(hi, lo), std::invalid_argument);  // zero/negative width
}

TEST_CASE("extended KL vanishes when P misses the box") {
    const Gaussian p = gauss1d(100.0, 1.0);  // 100 sigma away from the box
    const BoxUniform box(Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0));
    const auto est = fairgame::gauss::extended_kl_gauss_box(p, box, 20000, 42);
    CHECK(std::abs(est.estimate) <= 3.0 * est.std_error + 1e-12);
}

TEST_CASE("extended KL approaches -entropy + log volume for a covering box") {
    const Gaussian p = gauss1d(0.3, 0.04);  // sd 0.2, box covers +-10 sigma
    const BoxUniform box(Eigen::VectorXd::Constant(1, 0.3 - 2.0),
                         Eigen::VectorXd::Constant(1, 0.3 + 2.0));
    const auto est = fairgame::gauss::extended_kl_gauss_box(p, box, 200000, 5);
    const double expected = -fairgame::gauss::entropy(p) + box.log_volume();
    CHECK(std::abs(est.estimate - expected) <= 3.0 * est.std_error);
}

TEST_CASE("extended KL matches 1-d quadrature") {
    const Gaussian p = gauss1d(0.0, 0.01);
    const BoxUniform box(Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0));
    const double log_vol = box.log_volume();
    const double quad = oracles::adaptive_simpson(
        [&](double x) {
            Eigen::VectorXd v = Eigen::VectorXd::Constant(1, x);
            const double lp = p.log_density(v);
            return std::exp(lp) * (lp + log_vol);
        },
        -1.0, 1.0, 1e-10);
    const auto est = fairgame::gauss::extended_kl_gauss_box(p, box, 4000000, 12);
    CHECK(std::abs(est.estimate - quad) < 1e-3);
}

TEST_CASE("extended KL error decays as the box captures more mass") {
    // Common draws across the three widths; the residual against the
    // full-mass limit -H(P) + log vol shrinks as the box widens.
    const Gaussian p = gauss1d(0.0, 1.0);
    const std::uint64_t seed = 2024;
    const std::int64_t samples = 16000000;
    double prev = std::numeric_limits<double>::infinity();
    double prev_se = 0.0;
    int step = 0;
    for (double width : {4.0, 6.0, 10.0}) {
        const BoxUniform box(Eigen::VectorXd::Constant(1, -width),
                             Eigen::VectorXd::Constant(1, width));
        const auto est = fairgame::gauss::extended_kl_gauss_box(p, box, samples, seed);
        const double err =
            std::abs(est.estimate - (-fairgame::gauss::entropy(p) + box.log_volume()));
        if (step == 1) {
            CHECK(err < prev);  // 4 sigma -> 6 sigma decay is well above noise
        } else if (step == 2) {
            CHECK(err <= prev + 3.0 * std::sqrt(est.std_error * est.std_error +
                                                prev_se * prev_se));
        }
        prev = err;
        prev_se = est.std_error;
        ++step;
    }
}

TEST_CASE("extended KL preconditions") {
    const Gaussian p = gauss1d(0.0, 1.0);
    const BoxUniform box(Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0));
    CHECK_THROWS_AS(fairgame::gauss::extended_kl_gauss_box(p, box, 999, 1),
                    std::invalid_argument);
}

TEST_CASE("TV estimate: identical distributions give exactly zero") {
    std::mt19937_64 rng(5);
    const Gaussian p(oracles::random_vector(3, rng), oracles::random_spd(3, rng));
    CHECK(fairgame::gauss::tv_estimate_mc(p, p, 5000, 9) == 0.0);
}

TEST_CASE("TV estimate matches the closed form for equal-variance 1-d pair") {
    const Gaussian p = gauss1d(0.0, 1.0);
    const Gaussian q = gauss1d(3.0, 1.0);
    const double expected = 2.0 * oracles::phi_cdf(1.5) - 1.0;  // approx 0.8664
    const double est = fairgame::gauss::tv_estimate_mc(p, q, 400000, 31);
    CHECK(est == doctest::Approx(expected).epsilon(0.0).scale(1.0).epsilon(0.012));
    CHECK(est >= 0.0);
    CHECK(est <= 1.0);
}

TEST_CASE("TV estimate rejects mismatched dimensions") {
    const Gaussian p = gauss1d(0.0, 1.0);
    const Gaussian q(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
    CHECK_THROWS_AS(fairgame::gauss::tv_estimate_mc(p, q, 2000, 3), std::invalid_argument);
}

TEST_CASE("Gaussian sampling is deterministic per seed") {
    std::mt19937_64 rng_a(77);
    std::mt19937_64 rng_b(77);
    const Gaussian p(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3));
    for (int i = 0; i < 10; ++i) {
        CHECK(p.sample(rng_a) == p.sample(rng_b));
    }
}
