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

#include <bit>
#include <cmath>
#include <random>

#include "fairgame/game.hpp"
#include "oracles.hpp"

using fairgame::game::Attribution;
using fairgame::game::CharacteristicFunction;
using fairgame::game::Coalition;
using fairgame::game::SolutionConcept;
namespace fg = fairgame::game;

namespace {

CharacteristicFunction random_game(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> unif(-scale, scale);
    CharacteristicFunction v(n);
    for (Coalition s = 1; s < v.coalitions(); ++s) v.set_value(s, unif(rng));
    return v;
}

// Brute-force Shapley by averaging marginal contributions over all n!
// player orderings. Usable for small n only; that's the point.
std::vector<double> shapley_by_orderings(const CharacteristicFunction& v) {
    const int n = v.players();
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::vector<double> phi(static_cast<std::size_t>(n), 0.0);
    std::int64_t count = 0;
    do {
        Coalition s = 0;
        double prev = 0.0;
        for (int i : order) {
            s |= 1u << i;
            phi[static_cast<std::size_t>(i)] += v.value(s) - prev;
            prev = v.value(s);
        }
        ++count;
    } while (std::next_permutation(order.begin(), order.end()));
    for (double& p : phi) p /= static_cast<double>(count);
    return phi;
}

// v(S) = |S|^2.
CharacteristicFunction size_squared_game(int n) {
    CharacteristicFunction v(n);
    for (Coalition s = 1; s < v.coalitions(); ++s) {
        const double size = std::popcount(s);
        v.set_value(s, size * size);
    }
    return v;
}

}  // namespace

TEST_CASE("characteristic function pins the empty coalition at zero") {
    CharacteristicFunction v(3);
    CHECK(v.value(0) == 0.0);
    CHECK_THROWS_AS(v.set_value(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(CharacteristicFunction(2, {1.0, 0.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(v.value(8), std::invalid_argument);
}

TEST_CASE("shapley on the worked 2-player game") {
    CharacteristicFunction v(2, {0.0, 1.0, 3.0, 6.0});
    const Attribution att = fg::shapley_exact(v);
    // Ordering (0,1): marginals 1, 5; ordering (1,0): marginals 3, 3.
    CHECK(att.values[0] == doctest::Approx(2.0));
    CHECK(att.values[1] == doctest::Approx(4.0));
    CHECK(att.exact);
    CHECK(fg::delta_pair(v, 0, 1, SolutionConcept::kShapley) == doctest::Approx(-2.0));
}

TEST_CASE("shapley matches full ordering enumeration") {
    std::mt19937_64 rng(13);
    for (int n : {2, 3, 4, 5}) {
        const CharacteristicFunction v = random_game(n, rng);
        const Attribution att = fg::shapley_exact(v);
        const std::vector<double> expected = shapley_by_orderings(v);
        for (int i = 0; i < n; ++i) {
            CHECK(att.values[i] == doctest::Approx(expected[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("symmetric game splits evenly") {
    const Attribution att = fg::shapley_exact(size_squared_game(3));
    for (double phi : att.values) CHECK(phi == doctest::Approx(3.0));
}

TEST_CASE("null player gets zero under both concepts") {
    std::mt19937_64 rng(19);
    // Player 2's marginal contribution is zero everywhere: v ignores bit 2.
    CharacteristicFunction v(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (Coalition s = 1; s < 8; ++s) {
        const Coalition without = s & ~4u;
        v.set_value(s, without == 0 ? 0.0 : (s == without ? unif(rng) : v.value(without)));
    }
    CHECK(fg::shapley_exact(v).values[2] == doctest::Approx(0.0));
    CHECK(fg::banzhaf(v).values[2] == doctest::Approx(0.0));
}

TEST_CASE("banzhaf values") {
    // Size-squared game at n=3: marginals 1, 3, 3, 5 over the four
    // coalitions of the other two players, so phi = 12 / 4 = 3.
    const Attribution att = fg::banzhaf(size_squared_game(3));
    for (double phi : att.values) CHECK(phi == doctest::Approx(3.0));

    // At n=2 both weight tables are 1/2, 1/2: identical results, bit for bit.
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        const CharacteristicFunction v = random_game(2, rng);
        const Attribution s = fg::shapley_exact(v);
        const Attribution b = fg::banzhaf(v);
        CHECK(s.values[0] == b.values[0]);
        CHECK(s.values[1] == b.values[1]);
    }
}

TEST_CASE("efficiency, symmetry, and linearity on random games") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const CharacteristicFunction v = random_game(n, rng);
        const Attribution att = fg::shapley_exact(v);

        double total = 0.0;
        for (double phi : att.values) total += phi;
        CHECK(total == doctest::Approx(v.value(v.coalitions() - 1)).epsilon(1e-9));

        // Linearity: phi(a v + b w) = a phi(v) + b phi(w).
        const CharacteristicFunction w = random_game(n, rng);
        const double a = 0.7;
        const double b = -1.3;
        CharacteristicFunction combo(n);
        for (Coalition s = 1; s < v.coalitions(); ++s) {
            combo.set_value(s, a * v.value(s) + b * w.value(s));
        }
        const Attribution att_w = fg::shapley_exact(w);
        const Attribution att_combo = fg::shapley_exact(combo);
        for (int i = 0; i < n; ++i) {
            CHECK(att_combo.values[i] ==
                  doctest::Approx(a * att.values[i] + b * att_w.values[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("swapping two players swaps their attributions") {
    std::mt19937_64 rng(37);
    const int n = 5;
    const CharacteristicFunction v = random_game(n, rng);
    const int a = 1;
    const int b = 3;
    CharacteristicFunction swapped(n);
    for (Coalition s = 1; s < v.coalitions(); ++s) {
        Coalition t = s & ~((1u << a) | (1u << b));
        if (s & (1u << a)) t |= 1u << b;
        if (s & (1u << b)) t |= 1u << a;
        swapped.set_value(t, v.value(s));
    }
    const Attribution att = fg::shapley_exact(v);
    const Attribution att_swapped = fg::shapley_exact(swapped);
    CHECK(att_swapped.values[a] == doctest::Approx(att.values[b]).epsilon(1e-12));
    CHECK(att_swapped.values[b] == doctest::Approx(att.values[a]).epsilon(1e-12));
    for (int i = 0; i < n; ++i) {
        if (i != a && i != b) {
            CHECK(att_swapped.values[i] == doctest::Approx(att.values[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("delta_pair is invariant to constant games") {
    std::mt19937_64 rng(41);
    const CharacteristicFunction v = random_game(4, rng);
    const double base = fg::delta_pair(v, 0, 2, SolutionConcept::kShapley);
    for (double c : {-2.5, 0.1, 10.0}) {
        CharacteristicFunction shifted(4);
        for (Coalition s = 1; s < v.coalitions(); ++s) shifted.set_value(s, v.value(s) + c);
        CHECK(fg::delta_pair(shifted, 0, 2, SolutionConcept::kShapley) ==
              doctest::Approx(base).epsilon(1e-9));
        CHECK(fg::delta_pair(shifted, 0, 2, SolutionConcept::kBanzhaf) ==
              doctest::Approx(fg::delta_pair(v, 0, 2, SolutionConcept::kBanzhaf)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(fg::delta_pair(v, 1, 1, SolutionConcept::kShapley), std::invalid_argument);
    CHECK_THROWS_AS(fg::delta_pair(v, 0, 4, SolutionConcept::kShapley), std::invalid_argument);
}

TEST_CASE("shapley_mc: single permutation at n=2 is one ordering's marginals") {
    CharacteristicFunction v(2, {0.0, 1.0, 3.0, 6.0});
    const Attribution att = fg::shapley_mc(v, 1, 99);
    const bool first_ordering = att.values[0] == 1.0 && att.values[1] == 5.0;
    const bool second_ordering = att.values[0] == 3.0 && att.values[1] == 3.0;
    CHECK((first_ordering || second_ordering));
    CHECK_FALSE(att.exact);
    CHECK(att.samples == 1);
    CHECK(att.seed == 99);
}

TEST_CASE("shapley_mc approaches the exact values") {
    std::mt19937_64 rng(11);
    const CharacteristicFunction v = random_game(8, rng);
    const Attribution exact = fg::shapley_exact(v);
    const Attribution mc = fg::shapley_mc(v, 200000, 17);
    double max_phi = 0.0;
    for (double phi : exact.values) max_phi = std::max(max_phi, std::abs(phi));
    for (int i = 0; i < 8; ++i) {
        CHECK(std::abs(mc.values[i] - exact.values[i]) < 0.01 * max_phi);
    }
}

TEST_CASE("shapley_mc symmetric game components agree within noise") {
    const Attribution att = fg::shapley_mc(size_squared_game(4), 40000, 7);
    for (int i = 1; i < 4; ++i) {
        const double se = std::hypot(att.std_errors[0], att.std_errors[i]);
        CHECK(std::abs(att.values[i] - att.values[0]) <= 3.0 * se);
    }
}

TEST_CASE("shapley_mc error roughly halves with 4x the permutations") {
    std::mt19937_64 rng(53);
    const CharacteristicFunction v = random_game(6, rng);
    const Attribution exact = fg::shapley_exact(v);
    auto max_err = [&](const Attribution& att) {
        double err = 0.0;
        for (int i = 0; i < 6; ++i) err = std::max(err, std::abs(att.values[i] - exact.values[i]));
        return err;
    };
    // A single realized max-error is too noisy to expose the 1/sqrt rate, so
    // each side of a seed pair averages eight replicate estimates.
    auto mean_err = [&](std::int64_t permutations, std::uint64_t base_seed) {
        double total = 0.0;
        for (std::uint64_t r = 0; r < 8; ++r) {
            total += max_err(fg::shapley_mc(v, permutations, base_seed + 7919 * r));
        }
        return total / 8.0;
    };
    int violations = 0;
    for (std::uint64_t seed = 100; seed < 105; ++seed) {
        const double e1 = mean_err(20000, seed);
        const double e4 = mean_err(80000, seed + 1000);
        if (!(e4 <= 0.6 * e1)) ++violations;
    }
    CHECK(violations <= 1);
}

TEST_CASE("shapley_mc is invariant to the worker cap") {
    std::mt19937_64 rng(61);
    const CharacteristicFunction v = random_game(5, rng);
    setenv("FAIRGAME_THREADS", "1", 1);
    const Attribution serial = fg::shapley_mc(v, 50000, 5);
    setenv("FAIRGAME_THREADS", "7", 1);
    const Attribution parallel = fg::shapley_mc(v, 50000, 5);
    unsetenv("FAIRGAME_THREADS");
    for (int i = 0; i < 5; ++i) {
        CHECK(serial.values[i] == parallel.values[i]);
        CHECK(serial.std_errors[i] == parallel.std_errors[i]);
    }
}

TEST_CASE("exact enumeration cap directs large games to shapley_mc") {
    CharacteristicFunction v(21);
    CHECK_THROWS_WITH_AS(fg::shapley_exact(v), doctest::Contains("shapley_mc"),
                         std::invalid_argument);
}

TEST_CASE("limiting game values and errors") {
    using fairgame::fisher::FisherMatrix;
    using fairgame::fisher::make_fisher;

    // Scalar case: v({0}) = 0.5 ln 2, v({1}) = 0.5 ln 8, v({0,1}) = 0.5 ln 10.
    std::vector<FisherMatrix> fishers{make_fisher(Eigen::MatrixXd::Constant(1, 1, 2.0)),
                                      make_fisher(Eigen::MatrixXd::Constant(1, 1, 8.0))};
    const CharacteristicFunction v = fg::limiting_game(fishers);
    CHECK(v.value(1) == doctest::Approx(0.5 * std::log(2.0)));
    CHECK(v.value(2) == doctest::Approx(0.5 * std::log(8.0)));
    CHECK(v.value(3) == doctest::Approx(0.5 * std::log(10.0)));

    // Identical Fishers: equal singleton values, so the pair difference is 0.
    std::mt19937_64 rng(43);
    const Eigen::MatrixXd shared = oracles::random_spd(3, rng);
    const CharacteristicFunction equal =
        fg::limiting_game({make_fisher(shared), make_fisher(shared)});
    CHECK(fg::delta_pair(equal, 0, 1, SolutionConcept::kShapley) == doctest::Approx(0.0));

    // Singular singleton coalition is reported by name.
    std::vector<FisherMatrix> singular{make_fisher(Eigen::MatrixXd::Zero(2, 2)),
                                       make_fisher(Eigen::MatrixXd::Identity(2, 2))};
    CHECK_THROWS_WITH_AS(fg::limiting_game(singular), doctest::Contains("{0}"),
                         std::invalid_argument);
}

TEST_CASE("propagated attribution errors") {
    // Independent unit errors on every nonempty coalition: variance per
    // player is sum over subsets of w^2 times the two coalition errors.
    const int n = 2;
    std::vector<double> se(4, 1.0);
    se[0] = 0.0;
    const auto noise = fg::propagated_attribution_errors(n, se, SolutionConcept::kShapley);
    // phi_0 terms: S = {} weight .5 (errors 0, 1), S = {1} weight .5 (1, 1).
    const double expected = std::sqrt(0.25 * 1.0 + 0.25 * 2.0);
    CHECK(noise[0] == doctest::Approx(expected));
    CHECK(noise[1] == doctest::Approx(expected));
}
