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

#include "fairgame/game.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "fairgame/gauss.hpp"
#include "fairgame/util.hpp"

namespace fairgame::game {

namespace {

constexpr int kExactEnumerationCap = 20;

// Permutations are processed in fixed-size chunks, each with its own derived
// RNG substream, so chunk results can be computed on any worker and combined
// in index order with bit-identical totals.
constexpr std::int64_t kMcChunk = 4096;

void check_player_count(int n, const char* what) {
    if (n < 1 || n > CharacteristicFunction::kMaxPlayers) {
        throw std::invalid_argument(std::string(what) + ": player count " + std::to_string(n) +
                                    " outside 1.." +
                                    std::to_string(CharacteristicFunction::kMaxPlayers));
    }
}

// |S|! (n-|S|-1)! / n! for sizes 0..n-1, folded to double from exact
// 64-bit factorials (n <= 20 keeps n! in range).
std::vector<double> shapley_weights(int n) {
    std::vector<long double> factorial(static_cast<std::size_t>(n) + 1, 1.0L);
    for (int i = 1; i <= n; ++i) factorial[i] = factorial[i - 1] * i;
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        w[s] = static_cast<double>(factorial[s] * factorial[n - s - 1] / factorial[n]);
    }
    return w;
}

std::vector<double> banzhaf_weights(int n) {
    return std::vector<double>(static_cast<std::size_t>(n), std::ldexp(1.0, -(n - 1)));
}

std::string coalition_to_string(Coalition s, int n) {
    std::string out = "{";
    bool first = true;
    for (int i = 0; i < n; ++i) {
        if (s & (1u << i)) {
            if (!first) out += ",";
            out += std::to_string(i);
            first = false;
        }
    }
    return out + "}";
}

}  // namespace

CharacteristicFunction::CharacteristicFunction(int n) : n_(n) {
    check_player_count(n, "CharacteristicFunction");
    values_.assign(std::size_t{1} << n, 0.0);
}

CharacteristicFunction::CharacteristicFunction(int n, std::vector<double> values) : n_(n) {
    check_player_count(n, "CharacteristicFunction");
    if (values.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("CharacteristicFunction: expected " +
                                    std::to_string(std::size_t{1} << n) + " values, got " +
                                    std::to_string(values.size()));
    }
    if (values[0] != 0.0) {
        throw std::invalid_argument("CharacteristicFunction: empty coalition value must be 0");
    }
    values_ = std::move(values);
}

double CharacteristicFunction::value(Coalition s) const {
    if (s >= coalitions()) {
        throw std::invalid_argument("CharacteristicFunction: coalition mask out of range");
    }
    return values_[s];
}

void CharacteristicFunction::set_value(Coalition s, double v) {
    if (s >= coalitions()) {
        throw std::invalid_argument("CharacteristicFunction: coalition mask out of range");
    }
    if (s == 0 && v != 0.0) {
        throw std::invalid_argument("CharacteristicFunction: empty coalition value must stay 0");
    }
    values_[s] = v;
}

Attribution linear_attribution(const CharacteristicFunction& v,
                               const std::vector<double>& weights_by_size, SolutionConcept tag) {
    const int n = v.players();
    if (n > kExactEnumerationCap) {
        throw std::invalid_argument("linear_attribution: n = " + std::to_string(n) +
                                    " exceeds the exact enumeration cap of " +
                                    std::to_string(kExactEnumerationCap) +
                                    "; use shapley_mc instead");
    }
    if (weights_by_size.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("linear_attribution: weight table must have n entries");
    }
    Attribution out;
    out.concept_tag = tag;
    out.values.assign(static_cast<std::size_t>(n), 0.0);
    const std::uint32_t full = v.coalitions();
    for (int i = 0; i < n; ++i) {
        const Coalition bit = 1u << i;
        double phi = 0.0;
        for (Coalition s = 0; s < full; ++s) {
            if (s & bit) continue;
            const int size = std::popcount(s);
            phi += weights_by_size[size] * (v.value(s | bit) - v.value(s));
        }
        out.values[i] = phi;
    }
    return out;
}

Attribution shapley_exact(const CharacteristicFunction& v) {
    return linear_attribution(v, shapley_weights(v.players()), SolutionConcept::kShapley);
}

Attribution banzhaf(const CharacteristicFunction& v) {
    return linear_attribution(v, banzhaf_weights(v.players()), SolutionConcept::kBanzhaf);
}

Attribution shapley_mc(const CharacteristicFunction& v, std::int64_t permutations,
                       std::uint64_t seed) {
    const int n = v.players();
    if (permutations < 1) {
        throw std::invalid_argument("shapley_mc: permutations must be >= 1");
    }
    const std::int64_t chunks = (permutations + kMcChunk - 1) / kMcChunk;
    std::vector<std::vector<double>> sums(static_cast<std::size_t>(chunks));
    std::vector<std::vector<double>> sums_sq(static_cast<std::size_t>(chunks));

    parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
        const std::int64_t begin = static_cast<std::int64_t>(c) * kMcChunk;
        const std::int64_t end = std::min(begin + kMcChunk, permutations);
        std::mt19937_64 rng(derive_seed(seed, c));
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::vector<double> local(static_cast<std::size_t>(n), 0.0);
        std::vector<double> local_sq(static_cast<std::size_t>(n), 0.0);
        for (std::int64_t p = begin; p < end; ++p) {
            std::shuffle(order.begin(), order.end(), rng);
            Coalition s = 0;
            double prev = 0.0;
            for (int pos = 0; pos < n; ++pos) {
                s |= 1u << order[pos];
                const double cur = v.value(s);
                const double marginal = cur - prev;
                local[order[pos]] += marginal;
                local_sq[order[pos]] += marginal * marginal;
                prev = cur;
            }
        }
        sums[c] = std::move(local);
        sums_sq[c] = std::move(local_sq);
    });

    Attribution out;
    out.concept_tag = SolutionConcept::kShapley;
    out.exact = false;
    out.samples = permutations;
    out.seed = seed;
    out.values.assign(static_cast<std::size_t>(n), 0.0);
    out.std_errors.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> total_sq(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t c = 0; c < chunks; ++c) {
        for (int i = 0; i < n; ++i) {
            out.values[i] += sums[c][i];
            total_sq[i] += sums_sq[c][i];
        }
    }
    const double count = static_cast<double>(permutations);
    for (int i = 0; i < n; ++i) {
        out.values[i] /= count;
        if (permutations > 1) {
            const double var =
                std::max(0.0, (total_sq[i] - count * out.values[i] * out.values[i]) /
                                  (count - 1.0));
            out.std_errors[i] = std::sqrt(var / count);
        }
    }
    return out;
}

CharacteristicFunction limiting_game(const std::vector<fisher::FisherMatrix>& fishers) {
    const int n = static_cast<int>(fishers.size());
    check_player_count(n, "limiting_game");
    const int k = fishers.front().dim();
    for (const auto& f : fishers) {
        if (f.dim() != k) {
            throw std::invalid_argument("limiting_game: Fisher matrices must share one dimension");
        }
    }
    CharacteristicFunction v(n);
    const std::uint32_t full = v.coalitions();
    for (Coalition s = 1; s < full; ++s) {
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < n; ++i) {
            if (s & (1u << i)) sum += fishers[i].matrix;
        }
        try {
            v.set_value(s, 0.5 * gauss::log_det(sum));
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("limiting_game: joint Fisher of coalition " +
                                        coalition_to_string(s, n) + " is singular");
        }
    }
    return v;
}

double delta_pair(const CharacteristicFunction& v, int i, int j, SolutionConcept concept_tag) {
    const int n = v.players();
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
        throw std::invalid_argument("delta_pair: invalid player pair (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
    }
    const Attribution att =
        concept_tag == SolutionConcept::kShapley ? shapley_exact(v) : banzhaf(v);
    return att.values[i] - att.values[j];
}

std::vector<double> propagated_attribution_errors(int n,
                                                  const std::vector<double>& value_std_errors,
                                                  SolutionConcept concept_tag) {
    check_player_count(n, "propagated_attribution_errors");
    if (value_std_errors.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("propagated_attribution_errors: need one error per coalition");
    }
    const std::vector<double> weights = concept_tag == SolutionConcept::kShapley
                                            ? shapley_weights(n)
                                            : banzhaf_weights(n);
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    const std::uint32_t full = 1u << n;
    for (int i = 0; i < n; ++i) {
        const Coalition bit = 1u << i;
        double var = 0.0;
        for (Coalition s = 0; s < full; ++s) {
            if (s & bit) continue;
            const double w = weights[static_cast<std::size_t>(std::popcount(s))];
            const double se_with = value_std_errors[s | bit];
            const double se_without = value_std_errors[s];
            var += w * w * (se_with * se_with + se_without * se_without);
        }
        out[i] = std::sqrt(var);
    }
    return out;
}

}  // namespace fairgame::game
