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
#include <vector>

#include "fairgame/fisher.hpp"

namespace fairgame::game {

/// A coalition is a bitmask over player indices 0..n-1.
using Coalition = std::uint32_t;

/// Dense characteristic function over all 2^n coalitions, indexed by
/// bitmask. The empty coalition's value is pinned to zero; all other values
/// are arbitrary reals.
class CharacteristicFunction {
  public:
    static constexpr int kMaxPlayers = 24;

    explicit CharacteristicFunction(int n);
    CharacteristicFunction(int n, std::vector<double> values);

    int players() const { return n_; }
    std::uint32_t coalitions() const { return 1u << n_; }
    double value(Coalition s) const;
    void set_value(Coalition s, double v);
    const std::vector<double>& values() const { return values_; }

  private:
    int n_;
    std::vector<double> values_;
};

enum class SolutionConcept { kShapley, kBanzhaf };

struct Attribution {
    std::vector<double> values;
    SolutionConcept concept_tag = SolutionConcept::kShapley;
    bool exact = true;
    std::int64_t samples = 0;        // Monte-Carlo permutation count, 0 when exact
    std::uint64_t seed = 0;          // Monte-Carlo seed, 0 when exact
    std::vector<double> std_errors;  // per player, empty when exact
};

/// Marginal-sum attribution with an injectable per-coalition-size weight
/// table: phi_i = sum over S not containing i of weights[|S|] *
/// [v(S + i) - v(S)]. Shapley and Banzhaf are the two shipped weightings.
Attribution linear_attribution(const CharacteristicFunction& v,
                               const std::vector<double>& weights_by_size,
                               SolutionConcept tag);

/// Exact Shapley values by full enumeration; n <= 20.
Attribution shapley_exact(const CharacteristicFunction& v);

/// Exact Banzhaf values by full enumeration; n <= 20.
Attribution banzhaf(const CharacteristicFunction& v);

/// Unbiased permutation-sampling Shapley estimate with per-player standard
/// errors. Deterministic per seed and independent of worker count.
Attribution shapley_mc(const CharacteristicFunction& v, std::int64_t permutations,
                       std::uint64_t seed);

/// Limiting game v(S) = 0.5 ln|sum of members' Fisher matrices| for
/// nonempty S, zero at the empty coalition.
CharacteristicFunction limiting_game(const std::vector<fisher::FisherMatrix>& fishers);

/// Difference of attribution components phi_i - phi_j under the given
/// concept.
double delta_pair(const CharacteristicFunction& v, int i, int j, SolutionConcept concept_tag);

/// Per-player attribution noise obtained by propagating independent
/// per-coalition valuation standard errors through the marginal-sum weights.
std::vector<double> propagated_attribution_errors(int n, const std::vector<double>& value_std_errors,
                                                  SolutionConcept concept_tag);

}  // namespace fairgame::game
