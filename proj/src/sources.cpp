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

#include "fairgame/sources.hpp"

namespace fairgame::sources {

SyntheticSource::SyntheticSource(models::PlayerModel model, Eigen::VectorXd theta_star,
                                 std::uint64_t seed)
    : model_(std::move(model)), theta_star_(std::move(theta_star)), rng_(seed) {
    if (theta_star_.size() != models::param_dim(model_)) {
        throw std::invalid_argument("SyntheticSource: theta_star dimension mismatch");
    }
}

void SyntheticSource::draw(std::int64_t count, models::DataSet& out) {
    if (count < 0) throw std::invalid_argument("SyntheticSource: count must be >= 0");
    out.points.reserve(out.points.size() + static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        out.points.push_back(
            std::visit([&](const auto& m) { return m.draw(theta_star_, rng_); }, model_));
    }
}

}  // namespace fairgame::sources
