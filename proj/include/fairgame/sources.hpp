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

#include <memory>
#include <random>
#include <stdexcept>

#include "fairgame/models.hpp"

namespace fairgame::sources {

/// Raised when a bounded source cannot serve the requested count.
class SourceExhausted : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Serves a player's data points in arrival order. Draws are stateful and
/// sequential; determinism comes from the construction seed.
class DataSource {
  public:
    virtual ~DataSource() = default;
    virtual const models::PlayerModel& model() const = 0;
    /// Appends `count` fresh points to `out`; throws SourceExhausted when a
    /// bounded source runs dry.
    virtual void draw(std::int64_t count, models::DataSet& out) = 0;
};

/// Unbounded i.i.d. draws from a model at a fixed true parameter.
class SyntheticSource final : public DataSource {
  public:
    SyntheticSource(models::PlayerModel model, Eigen::VectorXd theta_star, std::uint64_t seed);

    const models::PlayerModel& model() const override { return model_; }
    void draw(std::int64_t count, models::DataSet& out) override;

  private:
    models::PlayerModel model_;
    Eigen::VectorXd theta_star_;
    std::mt19937_64 rng_;
};

}  // namespace fairgame::sources
