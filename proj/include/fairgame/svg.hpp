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

#include <string>
#include <vector>

namespace fairgame::harness {

/// Minimal hand-emitted chart: polylines for line series, circles for
/// scatter series, dashed strokes on request. Output bytes are a pure
/// function of the input.
struct SvgSeries {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
    bool dashed = false;
    bool scatter = false;  // circles instead of a polyline
};

std::string render_chart_svg(const std::string& title, const std::string& x_label,
                             const std::string& y_label, const std::vector<SvgSeries>& series);

}  // namespace fairgame::harness
