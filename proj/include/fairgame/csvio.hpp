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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fairgame/fairshare.hpp"

namespace fairgame::harness {

/// Round-trip safe double formatting (%.17g with a normalized "nan").
std::string format_double(double v);

/// One flattened run-record row as laid out in the run-record CSV: one row
/// per (iteration, player), the iteration's pairwise deltas repeated on
/// every row. For n = 2 the single delta column is named `delta`, otherwise
/// `delta_i_j` per pair.
struct RunRecordRow {
    int iteration = 0;
    int player = 0;
    std::int64_t m_cum = 0;
    double shapley = 0.0;
    double logdet_fisher_hat = 0.0;
    std::vector<double> deltas;
};

std::string run_records_to_csv(const std::vector<fairshare::RunRecord>& records, int players);
std::vector<RunRecordRow> parse_run_records_csv(const std::string& text);

/// Summary table row per player pair, mirroring the delta-statistics schema
/// (`iter` renders as an integer or as the `*` sentinel).
struct SummaryRow {
    int i = 0;
    int j = 0;
    fairshare::DeltaStats stats;
};

std::string summary_to_csv(const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> parse_summary_csv(const std::string& text);

/// Scatter rows of the convergence experiment plus the limiting dashed
/// values.
struct DifferenceRow {
    std::int64_t m = 0;
    int trial = 0;
    int i = 0;
    int j = 0;
    double delta_hat = 0.0;
};

struct LimitRow {
    int i = 0;
    int j = 0;
    double delta_limit = 0.0;
};

std::string differences_to_csv(const std::vector<DifferenceRow>& rows);
std::vector<DifferenceRow> parse_differences_csv(const std::string& text);
std::string limits_to_csv(const std::vector<LimitRow>& rows);
std::vector<LimitRow> parse_limits_csv(const std::string& text);

/// Writes bytes, creating parent directories; errors carry the path.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace fairgame::harness
