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

#include "fairgame/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fairgame::harness {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::vector<std::vector<std::string>> parse_table(const std::string& text,
                                                  const std::string& what) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split_line(line));
    }
    if (rows.empty()) throw std::runtime_error(what + ": empty CSV");
    for (const auto& r : rows) {
        if (r.size() != rows.front().size()) {
            throw std::runtime_error(what + ": ragged CSV row");
        }
    }
    return rows;
}

double to_double(const std::string& s, const std::string& what) {
    if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t consumed = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != s.size() || s.empty()) {
        throw std::runtime_error(what + ": bad numeric field '" + s + "'");
    }
    return v;
}

std::int64_t to_int(const std::string& s, const std::string& what) {
    std::size_t consumed = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != s.size() || s.empty()) {
        throw std::runtime_error(what + ": bad integer field '" + s + "'");
    }
    return v;
}

std::vector<std::string> delta_headers(int players) {
    std::vector<std::string> out;
    if (players == 2) {
        out.emplace_back("delta");
        return out;
    }
    for (int i = 0; i < players; ++i) {
        for (int j = i + 1; j < players; ++j) {
            out.push_back("delta_" + std::to_string(i) + "_" + std::to_string(j));
        }
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string run_records_to_csv(const std::vector<fairshare::RunRecord>& records, int players) {
    if (records.empty()) throw std::invalid_argument("run_records_to_csv: no records");
    std::string out = "iteration,player,m_cum,shapley,logdet_fisher_hat";
    for (const std::string& h : delta_headers(players)) out += "," + h;
    out += "\n";
    for (const fairshare::RunRecord& rec : records) {
        for (int p = 0; p < players; ++p) {
            out += std::to_string(rec.iteration);
            out += "," + std::to_string(p);
            out += "," + std::to_string(rec.counts[static_cast<std::size_t>(p)]);
            out += "," + format_double(rec.shapley[static_cast<std::size_t>(p)]);
            out += "," + format_double(rec.logdet_fisher[static_cast<std::size_t>(p)]);
            for (double d : rec.deltas) out += "," + format_double(d);
            out += "\n";
        }
    }
    return out;
}

std::vector<RunRecordRow> parse_run_records_csv(const std::string& text) {
    const auto rows = parse_table(text, "run records");
    const auto& header = rows.front();
    if (header.size() < 6 || header[0] != "iteration" || header[1] != "player" ||
        header[2] != "m_cum" || header[3] != "shapley" || header[4] != "logdet_fisher_hat") {
        throw std::runtime_error("run records: unexpected header");
    }
    std::vector<RunRecordRow> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        RunRecordRow row;
        row.iteration = static_cast<int>(to_int(rows[r][0], "run records"));
        row.player = static_cast<int>(to_int(rows[r][1], "run records"));
        row.m_cum = to_int(rows[r][2], "run records");
        row.shapley = to_double(rows[r][3], "run records");
        row.logdet_fisher_hat = to_double(rows[r][4], "run records");
        for (std::size_t c = 5; c < rows[r].size(); ++c) {
            row.deltas.push_back(to_double(rows[r][c], "run records"));
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("summary_to_csv: no rows");
    std::string out = "pair,lowest,average,stdev,iter\n";
    for (const SummaryRow& row : rows) {
        out += std::to_string(row.i) + "-" + std::to_string(row.j);
        out += "," + format_double(row.stats.lowest);
        out += "," + format_double(row.stats.average);
        out += "," + format_double(row.stats.stdev);
        out += ",";
        out += row.stats.iter ? std::to_string(*row.stats.iter) : std::string("*");
        out += "\n";
    }
    return out;
}

std::vector<SummaryRow> parse_summary_csv(const std::string& text) {
    const auto rows = parse_table(text, "summary");
    if (rows.front() != std::vector<std::string>{"pair", "lowest", "average", "stdev", "iter"}) {
        throw std::runtime_error("summary: unexpected header");
    }
    std::vector<SummaryRow> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        SummaryRow row;
        const std::string& pair = rows[r][0];
        const auto dash = pair.find('-');
        if (dash == std::string::npos) throw std::runtime_error("summary: bad pair field");
        row.i = static_cast<int>(to_int(pair.substr(0, dash), "summary"));
        row.j = static_cast<int>(to_int(pair.substr(dash + 1), "summary"));
        row.stats.lowest = to_double(rows[r][1], "summary");
        row.stats.average = to_double(rows[r][2], "summary");
        row.stats.stdev = to_double(rows[r][3], "summary");
        if (rows[r][4] != "*") {
            row.stats.iter = static_cast<int>(to_int(rows[r][4], "summary"));
        }
        out.push_back(row);
    }
    return out;
}

std::string differences_to_csv(const std::vector<DifferenceRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("differences_to_csv: no rows");
    std::string out = "m,trial,i,j,delta_hat\n";
    for (const DifferenceRow& row : rows) {
        out += std::to_string(row.m) + "," + std::to_string(row.trial) + "," +
               std::to_string(row.i) + "," + std::to_string(row.j) + "," +
               format_double(row.delta_hat) + "\n";
    }
    return out;
}

std::vector<DifferenceRow> parse_differences_csv(const std::string& text) {
    const auto rows = parse_table(text, "differences");
    if (rows.front() != std::vector<std::string>{"m", "trial", "i", "j", "delta_hat"}) {
        throw std::runtime_error("differences: unexpected header");
    }
    std::vector<DifferenceRow> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        DifferenceRow row;
        row.m = to_int(rows[r][0], "differences");
        row.trial = static_cast<int>(to_int(rows[r][1], "differences"));
        row.i = static_cast<int>(to_int(rows[r][2], "differences"));
        row.j = static_cast<int>(to_int(rows[r][3], "differences"));
        row.delta_hat = to_double(rows[r][4], "differences");
        out.push_back(row);
    }
    return out;
}

std::string limits_to_csv(const std::vector<LimitRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("limits_to_csv: no rows");
    std::string out = "i,j,delta_limit\n";
    for (const LimitRow& row : rows) {
        out += std::to_string(row.i) + "," + std::to_string(row.j) + "," +
               format_double(row.delta_limit) + "\n";
    }
    return out;
}

std::vector<LimitRow> parse_limits_csv(const std::string& text) {
    const auto rows = parse_table(text, "limits");
    if (rows.front() != std::vector<std::string>{"i", "j", "delta_limit"}) {
        throw std::runtime_error("limits: unexpected header");
    }
    std::vector<LimitRow> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        LimitRow row;
        row.i = static_cast<int>(to_int(rows[r][0], "limits"));
        row.j = static_cast<int>(to_int(rows[r][1], "limits"));
        row.delta_limit = to_double(rows[r][2], "limits");
        out.push_back(row);
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw std::runtime_error("cannot create directory " + path.parent_path().string() +
                                     ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace fairgame::harness
