// Copyright 2026 The cqedkit Authors
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

#ifndef CQED_TEXT_HPP
#define CQED_TEXT_HPP

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cqed/errors.hpp"

// Locale-independent number formatting and the small CSV dialect used for
// traces, spectra and sample series.

namespace cqed {

inline constexpr int kOutputDigits = 9;

inline std::string_view trim(std::string_view s) {
    const char *ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

/// Shortest general form with at most 9 significant digits.
inline std::string format_number(double v, int digits = kOutputDigits) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, digits);
    if (ec != std::errc{}) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, ptr);
}

/// Value rounded to the precision format_number prints.
inline double round_to_output(double v, int digits = kOutputDigits) {
    if (!std::isfinite(v)) {
        return v;
    }
    return *parse_double(format_number(v, digits));
}

/// Named numeric columns, all the same length.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const {
        return columns.empty() ? 0 : columns.front().size();
    }

    const std::vector<double> &column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return columns[i];
            }
        }
        throw InputError("missing CSV column '" + std::string(name) + "'");
    }
};

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

}  // namespace detail

inline CsvTable read_csv(std::istream &in, const std::string &source) {
    CsvTable t;
    std::string raw;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto fields = detail::split_commas(line);
        if (!have_header) {
            for (auto f : fields) {
                if (f.empty()) {
                    throw InputError(source + ":" + std::to_string(line_no) + ": empty column name");
                }
                t.header.emplace_back(f);
            }
            t.columns.resize(t.header.size());
            have_header = true;
            continue;
        }
        if (fields.size() != t.header.size()) {
            throw InputError(
                source + ":" + std::to_string(line_no) + ": expected " + std::to_string(t.header.size()) + " fields");
        }
        for (std::size_t i = 0; i < fields.size(); ++i) {
            auto v = parse_double(fields[i]);
            if (!v) {
                throw InputError(source + ":" + std::to_string(line_no) + ": not a number: '" + std::string(fields[i]) + "'");
            }
            t.columns[i].push_back(*v);
        }
    }
    if (!have_header) {
        throw InputError(source + ": empty CSV");
    }
    return t;
}

inline CsvTable read_csv_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    return read_csv(in, path);
}

inline void write_csv(std::ostream &out, const CsvTable &t) {
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        out << (i ? "," : "") << t.header[i];
    }
    out << '\n';
    for (std::size_t r = 0; r < t.rows(); ++r) {
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            out << (c ? "," : "") << format_number(t.columns[c][r]);
        }
        out << '\n';
    }
}

}  // namespace cqed

#endif  // CQED_TEXT_HPP
