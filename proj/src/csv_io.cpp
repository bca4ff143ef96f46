#include "hali/csv_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hali/errors.hpp"

namespace hali {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool is_nan_token(const std::string& s) {
    const auto l = lower(s);
    return l == "nan" || l == "na" || l.empty();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // Trim surrounding whitespace.
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return out;
}

double parse_value(const std::string& token, const std::string& path) {
    if (is_nan_token(token)) return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t pos = 0;
        const double v = std::stod(token, &pos);
        if (pos != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw InvalidInput(path + ": cannot parse value '" + token + "'");
    }
}

}  // namespace

Signal read_signal_csv(const std::string& path, double fs_hint) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");

    std::string line;
    std::vector<double> times, values;
    bool has_time_column = false;
    bool first_data_line = true;

    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_csv_line(line);
        if (fields.empty()) continue;

        if (first_data_line) {
            const auto head = lower(fields[0]);
            if (head == "time" || head == "value") {  // header line
                has_time_column = fields.size() >= 2 && head == "time";
                first_data_line = false;
                continue;
            }
            has_time_column = fields.size() >= 2;
            first_data_line = false;
        }
        if (has_time_column) {
            if (fields.size() < 2) throw InvalidInput(path + ": expected time,value row");
            times.push_back(parse_value(fields[0], path));
            values.push_back(parse_value(fields[1], path));
        } else {
            values.push_back(parse_value(fields[0], path));
        }
    }
    if (values.empty()) throw InvalidInput(path + ": no samples");

    double fs = fs_hint;
    if (has_time_column && fs <= 0.0) {
        if (times.size() < 2) throw InvalidInput(path + ": cannot derive fs from one row");
        const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
        if (!(dt > 0.0)) throw InvalidInput(path + ": non-increasing time column");
        fs = 1.0 / dt;
    }
    if (fs <= 0.0) throw InvalidInput(path + ": sampling rate required (--fs) for value-only CSV");
    return Signal(std::move(values), fs);
}

void write_signal_csv(const std::string& path, const Signal& signal) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << "time,value\n";
    for (std::size_t i = 0; i < signal.size(); ++i) {
        const double t = static_cast<double>(i) / signal.fs;
        out << format_double(t) << ',';
        if (signal.missing[i]) {
            out << "NaN\n";
        } else {
            out << format_double(signal.samples[i]) << '\n';
        }
    }
}

void write_intervals_csv(const std::string& path, const std::vector<MissingInterval>& intervals) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << "start,length\n";
    for (const auto& iv : intervals) out << iv.start << ',' << iv.length << '\n';
}

std::vector<MissingInterval> read_intervals_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    std::vector<MissingInterval> out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_csv_line(line);
        if (first && !fields.empty() && lower(fields[0]) == "start") {
            first = false;
            continue;
        }
        first = false;
        if (fields.size() < 2) throw InvalidInput(path + ": expected start,length row");
        out.push_back({static_cast<std::size_t>(std::stoull(fields[0])),
                       static_cast<std::size_t>(std::stoull(fields[1]))});
    }
    return out;
}

void write_series_csv(const std::string& path, const std::vector<std::string>& names,
                      const std::vector<std::vector<double>>& columns) {
    if (names.size() != columns.size())
        throw InvalidInput("write_series_csv: name/column count mismatch");
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    for (std::size_t c = 0; c < names.size(); ++c) {
        out << names[c];
        if (c + 1 < names.size()) out << ',';
    }
    out << '\n';
    std::size_t rows = 0;
    for (const auto& col : columns) rows = std::max(rows, col.size());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (r < columns[c].size()) out << format_double(columns[c][r]);
            if (c + 1 < columns.size()) out << ',';
        }
        out << '\n';
    }
}

}  // namespace hali
