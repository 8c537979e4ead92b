#include "sigstream/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sigstream {

ParseError::ParseError(std::size_t line_number, const std::string& message)
    : InvalidInput("line " + std::to_string(line_number) + ": " + message), line(line_number) {}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_number(const std::string& s) {
    double value = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

bool is_missing_token(const std::string& s) {
    return s.empty() || s == "*" || s == "NA" || s == "nan" || s == "NaN";
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<StreamRecord> read_dataset(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line) != kDatasetHeader) {
        throw ParseError(line_no, std::string("expected header '") + kDatasetHeader + "'");
    }

    std::vector<StreamRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 5) {
            throw ParseError(line_no, "expected 5 fields, found " + std::to_string(f.size()));
        }
        const auto& subject = f[0];
        if (subject.empty()) throw ParseError(line_no, "empty subject id");
        const auto week = parse_number(f[1]);
        if (!week || !std::isfinite(*week)) throw ParseError(line_no, "week is not a number");
        bool missing;
        if (f[3] == "0") missing = false;
        else if (f[3] == "1") missing = true;
        else throw ParseError(line_no, "missing must be 0 or 1");
        double delay = 0.0;
        if (!missing) {
            const auto d = parse_number(f[2]);
            if (!d || !std::isfinite(*d)) throw ParseError(line_no, "delay is not a number");
            delay = *d;
        } else if (!f[2].empty()) {
            throw ParseError(line_no, "missing week must have an empty delay");
        }
        std::optional<int> label;
        if (f[4] == "0" || f[4] == "1") label = f[4] == "1" ? 1 : 0;
        else if (!f[4].empty()) throw ParseError(line_no, "label must be 0, 1 or empty");

        if (records.empty() || records.back().subject != subject) {
            for (const auto& r : records) {
                if (r.subject == subject) {
                    throw ParseError(line_no, "rows of subject '" + subject + "' are not contiguous");
                }
            }
            StreamRecord r;
            r.subject = subject;
            r.label = label;
            r.times = std::vector<double>{};
            records.push_back(std::move(r));
        }
        auto& r = records.back();
        if (r.label != label) throw ParseError(line_no, "label changes within subject '" + subject + "'");
        if (!r.times->empty() && !(*week > r.times->back())) {
            throw ParseError(line_no, "weeks of subject '" + subject + "' are not increasing");
        }
        r.times->push_back(*week);
        r.values.push_back(delay);
        r.missing.push_back(missing);
    }
    return records;
}

std::vector<StreamRecord> read_dataset_file(const std::string& path) {
    std::istringstream in(read_file(path));
    return read_dataset(in);
}

void write_dataset(std::ostream& out, const std::vector<StreamRecord>& records) {
    out << kDatasetHeader << '\n';
    for (const auto& r : records) {
        for (std::size_t i = 0; i < r.values.size(); ++i) {
            const double week = r.times ? (*r.times)[i] : static_cast<double>(i + 1);
            out << r.subject << ',' << format_double(week) << ',';
            if (!r.missing[i]) out << format_double(r.values[i]);
            out << ',' << (r.missing[i] ? 1 : 0) << ',';
            if (r.label) out << *r.label;
            out << '\n';
        }
    }
}

NumericTable read_numeric_table(std::istream& in) {
    NumericTable table;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || trim(line)[0] == '#') continue;
        const auto fields = split_fields(line);
        std::vector<std::optional<double>> row;
        bool textual = false;
        for (const auto& f : fields) {
            if (is_missing_token(f)) {
                row.emplace_back(std::nullopt);
                continue;
            }
            auto v = parse_number(f);
            if (!v) textual = true;
            row.push_back(v);
        }
        if (textual) {
            if (table.rows.empty() && table.header.empty()) {
                table.header = fields;
                width = fields.size();
                continue;
            }
            throw ParseError(line_no, "non-numeric field in '" + trim(line) + "'");
        }
        if (width == 0) width = row.size();
        if (row.size() != width) {
            throw ParseError(line_no, "expected " + std::to_string(width) + " fields, found " +
                                          std::to_string(row.size()));
        }
        table.rows.push_back(std::move(row));
        table.lines.push_back(line_no);
    }
    return table;
}

void write_features(std::ostream& out, const FeatureMatrix& m,
                    const std::vector<std::string>& subjects) {
    out << "subject,label";
    for (const auto& name : m.column_names) out << ",\"" << name << '"';
    out << '\n';
    for (std::size_t i = 0; i < m.rows; ++i) {
        out << (i < subjects.size() ? subjects[i] : std::to_string(i)) << ',' << m.labels[i];
        for (double v : m.row(i)) out << ',' << format_double(v);
        out << '\n';
    }
}

}  // namespace sigstream
