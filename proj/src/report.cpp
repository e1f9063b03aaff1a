#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "aoicast/experiments.hpp"

namespace aoicast {

bool AgeReport::within(double tolerance) const {
    for (const auto& row : rows) {
        if (!(row.relerr_p <= tolerance) || !(row.relerr_e <= tolerance)) return false;
    }
    return true;
}

void write_csv(std::ostream& out, const AgeReport& report) {
    out << kCsvHeader << '\n';
    for (const auto& r : report.rows) {
        out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.sweep_value, r.delta_p_theory,
                           r.delta_p_sim, r.delta_p_stderr, r.delta_e_theory, r.delta_e_sim,
                           r.delta_e_stderr, r.lower_bound ? fmt::format("{}", *r.lower_bound) : "",
                           r.relerr_p, r.relerr_e);
    }
}

void write_csv_file(const std::string& path, const AgeReport& report) {
    std::ofstream out(path);
    if (!out) throw UsageError("out: cannot open '" + path + "' for writing");
    write_csv(out, report);
    out.flush();
    if (!out) throw UsageError("out: failed writing '" + path + "'");
}

namespace {

double parse_field(std::string_view field, std::size_t line) {
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc{} || ptr != end) {
        throw std::runtime_error("csv line " + std::to_string(line) + ": bad number '" +
                                 std::string(field) + "'");
    }
    return value;
}

}  // namespace

AgeReport read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw std::runtime_error("csv: missing or unexpected header");
    }
    AgeReport report;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        while (true) {
            const auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != 10) {
            throw std::runtime_error("csv line " + std::to_string(number) + ": expected 10 fields");
        }
        AgeRow row;
        row.sweep_value = parse_field(fields[0], number);
        row.delta_p_theory = parse_field(fields[1], number);
        row.delta_p_sim = parse_field(fields[2], number);
        row.delta_p_stderr = parse_field(fields[3], number);
        row.delta_e_theory = parse_field(fields[4], number);
        row.delta_e_sim = parse_field(fields[5], number);
        row.delta_e_stderr = parse_field(fields[6], number);
        if (!fields[7].empty()) row.lower_bound = parse_field(fields[7], number);
        row.relerr_p = parse_field(fields[8], number);
        row.relerr_e = parse_field(fields[9], number);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace aoicast
