#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aoicast/order_stats.hpp"
#include "aoicast/simulator.hpp"

namespace aoicast {

enum class SweepVariable { K, Shift };

/// Bad flags, bad config-file entries or an unusable output path. The
/// message names the offending field.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SweepSpec {
    SweepVariable variable = SweepVariable::K;
    DistributionKind dist = DistributionKind::Exponential;
    double rate = 1.0;
    double shift = 0.0;  // fixed c of a k sweep
    std::size_t k = 5;   // fixed k of a c sweep
    std::vector<std::size_t> k_values;
    std::vector<double> c_values;
    /// Run-size template; dist and k are filled in per sweep point.
    SimConfig sim{ServiceDistribution::exponential(1.0), 1, 100000, 1, 8};
    double tolerance = 0.02;
    std::string output_path;  // empty: standard output
};

/// Throws UsageError when the spec breaks an invariant (empty or
/// non-increasing values, rate <= 0, negative shift, ...).
void validate(const SweepSpec& spec);

/// Parses sweep flags (without the program or subcommand name). Values from a
/// `--config` file of key=value lines are overridden by flags.
///
/// Flags: --dist {exp|sexp}, --lambda, --shift, --k (int or a..b),
/// --c-values (comma list), --intervals, --replications, --seed, --out,
/// --tolerance, --config.
SweepSpec parse_config(std::span<const std::string> args, SweepVariable variable);

/// Parses `a..b` or a single positive integer.
std::vector<std::size_t> parse_k_values(const std::string& text);

/// Parses a comma separated list of reals.
std::vector<double> parse_real_list(const std::string& text);

/// Reads `key=value` lines; blank lines and lines starting with '#' are
/// skipped. Throws UsageError on a malformed line or unreadable file.
std::map<std::string, std::string> read_config_file(const std::string& path);

struct AgeRow {
    double sweep_value = 0.0;
    double delta_p_theory = 0.0;
    double delta_p_sim = 0.0;
    double delta_p_stderr = 0.0;
    double delta_e_theory = 0.0;
    double delta_e_sim = 0.0;
    double delta_e_stderr = 0.0;
    std::optional<double> lower_bound;  // shifted-exponential runs only
    double relerr_p = 0.0;
    double relerr_e = 0.0;

    friend bool operator==(const AgeRow&, const AgeRow&) = default;
};

struct AgeReport {
    std::vector<AgeRow> rows;

    /// True when every relative error is at most `tolerance`.
    bool within(double tolerance) const;

    friend bool operator==(const AgeReport&, const AgeReport&) = default;
};

/// Theory and simulation for one (dist, k) point.
AgeRow evaluate_point(const ServiceDistribution& dist, std::size_t k, const SimConfig& run_size,
                      double sweep_value);

AgeReport sweep_k(const SweepSpec& spec);
AgeReport sweep_shift(const SweepSpec& spec);

inline constexpr const char* kCsvHeader =
    "sweep_value,delta_p_theory,delta_p_sim,delta_p_stderr,delta_e_theory,delta_e_sim,"
    "delta_e_stderr,lower_bound,relerr_p,relerr_e";

/// Writes the header and one line per row; reals use the shortest
/// round-trip representation with '.' as decimal point, and an absent lower
/// bound is an empty field.
void write_csv(std::ostream& out, const AgeReport& report);

/// Throws UsageError when the output path cannot be written.
void write_csv_file(const std::string& path, const AgeReport& report);

/// Inverse of write_csv. Throws std::runtime_error on a malformed file.
AgeReport read_csv(std::istream& in);

struct ValidationOptions {
    std::uint64_t seed = 20170101;
    std::size_t intervals = 100000;
    std::size_t replications = 8;
    /// Allowed relative error of simulated against closed-form ages.
    double tolerance = 0.02;
    /// Width, in standard errors, of Monte-Carlo agreement checks.
    double sigmas = 4.0;
};

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool passed() const;
};

/// Runs the property suite of every module with fixed seeds.
ValidationReport validate(const ValidationOptions& options);

void print_validation(std::ostream& out, const ValidationReport& report);

}  // namespace aoicast
