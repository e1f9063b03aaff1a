#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <string_view>

#include <CLI11.hpp>

#include "aoicast/experiments.hpp"

namespace aoicast {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
std::optional<T> parse_number(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

template <class T>
T require_number(const std::string& field, const std::string& text) {
    const auto value = parse_number<T>(text);
    if (!value) throw UsageError("invalid value for " + field + ": '" + text + "'");
    return *value;
}

std::size_t require_positive(const std::string& field, const std::string& text) {
    const auto value = parse_number<std::size_t>(text);
    if (!value || *value == 0) {
        throw UsageError("invalid value for " + field + ": '" + text + "' (expected a positive integer)");
    }
    return *value;
}

}  // namespace

std::vector<std::size_t> parse_k_values(const std::string& text) {
    const std::string_view view = trim(text);
    const auto dots = view.find("..");
    if (dots == std::string_view::npos) {
        const auto k = parse_number<std::size_t>(view);
        if (!k || *k == 0) throw UsageError("invalid value for k: '" + text + "'");
        return {*k};
    }
    const auto lo = parse_number<std::size_t>(view.substr(0, dots));
    const auto hi = parse_number<std::size_t>(view.substr(dots + 2));
    if (!lo || !hi || *lo == 0 || *lo > *hi) {
        throw UsageError("malformed range for k: '" + text + "' (expected a..b with 1 <= a <= b)");
    }
    std::vector<std::size_t> out;
    for (std::size_t k = *lo; k <= *hi; ++k) out.push_back(k);
    return out;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::string_view rest = text;
    while (true) {
        const auto comma = rest.find(',');
        const auto value = parse_number<double>(rest.substr(0, comma));
        if (!value) throw UsageError("invalid value for c-values: '" + text + "'");
        out.push_back(*value);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError("config file '" + path + "' line " + std::to_string(number) +
                             ": expected key=value");
        }
        out[std::string(trim(body.substr(0, eq)))] = std::string(trim(body.substr(eq + 1)));
    }
    return out;
}

void validate(const SweepSpec& spec) {
    if (!(spec.rate > 0.0) || !std::isfinite(spec.rate)) throw UsageError("lambda must be > 0");
    if (!(spec.shift >= 0.0) || !std::isfinite(spec.shift)) throw UsageError("shift must be >= 0");
    if (spec.dist == DistributionKind::Exponential && spec.shift != 0.0) {
        throw UsageError("shift must be 0 for --dist exp");
    }
    if (!(spec.tolerance >= 0.0)) throw UsageError("tolerance must be >= 0");
    if (spec.sim.num_intervals < 2) throw UsageError("intervals must be >= 2");
    if (spec.sim.replications < 1) throw UsageError("replications must be >= 1");
    if (spec.variable == SweepVariable::K) {
        if (spec.k_values.empty()) throw UsageError("k: no values to sweep");
        if (spec.k_values.front() < 1) throw UsageError("k values must be positive");
        if (!std::is_sorted(spec.k_values.begin(), spec.k_values.end(), std::less_equal<>{})) {
            throw UsageError("k values must be strictly increasing");
        }
    } else {
        if (spec.dist != DistributionKind::ShiftedExponential) {
            throw UsageError("dist must be sexp for a shift sweep");
        }
        if (spec.k < 1) throw UsageError("k must be >= 1");
        if (spec.c_values.empty()) throw UsageError("c-values: no values to sweep");
        for (double c : spec.c_values) {
            if (!(c >= 0.0) || !std::isfinite(c)) throw UsageError("c-values must be non-negative");
        }
        if (!std::is_sorted(spec.c_values.begin(), spec.c_values.end(), std::less_equal<>{})) {
            throw UsageError("c-values must be strictly increasing");
        }
    }
}

SweepSpec parse_config(std::span<const std::string> args, SweepVariable variable) {
    static constexpr std::string_view kKeys[] = {"dist",      "lambda",       "shift", "k",
                                                 "c-values",  "intervals",    "replications",
                                                 "seed",      "out",          "tolerance"};

    CLI::App app{"sweep options"};
    std::map<std::string, std::optional<std::string>> flags;
    for (auto key : kKeys) {
        const std::string name(key);
        app.add_option("--" + name, flags[name]);
    }
    std::optional<std::string> config_path;
    app.add_option("--config", config_path, "key=value settings file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    std::map<std::string, std::string> settings;
    if (config_path) {
        settings = read_config_file(*config_path);
        for (const auto& [key, value] : settings) {
            if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
                throw UsageError("unknown key in config file: " + key);
            }
        }
    }
    for (const auto& [key, value] : flags) {
        if (value) settings[key] = *value;
    }
    const auto get = [&](const std::string& key) -> const std::string* {
        const auto it = settings.find(key);
        return it == settings.end() ? nullptr : &it->second;
    };

    SweepSpec spec;
    spec.variable = variable;
    spec.dist = variable == SweepVariable::K ? DistributionKind::Exponential
                                             : DistributionKind::ShiftedExponential;
    if (const auto* v = get("dist")) {
        if (*v == "exp") {
            spec.dist = DistributionKind::Exponential;
        } else if (*v == "sexp") {
            spec.dist = DistributionKind::ShiftedExponential;
        } else {
            throw UsageError("invalid value for dist: '" + *v + "' (expected exp or sexp)");
        }
    }
    if (const auto* v = get("lambda")) {
        spec.rate = require_number<double>("lambda", *v);
        if (!(spec.rate > 0.0)) throw UsageError("lambda must be > 0 (got " + *v + ")");
    }
    if (const auto* v = get("shift")) {
        spec.shift = require_number<double>("shift", *v);
        if (!(spec.shift >= 0.0)) throw UsageError("shift must be >= 0 (got " + *v + ")");
    }
    if (const auto* v = get("tolerance")) spec.tolerance = require_number<double>("tolerance", *v);
    if (const auto* v = get("intervals")) spec.sim.num_intervals = require_positive("intervals", *v);
    if (const auto* v = get("replications")) {
        spec.sim.replications = require_positive("replications", *v);
    }
    if (const auto* v = get("seed")) spec.sim.seed = require_number<std::uint64_t>("seed", *v);
    if (const auto* v = get("out")) spec.output_path = *v;

    const auto* k_text = get("k");
    const auto* c_text = get("c-values");
    if (variable == SweepVariable::K) {
        if (c_text) throw UsageError("c-values only applies to a shift sweep");
        spec.k_values = k_text ? parse_k_values(*k_text) : parse_k_values("1..20");
    } else {
        if (k_text) {
            const auto ks = parse_k_values(*k_text);
            if (ks.size() != 1) throw UsageError("k must be a single value for a shift sweep");
            spec.k = ks.front();
        }
        spec.c_values = parse_real_list(c_text ? *c_text : "0,0.5,1,1.5,2");
    }
    validate(spec);
    return spec;
}

}  // namespace aoicast
