// SPDX-License-Identifier: Apache-2.0
#include "winnbeta/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "winnbeta/csv.hpp"
#include "winnbeta/errors.hpp"

namespace winnbeta {

namespace {

std::string normalized_token(std::string_view text) {
    std::string out(csv::trim(text));
    for (auto& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (c == '_') c = '-';
    }
    return out;
}

template <typename T>
T parse_integer(std::string_view key, std::string_view raw) {
    const auto text = csv::trim(raw);
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParameterError("config key '" + std::string(key) + "': expected an integer, got '" +
                             std::string(text) + "'");
    }
    return value;
}

double parse_real(std::string_view key, std::string_view raw) {
    const auto text = csv::trim(raw);
    if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
    try {
        const auto v = csv::parse_cell(text);
        if (v) return *v;
    } catch (const IngestionError&) {
    }
    throw ParameterError("config key '" + std::string(key) + "': expected a number, got '" +
                         std::string(text) + "'");
}

bool parse_bool(std::string_view key, std::string_view raw) {
    const auto t = normalized_token(raw);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ParameterError("config key '" + std::string(key) + "': expected true or false");
}

}  // namespace

std::string_view to_string(VarianceTest test) {
    switch (test) {
        case VarianceTest::Fligner: return "fligner";
        case VarianceTest::LeveneMedian: return "levene-median";
        case VarianceTest::LeveneMean: return "levene-mean";
    }
    return "fligner";
}

VarianceTest parse_variance_test(std::string_view token) {
    const auto t = normalized_token(token);
    if (t == "fligner") return VarianceTest::Fligner;
    if (t == "levene-median") return VarianceTest::LeveneMedian;
    if (t == "levene-mean") return VarianceTest::LeveneMean;
    throw ParameterError("unknown variance test '" + std::string(token) +
                         "' (expected fligner, levene-median or levene-mean)");
}

void RunConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
    if (lags && *lags < 1) throw ParameterError("lags must be positive");
    if (max_df < 1) throw ParameterError("max_df must be positive");
    if (min_batch_size < 1) throw ParameterError("min_batch_size must be positive");
    if (!(outlier_sigma > 0.0)) throw ParameterError("outlier_sigma must be positive");
    if (workers && *workers < 1) throw ParameterError("workers must be positive");
}

void set_config_value(RunConfig& config, std::string_view key, std::string_view value) {
    const auto v = csv::trim(value);
    if (key == "alpha") {
        config.alpha = parse_real(key, v);
    } else if (key == "variance_test") {
        config.variance_test = parse_variance_test(v);
    } else if (key == "lags") {
        if (normalized_token(v) == "auto") config.lags.reset();
        else config.lags = parse_integer<std::size_t>(key, v);
    } else if (key == "max_df") {
        config.max_df = parse_integer<int>(key, v);
    } else if (key == "min_batch_size") {
        config.min_batch_size = parse_integer<std::size_t>(key, v);
    } else if (key == "missing_policy") {
        config.missing_policy = parse_missing_policy(v);
    } else if (key == "outlier_sigma") {
        config.outlier_sigma = parse_real(key, v);
    } else if (key == "workers") {
        if (normalized_token(v) == "auto") config.workers.reset();
        else config.workers = parse_integer<std::size_t>(key, v);
    } else if (key == "seed") {
        if (normalized_token(v) == "none" || v.empty()) config.seed.reset();
        else config.seed = parse_integer<std::uint64_t>(key, v);
    } else if (key == "compat_literal_zm") {
        config.compat_literal_zm = parse_bool(key, v);
    } else if (key == "study_wn_gate") {
        config.study_wn_gate = parse_bool(key, v);
    } else if (key == "always_phase3") {
        config.always_phase3 = parse_bool(key, v);
    } else {
        throw ParameterError("unknown config key '" + std::string(key) + "'");
    }
}

std::string to_text(const RunConfig& config) {
    std::ostringstream out;
    out << "alpha = " << csv::format_double(config.alpha) << '\n'
        << "variance_test = " << to_string(config.variance_test) << '\n'
        << "lags = " << (config.lags ? std::to_string(*config.lags) : "auto") << '\n'
        << "max_df = " << config.max_df << '\n'
        << "min_batch_size = " << config.min_batch_size << '\n'
        << "missing_policy = " << to_string(config.missing_policy) << '\n'
        << "outlier_sigma = "
        << (std::isinf(config.outlier_sigma) ? std::string("inf")
                                             : csv::format_double(config.outlier_sigma))
        << '\n'
        << "workers = " << (config.workers ? std::to_string(*config.workers) : "auto") << '\n'
        << "seed = " << (config.seed ? std::to_string(*config.seed) : "none") << '\n'
        << "compat_literal_zm = " << (config.compat_literal_zm ? "true" : "false") << '\n'
        << "study_wn_gate = " << (config.study_wn_gate ? "true" : "false") << '\n'
        << "always_phase3 = " << (config.always_phase3 ? "true" : "false") << '\n';
    return out.str();
}

RunConfig parse_config(std::string_view text, RunConfig base) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto body = csv::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        set_config_value(base, csv::trim(body.substr(0, eq)), body.substr(eq + 1));
    }
    base.validate();
    return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), std::move(base));
}

}  // namespace winnbeta
