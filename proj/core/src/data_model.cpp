// SPDX-License-Identifier: Apache-2.0
#include "winnbeta/data_model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "winnbeta/csv.hpp"
#include "winnbeta/descriptive.hpp"
#include "winnbeta/errors.hpp"

namespace winnbeta {

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string join_ints(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(values[i]);
    }
    return out;
}

int parse_run_order(std::string_view raw, const std::string& file) {
    const auto text = csv::trim(raw);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value < 1) {
        throw IngestionError(file + ": run_order must be a positive integer, got '" +
                             std::string(text) + "'");
    }
    return value;
}

std::size_t require_column(const csv::Table& table, std::string_view name,
                           const std::string& file) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) {
        throw IngestionError(file + ": missing column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - table.header.begin());
}

// Duplicates first, then gaps against 1..N.
void check_run_orders(std::vector<int> orders, const std::string& file) {
    std::sort(orders.begin(), orders.end());
    std::vector<int> duplicates;
    for (std::size_t i = 1; i < orders.size(); ++i) {
        if (orders[i] == orders[i - 1] &&
            (duplicates.empty() || duplicates.back() != orders[i])) {
            duplicates.push_back(orders[i]);
        }
    }
    if (!duplicates.empty()) {
        throw IngestionError(file + ": duplicate run_order values: " + join_ints(duplicates));
    }
    std::vector<int> gaps;
    int expected = 1;
    for (int order : orders) {
        while (expected < order) gaps.push_back(expected++);
        expected = order + 1;
    }
    if (!gaps.empty()) {
        throw IngestionError(file + ": run_order is not contiguous from 1; missing: " +
                             join_ints(gaps));
    }
}

}  // namespace

std::string_view to_string(SampleType type) {
    return type == SampleType::Qc ? "qc" : "experimental";
}

SampleType parse_sample_type(std::string_view token) {
    const auto t = lower(csv::trim(token));
    if (t == "experimental") return SampleType::Experimental;
    if (t == "qc") return SampleType::Qc;
    throw IngestionError("unknown sample_type '" + std::string(token) +
                         "' (expected experimental or qc)");
}

std::size_t StudyMatrix::column_index(std::string_view name) const {
    const auto it = std::find(metabolite_names.begin(), metabolite_names.end(), name);
    if (it == metabolite_names.end()) {
        throw LookupError("unknown metabolite '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - metabolite_names.begin());
}

std::size_t StudyMatrix::count(SampleType type) const {
    return static_cast<std::size_t>(std::count_if(
        wells.begin(), wells.end(), [type](const Well& w) { return w.sample_type == type; }));
}

bool MetaboliteSeries::has_missing() const {
    return std::any_of(values.begin(), values.end(), [](double v) { return std::isnan(v); });
}

void MetaboliteSeries::validate() const {
    if (values.empty()) throw ParameterError("series '" + name + "' is empty");
    if (plate_of.size() != values.size() || run_order.size() != values.size()) {
        throw ParameterError("series '" + name + "' has misaligned plate or run-order labels");
    }
}

std::vector<PlateGroup> partition_by_plate(const MetaboliteSeries& series) {
    std::vector<PlateGroup> groups;
    std::map<std::string, std::size_t, std::less<>> slot;
    for (std::size_t i = 0; i < series.plate_of.size(); ++i) {
        const auto& plate = series.plate_of[i];
        auto [it, inserted] = slot.try_emplace(plate, groups.size());
        if (inserted) groups.push_back(PlateGroup{plate, {}});
        groups[it->second].indices.push_back(i);
    }
    return groups;
}

void validate_study(const StudyMatrix& study) {
    std::vector<int> orders;
    orders.reserve(study.wells.size());
    for (std::size_t i = 0; i < study.wells.size(); ++i) {
        if (study.wells[i].run_order != static_cast<int>(i + 1)) {
            throw IngestionError("wells must be sorted with run_order 1..N; row " +
                                 std::to_string(i + 1) + " has run_order " +
                                 std::to_string(study.wells[i].run_order));
        }
    }
    if (study.intensities.size() != study.wells.size()) {
        throw IngestionError("intensity row count does not match well count");
    }
    for (const auto& row : study.intensities) {
        if (row.size() != study.metabolite_names.size()) {
            throw IngestionError("intensity row width does not match metabolite count");
        }
    }
}

StudyMatrix load_study(const std::filesystem::path& samples_path,
                       const std::filesystem::path& intensities_path) {
    const std::string samples_file = samples_path.string();
    const std::string intensities_file = intensities_path.string();
    const auto samples = csv::read(samples_path);
    const auto table = csv::read(intensities_path);

    const auto c_order = require_column(samples, "run_order", samples_file);
    const auto c_id = require_column(samples, "sample_id", samples_file);
    const auto c_plate = require_column(samples, "plate", samples_file);
    const auto c_type = require_column(samples, "sample_type", samples_file);

    std::vector<Well> wells;
    wells.reserve(samples.rows.size());
    for (std::size_t r = 0; r < samples.rows.size(); ++r) {
        const auto& row = samples.rows[r];
        if (row.size() != samples.header.size()) {
            throw IngestionError(samples_file + ": row " + std::to_string(r + 2) + " has " +
                                 std::to_string(row.size()) + " fields, expected " +
                                 std::to_string(samples.header.size()));
        }
        Well well;
        well.run_order = parse_run_order(row[c_order], samples_file);
        well.sample_id = std::string(csv::trim(row[c_id]));
        well.plate = std::string(csv::trim(row[c_plate]));
        try {
            well.sample_type = parse_sample_type(row[c_type]);
        } catch (const IngestionError& e) {
            throw IngestionError(samples_file + ": row " + std::to_string(r + 2) + ": " + e.what());
        }
        wells.push_back(std::move(well));
    }
    {
        std::vector<int> orders;
        for (const auto& w : wells) orders.push_back(w.run_order);
        check_run_orders(std::move(orders), samples_file);
    }
    std::sort(wells.begin(), wells.end(),
              [](const Well& a, const Well& b) { return a.run_order < b.run_order; });

    if (table.header.empty() || table.header.front() != "run_order") {
        throw IngestionError(intensities_file + ": first column must be run_order");
    }
    if (table.rows.size() != wells.size()) {
        throw IngestionError("row-count mismatch: " + samples_file + " has " +
                             std::to_string(wells.size()) + " rows, " + intensities_file +
                             " has " + std::to_string(table.rows.size()));
    }

    StudyMatrix study;
    study.metabolite_names.assign(table.header.begin() + 1, table.header.end());
    {
        std::set<std::string> seen;
        for (const auto& name : study.metabolite_names) {
            if (name.empty()) throw IngestionError(intensities_file + ": empty metabolite name");
            if (!seen.insert(name).second) {
                throw IngestionError(intensities_file + ": duplicate metabolite column '" + name +
                                     "'");
            }
        }
    }
    study.intensities.assign(wells.size(), {});

    std::vector<int> orders;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.header.size()) {
            throw IngestionError(intensities_file + ": row " + std::to_string(r + 2) + " has " +
                                 std::to_string(row.size()) + " fields, expected " +
                                 std::to_string(table.header.size()));
        }
        const int order = parse_run_order(row[0], intensities_file);
        orders.push_back(order);
        if (order > static_cast<int>(wells.size())) continue;  // reported by check_run_orders
        std::vector<Cell> cells;
        cells.reserve(row.size() - 1);
        for (std::size_t c = 1; c < row.size(); ++c) {
            try {
                cells.push_back(csv::parse_cell(row[c]));
            } catch (const IngestionError& e) {
                throw IngestionError(intensities_file + ": run_order " + std::to_string(order) +
                                     ", column '" + table.header[c] + "': " + e.what());
            }
        }
        study.intensities[static_cast<std::size_t>(order - 1)] = std::move(cells);
    }
    check_run_orders(std::move(orders), intensities_file);

    study.wells = std::move(wells);
    return study;
}

void write_intensities(const StudyMatrix& study, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestionError("cannot write file: " + path.string());
    std::vector<std::string> header{"run_order"};
    header.insert(header.end(), study.metabolite_names.begin(), study.metabolite_names.end());
    out << csv::join(header) << '\n';
    for (std::size_t r = 0; r < study.wells.size(); ++r) {
        out << study.wells[r].run_order;
        for (const auto& cell : study.intensities[r]) {
            out << ',';
            if (cell) out << csv::format_double(*cell);
        }
        out << '\n';
    }
}

void write_samples(const StudyMatrix& study, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestionError("cannot write file: " + path.string());
    out << "run_order,sample_id,plate,sample_type\n";
    for (const auto& w : study.wells) {
        out << csv::join({std::to_string(w.run_order), w.sample_id, w.plate,
                          std::string(to_string(w.sample_type))})
            << '\n';
    }
}

MetaboliteSeries extract_series(const StudyMatrix& study, std::string_view name,
                                SampleSelection which) {
    const auto column = study.column_index(name);
    MetaboliteSeries series;
    series.name = std::string(name);
    for (std::size_t r = 0; r < study.wells.size(); ++r) {
        const auto& well = study.wells[r];
        const bool keep = which == SampleSelection::All ||
                          (which == SampleSelection::Qc && well.sample_type == SampleType::Qc) ||
                          (which == SampleSelection::Experimental &&
                           well.sample_type == SampleType::Experimental);
        if (!keep) continue;
        const auto& cell = study.intensities[r][column];
        series.values.push_back(cell ? *cell : missing_value());
        series.plate_of.push_back(well.plate);
        series.run_order.push_back(well.run_order);
    }
    return series;
}

std::string_view to_string(MissingPolicy policy) {
    switch (policy) {
        case MissingPolicy::Fail: return "fail";
        case MissingPolicy::Drop: return "drop";
        case MissingPolicy::PlateMeanImpute: return "impute";
    }
    return "fail";
}

MissingPolicy parse_missing_policy(std::string_view token) {
    const auto t = lower(csv::trim(token));
    if (t == "fail") return MissingPolicy::Fail;
    if (t == "drop") return MissingPolicy::Drop;
    if (t == "impute") return MissingPolicy::PlateMeanImpute;
    throw ParameterError("unknown missing policy '" + std::string(token) +
                         "' (expected fail, drop or impute)");
}

PreprocessResult preprocess(const MetaboliteSeries& series, MissingPolicy policy,
                            double outlier_sigma) {
    if (!(outlier_sigma > 0.0)) throw ParameterError("outlier_sigma must be positive");
    if (series.plate_of.size() != series.values.size() ||
        series.run_order.size() != series.values.size()) {
        throw ParameterError("series '" + series.name + "' has misaligned labels");
    }

    PreprocessResult result{series, {}};
    auto& out = result.series;
    auto& report = result.report;

    std::vector<int> missing_orders;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        if (std::isnan(out.values[i])) missing_orders.push_back(out.run_order[i]);
    }
    if (!missing_orders.empty()) {
        switch (policy) {
            case MissingPolicy::Fail:
                throw MissingDataError("metabolite '" + series.name +
                                       "' has missing values at run_order " +
                                       join_ints(missing_orders));
            case MissingPolicy::Drop: {
                MetaboliteSeries kept;
                kept.name = out.name;
                for (std::size_t i = 0; i < out.values.size(); ++i) {
                    if (std::isnan(out.values[i])) continue;
                    kept.values.push_back(out.values[i]);
                    kept.plate_of.push_back(out.plate_of[i]);
                    kept.run_order.push_back(out.run_order[i]);
                }
                report.dropped = missing_orders.size();
                out = std::move(kept);
                break;
            }
            case MissingPolicy::PlateMeanImpute: {
                for (const auto& group : partition_by_plate(out)) {
                    double sum = 0.0;
                    std::size_t n = 0;
                    for (auto i : group.indices) {
                        if (!std::isnan(out.values[i])) {
                            sum += out.values[i];
                            ++n;
                        }
                    }
                    if (n == 0) {
                        throw MissingDataError("metabolite '" + series.name + "': plate '" +
                                               group.plate +
                                               "' has no observed values to impute from");
                    }
                    for (auto i : group.indices) {
                        if (std::isnan(out.values[i])) {
                            out.values[i] = sum / static_cast<double>(n);
                            ++report.imputed;
                        }
                    }
                }
                break;
            }
        }
    }

    if (std::isinf(outlier_sigma)) return result;

    if (out.values.size() < 2) {
        throw DegenerateError("metabolite '" + series.name +
                              "' has fewer than two values; outlier rule undefined");
    }
    const double m = mean(out.values);
    const double sd = sample_sd(out.values);
    if (!(sd > 0.0)) {
        throw DegenerateError("metabolite '" + series.name +
                              "' has zero variance; outlier rule undefined");
    }
    report.lower_bound = m - outlier_sigma * sd;
    report.upper_bound = m + outlier_sigma * sd;
    for (auto& v : out.values) {
        if (std::abs(v - m) >= outlier_sigma * sd) {
            v = v > m ? report.upper_bound : report.lower_bound;
            ++report.winsorized;
        }
    }
    return result;
}

}  // namespace winnbeta
