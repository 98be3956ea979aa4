// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace winnbeta::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Reads a comma-separated file with an optional UTF-8 BOM, CRLF or LF line
/// endings and RFC 4180 double-quoted fields. Blank lines are skipped.
[[nodiscard]] Table read(const std::filesystem::path& path);
[[nodiscard]] Table parse(std::string_view text);

/// Quotes a field only when it contains a comma, quote or newline.
[[nodiscard]] std::string escape(std::string_view field);
[[nodiscard]] std::string join(const std::vector<std::string>& fields);

/// Shortest decimal representation that parses back to the same double.
[[nodiscard]] std::string format_double(double value);

/// Parses a decimal or scientific literal; empty (after trimming) is missing.
/// Throws IngestionError on anything else.
[[nodiscard]] std::optional<double> parse_cell(std::string_view text);

[[nodiscard]] std::string_view trim(std::string_view text);

}  // namespace winnbeta::csv
