#pragma once

#include "ccm/sweep.hpp"
#include "ccm/timeseries.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ccm::app {

/// Reads two named numeric columns from a headered, comma-separated file.
/// Parsing is locale-independent. Errors: Error(IoError), MissingColumn,
/// Error(RaggedRows), ParseError(row, column) with 1-based rows counting the
/// header, plus the validate_series errors.
std::pair<TimeSeries, TimeSeries> ingest_csv(const std::filesystem::path& path,
                                             const std::string& column_x,
                                             const std::string& column_y);

/// Same, from text already in memory.
std::pair<TimeSeries, TimeSeries> parse_csv(std::string_view text, const std::string& column_x,
                                            const std::string& column_y);

inline constexpr std::string_view kSkillsHeader = "direction,E,tau,L,replicate,rho,degenerate";

/// rho is written with 17 significant digits so a re-read is bit-exact.
void write_skills_csv(std::ostream& out, std::span<const SkillRecord> records);
void write_skills_csv(const std::filesystem::path& path, std::span<const SkillRecord> records);

/// Throws Error(MalformedSkillsFile) on a bad header, a bad row, or no rows.
std::vector<SkillRecord> parse_skills_csv(std::string_view text);
std::vector<SkillRecord> read_skills_csv(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Lowercase hex SHA-256 of a byte string / of a file's contents.
std::string sha256_hex(std::string_view bytes);
std::string file_sha256(const std::filesystem::path& path);

/// Locale-independent %.Ng formatting; 17 digits round-trip any double.
std::string format_double(double value, int significant_digits = 17);

/// "1,2,4" -> {1, 2, 4}. Throws Error(InvalidArgument).
std::vector<long long> parse_int_list(std::string_view text);

}  // namespace ccm::app
