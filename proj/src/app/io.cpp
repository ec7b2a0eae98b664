#include "ccm/app/io.hpp"

#include "ccm/error.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ccm::app {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return fields;
}

std::string_view unquote(std::string_view s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

/// Visits non-blank lines with their 1-based line number.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        const auto line = text.substr(start, end - start);
        if (!trim(line).empty()) {
            if (!fn(line_no, line)) {
                return;
            }
        }
        start = end + 1;
    }
}

bool parse_number(std::string_view cell, double& value) {
    if (cell.empty()) {
        return false;
    }
    if (cell.front() == '+') {
        cell.remove_prefix(1);
    }
    const auto* first = cell.data();
    const auto* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last;
}

template <typename Int>
bool parse_integer(std::string_view cell, Int& value) {
    const auto* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), last, value);
    return !cell.empty() && ec == std::errc() && ptr == last;
}

}  // namespace

std::pair<TimeSeries, TimeSeries> parse_csv(std::string_view text, const std::string& column_x,
                                            const std::string& column_y) {
    std::vector<std::string> header;
    std::size_t col_x = 0;
    std::size_t col_y = 0;
    std::vector<double> xs;
    std::vector<double> ys;
    bool have_header = false;

    for_each_line(text, [&](std::size_t row, std::string_view line) {
        const auto fields = split_fields(line);
        if (!have_header) {
            for (const auto f : fields) {
                header.emplace_back(unquote(f));
            }
            auto locate = [&](const std::string& name) {
                for (std::size_t i = 0; i < header.size(); ++i) {
                    if (header[i] == name) {
                        return i;
                    }
                }
                throw MissingColumn(name);
            };
            col_x = locate(column_x);
            col_y = locate(column_y);
            have_header = true;
            return true;
        }
        if (fields.size() != header.size()) {
            throw Error(Errc::RaggedRows, "row " + std::to_string(row) + " has " +
                                              std::to_string(fields.size()) + " fields, header has " +
                                              std::to_string(header.size()));
        }
        double vx = 0.0;
        double vy = 0.0;
        if (!parse_number(fields[col_x], vx)) {
            throw ParseError(row, col_x + 1, std::string(fields[col_x]));
        }
        if (!parse_number(fields[col_y], vy)) {
            throw ParseError(row, col_y + 1, std::string(fields[col_y]));
        }
        xs.push_back(vx);
        ys.push_back(vy);
        return true;
    });

    if (!have_header) {
        throw Error(Errc::ParseError, "input has no header row");
    }
    return {validate_series(std::move(xs), column_x), validate_series(std::move(ys), column_y)};
}

std::pair<TimeSeries, TimeSeries> ingest_csv(const std::filesystem::path& path,
                                             const std::string& column_x,
                                             const std::string& column_y) {
    return parse_csv(read_file(path), column_x, column_y);
}

std::string format_double(double value, int significant_digits) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                         std::chars_format::general, significant_digits);
    return std::string(buf.data(), ptr);
}

void write_skills_csv(std::ostream& out, std::span<const SkillRecord> records) {
    out << kSkillsHeader << '\n';
    for (const auto& r : records) {
        out << to_string(r.direction) << ',' << r.E << ',' << r.tau << ',' << r.L << ','
            << r.replicate << ',' << format_double(r.rho) << ',' << (r.degenerate ? 1 : 0) << '\n';
    }
}

void write_skills_csv(const std::filesystem::path& path, std::span<const SkillRecord> records) {
    std::ostringstream out;
    write_skills_csv(out, records);
    write_file(path, out.str());
}

std::vector<SkillRecord> parse_skills_csv(std::string_view text) {
    std::vector<SkillRecord> records;
    bool have_header = false;
    auto malformed = [](std::size_t row, const std::string& what) {
        return Error(Errc::MalformedSkillsFile, "row " + std::to_string(row) + ": " + what);
    };
    for_each_line(text, [&](std::size_t row, std::string_view line) {
        if (!have_header) {
            if (trim(line) != kSkillsHeader) {
                throw malformed(row, "expected header '" + std::string(kSkillsHeader) + "'");
            }
            have_header = true;
            return true;
        }
        const auto f = split_fields(line);
        if (f.size() != 7) {
            throw malformed(row, "expected 7 fields, got " + std::to_string(f.size()));
        }
        SkillRecord r;
        int degenerate = 0;
        try {
            r.direction = parse_direction(f[0]);
        } catch (const Error&) {
            throw malformed(row, "bad direction '" + std::string(f[0]) + "'");
        }
        if (!parse_integer(f[1], r.E) || !parse_integer(f[2], r.tau) || !parse_integer(f[3], r.L) ||
            !parse_integer(f[4], r.replicate) || !parse_number(f[5], r.rho) ||
            !parse_integer(f[6], degenerate) || (degenerate != 0 && degenerate != 1)) {
            throw malformed(row, "unparseable field");
        }
        if (!(r.rho >= -1.0 && r.rho <= 1.0)) {
            throw malformed(row, "rho outside [-1, 1]");
        }
        r.degenerate = degenerate == 1;
        records.push_back(r);
        return true;
    });
    if (!have_header) {
        throw Error(Errc::MalformedSkillsFile, "empty skills file");
    }
    if (records.empty()) {
        throw Error(Errc::MalformedSkillsFile, "skills file has no rows");
    }
    return records;
}

std::vector<SkillRecord> read_skills_csv(const std::filesystem::path& path) {
    return parse_skills_csv(read_file(path));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::IoError, "cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(Errc::IoError, "cannot open '" + path.string() + "' for writing");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
        throw Error(Errc::IoError, "write to '" + path.string() + "' failed");
    }
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
        throw Error(Errc::IoError, "SHA-256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        hex.push_back(kHex[digest[i] >> 4]);
        hex.push_back(kHex[digest[i] & 0x0f]);
    }
    return hex;
}

std::string file_sha256(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

std::vector<long long> parse_int_list(std::string_view text) {
    std::vector<long long> values;
    for (const auto field : split_fields(text)) {
        long long v = 0;
        if (!parse_integer(field, v)) {
            throw Error(Errc::InvalidArgument, "'" + std::string(text) +
                                                   "' is not a comma-separated integer list");
        }
        values.push_back(v);
    }
    return values;
}

}  // namespace ccm::app
