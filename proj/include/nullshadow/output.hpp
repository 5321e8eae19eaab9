#pragma once

// Machine-readable scenario output: a column table plus config echo and
// summary. CSV carries only the table (header line first); JSON carries
// everything. Floating values are written so they parse back bit-exactly.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace nullshadow {

inline constexpr const char* kVersion = NULLSHADOW_VERSION;

struct Column {
    std::string name;
    std::variant<std::vector<double>, std::vector<std::int64_t>, std::vector<std::string>> values;

    std::size_t size() const;
};

struct OutputRecord {
    std::string scenario;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::optional<std::uint64_t> seed;
    std::string version{kVersion};
    std::vector<Column> columns;
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
};

enum class Format { Csv, Json };

/// Shortest decimal that round-trips to the same double; "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double v);

/// RFC-4180 field quoting.
std::string csv_field(const std::string& raw);

void write_csv(std::ostream& os, const OutputRecord& rec);
void write_json(std::ostream& os, const OutputRecord& rec);
void write_record(std::ostream& os, const OutputRecord& rec, Format format);

}  // namespace nullshadow
