#include "nullshadow/output.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace nullshadow {

std::size_t Column::size() const {
    return std::visit([](const auto& v) { return v.size(); }, values);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
    return std::string(buf, ptr);
}

std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
    std::string out = "\"";
    for (char c : raw) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {

std::size_t row_count(const OutputRecord& rec) {
    if (rec.columns.empty()) return 0;
    const std::size_t n = rec.columns.front().size();
    for (const auto& c : rec.columns)
        if (c.size() != n) throw std::logic_error("column '" + c.name + "' has mismatched length");
    return n;
}

std::string cell(const Column& c, std::size_t row) {
    return std::visit(
        [row](const auto& v) -> std::string {
            using T = typename std::decay_t<decltype(v)>::value_type;
            if constexpr (std::is_same_v<T, double>)
                return format_double(v[row]);
            else if constexpr (std::is_same_v<T, std::int64_t>)
                return std::to_string(v[row]);
            else
                return csv_field(v[row]);
        },
        c.values);
}

nlohmann::ordered_json column_json(const Column& c) {
    return std::visit(
        [](const auto& v) {
            auto arr = nlohmann::ordered_json::array();
            for (const auto& x : v) {
                if constexpr (std::is_same_v<std::decay_t<decltype(x)>, double>) {
                    if (!std::isfinite(x)) {
                        arr.push_back(nullptr);
                        continue;
                    }
                }
                arr.push_back(x);
            }
            return arr;
        },
        c.values);
}

}  // namespace

void write_csv(std::ostream& os, const OutputRecord& rec) {
    const std::size_t rows = row_count(rec);
    for (std::size_t j = 0; j < rec.columns.size(); ++j) os << (j ? "," : "") << csv_field(rec.columns[j].name);
    os << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < rec.columns.size(); ++j) os << (j ? "," : "") << cell(rec.columns[j], r);
        os << '\n';
    }
}

void write_json(std::ostream& os, const OutputRecord& rec) {
    row_count(rec);
    nlohmann::ordered_json doc;
    doc["scenario"] = rec.scenario;
    doc["version"] = rec.version;
    doc["seed"] = rec.seed ? nlohmann::ordered_json(*rec.seed) : nlohmann::ordered_json(nullptr);
    doc["config"] = rec.config;
    auto names = nlohmann::ordered_json::array();
    auto data = nlohmann::ordered_json::object();
    for (const auto& c : rec.columns) {
        names.push_back(c.name);
        data[c.name] = column_json(c);
    }
    doc["columns"] = std::move(names);
    doc["data"] = std::move(data);
    doc["summary"] = rec.summary;
    os << doc.dump(2) << '\n';
}

void write_record(std::ostream& os, const OutputRecord& rec, Format format) {
    if (format == Format::Csv)
        write_csv(os, rec);
    else
        write_json(os, rec);
}

}  // namespace nullshadow
